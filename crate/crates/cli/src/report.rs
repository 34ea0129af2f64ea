use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Tsv,
}

/// What a command did: ordered key/value fields, plus an optional table.
pub struct Report {
    command: String,
    fields: Vec<(String, Value)>,
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), fields: Vec::new(), columns: Vec::new(), rows: Vec::new() }
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn columns(&mut self, cols: &[&str]) -> &mut Self {
        self.columns = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, row: Vec<Value>) -> &mut Self {
        self.rows.push(row);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Tsv => self.tsv(),
            Format::Json => {
                let mut out = Map::new();
                out.insert("command".into(), Value::String(self.command.clone()));
                for (k, v) in &self.fields {
                    out.insert(k.clone(), v.clone());
                }
                if !self.columns.is_empty() {
                    let rows = self
                        .rows
                        .iter()
                        .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect()))
                        .collect();
                    out.insert("rows".into(), Value::Array(rows));
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(out)).expect("plain JSON values");
                s.push('\n');
                s
            }
        }
    }

    fn text(&self) -> String {
        let mut s = format!("$ ekrlab {}\n", self.command);
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.fields {
            s.push_str(&format!("{k:<width$}  {}\n", plain(v)));
        }
        if !self.columns.is_empty() {
            let cells: Vec<Vec<String>> = std::iter::once(self.columns.clone())
                .chain(self.rows.iter().map(|r| r.iter().map(plain).collect()))
                .collect();
            let widths: Vec<usize> = (0..self.columns.len())
                .map(|c| cells.iter().map(|r| r.get(c).map_or(0, String::len)).max().unwrap_or(0))
                .collect();
            for r in &cells {
                let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                s.push_str(line.join("  ").trim_end());
                s.push('\n');
            }
        }
        s
    }

    fn tsv(&self) -> String {
        let mut s = String::new();
        if self.columns.is_empty() {
            for (k, v) in &self.fields {
                s.push_str(&format!("{k}\t{}\n", plain(v)));
            }
        } else {
            s.push_str(&self.columns.join("\t"));
            s.push('\n');
            for r in &self.rows {
                let line: Vec<String> = r.iter().map(plain).collect();
                s.push_str(&line.join("\t"));
                s.push('\n');
            }
        }
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Exact counts go out as JSON numbers when they fit, strings otherwise.
pub fn count_value(c: &ekrlab::BigUint) -> Value {
    u64::try_from(c).map_or_else(|_| Value::String(c.to_string()), Value::from)
}
