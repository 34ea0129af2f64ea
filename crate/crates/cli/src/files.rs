use std::fs;
use std::io::Write;
use std::path::Path;

use ekrlab::setfam::SetFamilyJson;
use ekrlab::solver::RunInfo;
use ekrlab::vector::{VectorFamilyJson, VectorJson};
use ekrlab::{SetFamily, VectorFamily};
use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;

use crate::CliError;

/// On-disk family: either `vectors` or `sets` is present. Witnesses from a
/// search also carry the run statistics and the producing command.
#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<VectorJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunInfo>,
}

pub enum Family {
    Vectors(VectorFamily),
    Sets(SetFamily),
}

impl Family {
    pub fn len(&self) -> usize {
        match self {
            Family::Vectors(f) => f.len(),
            Family::Sets(f) => f.len(),
        }
    }
}

impl FamilyFile {
    pub fn vectors(f: &VectorFamily, source: String, run: Option<RunInfo>) -> Self {
        let j = f.to_json();
        FamilyFile { n: j.n, k: j.k, vectors: Some(j.vectors), sets: None, source: Some(source), run }
    }

    pub fn sets(f: &SetFamily, source: String, run: Option<RunInfo>) -> Self {
        let j = f.to_json();
        FamilyFile { n: j.n, k: j.k, vectors: None, sets: Some(j.sets), source: Some(source), run }
    }

    pub fn family(self) -> Result<Family, CliError> {
        match (self.vectors, self.sets) {
            (Some(vectors), None) => {
                let j = VectorFamilyJson { n: self.n, k: self.k, vectors };
                Ok(Family::Vectors(VectorFamily::from_json(&j)?))
            }
            (None, Some(sets)) => {
                let j = SetFamilyJson { n: self.n, k: self.k, sets };
                Ok(Family::Sets(SetFamily::from_json(&j)?))
            }
            _ => Err(CliError::Usage("family file needs exactly one of \"vectors\" or \"sets\"".into())),
        }
    }
}

pub fn load(path: &Path) -> Result<Family, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let file: FamilyFile =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    file.family()
}

/// Write through a temporary file in the target directory, then rename, so
/// readers never observe a partial file.
pub fn save(path: &Path, file: &FamilyFile) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
    serde_json::to_writer_pretty(&mut tmp, file).map_err(ekrlab::Error::from)?;
    tmp.write_all(b"\n").map_err(ekrlab::Error::from)?;
    tmp.persist(path).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}
