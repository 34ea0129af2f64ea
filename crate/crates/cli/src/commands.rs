use std::path::{Path, PathBuf};

use clap::Subcommand;
use ekrlab::bounds::applicable_formulas;
use ekrlab::constructions::{
    ak_family, construct_u6, construct_vn, cross_pair, katona_set_family, katona_vector_family, star_vector_family,
};
use ekrlab::setfam::{is_cross_intersecting, t_violation};
use ekrlab::shifting::{make_shifted_traced, potential};
use ekrlab::vector::enumerate_lk;
use ekrlab::{
    exact_f, exact_f_forbidden, formula_f_exact, BigUint, Confidence, ExactBound, Mask, SetFamily, SignedVector,
    VectorFamily,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::files::{self, Family, FamilyFile};
use crate::report::{count_value, Report};
use crate::{CliError, Mode, SearchFlags, Table, EXIT_FAILED, EXIT_OK, EXIT_TRUNCATED};

type Outcome = Result<(Report, u8), CliError>;

fn set_text(m: &Mask) -> String {
    let items: Vec<String> = m.to_one_based().iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn bound_fields(report: &mut Report, bound: Option<&ExactBound>) {
    match bound {
        Some(b) => {
            report
                .field("formula", count_value(&b.value))
                .field("provenance", b.provenance.to_string())
                .field("confidence", b.confidence.to_string());
        }
        None => {
            report.field("formula", "no closed form");
        }
    }
}

pub fn exact(
    cmd: String,
    n: usize,
    k: usize,
    l: i64,
    mode: Mode,
    witness: Option<&Path>,
    search: &SearchFlags,
) -> Outcome {
    let opts = search.options();
    let r = match mode {
        Mode::Atleast => exact_f(n, k, l, &opts)?,
        Mode::Forbid => exact_f_forbidden(n, k, l, &opts)?,
    };
    let mut report = Report::new(cmd.clone());
    let problem = match mode {
        Mode::Atleast => format!("F({n},{k},{l})"),
        Mode::Forbid => format!("max |W| in L_{k}({n}) avoiding product {}", -l - 1),
    };
    report
        .field("problem", problem)
        .field("value", r.value)
        .field("status", if r.optimal { "optimal" } else { "truncated" })
        .field("optimal", r.optimal)
        .field("nodes", r.nodes)
        .field("elapsed_ms", r.elapsed.as_millis() as u64)
        .field("threads", search.threads)
        .field("anchor", search.anchor);
    if mode == Mode::Atleast && (-(k as i64)..=k as i64).contains(&l) {
        bound_fields(&mut report, formula_f_exact(n, k, l)?.as_ref());
    }
    if let Some(path) = witness {
        files::save(path, &FamilyFile::vectors(&r.witness, cmd, Some(r.run_info())))?;
        report.field("witness", path.display().to_string());
    }
    Ok((report, if r.optimal { EXIT_OK } else { EXIT_TRUNCATED }))
}

pub fn formula(cmd: String, n: usize, k: usize, l: i64) -> Outcome {
    let all: Vec<ExactBound> = applicable_formulas(n, k, l)?;
    let mut report = Report::new(cmd);
    report.field("problem", format!("F({n},{k},{l})"));
    bound_fields(&mut report, all.first());
    if all.len() > 1 {
        let rest: Vec<String> =
            all[1..].iter().map(|b| format!("{} ({}, {})", b.value, b.provenance, b.confidence)).collect();
        report.field("also", rest.join("; "));
    }
    Ok((report, EXIT_OK))
}

#[derive(Debug, Subcommand)]
pub enum Construction {
    /// The 21-vector non-negative family over [6].
    U6,
    /// The non-negative weight-3 family V(n).
    Vn {
        #[arg(short)]
        n: usize,
    },
    /// Non-negative weight-k vectors that are +1 on [l].
    Star {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        l: usize,
    },
    /// Bounded sign patterns on every k-support; avoids product -l-1.
    Katona {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        l: usize,
    },
    /// Extremal subsets of [n] with pairwise unions of size at most s.
    KatonaSets {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        s: usize,
        /// For odd s, the coordinate allowed to fall outside the bound.
        #[arg(short)]
        j: Option<usize>,
    },
    /// The t-intersecting family A_i(k, s, t) of s-subsets of [k].
    Ak {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        s: usize,
        #[arg(short)]
        t: usize,
        #[arg(short)]
        i: usize,
    },
    /// The cross-intersecting pair (A_i, B_i) of k-subsets of [n].
    Crosspair {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        s: usize,
        #[arg(short)]
        t: usize,
        #[arg(short)]
        i: usize,
    },
}

/// One named property check with its outcome.
struct Check {
    name: String,
    violation: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, violation: Option<String>) -> Self {
        Check { name: name.into(), violation }
    }
}

fn min_product_check(f: &VectorFamily, l: i64) -> Check {
    let bad = f.find_pair(|p| p >= l).map(|(v, w, p)| format!("<{v}> . <{w}> = {p}"));
    Check::new(format!("min product >= {l}"), bad)
}

fn forbid_check(f: &VectorFamily, p: i64) -> Check {
    let bad = f.find_pair(|q| q != p).map(|(v, w, q)| format!("<{v}> . <{w}> = {q}"));
    Check::new(format!("no product = {p}"), bad)
}

fn t_check(f: &SetFamily, t: usize, side: &str) -> Check {
    let bad = t_violation(f, t)
        .map(|(a, b)| format!("{} and {} meet in {}", set_text(&a), set_text(&b), a.intersection_len(&b)));
    Check::new(format!("{side}{t}-intersecting"), bad)
}

fn union_check(f: &SetFamily, s: usize) -> Check {
    let sets = f.to_vec();
    let bad = sets.iter().enumerate().find_map(|(i, a)| {
        sets[i..]
            .iter()
            .find(|b| a.union_len(b) > s)
            .map(|b| format!("{} and {} have union {}", set_text(a), set_text(b), a.union_len(b)))
    });
    Check::new(format!("unions <= {s}"), bad)
}

fn cross_check(a: &SetFamily, b: &SetFamily, s: usize) -> Result<Check, CliError> {
    let r = is_cross_intersecting(a, b, s)?;
    let bad =
        r.violation.map(|(x, y)| format!("{} and {} meet in {}", set_text(&x), set_text(&y), x.intersection_len(&y)));
    let name = if r.vacuous { format!("cross {s}-intersecting (vacuous)") } else { format!("cross {s}-intersecting") };
    Ok(Check::new(name, bad))
}

fn check_fields(report: &mut Report, checks: &[Check]) -> u8 {
    let mut code = EXIT_OK;
    for c in checks {
        match &c.violation {
            None => report.field(&c.name, "pass"),
            Some(v) => {
                code = EXIT_FAILED;
                report.field(&c.name, format!("FAIL: {v}"))
            }
        };
    }
    report.field("valid", code == EXIT_OK);
    code
}

pub fn construct(cmd: String, which: Construction, out: Option<&Path>, out_b: Option<&Path>) -> Outcome {
    let mut report = Report::new(cmd.clone());
    let mut checks = Vec::new();
    let mut saved = Vec::new();
    let mut vectors = |report: &mut Report, name: String, f: VectorFamily, checks: &mut Vec<Check>, check: Check| {
        report.field("family", name).field("size", f.len());
        checks.push(check);
        if let Some(p) = out {
            saved.push((p.to_path_buf(), FamilyFile::vectors(&f, cmd.clone(), None)));
        }
    };
    match which {
        Construction::U6 => {
            let f = construct_u6();
            let c = min_product_check(&f, 0);
            vectors(&mut report, "U6".into(), f, &mut checks, c);
        }
        Construction::Vn { n } => {
            let f = construct_vn(n)?;
            let c = min_product_check(&f, 0);
            vectors(&mut report, format!("V({n})"), f, &mut checks, c);
        }
        Construction::Star { n, k, l } => {
            let f = star_vector_family(n, k, l)?;
            let c = min_product_check(&f, l as i64);
            vectors(&mut report, format!("star({n},{k},{l})"), f, &mut checks, c);
        }
        Construction::Katona { n, k, l } => {
            let f = katona_vector_family(n, k, l)?;
            let c = forbid_check(&f, -(l as i64) - 1);
            vectors(&mut report, format!("katona({n},{k},{l})"), f, &mut checks, c);
        }
        Construction::KatonaSets { n, s, j } => {
            let f = katona_set_family(n, s, j)?;
            report.field("family", format!("katona-sets({n},{s})")).field("size", f.len());
            checks.push(union_check(&f, s));
            if let Some(p) = out {
                saved.push((p.to_path_buf(), FamilyFile::sets(&f, cmd.clone(), None)));
            }
        }
        Construction::Ak { k, s, t, i } => {
            let f = ak_family(k, s, t, i)?;
            report.field("family", format!("A_{i}({k},{s},{t})")).field("size", f.len());
            checks.push(t_check(&f, t, ""));
            if let Some(p) = out {
                saved.push((p.to_path_buf(), FamilyFile::sets(&f, cmd.clone(), None)));
            }
        }
        Construction::Crosspair { n, k, s, t, i } => {
            let (a, b) = cross_pair(n, k, s, t, i)?;
            report
                .field("family", format!("cross pair {i} over C([{n}],{k})"))
                .field("size_a", a.len())
                .field("size_b", b.len())
                .field("total", a.len() + b.len());
            checks.push(t_check(&a, t, "A "));
            checks.push(t_check(&b, t, "B "));
            checks.push(cross_check(&a, &b, s)?);
            if let Some(p) = out {
                saved.push((p.to_path_buf(), FamilyFile::sets(&a, cmd.clone(), None)));
            }
            if let Some(p) = out_b {
                saved.push((p.to_path_buf(), FamilyFile::sets(&b, cmd.clone(), None)));
            }
        }
    }
    let code = check_fields(&mut report, &checks);
    for (path, file) in &saved {
        files::save(path, file)?;
        report.field("wrote", path.display().to_string());
    }
    Ok((report, code))
}

pub struct Checks {
    pub min_product: Option<i64>,
    pub forbid_product: Option<i64>,
    pub t_intersecting: Option<usize>,
    pub union_at_most: Option<usize>,
    pub cross: Option<PathBuf>,
    pub s: Option<usize>,
}

pub fn verify(cmd: String, file: &Path, want: &Checks) -> Outcome {
    let family = files::load(file)?;
    let mut report = Report::new(cmd);
    report.field("file", file.display().to_string()).field("size", family.len());
    let mut checks = Vec::new();
    match &family {
        Family::Vectors(f) => {
            if want.t_intersecting.is_some() || want.union_at_most.is_some() || want.cross.is_some() {
                return Err(CliError::Usage("set checks requested on a vector family".into()));
            }
            if let Some(l) = want.min_product {
                checks.push(min_product_check(f, l));
            }
            if let Some(p) = want.forbid_product {
                checks.push(forbid_check(f, p));
            }
        }
        Family::Sets(f) => {
            if want.min_product.is_some() || want.forbid_product.is_some() {
                return Err(CliError::Usage("product checks requested on a set family".into()));
            }
            if let Some(t) = want.t_intersecting {
                checks.push(t_check(f, t, ""));
            }
            if let Some(s) = want.union_at_most {
                checks.push(union_check(f, s));
            }
            if let Some(other) = &want.cross {
                let Family::Sets(g) = files::load(other)? else {
                    return Err(CliError::Usage(format!("{} is not a set family", other.display())));
                };
                checks.push(cross_check(f, &g, want.s.expect("clap enforces --s with --cross"))?);
            }
        }
    }
    if checks.is_empty() {
        return Err(CliError::Usage("nothing to verify: pass at least one property flag".into()));
    }
    let code = check_fields(&mut report, &checks);
    Ok((report, code))
}

/// First clause that is not merely asymptotic.
fn reference_bound(n: usize, k: usize, l: i64) -> Result<Option<ExactBound>, CliError> {
    Ok(applicable_formulas::<BigUint>(n, k, l)?.into_iter().find(|b| b.confidence != Confidence::Asymptotic))
}

fn closed_form_cells() -> Vec<(usize, usize, i64)> {
    let mut cells = vec![(3, 2, 0)];
    for n in 2..=6usize {
        for k in 2..=n.min(4) {
            let ki = k as i64;
            cells.extend([(n, k, -ki + 1), (n, k, ki - 1), (n, k, ki - 2)]);
            if n == k {
                cells.extend((-ki..=ki).map(|l| (n, k, l)));
            }
        }
    }
    cells.sort_unstable();
    cells.dedup();
    cells
}

pub fn table(cmd: String, name: Table, search: &SearchFlags) -> Outcome {
    let opts = search.options();
    let cells: Vec<(usize, usize, i64)> = match name {
        Table::WeightThree => (3..=7).map(|n| (n, 3, 0)).collect(),
        Table::ClosedForms => closed_form_cells(),
    };
    let mut report = Report::new(cmd);
    report.columns(&["n", "k", "l", "search", "optimal", "formula", "provenance", "confidence", "mismatch"]);
    let (mut mismatches, mut truncated) = (0, 0);
    for (n, k, l) in cells {
        let Some(bound) = reference_bound(n, k, l)? else { continue };
        let r = exact_f(n, k, l, &opts)?;
        let found = BigUint::from(r.value);
        let mismatch = r.optimal
            && match bound.confidence {
                Confidence::LowerBound => found < bound.value,
                _ => found != bound.value,
            };
        mismatches += mismatch as usize;
        truncated += !r.optimal as usize;
        report.row(vec![
            n.into(),
            k.into(),
            l.into(),
            r.value.into(),
            r.optimal.into(),
            count_value(&bound.value),
            bound.provenance.to_string().into(),
            bound.confidence.to_string().into(),
            Value::from(mismatch as u8),
        ]);
    }
    report.field("mismatches", mismatches).field("truncated", truncated);
    let code = if mismatches > 0 {
        EXIT_FAILED
    } else if truncated > 0 {
        EXIT_TRUNCATED
    } else {
        EXIT_OK
    };
    Ok((report, code))
}

#[allow(clippy::too_many_arguments)]
pub fn sample(
    cmd: String,
    n: usize,
    k: usize,
    density: f64,
    nonnegative: bool,
    shift: bool,
    seed: u64,
    out: Option<&Path>,
) -> Outcome {
    if !(0.0..=1.0).contains(&density) {
        return Err(CliError::Usage(format!("density must lie in [0, 1], got {density}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = enumerate_lk(n, k)?.to_vec();
    pool.shuffle(&mut rng);
    let mut picked: Vec<SignedVector> = Vec::new();
    for v in pool {
        let keep = if nonnegative {
            picked.iter().all(|w| w.scalar_product(&v).is_ok_and(|p| p >= 0))
        } else {
            rng.gen_bool(density)
        };
        if keep {
            picked.push(v);
        }
    }
    let mut family = VectorFamily::from_vectors(n, Some(k), picked)?;
    let mut report = Report::new(cmd.clone());
    report
        .field("seed", seed)
        .field("size", family.len())
        .field("min_product", family.min_scalar_product().map_or(Value::Null, Value::from));
    if shift {
        let (shifted, trace) = make_shifted_traced(&family);
        report
            .field("shifts", trace.steps.len())
            .field("potential_before", trace.initial_potential)
            .field("potential_after", potential(&shifted))
            .field("shifted_min_product", shifted.min_scalar_product().map_or(Value::Null, Value::from));
        family = shifted;
    }
    if let Some(p) = out {
        files::save(p, &FamilyFile::vectors(&family, cmd, None))?;
        report.field("wrote", p.display().to_string());
    }
    Ok((report, EXIT_OK))
}
