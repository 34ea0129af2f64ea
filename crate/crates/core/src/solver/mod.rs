//! Exact extremal values by maximum clique search over compatibility graphs.

mod clique;
mod graph;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use clique::{
    max_clique, max_clique_above, max_clique_containing, CliqueResult, SearchOptions, DEFAULT_NODE_BUDGET,
    DEFAULT_TIME_BUDGET,
};
pub use graph::{BitGraph, CompatGraph, Predicate, Side, SidedSet, Vertex};

use crate::error::{Error, Result};
use crate::mask::{k_subsets, Mask};
use crate::num::binomial;
use crate::setfam::{is_cross_intersecting, is_t_intersecting, SetFamily};
use crate::vector::{enumerate_lk, CrossParams, Origin, ScalarParams, SignedVector, VectorFamily};

pub const MAX_T_INTERSECTING_UNIVERSE: usize = 10;
pub const MAX_T_INTERSECTING_VERTICES: u64 = 300;
pub const MAX_UNION_BOUNDED_N: usize = 10;
pub const MAX_CROSS_PAIR_SETS: u64 = 200;

/// Outcome of an exact search: the best value found, a witness attaining
/// it, and whether the search space was exhausted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult<W> {
    pub value: usize,
    pub witness: W,
    pub optimal: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Run statistics attached to persisted witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunInfo {
    pub nodes: u64,
    pub elapsed_ms: u64,
    pub optimal: bool,
}

impl<W> SearchResult<W> {
    pub fn run_info(&self) -> RunInfo {
        RunInfo { nodes: self.nodes, elapsed_ms: self.elapsed.as_millis() as u64, optimal: self.optimal }
    }
}

fn rejected(what: &str, detail: impl std::fmt::Display) -> Error {
    Error::WitnessRejected(format!("{what}: {detail}"))
}

fn vector_holds(predicate: Predicate, p: i64) -> bool {
    match predicate {
        Predicate::AtLeast(l) => p >= l,
        Predicate::NotEqual(q) => p != q,
        _ => false,
    }
}

/// Largest subfamily of `family` whose pairs (including `v = w`) all satisfy
/// `predicate`. Members that fail against themselves are dropped up front.
///
/// Forbidden-product search refuses shifted inputs: shifting preserves the
/// minimum product but can create a forbidden one.
pub fn max_subfamily(
    family: &VectorFamily,
    predicate: Predicate,
    opts: &SearchOptions,
) -> Result<SearchResult<VectorFamily>> {
    if opts.anchor {
        return Err(Error::invalid("anchoring is only sound on a complete L_k"));
    }
    search_vectors(family, predicate, opts, None)
}

fn search_vectors(
    family: &VectorFamily,
    predicate: Predicate,
    opts: &SearchOptions,
    anchor: Option<&SignedVector>,
) -> Result<SearchResult<VectorFamily>> {
    if !SignedVector::supports(&predicate) {
        return Err(Error::invalid(format!("predicate {predicate} does not apply to vectors")));
    }
    if matches!(predicate, Predicate::NotEqual(_)) && family.origin() == Origin::Shifted {
        return Err(Error::invalid(
            "forbidden-product search cannot run on a shifted family; shifting may create the forbidden product",
        ));
    }
    let start = Instant::now();
    let vertices: Vec<SignedVector> = family.iter().filter(|v| v.compatible(v, &predicate)).cloned().collect();
    let g = CompatGraph::build(vertices, predicate)?;
    let anchor_idx = match anchor {
        Some(a) => g.vertices().iter().position(|v| v == a),
        None => None,
    };
    let r = match anchor_idx {
        Some(i) => max_clique_containing(g.graph(), i, opts)?,
        None => max_clique(g.graph(), opts)?,
    };
    let witness =
        VectorFamily::from_vectors(family.n(), family.k(), r.vertices.iter().map(|&i| g.vertices()[i].clone()))?;
    if let Some((v, w, p)) = witness.find_pair(|p| vector_holds(predicate, p)) {
        return Err(rejected("vector witness", format!("<{v}, {w}> = {p} violates {predicate}")));
    }
    Ok(SearchResult { value: witness.len(), witness, optimal: r.optimal, nodes: r.nodes, elapsed: start.elapsed() })
}

fn empty_vector_result(n: usize, k: usize) -> SearchResult<VectorFamily> {
    SearchResult { value: 0, witness: VectorFamily::uniform(n, k), optimal: true, nodes: 0, elapsed: Duration::ZERO }
}

/// `F(n, k, l)`: the largest family in `L_k` with all pairwise products at
/// least `l`. For `l > k` no vector is compatible with itself and the
/// answer is 0.
///
/// With `opts.anchor` the all-positive vector on `[k]` is forced into the
/// family. Coordinate permutations and sign flips preserve every product and
/// act transitively on `L_k`, so any nonempty optimum has an image that
/// contains it.
pub fn exact_f(n: usize, k: usize, l: i64, opts: &SearchOptions) -> Result<SearchResult<VectorFamily>> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    if l > k as i64 {
        return Ok(empty_vector_result(n, k));
    }
    ScalarParams::new(n, k, l)?;
    let lk = enumerate_lk(n, k)?;
    let anchor = head_vector(n, k, opts)?;
    search_vectors(&lk, Predicate::AtLeast(l), opts, anchor.as_ref())
}

/// Largest family in `L_k` in which no pair has product exactly `-l-1`,
/// for `0 <= l < k`.
pub fn exact_f_forbidden(n: usize, k: usize, l: i64, opts: &SearchOptions) -> Result<SearchResult<VectorFamily>> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    if l < 0 || l >= k as i64 {
        return Err(Error::invalid(format!("forbidden mode needs 0 <= l < k, got k = {k}, l = {l}")));
    }
    let lk = enumerate_lk(n, k)?;
    let anchor = head_vector(n, k, opts)?;
    search_vectors(&lk, Predicate::NotEqual(-l - 1), opts, anchor.as_ref())
}

fn head_vector(n: usize, k: usize, opts: &SearchOptions) -> Result<Option<SignedVector>> {
    if !opts.anchor {
        return Ok(None);
    }
    let plus: Vec<usize> = (1..=k).collect();
    SignedVector::positive(n, &plus).map(Some)
}

fn check_sets(family: &SetFamily, predicate: Predicate) -> Result<()> {
    let sets = family.to_vec();
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i..] {
            if !a.compatible(b, &predicate) {
                return Err(rejected("set witness", format!("{a:?}, {b:?} violate {predicate}")));
            }
        }
    }
    Ok(())
}

fn search_sets(
    n: usize,
    k: Option<usize>,
    vertices: Vec<Mask>,
    predicate: Predicate,
    opts: &SearchOptions,
    start: Instant,
) -> Result<SearchResult<SetFamily>> {
    let vertices: Vec<Mask> = vertices.into_iter().filter(|v| v.compatible(v, &predicate)).collect();
    let g = CompatGraph::build(vertices, predicate)?;
    let r = if opts.anchor && !g.is_empty() {
        max_clique_containing(g.graph(), 0, opts)?
    } else {
        max_clique(g.graph(), opts)?
    };
    let witness = SetFamily::from_sets(n, k, r.vertices.iter().map(|&i| g.vertices()[i].clone()))?;
    check_sets(&witness, predicate)?;
    Ok(SearchResult { value: witness.len(), witness, optimal: r.optimal, nodes: r.nodes, elapsed: start.elapsed() })
}

/// Largest `t`-intersecting subfamily of `C([universe], s)`.
///
/// With `opts.anchor`, `[s]` is forced in (permutations are transitive on
/// `s`-sets and preserve intersection sizes).
pub fn exact_max_t_intersecting(
    universe: usize,
    s: usize,
    t: usize,
    opts: &SearchOptions,
) -> Result<SearchResult<SetFamily>> {
    if universe > MAX_T_INTERSECTING_UNIVERSE {
        return Err(Error::ResourceLimit {
            what: format!("t-intersecting search over [{universe}]"),
            cap: MAX_T_INTERSECTING_UNIVERSE as u64,
        });
    }
    if s > universe {
        return Err(Error::invalid(format!("need s <= universe, got s = {s}, universe = {universe}")));
    }
    let count: u64 = binomial(universe as i64, s as i64)?;
    if count > MAX_T_INTERSECTING_VERTICES {
        return Err(Error::ResourceLimit {
            what: format!("C({universe}, {s}) candidate sets"),
            cap: MAX_T_INTERSECTING_VERTICES,
        });
    }
    let start = Instant::now();
    search_sets(universe, Some(s), k_subsets(universe, s), Predicate::IntersectAtLeast(t), opts, start)
}

/// Largest family of subsets of `[n]` with every pairwise union of size at
/// most `s` (any set sizes).
pub fn exact_union_bounded(n: usize, s: usize, opts: &SearchOptions) -> Result<SearchResult<SetFamily>> {
    if n > MAX_UNION_BOUNDED_N {
        return Err(Error::ResourceLimit {
            what: format!("union-bounded search over 2^{n} sets"),
            cap: MAX_UNION_BOUNDED_N as u64,
        });
    }
    if opts.anchor {
        return Err(Error::invalid("anchoring is not supported for union-bounded search"));
    }
    let start = Instant::now();
    let all: Vec<Mask> = (0..=n).flat_map(|size| k_subsets(n, size)).collect();
    search_sets(n, None, all, Predicate::UnionAtMost(s), opts, start)
}

fn remaining(opts: &SearchOptions, start: Instant, nodes_used: u64) -> SearchOptions {
    let mut o = opts.clone();
    o.anchor = false;
    o.node_budget = opts.node_budget.saturating_sub(nodes_used).max(1);
    o.time_budget = opts.time_budget.map(|d| d.saturating_sub(start.elapsed()));
    o
}

/// Best non-empty pair `(A, B)` of `t`-intersecting families in
/// `C([n], k)` with `|A ∩ B| >= s` across, maximizing `|A| + |B|`.
///
/// Up to a permutation of `[n]`, `[k] ∈ B` and `A` contains
/// `[j] ∪ [k+1, 2k-j]` for `j = |A ∩ [k]|`. Each `j` gives a maximum clique
/// problem on the common neighbourhood of those two anchors.
pub fn cross_pair_search(
    n: usize,
    k: usize,
    s: usize,
    t: usize,
    opts: &SearchOptions,
) -> Result<(SearchResult<SetFamily>, SearchResult<SetFamily>)> {
    CrossParams::new(n, k, s, t)?;
    let count: u64 = binomial(n as i64, k as i64)?;
    if count > MAX_CROSS_PAIR_SETS {
        return Err(Error::ResourceLimit {
            what: format!("C({n}, {k}) candidate sets per side"),
            cap: MAX_CROSS_PAIR_SETS,
        });
    }
    let start = Instant::now();
    let sets = k_subsets(n, k);
    let m = sets.len();
    let vertices: Vec<SidedSet> = [Side::A, Side::B]
        .into_iter()
        .flat_map(|side| sets.iter().map(move |set| SidedSet { side, set: set.clone() }))
        .collect();
    let g = CompatGraph::build(vertices, Predicate::CrossPair { t, s })?;
    let head = Mask::full(k);
    let b0 = m + sets.iter().position(|x| *x == head).expect("[k] is a k-set");

    let mut best: Vec<usize> = Vec::new();
    let mut optimal = true;
    let mut nodes = 0u64;
    for j in (s..=k).rev() {
        if n + j < 2 * k {
            continue;
        }
        let anchor = Mask::range(0, j).union(&Mask::range(k, 2 * k - j));
        let a0 = sets.iter().position(|x| *x == anchor).expect("anchor is a k-set");
        let common: Vec<usize> = (0..g.len())
            .filter(|&v| v != a0 && v != b0 && g.graph().has_edge(v, a0) && g.graph().has_edge(v, b0))
            .collect();
        let sub = g.graph().induced(&common);
        let floor = best.len().saturating_sub(2);
        let r = max_clique_above(&sub, floor, &remaining(opts, start, nodes))?;
        optimal &= r.optimal;
        nodes += r.nodes;
        if best.is_empty() || 2 + r.size() > best.len() {
            best = r.vertices.iter().map(|&i| common[i]).chain([a0, b0]).collect();
        }
    }

    let pick = |side: Side| -> Result<SetFamily> {
        SetFamily::from_sets(
            n,
            Some(k),
            best.iter().map(|&i| &g.vertices()[i]).filter(|v| v.side == side).map(|v| v.set.clone()),
        )
    };
    let (a, b) = (pick(Side::A)?, pick(Side::B)?);
    if a.is_empty() || b.is_empty() {
        return Err(rejected("cross pair", "empty side"));
    }
    if !is_t_intersecting(&a, t) || !is_t_intersecting(&b, t) {
        return Err(rejected("cross pair", format!("a side is not {t}-intersecting")));
    }
    let cross = is_cross_intersecting(&a, &b, s)?;
    if !cross.holds {
        return Err(rejected("cross pair", format!("not {s}-cross-intersecting: {:?}", cross.violation)));
    }
    let elapsed = start.elapsed();
    let wrap = |f: SetFamily| SearchResult { value: f.len(), witness: f, optimal, nodes, elapsed };
    Ok((wrap(a), wrap(b)))
}
