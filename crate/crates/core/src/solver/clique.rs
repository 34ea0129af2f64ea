//! Exact maximum clique by bitset branch and bound with a greedy colouring
//! bound. The root branches can be farmed out to a rayon pool; workers share
//! the incumbent size so pruning stays tight across threads.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::graph::BitGraph;
use crate::error::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(15 * 60);

const CHECK_EVERY: u64 = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads; `1` runs on the calling thread, `0` uses rayon's default.
    pub threads: usize,
    pub node_budget: u64,
    pub time_budget: Option<Duration>,
    /// Fix one member up to symmetry before searching. Only sound when the
    /// problem's symmetry group is transitive on the candidates.
    pub anchor: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            threads: 1,
            node_budget: DEFAULT_NODE_BUDGET,
            time_budget: Some(DEFAULT_TIME_BUDGET),
            anchor: false,
        }
    }
}

impl SearchOptions {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_node_budget(mut self, nodes: u64) -> Self {
        self.node_budget = nodes;
        self
    }

    pub fn with_time_budget(mut self, budget: Option<Duration>) -> Self {
        self.time_budget = budget;
        self
    }

    pub fn with_anchor(mut self, anchor: bool) -> Self {
        self.anchor = anchor;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueResult {
    /// Sorted vertex indices of the best clique found.
    pub vertices: Vec<usize>,
    /// False when a budget ran out before the search space was exhausted.
    pub optimal: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl CliqueResult {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

struct Shared {
    best: AtomicUsize,
    stop: AtomicBool,
    nodes: AtomicU64,
    node_budget: u64,
    deadline: Option<Instant>,
}

impl Shared {
    fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }
}

struct Worker<'a> {
    adj: &'a [Vec<u64>],
    shared: &'a Shared,
    clique: Vec<usize>,
    best: Vec<usize>,
    pending: u64,
    scratch: Scratch,
}

#[inline]
fn first_bit(set: &[u64]) -> Option<usize> {
    set.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

#[inline]
fn clear(set: &mut [u64], v: usize) {
    set[v / 64] &= !(1 << (v % 64));
}

/// Buffers reused across colourings so the hot path does not allocate.
#[derive(Default)]
struct Scratch {
    uncoloured: Vec<u64>,
    q: Vec<u64>,
    /// Classes below `kmin`, `words` entries each.
    low: Vec<u64>,
}

/// Greedy sequential colouring of `p`; returns the vertices whose colour is
/// at least `kmin`, in colour order, with their colours. Vertices that would
/// land at `kmin` or above are first offered a slot in a lower class.
fn colour(adj: &[Vec<u64>], p: &[u64], kmin: usize, buf: &mut Scratch) -> (Vec<usize>, Vec<usize>) {
    let words = p.len();
    buf.uncoloured.clear();
    buf.uncoloured.extend_from_slice(p);
    buf.q.clear();
    buf.q.resize(words, 0);
    buf.low.clear();
    let mut vs = Vec::new();
    let mut cs = Vec::new();
    let mut c = 0;
    while buf.uncoloured.iter().any(|&w| w != 0) {
        c += 1;
        buf.q.copy_from_slice(&buf.uncoloured);
        let base = buf.low.len();
        if c < kmin {
            buf.low.resize(base + words, 0);
        }
        while let Some(v) = first_bit(&buf.q) {
            clear(&mut buf.uncoloured, v);
            clear(&mut buf.q, v);
            for (qw, aw) in buf.q.iter_mut().zip(&adj[v]) {
                *qw &= !aw;
            }
            if c < kmin {
                set(&mut buf.low[base..], v);
            } else if !recolour(adj, &mut buf.low, words, v) {
                vs.push(v);
                cs.push(c);
            }
        }
    }
    (vs, cs)
}

#[inline]
fn set(bits: &mut [u64], v: usize) {
    bits[v / 64] |= 1 << (v % 64);
}

/// Try to place `v` in one of the `low` classes, possibly moving its single
/// conflicting neighbour `w` to a later class that `w` has no neighbours in.
fn recolour(adj: &[Vec<u64>], low: &mut [u64], words: usize, v: usize) -> bool {
    let classes = low.len() / words;
    let class = |k: usize| k * words..(k + 1) * words;
    for k1 in 0..classes {
        let Some(w) = single_conflict(&low[class(k1)], &adj[v]) else { continue };
        match w {
            None => {
                set(&mut low[class(k1)], v);
                return true;
            }
            Some(w) => {
                let free =
                    (k1 + 1..classes).find(|&k2| low[class(k2)].iter().zip(&adj[w]).all(|(cw, aw)| cw & aw == 0));
                if let Some(k2) = free {
                    clear(&mut low[class(k1)], w);
                    set(&mut low[class(k2)], w);
                    set(&mut low[class(k1)], v);
                    return true;
                }
            }
        }
    }
    false
}

/// `Some(None)` if `class ∩ row` is empty, `Some(Some(w))` if it is `{w}`,
/// `None` if it has two or more members.
#[inline]
fn single_conflict(class: &[u64], row: &[u64]) -> Option<Option<usize>> {
    let mut found = None;
    for (i, (cw, aw)) in class.iter().zip(row).enumerate() {
        let x = cw & aw;
        if x == 0 {
            continue;
        }
        if found.is_some() || x & (x - 1) != 0 {
            return None;
        }
        found = Some(i * 64 + x.trailing_zeros() as usize);
    }
    Some(found)
}

impl<'a> Worker<'a> {
    fn new(adj: &'a [Vec<u64>], shared: &'a Shared) -> Self {
        Worker { adj, shared, clique: Vec::new(), best: Vec::new(), pending: 0, scratch: Scratch::default() }
    }

    /// Count a node; returns true when the search must stop.
    fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending >= CHECK_EVERY {
            self.flush();
        }
        self.shared.stopped()
    }

    fn flush(&mut self) {
        let total = self.shared.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        let out_of_time = self.shared.deadline.is_some_and(|d| Instant::now() >= d);
        if total >= self.shared.node_budget || out_of_time {
            self.shared.stop.store(true, Ordering::Relaxed);
        }
    }

    fn record(&mut self) {
        let len = self.clique.len();
        if self.shared.best.fetch_max(len, Ordering::Relaxed) < len {
            self.best = self.clique.clone();
        }
    }

    fn expand(&mut self, mut p: Vec<u64>) {
        if self.tick() {
            return;
        }
        let best = self.shared.best.load(Ordering::Relaxed);
        let kmin = (best + 1).saturating_sub(self.clique.len()).max(1);
        let (vs, cs) = colour(self.adj, &p, kmin, &mut self.scratch);
        for idx in (0..vs.len()).rev() {
            if self.clique.len() + cs[idx] <= self.shared.best.load(Ordering::Relaxed) {
                return;
            }
            let v = vs[idx];
            self.clique.push(v);
            let next: Vec<u64> = p.iter().zip(&self.adj[v]).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                self.record();
            } else {
                self.expand(next);
            }
            self.clique.pop();
            clear(&mut p, v);
            if self.shared.stopped() {
                return;
            }
        }
    }
}

/// Degeneracy order: repeatedly peel a minimum-degree vertex (lowest index
/// on ties) and list the peeled vertices in reverse, so dense cores come
/// first.
fn degeneracy_order(g: &BitGraph) -> Vec<usize> {
    let n = g.order();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut gone = vec![false; n];
    let mut peeled = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !gone[v]).min_by_key(|&v| (deg[v], v)).expect("vertex left");
        gone[v] = true;
        peeled.push(v);
        for u in g.neighbors(v) {
            if !gone[u] {
                deg[u] -= 1;
            }
        }
    }
    peeled.reverse();
    peeled
}

/// Maximum clique of `g`.
pub fn max_clique(g: &BitGraph, opts: &SearchOptions) -> Result<CliqueResult> {
    max_clique_above(g, 0, opts)
}

/// Maximum clique of `g` among those with more than `floor` vertices. An
/// empty result means no such clique exists (or none was found in budget).
pub fn max_clique_above(g: &BitGraph, floor: usize, opts: &SearchOptions) -> Result<CliqueResult> {
    let start = Instant::now();
    let n = g.order();
    let order = degeneracy_order(g);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let words = g.words();
    let adj: Vec<Vec<u64>> = order
        .iter()
        .map(|&v| {
            let mut row = vec![0u64; words];
            for u in g.neighbors(v) {
                row[pos[u] / 64] |= 1 << (pos[u] % 64);
            }
            row
        })
        .collect();

    let shared = Shared {
        best: AtomicUsize::new(floor),
        stop: AtomicBool::new(false),
        nodes: AtomicU64::new(1),
        node_budget: opts.node_budget,
        deadline: opts.time_budget.map(|d| start + d),
    };

    let mut full = vec![0u64; words];
    for v in 0..n {
        full[v / 64] |= 1 << (v % 64);
    }
    let (vs, cs) = colour(&adj, &full, 1, &mut Scratch::default());

    // Root branch `idx` takes vs[idx] plus candidates from vs[..idx].
    let branch = |idx: usize| -> Vec<usize> {
        if shared.stopped() || cs[idx] <= shared.best.load(Ordering::Relaxed) {
            return Vec::new();
        }
        let v = vs[idx];
        let mut p = vec![0u64; words];
        for &u in &vs[..idx] {
            p[u / 64] |= 1 << (u % 64);
        }
        for (pw, aw) in p.iter_mut().zip(&adj[v]) {
            *pw &= aw;
        }
        let mut w = Worker::new(&adj, &shared);
        w.clique.push(v);
        if p.iter().all(|&x| x == 0) {
            w.record();
        } else {
            w.expand(p);
        }
        w.flush();
        w.best
    };

    let found: Vec<Vec<usize>> = if opts.threads == 1 {
        (0..vs.len()).rev().map(branch).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
        let idxs: Vec<usize> = (0..vs.len()).rev().collect();
        pool.install(|| idxs.par_iter().map(|&i| branch(i)).collect())
    };

    let vertices = found
        .into_iter()
        .map(|c| {
            let mut orig: Vec<usize> = c.into_iter().map(|v| order[v]).collect();
            orig.sort_unstable();
            orig
        })
        .filter(|c| c.len() > floor)
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
        .unwrap_or_default();
    debug_assert!(g.is_clique(&vertices));
    Ok(CliqueResult {
        vertices,
        optimal: !shared.stopped(),
        nodes: shared.nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    })
}

/// Maximum clique of `g` that contains `v`.
pub fn max_clique_containing(g: &BitGraph, v: usize, opts: &SearchOptions) -> Result<CliqueResult> {
    let nbrs: Vec<usize> = g.neighbors(v).collect();
    let sub = g.induced(&nbrs);
    let mut r = max_clique(&sub, opts)?;
    let mut vertices: Vec<usize> = r.vertices.iter().map(|&i| nbrs[i]).collect();
    vertices.push(v);
    vertices.sort_unstable();
    r.vertices = vertices;
    Ok(r)
}
