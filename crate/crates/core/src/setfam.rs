//! Families of subsets of `[n]`, their intersection predicates, and the
//! kernel machinery: links `F(T)`, kernels (links holding `k+1` pairwise
//! disjoint members), and the sunflower pigeonhole pick.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::{k_subsets, Mask};

/// Default node budget for the disjoint-members search behind [`is_kernel`].
pub const DEFAULT_MATCHING_BUDGET: u64 = 10_000_000;

#[derive(Clone, PartialEq, Eq)]
pub struct SetFamily {
    n: usize,
    k: Option<usize>,
    members: BTreeSet<Mask>,
}

impl SetFamily {
    pub fn new(n: usize) -> Self {
        SetFamily { n, k: None, members: BTreeSet::new() }
    }

    pub fn uniform(n: usize, k: usize) -> Self {
        SetFamily { k: Some(k), ..Self::new(n) }
    }

    pub fn from_sets<I: IntoIterator<Item = Mask>>(n: usize, k: Option<usize>, sets: I) -> Result<Self> {
        let mut fam = SetFamily { k, ..Self::new(n) };
        for s in sets {
            fam.insert(s)?;
        }
        Ok(fam)
    }

    /// Build from 1-based index lists.
    pub fn from_one_based(n: usize, k: Option<usize>, sets: &[Vec<usize>]) -> Result<Self> {
        let mut fam = SetFamily { k, ..Self::new(n) };
        for set in sets {
            let mut m = Mask::empty();
            for &i in set {
                if i == 0 || i > n {
                    return Err(Error::OutOfRange { index: i, n });
                }
                m.insert(i - 1);
            }
            fam.insert(m)?;
        }
        Ok(fam)
    }

    /// All `k`-subsets of `[n]`, colex order.
    pub fn complete(n: usize, k: usize) -> Self {
        SetFamily { n, k: Some(k), members: k_subsets(n, k).into_iter().collect() }
    }

    /// Insert a member; duplicates are a no-op.
    pub fn insert(&mut self, set: Mask) -> Result<bool> {
        if let Some(m) = set.last() {
            if m >= self.n {
                return Err(Error::OutOfRange { index: m + 1, n: self.n });
            }
        }
        if let Some(k) = self.k {
            if set.len() != k {
                return Err(Error::invalid(format!("set {set:?} has {} elements in a {k}-uniform family", set.len())));
            }
        }
        Ok(self.members.insert(set))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: &Mask) -> bool {
        self.members.contains(set)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Mask> {
        self.members.iter()
    }

    pub fn to_vec(&self) -> Vec<Mask> {
        self.members.iter().cloned().collect()
    }

    /// The common member size, if the family is uniform in fact (declared or not).
    pub fn uniform_size(&self) -> Option<usize> {
        self.k.or_else(|| {
            let mut sizes = self.members.iter().map(Mask::len);
            let first = sizes.next()?;
            sizes.all(|s| s == first).then_some(first)
        })
    }

    pub fn to_json(&self) -> SetFamilyJson {
        SetFamilyJson { n: self.n, k: self.k, sets: self.members.iter().map(Mask::to_one_based).collect() }
    }

    pub fn from_json(j: &SetFamilyJson) -> Result<Self> {
        Self::from_one_based(j.n, j.k, &j.sets)
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a SetFamily {
    type Item = &'a Mask;
    type IntoIter = std::collections::btree_set::Iter<'a, Mask>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetFamilyJson {
    pub n: usize,
    #[serde(default)]
    pub k: Option<usize>,
    pub sets: Vec<Vec<usize>>,
}

/// Every two members (a member with itself included) share at least `t` elements.
pub fn is_t_intersecting(f: &SetFamily, t: usize) -> bool {
    t_violation(f, t).is_none()
}

/// First pair meeting in fewer than `t` elements.
pub fn t_violation(f: &SetFamily, t: usize) -> Option<(Mask, Mask)> {
    let m: Vec<&Mask> = f.members.iter().collect();
    for (i, a) in m.iter().enumerate() {
        for b in &m[i..] {
            if a.intersection_len(b) < t {
                return Some(((*a).clone(), (*b).clone()));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossReport {
    pub holds: bool,
    /// One side is empty, so `holds` is true for lack of pairs.
    pub vacuous: bool,
    pub violation: Option<(Mask, Mask)>,
}

/// Every `A ∈ a` and `B ∈ b` share at least `s` elements.
pub fn is_cross_intersecting(a: &SetFamily, b: &SetFamily, s: usize) -> Result<CrossReport> {
    if a.n != b.n {
        return Err(Error::invalid(format!("cross check between families over [{}] and [{}]", a.n, b.n)));
    }
    let violation = a.iter().find_map(|x| b.iter().find(|y| x.intersection_len(y) < s).map(|y| (x.clone(), y.clone())));
    Ok(CrossReport { holds: violation.is_none(), vacuous: a.is_empty() || b.is_empty(), violation })
}

/// `F(T) = {A \ T : A ∈ F, T ⊆ A}`.
pub fn family_link(f: &SetFamily, t: &Mask) -> SetFamily {
    let k = f.k.map(|k| k.saturating_sub(t.len()));
    SetFamily { n: f.n, k, members: f.members.iter().filter(|a| t.is_subset(a)).map(|a| a.difference(t)).collect() }
}

fn kernel_shape(f: &SetFamily, t: &Mask) -> Result<usize> {
    let k = f.uniform_size().ok_or_else(|| Error::invalid("kernel test needs a uniform family"))?;
    if t.len() >= k {
        return Err(Error::invalid(format!("kernel candidate has {} elements, needs fewer than k = {k}", t.len())));
    }
    Ok(k)
}

/// Whether the link `F(T)` holds `k + 1` pairwise disjoint members, where
/// `k` is the member size of `F`.
pub fn is_kernel(f: &SetFamily, t: &Mask) -> Result<bool> {
    is_kernel_with_budget(f, t, DEFAULT_MATCHING_BUDGET)
}

pub fn is_kernel_with_budget(f: &SetFamily, t: &Mask, budget: u64) -> Result<bool> {
    let k = kernel_shape(f, t)?;
    let link = family_link(f, t);
    Ok(disjoint_members(&link.to_vec(), k + 1, budget)?.is_some())
}

/// Find `want` pairwise disjoint members of `sets` by exact backtracking.
///
/// Members are tried in order of their minimum element; a branch is cut when
/// the members left cannot supply the missing count, or when their union is
/// too small to hold that many disjoint sets.
pub fn disjoint_members(sets: &[Mask], want: usize, budget: u64) -> Result<Option<Vec<Mask>>> {
    if want == 0 {
        return Ok(Some(Vec::new()));
    }
    if sets.len() < want {
        return Ok(None);
    }
    let mut order: Vec<Mask> = sets.to_vec();
    order.sort_by_key(|m| (m.first(), m.clone()));
    let min_size = order.iter().map(Mask::len).min().unwrap_or(0);
    let mut chosen = Vec::with_capacity(want);
    let mut nodes = 0u64;
    let found = matching_rec(&order, 0, &Mask::empty(), want, min_size, &mut chosen, &mut nodes, budget)?;
    Ok(found.then_some(chosen))
}

#[allow(clippy::too_many_arguments)]
fn matching_rec(
    order: &[Mask],
    start: usize,
    used: &Mask,
    want: usize,
    min_size: usize,
    chosen: &mut Vec<Mask>,
    nodes: &mut u64,
    budget: u64,
) -> Result<bool> {
    if chosen.len() == want {
        return Ok(true);
    }
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::ResourceLimit { what: "disjoint-member search nodes".into(), cap: budget });
    }
    let missing = want - chosen.len();
    let rest: Vec<usize> = (start..order.len()).filter(|&i| order[i].is_disjoint(used)).collect();
    if rest.len() < missing {
        return Ok(false);
    }
    let free = rest.iter().fold(Mask::empty(), |acc, &i| acc.union(&order[i]));
    if free.len() < missing * min_size {
        return Ok(false);
    }
    for (pos, &i) in rest.iter().enumerate() {
        if rest.len() - pos < missing {
            break;
        }
        chosen.push(order[i].clone());
        if matching_rec(order, i + 1, &used.union(&order[i]), want, min_size, chosen, nodes, budget)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// All `s`-sets `T ⊆ [n]` that are kernels of `f`, in colex order.
pub fn find_kernels(f: &SetFamily, s: usize) -> Result<SetFamily> {
    find_kernels_within(f, s, None)
}

/// As [`find_kernels`], optionally scanning only `T ⊆ within`. Candidates
/// are tested in parallel; output order does not depend on scheduling.
pub fn find_kernels_within(f: &SetFamily, s: usize, within: Option<&Mask>) -> Result<SetFamily> {
    let mut out = SetFamily::uniform(f.n, s);
    if f.is_empty() {
        return Ok(out);
    }
    let k = f.uniform_size().ok_or_else(|| Error::invalid("kernel scan needs a uniform family"))?;
    if s >= k {
        return Err(Error::invalid(format!("kernel size s = {s} must be below k = {k}")));
    }
    let candidates: Vec<Mask> = match within {
        Some(w) => {
            let elems: Vec<usize> = w.iter().collect();
            k_subsets(elems.len(), s).iter().map(|m| m.map(|i| elems[i])).collect()
        }
        None => k_subsets(f.n, s),
    };
    let hits: Vec<Option<Mask>> =
        candidates.into_par_iter().map(|t| Ok(is_kernel(f, &t)?.then_some(t))).collect::<Result<_>>()?;
    for t in hits.into_iter().flatten() {
        out.insert(t)?;
    }
    Ok(out)
}

/// Given a sunflower `C_0, .., C_m` (all pairwise intersections equal the
/// core `T`, `m >= |D|`) and a set `D`, return an `i` with `D ∩ C_i = D ∩ T`.
/// The petals `C_i \ T` are disjoint, so `D` can meet at most `|D|` of them.
pub fn sunflower_free_pick(petals: &[Mask], d: &Mask) -> Result<usize> {
    if petals.len() < 2 {
        return Err(Error::invalid("a sunflower needs at least two sets"));
    }
    let core = petals[0].intersection(&petals[1]);
    for (i, a) in petals.iter().enumerate() {
        for b in &petals[i + 1..] {
            if a.intersection(b) != core {
                return Err(Error::invalid("sets do not form a sunflower (pairwise intersections differ)"));
            }
        }
    }
    if petals.len() < d.len() + 1 {
        return Err(Error::invalid(format!("{} petals cannot guarantee a miss for a {}-set", petals.len(), d.len())));
    }
    let target = d.intersection(&core);
    petals
        .iter()
        .position(|c| d.intersection(c) == target)
        .ok_or_else(|| unreachable!("pigeonhole: D meets at most |D| disjoint petal parts"))
}

/// Check a matching of triples `D` to pairs `(b, c)`, `b < c`: every row has
/// `D ∩ {b, c} = {c}`, and no triple or pair repeats.
pub fn verify_pair_matching(rows: &[(Mask, Mask)]) -> bool {
    let mut triples = BTreeSet::new();
    let mut pairs = BTreeSet::new();
    rows.iter().all(|(d, pair)| {
        let row_ok = pair.len() == 2 && d.intersection(pair) == Mask::singleton(pair.last().unwrap());
        row_ok && triples.insert(d.clone()) && pairs.insert(pair.clone())
    })
}

/// The nine-row matching from `{D ∈ C([2,6], 3) : D ≠ (2,3,4)}` into the
/// pairs of `[2,6]`, as 1-based `(triple, pair)` rows. Together with `u(2,3,4)`
/// it caps the mixed part of a shifted weight-3 family over `[6]` at 11.
pub const WEIGHT_THREE_N6_MATCHING: [([usize; 3], [usize; 2]); 9] = [
    ([2, 3, 5], [4, 5]),
    ([2, 4, 5], [3, 5]),
    ([2, 3, 6], [4, 6]),
    ([2, 4, 6], [5, 6]),
    ([2, 5, 6], [3, 6]),
    ([3, 4, 5], [2, 3]),
    ([3, 4, 6], [2, 4]),
    ([3, 5, 6], [2, 5]),
    ([4, 5, 6], [2, 6]),
];

pub fn weight_three_n6_matching() -> Vec<(Mask, Mask)> {
    WEIGHT_THREE_N6_MATCHING
        .iter()
        .map(|(d, p)| (Mask::from_indices(d.iter().map(|i| i - 1)), Mask::from_indices(p.iter().map(|i| i - 1))))
        .collect()
}
