//! Signed characteristic vectors in `{0, ±1}^n` and families of them.
//!
//! A vector is stored as its support `S(v)` and the negative part `N(v) ⊆ S(v)`.
//! Coordinates are 0-based inside the crate; every constructor, accessor and
//! serialized form that faces a user takes 1-based coordinates.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::{k_subsets, Mask};
use crate::num::{binomial, pow2};

/// Default ceiling on `|L_k| = 2^k C(n, k)` for explicit enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 5_000_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedVector {
    n: usize,
    support: Mask,
    negatives: Mask,
}

impl SignedVector {
    /// Build a vector from 1-based index sets of its `+1` and `-1` coordinates.
    pub fn new(n: usize, plus: &[usize], minus: &[usize]) -> Result<Self> {
        let mut support = Mask::empty();
        let mut negatives = Mask::empty();
        for (&i, neg) in plus.iter().map(|i| (i, false)).chain(minus.iter().map(|i| (i, true))) {
            if i == 0 || i > n {
                return Err(Error::OutOfRange { index: i, n });
            }
            if support.contains(i - 1) {
                return Err(Error::invalid(format!("coordinate {i} listed twice (plus and minus must be disjoint)")));
            }
            support.insert(i - 1);
            if neg {
                negatives.insert(i - 1);
            }
        }
        Ok(SignedVector { n, support, negatives })
    }

    /// Build from 0-based masks. `negatives` must lie inside `support`, and
    /// `support` inside `{0, .., n-1}`.
    pub fn from_masks(n: usize, support: Mask, negatives: Mask) -> Result<Self> {
        if let Some(m) = support.last() {
            if m >= n {
                return Err(Error::OutOfRange { index: m + 1, n });
            }
        }
        if !negatives.is_subset(&support) {
            return Err(Error::invalid("negatives must be a subset of the support"));
        }
        Ok(SignedVector { n, support, negatives })
    }

    /// The all-`+1` vector on a 1-based index set.
    pub fn positive(n: usize, plus: &[usize]) -> Result<Self> {
        Self::new(n, plus, &[])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `S(v)`, 0-based.
    pub fn support(&self) -> &Mask {
        &self.support
    }

    /// `N(v)`, 0-based.
    pub fn negatives(&self) -> &Mask {
        &self.negatives
    }

    pub fn positives(&self) -> Mask {
        self.support.difference(&self.negatives)
    }

    /// `<v, v>`, the number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.support.len()
    }

    /// Coordinate value at 0-based position `i`.
    pub fn value(&self, i: usize) -> i8 {
        if !self.support.contains(i) {
            0
        } else if self.negatives.contains(i) {
            -1
        } else {
            1
        }
    }

    /// Copy with the 0-based coordinate `i` set to `val ∈ {-1, 0, 1}`.
    pub fn with_value(&self, i: usize, val: i8) -> SignedVector {
        let mut out = self.clone();
        out.support.remove(i);
        out.negatives.remove(i);
        match val {
            1 => out.support.insert(i),
            -1 => {
                out.support.insert(i);
                out.negatives.insert(i);
            }
            0 => {}
            other => panic!("coordinate value {other} not in {{-1, 0, 1}}"),
        }
        out
    }

    /// `<v, w> = |S(v) ∩ S(w)| - 2 |(N(v) △ N(w)) ∩ S(v) ∩ S(w)|`.
    pub fn scalar_product(&self, other: &SignedVector) -> Result<i64> {
        if self.n != other.n {
            return Err(Error::invalid(format!("scalar product of vectors of length {} and {}", self.n, other.n)));
        }
        Ok(self.dot(other))
    }

    pub(crate) fn dot(&self, other: &SignedVector) -> i64 {
        let common = self.support.intersection(&other.support);
        let disagree = self.negatives.symmetric_difference(&other.negatives).intersection_len(&common);
        common.len() as i64 - 2 * disagree as i64
    }

    /// Negate the 0-based coordinate `i`.
    pub fn flip(&self, i: usize) -> SignedVector {
        let mut out = self.clone();
        if out.support.contains(i) {
            if out.negatives.contains(i) {
                out.negatives.remove(i);
            } else {
                out.negatives.insert(i);
            }
        }
        out
    }

    /// Relabel coordinates: position `i` moves to `perm[i]` (0-based).
    pub fn permute(&self, perm: &[usize]) -> SignedVector {
        SignedVector { n: self.n, support: self.support.map(|i| perm[i]), negatives: self.negatives.map(|i| perm[i]) }
    }

    pub fn to_json(&self) -> VectorJson {
        VectorJson { n: self.n, plus: self.positives().to_one_based(), minus: self.negatives.to_one_based() }
    }

    /// Parse the canonical text form, e.g. `"+1 +2 -5"`.
    pub fn parse_text(n: usize, text: &str) -> Result<Self> {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for tok in text.split_whitespace() {
            let (list, digits) = if let Some(d) = tok.strip_prefix('+') {
                (&mut plus, d)
            } else if let Some(d) = tok.strip_prefix('-') {
                (&mut minus, d)
            } else {
                return Err(Error::invalid(format!("token {tok:?} lacks a sign")));
            };
            let idx: usize = digits.parse().map_err(|_| Error::invalid(format!("bad coordinate token {tok:?}")))?;
            list.push(idx);
        }
        Self::new(n, &plus, &minus)
    }
}

/// Support in colexicographic order, then negatives in numeric order.
impl Ord for SignedVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.support
            .cmp(&other.support)
            .then_with(|| self.negatives.cmp(&other.negatives))
            .then_with(|| self.n.cmp(&other.n))
    }
}

impl PartialOrd for SignedVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical text form: signed 1-based indices by position.
impl fmt::Display for SignedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.support.iter() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let sign = if self.negatives.contains(i) { '-' } else { '+' };
            write!(f, "{sign}{}", i + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorJson {
    pub n: usize,
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

impl TryFrom<&VectorJson> for SignedVector {
    type Error = Error;

    fn try_from(j: &VectorJson) -> Result<Self> {
        SignedVector::new(j.n, &j.plus, &j.minus)
    }
}

/// How a family came about. Shifting can raise scalar products, so families
/// produced by a shift must not seed forbidden-product searches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    #[default]
    Direct,
    Shifted,
}

/// A set of signed vectors over a common ground set, ordered canonically.
///
/// Equality compares the ground set, uniformity and members; the origin tag
/// is bookkeeping and does not participate.
#[derive(Clone)]
pub struct VectorFamily {
    n: usize,
    k: Option<usize>,
    members: BTreeSet<SignedVector>,
    origin: Origin,
}

impl VectorFamily {
    pub fn new(n: usize) -> Self {
        VectorFamily { n, k: None, members: BTreeSet::new(), origin: Origin::Direct }
    }

    /// An empty family whose members must all have weight `k`.
    pub fn uniform(n: usize, k: usize) -> Self {
        VectorFamily { k: Some(k), ..Self::new(n) }
    }

    pub fn from_vectors<I: IntoIterator<Item = SignedVector>>(n: usize, k: Option<usize>, vectors: I) -> Result<Self> {
        let mut fam = VectorFamily { k, ..Self::new(n) };
        for v in vectors {
            fam.insert(v)?;
        }
        Ok(fam)
    }

    /// Insert a member; re-inserting an existing vector is a no-op.
    pub fn insert(&mut self, v: SignedVector) -> Result<bool> {
        if v.n != self.n {
            return Err(Error::invalid(format!("vector of length {} in a family over [{}]", v.n, self.n)));
        }
        if let Some(k) = self.k {
            if v.weight() != k {
                return Err(Error::invalid(format!("vector {v} has weight {} in a {k}-uniform family", v.weight())));
            }
        }
        Ok(self.members.insert(v))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub(crate) fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: &SignedVector) -> bool {
        self.members.contains(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SignedVector> {
        self.members.iter()
    }

    pub fn to_vec(&self) -> Vec<SignedVector> {
        self.members.iter().cloned().collect()
    }

    /// `V(S)`: the members whose support is exactly `support`.
    pub fn slice(&self, support: &Mask) -> VectorFamily {
        VectorFamily {
            members: self.members.iter().filter(|v| &v.support == support).cloned().collect(),
            ..self.clone_empty()
        }
    }

    fn clone_empty(&self) -> VectorFamily {
        VectorFamily { n: self.n, k: self.k, members: BTreeSet::new(), origin: self.origin }
    }

    /// Number of members nonzero at the 1-based coordinate `i`.
    pub fn coordinate_degree(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n {
            return Err(Error::OutOfRange { index: i, n: self.n });
        }
        Ok(self.members.iter().filter(|v| v.support.contains(i - 1)).count())
    }

    /// True iff no coordinate takes both signs across the family.
    pub fn is_homogeneous(&self) -> bool {
        let mut pos = Mask::empty();
        let mut neg = Mask::empty();
        for v in &self.members {
            pos = pos.union(&v.positives());
            neg = neg.union(&v.negatives);
        }
        pos.is_disjoint(&neg)
    }

    /// Minimum of `<v, w>` over all pairs, `v = w` included.
    pub fn min_scalar_product(&self) -> Option<i64> {
        let m: Vec<&SignedVector> = self.members.iter().collect();
        let mut best: Option<i64> = None;
        for (i, v) in m.iter().enumerate() {
            for w in &m[i..] {
                let p = v.dot(w);
                best = Some(best.map_or(p, |b| b.min(p)));
            }
        }
        best
    }

    /// First pair (in canonical order, `v = w` included) violating `pred`.
    pub fn find_pair(&self, mut pred: impl FnMut(i64) -> bool) -> Option<(SignedVector, SignedVector, i64)> {
        let m: Vec<&SignedVector> = self.members.iter().collect();
        for (i, v) in m.iter().enumerate() {
            for w in &m[i..] {
                let p = v.dot(w);
                if !pred(p) {
                    return Some(((*v).clone(), (*w).clone(), p));
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> VectorFamilyJson {
        VectorFamilyJson { n: self.n, k: self.k, vectors: self.members.iter().map(SignedVector::to_json).collect() }
    }

    pub fn from_json(j: &VectorFamilyJson) -> Result<Self> {
        let mut fam = VectorFamily { k: j.k, ..Self::new(j.n) };
        for vj in &j.vectors {
            if vj.n != j.n {
                return Err(Error::invalid(format!("vector declares n = {} inside a family over [{}]", vj.n, j.n)));
            }
            fam.insert(SignedVector::try_from(vj)?)?;
        }
        Ok(fam)
    }
}

impl PartialEq for VectorFamily {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.members == other.members
    }
}

impl Eq for VectorFamily {}

impl fmt::Debug for VectorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a VectorFamily {
    type Item = &'a SignedVector;
    type IntoIter = std::collections::btree_set::Iter<'a, SignedVector>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorFamilyJson {
    pub n: usize,
    #[serde(default)]
    pub k: Option<usize>,
    pub vectors: Vec<VectorJson>,
}

/// `|L_k| = 2^k C(n, k)`, saturating at `u64::MAX`.
pub fn lk_size(n: usize, k: usize) -> u64 {
    match (pow2::<u64>(k as u32), binomial::<u64>(n as i64, k as i64)) {
        (Ok(p), Ok(c)) => p.saturating_mul(c),
        _ => u64::MAX,
    }
}

pub fn enumerate_lk(n: usize, k: usize) -> Result<VectorFamily> {
    enumerate_lk_capped(n, k, DEFAULT_ENUMERATION_CAP)
}

/// All of `L_k` over `[n]`: supports in colex order, each with its sign
/// patterns in increasing numeric order of the negatives mask.
pub fn enumerate_lk_capped(n: usize, k: usize, cap: u64) -> Result<VectorFamily> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("L_k needs 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let size = lk_size(n, k);
    if size > cap {
        return Err(Error::ResourceLimit { what: format!("|L_{k}| over [{n}] = {size} vectors"), cap });
    }
    let mut fam = VectorFamily::uniform(n, k);
    for support in k_subsets(n, k) {
        for negatives in sign_patterns(&support) {
            fam.members.insert(SignedVector { n, support: support.clone(), negatives });
        }
    }
    Ok(fam)
}

/// Every subset of `support`, in increasing numeric order.
pub(crate) fn sign_patterns(support: &Mask) -> impl Iterator<Item = Mask> + '_ {
    let elems: Vec<usize> = support.iter().collect();
    (0u64..1 << elems.len())
        .map(move |bits| elems.iter().enumerate().filter(|(j, _)| bits >> j & 1 == 1).map(|(_, &e)| e).collect())
}

/// `|A △ B|`.
pub fn symmetric_difference_size(a: &Mask, b: &Mask) -> usize {
    a.symmetric_difference_len(b)
}

/// Validated parameters for scalar-product problems over `L_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarParams {
    pub n: usize,
    pub k: usize,
    pub l: i64,
}

impl ScalarParams {
    pub fn new(n: usize, k: usize, l: i64) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::invalid(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
        }
        if l < -(k as i64) || l > k as i64 {
            return Err(Error::invalid(format!("need -k <= l <= k, got k = {k}, l = {l}")));
        }
        Ok(ScalarParams { n, k, l })
    }
}

/// Validated parameters for `s`-cross-intersecting `t`-intersecting pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossParams {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub t: usize,
}

impl CrossParams {
    pub fn new(n: usize, k: usize, s: usize, t: usize) -> Result<Self> {
        if t < 1 {
            return Err(Error::invalid("need t >= 1"));
        }
        if s <= t {
            return Err(Error::invalid(format!(
                "need s > t (got s = {s}, t = {t}); with s <= t the pair problem collapses to a single t-intersecting family"
            )));
        }
        if k <= s {
            return Err(Error::invalid(format!("need k > s, got k = {k}, s = {s}")));
        }
        if k < 2 * s - t {
            return Err(Error::invalid(format!("need k >= 2s - t, got k = {k}, s = {s}, t = {t}")));
        }
        if n < k {
            return Err(Error::invalid(format!("need n >= k, got n = {n}, k = {k}")));
        }
        Ok(CrossParams { n, k, s, t })
    }
}
