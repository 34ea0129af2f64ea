//! Subsets of a ground set `{0, .., n-1}` stored as little-endian `u64` words.
//!
//! Sets over up to 128 points live inline; larger ground sets spill to the heap.
//! Trailing zero words are always trimmed, so structural equality and hashing
//! agree with set equality.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

const WORD: usize = 64;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Mask {
    words: SmallVec<[u64; 2]>,
}

impl Mask {
    pub fn empty() -> Self {
        Mask::default()
    }

    pub fn from_bits(bits: u64) -> Self {
        let mut m = Mask::default();
        m.words.push(bits);
        m.trim();
        m
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        Self::range(0, n)
    }

    /// The set `{lo, .., hi-1}`.
    pub fn range(lo: usize, hi: usize) -> Self {
        let mut m = Mask::default();
        for i in lo..hi {
            m.insert(i);
        }
        m
    }

    pub fn singleton(i: usize) -> Self {
        let mut m = Mask::default();
        m.insert(i);
        m
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut m = Mask::default();
        for i in indices {
            m.insert(i);
        }
        m
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words.get(i / WORD).is_some_and(|w| (w >> (i % WORD)) & 1 == 1)
    }

    pub fn insert(&mut self, i: usize) {
        let w = i / WORD;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        if let Some(w) = self.words.get_mut(i / WORD) {
            *w &= !(1 << (i % WORD));
            self.trim();
        }
    }

    /// Cardinality.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    fn zip_with(&self, other: &Mask, f: impl Fn(u64, u64) -> u64) -> Mask {
        let len = self.words.len().max(other.words.len());
        let mut words = SmallVec::with_capacity(len);
        for i in 0..len {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            words.push(f(a, b));
        }
        let mut m = Mask { words };
        m.trim();
        m
    }

    pub fn union(&self, other: &Mask) -> Mask {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Mask) -> Mask {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Mask) -> Mask {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Mask) -> Mask {
        self.zip_with(other, |a, b| a ^ b)
    }

    /// `|self ∩ other|` without allocating.
    pub fn intersection_len(&self, other: &Mask) -> usize {
        self.words.iter().zip(other.words.iter()).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn union_len(&self, other: &Mask) -> usize {
        self.len() + other.len() - self.intersection_len(other)
    }

    pub fn symmetric_difference_len(&self, other: &Mask) -> usize {
        self.len() + other.len() - 2 * self.intersection_len(other)
    }

    pub fn is_subset(&self, other: &Mask) -> bool {
        self.words.len() <= other.words.len() && self.words.iter().zip(other.words.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Mask) -> bool {
        self.intersection_len(other) == 0
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn last(&self) -> Option<usize> {
        let last = self.words.len().checked_sub(1)?;
        let w = self.words[last];
        Some(last * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    /// Elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    /// Elements as 1-based coordinates.
    pub fn to_one_based(&self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// The `rank`-th smallest element, if any.
    pub fn nth(&self, rank: usize) -> Option<usize> {
        self.iter().nth(rank)
    }

    /// Map every element through `f`; used for coordinate relabelings.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Mask {
        Mask::from_indices(self.iter().map(f))
    }
}

/// Numeric order of the underlying integer. Restricted to sets of equal
/// size this is colexicographic order.
impl Ord for Mask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words.len().cmp(&other.words.len()).then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Mask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.to_one_based()).finish()
    }
}

impl FromIterator<usize> for Mask {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Mask::from_indices(iter)
    }
}

/// All `k`-subsets of `{0, .., n-1}` in colexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Mask> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    // Combination indices c[0] < .. < c[k-1]; colex successor bumps the
    // lowest position that can move and resets everything below it.
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(Mask::from_indices(c.iter().copied()));
        let mut j = 0;
        while j < k && c[j] + 1 == if j + 1 < k { c[j + 1] } else { n } {
            j += 1;
        }
        if j == k {
            return out;
        }
        c[j] += 1;
        for (r, slot) in c.iter_mut().enumerate().take(j) {
            *slot = r;
        }
    }
}
