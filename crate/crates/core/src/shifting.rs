//! Coordinate shifts `S_{i,j}`, up-shifts `S_i`, and fixpoint shifting.
//!
//! Both operators replace a vector by its image unless the image is already
//! present, so family size is preserved, and neither can lower the minimal
//! pairwise scalar product. They may *raise* individual products, which is
//! why shifted families are tagged and refused by forbidden-product search.

use crate::error::{Error, Result};
use crate::vector::{Origin, SignedVector, VectorFamily};

/// One shift operator, with 1-based coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shift {
    Up(usize),
    Pair(usize, usize),
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::OutOfRange { index: i, n });
    }
    Ok(())
}

fn check_pair(i: usize, j: usize, n: usize) -> Result<()> {
    if i >= j {
        return Err(Error::invalid(format!("(i, j)-shift needs i < j, got ({i}, {j})")));
    }
    check_index(i, n)?;
    check_index(j, n)
}

/// `S_{i,j}(v)`: swap coordinates `i < j` when `v_i < v_j`.
pub fn shift_ij_vector(v: &SignedVector, i: usize, j: usize) -> Result<SignedVector> {
    check_pair(i, j, v.n())?;
    Ok(pair_image(v, i - 1, j - 1))
}

fn pair_image(v: &SignedVector, i: usize, j: usize) -> SignedVector {
    let (vi, vj) = (v.value(i), v.value(j));
    if vi >= vj {
        v.clone()
    } else {
        v.with_value(i, vj).with_value(j, vi)
    }
}

/// `S_i(v)`: turn a `-1` at coordinate `i` into `+1`.
pub fn up_shift_vector(v: &SignedVector, i: usize) -> Result<SignedVector> {
    check_index(i, v.n())?;
    Ok(up_image(v, i - 1))
}

fn up_image(v: &SignedVector, i: usize) -> SignedVector {
    if v.value(i) == -1 {
        v.flip(i)
    } else {
        v.clone()
    }
}

/// Apply a per-vector operator to a family with the collision rule, reading
/// membership from the input only (so no vector moves twice in one pass).
/// Returns the new family and how many members moved.
fn apply(w: &VectorFamily, image: impl Fn(&SignedVector) -> SignedVector) -> (VectorFamily, usize) {
    let mut moved = 0;
    let mut out = VectorFamily::from_vectors(w.n(), w.k(), std::iter::empty())
        .expect("empty family")
        .with_origin(Origin::Shifted);
    for v in w {
        let img = image(v);
        let keep = img == *v || w.contains(&img);
        if !keep {
            moved += 1;
        }
        out.insert(if keep { v.clone() } else { img }).expect("shifts preserve length and weight");
    }
    debug_assert_eq!(out.len(), w.len());
    (out, moved)
}

/// `S_{i,j}(W) = {S_{i,j}(v) : v ∈ W} ∪ {v : v, S_{i,j}(v) ∈ W}`.
pub fn shift_ij_family(w: &VectorFamily, i: usize, j: usize) -> Result<VectorFamily> {
    check_pair(i, j, w.n())?;
    Ok(apply(w, |v| pair_image(v, i - 1, j - 1)).0)
}

/// `S_i(W)` with the same collision rule.
pub fn up_shift_family(w: &VectorFamily, i: usize) -> Result<VectorFamily> {
    check_index(i, w.n())?;
    Ok(apply(w, |v| up_image(v, i - 1)).0)
}

pub fn apply_shift(w: &VectorFamily, shift: Shift) -> Result<VectorFamily> {
    match shift {
        Shift::Up(i) => up_shift_family(w, i),
        Shift::Pair(i, j) => shift_ij_family(w, i, j),
    }
}

/// Termination potential of one vector: `Σ_i c(v_i) (n - i + 1)` with
/// `c(-1) = 0, c(0) = 1, c(1) = 2` over 1-based `i`. Every effective shift
/// strictly increases the family total.
pub fn score(v: &SignedVector) -> u64 {
    let n = v.n();
    (0..n).map(|i| (v.value(i) + 1) as u64 * (n - i) as u64).sum()
}

pub fn potential(w: &VectorFamily) -> u64 {
    w.iter().map(score).sum()
}

/// Largest potential any family of this size over `[n]` can reach.
pub fn potential_ceiling(n: usize, size: usize) -> u64 {
    size as u64 * 2 * (n * (n + 1) / 2) as u64
}

#[derive(Clone, Debug, Default)]
pub struct ShiftTrace {
    /// Every shift that moved at least one vector, with the count moved and
    /// the family potential afterwards.
    pub steps: Vec<(Shift, usize, u64)>,
    pub initial_potential: u64,
    pub passes: usize,
}

fn sweep(n: usize) -> impl Iterator<Item = Shift> {
    (1..=n).map(Shift::Up).chain((1..=n).flat_map(move |i| (i + 1..=n).map(move |j| Shift::Pair(i, j))))
}

/// Shift until fixed: up-shifts `1..=n`, then `(i, j)` lexicographically,
/// repeated until a full pass changes nothing.
pub fn make_shifted(w: &VectorFamily) -> VectorFamily {
    make_shifted_traced(w).0
}

pub fn make_shifted_traced(w: &VectorFamily) -> (VectorFamily, ShiftTrace) {
    let n = w.n();
    let mut trace = ShiftTrace { initial_potential: potential(w), ..Default::default() };
    let mut cur = w.clone().with_origin(Origin::Shifted);
    loop {
        trace.passes += 1;
        let mut changed = false;
        for shift in sweep(n) {
            let (next, moved) = match shift {
                Shift::Up(i) => apply(&cur, |v| up_image(v, i - 1)),
                Shift::Pair(i, j) => apply(&cur, |v| pair_image(v, i - 1, j - 1)),
            };
            if moved > 0 {
                changed = true;
                trace.steps.push((shift, moved, potential(&next)));
                cur = next;
            }
        }
        if !changed {
            return (cur, trace);
        }
    }
}

/// True iff `W` is fixed by every `S_{i,j}` and every `S_i`.
pub fn is_shifted(w: &VectorFamily) -> bool {
    let n = w.n();
    w.iter().all(|v| {
        sweep(n).all(|shift| {
            let img = match shift {
                Shift::Up(i) => up_image(v, i - 1),
                Shift::Pair(i, j) => pair_image(v, i - 1, j - 1),
            };
            img == *v || w.contains(&img)
        })
    })
}
