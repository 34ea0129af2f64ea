//! Explicit extremal and near-extremal families.

use crate::bounds::check_frankl_index;
use crate::error::{Error, Result};
use crate::mask::{k_subsets, Mask};
use crate::setfam::SetFamily;
use crate::vector::{sign_patterns, CrossParams, SignedVector, VectorFamily};

fn check_lkn(n: usize, k: usize, l: usize) -> Result<()> {
    if k == 0 || k > n || l > k {
        return Err(Error::invalid(format!("need 0 <= l <= k <= n, k >= 1; got n = {n}, k = {k}, l = {l}")));
    }
    Ok(())
}

/// `u(a, b, c)` over `[n]` (1-based, `a < b < c` not required).
pub fn u_vec(n: usize, a: usize, b: usize, c: usize) -> Result<SignedVector> {
    SignedVector::positive(n, &[a, b, c])
}

/// `v(a, b, c)`: `+1` at the two smaller positions, `-1` at the largest.
pub fn v_vec(n: usize, a: usize, b: usize, c: usize) -> Result<SignedVector> {
    let mut idx = [a, b, c];
    idx.sort_unstable();
    SignedVector::new(n, &idx[..2], &idx[2..])
}

/// Non-negative vectors of weight `k` that are `+1` on `[l]`.
/// Size `C(n-l, k-l)`, every pairwise product at least `l`.
pub fn star_vector_family(n: usize, k: usize, l: usize) -> Result<VectorFamily> {
    check_lkn(n, k, l)?;
    let fixed = Mask::full(l);
    let mut fam = VectorFamily::uniform(n, k);
    for rest in k_subsets(n - l, k - l) {
        let support = fixed.union(&rest.map(|i| i + l));
        fam.insert(SignedVector::from_masks(n, support, Mask::empty())?)?;
    }
    Ok(fam)
}

/// On every support `S ∈ C([n], k)`, the sign patterns whose negative sets
/// form a Katona family on `S`:
///
/// * `l` even: at most `l/2` negatives;
/// * `l` odd: at most `(l-1)/2` negatives off the largest position of `S`;
/// * `l = k`: every pattern (the union bound is vacuous).
///
/// Negative sets pairwise unite in at most `l` positions, so no product falls
/// below `-l` and none equals `-l-1`. Size `f(k, l) C(n, k)`.
pub fn katona_vector_family(n: usize, k: usize, l: usize) -> Result<VectorFamily> {
    check_lkn(n, k, l)?;
    let mut fam = VectorFamily::uniform(n, k);
    for support in k_subsets(n, k) {
        let top = support.last().expect("k >= 1");
        for neg in sign_patterns(&support) {
            let keep = if l == k {
                true
            } else if l.is_multiple_of(2) {
                neg.len() <= l / 2
            } else {
                neg.len() - usize::from(neg.contains(top)) <= (l - 1) / 2
            };
            if keep {
                fam.insert(SignedVector::from_masks(n, support.clone(), neg)?)?;
            }
        }
    }
    Ok(fam)
}

/// `V(n) = {u(a,b,c), v(a,b,c) : |{a,b,c} ∩ [3]| >= 2}`.
pub fn construct_vn(n: usize) -> Result<VectorFamily> {
    if n < 3 {
        return Err(Error::invalid(format!("V(n) needs n >= 3, got {n}")));
    }
    let head = Mask::full(3);
    let mut fam = VectorFamily::uniform(n, 3);
    for support in k_subsets(n, 3) {
        if support.intersection_len(&head) >= 2 {
            let c = support.last().expect("three elements");
            fam.insert(SignedVector::from_masks(n, support.clone(), Mask::empty())?)?;
            fam.insert(SignedVector::from_masks(n, support, Mask::singleton(c))?)?;
        }
    }
    Ok(fam)
}

/// `U_6 = {u(1,b,c), v(1,b,c) : 2 <= b < c <= 6} ∪ {u(2,3,4)}`, 21 vectors
/// over `[6]` with all products non-negative.
pub fn construct_u6() -> VectorFamily {
    let mut fam = VectorFamily::uniform(6, 3);
    for b in 2..=6 {
        for c in b + 1..=6 {
            fam.insert(u_vec(6, 1, b, c).expect("in range")).expect("weight 3");
            fam.insert(v_vec(6, 1, b, c).expect("in range")).expect("weight 3");
        }
    }
    fam.insert(u_vec(6, 2, 3, 4).expect("in range")).expect("weight 3");
    fam
}

/// The extremal union-bounded families: for even `s`, all sets of size at
/// most `s/2`; for odd `s` and 1-based `j`, all sets meeting `[n] \ {j}` in
/// at most `(s-1)/2` elements. Size `f(n, s)`.
pub fn katona_set_family(n: usize, s: usize, variant: Option<usize>) -> Result<SetFamily> {
    if s >= n {
        return Err(Error::invalid(format!("Katona families need s < n, got n = {n}, s = {s}")));
    }
    let rest = match (s % 2, variant) {
        (0, None) => None,
        (0, Some(_)) => return Err(Error::invalid("even s takes no variant index")),
        (_, None) => return Err(Error::invalid("odd s needs a variant index j")),
        (_, Some(j)) if j == 0 || j > n => return Err(Error::OutOfRange { index: j, n }),
        (_, Some(j)) => Some(Mask::full(n).difference(&Mask::singleton(j - 1))),
    };
    let mut fam = SetFamily::new(n);
    for size in 0..=n {
        for set in k_subsets(n, size) {
            let keep = match &rest {
                None => size <= s / 2,
                Some(r) => set.intersection_len(r) <= (s - 1) / 2,
            };
            if keep {
                fam.insert(set)?;
            }
        }
    }
    Ok(fam)
}

/// `A_i(k, s, t) = {A ∈ C([k], s) : |A ∩ [t+2i]| >= t+i}`.
pub fn ak_family(k: usize, s: usize, t: usize, i: usize) -> Result<SetFamily> {
    check_frankl_index(k, s, t, i)?;
    let core = Mask::full(t + 2 * i);
    SetFamily::from_sets(k, Some(s), k_subsets(k, s).into_iter().filter(|a| a.intersection_len(&core) >= t + i))
}

/// `M_i(k, s, t) = {A ⊆ [k] : |A| >= s, |A ∩ [t+2i]| >= t+i} ∪ {A ⊆ [k] : |A| >= k-s+t}`
/// for `0 <= i < s-t`.
pub fn m_family(k: usize, s: usize, t: usize, i: usize) -> Result<SetFamily> {
    check_frankl_index(k, s, t, i)?;
    if i == s - t {
        return Err(Error::invalid(format!("M_i needs i < s - t = {}", s - t)));
    }
    let core = Mask::full(t + 2 * i);
    let mut fam = SetFamily::new(k);
    for size in 0..=k {
        for a in k_subsets(k, size) {
            if (size >= s && a.intersection_len(&core) >= t + i) || size + s >= k + t {
                fam.insert(a)?;
            }
        }
    }
    Ok(fam)
}

/// The pair `(A_i, B_i)` over `[n]`:
///
/// * `i < s-t`: `A_i = {A ∈ C([n], k) : A ∩ [k] ∈ M_i(k, s, t)}`, `B_i = {[k]}`;
/// * `i = s-t`: `A_i = {A : |A ∩ [2s-t]| >= s}`, `B_i = {B : [2s-t] ⊆ B}`.
pub fn cross_pair(n: usize, k: usize, s: usize, t: usize, i: usize) -> Result<(SetFamily, SetFamily)> {
    CrossParams::new(n, k, s, t)?;
    check_frankl_index(k, s, t, i)?;
    let all = k_subsets(n, k);
    if i < s - t {
        let m = m_family(k, s, t, i)?;
        let head = Mask::full(k);
        let a = SetFamily::from_sets(n, Some(k), all.into_iter().filter(|x| m.contains(&x.intersection(&head))))?;
        let b = SetFamily::from_sets(n, Some(k), [head])?;
        Ok((a, b))
    } else {
        let head = Mask::full(2 * s - t);
        let a = SetFamily::from_sets(n, Some(k), all.iter().filter(|x| x.intersection_len(&head) >= s).cloned())?;
        let b = SetFamily::from_sets(n, Some(k), all.into_iter().filter(|x| head.is_subset(x)))?;
        Ok((a, b))
    }
}
