//! Closed-form extremal quantities.
//!
//! Everything here is generic over [`Count`]; the crate root re-exports
//! `BigUint`-backed aliases for callers that just want exact answers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{add, binomial, lift, mul, pow2, sub, Count};

/// Which argument a closed-form value of `F(n, k, l)` rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// `l = k` (singletons) or `l = -k` (all of `L_k`).
    Trivial,
    /// `l = -k + 1`: keep one vector of every antipodal pair.
    AntipodalHalving,
    /// `n = k`: sign patterns with bounded symmetric difference.
    Kleitman,
    /// `l = k - 1`: a star around a `(k-1)`-set or the `k`-subsets of a `(k+1)`-set.
    StarOrSimplex,
    /// `l = k - 2`: homogeneous `(k-2)`-intersecting supports.
    CompleteIntersection,
    /// `0 <= l <= k`, large `n`: all vectors through a fixed positive `l`-set.
    LargeNStar,
    /// `-k < l < 0`, large `n`: a Katona family of sign patterns on every support.
    LargeNKatona,
    /// `k = 3, l = 0`, every `n`.
    WeightThree,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Trivial => "trivial",
            Provenance::AntipodalHalving => "antipodal-halving",
            Provenance::Kleitman => "kleitman",
            Provenance::StarOrSimplex => "star-or-simplex",
            Provenance::CompleteIntersection => "complete-intersection",
            Provenance::LargeNStar => "large-n-star",
            Provenance::LargeNKatona => "large-n-katona",
            Provenance::WeightThree => "weight-three",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    /// Proven for these exact parameters.
    Exact,
    /// Proven only for `n` beyond an unquantified threshold.
    Asymptotic,
    /// Attained by a construction, but larger families exist for these
    /// parameters.
    LowerBound,
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confidence::Exact => "exact",
            Confidence::Asymptotic => "asymptotic",
            Confidence::LowerBound => "lower-bound",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult<C> {
    pub value: C,
    pub provenance: Provenance,
    pub confidence: Confidence,
}

impl<C> BoundResult<C> {
    fn exact(value: C, provenance: Provenance) -> Self {
        BoundResult { value, provenance, confidence: Confidence::Exact }
    }
}

/// Maximum size of a family of subsets of `[n]` whose pairwise unions have
/// at most `s` elements:
///
/// * `s` even: `Σ_{i <= s/2} C(n, i)`
/// * `s` odd: `2 Σ_{i <= (s-1)/2} C(n-1, i)`
///
/// At `s = n` the union condition is vacuous and the value is `2^n`.
pub fn katona_f<C: Count>(n: usize, s: usize) -> Result<C> {
    if s > n {
        return Err(Error::invalid(format!("katona_f needs 0 <= s <= n, got n = {n}, s = {s}")));
    }
    if s == n {
        return pow2(n as u32);
    }
    let n = n as i64;
    let mut acc = C::zero();
    if s.is_multiple_of(2) {
        for i in 0..=(s / 2) as i64 {
            acc = add(&acc, &binomial(n, i)?)?;
        }
        Ok(acc)
    } else {
        for i in 0..=((s - 1) / 2) as i64 {
            acc = add(&acc, &binomial(n - 1, i)?)?;
        }
        mul(&acc, &lift(2)?)
    }
}

fn check_frankl(k: usize, s: usize, t: usize) -> Result<()> {
    if t < 1 || s < t {
        return Err(Error::invalid(format!("need s >= t >= 1, got s = {s}, t = {t}")));
    }
    if k < s || k + t < 2 * s {
        return Err(Error::invalid(format!("need k >= s and k >= 2s - t, got k = {k}, s = {s}, t = {t}")));
    }
    Ok(())
}

pub(crate) fn check_frankl_index(k: usize, s: usize, t: usize, i: usize) -> Result<()> {
    check_frankl(k, s, t)?;
    if i > s - t {
        return Err(Error::invalid(format!("need 0 <= i <= s - t = {}, got i = {i}", s - t)));
    }
    Ok(())
}

/// `|A_i(k, s, t)|` where `A_i = {A ∈ C([k], s) : |A ∩ [t+2i]| >= t+i}`.
pub fn ak_size<C: Count>(k: usize, s: usize, t: usize, i: usize) -> Result<C> {
    check_frankl_index(k, s, t, i)?;
    let core = (t + 2 * i) as i64;
    let mut acc = C::zero();
    for j in (t + i) as i64..=(s as i64).min(core) {
        let term = mul(&binomial::<C>(core, j)?, &binomial(k as i64 - core, s as i64 - j)?)?;
        acc = add(&acc, &term)?;
    }
    Ok(acc)
}

/// `m(k, s, t) = max_i |A_i(k, s, t)|` and every `i` attaining it.
pub fn ak_max<C: Count>(k: usize, s: usize, t: usize) -> Result<(C, Vec<usize>)> {
    check_frankl(k, s, t)?;
    let sizes = (0..=s - t).map(|i| ak_size::<C>(k, s, t, i)).collect::<Result<Vec<C>>>()?;
    let best = sizes.iter().max().cloned().expect("i = 0 always exists");
    let argmax = (0..sizes.len()).filter(|&i| sizes[i] == best).collect();
    Ok((best, argmax))
}

/// `C(n, k) - C(n-k, k) + 1`, the cap on `|A| + |B|` for non-empty
/// cross-intersecting `A, B ⊆ C([n], k)`.
pub fn hm_bound<C: Count>(n: usize, k: usize) -> Result<C> {
    if k < 1 || n < 2 * k {
        return Err(Error::invalid(format!("hm_bound needs n >= 2k >= 2, got n = {n}, k = {k}")));
    }
    let (n, k) = (n as i64, k as i64);
    add(&sub(&binomial::<C>(n, k)?, &binomial(n - k, k)?)?, &C::one())
}

/// `k C(n-s-1, k-s-1)`: the most sets of `A` that can contain an `s`-set
/// `T` when `T` is not a kernel.
pub fn kernel_defect_bound<C: Count>(n: usize, k: usize, s: usize) -> Result<C> {
    if s >= k || k > n {
        return Err(Error::invalid(format!("kernel bound needs 0 <= s < k <= n, got n = {n}, k = {k}, s = {s}")));
    }
    mul(&lift(k as u64)?, &binomial(n as i64 - s as i64 - 1, k as i64 - s as i64 - 1)?)
}

/// Every closed form that applies to `F(n, k, l)`, in dispatch order.
pub fn applicable_formulas<C: Count>(n: usize, k: usize, l: i64) -> Result<Vec<BoundResult<C>>> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let ki = k as i64;
    if l < -ki || l > ki {
        return Err(Error::invalid(format!("need -k <= l <= k, got k = {k}, l = {l}")));
    }
    let (ni, lk) = (n as i64, pow2::<C>(k as u32)?);
    let choose = |a: i64, b: i64| binomial::<C>(a, b);
    let mut out = Vec::new();

    if l == ki {
        out.push(BoundResult::exact(C::one(), Provenance::Trivial));
    }
    if l == -ki {
        out.push(BoundResult::exact(mul(&lk, &choose(ni, ki)?)?, Provenance::Trivial));
    }
    if l == -ki + 1 {
        let half = pow2::<C>(k as u32 - 1)?;
        out.push(BoundResult::exact(mul(&half, &choose(ni, ki)?)?, Provenance::AntipodalHalving));
    }
    if n == k {
        // <v, w> = k - 2 |N(v) △ N(w)| >= l  iff  |N(v) △ N(w)| <= floor((k - l) / 2).
        let diam = (ki - l).div_euclid(2) as usize;
        out.push(BoundResult::exact(katona_f(k, diam)?, Provenance::Kleitman));
    }
    if l == ki - 1 && n > k {
        let v = (k + 1).max(n - k + 1) as u64;
        out.push(BoundResult::exact(lift(v)?, Provenance::StarOrSimplex));
    }
    if l == ki - 2 && n > k && k >= 2 {
        let v = if (n, k) == (3, 2) {
            Some(lift(4)?)
        } else if (n == k + 1 && k >= 3) || n == k + 2 {
            Some(choose(ni, ki)?)
        } else if n >= k + 3 {
            let a = choose(ni - ki + 2, 2)?;
            let b = lift((k * (n - k) + 1) as u64)?;
            Some(a.max(b))
        } else {
            None
        };
        // At n = k + 3, k >= 3 the non-homogeneous family
        //   {+[k], -1 +2 .. +k} ∪ {positive S ⊆ [2, n] : |S ∩ [2, k]| >= k - 2}
        // has 3k + 2 members, more than the homogeneous optimum max(10, 3k + 1).
        let confidence = if n == k + 3 && k >= 3 { Confidence::LowerBound } else { Confidence::Exact };
        if let Some(value) = v {
            out.push(BoundResult { value, provenance: Provenance::CompleteIntersection, confidence });
        }
    }
    if k == 3 && l == 0 {
        let v = match n {
            3 => lift(2)?,
            4 => lift(8)?,
            5 => lift(14)?,
            6 => lift(21)?,
            _ => choose(ni, 3)?,
        };
        out.push(BoundResult::exact(v, Provenance::WeightThree));
    }
    if l >= 0 {
        out.push(BoundResult {
            value: choose(ni - l, ki - l)?,
            provenance: Provenance::LargeNStar,
            confidence: Confidence::Asymptotic,
        });
    }
    if l < 0 && l > -ki && above_katona_threshold(n, k) {
        let v = mul(&katona_f::<C>(k, (-l) as usize)?, &choose(ni, ki)?)?;
        out.push(BoundResult::exact(v, Provenance::LargeNKatona));
    }
    Ok(out)
}

/// `n > 4^k k^2`, the explicit threshold for the negative-`l` large-`n` formula.
pub fn above_katona_threshold(n: usize, k: usize) -> bool {
    let threshold = 4u128.checked_pow(k as u32).and_then(|p| p.checked_mul((k * k) as u128));
    threshold.is_some_and(|th| (n as u128) > th)
}

/// Closed-form `F(n, k, l)` if one is known: the first applicable formula.
/// `None` when no formula covers the parameters (notably `-k < l < 0` below
/// the `4^k k^2` threshold).
pub fn formula_f<C: Count>(n: usize, k: usize, l: i64) -> Result<Option<BoundResult<C>>> {
    Ok(applicable_formulas(n, k, l)?.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::{k_subsets, Mask};

    #[test]
    fn complete_intersection_beaten_at_k_plus_3() {
        use crate::vector::{SignedVector, VectorFamily};
        for k in 3..=6usize {
            let n = k + 3;
            let head: Vec<usize> = (1..=k).collect();
            let mut fam = VectorFamily::uniform(n, k);
            fam.insert(SignedVector::positive(n, &head).unwrap()).unwrap();
            fam.insert(SignedVector::new(n, &head[1..], &[1]).unwrap()).unwrap();
            let inner = Mask::range(1, k);
            for s in k_subsets(n, k) {
                if !s.contains(0) && s.intersection_len(&inner) + 2 >= k {
                    fam.insert(SignedVector::positive(n, &s.to_one_based()).unwrap()).unwrap();
                }
            }
            assert_eq!(fam.len(), 3 * k + 2);
            assert!(fam.min_scalar_product().unwrap() >= k as i64 - 2);
            let clause = applicable_formulas::<u64>(n, k, k as i64 - 2).unwrap();
            let ci = clause.iter().find(|r| r.provenance == Provenance::CompleteIntersection).unwrap();
            assert!(ci.value < fam.len() as u64);
            assert_eq!(ci.confidence, Confidence::LowerBound);
        }
    }

    #[test]
    fn katona_values() {
        assert_eq!(katona_f::<u64>(7, 0).unwrap(), 1);
        assert_eq!(katona_f::<u64>(4, 2).unwrap(), 5);
        assert_eq!(katona_f::<u64>(5, 2).unwrap(), 6);
        assert_eq!(katona_f::<u64>(5, 4).unwrap(), 16);
        assert_eq!(katona_f::<u64>(3, 1).unwrap(), 2);
        assert_eq!(katona_f::<u64>(3, 2).unwrap(), 4);
        assert_eq!(katona_f::<u64>(4, 4).unwrap(), 16);
        assert!(katona_f::<u64>(3, 4).is_err());
    }

    // The antipodal-halving and Kleitman clauses meet at n = k, l = 1 - k:
    // f(k, k - 1) must be 2^(k-1).
    #[test]
    fn katona_one_below_full() {
        for k in 1..=12 {
            assert_eq!(katona_f::<u64>(k, k - 1).unwrap(), 1 << (k - 1));
        }
    }

    fn ak_by_enumeration(k: usize, s: usize, t: usize, i: usize) -> u64 {
        let core = Mask::range(0, t + 2 * i);
        k_subsets(k, s).iter().filter(|a| a.intersection_len(&core) >= t + i).count() as u64
    }

    #[test]
    fn ak_size_examples() {
        assert_eq!(ak_size::<u64>(5, 3, 1, 2).unwrap(), 10);
        assert_eq!(ak_size::<u64>(5, 3, 1, 0).unwrap(), 6);
        assert_eq!(ak_size::<u64>(5, 3, 1, 1).unwrap(), 7);
        assert!(ak_size::<u64>(5, 3, 1, 3).is_err());
        assert!(ak_size::<u64>(4, 3, 1, 0).is_err());
        assert!(ak_size::<u64>(5, 3, 0, 0).is_err());
    }

    #[test]
    fn ak_size_matches_enumeration() {
        for k in 1..=9 {
            for s in 1..=k {
                for t in 1..=s {
                    if k + t < 2 * s {
                        continue;
                    }
                    for i in 0..=s - t {
                        assert_eq!(
                            ak_size::<u64>(k, s, t, i).unwrap(),
                            ak_by_enumeration(k, s, t, i),
                            "k={k} s={s} t={t} i={i}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn ak_max_examples() {
        assert_eq!(ak_max::<u64>(5, 3, 1).unwrap(), (10, vec![2]));
        assert_eq!(ak_max::<u64>(6, 3, 1).unwrap(), (10, vec![0, 1, 2]));
        for k in 3..8 {
            assert_eq!(ak_max::<u64>(k, 3, 3).unwrap(), (1, vec![0]));
        }
    }

    #[test]
    fn hm_examples() {
        assert_eq!(hm_bound::<u64>(6, 3).unwrap(), 20);
        assert_eq!(hm_bound::<u64>(8, 3).unwrap(), 47);
        for k in 1..10 {
            assert_eq!(hm_bound::<u64>(2 * k, k).unwrap(), binomial::<u64>(2 * k as i64, k as i64).unwrap());
        }
        assert!(hm_bound::<u64>(5, 3).is_err());
    }

    #[test]
    fn kernel_bound_examples() {
        assert_eq!(kernel_defect_bound::<u64>(10, 3, 2).unwrap(), 3);
        assert_eq!(kernel_defect_bound::<u64>(9, 4, 2).unwrap(), 24);
        for k in 1..7 {
            assert_eq!(kernel_defect_bound::<u64>(12, k, k - 1).unwrap(), k as u64);
        }
        assert!(kernel_defect_bound::<u64>(9, 3, 3).is_err());
    }

    #[test]
    fn formula_examples() {
        let r = formula_f::<u64>(6, 3, 0).unwrap().unwrap();
        assert_eq!((r.value, r.provenance, r.confidence), (21, Provenance::WeightThree, Confidence::Exact));
        let r = formula_f::<u64>(4, 2, -1).unwrap().unwrap();
        assert_eq!((r.value, r.provenance), (12, Provenance::AntipodalHalving));
        let r = formula_f::<u64>(7, 3, 2).unwrap().unwrap();
        assert_eq!((r.value, r.provenance), (5, Provenance::StarOrSimplex));
        let r = formula_f::<u64>(6, 3, 1).unwrap().unwrap();
        assert_eq!((r.value, r.provenance), (10, Provenance::CompleteIntersection));
        let r = formula_f::<u64>(4, 4, 0).unwrap().unwrap();
        assert_eq!((r.value, r.provenance), (5, Provenance::Kleitman));
        assert!(formula_f::<u64>(5, 3, -1).unwrap().is_none());
        assert!(formula_f::<u64>(5, 3, 4).is_err());
        assert!(formula_f::<u64>(3, 4, 0).is_err());
    }

    #[test]
    fn formula_large_n() {
        let r = formula_f::<u64>(100, 4, 2).unwrap().unwrap();
        assert_eq!(r.value, 4753);
        let r = formula_f::<u64>(100, 5, 1).unwrap().unwrap();
        assert_eq!((r.value, r.confidence), (binomial(99, 4).unwrap(), Confidence::Asymptotic));
        let r = formula_f::<u64>(577, 3, -1).unwrap().unwrap();
        assert_eq!(r.provenance, Provenance::LargeNKatona);
        assert_eq!(r.value, 2 * binomial::<u64>(577, 3).unwrap());
        assert!(formula_f::<u64>(576, 3, -1).unwrap().is_none());
    }

    #[test]
    fn overlapping_clauses_agree() {
        // star-or-simplex at k = 2 against the large-n star value.
        for n in 4..40 {
            let all = applicable_formulas::<u64>(n, 2, 1).unwrap();
            assert_eq!(all[0].value, all.last().unwrap().value);
        }
        // Antipodal halving against Kleitman at n = k.
        for k in 1..=10 {
            let all = applicable_formulas::<u64>(k, k, 1 - k as i64).unwrap();
            let vals: Vec<u64> = all.iter().filter(|r| r.confidence == Confidence::Exact).map(|r| r.value).collect();
            assert!(vals.len() >= 2);
            assert!(vals.windows(2).all(|w| w[0] == w[1]), "k={k}: {vals:?}");
        }
        // Every pair of exact clauses agrees wherever both apply.
        for n in 1..=30 {
            for k in 1..=n.min(8) {
                for l in -(k as i64)..=k as i64 {
                    let exact: Vec<u64> = applicable_formulas::<u64>(n, k, l)
                        .unwrap()
                        .into_iter()
                        .filter(|r| r.confidence == Confidence::Exact)
                        .map(|r| r.value)
                        .collect();
                    assert!(exact.windows(2).all(|w| w[0] == w[1]), "({n},{k},{l}): {exact:?}");
                }
            }
        }
    }

    #[test]
    fn big_counts_do_not_overflow() {
        use num_bigint::BigUint;
        let r = formula_f::<BigUint>(200, 40, -40).unwrap().unwrap();
        assert!(r.value > BigUint::from(u64::MAX));
        assert!(formula_f::<u64>(200, 40, -40).is_err());
    }
}
