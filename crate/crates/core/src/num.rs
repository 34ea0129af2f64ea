//! Exact counting over a pluggable integer type.
//!
//! Every closed-form quantity is generic over [`Count`], so callers pick
//! `u64` for fast table sweeps or `BigUint` when values outgrow a word.
//! Overflow never wraps: it surfaces as [`Error::Overflow`].

use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, FromPrimitive, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A non-negative exact integer.
pub trait Count:
    Clone
    + Debug
    + Display
    + Ord
    + Send
    + Sync
    + Zero
    + One
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + CheckedDiv
    + FromPrimitive
    + ToPrimitive
{
}

impl Count for u32 {}
impl Count for u64 {}
impl Count for u128 {}
impl Count for usize {}
impl Count for BigUint {}

pub(crate) fn lift<C: Count>(x: u64) -> Result<C> {
    C::from_u64(x).ok_or_else(|| Error::Overflow(format!("constant {x}")))
}

pub(crate) fn add<C: Count>(a: &C, b: &C) -> Result<C> {
    a.checked_add(b).ok_or_else(|| Error::Overflow("sum".into()))
}

pub(crate) fn sub<C: Count>(a: &C, b: &C) -> Result<C> {
    a.checked_sub(b).ok_or_else(|| Error::Overflow("difference (negative result)".into()))
}

pub(crate) fn mul<C: Count>(a: &C, b: &C) -> Result<C> {
    a.checked_mul(b).ok_or_else(|| Error::Overflow("product".into()))
}

/// `C(n, k)` with the total convention: zero when `k < 0`, `k > n` or `n < 0`.
pub fn binomial<C: Count>(n: i64, k: i64) -> Result<C> {
    if n < 0 || k < 0 || k > n {
        return Ok(C::zero());
    }
    let k = k.min(n - k);
    let mut acc = C::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiply.
        acc = mul(&acc, &lift::<C>((n - i) as u64)?)?;
        acc = acc.checked_div(&lift::<C>((i + 1) as u64)?).expect("division by a positive constant");
    }
    Ok(acc)
}

pub fn pow2<C: Count>(e: u32) -> Result<C> {
    let two = lift::<C>(2)?;
    let mut acc = C::one();
    for _ in 0..e {
        acc = mul(&acc, &two)?;
    }
    Ok(acc)
}
