//! Small floating-point helpers with explicit error accounting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub(crate) const U: f64 = f64::EPSILON / 2.0;

/// A real number known to lie in `[value - radius, value + radius]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx {
    pub value: f64,
    pub radius: f64,
}

impl Approx {
    pub fn lower(&self) -> f64 {
        self.value - self.radius
    }

    pub fn upper(&self) -> f64 {
        self.value + self.radius
    }
}

/// Sum by a fixed balanced binary tree, so the result does not depend on how
/// the caller produced the terms.
pub(crate) fn tree_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => tree_sum(&xs[..n / 2]) + tree_sum(&xs[n / 2..]),
    }
}

/// Bound on the rounding error of [`tree_sum`].
pub(crate) fn tree_sum_slack(xs: &[f64]) -> f64 {
    let depth = (xs.len().max(1) as f64).log2().ceil() + 1.0;
    2.0 * depth * U * xs.iter().map(|x| x.abs()).sum::<f64>()
}

/// `x / 2^shift` rounded to nearest, for any size of `x`.
pub(crate) fn big_to_f64_scaled(x: &BigInt, shift: i64) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let bits = x.bits() as i64;
    let (mant, extra) = if bits > 64 {
        (x >> (bits - 64) as usize, bits - 64)
    } else {
        (x.clone(), 0)
    };
    let m = mant.to_f64().unwrap();
    pow2(m, extra - shift)
}

fn pow2(mut m: f64, mut k: i64) -> f64 {
    while k > 1000 {
        m *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        m *= 2f64.powi(-1000);
        k += 1000;
    }
    m * 2f64.powi(k as i32)
}

/// An upper bound for `num / den` (both positive) as a binary64 number.
pub(crate) fn ratio_upper_f64(num: &BigInt, den: &BigInt) -> f64 {
    debug_assert!(den.is_positive());
    if num.is_zero() {
        return 0.0;
    }
    let k = num.bits() as i64 - den.bits() as i64 - 64;
    let q = if k >= 0 {
        num.div_floor(&(den << k as usize))
    } else {
        (num << (-k) as usize).div_floor(den)
    };
    let q = q + 1u32;
    pow2(q.to_f64().unwrap().next_up(), k).next_up()
}

/// `ln |x|` for nonzero `x`, with error below a few ulps.
pub(crate) fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits() as i64;
    if bits <= 1000 {
        return x.abs().to_f64().unwrap().ln();
    }
    let top = (x.abs() >> (bits - 64) as usize).to_f64().unwrap();
    top.ln() + (bits - 64) as f64 * std::f64::consts::LN_2
}

/// Enclosure of `ln` on `[lo, hi]`, `0 < lo <= hi`, widened for rounding.
pub(crate) fn ln_interval(lo: f64, hi: f64) -> (f64, f64) {
    let a = lo.ln();
    let b = hi.ln();
    (a - 2.0 * U * a.abs() - f64::MIN_POSITIVE, b + 2.0 * U * b.abs() + f64::MIN_POSITIVE)
}

/// Enclosure of `log^+` on `[lo, hi]`, `0 <= lo <= hi`.
pub(crate) fn log_plus_interval(lo: f64, hi: f64) -> (f64, f64) {
    if hi <= 1.0 {
        return (0.0, 0.0);
    }
    let (_, b) = ln_interval(hi, hi);
    let a = if lo > 1.0 { ln_interval(lo, lo).0.max(0.0) } else { 0.0 };
    (a, b)
}

/// Enclosure of `log^- x = max(0, -ln x)` on `[lo, hi]`; `None` if `lo <= 0`
/// while `hi < 1`, where the value is unbounded.
pub(crate) fn log_minus_interval(lo: f64, hi: f64) -> Option<(f64, f64)> {
    if lo >= 1.0 {
        return Some((0.0, 0.0));
    }
    if lo <= 0.0 {
        return None;
    }
    let (a, _) = ln_interval(lo, lo);
    let b = if hi < 1.0 { (-ln_interval(hi, hi).1).max(0.0) } else { 0.0 };
    Some((b, -a))
}
