//! p-adic arithmetic: valuations, Newton polygons, the unramified extensions
//! `Q_{p^f}` with explicit precision, Hensel lifting and root counting.

mod hensel;
mod newton;
mod roots;
mod unramified;

pub use hensel::{hensel_lift, hensel_lift_traced};
pub use newton::{newton_polygon, NewtonPolygon, Segment};
pub use roots::{
    count_roots_in_unramified, count_roots_with, split_tree, PrecisionPolicy, RootCount, SplitTree,
    DEFAULT_PRECISION_CAP, INITIAL_PRECISION,
};
pub use unramified::{PAdicElement, ResidueField, Unramified};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    BadDegree,
    #[error("polynomial has no roots (constant)")]
    NoRoots,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("not liftable at this precision: v(f(a)) = {value_val} is not > 2 v(f'(a)) = {twice_deriv_val}")]
    NotLiftable { value_val: i64, twice_deriv_val: i64 },
    #[error("undecided at precision {0}")]
    Undecided(u32),
    #[error("elements from different rings")]
    RingMismatch,
    #[error("element is not a unit")]
    NotUnit,
}

/// p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Exponent of `p` in a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        n = q;
        v += 1;
    }
}

/// Exponent of `p` in a rational number; `|n|_p = p^(-vp(n))`.
pub fn vp(n: &BigRational, p: u64) -> Valuation {
    match (vp_int(n.numer(), p), vp_int(n.denom(), p)) {
        (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
        _ => Valuation::Infinite,
    }
}

/// Valuation capped at `cap`, for truncated quantities.
pub(crate) fn vp_capped(n: &BigInt, p: u64, cap: u32) -> u32 {
    match vp_int(n, p) {
        Valuation::Infinite => cap,
        Valuation::Finite(v) => (v.to_u32().unwrap_or(u32::MAX)).min(cap),
    }
}

/// Prime factors of `|n|` by trial division, ascending, without multiplicity.
pub fn prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = 2u64;
    loop {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::from(1) {
        out.push(n.to_u64().expect("prime cofactor fits in u64"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(vp(&q(12, 1), 2), Valuation::Finite(2));
        assert_eq!(vp(&q(5, 8), 2), Valuation::Finite(-3));
        assert_eq!(vp(&q(1, 1), 7), Valuation::Finite(0));
        assert_eq!(vp(&q(0, 1), 3), Valuation::Infinite);
    }

    #[test]
    fn primes_and_divisors() {
        assert!(is_prime(2) && is_prime(97) && !is_prime(1) && !is_prime(91));
        assert_eq!(prime_divisors(&BigInt::from(-68)), vec![2, 17]);
        assert_eq!(prime_divisors(&BigInt::from(23)), vec![23]);
        assert!(prime_divisors(&BigInt::from(1)).is_empty());
    }

    fn small_prime() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn valuation_is_additive(
            a in -100_000i64..100_000, b in 1i64..100_000,
            c in -100_000i64..100_000, d in 1i64..100_000,
            p in small_prime(),
        ) {
            prop_assume!(a != 0 && c != 0);
            let x = q(a, b);
            let y = q(c, d);
            let (vx, vy) = (vp(&x, p).finite().unwrap(), vp(&y, p).finite().unwrap());
            prop_assert_eq!(vp(&(&x * &y), p), Valuation::Finite(vx + vy));
        }
    }
}
