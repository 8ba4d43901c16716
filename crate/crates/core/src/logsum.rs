//! Exact finite sums `sum_p c_p log p` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

/// A real number `sum_p c_p log p`, kept symbolically. Keys are primes (or any
/// integers `> 1`; [`LogSum::log_of`] factors them).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LogSum {
    terms: BTreeMap<u64, BigRational>,
}

impl LogSum {
    pub fn zero() -> Self {
        LogSum::default()
    }

    /// `c · log p`.
    pub fn term(c: BigRational, p: u64) -> Self {
        let mut s = LogSum::zero();
        s.add_term(c, p);
        s
    }

    /// `c · log m`, with `m` factored into primes.
    pub fn log_of(c: BigRational, m: u64) -> Self {
        assert!(m >= 1, "log of zero");
        let mut s = LogSum::zero();
        let mut m = m;
        let mut d = 2;
        while d * d <= m {
            let mut k = 0;
            while m % d == 0 {
                m /= d;
                k += 1;
            }
            if k > 0 {
                s.add_term(&c * BigInt::from(k), d);
            }
            d += 1;
        }
        if m > 1 {
            s.add_term(c, m);
        }
        s
    }

    pub fn add_term(&mut self, c: BigRational, p: u64) {
        if c.is_zero() || p == 1 {
            return;
        }
        let slot = self.terms.entry(p).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: u64) -> BigRational {
        self.terms.get(&p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(&p, c)| (p, c))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut s = LogSum::zero();
        for (&p, c) in &self.terms {
            s.add_term(c * k, p);
        }
        s
    }

    /// Decimal value. Each term is evaluated in binary64 and summed in order of
    /// increasing `p`.
    pub fn value(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&p, c)| ratio_to_f64(c) * (p as f64).ln())
            .sum()
    }

    /// Sign, decided exactly when the sum has a single term and numerically
    /// otherwise (logs of distinct primes are linearly independent over `Q`,
    /// so the value is never exactly zero unless the sum is empty).
    pub fn signum(&self) -> i32 {
        if self.terms.is_empty() {
            return 0;
        }
        if self.terms.len() == 1 || self.terms.values().all(|c| c.is_positive()) {
            return if self.terms.values().next().unwrap().is_positive() { 1 } else { -1 };
        }
        if self.terms.values().all(|c| c.is_negative()) {
            return -1;
        }
        if self.value() > 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(p, c)| json!({"coefficient": c.to_string(), "log_of": p}))
            .collect();
        json!({"terms": terms, "value": format!("{:.12}", self.value())})
    }
}

pub(crate) fn ratio_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // huge numerators and denominators; rescale first
        let shift = c.numer().bits().max(c.denom().bits()) as i64 - 60;
        let n = (c.numer() >> shift.max(0) as usize).to_f64().unwrap();
        let d = (c.denom() >> shift.max(0) as usize).to_f64().unwrap();
        n / d
    })
}

impl Add for &LogSum {
    type Output = LogSum;

    fn add(self, rhs: &LogSum) -> LogSum {
        let mut s = self.clone();
        for (&p, c) in &rhs.terms {
            s.add_term(c.clone(), p);
        }
        s
    }
}

impl Sub for &LogSum {
    type Output = LogSum;

    fn sub(self, rhs: &LogSum) -> LogSum {
        self + &(-rhs)
    }
}

impl Neg for &LogSum {
    type Output = LogSum;

    fn neg(self) -> LogSum {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Display for LogSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            match (i, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if mag.is_one() {
                write!(f, "log {p}")?;
            } else if mag.numer().is_one() {
                write!(f, "log {p}/{}", mag.denom())?;
            } else {
                write!(f, "({mag}) log {p}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn arithmetic_and_display() {
        let a = LogSum::term(r(1, 2), 2);
        let b = &LogSum::log_of(r(1, 3), 12) - &a;
        // (1/3) log 12 - (1/2) log 2 = (2/3 - 1/2) log 2 + (1/3) log 3
        assert_eq!(b.coefficient(2), r(1, 6));
        assert_eq!(b.coefficient(3), r(1, 3));
        assert_eq!(b.to_string(), "log 2/6 + log 3/3");
        assert!((&a - &a).is_zero());
        assert_eq!((-&a).to_string(), "-log 2/2");
        assert!((a.value() - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(LogSum::term(r(-3, 2), 5).signum(), -1);
    }
}
