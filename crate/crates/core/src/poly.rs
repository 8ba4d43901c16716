//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! Algebraic numbers are carried around by their minimal polynomials, so this
//! type is the common currency of every other module.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("cannot parse coefficient list: {0}")]
    Parse(String),
    #[error("polynomial is zero")]
    Zero,
    #[error("polynomial is constant")]
    Constant,
}

/// Integer polynomial; `coeffs[i]` is the coefficient of `x^i`.
///
/// The coefficient vector never has trailing zeros, so the zero polynomial is
/// the empty vector and the degree is `coeffs.len() - 1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `x - a`
    pub fn linear_root(a: &BigInt) -> Self {
        Self::new(vec![-a, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial reported as an error, and constants
    /// rejected; the usual precondition for interpreting roots.
    pub fn root_degree(&self) -> Result<usize, PolyError> {
        match self.degree() {
            None => Err(PolyError::Zero),
            Some(0) => Err(PolyError::Constant),
            Some(d) => Ok(d),
        }
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Number of leading zero coefficients, i.e. the order of vanishing at 0.
    pub fn order_at_zero(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Removes factors of `x`.
    pub fn strip_zero_roots(&self) -> (IntPolynomial, usize) {
        let k = self.order_at_zero();
        (IntPolynomial::new(self.coeffs[k..].to_vec()), k)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `x^n f(1/x)`; the roots are inverted.
    pub fn reversed(&self) -> Self {
        let (stripped, _) = self.strip_zero_roots();
        let mut c = stripped.coeffs;
        c.reverse();
        Self::new(c)
    }

    /// `f(-x)`
    pub fn negate_variable(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `f(a + b x)`
    pub fn compose_affine(&self, a: &BigInt, b: &BigInt) -> Self {
        let lin = Self::new(vec![a.clone(), b.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    /// Exact division over `Z`; `None` if `divisor` does not divide `self` in `Z[x]`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_over_z(divisor)?;
        r.is_zero().then_some(q)
    }

    /// Long division that only succeeds while every leading quotient is integral.
    fn div_rem_over_z(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
            quot[k] = q;
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo_rem by zero");
        let lead = b.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let top = r.leading().unwrap().clone();
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lead).collect();
            for (j, d) in b.coeffs.iter().enumerate() {
                next[dr - db + j] -= &top * d;
            }
            r = Self::new(next);
        }
        r
    }

    /// Gcd in `Z[x]` (primitive, positive leading coefficient, times the gcd of contents).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part() };
        }
        a.primitive_part().scale(&c)
    }

    pub fn is_squarefree(&self) -> bool {
        let g = self.primitive_part().gcd(&self.derivative());
        g.degree() == Some(0)
    }

    /// Squarefree decomposition (Yun) of the primitive part: pairs
    /// `(g_i, i)` with `prim(f) = prod g_i^i`, each `g_i` squarefree and non-constant.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPolynomial, usize)> {
        let f = self.primitive_part();
        let mut out = Vec::new();
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let a0 = f.gcd(&f.derivative()).primitive_part();
        let mut b = f.div_exact(&a0).expect("gcd divides f").primitive_part();
        let c = f.derivative().div_exact_q(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d).primitive_part();
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            let nb = b.div_exact(&a).expect("gcd divides b").primitive_part();
            let nc = d.div_exact_q(&a);
            d = &nc - &nb.derivative();
            b = nb;
            i += 1;
        }
        out
    }

    /// Division by a primitive divisor that divides over `Q`; by Gauss's lemma the
    /// quotient is integral up to the unit freedom fixed here.
    fn div_exact_q(&self, divisor: &Self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        // scale so the division is integral, then remove the scale again
        let dd = divisor.degree().unwrap();
        let sd = self.degree().unwrap();
        let k = sd.saturating_sub(dd) + 1;
        let lead_pow = divisor.leading().unwrap().pow(k as u32);
        let scaled = self.scale(&lead_pow);
        let q = scaled.div_exact(divisor).expect("divisor divides over Q");
        Self::new(q.coeffs.iter().map(|c| c / &lead_pow).collect())
    }

    /// Resultant via the Sylvester matrix and fraction-free (Bareiss) elimination.
    pub fn resultant(&self, other: &Self) -> BigInt {
        let (m, n) = match (self.degree(), other.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return BigInt::zero(),
        };
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for row in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                mat[row][row + j] = c.clone();
            }
        }
        for row in 0..m {
            for (j, c) in other.coeffs.iter().rev().enumerate() {
                mat[n + row][row + j] = c.clone();
            }
        }
        bareiss_determinant(mat)
    }

    /// `disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return BigInt::zero(),
        };
        let res = self.resultant(&self.derivative());
        let d = res / self.leading().unwrap();
        if (n * (n - 1) / 2) % 2 == 1 {
            -d
        } else {
            d
        }
    }

    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Ordering used for deterministic tie-breaks: degree first, then
    /// coefficients from the top down.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// Comma-separated coefficient list, constant term first.
    pub fn to_coeff_list(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

impl std::ops::Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl std::ops::Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl std::ops::Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl std::ops::Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl FromStr for IntPolynomial {
    type Err = PolyError;

    /// Parses `"c0,c1,...,cn"` (constant term first); whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coeffs = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<BigInt>()
                    .map_err(|_| PolyError::Parse(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.is_empty() {
            return Err(PolyError::Parse("empty coefficient list".into()));
        }
        Ok(IntPolynomial::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn trims_and_degree() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert_eq!(p(&[5]).root_degree(), Err(PolyError::Constant));
    }

    #[test]
    fn display_and_parse() {
        let f: IntPolynomial = "-1,-1,1".parse().unwrap();
        assert_eq!(f.to_string(), "x^2 - x - 1");
        assert_eq!(p(&[4, 0, 0, 0, 1]).to_string(), "x^4 + 4");
        assert_eq!(p(&[0, -3]).to_string(), "-3x");
        assert!("1,a".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn sophie_germain_division() {
        let f = p(&[4, 0, 0, 0, 1]);
        let g = p(&[2, -2, 1]);
        let h = p(&[2, 2, 1]);
        assert_eq!(&g * &h, f);
        assert_eq!(f.div_exact(&g), Some(h));
        assert_eq!(f.div_exact(&p(&[1, 0, 1])), None);
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        assert!(!f.is_squarefree());
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]);
        let g = p(&[-2, 0, 1]);
        assert!(g.is_squarefree());
        assert_eq!(g.squarefree_decomposition(), vec![(g.clone(), 1)]);
        // non-monic with repeated factor (2x-1)^3
        let h = &(&p(&[-1, 2]) * &p(&[-1, 2])) * &p(&[-1, 2]);
        assert_eq!(h.squarefree_decomposition(), vec![(p(&[-1, 2]), 3)]);
    }

    #[test]
    fn discriminants() {
        assert_eq!(p(&[-17, 0, 1]).discriminant(), BigInt::from(68));
        assert_eq!(p(&[-1, -1, 1]).discriminant(), BigInt::from(5));
        assert_eq!(p(&[-1, -1, 0, 1]).discriminant(), BigInt::from(-23));
        // a x^2 + b x + c
        assert_eq!(p(&[3, 5, 2]).discriminant(), BigInt::from(25 - 24));
    }

    #[test]
    fn compose_and_reverse() {
        let f = p(&[-17, 0, 1]);
        // f(1 + 2x) = 4x^2 + 4x - 16
        assert_eq!(
            f.compose_affine(&BigInt::from(1), &BigInt::from(2)),
            p(&[-16, 4, 4])
        );
        assert_eq!(p(&[-1, 2]).reversed(), p(&[2, -1]));
        assert_eq!(p(&[0, 0, 3, 1]).reversed(), p(&[1, 3]));
    }
}
