use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{is_prime, vp_capped, PadicError};
use crate::ffpoly;

/// The residue field `F_q`, `q = p^f`, realised as `F_p[t]/(h(t))`.
///
/// Elements are coefficient vectors of length `f` (constant term first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    degree: u32,
    /// Monic, degree `f`, coefficients in `[0, p)`.
    modulus: Vec<u64>,
}

pub type Fq = Vec<u64>;

impl ResidueField {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Fq {
        vec![0; self.degree as usize]
    }

    pub fn one(&self) -> Fq {
        let mut e = self.zero();
        e[0] = 1 % self.p;
        e
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// The `k`-th element in base-`p` digit order, `0 <= k < q`.
    pub fn element(&self, mut k: u64) -> Fq {
        let mut e = self.zero();
        for c in e.iter_mut() {
            *c = k % self.p;
            k /= self.p;
        }
        e
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Fq {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Fq {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Fq {
        if self.degree == 1 {
            return vec![((a[0] as u128 * b[0] as u128) % self.p as u128) as u64];
        }
        let prod = ffpoly::mul(a, b, self.p);
        let r = ffpoly::rem(&prod, &self.modulus, self.p);
        let mut e = self.zero();
        e[..r.len()].copy_from_slice(&r);
        e
    }

    pub fn inv(&self, a: &[u64]) -> Option<Fq> {
        if self.is_zero(a) {
            return None;
        }
        // a^(q-2)
        let mut acc = self.one();
        let mut base = a.to_vec();
        let mut e = self.order() - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Some(acc)
    }

    /// Horner evaluation of a polynomial with `F_q` coefficients.
    pub fn eval(&self, poly: &[Fq], x: &[u64]) -> Fq {
        let mut acc = self.zero();
        for c in poly.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// Roots in `F_q` with multiplicity, by exhaustive evaluation and deflation.
    /// `poly` must be nonzero with no trailing zero coefficients.
    pub fn roots_with_multiplicity(&self, poly: &[Fq]) -> Vec<(Fq, usize)> {
        let deg = poly.len().saturating_sub(1);
        let mut out = Vec::new();
        let mut found = 0;
        for k in 0..self.order() {
            if found == deg {
                break;
            }
            let r = self.element(k);
            let mut cur = poly.to_vec();
            let mut m = 0;
            loop {
                let (q, rem) = self.synthetic_division(&cur, &r);
                if !self.is_zero(&rem) {
                    break;
                }
                m += 1;
                cur = q;
                if cur.len() <= 1 {
                    break;
                }
            }
            if m > 0 {
                found += m;
                out.push((r, m));
            }
        }
        out
    }

    /// Divides by `x - r`; returns quotient and remainder.
    fn synthetic_division(&self, poly: &[Fq], r: &[u64]) -> (Vec<Fq>, Fq) {
        let n = poly.len();
        let mut q = vec![self.zero(); n.saturating_sub(1)];
        let mut acc = self.zero();
        for i in (0..n).rev() {
            acc = self.add(&self.mul(&acc, r), &poly[i]);
            if i > 0 {
                q[i - 1] = acc.clone();
            }
        }
        (q, acc)
    }
}

/// The ring of integers of the unramified extension of `Q_p` of degree `f`,
/// modelled as `Z_p[t]/(h(t))` with `h` the integer lift of the residue modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unramified {
    residue: ResidueField,
    modulus: Vec<BigInt>,
}

impl Unramified {
    pub fn new(p: u64, degree: u32) -> Result<Arc<Self>, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        if degree == 0 {
            return Err(PadicError::BadDegree);
        }
        let h = ffpoly::smallest_irreducible(p, degree);
        let modulus = h.iter().map(|&c| BigInt::from(c)).collect();
        Ok(Arc::new(Unramified {
            residue: ResidueField {
                p,
                degree,
                modulus: h,
            },
            modulus,
        }))
    }

    pub fn p(&self) -> u64 {
        self.residue.p
    }

    pub fn degree(&self) -> u32 {
        self.residue.degree
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.residue
    }

    /// Defining polynomial `h`, constant term first, for reproducibility logs.
    pub fn defining_polynomial(&self) -> &[u64] {
        &self.residue.modulus
    }

    pub fn p_pow(&self, k: u32) -> BigInt {
        BigInt::from(self.p()).pow(k)
    }

    pub(crate) fn zero_rep(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.degree() as usize]
    }

    pub(crate) fn reduce(&self, a: &mut [BigInt], modulus: &BigInt) {
        for c in a.iter_mut() {
            *c = c.mod_floor(modulus);
        }
    }

    pub(crate) fn add_rep(&self, a: &[BigInt], b: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| (x + y).mod_floor(modulus)).collect()
    }

    pub(crate) fn sub_rep(&self, a: &[BigInt], b: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| (x - y).mod_floor(modulus)).collect()
    }

    pub(crate) fn mul_rep(&self, a: &[BigInt], b: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
        let f = self.degree() as usize;
        if f == 1 {
            return vec![(&a[0] * &b[0]).mod_floor(modulus)];
        }
        let mut prod = vec![BigInt::zero(); 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        // reduce by the monic modulus from the top
        for k in (f..prod.len()).rev() {
            let top = std::mem::take(&mut prod[k]);
            if top.is_zero() {
                continue;
            }
            for (j, hj) in self.modulus[..f].iter().enumerate() {
                prod[k - f + j] -= &top * hj;
            }
        }
        prod.truncate(f);
        self.reduce(&mut prod, modulus);
        prod
    }

    pub(crate) fn scalar_rep(&self, c: &BigInt, modulus: &BigInt) -> Vec<BigInt> {
        let mut e = self.zero_rep();
        e[0] = c.mod_floor(modulus);
        e
    }

    /// Valuation of a representative known modulo `p^prec`, capped at `prec`.
    pub(crate) fn val_rep(&self, a: &[BigInt], prec: u32) -> u32 {
        a.iter()
            .map(|c| vp_capped(c, self.p(), prec))
            .min()
            .unwrap_or(prec)
    }

    pub(crate) fn residue_of(&self, a: &[BigInt]) -> Fq {
        let p = BigInt::from(self.p());
        a.iter()
            .map(|c| c.mod_floor(&p).to_u64().unwrap())
            .collect()
    }

    /// Canonical lift of a residue-field element (digits in `[0, p)`).
    pub(crate) fn lift_residue(&self, r: &[u64]) -> Vec<BigInt> {
        r.iter().map(|&c| BigInt::from(c)).collect()
    }

    pub fn element(self: &Arc<Self>, mut rep: Vec<BigInt>, prec: u32) -> PAdicElement {
        rep.resize(self.degree() as usize, BigInt::zero());
        let m = self.p_pow(prec);
        self.reduce(&mut rep, &m);
        let val = self.val_rep(&rep, prec);
        PAdicElement {
            ring: Arc::clone(self),
            prec,
            rep,
            val,
        }
    }

    pub fn from_int(self: &Arc<Self>, n: &BigInt, prec: u32) -> PAdicElement {
        self.element(vec![n.clone()], prec)
    }
}

/// A truncated element of `Z_p[t]/(h)`, known modulo `p^prec`.
#[derive(Clone)]
pub struct PAdicElement {
    ring: Arc<Unramified>,
    prec: u32,
    rep: Vec<BigInt>,
    val: u32,
}

impl PAdicElement {
    pub fn ring(&self) -> &Arc<Unramified> {
        &self.ring
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn rep(&self) -> &[BigInt] {
        &self.rep
    }

    /// Known lower bound on the valuation; equals `prec` when the element is
    /// indistinguishable from zero.
    pub fn val(&self) -> u32 {
        self.val
    }

    pub fn is_zero(&self) -> bool {
        self.val >= self.prec
    }

    pub fn is_unit(&self) -> bool {
        self.val == 0 && self.prec > 0
    }

    pub fn residue(&self) -> Fq {
        self.ring.residue_of(&self.rep)
    }

    pub fn with_prec(&self, prec: u32) -> PAdicElement {
        self.ring.element(self.rep.clone(), prec.min(self.prec))
    }

    /// Same representative, declared known to a different precision. The
    /// representative is treated as an exact value.
    pub fn lifted_to(&self, prec: u32) -> PAdicElement {
        self.ring.element(self.rep.clone(), prec)
    }

    fn check(&self, other: &PAdicElement) -> Result<(), PadicError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(PadicError::RingMismatch)
        }
    }

    pub fn add(&self, other: &PAdicElement) -> Result<PAdicElement, PadicError> {
        self.check(other)?;
        let prec = self.prec.min(other.prec);
        let m = self.ring.p_pow(prec);
        Ok(self.ring.element(self.ring.add_rep(&self.rep, &other.rep, &m), prec))
    }

    pub fn sub(&self, other: &PAdicElement) -> Result<PAdicElement, PadicError> {
        self.check(other)?;
        let prec = self.prec.min(other.prec);
        let m = self.ring.p_pow(prec);
        Ok(self.ring.element(self.ring.sub_rep(&self.rep, &other.rep, &m), prec))
    }

    /// Product; absolute precision is `min(prec_a + val_b, prec_b + val_a)`.
    pub fn mul(&self, other: &PAdicElement) -> Result<PAdicElement, PadicError> {
        self.check(other)?;
        let prec = (self.prec + other.val).min(other.prec + self.val);
        let m = self.ring.p_pow(prec);
        Ok(self.ring.element(self.ring.mul_rep(&self.rep, &other.rep, &m), prec))
    }

    /// Inverse of a unit, by Newton iteration `y <- y (2 - a y)` from the residue inverse.
    pub fn inverse(&self) -> Result<PAdicElement, PadicError> {
        if !self.is_unit() {
            return Err(PadicError::NotUnit);
        }
        let rf = self.ring.residue_field();
        let r0 = rf.inv(&self.residue()).ok_or(PadicError::NotUnit)?;
        let mut y = self.ring.lift_residue(&r0);
        let two = self.ring.scalar_rep(&BigInt::from(2), &self.ring.p_pow(self.prec));
        let mut known = 1u32;
        while known < self.prec {
            known = (2 * known).min(self.prec);
            let m = self.ring.p_pow(known);
            let ay = self.ring.mul_rep(&self.rep, &y, &m);
            let t = self.ring.sub_rep(&two, &ay, &m);
            y = self.ring.mul_rep(&y, &t, &m);
        }
        Ok(self.ring.element(y, self.prec))
    }

    /// Evaluates an integer polynomial at this element.
    pub fn eval_poly(&self, f: &crate::poly::IntPolynomial) -> PAdicElement {
        let m = self.ring.p_pow(self.prec);
        let mut acc = self.ring.zero_rep();
        for c in f.coeffs().iter().rev() {
            acc = self.ring.mul_rep(&acc, &self.rep, &m);
            acc[0] = (&acc[0] + c).mod_floor(&m);
        }
        self.ring.element(acc, self.prec)
    }
}

impl fmt::Debug for PAdicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self, self.ring.p(), self.prec)
    }
}

impl fmt::Display for PAdicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ring.degree() == 1 {
            return write!(f, "{}", self.rep[0]);
        }
        let terms: Vec<String> = self
            .rep
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 if c.is_one() => "t".to_string(),
                1 => format!("{c}t"),
                _ if c.is_one() => format!("t^{i}"),
                _ => format!("{c}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl PartialEq for PAdicElement {
    /// Equality at the common precision.
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_field_f9() {
        let ring = Unramified::new(3, 2).unwrap();
        let rf = ring.residue_field();
        assert_eq!(rf.order(), 9);
        assert_eq!(ring.defining_polynomial(), &[1, 0, 1]);
        // t^2 = -1
        let t = vec![0, 1];
        assert_eq!(rf.mul(&t, &t), vec![2, 0]);
        for k in 1..9 {
            let a = rf.element(k);
            assert_eq!(rf.mul(&a, &rf.inv(&a).unwrap()), rf.one());
        }
        // x^2 + 1 has the two roots t and -t
        let poly = vec![rf.one(), rf.zero(), rf.one()];
        let roots = rf.roots_with_multiplicity(&poly);
        assert_eq!(roots, vec![(vec![0, 1], 1), (vec![0, 2], 1)]);
    }

    #[test]
    fn multiplicities_over_f2() {
        let rf = Unramified::new(2, 1).unwrap().residue_field().clone();
        // x^2 (x+1)^3
        let coeffs = [0u64, 0, 1, 1, 1, 1];
        let poly: Vec<Fq> = coeffs.iter().map(|&c| vec![c]).collect();
        assert_eq!(
            rf.roots_with_multiplicity(&poly),
            vec![(vec![0], 2), (vec![1], 3)]
        );
    }

    #[test]
    fn arithmetic_tracks_precision() {
        let ring = Unramified::new(5, 1).unwrap();
        let a = ring.from_int(&BigInt::from(10), 6); // val 1
        let b = ring.from_int(&BigInt::from(3), 4);
        let s = a.add(&b).unwrap();
        assert_eq!(s.prec(), 4);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.prec(), 5); // min(6 + 0, 4 + 1)
        assert_eq!(prod.val(), 1);
        let inv = b.inverse().unwrap();
        assert!(inv.mul(&b).unwrap() == ring.from_int(&BigInt::one(), 4));
        assert_eq!(a.inverse().unwrap_err(), PadicError::NotUnit);
    }

    #[test]
    fn unit_inverse_in_extension() {
        let ring = Unramified::new(2, 3).unwrap();
        let a = ring.element(vec![BigInt::from(3), BigInt::from(5), BigInt::from(6)], 20);
        let one = ring.from_int(&BigInt::one(), 20);
        assert!(a.mul(&a.inverse().unwrap()).unwrap() == one);
    }
}
