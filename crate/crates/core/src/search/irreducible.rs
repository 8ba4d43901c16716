//! Exact irreducibility over `Q` for integer polynomials of small degree.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SearchError;
use crate::ffpoly;
use crate::poly::IntPolynomial;

pub const MAX_IRREDUCIBILITY_DEGREE: usize = 12;

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];
const RABIN_PRIMES: usize = 3;
const PATTERN_PRIMES: usize = 12;

/// Whether `f` is irreducible over `Q`. Works on the primitive part, so the
/// content is ignored.
///
/// Tries, in order: an irreducible reduction modulo one of the first three
/// usable primes; incompatible factor-degree patterns across several primes;
/// and finally Kronecker's method, which is complete.
pub fn certify_irreducible(f: &IntPolynomial) -> Result<bool, SearchError> {
    let f = f.primitive_part();
    let n = match f.degree() {
        None | Some(0) => return Err(SearchError::NotIrreducibleInput),
        Some(n) => n,
    };
    if n > MAX_IRREDUCIBILITY_DEGREE {
        return Err(SearchError::DegreeTooLarge(n));
    }
    if n == 1 {
        return Ok(true);
    }
    if f.coeff(0).is_zero() || !f.is_squarefree() {
        return Ok(false);
    }

    let mut possible: BTreeSet<usize> = (1..=n / 2).collect();
    let mut rabin_tries = 0;
    let mut patterns = 0;
    for &p in &SMALL_PRIMES {
        if patterns == PATTERN_PRIMES || possible.is_empty() {
            break;
        }
        let lead = f.leading().unwrap();
        if (lead % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce(&f, p);
        let squarefree = ffpoly::degree(&ffpoly::gcd(&fp, &ffpoly::derivative(&fp, p), p)) == Some(0);
        if !squarefree {
            continue;
        }
        if rabin_tries < RABIN_PRIMES {
            rabin_tries += 1;
            if ffpoly::is_irreducible(&fp, p) {
                return Ok(true);
            }
        }
        let counts = ffpoly::distinct_degree_counts(&fp, p);
        let sums = subset_sums(&counts);
        possible.retain(|d| sums.contains(d));
        patterns += 1;
    }
    for d in possible {
        if kronecker_factor(&f, d)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn reduce(f: &IntPolynomial, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    ffpoly::trim(
        f.coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

/// Degrees of all products of sub-multisets of the factors.
fn subset_sums(counts: &[(usize, usize)]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0usize]);
    for &(d, c) in counts {
        for _ in 0..c {
            let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
            sums.extend(next);
        }
    }
    sums
}

/// A factor of degree `d`, found by interpolating through divisors of the
/// values of `f` at `d + 1` integer points. An integer root met while sampling
/// is returned as a linear factor instead.
pub fn kronecker_factor(f: &IntPolynomial, d: usize) -> Result<Option<IntPolynomial>, SearchError> {
    let n = f.degree().unwrap_or(0);
    // Candidate points, preferring values with few divisors.
    let mut pts: Vec<(usize, i64, Vec<BigInt>)> = Vec::new();
    let mut x = 0i64;
    let mut step = 0;
    while pts.len() < (2 * (d + 1)).max(n + 2) && step < 8 * (n + 2) {
        let v = f.eval_i64(x);
        if v.is_zero() {
            // x is a rational root
            return Ok(Some(IntPolynomial::linear_root(&BigInt::from(x))));
        }
        if let Some(divs) = divisors(&v) {
            pts.push((divs.len(), x, divs));
        }
        step += 1;
        x = if x > 0 { -x } else { -x + 1 };
    }
    if pts.len() < d + 1 {
        return Err(SearchError::KroneckerValues);
    }
    pts.sort_by_key(|(count, x, _)| (*count, x.abs(), *x));
    pts.truncate(d + 1);

    let xs: Vec<BigRational> = pts.iter().map(|(_, x, _)| BigRational::from_integer(BigInt::from(*x))).collect();
    let choices: Vec<&Vec<BigInt>> = pts.iter().map(|(_, _, divs)| divs).collect();
    let lead = f.leading().unwrap().clone();
    let a0 = f.coeff(0);

    let mut idx = vec![0usize; d + 1];
    let mut signs = vec![false; d + 1];
    loop {
        // first value kept positive: g and -g are the same factor
        let ys: Vec<BigRational> = (0..=d)
            .map(|i| {
                let v = choices[i][idx[i]].clone();
                BigRational::from_integer(if signs[i] { -v } else { v })
            })
            .collect();
        if let Some(g) = interpolate(&xs, &ys) {
            if g.degree() == Some(d)
                && (&lead % g.leading().unwrap()).is_zero()
                && !g.coeff(0).is_zero()
                && (&a0 % g.coeff(0)).is_zero()
                && f.div_exact(&g).is_some()
            {
                return Ok(Some(g));
            }
        }
        // odometer over (divisor, sign) at each point
        let mut i = d;
        loop {
            if i > 0 && !signs[i] {
                signs[i] = true;
                break;
            }
            signs[i] = false;
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
        }
    }
}

/// Integer polynomial through the points, if the interpolant has integer coefficients.
fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Option<IntPolynomial> {
    let m = xs.len();
    // Newton divided differences
    let mut coef: Vec<BigRational> = ys.to_vec();
    for j in 1..m {
        for i in (j..m).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut poly = vec![BigRational::zero(); m];
    // Horner in Newton form
    for k in (0..m).rev() {
        // poly = poly * (x - xs[k]) + coef[k]
        let mut next = vec![BigRational::zero(); m];
        for (i, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i + 1 < m {
                next[i + 1] += c;
            }
            next[i] -= c * &xs[k];
        }
        next[0] += &coef[k];
        poly = next;
    }
    if poly.iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(IntPolynomial::new(poly.into_iter().map(|c| c.to_integer()).collect()))
}

/// Positive divisors of `|v|`, or `None` if `|v|` is too large to factor by trial division.
fn divisors(v: &BigInt) -> Option<Vec<BigInt>> {
    let mut m = v.abs().to_u64()?;
    if m > 1 << 50 {
        return None;
    }
    let mut pf: Vec<(u64, u32)> = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            let mut k = 0;
            while m % d == 0 {
                m /= d;
                k += 1;
            }
            pf.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        pf.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, k) in pf {
        let cur = divs.clone();
        let mut pk = BigInt::one();
        for _ in 0..k {
            pk *= p;
            divs.extend(cur.iter().map(|c| c * &pk));
        }
    }
    divs.sort();
    Some(divs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn examples() {
        assert!(certify_irreducible(&poly(&[-1, -1, 1])).unwrap());
        assert!(!certify_irreducible(&poly(&[4, 0, 0, 0, 1])).unwrap());
        assert!(certify_irreducible(&poly(&[-1, -1, 0, 1])).unwrap());
        assert!(!certify_irreducible(&poly(&[-4, 0, 1])).unwrap());
        assert!(certify_irreducible(&poly(&[-2, 4])).unwrap());
        assert!(certify_irreducible(&poly(&[1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1])).is_ok());
    }

    #[test]
    fn kronecker_finds_sophie_germain_factor() {
        let g = kronecker_factor(&poly(&[4, 0, 0, 0, 1]), 2).unwrap().unwrap();
        assert!(g == poly(&[2, 2, 1]) || g == poly(&[2, -2, 1]) || g == poly(&[-2, -2, -1]) || g == poly(&[-2, 2, -1]));
    }

    #[test]
    fn swinnerton_dyer_is_irreducible() {
        // x^4 - 10x^2 + 1 is reducible modulo every prime
        assert!(certify_irreducible(&poly(&[1, 0, -10, 0, 1])).unwrap());
        // (x^2 - 2)(x^2 - 3)
        assert!(!certify_irreducible(&poly(&[6, 0, -5, 0, 1])).unwrap());
    }

    #[test]
    fn products_are_reducible() {
        let a = poly(&[3, -1, 0, 1]);
        let b = poly(&[-5, 2, 1, 0, 1]);
        assert!(certify_irreducible(&a).unwrap() && certify_irreducible(&b).unwrap());
        assert!(!certify_irreducible(&(&a * &b)).unwrap());
    }
}
