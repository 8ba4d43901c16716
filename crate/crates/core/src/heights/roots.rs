//! Certified complex roots.
//!
//! Approximations come from Aberth–Ehrlich iteration, first in binary64 and,
//! when that cannot meet the requested radius, in binary fixed point over
//! `BigInt`. Each approximation set is then certified exactly: with `z_i`
//! converted to dyadic rationals, the discs
//! `|z - z_i| <= n |f(z_i)| / |a_n prod_{j != i} (z_i - z_j)|`
//! cover all roots and, when pairwise disjoint, each holds exactly one.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};

use super::numeric::{big_ln, big_to_f64_scaled, ratio_upper_f64, U};
use super::HeightError;
use crate::poly::IntPolynomial;

const F64_ITERATIONS: usize = 600;
const FIXED_START_BITS: u32 = 128;
const FIXED_MAX_BITS: u32 = 4096;

/// Complex roots with certified inclusion radii. Centers are exact dyadic
/// numbers `(re + i im) / 2^scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    centers: Vec<(BigInt, BigInt)>,
    scale: u32,
    /// Centers rounded to binary64.
    pub roots: Vec<Complex64>,
    /// Certified radius for each root.
    pub radii: Vec<f64>,
    /// `max_i radii[i]`.
    pub radius: f64,
    /// `max_i |f(z_i)| / |a_n prod_{j != i}(z_i - z_j)|`.
    pub residual_bound: f64,
    pub iterations: usize,
    /// 53 for the binary64 path, the fixed-point width otherwise.
    pub precision_bits: u32,
    /// Natural log of a lower bound for the minimal root separation.
    pub log_separation_bound: f64,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.centers.len()
    }

    /// Enclosure of `|alpha_i|`.
    pub fn abs_interval(&self, i: usize) -> (f64, f64) {
        let (re, im) = &self.centers[i];
        let m = magnitude(re, im, self.scale);
        ((m * (1.0 - 4.0 * U) - self.radii[i]).max(0.0), (m * (1.0 + 4.0 * U) + self.radii[i]).next_up())
    }

    /// Enclosure of `|alpha_i - alpha_j|`.
    pub fn distance_interval(&self, i: usize, j: usize) -> (f64, f64) {
        let (a, b) = (&self.centers[i], &self.centers[j]);
        let m = magnitude(&(&a.0 - &b.0), &(&a.1 - &b.1), self.scale);
        let r = (self.radii[i] + self.radii[j]).next_up();
        ((m * (1.0 - 4.0 * U) - r).max(0.0), (m * (1.0 + 4.0 * U) + r).next_up())
    }
}

fn magnitude(re: &BigInt, im: &BigInt, scale: u32) -> f64 {
    let sq = re * re + im * im;
    big_to_f64_scaled(&sq, 2 * scale as i64).sqrt()
}

/// Roots of the squarefree polynomial `f` with every certified radius below `eps`.
pub fn find_roots(f: &IntPolynomial, eps: f64) -> Result<RootSet, HeightError> {
    let n = match f.degree() {
        None => return Err(HeightError::Zero),
        Some(0) => return Err(HeightError::Constant),
        Some(n) => n,
    };
    if !f.is_squarefree() {
        return Err(HeightError::NotSquarefree);
    }
    let log_sep = log_separation_bound(f);
    let coeffs: Vec<f64> = f.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::MAX)).collect();

    let mut best = f64::INFINITY;
    let mut iterations = 0;
    let mut start = None;
    // Binary64 is pointless when the roots are provably closer than it can resolve.
    let hopeless = log_sep < -30.0 || eps < 1e-15 * cauchy_radius(&coeffs);
    if coeffs.iter().all(|c| c.is_finite()) {
        let (z, it) = aberth_f64(&coeffs);
        iterations += it;
        if z.iter().all(|w| w.re.is_finite() && w.im.is_finite()) {
            if !hopeless {
                let (centers, scale) = exact_centers(&z);
                if let Some(set) = certify(f, centers, scale, iterations, 53, log_sep) {
                    if set.radius < eps {
                        return Ok(set);
                    }
                    best = best.min(set.radius);
                }
            }
            start = Some(z);
        }
    }

    let start = start.unwrap_or_else(|| initial_configuration(n, cauchy_radius(&coeffs)));
    let mut z: Vec<Fx> = Vec::new();
    let mut bits = FIXED_START_BITS;
    let needed = (-eps.log2()).max(0.0) as u32 + (-log_sep / std::f64::consts::LN_2).max(0.0) as u32 + 64;
    while bits < needed.min(FIXED_MAX_BITS) {
        bits *= 2;
    }
    let mut scale = 0;
    loop {
        z = if z.is_empty() {
            start.iter().map(|w| Fx::from_f64(*w, bits)).collect()
        } else {
            z.iter().map(|w| w.rescale(scale, bits)).collect()
        };
        scale = bits;
        let it = aberth_fixed(f, &mut z, bits);
        iterations += it;
        let centers = z.iter().map(|w| (w.re.clone(), w.im.clone())).collect();
        if let Some(set) = certify(f, centers, bits, iterations, bits, log_sep) {
            if set.radius < eps {
                return Ok(set);
            }
            best = best.min(set.radius);
        }
        if bits >= FIXED_MAX_BITS {
            return Err(HeightError::Precision { best_radius: best });
        }
        bits = (bits * 2).min(FIXED_MAX_BITS);
    }
}

/// `log` of the Mahler lower bound
/// `sqrt(3 |disc|) n^{-(n+2)/2} M(f)^{-(n-1)}`, with `M(f) <= ||f||_2`.
pub fn log_separation_bound(f: &IntPolynomial) -> f64 {
    let n = f.degree().unwrap_or(0);
    if n < 2 {
        return f64::INFINITY;
    }
    let disc = f.discriminant();
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let nf = n as f64;
    0.5 * 3f64.ln() + 0.5 * big_ln(&disc) - 0.5 * (nf + 2.0) * nf.ln() - 0.5 * (nf - 1.0) * big_ln(&norm2)
}

fn cauchy_radius(coeffs: &[f64]) -> f64 {
    let lead = coeffs.last().unwrap().abs();
    1.0 + coeffs[..coeffs.len() - 1]
        .iter()
        .map(|c| c.abs() / lead)
        .fold(0.0, f64::max)
}

fn initial_configuration(n: usize, radius: f64) -> Vec<Complex64> {
    // The angular offset breaks the symmetry under complex conjugation.
    (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect()
}

fn horner_f64(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(*coeffs.last().unwrap(), 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev().skip(1) {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn aberth_f64(coeffs: &[f64]) -> (Vec<Complex64>, usize) {
    let n = coeffs.len() - 1;
    let mut z = initial_configuration(n, cauchy_radius(coeffs));
    let mut quiet = 0;
    for it in 1..=F64_ITERATIONS {
        let mut small = true;
        for i in 0..n {
            let (p, dp) = horner_f64(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let mut w = newton / (Complex64::new(1.0, 0.0) - newton * s);
            if !(w.re.is_finite() && w.im.is_finite()) {
                w = Complex64::new(z[i].norm().max(1.0) * 1e-8, 0.0);
            }
            z[i] -= w;
            if w.norm() > 4.0 * U * z[i].norm().max(f64::MIN_POSITIVE) {
                small = false;
            }
        }
        if small {
            quiet += 1;
            if quiet == 3 {
                return (z, it);
            }
        } else {
            quiet = 0;
        }
    }
    (z, F64_ITERATIONS)
}

/// Complex fixed-point number, value `(re + i im) / 2^bits`.
#[derive(Debug, Clone)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

impl Fx {
    fn from_f64(z: Complex64, bits: u32) -> Fx {
        Fx {
            re: f64_to_fixed(z.re, bits),
            im: f64_to_fixed(z.im, bits),
        }
    }

    fn rescale(&self, from: u32, to: u32) -> Fx {
        let shift = |x: &BigInt| if to >= from { x << (to - from) as usize } else { x >> (from - to) as usize };
        Fx {
            re: shift(&self.re),
            im: shift(&self.im),
        }
    }

    fn add(&self, o: &Fx) -> Fx {
        Fx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Fx) -> Fx {
        Fx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Fx, bits: u32) -> Fx {
        Fx {
            re: (&self.re * &o.re - &self.im * &o.im) >> bits as usize,
            im: (&self.re * &o.im + &self.im * &o.re) >> bits as usize,
        }
    }

    fn norm_sq(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    fn div(&self, o: &Fx, bits: u32) -> Option<Fx> {
        let d = o.norm_sq();
        if d.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << bits as usize;
        let im = (&self.im * &o.re - &self.re * &o.im) << bits as usize;
        Some(Fx { re: re / &d, im: im / &d })
    }
}

fn f64_to_fixed(x: f64, bits: u32) -> BigInt {
    let (mant, exp, sign) = x.integer_decode();
    let m = BigInt::from(mant) * BigInt::from(sign);
    let e = exp as i64 + bits as i64;
    if e >= 0 {
        m << e as usize
    } else {
        m >> (-e) as usize
    }
}

fn aberth_fixed(f: &IntPolynomial, z: &mut [Fx], bits: u32) -> usize {
    let n = z.len();
    let coeffs: Vec<Fx> = f
        .coeffs()
        .iter()
        .map(|c| Fx { re: c << bits as usize, im: BigInt::zero() })
        .collect();
    let one = Fx { re: BigInt::one() << bits as usize, im: BigInt::zero() };
    // corrections below 2^-(bits - 16) count as converged
    let tiny = BigInt::one() << 32usize;
    let cap = 60 + 4 * bits as usize / 16;
    let mut quiet = 0;
    for it in 1..=cap {
        let mut small = true;
        for i in 0..n {
            let mut p = coeffs[n].clone();
            let mut dp = Fx { re: BigInt::zero(), im: BigInt::zero() };
            for c in coeffs.iter().rev().skip(1) {
                dp = dp.mul(&z[i], bits).add(&p);
                p = p.mul(&z[i], bits).add(c);
            }
            if p.norm_sq().is_zero() {
                continue;
            }
            let mut s = Fx { re: BigInt::zero(), im: BigInt::zero() };
            for j in 0..n {
                if j != i {
                    if let Some(t) = one.div(&z[i].sub(&z[j]), bits) {
                        s = s.add(&t);
                    }
                }
            }
            let w = p
                .div(&dp, bits)
                .and_then(|newton| newton.div(&one.sub(&newton.mul(&s, bits)), bits));
            let w = match w {
                Some(w) => w,
                None => Fx { re: BigInt::one() << (bits / 2) as usize, im: BigInt::zero() },
            };
            if w.norm_sq() > tiny {
                small = false;
            }
            z[i] = z[i].sub(&w);
        }
        if small {
            quiet += 1;
            if quiet == 2 {
                return it;
            }
        } else {
            quiet = 0;
        }
    }
    cap
}

fn exact_centers(z: &[Complex64]) -> (Vec<(BigInt, BigInt)>, u32) {
    let scale = z
        .iter()
        .flat_map(|w| [w.re, w.im])
        .filter(|x| *x != 0.0)
        .map(|x| -(x.integer_decode().1 as i64))
        .max()
        .unwrap_or(0)
        .max(0) as u32;
    let centers = z
        .iter()
        .map(|w| (f64_to_fixed(w.re, scale), f64_to_fixed(w.im, scale)))
        .collect();
    (centers, scale)
}

/// Exact inclusion radii for dyadic centers; `None` if two centers coincide
/// or the discs are not pairwise disjoint.
fn certify(
    f: &IntPolynomial,
    centers: Vec<(BigInt, BigInt)>,
    scale: u32,
    iterations: usize,
    precision_bits: u32,
    log_separation_bound: f64,
) -> Option<RootSet> {
    let n = centers.len();
    let c = f.coeffs();
    let lead = &c[n];
    let sh = scale as usize;

    // 2^{scale n} f(z_i) as a Gaussian integer
    let values: Vec<(BigInt, BigInt)> = centers
        .iter()
        .map(|(a, b)| {
            let mut re = lead.clone();
            let mut im = BigInt::zero();
            for (m, ck) in c.iter().rev().skip(1).enumerate() {
                let nre = &re * a - &im * b;
                let nim = &re * b + &im * a;
                re = nre + (ck << (sh * (m + 1)));
                im = nim;
            }
            (re, im)
        })
        .collect();

    let mut dist_sq = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let dr = &centers[i].0 - &centers[j].0;
            let di = &centers[i].1 - &centers[j].1;
            let d = &dr * &dr + &di * &di;
            if d.is_zero() {
                return None;
            }
            dist_sq[i][j] = d.clone();
            dist_sq[j][i] = d;
        }
    }

    let nn = BigInt::from(n as u64);
    let mut radii = Vec::with_capacity(n);
    let mut residual: f64 = 0.0;
    for i in 0..n {
        let fsq = &values[i].0 * &values[i].0 + &values[i].1 * &values[i].1;
        let mut den = lead * lead;
        for (j, d) in dist_sq[i].iter().enumerate() {
            if j != i {
                den *= d;
            }
        }
        den <<= 2 * sh;
        let w = ratio_upper_f64(&fsq, &den).sqrt().next_up();
        residual = residual.max(w);
        let r = ratio_upper_f64(&(&nn * &nn * &fsq), &den).sqrt().next_up();
        radii.push(r);
    }

    for i in 0..n {
        for j in i + 1..n {
            let s = (radii[i] + radii[j]).next_up();
            let s = BigRational::from_float(s)?;
            let lhs = &s * &s * BigRational::from_integer(BigInt::one() << (2 * sh));
            if lhs >= BigRational::from_integer(dist_sq[i][j].clone()) {
                return None;
            }
        }
    }

    let roots = centers
        .iter()
        .map(|(a, b)| Complex64::new(big_to_f64_scaled(a, scale as i64), big_to_f64_scaled(b, scale as i64)))
        .collect();
    let radius = radii.iter().cloned().fold(0.0, f64::max);
    debug_assert!(radii.iter().all(|r| r.is_finite() && !r.is_sign_negative()));
    Some(RootSet {
        centers,
        scale,
        roots,
        radii,
        radius,
        residual_bound: residual,
        iterations,
        precision_bits,
        log_separation_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        v
    }

    #[test]
    fn golden_ratio_roots() {
        let rs = find_roots(&poly(&[-1, -1, 1]), 1e-12).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let r = sorted(rs.roots.clone());
        assert!((r[0].re - (1.0 - phi)).abs() < 1e-12 && r[0].im.abs() < 1e-12);
        assert!((r[1].re - phi).abs() < 1e-12 && r[1].im.abs() < 1e-12);
        assert!(rs.radius < 1e-12);
        assert_eq!(rs.precision_bits, 53);
    }

    #[test]
    fn gaussian_and_radical_roots() {
        let rs = find_roots(&poly(&[1, 0, 1]), 1e-12).unwrap();
        let r = sorted(rs.roots.clone());
        assert!(r[0].re.abs() < 1e-12 && (r[0].im + 1.0).abs() < 1e-12);
        assert!(r[1].re.abs() < 1e-12 && (r[1].im - 1.0).abs() < 1e-12);

        let rs = find_roots(&poly(&[-2, 0, 0, 1]), 1e-12).unwrap();
        let c = 2f64.cbrt();
        for z in &rs.roots {
            assert!((z.norm() - c).abs() < 1e-12);
        }
        assert_eq!(rs.roots.iter().filter(|z| z.im.abs() < 1e-9).count(), 1);
    }

    #[test]
    fn rejects_repeated_roots() {
        assert_eq!(find_roots(&poly(&[1, -2, 1]), 1e-10), Err(HeightError::NotSquarefree));
        assert_eq!(find_roots(&poly(&[3]), 1e-10), Err(HeightError::Constant));
    }

    #[test]
    fn extended_path_separates_close_roots() {
        // (x - a)(x - a - 2^-60 scaled): 2^120 x^2 - ..., roots 1 and 1 + 2^-60
        let a = BigInt::one() << 60usize;
        let f = &IntPolynomial::new(vec![-&a, a.clone()]) * &IntPolynomial::new(vec![-(&a + 1u32), a.clone()]);
        let rs = find_roots(&f, 1e-30).unwrap();
        assert!(rs.precision_bits > 53);
        assert!(rs.radius < 1e-30);
        let (lo, hi) = rs.distance_interval(0, 1);
        let gap = 2f64.powi(-60);
        assert!(lo <= gap && gap <= hi && hi - lo < 1e-28);
    }

    #[test]
    fn certified_residual_definition() {
        let f = poly(&[3, -1, 4, -1, 5, 1]);
        let rs = find_roots(&f, 1e-11).unwrap();
        assert!(rs.residual_bound * 5.0 <= rs.radius * (1.0 + 1e-12));
        assert!(rs.radius < 1e-11);
    }
}
