//! Weil heights from minimal polynomials, and the pairwise root quantities
//! at archimedean and finite places.

mod numeric;
mod roots;

pub use numeric::Approx;
pub use roots::{find_roots, log_separation_bound, RootSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::logsum::LogSum;
use crate::padic::{newton_polygon, prime_divisors, split_tree, vp_int, PrecisionPolicy, Unramified};
use crate::place::LocalFieldSpec;
use crate::poly::IntPolynomial;
use numeric::{big_ln, log_minus_interval, log_plus_interval, ln_interval, tree_sum, tree_sum_slack, U};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeightError {
    #[error("zero polynomial")]
    Zero,
    #[error("constant polynomial has no roots")]
    Constant,
    #[error("polynomial has repeated roots; pass its squarefree part")]
    NotSquarefree,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("root isolation failed; best certified radius {best_radius:e}")]
    Precision { best_radius: f64 },
    #[error("roots not separated by their certified radii")]
    Coincident,
    #[error("need at least two roots")]
    TooFewRoots,
    #[error("height tolerance {wanted:e} not reached; certified {achieved:e}")]
    Tolerance { wanted: f64, achieved: f64 },
    #[error("p-adic computation failed: {0}")]
    Padic(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeightReport {
    /// `h(alpha)` in natural-log units.
    pub h: f64,
    pub error_radius: f64,
    pub degree: usize,
    /// `M(f)` of the primitive polynomial.
    pub mahler: f64,
    pub mahler_error: f64,
    /// `(1/n) sum_i log^+ |alpha_i|`, computed from the roots inside the unit
    /// disc and `|a_0|`, not from the roots outside it.
    pub arch_contrib: f64,
    /// `(1/n) sum_{p | a_n} sum_i log^+ |alpha_i|_p`, from Newton polygons.
    pub nonarch_contrib: f64,
    /// The same, exactly.
    pub nonarch_exact: LogSum,
    /// Error radius of `arch_contrib + nonarch_contrib`.
    pub local_error: f64,
    pub roots: RootSet,
}

impl HeightReport {
    /// `|h - (arch_contrib + nonarch_contrib)|`.
    pub fn two_path_gap(&self) -> f64 {
        (self.h - (self.arch_contrib + self.nonarch_contrib)).abs()
    }

    pub fn to_json(&self) -> Value {
        let roots: Vec<Value> = self
            .roots
            .roots
            .iter()
            .map(|z| json!([format!("{:.15e}", z.re), format!("{:.15e}", z.im)]))
            .collect();
        json!({
            "h": format!("{:.12}", self.h),
            "error_radius": format!("{:.3e}", self.error_radius),
            "degree": self.degree,
            "mahler": format!("{:.12}", self.mahler),
            "mahler_error_radius": format!("{:.3e}", self.mahler_error),
            "arch_contrib": format!("{:.12}", self.arch_contrib),
            "nonarch_contrib": format!("{:.12}", self.nonarch_contrib),
            "nonarch_exact": self.nonarch_exact.to_string(),
            "two_path_gap": format!("{:.3e}", self.two_path_gap()),
            "roots": roots,
            "root_radius": format!("{:.3e}", self.roots.radius),
            "precision_bits": self.roots.precision_bits,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightOptions {
    /// Bound on the certified error of `h`.
    pub tolerance: f64,
}

impl Default for HeightOptions {
    fn default() -> Self {
        HeightOptions {
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Height of a root of `f`, which should be irreducible over `Q`.
pub fn weil_height(f: &IntPolynomial) -> Result<HeightReport, HeightError> {
    weil_height_with(f, HeightOptions::default())
}

pub fn weil_height_with(f: &IntPolynomial, opts: HeightOptions) -> Result<HeightReport, HeightError> {
    match f.degree() {
        None => return Err(HeightError::Zero),
        Some(0) => return Err(HeightError::Constant),
        _ => {}
    }
    let f = f.primitive_part();
    let mut eps = (opts.tolerance * 1e-3).min(1e-13);
    let mut last = f64::INFINITY;
    for _ in 0..6 {
        let roots = find_roots(&f, eps)?;
        let report = height_from_roots(&f, roots)?;
        if report.error_radius <= opts.tolerance {
            return Ok(report);
        }
        last = report.error_radius;
        eps *= 1e-8;
    }
    Err(HeightError::Tolerance {
        wanted: opts.tolerance,
        achieved: last,
    })
}

/// Height report for primitive `f` from already certified roots.
pub fn height_from_roots(f: &IntPolynomial, roots: RootSet) -> Result<HeightReport, HeightError> {
    let n = roots.degree();
    let nf = n as f64;
    let lead = f.leading().ok_or(HeightError::Zero)?.clone();
    let a0 = f.coeff(0);

    // Mahler path: log|a_n| + sum log^+|alpha|.
    let mut terms = vec![big_ln(&lead)];
    let mut spread = 2.0 * U * terms[0].abs();
    for i in 0..n {
        let (lo, hi) = roots.abs_interval(i);
        let (a, b) = log_plus_interval(lo, hi);
        terms.push(0.5 * (a + b));
        spread += 0.5 * (b - a);
    }
    let total = tree_sum(&terms);
    let h = total / nf;
    let error_radius = ((spread + tree_sum_slack(&terms)) / nf + 2.0 * U * h.abs()).next_up();

    // Local path: log|a_0| - log|a_n| + sum log^-|alpha| at infinity, Newton
    // polygons at the primes dividing a_n.
    let (arch_contrib, arch_err) = if a0.is_zero() {
        // alpha = 0: f = x
        (0.0, 0.0)
    } else {
        let mut terms = vec![big_ln(&a0), -big_ln(&lead)];
        let mut spread = 2.0 * U * (terms[0].abs() + terms[1].abs());
        for i in 0..n {
            let (lo, hi) = roots.abs_interval(i);
            let (a, b) = log_minus_interval(lo, hi).ok_or(HeightError::Coincident)?;
            terms.push(0.5 * (a + b));
            spread += 0.5 * (b - a);
        }
        let v = tree_sum(&terms) / nf;
        (v, (spread + tree_sum_slack(&terms)) / nf + 2.0 * U * v.abs())
    };
    let mut nonarch_exact = LogSum::zero();
    if !lead.abs().is_one() {
        for p in prime_divisors(&lead) {
            let np = newton_polygon(f, p).map_err(|e| HeightError::Padic(e.to_string()))?;
            let mass = np.negative_valuation_mass();
            nonarch_exact.add_term(
                BigRational::new(BigInt::from(*mass.numer()), BigInt::from(*mass.denom() * n as i64)),
                p,
            );
        }
    }
    let nonarch_contrib = nonarch_exact.value();
    let local_error = (arch_err + 4.0 * U * nonarch_contrib.abs()).next_up();

    let mahler = (nf * h).exp();
    let mahler_error = mahler * ((nf * error_radius).exp_m1()) + 2.0 * U * mahler;
    Ok(HeightReport {
        h,
        error_radius,
        degree: n,
        mahler,
        mahler_error,
        arch_contrib,
        nonarch_contrib,
        nonarch_exact,
        local_error,
        roots,
    })
}

/// `(1/(n(n-1))) sum_{i != j} log |alpha_i - alpha_j|`.
pub fn archimedean_pair_sum(roots: &RootSet) -> Result<Approx, HeightError> {
    pair_average(roots, |_, _| (0.0, 0.0))
}

/// `(1/(n(n-1))) sum_{i != j} g(alpha_i, alpha_j)` with
/// `g(x, y) = log^+|x| + log^+|y| - log|x - y|`, at the archimedean place.
pub fn pairwise_g_sum(roots: &RootSet, n: usize) -> Result<Approx, HeightError> {
    if n != roots.degree() {
        return Err(HeightError::TooFewRoots);
    }
    let plus: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let (lo, hi) = roots.abs_interval(i);
            log_plus_interval(lo, hi)
        })
        .collect();
    let d = pair_average(roots, |i, j| (plus[i].0 + plus[j].0, plus[i].1 + plus[j].1))?;
    Ok(Approx {
        value: -d.value,
        radius: d.radius,
    })
}

/// Average over ordered pairs of `log|alpha_i - alpha_j| - extra(i, j)`.
fn pair_average(
    roots: &RootSet,
    extra: impl Fn(usize, usize) -> (f64, f64),
) -> Result<Approx, HeightError> {
    let n = roots.degree();
    if n < 2 {
        return Err(HeightError::TooFewRoots);
    }
    let mut mids = Vec::with_capacity(n * (n - 1));
    let mut spread = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (lo, hi) = roots.distance_interval(i, j);
            if lo <= 0.0 {
                return Err(HeightError::Coincident);
            }
            let (a, b) = ln_interval(lo, hi);
            let (ea, eb) = extra(i, j);
            let (a, b) = (a - eb, b - ea);
            mids.push(0.5 * (a + b));
            spread += 0.5 * (b - a);
        }
    }
    let m = (n * (n - 1)) as f64;
    let value = tree_sum(&mids) / m;
    let radius = ((spread + tree_sum_slack(&mids)) / m + 2.0 * U * value.abs()).next_up();
    Ok(Approx { value, radius })
}

/// `-log n / (n - 1)`, the archimedean lower bound for the g-sum.
pub fn baker_mahler_bound(n: usize) -> f64 {
    let nf = n as f64;
    -nf.ln() / (nf - 1.0)
}

/// Whether the certified g-sum interval is compatible with the lower bound.
pub fn baker_mahler_holds(g: &Approx, n: usize) -> bool {
    let b = baker_mahler_bound(n);
    g.upper() >= b - 4.0 * U * b.abs()
}

/// Whether `f` is, up to sign, a cyclotomic polynomial `Phi_m`.
pub fn is_cyclotomic(f: &IntPolynomial) -> bool {
    let f = f.primitive_part();
    let n = match f.degree() {
        Some(n) if n >= 1 && f.is_monic() => n,
        _ => return false,
    };
    // phi(m) >= sqrt(m / 2)
    for m in 1..=(2 * n * n + 2) {
        if euler_phi(m) != n {
            continue;
        }
        // f = Phi_m iff f | x^m - 1 and f shares no root with x^d - 1, d | m, d < m
        if x_pow_minus_one(m).div_exact(&f).is_some()
            && (1..m)
                .filter(|d| m % d == 0)
                .all(|d| f.gcd(&x_pow_minus_one(d)).degree() == Some(0))
        {
            return true;
        }
    }
    false
}

fn x_pow_minus_one(m: usize) -> IntPolynomial {
    let mut c = vec![BigInt::zero(); m + 1];
    c[0] = -BigInt::one();
    c[m] = BigInt::one();
    IntPolynomial::new(c)
}

fn euler_phi(mut m: usize) -> usize {
    let mut r = m;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            r -= r / d;
        }
        d += 1;
    }
    if m > 1 {
        r -= r / m;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSumMethod {
    /// Read off the root tree of the p-adic splitting recursion.
    SplitTree,
    /// From `v_p(disc f)`.
    Discriminant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacePairSum {
    pub place: LocalFieldSpec,
    /// `(1/(n(n-1))) sum_{i != j} log |alpha_i - alpha_j|_v`.
    pub value: LogSum,
    pub method: PairSumMethod,
}

impl PlacePairSum {
    pub fn to_json(&self) -> Value {
        json!({
            "place": self.place.to_json(),
            "value": self.value.to_json(),
            "method": match self.method {
                PairSumMethod::SplitTree => "split_tree",
                PairSumMethod::Discriminant => "discriminant",
            },
        })
    }
}

/// Exact pairwise log-distance averages of the roots of monic squarefree `f`
/// at each place.
pub fn discriminant_valuations(
    f: &IntPolynomial,
    places: &[LocalFieldSpec],
) -> Result<Vec<PlacePairSum>, HeightError> {
    let n = check_monic(f)?;
    let disc = f.discriminant();
    if disc.is_zero() {
        return Err(HeightError::NotSquarefree);
    }
    let pairs = BigRational::from_integer(BigInt::from((n * (n - 1)) as u64));
    places
        .iter()
        .map(|pl| {
            let mut method = PairSumMethod::Discriminant;
            let mut total = vp_int(&disc, pl.p).finite().unwrap() as u64;
            if pl.is_decidable() {
                let ring = Unramified::new(pl.p, pl.f).map_err(|e| HeightError::Padic(e.to_string()))?;
                if let Ok(Some(tree)) = split_tree(f, &ring, PrecisionPolicy::from_env()) {
                    total = tree.pair_valuation_sum;
                    method = PairSumMethod::SplitTree;
                }
            }
            let c = -BigRational::from_integer(BigInt::from(total)) * &pl.weight / &pairs;
            Ok(PlacePairSum {
                place: pl.clone(),
                value: LogSum::term(c, pl.p),
                method,
            })
        })
        .collect()
}

/// Sum of the exact pairwise averages over every prime, for monic squarefree `f`.
pub fn finite_pair_sums(f: &IntPolynomial) -> Result<LogSum, HeightError> {
    check_monic(f)?;
    let disc = f.discriminant();
    if disc.is_zero() {
        return Err(HeightError::NotSquarefree);
    }
    let places: Vec<LocalFieldSpec> = prime_divisors(&disc)
        .into_iter()
        .map(|p| LocalFieldSpec::unramified(p, 1).unwrap())
        .collect();
    Ok(discriminant_valuations(f, &places)?
        .iter()
        .fold(LogSum::zero(), |acc, s| &acc + &s.value))
}

fn check_monic(f: &IntPolynomial) -> Result<usize, HeightError> {
    match f.degree() {
        None => Err(HeightError::Zero),
        Some(0) => Err(HeightError::Constant),
        Some(1) => Err(HeightError::TooFewRoots),
        Some(n) if f.is_monic() => Ok(n),
        _ => Err(HeightError::NotMonic),
    }
}
