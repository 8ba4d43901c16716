//! Capacities of rings of integers of local fields, transfinite diameters,
//! and the closed-form height bounds built from them.
//!
//! Every quantity is a finite sum of rational multiples of `log p` and is kept
//! as a [`LogSum`]; decimals appear only when rendering.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::logsum::LogSum;
use crate::padic::Unramified;
use crate::place::LocalFieldSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CapacityError {
    #[error("no places given")]
    NoPlaces,
    #[error("{kind} needs places over Q (q0 = p, N = 1){extra}")]
    NeedsRationalBase { kind: BoundKind, extra: &'static str },
    #[error("n must be at least 2")]
    SmallN,
    #[error("brute force limited to n <= {max_n} and depth <= {max_depth}")]
    BruteForceTooLarge { max_n: usize, max_depth: u32 },
    #[error("brute force needs an unramified place over Q")]
    BruteForcePlace,
    #[error("brute force: fewer than n residue representatives modulo p^depth")]
    TooFewRepresentatives,
    #[error("radius does not match the upper-bound construction: expected log R = {expected}, got {got}")]
    RadiusMismatch { expected: String, got: String },
    #[error("unknown bound kind {0:?}")]
    UnknownKind(String),
    #[error("unknown diameter method {0:?}")]
    UnknownMethod(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    /// Lower bound for the liminf of heights of totally `L_S` integers.
    LowerIntegers,
    /// Upper bound, by an adelic set of capacity one.
    Upper,
    /// Bombieri–Zannier lower bound for all totally `S`-adic numbers.
    BzLowerAll,
    /// Bombieri–Zannier upper bound, totally `p`-adic over `Q`.
    BzUpper,
    /// Conjectured exact value for integers.
    Conjecture,
}

impl BoundKind {
    pub const ALL: [BoundKind; 5] = [
        BoundKind::BzLowerAll,
        BoundKind::LowerIntegers,
        BoundKind::Upper,
        BoundKind::Conjecture,
        BoundKind::BzUpper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::LowerIntegers => "lower_integers",
            BoundKind::Upper => "upper",
            BoundKind::BzLowerAll => "bz_lower_all",
            BoundKind::BzUpper => "bz_upper",
            BoundKind::Conjecture => "conjecture",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = CapacityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CapacityError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundSpec {
    pub places: Vec<LocalFieldSpec>,
    pub kind: BoundKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundValue {
    pub kind: BoundKind,
    pub exact: LogSum,
}

impl BoundValue {
    pub fn value(&self) -> f64 {
        self.exact.value()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "exact": self.exact.to_string(),
            "value": format!("{:.10}", self.value()),
        })
    }
}

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `N / (e (q0^f - 1))`, the coefficient of `log p` in `-log gamma(O_{L_v})`.
fn capacity_coefficient(place: &LocalFieldSpec) -> BigRational {
    let q = place.residue_order();
    &place.weight / BigRational::from_integer(BigInt::from(place.e) * (q - 1))
}

/// `log gamma(O_{L_v}) = -N log p / (e (q0^f - 1))`, negative for every place.
pub fn capacity_ring_of_integers(place: &LocalFieldSpec) -> LogSum {
    let c = LogSum::term(-capacity_coefficient(place), place.p);
    debug_assert!(c.signum() < 0);
    c
}

pub fn bound_value(spec: &BoundSpec) -> Result<BoundValue, CapacityError> {
    if spec.places.is_empty() {
        return Err(CapacityError::NoPlaces);
    }
    let half = rat(1, 2);
    let mut exact = LogSum::zero();
    for pl in &spec.places {
        let (c, p) = match spec.kind {
            BoundKind::LowerIntegers => (&half * capacity_coefficient(pl), pl.p),
            BoundKind::Upper | BoundKind::Conjecture => (capacity_coefficient(pl), pl.p),
            BoundKind::BzLowerAll => {
                if !pl.over_rationals() {
                    return Err(CapacityError::NeedsRationalBase { kind: spec.kind, extra: "" });
                }
                let pf = BigInt::from(pl.p).pow(pl.f);
                (&half / BigRational::from_integer(BigInt::from(pl.e) * (pf + 1)), pl.p)
            }
            BoundKind::BzUpper => {
                if !pl.over_rationals() || pl.e != 1 || pl.f != 1 {
                    return Err(CapacityError::NeedsRationalBase {
                        kind: spec.kind,
                        extra: " with e = f = 1",
                    });
                }
                (rat(1, pl.p - 1), pl.p)
            }
        };
        exact.add_term(c, p);
    }
    Ok(BoundValue { kind: spec.kind, exact })
}

/// Values of every bound kind that applies to `places`, in display order.
pub fn all_bounds(places: &[LocalFieldSpec]) -> Vec<BoundValue> {
    BoundKind::ALL
        .into_iter()
        .filter_map(|kind| bound_value(&BoundSpec { places: places.to_vec(), kind }).ok())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterMethod {
    EquidistributionFormula,
    BruteForce { depth: u32 },
}

impl DiameterMethod {
    pub fn name(&self) -> &'static str {
        match self {
            DiameterMethod::EquidistributionFormula => "equidistribution_formula",
            DiameterMethod::BruteForce { .. } => "brute_force",
        }
    }
}

pub const BRUTE_FORCE_MAX_N: usize = 8;
pub const BRUTE_FORCE_MAX_DEPTH: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterResult {
    pub n: usize,
    /// `log d_n = coefficient · log p`.
    pub coefficient: BigRational,
    pub p: u64,
    pub method: DiameterMethod,
}

impl DiameterResult {
    pub fn log_value(&self) -> LogSum {
        LogSum::term(self.coefficient.clone(), self.p)
    }

    pub fn value(&self) -> f64 {
        self.log_value().value()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "n": self.n,
            "coefficient": self.coefficient.to_string(),
            "p": self.p,
            "log_d_n": format!("{:.12}", self.value()),
            "method": self.method.name(),
        });
        if let DiameterMethod::BruteForce { depth } = self.method {
            v["depth"] = json!(depth);
        }
        v
    }
}

/// `T(n, q)`: total number of ordered pairs, counted with the depth at which
/// they separate, when `n` points are split as evenly as possible among `q`
/// residue classes at every level.
pub fn equidistribution_t(n: u64, q: &BigInt) -> BigInt {
    let mut memo = HashMap::new();
    t_rec(n, q, &mut memo)
}

fn t_rec(n: u64, q: &BigInt, memo: &mut HashMap<u64, BigInt>) -> BigInt {
    if n <= 1 {
        return BigInt::zero();
    }
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let nb = BigInt::from(n);
    let v = if &nb <= q {
        BigInt::zero()
    } else {
        let q64: u64 = q.try_into().expect("q < n fits in u64");
        let (k, r) = (n / q64, n % q64);
        let big = t_rec(k + 1, q, memo) + BigInt::from((k + 1) * k);
        let small = t_rec(k, q, memo) + BigInt::from(k * k.saturating_sub(1));
        big * r + small * (q64 - r)
    };
    memo.insert(n, v.clone());
    v
}

pub fn transfinite_diameter(
    place: &LocalFieldSpec,
    n: usize,
    method: DiameterMethod,
) -> Result<DiameterResult, CapacityError> {
    if n < 2 {
        return Err(CapacityError::SmallN);
    }
    let pairs = BigInt::from((n * (n - 1)) as u64);
    let coefficient = match method {
        DiameterMethod::EquidistributionFormula => {
            let t = equidistribution_t(n as u64, &place.residue_order());
            -(&place.weight / BigRational::from_integer(BigInt::from(place.e)))
                * BigRational::new(t, pairs)
        }
        DiameterMethod::BruteForce { depth } => {
            if n > BRUTE_FORCE_MAX_N || depth > BRUTE_FORCE_MAX_DEPTH || depth == 0 {
                return Err(CapacityError::BruteForceTooLarge {
                    max_n: BRUTE_FORCE_MAX_N,
                    max_depth: BRUTE_FORCE_MAX_DEPTH,
                });
            }
            if !place.is_decidable() {
                return Err(CapacityError::BruteForcePlace);
            }
            let best = brute_force_min_valuation_sum(place, n, depth)?;
            -BigRational::new(BigInt::from(best), pairs)
        }
    };
    Ok(DiameterResult {
        n,
        coefficient,
        p: place.p,
        method,
    })
}

/// `min sum_{i != j} v(z_i - z_j)` over `n` distinct representatives of
/// `O_{L_v}` modulo `p^depth`.
fn brute_force_min_valuation_sum(place: &LocalFieldSpec, n: usize, depth: u32) -> Result<u64, CapacityError> {
    let ring = Unramified::new(place.p, place.f).expect("valid place");
    let rf = ring.residue_field();
    let q = rf.order() as usize;
    let count = q.pow(depth);
    if count < n {
        return Err(CapacityError::TooFewRepresentatives);
    }
    // representative k has base-q digits d_0 d_1 ..., element sum lift(d_i) p^i
    let reps: Vec<_> = (0..count)
        .map(|mut k| {
            let mut rep = vec![BigInt::zero(); place.f as usize];
            let mut pp = BigInt::one();
            for _ in 0..depth {
                let digit = rf.element((k % q) as u64);
                for (slot, d) in rep.iter_mut().zip(&digit) {
                    *slot += &pp * BigInt::from(*d);
                }
                k /= q;
                pp *= BigInt::from(place.p);
            }
            ring.element(rep, depth + 1)
        })
        .collect();
    let val: Vec<Vec<u32>> = reps
        .iter()
        .map(|a| reps.iter().map(|b| a.sub(b).expect("same ring").val()).collect())
        .collect();

    // With z_1 = 0 after translating, and z_2 = p^k after scaling by a unit.
    let seconds: Vec<usize> = (0..depth).map(|k| q.pow(k)).collect();
    let best = seconds
        .par_iter()
        .map(|&second| {
            let chosen = vec![0usize, second];
            let base = 2 * val[0][second] as u64;
            let mut best = u64::MAX;
            extend(&val, &chosen, 1, n, base, &mut best);
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .min()
        .unwrap();
    Ok(best)
}

fn extend(val: &[Vec<u32>], chosen: &[usize], start: usize, n: usize, sum: u64, best: &mut u64) {
    if sum >= *best {
        return;
    }
    if chosen.len() == n {
        *best = sum;
        return;
    }
    for c in start..val.len() {
        if chosen.contains(&c) {
            continue;
        }
        let add: u64 = chosen.iter().map(|&z| 2 * val[c][z] as u64).sum();
        let mut next = chosen.to_vec();
        next.push(c);
        extend(val, &next, c + 1, n, sum + add, best);
    }
}

/// `(1/2) [ -sum_v log d_n(O_{L_v}) - log n / (n - 1) ]`: a lower bound for
/// heights of totally `L_S` algebraic integers of degree exactly `n`.
pub fn finite_degree_lower_bound(n: usize, places: &[LocalFieldSpec]) -> Result<LogSum, CapacityError> {
    if n < 2 {
        return Err(CapacityError::SmallN);
    }
    let mut s = LogSum::log_of(rat(-1, (n - 1) as u64), n as u64);
    for pl in places {
        let d = transfinite_diameter(pl, n, DiameterMethod::EquidistributionFormula)?;
        s = &s - &d.log_value();
    }
    Ok(s.scale(&rat(1, 2)))
}

/// The adelic set: `O_{L_v}` at `v` in `S`, closed unit discs at the other
/// finite places, and an archimedean disc of radius `R e^epsilon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdelicSetSpec {
    pub places: Vec<LocalFieldSpec>,
    pub log_radius: LogSum,
    pub epsilon: BigRational,
}

impl AdelicSetSpec {
    /// `log R = sum_v N log p / (e (q0^f - 1))`.
    pub fn standard(places: Vec<LocalFieldSpec>, epsilon: BigRational) -> Self {
        let log_radius = places
            .iter()
            .fold(LogSum::zero(), |acc, pl| &acc - &capacity_ring_of_integers(pl));
        AdelicSetSpec {
            places,
            log_radius,
            epsilon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdelicReport {
    /// Log of the capacity product: this plus `epsilon_part`.
    pub log_part: LogSum,
    pub epsilon_part: BigRational,
    pub galois_stable: bool,
    pub hypothesis_ok: bool,
}

impl AdelicReport {
    pub fn log_capacity_product(&self) -> f64 {
        self.log_part.value() + crate::logsum::ratio_to_f64(&self.epsilon_part)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "log_capacity_product": {
                "logs": self.log_part.to_string(),
                "rational": self.epsilon_part.to_string(),
                "value": format!("{:.12}", self.log_capacity_product()),
            },
            "galois_stable": self.galois_stable,
            "hypothesis_ok": self.hypothesis_ok,
        })
    }
}

pub fn check_adelic_set(spec: &AdelicSetSpec) -> Result<AdelicReport, CapacityError> {
    if spec.places.is_empty() {
        return Err(CapacityError::NoPlaces);
    }
    let expected = AdelicSetSpec::standard(spec.places.clone(), BigRational::zero()).log_radius;
    if expected != spec.log_radius {
        return Err(CapacityError::RadiusMismatch {
            expected: expected.to_string(),
            got: spec.log_radius.to_string(),
        });
    }
    // unit discs at the remaining finite places have capacity 1
    let log_part = spec
        .places
        .iter()
        .fold(spec.log_radius.clone(), |acc, pl| &acc + &capacity_ring_of_integers(pl));
    let epsilon_part = spec.epsilon.clone();
    let rational_sign = if epsilon_part.is_positive() { 1 } else if epsilon_part.is_zero() { 0 } else { -1 };
    // log_part is exactly zero here, so the sign is that of epsilon
    let hypothesis_ok = log_part.is_zero() && rational_sign >= 0;
    Ok(AdelicReport {
        log_part,
        epsilon_part,
        galois_stable: true,
        hypothesis_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn place(p: u64, e: u32, f: u32) -> LocalFieldSpec {
        LocalFieldSpec::new(p, e, f, p, BigRational::one()).unwrap()
    }

    fn bound(places: &[LocalFieldSpec], kind: BoundKind) -> f64 {
        bound_value(&BoundSpec { places: places.to_vec(), kind }).unwrap().value()
    }

    #[test]
    fn capacities() {
        let ln2 = 2f64.ln();
        assert_eq!(capacity_ring_of_integers(&place(2, 1, 1)), LogSum::term(rat(-1, 1), 2));
        assert_eq!(capacity_ring_of_integers(&place(3, 1, 2)), LogSum::term(rat(-1, 8), 3));
        assert!((capacity_ring_of_integers(&place(2, 2, 1)).value() + ln2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn bounds_for_two_adic() {
        let s = [place(2, 1, 1)];
        assert!((bound(&s, BoundKind::LowerIntegers) - 0.3465735903).abs() < 1e-10);
        assert!((bound(&s, BoundKind::Upper) - 0.6931471806).abs() < 1e-10);
        assert!((bound(&s, BoundKind::BzLowerAll) - 0.1155245301).abs() < 1e-10);
        let s23 = [place(2, 1, 1), place(3, 1, 1)];
        assert!((bound(&s23, BoundKind::BzUpper) - 1.2424533249).abs() < 1e-10);
        let s9 = [place(3, 1, 2)];
        assert!((bound(&s9, BoundKind::Conjecture) - 3f64.ln() / 8.0).abs() < 1e-15);
        assert!(bound_value(&BoundSpec { places: s9.to_vec(), kind: BoundKind::BzUpper }).is_err());
    }

    #[test]
    fn t_values() {
        let two = BigInt::from(2);
        let t: Vec<BigInt> = [2u64, 3, 4, 8, 16].iter().map(|&n| equidistribution_t(n, &two)).collect();
        assert_eq!(t, [0, 2, 4, 32, 176].map(BigInt::from));
        for k in 1..20u32 {
            let n = 1u64 << k;
            assert_eq!(equidistribution_t(n, &two), BigInt::from(n * (n - 1 - k as u64)));
        }
    }

    #[test]
    fn diameters_small() {
        let pl = place(2, 1, 1);
        let f = |n| transfinite_diameter(&pl, n, DiameterMethod::EquidistributionFormula).unwrap().coefficient;
        assert_eq!(f(2), rat(0, 1));
        assert_eq!(f(3), rat(-1, 3));
        assert_eq!(f(4), rat(-1, 3));
        assert_eq!(f(16), rat(-11, 15));
        for n in 2..=4 {
            let b = transfinite_diameter(&pl, n, DiameterMethod::BruteForce { depth: 3 }).unwrap();
            assert_eq!(b.coefficient, f(n), "n = {n}");
        }
        let b8 = transfinite_diameter(&pl, 8, DiameterMethod::BruteForce { depth: 3 }).unwrap();
        assert_eq!(b8.coefficient, rat(-32, 56));
    }

    #[test]
    fn finite_degree_bounds() {
        let s = [place(2, 1, 1)];
        assert_eq!(finite_degree_lower_bound(4, &s).unwrap(), LogSum::term(rat(-1, 6), 2));
        let b16 = finite_degree_lower_bound(16, &s).unwrap();
        assert_eq!(b16, LogSum::term(rat(7, 30), 2));
        assert!((b16.value() - 0.1617).abs() < 1e-4);
    }

    #[test]
    fn adelic_sets() {
        let s = vec![place(2, 1, 1)];
        let r = check_adelic_set(&AdelicSetSpec::standard(s.clone(), BigRational::zero())).unwrap();
        assert!(r.log_part.is_zero() && r.epsilon_part.is_zero() && r.hypothesis_ok && r.galois_stable);
        let s23 = vec![place(2, 1, 1), place(3, 1, 1)];
        let spec = AdelicSetSpec::standard(s23, BigRational::zero());
        assert_eq!(spec.log_radius.to_string(), "log 2 + log 3/2");
        assert_eq!(check_adelic_set(&spec).unwrap().log_capacity_product(), 0.0);
        let r = check_adelic_set(&AdelicSetSpec::standard(s.clone(), rat(1, 100))).unwrap();
        assert!((r.log_capacity_product() - 0.01).abs() < 1e-15 && r.hypothesis_ok);
        let bad = AdelicSetSpec {
            places: s,
            log_radius: LogSum::term(rat(1, 2), 2),
            epsilon: BigRational::zero(),
        };
        assert!(matches!(check_adelic_set(&bad), Err(CapacityError::RadiusMismatch { .. })));
    }
}
