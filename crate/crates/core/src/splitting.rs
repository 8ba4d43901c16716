//! Deciding whether all roots of an integer polynomial lie in the chosen
//! unramified completions `Q_{p^f}`, place by place.

use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::ffpoly;
use crate::padic::{count_roots_with, PadicError, PrecisionPolicy, Unramified};
use crate::poly::IntPolynomial;

pub use crate::place::{LocalFieldSpec, PlaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplittingError {
    #[error("unsupported place for splitting decision: {0} (needs e = 1 over Q)")]
    UnsupportedPlace(String),
    #[error("undecided at precision {precision} for place {place}")]
    Undecided { place: String, precision: u32 },
    #[error("polynomial must have degree at least 1")]
    Degree,
    #[error("empty set of places")]
    NoPlaces,
    #[error(transparent)]
    Padic(PadicError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitReport {
    pub place: LocalFieldSpec,
    pub roots_found: usize,
    pub degree: usize,
    pub splits: bool,
    pub precision_used: u32,
}

impl SplitReport {
    pub fn to_json(&self) -> Value {
        json!({
            "place": self.place.to_json(),
            "roots_found": self.roots_found,
            "degree": self.degree,
            "splits": self.splits,
            "precision_used": self.precision_used,
        })
    }
}

/// Three-valued outcome; precision exhaustion is never reported as `No`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotallySplitReport {
    pub decision: Decision,
    /// Reports for the places decided, in input order, stopping at the first failure.
    pub reports: Vec<SplitReport>,
    /// Places where the precision cap was reached, with that cap.
    pub undecided: Vec<(LocalFieldSpec, u32)>,
}

/// Reusable checker for a fixed set of places; builds each residue field once.
#[derive(Debug, Clone)]
pub struct SplittingChecker {
    places: Vec<(LocalFieldSpec, Arc<Unramified>)>,
    policy: PrecisionPolicy,
}

impl SplittingChecker {
    pub fn new(places: &[LocalFieldSpec], policy: PrecisionPolicy) -> Result<Self, SplittingError> {
        if places.is_empty() {
            return Err(SplittingError::NoPlaces);
        }
        let places = places
            .iter()
            .map(|pl| {
                if !pl.is_decidable() {
                    return Err(SplittingError::UnsupportedPlace(pl.key()));
                }
                let ring = Unramified::new(pl.p, pl.f).map_err(SplittingError::Padic)?;
                Ok((pl.clone(), ring))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SplittingChecker { places, policy })
    }

    pub fn places(&self) -> impl Iterator<Item = &LocalFieldSpec> {
        self.places.iter().map(|(p, _)| p)
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.policy
    }

    fn split_at(
        &self,
        f: &IntPolynomial,
        place: &LocalFieldSpec,
        ring: &Arc<Unramified>,
    ) -> Result<SplitReport, SplittingError> {
        let degree = f.root_degree().map_err(|_| SplittingError::Degree)?;
        let rc = count_roots_with(f, ring, self.policy).map_err(|e| match e {
            PadicError::Undecided(precision) => SplittingError::Undecided {
                place: place.key(),
                precision,
            },
            other => SplittingError::Padic(other),
        })?;
        Ok(SplitReport {
            place: place.clone(),
            roots_found: rc.count,
            degree,
            splits: rc.count == degree,
            precision_used: rc.precision_used,
        })
    }

    pub fn check(&self, f: &IntPolynomial) -> Result<TotallySplitReport, SplittingError> {
        let mut reports = Vec::new();
        let mut undecided = Vec::new();
        for (place, ring) in &self.places {
            match self.split_at(f, place, ring) {
                Ok(r) => {
                    let splits = r.splits;
                    reports.push(r);
                    if !splits {
                        return Ok(TotallySplitReport {
                            decision: Decision::No,
                            reports,
                            undecided,
                        });
                    }
                }
                Err(SplittingError::Undecided { precision, .. }) => {
                    undecided.push((place.clone(), precision));
                }
                Err(e) => return Err(e),
            }
        }
        let decision = if undecided.is_empty() {
            Decision::Yes
        } else {
            Decision::Undecided
        };
        Ok(TotallySplitReport {
            decision,
            reports,
            undecided,
        })
    }

    /// Necessary condition for a monic polynomial given by small coefficients:
    /// its reduction splits into linear factors over every residue field.
    pub fn residues_split_monic(&self, coeffs: &[i64]) -> bool {
        let n = coeffs.len() - 1;
        self.places.iter().all(|(_, ring)| {
            if ring.degree() == 1 {
                residue_root_mass_fp(coeffs, ring.p()) == n
            } else {
                let rf = ring.residue_field();
                let poly: Vec<Vec<u64>> = coeffs
                    .iter()
                    .map(|&c| {
                        let mut e = rf.zero();
                        e[0] = c.rem_euclid(ring.p() as i64) as u64;
                        e
                    })
                    .collect();
                rf.roots_with_multiplicity(&poly)
                    .iter()
                    .map(|(_, m)| m)
                    .sum::<usize>()
                    == n
            }
        })
    }

    /// Stronger necessary condition, for places with `f = 1`: an upper bound
    /// on the number of roots in `Z_p`, from a Hensel tree of bounded depth in
    /// machine integers, must reach the degree. Places with `f > 1` always pass.
    pub fn lift_bound_allows_split(&self, coeffs: &[i64]) -> bool {
        let n = coeffs.len() - 1;
        let g: Vec<i128> = coeffs.iter().map(|&c| c as i128).collect();
        self.places
            .iter()
            .all(|(_, ring)| ring.degree() != 1 || zp_root_bound(&g, ring.p() as i128, LIFT_DEPTH) >= n)
    }
}

const LIFT_DEPTH: u32 = 6;

/// Upper bound on the number of roots in `Z_p` of `g`, which has content
/// prime to `p`. A simple residue root contributes exactly one root; a
/// multiple residue root contributes at most its multiplicity, refined by
/// recursing on `g(b + p y) / p^v` while the coefficients fit.
fn zp_root_bound(g: &[i128], p: i128, depth: u32) -> usize {
    let gbar: Vec<i128> = g.iter().map(|c| c.rem_euclid(p)).collect();
    let mut total = 0;
    for b in 0..p {
        let m = residue_multiplicity(&gbar, b, p);
        total += match m {
            0 => 0,
            1 => 1,
            _ if depth == 0 => m,
            _ => match shift_scale(g, b, p) {
                Some(h) => zp_root_bound(&h, p, depth - 1).min(m),
                None => m,
            },
        };
    }
    total
}

/// Multiplicity of `b` as a root of `gbar` over `F_p`.
fn residue_multiplicity(gbar: &[i128], b: i128, p: i128) -> usize {
    let mut buf: Vec<i128> = gbar.to_vec();
    while buf.last() == Some(&0) {
        buf.pop();
    }
    let mut m = 0;
    while buf.len() > 1 {
        let mut acc = 0;
        for c in buf.iter_mut().rev() {
            let next = (acc * b + *c) % p;
            *c = acc;
            acc = next;
        }
        if acc != 0 {
            break;
        }
        buf.pop();
        m += 1;
    }
    m
}

/// `g(b + p y)` with its content in `p` removed, or `None` on overflow.
fn shift_scale(g: &[i128], b: i128, p: i128) -> Option<Vec<i128>> {
    let n = g.len();
    let mut h = vec![0i128; n];
    // Horner: h = h * (b + p y) + g_i
    for &gi in g.iter().rev() {
        let mut next = vec![0i128; n];
        for (i, &c) in h.iter().enumerate() {
            if c == 0 {
                continue;
            }
            next[i] = next[i].checked_add(c.checked_mul(b)?)?;
            if i + 1 < n {
                next[i + 1] = next[i + 1].checked_add(c.checked_mul(p)?)?;
            }
        }
        next[0] = next[0].checked_add(gi)?;
        h = next;
    }
    if h.iter().all(|&c| c == 0) {
        return None;
    }
    while h.iter().all(|c| c % p == 0) {
        h.iter_mut().for_each(|c| *c /= p);
    }
    Some(h)
}

/// Total multiplicity of the roots in `F_p` of `coeffs mod p`.
fn residue_root_mass_fp(coeffs: &[i64], p: u64) -> usize {
    let base = ffpoly::reduce_i64(coeffs, p);
    if base.len() <= 1 {
        return 0;
    }
    let mut mass = 0;
    let target = base.len() - 1;
    let mut buf = Vec::with_capacity(base.len());
    for r in 0..p {
        buf.clear();
        buf.extend_from_slice(&base);
        loop {
            // synthetic division by (x - r), in place
            let mut acc = 0u64;
            for c in buf.iter_mut().rev() {
                let next = (acc * r + *c) % p;
                *c = acc;
                acc = next;
            }
            if acc != 0 {
                break;
            }
            buf.pop();
            mass += 1;
            if buf.len() <= 1 {
                break;
            }
        }
        if mass == target {
            break;
        }
    }
    mass
}

/// Whether `f` factors into linear factors over `Q_{p^f}` for the given place.
pub fn splits_completely(f: &IntPolynomial, place: &LocalFieldSpec) -> Result<SplitReport, SplittingError> {
    splits_completely_with(f, place, PrecisionPolicy::default())
}

pub fn splits_completely_with(
    f: &IntPolynomial,
    place: &LocalFieldSpec,
    policy: PrecisionPolicy,
) -> Result<SplitReport, SplittingError> {
    let checker = SplittingChecker::new(std::slice::from_ref(place), policy)?;
    let (pl, ring) = &checker.places[0];
    checker.split_at(f, pl, ring)
}

/// All roots of `f` lie in `L_v` for every `v` in `places`.
pub fn is_totally_ls(
    f: &IntPolynomial,
    places: &[LocalFieldSpec],
) -> Result<TotallySplitReport, SplittingError> {
    SplittingChecker::new(places, PrecisionPolicy::default())?.check(f)
}
