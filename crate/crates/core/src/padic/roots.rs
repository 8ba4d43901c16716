//! Root counting in `Q_{p^f}` by recursion over residue classes.
//!
//! A node holds a polynomial `F` over `Z_{p^f}` known modulo `p^prec`. After
//! dividing out its content, every simple root of `F mod p` in `F_q` accounts
//! for exactly one root of `F` (Hensel); every multiple residue root `r` is
//! resolved by recursing on `F(r + p x)`. Each recursive step consumes at
//! least one digit of precision, so exhaustion is detected rather than
//! mistaken for "no root".

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::{PadicError, Unramified};
use crate::poly::IntPolynomial;

pub const INITIAL_PRECISION: u32 = 32;
pub const DEFAULT_PRECISION_CAP: u32 = 2048;

/// Environment variable consulted by [`PrecisionPolicy::from_env`].
pub const PRECISION_CAP_ENV: &str = "TPADIC_PRECISION_CAP";

/// Working precision starts at `initial` and doubles on exhaustion up to `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub initial: u32,
    pub cap: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial: INITIAL_PRECISION,
            cap: DEFAULT_PRECISION_CAP,
        }
    }
}

impl PrecisionPolicy {
    pub fn with_cap(cap: u32) -> Self {
        PrecisionPolicy {
            initial: INITIAL_PRECISION.min(cap.max(1)),
            cap: cap.max(1),
        }
    }

    /// Default policy, with the cap overridden by `TPADIC_PRECISION_CAP` if set.
    pub fn from_env() -> Self {
        std::env::var(PRECISION_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Self::with_cap)
            .unwrap_or_default()
    }

    fn schedule(self) -> impl Iterator<Item = u32> {
        let cap = self.cap;
        std::iter::successors(Some(self.initial.min(cap)), move |&m| {
            (m < cap).then(|| (m.saturating_mul(2)).min(cap))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCount {
    /// Roots in `Q_{p^f}`, with multiplicity.
    pub count: usize,
    pub degree: usize,
    pub precision_used: u32,
}

/// Roots of a squarefree monic polynomial, all found in `Z_{p^f}`, arranged
/// by their `p`-adic expansions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitTree {
    pub degree: usize,
    /// `sum_{i != j} v_p(alpha_i - alpha_j)`, ordered pairs.
    pub pair_valuation_sum: u64,
    pub precision_used: u32,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    count: usize,
    pair_sum: u64,
}

struct Exhausted;

/// Number of roots of `f` in `Q_{p^fdeg}`, counted with multiplicity, using the
/// default precision policy.
pub fn count_roots_in_unramified(
    f: &IntPolynomial,
    p: u64,
    fdeg: u32,
) -> Result<RootCount, PadicError> {
    let ring = Unramified::new(p, fdeg)?;
    count_roots_with(f, &ring, PrecisionPolicy::default())
}

pub fn count_roots_with(
    f: &IntPolynomial,
    ring: &Arc<Unramified>,
    policy: PrecisionPolicy,
) -> Result<RootCount, PadicError> {
    let degree = f.degree().ok_or(PadicError::ZeroPolynomial)?;
    if degree == 0 {
        return Ok(RootCount {
            count: 0,
            degree,
            precision_used: 0,
        });
    }
    let (rest, zero_roots) = f.strip_zero_roots();
    let parts = rest.squarefree_decomposition();
    let mut count = zero_roots;
    let mut used = 0;
    for (g, mult) in &parts {
        let (c, prec) = with_retries(policy, |prec| count_all_roots(ring, g, prec))?;
        count += mult * c.count;
        used = used.max(prec);
    }
    Ok(RootCount {
        count,
        degree,
        precision_used: used,
    })
}

/// For squarefree `f` whose roots all lie in `Z_{p^f}`, the root tree with
/// its pairwise valuation sum; `None` if some root is missing from that ring.
pub fn split_tree(
    f: &IntPolynomial,
    ring: &Arc<Unramified>,
    policy: PrecisionPolicy,
) -> Result<Option<SplitTree>, PadicError> {
    let degree = f.root_degree().map_err(|_| PadicError::NoRoots)?;
    let (tally, prec) = with_retries(policy, |prec| {
        let coeffs = integer_poly_to_reps(ring, f.coeffs(), prec);
        count_integral(ring, coeffs, prec, 0)
    })?;
    Ok((tally.count == degree).then_some(SplitTree {
        degree,
        pair_valuation_sum: tally.pair_sum,
        precision_used: prec,
    }))
}

fn with_retries<T>(
    policy: PrecisionPolicy,
    mut attempt: impl FnMut(u32) -> Result<T, Exhausted>,
) -> Result<(T, u32), PadicError> {
    let mut last = policy.initial;
    for prec in policy.schedule() {
        last = prec;
        if let Ok(t) = attempt(prec) {
            return Ok((t, prec));
        }
    }
    Err(PadicError::Undecided(last))
}

/// Integral roots plus roots of negative valuation (via the reversed polynomial).
fn count_all_roots(ring: &Unramified, g: &IntPolynomial, prec: u32) -> Result<Tally, Exhausted> {
    let coeffs = integer_poly_to_reps(ring, g.coeffs(), prec);
    let integral = count_integral(ring, coeffs, prec, 0)?;
    if g.leading().is_some_and(|c| c.abs().is_one()) {
        return Ok(integral);
    }
    // roots of g with v <= -1 are the roots of rev(g)(p x) in Z_{p^f}
    let p = BigInt::from(ring.p());
    let mut scale = BigInt::from(1);
    let scaled: Vec<BigInt> = g
        .reversed()
        .coeffs()
        .iter()
        .map(|c| {
            let v = c * &scale;
            scale *= &p;
            v
        })
        .collect();
    let coeffs = integer_poly_to_reps(ring, &scaled, prec);
    let outer = count_integral(ring, coeffs, prec, 0)?;
    Ok(Tally {
        count: integral.count + outer.count,
        pair_sum: 0,
    })
}

fn integer_poly_to_reps(ring: &Unramified, coeffs: &[BigInt], prec: u32) -> Vec<Vec<BigInt>> {
    let m = ring.p_pow(prec);
    coeffs.iter().map(|c| ring.scalar_rep(c, &m)).collect()
}

fn count_integral(
    ring: &Unramified,
    coeffs: Vec<Vec<BigInt>>,
    prec: u32,
    depth: u32,
) -> Result<Tally, Exhausted> {
    let content = coeffs
        .iter()
        .map(|c| ring.val_rep(c, prec))
        .min()
        .unwrap_or(prec);
    if content >= prec {
        return Err(Exhausted);
    }
    let prec = prec - content;
    let modulus = ring.p_pow(prec);
    let coeffs: Vec<Vec<BigInt>> = if content == 0 {
        coeffs
    } else {
        let pk = ring.p_pow(content);
        coeffs
            .into_iter()
            .map(|c| c.into_iter().map(|x| (x / &pk).mod_floor(&modulus)).collect())
            .collect()
    };

    let rf = ring.residue_field();
    let mut residue: Vec<Vec<u64>> = coeffs.iter().map(|c| ring.residue_of(c)).collect();
    while residue.last().is_some_and(|c| rf.is_zero(c)) {
        residue.pop();
    }
    if residue.len() <= 1 {
        return Ok(Tally::default());
    }

    let mut children = Vec::new();
    for (root, mult) in rf.roots_with_multiplicity(&residue) {
        if mult == 1 {
            children.push(Tally { count: 1, pair_sum: 0 });
        } else {
            let lift = ring.lift_residue(&root);
            let shifted = shift_and_scale(ring, &coeffs, &lift, &modulus);
            children.push(count_integral(ring, shifted, prec, depth + 1)?);
        }
    }

    let count: usize = children.iter().map(|c| c.count).sum();
    let same_class: usize = children.iter().map(|c| c.count * c.count).sum();
    let inner: u64 = children.iter().map(|c| c.pair_sum).sum();
    Ok(Tally {
        count,
        pair_sum: inner + depth as u64 * (count * count - same_class) as u64,
    })
}

/// `F(r + p x)` modulo `modulus`.
fn shift_and_scale(
    ring: &Unramified,
    coeffs: &[Vec<BigInt>],
    r: &[BigInt],
    modulus: &BigInt,
) -> Vec<Vec<BigInt>> {
    let n = coeffs.len();
    let mut acc: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for c in coeffs.iter().rev() {
        // acc <- acc * (x + r) + c
        let mut next = Vec::with_capacity(acc.len() + 1);
        for i in 0..=acc.len() {
            let mut term = if i < acc.len() {
                ring.mul_rep(&acc[i], r, modulus)
            } else {
                ring.zero_rep()
            };
            if i > 0 {
                term = ring.add_rep(&term, &acc[i - 1], modulus);
            }
            next.push(term);
        }
        next[0] = ring.add_rep(&next[0], c, modulus);
        acc = next;
    }
    let p = BigInt::from(ring.p());
    let mut scale = BigInt::from(1);
    for c in acc.iter_mut() {
        if scale > *modulus {
            for x in c.iter_mut() {
                *x = BigInt::from(0);
            }
        } else {
            for x in c.iter_mut() {
                *x = (&*x * &scale).mod_floor(modulus);
            }
        }
        scale *= &p;
    }
    acc
}
