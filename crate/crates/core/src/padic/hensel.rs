use num_bigint::BigInt;

use super::{PAdicElement, PadicError};
use crate::poly::IntPolynomial;

/// Newton–Hensel lifting of an approximate root to absolute precision `target_prec`.
///
/// The representative of `a0` is treated as an exact starting value; the
/// criterion `v(f(a0)) > 2 v(f'(a0))` must hold for it. The result is the
/// unique root congruent to `a0` modulo `p^(v(f'(a0)) + 1)`.
pub fn hensel_lift(
    f: &IntPolynomial,
    a0: &PAdicElement,
    target_prec: u32,
) -> Result<PAdicElement, PadicError> {
    hensel_lift_traced(f, a0, target_prec).map(|(r, _)| r)
}

/// As [`hensel_lift`], also returning the number of Newton steps taken.
pub fn hensel_lift_traced(
    f: &IntPolynomial,
    a0: &PAdicElement,
    target_prec: u32,
) -> Result<(PAdicElement, usize), PadicError> {
    f.root_degree().map_err(|_| PadicError::NoRoots)?;
    let df = f.derivative();
    let probe = target_prec.max(a0.prec()).max(1);

    // Large enough to see v(f'(a0)) unless f'(a0) vanishes to high order.
    let start = a0.lifted_to(2 * probe + 2);
    let d = start.eval_poly(&df);
    if d.is_zero() {
        return Err(PadicError::NotLiftable {
            value_val: start.eval_poly(f).val() as i64,
            twice_deriv_val: 2 * d.val() as i64,
        });
    }
    let k = d.val();
    let working = target_prec + 2 * k + 2;
    let mut r = a0.lifted_to(working);
    let value = r.eval_poly(f);
    if value.val() <= 2 * k && !value.is_zero() {
        return Err(PadicError::NotLiftable {
            value_val: value.val() as i64,
            twice_deriv_val: 2 * k as i64,
        });
    }

    let mut steps = 0;
    loop {
        let value = r.eval_poly(f);
        if value.val() >= target_prec + k {
            break;
        }
        // r <- r - f(r) / f'(r), dividing both by p^k so the denominator is a unit
        let deriv = r.eval_poly(&df);
        let unit = div_by_p_power(&deriv, k);
        let num = div_by_p_power(&value, k);
        let step = num.mul(&unit.inverse()?)?;
        r = r.sub(&step)?.lifted_to(working);
        steps += 1;
        debug_assert!(steps < 64, "Hensel iteration failed to converge");
    }
    Ok((r.with_prec(target_prec), steps))
}

fn div_by_p_power(a: &PAdicElement, k: u32) -> PAdicElement {
    let ring = a.ring().clone();
    let pk = ring.p_pow(k);
    let rep: Vec<BigInt> = a.rep().iter().map(|c| c / &pk).collect();
    ring.element(rep, a.prec() - k)
}
