//! Polynomials over the prime field `F_p`, coefficients stored as `u64` in `[0, p)`.
//!
//! Small, allocation-happy helpers; `p` is assumed below `2^32` so that products
//! fit comfortably in `u128` intermediates.

pub type FpPoly = Vec<u64>;

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub fn trim(mut f: FpPoly) -> FpPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn degree(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn reduce_i64(coeffs: &[i64], p: u64) -> FpPoly {
    trim(
        coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect(),
    )
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on division by zero.
pub fn div_rem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let inv = inv_mod(b[db], p);
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = mulmod(r[dr], inv, p);
        q[dr - db] = c;
        for (j, &bj) in b[..=db].iter().enumerate() {
            let idx = dr - db + j;
            r[idx] = (r[idx] + p - mulmod(c, bj, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    div_rem(a, b, p).1
}

pub fn monic(f: &[u64], p: u64) -> FpPoly {
    match degree(f) {
        None => Vec::new(),
        Some(d) => {
            let inv = inv_mod(f[d], p);
            f[..=d].iter().map(|&c| mulmod(c, inv, p)).collect()
        }
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn derivative(f: &[u64], p: u64) -> FpPoly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % p, p))
            .collect(),
    )
}

pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> FpPoly {
    rem(&mul(a, b, p), m, p)
}

/// `base^exp mod m`
pub fn pow_poly_mod(base: &[u64], mut exp: u128, m: &[u64], p: u64) -> FpPoly {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

/// `x^(p^k) mod m` by repeated `p`-th powering.
fn frobenius_power(m: &[u64], k: u32, p: u64) -> FpPoly {
    let mut acc = rem(&[0, 1], m, p);
    for _ in 0..k {
        acc = pow_poly_mod(&acc, p as u128, m, p);
    }
    acc
}

fn prime_factors_small(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for `f` over `F_p`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = monic(f, p);
    let n = match degree(&f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n as u32,
    };
    let x = vec![0, 1];
    for r in prime_factors_small(n as u64) {
        let h = frobenius_power(&f, n / r as u32, p);
        let g = gcd(&f, &sub(&h, &x, p), p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    let h = frobenius_power(&f, n, p);
    rem(&sub(&h, &x, p), &f, p).is_empty()
}

/// Distinct-degree factorization of a squarefree monic `f`: for each `d`, the
/// number of irreducible factors of degree `d`, as `(d, count)` pairs.
pub fn distinct_degree_counts(f: &[u64], p: u64) -> Vec<(usize, usize)> {
    let mut f = monic(f, p);
    let x = vec![0, 1];
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while let Some(df) = degree(&f) {
        if df < 2 * d {
            if df > 0 {
                out.push((df, 1));
            }
            break;
        }
        h = pow_poly_mod(&h, p as u128, &f, p);
        let g = gcd(&f, &sub(&h, &x, p), p);
        if let Some(dg) = degree(&g) {
            if dg > 0 {
                out.push((d, dg / d));
                f = div_rem(&f, &g, p).0;
                h = rem(&h, &f, p);
            }
        }
        d += 1;
    }
    out
}

/// Lexicographically smallest monic irreducible of degree `deg` over `F_p`,
/// comparing `(c_{deg-1}, ..., c_0)`.
pub fn smallest_irreducible(p: u64, deg: u32) -> FpPoly {
    if deg == 1 {
        return vec![0, 1];
    }
    let total = (p as u128).pow(deg);
    for code in 0..total {
        let mut c = Vec::with_capacity(deg as usize + 1);
        let mut k = code;
        for _ in 0..deg {
            c.push((k % p as u128) as u64);
            k /= p as u128;
        }
        c.push(1);
        if c[0] != 0 && is_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small() {
        assert!(is_irreducible(&[1, 0, 1], 3)); // x^2+1 mod 3
        assert!(!is_irreducible(&[1, 0, 1], 5));
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2)); // (x+1)^2
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
    }

    #[test]
    fn smallest_irreducible_choices() {
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(smallest_irreducible(5, 1), vec![0, 1]);
    }

    #[test]
    fn ddf_counts() {
        // x^4 + 4 mod 3 = x^4 + 1 = (x^2+x+2)(x^2+2x+2)
        assert_eq!(distinct_degree_counts(&[1, 0, 0, 0, 1], 3), vec![(2, 2)]);
        // x^3 - x = x(x-1)(x+1) mod 5
        assert_eq!(distinct_degree_counts(&[0, 4, 0, 1], 5), vec![(1, 3)]);
        // (x^2+1)(x - 2) over F_3
        let f = mul(&[1, 0, 1], &[1, 1], 3);
        assert_eq!(distinct_degree_counts(&f, 3), vec![(1, 1), (2, 1)]);
    }
}
