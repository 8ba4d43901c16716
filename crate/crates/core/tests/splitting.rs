use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use totally_padic::splitting::{is_totally_ls, splits_completely, Decision};
use totally_padic::{IntPolynomial, LocalFieldSpec};

/// `g(b + p y)` divided by its `p`-content.
fn shift(g: &[BigInt], b: &BigInt, p: &BigInt) -> Vec<BigInt> {
    let n = g.len();
    let mut h = vec![BigInt::zero(); n];
    for gi in g.iter().rev() {
        let mut next = vec![BigInt::zero(); n];
        for (i, c) in h.iter().enumerate() {
            next[i] += c * b;
            if i + 1 < n {
                next[i + 1] += c * p;
            }
        }
        next[0] += gi;
        h = next;
    }
    while h.iter().all(|c| c.is_multiple_of(p)) {
        h.iter_mut().for_each(|c| *c /= p);
    }
    h
}

/// Roots in `Z_p` of a squarefree integer polynomial with content prime to `p`,
/// by walking residue classes: a simple residue root lifts uniquely, a
/// multiple one is refined.
fn zp_roots(g: &[BigInt], p: u64, depth: u32) -> usize {
    assert!(depth < 200, "squarefree input terminates");
    let pb = BigInt::from(p);
    let mut total = 0;
    for b in 0..p {
        let bb = BigInt::from(b);
        let val: BigInt = g.iter().rev().fold(BigInt::zero(), |acc, c| acc * &bb + c);
        if !val.is_multiple_of(&pb) {
            continue;
        }
        let der: BigInt = g
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(BigInt::zero(), |acc, (i, c)| acc * &bb + c * BigInt::from(i));
        if !der.is_multiple_of(&pb) {
            total += 1;
            continue;
        }
        total += zp_roots(&shift(g, &bb, &pb), p, depth + 1);
    }
    total
}

fn oracle_splits(c: &[i64], p: u64) -> bool {
    let g: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
    zp_roots(&g, p, 0) == c.len() - 1
}

fn boxes(n: usize, b: i64, mut visit: impl FnMut(&[i64])) {
    let mut c = vec![-b; n + 1];
    c[n] = 1;
    loop {
        visit(&c);
        let mut i = 0;
        while i < n {
            c[i] += 1;
            if c[i] <= b {
                break;
            }
            c[i] = -b;
            i += 1;
        }
        if i == n {
            break;
        }
    }
}

#[test]
fn splitting_matches_residue_walk_oracle() {
    for p in [2u64, 3, 5] {
        let pl = LocalFieldSpec::unramified(p, 1).unwrap();
        for n in 1..=4 {
            let b = if n == 4 { 4 } else { 8 };
            boxes(n, b, |c| {
                let f = IntPolynomial::from_i64(c);
                if !f.is_squarefree() {
                    return;
                }
                let r = splits_completely(&f, &pl).unwrap();
                assert_eq!(r.splits, oracle_splits(c, p), "{f} at {p}");
            });
        }
    }
}

#[test]
fn totally_split_needs_every_place() {
    let s = [LocalFieldSpec::unramified(2, 1).unwrap(), LocalFieldSpec::unramified(3, 1).unwrap()];
    boxes(3, 6, |c| {
        let f = IntPolynomial::from_i64(c);
        if !f.is_squarefree() {
            return;
        }
        let both = is_totally_ls(&f, &s).unwrap();
        let each = s.iter().all(|pl| splits_completely(&f, pl).unwrap().splits);
        assert_eq!(both.decision == Decision::Yes, each, "{f}");
    });
}

#[test]
fn repeated_factors_count_with_multiplicity() {
    // (x - 1)^2 (x + 3) over Z_2: every root is in Z_2
    let f = IntPolynomial::from_i64(&[3, -5, 1, 1]);
    let r = splits_completely(&f, &LocalFieldSpec::unramified(2, 1).unwrap()).unwrap();
    assert!(r.splits && r.roots_found == 3);
    let g = &f * &IntPolynomial::from_i64(&[1, 1, 1]);
    let at2 = splits_completely(&g, &LocalFieldSpec::unramified(2, 1).unwrap()).unwrap();
    assert_eq!(at2.roots_found, 3);
    let at4 = splits_completely(&g, &LocalFieldSpec::unramified(2, 2).unwrap()).unwrap();
    assert!(at4.splits);
}
