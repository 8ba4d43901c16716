//! Lift residue roots to p-adic roots and count roots in unramified extensions.

use num_bigint::BigInt;
use totally_padic::padic::{count_roots_in_unramified, hensel_lift, Unramified};
use totally_padic::IntPolynomial;

fn main() {
    let z2 = Unramified::new(2, 1).unwrap();
    let f: IntPolynomial = "-17,0,1".parse().unwrap();
    let r = hensel_lift(&f, &z2.from_int(&BigInt::from(1), 3), 20).unwrap();
    println!("sqrt(17) in Z_2 mod 2^20: {}", r.rep()[0]);
    println!("  f(r) has valuation {}", r.eval_poly(&f).val());

    let z5 = Unramified::new(5, 1).unwrap();
    let g: IntPolynomial = "1,0,1".parse().unwrap();
    let i = hensel_lift(&g, &z5.from_int(&BigInt::from(2), 1), 6).unwrap();
    println!("sqrt(-1) in Z_5 mod 5^6: {}", i.rep()[0]);

    match hensel_lift(&"-2,0,1".parse().unwrap(), &z2.from_int(&BigInt::from(0), 4), 10) {
        Ok(_) => println!("unexpected root of x^2 - 2"),
        Err(e) => println!("x^2 - 2 over Z_2: {e}"),
    }

    for fdeg in 1..=2 {
        let c = count_roots_in_unramified(&g, 3, fdeg).unwrap();
        println!("x^2 + 1 over Q_(3^{fdeg}): {} of {} roots", c.count, c.degree);
    }
}
