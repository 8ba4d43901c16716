//! The adelic set used for the upper bound: its capacity product is exactly 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use totally_padic::capacity::{check_adelic_set, AdelicSetSpec};
use totally_padic::{LocalFieldSpec, LogSum};

fn main() {
    let s: Vec<LocalFieldSpec> = vec!["2".parse().unwrap(), "3".parse().unwrap()];
    for eps in [BigRational::from_integer(BigInt::from(0)), BigRational::new(BigInt::from(1), BigInt::from(100))] {
        let spec = AdelicSetSpec::standard(s.clone(), eps);
        println!("log R = {}", spec.log_radius);
        println!("{}", check_adelic_set(&spec).unwrap().to_json());
    }
    let mut wrong = AdelicSetSpec::standard(s, BigRational::from_integer(BigInt::from(0)));
    wrong.log_radius = LogSum::term(BigRational::from_integer(BigInt::from(1)), 2);
    println!("{}", check_adelic_set(&wrong).unwrap_err());
}
