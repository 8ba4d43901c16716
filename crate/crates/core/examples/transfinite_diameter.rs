//! Transfinite diameters d_n of O_v: the even-split formula against brute force,
//! and the slow approach to the capacity.

use totally_padic::capacity::{capacity_ring_of_integers, finite_degree_lower_bound, transfinite_diameter, DiameterMethod};
use totally_padic::LocalFieldSpec;

fn main() {
    for key in ["2", "3", "2,1,2"] {
        let pl: LocalFieldSpec = key.parse().unwrap();
        for n in 2..=6 {
            let a = transfinite_diameter(&pl, n, DiameterMethod::EquidistributionFormula).unwrap();
            let b = transfinite_diameter(&pl, n, DiameterMethod::BruteForce { depth: 3 }).unwrap();
            println!("{pl} n = {n}: formula {} log {}, brute force {} log {}", a.coefficient, a.p, b.coefficient, b.p);
        }
    }
    let pl: LocalFieldSpec = "2".parse().unwrap();
    let cap = capacity_ring_of_integers(&pl).value();
    for k in [4, 8, 12, 16, 20] {
        let n = 1usize << k;
        let d = transfinite_diameter(&pl, n, DiameterMethod::EquidistributionFormula).unwrap();
        let lb = finite_degree_lower_bound(n, std::slice::from_ref(&pl)).unwrap();
        println!(
            "n = 2^{k:<2} log d_n = {:.10}  gap to capacity {:.3e}  lower bound {:.10}",
            d.value(),
            d.value() - cap,
            lb.value()
        );
    }
}
