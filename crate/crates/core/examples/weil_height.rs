//! Certified Weil heights, the two evaluation paths, and pair sums.

use totally_padic::heights::{archimedean_pair_sum, baker_mahler_bound, finite_pair_sums, pairwise_g_sum, weil_height};
use totally_padic::IntPolynomial;

fn main() {
    for coeffs in ["-2,1", "-1,2", "-1,-1,1", "-17,0,1", "-1,-1,0,1", "3,-2,0,0,5"] {
        let f: IntPolynomial = coeffs.parse().unwrap();
        let h = weil_height(&f).unwrap();
        println!(
            "{:<16} h = {:.12} +- {:.1e}   arch {:.12} + nonarch {}  (gap {:.1e})",
            f.to_string(),
            h.h,
            h.error_radius,
            h.arch_contrib + 0.0,
            h.nonarch_exact,
            h.two_path_gap()
        );
    }

    let f: IntPolynomial = "-1,-1,0,1".parse().unwrap();
    let h = weil_height(&f).unwrap();
    let g = pairwise_g_sum(&h.roots, 3).unwrap();
    println!("g-sum for {f}: {:.12} >= {:.12}", g.value, baker_mahler_bound(3));
    let arch = archimedean_pair_sum(&h.roots).unwrap();
    let fin = finite_pair_sums(&f).unwrap();
    println!("pair sums: archimedean {:.12}, finite {} = {:.12}", arch.value, fin, fin.value());
    println!("product formula residual {:.1e}", arch.value + fin.value());
}
