//! Newton polygons and root valuations for a few polynomials.

use totally_padic::padic::newton_polygon;
use totally_padic::IntPolynomial;

fn main() {
    for (coeffs, p) in [("-2,0,1", 2), ("-1,-1,1", 5), ("2,-4,1", 2), ("12,-16,0,0,0,1", 2)] {
        let f: IntPolynomial = coeffs.parse().unwrap();
        let np = newton_polygon(&f, p).unwrap();
        println!("{f}  at p = {p}");
        println!("  {}", np.to_json());
        for (v, m) in np.root_valuations() {
            println!("  {m} root(s) of valuation {v}");
        }
    }
}
