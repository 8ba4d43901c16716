//! Which small polynomials have all their roots in every local field of S?

use totally_padic::splitting::{is_totally_ls, splits_completely, Decision};
use totally_padic::{IntPolynomial, LocalFieldSpec};

fn main() {
    let s = [LocalFieldSpec::unramified(2, 1).unwrap(), LocalFieldSpec::unramified(3, 2).unwrap()];
    for coeffs in ["-17,0,1", "1,0,1", "-1,-1,1", "2,-1,1", "-5,13,-6,-2,1"] {
        let f: IntPolynomial = coeffs.parse().unwrap();
        let rep = is_totally_ls(&f, &s).unwrap();
        let places: Vec<String> = rep
            .reports
            .iter()
            .map(|r| format!("{} {}/{}", r.place, r.roots_found, r.degree))
            .collect();
        let verdict = match rep.decision {
            Decision::Yes => "totally split",
            Decision::No => "not totally split",
            Decision::Undecided => "undecided",
        };
        println!("{:<30} {verdict:<18} {}", f.to_string(), places.join(", "));
    }
    let r = splits_completely(&"1,0,1".parse().unwrap(), &LocalFieldSpec::unramified(7, 1).unwrap()).unwrap();
    println!("x^2 + 1 at 7: {}", r.to_json());
}
