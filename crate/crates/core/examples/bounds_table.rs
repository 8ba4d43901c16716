//! Every bound kind for a few sets of places.

use totally_padic::capacity::{all_bounds, capacity_ring_of_integers};
use totally_padic::LocalFieldSpec;

fn main() {
    let sets: Vec<Vec<LocalFieldSpec>> = vec![
        vec!["2".parse().unwrap()],
        vec!["3,1,2".parse().unwrap()],
        vec!["2".parse().unwrap(), "3".parse().unwrap()],
        vec!["2,2,1".parse().unwrap(), "5,1,1,5,1/2".parse().unwrap()],
    ];
    for s in sets {
        let names: Vec<String> = s.iter().map(|p| p.to_string()).collect();
        println!("S = {}", names.join(" "));
        for pl in &s {
            println!("  log capacity of O at {pl}: {}", capacity_ring_of_integers(pl));
        }
        for b in all_bounds(&s) {
            println!("  {:<16} {:>14.10}  {}", b.kind.name(), b.value(), b.exact);
        }
    }
}
