//! Two triads with the same distance from consistency but very different
//! relative errors.
//!
//! cargo run --example sticks

use pc_inconsistency::stick_example;

fn main() {
    let s = stick_example();
    for (label, r) in [("coarse", &s.coarse), ("fine", &s.fine)] {
        println!(
            "{label:>6} {:?}: distance {}, error/y {:.4}%, error/true {:.4}%, kii {:.6}",
            r.triad,
            r.distance,
            100.0 * r.relative_error,
            100.0 * r.true_value_relative_error,
            r.kii
        );
    }
}
