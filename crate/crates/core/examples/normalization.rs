//! Maps from [0, inf) onto [0, 1). Only the exponential map turns the log
//! deviation of a triad back into Kii.
//!
//! cargo run --example normalization

use pc_inconsistency::{check_unit_interval_stability, kii_triad, NormalizationMap};

fn main() -> pc_inconsistency::Result<()> {
    let maps = [
        NormalizationMap::Exponential,
        NormalizationMap::logistic(1.0)?,
        NormalizationMap::gompertz(1.0, 1.0)?,
    ];
    print!("{:>6}", "t");
    for m in &maps {
        print!(" {:>12}", format!("{m:?}").split_whitespace().next().unwrap_or(""));
    }
    println!();
    for t in [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 40.0] {
        print!("{t:>6}");
        for m in &maps {
            print!(" {:>12.6}", m.apply(t)?);
        }
        println!();
    }

    let (x, y, z): (f64, f64, f64) = (2.0, 5.0, 3.0);
    let t = (y / (x * z)).ln().abs();
    println!();
    println!("triad {:?}: kii {:.6}", (x, y, z), kii_triad(x, y, z)?);
    for m in &maps {
        println!("  {:?}(|ln q|) = {:.6}", m, m.apply(t)?);
    }
    println!();
    println!(
        "[0,1] closed under products, (1,inf) grows under squaring: {}",
        check_unit_interval_stability(10_000, 7)
    );
    Ok(())
}
