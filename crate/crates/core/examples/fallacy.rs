//! The sequence (x^n, x^2n + c, x^n): every triad sits at distance c from
//! consistency while Kii and relative error vanish.
//!
//! cargo run --example fallacy

use pc_inconsistency::{constant_offset_table, convergence_table};

fn main() -> pc_inconsistency::Result<()> {
    println!("x = 2, c = 1");
    println!("{:>4} {:>10} {:>14} {:>14}", "n", "distance", "rel. error", "kii");
    for r in convergence_table(2.0, 10)? {
        println!(
            "{:>4} {:>10} {:>14.4e} {:>14.4e}",
            r.n, r.distance, r.relative_error, r.kii
        );
    }

    // With an offset of 2^64 the offset only survives rounding once x^2n is
    // large enough to hold it, and only until x^2n swallows it again.
    let c = 2f64.powi(64);
    let rows = constant_offset_table(2.0, c, 64)?;
    let exact: Vec<u32> = rows.iter().filter(|r| r.exact).map(|r| r.n).collect();
    println!();
    println!(
        "x = 2, c = 2^64: exact for n in {}..={}",
        exact[0],
        exact[exact.len() - 1]
    );
    for r in rows.iter().filter(|r| [6, 20, 40, 58].contains(&r.n)) {
        println!(
            "{:>4} {:>10.3e} {:>14.4e} {:>14.4e}",
            r.n, r.distance, r.relative_error, r.kii
        );
    }
    Ok(())
}
