//! Kii, per-triad indicators, CI and a verdict for a small matrix.
//!
//! cargo run --example analyze_matrix

use pc_inconsistency::{kii_matrix, PcMatrix};

fn main() -> pc_inconsistency::Result<()> {
    let m = PcMatrix::new(vec![
        vec![1.0, 2.0, 5.0, 9.0],
        vec![0.5, 1.0, 3.0, 4.0],
        vec![0.2, 1.0 / 3.0, 1.0, 2.0],
        vec![1.0 / 9.0, 0.25, 0.5, 1.0],
    ])?;
    let report = kii_matrix(&m)?;

    println!(
        "{:>10} {:>8} {:>8} {:>8} {:>10} {:>10}",
        "triad", "x", "y", "z", "kii", "distance"
    );
    for r in &report.per_triad {
        let (i, j, k) = r.indices;
        println!(
            "{:>10} {:>8.4} {:>8.4} {:>8.4} {:>10.6} {:>10.6}",
            format!("({i},{j},{k})"),
            r.x,
            r.y,
            r.z,
            r.kii,
            r.distance
        );
    }
    println!();
    println!("matrix kii  {:.6} at {:?}", report.matrix_kii, report.worst_triad);
    println!("ci          {:.6}", report.ci);
    println!(
        "verdict     {} at tolerance {:.4}",
        if report.consistent {
            "consistent"
        } else {
            "inconsistent"
        },
        report.tolerance
    );
    Ok(())
}
