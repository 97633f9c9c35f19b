//! Greedy reduction of an inconsistent matrix toward a tolerance.
//!
//! cargo run --example reduce

use pc_inconsistency::io::render_matrix;
use pc_inconsistency::{reduce, PcMatrix, ReductionOptions};

fn main() -> pc_inconsistency::Result<()> {
    let m = PcMatrix::from_upper_triangle(4, &[2.0, 9.0, 0.5, 3.0, 0.25, 4.0])?;
    let opts = ReductionOptions {
        tolerance: 0.1,
        ..ReductionOptions::default()
    };
    let trace = reduce(&m, opts)?;

    println!("initial kii {:.6}", trace.initial_kii);
    for s in &trace.steps {
        println!(
            "step {:>2}: triad {:?} {:?} ({:?}) {:.4} -> {:.4}, kii {:.6}",
            s.step, s.worst_triad, s.element, s.rule, s.old_value, s.new_value, s.matrix_kii_after
        );
    }
    println!("converged {} with kii {:.6}", trace.converged, trace.final_kii);
    println!("{}", render_matrix(&trace.matrix.to_rows()));
    Ok(())
}
