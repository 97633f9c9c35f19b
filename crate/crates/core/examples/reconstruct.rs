//! Consistent matrices from n - 1 comparisons: a chain of generators, and an
//! arbitrary spanning tree.
//!
//! cargo run --example reconstruct

use pc_inconsistency::io::render_matrix;
use pc_inconsistency::{complete_from_generators, complete_from_tree, kii_matrix, GeneratorSet};

fn main() -> pc_inconsistency::Result<()> {
    let chain = complete_from_generators(&GeneratorSet::new(vec![2.0, 3.0, 4.0])?);
    println!("{}", render_matrix(&chain.to_rows()));
    println!("kii {}", kii_matrix(&chain)?.matrix_kii);

    // A star centred on alternative 2.
    let star = complete_from_tree(4, &[(2, 0, 1.0 / 6.0), (2, 1, 1.0 / 3.0), (2, 3, 4.0)])?;
    println!();
    println!("{}", render_matrix(&star.to_rows()));
    println!("same as chain: {}", star == chain);
    Ok(())
}
