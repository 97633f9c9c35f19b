//! The additive form of a matrix: entries ln(a_ij), triads consistent when
//! y = x + z.
//!
//! cargo run --example additive

use pc_inconsistency::{additive_kii_triad, kii_triad, PcMatrix};

fn main() -> pc_inconsistency::Result<()> {
    let m = PcMatrix::from_upper_triangle(3, &[2.0, 5.0, 3.0])?;
    let a = m.to_additive();
    for (mt, at) in m.triads().iter().zip(a.triads()) {
        println!(
            "multiplicative {:?} kii {:.6} | additive ({:.4}, {:.4}, {:.4}) kii {:.6}",
            mt.values(),
            kii_triad(mt.x, mt.y, mt.z)?,
            at.x,
            at.y,
            at.z,
            additive_kii_triad(at.x, at.y, at.z)?
        );
    }
    let back = a.to_multiplicative()?;
    println!("round trip a_02 = {}", back.get(0, 2));
    Ok(())
}
