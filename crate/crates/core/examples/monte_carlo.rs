//! How well Kii, the maximum distance and the eigenvalue CI rank random
//! perturbed matrices by their worst relative error.
//!
//! cargo run --release --example monte_carlo [n] [trials] [perturbation] [seed]

use pc_inconsistency::monte_carlo_comparison;

fn main() -> pc_inconsistency::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_owned());
    let n: usize = arg(0, "4").parse().expect("n");
    let trials: usize = arg(1, "5000").parse().expect("trials");
    let perturbation: f64 = arg(2, "3").parse().expect("perturbation");
    let seed: u64 = arg(3, "1").parse().expect("seed");

    let summary = monte_carlo_comparison(n, trials, perturbation, seed)?;
    println!("n = {n}, {trials} trials, perturbation {perturbation}, seed {seed}");
    println!("{:>18} {:>12} {:>12} {:>10}", "indicator", "mean", "max", "spearman");
    for s in std::iter::once(&summary.max_relative_error).chain(&summary.indicators) {
        let rho = s.rank_correlation.map_or("-".to_owned(), |r| format!("{r:.4}"));
        println!("{:>18} {:>12.6} {:>12.6} {:>10}", s.name, s.mean, s.max, rho);
    }
    Ok(())
}
