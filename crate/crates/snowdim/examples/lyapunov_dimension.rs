//! Birkhoff-sum Lyapunov exponents and the dimension of elliptic harmonic
//! measure: dim μ = 2 log N / χ for the degree-29 map with expansion N = 5.
//!
//! Run with `cargo run --release --example lyapunov_dimension`.

use snowdim::ergodic::{dimension_experiment, hausdorff_dimension};
use snowdim::ratmap::builtin;
use snowdim::sphere::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = builtin("rhat")?;
    let n_expansion = map.default_expansion().expect("rhat has N = 5");

    // A light protocol for a quick run; the paper's table uses 100 seeds
    // and 10^4 iterations (see the `table1` subcommand of the binary).
    let rng = RngStream::new(123, 0);
    let report = dimension_experiment(&map, n_expansion, 10, 2000, &rng)?;

    println!("map:        {} (degree {})", report.map_label, report.degree);
    println!("seeds:      {} x {} iterations", report.seeds, report.iterations);
    for (i, d) in report.per_seed_dim.iter().enumerate() {
        println!("  seed {i:2}: dim = {d:.4}");
    }
    println!("chi:        {:.5}", report.mean_chi);
    println!(
        "dim mu:     {:.4}  (max {:.4}, min {:.4}, std {:.4})",
        report.mean_dim, report.max_dim, report.min_dim, report.std_dim
    );
    println!(
        "Hausdorff:  {:.4}  (log 29 / log 5 — measure dim must stay below)",
        hausdorff_dimension(report.degree, n_expansion)
    );
    println!("Jensen gap: {:.4}  (log deg − 2 chi ≥ 0)", report.jensen_gap);
    Ok(())
}
