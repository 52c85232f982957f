//! A miniature of the paper's Table 1: for each catalog map, the measured
//! dimension of elliptic harmonic measure against the snowsphere Hausdorff
//! dimension. Maps without a usable protocol (the squaring map's harmonic
//! measure sits on a circle, χ → 0 along Lebesgue orbits) report the error
//! instead of a row.

use snowdim::ergodic::{dimension_experiment, hausdorff_dimension};
use snowdim::ratmap::{builtin, CATALOG};
use snowdim::sphere::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:<12} {:>6} {:>10} {:>8} {:>8} {:>8}",
        "map", "deg", "snow dim", "dim avg", "dim std", "jensen"
    );
    for name in CATALOG {
        let map = builtin(name)?;
        let Some(n_expansion) = map.default_expansion() else {
            println!("{name:<12} (no default expansion factor; skipped)");
            continue;
        };
        let rng = RngStream::new(123, 0);
        match dimension_experiment(&map, n_expansion, 20, 2000, &rng) {
            Ok(r) => println!(
                "{:<12} {:>6} {:>10.4} {:>8.4} {:>8.4} {:>8.4}",
                name,
                r.degree,
                hausdorff_dimension(r.degree, n_expansion),
                r.mean_dim,
                r.std_dim,
                r.jensen_gap
            ),
            Err(e) => println!("{name:<12} error: {e}"),
        }
    }
    Ok(())
}
