//! Rohlin's formula h_μ = ∫ log J_μ dμ as a Birkhoff average along a generic
//! orbit, with κ_j standing in for the invariant density. dim μ = 2 is
//! equivalent to h = 2χ (and Jensen gives h ≤ log deg with equality only in
//! the Lattès case), so the h/2χ comparison is a second, independent route
//! to the dimension statements.

use snowdim::density::rohlin_entropy;
use snowdim::ergodic::dimension_experiment;
use snowdim::ratmap::builtin;
use snowdim::sphere::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["lattes_2222", "rhat"] {
        let map = builtin(name)?;
        let n_expansion = map.default_expansion().unwrap();

        // A quick χ estimate for the comparison.
        let rng = RngStream::new(123, 0);
        let chi = dimension_experiment(&map, n_expansion, 10, 2000, &rng)?.mean_chi;

        let mut rng = RngStream::new(7, 0);
        let est = rohlin_entropy(&map, 200, 2, &mut rng)?;
        println!("{name}:");
        println!("  h (Rohlin, j = 2) = {:.4} from {} orbit terms", est.h, est.terms);
        println!("  2 chi             = {:.4}", 2.0 * chi);
        println!(
            "  log deg           = {:.4}   |h - 2chi|/2chi = {:.3}",
            (map.degree() as f64).ln(),
            (est.h - 2.0 * chi).abs() / (2.0 * chi)
        );
    }
    Ok(())
}
