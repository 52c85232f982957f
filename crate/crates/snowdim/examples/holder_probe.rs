//! Hölder regularity of the snow metric: for pairs at chordal distance r,
//! the ratio log|x−y|_𝒮 / log|x−y| should approach α = log N / χ as r → 0
//! (α = 1 for the Lattès control, α ≈ 0.987 for the degree-29 map).

use snowdim::ergodic::{dimension_experiment, holder_probe};
use snowdim::ratmap::builtin;
use snowdim::sphere::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let radii = [1e-3, 1e-5, 1e-7, 1e-9, 1e-11, 1e-13];
    for name in ["lattes_2222", "rhat"] {
        let map = builtin(name)?;
        let n_expansion = map.default_expansion().unwrap();
        let rng = RngStream::new(123, 0);
        let chi = dimension_experiment(&map, n_expansion, 10, 2000, &rng)?.mean_chi;

        let mut rng = RngStream::new(11, 0);
        let probe = holder_probe(&map, n_expansion, chi, 200, &radii, &mut rng)?;
        println!("{name} (alpha reference {:.4}):", probe.alpha_reference);
        for ((r, m), used) in probe
            .radii
            .iter()
            .zip(&probe.median_ratio)
            .zip(&probe.pairs_used)
        {
            println!("  r = {r:<8.0e} median ratio {m:.4}  ({used} pairs)");
        }
    }
    Ok(())
}
