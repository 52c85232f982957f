//! The combinatorial chain metric d_j(x, y) = N^{−j}·(shortest j-chain node
//! count) and its convergence diagnostics: the first disjoint level j₀,
//! monotonicity of d_j − 2N^{−j} from j₀ on, and the insensitivity to the
//! choice of representative address.

use snowdim::snowcomb::generator::bundled;
use snowdim::snowcomb::{
    build_generator, chain_distance, metric_probe, random_address, BaseKind, PointAddress,
    SubdivisionComplex,
};
use snowdim::sphere::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let generator = build_generator(&bundled("main_29")?)?;
    let complex = SubdivisionComplex::new(generator, BaseKind::Cube, 3)?;

    // Two points on opposite faces of the cube, by explicit address.
    let x: PointAddress = "0.0.0.0".parse()?;
    let y: PointAddress = "1.0.0.0".parse()?;
    for j in 0..=3 {
        println!("d_{j}(x, y) = {:.5}", chain_distance(&complex, &x, &y, j)?);
    }

    let mut rng = RngStream::new(17, 0);
    let mut monotone = 0;
    for _ in 0..20 {
        let x = random_address(&complex, 3, &mut rng);
        let y = random_address(&complex, 3, &mut rng);
        let probe = metric_probe(&complex, &x, &y, 3)?;
        if probe.monotone_from_j0 {
            monotone += 1;
        }
    }
    println!("random pairs with d_j - 2N^-j nondecreasing past j0: {monotone}/20");

    let probe = metric_probe(&complex, &x, &y, 3)?;
    println!(
        "probe for the fixed pair: d = {:?}, j0 = {:?}, max d = {:.4}",
        probe.d.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>(),
        probe.j0,
        probe.max_d
    );
    Ok(())
}
