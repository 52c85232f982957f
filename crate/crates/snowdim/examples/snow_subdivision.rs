//! Building snowsphere generators and iterating the subdivision: validation
//! of the five generator clauses, Hausdorff dimension log M / log N, cylinder
//! counts 6·M^j over the cube base, and the annulus-crossing diagnostic
//! behind the chain-metric convergence proof.

use snowdim::snowcomb::generator::{bundled, BUNDLED};
use snowdim::snowcomb::{
    annulus_crossing_min, build_generator, snowsphere_hausdorff_dim, BaseKind, SubdivisionComplex,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in BUNDLED {
        let spec = bundled(name)?;
        let generator = build_generator(&spec)?;
        println!(
            "{name}: N = {}, M = {} faces, embeddable = {}, dim = {:.4}",
            generator.n(),
            generator.face_count(),
            generator.embeddable(),
            snowsphere_hausdorff_dim(&generator)
        );
    }

    let generator = build_generator(&bundled("main_29")?)?;
    let complex = SubdivisionComplex::new(generator, BaseKind::Cube, 2)?;
    for j in 0..=2 {
        println!(
            "level {j}: {} cylinders, annulus crossing min = {}",
            complex.cylinder_count(j)?,
            if j < 2 {
                annulus_crossing_min(&complex, j)?.to_string()
            } else {
                "needs level j+1".to_string()
            }
        );
    }
    println!("(crossing >= N = 5 is the hypothesis of the metric theorem)");
    Ok(())
}
