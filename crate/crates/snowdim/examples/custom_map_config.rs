//! Loading a rational map from a JSON config instead of the built-in
//! catalog. The config accepts either plain coefficient lists or the
//! factored form (constant · Π(z − zero)^m / Π(z − pole)^m plus an affine
//! offset) used for the degree-29 map.

use snowdim::ratmap::from_json;
use snowdim::sphere::SpherePoint;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // The degree-2 Chebyshev map z^2 - 2, postcritically finite on {2, -2, inf}.
    let config = r#"{
        "label": "chebyshev_2",
        "numerator": [[-2.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
        "denominator": [[1.0, 0.0]]
    }"#;
    let map = from_json(config)?;
    println!("loaded {} of degree {}", map.label(), map.degree());

    let z = SpherePoint::from_re_im(0.5, 0.0);
    let w = map.evaluate(&z)?;
    println!("R(0.5) = {:.4}", w.to_complex().unwrap().re);

    for c in map.critical_points()? {
        let at = match c.point.to_complex() {
            None => "inf".to_string(),
            Some(z) => format!("{:.4}", z.re),
        };
        let to = match c.image.to_complex() {
            None => "inf".to_string(),
            Some(z) => format!("{:.4}", z.re),
        };
        println!("critical point {at} (degree {}) -> {to}", c.local_degree);
    }

    let portrait = map.portrait(map.portrait_snap_tol(), 1000)?;
    println!(
        "postcritical set: {} points, critical periodic orbit: {}",
        portrait.postcritical_points().len(),
        portrait.has_critical_periodic_orbit
    );
    Ok(())
}
