//! Orbifold signatures from ramification portraits: the degree-29 map has
//! signature (2, 12, 60) with χ_orb = −2/5 (hyperbolic), the Lattès control
//! has (2, 2, 2, 2) with χ_orb = 0 (parabolic candidate).

use snowdim::orbifold::{classify, maxdeg, signature_from_portrait};
use snowdim::ratmap::builtin;
use snowdim::sphere::SpherePoint;

fn show(p: &SpherePoint) -> String {
    match p.to_complex() {
        None => "inf".to_string(),
        Some(z) if z.im.abs() < 1e-9 => format!("{:.4}", z.re),
        Some(z) => format!("{:.4}{:+.4}i", z.re, z.im),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["rhat", "lattes_2222"] {
        let map = builtin(name)?;
        let portrait = map.portrait(map.portrait_snap_tol(), 1000)?;
        let (signature, nu) = signature_from_portrait(&portrait)?;
        let chi = signature.euler_characteristic();
        println!("{name}:");
        println!("  postcritical set: {} points", portrait.postcritical_indices().len());
        for (&node, &v) in &nu {
            println!("    nu({}) = {v}", show(&portrait.nodes[node].point));
        }
        println!("  signature: {:?}", signature.values());
        println!("  chi_orb  = {}/{}", chi.numer(), chi.denom());
        println!("  class    = {}", classify(&signature));
        let md = maxdeg(&portrait)?;
        for (&node, &v) in &md {
            println!("    maxdeg({}) = {v}", show(&portrait.nodes[node].point));
        }
    }
    Ok(())
}
