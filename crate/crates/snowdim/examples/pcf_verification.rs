//! Postcritical finiteness of the degree-29 map: every critical value must
//! land within tolerance of {1, −1, ∞}, and the local degrees must exhaust
//! the Riemann–Hurwitz count Σ (deg_c − 1) = 2·29 − 2 = 56.

use snowdim::config::SNAP_TOL_RHAT;
use snowdim::ratmap::builtin;
use snowdim::sphere::SpherePoint;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = builtin("rhat")?;
    let expected = [
        SpherePoint::from_re_im(1.0, 0.0),
        SpherePoint::from_re_im(-1.0, 0.0),
        SpherePoint::infinity(),
    ];
    let report = map.verify_pcf(&expected, SNAP_TOL_RHAT)?;

    let criticals = map.critical_points()?;
    let rh: usize = criticals.iter().map(|c| c.local_degree - 1).sum();
    println!("critical points: {}", criticals.len());
    for c in &criticals {
        let z = c.point.to_complex();
        let tag = match z {
            None => "inf".to_string(),
            Some(z) => format!("{:.5}{:+.5}i", z.re, z.im),
        };
        println!("  {tag:>22}  local degree {}", c.local_degree);
    }
    println!("Riemann-Hurwitz sum: {rh} (expected 56)");
    println!(
        "max critical-value deviation from {{1, -1, inf}}: {:.2e} (tol {:.0e})",
        report.max_deviation, SNAP_TOL_RHAT
    );
    println!("pcf: {}", if report.pass && rh == 56 { "pass" } else { "FAIL" });
    Ok(())
}
