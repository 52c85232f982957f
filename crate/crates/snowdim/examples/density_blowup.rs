//! Blow-up of κ_j at postcritical points: κ_j(z) ~ |z − p|^{−2(1−1/m)} with
//! m = maxdeg(p). Log–log slopes are fitted along shrinking radii and
//! compared with the predicted exponent.

use snowdim::density::blowup_fit;
use snowdim::ratmap::builtin;
use snowdim::sphere::SpherePoint;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lattes = builtin("lattes_2222")?;
    let rhat = builtin("rhat")?;
    let wide = [0.3, 0.1, 0.03, 0.01, 0.003];
    let tight = [0.03, 0.01, 0.003, 0.001, 0.0003, 0.0001];

    let cases = [
        (&lattes, SpherePoint::from_re_im(1.0, 0.0), 4usize, &wide[..]),
        (&rhat, SpherePoint::from_re_im(1.0, 0.0), 2, &tight[..]),
        (&rhat, SpherePoint::infinity(), 2, &wide[..]),
    ];
    for (map, p, j, radii) in cases {
        let fit = blowup_fit(map, &p, j, radii)?;
        let at = match p.to_complex() {
            None => "inf".to_string(),
            Some(z) => format!("{}", z.re),
        };
        println!("{} at {at} (j = {j}):", map.label());
        for (r, k) in fit.radii.iter().zip(&fit.kappas) {
            println!("  r = {r:<7} kappa = {k:.4e}");
        }
        println!(
            "  slope {:.3} vs predicted {:.3}\n",
            fit.slope, fit.predicted_exponent
        );
    }
    Ok(())
}
