//! The acceptance gate: ten criteria, one printed pass/fail line each
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use std::time::Instant;

use snowdim::config::SNAP_TOL_RHAT;
use snowdim::density::{blowup_fit, kappa_j, normalization_check, rohlin_entropy, DensityContext};
use snowdim::ergodic::{
    birkhoff_lyapunov, dimension_experiment, hausdorff_dimension, holder_probe, jensen_gap,
    ExperimentReport,
};
use snowdim::ratmap::builtin;
use snowdim::snowcomb::generator::bundled;
use snowdim::snowcomb::{
    annulus_crossing_min, build_generator, metric_probe, random_address, BaseKind,
    SubdivisionComplex,
};
use snowdim::sphere::{RngStream, SpherePoint};

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn check(&mut self, idx: usize, name: &str, pass: bool, detail: String) {
        let verdict = if pass { "pass" } else { "FAIL" };
        println!("criterion {idx:2} [{verdict}] {name}: {detail}");
        if !pass {
            self.failures.push(format!("criterion {idx} ({name}): {detail}"));
        }
    }
}

fn table1_protocol(name: &str, n_expansion: u32) -> ExperimentReport {
    let map = builtin(name).unwrap();
    let rng = RngStream::new(123, 0);
    dimension_experiment(&map, n_expansion, 100, 10_000, &rng).unwrap()
}

#[test]
fn acceptance() {
    let mut gate = Gate { failures: Vec::new() };

    // 1. Table 1 reproduction, R-hat row.
    let t = Instant::now();
    let rhat_report = table1_protocol("rhat", 5);
    let rhat_secs = t.elapsed().as_secs_f64();
    gate.check(
        1,
        "table1 rhat row",
        (2.020..=2.040).contains(&rhat_report.mean_dim)
            && rhat_report.std_dim <= 0.005
            && rhat_secs < 300.0,
        format!(
            "mean dim {:.4} (window [2.020, 2.040]), std {:.4} (<= 0.005), {:.0}s (< 300s)",
            rhat_report.mean_dim, rhat_report.std_dim, rhat_secs
        ),
    );

    // 2. Lattes control.
    let lattes_report = table1_protocol("lattes_2222", 2);
    let chi_defect = (2.0 * lattes_report.mean_chi - 4.0f64.ln()).abs();
    gate.check(
        2,
        "lattes control",
        (1.99..=2.01).contains(&lattes_report.mean_dim) && chi_defect < 0.01,
        format!(
            "mean dim {:.4} (window [1.99, 2.01]), |2chi - log 4| = {:.4} (< 0.01)",
            lattes_report.mean_dim, chi_defect
        ),
    );

    // 3. Jensen gap: in [0.05, 0.15] for R-hat, >= -0.02 for every catalog
    // map. The squaring map has no Table-1 protocol (its chi along Lebesgue
    // orbits is negative), so plain Birkhoff runs stand in.
    let squaring = builtin("squaring").unwrap();
    let mut rng = RngStream::new(123, 0);
    let mut squaring_chi = 0.0;
    for _ in 0..5 {
        let z = rng.sample_unit_square();
        squaring_chi += birkhoff_lyapunov(&squaring, &z, 200, &mut rng)
            .unwrap()
            .chi_estimate
            / 5.0;
    }
    let gaps = [
        jensen_gap(rhat_report.mean_chi, 29),
        jensen_gap(lattes_report.mean_chi, 4),
        jensen_gap(squaring_chi, 2),
    ];
    gate.check(
        3,
        "jensen gap",
        (0.05..=0.15).contains(&gaps[0]) && gaps.iter().all(|&g| g >= -0.02),
        format!(
            "rhat {:.4} (window [0.05, 0.15]); lattes {:.4}, squaring {:.1} (>= -0.02)",
            gaps[0], gaps[1], gaps[2]
        ),
    );

    // 4. Hausdorff dimensions of the two snowspheres.
    let d29 = hausdorff_dimension(29, 5);
    let d13 = hausdorff_dimension(13, 3);
    gate.check(
        4,
        "hausdorff dimensions",
        (d29 - 2.0922).abs() <= 1e-4 && (d13 - 2.3347).abs() <= 1e-4,
        format!("(29,5) -> {d29:.5} (2.0922 +/- 1e-4), (13,3) -> {d13:.5} (2.3347 +/- 1e-4)"),
    );

    // 5. PCF verification of R-hat.
    let rhat = builtin("rhat").unwrap();
    let expected = [
        SpherePoint::from_re_im(1.0, 0.0),
        SpherePoint::from_re_im(-1.0, 0.0),
        SpherePoint::infinity(),
    ];
    let pcf = rhat.verify_pcf(&expected, SNAP_TOL_RHAT).unwrap();
    let rh: usize = rhat
        .critical_points()
        .unwrap()
        .iter()
        .map(|c| c.local_degree - 1)
        .sum();
    gate.check(
        5,
        "pcf verification",
        pcf.pass && rh == 56,
        format!(
            "max critical-value deviation {:.2e} (tol 2e-2), Riemann-Hurwitz sum {rh} (= 56)",
            pcf.max_deviation
        ),
    );

    // 6. Density suite on the Lattes control plus the R-hat blow-up.
    let lattes = builtin("lattes_2222").unwrap();
    let ctx = DensityContext::new(&lattes).unwrap();
    let mut rng = RngStream::new(3, 0);
    let mut kappa0_exact = true;
    let mut recursion_rel: f64 = 0.0;
    let mut tested = 0usize;
    while tested < 100 {
        let z = rng.sample_unit_square();
        if ctx.post_distance(&z) <= ctx.exclusion_radius {
            continue;
        }
        kappa0_exact &= kappa_j(&lattes, &z, 0).unwrap().value == 1.0;
        for j in 1..=3usize {
            let lhs = ctx.kappa(&z, j).unwrap().value;
            let mut rhs = 0.0;
            for (y, m) in lattes.preimages(&z).unwrap() {
                let sharp = lattes.spherical_derivative(&y).unwrap();
                rhs += m as f64 * ctx.kappa_unchecked(&y, j - 1).unwrap().value / (sharp * sharp);
            }
            recursion_rel = recursion_rel.max((lhs - rhs).abs() / lhs);
        }
        tested += 1;
    }
    let mut rng = RngStream::new(5, 0);
    let norm = normalization_check(&lattes, 2, 1_000_000, &mut rng).unwrap();
    let lattes_blowup = blowup_fit(
        &lattes,
        &SpherePoint::from_re_im(1.0, 0.0),
        4,
        &[0.3, 0.1, 0.03, 0.01, 0.003],
    )
    .unwrap();
    let rhat_blowup = blowup_fit(
        &rhat,
        &SpherePoint::from_re_im(1.0, 0.0),
        2,
        &[0.03, 0.01, 0.003, 0.001, 0.0003, 0.0001],
    )
    .unwrap();
    gate.check(
        6,
        "density suite",
        kappa0_exact
            && recursion_rel <= 1e-6
            && (norm.estimate - 1.0).abs() <= 0.02
            && (lattes_blowup.slope + 1.0).abs() <= 0.15
            && (rhat_blowup.slope + 1.6).abs() <= 0.2,
        format!(
            "kappa_0 = 1 exact: {kappa0_exact}; recursion rel {recursion_rel:.1e} (<= 1e-6); \
             int kappa_2 = {:.4} (1 +/- 0.02); blow-up slopes lattes {:.3} (-1.0 +/- 0.15), \
             rhat at 1 {:.3} (-1.6 +/- 0.2)",
            norm.estimate, lattes_blowup.slope, rhat_blowup.slope
        ),
    );

    // 7. Rohlin consistency h = 2 chi for both maps.
    let mut rels = Vec::new();
    for (map, chi) in [(&lattes, lattes_report.mean_chi), (&rhat, rhat_report.mean_chi)] {
        let mut rng = RngStream::new(7, 0);
        let est = rohlin_entropy(map, 200, 2, &mut rng).unwrap();
        rels.push((est.h - 2.0 * chi).abs() / (2.0 * chi));
    }
    gate.check(
        7,
        "rohlin consistency",
        rels.iter().all(|&r| r < 0.10),
        format!(
            "|h - 2chi|/2chi: lattes {:.4}, rhat {:.4} (< 0.10)",
            rels[0], rels[1]
        ),
    );

    // 8. Snowcomb suite on the main 29-face generator.
    let t = Instant::now();
    let generator = build_generator(&bundled("main_29").unwrap()).unwrap();
    let m = generator.face_count();
    let complex = SubdivisionComplex::new(generator, BaseKind::Cube, 3).unwrap();
    let counts_ok = (0..=3usize)
        .all(|j| complex.cylinder_count(j).unwrap() == 6 * 29usize.pow(j as u32));
    let crossings: Vec<usize> = (0..=2usize)
        .map(|j| annulus_crossing_min(&complex, j).unwrap())
        .collect();
    let mut rng = RngStream::new(17, 0);
    let mut monotone = 0usize;
    for _ in 0..100 {
        let x = random_address(&complex, 3, &mut rng);
        let y = random_address(&complex, 3, &mut rng);
        if metric_probe(&complex, &x, &y, 3).unwrap().monotone_from_j0 {
            monotone += 1;
        }
    }
    let snow_secs = t.elapsed().as_secs_f64();
    gate.check(
        8,
        "snowcomb suite",
        m == 29
            && counts_ok
            && crossings.iter().all(|&c| c >= 5)
            && monotone == 100
            && snow_secs < 120.0,
        format!(
            "M = {m}; counts 6*29^j: {counts_ok}; annulus minima {crossings:?} (>= 5); \
             monotone pairs {monotone}/100; {snow_secs:.0}s (< 120s)"
        ),
    );

    // 9. Hoelder probe at shrinking radii.
    let radii = [1e-3, 1e-5, 1e-7, 1e-9, 1e-11, 1e-13];
    let mut last = Vec::new();
    for (map, n_expansion, chi) in [
        (&lattes, 2u32, lattes_report.mean_chi),
        (&rhat, 5u32, rhat_report.mean_chi),
    ] {
        let mut rng = RngStream::new(11, 0);
        let probe = holder_probe(map, n_expansion, chi, 200, &radii, &mut rng).unwrap();
        last.push(*probe.median_ratio.last().unwrap());
    }
    gate.check(
        9,
        "hoelder probe",
        (0.95..=1.05).contains(&last[0]) && (0.93..=1.03).contains(&last[1]),
        format!(
            "median ratio at r = 1e-13: lattes {:.4} (window [0.95, 1.05]), \
             rhat {:.4} (window [0.93, 1.03])",
            last[0], last[1]
        ),
    );

    // 10. CLI byte-determinism.
    let bin = env!("CARGO_BIN_EXE_snowdim");
    let dir = std::env::temp_dir().join("snowdim-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let commands: [&[&str]; 3] = [
        &["classify", "--map", "rhat"],
        &["lyapunov", "--map", "lattes_2222", "--seeds", "3", "--n", "500"],
        &[
            "snow",
            "--generator",
            "main_29",
            "--level",
            "2",
            "--npairs",
            "5",
        ],
    ];
    let mut deterministic = true;
    for (i, args) in commands.iter().enumerate() {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.join(format!("cmd{i}-run{run}.csv"));
            let status = std::process::Command::new(bin)
                .args(*args)
                .arg("--out")
                .arg(&out)
                .status()
                .unwrap();
            assert!(status.success(), "{args:?} failed");
            outputs.push(std::fs::read(&out).unwrap());
        }
        deterministic &= outputs[0] == outputs[1];
    }
    gate.check(
        10,
        "cli determinism",
        deterministic,
        format!(
            "{} invocations repeated with identical flags, byte-identical output: {deterministic}",
            commands.len()
        ),
    );

    assert!(
        gate.failures.is_empty(),
        "acceptance failures:\n{}",
        gate.failures.join("\n")
    );
}
