//! `snowdim`: CSV-producing subcommands over the library.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use snowdim::config::POST_EXCLUSION_RADIUS;
use snowdim::density::{blowup_fit, DensityContext};
use snowdim::ergodic::{
    alpha_exponent, dimension_experiment, hausdorff_dimension, holder_probe, jensen_gap,
};
use snowdim::orbifold::{classify, signature_from_portrait};
use snowdim::ratmap;
use snowdim::report::{fmt_f64, Report};
use snowdim::snowcomb::{
    annulus_crossing_min, build_generator, chain_distance, generator as sc_generator,
    metric::chain_node_count, random_address, snowsphere_hausdorff_dim, BaseKind, PointAddress,
    SubdivisionComplex,
};
use snowdim::sphere::{RngStream, SpherePoint};

#[derive(Parser)]
#[command(
    name = "snowdim",
    version,
    about = "Dimension of elliptic harmonic measure on snowspheres"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-seed Birkhoff estimates of the Lyapunov exponent χ and dim μ.
    Lyapunov {
        #[arg(long)]
        map: String,
        /// Orbit length per seed.
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        seeds: usize,
        #[arg(long, default_value_t = 123)]
        seed: u64,
        /// Expansion factor N (defaults to the map's configured value).
        #[arg(long)]
        expansion: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The dimension table: one row per map with Table-1 statistics.
    Table1 {
        /// Comma-separated catalog names or config paths.
        #[arg(long, default_value = "rhat,lattes_2222")]
        maps: String,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        seeds: usize,
        #[arg(long, default_value_t = 123)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orbifold signature and parabolic/hyperbolic classification.
    Classify {
        #[arg(long)]
        map: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify postcritical finiteness against the snapped portrait.
    PcfCheck {
        #[arg(long)]
        map: String,
        /// Chordal tolerance for critical values.
        #[arg(long, default_value_t = 2e-2)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the invariant density κ_j on a square grid.
    Density {
        #[arg(long)]
        map: String,
        /// Recursion depth j.
        #[arg(long, default_value_t = 2)]
        level: usize,
        /// Grid points per side over [-2, 2]².
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the κ_j blow-up exponent at a postcritical point.
    Blowup {
        #[arg(long)]
        map: String,
        /// Postcritical point: `1`, `-1`, `inf`, or `re,im`.
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 2)]
        level: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a subdivision complex and report chain distances d_j.
    Snow {
        /// Bundled generator name or JSON path.
        #[arg(long)]
        generator: String,
        #[arg(long, default_value_t = 3)]
        level: usize,
        /// File of address pairs (`base.c1.c2 base.c1.c2` per line);
        /// random pairs are sampled when omitted.
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        npairs: usize,
        #[arg(long, default_value_t = 123)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hölder consistency of the snow metric against chordal distance.
    HolderProbe {
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 300)]
        samples: usize,
        #[arg(long, default_value_t = 123)]
        seed: u64,
        /// Lyapunov exponent; estimated from a short experiment if omitted.
        #[arg(long)]
        chi: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Config(String),
    Numeric(String),
}

fn cfg<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Config(e.to_string())
}

fn num<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numeric(e.to_string())
}

fn load_map(name: &str) -> Result<ratmap::RationalMap, CliError> {
    ratmap::resolve(name).map_err(cfg)
}

fn expansion_of(map: &ratmap::RationalMap, flag: Option<u32>) -> Result<u32, CliError> {
    flag.or_else(|| map.default_expansion()).ok_or_else(|| {
        CliError::Config(format!(
            "map {} has no configured expansion factor; pass --expansion",
            map.label()
        ))
    })
}

fn run_lyapunov(
    map_name: &str,
    n: usize,
    seeds: usize,
    seed: u64,
    expansion: Option<u32>,
) -> Result<Report, CliError> {
    if n == 0 || seeds == 0 {
        return Err(CliError::Config("n and seeds must be positive".into()));
    }
    let map = load_map(map_name)?;
    let n_exp = expansion_of(&map, expansion)?;
    let config = format!("map={map_name} n={n} seeds={seeds} seed={seed} expansion={n_exp}");
    let rng = RngStream::new(seed, 0);
    let report = dimension_experiment(&map, n_exp, seeds, n, &rng).map_err(num)?;
    let mut out = Report::new("lyapunov", &config, Some(seed));
    out.comment("mean_chi", &fmt_f64(report.mean_chi))
        .comment("mean_dim", &fmt_f64(report.mean_dim))
        .comment("std_dim", &fmt_f64(report.std_dim))
        .columns(&["map", "seed_index", "dim"]);
    for (i, d) in report.per_seed_dim.iter().enumerate() {
        out.row([map.label().to_string(), i.to_string(), fmt_f64(*d)]);
    }
    Ok(out)
}

fn run_table1(maps: &str, n: usize, seeds: usize, seed: u64) -> Result<Report, CliError> {
    if n == 0 || seeds == 0 {
        return Err(CliError::Config("n and seeds must be positive".into()));
    }
    let names: Vec<&str> = maps.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return Err(CliError::Config("no maps given".into()));
    }
    let config = format!("maps={maps} n={n} seeds={seeds} seed={seed}");
    let mut out = Report::new("table1", &config, Some(seed));
    out.columns(&[
        "map",
        "snowsphere_dim",
        "dim_avg",
        "dim_max",
        "dim_min",
        "dim_std",
        "chi",
        "alpha",
        "jensen_gap",
        "status",
    ]);
    for name in names {
        let row = (|| -> Result<[String; 10], String> {
            let map = ratmap::resolve(name).map_err(|e| e.to_string())?;
            let n_exp = map
                .default_expansion()
                .ok_or_else(|| format!("map {name} has no configured expansion factor"))?;
            let rng = RngStream::new(seed, 0);
            let r =
                dimension_experiment(&map, n_exp, seeds, n, &rng).map_err(|e| e.to_string())?;
            Ok([
                map.label().to_string(),
                fmt_f64(hausdorff_dimension(r.degree, n_exp)),
                fmt_f64(r.mean_dim),
                fmt_f64(r.max_dim),
                fmt_f64(r.min_dim),
                fmt_f64(r.std_dim),
                fmt_f64(r.mean_chi),
                fmt_f64(r.alpha),
                fmt_f64(r.jensen_gap),
                "ok".into(),
            ])
        })();
        match row {
            Ok(cells) => {
                out.row(cells);
            }
            Err(message) => {
                let mut cells = vec![name.to_string()];
                cells.extend(std::iter::repeat(String::new()).take(8));
                cells.push(format!("error: {}", message.replace(',', ";")));
                out.row(cells);
            }
        }
    }
    Ok(out)
}

fn run_classify(map_name: &str) -> Result<Report, CliError> {
    let map = load_map(map_name)?;
    let portrait = map.portrait(map.portrait_snap_tol(), 1000).map_err(num)?;
    let (signature, _nu) = signature_from_portrait(&portrait).map_err(num)?;
    let chi = signature.euler_characteristic();
    let class = classify(&signature);
    let config = format!("map={map_name}");
    let mut out = Report::new("classify", &config, None);
    out.columns(&["map", "signature", "euler_char_num", "euler_char_den", "class"]);
    let sig_text = signature
        .values()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    out.row([
        map.label().to_string(),
        sig_text,
        chi.numer().to_string(),
        chi.denom().to_string(),
        class.to_string(),
    ]);
    Ok(out)
}

fn run_pcf_check(map_name: &str, tol: f64) -> Result<Report, CliError> {
    if !(tol > 0.0) {
        return Err(CliError::Config(format!("tolerance must be positive, got {tol}")));
    }
    let map = load_map(map_name)?;
    let portrait = map.portrait(tol / 4.0, 1000).map_err(num)?;
    let expected = portrait.postcritical_points();
    let pcf = map.verify_pcf(&expected, tol).map_err(num)?;
    let rh_sum: usize = map
        .critical_points()
        .map_err(num)?
        .iter()
        .map(|c| c.local_degree - 1)
        .sum();
    let config = format!("map={map_name} tol={tol}");
    let mut out = Report::new("pcf-check", &config, None);
    out.comment("postcritical_count", &expected.len().to_string())
        .columns(&["map", "degree", "rh_sum", "max_deviation", "status"]);
    out.row([
        map.label().to_string(),
        map.degree().to_string(),
        rh_sum.to_string(),
        fmt_f64(pcf.max_deviation),
        if pcf.pass && rh_sum == 2 * map.degree() - 2 { "pass" } else { "fail" }.to_string(),
    ]);
    if !pcf.pass {
        return Err(CliError::Numeric(format!(
            "critical values deviate up to {} from the postcritical set (tol {tol})",
            pcf.max_deviation
        )));
    }
    Ok(out)
}

fn run_density(map_name: &str, level: usize, grid: usize) -> Result<Report, CliError> {
    if grid < 2 {
        return Err(CliError::Config("grid must be at least 2".into()));
    }
    let map = load_map(map_name)?;
    let ctx = DensityContext::new(&map).map_err(num)?;
    let config = format!("map={map_name} level={level} grid={grid}");
    let mut out = Report::new("density", &config, None);
    out.comment("region", "[-2,2]x[-2,2]")
        .comment("exclusion_radius", &fmt_f64(POST_EXCLUSION_RADIUS))
        .columns(&["re", "im", "kappa", "fiber_count"]);
    let step = 4.0 / (grid - 1) as f64;
    for iy in 0..grid {
        for ix in 0..grid {
            let (re, im) = (-2.0 + step * ix as f64, -2.0 + step * iy as f64);
            let z = SpherePoint::from_re_im(re, im);
            if ctx.post_distance(&z) <= POST_EXCLUSION_RADIUS {
                continue;
            }
            let k = ctx.kappa(&z, level).map_err(num)?;
            out.row([
                fmt_f64(re),
                fmt_f64(im),
                fmt_f64(k.value),
                k.fiber_count.to_string(),
            ]);
        }
    }
    Ok(out)
}

fn parse_point(label: &str) -> Result<SpherePoint, CliError> {
    match label {
        "inf" | "infinity" => Ok(SpherePoint::infinity()),
        _ => {
            if let Some((re, im)) = label.split_once(',') {
                let re: f64 = re.trim().parse().map_err(cfg)?;
                let im: f64 = im.trim().parse().map_err(cfg)?;
                Ok(SpherePoint::from_re_im(re, im))
            } else {
                let re: f64 = label.trim().parse().map_err(cfg)?;
                Ok(SpherePoint::from_re_im(re, 0.0))
            }
        }
    }
}

fn run_blowup(map_name: &str, point: &str, level: usize) -> Result<Report, CliError> {
    let map = load_map(map_name)?;
    let p = parse_point(point)?;
    let radii: Vec<f64> = (0..12).map(|k| 0.3 * 10f64.powf(-0.25 * k as f64)).collect();
    let fit = blowup_fit(&map, &p, level, &radii).map_err(num)?;
    let config = format!("map={map_name} point={point} level={level}");
    let mut out = Report::new("blowup", &config, None);
    out.comment("slope", &fmt_f64(fit.slope))
        .comment("predicted_exponent", &fmt_f64(fit.predicted_exponent))
        .columns(&["radius", "kappa"]);
    for (r, k) in fit.radii.iter().zip(fit.kappas.iter()) {
        out.row([fmt_f64(*r), fmt_f64(*k)]);
    }
    Ok(out)
}

fn run_snow(
    generator: &str,
    level: usize,
    pairs: Option<&PathBuf>,
    npairs: usize,
    seed: u64,
) -> Result<Report, CliError> {
    let spec = sc_generator::resolve(generator).map_err(cfg)?;
    let g = build_generator(&spec).map_err(num)?;
    let complex = SubdivisionComplex::new(g, BaseKind::Cube, level).map_err(num)?;
    let g = complex.generator();
    let pair_list: Vec<(PointAddress, PointAddress)> = match pairs {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(cfg)?;
            let mut list = Vec::new();
            for (ln, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mut parts = line.split_whitespace();
                let (a, b) = (parts.next(), parts.next());
                match (a, b, parts.next()) {
                    (Some(a), Some(b), None) => {
                        list.push((a.parse().map_err(cfg)?, b.parse().map_err(cfg)?));
                    }
                    _ => {
                        return Err(CliError::Config(format!(
                            "{}:{}: expected two addresses per line",
                            path.display(),
                            ln + 1
                        )))
                    }
                }
            }
            list
        }
        None => {
            let mut rng = RngStream::new(seed, 0);
            (0..npairs)
                .map(|_| {
                    (
                        random_address(&complex, level, &mut rng),
                        random_address(&complex, level, &mut rng),
                    )
                })
                .collect()
        }
    };
    let config = format!(
        "generator={generator} level={level} pairs={} seed={seed}",
        pairs.map(|p| p.display().to_string()).unwrap_or_else(|| format!("random:{npairs}"))
    );
    let mut out = Report::new("snow", &config, Some(seed));
    out.comment("faces", &g.face_count().to_string())
        .comment("n", &g.n().to_string())
        .comment("embeddable", &g.embeddable().to_string())
        .comment("hausdorff_dim", &fmt_f64(snowsphere_hausdorff_dim(g)));
    for (j, count) in (0..=level).map(|j| (j, complex.cylinder_count(j).unwrap())) {
        out.comment(&format!("cylinders_{j}"), &count.to_string());
    }
    for j in 0..level {
        let a = annulus_crossing_min(&complex, j).map_err(num)?;
        out.comment(&format!("annulus_min_{j}"), &a.to_string());
    }
    out.columns(&["pair", "x", "y", "j", "nodes", "d_j"]);
    for (i, (x, y)) in pair_list.iter().enumerate() {
        for j in 0..=level {
            let nodes = chain_node_count(&complex, x, y, j).map_err(num)?;
            let d = chain_distance(&complex, x, y, j).map_err(num)?;
            out.row([
                i.to_string(),
                x.to_string(),
                y.to_string(),
                j.to_string(),
                nodes.to_string(),
                fmt_f64(d),
            ]);
        }
    }
    Ok(out)
}

fn run_holder_probe(
    map_name: &str,
    samples: usize,
    seed: u64,
    chi: Option<f64>,
) -> Result<Report, CliError> {
    if samples == 0 {
        return Err(CliError::Config("samples must be positive".into()));
    }
    let map = load_map(map_name)?;
    let n_exp = expansion_of(&map, None)?;
    let chi = match chi {
        Some(c) if c > 0.0 => c,
        Some(c) => return Err(CliError::Config(format!("chi must be positive, got {c}"))),
        None => {
            let rng = RngStream::new(seed, 0);
            dimension_experiment(&map, n_exp, 20, 2000, &rng)
                .map_err(num)?
                .mean_chi
        }
    };
    let radii = [0.1, 0.03, 0.01, 0.003];
    let mut rng = RngStream::new(seed, 1);
    let probe = holder_probe(&map, n_exp, chi, samples, &radii, &mut rng).map_err(num)?;
    let config = format!("map={map_name} samples={samples} seed={seed} chi={chi}");
    let mut out = Report::new("holder-probe", &config, Some(seed));
    out.comment("chi", &fmt_f64(chi))
        .comment(
            "alpha_reference",
            &fmt_f64(alpha_exponent(chi, n_exp).map_err(num)?),
        )
        .comment("jensen_gap", &fmt_f64(jensen_gap(chi, map.degree())))
        .columns(&["radius", "median_ratio", "pairs_used"]);
    for ((r, m), used) in probe
        .radii
        .iter()
        .zip(probe.median_ratio.iter())
        .zip(probe.pairs_used.iter())
    {
        out.row([fmt_f64(*r), fmt_f64(*m), used.to_string()]);
    }
    Ok(out)
}

fn dispatch(cli: Cli) -> Result<(Report, Option<PathBuf>), CliError> {
    match cli.command {
        Command::Lyapunov { map, n, seeds, seed, expansion, out } => {
            Ok((run_lyapunov(&map, n, seeds, seed, expansion)?, out))
        }
        Command::Table1 { maps, n, seeds, seed, out } => {
            Ok((run_table1(&maps, n, seeds, seed)?, out))
        }
        Command::Classify { map, out } => Ok((run_classify(&map)?, out)),
        Command::PcfCheck { map, tol, out } => Ok((run_pcf_check(&map, tol)?, out)),
        Command::Density { map, level, grid, out } => {
            Ok((run_density(&map, level, grid)?, out))
        }
        Command::Blowup { map, point, level, out } => {
            Ok((run_blowup(&map, &point, level)?, out))
        }
        Command::Snow { generator, level, pairs, npairs, seed, out } => {
            Ok((run_snow(&generator, level, pairs.as_ref(), npairs, seed)?, out))
        }
        Command::HolderProbe { map, samples, seed, chi, out } => {
            Ok((run_holder_probe(&map, samples, seed, chi)?, out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((report, out)) => {
            let result = match out {
                Some(path) => report.write(&path),
                None => {
                    print!("{}", report.to_csv());
                    Ok(())
                }
            };
            match result {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("snowdim: output error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(CliError::Config(message)) => {
            eprintln!("snowdim: configuration error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(message)) => {
            eprintln!("snowdim: numerical failure: {message}");
            ExitCode::from(3)
        }
    }
}
