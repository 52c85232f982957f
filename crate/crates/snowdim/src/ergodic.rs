//! Birkhoff-sum Lyapunov estimation, the dimension formulas, the Table-1
//! experiment harness, itineraries, and the Hölder-exponent probe.

use rayon::prelude::*;
use thiserror::Error;

use crate::config::{
    ANCHOR_IMAGE_RADIUS, ANCHOR_MIN_DISPLACEMENT, ANCHOR_SOURCE_RADIUS,
    CRITICAL_PERTURBATION, CRITICAL_PROXIMITY, ITINERARY_BOUNDARY_TOL,
};
use crate::ratmap::{RatMapError, RationalMap};
use crate::sphere::{chordal_distance, RngStream, SpherePoint};

#[derive(Debug, Error)]
pub enum ErgodicError {
    #[error("log spherical derivative non-finite at step {step} even after perturbation")]
    DegenerateOrbit { step: usize },
    #[error("chi estimate must be positive, got {0}")]
    NonPositiveChi(f64),
    #[error("postcritical set is not contained in the extended real line")]
    NotRealPostcritical,
    #[error("{excluded} of {seeds} seeds degenerate (> 1% budget)")]
    TooManyDegenerateSeeds { excluded: usize, seeds: usize },
    #[error(transparent)]
    RatMap(#[from] RatMapError),
}

/// One Birkhoff average of `log R^#` along an orbit.
#[derive(Debug, Clone)]
pub struct LyapunovRun {
    pub seed_point: SpherePoint,
    pub iterations: usize,
    pub chi_estimate: f64,
    /// Smallest chordal distance to the critical set seen along the orbit.
    pub min_critical_distance: f64,
    /// Number of near-critical perturbation events.
    pub perturbations: usize,
}

/// Summary of a multi-seed dimension experiment (one Table-1 row).
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub map_label: String,
    pub degree: usize,
    pub expansion: u32,
    pub seeds: usize,
    pub iterations: usize,
    pub per_seed_dim: Vec<f64>,
    pub mean_chi: f64,
    pub mean_dim: f64,
    pub max_dim: f64,
    pub min_dim: f64,
    pub std_dim: f64,
    pub alpha: f64,
    pub hausdorff_dim: f64,
    pub jensen_gap: f64,
    pub entropy_h: f64,
    pub excluded_seeds: usize,
}

/// dim μ = 2χ / log N.
pub fn dim_mu(chi: f64, n_expansion: u32) -> Result<f64, ErgodicError> {
    if chi <= 0.0 {
        return Err(ErgodicError::NonPositiveChi(chi));
    }
    Ok(2.0 * chi / (n_expansion as f64).ln())
}

/// α = log N / χ, so that α · dim μ = 2 identically.
pub fn alpha_exponent(chi: f64, n_expansion: u32) -> Result<f64, ErgodicError> {
    if chi <= 0.0 {
        return Err(ErgodicError::NonPositiveChi(chi));
    }
    Ok((n_expansion as f64).ln() / chi)
}

/// Hausdorff dimension of the snowsphere: log deg / log N.
pub fn hausdorff_dimension(degree: usize, n_expansion: u32) -> f64 {
    (degree as f64).ln() / (n_expansion as f64).ln()
}

/// log deg − 2χ; zero exactly for Lattès maps.
pub fn jensen_gap(chi: f64, degree: usize) -> f64 {
    (degree as f64).ln() - 2.0 * chi
}

fn perturb(p: &SpherePoint, eps: f64, rng: &mut RngStream) -> SpherePoint {
    let theta = 2.0 * std::f64::consts::PI * rng.uniform();
    let delta = num_complex::Complex64::from_polar(eps, theta);
    if p.in_unit_chart() {
        let z = p.numerator() / p.denominator();
        SpherePoint::from_complex(z + delta)
    } else {
        let u = p.denominator() / p.numerator();
        SpherePoint::from_complex(u + delta).reciprocal()
    }
}

/// One entry of the critical-value re-anchoring table: a critical point
/// whose image should land exactly on a fixed point of the map but misses it
/// by `displacement` because the stored coefficients are truncated.
#[derive(Debug, Clone, Copy)]
struct ValueAnchor {
    point: num_complex::Complex64,
    value: num_complex::Complex64,
    displacement: num_complex::Complex64,
}

/// Precomputed per-map orbit data shared across seeds: the critical set (for
/// proximity perturbation) and the critical-value re-anchoring table.
///
/// Re-anchoring: when an orbit step starting near a critical point `c` lands
/// near `c`'s critical value, and that value sits within the snapping
/// tolerance of a genuine fixed point of the map, the landing point is
/// translated by the (numerically determined) displacement of the critical
/// value from the fixed point. On the snapped portrait the critical value
/// *is* the fixed point, so this restores the depth of the landing that the
/// truncated coefficients destroy — without it, every landing is floored at
/// the displacement scale and the subsequent expansion stretch along the
/// repelling fixed point is cut short, biasing the Lyapunov mean downward.
/// For maps with exactly represented coefficients every displacement is at
/// rounding level and the table is empty, so re-anchoring is a no-op.
pub struct OrbitGuard {
    critical_points: Vec<SpherePoint>,
    anchors: Vec<ValueAnchor>,
}

impl OrbitGuard {
    pub fn new(map: &RationalMap) -> Result<Self, ErgodicError> {
        let data = map.critical_points()?;
        let critical_points: Vec<SpherePoint> = data.iter().map(|c| c.point).collect();
        let fixed = map.fixed_points()?;
        let snap = map.portrait_snap_tol();
        let mut anchors = Vec::new();
        for cd in &data {
            let (Some(c), Some(v)) = (cd.point.to_complex(), cd.image.to_complex()) else {
                continue;
            };
            let nearest = fixed
                .iter()
                .filter_map(|f| f.to_complex().map(|fc| (chordal_distance(&cd.image, f), fc)))
                .min_by(|a, b| a.0.total_cmp(&b.0));
            let Some((dist, p)) = nearest else { continue };
            if dist > snap {
                continue;
            }
            let displacement = v - p;
            if displacement.norm() <= ANCHOR_MIN_DISPLACEMENT || displacement.norm() > snap {
                continue;
            }
            anchors.push(ValueAnchor { point: c, value: v, displacement });
        }
        Ok(OrbitGuard { critical_points, anchors })
    }

    fn min_critical_distance(&self, z: &SpherePoint) -> f64 {
        self.critical_points
            .iter()
            .map(|c| chordal_distance(z, c))
            .fold(f64::INFINITY, f64::min)
    }

    /// Re-anchor the image `y` of the step starting at `z`, if it qualifies.
    fn re_anchor(&self, z: &SpherePoint, y: SpherePoint) -> SpherePoint {
        if self.anchors.is_empty() {
            return y;
        }
        let (Some(zc), Some(yc)) = (z.to_complex(), y.to_complex()) else {
            return y;
        };
        let nearest = self
            .anchors
            .iter()
            .min_by(|a, b| (zc - a.point).norm().total_cmp(&(zc - b.point).norm()));
        let Some(a) = nearest else { return y };
        if (zc - a.point).norm() < ANCHOR_SOURCE_RADIUS
            && (yc - a.value).norm() < ANCHOR_IMAGE_RADIUS
        {
            SpherePoint::from_complex(yc - a.displacement)
        } else {
            y
        }
    }
}

/// Birkhoff mean of `log R^#` along the forward orbit of `z0`, no burn-in.
///
/// Orbit points within the critical-proximity threshold of a critical point
/// are nudged by a random perturbation before taking the logarithm, and
/// near-critical landings are re-anchored per [`OrbitGuard`].
pub fn birkhoff_lyapunov(
    map: &RationalMap,
    z0: &SpherePoint,
    n: usize,
    rng: &mut RngStream,
) -> Result<LyapunovRun, ErgodicError> {
    let guard = OrbitGuard::new(map)?;
    birkhoff_lyapunov_with_guard(map, &guard, z0, n, rng)
}

/// Same as [`birkhoff_lyapunov`] with the per-map orbit data precomputed
/// (for multi-seed harnesses).
pub fn birkhoff_lyapunov_with_guard(
    map: &RationalMap,
    guard: &OrbitGuard,
    z0: &SpherePoint,
    n: usize,
    rng: &mut RngStream,
) -> Result<LyapunovRun, ErgodicError> {
    assert!(n >= 1);
    let mut z = *z0;
    let mut sum = 0.0f64;
    let mut min_crit = f64::INFINITY;
    let mut perturbations = 0usize;
    for step in 0..n {
        let crit_dist = guard.min_critical_distance(&z);
        min_crit = min_crit.min(crit_dist);
        if crit_dist < CRITICAL_PROXIMITY {
            z = perturb(&z, CRITICAL_PERTURBATION, rng);
            perturbations += 1;
        }
        let sharp = map.spherical_derivative(&z)?;
        let log_sharp = sharp.ln();
        if !log_sharp.is_finite() {
            return Err(ErgodicError::DegenerateOrbit { step });
        }
        sum += log_sharp;
        z = guard.re_anchor(&z, map.evaluate(&z)?);
    }
    Ok(LyapunovRun {
        seed_point: *z0,
        iterations: n,
        chi_estimate: sum / n as f64,
        min_critical_distance: min_crit,
        perturbations,
    })
}

/// Multi-seed Lyapunov experiment following the paper's protocol: seed
/// points uniform on the unit square, plain Birkhoff means, summary
/// statistics per Table 1. Deterministic for a fixed `rng`; seeds may run in
/// parallel but are assembled in seed-index order.
pub fn dimension_experiment(
    map: &RationalMap,
    n_expansion: u32,
    seeds: usize,
    n: usize,
    rng: &RngStream,
) -> Result<ExperimentReport, ErgodicError> {
    assert!(seeds >= 1);
    let guard = OrbitGuard::new(map)?;
    // All seed points come from the base stream, in order; each orbit gets
    // its own substream for perturbation draws so scheduling cannot change
    // the outcome.
    let mut seed_rng = rng.clone();
    let seed_points: Vec<SpherePoint> =
        (0..seeds).map(|_| seed_rng.sample_unit_square()).collect();

    let runs: Vec<Result<LyapunovRun, ErgodicError>> = seed_points
        .par_iter()
        .enumerate()
        .map(|(i, z0)| {
            let mut orbit_rng = rng.substream(rng.stream_index() + 1 + i as u64);
            birkhoff_lyapunov_with_guard(map, &guard, z0, n, &mut orbit_rng)
        })
        .collect();

    let mut chis = Vec::with_capacity(seeds);
    let mut excluded = 0usize;
    for r in runs {
        match r {
            Ok(run) => chis.push(run.chi_estimate),
            Err(ErgodicError::DegenerateOrbit { .. }) => excluded += 1,
            Err(e) => return Err(e),
        }
    }
    if excluded * 100 > seeds {
        return Err(ErgodicError::TooManyDegenerateSeeds { excluded, seeds });
    }

    let log_n = (n_expansion as f64).ln();
    let per_seed_dim: Vec<f64> = chis.iter().map(|&c| 2.0 * c / log_n).collect();
    let mean_chi = chis.iter().sum::<f64>() / chis.len() as f64;
    let mean_dim = per_seed_dim.iter().sum::<f64>() / per_seed_dim.len() as f64;
    let max_dim = per_seed_dim.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_dim = per_seed_dim.iter().copied().fold(f64::INFINITY, f64::min);
    let var = per_seed_dim
        .iter()
        .map(|d| (d - mean_dim).powi(2))
        .sum::<f64>()
        / (per_seed_dim.len().max(2) - 1) as f64;
    Ok(ExperimentReport {
        map_label: map.label().to_string(),
        degree: map.degree(),
        expansion: n_expansion,
        seeds,
        iterations: n,
        per_seed_dim,
        mean_chi,
        mean_dim,
        max_dim,
        min_dim,
        std_dim: var.sqrt(),
        alpha: alpha_exponent(mean_chi, n_expansion)?,
        hausdorff_dim: hausdorff_dimension(map.degree(), n_expansion),
        jensen_gap: jensen_gap(mean_chi, map.degree()),
        entropy_h: 2.0 * mean_chi,
        excluded_seeds: excluded,
    })
}

// ---------------------------------------------------------------------------
// Itineraries and the snow metric estimate
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TileSymbol {
    Upper,
    Lower,
    Boundary,
}

fn symbol_of(p: &SpherePoint) -> TileSymbol {
    if p.is_infinity() {
        return TileSymbol::Boundary;
    }
    // Im(z) sign via the normalized projective pair (no overflow).
    let im = (p.numerator() * p.denominator().conj()).im;
    if im.abs() < ITINERARY_BOUNDARY_TOL {
        TileSymbol::Boundary
    } else if im > 0.0 {
        TileSymbol::Upper
    } else {
        TileSymbol::Lower
    }
}

/// Verifies that all critical values lie on the extended real line, the
/// precondition for half-plane itineraries.
pub fn check_real_postcritical(map: &RationalMap) -> Result<(), ErgodicError> {
    for c in map.critical_points()? {
        if !c.image.is_infinity() {
            let im = (c.image.numerator() * c.image.denominator().conj()).im;
            let scale = c.image.numerator().norm() * c.image.denominator().norm();
            if im.abs() > 1e-3 * (1.0 + scale) {
                return Err(ErgodicError::NotRealPostcritical);
            }
        }
    }
    Ok(())
}

fn raw_itinerary(
    map: &RationalMap,
    z: &SpherePoint,
    jmax: usize,
) -> Result<Vec<TileSymbol>, ErgodicError> {
    let mut out = Vec::with_capacity(jmax);
    let mut p = *z;
    for _ in 0..jmax {
        out.push(symbol_of(&p));
        p = map.evaluate(&p)?;
    }
    Ok(out)
}

/// Half-plane itinerary of `z` under the map, length `jmax`; requires the
/// postcritical set on ℝ̂.
pub fn itinerary(
    map: &RationalMap,
    z: &SpherePoint,
    jmax: usize,
) -> Result<Vec<TileSymbol>, ErgodicError> {
    check_real_postcritical(map)?;
    raw_itinerary(map, z, jmax)
}

#[derive(Debug, Clone, Copy)]
pub struct SnowEstimate {
    /// N^{−ĵ}.
    pub value: f64,
    /// First itinerary disagreement with neither symbol on the boundary.
    pub jhat: usize,
    /// True when no disagreement occurred before `jmax` (the value is only
    /// an upper bound of N^{−j(x,y)} … i.e. the estimate is a lower bound
    /// for ĵ).
    pub saturated: bool,
}

fn snow_estimate_from_itineraries(
    a: &[TileSymbol],
    b: &[TileSymbol],
    n_expansion: u32,
) -> SnowEstimate {
    let jmax = a.len();
    for (k, (&sa, &sb)) in a.iter().zip(b.iter()).enumerate() {
        if sa != sb && sa != TileSymbol::Boundary && sb != TileSymbol::Boundary {
            return SnowEstimate {
                value: (n_expansion as f64).powi(-(k as i32)),
                jhat: k,
                saturated: false,
            };
        }
    }
    SnowEstimate {
        value: (n_expansion as f64).powi(-(jmax as i32)),
        jhat: jmax,
        saturated: true,
    }
}

/// |x − y|_𝒮 ≍ N^{−ĵ} with ĵ the first itinerary disagreement.
pub fn snow_metric_estimate(
    map: &RationalMap,
    x: &SpherePoint,
    y: &SpherePoint,
    n_expansion: u32,
    jmax: usize,
) -> Result<SnowEstimate, ErgodicError> {
    check_real_postcritical(map)?;
    let a = raw_itinerary(map, x, jmax)?;
    let b = raw_itinerary(map, y, jmax)?;
    Ok(snow_estimate_from_itineraries(&a, &b, n_expansion))
}

#[derive(Debug, Clone)]
pub struct HolderProbe {
    pub radii: Vec<f64>,
    /// Median of log |x−y|_𝒮 / log |x−y| per radius (saturated or
    /// coincident pairs excluded).
    pub median_ratio: Vec<f64>,
    pub pairs_used: Vec<usize>,
    pub alpha_reference: f64,
}

/// For random base points and shrinking radii, the ratio of log snow-metric
/// estimate to log chordal distance; the median per radius should approach
/// α = log N / χ.
pub fn holder_probe(
    map: &RationalMap,
    n_expansion: u32,
    chi: f64,
    samples: usize,
    radii: &[f64],
    rng: &mut RngStream,
) -> Result<HolderProbe, ErgodicError> {
    check_real_postcritical(map)?;
    let alpha = alpha_exponent(chi, n_expansion)?;
    let log_n = (n_expansion as f64).ln();
    let mut median_ratio = Vec::with_capacity(radii.len());
    let mut pairs_used = Vec::with_capacity(radii.len());
    for &r in radii {
        // ĵ needed is about α·log(1/r)/log N; double it for headroom.
        let jmax = (2.0 * (1.0 / r).ln() / log_n).ceil() as usize + 8;
        let mut ratios = Vec::with_capacity(samples);
        for _ in 0..samples {
            let x = rng.sample_unit_square();
            let theta = 2.0 * std::f64::consts::PI * rng.uniform();
            let y = SpherePoint::from_complex(
                x.to_complex().unwrap() + num_complex::Complex64::from_polar(r, theta),
            );
            let d = chordal_distance(&x, &y);
            if d <= 0.0 {
                continue;
            }
            let a = raw_itinerary(map, &x, jmax)?;
            let b = raw_itinerary(map, &y, jmax)?;
            let est = snow_estimate_from_itineraries(&a, &b, n_expansion);
            if est.saturated || est.jhat == 0 {
                continue;
            }
            ratios.push(est.value.ln() / d.ln());
        }
        ratios.sort_by(f64::total_cmp);
        let m = ratios.len();
        let median = if m == 0 {
            f64::NAN
        } else if m % 2 == 1 {
            ratios[m / 2]
        } else {
            0.5 * (ratios[m / 2 - 1] + ratios[m / 2])
        };
        median_ratio.push(median);
        pairs_used.push(m);
    }
    Ok(HolderProbe {
        radii: radii.to_vec(),
        median_ratio,
        pairs_used,
        alpha_reference: alpha,
    })
}
