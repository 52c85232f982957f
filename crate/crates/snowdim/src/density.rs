//! The invariant-density sequence κ_j: exact fiber enumeration, recursion and
//! normalization checks, blow-up exponents at postcritical points, the
//! Jacobian J_μ, and the Rohlin-entropy probe.
//!
//! κ_j(z) = Σ_{w ∈ R^{−j}(z)} [(R^j)^#(w)]^{−2}, with multiplicity-merged
//! fiber points contributing once, weighted by their multiplicity. The limit
//! density κ is never materialized; κ_j at the cap stands in for it.

use thiserror::Error;

use crate::config::POST_EXCLUSION_RADIUS;
use crate::orbifold::{maxdeg, OrbifoldError};
use crate::ratmap::{RatMapError, RationalMap};
use crate::sphere::{chordal_distance, RngStream, SpherePoint};

#[derive(Debug, Error)]
pub enum DensityError {
    #[error("point is within the exclusion radius of the postcritical set")]
    TooClosePostcritical,
    #[error("blow-up fit needs at least 4 radii spanning 2 decades")]
    BadRadii,
    #[error("test function too close to the postcritical set")]
    InadmissibleTestFunction,
    #[error(transparent)]
    RatMap(#[from] RatMapError),
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
}

/// One κ_j evaluation together with its fiber audit.
#[derive(Debug, Clone, Copy)]
pub struct KappaValue {
    pub value: f64,
    /// Multiplicity-weighted fiber size; equals degree^j exactly.
    pub fiber_count: usize,
}

/// Postcritical data shared by the density computations: the post set and
/// maxdeg per post point, computed once from the portrait.
pub struct DensityContext<'a> {
    map: &'a RationalMap,
    post: Vec<SpherePoint>,
    post_maxdeg: Vec<u64>,
    pub exclusion_radius: f64,
}

impl<'a> DensityContext<'a> {
    pub fn new(map: &'a RationalMap) -> Result<Self, DensityError> {
        let portrait = map.portrait(map.portrait_snap_tol(), 1000)?;
        let md = maxdeg(&portrait)?;
        let mut post = Vec::new();
        let mut post_maxdeg = Vec::new();
        for (idx, m) in md {
            post.push(portrait.nodes[idx].point);
            post_maxdeg.push(m);
        }
        Ok(DensityContext {
            map,
            post,
            post_maxdeg,
            exclusion_radius: POST_EXCLUSION_RADIUS,
        })
    }

    pub fn postcritical_points(&self) -> &[SpherePoint] {
        &self.post
    }

    pub fn post_distance(&self, z: &SpherePoint) -> f64 {
        self.post
            .iter()
            .map(|p| chordal_distance(z, p))
            .fold(f64::INFINITY, f64::min)
    }

    /// κ_j by exhaustive backward fiber enumeration (degree^j branches).
    pub fn kappa(&self, z: &SpherePoint, j: usize) -> Result<KappaValue, DensityError> {
        if self.post_distance(z) <= self.exclusion_radius {
            return Err(DensityError::TooClosePostcritical);
        }
        self.kappa_unchecked(z, j)
    }

    /// κ_j without the postcritical-distance guard (used by the blow-up fit,
    /// which deliberately approaches the singularity).
    pub fn kappa_unchecked(
        &self,
        z: &SpherePoint,
        j: usize,
    ) -> Result<KappaValue, DensityError> {
        // Fiber layers: (point, multiplicity, product of R^# along the
        // forward orbit back to z).
        let mut layer: Vec<(SpherePoint, usize, f64)> = vec![(*z, 1, 1.0)];
        for _ in 0..j {
            let mut next = Vec::with_capacity(layer.len() * self.map.degree());
            for (w, mult, acc) in &layer {
                for (y, m) in self.map.preimages(w)? {
                    // Merged near-critical clusters must use the local-model
                    // branch derivative: R^# at the merged center is ≈ 0.
                    let sharp = match self.map.clustered_branch_sharp(w, &y, m) {
                        Ok(s) if m > 1 => s,
                        _ => self.map.spherical_derivative(&y)?,
                    };
                    next.push((y, mult * m, acc * sharp));
                }
            }
            layer = next;
        }
        let mut value = 0.0;
        let mut fiber_count = 0usize;
        for (_, mult, acc) in &layer {
            value += *mult as f64 / (acc * acc);
            fiber_count += mult;
        }
        debug_assert_eq!(fiber_count, self.map.degree().pow(j as u32));
        Ok(KappaValue { value, fiber_count })
    }
}

/// Standalone κ_j (context built per call; prefer [`DensityContext`] in
/// loops).
pub fn kappa_j(
    map: &RationalMap,
    z: &SpherePoint,
    j: usize,
) -> Result<KappaValue, DensityError> {
    DensityContext::new(map)?.kappa(z, j)
}

#[derive(Debug, Clone)]
pub struct NormalizationCheck {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
    pub excluded: usize,
    /// Analytic bound on the κ_j-mass of the excluded disks, from the
    /// blow-up exponent.
    pub excluded_mass_bound: f64,
}

/// Monte-Carlo estimate of ∫ κ_j dλ over sphere-uniform samples, excluding
/// the exclusion disks around post(R) and bounding their mass analytically.
pub fn normalization_check(
    map: &RationalMap,
    j: usize,
    samples: usize,
    rng: &mut RngStream,
) -> Result<NormalizationCheck, DensityError> {
    let ctx = DensityContext::new(map)?;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut excluded = 0usize;
    for _ in 0..samples {
        let z = rng.sample_sphere_uniform();
        if ctx.post_distance(&z) <= ctx.exclusion_radius {
            excluded += 1;
            continue; // contributes 0; mass bounded below
        }
        let k = ctx.kappa_unchecked(&z, j)?.value;
        sum += k;
        sumsq += k * k;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sumsq / n - mean * mean).max(0.0);
    // Excluded mass: near p, κ ≈ c·r^{−2(1−1/m)}; calibrate c from a probe
    // at twice the exclusion radius and integrate over the disk (normalized
    // area element ≈ r dr/2 for small chordal radius r).
    let eps = ctx.exclusion_radius;
    let mut bound = 0.0;
    for (p, &m) in ctx.post.iter().zip(ctx.post_maxdeg.iter()) {
        let probe = probe_near(p, 2.0 * eps);
        let kp = ctx.kappa_unchecked(&probe, j)?.value;
        let d = chordal_distance(&probe, p);
        let expo = 2.0 * (1.0 - 1.0 / m as f64);
        let c = kp * d.powf(expo);
        bound += c * (m as f64 / 4.0) * eps.powf(2.0 / m as f64);
    }
    Ok(NormalizationCheck {
        estimate: mean,
        std_error: (var / n).sqrt(),
        samples,
        excluded,
        excluded_mass_bound: bound,
    })
}

/// A point at chordal distance ≈ r from p, in the chart where p is finite.
fn probe_near(p: &SpherePoint, r: f64) -> SpherePoint {
    let dir = num_complex::Complex64::from_polar(1.0, 0.9);
    if p.is_infinity() {
        // |w| = 2/r has chordal distance ≈ r from infinity.
        SpherePoint::from_complex(dir * (2.0 / r))
    } else {
        let z = p.to_complex().unwrap();
        // chordal ≈ 2|dz|/(1+|z|²) for small offsets.
        let dz = r * (1.0 + z.norm_sqr()) / 2.0;
        SpherePoint::from_complex(z + dir * dz)
    }
}

/// A smooth bump test function for the pushforward check.
#[derive(Debug, Clone, Copy)]
pub struct BumpFunction {
    pub center: SpherePoint,
    pub width: f64,
}

impl BumpFunction {
    pub fn eval(&self, z: &SpherePoint) -> f64 {
        let d = chordal_distance(z, &self.center);
        (-(d / self.width).powi(2)).exp()
    }
}

#[derive(Debug, Clone)]
pub struct PushforwardCheck {
    /// Per test function: (mean deviation, 3× its standard error).
    pub per_function: Vec<(f64, f64)>,
    pub samples: usize,
}

/// Checks R_* μ_{j−1} = μ_j: per-sample difference of g(Rz)κ_{j−1}(z) and
/// g(z)κ_j(z) over sphere-uniform z, per bump function.
pub fn pushforward_check(
    map: &RationalMap,
    j: usize,
    test_functions: &[BumpFunction],
    samples: usize,
    rng: &mut RngStream,
) -> Result<PushforwardCheck, DensityError> {
    assert!(j >= 1);
    let ctx = DensityContext::new(map)?;
    for g in test_functions {
        if ctx.post_distance(&g.center) < 2.0 * g.width {
            return Err(DensityError::InadmissibleTestFunction);
        }
    }
    let mut sums = vec![(0.0f64, 0.0f64); test_functions.len()];
    let mut used = 0usize;
    for _ in 0..samples {
        let z = rng.sample_sphere_uniform();
        if ctx.post_distance(&z) <= ctx.exclusion_radius {
            continue;
        }
        let k_prev = ctx.kappa_unchecked(&z, j - 1)?.value;
        let k_cur = ctx.kappa_unchecked(&z, j)?.value;
        let rz = map.evaluate(&z)?;
        used += 1;
        for (i, g) in test_functions.iter().enumerate() {
            let d = g.eval(&rz) * k_prev - g.eval(&z) * k_cur;
            sums[i].0 += d;
            sums[i].1 += d * d;
        }
    }
    let n = used.max(1) as f64;
    let per_function = sums
        .iter()
        .map(|&(s, sq)| {
            let mean = s / n;
            let var = (sq / n - mean * mean).max(0.0);
            (mean, 3.0 * (var / n).sqrt())
        })
        .collect();
    Ok(PushforwardCheck {
        per_function,
        samples: used,
    })
}

#[derive(Debug, Clone)]
pub struct BlowupFit {
    pub point: SpherePoint,
    pub radii: Vec<f64>,
    pub kappas: Vec<f64>,
    pub slope: f64,
    pub predicted_exponent: f64,
}

/// Samples κ_j along a ray into the postcritical point `p` and fits the
/// log-log slope against the predicted −2(1 − 1/maxdeg(p)).
pub fn blowup_fit(
    map: &RationalMap,
    p: &SpherePoint,
    j: usize,
    radii: &[f64],
) -> Result<BlowupFit, DensityError> {
    let max_r = radii.iter().copied().fold(0.0, f64::max);
    let min_r = radii.iter().copied().fold(f64::INFINITY, f64::min);
    if radii.len() < 4 || max_r / min_r < 100.0 {
        return Err(DensityError::BadRadii);
    }
    let ctx = DensityContext::new(map)?;
    let (pi, _) = ctx
        .post
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            chordal_distance(a, p).total_cmp(&chordal_distance(b, p))
        })
        .ok_or(DensityError::TooClosePostcritical)?;
    let post_point = ctx.post[pi];
    let m = ctx.post_maxdeg[pi];
    let mut xs = Vec::with_capacity(radii.len());
    let mut kappas = Vec::with_capacity(radii.len());
    for &r in radii {
        let z = probe_near(&post_point, r);
        let k = ctx.kappa_unchecked(&z, j)?.value;
        xs.push(chordal_distance(&z, &post_point).ln());
        kappas.push(k);
    }
    let ys: Vec<f64> = kappas.iter().map(|k| k.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(BlowupFit {
        point: post_point,
        radii: radii.to_vec(),
        kappas,
        slope: sxy / sxx,
        predicted_exponent: -2.0 * (1.0 - 1.0 / m as f64),
    })
}

/// J_μ(z) ≈ R^#(z)² κ_j(Rz)/κ_j(z).
pub fn jacobian_estimate(
    map: &RationalMap,
    z: &SpherePoint,
    j: usize,
) -> Result<f64, DensityError> {
    let ctx = DensityContext::new(map)?;
    let rz = map.evaluate(z)?;
    if ctx.post_distance(z) <= ctx.exclusion_radius
        || ctx.post_distance(&rz) <= ctx.exclusion_radius
    {
        return Err(DensityError::TooClosePostcritical);
    }
    let sharp = map.spherical_derivative(z)?;
    let num = ctx.kappa_unchecked(&rz, j)?.value;
    let den = ctx.kappa_unchecked(&z, j)?.value;
    Ok(sharp * sharp * num / den)
}

#[derive(Debug, Clone)]
pub struct RohlinEstimate {
    pub h: f64,
    /// Orbit steps that contributed (both endpoints clear of post(R)).
    pub terms: usize,
    pub orbit_length: usize,
}

/// Rohlin's formula h = ∫ log J_μ dμ as a Birkhoff average of
/// log J along a generic orbit, with κ_j standing in for κ.
pub fn rohlin_entropy(
    map: &RationalMap,
    orbit_length: usize,
    j: usize,
    rng: &mut RngStream,
) -> Result<RohlinEstimate, DensityError> {
    let ctx = DensityContext::new(map)?;
    let mut z = rng.sample_unit_square();
    let mut sum = 0.0;
    let mut terms = 0usize;
    let mut kappa_z: Option<f64> = None;
    for _ in 0..orbit_length {
        let rz = map.evaluate(&z)?;
        let z_ok = ctx.post_distance(&z) > ctx.exclusion_radius;
        let rz_ok = ctx.post_distance(&rz) > ctx.exclusion_radius;
        if z_ok && rz_ok {
            let kz = match kappa_z {
                Some(k) => k,
                None => ctx.kappa_unchecked(&z, j)?.value,
            };
            let krz = ctx.kappa_unchecked(&rz, j)?.value;
            let sharp = map.spherical_derivative(&z)?;
            sum += (sharp * sharp * krz / kz).ln();
            terms += 1;
            kappa_z = Some(krz);
        } else {
            kappa_z = None;
        }
        z = rz;
    }
    Ok(RohlinEstimate {
        h: sum / terms.max(1) as f64,
        terms,
        orbit_length,
    })
}
