//! Rational maps as dynamical systems on the Riemann sphere.
//!
//! Evaluation and the spherical derivative are done projectively in the
//! chart that keeps moduli bounded by 1. Critical points come from the
//! Wronskian `num' den - num den'`, preimage fibers from projective root
//! solving, and critical-orbit portraits from forward iteration with
//! snapping.

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::config::{SNAP_TOL_EXACT, SNAP_TOL_RHAT};
use crate::poly::{find_roots_with, PolyError, Polynomial, SolveOptions};
use crate::sphere::{chordal_distance, SphereError, SpherePoint};

#[derive(Debug, Error)]
pub enum RatMapError {
    #[error("map is indeterminate: numerator and denominator share a root near {0}")]
    IndeterminateForm(Complex64),
    #[error("unknown catalog map {0:?}")]
    UnknownName(String),
    #[error("orbit neither snapped nor cycled within {max_steps} steps (non-PCF input or snap tolerance too small)")]
    NotFiniteWithinBudget { max_steps: usize },
    #[error("map config: {0}")]
    Config(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Sphere(#[from] SphereError),
}

/// Factored description `offset + constant * prod zero_factors / prod pole_factors`.
#[derive(Debug, Clone)]
pub struct FactoredForm {
    pub constant: Complex64,
    pub affine_offset: Complex64,
    pub zero_factors: Vec<(Polynomial, u32)>,
    pub pole_factors: Vec<(Polynomial, u32)>,
}

#[derive(Debug, Clone)]
pub struct RationalMap {
    numerator: Polynomial,
    denominator: Polynomial,
    degree: usize,
    factored: Option<FactoredForm>,
    label: String,
    /// Metric expansion factor N of the snowsphere this map represents,
    /// when one is on record.
    default_expansion: Option<u32>,
    /// Cluster radius handed to the root solver; widened for maps whose
    /// printed coefficients are truncated.
    cluster_radius: f64,
    // Precomputed charts.
    wronskian: Polynomial,
    num_rev: Polynomial,
    den_rev: Polynomial,
    wronskian_rev: Polynomial,
}

#[derive(Debug, Clone, Copy)]
pub struct CriticalDatum {
    pub point: SpherePoint,
    pub local_degree: usize,
    pub image: SpherePoint,
}

impl RationalMap {
    pub fn new(
        numerator: Polynomial,
        denominator: Polynomial,
        label: impl Into<String>,
    ) -> Result<Self, RatMapError> {
        Self::with_options(numerator, denominator, label, None, None, SNAP_TOL_EXACT)
    }

    pub fn with_options(
        numerator: Polynomial,
        denominator: Polynomial,
        label: impl Into<String>,
        factored: Option<FactoredForm>,
        default_expansion: Option<u32>,
        cluster_radius: f64,
    ) -> Result<Self, RatMapError> {
        let degree = numerator.degree().max(denominator.degree());
        if degree == 0 {
            return Err(RatMapError::Config("constant map".into()));
        }
        // Reject shared roots: evaluate the numerator at every denominator
        // root with a backward-relative threshold.
        if denominator.degree() >= 1 {
            let opts = SolveOptions {
                cluster_radius,
                ..SolveOptions::default()
            };
            let poles = find_roots_with(&denominator, &opts)?;
            for pole in &poles.roots {
                let v = numerator.eval(pole.location).norm();
                let scale = numerator.eval_abs(pole.location.norm());
                if scale > 0.0 && v / scale < 1e-9 {
                    return Err(RatMapError::IndeterminateForm(pole.location));
                }
            }
        }
        let wronskian = numerator
            .derivative()
            .mul(&denominator)
            .sub(&numerator.mul(&denominator.derivative()));
        let num_rev = numerator.reversed(degree);
        let den_rev = denominator.reversed(degree);
        let wronskian_rev = num_rev
            .derivative()
            .mul(&den_rev)
            .sub(&num_rev.mul(&den_rev.derivative()));
        Ok(RationalMap {
            numerator,
            denominator,
            degree,
            factored,
            label: label.into(),
            default_expansion,
            cluster_radius,
            wronskian,
            num_rev,
            den_rev,
            wronskian_rev,
        })
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn factored(&self) -> Option<&FactoredForm> {
        self.factored.as_ref()
    }

    pub fn default_expansion(&self) -> Option<u32> {
        self.default_expansion
    }

    pub fn cluster_radius(&self) -> f64 {
        self.cluster_radius
    }

    /// Portrait snapping tolerance appropriate to this map's coefficient
    /// precision: the exact-map default, widened to the root-cluster radius
    /// for maps with truncated printed coefficients.
    pub fn portrait_snap_tol(&self) -> f64 {
        crate::config::SNAP_TOL_EXACT.max(self.cluster_radius)
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            cluster_radius: self.cluster_radius,
            ..SolveOptions::default()
        }
    }

    /// True if every coefficient of both polynomials is real.
    pub fn has_real_coefficients(&self) -> bool {
        self.numerator
            .coeffs()
            .iter()
            .chain(self.denominator.coeffs().iter())
            .all(|c| c.im == 0.0)
    }

    /// Projective evaluation, exact at poles and at infinity.
    pub fn evaluate(&self, z: &SpherePoint) -> Result<SpherePoint, RatMapError> {
        let (n, d) = self.eval_pair(z);
        SpherePoint::normalize(n, d).map_err(|_| {
            RatMapError::IndeterminateForm(z.to_complex().unwrap_or(Complex64::new(f64::INFINITY, 0.0)))
        })
    }

    fn eval_pair(&self, z: &SpherePoint) -> (Complex64, Complex64) {
        if z.in_unit_chart() {
            let z0 = z.numerator() / z.denominator();
            (self.numerator.eval(z0), self.denominator.eval(z0))
        } else {
            let u = z.denominator() / z.numerator();
            (self.num_rev.eval(u), self.den_rev.eval(u))
        }
    }

    /// The spherical derivative `R^#(z)`; evaluated through the chart rules
    /// at infinity and at poles, zero exactly at critical points.
    pub fn spherical_derivative(&self, z: &SpherePoint) -> Result<f64, RatMapError> {
        let v = if z.in_unit_chart() {
            let z0 = z.numerator() / z.denominator();
            sharp_value(&self.wronskian, &self.numerator, &self.denominator, z0)
        } else {
            // R^#(z) = S^#(1/z) for S(w) = R(1/w).
            let u = z.denominator() / z.numerator();
            sharp_value(&self.wronskian_rev, &self.num_rev, &self.den_rev, u)
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(RatMapError::Sphere(SphereError::NumericalBreakdown))
        }
    }

    /// The spherical derivative together with the relative accuracy of the
    /// underlying Wronskian evaluation: `|W(z)| / sum_k |w_k| |z|^k`.
    ///
    /// When the ratio falls below the relative uncertainty of the stored
    /// coefficients, the derivative value is dominated by coefficient error
    /// and carries no information about the underlying map.
    pub fn spherical_derivative_audited(
        &self,
        z: &SpherePoint,
    ) -> Result<(f64, f64), RatMapError> {
        let (w, r) = if z.in_unit_chart() {
            let z0 = z.numerator() / z.denominator();
            (&self.wronskian, z0)
        } else {
            (&self.wronskian_rev, z.denominator() / z.numerator())
        };
        let v = self.spherical_derivative(z)?;
        let abs = w.eval_abs(r.norm());
        let rel = if abs > 0.0 { w.eval(r).norm() / abs } else { 1.0 };
        Ok((v, rel))
    }

    /// Effective spherical derivative of one branch of an m-fold cluster of
    /// simple preimages of `z` that the root solver merged at `center`.
    ///
    /// Near a critical point of local degree m the fiber polynomial
    /// `poly(w) = β·num(w) − α·den(w)` is locally `C (w − c)^m`, so the m
    /// genuine preimages sit on a circle of radius
    /// ρ = (|poly(c)| m! / |poly⁽ᵐ⁾(c)|)^{1/m} around the merged center and
    /// share the modulus
    /// |poly′(w_i)| = m |poly(c)|^{(m−1)/m} (|poly⁽ᵐ⁾(c)|/m!)^{1/m}.
    /// Evaluating R^# at the merged center instead returns ≈ 0 (the center
    /// sits on the critical point), and a Jacobian sum built from it
    /// diverges spuriously.
    pub fn clustered_branch_sharp(
        &self,
        z: &SpherePoint,
        center: &SpherePoint,
        m: usize,
    ) -> Result<f64, RatMapError> {
        if m < 2 || z.is_infinity() {
            return Err(RatMapError::Sphere(SphereError::NumericalBreakdown));
        }
        let c = center
            .to_complex()
            .ok_or(RatMapError::Sphere(SphereError::NumericalBreakdown))?;
        let (alpha, beta) = (z.numerator(), z.denominator());
        let poly = self.numerator.scale(beta).sub(&self.denominator.scale(alpha));
        let pc = poly.eval(c).norm();
        let mut dpoly = poly;
        let mut factorial = 1.0f64;
        for k in 1..=m {
            dpoly = dpoly.derivative();
            factorial *= k as f64;
        }
        let pm = dpoly.eval(c).norm() / factorial;
        let den_c = self.denominator.eval(c).norm() * beta.norm();
        if !(pc > 0.0 && pm > 0.0 && den_c > 0.0) {
            return Err(RatMapError::Sphere(SphereError::NumericalBreakdown));
        }
        let mf = m as f64;
        let rprime = mf * pc.powf((mf - 1.0) / mf) * pm.powf(1.0 / mf) / den_c;
        let z0 = (alpha / beta).norm_sqr();
        let sharp = rprime * (1.0 + c.norm_sqr()) / (1.0 + z0);
        if sharp.is_finite() && sharp > 0.0 {
            Ok(sharp)
        } else {
            Err(RatMapError::Sphere(SphereError::NumericalBreakdown))
        }
    }

    /// All critical points with local degrees and images; Riemann-Hurwitz
    /// total `sum (local_degree - 1) = 2 deg - 2` holds by construction.
    pub fn critical_points(&self) -> Result<Vec<CriticalDatum>, RatMapError> {
        let mut out = Vec::new();
        let opts = self.solve_options();
        if self.wronskian.degree() >= 1 || self.wronskian.coeffs()[0].norm() > 0.0 {
            if self.wronskian.degree() >= 1 {
                let roots = find_roots_with(&self.wronskian, &opts)?;
                for r in roots.roots {
                    let point = SpherePoint::from_complex(r.location);
                    let image = self.evaluate(&point)?;
                    out.push(CriticalDatum {
                        point,
                        local_degree: r.multiplicity + 1,
                        image,
                    });
                }
            }
        }
        // Local degree at infinity: exactly the degree gap when numerator
        // and denominator degrees differ; otherwise the vanishing order of
        // the reversed-chart Wronskian at 0.
        let inf_order = if self.numerator.degree() != self.denominator.degree() {
            self.numerator.degree().abs_diff(self.denominator.degree()) - 1
        } else {
            vanishing_order(&self.wronskian_rev)
        };
        if inf_order > 0 {
            let point = SpherePoint::infinity();
            let image = self.evaluate(&point)?;
            out.push(CriticalDatum {
                point,
                local_degree: inf_order + 1,
                image,
            });
        }
        Ok(out)
    }

    /// Multiplicity-counted fiber `R^{-1}(z)`; the multiplicities sum to the
    /// degree.
    pub fn preimages(
        &self,
        z: &SpherePoint,
    ) -> Result<Vec<(SpherePoint, usize)>, RatMapError> {
        // Roots of beta * num(w) - alpha * den(w) for z = (alpha : beta).
        // Leading coefficients are dropped only when they sit below the
        // rounding noise of the subtraction itself (cancellation at z near
        // the image of infinity); a genuinely small leading coefficient is
        // kept.
        let raw = self
            .numerator
            .scale(z.denominator())
            .sub(&self.denominator.scale(z.numerator()));
        let mut coeffs = raw.coeffs().to_vec();
        while coeffs.len() > 1 {
            let k = coeffs.len() - 1;
            let nk = self
                .numerator
                .coeffs()
                .get(k)
                .map_or(0.0, |c| (c * z.denominator()).norm());
            let dk = self
                .denominator
                .coeffs()
                .get(k)
                .map_or(0.0, |c| (c * z.numerator()).norm());
            if coeffs[k].norm() <= 64.0 * f64::EPSILON * (nk + dk) {
                coeffs.pop();
            } else {
                break;
            }
        }
        let poly = Polynomial::new(coeffs);
        let mut out = Vec::new();
        let inf_mult = self.degree - poly.degree();
        if poly.degree() >= 1 {
            let roots = find_roots_with(&poly, &self.solve_options())?;
            for r in roots.roots {
                out.push((SpherePoint::from_complex(r.location), r.multiplicity));
            }
        }
        if inf_mult > 0 {
            out.push((SpherePoint::infinity(), inf_mult));
        }
        Ok(out)
    }

    /// All fixed points (roots of `num(z) - z den(z)`, plus infinity when the
    /// numerator degree exceeds the denominator degree).
    pub fn fixed_points(&self) -> Result<Vec<SpherePoint>, RatMapError> {
        let mut shifted: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
        shifted.extend_from_slice(self.denominator.coeffs());
        let shifted = Polynomial::new(shifted);
        let raw = self.numerator.sub(&shifted);
        let mut coeffs = raw.coeffs().to_vec();
        while coeffs.len() > 1 {
            let k = coeffs.len() - 1;
            let nk = self.numerator.coeffs().get(k).map_or(0.0, |c| c.norm());
            let dk = shifted.coeffs().get(k).map_or(0.0, |c| c.norm());
            if coeffs[k].norm() <= 64.0 * f64::EPSILON * (nk + dk) {
                coeffs.pop();
            } else {
                break;
            }
        }
        let poly = Polynomial::new(coeffs);
        let mut out = Vec::new();
        if poly.degree() >= 1 {
            let roots = find_roots_with(&poly, &self.solve_options())?;
            for r in roots.roots {
                out.push(SpherePoint::from_complex(r.location));
            }
        }
        if self.numerator.degree() > self.denominator.degree() {
            out.push(SpherePoint::infinity());
        }
        Ok(out)
    }
}

fn sharp_value(w: &Polynomial, n: &Polynomial, d: &Polynomial, z: Complex64) -> f64 {
    let nv = n.eval(z).norm_sqr();
    let dv = d.eval(z).norm_sqr();
    w.eval(z).norm() * (1.0 + z.norm_sqr()) / (nv + dv)
}

/// Number of leading ascending coefficients that vanish relative to the
/// largest coefficient.
fn vanishing_order(p: &Polynomial) -> usize {
    let scale = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    p.coeffs()
        .iter()
        .take_while(|c| c.norm() <= 1e-9 * scale)
        .count()
}

// ---------------------------------------------------------------------------
// Ramification portrait
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct PortraitNode {
    pub point: SpherePoint,
    pub local_degree: usize,
    pub is_critical: bool,
    pub is_postcritical: bool,
    /// Index of the image node under the map.
    pub image: Option<usize>,
}

/// Finite directed graph of critical and postcritical orbits.
#[derive(Debug, Clone)]
pub struct RamificationPortrait {
    pub nodes: Vec<PortraitNode>,
    pub cycles: Vec<Vec<usize>>,
    pub has_critical_periodic_orbit: bool,
    pub snap_tol: f64,
}

impl RamificationPortrait {
    pub fn postcritical_indices(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].is_postcritical)
            .collect()
    }

    pub fn postcritical_points(&self) -> Vec<SpherePoint> {
        self.postcritical_indices()
            .into_iter()
            .map(|i| self.nodes[i].point)
            .collect()
    }

    /// Nodes with an edge into `target`.
    pub fn preimage_nodes(&self, target: usize) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].image == Some(target))
            .collect()
    }

    pub fn node_nearest(&self, p: &SpherePoint) -> Option<usize> {
        (0..self.nodes.len()).min_by(|&a, &b| {
            chordal_distance(&self.nodes[a].point, p)
                .total_cmp(&chordal_distance(&self.nodes[b].point, p))
        })
    }
}

impl RationalMap {
    /// Forward-iterates all critical orbits, snapping points within
    /// `snap_tol` (chordal) of an existing node.
    pub fn portrait(
        &self,
        snap_tol: f64,
        max_steps: usize,
    ) -> Result<RamificationPortrait, RatMapError> {
        let crits = self.critical_points()?;
        // Orbit points near a genuine fixed point of the map snap onto it,
        // so truncated coefficients cannot make a nearly-fixed critical
        // value drift away under iteration.
        let anchors = self.fixed_points()?;
        let mut nodes: Vec<PortraitNode> = Vec::new();

        let find_or_add = |nodes: &mut Vec<PortraitNode>, p: &SpherePoint| -> usize {
            let nearest = (0..nodes.len())
                .min_by(|&a, &b| {
                    chordal_distance(&nodes[a].point, p)
                        .total_cmp(&chordal_distance(&nodes[b].point, p))
                });
            if let Some(i) = nearest {
                if chordal_distance(&nodes[i].point, p) <= snap_tol {
                    return i;
                }
            }
            nodes.push(PortraitNode {
                point: *p,
                local_degree: 1,
                is_critical: false,
                is_postcritical: false,
                image: None,
            });
            nodes.len() - 1
        };

        for c in &crits {
            let i = find_or_add(&mut nodes, &c.point);
            nodes[i].is_critical = true;
            nodes[i].local_degree = nodes[i].local_degree.max(c.local_degree);
        }

        // Forward orbits of all critical points.
        let mut frontier: Vec<usize> = (0..nodes.len()).collect();
        let mut steps = 0usize;
        while let Some(i) = frontier.pop() {
            if nodes[i].image.is_some() {
                continue;
            }
            steps += 1;
            if steps > max_steps + self.degree * 4 {
                return Err(RatMapError::NotFiniteWithinBudget { max_steps });
            }
            let mut image_point = self.evaluate(&nodes[i].point.clone())?;
            if let Some(a) = anchors
                .iter()
                .min_by(|a, b| {
                    chordal_distance(a, &image_point)
                        .total_cmp(&chordal_distance(b, &image_point))
                })
                .filter(|a| chordal_distance(a, &image_point) <= snap_tol)
            {
                image_point = *a;
            }
            let j = find_or_add(&mut nodes, &image_point);
            nodes[i].image = Some(j);
            if nodes[j].image.is_none() {
                frontier.push(j);
            }
        }

        // Postcritical set: everything reachable from a critical value.
        let mut post = vec![false; nodes.len()];
        for i in 0..nodes.len() {
            if nodes[i].is_critical {
                let mut cur = nodes[i].image;
                let mut guard = 0;
                while let Some(j) = cur {
                    if post[j] {
                        break;
                    }
                    post[j] = true;
                    cur = nodes[j].image;
                    guard += 1;
                    if guard > nodes.len() {
                        break;
                    }
                }
            }
        }
        for (i, flag) in post.iter().enumerate() {
            nodes[i].is_postcritical = *flag;
        }

        // Cycle detection among all nodes.
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut on_cycle = vec![false; nodes.len()];
        for start in 0..nodes.len() {
            // Walk until revisit; if the revisited node is `start`-reachable
            // and not yet recorded, record the cycle.
            let mut seen = std::collections::HashMap::new();
            let mut cur = start;
            let mut order = 0usize;
            loop {
                if let Some(&at) = seen.get(&cur) {
                    let cycle: Vec<usize> = seen
                        .iter()
                        .filter(|&(_, &o)| o >= at)
                        .map(|(&n, _)| n)
                        .collect();
                    let mut cycle = cycle;
                    cycle.sort_unstable();
                    if !cycle.iter().any(|&n| on_cycle[n]) {
                        for &n in &cycle {
                            on_cycle[n] = true;
                        }
                        cycles.push(cycle);
                    }
                    break;
                }
                seen.insert(cur, order);
                order += 1;
                match nodes[cur].image {
                    Some(next) => cur = next,
                    None => break,
                }
            }
        }

        let has_critical_periodic_orbit = (0..nodes.len())
            .any(|i| nodes[i].is_critical && on_cycle[i]);

        Ok(RamificationPortrait {
            nodes,
            cycles,
            has_critical_periodic_orbit,
            snap_tol,
        })
    }
}

// ---------------------------------------------------------------------------
// PCF verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct PcfReport {
    pub pass: bool,
    pub max_deviation: f64,
    /// Chordal distance from each critical value to the nearest expected
    /// point.
    pub deviations: Vec<(SpherePoint, f64)>,
    pub has_critical_periodic_orbit: bool,
}

impl RationalMap {
    pub fn verify_pcf(
        &self,
        expected_post: &[SpherePoint],
        tol: f64,
    ) -> Result<PcfReport, RatMapError> {
        // Snap at a quarter of the verification tolerance: wide enough to
        // absorb coefficient-truncation scatter of the orbit, narrow enough
        // to keep nearby-but-distinct orbit points (e.g. a pole at 1.0095
        // next to a fixed point at 1) from being conflated.
        let portrait = self.portrait(tol / 4.0, 1000)?;
        let mut deviations = Vec::new();
        let mut max_deviation: f64 = 0.0;
        for c in self.critical_points()? {
            let d = expected_post
                .iter()
                .map(|e| chordal_distance(&c.image, e))
                .fold(f64::INFINITY, f64::min);
            max_deviation = max_deviation.max(d);
            deviations.push((c.image, d));
        }
        Ok(PcfReport {
            pass: max_deviation <= tol && !deviations.is_empty(),
            max_deviation,
            deviations,
            has_critical_periodic_orbit: portrait.has_critical_periodic_orbit,
        })
    }
}

// ---------------------------------------------------------------------------
// Catalog and config files
// ---------------------------------------------------------------------------

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn linear(root: Complex64) -> Polynomial {
    Polynomial::new(vec![-root, c(1.0, 0.0)])
}

/// The degree-29 map representing the standard 5x5-with-cube snowsphere,
/// with the published 6-significant-digit coefficients.
fn build_rhat() -> Result<RationalMap, RatMapError> {
    let lambda = c(-0.001870, 0.0);
    let (t1, t2, t3, t4, t5, t6, t7) =
        (2712.82, 11.9805, 0.31506, 1.01913, 3.97391, 1.59735, 0.79867);
    let (a1, a2, a3, a4, a5, a6, a7) =
        (1.15921, 9.00678, 191.820, 0.96246, 0.48971, -1.98760, 1.99159);

    let zero_factors: Vec<(Polynomial, u32)> = vec![
        (linear(c(1.0, 0.0)), 1),
        (linear(c(a1, 0.0)), 4),
        (linear(c(a2, 0.0)), 5),
        (linear(c(-a3, 0.0)), 3),
        (linear(c(-a4, 0.0)), 4),
        (linear(c(a5, 0.0)), 4),
        (Polynomial::from_real(&[a7, -a6, 1.0]), 4),
    ];
    let pole_factors: Vec<(Polynomial, u32)> = vec![
        (Polynomial::from_real(&[t1, 0.0, 1.0]), 2),
        (Polynomial::from_real(&[t2, 0.0, 1.0]), 2),
        (Polynomial::from_real(&[t3, 0.0, 1.0]), 2),
        (Polynomial::from_real(&[-t4, 0.0, 1.0]), 2),
        (Polynomial::from_real(&[-t5, 0.0, 1.0]), 2),
        (Polynomial::from_real(&[t7, 0.0, -t6, 0.0, 1.0]), 2),
    ];

    let p = Polynomial::from_factors(c(1.0, 0.0), &zero_factors);
    let q = Polynomial::from_factors(c(1.0, 0.0), &pole_factors);
    let num = q.add(&p.scale(lambda));
    let factored = FactoredForm {
        constant: lambda,
        affine_offset: c(1.0, 0.0),
        zero_factors,
        pole_factors,
    };
    RationalMap::with_options(num, q, "rhat", Some(factored), Some(5), SNAP_TOL_RHAT / 4.0)
}

/// Degree-4 Lattes map with orbifold signature (2,2,2,2):
/// `z -> (z^2+1)^2 / (4 z (z^2-1))`.
fn build_lattes_2222() -> Result<RationalMap, RatMapError> {
    let num = Polynomial::from_real(&[1.0, 0.0, 2.0, 0.0, 1.0]);
    let den = Polynomial::from_real(&[0.0, -4.0, 0.0, 4.0]);
    RationalMap::with_options(num, den, "lattes_2222", None, Some(2), SNAP_TOL_EXACT)
}

fn build_squaring() -> Result<RationalMap, RatMapError> {
    let num = Polynomial::from_real(&[0.0, 0.0, 1.0]);
    let den = Polynomial::one();
    RationalMap::with_options(num, den, "squaring", None, None, SNAP_TOL_EXACT)
}

pub const CATALOG: &[&str] = &["rhat", "lattes_2222", "squaring"];

/// A map from the built-in catalog.
pub fn builtin(name: &str) -> Result<RationalMap, RatMapError> {
    match name {
        "rhat" => build_rhat(),
        "lattes_2222" => build_lattes_2222(),
        "squaring" => build_squaring(),
        other => Err(RatMapError::UnknownName(other.to_string())),
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MapConfig {
    Coefficients {
        numerator: Vec<[f64; 2]>,
        denominator: Vec<[f64; 2]>,
        label: Option<String>,
        expansion: Option<u32>,
    },
    Factored {
        constant: [f64; 2],
        affine_offset: [f64; 2],
        zeros: Vec<[f64; 3]>,
        poles: Vec<[f64; 3]>,
        label: Option<String>,
        expansion: Option<u32>,
        cluster_radius: Option<f64>,
    },
}

/// Loads a map from its JSON config (coefficient or factored form).
pub fn from_json(json: &str) -> Result<RationalMap, RatMapError> {
    let cfg: MapConfig =
        serde_json::from_str(json).map_err(|e| RatMapError::Config(e.to_string()))?;
    match cfg {
        MapConfig::Coefficients {
            numerator,
            denominator,
            label,
            expansion,
        } => {
            let num = Polynomial::new(numerator.iter().map(|&[re, im]| c(re, im)).collect());
            let den = Polynomial::new(denominator.iter().map(|&[re, im]| c(re, im)).collect());
            RationalMap::with_options(
                num,
                den,
                label.unwrap_or_else(|| "from-config".into()),
                None,
                expansion,
                SNAP_TOL_EXACT,
            )
        }
        MapConfig::Factored {
            constant,
            affine_offset,
            zeros,
            poles,
            label,
            expansion,
            cluster_radius,
        } => {
            let zero_factors: Vec<(Polynomial, u32)> = zeros
                .iter()
                .map(|&[re, im, m]| (linear(c(re, im)), m as u32))
                .collect();
            let pole_factors: Vec<(Polynomial, u32)> = poles
                .iter()
                .map(|&[re, im, m]| (linear(c(re, im)), m as u32))
                .collect();
            let constant = c(constant[0], constant[1]);
            let offset = c(affine_offset[0], affine_offset[1]);
            let p = Polynomial::from_factors(c(1.0, 0.0), &zero_factors);
            let q = Polynomial::from_factors(c(1.0, 0.0), &pole_factors);
            let num = q.scale(offset).add(&p.scale(constant));
            let factored = FactoredForm {
                constant,
                affine_offset: offset,
                zero_factors,
                pole_factors,
            };
            RationalMap::with_options(
                num,
                q,
                label.unwrap_or_else(|| "from-config".into()),
                Some(factored),
                expansion,
                cluster_radius.unwrap_or(SNAP_TOL_EXACT),
            )
        }
    }
}

/// Resolves `name-or-path` against the catalog first, then the filesystem.
pub fn resolve(name_or_path: &str) -> Result<RationalMap, RatMapError> {
    if CATALOG.contains(&name_or_path) {
        return builtin(name_or_path);
    }
    let json = std::fs::read_to_string(name_or_path)
        .map_err(|e| RatMapError::Config(format!("{name_or_path}: {e}")))?;
    from_json(&json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn point(re: f64, im: f64) -> SpherePoint {
        SpherePoint::from_re_im(re, im)
    }

    #[test]
    fn squaring_basics() {
        let m = builtin("squaring").unwrap();
        assert_eq!(m.degree(), 2);
        assert!(m.evaluate(&SpherePoint::infinity()).unwrap().is_infinity());
        let v = m.evaluate(&point(2.0, 0.0)).unwrap().to_complex().unwrap();
        assert_abs_diff_eq!(v.re, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn spherical_derivative_identity_and_inversion() {
        let ident = RationalMap::new(Polynomial::identity(), Polynomial::one(), "id").unwrap();
        let inv = RationalMap::new(Polynomial::one(), Polynomial::identity(), "inv").unwrap();
        for p in [point(0.3, 0.7), point(-4.0, 2.0), SpherePoint::infinity(), SpherePoint::zero()] {
            assert_abs_diff_eq!(ident.spherical_derivative(&p).unwrap(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(inv.spherical_derivative(&p).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spherical_derivative_doubling() {
        // z -> 2z at z = 1: 2 * 2 / (1 + 4) = 4/5.
        let m = RationalMap::new(
            Polynomial::from_real(&[0.0, 2.0]),
            Polynomial::one(),
            "doubling",
        )
        .unwrap();
        assert_abs_diff_eq!(
            m.spherical_derivative(&point(1.0, 0.0)).unwrap(),
            0.8,
            epsilon = 1e-12
        );
    }

    #[test]
    fn squaring_critical_points() {
        let m = builtin("squaring").unwrap();
        let crits = m.critical_points().unwrap();
        assert_eq!(crits.len(), 2);
        let total: usize = crits.iter().map(|c| c.local_degree - 1).sum();
        assert_eq!(total, 2);
        assert!(crits.iter().any(|c| c.point.is_infinity() && c.image.is_infinity()));
        assert!(crits.iter().any(|c| !c.point.is_infinity()
            && chordal_distance(&c.point, &SpherePoint::zero()) < 1e-9));
    }

    #[test]
    fn squaring_preimages() {
        let m = builtin("squaring").unwrap();
        let pre = m.preimages(&point(1.0, 0.0)).unwrap();
        assert_eq!(pre.iter().map(|&(_, m)| m).sum::<usize>(), 2);
        let mut res: Vec<f64> = pre
            .iter()
            .map(|(p, _)| p.to_complex().unwrap().re)
            .collect();
        res.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(res[0], -1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(res[1], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn squaring_portrait_has_critical_cycle() {
        let m = builtin("squaring").unwrap();
        let p = m.portrait(1e-6, 100).unwrap();
        assert!(p.has_critical_periodic_orbit);
        let post = p.postcritical_points();
        assert_eq!(post.len(), 2);
    }

    #[test]
    fn basilica_critical_cycle() {
        // z^2 - 1: critical cycle 0 -> -1 -> 0.
        let m = RationalMap::new(
            Polynomial::from_real(&[-1.0, 0.0, 1.0]),
            Polynomial::one(),
            "basilica",
        )
        .unwrap();
        let p = m.portrait(1e-6, 100).unwrap();
        assert!(p.has_critical_periodic_orbit);
        let cycle_lens: Vec<usize> = p.cycles.iter().map(|c| c.len()).collect();
        assert!(cycle_lens.contains(&2), "cycles: {:?}", p.cycles);
    }

    #[test]
    fn rejects_shared_roots() {
        // (z-1)(z+1) / (z-1)
        let num = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let den = Polynomial::from_real(&[-1.0, 1.0]);
        assert!(matches!(
            RationalMap::new(num, den, "degenerate"),
            Err(RatMapError::IndeterminateForm(_))
        ));
    }

    #[test]
    fn rhat_degree_and_fixed_points() {
        let m = builtin("rhat").unwrap();
        assert_eq!(m.degree(), 29);
        assert!(m.has_real_coefficients());
        // R(1) = 1 since the zero factor (z-1) kills the correction term.
        let one = point(1.0, 0.0);
        let v = m.evaluate(&one).unwrap();
        assert!(chordal_distance(&v, &one) < 1e-7);
        // Infinity is fixed with local degree 1 (deg num = deg den + 1).
        assert!(m.evaluate(&SpherePoint::infinity()).unwrap().is_infinity());
    }

    #[test]
    fn rhat_preimages_of_one_have_designed_multiplicities() {
        let m = builtin("rhat").unwrap();
        let pre = m.preimages(&point(1.0, 0.0)).unwrap();
        assert_eq!(pre.iter().map(|&(_, k)| k).sum::<usize>(), 29);
        let mut mults: Vec<usize> = pre.iter().map(|&(_, k)| k).collect();
        mults.sort_unstable();
        assert_eq!(mults, vec![1, 3, 4, 4, 4, 4, 4, 5]);
    }

    #[test]
    fn rhat_riemann_hurwitz_total() {
        let m = builtin("rhat").unwrap();
        let crits = m.critical_points().unwrap();
        let total: usize = crits.iter().map(|c| c.local_degree - 1).sum();
        assert_eq!(total, 2 * 29 - 2);
        // Infinity is not critical.
        assert!(crits.iter().all(|c| !c.point.is_infinity()));
    }

    #[test]
    fn rhat_portrait_is_three_point_pcf() {
        let m = builtin("rhat").unwrap();
        let expected = [
            point(1.0, 0.0),
            point(-1.0, 0.0),
            SpherePoint::infinity(),
        ];
        let report = m.verify_pcf(&expected, SNAP_TOL_RHAT).unwrap();
        assert!(report.pass, "max deviation {}", report.max_deviation);
        assert!(!report.has_critical_periodic_orbit);
    }

    #[test]
    fn lattes_2222_portrait() {
        let m = builtin("lattes_2222").unwrap();
        let crits = m.critical_points().unwrap();
        assert_eq!(m.degree(), 4);
        assert_eq!(crits.len(), 6);
        assert!(crits.iter().all(|c| c.local_degree == 2));
        let expected = [
            SpherePoint::zero(),
            point(1.0, 0.0),
            point(-1.0, 0.0),
            SpherePoint::infinity(),
        ];
        let report = m.verify_pcf(&expected, 1e-6).unwrap();
        assert!(report.pass, "max deviation {}", report.max_deviation);
        assert!(!report.has_critical_periodic_orbit);
        assert_eq!(report.deviations.len(), 6);
    }

    #[test]
    fn preimage_evaluate_round_trip() {
        let m = builtin("lattes_2222").unwrap();
        let target = point(0.3, 0.4);
        for (w, _) in m.preimages(&target).unwrap() {
            let back = m.evaluate(&w).unwrap();
            assert!(chordal_distance(&back, &target) < 1e-8);
        }
    }

    #[test]
    fn unknown_name_errors() {
        assert!(matches!(
            builtin("nope"),
            Err(RatMapError::UnknownName(_))
        ));
    }
}
