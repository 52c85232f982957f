//! Complex polynomials and a simultaneous root finder.
//!
//! Roots are found by Aberth–Ehrlich iteration from Newton-polygon initial
//! guesses. Multiple roots surface as tight clusters of approximations; the
//! solver merges such clusters (radius driven by the stalled correction
//! sizes) and reports the summed multiplicity.

use num_complex::Complex64;
use thiserror::Error;

use crate::sphere::{SphereError, SpherePoint};

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("root finding did not converge after {iterations} iterations (worst residual {worst_residual:.3e})")]
    NoConvergence {
        iterations: usize,
        worst_residual: f64,
    },
    #[error("cannot solve a polynomial of degree {0}")]
    DegreeTooSmall(usize),
    #[error(transparent)]
    Sphere(#[from] SphereError),
}

/// Coefficients in ascending degree order; the leading coefficient of a
/// nonzero polynomial is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// Monomial `z`.
    pub fn identity() -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0
    }

    /// Drops leading coefficients whose modulus is below `rel_tol` times the
    /// largest coefficient modulus. Used when a projective combination of
    /// numerator and denominator cancels the top degree.
    pub fn trimmed(&self, rel_tol: f64) -> Polynomial {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Polynomial::constant(Complex64::new(0.0, 0.0));
        }
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().unwrap().norm() <= rel_tol * scale {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Horner evaluation at an affine point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Value and derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |a_i| |z|^i`, the scale against which a backward-error residual
    /// is measured.
    pub fn eval_abs(&self, r: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * r + c.norm();
        }
        acc
    }

    /// Chart-safe projective evaluation; `infinity -> infinity` for degree >= 1.
    pub fn eval_point(&self, z: &SpherePoint) -> Result<SpherePoint, SphereError> {
        if self.degree() == 0 {
            return SpherePoint::normalize(self.coeffs[0], Complex64::new(1.0, 0.0));
        }
        if z.in_unit_chart() {
            let z0 = z.numerator() / z.denominator();
            SpherePoint::normalize(self.eval(z0), Complex64::new(1.0, 0.0))
        } else {
            // p(z) = z^d p_rev(1/z); projectively (p_rev(u) : u^d).
            let u = z.denominator() / z.numerator();
            let rev = self.reversed(self.degree());
            SpherePoint::normalize(rev.eval(u), u.powu(self.degree() as u32))
        }
    }

    /// `z^to_degree * p(1/z)`: reversed coefficients padded to `to_degree`.
    pub fn reversed(&self, to_degree: usize) -> Polynomial {
        assert!(to_degree >= self.degree());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); to_degree + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[to_degree - i] = c;
        }
        Polynomial::new(coeffs)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.degree() == 0 {
            return Polynomial::constant(Complex64::new(0.0, 0.0));
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (i as f64 + 1.0))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::constant(Complex64::new(0.0, 0.0));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.degree() + other.degree() + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            coeffs[i] += a;
        }
        for (i, &b) in other.coeffs.iter().enumerate() {
            coeffs[i] += b;
        }
        Polynomial::new(coeffs)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    pub fn pow(&self, exponent: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..exponent {
            acc = acc.mul(self);
        }
        acc
    }

    /// `constant * prod (z - root)^mult`.
    pub fn from_roots(constant: Complex64, roots: &[(Complex64, u32)]) -> Polynomial {
        let mut acc = Polynomial::constant(constant);
        for &(root, mult) in roots {
            let factor = Polynomial::new(vec![-root, Complex64::new(1.0, 0.0)]);
            acc = acc.mul(&factor.pow(mult));
        }
        acc
    }

    /// `constant * prod factor_i^mult_i` for arbitrary polynomial factors.
    pub fn from_factors(constant: Complex64, factors: &[(Polynomial, u32)]) -> Polynomial {
        let mut acc = Polynomial::constant(constant);
        for (factor, mult) in factors {
            acc = acc.mul(&factor.pow(*mult));
        }
        acc
    }
}

/// One merged root with its multiplicity and backward-relative residual.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub location: Complex64,
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Root>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// The root closest to `z`, if any.
    pub fn nearest(&self, z: Complex64) -> Option<&Root> {
        self.roots
            .iter()
            .min_by(|a, b| (a.location - z).norm().total_cmp(&(b.location - z).norm()))
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Relative convergence tolerance on Aberth corrections.
    pub tol: f64,
    pub max_iter: usize,
    /// Baseline relative cluster radius for multiplicity merging.
    pub cluster_radius: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-12,
            max_iter: 200,
            cluster_radius: crate::config::ROOT_CLUSTER_RADIUS,
        }
    }
}

/// All roots with multiplicities.
pub fn find_roots(p: &Polynomial, tol: f64, max_iter: usize) -> Result<RootSet, PolyError> {
    find_roots_with(
        p,
        &SolveOptions {
            tol,
            max_iter,
            ..SolveOptions::default()
        },
    )
}

pub fn find_roots_with(p: &Polynomial, opts: &SolveOptions) -> Result<RootSet, PolyError> {
    let n = p.degree();
    if n == 0 {
        return Err(PolyError::DegreeTooSmall(0));
    }

    // Exact zero roots: strip them first so the Newton polygon is clean.
    let mut zero_mult = 0usize;
    while zero_mult < n && p.coeffs[zero_mult].norm() == 0.0 {
        zero_mult += 1;
    }
    let reduced = Polynomial::new(p.coeffs[zero_mult..].to_vec());
    let mut roots = Vec::new();
    if zero_mult > 0 {
        roots.push(Root {
            location: Complex64::new(0.0, 0.0),
            multiplicity: zero_mult,
            residual: 0.0,
        });
    }
    if reduced.degree() >= 1 {
        let approx = match reduced.degree() {
            1 => vec![-reduced.coeffs[0] / reduced.coeffs[1]],
            2 => solve_quadratic(&reduced),
            _ => aberth(&reduced, opts)?,
        };
        roots.extend(cluster(&reduced, approx, opts));
    }
    Ok(RootSet { roots })
}

fn solve_quadratic(p: &Polynomial) -> Vec<Complex64> {
    let (c, b, a) = (p.coeffs[0], p.coeffs[1], p.coeffs[2]);
    let disc = (b * b - 4.0 * a * c).sqrt();
    // Pick the sign that avoids cancellation in -b -+ disc.
    let q = if (b + disc).norm() >= (b - disc).norm() {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); 2];
    }
    vec![q / a, c / q]
}

/// Newton-polygon (Bini-style) initial guesses: radii from the upper convex
/// hull of `(i, log |a_i|)`.
fn initial_guesses(p: &Polynomial) -> Vec<Complex64> {
    let n = p.degree();
    let logs: Vec<Option<f64>> = p
        .coeffs
        .iter()
        .map(|c| {
            let m = c.norm();
            (m > 0.0).then(|| m.ln())
        })
        .collect();
    // Upper convex hull over indices with finite log.
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..=n {
        if logs[i].is_none() {
            continue;
        }
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let (ya, yb, yi) = (logs[a].unwrap(), logs[b].unwrap(), logs[i].unwrap());
            // b must lie strictly above segment a..i to stay on the hull.
            let interp = ya + (yi - ya) * (b - a) as f64 / (i - a) as f64;
            if yb <= interp {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut guesses = Vec::with_capacity(n);
    let offset = 0.376; // fixed angular shift keeps guesses off the axes
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let k = j - i;
        let r = ((p.coeffs[i].norm() / p.coeffs[j].norm()).ln() / k as f64).exp();
        for m in 0..k {
            let theta = 2.0 * std::f64::consts::PI * (m as f64 / k as f64 + i as f64 / n as f64)
                + offset;
            guesses.push(Complex64::from_polar(r, theta));
        }
    }
    debug_assert_eq!(guesses.len(), n);
    guesses
}

/// Aberth ratio `p(z)/p'(z)` evaluated in whichever chart keeps moduli <= 1.
fn newton_ratio(p: &Polynomial, prev: &Polynomial, dprev: &Polynomial, z: Complex64) -> Complex64 {
    if z.norm() <= 1.0 {
        let (v, d) = p.eval_with_derivative(z);
        v / d
    } else {
        let u = 1.0 / z;
        z * prev.eval(u) / dprev.eval(u)
    }
}

/// Backward-relative residual `|p(z)| / sum |a_i||z|^i`, chart-safe.
fn backward_residual(p: &Polynomial, prev: &Polynomial, z: Complex64) -> f64 {
    if z.norm() <= 1.0 {
        let scale = p.eval_abs(z.norm());
        if scale == 0.0 {
            return 0.0;
        }
        p.eval(z).norm() / scale
    } else {
        let u = 1.0 / z;
        let scale = prev.eval_abs(u.norm());
        if scale == 0.0 {
            return 0.0;
        }
        prev.eval(u).norm() / scale
    }
}

struct Approximation {
    z: Complex64,
    last_correction: f64,
}

fn aberth(p: &Polynomial, opts: &SolveOptions) -> Result<Vec<Complex64>, PolyError> {
    let n = p.degree();
    let prev = p.reversed(n);
    let dprev = p.derivative().reversed(n - 1);
    let eps_lock = 4.0 * n as f64 * f64::EPSILON;

    let mut zs: Vec<Approximation> = initial_guesses(p)
        .into_iter()
        .map(|z| Approximation {
            z,
            last_correction: f64::INFINITY,
        })
        .collect();
    let mut locked = vec![false; n];

    for iter in 0..opts.max_iter {
        let mut moved = false;
        for k in 0..n {
            if locked[k] {
                continue;
            }
            let zk = zs[k].z;
            if backward_residual(p, &prev, zk) <= eps_lock {
                locked[k] = true;
                continue;
            }
            let mut nk = newton_ratio(p, &prev, &dprev, zk);
            if !nk.is_finite() {
                // Derivative vanished at the approximation; nudge off it.
                zs[k].z += Complex64::new(1e-7 * (1.0 + zk.norm()), 5e-8);
                moved = true;
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for (j, other) in zs.iter().enumerate() {
                if j != k {
                    let diff = zk - other.z;
                    if diff.norm() > 0.0 {
                        s += 1.0 / diff;
                    }
                }
            }
            let denom = 1.0 - nk * s;
            if denom.norm() > 1e-300 {
                nk /= denom;
            }
            if !nk.is_finite() {
                continue;
            }
            zs[k].z = zk - nk;
            zs[k].last_correction = nk.norm();
            if nk.norm() > opts.tol * (1.0 + zk.norm()) {
                moved = true;
            } else {
                locked[k] = true;
            }
        }
        if !moved && locked.iter().all(|&l| l) {
            return Ok(zs.into_iter().map(|a| finalize(a)).collect());
        }
        let _ = iter;
    }

    // Accept the result anyway if every approximation has a small backward
    // residual (multiple roots legitimately stall the correction criterion).
    let worst = zs
        .iter()
        .map(|a| backward_residual(p, &prev, a.z))
        .fold(0.0, f64::max);
    if worst <= 1e3 * eps_lock {
        return Ok(zs.into_iter().map(finalize).collect());
    }
    Err(PolyError::NoConvergence {
        iterations: opts.max_iter,
        worst_residual: worst,
    })
}

fn finalize(a: Approximation) -> Complex64 {
    a.z
}

/// Merges clusters of approximations into multiple roots.
///
/// Pair threshold combines the baseline radius with the stalled correction
/// sizes, which track the genuine scatter of an m-fold cluster.
fn cluster(p: &Polynomial, approx: Vec<Complex64>, opts: &SolveOptions) -> Vec<Root> {
    let n = approx.len();
    let prev = p.reversed(p.degree());
    let dp = p.derivative();

    // Stalled-correction estimate per approximation: one fresh Newton ratio.
    let dprev = dp.reversed(p.degree().saturating_sub(1).max(0));
    let stall: Vec<f64> = approx
        .iter()
        .map(|&z| {
            let r = newton_ratio(p, &prev, &dprev, z);
            if r.is_finite() {
                r.norm()
            } else {
                0.0
            }
        })
        .collect();

    // Union-find single linkage.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = 1.0f64.max(approx[i].norm()).max(approx[j].norm());
            let threshold = opts.cluster_radius * scale + 20.0 * (stall[i] + stall[j]);
            if (approx[i] - approx[j]).norm() <= threshold {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }

    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }

    let mut roots: Vec<Root> = groups
        .values()
        .map(|members| {
            let m = members.len();
            let mean = members.iter().map(|&i| approx[i]).sum::<Complex64>() / m as f64;
            let center = refine_multiple(p, &dp, mean, m, members, &approx);
            Root {
                location: center,
                multiplicity: m,
                residual: backward_residual(p, &prev, center),
            }
        })
        .collect();
    roots.sort_by(|a, b| {
        (a.location.re, a.location.im).partial_cmp(&(b.location.re, b.location.im)).unwrap()
    });
    roots
}

/// Multiplicity-aware polishing of a cluster center. An m-fold root is a
/// simple root of the (m-1)th derivative, so Newton there reaches machine
/// precision where Newton on `p` itself drowns in evaluation noise. Falls
/// back to the mean if the step leaves the cluster's neighborhood.
fn refine_multiple(
    p: &Polynomial,
    dp: &Polynomial,
    mean: Complex64,
    m: usize,
    members: &[usize],
    approx: &[Complex64],
) -> Complex64 {
    let diameter = members
        .iter()
        .map(|&i| (approx[i] - mean).norm())
        .fold(0.0, f64::max);
    let q = if m >= 2 {
        let mut q = dp.clone();
        for _ in 2..m {
            q = q.derivative();
        }
        q
    } else {
        p.clone()
    };
    let dq = q.derivative();
    if dq.is_zero() {
        return mean;
    }
    let mut z = mean;
    for _ in 0..20 {
        let v = q.eval(z);
        let d = dq.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = v / d;
        if !step.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    let allowed = 2.0 * diameter + 1e-9 * (1.0 + mean.norm());
    if (z - mean).norm() <= allowed && z.is_finite() {
        z
    } else {
        mean
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_and_derivative() {
        // z^3 -> derivative 3z^2
        let p = Polynomial::from_real(&[0.0, 0.0, 0.0, 1.0]);
        let d = p.derivative();
        assert_eq!(d.coeffs(), &[c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]);
        // z^2 + 1 at i is 0
        let q = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        assert_abs_diff_eq!(q.eval(c(0.0, 1.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn eval_point_at_infinity() {
        let q = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        assert!(q.eval_point(&SpherePoint::infinity()).unwrap().is_infinity());
    }

    #[test]
    fn from_roots_expands() {
        let p = Polynomial::from_roots(c(1.0, 0.0), &[(c(1.0, 0.0), 1), (c(-1.0, 0.0), 1)]);
        assert_eq!(p.degree(), 2);
        assert_abs_diff_eq!(p.coeffs()[0].re, -1.0);
        assert_abs_diff_eq!(p.coeffs()[1].norm(), 0.0);
        assert_abs_diff_eq!(p.coeffs()[2].re, 1.0);
    }

    #[test]
    fn quadratic_roots() {
        let p = Polynomial::from_real(&[1.0, 0.0, 1.0]);
        let rs = find_roots(&p, 1e-12, 100).unwrap();
        assert_eq!(rs.roots.len(), 2);
        assert_eq!(rs.total_multiplicity(), 2);
        for r in &rs.roots {
            assert_abs_diff_eq!(r.location.re, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(r.location.im.abs(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn quadruple_root_merges() {
        let p = Polynomial::from_roots(c(1.0, 0.0), &[(c(1.0, 0.0), 4)]);
        let rs = find_roots(&p, 1e-12, 300).unwrap();
        assert_eq!(rs.roots.len(), 1, "cluster should merge: {:?}", rs.roots);
        assert_eq!(rs.roots[0].multiplicity, 4);
        assert_abs_diff_eq!(rs.roots[0].location.re, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(rs.roots[0].location.im, 0.0, epsilon = 1e-6);
    }

    #[test]
    fn mixed_multiplicities() {
        let roots = [(c(2.0, 0.0), 3), (c(-1.0, 1.0), 2), (c(0.5, -0.5), 1)];
        let p = Polynomial::from_roots(c(0.7, 0.2), &roots);
        let rs = find_roots(&p, 1e-12, 300).unwrap();
        assert_eq!(rs.total_multiplicity(), 6);
        for (root, mult) in roots {
            let found = rs.nearest(root).unwrap();
            assert_eq!(found.multiplicity as u32, mult);
            assert!((found.location - root).norm() < 1e-6);
        }
    }

    #[test]
    fn large_modulus_roots() {
        // Roots at the moduli the bundled map exercises.
        let roots = [(c(191.82, 0.0), 2), (c(-0.001, 0.0), 1), (c(52.08, 0.0), 1)];
        let p = Polynomial::from_roots(c(1.0, 0.0), &roots);
        let rs = find_roots(&p, 1e-12, 400).unwrap();
        for (root, mult) in roots {
            let found = rs.nearest(root).unwrap();
            assert_eq!(found.multiplicity as u32, mult);
            assert!((found.location - root).norm() < 1e-5 * (1.0 + root.norm()));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn reconstruction_recovers_roots(
            raw in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0, 1u32..3), 1..5)
        ) {
            // Build a polynomial of degree <= 12 from well-separated roots.
            let mut roots: Vec<(Complex64, u32)> = Vec::new();
            for (re, im, m) in raw {
                let z = c(re, im);
                if roots.iter().all(|(r, _)| (*r - z).norm() > 0.3) {
                    roots.push((z, m));
                }
            }
            prop_assume!(!roots.is_empty());
            prop_assume!(roots.iter().map(|&(_, m)| m).sum::<u32>() <= 12);
            let p = Polynomial::from_roots(c(1.0, 0.0), &roots);
            let rs = find_roots(&p, 1e-12, 400).unwrap();
            prop_assert_eq!(rs.total_multiplicity(), p.degree());
            for (root, mult) in roots {
                let found = rs.nearest(root).unwrap();
                prop_assert_eq!(found.multiplicity as u32, mult);
                prop_assert!(
                    (found.location - root).norm() < 1e-7 * (1.0 + root.norm()),
                    "root {} found at {}", root, found.location
                );
            }
        }
    }
}
