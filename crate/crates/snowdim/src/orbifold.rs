//! Orbifold data of a postcritically finite map: the ramification function
//! ν, the maxdeg table, signatures with exact Euler characteristics, and the
//! parabolic/hyperbolic dichotomy.
//!
//! Everything here is exact integer or rational arithmetic on the snapped
//! portrait; floating point enters only through the snapping that built the
//! portrait.

use std::collections::BTreeMap;

use num_rational::Ratio;
use thiserror::Error;

use crate::ratmap::RamificationPortrait;

#[derive(Debug, Error)]
pub enum OrbifoldError {
    #[error("ramification function diverges: the portrait contains a critical periodic orbit")]
    Diverges,
    #[error("signature {0:?} has positive Euler characteristic; the portrait is inconsistent")]
    PositiveEulerCharacteristic(Vec<u64>),
}

/// The four signatures with χ = 0 (parabolic orbifolds of maps without
/// critical periodic orbits).
pub const PARABOLIC_SIGNATURES: [&[u64]; 4] =
    [&[2, 2, 2, 2], &[2, 4, 4], &[2, 3, 6], &[3, 3, 3]];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    ParabolicLattesCandidate,
    Hyperbolic,
}

impl std::fmt::Display for Class {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Class::ParabolicLattesCandidate => write!(f, "parabolic"),
            Class::Hyperbolic => write!(f, "hyperbolic"),
        }
    }
}

/// Sorted multiset of ν-values ≥ 2 at the postcritical points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldSignature {
    values: Vec<u64>,
}

impl OrbifoldSignature {
    pub fn new(mut values: Vec<u64>) -> Self {
        values.retain(|&v| v >= 2);
        values.sort_unstable();
        OrbifoldSignature { values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// χ(𝒪) = 2 + Σ (1/ν − 1), exactly.
    pub fn euler_characteristic(&self) -> Ratio<i64> {
        let mut chi = Ratio::new(2, 1);
        for &v in &self.values {
            chi += Ratio::new(1, v as i64) - Ratio::new(1, 1);
        }
        chi
    }
}

impl std::fmt::Display for OrbifoldSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Parabolic iff χ = 0, which happens exactly on the four-signature list.
pub fn classify(signature: &OrbifoldSignature) -> Class {
    let chi = signature.euler_characteristic();
    if chi == Ratio::new(0, 1) {
        debug_assert!(PARABOLIC_SIGNATURES.contains(&signature.values()));
        Class::ParabolicLattesCandidate
    } else {
        Class::Hyperbolic
    }
}

/// ν on the postcritical nodes: the least function with
/// `deg_R(q)·ν(q) | ν(p)` for every portrait edge q → p, computed by lcm
/// iteration to stabilization (ν ≡ 1 off the postcritical set).
pub fn ramification_function(
    portrait: &RamificationPortrait,
) -> Result<BTreeMap<usize, u64>, OrbifoldError> {
    if portrait.has_critical_periodic_orbit {
        return Err(OrbifoldError::Diverges);
    }
    let post = portrait.postcritical_indices();
    let mut nu: BTreeMap<usize, u64> = post.iter().map(|&p| (p, 1u64)).collect();
    for _round in 0..64 {
        let mut changed = false;
        for &p in &post {
            let mut v = 1u64;
            for q in portrait.preimage_nodes(p) {
                let deg = portrait.nodes[q].local_degree as u64;
                let nuq = nu.get(&q).copied().unwrap_or(1);
                v = lcm(v, deg.saturating_mul(nuq));
                if v > 1 << 40 {
                    return Err(OrbifoldError::Diverges);
                }
            }
            if nu[&p] != v {
                nu.insert(p, v);
                changed = true;
            }
        }
        if !changed {
            return Ok(nu);
        }
    }
    Err(OrbifoldError::Diverges)
}

fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// maxdeg(p): the largest product of local degrees along a backward orbit
/// ending at p, i.e. the worst local degree of any iterate over p. Finite
/// because postcritical cycles carry no critical points.
pub fn maxdeg(
    portrait: &RamificationPortrait,
) -> Result<BTreeMap<usize, u64>, OrbifoldError> {
    if portrait.has_critical_periodic_orbit {
        return Err(OrbifoldError::Diverges);
    }
    let n = portrait.nodes.len();
    let mut f: Vec<u64> = vec![1; n];
    for _round in 0..=n {
        let mut changed = false;
        for p in 0..n {
            let mut v = 1u64;
            for q in portrait.preimage_nodes(p) {
                let deg = portrait.nodes[q].local_degree as u64;
                v = v.max(deg.saturating_mul(f[q]));
            }
            if v > f[p] {
                f[p] = v;
                changed = true;
            }
        }
        if !changed {
            return Ok(portrait
                .postcritical_indices()
                .into_iter()
                .map(|p| (p, f[p]))
                .collect());
        }
    }
    Err(OrbifoldError::Diverges)
}

/// Signature of the portrait's orbifold, with the nonpositivity of χ
/// checked (a positive value indicates a broken portrait).
pub fn signature_from_portrait(
    portrait: &RamificationPortrait,
) -> Result<(OrbifoldSignature, BTreeMap<usize, u64>), OrbifoldError> {
    let nu = ramification_function(portrait)?;
    let sig = OrbifoldSignature::new(nu.values().copied().collect());
    if sig.euler_characteristic() > Ratio::new(0, 1) {
        return Err(OrbifoldError::PositiveEulerCharacteristic(
            sig.values().to_vec(),
        ));
    }
    Ok((sig, nu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{SNAP_TOL_EXACT, SNAP_TOL_RHAT};
    use crate::ratmap::builtin;
    use crate::sphere::SpherePoint;

    fn chi(values: &[u64]) -> Ratio<i64> {
        OrbifoldSignature::new(values.to_vec()).euler_characteristic()
    }

    #[test]
    fn euler_characteristic_examples() {
        assert_eq!(chi(&[2, 4, 4]), Ratio::new(0, 1));
        assert_eq!(chi(&[2, 2, 2, 2]), Ratio::new(0, 1));
        assert_eq!(chi(&[2, 3, 6]), Ratio::new(0, 1));
        assert_eq!(chi(&[3, 3, 3]), Ratio::new(0, 1));
        assert_eq!(chi(&[2, 3, 7]), Ratio::new(-1, 42));
    }

    #[test]
    fn classify_parabolic_list() {
        for sig in PARABOLIC_SIGNATURES {
            let s = OrbifoldSignature::new(sig.to_vec());
            assert_eq!(classify(&s), Class::ParabolicLattesCandidate);
        }
        let s = OrbifoldSignature::new(vec![2, 3, 7]);
        assert_eq!(classify(&s), Class::Hyperbolic);
    }

    #[test]
    fn squaring_diverges() {
        let m = builtin("squaring").unwrap();
        let p = m.portrait(SNAP_TOL_EXACT, 100).unwrap();
        assert!(matches!(
            ramification_function(&p),
            Err(OrbifoldError::Diverges)
        ));
    }

    #[test]
    fn lattes_2222_is_parabolic() {
        let m = builtin("lattes_2222").unwrap();
        let p = m.portrait(SNAP_TOL_EXACT, 100).unwrap();
        let (sig, nu) = signature_from_portrait(&p).unwrap();
        assert_eq!(sig.values(), &[2, 2, 2, 2]);
        assert_eq!(classify(&sig), Class::ParabolicLattesCandidate);
        assert_eq!(nu.len(), 4);
        assert!(nu.values().all(|&v| v == 2));
        let md = maxdeg(&p).unwrap();
        for &p_idx in &p.postcritical_indices() {
            assert_eq!(md[&p_idx], 2);
        }
    }

    #[test]
    fn rhat_signature_and_maxdeg() {
        let m = builtin("rhat").unwrap();
        let portrait = m.portrait(SNAP_TOL_RHAT / 4.0, 1000).unwrap();
        let (sig, nu) = signature_from_portrait(&portrait).unwrap();
        assert_eq!(sig.values(), &[2, 12, 60]);
        assert_eq!(classify(&sig), Class::Hyperbolic);
        assert_eq!(sig.euler_characteristic(), Ratio::new(-2, 5));

        let md = maxdeg(&portrait).unwrap();
        let at = |pt: &SpherePoint| portrait.node_nearest(pt).unwrap();
        let one = at(&SpherePoint::from_re_im(1.0, 0.0));
        let minus_one = at(&SpherePoint::from_re_im(-1.0, 0.0));
        let inf = at(&SpherePoint::infinity());
        assert_eq!(nu[&one], 60);
        assert_eq!(nu[&minus_one], 12);
        assert_eq!(nu[&inf], 2);
        assert_eq!(md[&one], 5);
        assert_eq!(md[&minus_one], 4);
        assert_eq!(md[&inf], 2);
    }

    #[test]
    fn divisibility_and_minimality_on_catalog() {
        for (name, tol) in [("lattes_2222", SNAP_TOL_EXACT), ("rhat", SNAP_TOL_RHAT / 4.0)] {
            let m = builtin(name).unwrap();
            let portrait = m.portrait(tol, 1000).unwrap();
            let nu = ramification_function(&portrait).unwrap();
            for (&p, &nup) in &nu {
                for q in portrait.preimage_nodes(p) {
                    let deg = portrait.nodes[q].local_degree as u64;
                    let nuq = nu.get(&q).copied().unwrap_or(1);
                    assert_eq!(nup % (deg * nuq), 0, "{name}: edge {q}->{p}");
                }
                // Minimality: every proper divisor of ν(p) breaks
                // divisibility for some edge.
                for d in 1..nup {
                    if nup % d != 0 {
                        continue;
                    }
                    let violated = portrait.preimage_nodes(p).iter().any(|&q| {
                        let deg = portrait.nodes[q].local_degree as u64;
                        let nuq = nu.get(&q).copied().unwrap_or(1);
                        d % (deg * nuq) != 0
                    });
                    assert!(violated, "{name}: ν({p}) = {nup} not minimal (divisor {d})");
                }
            }
        }
    }

    #[test]
    fn maxdeg_dominates_direct_critical_preimages() {
        for (name, tol) in [("lattes_2222", SNAP_TOL_EXACT), ("rhat", SNAP_TOL_RHAT / 4.0)] {
            let m = builtin(name).unwrap();
            let portrait = m.portrait(tol, 1000).unwrap();
            let md = maxdeg(&portrait).unwrap();
            for (&p, &v) in &md {
                for q in portrait.preimage_nodes(p) {
                    assert!(v >= portrait.nodes[q].local_degree as u64, "{name}");
                }
            }
        }
    }
}
