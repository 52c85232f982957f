//! The chain metric d_j on a subdivision complex and the diagnostics behind
//! its convergence: annulus crossing lengths, monotonicity of d_j − 2N^{−j},
//! and representative independence.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::subdivision::SubdivisionComplex;
use super::SnowcombError;
use crate::sphere::RngStream;

/// A point of the snowsphere as a nested cylinder address: base face of 𝒮₀
/// followed by one child index per level, truncated at the working level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointAddress {
    pub base: u32,
    pub children: Vec<u32>,
}

impl PointAddress {
    pub fn new(base: u32, children: Vec<u32>) -> Self {
        PointAddress { base, children }
    }

    /// Index of the level-j cylinder containing the point.
    pub fn cylinder(&self, complex: &SubdivisionComplex, j: usize) -> Result<usize, SnowcombError> {
        let m = complex.generator().face_count();
        let base_count = complex.cylinder_count(0)?;
        if (self.base as usize) >= base_count {
            return Err(SnowcombError::InvalidAddress(format!(
                "base face {} out of range (< {base_count})",
                self.base
            )));
        }
        if self.children.len() < j {
            return Err(SnowcombError::InvalidAddress(format!(
                "address {self} has {} child indices, level {j} requested",
                self.children.len()
            )));
        }
        let mut idx = self.base as usize;
        for &c in &self.children[..j] {
            if (c as usize) >= m {
                return Err(SnowcombError::InvalidAddress(format!(
                    "child index {c} out of range (< {m})"
                )));
            }
            idx = idx * m + c as usize;
        }
        Ok(idx)
    }
}

impl fmt::Display for PointAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for c in &self.children {
            write!(f, ".{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PointAddress {
    type Err = SnowcombError;

    /// Dot-separated indices: `base.c1.c2...`, e.g. `3.14.7`.
    fn from_str(s: &str) -> Result<Self, SnowcombError> {
        let mut parts = s.trim().split('.');
        let bad = |p: &str| {
            SnowcombError::InvalidAddress(format!("bad address component {p:?} in {s:?}"))
        };
        let base = parts
            .next()
            .filter(|p| !p.is_empty())
            .ok_or_else(|| bad(""))?;
        let base = base.parse().map_err(|_| bad(base))?;
        let children = parts
            .map(|p| p.parse().map_err(|_| bad(p)))
            .collect::<Result<Vec<u32>, _>>()?;
        Ok(PointAddress { base, children })
    }
}

/// Uniformly random address to the given depth (deterministic per stream).
pub fn random_address(
    complex: &SubdivisionComplex,
    depth: usize,
    rng: &mut RngStream,
) -> PointAddress {
    let pick = |rng: &mut RngStream, k: usize| ((rng.uniform() * k as f64) as u32).min(k as u32 - 1);
    let base = pick(rng, complex.cylinder_count(0).expect("level 0"));
    let m = complex.generator().face_count();
    let children = (0..depth).map(|_| pick(rng, m)).collect();
    PointAddress { base, children }
}

/// Node count of the shortest chain between two cylinders in an adjacency
/// graph (1 when they coincide, 2 when adjacent, …).
fn bfs_node_count(adjacency: &[Vec<u32>], from: usize, to: usize) -> Result<usize, SnowcombError> {
    if from == to {
        return Ok(1);
    }
    let mut dist = vec![u32::MAX; adjacency.len()];
    let mut queue = VecDeque::new();
    dist[from] = 0;
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        let d = dist[v] + 1;
        for &w in &adjacency[v] {
            let w = w as usize;
            if dist[w] == u32::MAX {
                if w == to {
                    return Ok(d as usize + 1);
                }
                dist[w] = d;
                queue.push_back(w);
            }
        }
    }
    Err(SnowcombError::Probe(format!(
        "cylinders {from} and {to} are not chain-connected"
    )))
}

/// d_j(x, y) = N^{−j} · (node count of the shortest j-chain joining the two
/// level-j cylinders).
pub fn chain_distance(
    complex: &SubdivisionComplex,
    x: &PointAddress,
    y: &PointAddress,
    j: usize,
) -> Result<f64, SnowcombError> {
    let nodes = chain_node_count(complex, x, y, j)?;
    Ok((complex.generator().n() as f64).powi(-(j as i32)) * nodes as f64)
}

/// The integer chain length behind [`chain_distance`].
pub fn chain_node_count(
    complex: &SubdivisionComplex,
    x: &PointAddress,
    y: &PointAddress,
    j: usize,
) -> Result<usize, SnowcombError> {
    let (ix, iy) = (x.cylinder(complex, j)?, y.cylinder(complex, j)?);
    bfs_node_count(complex.adjacency(j)?, ix, iy)
}

/// Minimum over j-cylinders X of the shortest (j+1)-chain crossing the
/// annulus A(X) (the union of the neighbors of X), from the cylinders
/// touching X to the cylinders touching the complement of A(X) ∪ {X}.
/// Requires level j+1.
pub fn annulus_crossing_min(
    complex: &SubdivisionComplex,
    j: usize,
) -> Result<usize, SnowcombError> {
    let m = complex.generator().face_count();
    let coarse = complex.adjacency(j)?;
    let fine = complex.adjacency(j + 1)?;
    let result = (0..coarse.len())
        .into_par_iter()
        .filter_map(|x| annulus_crossing_at(coarse, fine, m, x))
        .min();
    result.ok_or_else(|| {
        SnowcombError::Probe(format!("no annulus crossings exist at level {j}"))
    })
}

fn annulus_crossing_at(
    coarse: &[Vec<u32>],
    fine: &[Vec<u32>],
    m: usize,
    x: usize,
) -> Option<usize> {
    let ring = &coarse[x];
    if ring.is_empty() {
        return None;
    }
    let in_ring = |p: usize| ring.binary_search(&(p as u32)).is_ok();
    // Local index over the (j+1)-cylinders making up the annulus.
    let mut local: HashMap<usize, usize> = HashMap::new();
    let mut cells: Vec<usize> = Vec::with_capacity(ring.len() * m);
    for &p in ring {
        for c in (p as usize) * m..(p as usize + 1) * m {
            local.insert(c, cells.len());
            cells.push(c);
        }
    }
    let mut dist = vec![u32::MAX; cells.len()];
    let mut queue = VecDeque::new();
    let mut is_target = vec![false; cells.len()];
    let mut have_target = false;
    for (li, &c) in cells.iter().enumerate() {
        let mut source = false;
        let mut target = false;
        for &w in &fine[c] {
            let parent = w as usize / m;
            if parent == x {
                source = true;
            } else if !in_ring(parent) {
                target = true;
            }
        }
        if source {
            dist[li] = 0;
            queue.push_back(li);
        }
        if target {
            is_target[li] = true;
            have_target = true;
        }
    }
    if queue.is_empty() || !have_target {
        return None;
    }
    while let Some(v) = queue.pop_front() {
        if is_target[v] {
            return Some(dist[v] as usize + 1);
        }
        for &w in &fine[cells[v]] {
            if let Some(&lw) = local.get(&(w as usize)) {
                if dist[lw] == u32::MAX {
                    dist[lw] = dist[v] + 1;
                    queue.push_back(lw);
                }
            }
        }
    }
    None
}

/// Diagnostics of the limit d = lim d_j for one pair of addresses.
#[derive(Debug, Clone)]
pub struct MetricProbe {
    /// d_j for j = 0..=jmax.
    pub d: Vec<f64>,
    /// First level at which the two cylinders are disjoint (neither equal
    /// nor touching); `None` if that never happens up to jmax.
    pub j0: Option<usize>,
    /// Whether d_j − 2N^{−j} is nondecreasing for j ≥ j₀.
    pub monotone_from_j0: bool,
    /// max_j d_j — the uniform bound d_j ≲ 1.
    pub max_d: f64,
}

/// Compute d_j for j ≤ jmax together with the convergence diagnostics of
/// Theorem djtod: first disjoint level j₀, monotonicity of d_j − 2N^{−j}
/// from j₀ on, and the uniform bound.
pub fn metric_probe(
    complex: &SubdivisionComplex,
    x: &PointAddress,
    y: &PointAddress,
    jmax: usize,
) -> Result<MetricProbe, SnowcombError> {
    let n = complex.generator().n() as f64;
    let mut d = Vec::with_capacity(jmax + 1);
    let mut j0 = None;
    for j in 0..=jmax {
        let (ix, iy) = (x.cylinder(complex, j)?, y.cylinder(complex, j)?);
        if j0.is_none() && ix != iy && !complex.adjacency(j)?[ix].contains(&(iy as u32)) {
            j0 = Some(j);
        }
        let nodes = bfs_node_count(complex.adjacency(j)?, ix, iy)?;
        d.push(n.powi(-(j as i32)) * nodes as f64);
    }
    let mut monotone_from_j0 = true;
    if let Some(start) = j0 {
        let shifted: Vec<f64> = (start..=jmax)
            .map(|j| d[j] - 2.0 * n.powi(-(j as i32)))
            .collect();
        monotone_from_j0 = shifted.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    }
    let max_d = d.iter().cloned().fold(0.0, f64::max);
    Ok(MetricProbe { d, j0, monotone_from_j0, max_d })
}

/// |d_j(x̃, ỹ) − d_j(x, y)| for j ≤ jmax, for alternative representatives of
/// the same two points. Theorem djtod proof step (4) bounds each entry by
/// 2N^{−j}.
pub fn representative_deviation(
    complex: &SubdivisionComplex,
    x: &PointAddress,
    x_alt: &PointAddress,
    y: &PointAddress,
    y_alt: &PointAddress,
    jmax: usize,
) -> Result<Vec<f64>, SnowcombError> {
    (0..=jmax)
        .map(|j| {
            Ok((chain_distance(complex, x_alt, y_alt, j)?
                - chain_distance(complex, x, y, j)?)
                .abs())
        })
        .collect()
}

/// All addresses of a level-0 vertex down to the given depth, one per
/// incident base face, obtained by following the unique corner child at
/// every level (Definition def:generator's corner clause makes it unique).
/// The returned addresses are equivalent representatives of the same point.
pub fn vertex_addresses(
    complex: &SubdivisionComplex,
    class: &[(u32, u8)],
    depth: usize,
) -> Vec<PointAddress> {
    let g = complex.generator();
    class
        .iter()
        .map(|&(face, corner)| {
            let mut children = Vec::with_capacity(depth);
            let mut c = corner;
            for _ in 0..depth {
                let (cf, cc) = g.corner_children[c as usize];
                children.push(cf);
                c = cc;
            }
            PointAddress { base: face, children }
        })
        .collect()
}
