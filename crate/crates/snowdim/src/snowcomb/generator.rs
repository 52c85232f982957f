//! N-generator validation (Definition def:generator): a polyhedral disk of
//! 1/N-squares whose boundary is the unit square, symmetric under the four
//! reflections, with exactly one face at each corner.
//!
//! All geometry is exact: faces live on the integer grid obtained by scaling
//! by N, so every incidence test is an integer comparison.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::SnowcombError;

/// A point of the scaled grid `N·(1/N)ℤ³ = ℤ³`.
pub type GridPoint = [i64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisPair {
    Xy,
    Yz,
    Xz,
}

impl AxisPair {
    fn spanning(self) -> (GridPoint, GridPoint) {
        match self {
            AxisPair::Xy => ([1, 0, 0], [0, 1, 0]),
            AxisPair::Yz => ([0, 1, 0], [0, 0, 1]),
            AxisPair::Xz => ([1, 0, 0], [0, 0, 1]),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct FaceSpec {
    pub anchor: [i64; 3],
    pub axes: AxisPair,
}

/// Raw generator description as found in the JSON files.
#[derive(Debug, Clone, Deserialize)]
pub struct GeneratorSpec {
    #[serde(rename = "N")]
    pub n: i64,
    pub faces: Vec<FaceSpec>,
}

impl GeneratorSpec {
    pub fn from_json(text: &str) -> Result<Self, SnowcombError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self, SnowcombError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn add(a: GridPoint, b: GridPoint) -> GridPoint {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Corner order of a face: 0 = anchor, then counterclockwise in the face's
/// own (s,t) chart: 1 = anchor+e1, 2 = anchor+e1+e2, 3 = anchor+e2.
/// Side k runs between corners `SIDE_CORNERS[k]`, parametrized start → end:
/// side 0: t=0, s increasing; side 1: s=1, t increasing; side 2: t=1,
/// s increasing; side 3: s=0, t increasing.
pub const SIDE_CORNERS: [(usize, usize); 4] = [(0, 1), (1, 2), (3, 2), (0, 3)];

pub(crate) fn face_corners(anchor: GridPoint, axes: AxisPair) -> [GridPoint; 4] {
    let (e1, e2) = axes.spanning();
    [anchor, add(anchor, e1), add(anchor, add(e1, e2)), add(anchor, e2)]
}

/// Undirected grid edge key.
fn edge_key(a: GridPoint, b: GridPoint) -> (GridPoint, GridPoint) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// An identification of two face sides along a shared edge. `reversed`
/// means parameter t on side `a_side` meets parameter 1−t on side `b_side`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct EdgeGlue {
    pub a: u32,
    pub a_side: u8,
    pub b: u32,
    pub b_side: u8,
    pub reversed: bool,
}

/// Identified cells of a face complex: side gluings along shared edges and
/// vertex classes as `(face, corner)` incidence lists.
#[derive(Debug, Clone, Default)]
pub(crate) struct FaceComplexCells {
    pub glues: Vec<EdgeGlue>,
    pub vertex_classes: Vec<Vec<(u32, u8)>>,
}

pub(crate) struct FaceAnalysis {
    pub cells: FaceComplexCells,
    /// Edges incident to exactly one face: key → (face, side, starts_at_min).
    pub boundary_edges: BTreeMap<(GridPoint, GridPoint), (u32, u8, bool)>,
    /// All distinct grid vertices with incidence lists.
    pub vertex_map: BTreeMap<GridPoint, Vec<(u32, u8)>>,
    pub edge_count: usize,
}

/// Shared incidence analysis for any complex of grid squares (used for both
/// the generator and the cube base). Fails (Disk clause) if an edge has more
/// than two incident faces.
pub(crate) fn analyze_faces(
    corners: &[[GridPoint; 4]],
) -> Result<FaceAnalysis, SnowcombError> {
    let mut edges: BTreeMap<(GridPoint, GridPoint), Vec<(u32, u8, bool)>> = BTreeMap::new();
    let mut vertex_map: BTreeMap<GridPoint, Vec<(u32, u8)>> = BTreeMap::new();
    for (fi, cs) in corners.iter().enumerate() {
        for (c, &p) in cs.iter().enumerate() {
            vertex_map.entry(p).or_default().push((fi as u32, c as u8));
        }
        for (side, &(s, e)) in SIDE_CORNERS.iter().enumerate() {
            let (start, end) = (cs[s], cs[e]);
            let key = edge_key(start, end);
            let starts_at_min = start == key.0;
            edges
                .entry(key)
                .or_default()
                .push((fi as u32, side as u8, starts_at_min));
        }
    }
    let mut glues = Vec::new();
    let mut boundary_edges = BTreeMap::new();
    let edge_count = edges.len();
    for (key, inc) in edges {
        match inc.as_slice() {
            [one] => {
                boundary_edges.insert(key, *one);
            }
            [a, b] => glues.push(EdgeGlue {
                a: a.0,
                a_side: a.1,
                b: b.0,
                b_side: b.1,
                reversed: a.2 != b.2,
            }),
            more => {
                return Err(SnowcombError::Disk(format!(
                    "edge {:?}-{:?} shared by {} faces",
                    key.0,
                    key.1,
                    more.len()
                )))
            }
        }
    }
    let vertex_classes = vertex_map.values().cloned().collect();
    Ok(FaceAnalysis {
        cells: FaceComplexCells { glues, vertex_classes },
        boundary_edges,
        vertex_map,
        edge_count,
    })
}

/// Boundary parametrization of ∂[0,1]² (scaled by N), using the same side
/// convention as faces: side 0: (u,0), side 1: (N,u), side 2: (u,N),
/// side 3: (0,u), u = 0..N.
fn boundary_point(n: i64, side: usize, u: i64) -> GridPoint {
    match side {
        0 => [u, 0, 0],
        1 => [n, u, 0],
        2 => [u, n, 0],
        _ => [0, u, 0],
    }
}

fn reflections(_n: i64) -> [fn(i64, GridPoint) -> GridPoint; 4] {
    [
        |_, p| [p[1], p[0], p[2]],
        |n, p| [n - p[1], n - p[0], p[2]],
        |n, p| [n - p[0], p[1], p[2]],
        |n, p| [p[0], n - p[1], p[2]],
    ]
}

/// A validated generator with all incidence data needed for subdivision.
#[derive(Debug, Clone)]
pub struct GeneratorComplex {
    n: i64,
    corners: Vec<[GridPoint; 4]>,
    embeddable: bool,
    pub(crate) cells: FaceComplexCells,
    /// `boundary_edges[side][m]` = (face, face side, direction agrees with
    /// the boundary parametrization), m = 0..N−1.
    pub(crate) boundary_edges: [Vec<(u32, u8, bool)>; 4],
    /// `boundary_vertices[side][u]` = faces/corners at boundary position u.
    pub(crate) boundary_vertices: [Vec<Vec<(u32, u8)>>; 4],
    /// For each corner q of [0,1]² (same order as face corners): the unique
    /// face touching it and its touching corner index.
    pub(crate) corner_children: [(u32, u8); 4],
}

impl GeneratorComplex {
    pub fn n(&self) -> i64 {
        self.n
    }

    /// Number of faces M (= degree of the associated rational map).
    pub fn face_count(&self) -> usize {
        self.corners.len()
    }

    /// Whether `G ∩ ∂𝒫 = ∂[0,1]²` for the double pyramid 𝒫, i.e. the
    /// snowsphere embeds in ℝ³ without self-intersections.
    pub fn embeddable(&self) -> bool {
        self.embeddable
    }

    pub fn face_corner_points(&self, face: usize) -> [GridPoint; 4] {
        self.corners[face]
    }
}

/// log M / log N: the Hausdorff dimension of the snowsphere.
pub fn snowsphere_hausdorff_dim(generator: &GeneratorComplex) -> f64 {
    (generator.face_count() as f64).ln() / (generator.n as f64).ln()
}

/// Validate a raw spec against every clause of Definition def:generator and
/// assemble the incidence tables.
pub fn build_generator(spec: &GeneratorSpec) -> Result<GeneratorComplex, SnowcombError> {
    let n = spec.n;
    if n < 2 {
        return Err(SnowcombError::Grid(format!("N must be ≥ 2, got {n}")));
    }
    if spec.faces.is_empty() {
        return Err(SnowcombError::Grid("face list is empty".into()));
    }
    let corners: Vec<[GridPoint; 4]> = spec
        .faces
        .iter()
        .map(|f| face_corners(f.anchor, f.axes))
        .collect();
    let mut keys: Vec<[GridPoint; 4]> = corners
        .iter()
        .map(|c| {
            let mut k = *c;
            k.sort_unstable();
            k
        })
        .collect();
    let face_set: std::collections::BTreeSet<[GridPoint; 4]> = keys.iter().copied().collect();
    keys.sort_unstable();
    keys.dedup();
    if keys.len() != corners.len() {
        return Err(SnowcombError::Grid("duplicate faces".into()));
    }

    let analysis = analyze_faces(&corners)?;

    // Boundary clause: the free edges must be exactly the 4N unit edges of
    // ∂[0,1]².
    let mut expected = BTreeMap::new();
    for side in 0..4 {
        for m in 0..n {
            let key = edge_key(boundary_point(n, side, m), boundary_point(n, side, m + 1));
            expected.insert(key, (side, m));
        }
    }
    for key in analysis.boundary_edges.keys() {
        if !expected.contains_key(key) {
            return Err(SnowcombError::Boundary(format!(
                "free edge {:?}-{:?} off ∂[0,1]²",
                key.0, key.1
            )));
        }
    }
    if analysis.boundary_edges.len() != expected.len() {
        return Err(SnowcombError::Boundary(format!(
            "boundary has {} free edges, expected {}",
            analysis.boundary_edges.len(),
            expected.len()
        )));
    }

    // Disk clause: connected through shared edges, Euler characteristic
    // V − E + F = 1, and every vertex link connected (no pinch points).
    let f_count = corners.len();
    let mut dsu = Dsu::new(f_count);
    for g in &analysis.cells.glues {
        dsu.union(g.a as usize, g.b as usize);
    }
    if (0..f_count).any(|i| dsu.find(i) != dsu.find(0)) {
        return Err(SnowcombError::Disk("face complex is not edge-connected".into()));
    }
    let euler =
        analysis.vertex_map.len() as i64 - analysis.edge_count as i64 + f_count as i64;
    if euler != 1 {
        return Err(SnowcombError::Disk(format!(
            "Euler characteristic V−E+F = {euler}, expected 1"
        )));
    }
    for (point, inc) in &analysis.vertex_map {
        if !link_connected(&corners, point, inc) {
            return Err(SnowcombError::Disk(format!(
                "pinched vertex at {point:?}"
            )));
        }
    }

    // Symmetry clause: invariance under the four reflections.
    for (i, refl) in reflections(n).iter().enumerate() {
        for cs in &corners {
            let mut image: [GridPoint; 4] = cs.map(|p| refl(n, p));
            image.sort_unstable();
            if !face_set.contains(&image) {
                return Err(SnowcombError::Symmetry(format!(
                    "reflection #{i} does not preserve the face set"
                )));
            }
        }
    }

    // Corner clause: exactly one face meets each corner of [0,1]².
    let corner_points = [[0, 0, 0], [n, 0, 0], [n, n, 0], [0, n, 0]];
    let mut corner_children = [(0u32, 0u8); 4];
    for (q, &cp) in corner_points.iter().enumerate() {
        let inc = analysis.vertex_map.get(&cp).map(Vec::as_slice).unwrap_or(&[]);
        if inc.len() != 1 {
            return Err(SnowcombError::Corner(format!(
                "{} faces meet corner {cp:?}, expected exactly 1",
                inc.len()
            )));
        }
        corner_children[q] = inc[0];
    }

    // Embeddability flag: every vertex inside the double pyramid, touching
    // its boundary only along ∂[0,1]².
    let mut embeddable = true;
    for point in analysis.vertex_map.keys() {
        let f = (2 * point[0] - n).abs().max((2 * point[1] - n).abs()) + 2 * point[2].abs();
        let on_boundary_square =
            point[2] == 0 && (point[0] % n == 0 || point[1] % n == 0) && {
                let inside = |c: i64| (0..=n).contains(&c);
                inside(point[0]) && inside(point[1]) && (point[0] % n == 0 || point[1] % n == 0)
            };
        if f > n || (f == n && !on_boundary_square) {
            embeddable = false;
        }
    }

    // Boundary tables for subdivision.
    let mut boundary_edges: [Vec<(u32, u8, bool)>; 4] = Default::default();
    let mut boundary_vertices: [Vec<Vec<(u32, u8)>>; 4] = Default::default();
    for side in 0..4 {
        for m in 0..n {
            let a = boundary_point(n, side, m);
            let b = boundary_point(n, side, m + 1);
            let key = edge_key(a, b);
            let (face, fside, starts_at_min) = analysis.boundary_edges[&key];
            // Direction agrees with the boundary parametrization iff the
            // face side starts at the point of smaller position m.
            let dir = starts_at_min == (a == key.0);
            boundary_edges[side].push((face, fside, dir));
        }
        for u in 0..=n {
            let p = boundary_point(n, side, u);
            boundary_vertices[side]
                .push(analysis.vertex_map.get(&p).cloned().unwrap_or_default());
        }
    }

    Ok(GeneratorComplex {
        n,
        corners,
        embeddable,
        cells: analysis.cells,
        boundary_edges,
        boundary_vertices,
        corner_children,
    })
}

/// Are the faces around `point` connected through edges incident to it?
fn link_connected(
    corners: &[[GridPoint; 4]],
    point: &GridPoint,
    inc: &[(u32, u8)],
) -> bool {
    if inc.len() <= 1 {
        return true;
    }
    let mut dsu = Dsu::new(inc.len());
    for i in 0..inc.len() {
        for j in i + 1..inc.len() {
            let (fi, fj) = (inc[i].0 as usize, inc[j].0 as usize);
            // Shared edge through `point`: both faces contain another common
            // grid point adjacent to `point` along one of their sides.
            let shares = SIDE_CORNERS.iter().any(|&(s, e)| {
                let (a, b) = (corners[fi][s], corners[fi][e]);
                let other = if a == *point {
                    Some(b)
                } else if b == *point {
                    Some(a)
                } else {
                    None
                };
                other.is_some_and(|o| {
                    SIDE_CORNERS.iter().any(|&(s2, e2)| {
                        let (c, d) = (corners[fj][s2], corners[fj][e2]);
                        (c == *point && d == o) || (d == *point && c == o)
                    })
                })
            });
            if shares {
                dsu.union(i, j);
            }
        }
    }
    (0..inc.len()).all(|i| dsu.find(i) == dsu.find(0))
}

/// Minimal union-find.
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Bundled generator files.
pub const BUNDLED: &[&str] = &["trivial_5", "main_29", "cube3_13"];

pub fn bundled(name: &str) -> Result<GeneratorSpec, SnowcombError> {
    let text = match name {
        "trivial_5" => include_str!("../../data/trivial_5.json"),
        "main_29" => include_str!("../../data/main_29.json"),
        "cube3_13" => include_str!("../../data/cube3_13.json"),
        other => {
            return Err(SnowcombError::Grid(format!(
                "unknown bundled generator {other:?} (available: {BUNDLED:?})"
            )))
        }
    };
    GeneratorSpec::from_json(text)
}

/// Resolve a name-or-path the way the CLI does: an existing file wins,
/// otherwise the bundled catalog is consulted.
pub fn resolve(name_or_path: &str) -> Result<GeneratorSpec, SnowcombError> {
    let path = std::path::Path::new(name_or_path);
    if path.exists() {
        GeneratorSpec::from_file(path)
    } else {
        bundled(name_or_path.trim_end_matches(".json"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(n: i64, skip: &[(i64, i64)]) -> Vec<FaceSpec> {
        let mut faces = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if skip.contains(&(x, y)) {
                    continue;
                }
                faces.push(FaceSpec { anchor: [x, y, 0], axes: AxisPair::Xy });
            }
        }
        faces
    }

    fn cap(x: i64, y: i64, z: i64) -> Vec<FaceSpec> {
        vec![
            FaceSpec { anchor: [x, y, z], axes: AxisPair::Yz },
            FaceSpec { anchor: [x + 1, y, z], axes: AxisPair::Yz },
            FaceSpec { anchor: [x, y, z], axes: AxisPair::Xz },
            FaceSpec { anchor: [x, y + 1, z], axes: AxisPair::Xz },
            FaceSpec { anchor: [x, y, z + 1], axes: AxisPair::Xy },
        ]
    }

    #[test]
    fn trivial_flat_generator_is_valid_and_embeddable() {
        let spec = GeneratorSpec { n: 5, faces: flat(5, &[]) };
        let g = build_generator(&spec).unwrap();
        assert_eq!(g.face_count(), 25);
        assert!(g.embeddable());
        assert!((snowsphere_hausdorff_dim(&g) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn main_example_has_29_faces() {
        let g = build_generator(&bundled("main_29").unwrap()).unwrap();
        assert_eq!(g.face_count(), 29);
        assert!(g.embeddable());
        assert!((snowsphere_hausdorff_dim(&g) - 29f64.ln() / 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn bundled_files_all_validate() {
        for name in BUNDLED {
            let g = build_generator(&bundled(name).unwrap()).unwrap();
            assert!(g.face_count() >= 9, "{name}");
        }
    }

    #[test]
    fn cube3_has_13_faces() {
        let g = build_generator(&bundled("cube3_13").unwrap()).unwrap();
        assert_eq!(g.face_count(), 13);
        assert_eq!(g.n(), 3);
        assert!((snowsphere_hausdorff_dim(&g) - 13f64.ln() / 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn corner_violation_is_reported() {
        // Caps on all four corner squares: symmetric and disk-like, but the
        // wall squares make two faces meet each corner of [0,1]².
        let corners = [(0, 0), (4, 0), (4, 4), (0, 4)];
        let mut faces = flat(5, &corners);
        for (x, y) in corners {
            faces.extend(cap(x, y, 0));
        }
        let err = build_generator(&GeneratorSpec { n: 5, faces }).unwrap_err();
        assert!(matches!(err, SnowcombError::Corner(_)), "{err}");
    }

    #[test]
    fn boundary_violation_is_reported() {
        // Missing edge square: a free edge appears off ∂[0,1]².
        let spec = GeneratorSpec { n: 5, faces: flat(5, &[(1, 1)]) };
        let err = build_generator(&spec).unwrap_err();
        assert!(matches!(err, SnowcombError::Boundary(_)), "{err}");
    }

    #[test]
    fn symmetry_violation_is_reported() {
        // Off-center cap (N=5, cap over (1,1)): breaks every reflection.
        let mut faces = flat(5, &[(1, 1)]);
        faces.extend(cap(1, 1, 0));
        let err = build_generator(&GeneratorSpec { n: 5, faces }).unwrap_err();
        assert!(matches!(err, SnowcombError::Symmetry(_)), "{err}");
    }

    #[test]
    fn disk_violation_is_reported() {
        // Cap plus its base square: the base edges get three incident faces.
        let mut faces = flat(5, &[]);
        faces.extend(cap(2, 2, 0));
        let err = build_generator(&GeneratorSpec { n: 5, faces }).unwrap_err();
        assert!(matches!(err, SnowcombError::Disk(_)), "{err}");
    }

    #[test]
    fn grid_violation_is_reported() {
        let mut faces = flat(5, &[]);
        faces.push(FaceSpec { anchor: [0, 0, 0], axes: AxisPair::Xy });
        let err = build_generator(&GeneratorSpec { n: 5, faces }).unwrap_err();
        assert!(matches!(err, SnowcombError::Grid(_)), "{err}");
    }

    #[test]
    fn deep_cap_is_valid_but_not_embeddable() {
        // A 2-level tower over the middle square of a 5×5 grid leaves the
        // double pyramid.
        let mut faces = flat(5, &[(2, 2)]);
        faces.extend(cap(2, 2, 0).into_iter().filter(|f| f.anchor[2] == 0 || f.axes != AxisPair::Xy));
        // walls up to z=2 plus top at z=2
        faces.push(FaceSpec { anchor: [2, 2, 1], axes: AxisPair::Yz });
        faces.push(FaceSpec { anchor: [3, 2, 1], axes: AxisPair::Yz });
        faces.push(FaceSpec { anchor: [2, 2, 1], axes: AxisPair::Xz });
        faces.push(FaceSpec { anchor: [2, 3, 1], axes: AxisPair::Xz });
        faces.push(FaceSpec { anchor: [2, 2, 2], axes: AxisPair::Xy });
        let g = build_generator(&GeneratorSpec { n: 5, faces }).unwrap();
        assert!(!g.embeddable());
    }
}
