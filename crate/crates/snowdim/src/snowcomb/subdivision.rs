//! Iterated subdivision 𝒮₀ → 𝒮₁ → … : every face of the base complex is
//! replaced by a copy of the generator, recursively.
//!
//! Cylinders are addressed densely: the children of cylinder `p` at level j
//! are `p·M + c` for c = 0..M at level j+1, so no per-cylinder storage is
//! needed beyond the incidence structure. Gluing across parent edges matches
//! the N sub-edges in order, with orientation resolved from each face side's
//! parametrization direction.

use super::generator::{
    analyze_faces, face_corners, AxisPair, Dsu, EdgeGlue, FaceComplexCells, GeneratorComplex,
};
use super::{SnowcombError, CYLINDER_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    /// The boundary of the unit cube: 6 base faces.
    Cube,
    /// A single square with free boundary.
    SingleFace,
}

/// Incidence data of one subdivision level.
#[derive(Debug, Clone)]
pub(crate) struct LevelComplex {
    pub face_count: usize,
    pub glues: Vec<EdgeGlue>,
    pub vertex_classes: Vec<Vec<(u32, u8)>>,
    /// `adjacency[i]` = sorted cylinders sharing an edge or a vertex with i.
    pub adjacency: Vec<Vec<u32>>,
}

/// The subdivision complex 𝒮₀ … 𝒮_jmax for one generator and base.
#[derive(Debug)]
pub struct SubdivisionComplex {
    generator: GeneratorComplex,
    base: BaseKind,
    levels: Vec<LevelComplex>,
}

fn adjacency_from_classes(face_count: usize, classes: &[Vec<(u32, u8)>]) -> Vec<Vec<u32>> {
    let mut adjacency = vec![Vec::new(); face_count];
    for class in classes {
        let mut faces: Vec<u32> = class.iter().map(|&(f, _)| f).collect();
        faces.sort_unstable();
        faces.dedup();
        for (i, &a) in faces.iter().enumerate() {
            for &b in &faces[i + 1..] {
                adjacency[a as usize].push(b);
                adjacency[b as usize].push(a);
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }
    adjacency
}

fn level_from_cells(face_count: usize, cells: FaceComplexCells) -> LevelComplex {
    let adjacency = adjacency_from_classes(face_count, &cells.vertex_classes);
    LevelComplex {
        face_count,
        glues: cells.glues,
        vertex_classes: cells.vertex_classes,
        adjacency,
    }
}

fn base_level(base: BaseKind) -> Result<LevelComplex, SnowcombError> {
    let faces: Vec<[[i64; 3]; 4]> = match base {
        BaseKind::SingleFace => vec![face_corners([0, 0, 0], AxisPair::Xy)],
        BaseKind::Cube => vec![
            face_corners([0, 0, 0], AxisPair::Xy),
            face_corners([0, 0, 1], AxisPair::Xy),
            face_corners([0, 0, 0], AxisPair::Xz),
            face_corners([0, 1, 0], AxisPair::Xz),
            face_corners([0, 0, 0], AxisPair::Yz),
            face_corners([1, 0, 0], AxisPair::Yz),
        ],
    };
    let analysis = analyze_faces(&faces)?;
    Ok(level_from_cells(faces.len(), analysis.cells))
}

fn subdivide_level(
    prev: &LevelComplex,
    g: &GeneratorComplex,
) -> Result<LevelComplex, SnowcombError> {
    let m = g.face_count();
    let n = g.n() as usize;
    let face_count = prev.face_count * m;
    if face_count > CYLINDER_BUDGET {
        return Err(SnowcombError::BudgetExceeded(face_count, CYLINDER_BUDGET));
    }

    let mut glues =
        Vec::with_capacity(prev.face_count * g.cells.glues.len() + prev.glues.len() * n);
    for p in 0..prev.face_count as u32 {
        let off = p * m as u32;
        for gl in &g.cells.glues {
            glues.push(EdgeGlue {
                a: off + gl.a,
                a_side: gl.a_side,
                b: off + gl.b,
                b_side: gl.b_side,
                reversed: gl.reversed,
            });
        }
    }
    for gl in &prev.glues {
        let (off_a, off_b) = (gl.a * m as u32, gl.b * m as u32);
        for k in 0..n {
            let (fa, sa, da) = g.boundary_edges[gl.a_side as usize][k];
            let k2 = if gl.reversed { n - 1 - k } else { k };
            let (fb, sb, db) = g.boundary_edges[gl.b_side as usize][k2];
            // Side parametrizations meet reversed iff an odd number of the
            // three orientation flips (face-vs-boundary on each side, plus
            // the parent reversal) is active.
            glues.push(EdgeGlue {
                a: off_a + fa,
                a_side: sa,
                b: off_b + fb,
                b_side: sb,
                reversed: da ^ gl.reversed ^ db,
            });
        }
    }

    // Vertex identification: within-parent classes, matched boundary
    // vertices across parent glues, and parent vertex classes propagated to
    // the unique corner child.
    let entry = |face: u32, corner: u8| face as usize * 4 + corner as usize;
    let mut dsu = Dsu::new(face_count * 4);
    let union_list = |dsu: &mut Dsu, off: u32, list: &[(u32, u8)], anchor: Option<usize>| {
        let mut anchor = anchor;
        for &(f, c) in list {
            let e = entry(off + f, c);
            if let Some(a) = anchor {
                dsu.union(a, e);
            }
            anchor = Some(e);
        }
        anchor
    };
    for p in 0..prev.face_count as u32 {
        let off = p * m as u32;
        for class in &g.cells.vertex_classes {
            union_list(&mut dsu, off, class, None);
        }
    }
    for gl in &prev.glues {
        let (off_a, off_b) = (gl.a * m as u32, gl.b * m as u32);
        for u in 0..=n {
            let u2 = if gl.reversed { n - u } else { u };
            let a = union_list(
                &mut dsu,
                off_a,
                &g.boundary_vertices[gl.a_side as usize][u],
                None,
            );
            union_list(&mut dsu, off_b, &g.boundary_vertices[gl.b_side as usize][u2], a);
        }
    }
    for class in &prev.vertex_classes {
        let mut anchor = None;
        for &(pf, pc) in class {
            let (cf, cc) = g.corner_children[pc as usize];
            anchor = union_list(&mut dsu, pf * m as u32, &[(cf, cc)], anchor);
        }
    }

    let mut roots: std::collections::HashMap<usize, u32> = std::collections::HashMap::new();
    let mut vertex_classes: Vec<Vec<(u32, u8)>> = Vec::new();
    for f in 0..face_count as u32 {
        for c in 0..4u8 {
            let r = dsu.find(entry(f, c));
            let idx = *roots.entry(r).or_insert_with(|| {
                vertex_classes.push(Vec::new());
                (vertex_classes.len() - 1) as u32
            });
            vertex_classes[idx as usize].push((f, c));
        }
    }

    let adjacency = adjacency_from_classes(face_count, &vertex_classes);
    Ok(LevelComplex { face_count, glues, vertex_classes, adjacency })
}

impl SubdivisionComplex {
    /// Build levels 0..=`max_level`. Construction is single-threaded; the
    /// finished levels are read-only and safe to query concurrently.
    pub fn new(
        generator: GeneratorComplex,
        base: BaseKind,
        max_level: usize,
    ) -> Result<Self, SnowcombError> {
        let mut levels = vec![base_level(base)?];
        for _ in 0..max_level {
            let next = subdivide_level(levels.last().unwrap(), &generator)?;
            levels.push(next);
        }
        Ok(SubdivisionComplex { generator, base, levels })
    }

    pub fn generator(&self) -> &GeneratorComplex {
        &self.generator
    }

    pub fn base(&self) -> BaseKind {
        self.base
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub(crate) fn level(&self, j: usize) -> Result<&LevelComplex, SnowcombError> {
        self.levels
            .get(j)
            .ok_or(SnowcombError::LevelUnavailable(j, self.max_level()))
    }

    /// Number of j-cylinders (= base count · M^j).
    pub fn cylinder_count(&self, j: usize) -> Result<usize, SnowcombError> {
        Ok(self.level(j)?.face_count)
    }

    /// Sorted neighbors (edge- or vertex-touching) of each j-cylinder.
    pub fn adjacency(&self, j: usize) -> Result<&[Vec<u32>], SnowcombError> {
        Ok(&self.level(j)?.adjacency)
    }

    /// Vertex classes of level j as `(cylinder, corner)` incidence lists.
    pub fn vertex_classes(&self, j: usize) -> Result<&[Vec<(u32, u8)>], SnowcombError> {
        Ok(&self.level(j)?.vertex_classes)
    }
}

#[cfg(test)]
mod tests {
    use super::super::generator::{build_generator, bundled, GeneratorSpec};
    use super::*;
    use std::collections::BTreeMap;

    fn complex(name: &str, base: BaseKind, level: usize) -> SubdivisionComplex {
        let g = build_generator(&bundled(name).unwrap()).unwrap();
        SubdivisionComplex::new(g, base, level).unwrap()
    }

    #[test]
    fn cube_level0_is_the_cube() {
        let c = complex("trivial_5", BaseKind::Cube, 0);
        assert_eq!(c.cylinder_count(0).unwrap(), 6);
        let adj = c.adjacency(0).unwrap();
        // Every cube face touches the four others sharing an edge and, via
        // corners, also the opposite face? No: opposite faces share nothing.
        for (i, list) in adj.iter().enumerate() {
            assert_eq!(list.len(), 4, "face {i}: {list:?}");
            let opposite = (i ^ 1) as u32;
            assert!(!list.contains(&opposite));
        }
    }

    #[test]
    fn cylinder_counts_are_exact() {
        let c = complex("main_29", BaseKind::Cube, 2);
        assert_eq!(c.cylinder_count(0).unwrap(), 6);
        assert_eq!(c.cylinder_count(1).unwrap(), 6 * 29);
        assert_eq!(c.cylinder_count(2).unwrap(), 6 * 29 * 29);
        let s = complex("trivial_5", BaseKind::SingleFace, 1);
        assert_eq!(s.cylinder_count(1).unwrap(), 25);
    }

    #[test]
    fn adjacency_is_symmetric_and_irreflexive() {
        let c = complex("main_29", BaseKind::Cube, 2);
        for j in 0..=2 {
            let adj = c.adjacency(j).unwrap();
            for (i, list) in adj.iter().enumerate() {
                for &b in list {
                    assert_ne!(b as usize, i);
                    assert!(adj[b as usize].contains(&(i as u32)));
                }
            }
        }
    }

    #[test]
    fn flat_subdivision_matches_grid_adjacency() {
        // Trivial generator on a single face: level 1 is a 5×5 grid whose
        // adjacency (including diagonal, via shared vertices) is the king
        // graph.
        let c = complex("trivial_5", BaseKind::SingleFace, 1);
        let g = c.generator();
        let pos: Vec<[i64; 3]> = (0..g.face_count())
            .map(|f| g.face_corner_points(f)[0])
            .collect();
        let adj = c.adjacency(1).unwrap();
        for a in 0..25 {
            for b in 0..25 {
                if a == b {
                    continue;
                }
                let touching = (pos[a][0] - pos[b][0]).abs() <= 1
                    && (pos[a][1] - pos[b][1]).abs() <= 1;
                assert_eq!(adj[a].contains(&(b as u32)), touching, "{a} {b}");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = build_generator(&bundled("main_29").unwrap()).unwrap();
        let err = SubdivisionComplex::new(g, BaseKind::Cube, 5).unwrap_err();
        assert!(matches!(err, SnowcombError::BudgetExceeded(_, _)), "{err}");
    }

    /// Exact geometric corner coordinates of every level-2 cylinder, tracked
    /// through per-face frames (origin = corner 0, unit axes from the corner
    /// order, normal = e1 × e2). Scale at level j is N^j.
    fn geometric_keys(c: &SubdivisionComplex, level: usize) -> BTreeMap<(usize, [[i64; 3]; 4]), usize> {
        let g = c.generator();
        let n = g.n();
        // frames[j][cyl] = corner points in the base-face frame at scale N^j.
        let base_count = c.cylinder_count(0).unwrap();
        let mut frames: Vec<Vec<(usize, [[i64; 3]; 4])>> = vec![(0..base_count)
            .map(|b| {
                (
                    b,
                    [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]],
                )
            })
            .collect()];
        for _ in 0..level {
            let prev = frames.last().unwrap();
            let mut next = Vec::with_capacity(prev.len() * g.face_count());
            for &(b, ps) in prev {
                let sub = |a: [i64; 3], bb: [i64; 3]| [bb[0] - a[0], bb[1] - a[1], bb[2] - a[2]];
                let e1 = sub(ps[0], ps[1]);
                let e2 = sub(ps[0], ps[3]);
                let e3 = [
                    e1[1] * e2[2] - e1[2] * e2[1],
                    e1[2] * e2[0] - e1[0] * e2[2],
                    e1[0] * e2[1] - e1[1] * e2[0],
                ];
                for f in 0..g.face_count() {
                    let mut out = [[0i64; 3]; 4];
                    for (k, q) in g.face_corner_points(f).iter().enumerate() {
                        for d in 0..3 {
                            out[k][d] = n * ps[0][d] + q[0] * e1[d] + q[1] * e2[d] + q[2] * e3[d];
                        }
                    }
                    next.push((b, out));
                }
            }
            frames.push(next);
        }
        frames[level]
            .iter()
            .enumerate()
            .map(|(i, &(b, mut ps))| {
                ps.sort_unstable();
                ((b, ps), i)
            })
            .collect()
    }

    #[test]
    fn combinatorial_adjacency_matches_geometry_within_base_faces() {
        let c = complex("main_29", BaseKind::SingleFace, 2);
        let keys = geometric_keys(&c, 2);
        let corners: BTreeMap<usize, [[i64; 3]; 4]> =
            keys.iter().map(|(&(_, ps), &i)| (i, ps)).collect();
        let adj = c.adjacency(2).unwrap();
        let count = c.cylinder_count(2).unwrap();
        for a in 0..count {
            for b in a + 1..count {
                let share = corners[&a].iter().any(|p| corners[&b].contains(p));
                let listed = adj[a].contains(&(b as u32));
                assert_eq!(listed, share, "cylinders {a} {b}");
            }
        }
    }

    fn assert_isomorphic_at_level1(spec: &GeneratorSpec, rerolled: &GeneratorSpec) {
        let a = SubdivisionComplex::new(build_generator(spec).unwrap(), BaseKind::Cube, 1).unwrap();
        let b =
            SubdivisionComplex::new(build_generator(rerolled).unwrap(), BaseKind::Cube, 1).unwrap();
        let keys_a = geometric_keys(&a, 1);
        let keys_b = geometric_keys(&b, 1);
        assert_eq!(keys_a.len(), a.cylinder_count(1).unwrap(), "duplicate geometry");
        // Bijection b-cylinder → a-cylinder through identical geometry.
        let mut map = vec![usize::MAX; keys_b.len()];
        for (key, &ib) in &keys_b {
            map[ib] = *keys_a.get(key).expect("cylinder sets differ");
        }
        let (adj_a, adj_b) = (a.adjacency(1).unwrap(), b.adjacency(1).unwrap());
        for (ib, list) in adj_b.iter().enumerate() {
            let mut image: Vec<u32> = list.iter().map(|&x| map[x as usize] as u32).collect();
            image.sort_unstable();
            assert_eq!(image, adj_a[map[ib]], "neighborhood mismatch at {ib}");
        }
    }

    #[test]
    fn orientation_choice_gives_isomorphic_complex() {
        // Re-roll the per-copy orientation by feeding in the generator with
        // its chart rotated by π/2 (and, separately, reflected across x = y):
        // both preserve the face set but permute face indices and flip the
        // side parametrizations, so the cross-copy boundary matching runs
        // through entirely different table entries. The resulting complexes
        // must be isomorphic under the geometric cylinder correspondence.
        use super::super::generator::FaceSpec;
        let spec = bundled("main_29").unwrap();
        let n = spec.n;
        let rotated = GeneratorSpec {
            n,
            faces: spec
                .faces
                .iter()
                .map(|f| {
                    let [x, y, z] = f.anchor;
                    match f.axes {
                        AxisPair::Xy => FaceSpec { anchor: [n - y - 1, x, z], axes: AxisPair::Xy },
                        AxisPair::Xz => FaceSpec { anchor: [n - y, x, z], axes: AxisPair::Yz },
                        AxisPair::Yz => FaceSpec { anchor: [n - y - 1, x, z], axes: AxisPair::Xz },
                    }
                })
                .collect(),
        };
        let reflected = GeneratorSpec {
            n,
            faces: spec
                .faces
                .iter()
                .map(|f| {
                    let [x, y, z] = f.anchor;
                    match f.axes {
                        AxisPair::Xy => FaceSpec { anchor: [y, x, z], axes: AxisPair::Xy },
                        AxisPair::Xz => FaceSpec { anchor: [y, x, z], axes: AxisPair::Yz },
                        AxisPair::Yz => FaceSpec { anchor: [y, x, z], axes: AxisPair::Xz },
                    }
                })
                .collect(),
        };
        assert_isomorphic_at_level1(&spec, &rotated);
        assert_isomorphic_at_level1(&spec, &reflected);
    }
}
