//! Face-count identity, face colorings and branch sets of defining faces, and
//! the structural invariants of proper Hamiltonian C(n, k)-subcomplexes.

use std::sync::Arc;

use serde::Serialize;

use super::{is_hamiltonian, HamiltonianSubcomplex};
use crate::coloring::{canonical_induced, VectorColoring};
use crate::complex::{ComplexFace, Region};
use crate::error::{Error, Result};
use crate::gf2::{self, BitVector};
use crate::homology::{betti, quotient_betti, BettiVector};
use crate::polytope::{FacetSet, SimplePolytope, UnionFind};

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn established_kind(h: &HamiltonianSubcomplex) -> Result<usize> {
    if !h.is_proper() {
        return Err(Error::Hypothesis("subcomplex is not proper".into()));
    }
    h.kind().ok_or_else(|| Error::Hypothesis("coarse complex not established as C(n, k)".into()))
}

fn on_boundary(h: &HamiltonianSubcomplex) -> bool {
    h.ambient().num_facets() == h.ambient().polytope().num_facets()
}

/// C1 k-faces lying in `m`; the face itself for k = dim m.
fn faces_in(h: &HamiltonianSubcomplex, m: &ComplexFace, k: usize) -> Vec<usize> {
    if k > m.dim {
        return Vec::new();
    }
    h.ambient().faces(k).iter().enumerate().filter(|(_, g)| g.lies_in(m)).map(|(i, _)| i).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FVectorRow {
    pub k: usize,
    pub ambient: usize,
    pub coarse: usize,
    /// C(r, n − k) + δ_{r,n}δ_{k,0}, the face count of C(n, r).
    pub model: usize,
    /// Σ_q f_k(M_q) + f_{k−1}(M_q).
    pub defining_sum: usize,
    /// δ_{r,n−1}δ_{k,1}
    pub circle_correction: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FVectorReport {
    pub rows: Vec<FVectorRow>,
    pub defining_count: usize,
    pub expected_defining_count: usize,
    /// Every C1 vertex is a coarse vertex or lies in exactly one defining face.
    pub vertex_partition: bool,
    pub holds: bool,
}

/// f_k(C1) = f_k(C2) − δ_{r,n−1}δ_{k,1} + Σ_q (f_k(M_q) + f_{k−1}(M_q)) with
/// f_k(C2) = C(r, n − k) + δ_{r,n}δ_{k,0}, for 0 ≤ k ≤ n − 1.
pub fn fvector_identity_check(h: &HamiltonianSubcomplex) -> Result<FVectorReport> {
    let r = established_kind(h)?;
    let n = h.ambient().dim();
    let c1 = h.ambient();
    let c2 = h.coarse();
    let per_face: Vec<Vec<usize>> = h
        .defining_faces()
        .iter()
        .map(|m| (0..n).map(|k| faces_in(h, m, k).len()).collect())
        .collect();
    let mut rows = Vec::new();
    for k in 0..n {
        let defining_sum: usize =
            per_face.iter().map(|f| f[k] + if k > 0 { f[k - 1] } else { 0 }).sum();
        let circle_correction = usize::from(r + 1 == n && k == 1);
        let model = binomial(r, n - k) + usize::from(r == n && k == 0);
        let ambient = c1.faces(k).len();
        let coarse = c2.faces(k).len();
        let holds = coarse == model && ambient + circle_correction == coarse + defining_sum;
        rows.push(FVectorRow { k, ambient, coarse, model, defining_sum, circle_correction, holds });
    }
    let mut vertex_partition = c2.faces(0).len() == super::vertex_budget(n, r);
    for v in c1.faces(0) {
        let in_coarse = c2.faces(0).iter().any(|w| w.p_faces == v.p_faces);
        let hits = h.defining_faces().iter().filter(|m| v.lies_in(m)).count();
        vertex_partition &= usize::from(in_coarse) + hits == 1;
    }
    let defining_count = h.defining_faces().len();
    let expected_defining_count = c1.num_facets() - r;
    let holds = rows.iter().all(|x| x.holds) && vertex_partition && defining_count == expected_defining_count;
    Ok(FVectorReport { rows, defining_count, expected_defining_count, vertex_partition, holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceColoring {
    /// Position in the defining-face list.
    pub face: usize,
    /// Indices into `ambient.faces(n − 3)` of the facets of the face.
    pub facets: Vec<usize>,
    /// The coarse facet meeting each of them.
    pub colors: Vec<usize>,
    pub colors_used: usize,
    /// For k = n − 1 on ∂P: every 2-face of the defining face is even-gonal.
    pub even_gons: Option<bool>,
}

fn even_gonal(p: &SimplePolytope, m: FacetSet) -> bool {
    p.faces_of_dim(2)
        .into_iter()
        .filter(|t| m.is_subset(*t))
        .all(|t| p.face_vertices(t).unwrap().count_ones() % 2 == 0)
}

/// Colors each facet of each defining face by the coarse facet it comes
/// from; the coloring must be proper and use at most r − 1 colors.
pub fn defining_face_coloring(h: &HamiltonianSubcomplex) -> Result<Vec<FaceColoring>> {
    let r = established_kind(h)?;
    let n = h.ambient().dim();
    let c1 = h.ambient();
    let mut out = Vec::new();
    for (q, m) in h.defining_faces().iter().enumerate() {
        let (a, b) = (m.facet_ids[0], m.facet_ids[1]);
        let home = h.coarsening()[a];
        let facets = if n >= 3 { faces_in(h, m, n - 3) } else { Vec::new() };
        let mut colors = Vec::new();
        for &g in &facets {
            let face = &c1.faces(n - 3)[g];
            let third: Vec<usize> = face.facet_ids.iter().copied().filter(|&x| x != a && x != b).collect();
            if third.len() != 1 {
                return Err(Error::Invariant(format!("facet {g} of defining face {q} is not cut by a single facet")));
            }
            let color = h.coarsening()[third[0]];
            if color == home {
                return Err(Error::Invariant(format!("facet {g} of defining face {q} is cut by its own coarse facet")));
            }
            colors.push(color);
        }
        for x in 0..facets.len() {
            for y in x + 1..facets.len() {
                let (fx, fy) = (&c1.faces(n - 3)[facets[x]], &c1.faces(n - 3)[facets[y]]);
                if fx.meets(fy) && colors[x] == colors[y] {
                    return Err(Error::Invariant(format!(
                        "meeting facets {} and {} of defining face {q} share color {}",
                        facets[x], facets[y], colors[x]
                    )));
                }
            }
        }
        let mut used = colors.clone();
        used.sort();
        used.dedup();
        if used.len() + 1 > r {
            return Err(Error::Invariant(format!("defining face {q} needs {} colors, more than r - 1", used.len())));
        }
        let even_gons = (r + 1 == n && on_boundary(h)).then(|| even_gonal(c1.polytope(), m.p_faces[0]));
        out.push(FaceColoring { face: q, facets, colors, colors_used: used.len(), even_gons });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct BranchComponent {
    pub face: usize,
    pub p_face: FacetSet,
    /// Number of copies of N(M, Λ_M) over this face.
    pub multiplicity: u64,
    pub v_dim: usize,
    pub face_coloring: VectorColoring,
    pub betti: BettiVector,
    /// Facets of M lie in pairwise different coarse facets.
    pub distinct_coarse: bool,
    /// 2^{k−1−m_F} copies of RZ_M, when `distinct_coarse`.
    pub free_multiplicity: Option<u64>,
    pub free_betti: Option<BettiVector>,
}

impl BranchComponent {
    /// The general count agrees with the free-case count wherever the latter applies.
    pub fn consistent(&self) -> bool {
        self.free_multiplicity.map_or(true, |m| m == self.multiplicity)
            && self.free_betti.as_ref().map_or(true, |b| b == &self.betti)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "face": self.face,
            "p_face": self.p_face,
            "multiplicity": self.multiplicity,
            "v_dim": self.v_dim,
            "betti": self.betti,
            "face_coloring": self.face_coloring.to_json_value(),
            "distinct_coarse": self.distinct_coarse,
            "free_multiplicity": self.free_multiplicity,
            "free_betti": self.free_betti,
        })
    }
}

/// Preimage of each defining face in N(P, Λ̃_C) → N(P, Λ̃_C)/τ.
pub fn branch_set(h: &HamiltonianSubcomplex) -> Result<Vec<BranchComponent>> {
    let k = established_kind(h)?;
    if !on_boundary(h) {
        return Err(Error::Hypothesis("branch sets need the ambient complex ∂P".into()));
    }
    let p = h.ambient().polytope();
    if p.dim() < 3 {
        return Err(Error::InvalidDimension(format!("branch sets need n ≥ 3, got {}", p.dim())));
    }
    let lam = canonical_induced(h)?;
    let rank = lam.rank();
    let class = |j: usize| h.coarsening()[h.ambient().class_of()[j]];
    let mut out = Vec::new();
    for (q, m) in h.defining_faces().iter().enumerate() {
        let s = m.p_faces[0];
        let ab: Vec<usize> = s.to_vec();
        let (face, orig) = p.face_polytope(s)?;
        let sub = gf2::span_in(rank, &[lam.vectors()[ab[0]].clone(), lam.vectors()[ab[1]].clone()])?;
        let quot = gf2::quotient_basis(rank, &sub)?;
        let images: Vec<BitVector> = orig.iter().map(|&j| quot.apply(&lam.vectors()[j])).collect();
        let v = gf2::span_in(quot.target_len(), &images)?;
        let pivots = v.pivots();
        let coords: Vec<BitVector> = images
            .iter()
            .map(|x| BitVector::from_indices(pivots.len(), (0..pivots.len()).filter(|&i| x.get(pivots[i]))))
            .collect();
        let face = Arc::new(face);
        let face_coloring = VectorColoring::new(face.clone(), v.dim(), coords)?;
        let betti = quotient_betti(&face_coloring);
        let multiplicity = 1u64 << (rank - 2 - v.dim());
        let mut cls: Vec<usize> = orig.iter().map(|&j| class(j)).collect();
        cls.sort();
        cls.dedup();
        let distinct_coarse = cls.len() == orig.len();
        let (free_multiplicity, free_betti) = if distinct_coarse {
            let mf = orig.len();
            let mult = (k >= 1 + mf).then(|| 1u64 << (k - 1 - mf));
            (mult, Some(quotient_betti(&VectorColoring::identity(face))))
        } else {
            (None, None)
        };
        out.push(BranchComponent {
            face: q,
            p_face: s,
            multiplicity,
            v_dim: v.dim(),
            face_coloring,
            betti,
            distinct_coarse,
            free_multiplicity,
            free_betti,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StructuralReport {
    pub disjointness_agrees: bool,
    pub facet_graphs_are_trees: bool,
    pub face_graphs_are_trees: bool,
    pub circles_skipped: usize,
    pub defining_faces_are_full_intersections: bool,
    pub unique_containing_face: bool,
    pub untouched_faces_preserved: bool,
    pub defining_colorings_proper: bool,
    pub even_gons: Option<bool>,
    pub violations: Vec<String>,
}

impl StructuralReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn is_tree(nodes: usize, edges: &[(usize, usize)]) -> bool {
    if edges.len() + 1 != nodes {
        return false;
    }
    let mut uf = UnionFind::new(nodes);
    edges.iter().all(|&(a, b)| uf.union(a, b))
}

/// Runs every structural invariant of a proper Hamiltonian C(n, k)-subcomplex
/// and lists each violation found.
pub fn structural_report(h: &HamiltonianSubcomplex) -> Result<StructuralReport> {
    let r = established_kind(h)?;
    let c1 = h.ambient();
    let c2 = h.coarse();
    let p = c1.polytope();
    let n = c1.dim();
    let mut rep = StructuralReport::default();
    let mut v = Vec::new();

    rep.disjointness_agrees = matches!(is_hamiltonian(c1, c2), Ok(true));
    if !rep.disjointness_agrees {
        v.push("defining faces are not disjoint or the vertex conditions disagree".to_string());
    }

    let graph = h.adjacency();
    rep.facet_graphs_are_trees = true;
    for g in 0..graph.nodes.len() {
        if !graph.is_tree(g) {
            rep.facet_graphs_are_trees = false;
            v.push(format!("adjacency graph of coarse facet {g} is not a tree"));
        }
    }

    rep.face_graphs_are_trees = true;
    for k in 0..n {
        for (gi, big) in c2.faces(k).iter().enumerate() {
            if k == 1 && betti(p, &big.region()) == BettiVector::sphere(1) {
                rep.circles_skipped += 1;
                continue;
            }
            let nodes: Vec<&ComplexFace> = c1
                .faces(k)
                .iter()
                .filter(|g| {
                    let mut img: Vec<usize> = g.facet_ids.iter().map(|&a| h.coarsening()[a]).collect();
                    img.sort();
                    img.dedup();
                    img == big.facet_ids && g.lies_in(big)
                })
                .collect();
            let mut edges = Vec::new();
            for x in 0..nodes.len() {
                for y in x + 1..nodes.len() {
                    let meet = nodes[x].region().intersect(p, &nodes[y].region());
                    for _ in meet.components(p) {
                        edges.push((x, y));
                    }
                }
            }
            if !is_tree(nodes.len(), &edges) {
                rep.face_graphs_are_trees = false;
                v.push(format!("adjacency graph of coarse {k}-face {gi} is not a tree"));
            }
        }
    }

    rep.defining_faces_are_full_intersections = true;
    for (q, m) in h.defining_faces().iter().enumerate() {
        let parts = c1.faces(n - 2).iter().filter(|f| f.facet_ids == m.facet_ids).count();
        if parts != 1 {
            rep.defining_faces_are_full_intersections = false;
            v.push(format!("defining face {q} is one of {parts} components of its facet intersection"));
        }
    }

    rep.unique_containing_face = true;
    for (q, m) in h.defining_faces().iter().enumerate() {
        let mr = m.region();
        let home = h.coarsening()[m.facet_ids[0]];
        if n >= 3 {
            // facets of M are exactly the components of M ∩ G̃_j, G̃_j ∌ M
            let mut from_coarse: Vec<Region> = Vec::new();
            for (j, g) in c2.facets().iter().enumerate() {
                if j == home {
                    continue;
                }
                let gr = Region::from_faces(g.pfacets.iter().map(FacetSet::singleton));
                from_coarse.extend(mr.intersect(p, &gr).components(p));
            }
            from_coarse.sort();
            let mut facets: Vec<Region> = faces_in(h, m, n - 3).iter().map(|&g| c1.faces(n - 3)[g].region()).collect();
            facets.sort();
            if facets != from_coarse {
                rep.unique_containing_face = false;
                v.push(format!("facets of defining face {q} differ from its cuts by coarse facets"));
            }
        }
        for k in 0..=m.dim {
            for g in faces_in(h, m, k) {
                let small = &c1.faces(k)[g];
                let count = c2.faces(k + 1)
                    .iter()
                    .filter(|big| small.lies_in(big))
                    .filter(|big| mr.intersect(p, &big.region()).components(p).contains(&small.region()))
                    .count();
                if count != 1 {
                    rep.unique_containing_face = false;
                    v.push(format!("{k}-face {g} of defining face {q} is a component for {count} coarse faces"));
                }
            }
        }
    }

    rep.untouched_faces_preserved = true;
    let mut touched = BitVector::zeros(p.num_vertices());
    for m in h.defining_faces() {
        touched.or_assign(&m.vertices);
    }
    for k in 0..n {
        for (g, face) in c1.faces(k).iter().enumerate() {
            if face.vertices.intersects(&touched) {
                continue;
            }
            if !c2.faces(k).iter().any(|big| big.p_faces == face.p_faces) {
                rep.untouched_faces_preserved = false;
                v.push(format!("{k}-face {g} avoids all defining faces but is not a coarse face"));
            }
        }
    }

    match defining_face_coloring(h) {
        Ok(cols) => {
            rep.defining_colorings_proper = true;
            if r + 1 == n && on_boundary(h) {
                let all = cols.iter().all(|c| c.even_gons == Some(true));
                rep.even_gons = Some(all);
                if !all {
                    v.push("a defining face of a C(n, n-1)-subcomplex has an odd 2-face".to_string());
                }
            }
        }
        Err(e) => {
            rep.defining_colorings_proper = false;
            v.push(e.to_string());
        }
    }

    rep.violations = v;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::boundary_complex;
    use crate::hamiltonian::{enumerate_hamiltonian_cnk, subcomplex_from_defining_set};
    use crate::polytope::{polygon, product, simplex};

    fn entry(p: SimplePolytope, faces: &[&[usize]]) -> HamiltonianSubcomplex {
        let c1 = Arc::new(boundary_complex(Arc::new(p)));
        let n = c1.dim();
        let ids: Vec<usize> = faces
            .iter()
            .map(|s| {
                let key = FacetSet::from_indices(s.iter().copied());
                c1.faces(n - 2).iter().position(|f| f.p_faces == vec![key]).unwrap()
            })
            .collect();
        let mut h = subcomplex_from_defining_set(c1, &ids).unwrap();
        h.classify().unwrap();
        h
    }

    #[test]
    fn simplex_identity_rows() {
        let h = entry(simplex(4).unwrap(), &[&[0, 1]]);
        let rep = fvector_identity_check(&h).unwrap();
        assert!(rep.holds);
        // f₀ = C(4,4) + 1 + 3 triangle vertices = 5
        assert_eq!((rep.rows[0].model, rep.rows[0].defining_sum), (2, 3));
        assert_eq!(rep.rows[0].ambient, 5);
    }

    #[test]
    fn prism_identity_rows() {
        // Δ³ × I: facets 0..3 from Δ³, 4 and 5 the two ends
        let h = entry(product(&simplex(3).unwrap(), &simplex(1).unwrap()).unwrap(), &[&[0, 4]]);
        assert_eq!(h.kind(), Some(5));
        let rep = fvector_identity_check(&h).unwrap();
        assert!(rep.holds);
        assert_eq!((rep.rows[1].ambient, rep.rows[1].model, rep.rows[1].defining_sum), (16, 10, 6));
    }

    #[test]
    fn simplex_branch_and_coloring() {
        let h = entry(simplex(4).unwrap(), &[&[0, 1]]);
        let b = branch_set(&h).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].multiplicity, 1);
        assert_eq!(b[0].betti, BettiVector::new(vec![1, 0, 1]));
        assert!(b[0].distinct_coarse && b[0].consistent());
        let c = defining_face_coloring(&h).unwrap();
        assert_eq!(c[0].colors_used, 3);
    }

    #[test]
    fn product_of_triangles_branch_is_torus() {
        // Δ² × Δ²: facets 0..2 and 3..5; the face Δ¹ × Δ¹ = F0 ∩ F3
        let h = entry(product(&simplex(2).unwrap(), &simplex(2).unwrap()).unwrap(), &[&[0, 3]]);
        assert_eq!(h.kind(), Some(5));
        let b = branch_set(&h).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].betti, BettiVector::new(vec![1, 2, 1]));
        assert!(b[0].consistent());
    }

    #[test]
    fn structural_suite_on_small_enumerations() {
        for (p, k) in [
            (simplex(4).unwrap(), 4),
            (simplex(3).unwrap(), 2),
            (simplex(3).unwrap(), 3),
            (product(&simplex(3).unwrap(), &simplex(1).unwrap()).unwrap(), 4),
            (product(&simplex(2).unwrap(), &simplex(1).unwrap()).unwrap(), 3),
            (product(&polygon(4).unwrap(), &simplex(1).unwrap()).unwrap(), 3),
        ] {
            let e = enumerate_hamiltonian_cnk(Arc::new(p), k, false).unwrap();
            for h in &e.subcomplexes {
                let rep = structural_report(h).unwrap();
                assert!(rep.ok(), "{:?}", rep.violations);
                assert!(fvector_identity_check(h).unwrap().holds);
            }
        }
    }

    #[test]
    fn improper_is_rejected() {
        let c1 = Arc::new(boundary_complex(Arc::new(simplex(3).unwrap())));
        let h = subcomplex_from_defining_set(c1, &[]).unwrap();
        assert!(matches!(fvector_identity_check(&h), Err(Error::Hypothesis(_))));
    }
}
