//! The complex C(P, c) cut out on ∂P by a facet coloring.
//!
//! Facets of the complex are connected components of same-color facet
//! unions; k-faces are connected components of intersections of n − k
//! distinct complex facets. Everything is a union of closed faces of P, so
//! connectivity is decided on the graph of maximal faces, two of which are
//! joined when they share a vertex of P.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::polytope::{FacetSet, SimplePolytope, UnionFind};

/// A union of closed faces of P, stored by its maximal members.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Region {
    pub maximal: Vec<FacetSet>,
}

impl Region {
    pub fn empty() -> Self {
        Region { maximal: Vec::new() }
    }

    /// Keeps the inclusion-maximal faces (minimal facet sets).
    pub fn from_faces(faces: impl IntoIterator<Item = FacetSet>) -> Self {
        let mut all: Vec<FacetSet> = faces.into_iter().collect();
        all.sort_by_key(|s| s.len());
        all.dedup();
        let mut keep: Vec<FacetSet> = Vec::new();
        for s in all {
            if !keep.iter().any(|t| t.is_subset(s)) {
                keep.push(s);
            }
        }
        keep.sort();
        Region { maximal: keep }
    }

    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    /// Dimension of the largest member, None when empty.
    pub fn dim(&self, p: &SimplePolytope) -> Option<usize> {
        self.maximal.iter().map(|s| p.dim() - s.len()).max()
    }

    pub fn is_pure(&self, p: &SimplePolytope, d: usize) -> bool {
        self.maximal.iter().all(|s| p.dim() - s.len() == d)
    }

    pub fn vertices(&self, p: &SimplePolytope) -> BitVector {
        let mut v = BitVector::zeros(p.num_vertices());
        for s in &self.maximal {
            v.or_assign(p.face_vertices(*s).expect("region member is a face"));
        }
        v
    }

    /// Every nonempty face of P inside the region.
    pub fn closure(&self, p: &SimplePolytope) -> Vec<FacetSet> {
        p.proper_faces().iter().copied().filter(|s| self.contains_face(*s)).collect()
    }

    pub fn contains_face(&self, s: FacetSet) -> bool {
        self.maximal.iter().any(|t| t.is_subset(s))
    }

    pub fn contains_region(&self, other: &Region) -> bool {
        other.maximal.iter().all(|&s| self.contains_face(s))
    }

    pub fn intersect(&self, p: &SimplePolytope, other: &Region) -> Region {
        let mut out = Vec::new();
        for a in &self.maximal {
            for b in &other.maximal {
                let u = a.union(*b);
                if p.is_face(u) {
                    out.push(u);
                }
            }
        }
        Region::from_faces(out)
    }

    pub fn union(&self, other: &Region) -> Region {
        Region::from_faces(self.maximal.iter().chain(&other.maximal).copied())
    }

    /// Connected components, ordered by their smallest member.
    pub fn components(&self, p: &SimplePolytope) -> Vec<Region> {
        let groups = components_of(p, &self.maximal);
        groups.into_iter().map(|g| Region { maximal: g }).collect()
    }
}

/// Splits faces into groups whose closed unions are connected. Input order
/// is kept inside each group; groups are ordered by their first element
/// after sorting.
pub fn components_of(p: &SimplePolytope, faces: &[FacetSet]) -> Vec<Vec<FacetSet>> {
    let mut uf = UnionFind::new(faces.len());
    let verts: Vec<&BitVector> = faces.iter().map(|s| p.face_vertices(*s).expect("face")).collect();
    for i in 0..faces.len() {
        for j in i + 1..faces.len() {
            if verts[i].intersects(verts[j]) {
                uf.union(i, j);
            }
        }
    }
    let (labels, count) = uf.labels();
    let mut groups = vec![Vec::new(); count];
    for (i, &l) in labels.iter().enumerate() {
        groups[l].push(faces[i]);
    }
    for g in &mut groups {
        g.sort();
    }
    groups.sort();
    groups
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexFacet {
    pub color: usize,
    pub pfacets: FacetSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ComplexFace {
    pub dim: usize,
    /// Indices of the n − dim complex facets whose intersection contains it.
    pub facet_ids: Vec<usize>,
    /// Its dim-dimensional P-faces, sorted.
    pub p_faces: Vec<FacetSet>,
    #[serde(skip)]
    pub vertices: BitVector,
}

impl ComplexFace {
    pub fn region(&self) -> Region {
        Region { maximal: self.p_faces.clone() }
    }

    pub fn key(&self) -> FacetSet {
        self.p_faces[0]
    }

    pub fn meets(&self, other: &ComplexFace) -> bool {
        self.vertices.intersects(&other.vertices)
    }

    /// Whether this face lies inside `other` (closures compared).
    pub fn lies_in(&self, other: &ComplexFace) -> bool {
        self.vertices.is_subset_of(&other.vertices) && other.region().contains_region(&self.region())
    }
}

#[derive(Clone, Debug)]
pub struct ColoredComplex {
    polytope: Arc<SimplePolytope>,
    facets: Vec<ComplexFacet>,
    class_of: Vec<usize>,
    faces: Vec<Vec<ComplexFace>>,
}

impl ColoredComplex {
    pub fn polytope(&self) -> &Arc<SimplePolytope> {
        &self.polytope
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    /// M, the number of complex facets.
    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn facets(&self) -> &[ComplexFacet] {
        &self.facets
    }

    /// Complex facet containing each P-facet.
    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    /// k-faces for 0 ≤ k ≤ n − 1.
    pub fn faces(&self, k: usize) -> &[ComplexFace] {
        &self.faces[k]
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(|f| f.len()).collect()
    }

    /// The partition of P-facet indices into complex facets.
    pub fn partition(&self) -> Vec<FacetSet> {
        self.facets.iter().map(|f| f.pfacets).collect()
    }

    /// Same facet partition (colors ignored).
    pub fn same_facets(&self, other: &ColoredComplex) -> bool {
        self.partition() == other.partition()
    }

    /// Union of the P-facets of the given complex facets.
    pub fn union_pfacets(&self, ids: impl IntoIterator<Item = usize>) -> FacetSet {
        ids.into_iter().fold(FacetSet::EMPTY, |a, i| a.union(self.facets[i].pfacets))
    }

    /// Distinct complex facets through a vertex of P.
    pub fn classes_at(&self, v: FacetSet) -> Vec<usize> {
        let mut c: Vec<usize> = v.iter().map(|i| self.class_of[i]).collect();
        c.sort();
        c.dedup();
        c
    }

    /// G_{ω_1, …, ω_k} = G_{ω_1} ∩ … ∩ G_{ω_k}.
    pub fn region_of_union(&self, omegas: &[Vec<usize>]) -> Result<Region> {
        let mut seen = HashSet::new();
        for w in omegas {
            if w.is_empty() {
                return Err(Error::InvalidParameter("empty family member".into()));
            }
            for &i in w {
                if i >= self.num_facets() {
                    return Err(Error::InvalidParameter(format!("complex facet {i} out of range")));
                }
                if !seen.insert(i) {
                    return Err(Error::InvalidParameter(format!("complex facet {i} in two family members")));
                }
            }
        }
        let us: Vec<FacetSet> = omegas.iter().map(|w| self.union_pfacets(w.iter().copied())).collect();
        Ok(self.region_hitting(&us))
    }

    /// Union of the faces F_S with S meeting every given facet set.
    pub fn region_hitting(&self, sets: &[FacetSet]) -> Region {
        let hits: Vec<FacetSet> = self
            .polytope
            .proper_faces()
            .iter()
            .copied()
            .filter(|s| sets.iter().all(|u| s.meets(*u)))
            .collect();
        Region::from_faces(hits)
    }

    /// The C2 facet containing each C1 facet, if C2 coarsens `self`.
    pub fn coarsening_into(&self, coarse: &ColoredComplex) -> Result<Vec<usize>> {
        if self.polytope.vertices() != coarse.polytope.vertices() || self.polytope.num_facets() != coarse.polytope.num_facets() {
            return Err(Error::NotASubcomplex("different polytopes".into()));
        }
        self.facets
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let mut img = f.pfacets.iter().map(|j| coarse.class_of[j]);
                let first = img.next().unwrap();
                if img.all(|c| c == first) {
                    Ok(first)
                } else {
                    Err(Error::NotASubcomplex(format!("facet {i} is split by the coarse complex")))
                }
            })
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({ "facets": self.facets })
    }
}

/// Builds C(P, c) from a color per P-facet.
pub fn build_complex(p: Arc<SimplePolytope>, colors: &[usize]) -> Result<ColoredComplex> {
    let m = p.num_facets();
    if colors.len() != m {
        return Err(Error::InvalidColoring(format!("{} colors for {m} facets", colors.len())));
    }
    let mut uf = UnionFind::new(m);
    for i in 0..m {
        for j in i + 1..m {
            if colors[i] == colors[j] && p.facets_meet(i, j) {
                uf.union(i, j);
            }
        }
    }
    // labels come out in order of the smallest P-facet of each component
    let (labels, count) = uf.labels();
    let mut facets: Vec<ComplexFacet> = (0..count).map(|_| ComplexFacet { color: 0, pfacets: FacetSet::EMPTY }).collect();
    for i in 0..m {
        facets[labels[i]].pfacets = facets[labels[i]].pfacets.with(i);
        facets[labels[i]].color = colors[i];
    }
    let n = p.dim();
    let mut faces = Vec::with_capacity(n);
    for k in 0..n {
        let mut groups: BTreeMap<Vec<usize>, Vec<FacetSet>> = BTreeMap::new();
        for s in p.faces_of_dim(k) {
            let mut t: Vec<usize> = s.iter().map(|i| labels[i]).collect();
            t.sort();
            t.dedup();
            if t.len() == s.len() {
                groups.entry(t).or_default().push(s);
            }
        }
        let mut level = Vec::new();
        for (t, pf) in groups {
            for comp in components_of(&p, &pf) {
                let mut vertices = BitVector::zeros(p.num_vertices());
                for s in &comp {
                    vertices.or_assign(p.face_vertices(*s).unwrap());
                }
                level.push(ComplexFace { dim: k, facet_ids: t.clone(), p_faces: comp, vertices });
            }
        }
        level.sort_by_key(|f| f.key());
        faces.push(level);
    }
    Ok(ColoredComplex { polytope: p, facets, class_of: labels, faces })
}

/// ∂P: every P-facet its own complex facet.
pub fn boundary_complex(p: Arc<SimplePolytope>) -> ColoredComplex {
    let colors: Vec<usize> = (0..p.num_facets()).collect();
    build_complex(p, &colors).expect("one color per facet")
}

pub fn is_subcomplex(coarse: &ColoredComplex, fine: &ColoredComplex) -> Result<Vec<usize>> {
    fine.coarsening_into(coarse)
}
