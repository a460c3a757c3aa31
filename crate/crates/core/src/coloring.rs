//! Vector-colorings Λ: facets → GF(2)^r spanning GF(2)^r.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::complex::{build_complex, ColoredComplex};
use crate::error::{Error, Result};
use crate::gf2::{self, BitVector, Subspace};
use crate::hamiltonian::HamiltonianSubcomplex;
use crate::polytope::SimplePolytope;

#[derive(Clone, Debug)]
pub struct VectorColoring {
    polytope: Arc<SimplePolytope>,
    rank: usize,
    vectors: Vec<BitVector>,
}

/// The affine part λ of an orientable coloring, Λ_i = (1, λ_i) in suitable
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineColoring {
    pub rank: usize,
    pub vectors: Vec<BitVector>,
}

#[derive(Deserialize)]
struct ColoringJson {
    rank: usize,
    vectors: BTreeMap<String, BitVector>,
}

impl VectorColoring {
    pub fn new(polytope: Arc<SimplePolytope>, rank: usize, vectors: Vec<BitVector>) -> Result<Self> {
        let m = polytope.num_facets();
        if vectors.len() != m {
            return Err(Error::InvalidColoring(format!("{} vectors for {m} facets", vectors.len())));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != rank) {
            return Err(Error::MixedLengths(rank, v.len()));
        }
        let rk = gf2::span_in(rank, &vectors)?.dim();
        if rk != rank {
            return Err(Error::NotFullRank { rank: rk, expected: rank });
        }
        Ok(VectorColoring { polytope, rank, vectors })
    }

    pub fn identity(polytope: Arc<SimplePolytope>) -> Self {
        let m = polytope.num_facets();
        let vectors = (0..m).map(|i| BitVector::unit(m, i)).collect();
        VectorColoring { polytope, rank: m, vectors }
    }

    /// Each facet paired with the unique facet it does not meet; one basis
    /// vector per pair. Defined for cubes and products of segments.
    pub fn opposite_pairs(polytope: Arc<SimplePolytope>) -> Result<Self> {
        let m = polytope.num_facets();
        let mut pair = vec![usize::MAX; m];
        for i in 0..m {
            let others: Vec<usize> = (0..m).filter(|&j| j != i && !polytope.facets_meet(i, j)).collect();
            if others.len() != 1 {
                return Err(Error::InvalidColoring(format!("facet {i} has {} disjoint facets", others.len())));
            }
            pair[i] = others[0];
        }
        let mut id = vec![usize::MAX; m];
        let mut next = 0;
        for i in 0..m {
            if id[i] == usize::MAX {
                id[i] = next;
                id[pair[i]] = next;
                next += 1;
            }
        }
        let vectors = id.iter().map(|&c| BitVector::unit(next, c)).collect();
        VectorColoring::new(polytope, next, vectors)
    }

    pub fn polytope(&self) -> &Arc<SimplePolytope> {
        &self.polytope
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vectors(&self) -> &[BitVector] {
        &self.vectors
    }

    /// C(P, Λ): colors are the distinct vectors, numbered in sorted order.
    pub fn complex(&self) -> ColoredComplex {
        let mut distinct: Vec<&BitVector> = self.vectors.iter().collect();
        distinct.sort();
        distinct.dedup();
        let colors: Vec<usize> = self.vectors.iter().map(|v| distinct.binary_search(&v).unwrap()).collect();
        build_complex(self.polytope.clone(), &colors).expect("one color per facet")
    }

    pub fn is_free(&self) -> bool {
        let n = self.polytope.dim();
        self.polytope.vertices().iter().all(|v| {
            let vs: Vec<BitVector> = v.iter().map(|i| self.vectors[i].clone()).collect();
            gf2::span_in(self.rank, &vs).unwrap().dim() == n
        })
    }

    pub fn is_closed_manifold(&self) -> bool {
        self.polytope.vertices().iter().all(|v| {
            let mut vs: Vec<BitVector> = v.iter().map(|i| self.vectors[i].clone()).collect();
            vs.sort();
            vs.dedup();
            gf2::span_in(self.rank, &vs).unwrap().dim() == vs.len()
        })
    }

    /// A functional c with c·Λ_i = 1 for every facet.
    pub fn orientation_functional(&self) -> Option<BitVector> {
        gf2::solve(&self.vectors, &vec![true; self.vectors.len()], self.rank).unwrap()
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation_functional().is_some()
    }

    /// Λ_i with the pivot coordinate of the orientation functional removed.
    pub fn affine_part(&self) -> Result<AffineColoring> {
        let c = self
            .orientation_functional()
            .ok_or_else(|| Error::Hypothesis("coloring is not orientable".into()))?;
        let p = c.first_one().unwrap();
        let r = self.rank - 1;
        let vectors = self
            .vectors
            .iter()
            .map(|v| BitVector::from_indices(r, v.ones().filter(|&j| j != p).map(|j| if j > p { j - 1 } else { j })))
            .collect();
        Ok(AffineColoring { rank: r, vectors })
    }

    /// Λ_τ = Π_τ ∘ Λ, of rank r − 1.
    pub fn quotient(&self, tau: &BitVector) -> Result<VectorColoring> {
        if tau.len() != self.rank {
            return Err(Error::MixedLengths(self.rank, tau.len()));
        }
        if tau.is_zero() {
            return Err(Error::InvalidParameter("involution must be nonzero".into()));
        }
        let q = gf2::quotient_basis(self.rank, &gf2::span(std::slice::from_ref(tau))?)?;
        VectorColoring::new(self.polytope.clone(), self.rank - 1, self.vectors.iter().map(|v| q.apply(v)).collect())
    }

    pub fn kernel(&self) -> Subspace {
        gf2::kernel_subgroup(&self.vectors, self.rank).unwrap()
    }

    pub fn row_space(&self) -> Subspace {
        gf2::row_space(&self.vectors, self.rank).unwrap()
    }

    pub fn equivalent(&self, other: &VectorColoring) -> bool {
        gf2::colorings_equivalent(&self.vectors, self.rank, &other.vectors, other.rank).unwrap()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut vectors = serde_json::Map::new();
        for (name, v) in self.polytope.facet_names().iter().zip(&self.vectors) {
            vectors.insert(name.clone(), serde_json::to_value(v).unwrap());
        }
        serde_json::json!({ "rank": self.rank, "vectors": vectors })
    }

    pub fn from_json_str(polytope: Arc<SimplePolytope>, s: &str) -> Result<Self> {
        let j: ColoringJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut vectors = vec![None; polytope.num_facets()];
        for (name, v) in j.vectors {
            let i = polytope
                .facet_index(&name)
                .ok_or_else(|| Error::InvalidColoring(format!("unknown facet {name}")))?;
            vectors[i] = Some(v);
        }
        let vectors = vectors
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::InvalidColoring(format!("no vector for facet {}", polytope.facet_names()[i]))))
            .collect::<Result<Vec<_>>>()?;
        VectorColoring::new(polytope, j.rank, vectors)
    }
}

/// Λ_C(F_i) = e_j where F_i ⊂ G_j.
pub fn canonical_coloring(c: &ColoredComplex) -> VectorColoring {
    let m = c.num_facets();
    let vectors = c.class_of().iter().map(|&j| BitVector::unit(m, j)).collect();
    VectorColoring::new(c.polytope().clone(), m, vectors).expect("standard basis spans")
}

/// Λ_χ(F) = (Λ_{C2}(F), χ(F)) for a nice coloring χ of the ambient facets.
pub fn induced_coloring(h: &HamiltonianSubcomplex, chi: &[u8]) -> Result<VectorColoring> {
    let c1 = h.ambient();
    if chi.len() != c1.num_facets() {
        return Err(Error::InvalidParameter(format!("{} bits for {} facets", chi.len(), c1.num_facets())));
    }
    for f in h.defining_faces() {
        let (a, b) = (f.facet_ids[0], f.facet_ids[1]);
        if chi[a] == chi[b] {
            return Err(Error::InvalidParameter(format!("facets {a} and {b} flank a defining face but share a color")));
        }
    }
    let m2 = h.coarse().num_facets();
    let vectors = c1
        .class_of()
        .iter()
        .map(|&a| BitVector::unit(m2, h.coarsening()[a]).concat(&BitVector::from_bits(&[chi[a] == 1])))
        .collect();
    VectorColoring::new(c1.polytope().clone(), m2 + 1, vectors)
}

/// Induced coloring for the breadth-first nice coloring.
pub fn canonical_induced(h: &HamiltonianSubcomplex) -> Result<VectorColoring> {
    let chi = h.canonical_nice_coloring().ok_or(Error::NotBipartite)?;
    induced_coloring(h, &chi)
}
