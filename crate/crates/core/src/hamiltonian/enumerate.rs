//! Exhaustive search for Hamiltonian C(n, k)-subcomplexes.
//!
//! Candidates are sets of pairwise disjoint (n − 2)-faces of the ambient
//! complex, grown in index order. Every vertex of C1 is either a vertex of the
//! coarse complex or lies in exactly one defining face, so a set is only tested
//! once its faces cover f₀(C1) − f₀(C(n, k)) vertices, and branches that
//! overshoot are cut.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{subcomplex_from_defining_set, HamiltonianSubcomplex};
use crate::complex::{boundary_complex, ColoredComplex};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::homology::is_cnk;
use crate::polytope::{FacetSet, SimplePolytope};

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// f₀(C(n, k)): C(k, n) + δ_{k,n}, i.e. 0, 2 and n + 1 for k = n − 1, n, n + 1.
pub fn vertex_budget(n: usize, k: usize) -> usize {
    binomial(k, n) + usize::from(k == n)
}

struct Search<'a> {
    c1: &'a Arc<ColoredComplex>,
    k: usize,
    weight: Vec<usize>,
    meets: Vec<BitVector>,
    target: usize,
}

impl Search<'_> {
    fn new(c1: &Arc<ColoredComplex>, k: usize) -> Option<Search<'_>> {
        let n = c1.dim();
        let faces = c1.faces(n - 2);
        let zero_faces: Vec<&BitVector> = c1.faces(0).iter().map(|f| &f.vertices).collect();
        let weight = faces
            .iter()
            .map(|f| zero_faces.iter().filter(|v| v.is_subset_of(&f.vertices)).count())
            .collect();
        let meets = faces
            .iter()
            .map(|f| BitVector::from_indices(faces.len(), (0..faces.len()).filter(|&j| faces[j].meets(f))))
            .collect();
        let target = c1.faces(0).len().checked_sub(vertex_budget(n, k))?;
        Some(Search { c1, k, weight, meets, target })
    }

    fn test(&self, chosen: &[usize], out: &mut Vec<HamiltonianSubcomplex>) -> Result<()> {
        let h = match subcomplex_from_defining_set(self.c1.clone(), chosen) {
            Ok(h) => h,
            Err(Error::Rejected(_)) => return Ok(()),
            Err(e) => return Err(e),
        };
        if h.coarse().num_facets() == self.k && is_cnk(h.coarse())? {
            out.push(h.with_kind(self.k));
        }
        Ok(())
    }

    fn dfs(
        &self,
        start: usize,
        chosen: &mut Vec<usize>,
        total: usize,
        blocked: &BitVector,
        out: &mut Vec<HamiltonianSubcomplex>,
    ) -> Result<()> {
        if total == self.target && !chosen.is_empty() {
            self.test(chosen, out)?;
        }
        for i in start..self.weight.len() {
            if blocked.get(i) || total + self.weight[i] > self.target {
                continue;
            }
            let mut b = blocked.clone();
            b.or_assign(&self.meets[i]);
            chosen.push(i);
            self.dfs(i + 1, chosen, total + self.weight[i], &b, out)?;
            chosen.pop();
        }
        Ok(())
    }

    fn branch(&self, first: usize) -> Result<Vec<HamiltonianSubcomplex>> {
        let mut out = Vec::new();
        if self.weight[first] <= self.target {
            self.dfs(first + 1, &mut vec![first], self.weight[first], &self.meets[first], &mut out)?;
        }
        Ok(out)
    }
}

/// All proper Hamiltonian subcomplexes of `c1` isomorphic to C(n, k), in
/// lexicographic order of their defining-face indices.
pub fn enumerate_subcomplexes(c1: Arc<ColoredComplex>, k: usize, parallel: bool) -> Result<Vec<HamiltonianSubcomplex>> {
    let n = c1.dim();
    if n < 2 {
        return Err(Error::InvalidDimension(format!("defining faces need n ≥ 2, got {n}")));
    }
    if n > 4 {
        return Err(Error::UnsupportedDimension(n));
    }
    let Some(search) = Search::new(&c1, k) else {
        return Ok(Vec::new());
    };
    let firsts: Vec<usize> = (0..search.weight.len()).collect();
    let parts: Vec<Result<Vec<HamiltonianSubcomplex>>> = if parallel {
        firsts.par_iter().map(|&i| search.branch(i)).collect()
    } else {
        firsts.iter().map(|&i| search.branch(i)).collect()
    };
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Index of the member whose defining set is the lexicographic minimum.
    pub representative: usize,
    pub members: Vec<usize>,
    pub stabilizer: usize,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub kind: usize,
    pub subcomplexes: Vec<HamiltonianSubcomplex>,
    pub orbits: Vec<Orbit>,
    pub automorphism_count: usize,
    /// For k = n − 1: whether every 2-face of every defining face is even-gonal.
    pub even_gons: Option<bool>,
}

impl Enumeration {
    /// |orbit| · |stabilizer| = |Aut P| for every orbit.
    pub fn orbit_sizes_consistent(&self) -> bool {
        self.orbits.iter().all(|o| o.members.len() * o.stabilizer == self.automorphism_count)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "count": self.subcomplexes.len(),
            "orbit_count": self.orbits.len(),
            "automorphisms": self.automorphism_count,
            "orbits": self.orbits,
            "even_gons": self.even_gons,
            "subcomplexes": self.subcomplexes.iter().map(|h| h.to_json_value()).collect::<Vec<_>>(),
        })
    }
}

fn defining_set(h: &HamiltonianSubcomplex) -> Vec<FacetSet> {
    let mut s: Vec<FacetSet> = h.defining_faces().iter().map(|f| f.p_faces[0]).collect();
    s.sort();
    s
}

fn image(set: &[FacetSet], perm: &[usize]) -> Vec<FacetSet> {
    let mut s: Vec<FacetSet> = set.iter().map(|f| f.map(perm)).collect();
    s.sort();
    s
}

fn even_gonal(p: &SimplePolytope, m: FacetSet) -> bool {
    p.faces_of_dim(2)
        .into_iter()
        .filter(|t| m.is_subset(*t))
        .all(|t| p.face_vertices(t).unwrap().count_ones() % 2 == 0)
}

/// Hamiltonian C(n, k)-subcomplexes of ∂P, grouped into Aut(P)-orbits.
pub fn enumerate_hamiltonian_cnk(p: Arc<SimplePolytope>, k: usize, parallel: bool) -> Result<Enumeration> {
    let n = p.dim();
    if n > 4 {
        return Err(Error::UnsupportedDimension(n));
    }
    if n < 2 {
        return Err(Error::InvalidDimension(format!("defining faces need n ≥ 2, got {n}")));
    }
    if k + 1 < n || k > n + 1 {
        return Err(Error::InvalidParameter(format!("k must lie in [{}, {}], got {k}", n - 1, n + 1)));
    }
    let c1 = Arc::new(boundary_complex(p.clone()));
    let subcomplexes = enumerate_subcomplexes(c1, k, parallel)?;
    let autos = p.automorphisms();
    let sets: Vec<Vec<FacetSet>> = subcomplexes.iter().map(defining_set).collect();
    let mut by_key: BTreeMap<Vec<FacetSet>, Vec<usize>> = BTreeMap::new();
    for (i, s) in sets.iter().enumerate() {
        let key = autos.iter().map(|g| image(s, g)).min().unwrap_or_else(|| s.clone());
        by_key.entry(key).or_default().push(i);
    }
    let mut orbits: Vec<Orbit> = by_key
        .into_iter()
        .map(|(key, members)| {
            let representative = members.iter().copied().find(|&i| sets[i] == key).unwrap_or(members[0]);
            let rep = &sets[representative];
            let stabilizer = autos.iter().filter(|g| &image(rep, g) == rep).count();
            Orbit { representative, members, stabilizer }
        })
        .collect();
    orbits.sort_by_key(|o| o.members[0]);
    let even_gons =
        (k + 1 == n).then(|| sets.iter().all(|s| s.iter().all(|&m| even_gonal(&p, m))));
    Ok(Enumeration { kind: k, subcomplexes, orbits, automorphism_count: autos.len(), even_gons })
}
