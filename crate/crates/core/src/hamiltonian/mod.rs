//! Hamiltonian subcomplexes C(P, c₂) ⊂ C(P, c₁), their adjacency graphs and
//! nice colorings. Enumeration, involutions, face identities, branch sets and
//! the four-color machinery live in the submodules.

mod enumerate;
mod fourcolor;
mod geometry;
mod identities;
mod involution;

pub use enumerate::{enumerate_hamiltonian_cnk, enumerate_subcomplexes, vertex_budget, Enumeration, Orbit};
pub use fourcolor::{cycles_from_coloring, four_color_cycles_check, four_coloring_from_cycles};
pub use geometry::{
    geometry_report, gonality_identity, prism_gonality_deficit, prism_splitting, GeometryReport, GeometryRow, Verdict,
    GEOMETRIES,
};
pub use identities::{
    branch_set, defining_face_coloring, fvector_identity_check, structural_report, BranchComponent, FVectorReport,
    FVectorRow, FaceColoring, StructuralReport,
};
pub use involution::{hyperelliptic_involutions, involutions_from_subcomplexes, quotient_is_closed, Involution};

use std::collections::VecDeque;
use std::sync::Arc;

use serde_json::json;

use crate::complex::{build_complex, is_subcomplex, ColoredComplex, ComplexFace};
use crate::error::{Error, Result};
use crate::homology::is_cnk;
use crate::polytope::UnionFind;

#[derive(Clone, Debug)]
pub struct HamiltonianSubcomplex {
    ambient: Arc<ColoredComplex>,
    coarse: ColoredComplex,
    coarsening: Vec<usize>,
    defining_ids: Vec<usize>,
    defining: Vec<ComplexFace>,
    kind: Option<usize>,
}

/// Indices into `c1.faces(n − 2)` of the components of G_i ∩ G_j with
/// G_i, G_j in one coarse facet.
fn defining_face_indices(c1: &ColoredComplex, coarsening: &[usize]) -> Vec<usize> {
    let n = c1.dim();
    if n < 2 {
        return Vec::new();
    }
    c1.faces(n - 2)
        .iter()
        .enumerate()
        .filter(|(_, f)| coarsening[f.facet_ids[0]] == coarsening[f.facet_ids[1]])
        .map(|(i, _)| i)
        .collect()
}

fn first_meeting_pair(faces: &[&ComplexFace]) -> Option<(usize, usize)> {
    for i in 0..faces.len() {
        for j in i + 1..faces.len() {
            if faces[i].meets(faces[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// The pointwise form of disjointness: at no vertex do three C1 facets of one
/// coarse facet meet, nor two pairs from two coarse facets.
pub fn vertex_conditions_hold(c1: &ColoredComplex, coarsening: &[usize]) -> bool {
    let p = c1.polytope();
    p.vertices().iter().all(|&v| {
        let mut per_class = std::collections::BTreeMap::<usize, usize>::new();
        for a in c1.classes_at(v) {
            *per_class.entry(coarsening[a]).or_default() += 1;
        }
        let crowded = per_class.values().filter(|&&c| c >= 2).count();
        per_class.values().all(|&c| c < 3) && crowded < 2
    })
}

/// Defining (n − 2)-faces of the coarsening C2 of C1.
pub fn defining_faces(c1: &ColoredComplex, c2: &ColoredComplex) -> Result<Vec<ComplexFace>> {
    let coarsening = is_subcomplex(c2, c1)?;
    let n = c1.dim();
    Ok(defining_face_indices(c1, &coarsening).into_iter().map(|i| c1.faces(n - 2)[i].clone()).collect())
}

/// Pairwise disjointness of defining faces, cross-checked against the
/// vertex conditions; disagreement is reported as an invariant violation.
pub fn is_hamiltonian(c1: &ColoredComplex, c2: &ColoredComplex) -> Result<bool> {
    let coarsening = is_subcomplex(c2, c1)?;
    let n = c1.dim();
    let ids = defining_face_indices(c1, &coarsening);
    let faces: Vec<&ComplexFace> = ids.iter().map(|&i| &c1.faces(n.saturating_sub(2))[i]).collect();
    let disjoint = first_meeting_pair(&faces).is_none();
    let local = vertex_conditions_hold(c1, &coarsening);
    if disjoint != local {
        return Err(Error::Invariant(format!(
            "defining faces disjoint = {disjoint} but vertex conditions = {local}"
        )));
    }
    Ok(disjoint)
}

/// Builds the coarsening whose defining faces are exactly `s` (indices into
/// `ambient.faces(n − 2)`).
pub fn subcomplex_from_defining_set(ambient: Arc<ColoredComplex>, s: &[usize]) -> Result<HamiltonianSubcomplex> {
    let n = ambient.dim();
    if n < 2 {
        return Err(Error::InvalidDimension(format!("defining faces need n ≥ 2, got {n}")));
    }
    let all = ambient.faces(n - 2);
    let mut ids = s.to_vec();
    ids.sort();
    ids.dedup();
    if let Some(&bad) = ids.iter().find(|&&i| i >= all.len()) {
        return Err(Error::InvalidParameter(format!("no (n-2)-face with index {bad}")));
    }
    let faces: Vec<&ComplexFace> = ids.iter().map(|&i| &all[i]).collect();
    if let Some((a, b)) = first_meeting_pair(&faces) {
        return Err(Error::Rejected(format!("defining faces {} and {} intersect", ids[a], ids[b])));
    }
    let mut uf = UnionFind::new(ambient.num_facets());
    for f in &faces {
        uf.union(f.facet_ids[0], f.facet_ids[1]);
    }
    for (i, f) in all.iter().enumerate() {
        let (a, b) = (f.facet_ids[0], f.facet_ids[1]);
        if uf.find(a) == uf.find(b) && ids.binary_search(&i).is_err() {
            return Err(Error::Rejected(format!(
                "facets {a} and {b} are merged but also meet along face {i}, which is not in the set"
            )));
        }
    }
    let (labels, _) = uf.labels();
    let colors: Vec<usize> = ambient.class_of().iter().map(|&a| labels[a]).collect();
    let coarse = build_complex(ambient.polytope().clone(), &colors)?;
    let coarsening = ambient.coarsening_into(&coarse)?;
    let defining = faces.into_iter().cloned().collect();
    Ok(HamiltonianSubcomplex { ambient, coarse, coarsening, defining_ids: ids, defining, kind: None })
}

impl HamiltonianSubcomplex {
    /// Wraps an existing coarsening, rejecting it unless it is Hamiltonian.
    pub fn from_coarse(ambient: Arc<ColoredComplex>, coarse: ColoredComplex) -> Result<Self> {
        if !is_hamiltonian(&ambient, &coarse)? {
            return Err(Error::Rejected("defining faces intersect".into()));
        }
        let coarsening = is_subcomplex(&coarse, &ambient)?;
        let defining_ids = defining_face_indices(&ambient, &coarsening);
        let n = ambient.dim();
        let defining = defining_ids.iter().map(|&i| ambient.faces(n - 2)[i].clone()).collect();
        Ok(HamiltonianSubcomplex { ambient, coarse, coarsening, defining_ids, defining, kind: None })
    }

    pub fn ambient(&self) -> &Arc<ColoredComplex> {
        &self.ambient
    }

    pub fn coarse(&self) -> &ColoredComplex {
        &self.coarse
    }

    /// Coarse facet containing each ambient facet.
    pub fn coarsening(&self) -> &[usize] {
        &self.coarsening
    }

    pub fn defining_faces(&self) -> &[ComplexFace] {
        &self.defining
    }

    /// Positions of the defining faces in `ambient().faces(n − 2)`.
    pub fn defining_ids(&self) -> &[usize] {
        &self.defining_ids
    }

    pub fn is_proper(&self) -> bool {
        !self.defining.is_empty()
    }

    pub fn kind(&self) -> Option<usize> {
        self.kind
    }

    /// Sets `kind` to M₂ when the coarse complex is C(n, M₂).
    pub fn classify(&mut self) -> Result<Option<usize>> {
        self.kind = if is_cnk(&self.coarse)? { Some(self.coarse.num_facets()) } else { None };
        Ok(self.kind)
    }

    pub(crate) fn with_kind(mut self, k: usize) -> Self {
        self.kind = Some(k);
        self
    }

    pub fn adjacency(&self) -> AdjacencyGraph {
        let mut nodes = vec![Vec::new(); self.coarse.num_facets()];
        for (a, &g) in self.coarsening.iter().enumerate() {
            nodes[g].push(a);
        }
        let edges = self
            .defining
            .iter()
            .enumerate()
            .map(|(i, f)| AdjacencyEdge {
                coarse_facet: self.coarsening[f.facet_ids[0]],
                a: f.facet_ids[0],
                b: f.facet_ids[1],
                face: i,
            })
            .collect();
        AdjacencyGraph { nodes, edges }
    }

    pub fn is_bipartite(&self) -> bool {
        self.canonical_nice_coloring().is_some()
    }

    /// The lexicographically least nice coloring: every component's smallest
    /// facet gets 0.
    pub fn canonical_nice_coloring(&self) -> Option<Vec<u8>> {
        let m = self.ambient.num_facets();
        let adj = self.adjacency().neighbours(m);
        let mut chi: Vec<Option<u8>> = vec![None; m];
        for start in 0..m {
            if chi[start].is_some() {
                continue;
            }
            chi[start] = Some(0);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let c = chi[u].unwrap();
                for &w in &adj[u] {
                    match chi[w] {
                        None => {
                            chi[w] = Some(1 - c);
                            queue.push_back(w);
                        }
                        Some(d) if d == c => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(chi.into_iter().map(|c| c.unwrap()).collect())
    }

    /// All nice colorings, sorted; empty when not bipartite.
    pub fn nice_colorings(&self) -> Vec<Vec<u8>> {
        let Some(base) = self.canonical_nice_coloring() else {
            return Vec::new();
        };
        let m = self.ambient.num_facets();
        let mut uf = UnionFind::new(m);
        for e in &self.adjacency().edges {
            uf.union(e.a, e.b);
        }
        let (labels, count) = uf.labels();
        let mut out: Vec<Vec<u8>> = (0u64..1 << count)
            .map(|flip| (0..m).map(|a| base[a] ^ ((flip >> labels[a]) & 1) as u8).collect())
            .collect();
        out.sort();
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "kind": self.kind,
            "defining_faces": self.defining.iter().zip(&self.defining_ids).map(|(f, i)| json!({
                "index": i,
                "facets": f.facet_ids,
                "p_faces": f.p_faces,
            })).collect::<Vec<_>>(),
            "coarse_partition": self.coarse.partition(),
            "ambient_partition": self.ambient.partition(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AdjacencyEdge {
    pub coarse_facet: usize,
    pub a: usize,
    pub b: usize,
    /// Position in the subcomplex's defining-face list.
    pub face: usize,
}

/// Γ(P, c₁, c₂): one multigraph per coarse facet on the ambient facets it
/// contains, one edge per defining face.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AdjacencyGraph {
    pub nodes: Vec<Vec<usize>>,
    pub edges: Vec<AdjacencyEdge>,
}

impl AdjacencyGraph {
    fn neighbours(&self, m: usize) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); m];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        adj
    }

    pub fn edges_in(&self, g: usize) -> impl Iterator<Item = &AdjacencyEdge> {
        self.edges.iter().filter(move |e| e.coarse_facet == g)
    }

    /// Whether Γ(G̃) is a tree for the coarse facet `g`.
    pub fn is_tree(&self, g: usize) -> bool {
        let nodes = &self.nodes[g];
        let edges: Vec<&AdjacencyEdge> = self.edges_in(g).collect();
        if edges.len() + 1 != nodes.len() {
            return false;
        }
        let pos = |a: usize| nodes.binary_search(&a).unwrap();
        let mut uf = UnionFind::new(nodes.len());
        edges.iter().all(|e| uf.union(pos(e.a), pos(e.b)))
    }

    pub fn all_trees(&self) -> bool {
        (0..self.nodes.len()).all(|g| self.is_tree(g))
    }

    /// DOT multigraph with one cluster per coarse facet.
    pub fn to_dot(&self, c1: &ColoredComplex) -> String {
        let names = c1.polytope().facet_names();
        let label = |a: usize| {
            c1.facets()[a].pfacets.iter().map(|i| names[i].as_str()).collect::<Vec<_>>().join(",")
        };
        let mut s = String::from("graph adjacency {\n");
        for (g, nodes) in self.nodes.iter().enumerate() {
            s.push_str(&format!("  subgraph cluster_{g} {{\n    label=\"G{g}\";\n"));
            for &a in nodes {
                s.push_str(&format!("    n{a} [label=\"{}\"];\n", label(a)));
            }
            s.push_str("  }\n");
        }
        for e in &self.edges {
            s.push_str(&format!("  n{} -- n{} [label=\"M{}\"];\n", e.a, e.b, e.face));
        }
        s.push_str("}\n");
        s
    }
}
