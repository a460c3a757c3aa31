//! Explicit (polytope, Hamiltonian subcomplex) pairs, each built from its
//! construction and verified end to end.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde_json::json;

use crate::coloring::canonical_induced;
use crate::complex::{boundary_complex, ColoredComplex};
use crate::error::{Error, Result};
use crate::hamiltonian::{
    branch_set, enumerate_hamiltonian_cnk, fvector_identity_check, is_hamiltonian, structural_report,
    subcomplex_from_defining_set, HamiltonianSubcomplex,
};
use crate::homology::{is_cnk, BettiVector};
use crate::polytope::{cut_face, cube, polygon, product, simplex, FacetSet, SimplePolytope};

/// Total number of copies of each closed manifold over all defining faces.
pub type BranchSummary = BTreeMap<Vec<usize>, u64>;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub polytope: Arc<SimplePolytope>,
    pub subcomplex: HamiltonianSubcomplex,
    pub kind: usize,
    pub geometry: Option<String>,
    pub expected_branch: Option<BranchSummary>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrismVariant {
    /// C(n, n+1) from one face Δ^{n−2} × 0.
    Single,
    /// C(n, n) from Δ^{n−2} × 0 and the same simplex × 1.
    Parallel,
    /// C(n, n) from Δ₁^{n−2} × 0 and Δ₂^{n−2} × 1 meeting in an (n−3)-simplex.
    Skew,
}

impl PrismVariant {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(PrismVariant::Single),
            "parallel" => Ok(PrismVariant::Parallel),
            "skew" => Ok(PrismVariant::Skew),
            _ => Err(Error::InvalidParameter(format!("unknown prism variant {s:?}"))),
        }
    }
}

/// Betti numbers of S^a × S^b, with S⁰ read as two points.
fn sphere_product(a: usize, b: usize) -> (Vec<usize>, u64) {
    match (a, b) {
        (0, 0) => (vec![1], 4),
        (0, d) | (d, 0) => (BettiVector::sphere(d).values, 2),
        _ => {
            let mut v = vec![0; a + b + 1];
            for (i, x) in BettiVector::sphere(a).values.iter().enumerate() {
                for (j, y) in BettiVector::sphere(b).values.iter().enumerate() {
                    v[i + j] += x * y;
                }
            }
            (v, 1)
        }
    }
}

fn summary(parts: impl IntoIterator<Item = (Vec<usize>, u64)>) -> BranchSummary {
    let mut out = BranchSummary::new();
    for (b, c) in parts.into_iter().filter(|&(_, c)| c > 0) {
        *out.entry(b).or_default() += c;
    }
    out
}

fn spheres(d: usize, copies: u64) -> (Vec<usize>, u64) {
    (BettiVector::sphere(d).values, copies)
}

/// Index into `c1.faces(n − 2)` of the face containing the P-face `s`.
fn face_index(c1: &ColoredComplex, s: FacetSet) -> Result<usize> {
    let n = c1.dim();
    c1.faces(n - 2)
        .iter()
        .position(|f| f.p_faces.contains(&s))
        .ok_or_else(|| Error::InvalidParameter(format!("{:?} is not an (n-2)-face", s.to_vec())))
}

impl CatalogEntry {
    /// Builds the subcomplex of ∂P defined by the given (n−2)-faces of P and
    /// checks it has the claimed kind.
    pub fn from_faces(
        name: impl Into<String>,
        polytope: SimplePolytope,
        faces: &[FacetSet],
        kind: usize,
        geometry: Option<&str>,
        expected_branch: Option<BranchSummary>,
    ) -> Result<Self> {
        let name = name.into();
        let polytope = Arc::new(polytope);
        let c1 = Arc::new(boundary_complex(polytope.clone()));
        let ids = faces.iter().map(|&s| face_index(&c1, s)).collect::<Result<Vec<_>>>()?;
        let mut subcomplex = subcomplex_from_defining_set(c1, &ids)?;
        match subcomplex.classify()? {
            Some(k) if k == kind => {}
            got => {
                return Err(Error::Invariant(format!("{name}: claimed C(n, {kind}), coarse complex gives {got:?}")))
            }
        }
        Ok(CatalogEntry { name, polytope, subcomplex, kind, geometry: geometry.map(str::to_owned), expected_branch })
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    /// Defining faces as P-faces, sorted.
    pub fn defining_set(&self) -> Vec<FacetSet> {
        let mut s: Vec<FacetSet> = self.subcomplex.defining_faces().iter().map(|f| f.p_faces[0]).collect();
        s.sort();
        s
    }

    pub fn branch_summary(&self) -> Result<BranchSummary> {
        Ok(summary(branch_set(&self.subcomplex)?.into_iter().map(|c| (c.betti.values, c.multiplicity))))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let coloring = canonical_induced(&self.subcomplex).ok().map(|l| l.to_json_value());
        json!({
            "name": self.name,
            "kind": self.kind,
            "geometry": self.geometry,
            "polytope": self.polytope.to_json_value(),
            "defining_faces": self.defining_set(),
            "coloring": coloring,
            "expected_branch": self.expected_branch.as_ref().map(summary_json),
        })
    }

    /// Runs every check; `enumerated` is the list of defining sets found by
    /// exhaustive search for this polytope and kind, when the search applies.
    pub fn verify(&self, enumerated: Option<&[Vec<FacetSet>]>) -> Result<EntryReport> {
        let h = &self.subcomplex;
        let mut failures = Vec::new();
        let mut check = |ok: bool, what: &str| {
            if !ok {
                failures.push(what.to_owned());
            }
            ok
        };
        let hamiltonian = check(is_hamiltonian(h.ambient(), h.coarse())?, "is_hamiltonian");
        let kind = check(
            is_cnk(h.coarse())? && h.coarse().num_facets() == self.kind && h.kind() == Some(self.kind),
            "kind",
        );
        let induced = canonical_induced(h)?;
        let free = check(induced.is_free(), "induced coloring free");
        let closed = check(induced.is_closed_manifold(), "induced coloring closed");
        let fvector = check(fvector_identity_check(h)?.holds, "f-vector identity");
        let (branch, branch_summary) = if self.dim() >= 3 {
            let comps = branch_set(h)?;
            let consistent = comps.iter().all(|c| c.consistent());
            let got = summary(comps.into_iter().map(|c| (c.betti.values, c.multiplicity)));
            let matches = self.expected_branch.as_ref().map_or(true, |e| e == &got);
            (check(consistent && matches, "branch set"), Some(got))
        } else {
            (true, None)
        };
        let structural = structural_report(h)?;
        let structural_ok = check(structural.ok(), "structural suite");
        let found = enumerated.map(|sets| sets.contains(&self.defining_set()));
        if let Some(f) = found {
            check(f, "found by enumeration");
        }
        Ok(EntryReport {
            name: self.name.clone(),
            hamiltonian,
            kind,
            induced_free: free,
            induced_closed: closed,
            fvector,
            branch,
            branch_summary,
            structural: structural_ok,
            enumerated: found,
            failures,
        })
    }
}

fn summary_json(s: &BranchSummary) -> serde_json::Value {
    s.iter().map(|(b, c)| json!({"betti": b, "copies": c})).collect()
}

fn serialize_summary<S: serde::Serializer>(s: &Option<BranchSummary>, ser: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize;
    s.as_ref().map(summary_json).serialize(ser)
}

fn summary_from_json(v: &serde_json::Value) -> Option<BranchSummary> {
    let mut out = BranchSummary::new();
    for item in v.as_array()? {
        let b = item["betti"].as_array()?.iter().map(|x| x.as_u64().map(|x| x as usize)).collect::<Option<_>>()?;
        out.insert(b, item["copies"].as_u64()?);
    }
    Some(out)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct EntryReport {
    pub name: String,
    pub hamiltonian: bool,
    pub kind: bool,
    pub induced_free: bool,
    pub induced_closed: bool,
    pub fvector: bool,
    pub branch: bool,
    #[serde(serialize_with = "serialize_summary")]
    pub branch_summary: Option<BranchSummary>,
    pub structural: bool,
    /// None when the search does not apply (n > 4).
    pub enumerated: Option<bool>,
    pub failures: Vec<String>,
}

impl EntryReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Vertex j of P_k lies on edges j and j+1.
fn polygon_vertex(offset: usize, k: usize, j: usize) -> FacetSet {
    FacetSet::from_indices([offset + j % k, offset + (j + 1) % k])
}

/// Δⁿ with the single defining face F₀ ∩ F₁.
pub fn simplex_entry(n: usize) -> Result<CatalogEntry> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("simplex entries need n ≥ 3, got {n}")));
    }
    let geometry = format!("S{}", superscript(n));
    CatalogEntry::from_faces(
        format!("simplex{n}"),
        simplex(n)?,
        &[FacetSet::from_indices([0, 1])],
        n,
        Some(&geometry),
        Some(summary([spheres(n - 2, 1)])),
    )
}

/// Δ³ with two opposite edges: the complement of a Hamiltonian 4-cycle.
pub fn simplex_cycle_entry() -> Result<CatalogEntry> {
    CatalogEntry::from_faces(
        "simplex3-cycle",
        simplex(3)?,
        &[FacetSet::from_indices([0, 1]), FacetSet::from_indices([2, 3])],
        2,
        Some("S³"),
        Some(summary([spheres(1, 2)])),
    )
}

/// Δ^{n−1} × I: facets 0..n from the simplex, n and n+1 the two ends.
pub fn prism_entry(n: usize, variant: PrismVariant) -> Result<CatalogEntry> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("prism entries need n ≥ 3, got {n}")));
    }
    let p = product(&simplex(n - 1)?, &simplex(1)?)?;
    let (faces, kind, tag) = match variant {
        PrismVariant::Single => (vec![FacetSet::from_indices([0, n])], n + 1, "single"),
        PrismVariant::Parallel => (vec![FacetSet::from_indices([0, n]), FacetSet::from_indices([0, n + 1])], n, "parallel"),
        PrismVariant::Skew => (vec![FacetSet::from_indices([0, n]), FacetSet::from_indices([1, n + 1])], n, "skew"),
    };
    let geometry = format!("S{}×R", superscript(n - 1));
    CatalogEntry::from_faces(
        format!("prism{n}-{tag}"),
        p,
        &faces,
        kind,
        Some(&geometry),
        Some(summary([spheres(n - 2, 2)])),
    )
}

/// Δ^p × Δ^q with the face Δ^{p−1} × Δ^{q−1}.
pub fn product_of_simplices_entry(p: usize, q: usize) -> Result<CatalogEntry> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidParameter(format!("need p, q ≥ 1, got ({p}, {q})")));
    }
    let poly = product(&simplex(p)?, &simplex(q)?)?;
    let geometry = match (p, q) {
        (1, _) | (_, 1) => format!("S{}×R", superscript(p + q - 1)),
        _ => format!("S{}×S{}", superscript(p), superscript(q)),
    };
    CatalogEntry::from_faces(
        format!("simplex{p}xsimplex{q}"),
        poly,
        &[FacetSet::from_indices([0, p + 1])],
        p + q + 1,
        Some(&geometry),
        Some(summary([sphere_product(p - 1, q - 1)])),
    )
}

/// Δ^p × Δ^q × I with Δ^{p−1} × Δ^q × {0} and Δ^p × Δ^{q−1} × {1}.
pub fn product_simplices_interval_entry(p: usize, q: usize) -> Result<CatalogEntry> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidParameter(format!("need p, q ≥ 1, got ({p}, {q})")));
    }
    let poly = product(&product(&simplex(p)?, &simplex(q)?)?, &simplex(1)?)?;
    let ends = p + q + 2;
    let flat = |d: usize| if d == 0 { "R".to_owned() } else { format!("S{}", superscript(d)) };
    let geometry = match (p, q) {
        (1, 1) => "R³".to_owned(),
        (1, d) | (d, 1) => format!("{}×R²", flat(d)),
        _ => format!("S{}×S{}×R", superscript(p), superscript(q)),
    };
    CatalogEntry::from_faces(
        format!("simplex{p}xsimplex{q}xI"),
        poly,
        &[FacetSet::from_indices([0, ends]), FacetSet::from_indices([p + 1, ends + 1])],
        p + q + 2,
        Some(&geometry),
        Some(summary([sphere_product(p - 1, q), sphere_product(p, q - 1)])),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolygonKind {
    /// C(n, n+1)
    Upper,
    /// C(n, n)
    Middle,
}

/// Δ^p × P_k: simplex facets 0..=p, edge j of the polygon is facet p+1+j.
///
/// C(n, n+1) uses Δ^p × v_j for the first k−3 vertices and Δ^{p−1} × the
/// edge joining the next two; C(n, n) adds Δ^p × the last vertex.
pub fn simplex_times_polygon_entry(p: usize, k: usize, kind: PolygonKind) -> Result<CatalogEntry> {
    if p < 1 || k < 3 {
        return Err(Error::InvalidParameter(format!("need p ≥ 1 and k ≥ 3, got ({p}, {k})")));
    }
    let n = p + 2;
    let poly = product(&simplex(p)?, &polygon(k)?)?;
    let off = p + 1;
    let mut faces: Vec<FacetSet> = (0..k - 3).map(|j| polygon_vertex(off, k, j)).collect();
    faces.push(FacetSet::from_indices([0, off + k - 2]));
    let (kind_n, extra) = match kind {
        PolygonKind::Upper => (n + 1, 2 * (k as u64 - 3)),
        PolygonKind::Middle => {
            faces.push(polygon_vertex(off, k, k - 1));
            (n, k as u64 - 2)
        }
    };
    let plane = match k {
        3 => format!("S{}", superscript(2)),
        4 => "R²".to_owned(),
        _ => "L²".to_owned(),
    };
    let geometry = if p == 1 { format!("{plane}×R") } else { format!("S{}×{plane}", superscript(p)) };
    let tag = if kind == PolygonKind::Upper { "upper" } else { "middle" };
    CatalogEntry::from_faces(
        format!("simplex{p}xpolygon{k}-{tag}"),
        poly,
        &faces,
        kind_n,
        Some(&geometry),
        Some(summary([spheres(n - 2, extra), sphere_product(p - 1, 1)])),
    )
}

/// P_k with defining vertices v_0, …, v_{k−4}: a C(2, 3)-subcomplex.
pub fn polygon_entry(k: usize) -> Result<CatalogEntry> {
    if k < 4 {
        return Err(Error::InvalidParameter(format!("polygon entries need k ≥ 4, got {k}")));
    }
    let faces: Vec<FacetSet> = (0..k - 3).map(|j| polygon_vertex(0, k, j)).collect();
    CatalogEntry::from_faces(format!("polygon{k}"), polygon(k)?, &faces, 3, None, None)
}

/// Δ^k × P with the faces Δ^{k−1} × F_i and Δ^k × M_q, where F_i is the
/// first simplex facet of P missing every M_q.
pub fn lift_faces(p: &SimplePolytope, faces: &[FacetSet], k: usize) -> Result<(SimplePolytope, Vec<FacetSet>)> {
    let n = p.dim();
    if k < 1 {
        return Err(Error::InvalidParameter("lift needs k ≥ 1".into()));
    }
    let tri = if n >= 2 { Some(simplex(n - 1)?) } else { None };
    let is_simplex = |i: usize| match &tri {
        None => true,
        Some(t) => p.face_polytope(FacetSet::singleton(i)).map_or(false, |(q, _)| q.isomorphism(t).is_some()),
    };
    let fi = (0..p.num_facets())
        .find(|&i| faces.iter().all(|m| !p.is_face(m.with(i))) && is_simplex(i))
        .ok_or_else(|| Error::Hypothesis("every simplex facet meets a defining face".into()))?;
    let shift = k + 1;
    let mut lifted = vec![FacetSet::from_indices([0, shift + fi])];
    lifted.extend(faces.iter().map(|m| FacetSet(m.0 << shift)));
    Ok((product(&simplex(k)?, p)?, lifted))
}

/// Lift of a C(n, n+1) entry to a C(n+k, n+k+1) entry on Δ^k × P.
pub fn prism_lift_entry(source: &CatalogEntry, k: usize) -> Result<CatalogEntry> {
    let n = source.dim();
    if source.kind != n + 1 {
        return Err(Error::Hypothesis(format!("{} is not a C(n, n+1) entry", source.name)));
    }
    let (poly, lifted) = lift_faces(&source.polytope, &source.defining_set(), k)
        .map_err(|e| Error::Hypothesis(format!("{}: {e}", source.name)))?;
    CatalogEntry::from_faces(format!("lift{k}({})", source.name), poly, &lifted, n + k + 1, None, None)
}

/// P₅ × P₅ with the lexicographically least defining set of five quadrangles.
pub fn pentagon_square_entry() -> Result<CatalogEntry> {
    let p = product(&polygon(5)?, &polygon(5)?)?;
    let e = enumerate_hamiltonian_cnk(Arc::new(p.clone()), 5, true)?;
    let mut sets: Vec<Vec<FacetSet>> = e
        .subcomplexes
        .iter()
        .map(|h| {
            let mut s: Vec<FacetSet> = h.defining_faces().iter().map(|f| f.p_faces[0]).collect();
            s.sort();
            s
        })
        .filter(|s| s.len() == 5 && s.iter().all(|&f| p.face_vertices(f).map_or(false, |v| v.count_ones() == 4)))
        .collect();
    sets.sort();
    let first = sets.into_iter().next().ok_or_else(|| Error::Invariant("P5xP5: no five-quadrangle C(4, 5)".into()))?;
    CatalogEntry::from_faces("pentagon-square", p, &first, 5, Some("L²×L²"), Some(summary([(vec![1, 2, 1], 5)])))
}

/// (n−2)-faces of P disjoint from every defining face of `entry`.
pub fn disjoint_faces(entry: &CatalogEntry) -> Vec<FacetSet> {
    let p = &entry.polytope;
    let n = p.dim();
    let verts: Vec<_> = entry.subcomplex.defining_faces().iter().map(|f| f.vertices.clone()).collect();
    p.faces_of_dim(n - 2)
        .into_iter()
        .filter(|&g| {
            let gv = p.face_vertices(g).unwrap();
            verts.iter().all(|v| !v.intersects(gv))
        })
        .collect()
}

/// Adds the first (n−2)-face G disjoint from all defining faces of a
/// C(n, n+1) entry; G must be a simplex and the result is C(n, n).
pub fn add_disjoint_face_entry(entry: &CatalogEntry, expected: Option<BranchSummary>) -> Result<CatalogEntry> {
    let n = entry.dim();
    if entry.kind != n + 1 {
        return Err(Error::Hypothesis(format!("{} is not a C(n, n+1) entry", entry.name)));
    }
    let g = *disjoint_faces(entry)
        .first()
        .ok_or_else(|| Error::Hypothesis(format!("no (n-2)-face of {} misses the defining faces", entry.name)))?;
    let (gp, _) = entry.polytope.face_polytope(g)?;
    if n >= 3 && gp.isomorphism(&simplex(n - 2)?).is_none() {
        return Err(Error::Invariant(format!("{:?} misses the defining faces but is not a simplex", g.to_vec())));
    }
    let mut faces = entry.defining_set();
    faces.push(g);
    CatalogEntry::from_faces(
        format!("{}+{:?}", entry.name, g.to_vec()),
        (*entry.polytope).clone(),
        &faces,
        n,
        entry.geometry.as_deref(),
        expected,
    )
}

/// Δⁿ with pairwise disjoint faces conv(V_q) cut off in turn; each cut
/// contributes the face F ∩ F_i with F the new facet and i the least facet
/// of the cut face.
pub fn cut_simplex_entry(n: usize, vertex_sets: &[Vec<usize>]) -> Result<CatalogEntry> {
    let mut p = simplex(n)?;
    let mut used = FacetSet(0);
    let mut faces = Vec::new();
    let mut parts = Vec::new();
    for vs in vertex_sets {
        let v = FacetSet::from_indices(vs.iter().copied());
        if vs.is_empty() || vs.iter().any(|&x| x > n) || v.len() + 1 > n || v.meets(used) {
            return Err(Error::InvalidParameter(format!("bad or overlapping vertex set {vs:?}")));
        }
        used = used.union(v);
        // conv(V) is the intersection of the facets opposite the other vertices
        let s = FacetSet::from_indices((0..=n).filter(|i| !v.contains(*i)));
        let m = p.num_facets();
        p = cut_face(&p, s)?;
        faces.push(FacetSet::from_indices([s.iter().next().unwrap(), m]));
        let d = v.len() - 1;
        parts.push(sphere_product(d, n - d - 2));
    }
    let tag: Vec<String> = vertex_sets.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<String>()).collect();
    CatalogEntry::from_faces(format!("simplex{n}-cut[{}]", tag.join(",")), p, &faces, n + 1, None, Some(summary(parts)))
}

/// After cutting F_S off P, each face F ∩ F_i (i ∈ S) defines a coarsening
/// whose facets, faces and incidences are those of ∂P.
pub fn cut_face_reproduces_boundary(p: &SimplePolytope, s: FacetSet) -> Result<bool> {
    let m = p.num_facets();
    let n = p.dim();
    let cut = Arc::new(cut_face(p, s)?);
    let c1 = Arc::new(boundary_complex(cut.clone()));
    for i in s.iter() {
        let id = face_index(&c1, FacetSet::from_indices([i, m]))?;
        let h = subcomplex_from_defining_set(c1.clone(), &[id])?;
        let c2 = h.coarse();
        if c2.num_facets() != m {
            return Ok(false);
        }
        // each coarse facet holds exactly one old facet
        let mut back = vec![usize::MAX; m];
        for (a, f) in c2.facets().iter().enumerate() {
            let olds: Vec<usize> = f.pfacets.iter().filter(|&j| j < m).collect();
            if olds.len() != 1 {
                return Ok(false);
            }
            back[a] = olds[0];
        }
        for k in 0..n {
            let mut got: Vec<FacetSet> =
                c2.faces(k).iter().map(|f| FacetSet::from_indices(f.facet_ids.iter().map(|&a| back[a]))).collect();
            got.sort();
            let mut want = p.faces_of_dim(k);
            want.sort();
            if got != want {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

type Builder = fn() -> Result<CatalogEntry>;

fn builders() -> Vec<(&'static str, Builder)> {
    vec![
        ("simplex3", || simplex_entry(3)),
        ("simplex3-cycle", simplex_cycle_entry),
        ("simplex4", || simplex_entry(4)),
        ("prism4-single", || prism_entry(4, PrismVariant::Single)),
        ("prism4-parallel", || prism_entry(4, PrismVariant::Parallel)),
        ("prism4-skew", || prism_entry(4, PrismVariant::Skew)),
        ("simplex2xsimplex2", || product_of_simplices_entry(2, 2)),
        ("simplex2xsimplex2-middle", || {
            add_disjoint_face_entry(&product_of_simplices_entry(2, 2)?, Some(summary([spheres(2, 1), sphere_product(1, 1)])))
        }),
        ("simplex1xsimplex1xI", || product_simplices_interval_entry(1, 1)),
        ("simplex2xsimplex1xI", || product_simplices_interval_entry(2, 1)),
        ("simplex1xpolygon5-upper", || simplex_times_polygon_entry(1, 5, PolygonKind::Upper)),
        ("simplex2xpolygon4-upper", || simplex_times_polygon_entry(2, 4, PolygonKind::Upper)),
        ("simplex2xpolygon4-middle", || simplex_times_polygon_entry(2, 4, PolygonKind::Middle)),
        ("simplex2xpolygon5-upper", || simplex_times_polygon_entry(2, 5, PolygonKind::Upper)),
        ("simplex2xpolygon5-middle", || simplex_times_polygon_entry(2, 5, PolygonKind::Middle)),
        ("simplex4-cut[4,01]", || cut_simplex_entry(4, &[vec![4], vec![0, 1]])),
        ("pentagon-square", pentagon_square_entry),
    ]
}

/// The full catalog, built in parallel with entries kept in a fixed order.
#[derive(Debug)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    reports: OnceLock<std::result::Result<Vec<EntryReport>, Error>>,
}

impl Catalog {
    pub fn build() -> Result<Self> {
        let entries = builders()
            .into_par_iter()
            .map(|(name, b)| {
                b().map(|mut e| {
                    e.name = name.to_owned();
                    e
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Catalog::from_entries(entries))
    }

    pub fn from_entries(entries: Vec<CatalogEntry>) -> Self {
        Catalog { entries, reports: OnceLock::new() }
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Exhaustive enumerations for every (polytope, kind) with n ≤ 4, one
    /// search per distinct pair.
    fn enumerations(&self) -> Result<HashMap<(Vec<FacetSet>, usize), Vec<Vec<FacetSet>>>> {
        let mut keys: Vec<(Vec<FacetSet>, usize, Arc<SimplePolytope>)> = Vec::new();
        for e in &self.entries {
            let key = (e.polytope.vertices().to_vec(), e.kind);
            if e.dim() <= 4 && !keys.iter().any(|(v, k, _)| (v, k) == (&key.0, &key.1)) {
                keys.push((key.0, key.1, e.polytope.clone()));
            }
        }
        keys.into_par_iter()
            .map(|(v, k, p)| {
                let found = enumerate_hamiltonian_cnk(p, k, false)?;
                let sets = found
                    .subcomplexes
                    .iter()
                    .map(|h| {
                        let mut s: Vec<FacetSet> = h.defining_faces().iter().map(|f| f.p_faces[0]).collect();
                        s.sort();
                        s
                    })
                    .collect();
                Ok(((v, k), sets))
            })
            .collect()
    }

    /// One report per entry, computed once.
    pub fn reports(&self) -> Result<&[EntryReport]> {
        let r = self.reports.get_or_init(|| {
            let enums = self.enumerations()?;
            self.entries
                .par_iter()
                .map(|e| {
                    let key = (e.polytope.vertices().to_vec(), e.kind);
                    e.verify(enums.get(&key).map(|v| v.as_slice()))
                })
                .collect()
        });
        r.as_deref().map_err(Clone::clone)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({ "entries": self.entries.iter().map(|e| e.to_json_value()).collect::<Vec<_>>() })
    }

    /// Rebuilds the catalog and compares each exported entry with it,
    /// naming the first entry that differs.
    pub fn verify_bundle(bundle: &serde_json::Value) -> Result<Vec<String>> {
        let fresh = Catalog::build()?;
        let entries = bundle["entries"].as_array().ok_or_else(|| Error::Parse("bundle has no entries array".into()))?;
        let mut names = Vec::new();
        for item in entries {
            let name = item["name"].as_str().ok_or_else(|| Error::Parse("entry without a name".into()))?;
            let e = fresh.get(name).ok_or_else(|| Error::Invariant(format!("{name}: not a catalog entry")))?;
            if item["polytope"] != e.polytope.to_json_value() {
                return Err(Error::Invariant(format!("{name}: polytope differs")));
            }
            if item["defining_faces"] != serde_json::to_value(e.defining_set()).unwrap() || item["kind"] != e.kind {
                return Err(Error::Invariant(format!("{name}: subcomplex differs")));
            }
            let stored = summary_from_json(&item["expected_branch"]);
            if stored.as_ref() != e.expected_branch.as_ref() || stored.is_some() && e.branch_summary()? != stored.unwrap() {
                return Err(Error::Invariant(format!("{name}: branch summary differs")));
            }
            names.push(name.to_owned());
        }
        Ok(names)
    }
}

/// Every 4-polytope the catalog touches, plus the 4-cube.
pub fn four_polytopes(catalog: &Catalog) -> Result<Vec<(String, Arc<SimplePolytope>)>> {
    let mut out: Vec<(String, Arc<SimplePolytope>)> = vec![("cube4".into(), Arc::new(cube(4)?))];
    for e in catalog.entries.iter().filter(|e| e.dim() == 4) {
        if !out.iter().any(|(_, p)| p.vertices() == e.polytope.vertices()) {
            out.push((e.name.clone(), e.polytope.clone()));
        }
    }
    Ok(out)
}
