//! Combinatorial simple polytopes.
//!
//! A simple n-polytope is stored through its vertex–facet incidences: each
//! vertex is the set of the n facets containing it. A face is the set S of
//! facets containing it; it is nonempty iff S lies in some vertex, and then
//! its dimension is n − |S|.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// A set of facet indices (at most 64 facets).
///
/// Ordered lexicographically by the ascending sequence of its indices, so
/// `{0,1} < {0,1,2} < {0,2} < {1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FacetSet(pub u64);

impl FacetSet {
    pub const EMPTY: FacetSet = FacetSet(0);

    pub fn singleton(i: usize) -> Self {
        FacetSet(1 << i)
    }

    pub fn from_indices(ix: impl IntoIterator<Item = usize>) -> Self {
        FacetSet(ix.into_iter().fold(0, |acc, i| {
            assert!(i < 64, "facet index {i} exceeds the 64-facet limit");
            acc | 1 << i
        }))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn is_subset(self, other: FacetSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: FacetSet) -> FacetSet {
        FacetSet(self.0 | other.0)
    }

    pub fn intersection(self, other: FacetSet) -> FacetSet {
        FacetSet(self.0 & other.0)
    }

    pub fn meets(self, other: FacetSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn minus(self, other: FacetSet) -> FacetSet {
        FacetSet(self.0 & !other.0)
    }

    pub fn with(self, i: usize) -> FacetSet {
        FacetSet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> FacetSet {
        FacetSet(self.0 & !(1 << i))
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut w = self.0;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(t)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Image under a facet permutation.
    pub fn map(self, perm: &[usize]) -> FacetSet {
        FacetSet::from_indices(self.iter().map(|i| perm[i]))
    }

    /// All subsets of the given size.
    pub fn subsets_of_size(self, k: usize) -> Vec<FacetSet> {
        let elems = self.to_vec();
        let mut out = Vec::new();
        fn rec(elems: &[usize], k: usize, start: usize, acc: u64, out: &mut Vec<FacetSet>) {
            if k == 0 {
                out.push(FacetSet(acc));
                return;
            }
            for i in start..elems.len() {
                if elems.len() - i < k {
                    break;
                }
                rec(elems, k - 1, i + 1, acc | 1 << elems[i], out);
            }
        }
        rec(&elems, k, 0, 0, &mut out);
        out
    }
}

impl Ord for FacetSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.0 ^ other.0;
        if d == 0 {
            return Ordering::Equal;
        }
        let t = d.trailing_zeros();
        let above = if t == 63 { 0 } else { !0u64 << (t + 1) };
        if self.0 >> t & 1 == 1 {
            // self continues with t, other with something larger or ends
            if other.0 & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.0 & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for FacetSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FacetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())
    }
}

impl Serialize for FacetSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FacetSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&i) = v.iter().find(|&&i| i >= 64) {
            return Err(serde::de::Error::custom(format!("facet index {i} exceeds the 64-facet limit")));
        }
        Ok(FacetSet::from_indices(v))
    }
}

/// The first violated polytope invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    InvalidDimension,
    TooManyFacets(usize),
    DuplicateFacetName(String),
    FacetIndexOutOfRange { vertex: usize, index: usize },
    WrongVertexSize { vertex: usize, size: usize },
    DuplicateVertex(usize),
    EmptyFacet(usize),
    EdgeMultiplicity { edge: Vec<usize>, count: usize },
    Disconnected,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidDimension => write!(f, "dimension must be at least 1"),
            Violation::TooManyFacets(m) => write!(f, "{m} facets exceed the limit of 64"),
            Violation::DuplicateFacetName(n) => write!(f, "duplicate facet name {n}"),
            Violation::FacetIndexOutOfRange { vertex, index } => {
                write!(f, "vertex {vertex} uses facet index {index} out of range")
            }
            Violation::WrongVertexSize { vertex, size } => {
                write!(f, "vertex {vertex} lies on {size} facets (not simple)")
            }
            Violation::DuplicateVertex(v) => write!(f, "vertex {v} is repeated"),
            Violation::EmptyFacet(i) => write!(f, "empty-facet: facet {i} contains no vertex"),
            Violation::EdgeMultiplicity { edge, count } => {
                write!(f, "edge-multiplicity: edge {edge:?} lies on {count} vertices (expected 2)")
            }
            Violation::Disconnected => write!(f, "vertex graph is disconnected"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimplePolytope {
    dim: usize,
    facet_names: Vec<String>,
    vertices: Vec<FacetSet>,
    faces: HashMap<FacetSet, BitVector>,
    proper: Vec<FacetSet>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    facets: Vec<String>,
    vertices: Vec<Vec<usize>>,
}

pub fn validate_parts(dim: usize, names: &[String], vertices: &[Vec<usize>]) -> std::result::Result<(), Violation> {
    if dim < 1 {
        return Err(Violation::InvalidDimension);
    }
    let m = names.len();
    if m > 64 {
        return Err(Violation::TooManyFacets(m));
    }
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Violation::DuplicateFacetName(n.clone()));
        }
    }
    let mut sets = Vec::with_capacity(vertices.len());
    let mut seen = HashSet::new();
    for (vi, v) in vertices.iter().enumerate() {
        if let Some(&i) = v.iter().find(|&&i| i >= m) {
            return Err(Violation::FacetIndexOutOfRange { vertex: vi, index: i });
        }
        let s = FacetSet::from_indices(v.iter().copied());
        if s.len() != dim || v.len() != dim {
            return Err(Violation::WrongVertexSize { vertex: vi, size: s.len() });
        }
        if !seen.insert(s) {
            return Err(Violation::DuplicateVertex(vi));
        }
        sets.push(s);
    }
    let used = sets.iter().fold(FacetSet::EMPTY, |a, &s| a.union(s));
    if let Some(i) = (0..m).find(|&i| !used.contains(i)) {
        return Err(Violation::EmptyFacet(i));
    }
    let mut edges: BTreeMap<FacetSet, Vec<usize>> = BTreeMap::new();
    for (vi, &s) in sets.iter().enumerate() {
        for e in s.subsets_of_size(dim - 1) {
            edges.entry(e).or_default().push(vi);
        }
    }
    for (e, vs) in &edges {
        if vs.len() != 2 {
            return Err(Violation::EdgeMultiplicity { edge: e.to_vec(), count: vs.len() });
        }
    }
    let mut uf = UnionFind::new(sets.len());
    for vs in edges.values() {
        uf.union(vs[0], vs[1]);
    }
    if sets.len() > 1 && (1..sets.len()).any(|v| uf.find(v) != uf.find(0)) {
        return Err(Violation::Disconnected);
    }
    Ok(())
}

/// Disjoint-set forest with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Component label per element: the index of the component in order of
    /// first appearance.
    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut map = HashMap::new();
        let mut out = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            let next = map.len();
            out.push(*map.entry(r).or_insert(next));
        }
        (out, map.len())
    }
}

fn default_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("F{i}")).collect()
}

impl SimplePolytope {
    pub fn new(dim: usize, facet_names: Vec<String>, vertices: Vec<Vec<usize>>) -> Result<Self> {
        validate_parts(dim, &facet_names, &vertices).map_err(|v| Error::InvalidPolytope(v.to_string()))?;
        let mut vs: Vec<FacetSet> = vertices.into_iter().map(FacetSet::from_indices).collect();
        vs.sort();
        let mut faces: HashMap<FacetSet, BitVector> = HashMap::new();
        let nv = vs.len();
        for (vi, &v) in vs.iter().enumerate() {
            for sub in all_subsets(v) {
                faces.entry(sub).or_insert_with(|| BitVector::zeros(nv)).set(vi, true);
            }
        }
        let mut proper: Vec<FacetSet> = faces.keys().copied().filter(|s| !s.is_empty()).collect();
        proper.sort();
        Ok(SimplePolytope { dim, facet_names, vertices: vs, faces, proper })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_facets(&self) -> usize {
        self.facet_names.len()
    }

    pub fn facet_names(&self) -> &[String] {
        &self.facet_names
    }

    pub fn facet_index(&self, name: &str) -> Option<usize> {
        self.facet_names.iter().position(|n| n == name)
    }

    pub fn all_facets(&self) -> FacetSet {
        FacetSet::from_indices(0..self.num_facets())
    }

    /// Vertices as facet sets, in lexicographic order.
    pub fn vertices(&self) -> &[FacetSet] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, v: FacetSet) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    /// Whether F_S is nonempty. The empty set is the whole polytope.
    pub fn is_face(&self, s: FacetSet) -> bool {
        self.faces.contains_key(&s)
    }

    pub fn facets_meet(&self, i: usize, j: usize) -> bool {
        self.is_face(FacetSet::singleton(i).with(j))
    }

    /// Vertices lying on F_S, as a bitset over vertex indices.
    pub fn face_vertices(&self, s: FacetSet) -> Option<&BitVector> {
        self.faces.get(&s)
    }

    /// All nonempty faces of dimension k in lexicographic order. k = n gives
    /// the improper face (empty facet set), k = −1 gives nothing.
    pub fn enumerate_faces(&self, k: i64) -> Result<Vec<FacetSet>> {
        let n = self.dim as i64;
        if k < -1 || k > n {
            return Err(Error::InvalidParameter(format!("face dimension {k} outside [-1, {n}]")));
        }
        if k == -1 {
            return Ok(Vec::new());
        }
        let codim = (n - k) as usize;
        let mut out: Vec<FacetSet> = self.faces.keys().copied().filter(|s| s.len() == codim).collect();
        out.sort();
        Ok(out)
    }

    pub fn faces_of_dim(&self, k: usize) -> Vec<FacetSet> {
        self.enumerate_faces(k as i64).unwrap()
    }

    /// All nonempty proper faces (dimensions 0..n−1), lexicographic.
    pub fn proper_faces(&self) -> &[FacetSet] {
        &self.proper
    }

    /// f_0 … f_{n−1}.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim];
        for s in self.faces.keys() {
            if !s.is_empty() {
                f[self.dim - s.len()] += 1;
            }
        }
        f
    }

    /// Number of 2-faces with each number of edges.
    pub fn gonality_census(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        if self.dim < 2 {
            return out;
        }
        for s in self.faces_of_dim(2) {
            *out.entry(self.faces[&s].count_ones()).or_insert(0) += 1;
        }
        out
    }

    /// The face F_S as a simple polytope, with the original indices of its facets.
    pub fn face_polytope(&self, s: FacetSet) -> Result<(SimplePolytope, Vec<usize>)> {
        if !self.is_face(s) || s.len() >= self.dim {
            return Err(Error::InvalidParameter(format!("{s:?} is not a face of positive dimension")));
        }
        let verts: Vec<FacetSet> = self.vertices.iter().copied().filter(|v| s.is_subset(*v)).collect();
        let used = verts.iter().fold(FacetSet::EMPTY, |a, &v| a.union(v.minus(s)));
        let orig: Vec<usize> = used.to_vec();
        let pos: HashMap<usize, usize> = orig.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let names = orig.iter().map(|&i| self.facet_names[i].clone()).collect();
        let vs = verts.iter().map(|v| v.minus(s).iter().map(|i| pos[&i]).collect()).collect();
        Ok((SimplePolytope::new(self.dim - s.len(), names, vs)?, orig))
    }

    fn vertices_by_max(&self) -> Vec<Vec<FacetSet>> {
        let mut by_max = vec![Vec::new(); self.num_facets()];
        for &v in &self.vertices {
            by_max[63 - v.0.leading_zeros() as usize].push(v);
        }
        by_max
    }

    /// Facet bijections self → other carrying vertices to vertices, found by
    /// backtracking in facet order. Stops after `limit` solutions.
    fn isomorphisms_into(&self, other: &SimplePolytope, limit: usize) -> Vec<Vec<usize>> {
        let m = self.num_facets();
        if m != other.num_facets() || self.dim != other.dim || self.num_vertices() != other.num_vertices() {
            return Vec::new();
        }
        let deg_a: Vec<usize> = (0..m).map(|i| self.faces[&FacetSet::singleton(i)].count_ones()).collect();
        let deg_b: Vec<usize> = (0..m).map(|i| other.faces[&FacetSet::singleton(i)].count_ones()).collect();
        let by_max = self.vertices_by_max();
        let other_vs: HashSet<FacetSet> = other.vertices.iter().copied().collect();
        let mut perm = vec![usize::MAX; m];
        let mut used = vec![false; m];
        let mut out = Vec::new();
        #[allow(clippy::too_many_arguments)]
        fn rec(
            i: usize,
            a: &SimplePolytope,
            b: &SimplePolytope,
            deg_a: &[usize],
            deg_b: &[usize],
            by_max: &[Vec<FacetSet>],
            other_vs: &HashSet<FacetSet>,
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            out: &mut Vec<Vec<usize>>,
            limit: usize,
        ) {
            let m = perm.len();
            if out.len() >= limit {
                return;
            }
            if i == m {
                out.push(perm.clone());
                return;
            }
            for j in 0..m {
                if used[j] || deg_a[i] != deg_b[j] {
                    continue;
                }
                if (0..i).any(|p| a.facets_meet(p, i) != b.facets_meet(perm[p], j)) {
                    continue;
                }
                perm[i] = j;
                if by_max[i].iter().all(|v| other_vs.contains(&v.map(perm))) {
                    used[j] = true;
                    rec(i + 1, a, b, deg_a, deg_b, by_max, other_vs, perm, used, out, limit);
                    used[j] = false;
                }
                perm[i] = usize::MAX;
            }
        }
        rec(0, self, other, &deg_a, &deg_b, &by_max, &other_vs, &mut perm, &mut used, &mut out, limit);
        out
    }

    /// All facet permutations preserving the vertex set; `perm[i]` is the image of facet i.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        self.isomorphisms_into(self, usize::MAX)
    }

    /// A facet bijection onto `other` carrying vertices to vertices, if any.
    pub fn isomorphism(&self, other: &SimplePolytope) -> Option<Vec<usize>> {
        self.isomorphisms_into(other, 1).pop()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(PolytopeJson {
            dim: self.dim,
            facets: self.facet_names.clone(),
            vertices: self.vertices.iter().map(|v| v.to_vec()).collect(),
        })
        .unwrap()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: PolytopeJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        SimplePolytope::new(j.dim, j.facets, j.vertices)
    }
}

fn all_subsets(s: FacetSet) -> impl Iterator<Item = FacetSet> {
    // standard submask enumeration, including s and the empty set
    let full = s.0;
    let mut sub = Some(full);
    std::iter::from_fn(move || {
        let cur = sub?;
        sub = if cur == 0 { None } else { Some((cur - 1) & full) };
        Some(FacetSet(cur))
    })
}

pub fn simplex(n: usize) -> Result<SimplePolytope> {
    if n < 1 {
        return Err(Error::InvalidDimension(format!("simplex of dimension {n}")));
    }
    let all = FacetSet::from_indices(0..=n);
    let vs = all.subsets_of_size(n).into_iter().map(|s| s.to_vec()).collect();
    SimplePolytope::new(n, default_names(n + 1), vs)
}

/// Facets 2i and 2i+1 are the opposite pair of coordinate i.
pub fn cube(n: usize) -> Result<SimplePolytope> {
    if n < 1 {
        return Err(Error::InvalidDimension(format!("cube of dimension {n}")));
    }
    if 2 * n > 64 {
        return Err(Error::InvalidParameter(format!("cube of dimension {n} has too many facets")));
    }
    let vs = (0..1u64 << n).map(|bits| (0..n).map(|i| 2 * i + (bits >> i & 1) as usize).collect()).collect();
    SimplePolytope::new(n, default_names(2 * n), vs)
}

/// Facet i is the edge between vertices {i−1, i} and {i, i+1} (mod k).
pub fn polygon(k: usize) -> Result<SimplePolytope> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("polygon with {k} sides")));
    }
    let vs = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    SimplePolytope::new(2, default_names(k), vs)
}

/// Facets of P followed by facets of Q. Names are kept when they are
/// disjoint and prefixed with `a.` and `b.` otherwise.
pub fn product(p: &SimplePolytope, q: &SimplePolytope) -> Result<SimplePolytope> {
    let mp = p.num_facets();
    let clash = p.facet_names.iter().any(|n| q.facet_names.contains(n));
    let names: Vec<String> = if clash {
        p.facet_names.iter().map(|n| format!("a.{n}")).chain(q.facet_names.iter().map(|n| format!("b.{n}"))).collect()
    } else {
        p.facet_names.iter().chain(&q.facet_names).cloned().collect()
    };
    let mut vs = Vec::new();
    for u in &p.vertices {
        for v in &q.vertices {
            vs.push(u.iter().chain(v.iter().map(|j| j + mp)).collect());
        }
    }
    SimplePolytope::new(p.dim + q.dim, names, vs)
}

/// Cuts off the face F_S with a new facet, appended at index m.
pub fn cut_face(p: &SimplePolytope, s: FacetSet) -> Result<SimplePolytope> {
    let n = p.dim;
    let m = p.num_facets();
    if s.len() < 2 || !p.is_face(s) || s.len() > n {
        return Err(Error::InvalidCut(format!("{s:?} is not a nonempty face of codimension at least 2")));
    }
    if m >= 64 {
        return Err(Error::InvalidCut("too many facets".into()));
    }
    let mut vs: Vec<FacetSet> = Vec::new();
    for &v in &p.vertices {
        if !s.is_subset(v) {
            vs.push(v);
        } else {
            for i in s.iter() {
                vs.push(v.without(i).with(m));
            }
        }
    }
    let mut name = format!("F{}", m + 1);
    let mut bump = m + 1;
    while p.facet_names.contains(&name) {
        bump += 1;
        name = format!("C{bump}");
    }
    let mut names = p.facet_names.clone();
    names.push(name);
    let out = SimplePolytope::new(n, names, vs.iter().map(|v| v.to_vec()).collect())?;

    // Re-derive the face lattice from the intersection criterion.
    let old = p.all_facets();
    for size in 0..n {
        for j in old.subsets_of_size(size) {
            let meets_g = p.is_face(j.union(s));
            let inside_g = s.is_subset(j);
            let want = meets_g && !inside_g;
            if out.is_face(j.with(m)) != want {
                return Err(Error::CutMismatch(format!("{:?} with the new facet", j.to_vec())));
            }
        }
    }
    for size in 1..=n {
        for j in old.subsets_of_size(size) {
            let want = p.is_face(j) && !s.is_subset(j);
            if out.is_face(j) != want {
                return Err(Error::CutMismatch(format!("old face {:?}", j.to_vec())));
            }
        }
    }
    // The new facet is G × Δ^{k−1}.
    let (facet, _) = out.face_polytope(FacetSet::singleton(m))?;
    let model = if s.len() == n {
        simplex(n - 1)?
    } else {
        product(&p.face_polytope(s)?.0, &simplex(s.len() - 1)?)?
    };
    if facet.isomorphism(&model).is_none() {
        return Err(Error::CutMismatch("new facet is not the product of the face with a simplex".into()));
    }
    Ok(out)
}
