//! Rational homology of unions of closed faces, and of the spaces N(P, Λ).
//!
//! Betti numbers of a region are computed on the nerve of its maximal faces.
//! Closed faces of a polytope are balls and any intersection of faces is a
//! face or empty, so the nerve is homotopy equivalent to the region. The
//! order complex (barycentric subdivision) is kept as a second, much larger
//! model for cross-checking.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::coloring::{AffineColoring, VectorColoring};
use crate::complex::{ColoredComplex, Region};
use crate::error::{Error, Result};
use crate::gf2::{self, BitVector};
use crate::polytope::{FacetSet, SimplePolytope};

/// Rational Betti numbers b_0..b_d. An empty region has no entries and
/// `empty` set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct BettiVector {
    pub values: Vec<usize>,
    #[serde(skip)]
    pub empty: bool,
}

impl BettiVector {
    pub fn new(values: Vec<usize>) -> Self {
        BettiVector { values, empty: false }
    }

    pub fn sphere(d: usize) -> Self {
        let mut v = vec![0; d + 1];
        v[0] += 1;
        v[d] += 1;
        BettiVector::new(v)
    }

    pub fn point(d: usize) -> Self {
        let mut v = vec![0; d + 1];
        v[0] = 1;
        BettiVector::new(v)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.values.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }
}

/// Rank over Q of a sparse integer matrix given by rows of (column, value).
pub fn rational_rank(rows: &[Vec<(usize, i64)>]) -> usize {
    let mut rows: Vec<Vec<(usize, BigInt)>> = rows
        .iter()
        .map(|r| {
            let mut r: Vec<(usize, BigInt)> = r.iter().filter(|(_, v)| *v != 0).map(|&(c, v)| (c, BigInt::from(v))).collect();
            r.sort_by_key(|&(c, _)| c);
            r
        })
        .filter(|r| !r.is_empty())
        .collect();
    let mut rank = 0;
    // pivot on the lowest leading column each round
    while !rows.is_empty() {
        let (pi, _) = rows
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a[0].0.cmp(&b[0].0).then(a.len().cmp(&b.len())))
            .unwrap();
        let pivot = rows.swap_remove(pi);
        let (pc, pv) = pivot[0].clone();
        rank += 1;
        for r in rows.iter_mut() {
            if r[0].0 != pc {
                continue;
            }
            let rv = r[0].1.clone();
            *r = combine(r, &pv, &pivot, &rv);
        }
        rows.retain(|r| !r.is_empty());
    }
    rank
}

/// a·r − b·p, divided by the gcd of its entries.
fn combine(r: &[(usize, BigInt)], a: &BigInt, p: &[(usize, BigInt)], b: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let ci = r.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cj = p.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, a * &r[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(b * &p[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, a * &r[i - 1].1 - b * &p[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    let g = out.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if !g.is_zero() && g.abs() != BigInt::from(1) {
        for (_, v) in out.iter_mut() {
            *v /= &g;
        }
    }
    out
}

/// An abstract simplicial complex, simplices listed per dimension as sorted
/// vertex lists.
#[derive(Clone, Debug, Default)]
pub struct SimplicialModel {
    pub vertex_labels: Vec<FacetSet>,
    pub simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialModel {
    pub fn num_vertices(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, |s| s.len())
    }

    /// Reduced Betti numbers b̃_0.. (empty for the empty complex).
    pub fn reduced_betti(&self) -> Vec<usize> {
        if self.simplices.is_empty() || self.simplices[0].is_empty() {
            return Vec::new();
        }
        let top = self.simplices.len();
        let index: Vec<HashMap<&[usize], usize>> = self
            .simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
            .collect();
        // ranks[k] = rank of ∂_k : C_k → C_{k−1}; ∂_0 is the augmentation
        let mut ranks = vec![0usize; top + 1];
        ranks[0] = 1;
        for k in 1..top {
            let rows: Vec<Vec<(usize, i64)>> = self.simplices[k]
                .iter()
                .map(|s| {
                    (0..s.len())
                        .map(|drop| {
                            let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                            let sign = if drop % 2 == 0 { 1 } else { -1 };
                            (index[k - 1][face.as_slice()], sign)
                        })
                        .collect()
                })
                .collect();
            ranks[k] = rational_rank(&rows);
        }
        (0..top).map(|k| self.simplices[k].len() - ranks[k] - ranks[k + 1]).collect()
    }
}

/// Barycentric subdivision of the region: chains of faces under inclusion.
pub fn order_complex(p: &SimplePolytope, r: &Region) -> SimplicialModel {
    let mut verts = r.closure(p);
    // larger faces (smaller facet sets) first so chains are increasing in |S|
    verts.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let n = verts.len();
    let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
    fn rec(verts: &[FacetSet], chain: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let k = chain.len() - 1;
        if out.len() <= k {
            out.push(Vec::new());
        }
        out[k].push(chain.clone());
        let last = verts[*chain.last().unwrap()];
        for j in chain.last().unwrap() + 1..verts.len() {
            if last.is_subset(verts[j]) && last != verts[j] {
                chain.push(j);
                rec(verts, chain, out);
                chain.pop();
            }
        }
    }
    for i in 0..n {
        rec(&verts, &mut vec![i], &mut simplices);
    }
    for level in &mut simplices {
        level.sort();
    }
    SimplicialModel { vertex_labels: verts, simplices }
}

/// Nerve of the cover of the region by its maximal closed faces.
pub fn nerve(p: &SimplePolytope, r: &Region) -> SimplicialModel {
    let faces = &r.maximal;
    let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
    fn rec(p: &SimplePolytope, faces: &[FacetSet], chain: &mut Vec<usize>, acc: FacetSet, out: &mut Vec<Vec<Vec<usize>>>) {
        let k = chain.len() - 1;
        if out.len() <= k {
            out.push(Vec::new());
        }
        out[k].push(chain.clone());
        for j in chain.last().unwrap() + 1..faces.len() {
            let u = acc.union(faces[j]);
            if p.is_face(u) {
                chain.push(j);
                rec(p, faces, chain, u, out);
                chain.pop();
            }
        }
    }
    for i in 0..faces.len() {
        rec(p, faces, &mut vec![i], faces[i], &mut simplices);
    }
    SimplicialModel { vertex_labels: faces.clone(), simplices }
}

fn from_reduced(reduced: Vec<usize>, d: usize) -> BettiVector {
    let mut values = vec![0; d + 1];
    for (k, b) in reduced.into_iter().enumerate() {
        if k <= d {
            values[k] = b;
        } else {
            assert_eq!(b, 0, "homology above the region dimension");
        }
    }
    values[0] += 1;
    BettiVector::new(values)
}

/// Rational Betti numbers of a region, b_0..b_d with d its dimension.
pub fn betti(p: &SimplePolytope, r: &Region) -> BettiVector {
    match r.dim(p) {
        None => BettiVector { values: Vec::new(), empty: true },
        Some(d) => from_reduced(nerve(p, r).reduced_betti(), d),
    }
}

/// Same numbers computed on the order complex.
pub fn betti_order_complex(p: &SimplePolytope, r: &Region) -> BettiVector {
    match r.dim(p) {
        None => BettiVector { values: Vec::new(), empty: true },
        Some(d) => from_reduced(order_complex(p, r).reduced_betti(), d),
    }
}

/// Reduced Betti numbers b̃_0..b̃_d of a nonempty region.
fn reduced(p: &SimplePolytope, r: &Region) -> Vec<usize> {
    let mut b = betti(p, r).values;
    b[0] -= 1;
    b
}

fn single_point(p: &SimplePolytope, r: &Region) -> bool {
    r.maximal.len() == 1 && r.maximal[0].len() == p.dim()
}

pub fn is_rhd(p: &SimplePolytope, r: &Region, d: i64) -> bool {
    if d <= 0 {
        return single_point(p, r);
    }
    let d = d as usize;
    !r.is_empty() && r.is_pure(p, d) && betti(p, r) == BettiVector::point(d)
}

pub fn is_rhs(p: &SimplePolytope, r: &Region, d: i64) -> bool {
    if d < 0 {
        return r.is_empty();
    }
    if d == 0 {
        return r.maximal.len() == 2 && r.is_pure(p, 0);
    }
    let d = d as usize;
    !r.is_empty() && r.is_pure(p, d) && betti(p, r) == BettiVector::sphere(d)
}

/// One summand of the Choi–Park decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct OmegaSummand {
    pub omega: BitVector,
    /// dim H̃^j(P_ω) for j = −1, 0, …, n − 1.
    pub reduced: Vec<usize>,
}

/// dim H̃^{k−1}(P_ω) for every ω ∈ row Λ, with H̃^{−1}(∅) = Q.
pub fn quotient_betti_table(l: &VectorColoring) -> Vec<OmegaSummand> {
    let p = l.polytope();
    let n = p.dim();
    let omegas = gf2::row_space_elements(l.vectors(), l.rank()).expect("coloring spans");
    omegas
        .into_iter()
        .map(|w| {
            let mut red = vec![0; n + 1];
            if w.is_zero() {
                red[0] = 1;
            } else {
                let r = Region::from_faces(w.ones().map(FacetSet::singleton));
                for (j, b) in reduced(p, &r).into_iter().enumerate() {
                    red[j + 1] = b;
                }
            }
            OmegaSummand { omega: w, reduced: red }
        })
        .collect()
}

/// Betti numbers of N(P, Λ).
pub fn quotient_betti(l: &VectorColoring) -> BettiVector {
    let n = l.polytope().dim();
    let mut b = vec![0; n + 1];
    for s in quotient_betti_table(l) {
        for (k, x) in s.reduced.iter().enumerate() {
            b[k] += x;
        }
    }
    BettiVector::new(b)
}

pub fn is_rational_homology_sphere(l: &VectorColoring) -> bool {
    quotient_betti(l) == BettiVector::sphere(l.polytope().dim())
}

/// Every affine hyperplane π of the affine part must cut out an
/// (n − 1)-dimensional rational homology disk ∪_{λ_i ∈ π} F_i.
pub fn rhs_by_hyperplanes(p: &SimplePolytope, lam: &AffineColoring) -> bool {
    let r = lam.rank;
    let n = p.dim() as i64;
    for a in 1u64..1 << r {
        let a = BitVector::from_u64(r, a);
        for b in [false, true] {
            let omega: Vec<usize> = (0..lam.vectors.len()).filter(|&i| a.dot(&lam.vectors[i]) == b).collect();
            let region = Region::from_faces(omega.into_iter().map(FacetSet::singleton));
            if !is_rhd(p, &region, n - 1) {
                return false;
            }
        }
    }
    true
}

/// Families of pairwise disjoint nonempty proper subsets of [M], each
/// family listed with its blocks in order of their smallest element.
pub fn disjoint_families(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut label = vec![0usize; m];
    fn rec(i: usize, blocks: usize, label: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let m = label.len();
        if i == m {
            if blocks == 0 {
                return;
            }
            let mut fam = vec![Vec::new(); blocks];
            for (e, &l) in label.iter().enumerate() {
                if l > 0 {
                    fam[l - 1].push(e);
                }
            }
            if blocks == 1 && fam[0].len() == m {
                return;
            }
            out.push(fam);
            return;
        }
        for l in 0..=blocks + 1 {
            label[i] = l;
            rec(i + 1, blocks.max(l), label, out);
        }
        label[i] = 0;
    }
    rec(0, 0, &mut label, &mut out);
    out
}

/// Whether C ≃ C(n, M), decided by disk/sphere tests on every G_{ω_1,…,ω_k}.
pub fn is_cnk(c: &ColoredComplex) -> Result<bool> {
    let p = c.polytope();
    let n = p.dim();
    if n > 4 {
        return Err(Error::UnsupportedDimension(n));
    }
    let m = c.num_facets();
    if m > n + 1 {
        return Ok(false);
    }
    for fam in disjoint_families(m) {
        let k = fam.len() as i64;
        let covered: usize = fam.iter().map(|w| w.len()).sum();
        let region = c.region_of_union(&fam)?;
        let d = n as i64 - k;
        let ok = if covered == m { is_rhs(p, &region, d) } else { is_rhd(p, &region, d) };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// N(P, Λ) ≃ S^n, for n ≤ 4.
pub fn is_sphere(l: &VectorColoring) -> Result<bool> {
    let c = l.complex();
    Ok(is_cnk(&c)? && c.num_facets() == l.rank())
}
