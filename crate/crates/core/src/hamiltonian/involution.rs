//! Hyperelliptic involutions τ of N(P, Λ), found two independent ways.

use std::collections::HashSet;
use std::sync::Arc;

use super::{enumerate_subcomplexes, HamiltonianSubcomplex};
use crate::coloring::{canonical_induced, VectorColoring};
use crate::complex::ColoredComplex;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::homology::{is_cnk, quotient_betti, BettiVector};

#[derive(Clone, Debug)]
pub struct Involution {
    pub tau: BitVector,
    pub subcomplex: HamiltonianSubcomplex,
    /// Λ is equivalent to the coloring induced by the subcomplex.
    pub induces: bool,
    pub quotient_closed: bool,
    /// N(P, Λ_τ) has the Betti numbers of Sⁿ.
    pub sphere_betti: bool,
}

impl Involution {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "tau": self.tau,
            "induces": self.induces,
            "quotient_closed": self.quotient_closed,
            "sphere_betti": self.sphere_betti,
            "subcomplex": self.subcomplex.to_json_value(),
        })
    }
}

fn facet_vector<'a>(l: &'a VectorColoring, c: &ColoredComplex, g: usize) -> &'a BitVector {
    &l.vectors()[c.facets()[g].pfacets.iter().next().unwrap()]
}

/// N(P, Λ_τ) is a closed manifold iff τ is not a sum of k ≠ 2 colors of
/// complex facets with a common point.
pub fn quotient_is_closed(l: &VectorColoring, tau: &BitVector) -> bool {
    let c = l.complex();
    let mut sums = HashSet::new();
    for &v in l.polytope().vertices() {
        let cls = c.classes_at(v);
        for mask in 1u64..1 << cls.len() {
            if mask.count_ones() == 2 {
                continue;
            }
            let mut s = BitVector::zeros(l.rank());
            for (bit, &g) in cls.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    s.xor_assign(facet_vector(l, &c, g));
                }
            }
            sums.insert(s);
        }
    }
    !sums.contains(tau)
}

fn check_preconditions(l: &VectorColoring) -> Result<()> {
    let n = l.polytope().dim();
    if n > 4 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !l.is_closed_manifold() {
        return Err(Error::Hypothesis("N(P, Λ) is not a closed manifold".into()));
    }
    Ok(())
}

fn finish(l: &VectorColoring, tau: BitVector, subcomplex: HamiltonianSubcomplex, induces: bool) -> Result<Involution> {
    let q = l.quotient(&tau)?;
    let sphere_betti = quotient_betti(&q) == BettiVector::sphere(l.polytope().dim());
    let quotient_closed = quotient_is_closed(l, &tau);
    Ok(Involution { tau, subcomplex, induces, quotient_closed, sphere_betti })
}

/// τ-scan: every τ ≠ 0 whose quotient complex is C(n, r − 1).
pub fn hyperelliptic_involutions(l: &VectorColoring) -> Result<Vec<Involution>> {
    check_preconditions(l)?;
    let r = l.rank();
    if r > 63 {
        return Err(Error::InvalidParameter(format!("rank {r} too large for an exhaustive scan")));
    }
    let c1 = Arc::new(l.complex());
    let mut out = Vec::new();
    for t in 1u64..1 << r {
        let tau = BitVector::from_u64(r, t);
        let c2 = l.quotient(&tau)?.complex();
        if c2.num_facets() + 1 != r || !is_cnk(&c2)? {
            continue;
        }
        let sub = HamiltonianSubcomplex::from_coarse(c1.clone(), c2)
            .map_err(|e| Error::Invariant(format!("quotient by {tau:?} is C(n, r-1) but not Hamiltonian: {e}")))?
            .with_kind(r - 1);
        let induces = canonical_induced(&sub).map(|x| x.equivalent(l)).unwrap_or(false);
        out.push(finish(l, tau, sub, induces)?);
    }
    out.sort_by(|a, b| a.tau.cmp(&b.tau));
    Ok(out)
}

/// Oracle route: enumerate C(n, r − 1)-subcomplexes of C(P, Λ), keep those
/// inducing Λ, and read τ = Λ_i + Λ_j off any pair flanking a defining face.
pub fn involutions_from_subcomplexes(l: &VectorColoring) -> Result<Vec<Involution>> {
    check_preconditions(l)?;
    let r = l.rank();
    if r < 2 {
        return Ok(Vec::new());
    }
    let c1 = Arc::new(l.complex());
    let mut out = Vec::new();
    for h in enumerate_subcomplexes(c1.clone(), r - 1, false)? {
        let Ok(lam) = canonical_induced(&h) else { continue };
        if !lam.equivalent(l) {
            continue;
        }
        let f = &h.defining_faces()[0];
        let tau = facet_vector(l, &c1, f.facet_ids[0]).xor(facet_vector(l, &c1, f.facet_ids[1]));
        // the same τ must separate exactly the merged pairs among meeting facets
        let mut consistent = !tau.is_zero() && l.quotient(&tau)?.complex().same_facets(h.coarse());
        for &v in l.polytope().vertices() {
            let cls = c1.classes_at(v);
            for (x, &i) in cls.iter().enumerate() {
                for &j in &cls[x + 1..] {
                    let sum = facet_vector(l, &c1, i).xor(facet_vector(l, &c1, j));
                    consistent &= (sum == tau) == (h.coarsening()[i] == h.coarsening()[j]);
                }
            }
        }
        out.push(finish(l, tau, h, consistent)?);
    }
    out.sort_by(|a, b| a.tau.cmp(&b.tau));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{cube, simplex};

    fn taus(v: &[Involution]) -> Vec<BitVector> {
        v.iter().map(|i| i.tau.clone()).collect()
    }

    fn e(r: usize, ix: &[usize]) -> BitVector {
        BitVector::from_indices(r, ix.iter().copied())
    }

    #[test]
    fn closedness_examples() {
        let l = VectorColoring::identity(Arc::new(simplex(3).unwrap()));
        assert!(quotient_is_closed(&l, &e(4, &[0, 1])));
        assert!(!quotient_is_closed(&l, &e(4, &[0])));
        assert!(!quotient_is_closed(&l, &e(4, &[0, 1, 2])));
    }

    #[test]
    fn simplex_three_edges() {
        let l = VectorColoring::identity(Arc::new(simplex(3).unwrap()));
        let a = hyperelliptic_involutions(&l).unwrap();
        let mut expected: Vec<BitVector> =
            (0..4).flat_map(|i| (i + 1..4).map(move |j| e(4, &[i, j]))).collect();
        expected.sort();
        assert_eq!(taus(&a), expected);
        assert!(a.iter().all(|i| i.induces && i.quotient_closed && i.sphere_betti));
        let b = involutions_from_subcomplexes(&l).unwrap();
        assert_eq!(taus(&a), taus(&b));
    }

    #[test]
    fn simplex_four_and_cube_four() {
        let l = VectorColoring::identity(Arc::new(simplex(4).unwrap()));
        let a = hyperelliptic_involutions(&l).unwrap();
        assert_eq!(a.len(), 10);
        assert!(a.iter().all(|i| i.tau.count_ones() == 2 && i.induces));
        let b = involutions_from_subcomplexes(&l).unwrap();
        assert_eq!(taus(&a), taus(&b));
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.subcomplex.coarse().partition(), y.subcomplex.coarse().partition());
        }

        let q = VectorColoring::identity(Arc::new(cube(4).unwrap()));
        assert!(hyperelliptic_involutions(&q).unwrap().is_empty());
    }

    #[test]
    fn non_manifold_is_rejected() {
        let p = Arc::new(simplex(3).unwrap());
        let v = vec![e(3, &[0]), e(3, &[1]), e(3, &[0, 1]), e(3, &[2])];
        let l = VectorColoring::new(p, 3, v).unwrap();
        assert!(matches!(hyperelliptic_involutions(&l), Err(Error::Hypothesis(_))));
    }
}
