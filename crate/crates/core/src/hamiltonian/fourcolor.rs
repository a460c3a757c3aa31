//! Disjoint vertex-covering edge-cycles on a simple 3-polytope and the facet
//! 4-colorings they encode.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::coloring::VectorColoring;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::polytope::{FacetSet, SimplePolytope, UnionFind};

/// Edge facet sets of each cycle, after checking the cycles are simple,
/// vertex-disjoint and cover every vertex.
fn cycle_edges(p: &SimplePolytope, cycles: &[Vec<usize>]) -> Result<Vec<Vec<FacetSet>>> {
    if p.dim() != 3 {
        return Err(Error::InvalidDimension(format!("cycles live on 3-polytopes, got dimension {}", p.dim())));
    }
    let nv = p.num_vertices();
    let mut seen = vec![false; nv];
    let mut out = Vec::new();
    for (c, cyc) in cycles.iter().enumerate() {
        if cyc.len() < 3 {
            return Err(Error::InvalidParameter(format!("cycle {c} has fewer than 3 vertices")));
        }
        let mut edges = Vec::new();
        for (i, &v) in cyc.iter().enumerate() {
            if v >= nv {
                return Err(Error::InvalidParameter(format!("cycle {c}: no vertex {v}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameter(format!("cycles not disjoint: vertex {v} repeats")));
            }
            let w = cyc[(i + 1) % cyc.len()];
            if w >= nv {
                return Err(Error::InvalidParameter(format!("cycle {c}: no vertex {w}")));
            }
            let e = p.vertices()[v].intersection(p.vertices()[w]);
            if e.len() != 2 {
                return Err(Error::InvalidParameter(format!("cycle {c}: vertices {v} and {w} are not adjacent")));
            }
            edges.push(e);
        }
        out.push(edges);
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Error::InvalidParameter(format!("cycles not covering: vertex {v} is missed")));
    }
    Ok(out)
}

/// Facets joined across every edge outside `cut`.
fn regions(p: &SimplePolytope, cut: &HashSet<FacetSet>) -> (Vec<usize>, usize) {
    let mut uf = UnionFind::new(p.num_facets());
    for e in p.faces_of_dim(1) {
        if !cut.contains(&e) {
            let ab = e.to_vec();
            uf.union(ab[0], ab[1]);
        }
    }
    uf.labels()
}

/// For each cycle γ and each side of γ, the number of vertices of γ whose
/// third edge enters that side must be even.
pub fn four_color_cycles_check(p: &SimplePolytope, cycles: &[Vec<usize>]) -> Result<bool> {
    let edges = cycle_edges(p, cycles)?;
    for (cyc, es) in cycles.iter().zip(&edges) {
        let on: HashSet<FacetSet> = es.iter().copied().collect();
        let (side, count) = regions(p, &on);
        if count != 2 {
            return Ok(false);
        }
        let mut per_side = [0usize; 2];
        for &v in cyc {
            let off = p.vertices()[v]
                .subsets_of_size(2)
                .into_iter()
                .find(|e| !on.contains(e))
                .expect("a vertex of a 3-polytope has three edges");
            per_side[side[off.to_vec()[0]]] += 1;
        }
        if per_side.iter().any(|c| c % 2 == 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn two_color(nodes: usize, edges: &[(usize, usize)]) -> Option<Vec<u8>> {
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut col: Vec<Option<u8>> = vec![None; nodes];
    for s in 0..nodes {
        if col[s].is_some() {
            continue;
        }
        col[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let c = col[u].unwrap();
            for &w in &adj[u] {
                match col[w] {
                    None => {
                        col[w] = Some(1 - c);
                        queue.push_back(w);
                    }
                    Some(d) if d == c => return None,
                    _ => {}
                }
            }
        }
    }
    Some(col.into_iter().map(Option::unwrap).collect())
}

/// Colors 0..4: the high bit 2-colors the regions cut out by the cycles, the
/// low bit 2-colors facets across the edges off the cycles.
pub fn four_coloring_from_cycles(p: &SimplePolytope, cycles: &[Vec<usize>]) -> Result<Vec<u8>> {
    let edges = cycle_edges(p, cycles)?;
    let on: HashSet<FacetSet> = edges.iter().flatten().copied().collect();
    let (region, count) = regions(p, &on);
    let mut across = Vec::new();
    let mut inside = Vec::new();
    for e in p.faces_of_dim(1) {
        let ab = e.to_vec();
        if on.contains(&e) {
            across.push((region[ab[0]], region[ab[1]]));
        } else {
            inside.push((ab[0], ab[1]));
        }
    }
    let high = two_color(count, &across).ok_or(Error::NotBipartite)?;
    let low = two_color(p.num_facets(), &inside).ok_or(Error::NotBipartite)?;
    let colors: Vec<u8> = (0..p.num_facets()).map(|i| 2 * high[region[i]] + low[i]).collect();
    for e in p.faces_of_dim(1) {
        let ab = e.to_vec();
        if colors[ab[0]] == colors[ab[1]] {
            return Err(Error::Invariant(format!("facets {} and {} share color {}", ab[0], ab[1], colors[ab[0]])));
        }
    }
    Ok(colors)
}

/// The 1-faces of C(P, Λ_τ), each traced as a vertex cycle starting at its
/// smallest vertex and heading to the smaller neighbour.
pub fn cycles_from_coloring(l: &VectorColoring, tau: &BitVector) -> Result<Vec<Vec<usize>>> {
    let p = l.polytope();
    if p.dim() != 3 {
        return Err(Error::InvalidDimension(format!("cycles live on 3-polytopes, got dimension {}", p.dim())));
    }
    let c2 = l.quotient(tau)?.complex();
    let mut out = Vec::new();
    for (f, face) in c2.faces(1).iter().enumerate() {
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for e in &face.p_faces {
            let ends: Vec<usize> = face_ends(p, *e);
            adj.entry(ends[0]).or_default().push(ends[1]);
            adj.entry(ends[1]).or_default().push(ends[0]);
        }
        if adj.values().any(|ns| ns.len() != 2) {
            return Err(Error::Invariant(format!("1-face {f} of the quotient complex is not a cycle")));
        }
        let start = *adj.keys().next().unwrap();
        let mut cyc = vec![start];
        let mut prev = start;
        let mut cur = *adj[&start].iter().min().unwrap();
        while cur != start {
            cyc.push(cur);
            let next = *adj[&cur].iter().find(|&&w| w != prev).unwrap_or(&adj[&cur][0]);
            prev = cur;
            cur = next;
        }
        if cyc.len() != adj.len() {
            return Err(Error::Invariant(format!("1-face {f} of the quotient complex is not one cycle")));
        }
        out.push(cyc);
    }
    out.sort();
    Ok(out)
}

fn face_ends(p: &SimplePolytope, e: FacetSet) -> Vec<usize> {
    p.face_vertices(e).expect("edge is a face").ones().collect()
}
