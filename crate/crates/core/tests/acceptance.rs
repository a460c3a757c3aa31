//! End-to-end acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use vcolor_core::catalog::{four_polytopes, Catalog, CatalogEntry};
use vcolor_core::coloring::{canonical_induced, VectorColoring};
use vcolor_core::gf2::BitVector;
use vcolor_core::hamiltonian::{
    branch_set, cycles_from_coloring, enumerate_hamiltonian_cnk, four_color_cycles_check, four_coloring_from_cycles,
    fvector_identity_check, geometry_report, gonality_identity, hyperelliptic_involutions, involutions_from_subcomplexes,
    prism_gonality_deficit, prism_splitting,
    structural_report, Enumeration, Verdict,
};

use vcolor_core::homology::{is_rational_homology_sphere, is_sphere, quotient_betti, rhs_by_hyperplanes, BettiVector};
use vcolor_core::polytope::{cube, cut_face, polygon, product, simplex, FacetSet, SimplePolytope};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct World {
    catalog: Catalog,
    /// Every (polytope, k) search over the catalog's polytopes with n ≤ 4.
    searches: Vec<(String, Arc<SimplePolytope>, Enumeration)>,
}

fn build_world() -> Result<World, String> {
    let catalog = ok(Catalog::build())?;
    let mut polys: Vec<(String, Arc<SimplePolytope>)> = Vec::new();
    for e in catalog.entries.iter().filter(|e| (2..=4).contains(&e.dim())) {
        if !polys.iter().any(|(_, p)| p.vertices() == e.polytope.vertices()) {
            polys.push((e.name.clone(), e.polytope.clone()));
        }
    }
    let jobs: Vec<(String, Arc<SimplePolytope>, usize)> = polys
        .iter()
        .flat_map(|(name, p)| (p.dim() - 1..=p.dim() + 1).map(move |k| (name.clone(), p.clone(), k)))
        .collect();
    let searches = jobs
        .into_par_iter()
        .map(|(name, p, k)| enumerate_hamiltonian_cnk(p.clone(), k, false).map(|e| (name, p, e)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(World { catalog, searches })
}

fn entry<'a>(w: &'a World, name: &str) -> Result<&'a CatalogEntry, String> {
    w.catalog.get(name).ok_or_else(|| format!("catalog has no entry {name}"))
}

fn sphere_recognition(_: &World) -> Outcome {
    for n in 2..=4 {
        let l = VectorColoring::identity(Arc::new(ok(simplex(n))?));
        ensure!(ok(is_sphere(&l))?, "identity coloring of simplex {n} not recognised as a sphere");
        let b = quotient_betti(&l);
        ensure!(b == BettiVector::sphere(n), "simplex {n}: Betti {:?}", b.values);
    }
    Ok("Δ², Δ³, Δ⁴ identity colorings are spheres with Betti (1,0,…,0,1)".into())
}

fn cube_obstruction(_: &World) -> Outcome {
    let q = Arc::new(ok(cube(4))?);
    let t = Instant::now();
    for k in 3..=5 {
        let e = ok(enumerate_hamiltonian_cnk(q.clone(), k, false))?;
        ensure!(e.subcomplexes.is_empty(), "cube4 has {} C(4,{k})-subcomplexes", e.subcomplexes.len());
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 10.0, "cube4 search took {secs:.1} s");
    Ok(format!("cube4: no C(4,k) for k = 3, 4, 5 ({secs:.2} s)"))
}

fn prism_classification(_: &World) -> Outcome {
    let p = Arc::new(ok(product(&ok(simplex(3))?, &ok(simplex(1))?))?);
    let mut orbits = BTreeMap::new();
    let mut raw = BTreeMap::new();
    for k in 3..=5 {
        let e = ok(enumerate_hamiltonian_cnk(p.clone(), k, false))?;
        ensure!(e.orbit_sizes_consistent(), "k = {k}: orbit sizes do not multiply to |Aut|");
        orbits.insert(k, e.orbits.len());
        raw.insert(k, e.subcomplexes.len());
    }
    ensure!(orbits[&5] == 1 && orbits[&4] == 2 && orbits[&3] == 0, "orbits per kind {orbits:?}");
    Ok(format!("Δ³×I: 3 orbits (one C(4,5), two C(4,4)); raw counts {raw:?}"))
}

fn simplex_count(_: &World) -> Outcome {
    let p = Arc::new(ok(simplex(4))?);
    let e = ok(enumerate_hamiltonian_cnk(p.clone(), 4, false))?;
    ensure!(e.subcomplexes.len() == 10 && e.orbits.len() == 1, "{} subcomplexes in {} orbits", e.subcomplexes.len(), e.orbits.len());
    for k in [3, 5] {
        let n = ok(enumerate_hamiltonian_cnk(p.clone(), k, false))?.subcomplexes.len();
        ensure!(n == 0, "Δ⁴ has {n} C(4,{k})-subcomplexes");
    }
    Ok("Δ⁴: 10 C(4,4)-subcomplexes in one orbit, none of kinds 3 or 5".into())
}

/// Identity, induced and opposite-pair colorings over the catalog with n ≤ 4.
fn catalog_colorings(w: &World) -> Vec<(String, VectorColoring)> {
    let mut out = Vec::new();
    for e in w.catalog.entries.iter().filter(|e| e.dim() <= 4) {
        out.push((format!("{} identity", e.name), VectorColoring::identity(e.polytope.clone())));
        if let Ok(l) = canonical_induced(&e.subcomplex) {
            out.push((format!("{} induced", e.name), l));
        }
    }
    for n in 2..=4 {
        let q = Arc::new(cube(n).unwrap());
        out.push((format!("cube{n} opposite pairs"), VectorColoring::opposite_pairs(q).unwrap()));
    }
    out
}

fn oracle_equivalence(w: &World) -> Outcome {
    let t = Instant::now();
    let cs: Vec<_> = catalog_colorings(w).into_iter().filter(|(_, l)| l.rank() <= 6 && l.is_closed_manifold()).collect();
    let results: Vec<Result<usize, String>> = cs
        .par_iter()
        .map(|(name, l)| {
            let a = ok(hyperelliptic_involutions(l))?;
            let b = ok(involutions_from_subcomplexes(l))?;
            let key = |v: &[vcolor_core::hamiltonian::Involution]| {
                v.iter().map(|i| (i.tau.clone(), i.subcomplex.coarse().partition())).collect::<Vec<_>>()
            };
            ensure!(key(&a) == key(&b), "{name}: τ-scan and subcomplex route disagree");
            ensure!(a.iter().all(|i| i.quotient_closed && i.sphere_betti), "{name}: a hyperelliptic τ fails closedness or sphere Betti");
            ensure!(b.iter().all(|i| i.induces), "{name}: reconstructed τ inconsistent");
            Ok(a.len())
        })
        .collect();
    let mut total = 0;
    for r in results {
        total += r?;
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1} s");
    Ok(format!("{} colorings of rank ≤ 6, {total} involutions, both routes identical ({secs:.1} s)", cs.len()))
}

fn choi_park(w: &World) -> Outcome {
    for n in 2..=4 {
        let l = ok(VectorColoring::opposite_pairs(Arc::new(ok(cube(n))?)))?;
        let row: Vec<usize> = (0..=n).map(|k| binomial(n, k)).collect();
        ensure!(quotient_betti(&l).values == row, "cube{n}: {:?}", quotient_betti(&l).values);
    }
    let cs: Vec<_> = catalog_colorings(w).into_iter().filter(|(_, l)| l.is_orientable() && l.rank() <= 10).collect();
    let checked: Vec<Result<(), String>> = cs
        .par_iter()
        .map(|(name, l)| {
            let b = quotient_betti(l).values;
            if l.is_closed_manifold() {
                let flip: Vec<usize> = b.iter().rev().copied().collect();
                ensure!(b == flip, "{name}: Poincaré duality fails for {b:?}");
            }
            let affine = ok(l.affine_part())?;
            ensure!(
                is_rational_homology_sphere(l) == rhs_by_hyperplanes(l.polytope(), &affine),
                "{name}: Betti and hyperplane criteria disagree"
            );
            Ok(())
        })
        .collect();
    for c in checked {
        c?;
    }
    Ok(format!("tori rows for n = 2, 3, 4; duality and RHS agreement on {} orientable colorings", cs.len()))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn row0(e: &CatalogEntry, k: usize) -> Result<(usize, usize, usize, usize), String> {
    let r = ok(fvector_identity_check(&e.subcomplex))?;
    let row = r.rows.iter().find(|x| x.k == k).ok_or("missing row")?;
    Ok((row.ambient, row.model, row.circle_correction, row.defining_sum))
}

fn fvector_identity(w: &World) -> Outcome {
    let mut count = 0;
    for (name, _, e) in &w.searches {
        for h in &e.subcomplexes {
            let r = ok(fvector_identity_check(h))?;
            ensure!(r.holds, "{name}, C(n,{}): identity fails {:?}", e.kind, r.rows);
            count += 1;
        }
    }
    // coarse counts include the δ term: C(4,4) has 1 + 1 vertices
    ensure!(row0(entry(w, "simplex4")?, 0)? == (5, 2, 0, 3), "Δ⁴ f₀ row {:?}", row0(entry(w, "simplex4")?, 0)?);
    ensure!(row0(entry(w, "prism4-single")?, 1)? == (16, 10, 0, 6), "Δ³×I f₁ row {:?}", row0(entry(w, "prism4-single")?, 1)?);
    ensure!(row0(entry(w, "pentagon-square")?, 0)? == (25, 5, 0, 20), "P₅×P₅ f₀ row {:?}", row0(entry(w, "pentagon-square")?, 0)?);
    Ok(format!("{count} enumerated subcomplexes; Δ⁴ 5 = 2 + 3, Δ³×I 16 = 10 + 6, P₅×P₅ 25 = 5 + 20"))
}

fn euler_gonality(w: &World) -> Outcome {
    let mut polys: Vec<(String, Arc<SimplePolytope>)> = ok(four_polytopes(&w.catalog))?;
    let d4 = ok(simplex(4))?;
    for (name, p) in [
        ("simplex4-cut-vertex", cut_face(&d4, FacetSet::from_indices([0, 1, 2, 3]))),
        ("simplex4-cut-edge", cut_face(&d4, FacetSet::from_indices([0, 1, 2]))),
        ("polygon6xpolygon7", product(&polygon(6).unwrap(), &polygon(7).unwrap())),
        ("cube3xsimplex1-cut", cut_face(&cube(4).unwrap(), FacetSet::from_indices([0, 2]))),
    ] {
        polys.push((name.into(), Arc::new(ok(p)?)));
    }
    for (name, p) in &polys {
        ensure!(gonality_identity(p), "{name}: 3p₃ + 2p₄ + p₅ identity fails");
    }
    for r in 3..=5 {
        let d = prism_gonality_deficit(r);
        ensure!(d > 0, "r = {r}: deficit {d}");
    }
    ensure!([3, 4, 5].map(prism_gonality_deficit) == [4, 2, 1], "deficits differ");
    let mut prisms = 0;
    for (name, p, e) in &w.searches {
        if p.dim() != 4 || prism_splitting(p).is_none() {
            continue;
        }
        for h in &e.subcomplexes {
            let tri = h.defining_faces().iter().any(|f| p.face_vertices(f.p_faces[0]).unwrap().count_ones() == 3);
            ensure!(tri, "{name}: a C(4,{}) subcomplex has no triangular defining face", e.kind);
            prisms += 1;
        }
    }
    ensure!(prisms > 0, "no prism witnesses found");
    Ok(format!("identity on {} 4-polytopes; deficits 4, 2, 1; {prisms} prism subcomplexes all have a triangle", polys.len()))
}

fn pentagon_square(w: &World) -> Outcome {
    let e = entry(w, "pentagon-square")?;
    let faces = e.defining_set();
    ensure!(e.kind == 5 && faces.len() == 5, "kind {} with {} faces", e.kind, faces.len());
    ensure!(
        faces.iter().all(|f| e.polytope.face_vertices(*f).unwrap().count_ones() == 4),
        "defining faces are not all quadrangles"
    );
    let comps = ok(branch_set(&e.subcomplex))?;
    let copies: u64 = comps.iter().map(|c| c.multiplicity).sum();
    ensure!(copies == 5 && comps.iter().all(|c| c.betti.values == [1, 2, 1]), "branch set {:?}",
        comps.iter().map(|c| (c.multiplicity, c.betti.values.clone())).collect::<Vec<_>>());
    Ok(format!("P₅×P₅: five disjoint quadrangles {:?}, branch set five tori", faces.iter().map(|f| f.to_vec()).collect::<Vec<_>>()))
}

fn branch_sets(w: &World) -> Outcome {
    let want: [(&str, &[(&[usize], u64)]); 6] = [
        ("simplex4", &[(&[1, 0, 1], 1)]),
        ("simplex2xsimplex2", &[(&[1, 2, 1], 1)]),
        ("prism4-single", &[(&[1, 0, 1], 2)]),
        ("simplex2xsimplex2-middle", &[(&[1, 0, 1], 1), (&[1, 2, 1], 1)]),
        ("simplex2xpolygon5-upper", &[(&[1, 0, 1], 4), (&[1, 2, 1], 1)]),
        ("simplex2xpolygon5-middle", &[(&[1, 0, 1], 3), (&[1, 2, 1], 1)]),
    ];
    for (name, parts) in want {
        let e = entry(w, name)?;
        let got = ok(e.branch_summary())?;
        let expect: BTreeMap<Vec<usize>, u64> = parts.iter().map(|(b, c)| (b.to_vec(), *c)).collect();
        ensure!(got == expect, "{name}: branch summary {got:?}, expected {expect:?}");
    }
    let mut cross = 0;
    for e in w.catalog.entries.iter().filter(|e| e.dim() >= 3) {
        for c in ok(branch_set(&e.subcomplex))? {
            ensure!(c.consistent(), "{}: free-case count disagrees on face {}", e.name, c.face);
            cross += c.free_multiplicity.is_some() as usize;
        }
    }
    Ok(format!("six stated branch sets reproduced; {cross} free-case cross-checks agree"))
}

fn geometry_table(w: &World) -> Outcome {
    let r = ok(geometry_report(&w.catalog))?;
    let admit = r.with_verdict(Verdict::Admit);
    let shut = r.with_verdict(Verdict::Obstructed);
    ensure!(admit == ["S⁴", "S³×R", "S²×S²", "S²×R²", "S²×L²", "L²×L²"], "admit {admit:?}");
    ensure!(shut == ["R⁴", "L⁴", "L³×R", "L²×R²"], "obstructed {shut:?}");
    Ok(format!("admit {admit:?}; obstructed {shut:?}"))
}

fn four_color(_: &World) -> Outcome {
    let p = Arc::new(ok(cube(3))?);
    let l = ok(VectorColoring::opposite_pairs(p.clone()))?;
    let tau = BitVector::from_indices(3, [0, 1]);
    let cycles = ok(cycles_from_coloring(&l, &tau))?;
    ensure!(cycles.len() == 2 && cycles.iter().all(|c| c.len() == 4), "cycles {cycles:?}");
    ensure!(ok(four_color_cycles_check(&p, &cycles))?, "side-count check rejects {cycles:?}");
    let colors = ok(four_coloring_from_cycles(&p, &cycles))?;
    ensure!(colors.iter().all(|&c| c < 4), "colors {colors:?}");
    for e in p.faces_of_dim(1) {
        let ab = e.to_vec();
        ensure!(colors[ab[0]] != colors[ab[1]], "facets {} and {} share a color", ab[0], ab[1]);
    }
    Ok(format!("cube3: cycles {cycles:?}, coloring {colors:?}"))
}

fn structural_suite(w: &World) -> Outcome {
    let mut checked = 0;
    let subs = w
        .searches
        .iter()
        .flat_map(|(name, _, e)| e.subcomplexes.iter().map(move |h| (name.as_str(), h)))
        .chain(w.catalog.entries.iter().map(|e| (e.name.as_str(), &e.subcomplex)));
    for (name, h) in subs {
        let r = ok(structural_report(h))?;
        ensure!(r.ok(), "{name}: {:?}", r.violations);
        checked += 1;
    }
    Ok(format!("{checked} subcomplexes, zero violations"))
}

fn main() {
    let t = Instant::now();
    let world = catch_unwind(build_world);
    let world = match world {
        Ok(Ok(w)) => w,
        Ok(Err(e)) => {
            println!("setup FAILED: {e}");
            std::process::exit(1);
        }
        Err(_) => {
            println!("setup FAILED: panic while building the catalog");
            std::process::exit(1);
        }
    };
    println!("catalog of {} entries and {} searches built in {:.1} s", world.catalog.entries.len(), world.searches.len(), t.elapsed().as_secs_f64());
    let criteria: [(&str, fn(&World) -> Outcome); 13] = [
        ("sphere recognition", sphere_recognition),
        ("cube obstruction", cube_obstruction),
        ("prism classification", prism_classification),
        ("simplex count", simplex_count),
        ("hyperelliptic oracle equivalence", oracle_equivalence),
        ("Choi-Park checks", choi_park),
        ("f-vector identity", fvector_identity),
        ("Euler/gonality", euler_gonality),
        ("P5xP5 discovery", pentagon_square),
        ("branch sets", branch_sets),
        ("geometry table", geometry_table),
        ("four-color machinery", four_color),
        ("structural invariant suite", structural_suite),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(|| f(&world))).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of 13 criteria passed in {:.1} s", 13 - failed, t.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
