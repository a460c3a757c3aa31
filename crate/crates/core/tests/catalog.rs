use std::sync::OnceLock;

use vcolor_core::catalog::{Catalog, PrismVariant, PolygonKind, prism_entry, simplex_times_polygon_entry};
use vcolor_core::hamiltonian::{geometry_report, Verdict};
use vcolor_core::Error;

fn catalog() -> &'static Catalog {
    static C: OnceLock<Catalog> = OnceLock::new();
    C.get_or_init(|| Catalog::build().unwrap())
}

#[test]
fn every_entry_passes() {
    for r in catalog().reports().unwrap() {
        assert!(r.pass(), "{}: {:?}", r.name, r.failures);
        assert_eq!(r.enumerated, Some(true), "{}", r.name);
    }
}

#[test]
fn bundle_round_trip_and_tamper() {
    let bundle = catalog().to_json_value();
    let names = Catalog::verify_bundle(&bundle).unwrap();
    assert_eq!(names.len(), catalog().entries.len());

    let mut bad = bundle.clone();
    let target = bad["entries"][3]["name"].as_str().unwrap().to_owned();
    bad["entries"][3]["defining_faces"] = serde_json::json!([[0, 1]]);
    match Catalog::verify_bundle(&bad) {
        Err(Error::Invariant(msg)) => assert!(msg.starts_with(&target), "{msg}"),
        other => panic!("tampered bundle accepted: {other:?}"),
    }

    let mut bad = bundle;
    bad["entries"][0]["expected_branch"] = serde_json::json!([{"betti": [1, 1], "copies": 9}]);
    assert!(Catalog::verify_bundle(&bad).is_err());
}

#[test]
fn geometry_split() {
    let r = geometry_report(catalog()).unwrap();
    assert_eq!(r.rows.len(), 10);
    assert_eq!(r.with_verdict(Verdict::Obstructed), ["R⁴", "L⁴", "L³×R", "L²×R²"]);
    for row in r.rows.iter().filter(|r| r.verdict == Verdict::Admit) {
        let w = catalog().get(row.witness.as_ref().unwrap()).unwrap();
        assert_eq!(w.dim(), 4);
    }
}

#[test]
fn constructors_reject_bad_input() {
    assert!(prism_entry(2, PrismVariant::Single).is_err());
    assert!(PrismVariant::parse("diagonal").is_err());
    assert!(simplex_times_polygon_entry(0, 5, PolygonKind::Upper).is_err());
    assert!(simplex_times_polygon_entry(2, 2, PolygonKind::Middle).is_err());
}

#[test]
fn polygon_kinds_at_other_sizes() {
    for k in [3, 4, 6] {
        let up = simplex_times_polygon_entry(2, k, PolygonKind::Upper).unwrap();
        let mid = simplex_times_polygon_entry(2, k, PolygonKind::Middle).unwrap();
        for e in [up, mid] {
            let r = e.verify(None).unwrap();
            assert!(r.pass(), "{}: {:?}", e.name, r.failures);
        }
    }
}
