use serde_json::Value;
use spatch_web::Session;

#[test]
fn default_session_is_g1_and_passes_check() {
    let s = Session::new(5, 5, 1).unwrap();
    let summary: Value = serde_json::from_str(&s.summary_json()).unwrap();
    assert_eq!(summary["depth"], 8);
    assert_eq!(summary["points"], 495);
    assert_eq!(summary["continuity"], "g1");
    let report: Value = serde_json::from_str(&s.check_json().unwrap()).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn c0_switch_fails_g1_check() {
    let mut s = Session::new(5, 4, 2).unwrap();
    s.set_fill("c0", "").unwrap();
    let summary: Value = serde_json::from_str(&s.summary_json()).unwrap();
    assert_eq!(summary["mask"], "harmonic");
    assert_eq!(summary["depth"], 4);
    let report: Value = serde_json::from_str(&s.check_json().unwrap()).unwrap();
    assert_eq!(report["pass"], false);
    assert!(s.set_fill("c2", "").is_err());
    assert!(s.set_fill("g1", "laplace").is_err());
}

#[test]
fn mesh_buffers_are_consistent() {
    let mut s = Session::new(6, 3, 3).unwrap();
    assert!(s.positions().is_err());
    s.remesh(8).unwrap();
    let (p, n, t) = (s.positions().unwrap(), s.normals().unwrap(), s.indices().unwrap());
    let verts = 1 + 6 * 8 * 9 / 2;
    assert_eq!(p.len(), 3 * verts);
    assert_eq!(n.len(), 3 * verts);
    assert_eq!(t.len(), 3 * 6 * 64);
    assert!(t.iter().all(|&i| (i as usize) < verts));
    for nrm in n.chunks(3) {
        let len = (nrm[0] * nrm[0] + nrm[1] * nrm[1] + nrm[2] * nrm[2]).sqrt();
        assert!((len - 1.0).abs() < 1e-5);
    }
    s.set_coords("meanvalue").unwrap();
    assert!(s.positions().is_err(), "changing coordinates invalidates the mesh");
    assert!(s.set_coords("bogus").is_err());
}

#[test]
fn probe_matches_corner_and_rejects_outside() {
    let s = Session::new(4, 3, 4).unwrap();
    let dv = s.domain_vertices();
    let corner = s.probe(dv[0], dv[1]).unwrap();
    let ribbon = s.ribbon_points();
    // side 0 starts at domain vertex 0
    for k in 0..3 {
        assert!((corner[k] - ribbon[k] as f64).abs() < 1e-6);
    }
    let nrm = (corner[3].powi(2) + corner[4].powi(2) + corner[5].powi(2)).sqrt();
    assert!((nrm - 1.0).abs() < 1e-9);
    assert!(s.probe(2.0, 0.0).is_err());
}

#[test]
fn regenerate_and_exports() {
    let mut s = Session::new(5, 3, 1).unwrap();
    let before = s.ribbon_json().unwrap();
    s.regenerate(7, 2, 9).unwrap();
    assert_ne!(s.ribbon_json().unwrap(), before);
    assert_eq!(s.net().n(), 7);
    assert_eq!(s.boundary_curves(10).len(), 7 * 11 * 3);
    assert!(s.regenerate(9, 3, 0).is_err());
    assert!(s.regenerate(5, 7, 0).is_err());
    assert_eq!(s.net().n(), 7, "failed regenerate leaves state untouched");
    let net: Value = serde_json::from_str(&s.net_json().unwrap()).unwrap();
    assert_eq!(net["points"].as_array().unwrap().len(), s.net().len());
    s.remesh(2).unwrap();
    assert!(s.obj().unwrap().starts_with("v "));
}
