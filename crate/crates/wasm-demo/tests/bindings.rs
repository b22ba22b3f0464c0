use plane_homeo_wasm::{certify, deform, support};
use serde_json::Value;

#[test]
fn identity_leaves_the_grid_alone() {
    let pts = deform("id", 2.0, 5, 9).unwrap();
    assert_eq!(pts.len(), 2 * 5 * 9 * 2);
    // First horizontal line runs along y = -2.
    assert_eq!(&pts[..4], &[-2.0, -2.0, -1.5, -2.0]);
    // First vertical line runs along x = -2.
    let v = 5 * 9 * 2;
    assert_eq!(&pts[v..v + 4], &[-2.0, -2.0, -2.0, -1.5]);
}

#[test]
fn translation_shifts_every_vertex() {
    let a = deform("id", 1.0, 3, 3).unwrap();
    let b = deform("translate(0.5-1i)", 1.0, 3, 3).unwrap();
    for (p, q) in a.chunks(2).zip(b.chunks(2)) {
        assert_eq!(q[0] - p[0], 0.5);
        assert_eq!(q[1] - p[1], -1.0);
    }
}

#[test]
fn support_of_a_bump_lies_in_its_reach() {
    let pts = support("bump(center=0,rho=0.25,delta=0.05,eta=0.1)", 0.0, 0.0, 1.0, 0.02, 1e-9).unwrap();
    assert!(!pts.is_empty());
    for p in pts.chunks(2) {
        assert!(p[0].hypot(p[1]) < 0.35);
    }
    assert!(support("id", 0.0, 0.0, 1.0, 0.1, 1e-9).unwrap().is_empty());
}

#[test]
fn certificates_as_json() {
    let v: Value = serde_json::from_str(&certify("translate(1)", 0.0, 0.0, 2.0, 0.1).unwrap()).unwrap();
    assert_eq!(v["winding"]["Ok"]["index"], 0);
    assert_eq!(v["free"]["verdict"], "fixed_point_free");

    let v: Value = serde_json::from_str(&certify("scale(2)", 0.0, 0.0, 1.0, 0.1).unwrap()).unwrap();
    assert_eq!(v["winding"]["Ok"]["index"], 1);
    assert_eq!(v["free"]["verdict"], "inconclusive");
}

#[test]
fn errors_are_messages() {
    assert!(deform("rotate(", 1.0, 3, 3).unwrap_err().contains("byte 7"));
    assert!(deform("id", 0.0, 3, 3).is_err());
    assert!(certify("id", 0.0, 0.0, -1.0, 0.1).is_err());
}
