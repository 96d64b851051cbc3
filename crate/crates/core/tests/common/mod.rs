#![allow(dead_code)]

use designforge_core::builders::{cross_polytope, signed_design};
use designforge_core::{Kind, Measure, WeightedPointSet};

/// Vertices of `[-1,1]^d` scaled to the sphere: a 3-design.
pub fn cube(d: usize) -> WeightedPointSet {
    let s = 1.0 / (d as f64).sqrt();
    let pts = (0..1usize << d)
        .map(|m| {
            (0..d)
                .map(|i| if m >> i & 1 == 1 { -s } else { s })
                .collect()
        })
        .collect();
    WeightedPointSet::from_f64(Measure::Sphere, Kind::Unweighted, pts, None)
        .unwrap()
        .with_claimed_strength(Some(3))
}

/// The 12 icosahedron vertices: a 5-design on `S^2`.
pub fn icosahedron() -> WeightedPointSet {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let n = (1.0 + phi * phi).sqrt();
    let mut pts = Vec::new();
    for a in [-1.0, 1.0] {
        for b in [-phi, phi] {
            pts.push(vec![0.0, a / n, b / n]);
            pts.push(vec![a / n, b / n, 0.0]);
            pts.push(vec![b / n, 0.0, a / n]);
        }
    }
    WeightedPointSet::from_f64(Measure::Sphere, Kind::Unweighted, pts, None)
        .unwrap()
        .with_claimed_strength(Some(5))
}

/// Spherical designs with the strength they satisfy, `d <= 6`, `t <= 5`.
pub fn sphere_fixtures() -> Vec<(String, WeightedPointSet, u32)> {
    let mut out = Vec::new();
    for d in 1..=6 {
        out.push((format!("cross-polytope d={d}"), cross_polytope(d), 3));
    }
    for d in 2..=5 {
        out.push((format!("cube d={d}"), cube(d), 3));
    }
    out.push(("icosahedron".into(), icosahedron(), 5));
    for d in 3..=5 {
        for t in 1..=2 {
            let s = signed_design(d, t, Measure::Sphere, 9).unwrap();
            out.push((
                format!("signed sphere d={d} t={t}"),
                s.materialize().unwrap(),
                2 * t,
            ));
        }
    }
    out
}
