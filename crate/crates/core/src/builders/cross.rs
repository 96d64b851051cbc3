use crate::kernel::{int, Kind, Measure, WeightedPointSet};

/// The `2d` points `+-e_i` with weights `1/(2d)`, exact; a spherical 3-design.
pub fn cross_polytope(d: usize) -> WeightedPointSet {
    assert!(d >= 1, "dimension must be at least 1");
    let mut points = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1, -1] {
            let mut p = vec![int(0); d];
            p[i] = int(s);
            points.push(p);
        }
    }
    WeightedPointSet::from_rational(Measure::Sphere, Kind::Unweighted, points, None)
        .expect("cross-polytope is a valid point set")
        .with_claimed_strength(Some(3))
}
