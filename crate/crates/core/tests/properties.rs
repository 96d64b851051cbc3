mod common;

use designforge_core::approx::{
    construct_tensor_approx, epsilon_l2, tensor_lower_bound, tensor_sample_size,
};
use designforge_core::builders::{
    caratheodory_prune, cross_polytope, orbit_moment, orbit_points, signed_design,
};
use designforge_core::gegenbauer::dim_p_sphere;
use designforge_core::kernel::{enumerate_multi_indices, format_design, parse_design, rat};
use designforge_core::transfer::{gaussian_to_spherical, project_gaussian, spherical_to_gaussian};
use designforge_core::verify::{verify_design, Mode};
use designforge_core::{Kind, Measure, MultiIndex, Rational, WeightedPointSet};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn radial_nodes(t: u32) -> usize {
    (t as usize + 2) / 2
}

#[test]
fn transfer_round_trip_on_fixtures() {
    for (name, x, strength) in common::sphere_fixtures() {
        for t in 1..=strength {
            let g = spherical_to_gaussian(&x, t).unwrap();
            assert!(g.len() <= radial_nodes(t) * x.len(), "{name} t={t}");
            assert!(
                verify_design(&g, t, Mode::Float, 1e-8).unwrap().pass,
                "{name} t={t}"
            );
            let back = gaussian_to_spherical(&g, t).unwrap();
            assert!(back.len() <= 2 * g.len(), "{name} t={t}");
            let report = verify_design(&back, t, Mode::Float, 1e-8).unwrap();
            assert!(report.pass, "{name} t={t}: {report}");
            if x.kind() != Kind::Signed {
                assert_ne!(g.kind(), Kind::Signed, "{name}");
                assert_ne!(back.kind(), Kind::Signed, "{name}");
            }
        }
    }
}

#[test]
fn projection_never_adds_points() {
    let g = spherical_to_gaussian(&common::icosahedron(), 5).unwrap();
    for k in 1..=3 {
        let p = project_gaussian(&g, k).unwrap();
        assert_eq!(p.len(), g.len());
        assert!(verify_design(&p, 5, Mode::Float, 1e-8).unwrap().pass);
    }
}

#[test]
fn exact_and_float_verification_agree() {
    for d in 1..=6 {
        let x = cross_polytope(d);
        for t in 0..=6 {
            let e = verify_design(&x, t, Mode::Exact, 0.0).unwrap();
            let f = verify_design(&x, t, Mode::Float, 1e-9).unwrap();
            assert_eq!(e.pass, f.pass, "d={d} t={t}");
        }
    }
    for d in 3..=5 {
        let s = signed_design(d, 2, Measure::Sphere, 1)
            .unwrap()
            .materialize()
            .unwrap();
        for t in 0..=5 {
            let e = verify_design(&s, t, Mode::Exact, 0.0).unwrap();
            let f = verify_design(&s, t, Mode::Float, 1e-9).unwrap();
            assert_eq!(e.pass, f.pass, "signed d={d} t={t}");
        }
    }
}

#[test]
fn exact_fixtures_have_zero_l2_certificate() {
    for (name, x, strength) in common::sphere_fixtures() {
        if x.dimension() < 3 {
            continue;
        }
        let c = epsilon_l2(&x, strength).unwrap();
        assert!(c.pair_sum.abs() < 1e-10, "{name}: {}", c.pair_sum);
    }
}

#[test]
fn exact_pruning_preserves_moments() {
    let h = rat(1, 2);
    let pts: Vec<Vec<Rational>> = (0..16)
        .map(|m| {
            (0..4)
                .map(|i| {
                    if m >> i & 1 == 1 {
                        -h.clone()
                    } else {
                        h.clone()
                    }
                })
                .collect()
        })
        .collect();
    let cube =
        WeightedPointSet::from_rational(Measure::Sphere, Kind::Unweighted, pts, None).unwrap();
    assert!(verify_design(&cube, 3, Mode::Exact, 0.0).unwrap().pass);
    for s in 0..=3 {
        let p = caratheodory_prune(&cube, s).unwrap();
        assert!(p.is_exact());
        assert!(p.len() as u128 <= dim_p_sphere(4, s as usize), "s={s}");
        assert!(
            verify_design(&p, s, Mode::Exact, 0.0).unwrap().pass,
            "s={s}"
        );
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn exact_gaussian_set() -> impl Strategy<Value = WeightedPointSet> {
    (1usize..=4, 1usize..=6).prop_flat_map(|(d, n)| {
        (
            prop::collection::vec(prop::collection::vec(small_rational(), d), n),
            prop::collection::vec(small_rational(), n - 1),
        )
            .prop_map(|(points, mut w)| {
                let last = Rational::one() - w.iter().sum::<Rational>();
                w.push(last);
                WeightedPointSet::from_rational(Measure::Gaussian, Kind::Signed, points, Some(w))
                    .unwrap()
            })
    })
}

fn float_sphere_set() -> impl Strategy<Value = WeightedPointSet> {
    (1usize..=5, 1usize..=8).prop_flat_map(|(d, n)| {
        prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), n).prop_filter_map(
            "points too close to the origin",
            |raw| {
                let pts: Option<Vec<Vec<f64>>> = raw
                    .into_iter()
                    .map(|p| {
                        let r = p.iter().map(|c| c * c).sum::<f64>().sqrt();
                        (r > 1e-3).then(|| p.iter().map(|c| c / r).collect())
                    })
                    .collect();
                WeightedPointSet::from_f64(Measure::Sphere, Kind::Unweighted, pts?, None).ok()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_design_files_round_trip(x in exact_gaussian_set()) {
        let text = format_design(&x).unwrap();
        prop_assert_eq!(parse_design(&text).unwrap(), x);
    }

    #[test]
    fn float_design_files_round_trip(x in float_sphere_set()) {
        let text = format_design(&x).unwrap();
        prop_assert_eq!(parse_design(&text).unwrap(), x);
    }

    #[test]
    fn permutations_keep_reports(x in float_sphere_set(), seed in any::<u64>(), t in 0u32..5) {
        let d = x.dimension();
        let mut perm: Vec<usize> = (0..d).collect();
        let mut s = seed;
        for i in (1..d).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let y = x.permute_coordinates(&perm).unwrap();
        let a = verify_design(&x, t, Mode::Float, 1e-9).unwrap();
        let b = verify_design(&y, t, Mode::Float, 1e-9).unwrap();
        prop_assert_eq!(a.pass, b.pass);
        for (u, v) in a.per_degree_max_residual.iter().zip(&b.per_degree_max_residual) {
            prop_assert!((u - v).abs() <= 1e-12 * u.abs().max(1.0));
        }
    }

    #[test]
    fn orbit_moments_match_materialized_sums(
        d in 1usize..=4,
        a in prop::collection::vec(small_rational(), 0..=2),
    ) {
        prop_assume!(a.len() <= d);
        let pts = orbit_points(&a, d).unwrap();
        for alpha in enumerate_multi_indices(d, 6) {
            let brute: Rational = pts
                .iter()
                .map(|y| {
                    y.iter()
                        .zip(alpha.exponents())
                        .map(|(c, &e)| num_traits::pow(c.clone(), e as usize))
                        .product::<Rational>()
                })
                .sum();
            prop_assert_eq!(orbit_moment(&alpha, &a).unwrap(), brute);
        }
        let odd = MultiIndex::axis(d, 0, 3);
        prop_assert!(orbit_moment(&odd, &a).unwrap().is_zero());
    }

    #[test]
    fn tensor_construction_sizes(d in 1usize..=8, t in 1u32..=3, eps in 0.2f64..1.0, seed in any::<u64>()) {
        let out = construct_tensor_approx(d, t, eps, seed).unwrap();
        prop_assert!(out.design.len() <= tensor_sample_size(eps));
        prop_assert!(tensor_lower_bound(d, t, eps) as usize <= out.design.len());
        prop_assert!(out.certificates[0].epsilon_achieved <= eps);
    }
}
