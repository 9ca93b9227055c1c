use std::f64::consts::PI;
use std::sync::LazyLock;

use flatsurf_core::curves::FaceCurve;
use flatsurf_core::fixtures::ALL;
use flatsurf_core::sample;
use flatsurf_core::teich::{chart_dimension, distinguish, invariants, Verdict};
use flatsurf_core::{
    check_length_preservation, corner_angle, parse_spec, validate, Barycentric, DistanceEngine,
    EdgeLengths, EngineOptions, FlatSurface, SurfaceCurve, SurfacePoint,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

static ENGINES: LazyLock<Vec<DistanceEngine>> = LazyLock::new(|| {
    ALL.iter()
        .map(|f| {
            DistanceEngine::new(
                f.surface(),
                EngineOptions {
                    fast_path: false,
                    ..EngineOptions::default()
                },
            )
        })
        .collect()
});

fn interior() -> impl Strategy<Value = Barycentric> {
    (1e-6..1.0f64, 1e-6..1.0f64).prop_filter_map("inside", |(a, b)| {
        let (a, b) = if a + b >= 1.0 {
            (1.0 - a, 1.0 - b)
        } else {
            (a, b)
        };
        let c = 1.0 - a - b;
        (a > 0.0 && b > 0.0 && c > 0.0)
            .then(|| Barycentric::new([a, b, c]).ok())
            .flatten()
    })
}

/// Interior, side or corner barycentric coordinates.
fn any_bary() -> impl Strategy<Value = Barycentric> {
    prop_oneof![
        6 => interior(),
        3 => (0u8..3, 1e-6..1.0 - 1e-6).prop_map(|(k, t)| Barycentric::on_side(k, 1.0 - t, t)),
        1 => (0u8..3).prop_map(Barycentric::corner),
    ]
}

fn point_on(fixture: usize) -> impl Strategy<Value = SurfacePoint> {
    let faces = ENGINES[fixture].surface().triangulation().face_count();
    (0..faces, any_bary()).prop_map(move |(f, b)| ENGINES[fixture].surface().point(f, b))
}

fn fixture_and_points(n: usize) -> impl Strategy<Value = (usize, Vec<SurfacePoint>)> {
    (0..ALL.len()).prop_flat_map(move |i| (Just(i), prop::collection::vec(point_on(i), n)))
}

fn perturbed(fixture: usize, factors: &[f64]) -> Option<FlatSurface> {
    let base = ALL[fixture].surface();
    let tri = base.triangulation().clone();
    let values: Vec<f64> = base
        .lengths()
        .values()
        .iter()
        .zip(factors)
        .map(|(v, f)| v * f)
        .collect();
    EdgeLengths::from_slice(&tri, &values)
        .ok()
        .map(|l| FlatSurface::new(tri, l).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn face_distance_is_a_metric(i in 0..3usize, p in any_bary(), q in any_bary(), r in any_bary()) {
        let s = ENGINES[i].surface();
        let d = |a: &Barycentric, b: &Barycentric| s.face_distance(0, a, b);
        prop_assert_eq!(d(&p, &p), 0.0);
        prop_assert_eq!(d(&p, &q), d(&q, &p));
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + 1e-12);
    }

    #[test]
    fn orbits_do_not_depend_on_the_starting_rep((i, pts) in fixture_and_points(1)) {
        let s = ENGINES[i].surface();
        for r in pts[0].reps() {
            let again = s.point(r.face, r.bary);
            prop_assert_eq!(again.reps(), pts[0].reps());
        }
    }

    #[test]
    fn gauss_bonnet_on_random_lengths(i in 0..3usize, f in prop::collection::vec(0.8..1.25f64, 6)) {
        if let Some(s) = perturbed(i, &f) {
            prop_assert!(s.gauss_bonnet_residual().abs() < 1e-9);
            for p in s.placements() {
                let sum: f64 = (0..3).map(|c| corner_angle(p, c)).sum();
                prop_assert!((sum - PI).abs() < 1e-9);
            }
            prop_assert_eq!(invariants(&s).cone_angles.len(), s.triangulation().vertex_count());
        }
    }

    #[test]
    fn radii_are_ordered((i, pts) in fixture_and_points(1)) {
        let s = ENGINES[i].surface();
        let x = &pts[0];
        let (r, rp, rpp) = (s.safety_radius(x), s.separation_radius(x), s.combined_radius(x));
        prop_assert!(r > 0.0 && rp > 0.0);
        prop_assert!(rpp <= r && rpp <= rp);
        if x.reps().len() == 1 {
            prop_assert_eq!(rp, f64::INFINITY);
        }
    }

    #[test]
    fn distance_axioms((i, pts) in fixture_and_points(3)) {
        let e = &ENGINES[i];
        let (x, y, z) = (&pts[0], &pts[1], &pts[2]);
        let dxy = e.distance_exact(x, y).unwrap();
        prop_assert_eq!(dxy.to_bits(), e.distance_exact(y, x).unwrap().to_bits());
        prop_assert_eq!(dxy == 0.0, x == y);
        let dxz = e.distance_exact(x, z).unwrap();
        let dyz = e.distance_exact(y, z).unwrap();
        prop_assert!(dxz <= dxy + dyz + 1e-9);
        prop_assert!(dxy.is_finite());
    }

    #[test]
    fn locality_and_upper_bounds((i, pts) in fixture_and_points(2)) {
        let e = &ENGINES[i];
        let s = e.surface();
        let (x, y) = (&pts[0], &pts[1]);
        let d = e.distance_exact(x, y).unwrap();
        if d < s.safety_radius(x) {
            let (di, ..) = s.shared_distance(x, y).expect("shared face");
            prop_assert!((d - di).abs() < 1e-9);
        }
        for k in [0, 4, 16] {
            prop_assert!(e.distance_approx(x, y, k) >= d - 1e-9);
        }
        if let Some((di, ..)) = s.shared_distance(x, y) {
            prop_assert!(d <= di + 1e-12);
        }
    }

    #[test]
    fn witness_curves((i, pts) in fixture_and_points(2)) {
        let e = &ENGINES[i];
        let s = e.surface();
        let g = e.realize_geodesic(&pts[0], &pts[1]).unwrap();
        g.curve.check(s.triangulation()).unwrap();
        prop_assert!((g.curve.length(s) - g.length).abs() < 1e-9);
        if pts[0] != pts[1] {
            prop_assert_eq!(g.curve.start(s.triangulation()).unwrap(), pts[0].clone());
            prop_assert_eq!(g.curve.end(s.triangulation()).unwrap(), pts[1].clone());
        }
    }

    #[test]
    fn homothety_scales_distances((i, pts) in fixture_and_points(2), c in 0.1..10.0f64) {
        let e = &ENGINES[i];
        let scaled = DistanceEngine::new(e.surface().scaled(c), e.options().clone());
        let d = e.distance_exact(&pts[0], &pts[1]).unwrap();
        let dc = scaled.distance_exact(&pts[0], &pts[1]).unwrap();
        prop_assert!((dc - c * d).abs() <= 1e-9 * (c * d).max(1e-300));
        let (a, b) = (invariants(e.surface()), invariants(scaled.surface()));
        prop_assert!((b.area / a.area - c * c).abs() <= 1e-9 * c * c);
        prop_assert_eq!(distinguish(e.surface(), e.surface()), Ok(Verdict::Inconclusive));
    }

    #[test]
    fn face_curves_keep_their_length(i in 0..3usize, p in interior(), q in interior(), r in any_bary()) {
        let e = &ENGINES[i];
        prop_assume!(p != q && q != r);
        let c = FaceCurve::new(0, vec![p, q, r]).unwrap();
        let (ok, report) = check_length_preservation(&c, e, 1e-6).unwrap();
        prop_assert!(ok, "{:?}", report);
        for w in report.sums.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12);
        }
        for s in &report.sums {
            prop_assert!(*s <= report.face_length + 1e-9);
        }
    }

    #[test]
    fn curve_length_is_additive(i in 0..3usize, p in interior(), q in interior(), r in interior()) {
        prop_assume!(p != q && q != r);
        let s = ENGINES[i].surface();
        let tri = s.triangulation();
        let a = FaceCurve::new(0, vec![p, q]).unwrap();
        let b = FaceCurve::new(0, vec![q, r]).unwrap();
        let joined = SurfaceCurve::new(tri, vec![a.clone(), b.clone()]).unwrap();
        let sum = SurfaceCurve::new(tri, vec![a]).unwrap().length(s) + SurfaceCurve::new(tri, vec![b]).unwrap().length(s);
        prop_assert_eq!(joined.length(s), sum);
    }

    #[test]
    fn random_gluings_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tri = sample::random_gluing(&mut rng, 12);
        let text = tri.spec().to_text();
        let again = validate(&parse_spec(&text).unwrap()).unwrap();
        prop_assert!(again == tri);
        prop_assert_eq!(chart_dimension(&tri), Ok(tri.edge_count()));
        prop_assert_eq!(
            tri.edge_count() as i64,
            3 * tri.vertex_count() as i64 - 3 * tri.euler_char()
        );
    }
}
