mod common;

use ehc_core::cf1d::{Cf1d, Interval};
use ehc_core::cfnd::{expand_box, BoxCell, Cfnd, Generator};
use ehc_core::complexes::{ect, sublevel_transform, EmbeddedComplex, PlFunction};
use ehc_core::geometry::{dist_to_simplex, minkowski_points, support_value, LinearForm, Polytope, Vector};
use ehc_core::kernels::{Kernel, Monotonicity};
use ehc_core::scenes::random_complex;
use ehc_core::transforms::euler_laplace;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lattice() -> impl Strategy<Value = f64> {
    (-8i32..=8).prop_map(|k| k as f64 * 0.25)
}

fn coef() -> impl Strategy<Value = i64> {
    prop_oneof![-2i64..=-1, 1i64..=2]
}

fn interval() -> impl Strategy<Value = Interval> {
    (lattice(), 0i32..=6, any::<bool>(), any::<bool>()).prop_map(|(a, len, l, r)| {
        if len == 0 {
            Interval::point(a)
        } else {
            Interval::new(a, a + len as f64 * 0.25, l, r)
        }
    })
}

fn weighted() -> impl Strategy<Value = Vec<(i64, Interval)>> {
    prop::collection::vec((coef(), interval()), 0..5)
}

fn cf1d() -> impl Strategy<Value = Cf1d> {
    weighted().prop_map(Cf1d::from_weighted_intervals)
}

fn point(d: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3.0f64..3.0, d).prop_map(Vector::new)
}

fn polytope(d: usize) -> impl Strategy<Value = Polytope> {
    prop::collection::vec(point(d), 1..5).prop_map(|p| Polytope::new(p).unwrap())
}

fn form(d: usize) -> impl Strategy<Value = LinearForm> {
    prop::collection::vec(-2.0f64..2.0, d)
        .prop_filter("nonzero", |c| c.iter().any(|x| x.abs() > 1e-3))
        .prop_map(LinearForm::new)
}

fn box_scene(d: usize) -> impl Strategy<Value = Cfnd> {
    prop::collection::vec((coef(), prop::collection::vec(interval(), d)), 1..4).prop_map(move |terms| {
        let mut phi = Cfnd::zero(d);
        for (c, axes) in terms {
            phi.push(c, Generator::Box(BoxCell::new(axes))).unwrap();
        }
        phi
    })
}

fn voxel_scene(d: usize) -> impl Strategy<Value = Cfnd> {
    prop::collection::vec((coef(), prop::collection::vec((lattice(), 1i32..=6), d)), 1..4).prop_map(
        move |terms| {
            let mut phi = Cfnd::zero(d);
            for (c, axes) in terms {
                let low: Vec<f64> = axes.iter().map(|a| a.0).collect();
                let high: Vec<f64> = axes.iter().map(|a| a.0 + a.1 as f64 * 0.25).collect();
                phi.push(c, Generator::Box(BoxCell::half_open(&low, &high).unwrap())).unwrap();
            }
            phi
        },
    )
}

fn probes() -> Vec<f64> {
    (-20..=20).map(|k| k as f64 * 0.125).collect()
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * 1f64.max(a.norm()).max(b.norm())
}

fn affinely_independent(s: &[Vector]) -> bool {
    match s.len() {
        1 => true,
        2 => s[0].dist(&s[1]) > 1e-2,
        _ => {
            let (u, v) = (s[1].sub(&s[0]), s[2].sub(&s[0]));
            (u[0] * v[1] - u[1] * v[0]).abs() > 1e-2
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn width_is_nonnegative(p in polytope(3), xi in form(3)) {
        prop_assert!(support_value(&p, &xi) + support_value(&p, &xi.neg()) >= -1e-12);
    }

    #[test]
    fn support_adds_under_minkowski_sum(p in polytope(2), q in polytope(2), xi in form(2)) {
        let s = minkowski_points(&p, &q).unwrap();
        let lhs = support_value(&s, &xi);
        let rhs = support_value(&p, &xi) + support_value(&q, &xi);
        prop_assert!((lhs - rhs).abs() <= 1e-9);
    }

    #[test]
    fn simplex_distance_is_at_most_vertex_distance(
        s in prop::collection::vec(point(2), 1..=3),
        v in point(2),
    ) {
        prop_assume!(affinely_independent(&s));
        let d = dist_to_simplex(&v, &s);
        let nearest = s.iter().map(|p| v.dist(p)).fold(f64::INFINITY, f64::min);
        prop_assert!(d <= nearest + 1e-12);
        if s.len() == 1 {
            prop_assert!((d - nearest).abs() <= 1e-12);
        }
    }

    #[test]
    fn simplex_distance_vanishes_inside(
        s in prop::collection::vec(point(2), 3),
        w in prop::collection::vec(0.01f64..1.0, 3),
    ) {
        prop_assume!(affinely_independent(&s));
        let total: f64 = w.iter().sum();
        let inside = s.iter().zip(&w).fold(Vector::zeros(2), |acc, (p, &wi)| acc.add(&p.scale(wi / total)));
        prop_assert!(dist_to_simplex(&inside, &s) <= 1e-9);
    }

    #[test]
    fn simplex_distance_is_translation_invariant(
        s in prop::collection::vec(point(2), 1..=3),
        v in point(2),
        t in point(2),
    ) {
        prop_assume!(affinely_independent(&s));
        let moved: Vec<Vector> = s.iter().map(|p| p.add(&t)).collect();
        let a = dist_to_simplex(&v, &s);
        let b = dist_to_simplex(&v.add(&t), &moved);
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn cf1d_evaluates_as_weighted_sum(items in weighted()) {
        let f = Cf1d::from_weighted_intervals(items.clone());
        for x in probes() {
            let want: i64 = items.iter().filter(|(_, iv)| iv.contains(x)).map(|(c, _)| c).sum();
            prop_assert_eq!(f.evaluate(x), want, "at {}", x);
        }
    }

    #[test]
    fn cf1d_round_trip_and_involution(f in cf1d()) {
        prop_assert_eq!(Cf1d::recompose(&f.decompose()), f.clone());
        prop_assert_eq!(f.dualize().dualize(), f.clone());
        prop_assert_eq!(f.dualize().euler_integral(), f.euler_integral());
    }

    #[test]
    fn cf1d_convolution_algebra(f in cf1d(), g in cf1d(), h in cf1d()) {
        let fg = f.convolve(&g).unwrap();
        prop_assert_eq!(fg.euler_integral().unwrap(), f.euler_integral().unwrap() * g.euler_integral().unwrap());
        prop_assert_eq!(&fg, &g.convolve(&f).unwrap());
        prop_assert_eq!(fg.convolve(&h).unwrap(), f.convolve(&g.convolve(&h).unwrap()).unwrap());
    }

    #[test]
    fn cf1d_duality_flips_transforms(f in cf1d()) {
        for k in [Kernel::laplace(), Kernel::fourier(), Kernel::heaviside(), Kernel::constant()] {
            let a = f.dualize().lebesgue_pair(&k).unwrap();
            let b = f.lebesgue_pair(&k).unwrap();
            prop_assert!(close(a, -b, 1e-12), "{}: {} vs {}", k, a, b);
        }
    }

    #[test]
    fn cf1d_projection_formula(f in cf1d(), a in -2.5f64..1.0, len in 0.1f64..2.0) {
        let b = a + len;
        let cut = f.mul(&Cf1d::indicator(Interval::open(a, b)));
        for k in [Kernel::laplace(), Kernel::fourier(), Kernel::heaviside()] {
            let lhs = f.lebesgue_pair(&k.compose_window(a, b).unwrap()).unwrap();
            let rhs = cut.lebesgue_pair(&k).unwrap();
            prop_assert!(close(lhs, rhs, 1e-12));
        }
    }

    #[test]
    fn pushforward_commutes_with_translation(phi in box_scene(2), xi in form(2), t in point(2)) {
        let lhs = phi.translate(&t).unwrap().pushforward_linear(&xi).unwrap();
        let rhs = phi.pushforward_linear(&xi).unwrap().pushforward_affine(1.0, xi.pair(&t)).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-9), "{:?} vs {:?}", lhs, rhs);
    }

    #[test]
    fn pushforward_preserves_euler_integral(phi in box_scene(3), q in polytope(3), xi in form(3)) {
        let mut psi = phi.clone();
        psi.push(1, Generator::Polytope(q)).unwrap();
        for s in [&phi, &psi] {
            prop_assert_eq!(s.pushforward_linear(&xi).unwrap().euler_integral(), s.euler_integral());
        }
    }

    #[test]
    fn pushforward_exchanges_with_convolution(phi in box_scene(2), psi in box_scene(2), xi in form(2)) {
        let lhs = phi.convolve(&psi).unwrap().pushforward_linear(&xi).unwrap();
        let rhs = phi.pushforward_linear(&xi).unwrap().convolve(&psi.pushforward_linear(&xi).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-9));
    }

    #[test]
    fn box_product_pushes_to_convolution(phi in box_scene(2), psi in box_scene(1), xi in form(2), w in form(1)) {
        let mut prod = Cfnd::zero(3);
        for (c, g) in phi.terms() {
            for (e, h) in psi.terms() {
                let (Generator::Box(a), Generator::Box(b)) = (g, h) else { unreachable!() };
                let axes = a.axes().iter().chain(b.axes()).copied().collect();
                prod.push(c * e, Generator::Box(BoxCell::new(axes))).unwrap();
            }
        }
        let eta = LinearForm::new(vec![xi[0], xi[1], w[0]]);
        let lhs = prod.pushforward_linear(&eta).unwrap();
        let rhs = phi.pushforward_linear(&xi).unwrap().convolve(&psi.pushforward_linear(&w).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-9));
    }

    #[test]
    fn expanded_boxes_evaluate_alike(axes in prop::collection::vec(interval(), 2)) {
        let cell = BoxCell::new(axes);
        let mut expanded = Cfnd::zero(2);
        for (m, p) in expand_box(&cell).unwrap() {
            expanded.push(m, Generator::Polytope(p)).unwrap();
        }
        for &x in &probes() {
            for &y in &probes() {
                let v = Vector::new(vec![x, y]);
                prop_assert_eq!(expanded.evaluate(&v).unwrap(), i64::from(cell.contains(&v)));
            }
        }
    }

    #[test]
    fn voxel_pushforward_is_right_closed(phi in voxel_scene(2), a in 0.05f64..2.0, b in 0.05f64..2.0) {
        let theta = phi.pushforward_linear(&LinearForm::new(vec![a, b])).unwrap();
        prop_assert!(theta.is_right_closed());
    }

    #[test]
    fn kernel_windows_add_up(a in -3.0f64..3.0, l1 in 0.01f64..2.0, l2 in 0.01f64..2.0) {
        let (b, c) = (a + l1, a + l1 + l2);
        for k in [Kernel::laplace(), Kernel::neg_laplace(), Kernel::fourier(), Kernel::heaviside(), Kernel::constant()] {
            let sum = k.integrate_window(a, b).unwrap() + k.integrate_window(b, c).unwrap();
            prop_assert!((sum - k.integrate_window(a, c).unwrap()).norm() <= 1e-12, "{}", k);
        }
        let tail = Kernel::laplace().integrate_window(a, f64::INFINITY).unwrap();
        prop_assert_eq!(tail, Complex64::new((-a).exp(), 0.0));
    }

    #[test]
    fn monotonicity_tags_hold_on_samples(
        a in -3.0f64..3.0,
        len in 0.5f64..4.0,
        pairs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 100),
    ) {
        let b = a + len;
        for base in [Kernel::laplace(), Kernel::neg_laplace(), Kernel::heaviside(), Kernel::constant()] {
            let k = base.compose_window(a, b).unwrap();
            let sign = match k.monotonicity() {
                Monotonicity::StrictlyIncreasing => 1.0,
                Monotonicity::StrictlyDecreasing => -1.0,
                Monotonicity::Unknown => continue,
            };
            for &(s, t) in &pairs {
                let (x, y) = (a + len * s.min(t), a + len * s.max(t));
                if y - x < 1e-6 {
                    continue;
                }
                let d = k.antiderivative_real(y).unwrap() - k.antiderivative_real(x).unwrap();
                prop_assert!(sign * d > 0.0, "{} on ({}, {})", k, x, y);
            }
        }
    }

    #[test]
    fn polytope_laplace_closed_form(p in polytope(2), xi in form(2)) {
        let heights: Vec<f64> = p.points().iter().map(|v| xi.pair(v)).collect();
        let lo = heights.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = heights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let want = (-lo).exp() - (-hi).exp();
        let got = euler_laplace(&Cfnd::polytope(1, p), &xi).unwrap();
        prop_assert!((got - want).abs() <= 1e-12 * 1f64.max(want.abs()));
    }

    #[test]
    fn ect_matches_scene_route(seed in any::<u64>(), xi in form(2)) {
        let z = random_complex(&mut ChaCha8Rng::seed_from_u64(seed));
        let phi = complex_as_scene(&z);
        let swept = phi
            .pushforward_linear(&xi)
            .unwrap()
            .convolve(&Cf1d::indicator(Interval::ray_up(0.0)))
            .unwrap();
        let curve = ect(&z, &xi).unwrap().to_cf1d();
        prop_assert!(curve.approx_eq(&swept, 1e-9), "{:?} vs {:?}", curve, swept);
    }

    #[test]
    fn ecb_pairs_the_curve_below_the_cutoff(seed in any::<u64>(), xi in form(2), a in -3.0f64..4.0) {
        let z = random_complex(&mut ChaCha8Rng::seed_from_u64(seed));
        let coords: Vec<PlFunction> = (0..2)
            .map(|i| PlFunction::new(&z, z.vertices().iter().map(|v| v[i]).collect()).unwrap())
            .collect();
        let heights: Vec<f64> = z.vertices().iter().map(|v| xi.pair(v)).collect();
        let want: f64 = common::lower_star_jumps(&z, &heights)
            .iter()
            .map(|&(c, m)| m as f64 * (a - c).max(0.0))
            .sum();
        let got = sublevel_transform(&z, &coords, &xi, &Kernel::ecb(a)).unwrap();
        prop_assert!((got.re - want).abs() <= 1e-9 && got.im == 0.0, "{} vs {}", got, want);
    }
}

/// `1_Z = Σ_τ 1_{cl τ} · Σ_{σ ⊇ τ} (−1)^{dim σ − dim τ}` over the cells of `Z`.
fn complex_as_scene(z: &EmbeddedComplex) -> Cfnd {
    let mut phi = Cfnd::zero(2);
    for tau in z.cells() {
        let m: i64 = z
            .cells()
            .iter()
            .filter(|s| tau.iter().all(|v| s.contains(v)))
            .map(|s| if (s.len() - tau.len()) % 2 == 0 { 1 } else { -1 })
            .sum();
        if m != 0 {
            let pts = tau.iter().map(|&v| z.vertices()[v].clone()).collect();
            phi.push(m, Generator::Polytope(Polytope::new(pts).unwrap())).unwrap();
        }
    }
    phi
}
