//! Property tests for the structural invariants: linearity of the
//! integrator, symmetry of the Beta function, composition of dilations,
//! the discrete Young identities, and exponent monotonicity of norms on a
//! probability space.

use proptest::prelude::*;

use gls_core::convolution::{convolve_cyclic, convolve_grid, ConvolutionPlan};
use gls_core::function::{dilate, make_gaussian, SampledFunction};
use gls_core::norms::lp_norm;
use gls_core::quadrature::{integrate, QuadratureRequest};
use gls_core::{beta_function, FunctionRep, GroupDomain};

fn small_domain() -> GroupDomain {
    GroupDomain::real_line(8.0, 256).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beta_is_bitwise_symmetric(a in 0.05f64..30.0, b in 0.05f64..30.0) {
        let ab = beta_function(a, b).unwrap();
        let ba = beta_function(b, a).unwrap();
        prop_assert_eq!(ab.to_bits(), ba.to_bits());
    }

    #[test]
    fn dilations_compose(l1 in 0.2f64..4.0, l2 in 0.2f64..4.0, x in -8.0f64..8.0) {
        let f = make_gaussian(1.0).unwrap();
        let nested = dilate(&dilate(&f, l1, 1).unwrap(), l2, 1).unwrap();
        let flat = dilate(&f, l1 * l2, 1).unwrap();
        prop_assert!((nested.eval(x) - flat.eval(x)).abs() < 1e-12);
    }

    #[test]
    fn cyclic_norms_are_monotone_in_p(values in prop::collection::vec(-3.0f64..3.0, 4..24)) {
        // on a probability space |f|_p is nondecreasing in p
        let domain = GroupDomain::cyclic(values.len()).unwrap();
        let f = FunctionRep::Sampled(SampledFunction::new(domain, values).unwrap());
        let mut prev = 0.0f64;
        for p in [1.0, 2.0, 4.0, 16.0, f64::INFINITY] {
            let n = lp_norm(&f, p).unwrap();
            prop_assert!(n >= prev * (1.0 - 1e-12), "p = {}: {} < {}", p, n, prev);
            prev = n;
        }
    }

    #[test]
    fn cyclic_identity_element(values in prop::collection::vec(-5.0f64..5.0, 2..16)) {
        let n = values.len();
        let mut impulse = vec![0.0; n];
        impulse[0] = n as f64;
        let out = convolve_cyclic(&impulse, &values).unwrap();
        for (a, b) in out.iter().zip(&values) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_young_l1_equality_for_nonnegative(
        seed_f in 0u8..255, seed_g in 0u8..255,
    ) {
        // |f*g|_1 = |f|_1 |g|_1 exactly for nonnegative grid functions whose
        // supports stay inside the window
        let d = small_domain();
        let bump = |seed: u8| {
            let c = (seed as f64 / 255.0) * 4.0 - 2.0;
            let w = 0.5 + (seed as f64 % 7.0) / 7.0;
            let values: Vec<f64> = d
                .points()
                .map(|x| if (x - c).abs() < w { 1.0 + (x - c).cos() } else { 0.0 })
                .collect();
            SampledFunction::new(d, values).unwrap()
        };
        let (f, g) = (bump(seed_f), bump(seed_g));
        let h = convolve_grid(&f, &g, &ConvolutionPlan::direct()).unwrap();
        let lhs = lp_norm(&FunctionRep::Sampled(h), 1.0).unwrap();
        let rhs = lp_norm(&FunctionRep::Sampled(f), 1.0).unwrap()
            * lp_norm(&FunctionRep::Sampled(g), 1.0).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn grid_convolution_commutes(seed_f in 0u8..255, seed_g in 0u8..255) {
        let d = small_domain();
        let wave = |seed: u8| {
            let k = 1.0 + (seed as f64) / 64.0;
            let values: Vec<f64> = d
                .points()
                .map(|x| if x.abs() < 2.0 { (k * x).sin() } else { 0.0 })
                .collect();
            SampledFunction::new(d, values).unwrap()
        };
        let (f, g) = (wave(seed_f), wave(seed_g));
        let fg = convolve_grid(&f, &g, &ConvolutionPlan::direct()).unwrap();
        let gf = convolve_grid(&g, &f, &ConvolutionPlan::direct()).unwrap();
        for (a, b) in fg.values().iter().zip(gf.values()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}

proptest! {
    // quadrature in the loop: fewer, heavier cases
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn integrator_is_linear(
        alpha in -3.0f64..3.0, beta in -3.0f64..3.0,
        k in 0.5f64..3.0, c in -1.0f64..1.0,
    ) {
        let f = move |x: f64| (k * x).sin() + 0.1 * x;
        let g = move |x: f64| (-(x - c) * (x - c)).exp();
        let combo = move |x: f64| alpha * f(x) + beta * g(x);
        let abs_tol = 1e-10;
        let run = |h: &dyn Fn(f64) -> f64| {
            integrate(&QuadratureRequest::new(h, -2.0, 3.0).abs_tol(abs_tol))
                .unwrap()
                .value
        };
        let lhs = run(&combo);
        let rhs = alpha * run(&f) + beta * run(&g);
        prop_assert!((lhs - rhs).abs() < 10.0 * abs_tol.max(1e-13 * lhs.abs()));
    }

    #[test]
    fn sampled_gaussian_norms_match_oracle(sigma in 0.5f64..2.0, p in 1.0f64..16.0) {
        let z = make_gaussian(sigma).unwrap();
        let s = FunctionRep::Sampled(
            gls_core::function::sample(&z, GroupDomain::default_real_line()).unwrap(),
        );
        let grid = lp_norm(&s, p).unwrap();
        let oracle = lp_norm(&z, p).unwrap();
        prop_assert!((grid - oracle).abs() <= 1e-8 * oracle, "{} vs {}", grid, oracle);
    }
}
