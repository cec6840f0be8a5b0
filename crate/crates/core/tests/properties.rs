//! Property tests for the structural invariants of the scheme catalog, the
//! two-step conservation law, and the fixed-point engine.

use proptest::prelude::*;

use circle_dda::fixedpoint::{FixedPointConfig, ShiftAddEngine};
use circle_dda::generator::{init_two_step, step_two, TrajectoryState};
use circle_dda::metrics::IntegralState;
use circle_dda::poly::HPoly;
use circle_dda::schemes::{sequentialize, Scheme, SchemeKind, StepSize};

fn rotation_form_schemes() -> Vec<Scheme> {
    vec![
        Scheme::FirstOrderSimultaneous,
        Scheme::SecondOrderSimultaneous,
        Scheme::ThirdOrderSimultaneous,
        Scheme::Matsushiro,
        Scheme::BestThirdOrder,
        Scheme::ExactRotation,
        Scheme::ImplicitMidpoint,
    ]
}

proptest! {
    #[test]
    fn rotation_form_entries_hold_exactly(hv in 1e-6..1.0f64, idx in 0usize..7) {
        let scheme = rotation_form_schemes()[idx];
        let m = scheme.matrix(StepSize::new(hv).unwrap()).unwrap();
        prop_assert_eq!(m.b, -m.c);
        prop_assert_eq!(m.d, m.a);
    }

    #[test]
    fn every_catalog_entry_evaluates_on_its_validity_range(
        frac in 1e-6..1.0f64,
        idx in 0usize..10,
    ) {
        let scheme = circle_dda::schemes::catalog()[idx];
        if scheme.kind() == SchemeKind::OneStep {
            let (bound, _) = scheme.max_step();
            let hv = frac * bound.min(8.0);
            prop_assert!(scheme.matrix(StepSize::new(hv).unwrap()).is_ok());
        }
    }

    #[test]
    fn two_step_conserves_squared_radius(
        delta in 0.01..0.999f64,
        r in 0.1..10.0f64,
        steps in 1usize..400,
    ) {
        let ic = init_two_step(r, delta).unwrap();
        let mut s = TrajectoryState::from_pair((ic.x0, ic.y0), (ic.x1, ic.y1));
        let r2 = r * r;
        for _ in 0..steps {
            s = step_two(delta, &s);
            prop_assert!((s.x * s.x + s.y * s.y - r2).abs() <= 1e-13 * r2);
        }
    }

    #[test]
    fn integral_state_is_quadratically_homogeneous(
        x0 in -2.0..2.0f64,
        y0 in -2.0..2.0f64,
        x1 in -2.0..2.0f64,
        y1 in -2.0..2.0f64,
        scale in 0.01..100.0f64,
    ) {
        let base = IntegralState::from_points((x0, y0), (x1, y1));
        let scaled = IntegralState::from_points(
            (scale * x0, scale * y0),
            (scale * x1, scale * y1),
        );
        let s2 = scale * scale;
        for (b, s) in base.as_array().iter().zip(scaled.as_array().iter()) {
            prop_assert!((s2 * b - s).abs() <= 1e-12 * s2 * b.abs().max(1.0));
        }
    }

    #[test]
    fn sequential_construction_has_det_a_squared_without_truncation(
        a2 in -1.0..1.0f64,
        c2 in -1.0..1.0f64,
        hv in 0.01..1.0f64,
    ) {
        // untruncated: det = a*(a - c^2) + c*(a*c) = a^2
        let a = HPoly::new(&[1.0, 0.0, a2]);
        let c = HPoly::new(&[0.0, 1.0, c2]);
        let m = sequentialize(&a, &c, 8).eval(hv);
        let av = a.eval(hv);
        prop_assert!((m.det() - av * av).abs() <= 1e-12 * av.abs().max(1.0));
    }

    #[test]
    fn fixed_two_step_radius_bounded_over_a_period(
        m in 1u32..=3,
        n in 8u32..=12,
    ) {
        let cfg = FixedPointConfig::new(m, n, FixedPointConfig::default_frac_bits(m), 8).unwrap();
        let mut engine = ShiftAddEngine::two_step(cfg);
        let steps = (std::f64::consts::TAU / cfg.h().asin()).ceil() as usize + 2;
        let r_scaled = cfg.r() * cfg.scale();
        let tol = 2.0_f64.powi(-(2 * m as i32));
        for _ in 0..steps {
            engine.step().unwrap();
            let s = engine.state();
            let radius = ((s.x as f64).powi(2) + (s.y as f64).powi(2)).sqrt();
            prop_assert!(radius >= r_scaled * (1.0 - tol));
            prop_assert!(radius <= r_scaled * (1.0 + tol));
        }
    }
}
