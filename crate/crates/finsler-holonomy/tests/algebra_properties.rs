//! Property tests for the circle-field algebra and metric homogeneity.

use finsler_holonomy::circle::{exp_flow, lie_bracket, CircleMap, CircleVectorField};
use finsler_holonomy::metrics::FinslerMetric;
use finsler_holonomy::ode::OdeSettings;
use proptest::prelude::*;

fn arb_field(max_degree: usize, nmax: usize) -> impl Strategy<Value = CircleVectorField> {
    prop::collection::vec(-1.0f64..1.0, 1 + 2 * max_degree).prop_map(move |coeffs| {
        let mut f = CircleVectorField::constant(coeffs[0], nmax);
        for n in 1..=max_degree {
            f = f.with_cos(n, coeffs[2 * n - 1]).with_sin(n, coeffs[2 * n]);
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_antisymmetric(f in arb_field(4, 12), g in arb_field(4, 12)) {
        let fg = lie_bracket(&f, &g);
        let gf = lie_bracket(&g, &f);
        prop_assert!(fg.add(&gf).sup_norm() <= 1e-12);
    }

    #[test]
    fn jacobi_identity_holds_without_truncation(
        f in arb_field(4, 12),
        g in arb_field(4, 12),
        h in arb_field(4, 12),
    ) {
        let total = lie_bracket(&f, &lie_bracket(&g, &h))
            .add(&lie_bracket(&g, &lie_bracket(&h, &f)))
            .add(&lie_bracket(&h, &lie_bracket(&f, &g)));
        prop_assert!(total.sup_norm() <= 1e-10);
    }

    #[test]
    fn parseval_identity(f in arb_field(8, 8)) {
        // mean square of grid samples equals the coefficient energy
        let n = 64;
        let ms_samples = (0..n)
            .map(|i| f.eval(std::f64::consts::TAU * i as f64 / n as f64).powi(2))
            .sum::<f64>()
            / n as f64;
        prop_assert!((ms_samples - f.mean_square()).abs() <= 1e-10);
    }

    #[test]
    fn fourier_projection_is_exact_for_band_limited_fields(f in arb_field(8, 8)) {
        let n = 64;
        let samples: Vec<f64> = (0..n)
            .map(|i| f.eval(std::f64::consts::TAU * i as f64 / n as f64))
            .collect();
        let (g, _) = CircleVectorField::from_samples(&samples, 8);
        prop_assert!(f.sup_distance(&g) <= 1e-11);
    }

    #[test]
    fn funk_norm_is_one_homogeneous(
        r in 0.0f64..0.85,
        a in 0.0f64..std::f64::consts::TAU,
        yr in 0.2f64..2.0,
        ya in 0.0f64..std::f64::consts::TAU,
        s in 0.05f64..5.0,
    ) {
        let m = FinslerMetric::funk(1);
        let x = [r * a.cos(), r * a.sin()];
        let y = [yr * ya.cos(), yr * ya.sin()];
        let f = m.norm(x, y).unwrap();
        let fs = m.norm(x, [s * y[0], s * y[1]]).unwrap();
        prop_assert!((fs - s * f).abs() <= 1e-12 * s * f);
        let p = m.projective_factor(x, y).unwrap();
        let ps = m.projective_factor(x, [s * y[0], s * y[1]]).unwrap();
        prop_assert!((ps - s * p).abs() <= 1e-11 * (s * p.abs()).max(1e-6));
    }
}

#[test]
fn flow_round_trip_is_the_identity() {
    // exp(s) ∘ exp(−s) = id within 1e-8 for a handful of fields
    let tight = OdeSettings {
        rtol: 1e-12,
        atol: 1e-12,
        ..OdeSettings::default()
    };
    let fields = [
        CircleVectorField::constant(0.4, 4),
        CircleVectorField::zero(4).with_sin(1, 0.8),
        CircleVectorField::constant(-0.1, 4)
            .with_cos(2, 0.35)
            .with_sin(3, 0.2),
    ];
    for f in fields {
        let fwd = exp_flow(&f, 0.7, 1024, &tight).unwrap();
        let bwd = exp_flow(&f, -0.7, 1024, &tight).unwrap();
        let round = bwd.compose(&fwd).unwrap();
        let d = round.distance(&CircleMap::identity(1024));
        assert!(d <= 1e-8, "round trip distance {d:.3e}");
    }
}
