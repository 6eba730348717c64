//! Property tests for the derivative towers: exactness on polynomials and
//! the algebra laws that composition relies on.

use finsler_holonomy::jet::{jet_space, Jet};
use proptest::prelude::*;

/// Evaluate Σ c_{ab} u^a v^b and its exact partial ∂^(da,db) at (u, v).
fn poly_partial(coeffs: &[[f64; 4]; 4], u: f64, v: f64, da: usize, db: usize) -> f64 {
    let mut acc = 0.0;
    for (a, row) in coeffs.iter().enumerate() {
        for (b, &c) in row.iter().enumerate() {
            if a < da || b < db {
                continue;
            }
            let fall = |n: usize, k: usize| (n - k + 1..=n).product::<usize>() as f64;
            acc += c * fall(a, da) * fall(b, db) * u.powi((a - da) as i32) * v.powi((b - db) as i32);
        }
    }
    acc
}

fn poly_jet(coeffs: &[[f64; 4]; 4], u: &Jet, v: &Jet) -> Jet {
    let mut acc = Jet::constant(u.space(), 0.0);
    for (a, row) in coeffs.iter().enumerate() {
        for (b, &c) in row.iter().enumerate() {
            if c != 0.0 {
                acc = &acc + &(&(&u.powi(a as u32) * &v.powi(b as u32)) * c);
            }
        }
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn towers_reproduce_polynomial_derivatives_exactly(
        flat in prop::collection::vec(-2.0f64..2.0, 16),
        u in -1.5f64..1.5,
        v in -1.5f64..1.5,
    ) {
        let mut coeffs = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                // keep total degree within the tower order
                coeffs[a][b] = if a + b <= 3 { flat[4 * a + b] } else { 0.0 };
            }
        }
        let space = jet_space(2, 3).unwrap();
        let ju = Jet::variable(space, u, 0);
        let jv = Jet::variable(space, v, 1);
        let f = poly_jet(&coeffs, &ju, &jv);
        for da in 0..=3usize {
            for db in 0..=3 - da {
                let exact = poly_partial(&coeffs, u, v, da, db);
                let tower = f.partial(&[da, db]);
                prop_assert!(
                    (tower - exact).abs() <= 1e-11 * exact.abs().max(1.0),
                    "∂^({da},{db}): tower {tower} vs exact {exact}"
                );
            }
        }
    }

    #[test]
    fn reciprocal_and_sqrt_invert_multiplication(
        u in 0.3f64..2.5,
        v in -1.0f64..1.0,
    ) {
        let space = jet_space(2, 4).unwrap();
        let ju = Jet::variable(space, u, 0);
        let jv = Jet::variable(space, v, 1);
        let f = &(&ju + &(&jv * &jv)) + 0.1; // positive on the sampled box
        let one = &f * &f.recip();
        let back = &f.sqrt() * &f.sqrt();
        for (alpha, p) in one.partials() {
            let expected = if alpha.iter().all(|&k| k == 0) { 1.0 } else { 0.0 };
            prop_assert!((p - expected).abs() <= 1e-11);
        }
        for ((_, a), (_, b)) in back.partials().zip(f.partials()) {
            prop_assert!((a - b).abs() <= 1e-11 * b.abs().max(1.0));
        }
    }
}
