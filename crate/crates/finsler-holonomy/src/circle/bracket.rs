//! Lie bracket and bracket closure on truncated Fourier fields.
//!
//! The bracket follows the displayed convention [f d/dt, g d/dt] =
//! (g f′ − g′ f) d/dt, which is the negative of the usual vector-field
//! bracket (it is the Lie algebra of the diffeomorphism group that acts
//! here). Closure results do not depend on the sign convention.

use crate::circle::fourier::CircleVectorField;

/// [f, g] = (g f′ − g′ f) d/dt, projected back onto the larger of the two
/// truncations. Returns the field and the mean-square energy lost to the
/// truncation (the product has twice the degree).
pub fn lie_bracket_full(f: &CircleVectorField, g: &CircleVectorField) -> (CircleVectorField, f64) {
    let nmax = f.nmax().max(g.nmax());
    // exact projection: sample above the Nyquist rate of the degree-2N product
    let grid = 4 * (2 * nmax + 2);
    let samples: Vec<f64> = (0..grid)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / grid as f64;
            g.eval(t) * f.derivative().eval(t) - g.derivative().eval(t) * f.eval(t)
        })
        .collect();
    let (full, _) = CircleVectorField::from_samples(&samples, 2 * nmax);
    let kept = CircleVectorField::from_coeff_vec(&full.coeff_vec()[..2 * nmax + 1]);
    let loss = full.mean_square() - kept.mean_square();
    (kept, loss.max(0.0))
}

/// Bracket with the truncation loss discarded.
pub fn lie_bracket(f: &CircleVectorField, g: &CircleVectorField) -> CircleVectorField {
    lie_bracket_full(f, g).0
}

/// Result of iterated bracket closure inside the degree-≤ nmax space.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    /// Spanned dimension after the initial span and after each depth level.
    pub dimension_trace: Vec<usize>,
    pub final_dimension: usize,
    /// Whether the span stabilized within the depth budget.
    pub stable: bool,
}

/// Relative threshold deciding when a bracket adds a new direction.
const RANK_TOL: f64 = 1e-9;

/// Grow an orthogonal basis from the generators by repeatedly bracketing the
/// current span with the generators and projecting onto the degree-≤ nmax
/// space. Iteration order is fixed, so the result is deterministic.
pub fn bracket_closure(
    generators: &[CircleVectorField],
    nmax: usize,
    max_depth: usize,
) -> ClosureReport {
    let dim = 2 * nmax + 1;
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let add = |basis: &mut Vec<Vec<f64>>, v: Vec<f64>| -> bool {
        let scale = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
        let mut w = v;
        for b in basis.iter() {
            let proj: f64 = w.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
            for (x, y) in w.iter_mut().zip(b.iter()) {
                *x -= proj * y;
            }
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > RANK_TOL * scale {
            for x in w.iter_mut() {
                *x /= norm;
            }
            basis.push(w);
            true
        } else {
            false
        }
    };

    let pad = |f: &CircleVectorField| -> Vec<f64> {
        let mut v = f.coeff_vec();
        v.resize(dim, 0.0);
        v
    };
    let gens: Vec<CircleVectorField> = generators
        .iter()
        .map(|g| CircleVectorField::from_coeff_vec(&pad(g)))
        .collect();

    for g in &gens {
        add(&mut basis, g.coeff_vec());
    }
    let mut trace = vec![basis.len()];
    let mut stable = false;
    for _ in 0..max_depth {
        let current: Vec<CircleVectorField> = basis
            .iter()
            .map(|v| CircleVectorField::from_coeff_vec(v))
            .collect();
        let mut grew = false;
        for b in &current {
            for g in &gens {
                let (br, _) = lie_bracket_full(b, g);
                if add(&mut basis, br.coeff_vec()) {
                    grew = true;
                }
            }
        }
        trace.push(basis.len());
        if !grew {
            stable = true;
            break;
        }
    }
    ClosureReport {
        final_dimension: basis.len(),
        dimension_trace: trace,
        stable,
    }
}

/// The five-element generator system {d/dt, cos t, sin t, cos 2t, sin 2t}.
pub fn standard_generators(nmax: usize) -> Vec<CircleVectorField> {
    vec![
        CircleVectorField::constant(1.0, nmax),
        CircleVectorField::zero(nmax).with_cos(1, 1.0),
        CircleVectorField::zero(nmax).with_sin(1, 1.0),
        CircleVectorField::zero(nmax).with_cos(2, 1.0),
        CircleVectorField::zero(nmax).with_sin(2, 1.0),
    ]
}
