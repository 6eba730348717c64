//! Spray geometry over derivative towers.
//!
//! Everything downstream of the metric lives here: the fundamental tensor
//! g_ij = ½ ∂²(F²)/∂yⁱ∂yʲ, the geodesic coefficients Gⁱ, the nonlinear
//! connection Gⁱ_j, the Berwald coefficients Gⁱ_jk, the curvature tensor
//! Rⁱ_jk and the constant-flag-curvature fit.
//!
//! Two routes produce the spray. The generic route differentiates the norm
//! (order-5 towers); the projective route differentiates the closed-form
//! projective factor via Gⁱ = P·yⁱ, which is cheaper and survives the deeper
//! derivative chains of the covariant-derivative fields. The two must agree
//! wherever both apply, and the verification suite checks that they do.

use crate::error::{Error, Result};
use crate::jet::{jet_space, Jet};
use crate::metrics::FinslerMetric;

/// Determinant guard for the closed-form 2×2 inverse of g.
const DET_GUARD: f64 = 1e-14;

/// Values of the spray tensors at one (x, y).
#[derive(Clone, Copy, Debug)]
pub struct SprayData {
    /// Gⁱ
    pub coefficients: [f64; 2],
    /// Gⁱ_j, indexed [i][j]
    pub connection: [[f64; 2]; 2],
    /// Gⁱ_jk, indexed [i][j][k]
    pub berwald: [[[f64; 2]; 2]; 2],
}

/// Rⁱ_jk at one (x, y), indexed [i][j][k]; antisymmetric in (j, k).
#[derive(Clone, Copy, Debug)]
pub struct CurvatureTensor(pub [[[f64; 2]; 2]; 2]);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SprayPath {
    /// From the norm alone, via g and its base derivatives.
    Generic,
    /// From the closed-form projective factor, via Gⁱ = P·yⁱ.
    Projective,
}

/// Least-squares fit of the constant-curvature identity
/// Rⁱ_jk = λ(δₖⁱ g_jm yᵐ − δⱼⁱ g_km yᵐ).
#[derive(Clone, Copy, Debug)]
pub struct FlagCurvatureFit {
    pub lambda_hat: f64,
    /// Largest componentwise deviation after the fit.
    pub residual: f64,
}

/// Spray tensors as jets; the workhorse of the curvature-field evaluators.
pub(crate) struct SprayTower {
    pub coefficients: [Jet; 2],
    pub connection: [[Jet; 2]; 2],
    pub berwald: [[[Jet; 2]; 2]; 2],
}

fn seeds(x: [f64; 2], y: [f64; 2], order: usize) -> Result<([Jet; 2], [Jet; 2])> {
    let space = jet_space(4, order)?;
    Ok((
        [Jet::variable(space, x[0], 0), Jet::variable(space, x[1], 1)],
        [Jet::variable(space, y[0], 2), Jet::variable(space, y[1], 3)],
    ))
}

/// Fundamental tensor over jets in the fiber variables only (base point held
/// constant); `extra_order` adds tower depth beyond the two fiber derivatives.
fn tensor_fiber_jets(
    metric: &FinslerMetric,
    x: [f64; 2],
    y: [f64; 2],
    extra_order: usize,
) -> Result<[[Jet; 2]; 2]> {
    let space = jet_space(2, 2 + extra_order)?;
    let xj = [Jet::constant(space, x[0]), Jet::constant(space, x[1])];
    let yj = [Jet::variable(space, y[0], 0), Jet::variable(space, y[1], 1)];
    let f = metric.norm_jet(&xj, &yj)?;
    let f2 = &f * &f;
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| &f2.derivative(i).derivative(j) * 0.5)
    }))
}

/// g_ij = ½ ∂²(F²)/∂yⁱ∂yʲ at (x, y), with a positive-definiteness check.
pub fn fundamental_tensor(
    metric: &FinslerMetric,
    x: [f64; 2],
    y: [f64; 2],
) -> Result<[[f64; 2]; 2]> {
    let g = tensor_fiber_jets(metric, x, y, 0)?;
    let g: [[f64; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| g[i][j].value()));
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if g[0][0] <= 0.0 || det <= 0.0 {
        return Err(Error::NotPositiveDefinite { x, y, det });
    }
    Ok(g)
}

/// Spray tensors as jets from the projective factor; the tower order of the
/// output drops by 0/1/2 for Gⁱ/Gⁱ_j/Gⁱ_jk relative to `order`.
pub(crate) fn projective_tower(
    metric: &FinslerMetric,
    x: [f64; 2],
    y: [f64; 2],
    order: usize,
) -> Result<SprayTower> {
    if !metric.has_projective_factor() {
        return Err(Error::NoProjectiveFactor);
    }
    if order < 2 {
        return Err(Error::BadJetRequest(
            "projective spray tower needs order >= 2".into(),
        ));
    }
    let (xj, yj) = seeds(x, y, order)?;
    let p = metric.projective_factor_jet(&xj, &yj)?;
    let pk: [Jet; 2] = std::array::from_fn(|k| p.derivative(2 + k));
    let pkl: [[Jet; 2]; 2] =
        std::array::from_fn(|k| std::array::from_fn(|l| pk[k].derivative(2 + l)));

    let coefficients: [Jet; 2] = std::array::from_fn(|i| &p * &yj[i]);
    let connection: [[Jet; 2]; 2] = std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            let mut t = &pk[k] * &yj[i];
            if i == k {
                t = &t + &p;
            }
            t
        })
    });
    let berwald: [[[Jet; 2]; 2]; 2] = std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            std::array::from_fn(|l| {
                let mut t = &pkl[k][l] * &yj[i];
                if i == l {
                    t = &t + &pk[k];
                }
                if i == k {
                    t = &t + &pk[l];
                }
                t
            })
        })
    });
    Ok(SprayTower {
        coefficients,
        connection,
        berwald,
    })
}

/// Spray tensors as jets from the norm alone (order-5 towers; values only).
pub(crate) fn generic_tower(
    metric: &FinslerMetric,
    x: [f64; 2],
    y: [f64; 2],
) -> Result<SprayTower> {
    let (xj, yj) = seeds(x, y, 5)?;
    let f = metric.norm_jet(&xj, &yj)?;
    let f2 = &f * &f;
    // g and its base-point derivatives
    let g: [[Jet; 2]; 2] = std::array::from_fn(|i| {
        std::array::from_fn(|j| &f2.derivative(2 + i).derivative(2 + j) * 0.5)
    });
    let det = &(&g[0][0] * &g[1][1]) - &(&g[0][1] * &g[1][0]);
    let dv = det.value();
    if dv.abs() <= DET_GUARD {
        return Err(Error::SingularTensor(dv.abs()));
    }
    if g[0][0].value() <= 0.0 || dv <= 0.0 {
        return Err(Error::NotPositiveDefinite { x, y, det: dv });
    }
    let inv_det = det.recip();
    let ginv: [[Jet; 2]; 2] = [
        [&g[1][1] * &inv_det, &(-&g[0][1]) * &inv_det],
        [&(-&g[1][0]) * &inv_det, &g[0][0] * &inv_det],
    ];
    // G^i = ¼ g^{il} (2 ∂g_jl/∂x^k − ∂g_jk/∂x^l) y^j y^k
    let coefficients: [Jet; 2] = std::array::from_fn(|i| {
        let mut acc = Jet::constant(yj[0].space(), 0.0);
        for l in 0..2 {
            let mut inner = Jet::constant(yj[0].space(), 0.0);
            for j in 0..2 {
                for k in 0..2 {
                    let term = &(&g[j][l].derivative(k) * 2.0) - &g[j][k].derivative(l);
                    inner = &inner + &(&(&term * &yj[j]) * &yj[k]);
                }
            }
            acc = &acc + &(&ginv[i][l] * &inner);
        }
        &acc * 0.25
    });
    let connection: [[Jet; 2]; 2] =
        std::array::from_fn(|i| std::array::from_fn(|j| coefficients[i].derivative(2 + j)));
    let berwald: [[[Jet; 2]; 2]; 2] = std::array::from_fn(|i| {
        std::array::from_fn(|j| std::array::from_fn(|k| connection[i][j].derivative(2 + k)))
    });
    Ok(SprayTower {
        coefficients,
        connection,
        berwald,
    })
}

fn tower(metric: &FinslerMetric, x: [f64; 2], y: [f64; 2], path: SprayPath) -> Result<SprayTower> {
    match path {
        SprayPath::Projective => projective_tower(metric, x, y, 2),
        SprayPath::Generic => generic_tower(metric, x, y),
    }
}

/// Gⁱ, Gⁱ_j, Gⁱ_jk at (x, y) by the requested route.
pub fn spray_data(
    metric: &FinslerMetric,
    x: [f64; 2],
    y: [f64; 2],
    path: SprayPath,
) -> Result<SprayData> {
    let t = tower(metric, x, y, path)?;
    Ok(SprayData {
        coefficients: std::array::from_fn(|i| t.coefficients[i].value()),
        connection: std::array::from_fn(|i| std::array::from_fn(|j| t.connection[i][j].value())),
        berwald: std::array::from_fn(|i| {
            std::array::from_fn(|j| std::array::from_fn(|k| t.berwald[i][j][k].value()))
        }),
    })
}

/// Rⁱ_jk as jets from a spray tower (costs two tower orders).
pub(crate) fn curvature_jets(t: &SprayTower) -> [[[Jet; 2]; 2]; 2] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let mut r = &t.connection[i][j].derivative(k) - &t.connection[i][k].derivative(j);
                for m in 0..2 {
                    r = &r + &(&t.connection[m][j] * &t.berwald[i][k][m]);
                    r = &r - &(&t.connection[m][k] * &t.berwald[i][j][m]);
                }
                r
            })
        })
    })
}

/// Rⁱ_jk at (x, y) by the requested route.
pub fn curvature_tensor(
    metric: &FinslerMetric,
    x: [f64; 2],
    y: [f64; 2],
    path: SprayPath,
) -> Result<CurvatureTensor> {
    let t = tower(metric, x, y, path)?;
    let r = curvature_jets(&t);
    Ok(CurvatureTensor(std::array::from_fn(|i| {
        std::array::from_fn(|j| std::array::from_fn(|k| r[i][j][k].value()))
    })))
}

/// Fit λ in Rⁱ_jk = λ(δₖⁱ g_jm yᵐ − δⱼⁱ g_km yᵐ) by least squares over all
/// eight components; the residual flags metrics/points that are not of
/// constant flag curvature.
pub fn flag_curvature_extract(
    metric: &FinslerMetric,
    x: [f64; 2],
    y: [f64; 2],
    path: SprayPath,
) -> Result<FlagCurvatureFit> {
    let r = curvature_tensor(metric, x, y, path)?.0;
    let g = fundamental_tensor(metric, x, y)?;
    let y_low: [f64; 2] = std::array::from_fn(|j| g[j][0] * y[0] + g[j][1] * y[1]);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let m =
                    (if k == i { y_low[j] } else { 0.0 }) - (if j == i { y_low[k] } else { 0.0 });
                num += r[i][j][k] * m;
                den += m * m;
            }
        }
    }
    if den <= DET_GUARD {
        return Err(Error::SingularTensor(den));
    }
    let lambda_hat = num / den;
    let mut residual = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let m =
                    (if k == i { y_low[j] } else { 0.0 }) - (if j == i { y_low[k] } else { 0.0 });
                residual = residual.max((r[i][j][k] - lambda_hat * m).abs());
            }
        }
    }
    Ok(FlagCurvatureFit {
        lambda_hat,
        residual,
    })
}

/// Nonlinear connection Gⁱ_j at (x, y); fiber-only towers on the projective
/// route make this cheap enough for transport right-hand sides.
pub fn connection_at(metric: &FinslerMetric, x: [f64; 2], y: [f64; 2]) -> Result<[[f64; 2]; 2]> {
    if metric.has_projective_factor() {
        let space = jet_space(2, 1)?;
        let xj = [Jet::constant(space, x[0]), Jet::constant(space, x[1])];
        let yj = [Jet::variable(space, y[0], 0), Jet::variable(space, y[1], 1)];
        let p = metric.projective_factor_jet(&xj, &yj)?;
        let pv = p.value();
        let pk = [p.partial(&[1, 0]), p.partial(&[0, 1])];
        Ok(std::array::from_fn(|i| {
            std::array::from_fn(|j| pk[j] * y[i] + if i == j { pv } else { 0.0 })
        }))
    } else {
        Ok(spray_data(metric, x, y, SprayPath::Generic)?.connection)
    }
}
