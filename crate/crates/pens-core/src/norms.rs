//! Norms and spectral energy sums, all in the quadrature-consistent
//! normalization (spectral sums carry the 1/L^n Plancherel weight so they
//! agree with physical quadrature).

use crate::error::CoreError;
use crate::field::{SpectralScalarField, SpectralVectorField};
use crate::grid::Grid;

/// Lp exponent for grid-quadrature norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lp {
    One,
    Two,
    Inf,
}

/// Lp norm of physical samples by grid quadrature (max over samples for Linf).
pub fn lp_norm(grid: &Grid, phys: &[f64], p: Lp) -> Result<f64, CoreError> {
    if phys.len() != grid.len() {
        return Err(CoreError::ShapeMismatch {
            expected: grid.len(),
            got: phys.len(),
        });
    }
    let w = grid.quad_weight();
    Ok(match p {
        Lp::One => phys.iter().map(|x| x.abs()).sum::<f64>() * w,
        Lp::Two => (phys.iter().map(|x| x * x).sum::<f64>() * w).sqrt(),
        Lp::Inf => phys.iter().fold(0.0f64, |a, &x| a.max(x.abs())),
    })
}

/// Squared j-th gradient seminorm, sum_m |k|^{2j} |f_hat(m)|^2 / L^n.
pub fn gradient_seminorm_sq(field: &SpectralScalarField, j: usize) -> f64 {
    let grid = field.grid();
    let src = field.coeffs();
    let mut acc = 0.0;
    grid.for_each_mode(|flat, _, k2| {
        acc += k2.powi(j as i32) * src[flat].norm_sqr();
    });
    acc / grid.volume()
}

/// ||nabla^j f||_{L^2}, exact on the band-limited field.
pub fn gradient_seminorm(field: &SpectralScalarField, j: usize) -> f64 {
    gradient_seminorm_sq(field, j).sqrt()
}

/// Sobolev norm sqrt(sum_{j<=s} ||nabla^j f||^2).
pub fn sobolev_norm(field: &SpectralScalarField, s: usize) -> f64 {
    sobolev_norm_sq(field, s).sqrt()
}

pub fn sobolev_norm_sq(field: &SpectralScalarField, s: usize) -> f64 {
    let grid = field.grid();
    let src = field.coeffs();
    let mut acc = 0.0;
    grid.for_each_mode(|flat, _, k2| {
        // 1 + k^2 + ... + k^{2s}
        let mut w = 1.0;
        let mut p = 1.0;
        for _ in 0..s {
            p *= k2;
            w += p;
        }
        acc += w * src[flat].norm_sqr();
    });
    acc / grid.volume()
}

/// L2 norm straight from the spectrum (Plancherel).
pub fn l2_norm_spectral(field: &SpectralScalarField) -> f64 {
    gradient_seminorm(field, 0)
}

pub fn vector_gradient_seminorm_sq(field: &SpectralVectorField, j: usize) -> f64 {
    field
        .components()
        .iter()
        .map(|c| gradient_seminorm_sq(c, j))
        .sum()
}

pub fn vector_gradient_seminorm(field: &SpectralVectorField, j: usize) -> f64 {
    vector_gradient_seminorm_sq(field, j).sqrt()
}

pub fn vector_sobolev_norm(field: &SpectralVectorField, s: usize) -> f64 {
    field
        .components()
        .iter()
        .map(|c| sobolev_norm_sq(c, s))
        .sum::<f64>()
        .sqrt()
}

pub fn vector_l2_norm(field: &SpectralVectorField) -> f64 {
    vector_gradient_seminorm_sq(field, 0).sqrt()
}

/// ||nabla f||_{H^s} = sqrt(sum_{j=1}^{s+1} ||nabla^j f||^2) for vectors.
pub fn vector_grad_sobolev_norm(field: &SpectralVectorField, s: usize) -> f64 {
    (1..=s + 1)
        .map(|j| vector_gradient_seminorm_sq(field, j))
        .sum::<f64>()
        .sqrt()
}

/// Low-frequency ball energy: sum over lattice modes |k| <= radius of
/// |f_hat|^2 / L^n (the zero mode is inside every ball).
pub fn ball_energy(field: &SpectralScalarField, radius: f64) -> f64 {
    let grid = field.grid();
    let src = field.coeffs();
    let r2 = radius * radius;
    let mut acc = 0.0;
    grid.for_each_mode(|flat, _, k2| {
        if k2 <= r2 {
            acc += src[flat].norm_sqr();
        }
    });
    acc / grid.volume()
}

pub fn vector_ball_energy(field: &SpectralVectorField, radius: f64) -> f64 {
    field
        .components()
        .iter()
        .map(|c| ball_energy(c, radius))
        .sum()
}
