//! Exact spectral calculus: derivatives, Leray projection, dealiasing.

use crate::error::CoreError;
use crate::field::{SpectralScalarField, SpectralVectorField};
use crate::grid::Grid;
use rustfft::num_complex::Complex64;

#[inline]
fn mul_i(c: Complex64, k: f64) -> Complex64 {
    // i*k*c
    Complex64::new(-k * c.im, k * c.re)
}

/// d/dx_axis, realized as multiplication by i*k_axis per mode.
pub fn derivative(
    field: &SpectralScalarField,
    axis: usize,
) -> Result<SpectralScalarField, CoreError> {
    let grid = field.grid().clone();
    if axis >= grid.dim() {
        return Err(CoreError::AxisOutOfRange {
            axis,
            dim: grid.dim(),
        });
    }
    let mut out = SpectralScalarField::zeros(grid.clone());
    let src = field.coeffs();
    let dst = out.coeffs_mut();
    let mut idx = [0usize; 3];
    let dim = grid.dim();
    grid.for_each_mode(|flat, midx, _| {
        idx[..dim].copy_from_slice(midx);
        dst[flat] = mul_i(src[flat], grid.wavenumber(midx[axis]));
    });
    Ok(out)
}

pub fn gradient(field: &SpectralScalarField) -> Result<SpectralVectorField, CoreError> {
    let comps = (0..field.grid().dim())
        .map(|a| derivative(field, a))
        .collect::<Result<Vec<_>, _>>()?;
    SpectralVectorField::from_components(comps)
}

/// div F = sum_a i*k_a F_a per mode.
pub fn divergence(field: &SpectralVectorField) -> SpectralScalarField {
    let grid = field.grid().clone();
    let mut out = SpectralScalarField::zeros(grid.clone());
    let dim = grid.dim();
    let dst = out.coeffs_mut();
    grid.for_each_mode(|flat, midx, _| {
        let mut acc = Complex64::default();
        for a in 0..dim {
            acc += mul_i(field.component(a).coeffs()[flat], grid.wavenumber(midx[a]));
        }
        dst[flat] = acc;
    });
    out
}

/// Curl. In 3-d returns the full vector; in 2-d the scalar vorticity is
/// returned in component 0 with component 1 zero.
pub fn curl(field: &SpectralVectorField) -> SpectralVectorField {
    let grid = field.grid().clone();
    let mut out = SpectralVectorField::zeros(grid.clone());
    match grid.dim() {
        3 => {
            let (f0, f1, f2) = (
                field.component(0).coeffs(),
                field.component(1).coeffs(),
                field.component(2).coeffs(),
            );
            let mut c0 = vec![Complex64::default(); grid.len()];
            let mut c1 = vec![Complex64::default(); grid.len()];
            let mut c2 = vec![Complex64::default(); grid.len()];
            grid.for_each_mode(|flat, midx, _| {
                let k0 = grid.wavenumber(midx[0]);
                let k1 = grid.wavenumber(midx[1]);
                let k2 = grid.wavenumber(midx[2]);
                c0[flat] = mul_i(f2[flat], k1) - mul_i(f1[flat], k2);
                c1[flat] = mul_i(f0[flat], k2) - mul_i(f2[flat], k0);
                c2[flat] = mul_i(f1[flat], k0) - mul_i(f0[flat], k1);
            });
            out.component_mut(0).coeffs_mut().copy_from_slice(&c0);
            out.component_mut(1).coeffs_mut().copy_from_slice(&c1);
            out.component_mut(2).coeffs_mut().copy_from_slice(&c2);
        }
        2 => {
            let (f0, f1) = (field.component(0).coeffs(), field.component(1).coeffs());
            let mut c0 = vec![Complex64::default(); grid.len()];
            grid.for_each_mode(|flat, midx, _| {
                let k0 = grid.wavenumber(midx[0]);
                let k1 = grid.wavenumber(midx[1]);
                c0[flat] = mul_i(f1[flat], k0) - mul_i(f0[flat], k1);
            });
            out.component_mut(0).coeffs_mut().copy_from_slice(&c0);
        }
        _ => unreachable!(),
    }
    out
}

/// Leray projection I - k k^T/|k|^2 per nonzero mode; the zero mode passes
/// through unchanged. Output is divergence-free mode-wise.
pub fn leray_project(field: &SpectralVectorField) -> SpectralVectorField {
    let mut out = field.clone();
    leray_project_in_place(&mut out);
    out
}

pub fn leray_project_in_place(field: &mut SpectralVectorField) {
    let grid = field.grid().clone();
    let dim = grid.dim();
    let mut comps: Vec<&mut [Complex64]> = field
        .components_mut()
        .iter_mut()
        .map(|c| c.coeffs_mut())
        .collect();
    grid.for_each_mode(|flat, midx, k2| {
        if k2 == 0.0 {
            return;
        }
        let mut kdotc = Complex64::default();
        for a in 0..dim {
            kdotc += grid.wavenumber(midx[a]) * comps[a][flat];
        }
        kdotc /= k2;
        for a in 0..dim {
            comps[a][flat] -= grid.wavenumber(midx[a]) * kdotc;
        }
    });
}

/// Largest |k . F_hat(k)| / |F_hat(k)| over nonzero modes (relative
/// mode-wise divergence).
pub fn divergence_residual(field: &SpectralVectorField) -> f64 {
    let grid = field.grid().clone();
    let dim = grid.dim();
    let mut worst = 0.0f64;
    grid.for_each_mode(|flat, midx, k2| {
        if k2 == 0.0 {
            return;
        }
        let mut kdotc = Complex64::default();
        let mut mag = 0.0;
        for a in 0..dim {
            let c = field.component(a).coeffs()[flat];
            kdotc += grid.wavenumber(midx[a]) * c;
            mag += c.norm_sqr();
        }
        if mag > 0.0 {
            worst = worst.max(kdotc.norm() / (k2.sqrt() * mag.sqrt()));
        }
    });
    worst
}

/// Cutoff for the 2/3 rule: modes with any |freq| above this are zeroed.
pub fn dealias_cutoff(modes: usize) -> i64 {
    (modes / 3) as i64
}

/// 2/3-rule truncation. Zeroes every coefficient with |freq_axis| > N/3
/// (Nyquist rows included); Hermitian symmetry is preserved.
pub fn dealias(field: &SpectralScalarField) -> SpectralScalarField {
    let mut out = field.clone();
    dealias_in_place(&mut out);
    out
}

pub fn dealias_in_place(field: &mut SpectralScalarField) {
    let grid = field.grid().clone();
    let n = grid.modes();
    let cut = dealias_cutoff(n);
    let keep: Vec<bool> = (0..n)
        .map(|m| Grid::signed_freq(m, n).abs() <= cut)
        .collect();
    let dst = field.coeffs_mut();
    grid.for_each_mode(|flat, midx, _| {
        if !midx.iter().all(|&m| keep[m]) {
            dst[flat] = Complex64::default();
        }
    });
}

pub fn dealias_vector_in_place(field: &mut SpectralVectorField) {
    for a in 0..field.dim() {
        dealias_in_place(field.component_mut(a));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::Transform;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn random_scalar(grid: &Arc<Grid>, seed: u64) -> SpectralScalarField {
        let mut tf = Transform::new(grid.clone());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let phys: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        SpectralScalarField::from_physical(&mut tf, &phys).unwrap()
    }

    fn random_vector(grid: &Arc<Grid>, seed: u64) -> SpectralVectorField {
        let comps = (0..grid.dim())
            .map(|a| random_scalar(grid, seed + a as u64))
            .collect();
        SpectralVectorField::from_components(comps).unwrap()
    }

    #[test]
    fn derivative_of_sine_is_scaled_cosine() {
        let l = 5.0;
        let g = Grid::new(2, 16, l).unwrap();
        let mut tf = Transform::new(g.clone());
        let k = 2.0 * std::f64::consts::PI / l;
        let f = SpectralScalarField::from_fn(&mut tf, |x| (k * x[0]).sin()).unwrap();
        let df = derivative(&f, 0).unwrap();
        let expect = SpectralScalarField::from_fn(&mut tf, |x| k * (k * x[0]).cos()).unwrap();
        let err: f64 = df
            .coeffs()
            .iter()
            .zip(expect.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12 * g.volume());
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        let mut tf = Transform::new(g.clone());
        let f = SpectralScalarField::from_physical(&mut tf, &vec![4.2; g.len()]).unwrap();
        let df = derivative(&f, 2).unwrap();
        assert!(df.coeffs().iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn derivative_rejects_bad_axis() {
        let g = Grid::new(2, 8, 1.0).unwrap();
        let f = SpectralScalarField::zeros(g);
        assert!(derivative(&f, 2).is_err());
    }

    #[test]
    fn product_rule_on_harmonics() {
        // d(fg) = f dg + g df, with f, g single harmonics well inside the
        // dealias cube so the product is exactly representable
        let l = 2.0 * std::f64::consts::PI;
        let g = Grid::new(2, 32, l).unwrap();
        let mut tf = Transform::new(g.clone());
        let f1 = SpectralScalarField::from_fn(&mut tf, |x| (2.0 * x[0]).cos()).unwrap();
        let f2 = SpectralScalarField::from_fn(&mut tf, |x| (3.0 * x[0] + x[1]).sin()).unwrap();
        let p1 = f1.to_physical(&mut tf).unwrap();
        let p2 = f2.to_physical(&mut tf).unwrap();
        let prod: Vec<f64> = p1.iter().zip(&p2).map(|(a, b)| a * b).collect();
        let prod = SpectralScalarField::from_physical(&mut tf, &prod).unwrap();
        let lhs = derivative(&prod, 0).unwrap().to_physical(&mut tf).unwrap();

        let df1 = derivative(&f1, 0).unwrap().to_physical(&mut tf).unwrap();
        let df2 = derivative(&f2, 0).unwrap().to_physical(&mut tf).unwrap();
        let rhs: Vec<f64> = (0..g.len())
            .map(|i| p1[i] * df2[i] + p2[i] * df1[i])
            .collect();
        let err = lhs
            .iter()
            .zip(&rhs)
            .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
        assert!(err < 1e-10, "product rule error {err}");
    }

    #[test]
    fn leray_annihilates_gradients() {
        let g = Grid::new(3, 16, 3.0).unwrap();
        let mut tf = Transform::new(g.clone());
        let k = 2.0 * std::f64::consts::PI / 3.0;
        let phi = SpectralScalarField::from_fn(&mut tf, |x| (k * (x[0] + 2.0 * x[2])).sin())
            .unwrap();
        let grad = gradient(&phi).unwrap();
        let proj = leray_project(&grad);
        for a in 0..3 {
            assert!(proj.component(a).coeffs().iter().all(|c| c.norm() < 1e-10));
        }
    }

    #[test]
    fn leray_single_mode_removes_parallel_part() {
        let g = Grid::new(3, 8, 2.0 * std::f64::consts::PI).unwrap();
        let mut v = SpectralVectorField::zeros(g.clone());
        // mode k = (1,0,0), coefficient (1,1,0); pair the conjugate to stay real
        for (f, c) in [(1i64, 1.0), (-1i64, 1.0)] {
            v.component_mut(0)
                .set_coeff(&[f, 0, 0], Complex64::new(c, 0.0));
            v.component_mut(1)
                .set_coeff(&[f, 0, 0], Complex64::new(c, 0.0));
        }
        let p = leray_project(&v);
        assert!(p.component(0).coeff_at(&[1, 0, 0]).norm() < 1e-15);
        assert!((p.component(1).coeff_at(&[1, 0, 0]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(p.component(2).coeff_at(&[1, 0, 0]).norm() < 1e-15);
    }

    #[test]
    fn leray_idempotent_and_divergence_free() {
        let g = Grid::new(3, 8, 1.7).unwrap();
        let v = random_vector(&g, 11);
        let p1 = leray_project(&v);
        assert!(divergence_residual(&p1) < 1e-14);
        let p2 = leray_project(&p1);
        for a in 0..3 {
            let err = p1
                .component(a)
                .coeffs()
                .iter()
                .zip(p2.component(a).coeffs())
                .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()));
            assert!(err < 1e-13 * g.volume());
        }
    }

    #[test]
    fn leray_fixes_divergence_free_fields() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        let v = random_vector(&g, 5);
        let p = leray_project(&v);
        let pp = leray_project(&p);
        for a in 0..3 {
            for (x, y) in p.component(a).coeffs().iter().zip(pp.component(a).coeffs()) {
                assert!((x - y).norm() <= 1e-13 * (1.0 + x.norm()));
            }
        }
    }

    #[test]
    fn dealias_preserves_low_modes_and_kills_nyquist() {
        let g = Grid::new(2, 12, 1.0).unwrap();
        let mut f = SpectralScalarField::zeros(g.clone());
        f.set_coeff(&[2, -3], Complex64::new(1.0, 0.5));
        f.set_coeff(&[-2, 3], Complex64::new(1.0, -0.5));
        let d = dealias(&f);
        assert_eq!(d.coeffs(), f.coeffs());

        let mut nyq = SpectralScalarField::zeros(g.clone());
        nyq.set_coeff(&[6, 0], Complex64::new(1.0, 0.0));
        let d = dealias(&nyq);
        assert!(d.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn dealias_support_is_inside_cube() {
        let g = Grid::new(3, 12, 1.0).unwrap();
        let f = random_scalar(&g, 7);
        let d = dealias(&f);
        let cut = dealias_cutoff(12);
        let mut idx = [0usize; 3];
        for flat in 0..g.len() {
            g.unravel(flat, &mut idx);
            let outside = idx
                .iter()
                .any(|&m| Grid::signed_freq(m, 12).abs() > cut);
            if outside {
                assert_eq!(d.coeffs()[flat], Complex64::default());
            } else {
                assert_eq!(d.coeffs()[flat], f.coeffs()[flat]);
            }
        }
        assert!(d.hermitian_residual() < 1e-12);
    }

    #[test]
    fn derivative_commutes_with_leray() {
        let g = Grid::new(3, 8, 2.2).unwrap();
        let v = random_vector(&g, 23);
        let p = leray_project(&v);
        for axis in 0..3 {
            let dp = SpectralVectorField::from_components(
                (0..3)
                    .map(|a| derivative(p.component(a), axis).unwrap())
                    .collect(),
            )
            .unwrap();
            let pd = leray_project(
                &SpectralVectorField::from_components(
                    (0..3)
                        .map(|a| derivative(v.component(a), axis).unwrap())
                        .collect(),
                )
                .unwrap(),
            );
            for a in 0..3 {
                for (x, y) in dp
                    .component(a)
                    .coeffs()
                    .iter()
                    .zip(pd.component(a).coeffs())
                {
                    assert!((x - y).norm() < 1e-12 * g.volume());
                }
            }
        }
    }

    #[test]
    fn ops_preserve_hermitian_symmetry() {
        let g = Grid::new(2, 12, 1.3).unwrap();
        let f = random_scalar(&g, 31);
        assert!(derivative(&f, 1).unwrap().hermitian_residual() < 1e-12);
        assert!(dealias(&f).hermitian_residual() < 1e-12);
        let v = random_vector(&g, 33);
        let p = leray_project(&v);
        for a in 0..2 {
            assert!(p.component(a).hermitian_residual() < 1e-12);
        }
    }
}
