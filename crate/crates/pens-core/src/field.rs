use crate::error::CoreError;
use crate::grid::Grid;
use crate::transform::Transform;
use rustfft::num_complex::Complex64;
use std::sync::Arc;

/// A real scalar field on the periodic box, stored as its full complex
/// spectrum. Hermitian symmetry (coefficient at -m equal to the conjugate at m)
/// is the representation invariant that keeps the physical field real;
/// Nyquist rows are held at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralScalarField {
    grid: Arc<Grid>,
    coeffs: Vec<Complex64>,
}

impl SpectralScalarField {
    pub fn zeros(grid: Arc<Grid>) -> Self {
        let coeffs = vec![Complex64::default(); grid.len()];
        SpectralScalarField { grid, coeffs }
    }

    pub fn from_coeffs(grid: Arc<Grid>, coeffs: Vec<Complex64>) -> Result<Self, CoreError> {
        if coeffs.len() != grid.len() {
            return Err(CoreError::ShapeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(SpectralScalarField { grid, coeffs })
    }

    pub fn from_physical(tf: &mut Transform, phys: &[f64]) -> Result<Self, CoreError> {
        let mut field = Self::zeros(tf.grid().clone());
        tf.forward(phys, &mut field.coeffs)?;
        Ok(field)
    }

    /// Sample a closure on the physical grid and transform.
    pub fn from_fn(tf: &mut Transform, f: impl Fn(&[f64]) -> f64) -> Result<Self, CoreError> {
        let grid = tf.grid().clone();
        let n = grid.modes();
        let dx = grid.spacing();
        let mut idx = vec![0usize; grid.dim()];
        let mut x = vec![0.0; grid.dim()];
        let phys: Vec<f64> = (0..grid.len())
            .map(|flat| {
                grid.unravel(flat, &mut idx);
                for a in 0..grid.dim() {
                    x[a] = idx[a] as f64 * dx;
                }
                let _ = n;
                f(&x)
            })
            .collect();
        Self::from_physical(tf, &phys)
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient at the mode with signed frequencies `freq`.
    pub fn coeff_at(&self, freq: &[i64]) -> Complex64 {
        let idx: Vec<usize> = freq.iter().map(|&f| self.grid.index_of_freq(f)).collect();
        self.coeffs[self.grid.ravel(&idx)]
    }

    pub fn set_coeff(&mut self, freq: &[i64], value: Complex64) {
        let idx: Vec<usize> = freq.iter().map(|&f| self.grid.index_of_freq(f)).collect();
        let flat = self.grid.ravel(&idx);
        self.coeffs[flat] = value;
    }

    /// Mean of the physical field (zero mode over volume).
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re / self.grid.volume()
    }

    pub fn to_physical(&self, tf: &mut Transform) -> Result<Vec<f64>, CoreError> {
        let mut out = vec![0.0; self.grid.len()];
        tf.inverse(&self.coeffs, &mut out)?;
        Ok(out)
    }

    /// Largest Hermitian-symmetry violation, max_m |c(m) - conj(c(-m))|.
    pub fn hermitian_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        let mut idx = [0usize; 3];
        let dim = self.grid.dim();
        for flat in 0..self.coeffs.len() {
            self.grid.unravel(flat, &mut idx[..dim]);
            let neg = self.grid.conjugate_index(&idx[..dim]);
            let r = (self.coeffs[flat] - self.coeffs[neg].conj()).norm();
            worst = worst.max(r);
        }
        worst
    }

    /// Largest coefficient magnitude on Nyquist rows.
    pub fn nyquist_residual(&self) -> f64 {
        let n = self.grid.modes();
        let dim = self.grid.dim();
        let mut idx = [0usize; 3];
        let mut worst = 0.0f64;
        for flat in 0..self.coeffs.len() {
            self.grid.unravel(flat, &mut idx[..dim]);
            if idx[..dim].iter().any(|&m| m == n / 2) {
                worst = worst.max(self.coeffs[flat].norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.coeffs {
            *c *= s;
        }
    }

    /// self += s * other
    pub fn axpy(&mut self, s: f64, other: &Self) {
        debug_assert!(Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    /// Re-embed the spectrum on a grid refined by an integer factor
    /// (trigonometric interpolation; coefficients carry over unchanged).
    pub fn refine(&self, factor: usize) -> Result<Self, CoreError> {
        let g = &self.grid;
        let fine = Grid::new(g.dim(), g.modes() * factor, g.box_length())?;
        let mut out = Self::zeros(fine.clone());
        let dim = g.dim();
        let n = g.modes();
        let mut idx = [0usize; 3];
        for flat in 0..self.coeffs.len() {
            let c = self.coeffs[flat];
            if c == Complex64::default() {
                continue;
            }
            g.unravel(flat, &mut idx[..dim]);
            // Nyquist rows are zero by invariant, so every frequency maps 1:1.
            let fine_idx: Vec<usize> = idx[..dim]
                .iter()
                .map(|&m| fine.index_of_freq(Grid::signed_freq(m, n)))
                .collect();
            out.coeffs[fine.ravel(&fine_idx)] = c;
        }
        Ok(out)
    }
}

/// n spectral scalar components sharing one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVectorField {
    components: Vec<SpectralScalarField>,
}

impl SpectralVectorField {
    pub fn zeros(grid: Arc<Grid>) -> Self {
        let components = (0..grid.dim())
            .map(|_| SpectralScalarField::zeros(grid.clone()))
            .collect();
        SpectralVectorField { components }
    }

    pub fn from_components(components: Vec<SpectralScalarField>) -> Result<Self, CoreError> {
        let grid = components[0].grid().clone();
        if components.len() != grid.dim() {
            return Err(CoreError::ShapeMismatch {
                expected: grid.dim(),
                got: components.len(),
            });
        }
        if components.iter().any(|c| *c.grid() != *grid) {
            return Err(CoreError::GridMismatch);
        }
        Ok(SpectralVectorField { components })
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid> {
        self.components[0].grid()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.components.len()
    }

    #[inline]
    pub fn component(&self, i: usize) -> &SpectralScalarField {
        &self.components[i]
    }

    #[inline]
    pub fn component_mut(&mut self, i: usize) -> &mut SpectralScalarField {
        &mut self.components[i]
    }

    pub fn components(&self) -> &[SpectralScalarField] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [SpectralScalarField] {
        &mut self.components
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.components {
            c.scale(s);
        }
    }

    pub fn axpy(&mut self, s: f64, other: &Self) {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.axpy(s, b);
        }
    }

    pub fn to_physical(&self, tf: &mut Transform) -> Result<Vec<Vec<f64>>, CoreError> {
        self.components.iter().map(|c| c.to_physical(tf)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn hermitian_residual_detects_breakage() {
        let g = Grid::new(2, 8, 1.0).unwrap();
        let mut tf = Transform::new(g.clone());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let phys: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut f = SpectralScalarField::from_physical(&mut tf, &phys).unwrap();
        assert!(f.hermitian_residual() < 1e-12);
        f.set_coeff(&[1, 2], Complex64::new(5.0, 5.0));
        assert!(f.hermitian_residual() > 1.0);
    }

    #[test]
    fn mean_is_zero_mode_over_volume() {
        let g = Grid::new(2, 8, 2.0).unwrap();
        let mut tf = Transform::new(g.clone());
        let phys = vec![3.5; g.len()];
        let f = SpectralScalarField::from_physical(&mut tf, &phys).unwrap();
        assert!((f.mean() - 3.5).abs() < 1e-12);
    }

    #[test]
    fn refine_preserves_physical_values_at_coarse_points() {
        let g = Grid::new(2, 8, 2.0 * std::f64::consts::PI).unwrap();
        let mut tf = Transform::new(g.clone());
        let f = SpectralScalarField::from_fn(&mut tf, |x| (x[0]).cos() + 0.3 * (2.0 * x[1]).sin())
            .unwrap();
        let fine = f.refine(2).unwrap();
        let mut tf_fine = Transform::new(fine.grid().clone());
        let coarse_phys = f.to_physical(&mut tf).unwrap();
        let fine_phys = fine.to_physical(&mut tf_fine).unwrap();
        let n = g.modes();
        for i0 in 0..n {
            for i1 in 0..n {
                let coarse = coarse_phys[i0 * n + i1];
                let fineval = fine_phys[(2 * i0) * (2 * n) + 2 * i1];
                assert!((coarse - fineval).abs() < 1e-12);
            }
        }
    }
}
