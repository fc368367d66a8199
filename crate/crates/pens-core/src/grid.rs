use crate::error::CoreError;
use std::sync::Arc;

/// Periodic box discretization shared by every field.
///
/// Physical samples live at x_a = i_a * L / N for i_a in 0..N, stored row-major
/// with the last axis contiguous. Spectral coefficients use the same layout;
/// storage index m in 0..N along an axis carries the signed frequency
/// m for m <= N/2 and m - N otherwise, i.e. integer frequencies in (-N/2, N/2].
/// The wavenumber is k_a = 2*pi*freq_a / L.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    modes: usize,
    length: f64,
    /// k value per storage index (length `modes`), shared by all axes.
    wavenumbers: Vec<f64>,
}

impl Grid {
    pub fn new(dim: usize, modes: usize, length: f64) -> Result<Arc<Grid>, CoreError> {
        if dim != 2 && dim != 3 {
            return Err(CoreError::BadDimension(dim));
        }
        if modes < 8 || modes % 2 != 0 {
            return Err(CoreError::BadModes(modes));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(CoreError::BadLength(length));
        }
        let base = 2.0 * std::f64::consts::PI / length;
        let wavenumbers = (0..modes)
            .map(|m| base * Self::signed_freq(m, modes) as f64)
            .collect();
        Ok(Arc::new(Grid {
            dim,
            modes,
            length,
            wavenumbers,
        }))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Modes (and samples) per axis.
    #[inline]
    pub fn modes(&self) -> usize {
        self.modes
    }

    #[inline]
    pub fn box_length(&self) -> f64 {
        self.length
    }

    /// Total number of lattice points N^n.
    #[inline]
    pub fn len(&self) -> usize {
        self.modes.pow(self.dim as u32)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed integer frequency carried by storage index `m`.
    #[inline]
    pub fn signed_freq(m: usize, modes: usize) -> i64 {
        if m <= modes / 2 {
            m as i64
        } else {
            m as i64 - modes as i64
        }
    }

    /// Storage index carrying signed frequency `f` (f in (-N/2, N/2]).
    #[inline]
    pub fn index_of_freq(&self, f: i64) -> usize {
        if f >= 0 {
            f as usize
        } else {
            (f + self.modes as i64) as usize
        }
    }

    /// Wavenumber component along an axis for storage index `m`.
    #[inline]
    pub fn wavenumber(&self, m: usize) -> f64 {
        self.wavenumbers[m]
    }

    #[inline]
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Smallest nonzero |k| on the lattice, 2*pi/L.
    pub fn k_min(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.length
    }

    /// Physical grid spacing L/N.
    pub fn spacing(&self) -> f64 {
        self.length / self.modes as f64
    }

    /// Quadrature weight per sample, (L/N)^n.
    pub fn quad_weight(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Box volume L^n.
    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    /// Time horizon on which whole-space algebraic decay is observable,
    /// 0.3 * (L / 2 pi)^2; beyond it the slowest lattice mode dominates.
    pub fn observation_window(&self) -> f64 {
        let r = self.length / (2.0 * std::f64::consts::PI);
        0.3 * r * r
    }

    /// Decompose a flat storage index into per-axis indices.
    #[inline]
    pub fn unravel(&self, mut idx: usize, out: &mut [usize]) {
        for a in (0..self.dim).rev() {
            out[a] = idx % self.modes;
            idx /= self.modes;
        }
    }

    /// Flat storage index from per-axis indices.
    #[inline]
    pub fn ravel(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        for a in 0..self.dim {
            flat = flat * self.modes + idx[a];
        }
        flat
    }

    /// Flat index of the mode with negated frequencies (the Hermitian partner).
    #[inline]
    pub fn conjugate_index(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        for a in 0..self.dim {
            let m = idx[a];
            let neg = if m == 0 { 0 } else { self.modes - m };
            flat = flat * self.modes + neg;
        }
        flat
    }

    /// Iterate (flat index, |k|^2) over all modes. The closure also receives
    /// the per-axis storage indices.
    pub fn for_each_mode<F: FnMut(usize, &[usize], f64)>(&self, mut f: F) {
        let n = self.modes;
        let mut idx = [0usize; 3];
        match self.dim {
            2 => {
                let mut flat = 0;
                for i0 in 0..n {
                    let k0 = self.wavenumbers[i0];
                    for i1 in 0..n {
                        let k1 = self.wavenumbers[i1];
                        idx[0] = i0;
                        idx[1] = i1;
                        f(flat, &idx[..2], k0 * k0 + k1 * k1);
                        flat += 1;
                    }
                }
            }
            3 => {
                let mut flat = 0;
                for i0 in 0..n {
                    let k0 = self.wavenumbers[i0];
                    for i1 in 0..n {
                        let k1 = self.wavenumbers[i1];
                        let k01 = k0 * k0 + k1 * k1;
                        for i2 in 0..n {
                            let k2 = self.wavenumbers[i2];
                            idx[0] = i0;
                            idx[1] = i1;
                            idx[2] = i2;
                            f(flat, &idx[..3], k01 + k2 * k2);
                            flat += 1;
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid::new(3, 7, 1.0).is_err());
        assert!(Grid::new(3, 6, 1.0).is_err());
        assert!(Grid::new(3, 16, 0.0).is_err());
        assert!(Grid::new(3, 16, -2.0).is_err());
        assert!(Grid::new(4, 16, 1.0).is_err());
        assert!(Grid::new(1, 16, 1.0).is_err());
    }

    #[test]
    fn smallest_nonzero_wavenumber() {
        let g = Grid::new(2, 8, 2.0 * std::f64::consts::PI).unwrap();
        assert!((g.k_min() - 1.0).abs() < 1e-15);
        let g = Grid::new(3, 64, 128.0).unwrap();
        assert!((g.k_min() - 2.0 * std::f64::consts::PI / 128.0).abs() < 1e-15);
        assert!((g.k_min() - 0.049087385212340514).abs() < 1e-12);
    }

    #[test]
    fn lattice_closed_under_negation_except_nyquist() {
        let g = Grid::new(2, 8, 1.0).unwrap();
        for m in 0..8 {
            let f = Grid::signed_freq(m, 8);
            if f == 4 {
                // Nyquist: negation -4 is not representable in (-4, 4]
                continue;
            }
            let neg = g.index_of_freq(-f);
            assert_eq!(Grid::signed_freq(neg, 8), -f);
            assert!((g.wavenumber(neg) + g.wavenumber(m)).abs() < 1e-15);
        }
    }

    #[test]
    fn ravel_unravel_roundtrip() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        let mut idx = [0usize; 3];
        for flat in 0..g.len() {
            g.unravel(flat, &mut idx);
            assert_eq!(g.ravel(&idx), flat);
        }
    }

    #[test]
    fn conjugate_index_negates_frequencies() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        let idx = [1usize, 0, 5];
        let flat = g.conjugate_index(&idx);
        let mut out = [0usize; 3];
        g.unravel(flat, &mut out);
        assert_eq!(out, [7, 0, 3]);
    }
}
