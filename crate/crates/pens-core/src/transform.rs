use crate::error::CoreError;
use crate::grid::Grid;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::{Arc, Mutex, OnceLock};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static P: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    P.get_or_init(|| Mutex::new(FftPlanner::new()))
}

/// Lines processed per gather/scatter block on strided axes.
const TILE: usize = 8;

/// FFT engine bound to one grid. Owns all scratch, so the step loop never
/// allocates. Normalization is quadrature-consistent: `forward` approximates
/// the integral transform f_hat(k) = integral f e^{-ikx} dx (weight (L/N)^n),
/// `inverse` applies 1/L^n, and discrete Plancherel
/// (L/N)^n sum |f|^2 = L^{-n} sum |f_hat|^2 holds exactly.
pub struct Transform {
    grid: Arc<Grid>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    tile: Vec<Complex64>,
    work: Vec<Complex64>,
    /// flat index of the Hermitian partner (negated frequencies)
    conj_idx: Vec<u32>,
}

impl Transform {
    pub fn new(grid: Arc<Grid>) -> Transform {
        let n = grid.modes();
        let (fwd, inv) = {
            let mut p = planner().lock().unwrap();
            (p.plan_fft_forward(n), p.plan_fft_inverse(n))
        };
        let scratch_len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        let total = grid.len();
        let mut conj_idx = vec![0u32; total];
        let mut idx = [0usize; 3];
        for flat in 0..total {
            grid.unravel(flat, &mut idx[..grid.dim()]);
            conj_idx[flat] = grid.conjugate_index(&idx[..grid.dim()]) as u32;
        }
        Transform {
            grid,
            fwd,
            inv,
            scratch: vec![Complex64::default(); scratch_len],
            tile: vec![Complex64::default(); TILE * n],
            work: vec![Complex64::default(); total],
            conj_idx,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    fn pass_all_axes(&mut self, data: &mut [Complex64], forward: bool) {
        let dim = self.grid.dim();
        let n = self.grid.modes();
        let fft = if forward {
            self.fwd.clone()
        } else {
            self.inv.clone()
        };
        for axis in 0..dim {
            let inner: usize = n.pow((dim - 1 - axis) as u32);
            let outer: usize = n.pow(axis as u32);
            if inner == 1 {
                for line in data.chunks_exact_mut(n) {
                    fft.process_with_scratch(line, &mut self.scratch);
                }
            } else {
                for o in 0..outer {
                    let base = o * n * inner;
                    let mut j = 0;
                    while j < inner {
                        let b = TILE.min(inner - j);
                        // gather b strided lines into contiguous tiles
                        for t in 0..n {
                            let src = base + t * inner + j;
                            for l in 0..b {
                                self.tile[l * n + t] = data[src + l];
                            }
                        }
                        for l in 0..b {
                            fft.process_with_scratch(
                                &mut self.tile[l * n..(l + 1) * n],
                                &mut self.scratch,
                            );
                        }
                        for t in 0..n {
                            let dst = base + t * inner + j;
                            for l in 0..b {
                                data[dst + l] = self.tile[l * n + t];
                            }
                        }
                        j += b;
                    }
                }
            }
        }
    }

    /// Physical real samples -> spectral coefficients.
    pub fn forward(&mut self, phys: &[f64], out: &mut [Complex64]) -> Result<(), CoreError> {
        let total = self.grid.len();
        if phys.len() != total {
            return Err(CoreError::ShapeMismatch {
                expected: total,
                got: phys.len(),
            });
        }
        if out.len() != total {
            return Err(CoreError::ShapeMismatch {
                expected: total,
                got: out.len(),
            });
        }
        for (o, &p) in out.iter_mut().zip(phys) {
            if !p.is_finite() {
                return Err(CoreError::NonFinite("forward transform input"));
            }
            *o = Complex64::new(p, 0.0);
        }
        self.pass_all_axes(out, true);
        let scale = self.grid.quad_weight();
        for o in out.iter_mut() {
            *o *= scale;
        }
        Ok(())
    }

    /// Spectral coefficients -> physical real samples.
    pub fn inverse(&mut self, spec: &[Complex64], out: &mut [f64]) -> Result<(), CoreError> {
        let total = self.grid.len();
        if spec.len() != total || out.len() != total {
            return Err(CoreError::ShapeMismatch {
                expected: total,
                got: spec.len().max(out.len()),
            });
        }
        self.work.copy_from_slice(spec);
        let mut work = std::mem::take(&mut self.work);
        self.pass_all_axes(&mut work, false);
        let scale = 1.0 / self.grid.volume();
        for (o, w) in out.iter_mut().zip(&work) {
            *o = w.re * scale;
        }
        self.work = work;
        Ok(())
    }

    /// Transform two real fields with a single complex FFT: w = a + i b.
    /// The spectra are separated through the Hermitian split.
    pub fn forward_pair(
        &mut self,
        a: &[f64],
        b: &[f64],
        out_a: &mut [Complex64],
        out_b: &mut [Complex64],
    ) {
        debug_assert_eq!(a.len(), self.grid.len());
        let mut work = std::mem::take(&mut self.work);
        for i in 0..work.len() {
            work[i] = Complex64::new(a[i], b[i]);
        }
        self.pass_all_axes(&mut work, true);
        let scale = 0.5 * self.grid.quad_weight();
        for m in 0..work.len() {
            let wm = work[m];
            let wn = work[self.conj_idx[m] as usize].conj();
            let s = wm + wn; // 2 a_hat
            let d = wm - wn; // 2 i b_hat
            out_a[m] = Complex64::new(s.re * scale, s.im * scale);
            out_b[m] = Complex64::new(d.im * scale, -d.re * scale);
        }
        self.work = work;
    }

    /// Inverse-transform two Hermitian spectra at once: w_hat = a_hat + i b_hat
    /// inverts to a + i b with a, b real.
    pub fn inverse_pair(
        &mut self,
        spec_a: &[Complex64],
        spec_b: &[Complex64],
        out_a: &mut [f64],
        out_b: &mut [f64],
    ) {
        debug_assert_eq!(spec_a.len(), self.grid.len());
        let mut work = std::mem::take(&mut self.work);
        for i in 0..work.len() {
            let a = spec_a[i];
            let b = spec_b[i];
            work[i] = Complex64::new(a.re - b.im, a.im + b.re);
        }
        self.pass_all_axes(&mut work, false);
        let scale = 1.0 / self.grid.volume();
        for i in 0..work.len() {
            out_a[i] = work[i].re * scale;
            out_b[i] = work[i].im * scale;
        }
        self.work = work;
    }
}
