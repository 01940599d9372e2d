//! Scalar/vector/tensor fields on the torus stored as complex Fourier
//! coefficients with Hermitian symmetry (real-valued in physical space).

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::Grid;
use num_complex::Complex64;

/// A field on the torus stored spectrally, component-major.
///
/// `components` is 1 (scalar), `dim` (vector) or `dim²` (tensor). Coefficients
/// live in FFT storage order per component. Two invariants are maintained by
/// every constructor in this crate:
///
/// * Hermitian symmetry `û(-k) = conj(û(k))` per component, so the field is
///   real-valued in physical space;
/// * all coefficients with `|k|_∞ > K_max` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    components: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    /// All-zero field with the given number of components.
    pub fn zeros(grid: Grid, components: usize) -> Self {
        debug_assert!(valid_components(grid, components));
        SpectralField {
            grid,
            components,
            coeffs: vec![Complex64::default(); components * grid.len()],
        }
    }

    /// Construct from raw coefficients (component-major, FFT order).
    /// Coefficients above the dealiasing cap are zeroed.
    pub fn from_coeffs(grid: Grid, components: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != components * grid.len() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} coefficients, got {}",
                components * grid.len(),
                coeffs.len()
            )));
        }
        if !valid_components(grid, components) {
            return Err(Error::ShapeMismatch(format!(
                "components must be 1, {} or {}, got {components}",
                grid.dim(),
                grid.dim() * grid.dim()
            )));
        }
        let mut f = SpectralField {
            grid,
            components,
            coeffs,
        };
        f.truncate();
        Ok(f)
    }

    /// Build a field by evaluating `value(component, mode)` at every
    /// admissible mode. The caller is responsible for Hermitian symmetry.
    pub fn from_modes(
        grid: Grid,
        components: usize,
        mut value: impl FnMut(usize, &[i64]) -> Complex64,
    ) -> Self {
        let mut f = SpectralField::zeros(grid, components);
        let cap = grid.k_max() as i64;
        for c in 0..components {
            let offset = c * grid.len();
            grid.for_each_mode(|idx, k| {
                if k.iter().all(|&ki| ki.abs() <= cap) {
                    f.coeffs[offset + idx] = value(c, k);
                }
            });
        }
        f
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn is_scalar(&self) -> bool {
        self.components == 1
    }

    pub fn is_vector(&self) -> bool {
        self.components == self.grid.dim()
    }

    pub fn is_tensor(&self) -> bool {
        self.components == self.grid.dim() * self.grid.dim()
    }

    /// Coefficient slice of one component.
    pub fn component(&self, c: usize) -> &[Complex64] {
        let len = self.grid.len();
        &self.coeffs[c * len..(c + 1) * len]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let len = self.grid.len();
        &mut self.coeffs[c * len..(c + 1) * len]
    }

    /// Borrow one component as a scalar field view (copies the slice).
    pub fn scalar_component(&self, c: usize) -> SpectralField {
        SpectralField {
            grid: self.grid,
            components: 1,
            coeffs: self.component(c).to_vec(),
        }
    }

    /// Assemble a multi-component field from scalar parts on one grid.
    pub fn from_components(parts: &[SpectralField]) -> Result<Self> {
        let grid = parts[0].grid;
        let mut coeffs = Vec::with_capacity(parts.len() * grid.len());
        for p in parts {
            if p.grid != grid || !p.is_scalar() {
                return Err(Error::GridMismatch(
                    "from_components requires scalar parts on one grid".into(),
                ));
            }
            coeffs.extend_from_slice(&p.coeffs);
        }
        SpectralField::from_coeffs(grid, parts.len(), coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of component `c` at signed mode `k`.
    pub fn mode(&self, c: usize, k: &[i64]) -> Complex64 {
        self.component(c)[self.grid.mode_index(k)]
    }

    pub fn set_mode(&mut self, c: usize, k: &[i64], value: Complex64) {
        let idx = self.grid.mode_index(k);
        self.component_mut(c)[idx] = value;
    }

    /// Zero all coefficients with `|k|_∞ > K_max`.
    pub fn truncate(&mut self) {
        let cap = self.grid.k_max() as i64;
        let len = self.grid.len();
        let mut mask = vec![false; len];
        self.grid.for_each_mode(|idx, k| {
            mask[idx] = k.iter().any(|&ki| ki.abs() > cap);
        });
        for c in 0..self.components {
            let comp = self.component_mut(c);
            for (v, &out) in comp.iter_mut().zip(&mask) {
                if out {
                    *v = Complex64::default();
                }
            }
        }
    }

    /// Multiply every coefficient of every component by `factor(|k|)`.
    pub fn apply_radial(&self, factor: impl Fn(f64) -> f64) -> SpectralField {
        self.apply_ksq(|ksq| factor(ksq.sqrt()))
    }

    /// Multiply every coefficient of every component by `factor(|k|²)`.
    pub fn apply_ksq(&self, factor: impl Fn(f64) -> f64) -> SpectralField {
        let len = self.grid.len();
        let mut table = vec![0.0; len];
        self.grid.for_each_mode(|idx, k| {
            let sq: i64 = k.iter().map(|&ki| ki * ki).sum();
            table[idx] = factor(sq as f64);
        });
        let mut out = self.clone();
        for c in 0..self.components {
            let comp = out.component_mut(c);
            for (v, &m) in comp.iter_mut().zip(&table) {
                *v *= m;
            }
        }
        out
    }

    /// Physical samples of every component (component-major, row-major in x).
    ///
    /// The imaginary parts are roundoff-size for Hermitian fields; they are
    /// returned untouched so symmetry defects stay observable.
    pub fn to_physical(&self) -> Vec<Complex64> {
        let shape = self.shape();
        let mut out = self.coeffs.clone();
        let len = self.grid.len();
        for c in 0..self.components {
            fft::inverse(&mut out[c * len..(c + 1) * len], &shape);
        }
        out
    }

    /// Real physical samples of a single component.
    pub fn to_physical_real(&self, c: usize) -> Vec<f64> {
        let shape = self.shape();
        let mut buf = self.component(c).to_vec();
        fft::inverse(&mut buf, &shape);
        buf.into_iter().map(|v| v.re).collect()
    }

    fn shape(&self) -> Vec<usize> {
        vec![self.grid.n(); self.grid.dim()]
    }

    /// Maximum Hermitian-symmetry defect `max_k |û(-k) - conj(û(k))|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut defect = 0.0f64;
        for c in 0..self.components {
            let comp = self.component(c);
            self.grid.for_each_mode(|idx, k| {
                let minus: Vec<i64> = k.iter().map(|&ki| -ki).collect();
                if minus.iter().all(|&ki| ki.unsigned_abs() as usize <= self.grid.n() / 2) {
                    let other = comp[self.grid.mode_index(&minus)];
                    let d = (other - comp[idx].conj()).norm();
                    if d > defect {
                        defect = d;
                    }
                }
            });
        }
        defect
    }

    /// Largest coefficient magnitude across all components.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `Σ_k Σ_c |û_c(k)|²` — the Plancherel sum.
    pub fn coeff_energy(&self) -> f64 {
        self.coeffs.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn scale(&self, a: f64) -> SpectralField {
        let mut out = self.clone();
        for v in out.coeffs.iter_mut() {
            *v *= a;
        }
        out
    }

    pub fn add(&self, other: &SpectralField) -> SpectralField {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        self.zip(other, |a, b| a - b)
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &SpectralField) -> SpectralField {
        self.zip(other, |x, y| x + a * y)
    }

    fn zip(
        &self,
        other: &SpectralField,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> SpectralField {
        assert_eq!(self.grid, other.grid, "field grids differ");
        assert_eq!(self.components, other.components, "component counts differ");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f(a, b))
            .collect();
        SpectralField {
            grid: self.grid,
            components: self.components,
            coeffs,
        }
    }

    /// Largest coefficient magnitude of `self - other`.
    pub fn max_coeff_diff(&self, other: &SpectralField) -> f64 {
        assert_eq!(self.grid, other.grid);
        assert_eq!(self.components, other.components);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn valid_components(grid: Grid, components: usize) -> bool {
    components == 1 || components == grid.dim() || components == grid.dim() * grid.dim()
}

/// Inverse of [`SpectralField::to_physical`]: transform physical samples
/// (component-major) to coefficients, truncating modes above `K_max`.
pub fn from_physical(samples: &[Complex64], grid: Grid, components: usize) -> Result<SpectralField> {
    if samples.len() != components * grid.len() {
        return Err(Error::ShapeMismatch(format!(
            "expected {} samples, got {}",
            components * grid.len(),
            samples.len()
        )));
    }
    let shape = vec![grid.n(); grid.dim()];
    let mut coeffs = samples.to_vec();
    let len = grid.len();
    for c in 0..components {
        fft::forward(&mut coeffs[c * len..(c + 1) * len], &shape);
    }
    SpectralField::from_coeffs(grid, components, coeffs)
}

/// Real-sample variant of [`from_physical`].
pub fn from_physical_real(samples: &[f64], grid: Grid, components: usize) -> Result<SpectralField> {
    let complex: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    from_physical(&complex, grid, components)
}

/// Build a scalar field from a pointwise function of the physical coordinates.
pub fn scalar_from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> SpectralField {
    field_from_fn(grid, 1, |x, _| f(x))
}

/// Build a field from a pointwise function `f(x, component)`.
pub fn field_from_fn(
    grid: Grid,
    components: usize,
    f: impl Fn(&[f64], usize) -> f64,
) -> SpectralField {
    let len = grid.len();
    let mut samples = vec![Complex64::default(); components * len];
    for idx in 0..len {
        let x = grid.point(idx);
        for c in 0..components {
            samples[c * len + idx] = Complex64::new(f(&x, c), 0.0);
        }
    }
    from_physical(&samples, grid, components).expect("shape is consistent by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn pure_mode_round_trip() {
        // f = e^{i x_1} as the real pair cos(x_1): physical samples are
        // cos(x_1) with zero imaginary part after Hermitian pairing.
        let grid = make_grid(2, 32).unwrap();
        let f = scalar_from_fn(grid, |x| x[0].cos());
        let phys = f.to_physical();
        for (idx, v) in phys.iter().enumerate() {
            let x = grid.point(idx);
            assert!((v.re - x[0].cos()).abs() < 1e-13);
            assert!(v.im.abs() < 1e-13);
        }
        assert!(f.hermitian_defect() < 1e-15);
        // Coefficients sit at k = ±(1,0) with value 1/2.
        assert!((f.mode(0, &[1, 0]) - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((f.mode(0, &[-1, 0]) - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn round_trip_identity_on_band_limited_field() {
        let grid = make_grid(2, 64).unwrap();
        let f = crate::random::random_band_field(7, grid, 1, 2.0, false);
        let g = from_physical(&f.to_physical(), grid, 1).unwrap();
        let scale = f.max_coeff();
        assert!(f.max_coeff_diff(&g) <= 1e-13 * scale.max(1.0));
    }

    #[test]
    fn mode_above_cap_is_truncated() {
        // Physical samples of the pure mode k=(25,0) on n=64: above K_max=21,
        // so the transform truncates it to the zero field (up to FFT noise on
        // the surviving modes).
        let grid = make_grid(2, 64).unwrap();
        let f = scalar_from_fn(grid, |x| (25.0 * x[0]).cos());
        assert!(f.max_coeff() < 1e-13);
        assert_eq!(f.mode(0, &[25, 0]).norm(), 0.0);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let grid = make_grid(2, 16).unwrap();
        let samples = vec![Complex64::default(); 17];
        assert!(from_physical(&samples, grid, 1).is_err());
    }
}
