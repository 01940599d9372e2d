//! Spectral vector calculus: gradient, divergence, Leray projection and
//! exact (dealiased) pointwise products.

use crate::error::{Error, Result};
use crate::fft;
use crate::field::SpectralField;
use crate::grid::Grid;
use num_complex::Complex64;

/// Gradient of a scalar field: per-mode multiplication by `i k_j`.
pub fn gradient(f: &SpectralField) -> SpectralField {
    assert!(f.is_scalar(), "gradient expects a scalar field");
    let grid = f.grid();
    let d = grid.dim();
    let src = f.component(0);
    let mut parts = Vec::with_capacity(d);
    for a in 0..d {
        let mut comp = vec![Complex64::default(); grid.len()];
        grid.for_each_mode(|idx, k| {
            comp[idx] = Complex64::new(0.0, k[a] as f64) * src[idx];
        });
        parts.push(comp);
    }
    let coeffs = parts.concat();
    SpectralField::from_coeffs(grid, d, coeffs).expect("gradient shape is consistent")
}

/// Divergence of a vector field: `Σ_j i k_j v̂_j`.
pub fn divergence(v: &SpectralField) -> SpectralField {
    assert!(v.is_vector(), "divergence expects a vector field");
    let grid = v.grid();
    let d = grid.dim();
    let mut out = vec![Complex64::default(); grid.len()];
    for a in 0..d {
        let comp = v.component(a);
        grid.for_each_mode(|idx, k| {
            out[idx] += Complex64::new(0.0, k[a] as f64) * comp[idx];
        });
    }
    SpectralField::from_coeffs(grid, 1, out).expect("divergence shape is consistent")
}

/// Divergence of a tensor field `F` with components `F_{ji}` stored at index
/// `j*d + i`: `(∇·F)_i = Σ_j i k_j F̂_{ji}`.
pub fn tensor_divergence(t: &SpectralField) -> SpectralField {
    assert!(t.is_tensor(), "tensor_divergence expects a tensor field");
    let grid = t.grid();
    let d = grid.dim();
    let mut parts: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); grid.len()]; d];
    for j in 0..d {
        for i in 0..d {
            let comp = t.component(j * d + i);
            let part = &mut parts[i];
            grid.for_each_mode(|idx, k| {
                part[idx] += Complex64::new(0.0, k[j] as f64) * comp[idx];
            });
        }
    }
    let coeffs = parts.concat();
    SpectralField::from_coeffs(grid, d, coeffs).expect("tensor divergence shape is consistent")
}

/// Leray projection onto divergence-free fields:
/// `P(k)_{ij} = δ_{ij} - k_i k_j / |k|²` per mode, `P(0) = I`.
pub fn leray_project(v: &SpectralField) -> SpectralField {
    assert!(v.is_vector(), "leray_project expects a vector field");
    let grid = v.grid();
    let d = grid.dim();
    let mut out = v.clone();
    let len = grid.len();
    let mut modes: Vec<Complex64> = vec![Complex64::default(); d];
    let mut updates: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(len);
    grid.for_each_mode(|idx, k| {
        let ksq: i64 = k.iter().map(|&ki| ki * ki).sum();
        if ksq == 0 {
            return;
        }
        for (a, m) in modes.iter_mut().enumerate() {
            *m = v.component(a)[idx];
        }
        let kdotv: Complex64 = k
            .iter()
            .zip(modes.iter())
            .map(|(&ki, &vi)| vi * ki as f64)
            .sum();
        let scale = kdotv / ksq as f64;
        let projected: Vec<Complex64> = k
            .iter()
            .zip(modes.iter())
            .map(|(&ki, &vi)| vi - scale * ki as f64)
            .collect();
        updates.push((idx, projected));
    });
    for (idx, projected) in updates {
        for (a, value) in projected.into_iter().enumerate() {
            out.component_mut(a)[idx] = value;
        }
    }
    out
}

/// Embed coarse coefficients into the doubled grid, return physical samples.
fn fine_physical(comp: &[Complex64], grid: Grid) -> Vec<Complex64> {
    let n2 = 2 * grid.n();
    let d = grid.dim();
    let fine_len = n2.pow(d as u32);
    let mut fine = vec![Complex64::default(); fine_len];
    grid.for_each_mode(|idx, k| {
        let v = comp[idx];
        if v != Complex64::default() {
            let mut fidx = 0usize;
            for &ki in k {
                fidx = fidx * n2 + ki.rem_euclid(n2 as i64) as usize;
            }
            fine[fidx] = v;
        }
    });
    let shape = vec![n2; d];
    fft::inverse(&mut fine, &shape);
    fine
}

/// Transform a fine-grid physical product back and truncate to `K_max`.
fn fine_to_coarse(mut fine: Vec<Complex64>, grid: Grid) -> Vec<Complex64> {
    let n2 = 2 * grid.n();
    let d = grid.dim();
    let shape = vec![n2; d];
    fft::forward(&mut fine, &shape);
    let cap = grid.k_max() as i64;
    let mut coarse = vec![Complex64::default(); grid.len()];
    grid.for_each_mode(|idx, k| {
        if k.iter().all(|&ki| ki.abs() <= cap) {
            let mut fidx = 0usize;
            for &ki in k {
                fidx = fidx * n2 + ki.rem_euclid(n2 as i64) as usize;
            }
            coarse[idx] = fine[fidx];
        }
    });
    coarse
}

/// Exact spectral convolution of two band-limited scalar fields via 2×
/// zero-padding, truncated to `K_max`. Because both inputs live below
/// `n/3`, the product (modes up to `2n/3`) is alias-free on the doubled grid.
pub fn dealiased_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch(
            "dealiased_product requires a shared grid".into(),
        ));
    }
    assert!(f.is_scalar() && g.is_scalar(), "dealiased_product expects scalars");
    let grid = f.grid();
    let mut fa = fine_physical(f.component(0), grid);
    let gb = fine_physical(g.component(0), grid);
    for (a, b) in fa.iter_mut().zip(&gb) {
        *a *= b;
    }
    let coarse = fine_to_coarse(fa, grid);
    SpectralField::from_coeffs(grid, 1, coarse)
}

/// Dealiased tensor product of two vector fields: component `(j,i)` of the
/// result (stored at `j*d + i`) is the exact product `u_j · v_i`.
pub fn tensor_product(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    if u.grid() != v.grid() {
        return Err(Error::GridMismatch(
            "tensor_product requires a shared grid".into(),
        ));
    }
    assert!(u.is_vector() && v.is_vector(), "tensor_product expects vectors");
    let grid = u.grid();
    let d = grid.dim();
    let left: Vec<Vec<Complex64>> = (0..d).map(|j| fine_physical(u.component(j), grid)).collect();
    let right: Vec<Vec<Complex64>> = (0..d).map(|i| fine_physical(v.component(i), grid)).collect();
    let mut parts = Vec::with_capacity(d * d);
    for j in 0..d {
        for i in 0..d {
            let mut prod: Vec<Complex64> = left[j]
                .iter()
                .zip(&right[i])
                .map(|(&a, &b)| a * b)
                .collect();
            let coarse = fine_to_coarse(std::mem::take(&mut prod), grid);
            parts.push(coarse);
        }
    }
    SpectralField::from_coeffs(grid, d * d, parts.concat())
}
