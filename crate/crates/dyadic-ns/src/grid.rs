//! Periodic spectral grid on the torus `[0, 2π)^d`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A uniform grid on the torus `[0, 2π)^dim` with `n` points per axis and
/// integer Fourier modes `k ∈ Z^dim`, `|k_i| ≤ n/2`.
///
/// The effective (dealiased) frequency cap is `K_max = floor(n/3)`; every
/// public field keeps all coefficients with `|k|_∞ > K_max` identically zero,
/// so that quadratic products of two admissible fields stay representable
/// after a single truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    n: usize,
}

impl Grid {
    /// Number of spatial dimensions (2 or 3).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis (power of two, ≥ 16).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dealiased frequency cap `K_max = floor(n/3)`.
    pub fn k_max(&self) -> usize {
        self.n / 3
    }

    /// Total number of physical samples / stored modes, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed frequency of axis index `i` in FFT storage order:
    /// `0, 1, …, n/2-1, -n/2, …, -1`.
    #[inline]
    pub fn freq(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Storage axis index of a signed frequency (must satisfy `|k| ≤ n/2`).
    #[inline]
    pub fn axis_index(&self, k: i64) -> usize {
        debug_assert!(k.unsigned_abs() as usize <= self.n / 2);
        k.rem_euclid(self.n as i64) as usize
    }

    /// Flat row-major index of the mode with signed frequency vector `k`.
    pub fn mode_index(&self, k: &[i64]) -> usize {
        debug_assert_eq!(k.len(), self.dim);
        let mut idx = 0;
        for &ki in k {
            idx = idx * self.n + self.axis_index(ki);
        }
        idx
    }

    /// Signed frequency vector of the flat row-major index `idx`.
    pub fn mode_of_index(&self, idx: usize) -> Vec<i64> {
        let mut k = vec![0i64; self.dim];
        let mut rest = idx;
        for a in (0..self.dim).rev() {
            k[a] = self.freq(rest % self.n);
            rest /= self.n;
        }
        k
    }

    /// Iterate all flat indices together with their signed frequency vectors.
    pub fn modes(&self) -> ModeIter {
        ModeIter {
            grid: *self,
            next: 0,
        }
    }

    /// Allocation-free visit of every `(flat_index, signed_mode)` pair in
    /// row-major order; the hot-path variant of [`Grid::modes`].
    pub fn for_each_mode(&self, mut f: impl FnMut(usize, &[i64])) {
        let n = self.n;
        match self.dim {
            2 => {
                let mut k = [0i64; 2];
                let mut idx = 0;
                for i0 in 0..n {
                    k[0] = self.freq(i0);
                    for i1 in 0..n {
                        k[1] = self.freq(i1);
                        f(idx, &k);
                        idx += 1;
                    }
                }
            }
            3 => {
                let mut k = [0i64; 3];
                let mut idx = 0;
                for i0 in 0..n {
                    k[0] = self.freq(i0);
                    for i1 in 0..n {
                        k[1] = self.freq(i1);
                        for i2 in 0..n {
                            k[2] = self.freq(i2);
                            f(idx, &k);
                            idx += 1;
                        }
                    }
                }
            }
            _ => unreachable!("dim is validated to 2 or 3"),
        }
    }

    /// `|k|_∞ ≤ K_max` test for a signed frequency vector.
    pub fn is_admissible(&self, k: &[i64]) -> bool {
        let cap = self.k_max() as i64;
        k.iter().all(|&ki| ki.abs() <= cap)
    }

    /// Squared Euclidean norm `|k|²` of the mode at flat index `idx`.
    pub fn mode_norm_sq(&self, idx: usize) -> f64 {
        let mut sq = 0i64;
        let mut rest = idx;
        for _ in 0..self.dim {
            let f = self.freq(rest % self.n);
            sq += f * f;
            rest /= self.n;
        }
        sq as f64
    }

    /// Physical coordinates of the sample with flat row-major index `idx`.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        let h = 2.0 * std::f64::consts::PI / self.n as f64;
        let mut x = vec![0.0; self.dim];
        let mut rest = idx;
        for a in (0..self.dim).rev() {
            x[a] = (rest % self.n) as f64 * h;
            rest /= self.n;
        }
        x
    }
}

/// Iterator over `(flat_index, signed_mode_vector)` pairs.
pub struct ModeIter {
    grid: Grid,
    next: usize,
}

impl Iterator for ModeIter {
    type Item = (usize, Vec<i64>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.grid.len() {
            return None;
        }
        let idx = self.next;
        self.next += 1;
        Some((idx, self.grid.mode_of_index(idx)))
    }
}

/// Build a grid, validating `dim ∈ {2,3}` and `n` a power of two ≥ 16.
pub fn make_grid(dim: usize, n: usize) -> Result<Grid> {
    if !(2..=3).contains(&dim) {
        return Err(Error::InvalidGrid(format!("dim must be 2 or 3, got {dim}")));
    }
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::InvalidGrid(format!(
            "n must be a power of two ≥ 16, got {n}"
        )));
    }
    Ok(Grid { dim, n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_2d_64() {
        let g = make_grid(2, 64).unwrap();
        assert_eq!(g.len(), 4096);
        assert_eq!(g.k_max(), 21);
    }

    #[test]
    fn grid_3d_32() {
        let g = make_grid(3, 32).unwrap();
        assert_eq!(g.len(), 32768);
        assert_eq!(g.k_max(), 10);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(make_grid(2, 63).is_err());
        assert!(make_grid(2, 8).is_err());
        assert!(make_grid(1, 64).is_err());
        assert!(make_grid(4, 64).is_err());
    }

    #[test]
    fn mode_index_round_trip() {
        let g = make_grid(2, 16).unwrap();
        for (idx, k) in g.modes() {
            assert_eq!(g.mode_index(&k), idx);
        }
        let g3 = make_grid(3, 16).unwrap();
        for (idx, k) in g3.modes() {
            assert_eq!(g3.mode_index(&k), idx);
        }
    }

    #[test]
    fn freq_ordering() {
        let g = make_grid(2, 16).unwrap();
        let freqs: Vec<i64> = (0..16).map(|i| g.freq(i)).collect();
        assert_eq!(
            freqs,
            vec![0, 1, 2, 3, 4, 5, 6, 7, -8, -7, -6, -5, -4, -3, -2, -1]
        );
    }
}
