//! Dyadic frequency blocks: the smoothed cutoff operators `S_j` (low-pass)
//! and `Δ_j` (annulus), plus full decomposition/reconstruction.
//!
//! Block `j ≥ 0` applies the multiplier `ψ(|k|/2^j)` and is supported in the
//! annulus `2^{j-1} ≤ |k| ≤ 2^{j+1}`; block `-1` applies `φ(|k|)`. The top
//! index `J` is the smallest integer with `2^J ≥ √dim · K_max`, which makes
//! `S_{J+1}` the identity on admissible fields and the block sum a partition
//! of unity over the whole admissible spectrum.

use crate::cutoff::{phi, psi};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;

/// Top block index `J` for a grid: smallest `J ≥ 0` with
/// `2^J ≥ √dim · K_max` (the largest Euclidean mode length).
pub fn j_max(grid: Grid) -> i32 {
    let target = (grid.dim() as f64).sqrt() * grid.k_max() as f64;
    let mut j = 0;
    while ((1u64 << j) as f64) < target {
        j += 1;
    }
    j as i32
}

/// Littlewood-Paley block `Δ_j f` for `-1 ≤ j ≤ J`.
pub fn lp_block(j: i32, f: &SpectralField) -> Result<SpectralField> {
    let hi = j_max(f.grid());
    if !(-1..=hi).contains(&j) {
        return Err(Error::BlockIndexOutOfRange { j, lo: -1, hi });
    }
    Ok(if j == -1 {
        f.apply_radial(phi)
    } else {
        let scale = (1u64 << j) as f64;
        f.apply_radial(|rho| psi(rho / scale))
    })
}

/// Low-pass operator `S_j f` for `0 ≤ j ≤ J+1`; `S_{J+1}` is the identity on
/// admissible fields.
pub fn lp_low(j: i32, f: &SpectralField) -> Result<SpectralField> {
    let hi = j_max(f.grid()) + 1;
    if !(0..=hi).contains(&j) {
        return Err(Error::BlockIndexOutOfRange { j, lo: 0, hi });
    }
    let scale = (1u64 << j) as f64;
    Ok(f.apply_radial(|rho| phi(rho / scale)))
}

/// Ordered list of frequency-localized blocks `Δ_{-1}f, Δ_0 f, …, Δ_J f`.
#[derive(Debug, Clone)]
pub struct DyadicDecomposition {
    grid: Grid,
    blocks: Vec<SpectralField>,
}

impl DyadicDecomposition {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Number of blocks, `J + 2`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block for dyadic index `j ∈ {-1, …, J}`.
    pub fn block(&self, j: i32) -> &SpectralField {
        &self.blocks[(j + 1) as usize]
    }

    /// Iterate `(j, Δ_j f)` pairs in ascending `j`.
    pub fn iter(&self) -> impl Iterator<Item = (i32, &SpectralField)> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (i as i32 - 1, b))
    }
}

/// Decompose a field into its dyadic blocks.
pub fn lp_decompose(f: &SpectralField) -> DyadicDecomposition {
    let hi = j_max(f.grid());
    let blocks = (-1..=hi)
        .map(|j| lp_block(j, f).expect("index is in range by construction"))
        .collect();
    DyadicDecomposition {
        grid: f.grid(),
        blocks,
    }
}

/// Sum the blocks back together; inverse of [`lp_decompose`] up to roundoff.
pub fn lp_reconstruct(dec: &DyadicDecomposition) -> SpectralField {
    let mut acc = dec.blocks[0].clone();
    for b in &dec.blocks[1..] {
        acc = acc.add(b);
    }
    acc
}
