//! Seeded random band-limited fields for test ensembles.

use crate::calculus::leray_project;
use crate::field::SpectralField;
use crate::grid::Grid;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic random field with spectrum `|û(k)| = (1+|k|)^{-gamma}` and
/// uniform random phases, Hermitian by construction (real in physical space).
///
/// The `k = 0` mode is left at zero so the fields are mean-free. With
/// `divergence_free` the result is passed through the Leray projector
/// (requires a vector field).
pub fn random_band_field(
    seed: u64,
    grid: Grid,
    components: usize,
    gamma: f64,
    divergence_free: bool,
) -> SpectralField {
    assert!(gamma >= 0.0, "gamma must be nonnegative");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = hermitian_field(grid, components, |k| {
        let norm = mode_norm(k);
        let amp = (1.0 + norm).powf(-gamma);
        let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(amp, phase)
    });
    if divergence_free {
        assert!(
            components == grid.dim(),
            "divergence_free requires a vector field"
        );
        leray_project(&field)
    } else {
        field
    }
}

/// Deterministic random field with aligned (zero) phases: coefficients are
/// real, positive and even in `k`, so all cosines peak together at the
/// origin. These fields sit near the concentration extreme of sup-norm
/// inequalities, which random-phase ensembles never probe.
pub fn random_cosine_field(seed: u64, grid: Grid, components: usize, gamma: f64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    hermitian_field(grid, components, |k| {
        let norm = mode_norm(k);
        let amp = (1.0 + norm).powf(-gamma) * rng.gen_range(0.5..1.5);
        Complex64::new(amp, 0.0)
    })
}

fn mode_norm(k: &[i64]) -> f64 {
    (k.iter().map(|&ki| (ki * ki) as f64).sum::<f64>()).sqrt()
}

/// A mode is the canonical member of the pair `{k, -k}` if its first nonzero
/// entry is positive. Values are drawn once per canonical admissible mode in
/// row-major order and mirrored conjugate, which makes the construction
/// deterministic in the seed and Hermitian to the last bit.
fn hermitian_field(
    grid: Grid,
    components: usize,
    mut draw: impl FnMut(&[i64]) -> Complex64,
) -> SpectralField {
    let cap = grid.k_max() as i64;
    let mut field = SpectralField::zeros(grid, components);
    for c in 0..components {
        let mut assignments: Vec<(usize, usize, Complex64)> = Vec::new();
        grid.for_each_mode(|idx, k| {
            if k.iter().any(|&ki| ki.abs() > cap) {
                return;
            }
            let canonical = match k.iter().find(|&&ki| ki != 0) {
                Some(&first) => first > 0,
                None => return, // k = 0 stays zero (mean-free)
            };
            if !canonical {
                return;
            }
            let value = draw(k);
            let minus: Vec<i64> = k.iter().map(|&ki| -ki).collect();
            assignments.push((idx, grid.mode_index(&minus), value));
        });
        let comp = field.component_mut(c);
        for (idx, midx, value) in assignments {
            comp[idx] = value;
            comp[midx] = value.conj();
        }
    }
    field
}
