//! The norm zoo: Lebesgue, Sobolev, Besov `B_q^{s,∞}` (dyadic and heat
//! characterizations), Chemin-Lerner mixed norms, weighted time norms and a
//! uniformly-local norm on the torus.
//!
//! All `L^q` norms use the normalized measure (average over the torus, not
//! the integral), so values are grid-size independent.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::heat_oseen::heat_apply;
use crate::littlewood_paley::{j_max, lp_block};
use crate::timegrid::TimeSeriesField;
use serde::{Deserialize, Serialize};

/// Regularity/integrability pair `(s, q)` of a Besov space `B_q^{s,∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovParams {
    pub s: f64,
    pub q: f64,
}

/// Pointwise magnitude samples: scalar fields give `|f(x)|`, vector and
/// tensor fields the Euclidean magnitude across components.
fn magnitude_samples(f: &SpectralField) -> Vec<f64> {
    let phys = f.to_physical();
    let len = f.grid().len();
    let comps = f.components();
    (0..len)
        .map(|idx| {
            let mut sq = 0.0;
            for c in 0..comps {
                sq += phys[c * len + idx].norm_sqr();
            }
            sq.sqrt()
        })
        .collect()
}

/// Normalized-measure `L^q` norm; `q = ∞` gives the max over samples.
pub fn lebesgue_norm(f: &SpectralField, q: f64) -> f64 {
    try_lebesgue_norm(f, q).expect("q must be ≥ 1")
}

/// Error-carrying variant of [`lebesgue_norm`] for caller-supplied `q`.
pub fn try_lebesgue_norm(f: &SpectralField, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "Lebesgue exponent must be ≥ 1, got {q}"
        )));
    }
    let mags = magnitude_samples(f);
    Ok(lq_of_samples(&mags, q))
}

fn lq_of_samples(mags: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        mags.iter().copied().fold(0.0, f64::max)
    } else if q == 2.0 {
        (mags.iter().map(|&v| v * v).sum::<f64>() / mags.len() as f64).sqrt()
    } else {
        (mags.iter().map(|&v| v.powf(q)).sum::<f64>() / mags.len() as f64).powf(1.0 / q)
    }
}

/// Sobolev norm `(Σ_k (1+|k|²)^s Σ_c |û_c(k)|²)^{1/2}`.
pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    let grid = f.grid();
    let mut weight = vec![0.0f64; grid.len()];
    grid.for_each_mode(|idx, k| {
        let ksq: i64 = k.iter().map(|&ki| ki * ki).sum();
        weight[idx] = (1.0 + ksq as f64).powf(s);
    });
    let mut sum = 0.0;
    for c in 0..f.components() {
        for (v, &w) in f.component(c).iter().zip(&weight) {
            sum += w * v.norm_sqr();
        }
    }
    sum.sqrt()
}

/// Dyadic Besov norm `sup_{j ≥ -1} 2^{js} ‖Δ_j f‖_q`.
pub fn besov_norm(f: &SpectralField, s: f64, q: f64) -> f64 {
    let mut best = 0.0f64;
    for j in -1..=j_max(f.grid()) {
        let block = lp_block(j, f).expect("block index in range");
        if block.max_coeff() == 0.0 {
            continue;
        }
        let value = (2.0f64).powf(j as f64 * s) * lebesgue_norm(&block, q);
        best = best.max(value);
    }
    best
}

/// Heat-semigroup characterization of the `B_q^{-s,∞}` norm for `s > 0`:
/// `sup_{0<θ<δ} θ^{s/2} ‖e^{θΔ} f‖_q`, with the sup realized as a max over
/// `n_theta ≥ 16` geometric samples of `θ` in `(δ·2^{-2J-2}, δ]`. Band-limited
/// fields make smaller `θ` redundant: `e^{θΔ}` is within roundoff of the
/// identity there.
pub fn heat_char_norm(f: &SpectralField, s: f64, q: f64, delta: f64, n_theta: usize) -> Result<f64> {
    if s <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "heat characterization needs s > 0, got {s}"
        )));
    }
    if n_theta < 16 {
        return Err(Error::InvalidParameter(format!(
            "need at least 16 theta samples, got {n_theta}"
        )));
    }
    if delta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let jm = j_max(f.grid());
    let floor_ratio = (2.0f64).powi(-(2 * jm + 2));
    let mut best = 0.0f64;
    for i in 0..n_theta {
        let frac = i as f64 / (n_theta - 1) as f64;
        let theta = delta * floor_ratio.powf(frac);
        let value = theta.powf(0.5 * s) * lebesgue_norm(&heat_apply(f, theta)?, q);
        best = best.max(value);
    }
    Ok(best)
}

/// Chemin-Lerner norm `sup_j 2^{js} ‖Δ_j v‖_{L_T^p L_x^q}`: the `L^p`-in-time
/// norm is taken per dyadic block before the sup over blocks.
pub fn chemin_lerner_norm(v: &TimeSeriesField, p: f64, s: f64, q: f64) -> f64 {
    assert!(p >= 1.0, "time exponent must be ≥ 1");
    let tg = v.timegrid();
    let mut best = 0.0f64;
    for j in -1..=j_max(v.grid()) {
        let series: Vec<f64> = v
            .snapshots()
            .iter()
            .map(|snap| {
                let block = lp_block(j, snap).expect("block index in range");
                lebesgue_norm(&block, q)
            })
            .collect();
        let time_norm = if p.is_infinite() {
            series.iter().copied().fold(0.0, f64::max)
        } else {
            let powered: Vec<f64> = series.iter().map(|&x| x.powf(p)).collect();
            tg.integrate(&powered).max(0.0).powf(1.0 / p)
        };
        best = best.max((2.0f64).powf(j as f64 * s) * time_norm);
    }
    best
}

/// Weighted sup norm `sup_m t_m^{μ/2} ‖v(t_m)‖_∞`.
pub fn weighted_sup_norm(v: &TimeSeriesField, mu: f64) -> f64 {
    assert!(mu >= 0.0, "weight exponent must be nonnegative");
    v.timegrid()
        .nodes()
        .iter()
        .zip(v.snapshots())
        .map(|(&t, snap)| t.powf(0.5 * mu) * lebesgue_norm(snap, f64::INFINITY))
        .fold(0.0, f64::max)
}

/// Uniformly-local norm on the torus: maximum over a lattice of ball centers
/// (spacing `R/2`) of the per-ball normalized `L^p` norm of `f` restricted to
/// the ball of radius `R`.
pub fn uloc_norm(f: &SpectralField, p: f64, radius: f64) -> f64 {
    assert!(p >= 1.0, "exponent must be ≥ 1");
    assert!(
        radius > 0.0 && radius <= std::f64::consts::PI,
        "radius must lie in (0, π]"
    );
    let grid = f.grid();
    let n = grid.n();
    let d = grid.dim();
    let mags = magnitude_samples(f);
    let h = std::f64::consts::TAU / n as f64;
    let centers_per_axis = (2.0 * std::f64::consts::TAU / radius).ceil() as usize;
    let center_step = std::f64::consts::TAU / centers_per_axis as f64;

    // Per-axis squared torus distances from sample row i to center c.
    let axis_dist_sq = |center: f64| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let x = i as f64 * h;
                let mut dx = (x - center).abs() % std::f64::consts::TAU;
                if dx > std::f64::consts::PI {
                    dx = std::f64::consts::TAU - dx;
                }
                dx * dx
            })
            .collect()
    };

    let rsq = radius * radius;
    let mut best = 0.0f64;
    let mut center_idx = vec![0usize; d];
    loop {
        let dists: Vec<Vec<f64>> = center_idx
            .iter()
            .map(|&ci| axis_dist_sq(ci as f64 * center_step))
            .collect();
        let mut acc = 0.0f64;
        let mut count = 0usize;
        let mut sup = 0.0f64;
        for (idx, &m) in mags.iter().enumerate() {
            let mut rest = idx;
            let mut dsq = 0.0;
            for a in (0..d).rev() {
                dsq += dists[a][rest % n];
                rest /= n;
            }
            if dsq <= rsq {
                count += 1;
                if p.is_infinite() {
                    sup = sup.max(m);
                } else {
                    acc += m.powf(p);
                }
            }
        }
        if count > 0 {
            let value = if p.is_infinite() {
                sup
            } else {
                (acc / count as f64).powf(1.0 / p)
            };
            best = best.max(value);
        }
        // advance the center lattice counter
        let mut a = 0;
        loop {
            if a == d {
                return best;
            }
            center_idx[a] += 1;
            if center_idx[a] < centers_per_axis {
                break;
            }
            center_idx[a] = 0;
            a += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{scalar_from_fn, SpectralField};
    use crate::grid::make_grid;
    use crate::random::random_band_field;
    use crate::timegrid::{TimeGrid, TimeSeriesField};
    use num_complex::Complex64;

    #[test]
    fn unimodular_mode_has_unit_lq_norm() {
        // A single complex mode e^{ik·x} has |f| ≡ 1, so every L^q norm is 1.
        let grid = make_grid(2, 32).unwrap();
        let mut f = SpectralField::zeros(grid, 1);
        f.set_mode(0, &[3, 1], Complex64::new(1.0, 0.0));
        for &q in &[1.0, 2.0, 4.0, 7.5, f64::INFINITY] {
            assert!((lebesgue_norm(&f, q) - 1.0).abs() < 1e-12, "q={q}");
        }
    }

    #[test]
    fn constant_field_norm_is_its_magnitude() {
        let grid = make_grid(2, 32).unwrap();
        let f = scalar_from_fn(grid, |_| -2.25);
        for &q in &[1.0, 3.0, f64::INFINITY] {
            assert!((lebesgue_norm(&f, q) - 2.25).abs() < 1e-13);
        }
    }

    #[test]
    fn l2_matches_plancherel() {
        let grid = make_grid(2, 64).unwrap();
        let f = random_band_field(50, grid, 1, 1.0, false);
        let l2 = lebesgue_norm(&f, 2.0);
        let parseval = f.coeff_energy().sqrt();
        assert!((l2 - parseval).abs() <= 1e-12 * parseval);
    }

    #[test]
    fn rejects_sub_unit_exponent() {
        let grid = make_grid(2, 16).unwrap();
        let f = SpectralField::zeros(grid, 1);
        assert!(try_lebesgue_norm(&f, 0.5).is_err());
    }

    #[test]
    fn sobolev_single_mode_closed_form() {
        let grid = make_grid(2, 32).unwrap();
        let mut f = SpectralField::zeros(grid, 1);
        f.set_mode(0, &[3, 4], Complex64::new(0.7, 0.0));
        // |k|² = 25, amplitude 0.7: norm = 0.7·26^{s/2}.
        for &s in &[-1.0, 0.5, 2.0] {
            let expect = 0.7 * (26.0f64).powf(0.5 * s);
            assert!((sobolev_norm(&f, s) - expect).abs() < 1e-13 * expect);
        }
    }

    #[test]
    fn sobolev_zero_is_l2() {
        let grid = make_grid(2, 64).unwrap();
        let f = random_band_field(51, grid, 2, 1.5, false);
        let a = sobolev_norm(&f, 0.0);
        let b = lebesgue_norm(&f, 2.0);
        assert!((a - b).abs() <= 1e-13 * b);
    }

    #[test]
    fn sobolev_multiplier_bounds() {
        let grid = make_grid(2, 64).unwrap();
        let f = random_band_field(52, grid, 1, 1.0, false);
        let r = 0.6;
        let hr = sobolev_norm(&f, r);
        let l2 = lebesgue_norm(&f, 2.0);
        let kmax = grid.k_max() as f64;
        let cap = (1.0 + 2.0 * kmax * kmax).powf(0.5 * r) * l2;
        assert!(hr >= l2 * (1.0 - 1e-12));
        assert!(hr <= cap * (1.0 + 1e-12));
    }

    #[test]
    fn besov_single_mode_two_block_formula() {
        let grid = make_grid(2, 64).unwrap();
        let f = scalar_from_fn(grid, |x| (3.0 * x[0]).cos());
        let psi15 = crate::cutoff::psi(1.5);
        let psi075 = crate::cutoff::psi(0.75);
        for &s in &[-0.6, 0.0, 1.3] {
            let expect = (2.0f64.powf(s) * psi15).max(2.0f64.powf(2.0 * s) * psi075);
            let got = besov_norm(&f, s, f64::INFINITY);
            assert!((got - expect).abs() < 1e-12 * expect.max(1e-12), "s={s}");
        }
    }

    #[test]
    fn besov_constant_uses_low_block_weight() {
        let grid = make_grid(2, 32).unwrap();
        let f = scalar_from_fn(grid, |_| 1.4);
        for &s in &[-0.5, 0.8] {
            let expect = 1.4 * (2.0f64).powf(-s);
            assert!((besov_norm(&f, s, 2.0) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn besov_is_homogeneous() {
        let grid = make_grid(2, 64).unwrap();
        let f = random_band_field(53, grid, 1, 1.2, false);
        let a = besov_norm(&f.scale(-7.5), 0.4, 3.0);
        let b = 7.5 * besov_norm(&f, 0.4, 3.0);
        assert!((a - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn chemin_lerner_time_constant_series() {
        let grid = make_grid(2, 32).unwrap();
        let tg = TimeGrid::graded(0.75, 16).unwrap();
        let g = random_band_field(54, grid, 1, 1.0, false);
        let v = TimeSeriesField::from_fn(grid, tg.clone(), |_, _| g.clone());
        for &p in &[1.0, 2.0, 5.0] {
            let got = chemin_lerner_norm(&v, p, 0.3, 2.0);
            let expect = 0.75f64.powf(1.0 / p) * besov_norm(&g, 0.3, 2.0);
            assert!((got - expect).abs() <= 1e-12 * expect, "p={p}");
        }
        let got_inf = chemin_lerner_norm(&v, f64::INFINITY, 0.3, 2.0);
        let expect_inf = besov_norm(&g, 0.3, 2.0);
        assert!((got_inf - expect_inf).abs() <= 1e-12 * expect_inf);
    }

    #[test]
    fn chemin_lerner_of_zero_series() {
        let grid = make_grid(2, 16).unwrap();
        let tg = TimeGrid::graded(1.0, 8).unwrap();
        let v = TimeSeriesField::from_fn(grid, tg, |_, _| SpectralField::zeros(grid, 1));
        assert_eq!(chemin_lerner_norm(&v, 2.0, 0.5, 2.0), 0.0);
    }

    #[test]
    fn chemin_lerner_below_iterated_norm() {
        // Blockwise-first mixed norm ≤ time-norm of the Besov norms,
        // with both sides on the same quadrature.
        let grid = make_grid(2, 32).unwrap();
        let tg = TimeGrid::graded(0.5, 24).unwrap();
        let v = TimeSeriesField::from_fn(grid, tg.clone(), |m, _| {
            random_band_field(100 + m as u64, grid, 1, 1.0, false)
        });
        let p = 2.0;
        let lhs = chemin_lerner_norm(&v, p, 0.4, 4.0);
        let powered: Vec<f64> = v
            .snapshots()
            .iter()
            .map(|s| besov_norm(s, 0.4, 4.0).powf(p))
            .collect();
        let rhs = tg.integrate(&powered).powf(1.0 / p);
        assert!(lhs <= rhs + 1e-10 * rhs);
    }

    #[test]
    fn weighted_sup_cancels_exact_power() {
        let grid = make_grid(2, 32).unwrap();
        let tg = TimeGrid::graded(0.5, 32).unwrap();
        let mu = 0.8;
        let mut mode = SpectralField::zeros(grid, 1);
        mode.set_mode(0, &[2, 1], Complex64::new(1.0, 0.0));
        let v = TimeSeriesField::from_fn(grid, tg, |_, t| mode.scale(t.powf(-0.5 * mu)));
        assert!((weighted_sup_norm(&v, mu) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_sup_mu_zero_is_plain_sup() {
        let grid = make_grid(2, 32).unwrap();
        let tg = TimeGrid::graded(0.5, 16).unwrap();
        let v = TimeSeriesField::from_fn(grid, tg, |m, _| {
            random_band_field(200 + m as u64, grid, 2, 1.0, false)
        });
        let expect = v
            .snapshots()
            .iter()
            .map(|s| lebesgue_norm(s, f64::INFINITY))
            .fold(0.0, f64::max);
        assert!((weighted_sup_norm(&v, 0.0) - expect).abs() < 1e-14);
    }

    #[test]
    fn uloc_of_constant_is_its_magnitude() {
        let grid = make_grid(2, 32).unwrap();
        let f = scalar_from_fn(grid, |_| 3.0);
        for &p in &[1.0, 2.0] {
            assert!((uloc_norm(&f, p, 1.0) - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn norms_satisfy_triangle_inequality() {
        let grid = make_grid(2, 32).unwrap();
        let f = random_band_field(61, grid, 1, 1.0, false);
        let g = random_band_field(62, grid, 1, 1.0, false);
        let sum = f.add(&g);
        let checks: Vec<(f64, f64)> = vec![
            (lebesgue_norm(&sum, 3.0), lebesgue_norm(&f, 3.0) + lebesgue_norm(&g, 3.0)),
            (sobolev_norm(&sum, 0.7), sobolev_norm(&f, 0.7) + sobolev_norm(&g, 0.7)),
            (
                besov_norm(&sum, -0.4, f64::INFINITY),
                besov_norm(&f, -0.4, f64::INFINITY) + besov_norm(&g, -0.4, f64::INFINITY),
            ),
            (uloc_norm(&sum, 2.0, 1.5), uloc_norm(&f, 2.0, 1.5) + uloc_norm(&g, 2.0, 1.5)),
        ];
        for (lhs, rhs) in checks {
            assert!(lhs <= rhs + 1e-12 * rhs.max(1.0));
        }
    }
}
