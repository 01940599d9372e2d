//! Suites exercising the analysis layer: cutoffs, paraproducts, norm
//! characterizations, heat/Oseen mapping properties and the two precise
//! inequalities used by the uniqueness argument.


use crate::cutoff;
use crate::error::Result;
use crate::field::{scalar_from_fn, SpectralField};
use crate::grid::make_grid;
use crate::harness::config::HarnessConfig;
use crate::harness::report::{ReportBuilder, SuiteReport};
use crate::heat_oseen::{
    fit_power_law_with_offset, heat_apply, heat_trajectory, oseen_apply, oseen_kernel_l1,
    singular_convolution_l, singular_convolution_l_with,
};
use crate::littlewood_paley::{j_max, lp_block, lp_decompose, lp_low, lp_reconstruct};
use crate::norms::{besov_norm, chemin_lerner_norm, heat_char_norm, lebesgue_norm, sobolev_norm};
use crate::paraproduct::{bony_residual, pi1, pi2};
use crate::random::{random_band_field, random_cosine_field};
use crate::timegrid::{TimeGrid, TimeSeriesField};
use rayon::prelude::*;

const ANCHOR_PARTITION: &str = "dyadic partition of unity (smooth cutoff pair)";
const ANCHOR_BONY: &str = "Bony identity fg = pi1(f,g) + pi2(g,f)";
const ANCHOR_BERNSTEIN: &str = "Bernstein embedding B_q^s -> B_m^{s+d(1/m-1/q)}";
const ANCHOR_HEAT_CHAR: &str = "heat-semigroup characterization of B^{-s,inf}";
const ANCHOR_HEAT_SMOOTH: &str = "heat smoothing t^{(s2-s1)/2} e^{tL}: B^{s1} -> B^{s2}";
const ANCHOR_OSEEN_MAP: &str = "Oseen mapping gain s' = s + 1 - 2(1/p1 - 1/p2)";
const ANCHOR_KERNEL: &str = "Oseen kernel L1 scaling t^{-1/2}";
const ANCHOR_SINGULAR: &str = "singular operator L(f)(t) = int f(s)/sqrt((t-s)s) ds";
const ANCHOR_GMO: &str = "precise Sobolev inequality ||f||_4 <= ||f||_{H^r}^{1/2} ||f||_{B^{-r}}^{1/2}";
const ANCHOR_INTERP: &str = "sup interpolation ||f||_inf <= ||f||_{B^{-r}}^{s/(r+s)} ||f||_{B^s}^{r/(r+s)}";
const PLUMBING: &str = "plumbing";

pub fn partition_suite(cfg: &HarnessConfig) -> Result<SuiteReport> {
    let mut rb = ReportBuilder::new("partition", cfg.echo());
    let grid = cfg.make_grid()?;

    // cutoff telescoping at scattered radii
    let mut worst_telescope = 0.0f64;
    for &rho in &[0.0, 0.31, 0.77, 1.0, 1.9, 3.3, 7.7, 12.9, 15.99] {
        let mut sum = cutoff::phi(rho);
        for j in 0..=j_max(grid) {
            sum += cutoff::psi(rho / (1u64 << j) as f64);
        }
        worst_telescope = worst_telescope.max((sum - 1.0).abs());
    }
    rb.check(
        "cutoff-telescoping",
        ANCHOR_PARTITION,
        worst_telescope <= 1e-15,
        vec![worst_telescope],
        1e-15,
    );

    // reconstruction over the seeded ensemble
    let defects: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let f = random_band_field(cfg.seed + i, grid, 1, 0.8, false);
            let sum = lp_reconstruct(&lp_decompose(&f));
            let sup = lebesgue_norm(&f, f64::INFINITY);
            lebesgue_norm(&f.sub(&sum), f64::INFINITY) / sup
        })
        .collect();
    let worst = defects.iter().copied().fold(0.0, f64::max);
    rb.check(
        "reconstruction-100-fields",
        ANCHOR_PARTITION,
        worst <= 1e-12,
        vec![worst],
        1e-12,
    );

    // S_{j+1} = S_j + Delta_j
    let f = random_band_field(cfg.seed + 1000, grid, 1, 1.0, false);
    let mut worst_inc = 0.0f64;
    for j in 0..=j_max(grid) {
        let lhs = lp_low(j + 1, &f)?.sub(&lp_low(j, &f)?);
        let rhs = lp_block(j, &f)?;
        worst_inc = worst_inc.max(lhs.max_coeff_diff(&rhs) / f.max_coeff());
    }
    rb.check(
        "low-pass-increment",
        ANCHOR_PARTITION,
        worst_inc <= 1e-15,
        vec![worst_inc],
        1e-15,
    );

    // block support and distant-block orthogonality
    let mut leak = 0.0f64;
    let dec = lp_decompose(&f);
    for (j, block) in dec.iter() {
        let comp = block.component(0);
        grid.for_each_mode(|idx, k| {
            let norm = (k.iter().map(|&ki| (ki * ki) as f64).sum::<f64>()).sqrt();
            let inside = if j == -1 {
                norm <= 1.0
            } else {
                let base = (1u64 << j) as f64;
                (0.5 * base..=2.0 * base).contains(&norm)
            };
            if !inside {
                leak = leak.max(comp[idx].norm());
            }
        });
    }
    rb.check("block-support", ANCHOR_PARTITION, leak == 0.0, vec![leak], 0.0);

    let mut overlap = 0.0f64;
    for i in -1..=j_max(grid) {
        for j in -1..=j_max(grid) {
            if (i - j).abs() >= 2 {
                overlap = overlap.max(lp_block(i, &lp_block(j, &f)?)?.max_coeff());
            }
        }
    }
    rb.check(
        "distant-blocks-vanish",
        ANCHOR_PARTITION,
        overlap == 0.0,
        vec![overlap],
        0.0,
    );
    Ok(rb.finish())
}

pub fn bony_suite(cfg: &HarnessConfig) -> Result<SuiteReport> {
    let mut rb = ReportBuilder::new("bony", cfg.echo());
    let grid = cfg.make_grid()?;
    let cap = grid.k_max() as f64;

    // 100 pairs, the last ten concentrated at the dealiasing cap
    let ratios: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let (f, g) = if i < 90 {
                (
                    random_band_field(cfg.seed + 2 * i, grid, 1, 0.7, false),
                    random_band_field(cfg.seed + 2 * i + 1, grid, 1, 0.7, false),
                )
            } else {
                let phase = (i - 90) as f64;
                (
                    scalar_from_fn(grid, |x| (cap * x[0] + phase).cos()),
                    scalar_from_fn(grid, |x| (cap * x[1]).cos() + (cap * x[0] + 0.3 * phase).sin()),
                )
            };
            let scale =
                lebesgue_norm(&f, f64::INFINITY) * lebesgue_norm(&g, f64::INFINITY);
            bony_residual(&f, &g).map(|r| r / scale)
        })
        .collect::<Result<_>>()?;
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    rb.check(
        "identity-100-pairs",
        ANCHOR_BONY,
        worst <= 1e-12,
        vec![worst],
        1e-12,
    );

    // Besov-level continuity constant, recorded and compared under doubling
    let (sigma1, sigma2) = (0.3, 0.9);
    let measure_ratio = |n: usize, seeds: u64| -> Result<f64> {
        let g2 = make_grid(cfg.dim, n)?;
        let worst = (0..seeds)
            .into_par_iter()
            .map(|i| {
                let f = random_band_field(cfg.seed + 7000 + i, g2, 1, 0.8, false);
                let g = random_band_field(cfg.seed + 8000 + i, g2, 1, 2.0, false);
                let denom = besov_norm(&f, -sigma1, f64::INFINITY)
                    * besov_norm(&g, sigma2, f64::INFINITY);
                let p1 = besov_norm(&pi1(&f, &g)?, sigma2 - sigma1, f64::INFINITY);
                let p2 = besov_norm(&pi2(&f, &g)?, sigma2 - sigma1, f64::INFINITY);
                Ok((p1 / denom).max(p2 / denom))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(worst)
    };
    let ratio_base = measure_ratio(cfg.grid, 16)?;
    let ratio_double = measure_ratio(cfg.grid * 2, 8)?;
    let drift = (ratio_double / ratio_base).max(ratio_base / ratio_double);
    rb.check_note(
        "continuity-doubling-stability",
        "paraproduct continuity B^{-s1} x B^{s2} -> B^{s2-s1}",
        drift <= 4.0,
        vec![ratio_base, ratio_double, drift],
        4.0,
        "measured operator ratios at n and 2n",
    );

    // horizon stability of the mixed-norm continuity constants
    let mut per_horizon = Vec::new();
    for &horizon in &[0.25, 0.5, 1.0] {
        let g2 = make_grid(cfg.dim, 32)?;
        let tg = TimeGrid::graded(horizon, 8)?;
        let mut worst_t = 0.0f64;
        for i in 0..6u64 {
            let f0 = random_band_field(cfg.seed + 9000 + i, g2, 1, 0.8, false);
            let g0 = random_band_field(cfg.seed + 9500 + i, g2, 1, 2.0, false);
            let f = heat_trajectory(&f0, &tg);
            let g = heat_trajectory(&g0, &tg);
            let prod = TimeSeriesField::new(
                g2,
                tg.clone(),
                f.snapshots()
                    .iter()
                    .zip(g.snapshots())
                    .map(|(a, b)| pi1(a, b))
                    .collect::<Result<_>>()?,
            )?;
            let denom = chemin_lerner_norm(&f, 2.0, -sigma1, f64::INFINITY)
                * chemin_lerner_norm(&g, 2.0, sigma2, f64::INFINITY);
            let num = chemin_lerner_norm(&prod, 1.0, sigma2 - sigma1, f64::INFINITY);
            worst_t = worst_t.max(num / denom);
        }
        per_horizon.push(worst_t);
    }
    let spread = per_horizon.iter().copied().fold(0.0, f64::max)
        / per_horizon.iter().copied().fold(f64::INFINITY, f64::min);
    rb.check_note(
        "continuity-horizon-stability",
        "mixed-norm paraproduct constants independent of the horizon",
        spread <= 4.0,
        per_horizon.iter().copied().chain([spread]).collect(),
        4.0,
        "max ratios at T = 1/4, 1/2, 1",
    );
    Ok(rb.finish())
}

pub fn bernstein_suite(cfg: &HarnessConfig) -> Result<SuiteReport> {
    let mut rb = ReportBuilder::new("bernstein", cfg.echo());
    let grid = cfg.make_grid()?;
    let d = grid.dim() as f64;

    // Per-block constants on the aligned-phase ensemble. Aligned phases sit
    // near the concentration extreme where Bernstein is sharp uniformly in
    // j; random phases would decay with j. Measured at (q,m) = (2,4); the
    // (2,inf) constants are recorded too but dip on the truncated top
    // blocks, which hold fewer modes than a full annulus.
    let measure_blocks = |q: f64, m: f64| -> Result<(f64, f64)> {
        let expo = d * (1.0 / q - if m.is_infinite() { 0.0 } else { 1.0 / m });
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for seed in 0..10u64 {
            let f = random_cosine_field(cfg.seed + seed, grid, 1, 0.0);
            for j in 0..=j_max(grid) {
                let block = lp_block(j, &f)?;
                let lq = lebesgue_norm(&block, q);
                if lq == 0.0 {
                    continue;
                }
                let c = lebesgue_norm(&block, m) / ((2.0f64).powf(j as f64 * expo) * lq);
                lo = lo.min(c);
                hi = hi.max(c);
            }
        }
        Ok((lo, hi))
    };
    let (lo, hi) = measure_blocks(2.0, 4.0)?;
    rb.check_note(
        "per-block-constant-stability",
        ANCHOR_BERNSTEIN,
        hi / lo <= 4.0,
        vec![lo, hi, hi / lo],
        4.0,
        "aligned-phase ensemble, q=2, m=4, all blocks and seeds",
    );
    // frozen band from the audited n=64 run (lo=0.5236, hi=1.3530)
    rb.check_note(
        "per-block-constant-frozen",
        ANCHOR_BERNSTEIN,
        (0.45..=0.60).contains(&lo) && (1.2..=1.5).contains(&hi),
        vec![lo, hi],
        0.0,
        "regression band frozen on first audited run",
    );
    let (lo_inf, hi_inf) = measure_blocks(2.0, f64::INFINITY)?;
    rb.record(
        "per-block-constant-sup-norm",
        ANCHOR_BERNSTEIN,
        vec![lo_inf, hi_inf, hi_inf / lo_inf],
        "(q,m) = (2,inf) constants; top-block truncation widens the spread",
    );

    // Embedding constants on random-phase fields, per-seed variation
    let (q, m, s) = (2.0, 4.0, 0.4);
    let shift = d * (1.0 / m - 1.0 / q);
    let mut emb_lo = f64::INFINITY;
    let mut emb_hi = 0.0f64;
    for seed in 0..16u64 {
        let f = random_band_field(cfg.seed + 300 + seed, grid, 1, 1.0, false);
        let c = besov_norm(&f, s + shift, m) / besov_norm(&f, s, q);
        emb_lo = emb_lo.min(c);
        emb_hi = emb_hi.max(c);
    }
    rb.check_note(
        "embedding-constant-stability",
        ANCHOR_BERNSTEIN,
        emb_hi / emb_lo <= 4.0 && emb_hi <= 1.0 + 1e-12,
        vec![emb_lo, emb_hi, emb_hi / emb_lo],
        4.0,
        "random-phase ensemble, (q,m) = (2,4); constants are <= 1 here",
    );
    Ok(rb.finish())
}

pub fn heat_char_suite(cfg: &HarnessConfig) -> Result<SuiteReport> {
    let mut rb = ReportBuilder::new("heat_char", cfg.echo());
    let s = cfg.r;

    // single-mode closed form: sup_theta theta^{s/2} e^{-theta k^2}
    let grid = cfg.make_grid()?;
    let f = scalar_from_fn(grid, |x| (4.0 * x[0]).cos());
    let got = heat_char_norm(&f, s, f64::INFINITY, 1.0, 128)?;
    let expect = (s / (2.0 * std::f64::consts::E)).powf(0.5 * s) * 16.0f64.powf(-0.5 * s);
    rb.check(
        "single-mode-closed-form",
        ANCHOR_HEAT_CHAR,
        (got - expect).abs() <= 0.02 * expect,
        vec![got, expect],
        0.02,
    );

    let measure = |n: usize, count: u64, offset: u64| -> Result<(f64, f64)> {
        let g2 = make_grid(cfg.dim, n)?;
        let ratios: Vec<f64> = (0..count)
            .into_par_iter()
            .map(|i| {
                let gamma = 0.5 + 0.25 * (i % 8) as f64;
                let f = random_band_field(cfg.seed + offset + i, g2, 1, gamma, false);
                let heat = heat_char_norm(&f, s, f64::INFINITY, 1.0, 64)?;
                let dyadic = besov_norm(&f, -s, f64::INFINITY);
                Ok(heat / dyadic)
            })
            .collect::<Result<_>>()?;
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        Ok((lo, hi))
    };

    let (lo, hi) = measure(cfg.grid, 100, 20_000)?;
    rb.check_note(
        "equivalence-interval",
        ANCHOR_HEAT_CHAR,
        hi / lo <= 50.0,
        vec![lo, hi, hi / lo],
        50.0,
        "ratio heat-characterized / dyadic over 100 seeded fields",
    );
    // frozen band from the audited n=64, r=0.6 run
    rb.check_note(
        "equivalence-interval-frozen",
        ANCHOR_HEAT_CHAR,
        (0.42..=0.55).contains(&lo) && (0.90..=1.10).contains(&hi),
        vec![lo, hi],
        0.0,
        "regression band [0.42,0.55] x [0.90,1.10] frozen on first audited run",
    );

    let (lo2, hi2) = measure(cfg.grid * 2, 25, 40_000)?;
    let stable = lo2 >= lo / 2.0 && hi2 <= hi * 2.0;
    rb.check_note(
        "equivalence-doubling-stability",
        ANCHOR_HEAT_CHAR,
        stable,
        vec![lo2, hi2],
        2.0,
        "interval at 2n must stay within x2 of the n interval",
    );

    // scaling invariance of the ratio
    let g = random_band_field(cfg.seed + 77, grid, 1, 1.0, false);
    let r1 = heat_char_norm(&g, s, f64::INFINITY, 1.0, 64)? / besov_norm(&g, -s, f64::INFINITY);
    let gs = g.scale(137.0);
    let r2 = heat_char_norm(&gs, s, f64::INFINITY, 1.0, 64)? / besov_norm(&gs, -s, f64::INFINITY);
    rb.check(
        "ratio-scale-invariance",
        ANCHOR_HEAT_CHAR,
        (r1 - r2).abs() <= 1e-12 * r1,
        vec![r1, r2],
        1e-12,
    );
    Ok(rb.finish())
}

pub fn heat_smoothing_suite(cfg: &HarnessConfig) -> Result<SuiteReport> {
    let mut rb = ReportBuilder::new("heat_smoothing", cfg.echo());
    let (s1, s2) = (-cfg.r, cfg.sigma);

    let measure = |n: usize, count: u64| -> Result<f64> {
        let grid = make_grid(cfg.dim, n)?;
        let worst = (0..count)
            .into_par_iter()
            .map(|i| {
                let f = random_band_field(cfg.seed + 50_000 + i, grid, 1, 1.0, false);
                let denom = besov_norm(&f, s1, f64::INFINITY);
                let mut best = 0.0f64;
                for e in 0..16 {
                    let t = (2.0f64).powi(-e);
                    let num = t.powf(0.5 * (s2 - s1))
                        * besov_norm(&heat_apply(&f, t)?, s2, f64::INFINITY);
                    best = best.max(num / denom);
                }
                Ok(best)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(worst)
    };
    let base = measure(cfg.grid, 12)?;
    let doubled = measure(cfg.grid * 2, 6)?;
    let drift = (doubled / base).max(base / doubled);
    rb.check_note(
        "smoothing-constant",
        ANCHOR_HEAT_SMOOTH,
        base.is_finite() && drift <= 2.0,
        vec![base, doubled, drift],
        2.0,
        "sup_t t^{(s2-s1)/2} ||e^{tL}f||_{B^{s2}} / ||f||_{B^{s1}}, n and 2n",
    );

    // trajectory-level gain: B^{s} data gives a finite (p, s + 2/p) mixed norm
    let grid = cfg.make_grid()?;
    let tg = TimeGrid::graded(cfg.horizon, 32)?;
    let p = 2.0;
    let mut worst_traj = 0.0f64;
    for i in 0..6u64 {
        let f = random_band_field(cfg.seed + 60_000 + i, grid, 1, 1.0, false);
        let traj = heat_trajectory(&f, &tg);
        let ratio = chemin_lerner_norm(&traj, p, s1 + 2.0 / p, f64::INFINITY)
            / besov_norm(&f, s1, f64::INFINITY);
        worst_traj = worst_traj.max(ratio);
    }
    rb.record(
        "trajectory-gain",
        ANCHOR_HEAT_SMOOTH,
        vec![worst_traj],
        "Chemin-Lerner (2, s+1) norm of the heat trajectory per unit B^s datum",
    );
    Ok(rb.finish())
}

pub fn oseen_map_suite(cfg: &HarnessConfig) -> Result<SuiteReport> {
    let mut rb = ReportBuilder::new("oseen_map", cfg.echo());
    let grid = make_grid(cfg.dim, 32)?;
    let d = grid.dim();
    let s = 0.2;

    for (p1, p2, label) in [(1.0, f64::INFINITY, "p-1-to-inf"), (2.0, 2.0, "p-2-to-2")] {
        let s_out = s + 1.0 - 2.0 * (1.0 / p1 - if p2.is_infinite() { 0.0 } else { 1.0 / p2 });
        let mut per_horizon = Vec::new();
        for &horizon in &[0.25, 0.5, 1.0] {
            let tg = TimeGrid::graded(horizon, 16)?;
            let mut worst = 0.0f64;
            for i in 0..5u64 {
                let tensor0 = random_band_field(cfg.seed + 70_000 + i, grid, d * d, 1.0, false);
                let f = heat_trajectory(&tensor0, &tg);
                let out = oseen_apply(&f)?;
                let num = chemin_lerner_norm(&out, p2, s_out, f64::INFINITY);
                let den = chemin_lerner_norm(&f, p1, s, f64::INFINITY);
                worst = worst.max(num / den / (1.0 + horizon));
            }
            per_horizon.push(worst);
        }
        let spread = per_horizon.iter().copied().fold(0.0, f64::max)
            / per_horizon.iter().copied().fold(f64::INFINITY, f64::min);
        rb.check_note(
            &format!("mapping-ratio-{label}"),
            ANCHOR_OSEEN_MAP,
            per_horizon.iter().all(|v| v.is_finite()) && spread <= 4.0,
            per_horizon.iter().copied().chain([spread]).collect(),
            4.0,
            "operator ratio per unit (1+T), horizons 1/4, 1/2, 1",
        );
    }
    Ok(rb.finish())
}

pub fn kernel_scaling_suite(cfg: &HarnessConfig) -> Result<SuiteReport> {
    let mut rb = ReportBuilder::new("kernel_scaling", cfg.echo());
    let ts: Vec<f64> = (2..=8).map(|i| (2.0f64).powi(-i)).collect();
    let values: Vec<f64> = ts
        .par_iter()
        .map(|&t| oseen_kernel_l1(t, cfg.dim))
        .collect::<Result<_>>()?;

    let fit = fit_power_law_with_offset(&ts, &values);
    rb.check_note(
        "exponent",
        ANCHOR_KERNEL,
        (fit.exponent + 0.5).abs() <= 0.05,
        vec![fit.exponent, fit.amplitude, fit.offset, fit.relative_residual],
        0.05,
        "three-parameter fit A·t^a - D; D is the torus folding offset",
    );
    if cfg.dim == 2 {
        // frozen regression band for the raw straight-line slope (n=256)
        rb.check_note(
            "raw-log-log-slope",
            ANCHOR_KERNEL,
            (-0.62..=-0.56).contains(&fit.raw_slope),
            vec![fit.raw_slope],
            0.0,
            "raw slope band frozen on first audited run; over-steepened by the folding offset",
        );
    } else {
        rb.record("raw-log-log-slope", ANCHOR_KERNEL, vec![fit.raw_slope], "raw slope");
    }
    let monotone = values.windows(2).all(|w| w[1] > w[0]);
    rb.check(
        "monotone-in-t",
        ANCHOR_KERNEL,
        monotone,
        values.clone(),
        0.0,
    );
    let late = oseen_kernel_l1(10.0, cfg.dim)?;
    rb.check_note(
        "late-time-value",
        ANCHOR_KERNEL,
        late < values[0],
        vec![late],
        0.0,
        "smoothed-out kernel at t = 10, recorded",
    );
    Ok(rb.finish())
}

pub fn singular_l_suite(cfg: &HarnessConfig) -> Result<SuiteReport> {
    let mut rb = ReportBuilder::new("singular_l", cfg.echo());
    let tg = TimeGrid::graded(1.0, cfg.steps.max(16))?;
    let m = tg.steps();

    let ones = vec![1.0; m];
    let mut worst_pi = 0.0f64;
    for idx in 0..m {
        let got = singular_convolution_l(&ones, &tg, tg.node(idx))?;
        worst_pi = worst_pi.max((got - std::f64::consts::PI).abs());
    }
    rb.check(
        "constant-maps-to-pi",
        ANCHOR_SINGULAR,
        worst_pi <= 1e-10,
        vec![worst_pi],
        1e-10,
    );

    let sqrt_f: Vec<f64> = tg.nodes().iter().map(|&s| s.sqrt()).collect();
    let t_last = tg.node(m - 1);
    let got_sqrt = singular_convolution_l(&sqrt_f, &tg, t_last)?;
    let expect_sqrt = 2.0 * t_last.sqrt();
    rb.check_note(
        "sqrt-weight-closed-form",
        ANCHOR_SINGULAR,
        (got_sqrt - expect_sqrt).abs() <= 1e-3 * expect_sqrt,
        vec![got_sqrt, expect_sqrt],
        1e-3,
        "linear interpolation of sqrt(s) on the graded grid costs ~1e-4",
    );

    let smooth: Vec<f64> = tg
        .nodes()
        .iter()
        .map(|&s| 1.0 + 0.5 * (3.0 * s).sin() + 0.25 * (7.0 * s).cos())
        .collect();
    let mut worst_refine = 0.0f64;
    for idx in [m / 4, m / 2, m - 1] {
        let t = tg.node(idx);
        let base = singular_convolution_l(&smooth, &tg, t)?;
        let refined = singular_convolution_l_with(&smooth, &tg, t, 640)?;
        worst_refine = worst_refine.max((base - refined).abs() / refined.abs());
    }
    rb.check(
        "refined-oracle-agreement",
        ANCHOR_SINGULAR,
        worst_refine <= 1e-6,
        vec![worst_refine],
        1e-6,
    );

    let nonneg: Vec<f64> = tg.nodes().iter().map(|&s| 0.1 + s * s).collect();
    let positive = singular_convolution_l(&nonneg, &tg, t_last)? >= 0.0;
    rb.check("positivity", PLUMBING, positive, vec![], 0.0);
    Ok(rb.finish())
}

pub fn gmo_suite(cfg: &HarnessConfig) -> Result<SuiteReport> {
    let mut rb = ReportBuilder::new("gmo", cfg.echo());
    let r = cfg.r;
    let ratio_of = |f: &SpectralField| -> f64 {
        let l4 = lebesgue_norm(f, 4.0);
        let hr = sobolev_norm(f, r);
        let besov = besov_norm(f, -r, f64::INFINITY);
        l4 / (hr.sqrt() * besov.sqrt())
    };

    // exact scale invariance: homogeneity degree 1 - (1/2 + 1/2) = 0
    let grid = cfg.make_grid()?;
    let g = random_band_field(cfg.seed + 90_000, grid, 1, 1.0, false);
    let (a, b) = (ratio_of(&g), ratio_of(&g.scale(731.0)));
    rb.check(
        "scale-invariance",
        ANCHOR_GMO,
        (a - b).abs() <= 1e-12 * a,
        vec![a, b],
        1e-12,
    );

    // single mode |k| = 4 closed form
    let f4 = scalar_from_fn(grid, |x| (4.0 * x[0]).cos());
    let got = ratio_of(&f4);
    let expect = (3.0f64 / 8.0).powf(0.25)
        / (((1.0f64 + 16.0).powf(r) / 2.0).powf(0.25) * (2.0f64).powf(-2.0 * r).sqrt());
    rb.check(
        "single-mode-closed-form",
        ANCHOR_GMO,
        (got - expect).abs() <= 0.02 * expect,
        vec![got, expect],
        0.02,
    );

    let measure = |n: usize, count: u64, offset: u64| -> Result<f64> {
        let g2 = make_grid(cfg.dim, n)?;
        let worst = (0..count)
            .into_par_iter()
            .map(|i| {
                let gamma = 0.5 + 0.25 * (i % 8) as f64;
                let f = random_band_field(cfg.seed + offset + i, g2, 1, gamma, false);
                Ok(ratio_of(&f))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(worst)
    };
    let base = measure(cfg.grid, 100, 91_000)?;
    let doubled = measure(cfg.grid * 2, 25, 92_000)?;
    let drift = (doubled / base).max(base / doubled);
    rb.check_note(
        "ensemble-constant-doubling",
        ANCHOR_GMO,
        base.is_finite() && drift <= 2.0,
        vec![base, doubled, drift],
        2.0,
        "max ratio over 100 fields at n, 25 at 2n",
    );
    // frozen threshold from the audited n=64, r=0.6 run
    rb.check_note(
        "ensemble-constant-frozen",
        ANCHOR_GMO,
        (0.85..=0.95).contains(&base),
        vec![base],
        0.0,
        "regression band [0.85, 0.95] frozen on first audited run",
    );
    Ok(rb.finish())
}

pub fn sup_interp_suite(cfg: &HarnessConfig) -> Result<SuiteReport> {
    let mut rb = ReportBuilder::new("sup_interp", cfg.echo());
    let (r, sigma) = (cfg.r, cfg.sigma);
    let ratio_of = |f: &SpectralField| -> f64 {
        let sup = lebesgue_norm(f, f64::INFINITY);
        let low = besov_norm(f, -r, f64::INFINITY);
        let high = besov_norm(f, sigma, f64::INFINITY);
        sup / (low.powf(sigma / (r + sigma)) * high.powf(r / (r + sigma)))
    };

    let grid = cfg.make_grid()?;
    let g = random_band_field(cfg.seed + 95_000, grid, 1, 1.2, false);
    let (a, b) = (ratio_of(&g), ratio_of(&g.scale(0.0137)));
    rb.check(
        "scale-invariance",
        ANCHOR_INTERP,
        (a - b).abs() <= 1e-12 * a,
        vec![a, b],
        1e-12,
    );

    // constant field: both sides proportional, ratio exactly 1
    let c = scalar_from_fn(grid, |_| 5.5);
    let rc = ratio_of(&c);
    rb.check(
        "constant-field-ratio",
        ANCHOR_INTERP,
        (rc - 1.0).abs() <= 1e-12,
        vec![rc],
        1e-12,
    );

    // single mode on one block: closed form is exactly 1
    let f4 = scalar_from_fn(grid, |x| (4.0 * x[1]).cos());
    let r4 = ratio_of(&f4);
    rb.check(
        "single-mode-closed-form",
        ANCHOR_INTERP,
        (r4 - 1.0).abs() <= 0.02,
        vec![r4],
        0.02,
    );

    let measure = |n: usize, count: u64, offset: u64| -> Result<f64> {
        let g2 = make_grid(cfg.dim, n)?;
        let worst = (0..count)
            .into_par_iter()
            .map(|i| {
                let gamma = 0.5 + 0.25 * (i % 8) as f64;
                let f = random_band_field(cfg.seed + offset + i, g2, 1, gamma, false);
                Ok(ratio_of(&f))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(worst)
    };
    let base = measure(cfg.grid, 100, 96_000)?;
    let doubled = measure(cfg.grid * 2, 25, 97_000)?;
    let drift = (doubled / base).max(base / doubled);
    rb.check_note(
        "ensemble-constant-doubling",
        ANCHOR_INTERP,
        base.is_finite() && drift <= 2.0,
        vec![base, doubled, drift],
        2.0,
        "max ratio over 100 fields at n, 25 at 2n",
    );
    // frozen threshold from the audited n=64 run
    rb.check_note(
        "ensemble-constant-frozen",
        ANCHOR_INTERP,
        base <= 1.8,
        vec![base],
        1.8,
        "threshold frozen on first audited run (measured 1.635)",
    );
    Ok(rb.finish())
}

