//! Picard construction of mild solutions, the linearized fixed point, and
//! the regularity/blow-up monitors.
//!
//! The solver iterates the full horizon, `u_{n+1} = e^{tΔ}u_0 + B(u_n, u_n)`,
//! exactly as the fixed-point argument does; a sequential exponential
//! integrator exists only as an independent oracle. Viscosity is fixed at 1;
//! the amplitude of the data is the experimental knob.

use crate::calculus::{leray_project, tensor_divergence, tensor_product};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::heat_oseen::{bilinear_b, heat_apply, heat_trajectory, oseen_apply};
use crate::norms::{besov_norm, lebesgue_norm, weighted_sup_norm};
use crate::paraproduct::pi_sum_tensor;
use crate::timegrid::{TimeGrid, TimeSeriesField};
use serde::Serialize;

/// Configuration of the Picard solver and its monitors.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub grid: Grid,
    pub timegrid: TimeGrid,
    /// roughness index of the data class, `0 < r < 1`
    pub r: f64,
    /// auxiliary smoothness index, `r < σ < 1`
    pub sigma: f64,
    /// stop threshold on the iteration increments
    pub tol: f64,
    pub max_iter: usize,
}

impl SolverConfig {
    pub fn new(
        grid: Grid,
        timegrid: TimeGrid,
        r: f64,
        sigma: f64,
        tol: f64,
        max_iter: usize,
    ) -> Result<Self> {
        if !(0.0 < r && r < sigma && sigma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < r < sigma < 1, got r={r}, sigma={sigma}"
            )));
        }
        if tol <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        if max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be ≥ 1".into()));
        }
        Ok(SolverConfig {
            grid,
            timegrid,
            r,
            sigma,
            tol,
            max_iter,
        })
    }
}

/// The contraction metric of the fixed-point argument:
/// `‖v‖_{X_T} = sup_t √t ‖v(t)‖_∞ + sup_t t^{r/2} ‖v(t)‖_∞`.
pub fn xt_norm(v: &TimeSeriesField, r: f64) -> f64 {
    weighted_sup_norm(v, 1.0) + weighted_sup_norm(v, r)
}

/// Per-iteration increments `σ_n = ‖u_{n+1} - u_n‖_{X_T}` of a Picard run.
#[derive(Debug, Clone, Serialize)]
pub struct PicardTrace {
    pub increments: Vec<f64>,
    /// `‖u - e^{tΔ}u_0 - B(u,u)‖_{X_T}` of the returned trajectory
    pub residual: f64,
    pub iterations: usize,
}

const GROWTH_LIMIT: usize = 3;

/// Solve the integral equation `u = e^{tΔ}u_0 + B(u,u)` by Picard iteration
/// over the whole horizon. Fails with `NonContraction` when the increments
/// grow for three consecutive iterations (data too large for the horizon —
/// shrink `T`).
pub fn picard_solve(
    u0: &SpectralField,
    cfg: &SolverConfig,
) -> Result<(TimeSeriesField, PicardTrace)> {
    if u0.grid() != cfg.grid {
        return Err(Error::GridMismatch("initial data grid differs".into()));
    }
    if !u0.is_vector() {
        return Err(Error::ShapeMismatch("initial data must be a vector field".into()));
    }
    let u0 = leray_project(u0);
    let linear = heat_trajectory(&u0, &cfg.timegrid);
    let mut current = linear.clone();
    let mut increments = Vec::new();
    let mut growth = 0usize;
    let mut prev_sigma = f64::INFINITY;

    for iteration in 0..cfg.max_iter {
        let next = linear.add(&bilinear_b(&current, &current)?);
        let sigma = xt_norm(&next.sub(&current), cfg.r);
        increments.push(sigma);
        if !sigma.is_finite() || sigma > prev_sigma {
            growth += 1;
            if !sigma.is_finite() || growth >= GROWTH_LIMIT {
                return Err(Error::NonContraction {
                    iterations: iteration + 1,
                    consecutive_growth: growth,
                    last_increment: sigma,
                });
            }
        } else {
            growth = 0;
        }
        prev_sigma = sigma;
        if sigma <= cfg.tol {
            // One more application of the map measures the defining residual
            // of the returned iterate.
            let after = linear.add(&bilinear_b(&next, &next)?);
            let residual = xt_norm(&after.sub(&next), cfg.r);
            return Ok((
                next,
                PicardTrace {
                    increments,
                    residual,
                    iterations: iteration + 1,
                },
            ));
        }
        current = next;
    }
    Err(Error::NonContraction {
        iterations: cfg.max_iter,
        consecutive_growth: growth,
        last_increment: prev_sigma,
    })
}

/// `-P ∇·(u ⊗ u)`, the nonlinear right-hand side of the projected equations.
fn nonlinear_rhs(u: &SpectralField) -> Result<SpectralField> {
    let flux = tensor_product(u, u)?;
    Ok(leray_project(&tensor_divergence(&flux)).scale(-1.0))
}

/// Independent reference integrator: sequential per-step Duhamel with one
/// fixed-point correction (exponential predictor/corrector) on a `substeps`×
/// refinement of the graded grid. Used only as an oracle against the Picard
/// construction.
pub fn step_integrator_oracle(u0: &SpectralField, cfg: &SolverConfig) -> Result<TimeSeriesField> {
    step_integrator_oracle_with(u0, cfg, 4)
}

pub fn step_integrator_oracle_with(
    u0: &SpectralField,
    cfg: &SolverConfig,
    substeps: usize,
) -> Result<TimeSeriesField> {
    if u0.grid() != cfg.grid {
        return Err(Error::GridMismatch("initial data grid differs".into()));
    }
    let substeps = substeps.max(1);
    let mut state = leray_project(u0);
    let mut prev_t = 0.0f64;
    let mut snapshots = Vec::with_capacity(cfg.timegrid.steps());
    for &node in cfg.timegrid.nodes() {
        let h = (node - prev_t) / substeps as f64;
        for step in 0..substeps {
            let t_mid = prev_t + step as f64 * h;
            state = duhamel_step(&state, h, t_mid)?;
        }
        prev_t = node;
        snapshots.push(state.clone());
    }
    TimeSeriesField::new(cfg.grid, cfg.timegrid.clone(), snapshots)
}

/// One exponential predictor/corrector step of length `h`.
fn duhamel_step(u: &SpectralField, h: f64, t: f64) -> Result<SpectralField> {
    let heat_part = heat_apply(u, h)?;
    let g0 = nonlinear_rhs(u)?;
    // predictor: frozen nonlinearity, ∫ e^{-(h-ξ)|k|²} dξ = h·p(|k|²h)
    let pred = heat_part.add(&g0.apply_ksq(|ksq| h * phi1(ksq * h)));
    let g1 = nonlinear_rhs(&pred)?;
    // corrector: linear-in-s nonlinearity
    let low = g0.apply_ksq(|ksq| h * (phi1(ksq * h) - phi2(ksq * h)));
    let high = g1.apply_ksq(|ksq| h * phi2(ksq * h));
    let corrected = heat_part.add(&low).add(&high);

    let correction = corrected.max_coeff_diff(&pred);
    let nonlinear_size = pred.max_coeff_diff(&heat_part);
    if correction > 0.5 * nonlinear_size && correction > 1e-14 * u.max_coeff() {
        return Err(Error::StepRejected { t });
    }
    Ok(corrected)
}

fn phi1(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        -(-x).exp_m1() / x
    }
}

fn phi2(x: f64) -> f64 {
    if x < 1e-2 {
        0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0 + x * x * x * x / 720.0
    } else {
        (x + (-x).exp_m1()) / (x * x)
    }
}

/// Linearized transport operator: `f ↦ Oseen(Π₁(u_k, f_i) + Π₂(f_i, u_k))`,
/// the Bony reassembly of the transport tensor `u_k f_i`. Linear in `f`, and
/// applied to `u` itself it reproduces `B(u,u)` exactly — the coincidence
/// the two-space fixed point below relies on.
pub fn operator_lu(u: &TimeSeriesField, f: &TimeSeriesField) -> Result<TimeSeriesField> {
    if u.grid() != f.grid() {
        return Err(Error::GridMismatch("operator arguments must share a grid".into()));
    }
    if u.timegrid() != f.timegrid() {
        return Err(Error::GridMismatch(
            "operator arguments must share a time grid".into(),
        ));
    }
    use rayon::prelude::*;
    let tensors: Vec<SpectralField> = u
        .snapshots()
        .par_iter()
        .zip(f.snapshots().par_iter())
        .map(|(us, fs)| pi_sum_tensor(us, fs))
        .collect::<Result<_>>()?;
    let series = TimeSeriesField::new(u.grid(), u.timegrid().clone(), tensors)?;
    oseen_apply(&series)
}

/// Iterate `ω ← L_u(e^{tΔ}u_0) + L_u(ω)` to the configured tolerance in the
/// Chemin-Lerner `(2/(1+r), B_∞^{1+r,∞})` norm — the two-space fixed point
/// whose limit coincides with `B(u,u)` when `u` solves the integral
/// equation.
pub fn fixed_point_fu(
    u0: &SpectralField,
    u: &TimeSeriesField,
    cfg: &SolverConfig,
) -> Result<TimeSeriesField> {
    let p = 2.0 / (1.0 + cfg.r);
    let s = 1.0 + cfg.r;
    let u0 = leray_project(u0);
    let linear = heat_trajectory(&u0, u.timegrid());
    let omega0 = operator_lu(u, &linear)?;
    let mut omega = omega0.clone();
    let mut prev_delta = f64::INFINITY;
    let mut growth = 0usize;
    for iteration in 0..cfg.max_iter {
        let next = omega0.add(&operator_lu(u, &omega)?);
        let delta = crate::norms::chemin_lerner_norm(&next.sub(&omega), p, s, f64::INFINITY);
        if !delta.is_finite() || delta > prev_delta {
            growth += 1;
            if !delta.is_finite() || growth >= GROWTH_LIMIT {
                return Err(Error::NonContraction {
                    iterations: iteration + 1,
                    consecutive_growth: growth,
                    last_increment: delta,
                });
            }
        } else {
            growth = 0;
        }
        prev_delta = delta;
        omega = next;
        if delta <= cfg.tol {
            return Ok(omega);
        }
    }
    Err(Error::NonContraction {
        iterations: cfg.max_iter,
        consecutive_growth: growth,
        last_increment: prev_delta,
    })
}

/// Node series of the blow-up functional and the running Besov integral.
#[derive(Debug, Clone, Serialize)]
pub struct BlowupSeries {
    pub times: Vec<f64>,
    /// `‖u(t_m)‖_{B_∞^{-r,∞}}`
    pub besov_minus_r: Vec<f64>,
    /// `(T*-t_m)^{(1-r)/2} ‖u(t_m)‖_{B_∞^{-r,∞}}` when `T*` is finite
    pub g_r: Option<Vec<f64>>,
    /// `∫_0^{t_m} ‖u‖_{B_∞^{-r,∞}} dt`
    pub running_integral: Vec<f64>,
}

/// Evaluate the blow-up functional against a (possibly synthetic) trajectory.
/// `t_star = f64::INFINITY` is the no-blow-up sentinel: the functional is not
/// computed, only the running integral.
pub fn blowup_monitor(u: &TimeSeriesField, r: f64, t_star: f64) -> Result<BlowupSeries> {
    let times = u.timegrid().nodes().to_vec();
    if t_star <= *times.last().unwrap() {
        return Err(Error::InvalidParameter(format!(
            "blow-up time {t_star} must exceed the last node"
        )));
    }
    let besov_minus_r: Vec<f64> = u
        .snapshots()
        .iter()
        .map(|s| besov_norm(s, -r, f64::INFINITY))
        .collect();
    let running_integral = u.timegrid().cumulative(&besov_minus_r);
    let g_r = if t_star.is_finite() {
        Some(
            times
                .iter()
                .zip(&besov_minus_r)
                .map(|(&t, &b)| (t_star - t).powf(0.5 * (1.0 - r)) * b)
                .collect(),
        )
    } else {
        None
    };
    Ok(BlowupSeries {
        times,
        besov_minus_r,
        g_r,
        running_integral,
    })
}

/// Small-time quantities for one probe horizon `δ`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SmallTimeEntry {
    pub delta: f64,
    /// `sup_{t≤δ} t^{(1+σ)/2} ‖u(t)‖_{B_∞^{σ,∞}}`
    pub h_sigma: f64,
    /// `sup_{t≤δ} t^{(1-r)/2} ‖u(t)‖_{B_∞^{-r,∞}}`
    pub h_minus_r: f64,
    /// `L^{2/(1-r)}`-in-time norm of `‖u‖_{B_∞^{-r,∞}}` over `[0,δ]`
    pub theta: f64,
    /// `sup_{t≤δ} √t ‖u(t)‖_∞`
    pub sup_sqrt_t_uinf: f64,
}

/// Small-time regularity report: the `√t‖u‖_∞` series plus the `h`/`Θ`
/// functionals per probe horizon.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub times: Vec<f64>,
    pub sqrt_t_sup: Vec<f64>,
    pub entries: Vec<SmallTimeEntry>,
}

pub fn small_time_monitor(
    u: &TimeSeriesField,
    r: f64,
    sigma: f64,
    deltas: &[f64],
) -> Result<RegularityReport> {
    let tg = u.timegrid();
    let horizon = tg.horizon();
    for &d in deltas {
        if !(0.0 < d && d <= horizon * (1.0 + 1e-12)) {
            return Err(Error::InvalidParameter(format!(
                "probe horizon {d} outside (0, T]"
            )));
        }
    }
    let times = tg.nodes().to_vec();
    let sup_series: Vec<f64> = u
        .snapshots()
        .iter()
        .map(|s| lebesgue_norm(s, f64::INFINITY))
        .collect();
    let besov_sigma: Vec<f64> = u
        .snapshots()
        .iter()
        .map(|s| besov_norm(s, sigma, f64::INFINITY))
        .collect();
    let besov_minus_r: Vec<f64> = u
        .snapshots()
        .iter()
        .map(|s| besov_norm(s, -r, f64::INFINITY))
        .collect();
    let sqrt_t_sup: Vec<f64> = times
        .iter()
        .zip(&sup_series)
        .map(|(&t, &v)| t.sqrt() * v)
        .collect();
    let theta_p = 2.0 / (1.0 - r);
    let theta_integrand: Vec<f64> = besov_minus_r.iter().map(|&b| b.powf(theta_p)).collect();
    let theta_cumulative = tg.cumulative(&theta_integrand);

    let entries = deltas
        .iter()
        .map(|&delta| {
            let mut h_sigma = 0.0f64;
            let mut h_minus_r = 0.0f64;
            let mut sup_sqrt = 0.0f64;
            let mut last_idx = None;
            for (m, &t) in times.iter().enumerate() {
                if t > delta * (1.0 + 1e-12) {
                    break;
                }
                h_sigma = h_sigma.max(t.powf(0.5 * (1.0 + sigma)) * besov_sigma[m]);
                h_minus_r = h_minus_r.max(t.powf(0.5 * (1.0 - r)) * besov_minus_r[m]);
                sup_sqrt = sup_sqrt.max(sqrt_t_sup[m]);
                last_idx = Some(m);
            }
            let theta = match last_idx {
                Some(m) => theta_cumulative[m].max(0.0).powf(1.0 / theta_p),
                None => 0.0,
            };
            SmallTimeEntry {
                delta,
                h_sigma,
                h_minus_r,
                theta,
                sup_sqrt_t_uinf: sup_sqrt,
            }
        })
        .collect();

    Ok(RegularityReport {
        times,
        sqrt_t_sup,
        entries,
    })
}

/// Outcome of checking the bootstrap lemma's hypotheses and conclusion on a
/// sampled function: `4AB < 1`, `f(first) ≤ 2A`, `f ≤ A + B f²` pointwise,
/// and the conclusion `f ≤ 2A` everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BootstrapVerdict {
    pub smallness_holds: bool,
    pub initial_bound_holds: bool,
    pub pointwise_bound_holds: bool,
    pub first_pointwise_violation: Option<usize>,
    pub conclusion_holds: bool,
    pub first_conclusion_violation: Option<usize>,
}

impl BootstrapVerdict {
    pub fn hypotheses_hold(&self) -> bool {
        self.smallness_holds && self.initial_bound_holds && self.pointwise_bound_holds
    }

    /// The lemma's guarantee: if every hypothesis holds on the samples, the
    /// conclusion must too (a breach with intact hypotheses can only come
    /// from data that jumps across the forbidden band, violating the
    /// continuity premise).
    pub fn consistent_with_lemma(&self) -> bool {
        !self.hypotheses_hold() || self.conclusion_holds
    }
}

pub fn bootstrap_check(samples: &[(f64, f64)], a: f64, b: f64) -> BootstrapVerdict {
    assert!(a > 0.0 && b > 0.0, "bootstrap constants must be positive");
    let smallness_holds = 4.0 * a * b < 1.0;
    let initial_bound_holds = samples.first().map(|&(_, f)| f <= 2.0 * a).unwrap_or(true);
    let mut first_pointwise_violation = None;
    let mut first_conclusion_violation = None;
    for (i, &(_, f)) in samples.iter().enumerate() {
        if first_pointwise_violation.is_none() && f > a + b * f * f {
            first_pointwise_violation = Some(i);
        }
        if first_conclusion_violation.is_none() && f > 2.0 * a {
            first_conclusion_violation = Some(i);
        }
    }
    BootstrapVerdict {
        smallness_holds,
        initial_bound_holds,
        pointwise_bound_holds: first_pointwise_violation.is_none(),
        first_pointwise_violation,
        conclusion_holds: first_conclusion_violation.is_none(),
        first_conclusion_violation,
    }
}

/// Kinetic energy and cumulative dissipation along a trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyLedger {
    pub times: Vec<f64>,
    /// `E(t_m) = ‖u(t_m)‖₂²`
    pub kinetic: Vec<f64>,
    /// `D(t_m) = 2 ∫_0^{t_m} ‖∇u‖₂² dt`
    pub dissipation: Vec<f64>,
}

pub fn energy_ledger(u: &TimeSeriesField) -> EnergyLedger {
    let times = u.timegrid().nodes().to_vec();
    let kinetic: Vec<f64> = u.snapshots().iter().map(|s| s.coeff_energy()).collect();
    let grad_sq: Vec<f64> = u
        .snapshots()
        .iter()
        .map(|s| {
            let grid = s.grid();
            let mut ksq_table = vec![0.0f64; grid.len()];
            grid.for_each_mode(|idx, k| {
                ksq_table[idx] = k.iter().map(|&ki| (ki * ki) as f64).sum();
            });
            let mut sum = 0.0;
            for c in 0..s.components() {
                for (v, &w) in s.component(c).iter().zip(&ksq_table) {
                    sum += w * v.norm_sqr();
                }
            }
            sum
        })
        .collect();
    let dissipation: Vec<f64> = u
        .timegrid()
        .cumulative(&grad_sq)
        .into_iter()
        .map(|v| 2.0 * v)
        .collect();
    EnergyLedger {
        times,
        kinetic,
        dissipation,
    }
}

/// Taylor-Green initial data: in 2-D the nonlinearity is a pure gradient, so
/// the mild solution is the heat decay `u(t) = e^{-2t} u_0`.
pub fn taylor_green(grid: Grid) -> SpectralField {
    match grid.dim() {
        2 => crate::field::field_from_fn(grid, 2, |x, c| match c {
            0 => x[0].cos() * x[1].sin(),
            _ => -(x[0].sin() * x[1].cos()),
        }),
        3 => crate::field::field_from_fn(grid, 3, |x, c| match c {
            0 => x[0].sin() * x[1].cos() * x[2].cos(),
            1 => -(x[0].cos() * x[1].sin() * x[2].cos()),
            _ => 0.0,
        }),
        _ => unreachable!("grid dim is 2 or 3"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::random::random_band_field;

    fn quick_cfg(n: usize, m: usize, t: f64, tol: f64) -> SolverConfig {
        let grid = make_grid(2, n).unwrap();
        let tg = TimeGrid::graded(t, m).unwrap();
        SolverConfig::new(grid, tg, 0.6, 0.8, tol, 60).unwrap()
    }

    #[test]
    fn config_validation() {
        let grid = make_grid(2, 16).unwrap();
        let tg = TimeGrid::graded(0.5, 8).unwrap();
        assert!(SolverConfig::new(grid, tg.clone(), 0.8, 0.6, 1e-8, 10).is_err());
        assert!(SolverConfig::new(grid, tg.clone(), 0.0, 0.6, 1e-8, 10).is_err());
        assert!(SolverConfig::new(grid, tg, 0.3, 0.6, 0.0, 10).is_err());
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let cfg = quick_cfg(16, 8, 0.3, 1e-12);
        let u0 = SpectralField::zeros(cfg.grid, 2);
        let (u, trace) = picard_solve(&u0, &cfg).unwrap();
        assert_eq!(trace.increments[0], 0.0);
        for s in u.snapshots() {
            assert_eq!(s.max_coeff(), 0.0);
        }
        let oracle = step_integrator_oracle(&u0, &cfg).unwrap();
        for s in oracle.snapshots() {
            assert_eq!(s.max_coeff(), 0.0);
        }
    }

    #[test]
    fn taylor_green_is_a_heat_flow() {
        // the projected nonlinearity vanishes, so u(t) = e^{-2t} u_0
        let cfg = quick_cfg(64, 64, 0.5, 1e-10);
        let u0 = taylor_green(cfg.grid);
        // check the projector annihilates the flux divergence
        let rhs = nonlinear_rhs(&u0).unwrap();
        assert!(rhs.max_coeff() <= 1e-14 * u0.max_coeff());

        let (u, trace) = picard_solve(&u0, &cfg).unwrap();
        assert!(trace.residual <= 2.0 * cfg.tol);
        let mut worst = 0.0f64;
        for (m, &t) in cfg.timegrid.nodes().iter().enumerate() {
            let exact = u0.scale((-2.0 * t).exp());
            worst = worst.max(u.snapshot(m).max_coeff_diff(&exact));
        }
        assert!(worst <= 1e-8, "Taylor-Green drift {worst}");

        let oracle = step_integrator_oracle(&u0, &cfg).unwrap();
        let mut worst_oracle = 0.0f64;
        for (m, &t) in cfg.timegrid.nodes().iter().enumerate() {
            let exact = u0.scale((-2.0 * t).exp());
            worst_oracle = worst_oracle.max(oracle.snapshot(m).max_coeff_diff(&exact));
        }
        assert!(worst_oracle <= 1e-8, "oracle Taylor-Green drift {worst_oracle}");
    }

    #[test]
    fn small_data_picard_matches_oracle() {
        let cfg = quick_cfg(32, 32, 0.4, 1e-11);
        let raw = random_band_field(7, cfg.grid, 2, 3.0, true);
        let u0 = raw.scale(0.02 / lebesgue_norm(&raw, f64::INFINITY));
        let (u, trace) = picard_solve(&u0, &cfg).unwrap();
        assert!(trace.residual <= 2.0 * cfg.tol);
        let oracle = step_integrator_oracle(&u0, &cfg).unwrap();
        let last = cfg.timegrid.steps() - 1;
        let diff = lebesgue_norm(&u.snapshot(last).sub(oracle.snapshot(last)), 2.0);
        let scale = lebesgue_norm(u.snapshot(last), 2.0);
        assert!(diff <= 1e-6 * scale, "endpoint difference {}", diff / scale);
    }

    #[test]
    fn picard_rejects_large_data() {
        let cfg = quick_cfg(32, 16, 0.5, 1e-10);
        let raw = random_band_field(8, cfg.grid, 2, 2.0, true);
        let u0 = raw.scale(40.0 / lebesgue_norm(&raw, f64::INFINITY));
        match picard_solve(&u0, &cfg) {
            Err(Error::NonContraction { .. }) => {}
            other => panic!("expected NonContraction, got {other:?}"),
        }
    }

    #[test]
    fn divergence_free_propagates() {
        let cfg = quick_cfg(32, 16, 0.4, 1e-10);
        let raw = random_band_field(9, cfg.grid, 2, 2.5, false);
        let u0 = raw.scale(0.05 / lebesgue_norm(&raw, f64::INFINITY));
        let (u, _) = picard_solve(&u0, &cfg).unwrap();
        for s in u.snapshots() {
            let div = crate::calculus::divergence(s);
            let scale = lebesgue_norm(s, f64::INFINITY);
            assert!(lebesgue_norm(&div, f64::INFINITY) <= 1e-10 * scale);
        }
    }

    #[test]
    fn nonlinear_correction_is_second_order_in_amplitude() {
        // picard(ε u0) - ε e^{tΔ}u0 = O(ε²): the observed order across a
        // decade of ε should be ≥ 1.9.
        let cfg = quick_cfg(32, 16, 0.4, 1e-13);
        let raw = random_band_field(10, cfg.grid, 2, 2.5, true);
        let base = raw.scale(1.0 / lebesgue_norm(&raw, f64::INFINITY));
        let mut defects = Vec::new();
        for &eps in &[1e-2, 1e-3] {
            let u0 = base.scale(eps);
            let (u, _) = picard_solve(&u0, &cfg).unwrap();
            let linear = heat_trajectory(&leray_project(&u0), &cfg.timegrid);
            defects.push(xt_norm(&u.sub(&linear), cfg.r));
        }
        let order = (defects[0] / defects[1]).log10();
        assert!(order >= 1.9, "observed order {order}");
    }

    #[test]
    fn restart_reproduces_the_tail() {
        let cfg = quick_cfg(32, 24, 0.4, 1e-9);
        let raw = random_band_field(11, cfg.grid, 2, 3.0, true);
        let u0 = raw.scale(0.02 / lebesgue_norm(&raw, f64::INFINITY));
        let (u, _) = picard_solve(&u0, &cfg).unwrap();
        let m0 = 11usize;
        let t0 = cfg.timegrid.node(m0);
        let rest = TimeGrid::graded(cfg.timegrid.horizon() - t0, 24).unwrap();
        let cfg2 = SolverConfig::new(cfg.grid, rest, cfg.r, cfg.sigma, cfg.tol, 60).unwrap();
        let (shifted, _) = picard_solve(u.snapshot(m0), &cfg2).unwrap();
        let last = cfg2.timegrid.steps() - 1;
        let diff = shifted
            .snapshot(last)
            .max_coeff_diff(u.snapshot(cfg.timegrid.steps() - 1));
        assert!(diff <= 5.0 * cfg.tol, "restart endpoint defect {diff}");
    }

    #[test]
    fn oracle_self_convergence_under_substep_halving() {
        let cfg = quick_cfg(32, 16, 0.4, 1e-10);
        let raw = random_band_field(12, cfg.grid, 2, 3.0, true);
        let u0 = raw.scale(0.01 / lebesgue_norm(&raw, f64::INFINITY));
        let coarse = step_integrator_oracle_with(&u0, &cfg, 4).unwrap();
        let fine = step_integrator_oracle_with(&u0, &cfg, 8).unwrap();
        let last = cfg.timegrid.steps() - 1;
        let diff = coarse.snapshot(last).max_coeff_diff(fine.snapshot(last));
        assert!(diff <= 1e-7, "substep sensitivity {diff}");
    }

    #[test]
    fn operator_lu_is_linear_and_kills_zero() {
        let cfg = quick_cfg(32, 8, 0.3, 1e-8);
        let u = heat_trajectory(
            &random_band_field(13, cfg.grid, 2, 2.0, true).scale(0.1),
            &cfg.timegrid,
        );
        let zero = TimeSeriesField::from_fn(cfg.grid, cfg.timegrid.clone(), |_, _| {
            SpectralField::zeros(cfg.grid, 2)
        });
        let lz = operator_lu(&u, &zero).unwrap();
        for s in lz.snapshots() {
            assert_eq!(s.max_coeff(), 0.0);
        }
        let f = heat_trajectory(
            &random_band_field(14, cfg.grid, 2, 2.0, true),
            &cfg.timegrid,
        );
        let g = heat_trajectory(
            &random_band_field(15, cfg.grid, 2, 2.0, true),
            &cfg.timegrid,
        );
        let lhs = operator_lu(&u, &f.axpy(2.0, &g)).unwrap();
        let rhs = operator_lu(&u, &f).unwrap().axpy(2.0, &operator_lu(&u, &g).unwrap());
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for (a, b) in lhs.snapshots().iter().zip(rhs.snapshots()) {
            worst = worst.max(a.max_coeff_diff(b));
            scale = scale.max(a.max_coeff());
        }
        assert!(worst <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn operator_lu_on_disjoint_dyadic_supports() {
        // u on a low mode, f on a high mode three octaves up: the low-high
        // paraproduct collapses to the plain product and the other vanishes,
        // so L_u(f) equals the Oseen image of the tensor u_j f_i itself.
        let grid = make_grid(2, 32).unwrap();
        let tg = TimeGrid::graded(0.3, 8).unwrap();
        let u_field = crate::field::field_from_fn(grid, 2, |x, c| {
            if c == 0 {
                x[1].sin()
            } else {
                0.0
            }
        });
        let f_field = crate::field::field_from_fn(grid, 2, |x, c| {
            if c == 1 {
                (8.0 * x[0]).cos()
            } else {
                0.0
            }
        });
        let u = TimeSeriesField::from_fn(grid, tg.clone(), |_, _| u_field.clone());
        let f = TimeSeriesField::from_fn(grid, tg.clone(), |_, _| f_field.clone());
        let got = operator_lu(&u, &f).unwrap();

        let d = 2;
        let mut parts = Vec::new();
        for j in 0..d {
            for i in 0..d {
                let prod = crate::calculus::dealiased_product(
                    &u_field.scalar_component(j),
                    &f_field.scalar_component(i),
                )
                .unwrap();
                parts.push(prod);
            }
        }
        let tensor = SpectralField::from_components(&parts).unwrap();
        let series = TimeSeriesField::from_fn(grid, tg, |_, _| tensor.clone());
        let expect = oseen_apply(&series).unwrap();
        let mut worst = 0.0f64;
        for (a, b) in got.snapshots().iter().zip(expect.snapshots()) {
            worst = worst.max(a.max_coeff_diff(b));
        }
        assert!(worst <= 1e-12, "disjoint-support defect {worst}");
    }

    #[test]
    fn fixed_point_fu_agrees_with_direct_bilinear_form() {
        let cfg = quick_cfg(32, 16, 0.4, 1e-10);
        let raw = random_band_field(16, cfg.grid, 2, 3.0, true);
        let u0 = raw.scale(0.02 / lebesgue_norm(&raw, f64::INFINITY));
        let (u, _) = picard_solve(&u0, &cfg).unwrap();
        let omega = fixed_point_fu(&u0, &u, &cfg).unwrap();
        let direct = bilinear_b(&u, &u).unwrap();
        let p = 2.0 / (1.0 + cfg.r);
        let defect =
            crate::norms::chemin_lerner_norm(&omega.sub(&direct), p, 1.0 + cfg.r, f64::INFINITY);
        assert!(defect <= 10.0 * cfg.tol, "two-space fixed point defect {defect}");
    }

    #[test]
    fn fixed_point_fu_zero_trajectory() {
        let cfg = quick_cfg(16, 8, 0.3, 1e-10);
        let zero_traj = TimeSeriesField::from_fn(cfg.grid, cfg.timegrid.clone(), |_, _| {
            SpectralField::zeros(cfg.grid, 2)
        });
        let u0 = SpectralField::zeros(cfg.grid, 2);
        let omega = fixed_point_fu(&u0, &zero_traj, &cfg).unwrap();
        for s in omega.snapshots() {
            assert_eq!(s.max_coeff(), 0.0);
        }
    }

    #[test]
    fn synthetic_blowup_with_exact_exponent_is_flat() {
        let grid = make_grid(2, 32).unwrap();
        let tg = TimeGrid::graded(0.5, 32).unwrap();
        let t_star = 0.6;
        let r = 0.6;
        let base = random_band_field(17, grid, 2, 1.5, true);
        let unit = base.scale(1.0 / besov_norm(&base, -r, f64::INFINITY));
        let u = TimeSeriesField::from_fn(grid, tg, |_, t| {
            unit.scale((t_star - t).powf(-0.5 * (1.0 - r)))
        });
        let series = blowup_monitor(&u, r, t_star).unwrap();
        for &g in series.g_r.as_ref().unwrap() {
            assert!((g - 1.0).abs() <= 1e-10, "g_r = {g}");
        }
        assert!(series.running_integral.iter().all(|&v| v.is_finite()));
    }

    #[test]
    fn synthetic_blowup_with_fatter_exponent_grows() {
        let grid = make_grid(2, 32).unwrap();
        let tg = TimeGrid::graded(0.5, 32).unwrap();
        let t_star = 0.6;
        let r = 0.6;
        let base = random_band_field(18, grid, 2, 1.5, true);
        let unit = base.scale(1.0 / besov_norm(&base, -r, f64::INFINITY));
        let u = TimeSeriesField::from_fn(grid, tg, |_, t| {
            unit.scale((t_star - t).powf(-0.5 * (1.0 - r) * 1.1))
        });
        let series = blowup_monitor(&u, r, t_star).unwrap();
        let g = series.g_r.unwrap();
        assert!(g.windows(2).all(|w| w[1] > w[0]), "g_r should grow");
        // (T*-t)^{-0.1·(1-r)/2} over the sampled window grows by ≥ 3%
        assert!(g.last().unwrap() / g.first().unwrap() > 1.03);
    }

    #[test]
    fn blowup_monitor_with_infinite_sentinel() {
        let grid = make_grid(2, 32).unwrap();
        let tg = TimeGrid::graded(0.5, 16).unwrap();
        let u0 = random_band_field(19, grid, 2, 2.0, true).scale(0.1);
        let u = heat_trajectory(&u0, &tg);
        let series = blowup_monitor(&u, 0.6, f64::INFINITY).unwrap();
        assert!(series.g_r.is_none());
        assert!(series.running_integral.last().unwrap().is_finite());
        assert!(blowup_monitor(&u, 0.6, 0.3).is_err());
    }

    #[test]
    fn small_time_monitor_single_mode_closed_form() {
        // heat trajectory of one mode |k|: every functional has a closed
        // form through the multiplier e^{-|k|²t}
        let grid = make_grid(2, 64).unwrap();
        let tg = TimeGrid::graded(0.5, 64).unwrap();
        let (r, sigma) = (0.6, 0.8);
        let u0 = crate::field::field_from_fn(grid, 2, |x, c| {
            if c == 0 {
                (3.0 * x[1]).cos()
            } else {
                0.0
            }
        });
        let u = heat_trajectory(&u0, &tg);
        let report = small_time_monitor(&u, r, sigma, &[0.5]).unwrap();
        let entry = &report.entries[0];

        let ksq = 9.0f64;
        let bs = (0..7)
            .map(|j| {
                let w = if j == 0 {
                    crate::cutoff::phi(3.0)
                } else {
                    crate::cutoff::psi(3.0 / (1u64 << (j - 1)) as f64)
                };
                (2.0f64.powi(j - 1).powf(sigma) * w, 2.0f64.powi(j - 1).powf(-r) * w)
            })
            .fold((0.0f64, 0.0f64), |acc, (a, b)| (acc.0.max(a), acc.1.max(b)));
        // continuous maximizer of t^α e^{-ksq t} is t* = α/ksq
        let sup_of = |alpha: f64, scale: f64| -> f64 {
            let t_star = (alpha / ksq).min(0.5);
            scale * t_star.powf(alpha) * (-ksq * t_star).exp()
        };
        let expect_h_sigma = sup_of(0.5 * (1.0 + sigma), bs.0);
        let expect_h_minus_r = sup_of(0.5 * (1.0 - r), bs.1);
        let expect_sqrt = sup_of(0.5, 1.0);
        assert!((entry.h_sigma - expect_h_sigma).abs() <= 0.02 * expect_h_sigma);
        assert!((entry.h_minus_r - expect_h_minus_r).abs() <= 0.02 * expect_h_minus_r);
        assert!((entry.sup_sqrt_t_uinf - expect_sqrt).abs() <= 0.02 * expect_sqrt);
        // Θ closed form: B^{-r} norm decays like bs.1·e^{-9t}
        let p = 2.0 / (1.0 - r);
        let expect_theta = bs.1 * ((1.0 - (-ksq * p * 0.5).exp()) / (ksq * p)).powf(1.0 / p);
        assert!((entry.theta - expect_theta).abs() <= 0.02 * expect_theta);
    }

    #[test]
    fn small_time_monitor_zero_trajectory() {
        let grid = make_grid(2, 16).unwrap();
        let tg = TimeGrid::graded(0.5, 8).unwrap();
        let u = TimeSeriesField::from_fn(grid, tg, |_, _| SpectralField::zeros(grid, 2));
        let report = small_time_monitor(&u, 0.6, 0.8, &[0.5, 0.25]).unwrap();
        for e in &report.entries {
            assert_eq!(e.h_sigma, 0.0);
            assert_eq!(e.theta, 0.0);
            assert_eq!(e.sup_sqrt_t_uinf, 0.0);
        }
    }

    #[test]
    fn bootstrap_flat_case_passes() {
        let a = 1.0;
        let b = 0.125; // 4AB = 1/2
        let samples: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, a)).collect();
        let v = bootstrap_check(&samples, a, b);
        assert!(v.hypotheses_hold() && v.conclusion_holds && v.consistent_with_lemma());
    }

    #[test]
    fn bootstrap_boundary_case_violates_hypothesis() {
        // f ≡ 2A with 4AB < 1: 2A ≤ A + 4A²B < 2A is impossible, so the
        // pointwise hypothesis fails while the conclusion f ≤ 2A holds.
        let a = 1.0;
        let b = 0.2;
        let samples: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 2.0 * a)).collect();
        let v = bootstrap_check(&samples, a, b);
        assert!(v.smallness_holds && v.initial_bound_holds);
        assert!(!v.pointwise_bound_holds);
        assert_eq!(v.first_pointwise_violation, Some(0));
        assert!(v.conclusion_holds);
        assert!(v.consistent_with_lemma());
    }

    #[test]
    fn bootstrap_jump_breaches_both_clauses() {
        // A jump from A to 3A with 4AB < 1 (and AB < 2/9) breaks the
        // conclusion and the pointwise hypothesis at the same sample: the
        // verdict stays consistent with the lemma.
        let a = 1.0;
        let b = 0.2;
        let samples = vec![(0.0, a), (1.0, a), (2.0, 3.0 * a)];
        let v = bootstrap_check(&samples, a, b);
        assert!(v.smallness_holds && v.initial_bound_holds);
        assert!(!v.pointwise_bound_holds);
        assert!(!v.conclusion_holds);
        assert_eq!(v.first_pointwise_violation, Some(2));
        assert_eq!(v.first_conclusion_violation, Some(2));
        assert!(v.consistent_with_lemma());
    }

    #[test]
    fn energy_ledger_zero_and_heat_flow() {
        let grid = make_grid(2, 64).unwrap();
        let tg = TimeGrid::graded(0.5, 64).unwrap();
        let zero = TimeSeriesField::from_fn(grid, tg.clone(), |_, _| SpectralField::zeros(grid, 2));
        let zl = energy_ledger(&zero);
        assert!(zl.kinetic.iter().all(|&e| e == 0.0));
        assert!(zl.dissipation.iter().all(|&d| d == 0.0));

        // heat flow of smooth data: E(t) + D(t) = E(0) per mode
        let u0 = random_band_field(20, grid, 2, 4.0, true);
        let u = heat_trajectory(&u0, &tg);
        let ledger = energy_ledger(&u);
        let e0 = u0.coeff_energy();
        for m in 0..tg.steps() {
            let total = ledger.kinetic[m] + ledger.dissipation[m];
            assert!(
                (total - e0).abs() <= 1e-6 * e0,
                "node {m}: E+D = {total}, E0 = {e0}"
            );
        }
    }

    #[test]
    fn energy_ledger_taylor_green() {
        let grid = make_grid(2, 64).unwrap();
        let tg = TimeGrid::graded(0.5, 64).unwrap();
        let u0 = taylor_green(grid);
        let u = TimeSeriesField::from_fn(grid, tg.clone(), |_, t| u0.scale((-2.0 * t).exp()));
        let ledger = energy_ledger(&u);
        let e0 = u0.coeff_energy();
        for m in 0..tg.steps() {
            let total = ledger.kinetic[m] + ledger.dissipation[m];
            assert!((total - e0).abs() <= 1e-6 * e0);
        }
    }
}
