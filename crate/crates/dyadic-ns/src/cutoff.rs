//! Smooth radial cutoff pair (φ, ψ) for the dyadic decomposition.
//!
//! φ is 1 on `[0, 1/2]`, 0 on `[1, ∞)`, and transitions via the normalized
//! primitive of the bump `exp(-1/(x(1-x)))`. ψ(ρ) = φ(ρ/2) - φ(ρ) is
//! supported in `[1/2, 2]`. The transition is tabulated once at 2^14 points
//! and evaluated with monotone cubic (Fritsch-Carlson) interpolation, so
//! every run reproduces the same values bit for bit.

use std::io::Write;
use std::sync::OnceLock;

const TABLE_BITS: u32 = 14;
const TABLE_LEN: usize = (1 << TABLE_BITS) + 1;
const SUBSTEPS: usize = 16;

struct TransitionTable {
    /// `F(x_i)` for uniform `x_i` in [0,1]; F is the normalized primitive.
    values: Vec<f64>,
    /// Fritsch-Carlson slopes at the nodes.
    slopes: Vec<f64>,
}

fn bump(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        (-1.0 / (x * (1.0 - x))).exp()
    }
}

fn build_table() -> TransitionTable {
    // Cumulative trapezoid on a 16x-refined grid. The bump vanishes with all
    // derivatives at both endpoints, so the trapezoid rule is far more
    // accurate here than its generic order suggests.
    let fine = (TABLE_LEN - 1) * SUBSTEPS;
    let h = 1.0 / fine as f64;
    let mut cumulative = Vec::with_capacity(TABLE_LEN);
    cumulative.push(0.0);
    let mut acc = 0.0;
    let mut prev = bump(0.0);
    for i in 1..=fine {
        let x = i as f64 * h;
        let cur = bump(x);
        acc += 0.5 * (prev + cur) * h;
        prev = cur;
        if i % SUBSTEPS == 0 {
            cumulative.push(acc);
        }
    }
    let total = *cumulative.last().unwrap();
    let values: Vec<f64> = cumulative.iter().map(|v| v / total).collect();

    // Fritsch-Carlson monotone slopes on the uniform grid.
    let n = values.len();
    let dx = 1.0 / (n - 1) as f64;
    let secants: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]) / dx).collect();
    let mut slopes = vec![0.0; n];
    slopes[0] = secants[0];
    slopes[n - 1] = secants[n - 2];
    for i in 1..n - 1 {
        if secants[i - 1] * secants[i] <= 0.0 {
            slopes[i] = 0.0;
        } else {
            slopes[i] = 0.5 * (secants[i - 1] + secants[i]);
        }
    }
    for i in 0..n - 1 {
        if secants[i] == 0.0 {
            slopes[i] = 0.0;
            slopes[i + 1] = 0.0;
            continue;
        }
        let alpha = slopes[i] / secants[i];
        let beta = slopes[i + 1] / secants[i];
        let s = alpha * alpha + beta * beta;
        if s > 9.0 {
            let tau = 3.0 / s.sqrt();
            slopes[i] = tau * alpha * secants[i];
            slopes[i + 1] = tau * beta * secants[i];
        }
    }
    TransitionTable { values, slopes }
}

fn table() -> &'static TransitionTable {
    static TABLE: OnceLock<TransitionTable> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

/// Normalized bump primitive `F(x) = ∫_0^x b / ∫_0^1 b` on [0,1],
/// evaluated by monotone cubic interpolation of the table.
fn transition(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let t = table();
    let n = t.values.len();
    let dx = 1.0 / (n - 1) as f64;
    let cell = ((x / dx) as usize).min(n - 2);
    let s = (x - cell as f64 * dx) / dx;
    let (y0, y1) = (t.values[cell], t.values[cell + 1]);
    let (m0, m1) = (t.slopes[cell] * dx, t.slopes[cell + 1] * dx);
    // Cubic Hermite basis.
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + s) * m0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * m1
}

/// Low-pass profile: φ(ρ) = 1 for ρ ≤ 1/2, 0 for ρ ≥ 1, smooth monotone
/// transition in between.
pub fn phi(rho: f64) -> f64 {
    if rho <= 0.5 {
        1.0
    } else if rho >= 1.0 {
        0.0
    } else {
        1.0 - transition(2.0 * rho - 1.0)
    }
}

/// Annulus profile: ψ(ρ) = φ(ρ/2) - φ(ρ), supported in [1/2, 2].
pub fn psi(rho: f64) -> f64 {
    phi(0.5 * rho) - phi(rho)
}

/// Dump `(ρ, φ(ρ), ψ(ρ))` rows over `[0, 2]` as CSV for audit.
pub fn dump_csv(out: &mut impl Write, samples: usize) -> std::io::Result<()> {
    writeln!(out, "rho,phi,psi")?;
    for i in 0..=samples {
        let rho = 2.0 * i as f64 / samples as f64;
        writeln!(out, "{rho},{},{}", phi(rho), psi(rho))?;
    }
    Ok(())
}
