//! Quantitative diagnostics: radial drift, period measurement, and the
//! conserved quadratic-form triple of the two-step family.
//!
//! For consecutive points of the two-step recurrence the triple
//! `xi_n = (x_n^2 + y_n^2, x_{n+1}^2 + y_{n+1}^2, x_n*y_{n+1} - x_{n+1}*y_n)`
//! evolves linearly, `xi_{n+1} = B * xi_n`, with a 3x3 matrix `B` whose
//! eigenvalues all lie on the unit circle. On-circle initialization makes
//! `xi` a fixed point of `B`, which is why the trajectory stays on the
//! circle up to round-off.

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

use crate::angles::unwrapped_angles;
use crate::generator::{Trajectory, TrajectoryState};
use crate::schemes::StepSize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("trajectory completes less than one revolution ({0} of {TAU} radians)")]
    LessThanOneRevolution(f64),
    #[error("point {0} lies at the origin; polar angle is undefined")]
    PointAtOrigin(usize),
    #[error("nominal radius must be positive, got r = {0}")]
    NonPositiveRadius(f64),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

/// The conserved triple evaluated on one pair of consecutive points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralState {
    /// `x_n^2 + y_n^2`.
    pub q0: f64,
    /// `x_{n+1}^2 + y_{n+1}^2`.
    pub q1: f64,
    /// `x_n * y_{n+1} - x_{n+1} * y_n`.
    pub w: f64,
}

impl IntegralState {
    pub fn from_points(p0: (f64, f64), p1: (f64, f64)) -> Self {
        Self {
            q0: p0.0 * p0.0 + p0.1 * p0.1,
            q1: p1.0 * p1.0 + p1.1 * p1.1,
            w: p0.0 * p1.1 - p1.0 * p0.1,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.q0, self.q1, self.w]
    }
}

/// The triple from a two-step state (previous point, current point).
pub fn xi(s: &TrajectoryState) -> IntegralState {
    IntegralState::from_points((s.x_prev, s.y_prev), (s.x, s.y))
}

/// The 3x3 evolution matrix of the triple and its spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct XiEvolution {
    pub b: [[f64; 3]; 3],
    /// `{1, 2*delta^2 - 1 +/- 2*delta*sqrt(delta^2 - 1)}`; a complex
    /// conjugate pair of unit modulus for `|delta| < 1`.
    pub eigenvalues: [Complex64; 3],
}

/// Evolution matrix for per-step coefficient `delta`.
pub fn xi_step_matrix(delta: f64) -> XiEvolution {
    let b = [
        [0.0, 1.0, 0.0],
        [1.0, 4.0 * delta * delta, -4.0 * delta],
        [0.0, 2.0 * delta, -1.0],
    ];
    let re = 2.0 * delta * delta - 1.0;
    let disc = delta * delta - 1.0;
    let eigenvalues = if disc >= 0.0 {
        let s = 2.0 * delta * disc.sqrt();
        [
            Complex64::new(1.0, 0.0),
            Complex64::new(re + s, 0.0),
            Complex64::new(re - s, 0.0),
        ]
    } else {
        let s = 2.0 * delta * (-disc).sqrt();
        [
            Complex64::new(1.0, 0.0),
            Complex64::new(re, s),
            Complex64::new(re, -s),
        ]
    };
    XiEvolution { b, eigenvalues }
}

pub fn mat3_mul_vec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (row, slot) in m.iter().zip(out.iter_mut()) {
        *slot = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
    }
    out
}

/// Max over the trajectory of `|| xi_n - r^2 * (1, 1, delta) ||_inf`.
pub fn check_xi_conservation(traj: &Trajectory, delta: f64) -> f64 {
    let r2 = traj.r * traj.r;
    let target = [r2, r2, delta * r2];
    let mut max_dev: f64 = 0.0;
    for pair in traj.points.windows(2) {
        let state = IntegralState::from_points(pair[0], pair[1]).as_array();
        for (s, t) in state.iter().zip(target.iter()) {
            max_dev = max_dev.max((s - t).abs());
        }
    }
    max_dev
}

/// Measured and analytic period of a circular interpolator, in units of the
/// arc parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodReport {
    /// `2*pi*h / arcsin(delta)` for per-step sine `delta`.
    pub t_analytic: f64,
    /// `h` times the interpolated number of steps per revolution.
    pub t_measured: f64,
    /// `t_measured - 2*pi`.
    pub period_error: f64,
}

/// Measure the arc-parameter advance over one revolution by unwrapping the
/// polar angle and linearly interpolating the crossing of `2*pi`.
///
/// `per_step_sine` is the sine of the true per-step rotation: `delta` for
/// the two-step family, `sin(theta)` for a one-step scheme.
pub fn measure_period(
    traj: &Trajectory,
    h: StepSize,
    per_step_sine: f64,
) -> Result<PeriodReport, MetricsError> {
    if traj.points.len() < 2 {
        return Err(MetricsError::TooFewPoints { needed: 2, got: traj.points.len() });
    }
    let angles = unwrapped_angles(&traj.points).map_err(MetricsError::PointAtOrigin)?;
    let start = angles[0];
    let mut crossing = None;
    for i in 1..angles.len() {
        let prev = angles[i - 1] - start;
        let cur = angles[i] - start;
        if cur >= TAU {
            let frac = (TAU - prev) / (cur - prev);
            crossing = Some((i - 1) as f64 + frac);
            break;
        }
    }
    let steps_per_rev = crossing
        .ok_or(MetricsError::LessThanOneRevolution(angles[angles.len() - 1] - start))?;
    let t_measured = h.get() * steps_per_rev;
    let t_analytic = TAU * h.get() / per_step_sine.asin();
    Ok(PeriodReport { t_analytic, t_measured, period_error: t_measured - TAU })
}

/// Radial deviation summary of a trajectory, relative to its nominal radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialDrift {
    pub max_abs: f64,
    pub rms: f64,
}

pub fn radial_drift(traj: &Trajectory) -> Result<RadialDrift, MetricsError> {
    if traj.r <= 0.0 {
        return Err(MetricsError::NonPositiveRadius(traj.r));
    }
    if traj.points.is_empty() {
        return Err(MetricsError::TooFewPoints { needed: 1, got: 0 });
    }
    let mut max_abs: f64 = 0.0;
    let mut sum_sq = 0.0;
    for &(x, y) in &traj.points {
        let rel = (x.hypot(y) - traj.r) / traj.r;
        max_abs = max_abs.max(rel.abs());
        sum_sq += rel * rel;
    }
    Ok(RadialDrift { max_abs, rms: (sum_sq / traj.points.len() as f64).sqrt() })
}

/// Eigenbasis `(f1, f2, f3)` of the evolution matrix as a complex 3x3
/// matrix, with its Frobenius condition number. Used to bound how far a
/// perturbed triple can wander: components along the eigenvectors keep
/// their magnitude because every eigenvalue has unit modulus.
pub fn xi_eigenbasis(delta: f64) -> ([[Complex64; 3]; 3], f64) {
    let evo = xi_step_matrix(delta);
    let mut v = [[Complex64::new(0.0, 0.0); 3]; 3];
    // fixed point (1, 1, delta)
    v[0][0] = Complex64::new(1.0, 0.0);
    v[1][0] = Complex64::new(1.0, 0.0);
    v[2][0] = Complex64::new(delta, 0.0);
    // null-space vectors (1, lambda, 2*delta*lambda/(1 + lambda)) of B - lambda I
    for (col, lambda) in [(1, evo.eigenvalues[1]), (2, evo.eigenvalues[2])] {
        v[0][col] = Complex64::new(1.0, 0.0);
        v[1][col] = lambda;
        v[2][col] = 2.0 * delta * lambda / (Complex64::new(1.0, 0.0) + lambda);
    }
    let inv = invert3(&v);
    let frob = |m: &[[Complex64; 3]; 3]| {
        m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    };
    (v, frob(&v) * frob(&inv))
}

fn invert3(m: &[[Complex64; 3]; 3]) -> [[Complex64; 3]; 3] {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let cof = |r1: usize, c1: usize, r2: usize, c2: usize| m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
    let adj = [
        [cof(1, 1, 2, 2), -cof(0, 1, 2, 2), cof(0, 1, 1, 2)],
        [-cof(1, 0, 2, 2), cof(0, 0, 2, 2), -cof(0, 0, 1, 2)],
        [cof(1, 0, 2, 1), -cof(0, 0, 2, 1), cof(0, 0, 1, 1)],
    ];
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = adj[i][j] / det;
        }
    }
    out
}
