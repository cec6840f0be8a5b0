//! Floating-point trajectory generation.
//!
//! One-step schemes start from `(r, 0)` and apply their update matrix; the
//! two-step family needs two starting points, produced by
//! [`init_two_step`] so that the conserved quantities take their on-circle
//! values from step zero.

use thiserror::Error;

use crate::schemes::{DeltaSpec, OneStepMatrix, Scheme, SchemeError, SchemeKind, StepSize};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("two-step initialization requires 0 < delta <= 1, got delta = {0}")]
    DeltaOutOfRange(f64),
    #[error("radius must be nonnegative, got r = {0}")]
    NegativeRadius(f64),
    #[error("scheme {0} is two-step and needs a delta parameterization")]
    MissingDelta(&'static str),
    #[error("scheme {0} is one-step and takes no delta parameterization")]
    UnexpectedDelta(&'static str),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// Current point of a run, plus the previous point for two-step schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    pub x: f64,
    pub y: f64,
    pub x_prev: f64,
    pub y_prev: f64,
    /// Step index of `(x, y)`.
    pub n: u64,
}

impl TrajectoryState {
    /// Starting state for a one-step scheme.
    pub fn start(x: f64, y: f64) -> Self {
        Self { x, y, x_prev: x, y_prev: y, n: 0 }
    }

    /// Starting state for a two-step scheme: `(x0, y0)` then `(x1, y1)`.
    pub fn from_pair(p0: (f64, f64), p1: (f64, f64)) -> Self {
        Self { x: p1.0, y: p1.1, x_prev: p0.0, y_prev: p0.1, n: 1 }
    }
}

/// A generated point sequence with its run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<(f64, f64)>,
    pub scheme: &'static str,
    pub h: f64,
    /// Nominal radius.
    pub r: f64,
    /// Evaluated per-step coefficient, for two-step runs.
    pub delta: Option<f64>,
}

/// Starting points for a run of nominal radius `r`. `x1, y1` are only
/// meaningful for two-step schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialConditions {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub r: f64,
}

/// Reference point of the circle of radius `r` at the given angle.
pub fn exact_point(r: f64, angle: f64) -> (f64, f64) {
    (r * angle.cos(), r * angle.sin())
}

/// Two-step starting points `(r, 0)` and `(r*sqrt(1 - delta^2), delta*r)`.
///
/// These satisfy the three on-circle conditions
/// `x0^2 + y0^2 = r^2`, `x1^2 + y1^2 = r^2`, `x0*y1 - x1*y0 = delta*r^2`
/// that pin the conserved triple to its circle values.
pub fn init_two_step(r: f64, delta: f64) -> Result<InitialConditions, GeneratorError> {
    if r < 0.0 || !r.is_finite() {
        return Err(GeneratorError::NegativeRadius(r));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(GeneratorError::DeltaOutOfRange(delta));
    }
    Ok(InitialConditions {
        x0: r,
        y0: 0.0,
        x1: r * (1.0 - delta * delta).sqrt(),
        y1: delta * r,
        r,
    })
}

/// One step of a 2x2 scheme.
pub fn step_one(m: &OneStepMatrix, s: &TrajectoryState) -> TrajectoryState {
    let (x, y) = m.apply(s.x, s.y);
    TrajectoryState { x, y, x_prev: s.x, y_prev: s.y, n: s.n + 1 }
}

/// One step of the two-step recurrence:
/// `x'' = x_prev - 2*delta*y`, `y'' = y_prev + 2*delta*x`.
pub fn step_two(delta: f64, s: &TrajectoryState) -> TrajectoryState {
    let two_delta = 2.0 * delta;
    TrajectoryState {
        x: s.x_prev - two_delta * s.y,
        y: s.y_prev + two_delta * s.x,
        x_prev: s.x,
        y_prev: s.y,
        n: s.n + 1,
    }
}

/// Generate a trajectory of `steps` recurrence applications. One-step runs
/// return `steps + 1` points; two-step runs include both starting points and
/// return `steps + 2`.
pub fn generate(
    scheme: Scheme,
    h: StepSize,
    delta: Option<&DeltaSpec>,
    r: f64,
    steps: usize,
) -> Result<Trajectory, GeneratorError> {
    if r < 0.0 || !r.is_finite() {
        return Err(GeneratorError::NegativeRadius(r));
    }
    match scheme.kind() {
        SchemeKind::OneStep => {
            if delta.is_some() {
                return Err(GeneratorError::UnexpectedDelta(scheme.name()));
            }
            let m = scheme.matrix(h)?;
            let mut state = TrajectoryState::start(r, 0.0);
            let mut points = Vec::with_capacity(steps + 1);
            points.push((state.x, state.y));
            for _ in 0..steps {
                state = step_one(&m, &state);
                points.push((state.x, state.y));
            }
            Ok(Trajectory { points, scheme: scheme.name(), h: h.get(), r, delta: None })
        }
        SchemeKind::TwoStep => {
            let spec = delta.ok_or(GeneratorError::MissingDelta(scheme.name()))?;
            scheme.validate_step(h)?;
            let d = spec.evaluate(h);
            let init = init_two_step(r, d)?;
            let mut state = TrajectoryState::from_pair((init.x0, init.y0), (init.x1, init.y1));
            let mut points = Vec::with_capacity(steps + 2);
            points.push((init.x0, init.y0));
            points.push((init.x1, init.y1));
            for _ in 0..steps {
                state = step_two(d, &state);
                points.push((state.x, state.y));
            }
            Ok(Trajectory { points, scheme: scheme.name(), h: h.get(), r, delta: Some(d) })
        }
    }
}

/// The two-step recurrence rewritten as one step on the stacked vector
/// `(x_{n+1}, y_{n+1}, x_n, y_n)`. Verification path: iterating this matrix
/// reproduces [`step_two`] bit for bit when both use plain (unfused) f64
/// arithmetic in the same order.
pub fn companion_matrix(delta: f64) -> [[f64; 4]; 4] {
    let td = 2.0 * delta;
    [
        [0.0, -td, 1.0, 0.0],
        [td, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ]
}

pub fn companion_step(m: &[[f64; 4]; 4], v: [f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (row, slot) in m.iter().zip(out.iter_mut()) {
        let mut acc = 0.0;
        for (mij, vj) in row.iter().zip(v.iter()) {
            acc += mij * vj;
        }
        *slot = acc;
    }
    out
}
