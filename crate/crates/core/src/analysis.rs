//! Orbit-geometry diagnostics for one-step schemes.
//!
//! A rotation-form matrix `(a, -c; c, a)` scales the radius by
//! `rho = sqrt(a^2 + c^2)` and rotates by `theta = arctan(c/a)` each step,
//! so its points lie on a logarithmic spiral of pitch `k = ln(rho)/theta`.
//! General matrices are classified by their determinant, trace, and
//! discriminant into exact circles, ellipses, and spirals.

use num_complex::Complex64;
use thiserror::Error;

use crate::angles::unwrapped_angles;
use crate::generator::Trajectory;
use crate::schemes::OneStepMatrix;

/// Relative tolerance for the equality tests in [`classify`] and
/// [`spiral_analysis`]. Catalog coefficients at dyadic `h` are exact dyadic
/// rationals, so this never misfires while still catching formula errors.
pub const CLASSIFY_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("matrix is not rotation-form (needs d = a and b = -c; residuals {residual_d}, {residual_b})")]
    NotRotationForm { residual_d: f64, residual_b: f64 },
    #[error("rotation-form matrix must have a > 0, got a = {0}")]
    NonPositiveLeading(f64),
    #[error("zero per-step rotation (c = 0): the orbit is a ray and the spiral pitch is undefined")]
    DegenerateRotation,
    #[error("need at least 3 points for a pitch fit, got {0}")]
    TooFewPoints(usize),
    #[error("point {0} lies at the origin; polar angle is undefined")]
    PointAtOrigin(usize),
}

/// Per-step radial factor, rotation angle, and spiral pitch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralAnalysis {
    /// `sqrt(a^2 + c^2)`.
    pub rho: f64,
    /// `a^2 + c^2`, exact in `f64` for dyadic coefficients.
    pub rho_squared: f64,
    /// `arctan(c/a)`.
    pub theta: f64,
    /// `ln(rho)/theta`; zero for an exact scheme.
    pub k: f64,
}

/// Spiral diagnostics of a rotation-form matrix.
pub fn spiral_analysis(m: &OneStepMatrix) -> Result<SpiralAnalysis, AnalysisError> {
    let scale = matrix_scale(m);
    let residual_d = (m.d - m.a).abs();
    let residual_b = (m.b + m.c).abs();
    if residual_d > CLASSIFY_REL_TOL * scale || residual_b > CLASSIFY_REL_TOL * scale {
        return Err(AnalysisError::NotRotationForm { residual_d, residual_b });
    }
    if m.a <= 0.0 {
        return Err(AnalysisError::NonPositiveLeading(m.a));
    }
    if m.c == 0.0 {
        return Err(AnalysisError::DegenerateRotation);
    }
    let rho_squared = m.a * m.a + m.c * m.c;
    let rho = rho_squared.sqrt();
    let theta = (m.c / m.a).atan();
    Ok(SpiralAnalysis { rho, rho_squared, theta, k: rho.ln() / theta })
}

/// Roots of `lambda^2 - (a + d)*lambda + (ad - bc)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
}

pub fn eigen(m: &OneStepMatrix) -> EigenPair {
    let tr = m.trace();
    let det = m.det();
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        EigenPair {
            lambda1: Complex64::new((tr + s) / 2.0, 0.0),
            lambda2: Complex64::new((tr - s) / 2.0, 0.0),
        }
    } else {
        let s = (-disc).sqrt() / 2.0;
        EigenPair {
            lambda1: Complex64::new(tr / 2.0, s),
            lambda2: Complex64::new(tr / 2.0, -s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    ExactCircle,
    Ellipse,
    LogarithmicSpiral,
    EllipticalSpiral,
    Degenerate,
}

impl OrbitKind {
    pub fn name(self) -> &'static str {
        match self {
            OrbitKind::ExactCircle => "exact_circle",
            OrbitKind::Ellipse => "ellipse",
            OrbitKind::LogarithmicSpiral => "logarithmic_spiral",
            OrbitKind::EllipticalSpiral => "elliptical_spiral",
            OrbitKind::Degenerate => "degenerate",
        }
    }
}

/// The quantities the classification fires on, re-checkable from the matrix
/// alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitWitnesses {
    pub det: f64,
    pub trace: f64,
    /// `a - d`.
    pub symmetry_diag: f64,
    /// `b + c`.
    pub symmetry_skew: f64,
    /// `(a - d)^2 + 4bc`.
    pub discriminant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitClass {
    pub kind: OrbitKind,
    pub witnesses: OrbitWitnesses,
}

fn matrix_scale(m: &OneStepMatrix) -> f64 {
    1.0_f64.max(m.a.abs()).max(m.b.abs()).max(m.c.abs()).max(m.d.abs())
}

/// Classify the orbit of a one-step matrix:
///
/// - exact circle: `a = d`, `c = -b`, `det = 1`;
/// - ellipse: `|trace| < 2` and `det = 1` (bounded elliptic recurrence);
/// - logarithmic spiral: rotation form with `rho != 1`;
/// - elliptical spiral: complex eigenvalues, `(a - d)^2 + 4bc < 0`;
/// - degenerate otherwise.
///
/// Equality tests use [`CLASSIFY_REL_TOL`]; the inequalities are strict.
pub fn classify(m: &OneStepMatrix) -> OrbitClass {
    let scale = matrix_scale(m);
    let det = m.det();
    let trace = m.trace();
    let symmetry_diag = m.a - m.d;
    let symmetry_skew = m.b + m.c;
    let discriminant = symmetry_diag * symmetry_diag + 4.0 * m.b * m.c;
    let witnesses = OrbitWitnesses { det, trace, symmetry_diag, symmetry_skew, discriminant };

    let rotation_form = symmetry_diag.abs() <= CLASSIFY_REL_TOL * scale
        && symmetry_skew.abs() <= CLASSIFY_REL_TOL * scale;
    let unit_det = (det - 1.0).abs() <= CLASSIFY_REL_TOL * scale * scale;

    let kind = if rotation_form && unit_det {
        OrbitKind::ExactCircle
    } else if trace.abs() < 2.0 && unit_det {
        OrbitKind::Ellipse
    } else if rotation_form {
        OrbitKind::LogarithmicSpiral
    } else if discriminant < 0.0 {
        OrbitKind::EllipticalSpiral
    } else {
        OrbitKind::Degenerate
    };
    OrbitClass { kind, witnesses }
}

/// One solution of the third-order optimality system for
/// `a = 1 + a1*h + a2*h^2 + a3*h^3`, `c = h + c2*h^2 + c3*h^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThirdOrderSolution {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub c2: f64,
    pub c3: f64,
    /// Coefficient of `h^6` in `rho^2 - 1`, the leading radial error.
    pub leading_error: f64,
}

impl ThirdOrderSolution {
    /// Residuals of the five equations that zero the `h^1..h^5`
    /// coefficients of `rho^2 - 1 = a^2 + c^2 - 1`.
    pub fn residuals(&self) -> [f64; 5] {
        let Self { a1, a2, a3, c2, c3, .. } = *self;
        [
            2.0 * a1,
            2.0 * a2 + a1 * a1 + 1.0,
            a3 + a1 * a2 + c2,
            a2 * a2 + 2.0 * a1 * a3 + c2 * c2 + 2.0 * c3,
            a2 * a3 + c2 * c3,
        ]
    }
}

/// Bisect `f` on a bracketing interval down to f64 resolution.
fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    debug_assert!(flo == 0.0 || flo.signum() != f(hi).signum());
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Scalar root on a scan interval, assuming the function is monotone there.
fn solve_scalar(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    bisect(f, lo, hi)
}

/// Solve the five-equation optimality system for third-degree rotation-form
/// interpolators numerically, following its triangular structure: the first
/// two equations fix `a1` and `a2`, the next two express `a3` and `c3`
/// through `c2`, and the last equation becomes a scalar function of `c2`
/// whose real roots are found by sign-change scan and bisection.
///
/// Returns all real solutions ordered by `c2`.
pub fn solve_best_third_order() -> Vec<ThirdOrderSolution> {
    let a1 = solve_scalar(&|a1| 2.0 * a1, -16.0, 16.0);
    let a2 = solve_scalar(&move |a2| 2.0 * a2 + a1 * a1 + 1.0, -16.0, 16.0);
    let a3_of = move |c2: f64| solve_scalar(&move |a3| a3 + a1 * a2 + c2, -16.0, 16.0);
    let c3_of = move |c2: f64| {
        let a3 = a3_of(c2);
        solve_scalar(&move |c3| a2 * a2 + 2.0 * a1 * a3 + c2 * c2 + 2.0 * c3, -16.0, 16.0)
    };
    let last = move |c2: f64| a2 * a3_of(c2) + c2 * c3_of(c2);

    let mut roots = Vec::new();
    let n = 4000;
    let (lo, hi) = (-2.0, 2.0);
    let mut prev_x = lo;
    let mut prev_f = last(lo);
    for i in 1..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let fx = last(x);
        if fx == 0.0 {
            roots.push(x);
        } else if prev_f != 0.0 && fx.signum() != prev_f.signum() {
            roots.push(bisect(&last, prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);

    roots
        .into_iter()
        .map(|c2| {
            let a3 = a3_of(c2);
            let c3 = c3_of(c2);
            ThirdOrderSolution { a1, a2, a3, c2, c3, leading_error: a3 * a3 + c3 * c3 }
        })
        .collect()
}

/// Least-squares spiral pitch of a generated trajectory: the slope of
/// `ln r_n` against the unwrapped polar angle.
pub fn empirical_k(traj: &Trajectory) -> Result<f64, AnalysisError> {
    let points = &traj.points;
    if points.len() < 3 {
        return Err(AnalysisError::TooFewPoints(points.len()));
    }
    let angles = unwrapped_angles(points).map_err(AnalysisError::PointAtOrigin)?;
    let logs: Vec<f64> = points.iter().map(|&(x, y)| x.hypot(y).ln()).collect();

    let n = points.len() as f64;
    let mean_phi = angles.iter().sum::<f64>() / n;
    let mean_log = logs.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (phi, log_r) in angles.iter().zip(logs.iter()) {
        num += (phi - mean_phi) * (log_r - mean_log);
        den += (phi - mean_phi) * (phi - mean_phi);
    }
    if den == 0.0 {
        return Err(AnalysisError::DegenerateRotation);
    }
    Ok(num / den)
}
