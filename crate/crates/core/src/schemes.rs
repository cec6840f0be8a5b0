//! Catalog of DDA circle-generation schemes.
//!
//! Every one-step scheme is a 2x2 update matrix whose entries depend on the
//! step size `h`; the two-step explicit-midpoint family is parameterized by
//! a per-step coefficient `delta(h)`. Each catalog entry declares its own
//! validity range for `h` and the operation counts of a dyadic-step
//! (`h = 2^-m`) implementation.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::poly::HPoly;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    #[error("step size h = {0} must be positive and finite")]
    NonPositiveStep(f64),
    #[error("h = {h} is outside the validity range of {scheme}: requires h {} {bound}", if *.inclusive { "<=" } else { "<" })]
    StepOutOfRange {
        scheme: &'static str,
        h: f64,
        bound: f64,
        inclusive: bool,
    },
    #[error("{0} is a two-step scheme and has no 2x2 update matrix")]
    NotOneStep(&'static str),
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
    #[error("unknown delta form `{0}`")]
    UnknownDelta(String),
}

/// Arc-parameter advance per step, `h > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSize(f64);

impl StepSize {
    pub fn new(h: f64) -> Result<Self, SchemeError> {
        if !h.is_finite() || h <= 0.0 {
            return Err(SchemeError::NonPositiveStep(h));
        }
        Ok(Self(h))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for StepSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Entries of the 2x2 update matrix applied to `(x, y)` each step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneStepMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl OneStepMatrix {
    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// Rotation-form matrix `(a, -c; c, a)`: `b = -c` and `d = a` hold exactly.
    pub fn rotation_form(a: f64, c: f64) -> Self {
        Self { a, b: -c, c, d: a }
    }

    pub fn rotation(angle: f64) -> Self {
        Self::rotation_form(angle.cos(), angle.sin())
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        (self.a * x + self.b * y, self.c * x + self.d * y)
    }
}

/// The four entries of an update matrix as polynomials in `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPoly {
    pub a: HPoly,
    pub b: HPoly,
    pub c: HPoly,
    pub d: HPoly,
}

impl MatrixPoly {
    pub fn rotation_form(a: HPoly, c: HPoly) -> Self {
        let b = c.neg();
        let d = a.clone();
        Self { a, b, c, d }
    }

    pub fn eval(&self, h: f64) -> OneStepMatrix {
        OneStepMatrix {
            a: self.a.eval(h),
            b: self.b.eval(h),
            c: self.c.eval(h),
            d: self.d.eval(h),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    OneStep,
    TwoStep,
}

/// Operation counts per step for an implementation at dyadic `h = 2^-m`.
///
/// Schemes whose coefficients are sums of signed powers of two run on adds
/// and shifts alone (`muls = 0`); the rest need general multiplications.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostProfile {
    pub adds: u32,
    pub shifts: u32,
    pub muls: u32,
}

impl CostProfile {
    pub const fn new(adds: u32, shifts: u32, muls: u32) -> Self {
        Self { adds, shifts, muls }
    }
}

impl fmt::Display for CostProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} adds, {} shifts, {} muls", self.adds, self.shifts, self.muls)
    }
}

/// The scheme catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `a = 1, c = h`; the conventional DDA.
    FirstOrderSimultaneous,
    /// `a = 1 - h^2/2, c = h`.
    SecondOrderSimultaneous,
    /// `a = 1 - h^2/2, c = h - h^3/6`; Taylor truncation of the rotation.
    ThirdOrderSimultaneous,
    /// `a = 1 - h^2/2, c = h - h^3/4`.
    Matsushiro,
    /// `a = 1 - h^2/2, c = h - h^3/8`; smallest radial error among
    /// third-degree rotation-form interpolators.
    BestThirdOrder,
    /// `(1, -h; h, 1 - h^2)`; the "magic circle" generator.
    FirstOrderSequential,
    /// `(1 - h^2/2, -h; h, 1 - 3h^2/2)`.
    SecondOrderSequential,
    /// `(cos h, -sin h; sin h, cos h)`; exact up to round-off.
    ExactRotation,
    /// `a = (4 - h^2)/(4 + h^2), c = 4h/(4 + h^2)`; exact trajectory,
    /// multiplications every step.
    ImplicitMidpoint,
    /// Two-step scheme `x'' = x - 2*delta*y', y'' = y + 2*delta*x'`.
    ExplicitMidpoint,
}

impl Scheme {
    pub const ALL: [Scheme; 10] = [
        Scheme::FirstOrderSimultaneous,
        Scheme::SecondOrderSimultaneous,
        Scheme::ThirdOrderSimultaneous,
        Scheme::Matsushiro,
        Scheme::BestThirdOrder,
        Scheme::FirstOrderSequential,
        Scheme::SecondOrderSequential,
        Scheme::ExactRotation,
        Scheme::ImplicitMidpoint,
        Scheme::ExplicitMidpoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::FirstOrderSimultaneous => "first_order_simultaneous",
            Scheme::SecondOrderSimultaneous => "second_order_simultaneous",
            Scheme::ThirdOrderSimultaneous => "third_order_simultaneous",
            Scheme::Matsushiro => "matsushiro",
            Scheme::BestThirdOrder => "best_third_order",
            Scheme::FirstOrderSequential => "first_order_sequential",
            Scheme::SecondOrderSequential => "second_order_sequential",
            Scheme::ExactRotation => "exact_rotation",
            Scheme::ImplicitMidpoint => "implicit_midpoint",
            Scheme::ExplicitMidpoint => "explicit_midpoint",
        }
    }

    pub fn kind(self) -> SchemeKind {
        match self {
            Scheme::ExplicitMidpoint => SchemeKind::TwoStep,
            _ => SchemeKind::OneStep,
        }
    }

    /// Formal consistency order: the update matrix differs from the exact
    /// rotation by `O(h^(order+1))`. `None` for the exact rotation itself.
    pub fn formal_order(self) -> Option<u32> {
        match self {
            Scheme::FirstOrderSimultaneous
            | Scheme::FirstOrderSequential
            | Scheme::SecondOrderSequential => Some(1),
            Scheme::SecondOrderSimultaneous
            | Scheme::Matsushiro
            | Scheme::BestThirdOrder
            | Scheme::ImplicitMidpoint
            | Scheme::ExplicitMidpoint => Some(2),
            Scheme::ThirdOrderSimultaneous => Some(3),
            Scheme::ExactRotation => None,
        }
    }

    /// Upper bound of the declared validity range and whether it is
    /// attained. The polynomial spirals and the two-step initialization are
    /// declared for `h <= 1`; the sequential schemes keep their elliptic
    /// behaviour for `h < 2`; the two exact one-step schemes are unbounded.
    pub fn max_step(self) -> (f64, bool) {
        match self {
            Scheme::FirstOrderSimultaneous
            | Scheme::SecondOrderSimultaneous
            | Scheme::ThirdOrderSimultaneous
            | Scheme::Matsushiro
            | Scheme::BestThirdOrder
            | Scheme::ExplicitMidpoint => (1.0, true),
            Scheme::FirstOrderSequential | Scheme::SecondOrderSequential => (2.0, false),
            Scheme::ExactRotation | Scheme::ImplicitMidpoint => (f64::INFINITY, false),
        }
    }

    pub fn validate_step(self, h: StepSize) -> Result<(), SchemeError> {
        let (bound, inclusive) = self.max_step();
        let ok = if inclusive { h.get() <= bound } else { h.get() < bound };
        if ok {
            Ok(())
        } else {
            Err(SchemeError::StepOutOfRange {
                scheme: self.name(),
                h: h.get(),
                bound,
                inclusive,
            })
        }
    }

    /// Matrix entries as polynomials in `h`, when they are polynomials.
    pub fn matrix_polys(self) -> Option<MatrixPoly> {
        let rot = |a: &[f64], c: &[f64]| {
            Some(MatrixPoly::rotation_form(HPoly::new(a), HPoly::new(c)))
        };
        match self {
            Scheme::FirstOrderSimultaneous => rot(&[1.0], &[0.0, 1.0]),
            Scheme::SecondOrderSimultaneous => rot(&[1.0, 0.0, -0.5], &[0.0, 1.0]),
            Scheme::ThirdOrderSimultaneous => {
                rot(&[1.0, 0.0, -0.5], &[0.0, 1.0, 0.0, -1.0 / 6.0])
            }
            Scheme::Matsushiro => rot(&[1.0, 0.0, -0.5], &[0.0, 1.0, 0.0, -0.25]),
            Scheme::BestThirdOrder => rot(&[1.0, 0.0, -0.5], &[0.0, 1.0, 0.0, -0.125]),
            Scheme::FirstOrderSequential => Some(MatrixPoly {
                a: HPoly::new(&[1.0]),
                b: HPoly::new(&[0.0, -1.0]),
                c: HPoly::new(&[0.0, 1.0]),
                d: HPoly::new(&[1.0, 0.0, -1.0]),
            }),
            Scheme::SecondOrderSequential => Some(MatrixPoly {
                a: HPoly::new(&[1.0, 0.0, -0.5]),
                b: HPoly::new(&[0.0, -1.0]),
                c: HPoly::new(&[0.0, 1.0]),
                d: HPoly::new(&[1.0, 0.0, -1.5]),
            }),
            Scheme::ExactRotation | Scheme::ImplicitMidpoint | Scheme::ExplicitMidpoint => None,
        }
    }

    /// Evaluate the update matrix at `h`. Errors if `h` is outside the
    /// scheme's validity range or the scheme is two-step.
    pub fn matrix(self, h: StepSize) -> Result<OneStepMatrix, SchemeError> {
        self.validate_step(h)?;
        let hv = h.get();
        match self {
            Scheme::ExplicitMidpoint => Err(SchemeError::NotOneStep(self.name())),
            Scheme::ExactRotation => Ok(OneStepMatrix::rotation(hv)),
            Scheme::ImplicitMidpoint => {
                let den = 4.0 + hv * hv;
                Ok(OneStepMatrix::rotation_form((4.0 - hv * hv) / den, 4.0 * hv / den))
            }
            _ => Ok(self.matrix_polys().expect("polynomial scheme").eval(hv)),
        }
    }

    /// Per-step operation counts at dyadic `h = 2^-m`. These are the counts
    /// the instrumented fixed-point engine realizes for the shift-add
    /// schemes; schemes with non-dyadic coefficients are charged the generic
    /// four-multiply matrix step. The two-step entry is costed with the
    /// plain `delta = h`; see [`DeltaSpec::two_step_cost`] for the variants.
    pub fn cost_profile(self) -> CostProfile {
        match self {
            Scheme::FirstOrderSimultaneous => CostProfile::new(2, 2, 0),
            Scheme::SecondOrderSimultaneous => CostProfile::new(4, 4, 0),
            Scheme::ThirdOrderSimultaneous => CostProfile::new(2, 0, 4),
            Scheme::Matsushiro => CostProfile::new(6, 6, 0),
            Scheme::BestThirdOrder => CostProfile::new(6, 6, 0),
            Scheme::FirstOrderSequential => CostProfile::new(3, 3, 0),
            Scheme::SecondOrderSequential => CostProfile::new(5, 5, 0),
            Scheme::ExactRotation => CostProfile::new(2, 0, 4),
            Scheme::ImplicitMidpoint => CostProfile::new(2, 0, 4),
            Scheme::ExplicitMidpoint => CostProfile::new(2, 2, 0),
        }
    }

    pub fn is_shift_add(self) -> bool {
        self.cost_profile().muls == 0
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        let scheme = match norm.as_str() {
            "first_order_simultaneous" | "first_order" => Scheme::FirstOrderSimultaneous,
            "second_order_simultaneous" | "second_order" => Scheme::SecondOrderSimultaneous,
            "third_order_simultaneous" | "third_order" => Scheme::ThirdOrderSimultaneous,
            "matsushiro" => Scheme::Matsushiro,
            "best_third_order" => Scheme::BestThirdOrder,
            "first_order_sequential" | "magic_circle" => Scheme::FirstOrderSequential,
            "second_order_sequential" => Scheme::SecondOrderSequential,
            "exact_rotation" => Scheme::ExactRotation,
            "implicit_midpoint" => Scheme::ImplicitMidpoint,
            "explicit_midpoint" => Scheme::ExplicitMidpoint,
            _ => return Err(SchemeError::UnknownScheme(s.to_string())),
        };
        Ok(scheme)
    }
}

/// All catalog entries, in a fixed order.
pub fn catalog() -> &'static [Scheme; 10] {
    &Scheme::ALL
}

/// Sequential construction: feed the freshly updated `x` back into the `y`
/// update of a rotation-form scheme `(a, -c; c, a)`, giving the second row
/// `(a*c, a - c^2)`. The `a*c` entry is truncated to the polynomial order of
/// the source scheme; the `a - c^2` entry is kept in full (the first-order
/// case keeps its `1 - h^2`, which makes the determinant exactly `a^2`).
pub fn sequentialize(a: &HPoly, c: &HPoly, order: usize) -> MatrixPoly {
    MatrixPoly {
        a: a.clone(),
        b: c.neg(),
        c: a.mul(c).truncated(order),
        d: a.sub(&c.mul(c)),
    }
}

/// Parameterizations of the per-step coefficient of the two-step family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaSpec {
    /// `delta = h`; exact trajectory, modified period.
    Identity,
    /// `delta = sin h`; exact trajectory and exact period.
    ExactSin,
    /// `delta = h - h^3/6`; best third-order period accuracy.
    Taylor3,
    /// `delta_N = h - h^3 * sum_{k=0..N} 2^(-3-2k)`, the dyadic partial sums
    /// of `1/6`; shift-add implementable for any `N`.
    ShiftSeries(u32),
}

impl DeltaSpec {
    /// Evaluate `delta(h)`. The shift-series form uses only dyadic partial
    /// sums, so it is exact in `f64` whenever `h` is dyadic.
    pub fn evaluate(&self, h: StepSize) -> f64 {
        let hv = h.get();
        match self {
            DeltaSpec::Identity => hv,
            DeltaSpec::ExactSin => hv.sin(),
            DeltaSpec::Taylor3 => hv - hv * hv * hv / 6.0,
            DeltaSpec::ShiftSeries(n) => {
                let mut sum = 0.0;
                for k in 0..=*n {
                    sum += (2.0_f64).powi(-3 - 2 * k as i32);
                }
                hv - hv * hv * hv * sum
            }
        }
    }

    /// Per-step cost of the two-step recurrence under this parameterization
    /// at dyadic `h`. The sine and Taylor forms need one multiplication per
    /// component; the shift-series form expands `2*delta_N` into a cascade
    /// of `N + 2` shifted terms per component.
    pub fn two_step_cost(&self) -> CostProfile {
        match self {
            DeltaSpec::Identity => CostProfile::new(2, 2, 0),
            DeltaSpec::ExactSin | DeltaSpec::Taylor3 => CostProfile::new(2, 0, 2),
            DeltaSpec::ShiftSeries(n) => CostProfile::new(2 * (n + 2), 2 * (n + 2), 0),
        }
    }

    pub fn name(&self) -> String {
        match self {
            DeltaSpec::Identity => "identity".to_string(),
            DeltaSpec::ExactSin => "exact_sin".to_string(),
            DeltaSpec::Taylor3 => "taylor3".to_string(),
            DeltaSpec::ShiftSeries(n) => format!("shift_series:{n}"),
        }
    }
}

impl FromStr for DeltaSpec {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        if let Some(rest) = norm
            .strip_prefix("shift_series:")
            .or_else(|| norm.strip_prefix("delta_n:"))
        {
            let n = rest
                .parse::<u32>()
                .map_err(|_| SchemeError::UnknownDelta(s.to_string()))?;
            return Ok(DeltaSpec::ShiftSeries(n));
        }
        match norm.as_str() {
            "identity" | "h" => Ok(DeltaSpec::Identity),
            "exact_sin" | "sin" => Ok(DeltaSpec::ExactSin),
            "taylor3" => Ok(DeltaSpec::Taylor3),
            _ => Err(SchemeError::UnknownDelta(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(v: f64) -> StepSize {
        StepSize::new(v).unwrap()
    }

    #[test]
    fn catalog_is_complete() {
        let names: Vec<_> = catalog().iter().map(|s| s.name()).collect();
        assert_eq!(
            names,
            [
                "first_order_simultaneous",
                "second_order_simultaneous",
                "third_order_simultaneous",
                "matsushiro",
                "best_third_order",
                "first_order_sequential",
                "second_order_sequential",
                "exact_rotation",
                "implicit_midpoint",
                "explicit_midpoint",
            ]
        );
    }

    #[test]
    fn matsushiro_coefficients() {
        let m = Scheme::Matsushiro.matrix(h(0.5)).unwrap();
        assert_eq!(m.a, 1.0 - 0.125);
        assert_eq!(m.c, 0.5 - 0.125 / 4.0);
        assert_eq!(m.b, -m.c);
        assert_eq!(m.d, m.a);
    }

    #[test]
    fn best_third_order_coefficients() {
        let m = Scheme::BestThirdOrder.matrix(h(0.5)).unwrap();
        assert_eq!(m.c, 0.5 - 0.125 / 8.0);
    }

    #[test]
    fn consistency_limit_is_identity() {
        let tiny = h(2.0_f64.powi(-20));
        for scheme in catalog() {
            if scheme.kind() == SchemeKind::TwoStep {
                continue;
            }
            let m = scheme.matrix(tiny).unwrap();
            let dist = (m.a - 1.0)
                .abs()
                .max((m.d - 1.0).abs())
                .max(m.b.abs())
                .max(m.c.abs());
            assert!(dist <= 2.0 * tiny.get(), "{scheme}: {dist}");
        }
    }

    #[test]
    fn first_order_matrix_example() {
        let m = Scheme::FirstOrderSimultaneous.matrix(h(0.5)).unwrap();
        assert_eq!((m.a, m.b, m.c, m.d), (1.0, -0.5, 0.5, 1.0));
    }

    #[test]
    fn implicit_midpoint_quarter_turn() {
        let m = Scheme::ImplicitMidpoint.matrix(h(2.0)).unwrap();
        assert_eq!(m.a, 0.0);
        assert_eq!(m.c, 1.0);
    }

    #[test]
    fn magic_circle_matrix_example() {
        let m = Scheme::FirstOrderSequential.matrix(h(0.5)).unwrap();
        assert_eq!((m.a, m.b, m.c, m.d), (1.0, -0.5, 0.5, 0.75));
    }

    #[test]
    fn out_of_range_step_is_rejected() {
        let err = Scheme::FirstOrderSimultaneous.matrix(h(1.5)).unwrap_err();
        match err {
            SchemeError::StepOutOfRange { bound, inclusive, .. } => {
                assert_eq!(bound, 1.0);
                assert!(inclusive);
            }
            other => panic!("unexpected error {other:?}"),
        }
        // boundary: sequential schemes are open at h = 2
        assert!(Scheme::SecondOrderSequential.matrix(h(2.0)).is_err());
        assert!(Scheme::SecondOrderSequential.matrix(h(1.999)).is_ok());
    }

    #[test]
    fn two_step_has_no_matrix() {
        assert!(matches!(
            Scheme::ExplicitMidpoint.matrix(h(0.5)),
            Err(SchemeError::NotOneStep(_))
        ));
    }

    #[test]
    fn consistency_order_error_ratios() {
        // || A(h) - R(h) ||_inf should scale as h^(order+1): halving h
        // divides the error by 2^(order+1), within 10%.
        let norm = |scheme: Scheme, hv: f64| {
            let m = scheme.matrix(h(hv)).unwrap();
            let r = OneStepMatrix::rotation(hv);
            (m.a - r.a)
                .abs()
                .max((m.b - r.b).abs())
                .max((m.c - r.c).abs())
                .max((m.d - r.d).abs())
        };
        for scheme in catalog() {
            let Some(order) = scheme.formal_order() else { continue };
            if scheme.kind() == SchemeKind::TwoStep {
                continue;
            }
            let h0 = 2.0_f64.powi(-4);
            let ratio = norm(*scheme, h0) / norm(*scheme, h0 / 2.0);
            let expected = 2.0_f64.powi(order as i32 + 1);
            assert!(
                (ratio / expected - 1.0).abs() < 0.10,
                "{scheme}: ratio {ratio}, expected {expected}"
            );
        }
    }

    #[test]
    fn sequentialize_second_order() {
        let a = HPoly::new(&[1.0, 0.0, -0.5]);
        let c = HPoly::new(&[0.0, 1.0]);
        let m = sequentialize(&a, &c, 2);
        assert_eq!(m.c.coeffs(), &[0.0, 1.0]);
        assert_eq!(m.d.coeffs(), &[1.0, 0.0, -1.5]);
        assert_eq!(m, Scheme::SecondOrderSequential.matrix_polys().unwrap());
    }

    #[test]
    fn sequentialize_first_order_is_magic_circle() {
        let m = sequentialize(&HPoly::new(&[1.0]), &HPoly::new(&[0.0, 1.0]), 1);
        assert_eq!(m, Scheme::FirstOrderSequential.matrix_polys().unwrap());
    }

    #[test]
    fn sequentialize_zero_rotation_is_identity() {
        let m = sequentialize(&HPoly::one(), &HPoly::zero(), 3);
        let e = m.eval(0.7);
        assert_eq!((e.a, e.b, e.c, e.d), (1.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn delta_examples() {
        assert!((DeltaSpec::ExactSin.evaluate(h(std::f64::consts::PI / 6.0)) - 0.5).abs() < 1e-15);
        assert_eq!(DeltaSpec::ShiftSeries(0).evaluate(h(0.5)), 0.484375);
        assert!((DeltaSpec::Taylor3.evaluate(h(0.5)) - (0.5 - 0.125 / 6.0)).abs() < 1e-16);
    }

    #[test]
    fn shift_series_matches_best_third_order_angle() {
        // delta_0 = h - h^3/8 is exactly the c coefficient of the best
        // third-order one-step interpolator.
        for hv in [0.5, 0.25, 0.0625] {
            let c = Scheme::BestThirdOrder.matrix(h(hv)).unwrap().c;
            assert_eq!(DeltaSpec::ShiftSeries(0).evaluate(h(hv)), c);
        }
    }

    #[test]
    fn shift_series_decreases_to_taylor3_with_tail_bound() {
        for hv in [0.25, 0.5, 0.0625] {
            let target = DeltaSpec::Taylor3.evaluate(h(hv));
            let mut prev = f64::INFINITY;
            for n in 0..=8u32 {
                let d = DeltaSpec::ShiftSeries(n).evaluate(h(hv));
                assert!(d < prev, "delta_N not strictly decreasing at N={n}");
                let bound = hv.powi(3) * 2.0_f64.powi(-2 * n as i32 - 5) * (4.0 / 3.0);
                assert!(
                    (d - target).abs() <= bound * (1.0 + 1e-12) + 1e-18,
                    "tail bound violated at N={n}, h={hv}"
                );
                prev = d;
            }
        }
    }

    #[test]
    fn shift_add_schemes_declare_zero_muls() {
        for scheme in [
            Scheme::FirstOrderSimultaneous,
            Scheme::Matsushiro,
            Scheme::BestThirdOrder,
            Scheme::ExplicitMidpoint,
        ] {
            assert_eq!(scheme.cost_profile().muls, 0, "{scheme}");
        }
        assert_eq!(DeltaSpec::ShiftSeries(3).two_step_cost().muls, 0);
        assert!(!Scheme::ExactRotation.is_shift_add());
        assert!(!Scheme::ImplicitMidpoint.is_shift_add());
        assert!(!Scheme::ThirdOrderSimultaneous.is_shift_add());
    }

    #[test]
    fn scheme_names_parse_with_aliases() {
        assert_eq!("first-order".parse::<Scheme>().unwrap(), Scheme::FirstOrderSimultaneous);
        assert_eq!("magic-circle".parse::<Scheme>().unwrap(), Scheme::FirstOrderSequential);
        assert_eq!("explicit-midpoint".parse::<Scheme>().unwrap(), Scheme::ExplicitMidpoint);
        assert!("bresenham".parse::<Scheme>().is_err());
        assert_eq!("delta-n:2".parse::<DeltaSpec>().unwrap(), DeltaSpec::ShiftSeries(2));
        assert_eq!("sin".parse::<DeltaSpec>().unwrap(), DeltaSpec::ExactSin);
    }

    #[test]
    fn step_size_must_be_positive() {
        assert!(StepSize::new(0.0).is_err());
        assert!(StepSize::new(-0.5).is_err());
        assert!(StepSize::new(f64::NAN).is_err());
    }
}
