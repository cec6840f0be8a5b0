//! Bit-exact integer shift-add execution.
//!
//! With a dyadic step `h = 2^-m` and radius `r = 2^N`, every coefficient of
//! the shift-add schemes is a sum of signed powers of two, so a step is a
//! handful of integer additions and arithmetic shifts. The engine carries
//! `frac_bits` guard bits below the device LSB, counts every operation it
//! performs, and checks (rather than wraps) 64-bit overflow.
//!
//! Shifts are arithmetic right shifts on two's-complement integers,
//! truncating toward negative infinity; shifted-out bits are the only
//! rounding a step performs.

use thiserror::Error;

use crate::schemes::{CostProfile, DeltaSpec, Scheme, SchemeKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FixedPointError {
    #[error("step exponent m must be >= 1 (h = 2^-m <= 1/2), got m = {0}")]
    StepExponent(u32),
    #[error("radius exponent must be >= 1, got {0}")]
    RadiusExponent(u32),
    #[error("series term count must be in 1..=64, got {0}")]
    SeriesTerms(u32),
    #[error("radius_exp + frac_bits = {0} exceeds the 60-bit range of the 64-bit engine")]
    WordWidth(u32),
    #[error("h*r underflows the representation: radius_exp + frac_bits must be >= m")]
    ScaleUnderflow,
    #[error("{0} is not shift-add implementable")]
    NotShiftAdd(&'static str),
    #[error("delta form `{0}` is not shift-add implementable")]
    DeltaNotShiftAdd(String),
    #[error("integer overflow at step {step}")]
    Overflow { step: u64 },
}

/// Dyadic configuration of the engine: `h = 2^-m`, `r = 2^radius_exp`, with
/// `frac_bits` sub-LSB guard bits and `series_terms` kept terms of the
/// `sqrt(1 - h^2)` initialization series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedPointConfig {
    pub m: u32,
    pub radius_exp: u32,
    pub frac_bits: u32,
    pub series_terms: u32,
}

impl FixedPointConfig {
    pub fn new(
        m: u32,
        radius_exp: u32,
        frac_bits: u32,
        series_terms: u32,
    ) -> Result<Self, FixedPointError> {
        if m < 1 {
            return Err(FixedPointError::StepExponent(m));
        }
        if radius_exp < 1 {
            return Err(FixedPointError::RadiusExponent(radius_exp));
        }
        if !(1..=64).contains(&series_terms) {
            return Err(FixedPointError::SeriesTerms(series_terms));
        }
        let width = radius_exp + frac_bits;
        if width > 60 {
            return Err(FixedPointError::WordWidth(width));
        }
        if width < m {
            return Err(FixedPointError::ScaleUnderflow);
        }
        Ok(Self { m, radius_exp, frac_bits, series_terms })
    }

    /// Guard bits that keep the first dropped initialization term below half
    /// a sub-LSB.
    pub fn default_frac_bits(m: u32) -> u32 {
        2 * m + 6
    }

    pub fn h(&self) -> f64 {
        (2.0_f64).powi(-(self.m as i32))
    }

    pub fn r(&self) -> f64 {
        (2.0_f64).powi(self.radius_exp as i32)
    }

    /// Engine units per device LSB.
    pub fn scale(&self) -> f64 {
        (2.0_f64).powi(self.frac_bits as i32)
    }

    /// Convert an engine integer to device LSBs.
    pub fn to_device(&self, v: i64) -> f64 {
        v as f64 / self.scale()
    }
}

/// Engine state in units of `2^-frac_bits` device LSBs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedPointState {
    pub x: i64,
    pub y: i64,
    pub x_prev: i64,
    pub y_prev: i64,
    pub n: u64,
}

/// Per-engine instrumentation of executed operations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub adds: u64,
    pub shifts: u64,
    pub muls: u64,
}

fn catalan(n: u32) -> u128 {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// Exponents (against the engine unit) of the correction terms of
/// `r * sqrt(1 - h^2) = 2^(N+f) * (1 - c1*h^2 - c2*h^4 - ...)`, in series
/// order. The Taylor coefficients of `sqrt(1 - u)` are dyadic,
/// `c_j = Catalan(j-1) * 2^-(2j-1)`, so each one splits into exact powers
/// of two; a negative exponent means the term underflows the representation.
pub fn sqrt_series_exponents(cfg: &FixedPointConfig) -> Vec<i64> {
    let base = cfg.radius_exp as i64 + cfg.frac_bits as i64;
    let mut out = Vec::with_capacity(cfg.series_terms as usize);
    let mut j: u32 = 1;
    while out.len() < cfg.series_terms as usize {
        let cat = catalan(j - 1);
        let block = base - 2 * (j as i64) * (cfg.m as i64) - (2 * j as i64 - 1);
        for bit in (0..128).rev() {
            if (cat >> bit) & 1 == 1 {
                out.push(block + bit as i64);
                if out.len() == cfg.series_terms as usize {
                    break;
                }
            }
        }
        j += 1;
    }
    out
}

/// Second starting point `x1 = r * sqrt(1 - h^2)` from the shift series:
/// the partial sum `2^(N+f) - sum of retained terms`, where a term is
/// retained when its exponent is nonnegative and dropped (silently, matching
/// the truncation of the series to integer terms) when it underflows.
pub fn init_x1_series(cfg: &FixedPointConfig) -> i64 {
    let mut x: i64 = 1 << (cfg.radius_exp + cfg.frac_bits);
    for e in sqrt_series_exponents(cfg) {
        if e >= 0 {
            x -= 1_i64 << e;
        }
    }
    x
}

/// Starting state of the two-step engine: `(r, 0)` then
/// `(init_x1_series, h*r)`, all scaled by the guard bits.
pub fn initial_two_step_state(cfg: &FixedPointConfig) -> FixedPointState {
    let scale = cfg.radius_exp + cfg.frac_bits;
    FixedPointState {
        x: init_x1_series(cfg),
        y: 1 << (scale - cfg.m),
        x_prev: 1 << scale,
        y_prev: 0,
        n: 1,
    }
}

fn shifted(v: i64, shift: u32, counter: &mut OpCounter) -> i64 {
    counter.shifts += 1;
    if shift >= 63 {
        // shifted below the word: the term is dropped
        0
    } else {
        v >> shift
    }
}

fn checked_add(a: i64, b: i64, step: u64, counter: &mut OpCounter) -> Result<i64, FixedPointError> {
    counter.adds += 1;
    a.checked_add(b).ok_or(FixedPointError::Overflow { step })
}

fn checked_sub(a: i64, b: i64, step: u64, counter: &mut OpCounter) -> Result<i64, FixedPointError> {
    counter.adds += 1;
    a.checked_sub(b).ok_or(FixedPointError::Overflow { step })
}

/// One step of the two-step recurrence with `2h = 2^(1-m)` as a single
/// arithmetic shift: `x'' = x_prev - (y >> (m-1))`,
/// `y'' = y_prev + (x >> (m-1))`. Exactly 2 additions and 2 shifts.
pub fn step_two_fixed(
    cfg: &FixedPointConfig,
    s: &FixedPointState,
    counter: &mut OpCounter,
) -> Result<FixedPointState, FixedPointError> {
    let step = s.n + 1;
    let x = checked_sub(s.x_prev, shifted(s.y, cfg.m - 1, counter), step, counter)?;
    let y = checked_add(s.y_prev, shifted(s.x, cfg.m - 1, counter), step, counter)?;
    Ok(FixedPointState { x, y, x_prev: s.x, y_prev: s.y, n: step })
}

/// One step of the two-step recurrence with the shift-series coefficient
/// `delta_N`: `2*delta_N*v` expands into `v >> (m-1)` minus the cascade
/// `sum_{k=0..N} v >> (3m+2+2k)`, so each component costs `N + 2`
/// additions and `N + 2` shifts.
pub fn step_two_fixed_delta_n(
    cfg: &FixedPointConfig,
    delta_n: u32,
    s: &FixedPointState,
    counter: &mut OpCounter,
) -> Result<FixedPointState, FixedPointError> {
    let step = s.n + 1;
    let mut x = checked_sub(s.x_prev, shifted(s.y, cfg.m - 1, counter), step, counter)?;
    let mut y = checked_add(s.y_prev, shifted(s.x, cfg.m - 1, counter), step, counter)?;
    for k in 0..=delta_n {
        let sh = 3 * cfg.m + 2 + 2 * k;
        x = checked_add(x, shifted(s.y, sh, counter), step, counter)?;
        y = checked_sub(y, shifted(s.x, sh, counter), step, counter)?;
    }
    Ok(FixedPointState { x, y, x_prev: s.x, y_prev: s.y, n: step })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    X,
    Y,
}

/// One shifted, signed contribution to an accumulator update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftTerm {
    pub source: Source,
    pub shift: u32,
    pub negate: bool,
}

/// A one-step scheme as accumulator updates `x += terms`, `y += terms`,
/// reading the old `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftProgram {
    pub x_terms: Vec<ShiftTerm>,
    pub y_terms: Vec<ShiftTerm>,
}

impl ShiftProgram {
    pub fn cost(&self) -> CostProfile {
        let n = (self.x_terms.len() + self.y_terms.len()) as u32;
        CostProfile::new(n, n, 0)
    }
}

fn term(source: Source, shift: u32, negate: bool) -> ShiftTerm {
    ShiftTerm { source, shift, negate }
}

/// Shift-add realization of a one-step scheme at `h = 2^-m`, when its
/// coefficients are sums of signed powers of two.
pub fn shift_program(scheme: Scheme, m: u32) -> Option<ShiftProgram> {
    use Source::{X, Y};
    let program = match scheme {
        // x' = x - y>>m ; y' = y + x>>m
        Scheme::FirstOrderSimultaneous => ShiftProgram {
            x_terms: vec![term(Y, m, true)],
            y_terms: vec![term(X, m, false)],
        },
        // a = 1 - 2^-(2m+1)
        Scheme::SecondOrderSimultaneous => ShiftProgram {
            x_terms: vec![term(X, 2 * m + 1, true), term(Y, m, true)],
            y_terms: vec![term(X, m, false), term(Y, 2 * m + 1, true)],
        },
        // c = 2^-m - 2^-(3m+2)
        Scheme::Matsushiro => ShiftProgram {
            x_terms: vec![term(X, 2 * m + 1, true), term(Y, m, true), term(Y, 3 * m + 2, false)],
            y_terms: vec![term(X, m, false), term(X, 3 * m + 2, true), term(Y, 2 * m + 1, true)],
        },
        // c = 2^-m - 2^-(3m+3)
        Scheme::BestThirdOrder => ShiftProgram {
            x_terms: vec![term(X, 2 * m + 1, true), term(Y, m, true), term(Y, 3 * m + 3, false)],
            y_terms: vec![term(X, m, false), term(X, 3 * m + 3, true), term(Y, 2 * m + 1, true)],
        },
        // d = 1 - 2^-2m
        Scheme::FirstOrderSequential => ShiftProgram {
            x_terms: vec![term(Y, m, true)],
            y_terms: vec![term(X, m, false), term(Y, 2 * m, true)],
        },
        // d = 1 - 2^-2m - 2^-(2m+1)
        Scheme::SecondOrderSequential => ShiftProgram {
            x_terms: vec![term(X, 2 * m + 1, true), term(Y, m, true)],
            y_terms: vec![term(X, m, false), term(Y, 2 * m, true), term(Y, 2 * m + 1, true)],
        },
        Scheme::ThirdOrderSimultaneous
        | Scheme::ExactRotation
        | Scheme::ImplicitMidpoint
        | Scheme::ExplicitMidpoint => return None,
    };
    Some(program)
}

/// Apply a shift program to the old `(x, y)` pair.
pub fn step_one_fixed(
    program: &ShiftProgram,
    s: &FixedPointState,
    counter: &mut OpCounter,
) -> Result<FixedPointState, FixedPointError> {
    let step = s.n + 1;
    let apply = |init: i64, terms: &[ShiftTerm], counter: &mut OpCounter| {
        let mut acc = init;
        for t in terms {
            let v = match t.source {
                Source::X => s.x,
                Source::Y => s.y,
            };
            let sv = shifted(v, t.shift, counter);
            acc = if t.negate {
                checked_sub(acc, sv, step, counter)?
            } else {
                checked_add(acc, sv, step, counter)?
            };
        }
        Ok::<i64, FixedPointError>(acc)
    };
    let x = apply(s.x, &program.x_terms, counter)?;
    let y = apply(s.y, &program.y_terms, counter)?;
    Ok(FixedPointState { x, y, x_prev: s.x, y_prev: s.y, n: step })
}

enum EngineMode {
    TwoStep,
    TwoStepDeltaN(u32),
    OneStep(ShiftProgram),
}

/// An instrumented shift-add run: configuration, state, and the operation
/// counter, which is per-engine.
pub struct ShiftAddEngine {
    cfg: FixedPointConfig,
    mode: EngineMode,
    state: FixedPointState,
    counter: OpCounter,
    initial_points: Vec<(i64, i64)>,
}

impl ShiftAddEngine {
    /// Two-step engine with the plain coefficient `2h`.
    pub fn two_step(cfg: FixedPointConfig) -> Self {
        let state = initial_two_step_state(&cfg);
        let initial_points = vec![(state.x_prev, state.y_prev), (state.x, state.y)];
        Self { cfg, mode: EngineMode::TwoStep, state, counter: OpCounter::default(), initial_points }
    }

    /// Two-step engine with the shift-series coefficient `delta_N`.
    pub fn two_step_delta_n(cfg: FixedPointConfig, n: u32) -> Self {
        let state = initial_two_step_state(&cfg);
        let initial_points = vec![(state.x_prev, state.y_prev), (state.x, state.y)];
        Self {
            cfg,
            mode: EngineMode::TwoStepDeltaN(n),
            state,
            counter: OpCounter::default(),
            initial_points,
        }
    }

    /// One-step engine for a shift-add scheme, started at `(r, 0)`.
    pub fn one_step(cfg: FixedPointConfig, scheme: Scheme) -> Result<Self, FixedPointError> {
        let program =
            shift_program(scheme, cfg.m).ok_or(FixedPointError::NotShiftAdd(scheme.name()))?;
        let x0 = 1_i64 << (cfg.radius_exp + cfg.frac_bits);
        let state = FixedPointState { x: x0, y: 0, x_prev: x0, y_prev: 0, n: 0 };
        Ok(Self {
            cfg,
            mode: EngineMode::OneStep(program),
            state,
            counter: OpCounter::default(),
            initial_points: vec![(x0, 0)],
        })
    }

    pub fn config(&self) -> &FixedPointConfig {
        &self.cfg
    }

    pub fn state(&self) -> &FixedPointState {
        &self.state
    }

    pub fn counter(&self) -> &OpCounter {
        &self.counter
    }

    pub fn initial_points(&self) -> &[(i64, i64)] {
        &self.initial_points
    }

    pub fn step(&mut self) -> Result<(), FixedPointError> {
        self.state = match &self.mode {
            EngineMode::TwoStep => step_two_fixed(&self.cfg, &self.state, &mut self.counter)?,
            EngineMode::TwoStepDeltaN(n) => {
                step_two_fixed_delta_n(&self.cfg, *n, &self.state, &mut self.counter)?
            }
            EngineMode::OneStep(program) => {
                step_one_fixed(program, &self.state, &mut self.counter)?
            }
        };
        Ok(())
    }

    /// Run `steps` steps, collecting the integer points produced.
    pub fn run(&mut self, steps: usize) -> Result<Vec<(i64, i64)>, FixedPointError> {
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            self.step()?;
            out.push((self.state.x, self.state.y));
        }
        Ok(out)
    }
}

/// Build the right engine for a scheme and delta parameterization.
pub fn engine_for(
    scheme: Scheme,
    cfg: FixedPointConfig,
    delta: Option<&DeltaSpec>,
) -> Result<ShiftAddEngine, FixedPointError> {
    match scheme.kind() {
        SchemeKind::TwoStep => match delta.unwrap_or(&DeltaSpec::Identity) {
            DeltaSpec::Identity => Ok(ShiftAddEngine::two_step(cfg)),
            DeltaSpec::ShiftSeries(n) => Ok(ShiftAddEngine::two_step_delta_n(cfg, *n)),
            other => Err(FixedPointError::DeltaNotShiftAdd(other.name())),
        },
        SchemeKind::OneStep => ShiftAddEngine::one_step(cfg, scheme),
    }
}

/// Measured per-step operation counts of the instrumented engine. These
/// must agree with the declared catalog profile; a scheme that needs real
/// multiplications is rejected.
pub fn cost_report(
    scheme: Scheme,
    cfg: FixedPointConfig,
    delta: Option<&DeltaSpec>,
) -> Result<CostProfile, FixedPointError> {
    let mut engine = engine_for(scheme, cfg, delta)?;
    let steps = 8;
    engine.run(steps)?;
    let c = engine.counter();
    debug_assert!(c.adds % steps as u64 == 0 && c.shifts % steps as u64 == 0);
    Ok(CostProfile::new(
        (c.adds / steps as u64) as u32,
        (c.shifts / steps as u64) as u32,
        (c.muls / steps as u64) as u32,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{step_two, TrajectoryState};

    fn cfg(m: u32, n: u32, f: u32, t: u32) -> FixedPointConfig {
        FixedPointConfig::new(m, n, f, t).unwrap()
    }

    #[test]
    fn catalan_values() {
        let expected: [u128; 8] = [1, 1, 2, 5, 14, 42, 132, 429];
        for (n, want) in expected.iter().enumerate() {
            assert_eq!(catalan(n as u32), *want);
        }
    }

    #[test]
    fn series_exponents_follow_printed_pattern() {
        // first five terms: N-2m-1, N-4m-3, N-6m-4, N-8m-5, N-8m-7
        let c = cfg(2, 30, 0, 5);
        let (n, m) = (30_i64, 2_i64);
        assert_eq!(
            sqrt_series_exponents(&c),
            vec![
                n - 2 * m - 1,
                n - 4 * m - 3,
                n - 6 * m - 4,
                n - 8 * m - 5,
                n - 8 * m - 7
            ]
        );
    }

    #[test]
    fn series_terms_match_taylor_coefficients() {
        // the five leading dyadic coefficients of sqrt(1-u): 1/2, 1/8,
        // 1/16, 5/128, 7/256 -- the fourth splits into 2^-5 + 2^-7
        let c = cfg(1, 40, 0, 8);
        let base = 40_f64;
        let sum_first = |count: usize| -> f64 {
            sqrt_series_exponents(&c)[..count]
                .iter()
                .map(|&e| (2.0_f64).powi(e as i32))
                .sum::<f64>()
                / 2.0_f64.powi(base as i32)
        };
        let h2 = 0.25;
        assert_eq!(sum_first(1), 0.5 * h2);
        assert_eq!(sum_first(2), 0.5 * h2 + 0.125 * h2 * h2);
        assert_eq!(sum_first(3), 0.5 * h2 + 0.125 * h2 * h2 + h2.powi(3) / 16.0);
        assert_eq!(
            sum_first(5),
            0.5 * h2 + 0.125 * h2 * h2 + h2.powi(3) / 16.0 + 5.0 / 128.0 * h2.powi(4)
        );
        // 7/256 = (4 + 2 + 1)/1024 takes three shift terms
        assert_eq!(
            sum_first(8),
            0.5 * h2
                + 0.125 * h2 * h2
                + h2.powi(3) / 16.0
                + 5.0 / 128.0 * h2.powi(4)
                + 7.0 / 256.0 * h2.powi(5)
        );
    }

    #[test]
    fn init_series_dodecagon_example() {
        // three requested terms, the third (exponent -2) underflows
        assert_eq!(init_x1_series(&cfg(1, 8, 0, 3)), 222);
        assert_eq!(222, (256.0 * (std::f64::consts::PI / 6.0).cos()).round() as i64);
    }

    #[test]
    fn init_series_with_guard_bits() {
        let v = init_x1_series(&cfg(1, 8, 8, 5));
        assert_eq!(v, 222 * 256 - 64 - 10);
        let true_val = 2.0_f64.powi(16) * 0.75_f64.sqrt();
        assert!((v as f64 - true_val).abs() <= 3.0, "residual series tail is ~2.2 units");
        assert!(v as f64 >= true_val, "truncation only ever overshoots");
    }

    #[test]
    fn init_series_leading_term_bound_for_large_m() {
        let c = cfg(8, 20, 0, 2);
        let v = init_x1_series(&c);
        assert_eq!(v, (1 << 20) - (1 << 3)); // 2^N - 2^(N-2m-1)
        let true_val = 2.0_f64.powi(20) * (1.0 - 2.0_f64.powi(-16)).sqrt();
        let rel = (v as f64 - true_val).abs() / true_val;
        assert!(rel <= 2.0_f64.powi(-(4 * 8 + 2)), "rel = {rel}");
    }

    #[test]
    fn two_step_hand_example() {
        let c = cfg(1, 8, 0, 3);
        let s = initial_two_step_state(&c);
        assert_eq!((s.x_prev, s.y_prev, s.x, s.y), (256, 0, 222, 128));
        let mut counter = OpCounter::default();
        let s2 = step_two_fixed(&c, &s, &mut counter).unwrap();
        assert_eq!((s2.x, s2.y), (128, 222));
        assert_eq!(counter, OpCounter { adds: 2, shifts: 2, muls: 0 });
    }

    #[test]
    fn dodecagon_closes_exactly() {
        let mut engine = ShiftAddEngine::two_step(cfg(1, 8, 0, 3));
        let points = engine.run(12).unwrap();
        // run() starts at point 2, so point 12 is points[10]
        assert_eq!(points[10], (256, 0));
        let c = engine.counter();
        assert_eq!((c.adds, c.shifts, c.muls), (24, 24, 0));
    }

    #[test]
    fn delta_n_step_shift_cascade() {
        // m = 2, N = 0: x'' = x_prev - (y>>1) + (y>>8)
        let c = cfg(2, 10, 4, 3);
        let s = FixedPointState { x: 5000, y: 3000, x_prev: 4000, y_prev: 2000, n: 1 };
        let mut counter = OpCounter::default();
        let s2 = step_two_fixed_delta_n(&c, 0, &s, &mut counter).unwrap();
        assert_eq!(s2.x, 4000 - (3000 >> 1) + (3000 >> 8));
        assert_eq!(s2.y, 2000 + (5000 >> 1) - (5000 >> 8));
        assert_eq!(counter, OpCounter { adds: 4, shifts: 4, muls: 0 });
    }

    #[test]
    fn delta_n_engine_tracks_float_run() {
        // same truncated init, generous guard bits: the engines agree to a
        // small fraction of a device LSB over a few hundred steps
        let c = cfg(2, 8, 30, 8);
        let mut engine = ShiftAddEngine::two_step_delta_n(c, 2);
        let delta = crate::schemes::DeltaSpec::ShiftSeries(2)
            .evaluate(crate::schemes::StepSize::new(c.h()).unwrap());
        let scale = c.scale();
        let init = engine.initial_points().to_vec();
        let mut fs = TrajectoryState::from_pair(
            (init[0].0 as f64, init[0].1 as f64),
            (init[1].0 as f64, init[1].1 as f64),
        );
        for _ in 0..400 {
            engine.step().unwrap();
            fs = step_two(delta, &fs);
            let dx = (engine.state().x as f64 - fs.x).abs() / scale;
            let dy = (engine.state().y as f64 - fs.y).abs() / scale;
            assert!(dx < 1e-3 && dy < 1e-3, "divergence at step {}", fs.n);
        }
    }

    #[test]
    fn plain_engine_is_bit_exact_against_float_at_m1() {
        // m = 1 shifts by zero, so the integer recurrence is exact; a float
        // run from the same starting integers stays below 2^53 and matches
        // bit for bit
        let c = cfg(1, 8, 40, 8);
        let mut engine = ShiftAddEngine::two_step(c);
        let init = engine.initial_points().to_vec();
        let mut fs = TrajectoryState::from_pair(
            (init[0].0 as f64, init[0].1 as f64),
            (init[1].0 as f64, init[1].1 as f64),
        );
        for _ in 0..10_000 {
            engine.step().unwrap();
            fs = step_two(0.5, &fs);
            assert_eq!(engine.state().x as f64, fs.x);
            assert_eq!(engine.state().y as f64, fs.y);
        }
    }

    #[test]
    fn guarded_engine_tracks_float_within_one_device_lsb() {
        let c = cfg(2, 8, 30, 8);
        let mut engine = ShiftAddEngine::two_step(c);
        let scale = c.scale();
        let init = engine.initial_points().to_vec();
        let mut fs = TrajectoryState::from_pair(
            (init[0].0 as f64, init[0].1 as f64),
            (init[1].0 as f64, init[1].1 as f64),
        );
        for _ in 0..10_000 {
            engine.step().unwrap();
            fs = step_two(0.25, &fs);
            assert!((engine.state().x as f64 - fs.x).abs() / scale < 1.0);
            assert!((engine.state().y as f64 - fs.y).abs() / scale < 1.0);
        }
    }

    #[test]
    fn radius_stays_bounded_over_one_period() {
        for m in 1..=3u32 {
            for n in [8u32, 10] {
                let c = cfg(m, n, FixedPointConfig::default_frac_bits(m), 8);
                let mut engine = ShiftAddEngine::two_step(c);
                let steps =
                    (std::f64::consts::TAU / c.h().asin()).ceil() as usize + 2;
                let r_scaled = c.r() * c.scale();
                let tol = 2.0_f64.powi(-(2 * m as i32));
                for _ in 0..steps {
                    engine.step().unwrap();
                    let s = engine.state();
                    let radius = ((s.x as f64).powi(2) + (s.y as f64).powi(2)).sqrt();
                    assert!(
                        radius >= r_scaled * (1.0 - tol) && radius <= r_scaled * (1.0 + tol),
                        "m={m} N={n}: radius {radius} vs {r_scaled}"
                    );
                }
            }
        }
    }

    #[test]
    fn matsushiro_program_single_step() {
        let c = cfg(2, 10, 0, 1);
        let mut engine = ShiftAddEngine::one_step(c, Scheme::Matsushiro).unwrap();
        let x = 1_i64 << 10;
        engine.step().unwrap();
        let s = engine.state();
        // x' = x - x>>5 - y>>2 + y>>8 with y = 0; y' = x>>2 - x>>8
        assert_eq!(s.x, x - (x >> 5));
        assert_eq!(s.y, (x >> 2) - (x >> 8));
    }

    #[test]
    fn measured_costs_match_declared_for_all_shift_add_schemes() {
        let c = cfg(3, 8, 10, 4);
        for scheme in crate::schemes::catalog() {
            if !scheme.is_shift_add() {
                continue;
            }
            let delta = match scheme.kind() {
                SchemeKind::TwoStep => Some(DeltaSpec::Identity),
                SchemeKind::OneStep => None,
            };
            let measured = cost_report(*scheme, c, delta.as_ref()).unwrap();
            assert_eq!(measured, scheme.cost_profile(), "{scheme}");
        }
    }

    #[test]
    fn cost_report_examples() {
        let c3 = cfg(3, 8, 10, 4);
        assert_eq!(
            cost_report(Scheme::ExplicitMidpoint, c3, Some(&DeltaSpec::Identity)).unwrap(),
            CostProfile::new(2, 2, 0)
        );
        assert_eq!(
            cost_report(Scheme::FirstOrderSimultaneous, c3, None).unwrap(),
            CostProfile::new(2, 2, 0)
        );
        let c2 = cfg(2, 8, 10, 4);
        assert_eq!(
            cost_report(Scheme::ExplicitMidpoint, c2, Some(&DeltaSpec::ShiftSeries(0))).unwrap(),
            CostProfile::new(4, 4, 0)
        );
        assert!(matches!(
            cost_report(Scheme::ExactRotation, c2, None),
            Err(FixedPointError::NotShiftAdd(_))
        ));
        assert!(matches!(
            cost_report(Scheme::ExplicitMidpoint, c2, Some(&DeltaSpec::ExactSin)),
            Err(FixedPointError::DeltaNotShiftAdd(_))
        ));
    }

    #[test]
    fn overflow_is_checked_not_wrapped() {
        let c = cfg(1, 8, 0, 1);
        let s = FixedPointState {
            x: i64::MAX - 1,
            y: -(i64::MAX - 1),
            x_prev: i64::MAX - 1,
            y_prev: 0,
            n: 0,
        };
        let mut counter = OpCounter::default();
        assert!(matches!(
            step_two_fixed(&c, &s, &mut counter),
            Err(FixedPointError::Overflow { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(matches!(
            FixedPointConfig::new(0, 8, 0, 3),
            Err(FixedPointError::StepExponent(0))
        ));
        assert!(matches!(
            FixedPointConfig::new(1, 0, 0, 3),
            Err(FixedPointError::RadiusExponent(0))
        ));
        assert!(matches!(
            FixedPointConfig::new(1, 8, 0, 0),
            Err(FixedPointError::SeriesTerms(0))
        ));
        assert!(matches!(
            FixedPointConfig::new(1, 40, 30, 3),
            Err(FixedPointError::WordWidth(70))
        ));
        assert!(matches!(
            FixedPointConfig::new(10, 8, 0, 3),
            Err(FixedPointError::ScaleUnderflow)
        ));
    }
}
