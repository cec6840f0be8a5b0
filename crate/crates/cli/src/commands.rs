use std::f64::consts::TAU;
use std::fs;
use std::hint::black_box;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use circle_dda::analysis::{classify, eigen, empirical_k, spiral_analysis};
use circle_dda::fixedpoint::{engine_for, FixedPointConfig};
use circle_dda::generator::{generate, step_one, step_two, Trajectory, TrajectoryState};
use circle_dda::metrics::{measure_period, radial_drift, xi_step_matrix};
use circle_dda::schemes::{CostProfile, DeltaSpec, Scheme, SchemeKind, StepSize};

use crate::args::{
    AnalyzeArgs, BenchArgs, Cli, Command, Engine, GenFormat, GenerateArgs, PlotArgs, ReportFormat,
    SweepArgs,
};
use crate::render;

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Plot(args) => cmd_plot(args),
    }
}

/// A value given either as a decimal or as an exact power of two (`2^-m`,
/// `2^N`). Decimal inputs that happen to be powers of two are recognized,
/// so fixed-engine configurations are exact by construction.
#[derive(Clone, Copy, Debug)]
struct Scaled {
    value: f64,
    exponent: Option<i32>,
}

fn parse_scaled(s: &str, what: &str) -> Result<Scaled> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("2^") {
        let e: i32 = rest
            .parse()
            .map_err(|_| anyhow!("{what} `{s}`: expected an integer exponent after `2^`"))?;
        return Ok(Scaled { value: 2.0_f64.powi(e), exponent: Some(e) });
    }
    let value: f64 = t.parse().map_err(|_| anyhow!("{what} `{s}` is not a number"))?;
    Ok(Scaled { value, exponent: exact_power_of_two(value) })
}

fn exact_power_of_two(v: f64) -> Option<i32> {
    if v > 0.0 && v.is_normal() && v.to_bits() & ((1u64 << 52) - 1) == 0 {
        Some(((v.to_bits() >> 52) as i32) - 1023)
    } else {
        None
    }
}

fn parse_scheme(s: &str) -> Result<Scheme> {
    s.parse::<Scheme>().map_err(|e| anyhow!("{e}"))
}

/// Delta parameterization: required to be absent for one-step schemes,
/// defaulting to `identity` for the two-step family.
fn parse_delta(scheme: Scheme, arg: Option<&str>) -> Result<Option<DeltaSpec>> {
    match scheme.kind() {
        SchemeKind::OneStep => match arg {
            None => Ok(None),
            Some(_) => bail!("--delta only applies to the two-step explicit-midpoint scheme"),
        },
        SchemeKind::TwoStep => match arg {
            None => Ok(Some(DeltaSpec::Identity)),
            Some(s) => Ok(Some(s.parse::<DeltaSpec>().map_err(|e| anyhow!("{e}"))?)),
        },
    }
}

fn step_size(h: &Scaled) -> Result<StepSize> {
    StepSize::new(h.value).map_err(|e| anyhow!("{e}"))
}

fn resolve_output(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var("DDA_OUTPUT_DIR") {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(path);
            }
        }
    }
    path.to_path_buf()
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<()> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => {
            let target = resolve_output(p);
            fs::write(&target, content)
                .with_context(|| format!("writing {}", target.display()))
        }
    }
}

/// Fixed-engine configuration from CLI values: h and r must be exact
/// powers of two.
fn fixed_config(
    h: &Scaled,
    r: &Scaled,
    frac_bits: Option<u32>,
    series_terms: u32,
) -> Result<FixedPointConfig> {
    let m = match h.exponent {
        Some(e) if e <= -1 => (-e) as u32,
        _ => bail!("fixed engine requires dyadic h = 2^-m with m >= 1, got h = {}", h.value),
    };
    let n = match r.exponent {
        Some(e) if e >= 1 => e as u32,
        _ => bail!("fixed engine requires r = 2^N with N >= 1, got r = {}", r.value),
    };
    let f = frac_bits.unwrap_or_else(|| FixedPointConfig::default_frac_bits(m));
    FixedPointConfig::new(m, n, f, series_terms).map_err(|e| anyhow!("{e}"))
}

/// Run the instrumented integer engine and return its points in device
/// LSBs, as a trajectory with the same shape as a float run.
fn fixed_trajectory(
    scheme: Scheme,
    cfg: FixedPointConfig,
    delta: Option<&DeltaSpec>,
    steps: usize,
) -> Result<Trajectory> {
    let mut engine = engine_for(scheme, cfg, delta).map_err(|e| anyhow!("{e}"))?;
    let mut raw: Vec<(i64, i64)> = engine.initial_points().to_vec();
    raw.extend(engine.run(steps).map_err(|e| anyhow!("{e}"))?);
    let points = raw.iter().map(|&(x, y)| (cfg.to_device(x), cfg.to_device(y))).collect();
    let delta_value = match scheme.kind() {
        SchemeKind::TwoStep => Some(
            delta
                .unwrap_or(&DeltaSpec::Identity)
                .evaluate(StepSize::new(cfg.h()).expect("dyadic step")),
        ),
        SchemeKind::OneStep => None,
    };
    Ok(Trajectory { points, scheme: scheme.name(), h: cfg.h(), r: cfg.r(), delta: delta_value })
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let scheme = parse_scheme(&args.scheme)?;
    let h = parse_scaled(&args.h, "step size")?;
    let r = parse_scaled(&args.r, "radius")?;
    let delta = parse_delta(scheme, args.delta.as_deref())?;

    let traj = match args.engine {
        Engine::Float => generate(scheme, step_size(&h)?, delta.as_ref(), r.value, args.steps)
            .map_err(|e| anyhow!("{e}"))?,
        Engine::Fixed => {
            let cfg = fixed_config(&h, &r, args.frac_bits, args.series_terms)?;
            fixed_trajectory(scheme, cfg, delta.as_ref(), args.steps)?
        }
    };

    let content = match args.format {
        GenFormat::Csv => render::trajectory_csv(&traj),
        GenFormat::Svg => render::trajectory_svg(&traj.points, traj.r, 512),
        GenFormat::Json => {
            let points: Vec<[f64; 2]> = traj.points.iter().map(|&(x, y)| [x, y]).collect();
            let doc = json!({
                "schema": 1,
                "command": "generate",
                "scheme": traj.scheme,
                "h": traj.h,
                "r": traj.r,
                "delta": traj.delta,
                "engine": match args.engine { Engine::Float => "float", Engine::Fixed => "fixed" },
                "steps": args.steps,
                "points": points,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
    };
    write_output(args.output.as_ref(), &content)
}

fn format_complex(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let scheme = parse_scheme(&args.scheme)?;
    let h = parse_scaled(&args.h, "step size")?;
    let hs = step_size(&h)?;

    let content = match scheme.kind() {
        SchemeKind::OneStep => {
            if args.delta.is_some() {
                bail!("--delta only applies to the two-step explicit-midpoint scheme");
            }
            let m = scheme.matrix(hs).map_err(|e| anyhow!("{e}"))?;
            let spiral = spiral_analysis(&m).ok();
            let eig = eigen(&m);
            let class = classify(&m);
            match args.format {
                ReportFormat::Json => {
                    let doc = json!({
                        "schema": 1,
                        "command": "analyze",
                        "scheme": scheme.name(),
                        "h": h.value,
                        "matrix": {"a": m.a, "b": m.b, "c": m.c, "d": m.d},
                        "rho_squared": spiral.map(|s| s.rho_squared),
                        "theta": spiral.map(|s| s.theta),
                        "k": spiral.map(|s| s.k),
                        "eigenvalues": [[eig.lambda1.re, eig.lambda1.im],
                                        [eig.lambda2.re, eig.lambda2.im]],
                        "class": class.kind.name(),
                        "witnesses": {
                            "det": class.witnesses.det,
                            "trace": class.witnesses.trace,
                            "symmetry_diag": class.witnesses.symmetry_diag,
                            "symmetry_skew": class.witnesses.symmetry_skew,
                            "discriminant": class.witnesses.discriminant,
                        },
                    });
                    format!("{}\n", serde_json::to_string_pretty(&doc)?)
                }
                ReportFormat::Text => {
                    let mut out = String::new();
                    out.push_str(&format!("scheme: {}\n", scheme.name()));
                    out.push_str(&format!("h: {}\n", h.value));
                    out.push_str(&format!("matrix: a={}, b={}, c={}, d={}\n", m.a, m.b, m.c, m.d));
                    if let Some(s) = spiral {
                        out.push_str(&format!("rho^2: {}\n", s.rho_squared));
                        out.push_str(&format!("theta: {}\n", s.theta));
                        out.push_str(&format!("k: {}\n", s.k));
                    }
                    out.push_str(&format!(
                        "eigenvalues: {}, {}\n",
                        format_complex(eig.lambda1),
                        format_complex(eig.lambda2)
                    ));
                    out.push_str(&format!("class: {}\n", class.kind.name()));
                    out.push_str(&format!(
                        "witnesses: det={}, trace={}, a-d={}, b+c={}, discriminant={}\n",
                        class.witnesses.det,
                        class.witnesses.trace,
                        class.witnesses.symmetry_diag,
                        class.witnesses.symmetry_skew,
                        class.witnesses.discriminant
                    ));
                    out
                }
            }
        }
        SchemeKind::TwoStep => {
            let spec = parse_delta(scheme, args.delta.as_deref())?.expect("two-step scheme");
            scheme.validate_step(hs).map_err(|e| anyhow!("{e}"))?;
            let delta = spec.evaluate(hs);
            let evo = xi_step_matrix(delta);
            let t_analytic = TAU * h.value / delta.asin();
            match args.format {
                ReportFormat::Json => {
                    let eigs: Vec<[f64; 2]> =
                        evo.eigenvalues.iter().map(|z| [z.re, z.im]).collect();
                    let doc = json!({
                        "schema": 1,
                        "command": "analyze",
                        "scheme": scheme.name(),
                        "h": h.value,
                        "delta_form": spec.name(),
                        "delta": delta,
                        "xi_matrix": evo.b,
                        "eigenvalues": eigs,
                        "period": t_analytic,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&doc)?)
                }
                ReportFormat::Text => {
                    let mut out = String::new();
                    out.push_str(&format!("scheme: {}\n", scheme.name()));
                    out.push_str(&format!("h: {}\n", h.value));
                    out.push_str(&format!("delta form: {}\n", spec.name()));
                    out.push_str(&format!("delta: {delta}\n"));
                    out.push_str(&format!("xi matrix: {:?}\n", evo.b));
                    out.push_str(&format!(
                        "eigenvalues: {}, {}, {}\n",
                        format_complex(evo.eigenvalues[0]),
                        format_complex(evo.eigenvalues[1]),
                        format_complex(evo.eigenvalues[2])
                    ));
                    out.push_str(&format!("period: {t_analytic}\n"));
                    out
                }
            }
        }
    };
    write_output(args.output.as_ref(), &content)
}

/// One sweep cell: accuracy metrics for a scheme at a step size.
fn sweep_cell(
    scheme: Scheme,
    h: Scaled,
    delta: &DeltaSpec,
    steps: Option<usize>,
) -> Result<String> {
    let hs = step_size(&h)?;
    let (traj, per_step_sine) = match scheme.kind() {
        SchemeKind::OneStep => {
            let m = scheme.matrix(hs).map_err(|e| anyhow!("{e}"))?;
            let eig = eigen(&m);
            let angle = eig.lambda1.im.atan2(eig.lambda1.re);
            if angle <= 0.0 {
                bail!("{} at h={} does not rotate; no period to measure", scheme.name(), h.value);
            }
            let steps = steps.unwrap_or_else(|| (2.2 * TAU / angle).ceil() as usize + 2);
            let traj =
                generate(scheme, hs, None, 1.0, steps).map_err(|e| anyhow!("{e}"))?;
            (traj, angle.sin())
        }
        SchemeKind::TwoStep => {
            let d = delta.evaluate(hs);
            let angle = d.asin();
            let steps = steps.unwrap_or_else(|| (2.2 * TAU / angle).ceil() as usize + 2);
            let traj = generate(scheme, hs, Some(delta), 1.0, steps).map_err(|e| anyhow!("{e}"))?;
            (traj, d)
        }
    };
    let drift = radial_drift(&traj).map_err(|e| anyhow!("{e}"))?;
    let period = measure_period(&traj, hs, per_step_sine).map_err(|e| anyhow!("{e}"))?;
    let k = empirical_k(&traj).map_err(|e| anyhow!("{e}"))?;
    Ok(format!(
        "{},{},{},{},{}",
        scheme.name(),
        h.value,
        drift.max_abs,
        period.period_error,
        k
    ))
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let schemes: Vec<Scheme> = args
        .schemes
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_scheme)
        .collect::<Result<_>>()?;
    let h_values: Vec<Scaled> = args
        .h_list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_scaled(s, "step size"))
        .collect::<Result<_>>()?;
    let delta: DeltaSpec = args.delta.parse().map_err(|e| anyhow!("{e}"))?;

    let cells: Vec<(Scheme, Scaled)> = schemes
        .iter()
        .flat_map(|&s| h_values.iter().map(move |&h| (s, h)))
        .collect();

    // cells run in parallel; assembly stays in input order
    let rows: Vec<Result<String>> = cells
        .par_iter()
        .map(|&(scheme, h)| {
            sweep_cell(scheme, h, &delta, args.steps)
                .with_context(|| format!("sweep cell {} h={}", scheme.name(), h.value))
        })
        .collect();

    let mut out = String::from("scheme,h,max_radial_drift,period_error,k_empirical\n");
    for row in rows {
        out.push_str(&row?);
        out.push('\n');
    }
    write_output(args.output.as_ref(), &out)
}

fn float_cost(scheme: Scheme) -> CostProfile {
    match scheme.kind() {
        SchemeKind::OneStep => CostProfile::new(2, 0, 4),
        SchemeKind::TwoStep => CostProfile::new(2, 0, 2),
    }
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let scheme = parse_scheme(&args.scheme)?;
    let h = parse_scaled(&args.h, "step size")?;
    let delta = parse_delta(scheme, args.delta.as_deref())?;
    let steps = args.steps.max(1);

    let (declared, measured, elapsed) = match args.engine {
        Engine::Fixed => {
            if !scheme.is_shift_add() {
                bail!(
                    "{} is not shift-add implementable; the fixed engine cannot run it",
                    scheme.name()
                );
            }
            let r = parse_scaled(&args.r, "radius")?;
            let cfg = fixed_config(&h, &r, args.frac_bits, args.series_terms)?;
            let declared = match (scheme.kind(), delta.as_ref()) {
                (SchemeKind::TwoStep, Some(spec)) => spec.two_step_cost(),
                _ => scheme.cost_profile(),
            };
            let mut engine = engine_for(scheme, cfg, delta.as_ref()).map_err(|e| anyhow!("{e}"))?;
            let start = Instant::now();
            for _ in 0..steps {
                engine.step().map_err(|e| anyhow!("{e}"))?;
            }
            let elapsed = start.elapsed();
            black_box(engine.state());
            let c = engine.counter();
            let measured = CostProfile::new(
                (c.adds / steps as u64) as u32,
                (c.shifts / steps as u64) as u32,
                (c.muls / steps as u64) as u32,
            );
            if measured != declared {
                bail!(
                    "instrumented cost ({measured}) disagrees with the declared profile ({declared})"
                );
            }
            (declared, Some(measured), elapsed)
        }
        Engine::Float => {
            let hs = step_size(&h)?;
            let start = Instant::now();
            match scheme.kind() {
                SchemeKind::OneStep => {
                    let m = scheme.matrix(hs).map_err(|e| anyhow!("{e}"))?;
                    let mut s = TrajectoryState::start(1.0, 0.0);
                    for _ in 0..steps {
                        s = step_one(&m, &s);
                    }
                    black_box(s);
                }
                SchemeKind::TwoStep => {
                    let spec = delta.as_ref().expect("two-step scheme");
                    let d = spec.evaluate(hs);
                    let ic = circle_dda::generator::init_two_step(1.0, d)
                        .map_err(|e| anyhow!("{e}"))?;
                    let mut s = TrajectoryState::from_pair((ic.x0, ic.y0), (ic.x1, ic.y1));
                    for _ in 0..steps {
                        s = step_two(d, &s);
                    }
                    black_box(s);
                }
            }
            (float_cost(scheme), None, start.elapsed())
        }
    };

    let steps_per_second = steps as f64 / elapsed.as_secs_f64();
    let expensive = declared.muls > 0;
    let engine_name = match args.engine {
        Engine::Float => "float",
        Engine::Fixed => "fixed",
    };

    let content = match args.format {
        ReportFormat::Json => {
            let doc = json!({
                "schema": 1,
                "command": "bench",
                "scheme": scheme.name(),
                "h": h.value,
                "engine": engine_name,
                "declared": {"adds": declared.adds, "shifts": declared.shifts, "muls": declared.muls},
                "measured": measured.map(|m| json!({"adds": m.adds, "shifts": m.shifts, "muls": m.muls})),
                "expensive": expensive,
                "steps": steps,
                "steps_per_second": steps_per_second,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("scheme: {}\n", scheme.name()));
            out.push_str(&format!("h: {}\n", h.value));
            out.push_str(&format!("engine: {engine_name}\n"));
            out.push_str(&format!("declared cost per step: {declared}\n"));
            if let Some(m) = measured {
                out.push_str(&format!("measured cost per step: {m}\n"));
            }
            if expensive {
                out.push_str("note: relatively expensive (multiplications every step)\n");
            }
            out.push_str(&format!("throughput: {steps_per_second} steps/s\n"));
            out
        }
    };
    write_output(args.output.as_ref(), &content)
}

fn cmd_plot(args: PlotArgs) -> Result<()> {
    let (points, r) = match &args.input {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let data = render::parse_trajectory_csv(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            (data.points, data.r)
        }
        None => {
            let scheme = parse_scheme(args.scheme.as_deref().expect("required by clap"))?;
            let h = parse_scaled(args.h.as_deref().expect("required by clap"), "step size")?;
            let r = parse_scaled(&args.r, "radius")?;
            let delta = parse_delta(scheme, args.delta.as_deref())?;
            let steps = args.steps.expect("required by clap");
            let traj = generate(scheme, step_size(&h)?, delta.as_ref(), r.value, steps)
                .map_err(|e| anyhow!("{e}"))?;
            (traj.points, traj.r)
        }
    };
    let svg = render::trajectory_svg(&points, r, args.size);
    write_output(args.output.as_ref(), &svg)
}
