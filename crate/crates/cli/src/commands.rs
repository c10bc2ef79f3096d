use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use pqsvt::amplitudes::bspline_piecewise_coefficients;
use pqsvt::cost::{qsvt_toffoli, write_sweep_csv, BeVariant, CostParams, ResourceEstimate};
use pqsvt::parse::{parse_window, TargetDescriptor};
use pqsvt::prep::{prepare as run_prepare, prior_ratio, PrepOptions, PrepReport};
use pqsvt::qsvt::SolverOptions;
use pqsvt::segmentation::{dyadic_cascade_plan, optimal_cuts};
use pqsvt::window::{
    default_delta_targets, fig6_rows, fit_trends, tail_report, window_prep_cost_comparison, write_fig6_csv,
    write_fig7_csv, WindowFamily,
};
use pqsvt::{sample_target, SegmentPlan, TargetKind, TargetSpec};

use crate::{CostArgs, CostFormat, Method, PrepareArgs, ReportFormat, SegmentArgs, TargetArgs, WindowArgs};

/// 2 for bad input, 3 when the numerics gave up.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    let lib = err.chain().find_map(|c| c.downcast_ref::<pqsvt::Error>());
    match lib {
        Some(pqsvt::Error::PhaseSolve { .. } | pqsvt::Error::ZeroGoodState | pqsvt::Error::Infeasible(_)) => 3,
        _ => 2,
    }
}

pub fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("PQSVT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .with_context(|| format!("PQSVT_THREADS must be a positive integer, got \"{raw}\""))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn json_bytes<T: serde::Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_slice(&text).with_context(|| format!("parsing {}", path.display()))
}

fn resolve_target(args: &TargetArgs, n: Option<u32>) -> Result<TargetSpec> {
    if let Some(path) = &args.spec {
        let spec: TargetSpec = read_json(path)?;
        if let Some(n) = n {
            if n != spec.n {
                bail!("--n {n} disagrees with n = {} in {}", spec.n, path.display());
            }
        }
        return Ok(spec);
    }
    let text = args.target.as_deref().unwrap_or_default();
    let desc: TargetDescriptor = text.parse()?;
    let n = n.context("--n is required with --target")?;
    desc.resolve(n).with_context(|| format!("loading target \"{text}\""))
}

fn fit(spec: &TargetSpec, samples: &[f64], method: Method, degree: usize, eps: f64) -> Result<SegmentPlan> {
    Ok(match method {
        Method::Greedy => optimal_cuts(samples, degree, eps)?,
        Method::Dyadic => dyadic_cascade_plan(spec, degree)?,
        Method::Exact => match spec.kind {
            TargetKind::BSpline { m } => bspline_piecewise_coefficients(m, spec.n)?,
            _ => bail!("--method exact is only available for bspline targets"),
        },
    })
}

pub fn segment(args: &SegmentArgs) -> Result<()> {
    let spec = resolve_target(&args.target, args.n)?;
    let samples = sample_target(&spec)?.values;
    let plan = fit(&spec, &samples, args.method, args.degree, args.eps)?;
    eprintln!("S = {}  l_max = {}  pmax = {:.6e}", plan.segment_count(), plan.l_max(), plan.pmax());
    eprintln!("start  length  max_error");
    for seg in plan.segments() {
        let err = (seg.start..seg.end())
            .map(|x| (plan.value_at(x) - samples[x]).abs())
            .fold(0.0, f64::max);
        eprintln!("{:5}  {:6}  {:.3e}", seg.start, seg.length, err);
    }
    emit(args.out.as_deref(), &json_bytes(&plan)?)
}

pub fn prepare(args: &PrepareArgs) -> Result<()> {
    let spec = resolve_target(&args.target, args.n)?;
    let target = sample_target(&spec)?;
    let prior = match &args.prior {
        Some(desc) => Some(sample_target(&desc.parse::<TargetDescriptor>()?.resolve(spec.n)?)?),
        None => None,
    };
    let fitted = if let Some(path) = &args.plan {
        let plan: SegmentPlan = read_json(path)?;
        if plan.n() != spec.n {
            bail!("plan in {} is for n = {}, target has n = {}", path.display(), plan.n(), spec.n);
        }
        plan
    } else if let Some(prior) = &prior {
        if args.method.is_some_and(|m| m != Method::Greedy) {
            bail!("with --prior only --method greedy applies");
        }
        optimal_cuts(&prior_ratio(&target, prior)?, args.degree, args.eps)?
    } else {
        let method = args.method.unwrap_or(match spec.kind {
            TargetKind::BSpline { .. } => Method::Exact,
            TargetKind::Power { .. } | TargetKind::Log => Method::Dyadic,
            _ => Method::Greedy,
        });
        fit(&spec, &target.values, method, args.degree, args.eps)?
    };
    let opts = PrepOptions { tau: args.tau, solver: SolverOptions { seed: args.seed, ..Default::default() } };
    let prepared = run_prepare(&fitted, &target, prior.as_ref(), &opts)?;
    let r = &prepared.report;
    eprintln!(
        "fidelity = {:.12}  success = {:.6}  aa_rounds = {}  post_aa = {:.6}",
        r.fidelity, r.success_amplitude, r.aa_rounds, r.post_aa_success
    );
    if r.inefficient {
        eprintln!("warning: pmax*sqrt(N) = {:.3} marks this target as inefficient to prepare", r.pmax_sqrt_n);
    }
    if let Some(p) = &args.plan_out {
        emit(Some(p), &json_bytes(&fitted)?)?;
    }
    if let Some(p) = &args.phases_out {
        emit(Some(p), &json_bytes(&prepared.phases)?)?;
    }
    let bytes = match args.format {
        ReportFormat::Json => json_bytes(r)?,
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            PrepReport::write_csv_header(&mut w)?;
            r.write_csv_row(&mut w)?;
            w.into_inner()?
        }
    };
    emit(args.out.as_deref(), &bytes)
}

pub fn cost(args: &CostArgs) -> Result<()> {
    let variant: BeVariant = args.variant.parse()?;
    let combos = || {
        args.d.iter().flat_map(move |&d| {
            args.s.iter().flat_map(move |&s| {
                args.lmax.iter().flat_map(move |&l| args.logeps.iter().map(move |&e| (d, s, l, e)))
            })
        })
    };
    let bytes = match args.format {
        CostFormat::Number => {
            let mut out = String::new();
            for (d, s, l, e) in combos() {
                out.push_str(&format!("{}\n", qsvt_toffoli(d, s, l, e, variant)?));
            }
            out.into_bytes()
        }
        CostFormat::Csv | CostFormat::Json => {
            if args.n.is_empty() {
                bail!("--n is required for csv and json output");
            }
            let mut rows = Vec::new();
            for &n in &args.n {
                for (d, s, l_max, log_inv_eps) in combos() {
                    let params = CostParams { n, d, s, l_max, log_inv_eps, aa_rounds: args.aa, variant };
                    rows.push(ResourceEstimate::new(params)?);
                }
            }
            if args.format == CostFormat::Json {
                json_bytes(&rows)?
            } else {
                let mut buf = Vec::new();
                write_sweep_csv(&mut buf, &rows)?;
                buf
            }
        }
    };
    emit(args.out.as_deref(), &bytes)
}

pub fn window(args: &WindowArgs) -> Result<()> {
    let mut buf = Vec::new();
    match args.fig {
        Some(6) => {
            let base = args.base_qubits.unwrap_or(10);
            let deltas = if args.deltas.is_empty() { default_delta_targets() } else { args.deltas.clone() };
            if deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
                bail!("tail targets must lie in (0, 1)");
            }
            let rows = fig6_rows(base, &deltas)?;
            for family in WindowFamily::ALL {
                let extras: Vec<f64> = rows.iter().filter(|r| r.window == family).map(|r| r.extra_ancillas).collect();
                if extras.len() > 2 {
                    let t = fit_trends(&deltas, &extras);
                    eprintln!(
                        "{:8} loglog: slope {:.3} rss {:.3e}   log: slope {:.3} rss {:.3e}",
                        family.name(),
                        t.loglog_slope,
                        t.loglog_rss,
                        t.log_slope,
                        t.log_rss
                    );
                }
            }
            write_fig6_csv(&mut buf, &rows)?;
        }
        Some(7) => {
            let base = args.base_qubits.unwrap_or(25);
            let costs = (0..=args.max_extra)
                .map(|e| window_prep_cost_comparison(e, base))
                .collect::<pqsvt::Result<Vec<_>>>()?;
            write_fig7_csv(&mut buf, &costs)?;
        }
        Some(f) => bail!("no sweep for figure {f} (expected 6 or 7)"),
        None => {
            let w = parse_window(args.window.as_deref().unwrap_or_default())?;
            let (Some(l), Some(c)) = (args.l, args.confidence) else {
                bail!("--l and --confidence are required with --window");
            };
            buf = json_bytes(&tail_report(&w, l, args.energy, c)?)?;
        }
    }
    emit(args.out.as_deref(), &buf)
}
