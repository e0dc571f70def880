use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use latticebdd::bdd::{build_bdd_oracle, read_oracle, write_oracle, BddConfig, DualSource};
use latticebdd::combiner::{
    combine_batch, dgs_pipeline, CombinerConfig, PipelineConfig, PipelineOptions,
};
use latticebdd::cost::{curve_csv, emit_curve, CapRadiusPolicy, CurveSpec, Variant};
use latticebdd::dense::{sample_at_smoothing, SmoothingSamplerOptions};
use latticebdd::gauss::{
    klein_threshold, sample_batch, ExactSampler, GaussianBatch, GaussianWidth, KleinSampler,
};
use latticebdd::lattice::rational::parse_rational;
use latticebdd::lattice::{
    dual_basis, enum_context, enumerate_within, first_minimum, is_lll_reduced, lll_reduce,
    LatticeBasis, LatticePoint, Rational, DEFAULT_DELTA,
};
use latticebdd::svp::{
    svp_shifted_min, svp_spherical_caps, svp_tradeoff, CapsOptions, GridMode, OracleMode,
    SolverOptions, SolverRun,
};
use latticebdd::verify::{self, Scale, Verdict};

use crate::report::Report;
use crate::*;

const DEFAULT_BASIS: &str = include_str!("../data/z4.txt");

/// Stream tags keep the draws of different subcommands apart under one seed.
const STREAM_SAMPLE: u64 = 1;

pub fn run(g: &Global, cmd: Command, r: &mut Report) -> Result<()> {
    match cmd {
        Command::Sample(a) => sample(g, a, r),
        Command::SampleSmoothing(a) => sample_smoothing(g, a, r),
        Command::Combine(a) => combine(g, a, r),
        Command::Pipeline(a) => pipeline(g, a, r),
        Command::Bdd(BddCommand::Build(a)) => bdd_build(g, a, r),
        Command::Bdd(BddCommand::Query(a)) => bdd_query(a, r),
        Command::Svp(c) => svp(g, c, r),
        Command::Cost(c) => cost(g, c, r),
        Command::Verify(a) => verify_cmd(g, a, r),
    }
}

fn load_basis(g: &Global) -> Result<LatticeBasis> {
    let text = match &g.basis {
        Some(p) => {
            std::fs::read_to_string(p).with_context(|| format!("reading basis {}", p.display()))?
        }
        None => DEFAULT_BASIS.to_string(),
    };
    LatticeBasis::parse(&text).context("parsing basis")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_batch(g: &Global, batch: &GaussianBatch, r: &mut Report) -> Result<()> {
    if let Some(path) = &g.out {
        let mut w = create(path)?;
        batch.write_text(&mut w)?;
        w.flush()?;
        r.line("output", &[("path", path.display().to_string())]);
    }
    Ok(())
}

fn batch_stats(basis: &LatticeBasis, batch: &GaussianBatch, r: &mut Report) {
    let n = basis.n() as f64;
    let mean_sq = batch
        .points
        .iter()
        .map(|p| basis.sq_norm_f64(&p.coeffs))
        .sum::<f64>()
        / batch.len().max(1) as f64;
    // A continuous Gaussian of width s has E‖x‖² = n·s²/(2π).
    let s = batch.width.get();
    r.line(
        "batch",
        &[
            ("count", batch.len().to_string()),
            ("width", format!("{s:.9}")),
            ("mean_sq_norm", format!("{mean_sq:.6}")),
            (
                "continuous_sq_norm",
                format!("{:.6}", n * s * s / (2.0 * std::f64::consts::PI)),
            ),
            (
                "claimed_closeness",
                format!("{:.3e}", batch.claimed_closeness),
            ),
        ],
    );
}

fn sample(g: &Global, a: SampleArgs, r: &mut Report) -> Result<()> {
    let basis = load_basis(g)?;
    let width = GaussianWidth::new(a.s)?;
    let points = match a.sampler {
        Sampler::Exact => {
            let t = ExactSampler::new(&basis, width)?;
            sample_batch(a.count, g.seed, STREAM_SAMPLE, |rng| t.sample(rng))
        }
        Sampler::Klein => {
            let k = KleinSampler::new(&basis, width)?;
            sample_batch(a.count, g.seed, STREAM_SAMPLE, |rng| k.sample(rng))
        }
    };
    let closeness = match a.sampler {
        Sampler::Exact => 0.0,
        // Klein's output is only asserted close above its threshold.
        Sampler::Klein => {
            if a.s >= klein_threshold(&basis) {
                0.0
            } else {
                1.0
            }
        }
    };
    let batch = GaussianBatch::new(points, width, STREAM_SAMPLE, closeness)?;
    batch_stats(&basis, &batch, r);
    write_batch(g, &batch, r)
}

fn sample_smoothing(g: &Global, a: SmoothingArgs, r: &mut Report) -> Result<()> {
    let basis = load_basis(g)?;
    let opts = SmoothingSamplerOptions {
        index_log: a.index_log,
        ..Default::default()
    };
    let (batch, rep) =
        sample_at_smoothing(&basis, GaussianWidth::new(a.s)?, a.count, g.seed, &opts)?;
    r.line(
        "smoothing",
        &[
            ("rounds", rep.rounds),
            ("rejected_rounds", rep.rejected_rounds),
            ("draws", rep.draws),
            ("kept", rep.kept),
        ],
    );
    batch_stats(&basis, &batch, r);
    write_batch(g, &batch, r)
}

fn combine(g: &Global, a: CombineArgs, r: &mut Report) -> Result<()> {
    let basis = load_basis(g)?;
    let f = File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let input = GaussianBatch::read_text(BufReader::new(f))?;
    if input.dim() != basis.n() {
        bail!(
            "batch rank {} does not match basis rank {}",
            input.dim(),
            basis.n()
        );
    }
    let mut cfg = CombinerConfig::new(a.q, a.d, a.c, input.width, a.eps)?;
    cfg.tuple_size = a.tuple_size;
    cfg.check_width(&basis)?;
    let out = combine_batch(&input, &cfg)?;
    let audit_ok = out.records.iter().all(|rec| rec.verify(&input.points, a.q));
    r.line(
        "combine",
        &[
            ("input", input.len().to_string()),
            ("required_input", cfg.input_count(basis.n()).to_string()),
            ("target", out.target.to_string()),
            ("achieved", out.achieved().to_string()),
            ("starved", out.starved().to_string()),
            ("tuple_size", cfg.tuple_size().to_string()),
            ("width_out", format!("{:.9}", cfg.width_out().get())),
            ("audit_ok", audit_ok.to_string()),
        ],
    );
    batch_stats(&basis, &out.batch, r);
    write_batch(g, &out.batch, r)
}

fn pipeline(g: &Global, a: PipelineArgs, r: &mut Report) -> Result<()> {
    let basis = load_basis(g)?;
    let start = a.start_width.unwrap_or_else(|| klein_threshold(&basis));
    let cfg = PipelineConfig::new(basis.n(), a.q, GaussianWidth::new(a.s)?, start)?;
    r.line(
        "pipeline_config",
        &[
            ("q", cfg.q.to_string()),
            ("d", cfg.d.to_string()),
            ("p", cfg.p.to_string()),
            ("k", cfg.k.to_string()),
            ("alpha", format!("{:.6}", cfg.alpha)),
            ("eps", format!("{:.3e}", cfg.eps)),
            ("seed_width", format!("{:.6}", cfg.seed_width())),
        ],
    );
    let opts = PipelineOptions {
        audit: a.audit,
        ..Default::default()
    };
    let out = dgs_pipeline(&basis, &cfg, a.count, g.seed, &opts)?;
    let rep = &out.report;
    let peaks: Vec<String> = rep.peak_level.iter().map(|x| x.to_string()).collect();
    r.line(
        "pipeline",
        &[
            ("seed_draws", rep.seed_draws.to_string()),
            ("combines", rep.combines.to_string()),
            ("starved_combines", rep.starved_combines.to_string()),
            ("filtered_in", rep.filtered_in.to_string()),
            ("filtered_kept", rep.filtered_kept.to_string()),
            ("peak_level", peaks.join("/")),
            ("audited", out.audit.len().to_string()),
            ("audit_failures", rep.audit_failures.to_string()),
        ],
    );
    batch_stats(&basis, &out.batch, r);
    write_batch(g, &out.batch, r)
}

fn bdd_build(g: &Global, a: BddBuildArgs, r: &mut Report) -> Result<()> {
    let Some(path) = &g.out else {
        bail!("bdd build needs --out for the decoder file");
    };
    let basis = load_basis(g)?;
    let mut cfg = BddConfig::new(a.eps);
    cfg.sample_constant = a.c;
    cfg.conservative_slack = a.conservative;
    cfg.max_samples = a.max_samples;
    cfg.source = match a.source {
        Source::Smoothing => DualSource::Smoothing,
        Source::Exact => DualSource::Exact,
        Source::Pipeline => DualSource::Pipeline { q: a.pipeline_q },
    };
    let oracle = build_bdd_oracle(&basis, &cfg, g.seed)?;
    let mut w = create(path)?;
    write_oracle(&oracle, &mut w)?;
    w.flush()?;
    r.line(
        "bdd_build",
        &[
            ("n", basis.n().to_string()),
            ("eps", format!("{:.3e}", oracle.eps)),
            ("m", oracle.m().to_string()),
            ("dual_width", format!("{:.9}", oracle.dual_width())),
            ("lambda1", format!("{:.9}", oracle.lambda1)),
            ("alpha", format!("{:.6}", oracle.alpha)),
            ("radius", format!("{:.9}", oracle.alpha * oracle.lambda1)),
            ("path", path.display().to_string()),
        ],
    );
    Ok(())
}

fn parse_target(s: &str, n: usize) -> Result<Vec<Rational>> {
    let t: Vec<_> = s
        .split(',')
        .map(|tok| parse_rational(tok).with_context(|| format!("bad coordinate {tok:?}")))
        .collect::<Result<_>>()?;
    if t.len() != n {
        bail!(
            "target {s:?} has {} coordinates, the lattice has rank {n}",
            t.len()
        );
    }
    Ok(t)
}

fn fmt_point(p: &LatticePoint) -> String {
    let c: Vec<String> = p.coeffs.iter().map(|x| x.to_string()).collect();
    c.join(",")
}

fn bdd_query(a: BddQueryArgs, r: &mut Report) -> Result<()> {
    let f = File::open(&a.oracle).with_context(|| format!("opening {}", a.oracle.display()))?;
    let oracle = read_oracle(BufReader::new(f))?;
    let n = oracle.basis.n();
    for (i, t) in a.target.iter().enumerate() {
        let target = parse_target(t, n)?;
        let (p, q) = oracle.decode(&target)?;
        let dist = {
            let e = p.embed_f64(&oracle.basis);
            e.iter()
                .zip(&target)
                .map(|(x, y)| (x - latticebdd::lattice::rational::rat_to_f64(y)).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        r.line(
            "bdd_query",
            &[
                ("index", i.to_string()),
                ("coeffs", fmt_point(&p)),
                ("distance", format!("{dist:.9}")),
                (
                    "in_radius",
                    (dist <= oracle.alpha * oracle.lambda1).to_string(),
                ),
                ("estimator_calls", q.estimator_calls.to_string()),
                ("ascent_steps", q.ascent_steps.to_string()),
                ("converged", q.converged.to_string()),
                ("gated", q.gated.to_string()),
            ],
        );
    }
    Ok(())
}

fn solver_options(o: &OracleArgs) -> SolverOptions {
    let mut s = SolverOptions {
        validate: !o.no_validate,
        max_samples: o.max_samples,
        ..Default::default()
    };
    if let OracleKind::Exact = o.oracle {
        s.oracle = OracleMode::Exact;
    }
    s
}

fn policy(p: Policy) -> CapRadiusPolicy {
    match p {
        Policy::Alpha => CapRadiusPolicy::Alpha,
        Policy::Optimal => CapRadiusPolicy::Optimal,
    }
}

fn run_line(kind: &str, run: &SolverRun, r: &mut Report) {
    let eps = run.eps.map_or("na".to_string(), |e| format!("{e:.3e}"));
    r.raw(&format!(
        "{kind} {} candidates={} alpha={:.6} eps={eps} certifying={} coeffs={}",
        run.report_line(),
        run.candidates_seen,
        run.alpha,
        run.certifying,
        fmt_point(&run.best)
    ));
}

fn svp(g: &Global, c: SvpCommand, r: &mut Report) -> Result<()> {
    let basis = load_basis(g)?;
    match c {
        SvpCommand::Tradeoff(a) => {
            let mode = a.sampled.map_or(GridMode::Full, GridMode::Sampled);
            let run = svp_tradeoff(&basis, a.q, g.seed, mode, &solver_options(&a.oracle))?;
            run_line("svp_tradeoff", &run, r);
        }
        SvpCommand::Minfind(a) => {
            let (run, q) = svp_shifted_min(&basis, g.seed, &solver_options(&a.oracle))?;
            run_line("svp_minfind", &run, r);
            if a.report_quantum {
                r.line(
                    "quantum",
                    &[
                        ("n", q.n.to_string()),
                        ("p", q.p.to_string()),
                        ("classical_queries", q.classical_queries.to_string()),
                        ("quantum_queries", q.quantum_queries.to_string()),
                        (
                            "per_query_cost_exponent",
                            format!("{:.6}", q.per_query_cost_exponent),
                        ),
                        (
                            "classical_exponent_sum",
                            format!("{:.6}", q.classical_exponent_sum()),
                        ),
                        ("quantum_exponent_sum", format!("{:.6}", q.exponent_sum())),
                    ],
                );
            }
        }
        SvpCommand::Caps(a) => {
            let opts = CapsOptions {
                solver: solver_options(&a.oracle),
                policy: policy(a.cap_radius_policy),
                stop_at_lambda1: a.stop_at_lambda1,
            };
            let run = svp_spherical_caps(&basis, a.alpha, a.budget, g.seed, &opts)?;
            run_line("svp_caps", &run, r);
        }
    }
    Ok(())
}

fn cost(g: &Global, c: CostCommand, r: &mut Report) -> Result<()> {
    match c {
        CostCommand::Curve(a) => {
            let variant: Variant = a.variant.parse()?;
            let spec = CurveSpec {
                policy: policy(a.policy),
                ..CurveSpec::new(variant)
            };
            let rows = emit_curve(&spec);
            let csv = curve_csv(&rows);
            let feasible = rows.iter().filter(|row| row.point.is_ok()).count();
            match &g.out {
                Some(path) => {
                    let mut w = create(path)?;
                    w.write_all(csv.as_bytes())?;
                    w.flush()?;
                }
                None => r.raw(csv.trim_end()),
            }
            let first = rows.iter().find_map(|row| row.point.as_ref().ok());
            let last = rows.iter().rev().find_map(|row| row.point.as_ref().ok());
            r.line(
                "cost_curve",
                &[
                    ("variant", variant.to_string()),
                    ("rows", rows.len().to_string()),
                    ("feasible", feasible.to_string()),
                    (
                        "c_first",
                        first.map_or("na".into(), |p| format!("{:.6}", p.c)),
                    ),
                    (
                        "c_last",
                        last.map_or("na".into(), |p| format!("{:.6}", p.c)),
                    ),
                ],
            );
        }
        CostCommand::Point(a) => {
            let variant: Variant = a.variant.parse()?;
            let p = variant.evaluate(a.b, policy(a.policy))?;
            r.raw(&format!("cost_point variant={variant} {p}"));
        }
    }
    Ok(())
}

/// Checks on the supplied basis itself, run with the lattice suite.
fn basis_checks(g: &Global) -> Result<Vec<Verdict>> {
    let basis = load_basis(g)?;
    let n = basis.n();
    let mut out = Vec::new();
    let dual = dual_basis(&basis);
    out.push(Verdict::new(
        "basis",
        "dual-pairing",
        dual.pairs_with(&basis),
        format!("n={n}"),
    ));
    let red = lll_reduce(&basis, DEFAULT_DELTA)?;
    let reduced = is_lll_reduced(&red.basis, DEFAULT_DELTA);
    out.push(Verdict::new(
        "basis",
        "lll",
        reduced,
        format!("first_norm={:.9}", enum_context(&basis).first_norm()),
    ));
    let l1 = first_minimum(&basis)?;
    let shell = enumerate_within(
        &basis,
        &vec![Rational::from_integer(0.into()); n],
        l1 * (1.0 + 1e-9),
    )?;
    // The ball of radius λ1 holds the origin and at least one pair ±v.
    let ok = shell.len() >= 3 && shell.len() % 2 == 1;
    out.push(Verdict::new(
        "basis",
        "first-minimum",
        ok,
        format!("lambda1={l1:.9} shell={}", shell.len() - 1),
    ));
    Ok(out)
}

fn verify_cmd(g: &Global, a: VerifyArgs, r: &mut Report) -> Result<()> {
    let scale = if g.quick { Scale::Quick } else { Scale::Full };
    let suites: Vec<&str> = match a.suite.as_str() {
        "all" => verify::SUITES.to_vec(),
        s if verify::SUITES.contains(&s) => vec![s],
        other => bail!(
            "unknown suite {other:?}; expected one of {:?} or all",
            verify::SUITES
        ),
    };
    let (mut passed, mut failed, mut notes) = (0, 0, 0);
    let mut tally = |v: &Verdict, r: &mut Report| {
        match (v.pass, v.ok()) {
            (true, _) => passed += 1,
            (false, true) => notes += 1,
            (false, false) => failed += 1,
        }
        r.raw(&format!("check {v}"));
    };
    for suite in suites {
        let started = std::time::Instant::now();
        let verdicts = if suite == "combiner" && (a.n.is_some() || a.q.is_some()) {
            let outputs = if g.quick { 10_000 } else { 100_000 };
            vec![
                verify::check_combiner_distribution(
                    a.n.unwrap_or(2),
                    a.q.unwrap_or(4),
                    outputs,
                    g.seed,
                )?,
                verify::check_coset_blindness(g.seed)?,
            ]
        } else {
            verify::run_suite(suite, scale, g.seed)?
        };
        for v in &verdicts {
            tally(v, r);
        }
        if suite == "lattice" && g.basis.is_some() {
            for v in basis_checks(g)? {
                tally(&v, r);
            }
        }
        let secs = started.elapsed().as_secs();
        if secs > a.suite_budget_secs {
            log::warn!(
                "suite {suite} took {secs}s, over its {}s budget",
                a.suite_budget_secs
            );
        }
    }
    r.line(
        "verify",
        &[("passed", passed), ("failed", failed), ("notes", notes)],
    );
    Ok(())
}
