use rand::Rng;

use super::grid::{enumerate_via_bdd, EnumerationGrid};
use super::quantum::QuantumCostReport;
use super::sphere::sample_unit_sphere;
use crate::bdd::{
    build_bdd_oracle, decoding_coefficient, BddConfig, BddDecoder, DualSource, ExactBdd,
};
use crate::error::{Error, Result};
use crate::gauss::smoothing_parameter;
use crate::lattice::rational::{rat_from_f64, rats_from_f64, Rational};
use crate::lattice::{dual_basis, enum_context, first_minimum, LatticeBasis, LatticePoint};
use crate::rng::{child_stream, stream_rng};

/// Smallest `ε` the desk-scale oracles are built with.
pub const EPS_FLOOR: f64 = 1e-6;

/// How the BDD oracle behind a solver is obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OracleMode {
    /// Enumeration-backed closest-vector oracle, advertised at the target `α`.
    Exact,
    /// Dual-Gaussian decoder with samples from the given source.
    Dgs(DualSource),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub oracle: OracleMode,
    /// Compare against the enumeration oracle and fill `success`.
    pub validate: bool,
    pub sample_constant: f64,
    /// Caps the dual sample count `m`.
    pub max_samples: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            oracle: OracleMode::Dgs(DualSource::Smoothing),
            validate: true,
            sample_constant: 10.0,
            max_samples: None,
        }
    }
}

/// Outcome of one solver invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverRun {
    pub seed: u64,
    pub queries_made: usize,
    pub candidates_seen: usize,
    pub best: LatticePoint,
    pub best_norm: f64,
    pub lambda1_oracle: Option<f64>,
    pub success: Option<bool>,
    /// Decoding coefficient used in the radius arithmetic.
    pub alpha: f64,
    pub eps: Option<f64>,
    /// False when the grid was sub-sampled.
    pub certifying: bool,
}

impl SolverRun {
    /// `best_norm=… lambda1_oracle=… queries=… success=…`.
    pub fn report_line(&self) -> String {
        let opt = |x: Option<f64>| x.map_or("na".to_string(), |v| format!("{v:.9}"));
        let succ = self.success.map_or("na".to_string(), |s| s.to_string());
        format!(
            "best_norm={:.9} lambda1_oracle={} queries={} success={}",
            self.best_norm,
            opt(self.lambda1_oracle),
            self.queries_made,
            succ
        )
    }
}

/// Running minimum by exact squared norm, ties broken on coefficients.
struct Best {
    key: Option<(Rational, LatticePoint)>,
    seen: usize,
}

impl Best {
    fn new() -> Self {
        Best { key: None, seen: 0 }
    }

    fn offer(&mut self, basis: &LatticeBasis, p: &LatticePoint, key: Rational) {
        self.seen += 1;
        let better = match &self.key {
            None => true,
            Some((k, q)) => key < *k || (key == *k && p.coeffs < q.coeffs),
        };
        if better {
            debug_assert!(basis.n() == p.dim());
            self.key = Some((key, p.clone()));
        }
    }

    fn offer_nonzero(&mut self, basis: &LatticeBasis, p: &LatticePoint) {
        if !p.is_zero() {
            self.offer(basis, p, basis.sq_norm_exact(&p.coeffs));
        } else {
            self.seen += 1;
        }
    }
}

/// Halves `ε` by factors of ten from `start` until the honest `α` reaches `target`.
pub fn choose_eps(basis: &LatticeBasis, target_alpha: f64, start: f64) -> Result<(f64, f64)> {
    let dual = dual_basis(basis).as_basis()?;
    let lambda1 = first_minimum(basis)?;
    let mut eps = start.clamp(EPS_FLOOR, 0.3);
    loop {
        let eta = smoothing_parameter(&dual, eps)?;
        let alpha = decoding_coefficient(eps, eta.s_hi, lambda1, 0.0);
        if alpha >= target_alpha || eps <= EPS_FLOOR {
            if alpha < target_alpha {
                log::warn!("honest alpha {alpha:.4} stays below {target_alpha:.4} at eps {eps:e}");
            }
            return Ok((eps, alpha));
        }
        eps = (eps / 10.0).max(EPS_FLOOR);
    }
}

/// Oracle for `target_alpha`; returns it with the `α` used for radii and the `ε` chosen.
fn make_oracle(
    basis: &LatticeBasis,
    target_alpha: f64,
    start_eps: f64,
    opts: &SolverOptions,
    seed: u64,
) -> Result<(Box<dyn BddDecoder>, f64, Option<f64>)> {
    match opts.oracle {
        OracleMode::Exact => Ok((
            Box::new(ExactBdd::new(basis.clone(), target_alpha)?),
            target_alpha,
            None,
        )),
        OracleMode::Dgs(source) => {
            let (eps, alpha) = choose_eps(basis, target_alpha, start_eps)?;
            let mut cfg = BddConfig::new(eps);
            cfg.source = source;
            cfg.sample_constant = opts.sample_constant;
            cfg.max_samples = opts.max_samples;
            let oracle = build_bdd_oracle(basis, &cfg, seed)?;
            log::info!(
                "solver oracle: eps={eps:e} honest alpha={alpha:.4} m={}",
                oracle.m()
            );
            Ok((Box::new(oracle), alpha, Some(eps)))
        }
    }
}

fn finish(
    basis: &LatticeBasis,
    best: Best,
    seed: u64,
    queries: usize,
    alpha: f64,
    eps: Option<f64>,
    validate: bool,
    certifying: bool,
) -> Result<SolverRun> {
    let seen = best.seen;
    let (key, point) = best.key.ok_or(Error::BudgetExhausted {
        repetitions: queries,
    })?;
    let lambda1 = if validate {
        Some(first_minimum(basis)?)
    } else {
        None
    };
    let success = if validate {
        let shortest = crate::lattice::shortest_vector_oracle(basis)?;
        Some(basis.sq_norm_exact(&shortest.coeffs) == key)
    } else {
        None
    };
    Ok(SolverRun {
        seed,
        queries_made: queries,
        candidates_seen: seen,
        best_norm: crate::lattice::rational::rat_to_f64(&key).sqrt(),
        best: point,
        lambda1_oracle: lambda1,
        success,
        alpha,
        eps,
        certifying,
    })
}

/// Grid coverage for the tradeoff solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridMode {
    Full,
    /// Uniformly sampled grid points; the run is not certifying.
    Sampled(usize),
}

/// Queries all of `Z_{10q}^n` at `t = 0` with a `0.1/q` decoder and keeps the shortest nonzero yield.
pub fn svp_tradeoff(
    basis: &LatticeBasis,
    q: u32,
    seed: u64,
    grid_mode: GridMode,
    opts: &SolverOptions,
) -> Result<SolverRun> {
    if q < 4 {
        return Err(Error::OutOfDomain(format!(
            "tradeoff solver needs q ≥ 4, got {q}"
        )));
    }
    let n = basis.n();
    let qf = q as f64;
    let target_alpha = 0.1 / qf;
    let start_eps = qf.powf(-32.0 * n as f64 / (qf * qf));
    let mut o = opts.clone();
    if let OracleMode::Dgs(DualSource::Smoothing) = o.oracle {
        o.oracle = OracleMode::Dgs(DualSource::Pipeline { q });
    }
    let (oracle, alpha, eps) = make_oracle(basis, target_alpha, start_eps, &o, seed)?;
    let grid = EnumerationGrid::at_origin(10 * q, n);
    let mut best = Best::new();
    let (queries, certifying) = match grid_mode {
        GridMode::Full => {
            let y = enumerate_via_bdd(&grid, oracle.as_ref());
            for p in y.points.iter().flatten() {
                best.offer_nonzero(basis, p);
            }
            (y.queries, true)
        }
        GridMode::Sampled(count) => {
            let mut rng = stream_rng(seed, child_stream(0x7d, 0));
            for _ in 0..count {
                let s: Vec<i64> = (0..n)
                    .map(|_| rng.random_range(0..(10 * q) as i64))
                    .collect();
                if let Some(p) = grid.query(oracle.as_ref(), &s) {
                    best.offer_nonzero(basis, &p);
                }
            }
            (count, false)
        }
    };
    finish(
        basis,
        best,
        seed,
        queries,
        alpha,
        eps,
        opts.validate,
        certifying,
    )
}

/// `p = 3` grid at the origin with the zero yield keyed at `‖B·e1‖ + 1`.
pub fn svp_shifted_min(
    basis: &LatticeBasis,
    seed: u64,
    opts: &SolverOptions,
) -> Result<(SolverRun, QuantumCostReport)> {
    let n = basis.n();
    let target_alpha = 0.3334;
    let (oracle, alpha, eps) = make_oracle(
        basis,
        target_alpha,
        2f64.powf(-0.322 * n as f64),
        opts,
        seed,
    )?;
    if alpha < target_alpha {
        log::warn!("minimum finding runs with alpha {alpha:.4} < {target_alpha}; radius 3·alpha·lambda1 may miss lambda1");
    }
    let e1_norm = basis.sq_norm_f64(&unit(n, 0)).sqrt();
    let sentinel = rat_from_f64((e1_norm + 1.0) * (e1_norm + 1.0));
    let grid = EnumerationGrid::at_origin(3, n);
    let y = enumerate_via_bdd(&grid, oracle.as_ref());
    let mut best = Best::new();
    for p in y.points.iter().flatten() {
        let key = if p.is_zero() {
            sentinel.clone()
        } else {
            basis.sq_norm_exact(&p.coeffs)
        };
        best.offer(basis, p, key);
    }
    if let Some((_, p)) = &best.key {
        if p.is_zero() {
            return Err(Error::Infeasible("every yield was the origin".into()));
        }
    }
    let per_query = eps.map_or(0.0, |e| (1.0 / e).log2() / (2.0 * n as f64));
    let report = QuantumCostReport::new(n, 3, alpha, eps, per_query);
    let run = finish(
        basis,
        best,
        seed,
        y.queries,
        alpha,
        eps,
        opts.validate,
        true,
    )?;
    Ok((run, report))
}

/// Where cap targets are placed relative to the guess `d_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CapRadiusPolicy {
    /// `α(1 − 1/n)·d_i`.
    #[default]
    Alpha,
    /// `min(α, √(1 − 4α²))(1 − 1/n)·d_i`.
    Optimal,
}

impl CapRadiusPolicy {
    pub fn factor(self, alpha: f64) -> f64 {
        match self {
            CapRadiusPolicy::Alpha => alpha,
            CapRadiusPolicy::Optimal => alpha.min((1.0 - 4.0 * alpha * alpha).max(0.0).sqrt()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapsOptions {
    pub solver: SolverOptions,
    pub policy: CapRadiusPolicy,
    /// Stop as soon as a vector of this squared norm is seen (validation runs).
    pub stop_at_lambda1: bool,
}

impl Default for CapsOptions {
    fn default() -> Self {
        CapsOptions {
            solver: SolverOptions::default(),
            policy: CapRadiusPolicy::Alpha,
            stop_at_lambda1: false,
        }
    }
}

/// Guesses `d_i = d/(1+1/n)^i` for `i = 0..=n²`, `d` the first LLL vector norm; for each,
/// `budget` random sphere targets of radius `r(1 − 1/n)·d_i`, each enumerated with `p = 2`.
pub fn svp_spherical_caps(
    basis: &LatticeBasis,
    alpha: f64,
    budget: usize,
    seed: u64,
    opts: &CapsOptions,
) -> Result<SolverRun> {
    let n = basis.n();
    let start_eps = 2f64.powf(-0.8216 * n as f64);
    let (oracle, alpha_used, eps) = make_oracle(basis, alpha, start_eps, &opts.solver, seed)?;
    let radius_alpha = alpha_used.min(alpha.max(alpha_used));
    let d = enum_context(basis).first_norm();
    let shrink = 1.0 + 1.0 / n as f64;
    let goal = if opts.stop_at_lambda1 {
        let s = crate::lattice::shortest_vector_oracle(basis)?;
        Some(basis.sq_norm_exact(&s.coeffs))
    } else {
        None
    };
    let mut best = Best::new();
    let mut queries = 0;
    'outer: for i in 0..=n * n {
        let di = d / shrink.powi(i as i32);
        let r = opts.policy.factor(radius_alpha) * (1.0 - 1.0 / n as f64) * di;
        for rep in 0..budget {
            let mut rng = stream_rng(seed, child_stream(i as u64, rep as u64));
            let v: Vec<f64> = sample_unit_sphere(n, &mut rng)
                .into_iter()
                .map(|x| x * r)
                .collect();
            let grid = EnumerationGrid::around(basis, 2, &rats_from_f64(&v));
            let y = enumerate_via_bdd(&grid, oracle.as_ref());
            queries += y.queries;
            for p in y.points.iter().flatten() {
                best.offer_nonzero(basis, p);
            }
            if let (Some(g), Some((k, _))) = (&goal, &best.key) {
                if k == g {
                    break 'outer;
                }
            }
        }
    }
    finish(
        basis,
        best,
        seed,
        queries,
        alpha_used,
        eps,
        opts.solver.validate,
        true,
    )
}

/// Per-target success of the capping step at guess `d`: fraction of sphere targets
/// whose `p = 2` enumeration contains a shortest vector.
pub fn cap_success_rate<D: BddDecoder + ?Sized>(
    oracle: &D,
    d: f64,
    radius_factor: f64,
    targets: usize,
    seed: u64,
) -> Result<f64> {
    let basis = oracle.basis();
    let n = basis.n();
    let shortest = crate::lattice::shortest_vector_oracle(basis)?;
    let goal = basis.sq_norm_exact(&shortest.coeffs);
    let r = radius_factor * (1.0 - 1.0 / n as f64) * d;
    let mut hits = 0;
    for t in 0..targets {
        let mut rng = stream_rng(seed, child_stream(0xca9, t as u64));
        let v: Vec<f64> = sample_unit_sphere(n, &mut rng)
            .into_iter()
            .map(|x| x * r)
            .collect();
        let grid = EnumerationGrid::around(basis, 2, &rats_from_f64(&v));
        let y = enumerate_via_bdd(&grid, oracle);
        if y.points
            .iter()
            .flatten()
            .any(|p| !p.is_zero() && basis.sq_norm_exact(&p.coeffs) == goal)
        {
            hits += 1;
        }
    }
    Ok(hits as f64 / targets as f64)
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}
