//! Asymptotic exponent arithmetic for the capping and minimum-finding solvers.
//!
//! Exponents are base-2 and per dimension: a cost `2^{c·n}` is reported as `c`.
//! Lower-order terms are dropped throughout.

use std::f64::consts::{FRAC_PI_2, LN_2};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
pub use crate::svp::CapRadiusPolicy;

/// Largest kissing exponent considered, `β = 2^{0.402}`.
pub const B_MAX: f64 = 0.402;
/// Above this kissing exponent minimum finding uses the small-`ε` decoding bound.
pub const MINFIND_SMALL_EPS_FROM: f64 = 0.40075;
/// Spacing of the emitted `b` grid.
pub const B_STEP: f64 = 0.002;
/// Decoding coefficient every solver needs to reach.
pub const ALPHA_MIN: f64 = 1.0 / 3.0;

const A_MAX: f64 = 8.0;
const SCAN_POINTS: usize = 2000;
const A_TOL: f64 = 1e-10;

/// `A` at which the large-`ε` coefficient peaks.
pub fn large_eps_peak() -> f64 {
    1.0 / (2.0 * LN_2)
}

/// `½·√(A/(A+b))`, valid for `A ≥ 1/(2 ln 2) − b` and `A ≥ 4b/5`.
pub fn alpha_small_eps(a: f64, b: f64) -> Result<f64> {
    let floor = small_eps_floor(b);
    if !(a >= floor - 1e-12) || b < 0.0 {
        return Err(Error::OutOfDomain(format!(
            "small-eps bound needs A ≥ {floor:.6}, got A={a}, b={b}"
        )));
    }
    Ok(0.5 * (a / (a + b)).sqrt())
}

fn small_eps_floor(b: f64) -> f64 {
    (large_eps_peak() - b).max(0.8 * b).max(0.0)
}

/// `2^{−A}·√A·√(2e ln 2) / (2·2^b)`.
pub fn alpha_large_eps(a: f64, b: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    2f64.powf(-a) * a.sqrt() * (2.0 * std::f64::consts::E * LN_2).sqrt() / (2.0 * 2f64.powf(b))
}

/// The two `A` where the large-`ε` coefficient equals `alpha`, left root first.
pub fn large_eps_roots(alpha: f64, b: f64) -> Result<(f64, f64)> {
    let peak = large_eps_peak();
    if alpha_large_eps(peak, b) < alpha {
        return Err(Error::Infeasible(format!(
            "large-eps coefficient never reaches {alpha} at b={b}"
        )));
    }
    let f = |a: f64| alpha_large_eps(a, b) - alpha;
    let left = bisect(f, 1e-300, peak);
    let mut hi = 2.0 * peak;
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    Ok((left, bisect(f, peak, hi)))
}

/// Root of `f` on `[lo, hi]` given a sign change.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo) >= 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) >= 0.0) == flo {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < A_TOL * 1e-2 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Cap centre radius `r` and half-angle `φ` (units of `λ1`) for decoding coefficient `alpha`.
pub fn cap_angle(alpha: f64, policy: CapRadiusPolicy) -> Result<(f64, f64)> {
    if !(alpha > 0.25 && alpha <= 0.5) {
        return Err(Error::OutOfDomain(format!(
            "cap needs alpha in (1/4, 1/2], got {alpha}"
        )));
    }
    let r = policy.factor(alpha);
    if r <= 0.0 {
        // r → 0 at alpha = 1/2 under the optimal policy; the cap tends to a hemisphere.
        return Ok((0.0, FRAC_PI_2));
    }
    let cos = ((1.0 + r * r - 4.0 * alpha * alpha) / (2.0 * r)).clamp(0.0, 1.0);
    Ok((r, cos.acos()))
}

/// `−log₂ sin φ`: exponent of the inverse cap fraction.
pub fn cap_fraction_exponent(phi: f64) -> Result<f64> {
    if !(phi > 0.0 && phi <= FRAC_PI_2 + 1e-12) {
        return Err(Error::OutOfDomain(format!(
            "cap half-angle must be in (0, π/2], got {phi}"
        )));
    }
    Ok(-phi.sin().min(1.0).log2())
}

/// `A/2`: per-call decoding cost for `ε = 2^{−A·n}`.
pub fn bdd_query_exponent(a: f64) -> f64 {
    a / 2.0
}

/// `½ + A/2`: cost of building the decoder's dual samples.
pub fn bdd_build_exponent(a: f64) -> f64 {
    0.5 + a / 2.0
}

/// Which decoding bound ties `A` to `α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EpsRegime {
    SmallEps,
    LargeEps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Capping(EpsRegime),
    Minfind,
}

/// One of the six cost curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Variant {
    pub family: Family,
    pub quantum: bool,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant {
            family: Family::Capping(EpsRegime::SmallEps),
            quantum: false,
        },
        Variant {
            family: Family::Capping(EpsRegime::LargeEps),
            quantum: false,
        },
        Variant {
            family: Family::Minfind,
            quantum: false,
        },
        Variant {
            family: Family::Capping(EpsRegime::SmallEps),
            quantum: true,
        },
        Variant {
            family: Family::Capping(EpsRegime::LargeEps),
            quantum: true,
        },
        Variant {
            family: Family::Minfind,
            quantum: true,
        },
    ];

    pub fn evaluate(self, b: f64, policy: CapRadiusPolicy) -> Result<CostPoint> {
        match self.family {
            Family::Capping(regime) => capping_exponent(b, regime, self.quantum, policy),
            Family::Minfind => minfind_exponent(b, self.quantum),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = match self.family {
            Family::Capping(EpsRegime::SmallEps) => "cap-small-eps",
            Family::Capping(EpsRegime::LargeEps) => "cap-large-eps",
            Family::Minfind => "minfind",
        };
        write!(
            f,
            "{family}-{}",
            if self.quantum { "quantum" } else { "classical" }
        )
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.to_string() == s)
            .ok_or_else(|| Error::OutOfDomain(format!("unknown cost variant {s:?}")))
    }
}

/// Optimised exponent at one kissing exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct CostPoint {
    pub b: f64,
    pub a: f64,
    pub alpha: f64,
    /// Cap geometry; absent for minimum finding.
    pub r: Option<f64>,
    pub phi: Option<f64>,
    pub c: f64,
}

impl fmt::Display for CostPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |x: Option<f64>| x.map_or("na".to_string(), |v| format!("{v:.6}"));
        write!(
            f,
            "b={:.6} A={:.6} alpha={:.6} r={} phi={} c={:.6}",
            self.b,
            self.a,
            self.alpha,
            opt(self.r),
            opt(self.phi),
            self.c
        )
    }
}

/// `c(b) = min_A [e0 + A/2 + g·(−log₂ sin φ)]` with `(e0, g) = (1, 1)` classically and `(½, ½)` with Grover.
pub fn capping_exponent(
    b: f64,
    regime: EpsRegime,
    quantum: bool,
    policy: CapRadiusPolicy,
) -> Result<CostPoint> {
    check_b(b)?;
    let (lo, hi) = match regime {
        EpsRegime::SmallEps => (small_eps_floor(b), A_MAX),
        EpsRegime::LargeEps => large_eps_roots(ALPHA_MIN, b)?,
    };
    let (e0, g) = if quantum { (0.5, 0.5) } else { (1.0, 1.0) };
    let alpha_of = |a: f64| match regime {
        EpsRegime::SmallEps => 0.5 * (a / (a + b)).sqrt(),
        EpsRegime::LargeEps => alpha_large_eps(a, b),
    };
    let objective = |a: f64| {
        let alpha = alpha_of(a);
        match cap_angle(alpha.min(0.5), policy) {
            Ok((_, phi)) if phi > 0.0 => {
                e0 + a / 2.0 + g * cap_fraction_exponent(phi).unwrap_or(f64::INFINITY)
            }
            _ => f64::INFINITY,
        }
    };
    let a = minimize(&objective, lo, hi);
    let c = objective(a);
    if !c.is_finite() {
        return Err(Error::Infeasible(format!("no cap is feasible at b={b}")));
    }
    let alpha = alpha_of(a).min(0.5);
    let (r, phi) = cap_angle(alpha, policy)?;
    Ok(CostPoint {
        b,
        a,
        alpha,
        r: Some(r),
        phi: Some(phi),
        c,
    })
}

/// `c = log₂3 (halved with Grover) + A*/2`, `A*` the least `A` giving `α ≥ 1/3`.
pub fn minfind_exponent(b: f64, quantum: bool) -> Result<CostPoint> {
    check_b(b)?;
    let a = if b >= MINFIND_SMALL_EPS_FROM {
        // α = 1/3 exactly on A = 4b/5; the small-eps domain holds there from this b on.
        small_eps_floor(b).max(0.8 * b)
    } else {
        large_eps_roots(ALPHA_MIN, b)?.0
    };
    let base = if quantum {
        3f64.log2() / 2.0
    } else {
        3f64.log2()
    };
    Ok(CostPoint {
        b,
        a,
        alpha: ALPHA_MIN,
        r: None,
        phi: None,
        c: base + a / 2.0,
    })
}

fn check_b(b: f64) -> Result<()> {
    if !(0.0..=B_MAX + 1e-12).contains(&b) {
        return Err(Error::OutOfDomain(format!(
            "kissing exponent must lie in [0, {B_MAX}], got {b}"
        )));
    }
    Ok(())
}

/// Grid scan to bracket the minimum, then golden-section refinement.
pub fn minimize(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let step = (hi - lo) / SCAN_POINTS as f64;
    let mut best = (f64::INFINITY, lo);
    for i in 0..=SCAN_POINTS {
        let x = lo + step * i as f64;
        let y = f(x);
        if y < best.0 {
            best = (y, x);
        }
    }
    let (mut a, mut b) = ((best.1 - step).max(lo), (best.1 + step).min(hi));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > A_TOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (a + b);
    [best.1, mid]
        .into_iter()
        .min_by(|x, y| f(*x).total_cmp(&f(*y)))
        .unwrap_or(mid)
}

/// `b = 0, 0.002, …, 0.402`.
pub fn b_grid() -> Vec<f64> {
    let steps = (B_MAX / B_STEP).round() as usize;
    (0..=steps)
        .map(|i| (i as f64 * B_STEP * 1e6).round() / 1e6)
        .collect()
}

/// Curve request: variant, `b` values and cap policy.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    pub variant: Variant,
    pub b_grid: Vec<f64>,
    pub policy: CapRadiusPolicy,
}

impl CurveSpec {
    /// Default grid with the optimal cap radius.
    pub fn new(variant: Variant) -> Self {
        CurveSpec {
            variant,
            b_grid: b_grid(),
            policy: CapRadiusPolicy::Optimal,
        }
    }
}

#[derive(Debug)]
pub struct CurveRow {
    pub b: f64,
    pub point: Result<CostPoint>,
}

/// One row per `b`, infeasible points kept.
pub fn emit_curve(spec: &CurveSpec) -> Vec<CurveRow> {
    spec.b_grid
        .par_iter()
        .map(|&b| CurveRow {
            b,
            point: spec.variant.evaluate(b, spec.policy),
        })
        .collect()
}

/// `b,c` with six decimals; infeasible rows carry `infeasible`.
pub fn curve_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from("b,c\n");
    for row in rows {
        match &row.point {
            Ok(p) => out.push_str(&format!("{:.6},{:.6}\n", row.b, p.c)),
            Err(_) => out.push_str(&format!("{:.6},infeasible\n", row.b)),
        }
    }
    out
}

/// True when every feasible `c` is at least its predecessor's, up to `tol`.
pub fn is_non_decreasing(rows: &[CurveRow], tol: f64) -> bool {
    let cs: Vec<f64> = rows
        .iter()
        .filter_map(|r| r.point.as_ref().ok().map(|p| p.c))
        .collect();
    cs.windows(2).all(|w| w[1] >= w[0] - tol)
}
