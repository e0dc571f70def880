use std::io::{BufRead, Write};

use super::oracle::BddOracle;
use crate::error::{Error, Result};
use crate::gauss::{GaussianBatch, SmoothingEstimate};
use crate::lattice::LatticeBasis;

/// Writes `bdd key=value…`, then the basis block, then the dual-sample batch.
pub fn write_oracle<W: Write>(oracle: &BddOracle, mut out: W) -> Result<()> {
    writeln!(
        out,
        "bdd eps={} alpha={} lambda1={} c={} eta_lo={} eta_hi={} trunc={}",
        oracle.eps,
        oracle.alpha,
        oracle.lambda1,
        oracle.sample_constant,
        oracle.eta_dual.s_lo,
        oracle.eta_dual.s_hi,
        oracle.eta_dual.truncation_radius
    )?;
    out.write_all(oracle.basis.to_text().as_bytes())?;
    oracle.samples.write_text(&mut out)
}

pub fn read_oracle<R: BufRead>(input: R) -> Result<BddOracle> {
    let lines: Vec<String> = input.lines().collect::<std::io::Result<_>>()?;
    let header = lines.first().ok_or(Error::Parse {
        line: 1,
        msg: "empty oracle file".into(),
    })?;
    let mut fields = std::collections::HashMap::new();
    let mut toks = header.split_whitespace();
    if toks.next() != Some("bdd") {
        return Err(Error::Parse {
            line: 1,
            msg: "missing bdd header".into(),
        });
    }
    for kv in toks {
        let (k, v) = kv.split_once('=').ok_or(Error::Parse {
            line: 1,
            msg: format!("bad field {kv:?}"),
        })?;
        let v: f64 = v.parse().map_err(|_| Error::Parse {
            line: 1,
            msg: format!("bad number for {k}"),
        })?;
        fields.insert(k.to_string(), v);
    }
    let get = |k: &str| {
        fields.get(k).copied().ok_or(Error::Parse {
            line: 1,
            msg: format!("missing {k}"),
        })
    };
    let n: usize = lines
        .get(1)
        .and_then(|l| l.trim().parse().ok())
        .ok_or(Error::Parse {
            line: 2,
            msg: "expected dimension".into(),
        })?;
    if lines.len() < n + 3 {
        return Err(Error::Parse {
            line: lines.len(),
            msg: "truncated oracle file".into(),
        });
    }
    let basis = LatticeBasis::parse(&lines[1..n + 2].join("\n"))?;
    let batch = GaussianBatch::read_text(lines[n + 2..].join("\n").as_bytes())?;
    let eta = SmoothingEstimate {
        eps: get("eps")?,
        s_lo: get("eta_lo")?,
        s_hi: get("eta_hi")?,
        truncation_radius: get("trunc")?,
    };
    BddOracle::assemble(
        basis,
        get("eps")?,
        get("alpha")?,
        get("lambda1")?,
        get("c")?,
        eta,
        batch,
    )
}
