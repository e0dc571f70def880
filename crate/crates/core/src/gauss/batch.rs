use std::io::{BufRead, Write};

use rayon::prelude::*;

use super::GaussianWidth;
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::rng::{child_stream, stream_rng, StreamRng};

/// Draws per RNG stream in [`sample_batch`].
pub const SAMPLE_CHUNK: usize = 1024;

/// A batch of lattice points claimed to be close to `D_{L,s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianBatch {
    pub points: Vec<LatticePoint>,
    pub width: GaussianWidth,
    pub stream_id: u64,
    /// Statistical-distance bound asserted by the producer.
    pub claimed_closeness: f64,
}

impl GaussianBatch {
    pub fn new(
        points: Vec<LatticePoint>,
        width: GaussianWidth,
        stream_id: u64,
        claimed_closeness: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&claimed_closeness) {
            return Err(Error::OutOfDomain(format!(
                "closeness {claimed_closeness} not in [0, 1]"
            )));
        }
        Ok(GaussianBatch {
            points,
            width,
            stream_id,
            claimed_closeness,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, LatticePoint::dim)
    }

    /// Text form: a header line then one row of coefficients per point.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "n={} s={} stream={} count={} closeness={}",
            self.dim(),
            self.width.get(),
            self.stream_id,
            self.len(),
            self.claimed_closeness
        )?;
        for p in &self.points {
            let row: Vec<String> = p.coeffs.iter().map(i64::to_string).collect();
            writeln!(out, "{}", row.join(" "))?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty batch".into(),
        })?;
        let header = header?;
        let mut fields = std::collections::HashMap::new();
        for kv in header.split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse {
                line: 1,
                msg: format!("bad header field {kv:?}"),
            })?;
            fields.insert(k.to_string(), v.to_string());
        }
        let get = |k: &str| -> Result<&str> {
            fields
                .get(k)
                .map(String::as_str)
                .ok_or_else(|| Error::Parse {
                    line: 1,
                    msg: format!("missing {k}"),
                })
        };
        let bad = |k: &str| Error::Parse {
            line: 1,
            msg: format!("bad value for {k}"),
        };
        let n: usize = get("n")?.parse().map_err(|_| bad("n"))?;
        let s: f64 = get("s")?.parse().map_err(|_| bad("s"))?;
        let stream_id: u64 = get("stream")?.parse().map_err(|_| bad("stream"))?;
        let count: usize = get("count")?.parse().map_err(|_| bad("count"))?;
        let closeness: f64 = get("closeness")?.parse().map_err(|_| bad("closeness"))?;
        let mut points = Vec::with_capacity(count);
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let coeffs: std::result::Result<Vec<i64>, _> =
                line.split_whitespace().map(str::parse).collect();
            let coeffs = coeffs.map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            if coeffs.len() != n {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {n} coefficients"),
                });
            }
            points.push(LatticePoint::new(coeffs));
        }
        if points.len() != count {
            return Err(Error::Parse {
                line: count + 1,
                msg: format!("expected {count} rows, found {}", points.len()),
            });
        }
        GaussianBatch::new(points, GaussianWidth::new(s)?, stream_id, closeness)
    }
}

/// `count` draws, chunked over streams derived from `(seed, stream)`.
///
/// Chunk `i` always uses the same stream, so the output is independent of the
/// thread count and ordered by chunk then index.
pub fn sample_batch<F>(count: usize, seed: u64, stream: u64, draw: F) -> Vec<LatticePoint>
where
    F: Fn(&mut StreamRng) -> LatticePoint + Sync,
{
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    let parts: Vec<Vec<LatticePoint>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, child_stream(stream, c as u64));
            let len = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn text_round_trip() {
        let pts = vec![
            LatticePoint::new(vec![1, -2]),
            LatticePoint::new(vec![0, 5]),
        ];
        let b = GaussianBatch::new(pts, GaussianWidth::new(2.75).unwrap(), 9, 0.125).unwrap();
        let mut buf = Vec::new();
        b.write_text(&mut buf).unwrap();
        let back = GaussianBatch::read_text(&buf[..]).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn batch_is_independent_of_thread_count() {
        let draw = |rng: &mut StreamRng| LatticePoint::new(vec![rng.random_range(-5..5)]);
        let a = sample_batch(3000, 4, 1, draw);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let b = pool.install(|| sample_batch(3000, 4, 1, draw));
        assert_eq!(a, b);
        assert_eq!(a.len(), 3000);
    }
}
