//! Distances between finite distributions and a chi-square goodness-of-fit test.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Minimum expected count per bin after merging.
pub const MIN_EXPECTED: f64 = 10.0;
/// Rejection level of [`chi_square_gof`].
pub const GOF_LEVEL: f64 = 0.01;

/// `½ Σ |p_i − q_i|` over a shared support index.
pub fn statistical_distance(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distributions must share a support index");
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Normalised histogram.
pub fn empirical(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    counts
        .iter()
        .map(|&c| c as f64 / total.max(1) as f64)
        .collect()
}

/// Distance from the uniform distribution on `counts.len()` outcomes.
pub fn distance_from_uniform(counts: &[u64]) -> f64 {
    let u = vec![1.0 / counts.len() as f64; counts.len()];
    statistical_distance(&empirical(counts), &u)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: usize,
}

impl GofResult {
    pub fn passes(&self) -> bool {
        self.p_value > GOF_LEVEL
    }
}

/// Pearson chi-square test of `observed` against `probs` (renormalised).
///
/// Adjacent bins, in the order given, are merged until each expected count
/// reaches [`MIN_EXPECTED`]; a short remainder joins the last bin.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> GofResult {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let mass: f64 = probs.iter().sum();
    let scale = total as f64 / mass;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &p) in observed.iter().zip(probs) {
        o += ob as f64;
        e += p * scale;
        if e >= MIN_EXPECTED {
            bins.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => bins.push((o, e)),
        }
    }
    let statistic: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64)
            .expect("positive dof")
            .cdf(statistic)
    };
    GofResult {
        statistic,
        dof,
        p_value,
        bins: bins.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        assert_eq!(statistical_distance(&[0.3, 0.7], &[0.3, 0.7]), 0.0);
        assert_eq!(statistical_distance(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert!((statistical_distance(&[0.6, 0.4], &[0.5, 0.5]) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn gof_accepts_exact_counts_and_rejects_skew() {
        let probs = [0.25; 4];
        assert!(chi_square_gof(&[250, 250, 250, 250], &probs).passes());
        assert!(!chi_square_gof(&[400, 200, 200, 200], &probs).passes());
    }

    #[test]
    fn sparse_bins_are_merged() {
        let probs = [0.495, 0.495, 0.005, 0.003, 0.002];
        let r = chi_square_gof(&[495, 495, 5, 3, 2], &probs);
        assert_eq!(r.bins, 3);
        assert!((r.statistic).abs() < 1e-12);
    }
}
