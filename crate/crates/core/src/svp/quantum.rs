/// Query accounting for minimum finding over a `p^n` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumCostReport {
    pub n: usize,
    pub p: u32,
    pub alpha: f64,
    pub eps: Option<f64>,
    /// `p^n`.
    pub classical_queries: u128,
    /// `⌈p^{n/2}⌉`.
    pub quantum_queries: u128,
    /// Exponent `e` of the per-query cost `2^{e·n}`.
    pub per_query_cost_exponent: f64,
}

impl QuantumCostReport {
    pub fn new(
        n: usize,
        p: u32,
        alpha: f64,
        eps: Option<f64>,
        per_query_cost_exponent: f64,
    ) -> Self {
        let classical = (p as u128).pow(n as u32);
        QuantumCostReport {
            n,
            p,
            alpha,
            eps,
            classical_queries: classical,
            quantum_queries: ceil_sqrt(classical),
            per_query_cost_exponent,
        }
    }

    /// `log₂(quantum_queries) + e·n`: the base-2 logarithm of total quantum work.
    pub fn exponent_sum(&self) -> f64 {
        (self.quantum_queries as f64).log2() + self.per_query_cost_exponent * self.n as f64
    }

    /// Classical counterpart of [`exponent_sum`](Self::exponent_sum).
    pub fn classical_exponent_sum(&self) -> f64 {
        (self.classical_queries as f64).log2() + self.per_query_cost_exponent * self.n as f64
    }
}

fn ceil_sqrt(x: u128) -> u128 {
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while r * r < x {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_dimensional_counts() {
        let r = QuantumCostReport::new(10, 3, 0.3334, None, 0.161);
        assert_eq!(r.classical_queries, 59049);
        assert_eq!(r.quantum_queries, 243);
        assert!(r.quantum_queries * r.quantum_queries >= r.classical_queries);
    }

    #[test]
    fn odd_dimension_rounds_up() {
        let r = QuantumCostReport::new(3, 3, 0.4, None, 0.0);
        assert_eq!(r.classical_queries, 27);
        assert_eq!(r.quantum_queries, 6);
    }
}
