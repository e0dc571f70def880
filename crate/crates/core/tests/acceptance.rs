//! One verdict line per acceptance criterion, at the declared problem sizes.
//! Each line carries its wall-clock time against the allowed budget.

use std::time::{Duration, Instant};

use latticebdd::verify::{self, coset_cases, Verdict};

const SEED: u64 = 1;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> latticebdd::Result<Vec<Verdict>>,
}

fn cost_endpoints() -> latticebdd::Result<Vec<Verdict>> {
    Ok(vec![verify::check_cost_endpoints()?])
}

fn decoder_exponents() -> latticebdd::Result<Vec<Verdict>> {
    Ok(vec![verify::check_decoder_exponents()?])
}

fn combiner_distribution() -> latticebdd::Result<Vec<Verdict>> {
    [(2, 2), (3, 2), (2, 4), (3, 4)]
        .into_iter()
        .map(|(n, q)| verify::check_combiner_distribution(n, q, 100_000, SEED))
        .collect()
}

fn enumeration_completeness() -> latticebdd::Result<Vec<Verdict>> {
    Ok(vec![verify::check_enumeration_completeness(50, 5, SEED)?])
}

fn svp_end_to_end() -> latticebdd::Result<Vec<Verdict>> {
    Ok(vec![
        verify::check_svp_exact(50, 6, SEED)?,
        verify::check_svp_dgs(10, 5, SEED)?,
    ])
}

fn coset_uniformity() -> latticebdd::Result<Vec<Verdict>> {
    coset_cases()
        .into_iter()
        .map(|(n, q, eps)| verify::check_coset_uniformity(n, q, eps, 1_000_000, SEED))
        .collect()
}

fn gauss_numerics() -> latticebdd::Result<Vec<Verdict>> {
    Ok(vec![
        verify::check_convolution(1_000_000, 0.01, SEED)?,
        verify::check_eta_powers(20, SEED)?,
        verify::check_dual_minimum_bound(20, SEED)?,
    ])
}

fn quantum_accounting() -> latticebdd::Result<Vec<Verdict>> {
    Ok(vec![verify::check_quantum_accounting()?])
}

const CRITERIA: [Criterion; 8] = [
    Criterion {
        id: 1,
        name: "cost-endpoints",
        budget: Duration::from_secs(10),
        run: cost_endpoints,
    },
    Criterion {
        id: 2,
        name: "decoder-exponents",
        budget: Duration::from_secs(1),
        run: decoder_exponents,
    },
    Criterion {
        id: 3,
        name: "combiner-distribution",
        budget: Duration::from_secs(600),
        run: combiner_distribution,
    },
    Criterion {
        id: 4,
        name: "enumeration-completeness",
        budget: Duration::from_secs(300),
        run: enumeration_completeness,
    },
    Criterion {
        id: 5,
        name: "svp-end-to-end",
        budget: Duration::from_secs(900),
        run: svp_end_to_end,
    },
    Criterion {
        id: 6,
        name: "coset-uniformity",
        budget: Duration::from_secs(300),
        run: coset_uniformity,
    },
    Criterion {
        id: 7,
        name: "convolution-and-smoothing-bounds",
        budget: Duration::from_secs(600),
        run: gauss_numerics,
    },
    Criterion {
        id: 8,
        name: "quantum-accounting",
        budget: Duration::from_secs(1),
        run: quantum_accounting,
    },
];

fn main() {
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let started = Instant::now();
        let outcome = (c.run)();
        let elapsed = started.elapsed();
        let in_time = elapsed <= c.budget;
        let (pass, details) = match &outcome {
            Ok(vs) => (
                vs.iter().all(Verdict::ok),
                vs.iter()
                    .map(|v| format!("[{v}]"))
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
            Err(e) => (false, format!("error={e}")),
        };
        let pass = pass && in_time;
        println!(
            "criterion={} name={} verdict={} elapsed_s={:.2} budget_s={} {}",
            c.id,
            c.name,
            if pass { "pass" } else { "fail" },
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            details
        );
        if !pass {
            failed.push(c.id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
