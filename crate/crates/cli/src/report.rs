use std::fmt::Display;
use std::io::Write;
use std::time::Instant;

use crate::Global;

/// Run report on stdout: a `config` line, result lines, then a `timing` line.
///
/// Everything except `config workers=` and the `timing` line is a function of the
/// arguments and seed alone.
pub struct Report {
    started: Instant,
    out: std::io::Stdout,
}

impl Report {
    pub fn new(g: &Global) -> Self {
        let args: Vec<String> = std::env::args().skip(1).collect();
        let mut r = Report {
            started: Instant::now(),
            out: std::io::stdout(),
        };
        let workers = g.workers.unwrap_or_else(rayon::current_num_threads);
        r.line(
            "config",
            &[
                ("version", env!("CARGO_PKG_VERSION").to_string()),
                ("latticebdd", latticebdd::VERSION.to_string()),
                ("args", format!("{:?}", args.join(" "))),
                ("seed", g.seed.to_string()),
                ("workers", workers.to_string()),
                ("budget_nodes", g.budget_nodes.to_string()),
                ("quick", g.quick.to_string()),
            ],
        );
        r
    }

    pub fn line<V: Display>(&mut self, kind: &str, fields: &[(&str, V)]) {
        let mut s = kind.to_string();
        for (k, v) in fields {
            s.push_str(&format!(" {k}={v}"));
        }
        self.raw(&s);
    }

    /// A line already in `key=value` form.
    pub fn raw(&mut self, s: &str) {
        let _ = writeln!(self.out, "{s}");
    }

    pub fn finish(mut self) {
        let ms = self.started.elapsed().as_millis();
        self.raw(&format!("timing elapsed_ms={ms}"));
        let _ = self.out.flush();
    }
}
