//! Check and enumeration reports with a stable text serialization.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub n: usize,
    pub m: u32,
    pub check_name: String,
    pub pass: bool,
    pub residual_max: f64,
    /// Number of identities or cases evaluated.
    pub cases: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    pub elapsed_ms: f64,
}

impl CheckReport {
    pub fn new(n: usize, m: u32, check_name: impl Into<String>) -> Self {
        Self {
            n,
            m,
            check_name: check_name.into(),
            pass: true,
            residual_max: 0.0,
            cases: 0,
            failures: Vec::new(),
            elapsed_ms: 0.0,
        }
    }

    /// Records one residual against `tol`; `label` is kept only on failure.
    pub fn record(&mut self, label: impl FnOnce() -> String, residual: f64, tol: f64) {
        self.cases += 1;
        if residual.is_nan() || residual > self.residual_max {
            self.residual_max = residual;
        }
        if !(residual < tol) {
            self.pass = false;
            self.failures.push(format!("{}: residual {residual:.3e}", label()));
        }
    }

    /// Records a boolean outcome with no residual.
    pub fn record_bool(&mut self, label: impl FnOnce() -> String, ok: bool) {
        self.cases += 1;
        if !ok {
            self.pass = false;
            self.failures.push(label());
        }
    }

    pub fn finish(mut self, watch: Stopwatch) -> Self {
        self.elapsed_ms = watch.elapsed_ms();
        self
    }

    pub fn to_structured_text(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} (n={}, m={}): {} cases, max residual {:.3e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check_name,
            self.n,
            self.m,
            self.cases,
            self.residual_max
        )?;
        for failure in &self.failures {
            write!(f, "\n    {failure}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Matrix,
    Symbolic,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Matrix => "matrix",
            Backend::Symbolic => "symbolic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationReport {
    pub n: usize,
    pub m: u32,
    pub check_name: String,
    pub backend: Backend,
    pub pass: bool,
    pub order_found: u64,
    pub order_predicted: u64,
    pub truncated: bool,
    /// Number of new elements discovered at each BFS depth.
    pub level_sizes: Vec<u64>,
    pub elapsed_ms: f64,
}

impl EnumerationReport {
    pub fn to_structured_text(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn max_frontier(&self) -> u64 {
        self.level_sizes.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for EnumerationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.truncated {
            "TRUNCATED"
        } else if self.pass {
            "PASS"
        } else {
            "FAIL"
        };
        write!(
            f,
            "[{status}] image order (n={}, m={}, {} backend): found {}{}, predicted {} \
             ({} BFS levels, widest {}, {:.1} ms)",
            self.n,
            self.m,
            self.backend,
            self.order_found,
            if self.truncated { "+" } else { "" },
            self.order_predicted,
            self.level_sizes.len(),
            self.max_frontier(),
            self.elapsed_ms
        )
    }
}

/// Wall-clock timer; reads zero on targets without a monotonic clock.
#[derive(Debug, Clone, Copy)]
pub struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    pub fn start() -> Self {
        Self {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    pub fn elapsed_ms(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed().as_secs_f64() * 1e3
        }
        #[cfg(target_arch = "wasm32")]
        {
            0.0
        }
    }
}
