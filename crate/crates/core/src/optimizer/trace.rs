use std::fmt::Write as _;

/// One record per solver iteration, in execution order.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    /// Outer ratio iteration: parameter, parametric objective at the new
    /// iterate, and its absolute value as termination residual.
    Dinkelbach { iter: usize, eta: f64, objective: f64, residual: f64 },
    /// Penalty step with its weight and remaining constraint violation.
    Penalty { iter: usize, step: usize, omega: f64, violation: f64 },
    /// One alternate-search sweep: penalized objective after it and the
    /// change `upsilon` it produced.
    Alternate { iter: usize, step: usize, sweep: usize, objective: f64, upsilon: f64 },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OptimizationTrace {
    pub events: Vec<TraceEvent>,
    pub dinkelbach_iters: usize,
    pub penalty_steps: usize,
    pub alternate_sweeps: usize,
    /// Convex subproblems solved by the convex-concave procedure.
    pub dc_iters: usize,
    pub pg_iters: usize,
    pub line_search_stalls: usize,
}

impl OptimizationTrace {
    /// Ratio parameters in the order they were used.
    pub fn eta_sequence(&self) -> Vec<f64> {
        self.events
            .iter()
            .filter_map(|e| match e {
                TraceEvent::Dinkelbach { eta, .. } => Some(*eta),
                _ => None,
            })
            .collect()
    }

    pub fn last_residual(&self) -> Option<f64> {
        self.events.iter().rev().find_map(|e| match e {
            TraceEvent::Dinkelbach { residual, .. } => Some(*residual),
            _ => None,
        })
    }

    /// Penalized objective after each sweep, grouped by `(iter, step)`.
    pub fn alternate_runs(&self) -> Vec<Vec<f64>> {
        let mut runs: Vec<Vec<f64>> = Vec::new();
        let mut key = None;
        for e in &self.events {
            if let TraceEvent::Alternate { iter, step, objective, .. } = e {
                if key != Some((*iter, *step)) {
                    runs.push(Vec::new());
                    key = Some((*iter, *step));
                }
                runs.last_mut().unwrap().push(*objective);
            }
        }
        runs
    }

    /// Tab-separated lines, one per event, prefixed by `label`.
    pub fn to_tsv(&self, label: &str) -> String {
        let mut out = String::new();
        for e in &self.events {
            match e {
                TraceEvent::Dinkelbach { iter, eta, objective, residual } => {
                    writeln!(out, "{label}\tdinkelbach\t{iter}\t\t\t{eta:e}\t{objective:e}\t{residual:e}")
                }
                TraceEvent::Penalty { iter, step, omega, violation } => {
                    writeln!(out, "{label}\tpenalty\t{iter}\t{step}\t\t{omega:e}\t{violation:e}\t")
                }
                TraceEvent::Alternate { iter, step, sweep, objective, upsilon } => {
                    writeln!(out, "{label}\talternate\t{iter}\t{step}\t{sweep}\t\t{objective:e}\t{upsilon:e}")
                }
            }
            .expect("writing to a String");
        }
        out
    }
}

/// Column names matching [`OptimizationTrace::to_tsv`].
pub const TRACE_HEADER: &str = "run\tkind\titer\tstep\tsweep\tparam\tobjective\tresidual";
