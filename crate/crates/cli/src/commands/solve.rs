use std::path::Path;

use l2p_core::{solve, ConstrainedProblem, Exponent, SolverTrace};

use crate::manifest::SolverManifest;
use crate::output::{fmt_f64, matrix_csv, read_matrix, write_atomic};
use crate::Outcome;

pub const TRACE_HEADER: &str = "k,objective,rho,kkt_residual";

/// Trace rows with every objective multiplied by `scale`; `rho` is scale
/// free and is `NaN` on the first row.
pub fn trace_csv(trace: &SolverTrace, scale: f64) -> String {
    let mut s = format!("{TRACE_HEADER}\n");
    for r in &trace.records {
        s.push_str(&format!(
            "{},{},{},{}\n",
            r.k,
            fmt_f64(scale * r.objective),
            fmt_f64(r.rho.unwrap_or(f64::NAN)),
            fmt_f64(r.kkt_residual)
        ));
    }
    s
}

pub fn run(dir: &Path, m: &Path, b: &Path, p: f64, solver: &SolverManifest) -> anyhow::Result<Outcome> {
    let config = solver.to_config()?;
    let problem = ConstrainedProblem::new(read_matrix(m)?, read_matrix(b)?, Exponent::new(p)?)?;
    let sol = solve(&problem, &config)?;
    write_atomic(dir, "y.csv", matrix_csv(&sol.y).as_bytes())?;
    write_atomic(dir, "lambda.csv", matrix_csv(&sol.lambda).as_bytes())?;
    let trace = sol.trace.as_ref().expect("trace recording is on");
    write_atomic(dir, "trace.csv", trace_csv(trace, 1.0).as_bytes())?;
    Ok(if sol.converged {
        Outcome::Done
    } else {
        Outcome::NotConverged
    })
}
