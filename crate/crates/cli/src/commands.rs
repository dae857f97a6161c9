//! One table per subcommand.

use anyhow::Context;
use saddle_core::combinatorics::t_table;
use saddle_core::fermion::{self, SaddleMethod};
use saddle_core::gamma::{gamma_table, ratio_curves, stirling_coefficients};
use saddle_core::report::{format_float, Cell, Table};

use crate::checks::{self, CheckOutcome};
use crate::{Command, MethodArg, RunError, TTABLE_BUDGET};

/// A rendered dataset plus the failed checks, if any.
pub struct Outcome {
    pub table: Table,
    pub failures: Vec<String>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome { table, failures: Vec::new() }
    }
}

/// `√(3/2)` times the standard coupling grid.
pub fn default_ks_grid() -> Vec<f64> {
    checks::STANDARD_LAMBDAS.iter().map(|l| 1.5f64.sqrt() * l).collect()
}

/// `λ = 0.01, 0.02, …, 1`.
pub fn default_fig2_grid() -> Vec<f64> {
    (1..=100).map(|i| i as f64 / 100.0).collect()
}

fn n_label(n: f64) -> String {
    format_float(n, 17)
}

pub fn execute(cmd: &Command) -> Result<Outcome, RunError> {
    match cmd {
        Command::Ttable { l_max, normalized, force } => {
            if *l_max > TTABLE_BUDGET && !force {
                return Err(RunError::Usage(format!(
                    "--Lmax {l_max} exceeds the default budget of {TTABLE_BUDGET}; pass --force to compute it anyway"
                )));
            }
            let value_col = if *normalized { "T_over_dfact" } else { "T" };
            let mut t = Table::new(["L", "k", value_col]);
            for c in t_table(*l_max) {
                let v = if *normalized { c.normalized() } else { c.value.clone() };
                t.push(vec![c.l.into(), c.k.into(), v.into()]);
            }
            Ok(t.into())
        }
        Command::Stirling { order } => {
            let mut t = Table::new(["L", "coefficient"]);
            for (l, c) in stirling_coefficients(*order).into_iter().enumerate() {
                t.push(vec![l.into(), c.into()]);
            }
            Ok(t.into())
        }
        Command::GammaTable { n_list, loops } => {
            if n_list.iter().any(|n| !(*n > 0.0)) {
                return Err(RunError::Usage("--N-list entries must be positive".into()));
            }
            let rows = gamma_table(n_list, *loops).context("gamma table")?;
            let mut cols = vec!["l".to_string()];
            for &n in n_list {
                cols.push(format!("value_N{}", n_label(n)));
                cols.push(format!("ratio_N{}", n_label(n)));
            }
            let mut t = Table::new(cols);
            for chunk in rows.chunks(n_list.len()) {
                let mut row = vec![Cell::from(chunk[0].l)];
                for e in chunk {
                    row.push(e.approx.into());
                    row.push(e.ratio.map(Cell::from).unwrap_or_else(|| Cell::from("")));
                }
                t.push(row);
            }
            Ok(t.into())
        }
        Command::FermionTable { method, omega0, omega, n, lambda_grid, loops } => {
            let method = match method {
                MethodArg::I => SaddleMethod::I,
                MethodArg::II => SaddleMethod::II,
            };
            if method == SaddleMethod::II && *loops > 3 {
                return Err(RunError::Usage("--method II is available up to --loops 3".into()));
            }
            let rows = fermion::fermion_table(method, *n, *omega, *omega0, lambda_grid, *loops)
                .map_err(|e| usage_or_runtime(e, "fermion table"))?;
            let mut t = Table::new(["omega0", "lambda", "exact", "l", "value", "ratio"]);
            for r in rows {
                for (l, c) in r.cells.iter().enumerate() {
                    t.push(vec![(*omega0).into(), r.lambda.into(), r.exact.into(), l.into(), c.value.into(), c.ratio.into()]);
                }
            }
            Ok(t.into())
        }
        Command::KsTable { n, omega, lambda_ks_grid, loops } => {
            let grid = lambda_ks_grid.clone().unwrap_or_else(default_ks_grid);
            let rows =
                fermion::ks_table(*n, *omega, &grid, *loops).map_err(|e| usage_or_runtime(e, "ks table"))?;
            let mut t = Table::new(["lambda_ks", "exact", "l", "value", "ratio"]);
            for r in rows {
                for (l, c) in r.cells.iter().enumerate() {
                    t.push(vec![r.lambda.into(), r.exact.into(), l.into(), c.value.into(), c.ratio.into()]);
                }
            }
            Ok(t.into())
        }
        Command::Fig1 { n_list, l_max } => {
            if n_list.iter().any(|n| !(*n >= 1.0 && n.fract() == 0.0)) {
                return Err(RunError::Usage("fig1 needs positive integer N values".into()));
            }
            let mut t = Table::new(["L", "N", "ratio"]);
            for p in ratio_curves(n_list, *l_max).context("ratio curves")? {
                t.push(vec![p.order.into(), p.n.into(), p.ratio.into()]);
            }
            Ok(t.into())
        }
        Command::Fig2 { omega0_list, lambda_grid, n, omega } => {
            let grid = lambda_grid.clone().unwrap_or_else(default_fig2_grid);
            let points = fermion::third_branch_curves(*n, *omega, omega0_list, &grid)
                .map_err(|e| usage_or_runtime(e, "third-branch curve"))?;
            let mut t = Table::new(["omega0", "lambda", "z3"]);
            for p in points {
                t.push(vec![p.omega0.into(), p.lambda.into(), p.z3.into()]);
            }
            Ok(t.into())
        }
        Command::Verify { identities, method_equivalence, oracle, l_max } => {
            let all = !(*identities || *method_equivalence || *oracle);
            let mut results: Vec<CheckOutcome> = Vec::new();
            if all || *identities {
                results.extend(checks::identity_checks(*l_max));
            }
            if all || *method_equivalence {
                results.extend(checks::method_equivalence_checks(*l_max).context("method equivalence")?);
            }
            if all || *oracle {
                results.extend(checks::oracle_checks().context("oracle")?);
            }
            let mut t = Table::new(["suite", "case", "lhs", "rhs", "status"]);
            let mut failures = Vec::new();
            for c in results {
                if !c.passed {
                    failures.push(format!("{}: {}", c.suite, c.case));
                }
                let status = if c.passed { "pass" } else { "FAIL" };
                t.push(vec![c.suite.into(), c.case.into(), c.lhs, c.rhs, status.into()]);
            }
            Ok(Outcome { table: t, failures })
        }
    }
}

fn usage_or_runtime(e: fermion::FermionError, what: &str) -> RunError {
    match e {
        fermion::FermionError::InvalidParams(msg) => RunError::Usage(msg),
        other => RunError::Runtime(anyhow::Error::new(other).context(what.to_string())),
    }
}
