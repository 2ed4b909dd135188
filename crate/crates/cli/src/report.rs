//! Time-series reports: scenario evolution, perturbative transitions and
//! Rabi sweeps, with CSV and JSON emitters.

use std::io::Write;

use serde::Serialize;

use qentropy::dynamics::{
    expectation, propagator, transition_probability_exact, transition_probability_first_order,
};
use qentropy::ensembles::{von_neumann_entropy, DensityMatrix};
use qentropy::linalg::{partial_trace, Subsystem};
use qentropy::systems::{rabi_populations, SpinHalfSystem};

use crate::error::{CliError, Result};
use crate::scenario::{ScenarioDocument, ScenarioSpec};

pub const CSV_FORMAT: &str = "qentropy-csv v1";
pub const SUMMARY_FORMAT: &str = "qentropy-summary v1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerances applied to every evolution run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub entropy_drift: f64,
    pub trace_drift: f64,
    pub hermiticity: f64,
}

pub const EVOLUTION_TOLERANCES: Tolerances = Tolerances { entropy_drift: 1e-9, trace_drift: 1e-10, hermiticity: 1e-10 };

/// Outcome of one checked invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured ≤ tolerance`.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self { name: name.into(), measured, tolerance, passed: measured <= tolerance }
    }
}

/// Column-oriented numeric table with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Writes the versioned header line, a `#`-prefixed metadata line, the
    /// column header and one row per record (15 significant digits).
    pub fn write_csv<W: Write>(&self, mut out: W, metadata: &str) -> Result<()> {
        writeln!(out, "# {CSV_FORMAT} (qentropy {VERSION})")?;
        writeln!(out, "# {metadata}")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_value(*v)))?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn format_value(v: f64) -> String {
    // normalize negative zero so that identical runs stay byte-identical
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.14e}")
}

/// Per-time-point records of an evolution run plus its checked invariants.
#[derive(Debug, Clone)]
pub struct EvolutionReport {
    pub document: ScenarioDocument,
    pub dimension: usize,
    pub tolerances: Tolerances,
    pub table: Table,
    pub checks: Vec<Check>,
}

impl EvolutionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn metadata(&self) -> String {
        format!(
            "command=evolve system={} dim={} points={} entropy_tolerance={:e}",
            self.document.system.kind.as_str(),
            self.dimension,
            self.table.rows.len(),
            self.tolerances.entropy_drift
        )
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        self.table.write_csv(out, &self.metadata())
    }

    pub fn summary(&self) -> Summary<'_> {
        Summary {
            format: SUMMARY_FORMAT,
            version: VERSION,
            scenario: &self.document,
            dimension: self.dimension,
            points: self.table.rows.len(),
            columns: &self.table.columns,
            tolerances: self.tolerances,
            checks: &self.checks,
            passed: self.passed(),
        }
    }

    pub fn write_summary<W: Write>(&self, mut out: W) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.summary()).expect("summary serializes");
        writeln!(out, "{text}")?;
        Ok(())
    }
}

/// Sidecar document describing a run.
#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    pub format: &'static str,
    pub version: &'static str,
    pub scenario: &'a ScenarioDocument,
    pub dimension: usize,
    pub points: usize,
    pub columns: &'a [String],
    pub tolerances: Tolerances,
    pub checks: &'a [Check],
    pub passed: bool,
}

fn reduced_entropy(rho: &DensityMatrix, (da, db): (usize, usize)) -> Result<f64> {
    let reduced = partial_trace(rho.matrix(), da, db, Subsystem::A)?;
    Ok(von_neumann_entropy(&DensityMatrix::new(reduced)?)?)
}

/// Evolves the scenario's initial state over its time grid.
///
/// Columns: `t`, `entropy`, observables in document order, then
/// `pop_j` (if requested), `transition_j_k`, and `entropy_a`.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<EvolutionReport> {
    let dim = spec.dim();
    let outputs = &spec.document.outputs;
    let mut columns = vec!["t".to_string(), "entropy".to_string()];
    columns.extend(spec.observables.iter().map(|o| o.column.clone()));
    if outputs.populations {
        columns.extend((0..dim).map(|j| format!("pop_{j}")));
    }
    columns.extend(spec.transitions.iter().map(|t| format!("transition_{}", t.label())));
    if outputs.subsystem_entropy {
        columns.push("entropy_a".to_string());
    }

    let tol = EVOLUTION_TOLERANCES;
    let s0 = von_neumann_entropy(&spec.initial)?;
    let (mut entropy_drift, mut trace_drift, mut herm): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut rows = Vec::with_capacity(spec.times.len());
    for &t in &spec.times {
        let u = propagator(&spec.hamiltonian, t)?;
        let rho = u.conjugate(&spec.initial)?;
        let s = von_neumann_entropy(&rho)?;
        entropy_drift = entropy_drift.max((s - s0).abs());
        trace_drift = trace_drift.max((rho.matrix().trace()?.re - 1.0).abs());
        herm = herm.max(rho.matrix().hermiticity_residual());

        let mut row = Vec::with_capacity(columns.len());
        row.push(t);
        row.push(s);
        for o in &spec.observables {
            row.push(expectation(&o.matrix, &rho)?);
        }
        if outputs.populations {
            row.extend(rho.populations());
        }
        for tr in &spec.transitions {
            row.push(transition_probability_exact(&tr.basis, tr.source, tr.target, &spec.hamiltonian, t)?);
        }
        if outputs.subsystem_entropy {
            row.push(reduced_entropy(&rho, spec.factors.expect("validated composite"))?);
        }
        rows.push(row);
    }

    let checks = vec![
        Check::at_most("entropy-constant", entropy_drift, tol.entropy_drift),
        Check::at_most("trace-preserved", trace_drift, tol.trace_drift),
        Check::at_most("hermiticity-preserved", herm, tol.hermiticity),
    ];
    Ok(EvolutionReport {
        document: spec.document.clone(),
        dimension: dim,
        tolerances: tol,
        table: Table { columns, rows },
        checks,
    })
}

/// Exact and first-order transition probabilities with the scenario
/// Hamiltonian acting as the perturbation `H'`.
pub fn run_perturbation(spec: &ScenarioSpec) -> Result<Table> {
    if spec.transitions.is_empty() {
        return Err(CliError::validation("outputs.transitions", "perturb needs at least one transition"));
    }
    if let Some(t) = spec.transitions.iter().find(|t| t.source == t.target) {
        return Err(CliError::validation(
            "outputs.transitions",
            format!("first-order formula needs source ≠ target, got {}", t.label()),
        ));
    }
    let mut columns = vec!["t".to_string()];
    for t in &spec.transitions {
        columns.push(format!("exact_{}", t.label()));
        columns.push(format!("first_order_{}", t.label()));
    }
    let h = &spec.hamiltonian;
    let rows = spec
        .times
        .iter()
        .map(|&t| {
            let mut row = vec![t];
            for tr in &spec.transitions {
                row.push(transition_probability_exact(&tr.basis, tr.source, tr.target, h, t)?);
                row.push(transition_probability_first_order(&tr.basis, tr.source, tr.target, h, t)?);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { columns, rows })
}

/// Rabi sweep from `α`: exact populations next to the closed form.
/// Returns the table and the largest deviation from the closed form.
pub fn run_rabi(delta: f64, omega: f64, t_max: f64, points: usize) -> Result<(Table, f64)> {
    if points == 0 {
        return Err(CliError::validation("points", "need at least one time point"));
    }
    if !t_max.is_finite() {
        return Err(CliError::validation("t-max", "must be finite"));
    }
    let sys = SpinHalfSystem::new(delta, omega)?;
    let mut max_dev: f64 = 0.0;
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let t = if points == 1 { 0.0 } else { t_max * i as f64 / (points - 1) as f64 };
        let (pa, pb) = rabi_populations(&sys, t)?;
        let closed = sys.rabi_closed_form(t);
        max_dev = max_dev.max((pb - closed).abs());
        rows.push(vec![t, pa, pb, closed]);
    }
    let columns = ["t", "p_alpha", "p_beta", "p_beta_closed_form"].map(String::from).to_vec();
    Ok((Table { columns, rows }, max_dev))
}
