//! Scenario documents.
//!
//! A scenario is a TOML document with four sections:
//!
//! ```toml
//! [system]
//! kind = "spin-half"        # spin-half | lattice | composite | explicit
//! delta = 0.0
//! omega = 1.0
//!
//! [initial]
//! state = "alpha"
//!
//! [time]
//! start = 0.0
//! stop = 3.141592653589793
//! steps = 100
//!
//! [[observables]]
//! name = "sigma_z"
//!
//! [outputs]
//! populations = true
//! transitions = [{ source = 0, target = 1 }]
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays of them.

use serde::{Deserialize, Serialize};

use qentropy::dynamics::HamiltonianOperator;
use qentropy::ensembles::{mixture_density, pure_density, DensityMatrix, OrthonormalBasis, ProbabilityVector, PureState};
use qentropy::systems::{
    composite_hamiltonian, lattice_hamiltonian, lattice_momentum_basis, sigma_x, sigma_y, sigma_z, spin_hamiltonian,
    CompositeSystem, LatticeFreeParticle, SpinHalfSystem,
};
use qentropy::{Complex64, ComplexMatrix};

use crate::error::{CliError, Result};

/// Largest accepted number of time steps.
pub const MAX_STEPS: u64 = 1_000_000;

pub type ComplexEntry = [f64; 2];
pub type MatrixEntries = Vec<Vec<ComplexEntry>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    SpinHalf,
    Lattice,
    Composite,
    Explicit,
}

impl SystemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SystemKind::SpinHalf => "spin-half",
            SystemKind::Lattice => "lattice",
            SystemKind::Composite => "composite",
            SystemKind::Explicit => "explicit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    #[default]
    Standard,
    Energy,
    Momentum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub kind: SystemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sites: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    /// Composite `σ_x⊗σ_x` coupling `g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<MatrixEntries>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    /// Named state: `alpha`, `beta`, or `alpha-beta` style products for composites.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<ComplexEntry>>,
    /// Mixture weights over `basis`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub start: f64,
    pub stop: f64,
    /// Number of intervals; the grid has `steps + 1` points.
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSection {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixEntries>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSection {
    pub source: usize,
    pub target: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisKind>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    #[serde(default)]
    pub populations: bool,
    /// Entropy of subsystem A (composite systems only).
    #[serde(default)]
    pub subsystem_entropy: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transitions: Vec<TransitionSection>,
}

/// The document exactly as written, before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub system: SystemSection,
    pub initial: InitialSection,
    pub time: TimeSection,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observables: Vec<ObservableSection>,
    #[serde(default)]
    pub outputs: OutputsSection,
}

/// A named column backed by a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Observable {
    pub column: String,
    pub matrix: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct Transition {
    pub source: usize,
    pub target: usize,
    pub basis_kind: BasisKind,
    pub basis: OrthonormalBasis,
}

impl Transition {
    pub fn label(&self) -> String {
        format!("{}_{}", self.source, self.target)
    }
}

/// A validated scenario with every reference resolved to matrices and states.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub document: ScenarioDocument,
    pub hamiltonian: HamiltonianOperator,
    /// `(dim_A, dim_B)` for composite systems.
    pub factors: Option<(usize, usize)>,
    pub initial: DensityMatrix,
    pub times: Vec<f64>,
    pub observables: Vec<Observable>,
    pub transitions: Vec<Transition>,
}

impl ScenarioSpec {
    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// Serializes the source document back to TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.document).expect("scenario documents always serialize")
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec> {
    let document: ScenarioDocument = toml::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))?;
    resolve(document)
}

fn invalid(field: &str, err: impl std::fmt::Display) -> CliError {
    CliError::validation(field, err.to_string())
}

fn require<T: Copy>(value: Option<T>, field: &str, kind: SystemKind) -> Result<T> {
    value.ok_or_else(|| CliError::validation(field, format!("required for {} systems", kind.as_str())))
}

fn to_complex(e: &ComplexEntry) -> Complex64 {
    Complex64::new(e[0], e[1])
}

fn matrix_from_entries(entries: &MatrixEntries, field: &str) -> Result<ComplexMatrix> {
    let rows = entries.iter().map(|r| r.iter().map(to_complex).collect()).collect();
    ComplexMatrix::from_rows(rows).map_err(|e| invalid(field, e))
}

struct ResolvedSystem {
    hamiltonian: HamiltonianOperator,
    factors: Option<(usize, usize)>,
    lattice: Option<LatticeFreeParticle>,
}

fn resolve_system(s: &SystemSection) -> Result<ResolvedSystem> {
    let kind = s.kind;
    let forbid = |present: bool, field: &str| -> Result<()> {
        if present {
            Err(CliError::validation(format!("system.{field}"), format!("not used by {} systems", kind.as_str())))
        } else {
            Ok(())
        }
    };
    match kind {
        SystemKind::SpinHalf => {
            forbid(s.sites.is_some() || s.length.is_some() || s.mass.is_some(), "sites/length/mass")?;
            forbid(s.coupling.is_some() || s.hamiltonian.is_some(), "coupling/hamiltonian")?;
            let delta = require(s.delta, "system.delta", kind)?;
            let omega = s.omega.unwrap_or(0.0);
            let sys = SpinHalfSystem::new(delta, omega).map_err(|e| invalid("system", e))?;
            Ok(ResolvedSystem { hamiltonian: spin_hamiltonian(&sys), factors: None, lattice: None })
        }
        SystemKind::Lattice => {
            forbid(s.delta.is_some() || s.omega.is_some(), "delta/omega")?;
            forbid(s.coupling.is_some() || s.hamiltonian.is_some(), "coupling/hamiltonian")?;
            let sites = require(s.sites, "system.sites", kind)?;
            let length = require(s.length, "system.length", kind)?;
            let mass = s.mass.unwrap_or(1.0);
            if sites > 256 {
                return Err(CliError::validation("system.sites", "at most 256 sites are supported"));
            }
            let sys = LatticeFreeParticle::new(sites, length, mass).map_err(|e| invalid("system", e))?;
            Ok(ResolvedSystem { hamiltonian: lattice_hamiltonian(&sys), factors: None, lattice: Some(sys) })
        }
        SystemKind::Composite => {
            forbid(s.sites.is_some() || s.length.is_some() || s.mass.is_some(), "sites/length/mass")?;
            forbid(s.omega.is_some() || s.hamiltonian.is_some(), "omega/hamiltonian")?;
            let delta = require(s.delta, "system.delta", kind)?;
            let g = s.coupling.unwrap_or(0.0);
            let c = CompositeSystem::coupled_spins(delta, g).map_err(|e| invalid("system", e))?;
            Ok(ResolvedSystem {
                hamiltonian: composite_hamiltonian(&c),
                factors: Some((c.dim_a(), c.dim_b())),
                lattice: None,
            })
        }
        SystemKind::Explicit => {
            forbid(
                s.delta.is_some() || s.omega.is_some() || s.sites.is_some() || s.length.is_some()
                    || s.mass.is_some() || s.coupling.is_some(),
                "delta/omega/sites/length/mass/coupling",
            )?;
            let entries = s
                .hamiltonian
                .as_ref()
                .ok_or_else(|| CliError::validation("system.hamiltonian", "required for explicit systems"))?;
            let m = matrix_from_entries(entries, "system.hamiltonian")?;
            let h = HamiltonianOperator::new(m).map_err(|e| invalid("system.hamiltonian", e))?;
            Ok(ResolvedSystem { hamiltonian: h, factors: None, lattice: None })
        }
    }
}

fn resolve_basis(kind: BasisKind, sys: &ResolvedSystem, field: &str) -> Result<OrthonormalBasis> {
    match kind {
        BasisKind::Standard => Ok(OrthonormalBasis::standard(sys.hamiltonian.dim())),
        BasisKind::Energy => sys.hamiltonian.eigenbasis().map_err(|e| invalid(field, e)),
        BasisKind::Momentum => match &sys.lattice {
            Some(l) => Ok(lattice_momentum_basis(l)),
            None => Err(CliError::validation(field, "momentum basis requires a lattice system")),
        },
    }
}

fn named_state(name: &str, sys: &ResolvedSystem) -> Result<PureState> {
    let spin = |label: &str| match label {
        "alpha" | "up" => Some(0),
        "beta" | "down" => Some(1),
        _ => None,
    };
    let unknown = || CliError::validation("initial.state", format!("unknown state name '{name}'"));
    let dim = sys.hamiltonian.dim();
    match sys.factors {
        Some((_, db)) => {
            let (a, b) = name.split_once('-').ok_or_else(unknown)?;
            let (a, b) = (spin(a).ok_or_else(unknown)?, spin(b).ok_or_else(unknown)?);
            PureState::basis_state(dim, a * db + b).map_err(|e| invalid("initial.state", e))
        }
        None if dim == 2 && sys.lattice.is_none() => {
            let k = spin(name).ok_or_else(unknown)?;
            PureState::basis_state(2, k).map_err(|e| invalid("initial.state", e))
        }
        None => Err(CliError::validation(
            "initial.state",
            "named states exist only for spin-half and composite systems; use basis + index",
        )),
    }
}

fn resolve_initial(init: &InitialSection, sys: &ResolvedSystem) -> Result<DensityMatrix> {
    let forms = [
        init.state.is_some(),
        init.index.is_some(),
        init.amplitudes.is_some(),
        init.weights.is_some(),
    ];
    if forms.iter().filter(|&&f| f).count() != 1 {
        return Err(CliError::validation(
            "initial",
            "give exactly one of: state, index (with basis), amplitudes, weights (with basis)",
        ));
    }
    let dim = sys.hamiltonian.dim();
    if let Some(name) = &init.state {
        if init.basis.is_some() {
            return Err(CliError::validation("initial.basis", "not used with a named state"));
        }
        return Ok(pure_density(&named_state(name, sys)?));
    }
    if let Some(amps) = &init.amplitudes {
        if init.basis.is_some() {
            return Err(CliError::validation("initial.basis", "amplitudes are always in the standard basis"));
        }
        if amps.len() != dim {
            return Err(CliError::validation(
                "initial.amplitudes",
                format!("expected {dim} amplitudes, got {}", amps.len()),
            ));
        }
        let psi = PureState::new(amps.iter().map(to_complex).collect()).map_err(|e| invalid("initial.amplitudes", e))?;
        return Ok(pure_density(&psi));
    }
    let basis = resolve_basis(init.basis.unwrap_or_default(), sys, "initial.basis")?;
    if let Some(k) = init.index {
        let v = basis.get(k).ok_or_else(|| {
            CliError::validation("initial.index", format!("index {k} out of range for dimension {dim}"))
        })?;
        return Ok(pure_density(v));
    }
    let weights = init.weights.clone().expect("one form is present");
    let p = ProbabilityVector::new(weights).map_err(|e| invalid("initial.weights", e))?;
    mixture_density(&basis, &p).map_err(|e| invalid("initial.weights", e))
}

fn resolve_times(t: &TimeSection) -> Result<Vec<f64>> {
    if !t.start.is_finite() || !t.stop.is_finite() {
        return Err(CliError::validation("time", "start and stop must be finite"));
    }
    if t.steps > MAX_STEPS {
        return Err(CliError::validation("time.steps", format!("at most {MAX_STEPS} steps, got {}", t.steps)));
    }
    if t.steps == 0 {
        return Ok(vec![t.start]);
    }
    let span = t.stop - t.start;
    Ok((0..=t.steps)
        .map(|i| if i == t.steps { t.stop } else { t.start + span * i as f64 / t.steps as f64 })
        .collect())
}

fn projector(v: &PureState) -> ComplexMatrix {
    ComplexMatrix::outer(v.amplitudes(), v.amplitudes())
}

fn resolve_observables(list: &[ObservableSection], sys: &ResolvedSystem) -> Result<Vec<Observable>> {
    let mut out = Vec::new();
    let dim = sys.hamiltonian.dim();
    for (i, obs) in list.iter().enumerate() {
        let field = format!("observables[{i}]");
        if let Some(entries) = &obs.matrix {
            let m = matrix_from_entries(entries, &field)?;
            if m.rows() != dim || !m.is_square() {
                return Err(CliError::validation(&field, format!("matrix must be {dim}x{dim}")));
            }
            if !m.is_hermitian(qentropy::linalg::HERMITIAN_TOLERANCE) {
                return Err(CliError::validation(&field, "observable matrix is not Hermitian"));
            }
            out.push(Observable { column: obs.name.clone(), matrix: m });
            continue;
        }
        let name = obs.name.as_str();
        let single = |m: ComplexMatrix| vec![Observable { column: name.to_string(), matrix: m }];
        let spins = |n: &str| match n {
            "sigma_x" => Some(sigma_x()),
            "sigma_y" => Some(sigma_y()),
            "sigma_z" => Some(sigma_z()),
            _ => None,
        };
        let resolved = match (name, sys.factors, &sys.lattice) {
            ("energy", _, _) => single(sys.hamiltonian.matrix().clone()),
            (n, None, None) if dim == 2 && spins(n).is_some() => single(spins(n).expect("checked")),
            (n, Some((da, db)), _) if n.ends_with("_a") || n.ends_with("_b") => {
                let (base, side) = n.split_at(n.len() - 2);
                let s = spins(base).ok_or_else(|| CliError::validation(&field, format!("unknown observable '{n}'")))?;
                let m = if side == "_a" {
                    s.kron(&ComplexMatrix::identity(db))
                } else {
                    ComplexMatrix::identity(da).kron(&s)
                };
                single(m)
            }
            ("site-populations", _, Some(_)) => OrthonormalBasis::standard(dim)
                .vectors()
                .iter()
                .enumerate()
                .map(|(s, v)| Observable { column: format!("site_pop_{s}"), matrix: projector(v) })
                .collect(),
            ("momentum-populations", _, Some(l)) => lattice_momentum_basis(l)
                .vectors()
                .iter()
                .zip(l.momentum_indices())
                .map(|(v, k)| Observable { column: format!("momentum_pop_{k}"), matrix: projector(v) })
                .collect(),
            (n, _, _) => {
                return Err(CliError::validation(&field, format!("unknown observable '{n}' for this system")));
            }
        };
        out.extend(resolved);
    }
    Ok(out)
}

fn resolve_transitions(list: &[TransitionSection], sys: &ResolvedSystem) -> Result<Vec<Transition>> {
    let dim = sys.hamiltonian.dim();
    list.iter()
        .enumerate()
        .map(|(i, t)| {
            let field = format!("outputs.transitions[{i}]");
            if t.source >= dim || t.target >= dim {
                return Err(CliError::validation(
                    &field,
                    format!("indices ({}, {}) out of range for dimension {dim}", t.source, t.target),
                ));
            }
            let kind = t.basis.unwrap_or_default();
            Ok(Transition { source: t.source, target: t.target, basis_kind: kind, basis: resolve_basis(kind, sys, &field)? })
        })
        .collect()
}

fn resolve(document: ScenarioDocument) -> Result<ScenarioSpec> {
    let sys = resolve_system(&document.system)?;
    let initial = resolve_initial(&document.initial, &sys)?;
    let times = resolve_times(&document.time)?;
    let observables = resolve_observables(&document.observables, &sys)?;
    if document.outputs.subsystem_entropy && sys.factors.is_none() {
        return Err(CliError::validation("outputs.subsystem_entropy", "requires a composite system"));
    }
    let transitions = resolve_transitions(&document.outputs.transitions, &sys)?;
    Ok(ScenarioSpec {
        document,
        hamiltonian: sys.hamiltonian,
        factors: sys.factors,
        initial,
        times,
        observables,
        transitions,
    })
}
