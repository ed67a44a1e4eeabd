//! Assembly of the master-equation generator.
//!
//! For every bath and every kept pair of jump operators `A_p = A(omega_p)`,
//! `A_q = A(omega_q)` the generator picks up
//!
//! ```text
//! gamma_pq (A_p rho A_q^dagger - 1/2 {A_q^dagger A_p, rho})      dissipator
//! S_pq A_q^dagger A_p                                           Lamb-shift Hamiltonian
//! gamma_pq = g_p g_q (Gamma(omega_p) + Gamma(omega_q)^*)
//! S_pq     = g_p g_q (Gamma(omega_p) - Gamma(omega_q)^*) / 2i
//! ```
//!
//! Which pairs are kept is decided by a [`SecularPolicy`]. Superoperators
//! act on column-stacked density matrices.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::bath::{correlation, markov_check, BathCorrelation, BathSpec, CorrelationOptions, LAMB_TOLERANCE};
use crate::error::{Error, Result};
use crate::jumps::{global_jumps, local_jumps, uncoupled_jumps, Channel, Construction, Family, JumpTable, FREQUENCY_BIN};
use crate::ops::{
    c, commutator_superop, hermiticity_residual, identity, max_abs, pauli_basis,
    real_representation, sandwich, trace_row, unvectorize, vectorize, Op, SuperOp, C64,
};
use crate::system::{build_hamiltonian, detect_frequency_crossing, diagonalize, local_hamiltonian, QubitPairSpec};

/// Frequencies this close count as equal under the full secular rule.
pub const FULL_SECULAR_TOLERANCE: f64 = 1e-12;

/// Local builds above this coupling are refused unless overridden.
pub const LOCAL_VALIDITY_LIMIT: f64 = 0.5;

/// A jump operator label: channel, family and signed frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub channel: Channel,
    pub family: Family,
    pub frequency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecularMode {
    Full,
    Partial,
}

/// Which pairs `(omega, omega')` survive the secular approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum SecularPolicy {
    /// Keep `|omega - omega'| <= 1e-12`.
    Full,
    /// Keep the groups of the partial secular equation: x pairs within
    /// `{I, II}` of equal sign, z pairs within `{0, +-IV}`, `+-III` only
    /// with itself, and never an x-z pair.
    PaperGroups,
    /// Keep `|omega - omega'| <= epsilon`.
    Threshold { epsilon: f64 },
}

impl SecularPolicy {
    /// Threshold rule with `epsilon = 10 mu^2`.
    pub fn default_threshold(mu: f64) -> Self {
        SecularPolicy::Threshold {
            epsilon: 10.0 * mu * mu,
        }
    }

    pub fn mode(&self) -> SecularMode {
        match self {
            SecularPolicy::Full => SecularMode::Full,
            _ => SecularMode::Partial,
        }
    }

    /// Whether this policy discards every x-z pair.
    pub fn drops_cross_channels(&self) -> bool {
        !matches!(self, SecularPolicy::Threshold { .. })
    }

    pub fn keeps(&self, p: &Node, q: &Node) -> bool {
        match *self {
            SecularPolicy::Full => (p.frequency - q.frequency).abs() <= FULL_SECULAR_TOLERANCE,
            SecularPolicy::Threshold { epsilon } => (p.frequency - q.frequency).abs() <= epsilon,
            SecularPolicy::PaperGroups => {
                if p.channel.is_dissipative() != q.channel.is_dissipative() {
                    return false;
                }
                if p.channel.is_dissipative() {
                    return (p.frequency > 0.0) == (q.frequency > 0.0);
                }
                let slow = |f: Family| matches!(f, Family::Zero | Family::IV);
                match (p.family, q.family) {
                    (a, b) if slow(a) && slow(b) => true,
                    (Family::III, Family::III) => p.frequency == q.frequency,
                    _ => false,
                }
            }
        }
    }
}

impl fmt::Display for SecularPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SecularPolicy::Full => write!(f, "full"),
            SecularPolicy::PaperGroups => write!(f, "paper"),
            SecularPolicy::Threshold { epsilon } => write!(f, "threshold:{epsilon}"),
        }
    }
}

impl FromStr for SecularPolicy {
    type Err = Error;

    /// Parses `full`, `paper` or `threshold:EPS`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(SecularPolicy::Full),
            "paper" => Ok(SecularPolicy::PaperGroups),
            _ => {
                let eps = s
                    .strip_prefix("threshold:")
                    .and_then(|e| e.parse::<f64>().ok())
                    .filter(|e| e.is_finite() && *e >= 0.0)
                    .ok_or_else(|| Error::Config(format!("unknown secular rule `{s}` (full, paper, threshold:EPS)")))?;
                Ok(SecularPolicy::Threshold { epsilon: eps })
            }
        }
    }
}

/// The pairs kept by `policy`, in input order.
pub fn secular_filter(pairs: &[(Node, Node)], policy: &SecularPolicy) -> Vec<(Node, Node)> {
    pairs.iter().filter(|(p, q)| policy.keeps(p, q)).copied().collect()
}

/// Master-equation variant: global or local jump operators, partial or
/// full secular approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    GP,
    GF,
    LP,
    LF,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::GP, Variant::GF, Variant::LP, Variant::LF];

    pub fn is_global(&self) -> bool {
        matches!(self, Variant::GP | Variant::GF)
    }

    pub fn mode(&self) -> SecularMode {
        match self {
            Variant::GP | Variant::LP => SecularMode::Partial,
            Variant::GF | Variant::LF => SecularMode::Full,
        }
    }

    pub fn from_parts(construction: Construction, mode: SecularMode) -> Variant {
        let global = construction != Construction::Local;
        match (global, mode) {
            (true, SecularMode::Partial) => Variant::GP,
            (true, SecularMode::Full) => Variant::GF,
            (false, SecularMode::Partial) => Variant::LP,
            (false, SecularMode::Full) => Variant::LF,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GP" => Ok(Variant::GP),
            "GF" => Ok(Variant::GF),
            "LP" => Ok(Variant::LP),
            "LF" => Ok(Variant::LF),
            _ => Err(Error::Config(format!("unknown variant `{s}` (GP, GF, LP, LF)"))),
        }
    }
}

/// One rate/shift coefficient of a kept pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    /// Index into the bath list.
    pub bath: usize,
    pub left: Node,
    pub right: Node,
    pub rate: C64,
    pub shift: C64,
}

/// All coefficients of an assembled generator.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub entries: Vec<Coefficient>,
}

impl CoefficientTable {
    fn lookup(&self, left: (Channel, f64), right: (Channel, f64)) -> impl Iterator<Item = &Coefficient> {
        let hit = |n: &Node, (ch, w): (Channel, f64)| n.channel == ch && (n.frequency - w).abs() <= FREQUENCY_BIN;
        self.entries
            .iter()
            .filter(move |e| hit(&e.left, left) && hit(&e.right, right))
    }

    /// Rate of `A_left rho A_right^dagger`, summed over baths.
    pub fn rate(&self, left: (Channel, f64), right: (Channel, f64)) -> C64 {
        self.lookup(left, right).map(|e| e.rate).sum()
    }

    /// Lamb-shift coefficient of `A_right^dagger A_left`, summed over baths.
    pub fn shift(&self, left: (Channel, f64), right: (Channel, f64)) -> C64 {
        self.lookup(left, right).map(|e| e.shift).sum()
    }

    /// Largest violation of `c_pq = c_qp^*` over rates and shifts.
    pub fn hermitian_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for e in &self.entries {
            let partner = self.entries.iter().find(|f| f.bath == e.bath && f.left == e.right && f.right == e.left);
            match partner {
                Some(f) => {
                    worst = worst.max((e.rate - f.rate.conj()).norm());
                    worst = worst.max((e.shift - f.shift.conj()).norm());
                }
                None => return f64::INFINITY,
            }
        }
        worst
    }
}

fn pair_coefficient(bath: &BathSpec, corr: &BathCorrelation, p: &Node, q: &Node) -> Result<(C64, C64)> {
    let g = bath.coupling(p.channel) * bath.coupling(q.channel);
    let gp = corr.big_gamma(p.frequency)?;
    let gq = corr.big_gamma(q.frequency)?.conj();
    Ok(((gp + gq) * g, (gp - gq) / C64::new(0.0, 2.0) * g))
}

fn nodes_of(table: &JumpTable) -> Vec<Node> {
    table
        .entries
        .iter()
        .map(|e| Node {
            channel: e.channel,
            family: e.family,
            frequency: e.frequency,
        })
        .collect()
}

/// Coefficients of every pair kept by `policy`, bath by bath.
///
/// Only channels with a nonzero coupling to a bath contribute, and pairs
/// that the bath leaves uncorrelated (x-z pairs of a split bath) are
/// skipped. Distinct baths are uncorrelated, so qubit-qubit cross terms
/// come from common baths only.
pub fn coefficients(
    baths: &[BathSpec],
    corrs: &[BathCorrelation],
    table: &JumpTable,
    policy: &SecularPolicy,
) -> Result<CoefficientTable> {
    let nodes = nodes_of(table);
    let mut entries = Vec::new();
    for (k, (bath, corr)) in baths.iter().zip(corrs).enumerate() {
        let active: Vec<&Node> = nodes.iter().filter(|n| bath.coupling(n.channel) != 0.0).collect();
        for p in &active {
            for q in &active {
                if !bath.correlated(p.channel, q.channel) || !policy.keeps(p, q) {
                    continue;
                }
                let (rate, shift) = pair_coefficient(bath, corr, p, q)?;
                entries.push(Coefficient {
                    bath: k,
                    left: **p,
                    right: **q,
                    rate,
                    shift,
                });
            }
        }
    }
    Ok(CoefficientTable { entries })
}

/// Options for [`assemble`] and [`build`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    pub lamb_shift: bool,
    /// Rule applied to the partial-secular variants.
    pub partial_rule: SecularPolicy,
    /// Drop the coupling from the unitary part of local builds.
    pub strict_local: bool,
    /// Allow local builds at strong coupling.
    pub override_validity_guard: bool,
    /// Crossing tolerance; defaults to `mu^2` of the strongest bath.
    pub crossing_tolerance: Option<f64>,
    pub quadrature_tolerance: f64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            lamb_shift: true,
            partial_rule: SecularPolicy::PaperGroups,
            strict_local: false,
            override_validity_guard: false,
            crossing_tolerance: None,
            quadrature_tolerance: LAMB_TOLERANCE,
        }
    }
}

/// Terms sourced by one bath.
#[derive(Debug, Clone, PartialEq)]
pub struct BathPart {
    pub lamb_hamiltonian: Op,
    pub lamb_shift: SuperOp,
    pub dissipator: SuperOp,
}

impl BathPart {
    pub fn generator(&self) -> SuperOp {
        self.lamb_shift + self.dissipator
    }
}

/// An assembled generator with its decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    /// `hamiltonian_part + lamb_shift_part + dissipator_part`.
    pub matrix: SuperOp,
    pub hamiltonian_part: SuperOp,
    pub lamb_shift_part: SuperOp,
    pub dissipator_part: SuperOp,
    /// The Hamiltonian in the unitary part.
    pub hamiltonian: Op,
    pub lamb_hamiltonian: Op,
    pub bath_parts: Vec<BathPart>,
    pub coefficients: CoefficientTable,
    pub jumps: JumpTable,
    pub variant: Variant,
    pub construction: Construction,
    pub policy: SecularPolicy,
    pub spec: QubitPairSpec,
    pub baths: Vec<BathSpec>,
    pub lamb_shift: bool,
}

fn dissipator_term(a: &Op, b_dag: &Op) -> SuperOp {
    let prod = b_dag * a;
    let id = identity();
    sandwich(a, b_dag) - (sandwich(&prod, &id) + sandwich(&id, &prod)) * c(0.5)
}

fn check_guards(spec: &QubitPairSpec, baths: &[BathSpec], construction: Construction, policy: &SecularPolicy, opts: &BuildOptions) -> Result<()> {
    let coupling = spec.coupling();
    match construction {
        Construction::GlobalUncoupled if !coupling.is_zero() => {
            return Err(Error::InvalidParameter {
                name: "construction",
                reason: "the uncoupled construction requires a vanishing coupling".into(),
            })
        }
        Construction::Local if coupling.strength() >= LOCAL_VALIDITY_LIMIT => {
            if !opts.override_validity_guard {
                return Err(Error::Config(format!(
                    "local master equation requested at coupling {} >= {LOCAL_VALIDITY_LIMIT}; it is not valid there (override to proceed)",
                    coupling.strength()
                )));
            }
            log::warn!("local master equation used at coupling {}", coupling.strength());
        }
        Construction::GlobalCoupled if policy.drops_cross_channels() => {
            let mixes = baths
                .iter()
                .any(|b| !b.split && b.gx.iter().any(|&w| w != 0.0) && b.gz.iter().any(|&w| w != 0.0));
            if mixes {
                let mu = baths.iter().map(|b| b.mu).fold(0.0, f64::max);
                let tol = opts.crossing_tolerance.unwrap_or(mu * mu);
                let crossing = detect_frequency_crossing(spec, tol);
                if crossing.crossing {
                    return Err(Error::CrossingSingularity {
                        lambda: coupling.strength(),
                        omega_plus: spec.omega_plus(),
                        omega_minus: spec.omega_minus(),
                        residual: crossing.residual,
                    });
                }
            }
        }
        _ => {}
    }
    Ok(())
}

/// Assemble the generator for an explicit construction and policy.
///
/// The local construction keeps the full Hamiltonian (coupling included)
/// in the unitary part unless `strict_local` is set.
///
/// # Errors
/// `CrossingSingularity` when x-z pairs would be dropped on the crossing
/// surface; `Config` for a local build at strong coupling; quadrature
/// failures from the baths.
pub fn assemble(
    spec: &QubitPairSpec,
    baths: &[BathSpec],
    construction: Construction,
    policy: SecularPolicy,
    opts: &BuildOptions,
) -> Result<Liouvillian> {
    for b in baths {
        b.validate()?;
        markov_check(b);
    }
    if let SecularPolicy::Threshold { epsilon } = policy {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: format!("must be finite and nonnegative, got {epsilon}"),
            });
        }
    }
    check_guards(spec, baths, construction, &policy, opts)?;

    let full_h = build_hamiltonian(spec)?;
    let hamiltonian = if construction == Construction::Local && opts.strict_local {
        local_hamiltonian(spec)
    } else {
        full_h
    };
    let jumps = match construction {
        Construction::GlobalCoupled => global_jumps(&diagonalize(&full_h)?),
        Construction::GlobalUncoupled => uncoupled_jumps(spec),
        Construction::Local => local_jumps(spec),
    };

    let corr_opts = CorrelationOptions {
        lamb_shift: opts.lamb_shift,
        tolerance: opts.quadrature_tolerance,
    };
    let corrs = baths
        .iter()
        .map(|b| correlation(b, corr_opts))
        .collect::<Result<Vec<_>>>()?;
    let table = coefficients(baths, &corrs, &jumps, &policy)?;

    let matrix_of = |n: &Node| {
        jumps
            .entries
            .iter()
            .find(|e| e.channel == n.channel && e.family == n.family && e.frequency == n.frequency)
            .expect("node comes from the table")
            .matrix
    };
    let mut bath_parts: Vec<BathPart> = (0..baths.len())
        .map(|_| BathPart {
            lamb_hamiltonian: Op::zeros(),
            lamb_shift: SuperOp::zeros(),
            dissipator: SuperOp::zeros(),
        })
        .collect();
    for coeff in &table.entries {
        let a = matrix_of(&coeff.left);
        let b_dag = matrix_of(&coeff.right).adjoint();
        let part = &mut bath_parts[coeff.bath];
        part.dissipator += dissipator_term(&a, &b_dag) * coeff.rate;
        part.lamb_hamiltonian += b_dag * a * coeff.shift;
    }
    for part in &mut bath_parts {
        // remove round-off anti-Hermitian parts
        part.lamb_hamiltonian = (part.lamb_hamiltonian + part.lamb_hamiltonian.adjoint()) * c(0.5);
        part.lamb_shift = commutator_superop(&part.lamb_hamiltonian);
    }

    let hamiltonian_part = commutator_superop(&hamiltonian);
    let lamb_hamiltonian: Op = bath_parts.iter().map(|p| p.lamb_hamiltonian).sum();
    let lamb_shift_part: SuperOp = bath_parts.iter().map(|p| p.lamb_shift).sum();
    let dissipator_part: SuperOp = bath_parts.iter().map(|p| p.dissipator).sum();
    Ok(Liouvillian {
        matrix: hamiltonian_part + lamb_shift_part + dissipator_part,
        hamiltonian_part,
        lamb_shift_part,
        dissipator_part,
        hamiltonian,
        lamb_hamiltonian,
        bath_parts,
        coefficients: table,
        jumps,
        variant: Variant::from_parts(construction, policy.mode()),
        construction,
        policy,
        spec: *spec,
        baths: baths.to_vec(),
        lamb_shift: opts.lamb_shift,
    })
}

/// The construction a variant uses for `spec`: global variants of
/// uncoupled qubits use the product-basis jump operators.
pub fn construction_for(variant: Variant, spec: &QubitPairSpec) -> Construction {
    match (variant.is_global(), spec.coupling().is_zero()) {
        (false, _) => Construction::Local,
        (true, true) => Construction::GlobalUncoupled,
        (true, false) => Construction::GlobalCoupled,
    }
}

/// Assemble one of the four variants.
pub fn build(spec: &QubitPairSpec, baths: &[BathSpec], variant: Variant, opts: &BuildOptions) -> Result<Liouvillian> {
    let policy = match variant.mode() {
        SecularMode::Full => SecularPolicy::Full,
        SecularMode::Partial => opts.partial_rule,
    };
    assemble(spec, baths, construction_for(variant, spec), policy, opts)
}

/// Advisory checks on an assembled generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GkslReport {
    /// Smallest eigenvalue over the rate matrices of connected groups of
    /// kept pairs; nonnegative for a GKLS generator.
    pub min_rate_eigenvalue: f64,
    /// `max |Tr L(.)|` over matrix units.
    pub trace_residual: f64,
    /// Largest anti-Hermitian part of `L(P)` over a Hermitian basis `P`.
    pub hermiticity_residual: f64,
    /// Largest real part of the spectrum of `L`.
    pub spectral_abscissa: f64,
}

fn rate_matrix_minimum(l: &Liouvillian) -> f64 {
    let mut min = f64::INFINITY;
    for bath in 0..l.baths.len() {
        let kept: Vec<&Coefficient> = l.coefficients.entries.iter().filter(|e| e.bath == bath).collect();
        let mut nodes: Vec<Node> = Vec::new();
        for e in &kept {
            if !nodes.contains(&e.left) {
                nodes.push(e.left);
            }
        }
        // connected components of the kept-pair graph
        let n = nodes.len();
        let index = |x: &Node| nodes.iter().position(|y| y == x).expect("node listed");
        let mut comp: Vec<usize> = (0..n).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for e in &kept {
                let (i, j) = (index(&e.left), index(&e.right));
                let m = comp[i].min(comp[j]);
                if comp[i] != m || comp[j] != m {
                    comp[i] = m;
                    comp[j] = m;
                    changed = true;
                }
            }
        }
        let mut roots: Vec<usize> = comp.clone();
        roots.sort_unstable();
        roots.dedup();
        for root in roots {
            let members: Vec<usize> = (0..n).filter(|&i| comp[i] == root).collect();
            let mut r = DMatrix::<C64>::zeros(members.len(), members.len());
            for e in &kept {
                let (i, j) = (index(&e.left), index(&e.right));
                if let (Some(a), Some(b)) = (members.iter().position(|&m| m == i), members.iter().position(|&m| m == j)) {
                    r[(a, b)] += e.rate;
                }
            }
            let eig = SymmetricEigen::new((&r + r.adjoint()) * c(0.5));
            min = min.min(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min));
        }
    }
    if min.is_finite() {
        min
    } else {
        0.0
    }
}

/// Largest real part of the eigenvalues of a Hermiticity-preserving generator.
pub fn spectral_abscissa(l: &SuperOp) -> f64 {
    real_representation(l)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn gksl_diagnostics(l: &Liouvillian) -> GkslReport {
    let trace_residual = max_abs(&(trace_row() * l.matrix));
    let hermiticity = pauli_basis()
        .iter()
        .map(|p| hermiticity_residual(&unvectorize(&(l.matrix * vectorize(p)))))
        .fold(0.0, f64::max);
    GkslReport {
        min_rate_eigenvalue: rate_matrix_minimum(l),
        trace_residual,
        hermiticity_residual: hermiticity,
        spectral_abscissa: spectral_abscissa(&l.matrix),
    }
}

/// Apply `L` to a 4x4 matrix.
pub fn apply(l: &SuperOp, rho: &Op) -> Op {
    unvectorize(&(l * vectorize(rho)))
}

type Complex = [f64; 2];

fn to_rows(m: &SuperOp) -> Vec<Vec<Complex>> {
    (0..16).map(|i| (0..16).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

fn from_rows(rows: &[Vec<Complex>]) -> Result<SuperOp> {
    if rows.len() != 16 || rows.iter().any(|r| r.len() != 16) {
        return Err(Error::Io("superoperator archive must be 16x16".into()));
    }
    Ok(SuperOp::from_fn(|i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

/// JSON snapshot of a generator; complex numbers are `[re, im]` pairs and
/// matrices are stored row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiouvillianArchive {
    pub variant: Variant,
    pub construction: Construction,
    pub policy: SecularPolicy,
    pub spec: QubitPairSpec,
    pub baths: Vec<BathSpec>,
    pub lamb_shift: bool,
    pub matrix: Vec<Vec<Complex>>,
    pub hamiltonian_part: Vec<Vec<Complex>>,
    pub lamb_shift_part: Vec<Vec<Complex>>,
    pub dissipator_part: Vec<Vec<Complex>>,
}

impl LiouvillianArchive {
    pub fn matrix(&self) -> Result<SuperOp> {
        from_rows(&self.matrix)
    }

    pub fn parts(&self) -> Result<[SuperOp; 3]> {
        Ok([
            from_rows(&self.hamiltonian_part)?,
            from_rows(&self.lamb_shift_part)?,
            from_rows(&self.dissipator_part)?,
        ])
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl Liouvillian {
    pub fn archive(&self) -> LiouvillianArchive {
        LiouvillianArchive {
            variant: self.variant,
            construction: self.construction,
            policy: self.policy,
            spec: self.spec,
            baths: self.baths.clone(),
            lamb_shift: self.lamb_shift,
            matrix: to_rows(&self.matrix),
            hamiltonian_part: to_rows(&self.hamiltonian_part),
            lamb_shift_part: to_rows(&self.lamb_shift_part),
            dissipator_part: to_rows(&self.dissipator_part),
        }
    }
}
