//! Frequency-resolved jump operators `A(omega)` of the four interaction
//! channels `sigma1^x`, `sigma2^x`, `sigma1^z`, `sigma2^z`.
//!
//! `A(omega)` collects the matrix elements of `A` between eigenlevels
//! separated by `omega`, so positive frequencies lower the energy and
//! `A(-omega) = A(omega)^dagger`. Entries are labelled by the transition
//! family of the level diagram:
//!
//! | family | transitions (upper -> lower) | channels |
//! |--------|------------------------------|----------|
//! | `I`    | `e2 -> e0`, `e3 -> e1`       | x        |
//! | `II`   | `e1 -> e0`, `e3 -> e2`       | x        |
//! | `III`  | `e3 -> e0`                   | z        |
//! | `IV`   | `e2 -> e1`                   | z        |
//! | `Zero` | diagonal                     | z        |
//!
//! For uncoupled qubits `I` and `II` are the bare transitions of qubit 1
//! and qubit 2.

use serde::{Deserialize, Serialize};

use crate::ops::{on_qubit, sminus, sx, sz, Op, C64};
use crate::system::{EigenStructure, QubitPairSpec};

/// Gaps closer than this are one physical frequency.
pub const FREQUENCY_BIN: f64 = 1e-9;

/// System operator entering the interaction Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    X1,
    X2,
    Z1,
    Z2,
}

impl Channel {
    pub const ALL: [Channel; 4] = [Channel::X1, Channel::X2, Channel::Z1, Channel::Z2];

    pub fn qubit(&self) -> usize {
        match self {
            Channel::X1 | Channel::Z1 => 1,
            Channel::X2 | Channel::Z2 => 2,
        }
    }

    pub fn is_dissipative(&self) -> bool {
        matches!(self, Channel::X1 | Channel::X2)
    }

    pub fn operator(&self) -> Op {
        match self {
            Channel::X1 => on_qubit(1, &sx()),
            Channel::X2 => on_qubit(2, &sx()),
            Channel::Z1 => on_qubit(1, &sz()),
            Channel::Z2 => on_qubit(2, &sz()),
        }
    }
}

/// Transition family of a jump operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Zero,
    I,
    II,
    III,
    IV,
}

/// How the jump operators are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Eigenbasis of the full Hamiltonian, coupling included.
    GlobalCoupled,
    /// Product basis of uncoupled qubits.
    GlobalUncoupled,
    /// Product basis regardless of the coupling.
    Local,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpOperator {
    pub channel: Channel,
    pub family: Family,
    /// Signed; positive frequencies lower the energy.
    pub frequency: f64,
    pub matrix: Op,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpTable {
    pub entries: Vec<JumpOperator>,
    pub construction: Construction,
}

impl JumpTable {
    pub fn channel(&self, channel: Channel) -> impl Iterator<Item = &JumpOperator> {
        self.entries.iter().filter(move |e| e.channel == channel)
    }

    /// Distinct `|omega|` values, ascending.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        let mut all: Vec<f64> = self.entries.iter().map(|e| e.frequency.abs()).collect();
        all.sort_by(f64::total_cmp);
        for w in all {
            if out.last().is_none_or(|&last| w - last > FREQUENCY_BIN) {
                out.push(w);
            }
        }
        out
    }

    /// `sum_omega A(omega)` for one channel.
    pub fn reconstruct(&self, channel: Channel) -> Op {
        self.channel(channel).map(|e| e.matrix).sum()
    }
}

// allowed (lower, upper) level pairs per family
const TRANSITIONS: [(Family, [(usize, usize); 2], usize); 4] = [
    (Family::I, [(0, 2), (1, 3)], 2),
    (Family::II, [(0, 1), (2, 3)], 2),
    (Family::III, [(0, 3), (0, 0)], 1),
    (Family::IV, [(1, 2), (0, 0)], 1),
];

fn families(channel: Channel) -> &'static [Family] {
    if channel.is_dissipative() {
        &[Family::I, Family::II]
    } else {
        &[Family::III, Family::IV]
    }
}

fn dyad(es: &EigenStructure, m: usize, n: usize) -> Op {
    es.eigenvector(m) * es.eigenvector(n).adjoint()
}

/// Push `A(omega)` and, for nonzero `omega`, its adjoint partner.
fn push_pair(entries: &mut Vec<JumpOperator>, channel: Channel, family: Family, frequency: f64, matrix: Op) {
    entries.push(JumpOperator {
        channel,
        family,
        frequency,
        matrix,
    });
    if frequency != 0.0 {
        entries.push(JumpOperator {
            channel,
            family,
            frequency: -frequency,
            matrix: matrix.adjoint(),
        });
    }
}

/// Jump operators in the eigenbasis of the coupled Hamiltonian.
///
/// Components are obtained by projecting each channel onto the eigenvector
/// dyads and grouped per family; transitions of one family whose gaps
/// differ by more than [`FREQUENCY_BIN`] become separate entries. Families
/// whose matrix elements vanish identically are omitted, so uncoupled
/// qubits carry no `IV` entries and the RWA coupling no `III` entries.
pub fn global_jumps(es: &EigenStructure) -> JumpTable {
    let e = &es.energies;
    let mut entries = Vec::new();
    for channel in Channel::ALL {
        let a = channel.operator();
        let proj = es.basis.adjoint() * a * es.basis;

        if !channel.is_dissipative() {
            let diag: Op = (0..4).map(|n| dyad(es, n, n) * proj[(n, n)]).sum();
            if diag.iter().any(|z| *z != C64::new(0.0, 0.0)) {
                push_pair(&mut entries, channel, Family::Zero, 0.0, diag);
            }
        }

        for &family in families(channel) {
            let (_, pairs, count) = TRANSITIONS.iter().find(|t| t.0 == family).expect("known family");
            // group the family's transitions by gap
            let mut groups: Vec<(f64, Op)> = Vec::new();
            for &(lo, hi) in &pairs[..*count] {
                let coeff = proj[(lo, hi)];
                if coeff == C64::new(0.0, 0.0) {
                    continue;
                }
                let gap = e[hi] - e[lo];
                let term = dyad(es, lo, hi) * coeff;
                match groups.iter_mut().find(|(w, _)| (w - gap).abs() <= FREQUENCY_BIN) {
                    Some((_, m)) => *m += term,
                    None => groups.push((gap, term)),
                }
            }
            for (gap, matrix) in groups {
                push_pair(&mut entries, channel, family, gap, matrix);
            }
        }
    }
    JumpTable {
        entries,
        construction: Construction::GlobalCoupled,
    }
}

fn product_basis_table(spec: &QubitPairSpec, construction: Construction) -> JumpTable {
    let mut entries = Vec::new();
    push_pair(&mut entries, Channel::X1, Family::I, spec.omega1(), on_qubit(1, &sminus()));
    push_pair(&mut entries, Channel::X2, Family::II, spec.omega2(), on_qubit(2, &sminus()));
    push_pair(&mut entries, Channel::Z1, Family::Zero, 0.0, Channel::Z1.operator());
    push_pair(&mut entries, Channel::Z2, Family::Zero, 0.0, Channel::Z2.operator());
    JumpTable {
        entries,
        construction,
    }
}

/// Jump operators of the uncoupled qubits (the coupling of `spec` is ignored).
pub fn uncoupled_jumps(spec: &QubitPairSpec) -> JumpTable {
    product_basis_table(spec, Construction::GlobalUncoupled)
}

/// Zeroth-order local jump operators: bare single-qubit transitions at
/// `omega1`, `omega2` and `0`, independent of the coupling.
pub fn local_jumps(spec: &QubitPairSpec) -> JumpTable {
    product_basis_table(spec, Construction::Local)
}
