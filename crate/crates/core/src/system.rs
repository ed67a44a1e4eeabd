//! The two-qubit system Hamiltonian and its eigenstructure.
//!
//! Frequencies are measured in units of the first qubit's frequency, so
//! `omega1 = 1` and only `omega2 <= 1` is a free parameter.
//!
//! Every supported coupling conserves excitation parity, so the Hamiltonian
//! splits into an "outer" block on `{|11>, |00>}` and an "inner" block on
//! `{|10>, |01>}`. Each block is a real 2x2 symmetric matrix diagonalized by
//! one rotation angle: `theta` for the outer block and `phi` for the inner one.
//! The eigenvectors are
//!
//! ```text
//! |e0> = -sin(theta)|11> + cos(theta)|00>      |e1> = -sin(phi)|10> + cos(phi)|01>
//! |e3> =  cos(theta)|11> + sin(theta)|00>      |e2> =  cos(phi)|10> + sin(phi)|01>
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::{c, on_qubit, splus, sminus, sx, sy, sz, Op};

/// Off-block magnitude above which a matrix is rejected by [`diagonalize`].
pub const PARITY_TOLERANCE: f64 = 1e-12;

/// Qubit-qubit interaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CouplingKind {
    /// `lambda sigma1^x sigma2^x`
    IsingXx { lambda: f64 },
    /// `sum_k lambda_k sigma1^k sigma2^k`
    Heisenberg { lx: f64, ly: f64, lz: f64 },
    /// `lambda (sigma1^- sigma2^+ + sigma1^+ sigma2^-)`
    Rwa { lambda: f64 },
}

impl CouplingKind {
    fn values(&self) -> Vec<(&'static str, f64)> {
        match *self {
            CouplingKind::IsingXx { lambda } => vec![("lambda", lambda)],
            CouplingKind::Heisenberg { lx, ly, lz } => vec![("lx", lx), ("ly", ly), ("lz", lz)],
            CouplingKind::Rwa { lambda } => vec![("lambda", lambda)],
        }
    }

    /// Largest absolute coupling constant.
    pub fn strength(&self) -> f64 {
        self.values().iter().map(|(_, v)| v.abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.strength() == 0.0
    }

    /// The same kind with every coupling constant replaced by zero.
    pub fn zeroed(&self) -> CouplingKind {
        match self {
            CouplingKind::IsingXx { .. } => CouplingKind::IsingXx { lambda: 0.0 },
            CouplingKind::Heisenberg { .. } => CouplingKind::Heisenberg {
                lx: 0.0,
                ly: 0.0,
                lz: 0.0,
            },
            CouplingKind::Rwa { .. } => CouplingKind::Rwa { lambda: 0.0 },
        }
    }

    /// The same kind with the main coupling constant set to `lambda`
    /// (`lx` for Heisenberg).
    pub fn with_lambda(&self, lambda: f64) -> CouplingKind {
        match *self {
            CouplingKind::IsingXx { .. } => CouplingKind::IsingXx { lambda },
            CouplingKind::Heisenberg { ly, lz, .. } => CouplingKind::Heisenberg { lx: lambda, ly, lz },
            CouplingKind::Rwa { .. } => CouplingKind::Rwa { lambda },
        }
    }
}

/// Renormalized parameters of the qubit pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitPairSpec {
    omega2: f64,
    coupling: CouplingKind,
}

impl QubitPairSpec {
    /// Requires `0 < omega2 <= 1` and finite couplings.
    pub fn new(omega2: f64, coupling: CouplingKind) -> Result<Self> {
        if !omega2.is_finite() || omega2 <= 0.0 || omega2 > 1.0 {
            return Err(Error::InvalidParameter {
                name: "omega2",
                reason: format!("must satisfy 0 < omega2 <= 1, got {omega2}"),
            });
        }
        for (name, v) in coupling.values() {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite, got {v}"),
                });
            }
        }
        Ok(Self { omega2, coupling })
    }

    pub fn ising(omega2: f64, lambda: f64) -> Result<Self> {
        Self::new(omega2, CouplingKind::IsingXx { lambda })
    }

    pub fn omega1(&self) -> f64 {
        1.0
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn coupling(&self) -> CouplingKind {
        self.coupling
    }

    pub fn omega_plus(&self) -> f64 {
        1.0 + self.omega2
    }

    pub fn omega_minus(&self) -> f64 {
        1.0 - self.omega2
    }

    /// The same qubits with the interaction switched off.
    pub fn uncoupled(&self) -> QubitPairSpec {
        QubitPairSpec {
            omega2: self.omega2,
            coupling: self.coupling.zeroed(),
        }
    }
}

/// The free part `omega1/2 sigma1^z + omega2/2 sigma2^z`.
pub fn local_hamiltonian(spec: &QubitPairSpec) -> Op {
    on_qubit(1, &sz()) * c(0.5) + on_qubit(2, &sz()) * c(0.5 * spec.omega2)
}

/// The interaction term alone.
pub fn interaction_hamiltonian(coupling: &CouplingKind) -> Op {
    let pair = |a: nalgebra::Matrix2<_>, b: nalgebra::Matrix2<_>| on_qubit(1, &a) * on_qubit(2, &b);
    match *coupling {
        CouplingKind::IsingXx { lambda } => pair(sx(), sx()) * c(lambda),
        CouplingKind::Heisenberg { lx, ly, lz } => {
            pair(sx(), sx()) * c(lx) + pair(sy(), sy()) * c(ly) + pair(sz(), sz()) * c(lz)
        }
        CouplingKind::Rwa { lambda } => (pair(sminus(), splus()) + pair(splus(), sminus())) * c(lambda),
    }
}

/// System Hamiltonian in the canonical basis `{|11>, |10>, |01>, |00>}`.
pub fn build_hamiltonian(spec: &QubitPairSpec) -> Result<Op> {
    let h = local_hamiltonian(spec) + interaction_hamiltonian(&spec.coupling);
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "coupling",
            reason: "Hamiltonian has non-finite entries".into(),
        });
    }
    Ok(h)
}

/// The four transition frequencies between eigenlevels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpFrequencies {
    /// `E2 - E0` (equal to `E3 - E1` unless a `sigma^z sigma^z` term splits them)
    pub omega_i: f64,
    /// `E3 - E2` (equal to `E1 - E0` under the same proviso)
    pub omega_ii: f64,
    /// `E3 - E0`
    pub omega_iii: f64,
    /// `E2 - E1`
    pub omega_iv: f64,
}

/// Eigen-decomposition of a parity-blocked Hamiltonian.
///
/// Levels are labelled by block: `e0`, `e3` span the outer block and `e1`,
/// `e2` the inner block, with `E0 <= E3` and `E1 <= E2`. For the Ising
/// coupling this labelling is also the ascending order of the energies. A
/// large RWA or Heisenberg coupling can push `E2` above `E3`; the labels are
/// kept so that jump operators keep their closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenStructure {
    pub energies: [f64; 4],
    /// Columns are `|e0>, ..., |e3>` in the canonical basis.
    pub basis: Op,
    pub theta: f64,
    pub phi: f64,
    pub jump_freqs: JumpFrequencies,
    /// Half-gaps of the outer and inner blocks.
    pub(crate) half_gaps: (f64, f64),
    /// Centres of the outer and inner blocks.
    pub(crate) centres: (f64, f64),
}

impl EigenStructure {
    pub fn eigenvector(&self, n: usize) -> nalgebra::Vector4<crate::ops::C64> {
        self.basis.column(n).into_owned()
    }

    pub fn sin2theta(&self) -> f64 {
        (2.0 * self.theta).sin()
    }

    pub fn cos2theta(&self) -> f64 {
        (2.0 * self.theta).cos()
    }

    pub fn sin2phi(&self) -> f64 {
        (2.0 * self.phi).sin()
    }

    pub fn cos2phi(&self) -> f64 {
        (2.0 * self.phi).cos()
    }
}

struct Block {
    centre: f64,
    half_diff: f64,
    off: f64,
}

impl Block {
    fn half_gap(&self) -> f64 {
        self.half_diff.hypot(self.off)
    }

    fn angle(&self) -> f64 {
        // atan2(0, 0) = 0 picks the product basis at a degeneracy
        0.5 * self.off.atan2(self.half_diff)
    }
}

fn real_entry(h: &Op, i: usize, j: usize) -> Result<f64> {
    let z = h[(i, j)];
    if z.im.abs() > PARITY_TOLERANCE {
        return Err(Error::InvalidParameter {
            name: "hamiltonian",
            reason: format!("entry ({i}, {j}) is not real: {z}"),
        });
    }
    Ok(z.re)
}

fn blocks(h: &Op) -> Result<(Block, Block)> {
    const OFF_BLOCK: [(usize, usize); 8] =
        [(0, 1), (0, 2), (1, 0), (2, 0), (1, 3), (2, 3), (3, 1), (3, 2)];
    let off_block = OFF_BLOCK.iter().map(|&(i, j)| h[(i, j)].norm()).fold(0.0, f64::max);
    if off_block > PARITY_TOLERANCE {
        return Err(Error::NotParityBlocked { off_block });
    }
    let herm = crate::ops::hermiticity_residual(h);
    if herm > PARITY_TOLERANCE {
        return Err(Error::InvalidParameter {
            name: "hamiltonian",
            reason: format!("not Hermitian (residual {herm:e})"),
        });
    }
    let outer = Block {
        centre: 0.5 * (real_entry(h, 0, 0)? + real_entry(h, 3, 3)?),
        half_diff: 0.5 * (real_entry(h, 0, 0)? - real_entry(h, 3, 3)?),
        off: real_entry(h, 0, 3)?,
    };
    let inner = Block {
        centre: 0.5 * (real_entry(h, 1, 1)? + real_entry(h, 2, 2)?),
        half_diff: 0.5 * (real_entry(h, 1, 1)? - real_entry(h, 2, 2)?),
        off: real_entry(h, 1, 2)?,
    };
    Ok((outer, inner))
}

/// Closed-form eigenvectors for the given mixing angles.
pub fn basis_from_angles(theta: f64, phi: f64) -> Op {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    // rows: |11>, |10>, |01>, |00>; columns: e0..e3
    Op::new(
        c(-st), c(0.0), c(0.0), c(ct),
        c(0.0), c(-sp), c(cp), c(0.0),
        c(0.0), c(cp), c(sp), c(0.0),
        c(ct), c(0.0), c(0.0), c(st),
    )
}

/// Diagonalize a parity-blocked Hermitian Hamiltonian in closed form.
pub fn diagonalize(h: &Op) -> Result<EigenStructure> {
    let (outer, inner) = blocks(h)?;
    let (a, b) = (outer.half_gap(), inner.half_gap());
    let theta = outer.angle();
    let phi = inner.angle();
    let energies = [outer.centre - a, inner.centre - b, inner.centre + b, outer.centre + a];
    Ok(EigenStructure {
        energies,
        basis: basis_from_angles(theta, phi),
        theta,
        phi,
        jump_freqs: frequencies_of(&energies),
        half_gaps: (a, b),
        centres: (outer.centre, inner.centre),
    })
}

fn frequencies_of(e: &[f64; 4]) -> JumpFrequencies {
    JumpFrequencies {
        omega_i: e[2] - e[0],
        omega_ii: e[3] - e[2],
        omega_iii: e[3] - e[0],
        omega_iv: e[2] - e[1],
    }
}

pub fn jump_frequencies(es: &EigenStructure) -> JumpFrequencies {
    es.jump_freqs
}

/// Outcome of [`detect_frequency_crossing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub crossing: bool,
    /// Signed `32 lambda^2 - (omega_+^2 - 9 omega_-^2)` for the Ising coupling.
    pub residual: f64,
}

/// Detect the parameter surface on which `omega_II` meets `omega_IV`.
///
/// For the Ising coupling the residual is `32 lambda^2 - (omega_+^2 - 9
/// omega_-^2)`. Other couplings use the same condition written in terms of
/// the block half-gaps `a`, `b` and the block-centre offset `d`: `4 (9 b^2 -
/// (a +- d)^2)`, reported for the sign that lies closer to zero.
pub fn detect_frequency_crossing(spec: &QubitPairSpec, tol: f64) -> Crossing {
    let residual = match spec.coupling {
        CouplingKind::IsingXx { lambda } => {
            let (wp, wm) = (spec.omega_plus(), spec.omega_minus());
            32.0 * lambda * lambda - (wp * wp - 9.0 * wm * wm)
        }
        _ => {
            let h = build_hamiltonian(spec).expect("validated spec");
            let (outer, inner) = blocks(&h).expect("couplings conserve parity");
            let a = outer.half_gap();
            let b = inner.half_gap();
            let d = outer.centre - inner.centre;
            let r1 = 4.0 * (9.0 * b * b - (a + d) * (a + d));
            let r2 = 4.0 * (9.0 * b * b - (a - d) * (a - d));
            if r1.abs() <= r2.abs() {
                r1
            } else {
                r2
            }
        }
    };
    Crossing {
        crossing: residual.abs() <= tol,
        residual,
    }
}
