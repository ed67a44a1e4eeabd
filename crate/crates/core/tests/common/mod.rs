//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{Matrix2, SymmetricEigen, Vector4};
use qpair::bath::{correlation, Attachment, BathSpec, CorrelationOptions, SpectralDensity};
use qpair::jumps::Channel;
use qpair::liouvillian::{BuildOptions, SecularPolicy, Variant};
use qpair::ops::{Op, SuperOp, C64};
use qpair::system::{CouplingKind, QubitPairSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn z(re: f64) -> C64 {
    C64::new(re, 0.0)
}

// single-qubit basis ordered {|1>, |0>}
fn pauli_z() -> Matrix2<C64> {
    Matrix2::new(z(1.0), z(0.0), z(0.0), z(-1.0))
}
fn pauli_x() -> Matrix2<C64> {
    Matrix2::new(z(0.0), z(1.0), z(1.0), z(0.0))
}
fn pauli_y() -> Matrix2<C64> {
    Matrix2::new(z(0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), z(0.0))
}
fn lowering() -> Matrix2<C64> {
    Matrix2::new(z(0.0), z(0.0), z(1.0), z(0.0))
}

pub fn first(a: Matrix2<C64>) -> Op {
    a.kronecker(&Matrix2::identity())
}
pub fn second(a: Matrix2<C64>) -> Op {
    Matrix2::identity().kronecker(&a)
}

pub fn channel_operator(ch: Channel) -> Op {
    match ch {
        Channel::X1 => first(pauli_x()),
        Channel::X2 => second(pauli_x()),
        Channel::Z1 => first(pauli_z()),
        Channel::Z2 => second(pauli_z()),
    }
}

pub fn oracle_local_hamiltonian(spec: &QubitPairSpec) -> Op {
    first(pauli_z()) * z(0.5 * spec.omega1()) + second(pauli_z()) * z(0.5 * spec.omega2())
}

pub fn oracle_hamiltonian(spec: &QubitPairSpec) -> Op {
    let v = match spec.coupling() {
        CouplingKind::IsingXx { lambda } => first(pauli_x()) * second(pauli_x()) * z(lambda),
        CouplingKind::Heisenberg { lx, ly, lz } => {
            first(pauli_x()) * second(pauli_x()) * z(lx)
                + first(pauli_y()) * second(pauli_y()) * z(ly)
                + first(pauli_z()) * second(pauli_z()) * z(lz)
        }
        CouplingKind::Rwa { lambda } => {
            let lo = lowering();
            let hi = lo.adjoint();
            (first(lo) * second(hi) + first(hi) * second(lo)) * z(lambda)
        }
    };
    oracle_local_hamiltonian(spec) + v
}

fn ket(i: usize) -> Vector4<C64> {
    let mut v = Vector4::zeros();
    v[i] = z(1.0);
    v
}

/// Levels `e0..e3` labelled by parity block: `e0`, `e3` are the lower and
/// upper states of the `{|11>, |00>}` block, `e1`, `e2` of `{|10>, |01>}`.
/// A block without mixing keeps its product states.
pub fn oracle_levels(h: &Op) -> ([Vector4<C64>; 4], [f64; 4]) {
    let block = |i: usize, j: usize| -> (Vector4<C64>, Vector4<C64>) {
        if h[(i, j)].norm() == 0.0 {
            return (ket(j), ket(i));
        }
        let m = Matrix2::new(h[(i, i)], h[(i, j)], h[(j, i)], h[(j, j)]);
        let eig = SymmetricEigen::new(m);
        let (lo, hi) = if eig.eigenvalues[0] <= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
        let embed = |k: usize| {
            let mut v = Vector4::zeros();
            v[i] = eig.eigenvectors[(0, k)];
            v[j] = eig.eigenvectors[(1, k)];
            v
        };
        (embed(lo), embed(hi))
    };
    let (e0, e3) = block(0, 3);
    let (e1, e2) = block(1, 2);
    let basis = [e0, e1, e2, e3];
    let energies = basis.map(|v| (v.adjoint() * h * v)[(0, 0)].re);
    (basis, energies)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fam {
    Zero,
    I,
    II,
    III,
    IV,
}

fn family(m: usize, n: usize) -> Fam {
    match (m.min(n), m.max(n)) {
        (a, b) if a == b => Fam::Zero,
        (0, 2) | (1, 3) => Fam::I,
        (0, 1) | (2, 3) => Fam::II,
        (0, 3) => Fam::III,
        _ => Fam::IV,
    }
}

/// One matrix element `c |e_m><e_n|` of a channel operator.
#[derive(Debug, Clone)]
pub struct Transition {
    pub channel: Channel,
    pub family: Fam,
    pub frequency: f64,
    pub op: Op,
}

pub fn transitions(basis: &[Vector4<C64>; 4], energies: &[f64; 4], ch: Channel) -> Vec<Transition> {
    let a = channel_operator(ch);
    let mut out = Vec::new();
    for m in 0..4 {
        for n in 0..4 {
            let amp = (basis[m].adjoint() * a * basis[n])[(0, 0)];
            if amp.norm() == 0.0 {
                continue;
            }
            out.push(Transition {
                channel: ch,
                family: family(m, n),
                frequency: if m == n { 0.0 } else { energies[n] - energies[m] },
                op: basis[m] * basis[n].adjoint() * amp,
            });
        }
    }
    out
}

fn keeps(policy: &SecularPolicy, p: &Transition, q: &Transition) -> bool {
    let dw = (p.frequency - q.frequency).abs();
    match *policy {
        SecularPolicy::Full => dw <= 1e-12,
        SecularPolicy::Threshold { epsilon } => dw <= epsilon,
        SecularPolicy::PaperGroups => {
            let x = |t: &Transition| matches!(t.channel, Channel::X1 | Channel::X2);
            if x(p) != x(q) {
                false
            } else if x(p) {
                (p.frequency > 0.0) == (q.frequency > 0.0)
            } else {
                let slow = |f: Fam| matches!(f, Fam::Zero | Fam::IV);
                (slow(p.family) && slow(q.family)) || (p.family == Fam::III && q.family == Fam::III && dw <= 1e-9)
            }
        }
    }
}

fn uses_global_basis(spec: &QubitPairSpec, variant: Variant) -> bool {
    variant.is_global() && !spec.coupling().is_zero()
}

/// The generator built column by column from its action on `E_ij`.
pub fn oracle_generator(spec: &QubitPairSpec, baths: &[BathSpec], variant: Variant, opts: &BuildOptions) -> SuperOp {
    let h = oracle_hamiltonian(spec);
    let jump_h = if uses_global_basis(spec, variant) { h } else { oracle_local_hamiltonian(spec) };
    let (basis, energies) = oracle_levels(&jump_h);
    let policy = match variant {
        Variant::GF | Variant::LF => SecularPolicy::Full,
        _ => opts.partial_rule,
    };
    let corr_opts = CorrelationOptions {
        lamb_shift: opts.lamb_shift,
        tolerance: opts.quadrature_tolerance,
    };

    // (rate, A_p, A_q^dagger) triples and the Lamb-shift Hamiltonian
    let mut terms: Vec<(C64, Op, Op)> = Vec::new();
    let mut h_ls = Op::zeros();
    for bath in baths {
        let corr = correlation(bath, corr_opts).unwrap();
        let active: Vec<Channel> = Channel::ALL.into_iter().filter(|c| bath.coupling(*c) != 0.0).collect();
        for &alpha in &active {
            for &beta in &active {
                if bath.split && (alpha_is_x(alpha) != alpha_is_x(beta)) {
                    continue;
                }
                let g = bath.coupling(alpha) * bath.coupling(beta);
                for p in transitions(&basis, &energies, alpha) {
                    for q in transitions(&basis, &energies, beta) {
                        if !keeps(&policy, &p, &q) {
                            continue;
                        }
                        let gp = corr.big_gamma(p.frequency).unwrap();
                        let gq = corr.big_gamma(q.frequency).unwrap().conj();
                        let rate = (gp + gq) * g;
                        let shift = (gp - gq) / C64::new(0.0, 2.0) * g;
                        let q_dag = q.op.adjoint();
                        h_ls += q_dag * p.op * shift;
                        terms.push((rate, p.op, q_dag));
                    }
                }
            }
        }
    }
    let total_h = h + h_ls;
    let rhs = |rho: &Op| -> Op {
        let mut out = (total_h * rho - rho * total_h) * C64::new(0.0, -1.0);
        for (rate, a, b_dag) in &terms {
            let prod = b_dag * a;
            out += (a * rho * b_dag - (prod * rho + rho * prod) * z(0.5)) * *rate;
        }
        out
    };
    let mut l = SuperOp::zeros();
    for j in 0..4 {
        for i in 0..4 {
            let mut e = Op::zeros();
            e[(i, j)] = z(1.0);
            let col = rhs(&e);
            // column-stacked index of E_ij is i + 4 j
            for jj in 0..4 {
                for ii in 0..4 {
                    l[(ii + 4 * jj, i + 4 * j)] = col[(ii, jj)];
                }
            }
        }
    }
    l
}

fn alpha_is_x(c: Channel) -> bool {
    matches!(c, Channel::X1 | Channel::X2)
}

/// `A(omega)` from a dense eigensolver: projectors onto energy levels
/// grouped within `1e-9`, then every pair of levels binned by gap.
pub fn brute_force_jump_oracle(h: &Op, ch: Channel) -> Vec<(f64, Op)> {
    let eig = SymmetricEigen::new(*h);
    let mut levels: Vec<(f64, Op)> = Vec::new();
    for k in 0..4 {
        let e = eig.eigenvalues[k];
        let v = eig.eigenvectors.column(k).into_owned();
        let proj = v * v.adjoint();
        match levels.iter_mut().find(|(f, _)| (f - e).abs() <= 1e-9) {
            Some((_, p)) => *p += proj,
            None => levels.push((e, proj)),
        }
    }
    let a = channel_operator(ch);
    let mut out: Vec<(f64, Op)> = Vec::new();
    for (em, pm) in &levels {
        for (en, pn) in &levels {
            let piece = pm * a * pn;
            if piece.iter().all(|x| x.norm() < 1e-14) {
                continue;
            }
            let w = en - em;
            match out.iter_mut().find(|(f, _)| (f - w).abs() <= 1e-9) {
                Some((_, m)) => *m += piece,
                None => out.push((w, piece)),
            }
        }
    }
    out
}

/// `exp(-beta H) / Z` through the matrix exponential.
pub fn gibbs_oracle(h: &Op, beta: f64) -> Op {
    let e = (h * z(-beta)).exp();
    e / e.trace()
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// `S(omega)` for the Ohmic density `J(v) = v W^2 / (W^2 + v^2)`.
///
/// With `gamma(v) = pi J(v) (1 + coth(beta v / 2))` the principal value
/// splits into a Lorentzian part done analytically,
/// `-pi W^3 / (2 (W^2 + w^2))`, and an odd part
/// `sign(w) int_0^inf (g(v) - g(|w|)) |w| / (w^2 - v^2) dv` with
/// `g = J coth(beta v / 2)`, whose pole is removed by the subtraction. The
/// remaining integral is done with exp-sinh quadrature.
pub fn oracle_lamb_shift(cutoff: f64, beta: f64, omega: f64) -> f64 {
    let w2 = cutoff * cutoff;
    let j = |v: f64| v * w2 / (w2 + v * v);
    let g = |v: f64| if v == 0.0 { 2.0 / beta } else { j(v) * coth(0.5 * beta * v) };
    let analytic = -std::f64::consts::PI * w2 * cutoff / (2.0 * (w2 + omega * omega));
    let a = omega.abs();
    if a == 0.0 {
        return analytic;
    }
    let ga = g(a);
    let dg = (g(a * (1.0 + 1e-5)) - g(a * (1.0 - 1e-5))) / (2e-5 * a);
    let f = |v: f64| {
        if (v - a).abs() < 1e-7 * a {
            -dg * a / (a + v)
        } else {
            (g(v) - ga) * a / (a * a - v * v)
        }
    };
    let h = 1.0 / 128.0;
    let mut sum = 0.0;
    let n = (6.0 / h) as i64;
    for k in -n..=n {
        let t = k as f64 * h;
        let s = std::f64::consts::FRAC_PI_2 * t.sinh();
        let v = s.exp();
        if !v.is_finite() || v == 0.0 {
            continue;
        }
        let jac = v * std::f64::consts::FRAC_PI_2 * t.cosh();
        let term = f(v) * jac;
        if term.is_finite() {
            sum += term;
        }
    }
    analytic + omega.signum() * sum * h
}

/// Closed-form excited population of a lone qubit in a zero-temperature
/// bath: `p(t) = p0 exp(-rate t)`.
pub fn amplitude_damping(p0: f64, rate: f64, t: f64) -> f64 {
    p0 * (-rate * t).exp()
}

pub fn random_coupling(rng: &mut ChaCha8Rng) -> CouplingKind {
    match rng.gen_range(0..4) {
        0 => CouplingKind::IsingXx { lambda: 0.0 },
        1 => CouplingKind::IsingXx {
            lambda: rng.gen_range(1e-3..0.8),
        },
        2 => CouplingKind::Heisenberg {
            lx: rng.gen_range(-0.4..0.4),
            ly: rng.gen_range(-0.4..0.4),
            lz: rng.gen_range(-0.4..0.4),
        },
        _ => CouplingKind::Rwa {
            lambda: rng.gen_range(1e-3..0.8),
        },
    }
}

pub fn random_spec(rng: &mut ChaCha8Rng) -> QubitPairSpec {
    QubitPairSpec::new(rng.gen_range(0.2..1.0), random_coupling(rng)).unwrap()
}

fn weights(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.25) {
        0.0
    } else {
        rng.gen_range(0.1..1.5)
    }
}

/// Either one common bath or two local baths, sometimes both.
pub fn random_baths(rng: &mut ChaCha8Rng) -> Vec<BathSpec> {
    let sd = SpectralDensity::ohmic(rng.gen_range(5.0..30.0));
    let mu = rng.gen_range(3e-3..3e-2);
    let mut baths = Vec::new();
    let layout = rng.gen_range(0..3);
    if layout != 1 {
        baths.push(
            BathSpec::new(Attachment::Common, rng.gen_range(0.2..3.0), sd, mu)
                .with_dissipation([weights(rng), weights(rng)])
                .with_dephasing([weights(rng), weights(rng)])
                .split(rng.gen_bool(0.3)),
        );
    }
    if layout != 0 {
        baths.push(
            BathSpec::new(Attachment::Local1, rng.gen_range(0.2..3.0), sd, mu)
                .with_dissipation([weights(rng), 0.0])
                .with_dephasing([weights(rng), 0.0]),
        );
        baths.push(
            BathSpec::new(Attachment::Local2, rng.gen_range(0.1..3.0), sd, mu)
                .with_dissipation([0.0, weights(rng)])
                .with_dephasing([0.0, weights(rng)]),
        );
    }
    baths
}

pub fn max_diff(a: &SuperOp, b: &SuperOp) -> f64 {
    (a - b).iter().map(|x| x.norm()).fold(0.0, f64::max)
}
