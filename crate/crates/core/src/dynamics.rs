//! Time evolution, steady states and observables.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2, SymmetricEigen, Vector4, SVD};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liouvillian::Liouvillian;
use crate::ops::{c, hermiticity_residual, on_qubit, sx, sy, sz, unvectorize, vectorize, Op, SuperOp, VecOp, C64};

/// Tolerance on trace and Hermiticity of a state.
pub const STATE_TOLERANCE: f64 = 1e-10;
/// Most negative eigenvalue accepted in a state.
pub const POSITIVITY_TOLERANCE: f64 = 1e-8;

fn hermitian_eigenvalues(m: &Op) -> Vec<f64> {
    let h = (m + m.adjoint()) * c(0.5);
    let mut v: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `sqrt` of a Hermitian positive semidefinite matrix; negative
/// eigenvalues are clipped to zero.
fn psd_sqrt(m: &Op) -> Op {
    let eig = SymmetricEigen::new((m + m.adjoint()) * c(0.5));
    let d = Op::from_diagonal(&eig.eigenvalues.map(|x| c(x.max(0.0).sqrt())));
    eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: Op,
}

impl DensityMatrix {
    /// Requires a Hermitian, unit-trace, positive semidefinite matrix
    /// (within [`STATE_TOLERANCE`] and [`POSITIVITY_TOLERANCE`]).
    pub fn new(matrix: Op) -> Result<Self> {
        let herm = hermiticity_residual(&matrix);
        if herm > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("not Hermitian (residual {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr - c(1.0)).norm() > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = hermitian_eigenvalues(&matrix)[0];
        if min < -POSITIVITY_TOLERANCE {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn matrix(&self) -> &Op {
        &self.matrix
    }

    /// `|psi><psi|` for a normalized state vector.
    pub fn pure(psi: &Vector4<C64>) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!("state vector has norm {norm}")));
        }
        Self::new(psi * psi.adjoint())
    }

    pub fn product(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Result<Self> {
        Self::new(a.kronecker(b))
    }

    /// `rho_OV (x) rho_OV` with `rho_OV = |+><+|`, the default initial state.
    pub fn overlapped() -> Self {
        let ov = Matrix2::from_element(c(0.5));
        DensityMatrix {
            matrix: ov.kronecker(&ov),
        }
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            matrix: Op::identity() * c(0.25),
        }
    }

    /// `exp(-beta H) / Z`.
    pub fn gibbs(h: &Op, beta: f64) -> Result<Self> {
        let eig = SymmetricEigen::new((h + h.adjoint()) * c(0.5));
        let e0 = eig.eigenvalues.min();
        let weights = eig.eigenvalues.map(|e| (-beta * (e - e0)).exp());
        let z: f64 = weights.sum();
        let d = Op::from_diagonal(&weights.map(|w| c(w / z)));
        Self::new(eig.eigenvectors * d * eig.eigenvectors.adjoint())
    }
}

/// `Re Tr(rho O)`.
pub fn expectation(rho: &Op, observable: &Op) -> f64 {
    (rho * observable).trace().re
}

/// `(1/2) ||a - b||_1`.
pub fn trace_distance(a: &Op, b: &Op) -> f64 {
    0.5 * hermitian_eigenvalues(&(a - b)).iter().map(|x| x.abs()).sum::<f64>()
}

/// Most negative eigenvalue tolerated by [`fidelity`]; admits the small
/// transient negativity of non-GKLS generators.
pub const FIDELITY_POSITIVITY_TOLERANCE: f64 = 1e-6;

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`, clipped to `[0, 1]`.
pub fn fidelity(rho: &Op, sigma: &Op) -> Result<f64> {
    for (name, m) in [("rho", rho), ("sigma", sigma)] {
        let herm = hermiticity_residual(m);
        if herm > 1e-8 {
            return Err(Error::InvalidState(format!("{name} is not Hermitian (residual {herm:e})")));
        }
        let min = hermitian_eigenvalues(m)[0];
        if min < -FIDELITY_POSITIVITY_TOLERANCE {
            return Err(Error::InvalidState(format!("{name} has eigenvalue {min:e}")));
        }
    }
    let s = psd_sqrt(rho);
    let inner = s * sigma * s;
    let root: f64 = hermitian_eigenvalues(&inner).iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok((root * root).clamp(0.0, 1.0))
}

/// Partial transpose over qubit 2.
pub fn partial_transpose(rho: &Op) -> Op {
    Op::from_fn(|r, col| {
        let (i1, i2) = (r / 2, r % 2);
        let (j1, j2) = (col / 2, col % 2);
        rho[(2 * i1 + j2, 2 * j1 + i2)]
    })
}

/// Sum of the magnitudes of the negative eigenvalues of the partial transpose.
pub fn negativity(rho: &Op) -> f64 {
    hermitian_eigenvalues(&partial_transpose(rho))
        .iter()
        .filter(|&&x| x < 0.0)
        .map(|x| -x)
        .sum()
}

/// Named scalar functions of a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Sz1,
    Sz2,
    Sx1,
    Sx2,
    Sy1,
    Sy2,
    Negativity,
    Purity,
}

impl Observable {
    pub const ALL: [Observable; 8] = [
        Observable::Sz1,
        Observable::Sz2,
        Observable::Sx1,
        Observable::Sx2,
        Observable::Sy1,
        Observable::Sy2,
        Observable::Negativity,
        Observable::Purity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Observable::Sz1 => "sz1",
            Observable::Sz2 => "sz2",
            Observable::Sx1 => "sx1",
            Observable::Sx2 => "sx2",
            Observable::Sy1 => "sy1",
            Observable::Sy2 => "sy2",
            Observable::Negativity => "negativity",
            Observable::Purity => "purity",
        }
    }

    pub fn evaluate(&self, rho: &Op) -> f64 {
        match self {
            Observable::Sz1 => expectation(rho, &on_qubit(1, &sz())),
            Observable::Sz2 => expectation(rho, &on_qubit(2, &sz())),
            Observable::Sx1 => expectation(rho, &on_qubit(1, &sx())),
            Observable::Sx2 => expectation(rho, &on_qubit(2, &sx())),
            Observable::Sy1 => expectation(rho, &on_qubit(1, &sy())),
            Observable::Sy2 => expectation(rho, &on_qubit(2, &sy())),
            Observable::Negativity => negativity(rho),
            Observable::Purity => (rho * rho).trace().re,
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Observable::ALL.iter().map(|o| o.name()).collect();
                Error::Config(format!("unknown observable `{s}` (known: {})", known.join(", ")))
            })
    }
}

/// Worst invariant violations along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryCheck {
    pub max_trace_error: f64,
    pub max_hermiticity: f64,
    pub min_eigenvalue: f64,
}

/// States sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Op>,
}

type Complex = [f64; 2];

/// JSON form of a trajectory; states are row-major `[re, im]` matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryArchive {
    pub times: Vec<f64>,
    pub observables: BTreeMap<String, Vec<f64>>,
    pub states: Vec<Vec<Vec<Complex>>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn series(&self, observable: Observable) -> Vec<f64> {
        self.states.iter().map(|s| observable.evaluate(s)).collect()
    }

    pub fn last(&self) -> Option<&Op> {
        self.states.last()
    }

    pub fn check(&self) -> TrajectoryCheck {
        let mut out = TrajectoryCheck {
            max_trace_error: 0.0,
            max_hermiticity: 0.0,
            min_eigenvalue: f64::INFINITY,
        };
        for s in &self.states {
            out.max_trace_error = out.max_trace_error.max((s.trace() - c(1.0)).norm());
            out.max_hermiticity = out.max_hermiticity.max(hermiticity_residual(s));
            out.min_eigenvalue = out.min_eigenvalue.min(hermitian_eigenvalues(s)[0]);
        }
        out
    }

    /// Write `t` plus one column per observable.
    pub fn write_csv<W: Write>(&self, out: W, observables: &[Observable]) -> Result<()> {
        let columns: Vec<(String, Vec<f64>)> = observables.iter().map(|o| (o.name().to_string(), self.series(*o))).collect();
        write_columns(out, &self.times, &columns)
    }

    pub fn archive(&self, observables: &[Observable]) -> TrajectoryArchive {
        TrajectoryArchive {
            times: self.times.clone(),
            observables: observables.iter().map(|o| (o.name().to_string(), self.series(*o))).collect(),
            states: self
                .states
                .iter()
                .map(|s| (0..4).map(|i| (0..4).map(|j| [s[(i, j)].re, s[(i, j)].im]).collect()).collect())
                .collect(),
        }
    }
}

impl TrajectoryArchive {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn trajectory(&self) -> Result<Trajectory> {
        let states = self
            .states
            .iter()
            .map(|rows| {
                if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                    return Err(Error::Io("archived state must be 4x4".into()));
                }
                Ok(Op::from_fn(|i, j| C64::new(rows[i][j][0], rows[i][j][1])))
            })
            .collect::<Result<Vec<_>>>()?;
        if states.len() != self.times.len() {
            return Err(Error::Io("archive has mismatched times and states".into()));
        }
        Ok(Trajectory {
            times: self.times.clone(),
            states,
        })
    }
}

/// CSV with a leading `t` column; values use the shortest round-trip form.
pub fn write_columns<W: Write>(out: W, times: &[f64], columns: &[(String, Vec<f64>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend(columns.iter().map(|(n, _)| n.clone()));
    w.write_record(&header)?;
    for (k, t) in times.iter().enumerate() {
        let mut row = vec![t.to_string()];
        row.extend(columns.iter().map(|(_, v)| v[k].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Read a CSV written by [`write_columns`].
pub fn read_columns<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut cols = vec![Vec::new(); header.len()];
    for rec in r.records() {
        let rec = rec?;
        for (k, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Io(format!("bad number `{field}` in column {k}")))?;
            cols[k].push(v);
        }
    }
    Ok((header, cols))
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidParameter {
            name: "times",
            reason: "time grid is empty".into(),
        });
    }
    if times[0] < 0.0 || times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter {
            name: "times",
            reason: "times must be finite, nonnegative and strictly increasing".into(),
        });
    }
    Ok(())
}

/// `n` points `start + k dt`.
pub fn uniform_grid(start: f64, dt: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| start + k as f64 * dt).collect()
}

fn log_check(traj: &Trajectory) {
    let check = traj.check();
    if check.max_trace_error > STATE_TOLERANCE || check.max_hermiticity > STATE_TOLERANCE {
        log::warn!("trajectory drifts: {check:?}");
    }
    if check.min_eigenvalue < -POSITIVITY_TOLERANCE {
        log::info!("trajectory leaves the state space transiently: min eigenvalue {:e}", check.min_eigenvalue);
    }
}

/// `rho(t_k) = exp(L t_k) rho0`, stepping between samples with cached
/// propagators `exp(L dt)`. Steps equal to a cached one within a relative
/// `1e-12` reuse it.
pub fn propagate(l: &SuperOp, rho0: &DensityMatrix, times: &[f64]) -> Result<Trajectory> {
    check_times(times)?;
    let mut cache: Vec<(f64, SuperOp)> = Vec::new();
    let mut step = |dt: f64| -> SuperOp {
        if let Some((_, p)) = cache.iter().rev().find(|(d, _)| (d - dt).abs() <= 1e-12 * dt) {
            return *p;
        }
        let p = (l * c(dt)).exp();
        cache.push((dt, p));
        p
    };
    let mut v = vectorize(rho0.matrix());
    let mut t = 0.0;
    let mut states = Vec::with_capacity(times.len());
    for &tk in times {
        if tk > t {
            v = step(tk - t) * v;
            t = tk;
        }
        states.push(unvectorize(&v));
    }
    let traj = Trajectory {
        times: times.to_vec(),
        states,
    };
    log_check(&traj);
    Ok(traj)
}

/// Default adaptive tolerance, per unit time.
pub const ADAPTIVE_TOLERANCE: f64 = 1e-10;

// Dormand-Prince 5(4) tableau
const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order minus embedded fourth-order weights
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Propagate with adaptive Dormand-Prince steps, keeping the local error
/// estimate below `tol` per unit time.
///
/// # Errors
/// `StepFailure` when the step size collapses.
pub fn propagate_adaptive(l: &SuperOp, rho0: &DensityMatrix, times: &[f64], tol: f64) -> Result<Trajectory> {
    check_times(times)?;
    let norm = l.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut h = 0.01 / norm;
    let mut y: VecOp = vectorize(rho0.matrix());
    let mut t = 0.0;
    let mut k = [VecOp::zeros(); 7];
    k[0] = l * y;
    let mut states = Vec::with_capacity(times.len());
    for &target in times {
        while t < target {
            let last = target - t <= h;
            let hs = if last { target - t } else { h };
            for s in 1..7 {
                let mut acc = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    if DP_A[s][j] != 0.0 {
                        acc += kj * c(hs * DP_A[s][j]);
                    }
                }
                debug_assert!(DP_C[s] >= 0.0);
                k[s] = l * acc;
            }
            let mut err = VecOp::zeros();
            for (j, kj) in k.iter().enumerate() {
                err += kj * c(hs * DP_E[j]);
            }
            let err = err.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let allowed = tol * hs;
            if err <= allowed {
                let mut next = y;
                for (j, kj) in k.iter().enumerate().take(6) {
                    if DP_A[6][j] != 0.0 {
                        next += kj * c(hs * DP_A[6][j]);
                    }
                }
                y = next;
                t = if last { target } else { t + hs };
                k[0] = k[6];
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * (allowed / err).powf(0.25)).clamp(0.2, 5.0) };
            if !(last && err <= allowed) {
                h = hs * factor;
            }
            if h < 1e-13 * t.max(1.0) {
                return Err(Error::StepFailure {
                    time: t,
                    reason: format!("step size collapsed to {h:e}"),
                });
            }
        }
        states.push(unvectorize(&y));
    }
    let traj = Trajectory {
        times: times.to_vec(),
        states,
    };
    log_check(&traj);
    Ok(traj)
}

/// Result of [`steady_state`].
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub state: Op,
    /// Dimension of the numerical null space of `L`.
    pub nullity: usize,
}

/// Relative singular-value threshold for the null space of `L`.
pub const NULLSPACE_TOLERANCE: f64 = 1e-10;
/// Default time horizon of the long-time limit.
pub const STEADY_HORIZON: f64 = 1e8;

/// Stationary state of `L`.
///
/// A one-dimensional null space gives the state directly. A degenerate
/// one needs `rho0`; the state is then the long-time limit of the
/// evolution, found by doubling the time until successive states agree to
/// `1e-10` in trace distance.
pub fn steady_state(l: &SuperOp, rho0: Option<&DensityMatrix>) -> Result<SteadyState> {
    steady_state_with_horizon(l, rho0, STEADY_HORIZON)
}

pub fn steady_state_with_horizon(l: &SuperOp, rho0: Option<&DensityMatrix>, horizon: f64) -> Result<SteadyState> {
    let dm = DMatrix::from_iterator(16, 16, l.iter().copied());
    let svd = SVD::new(dm, false, true);
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let largest = svd.singular_values.max();
    let null: Vec<usize> = (0..16)
        .filter(|&i| svd.singular_values[i] <= NULLSPACE_TOLERANCE * largest.max(1e-300))
        .collect();
    let nullity = null.len().max(if largest == 0.0 { 16 } else { 0 });
    if nullity == 1 {
        let row = v_t.row(null[0]);
        let v = VecOp::from_iterator(row.iter().map(|z| z.conj()));
        let m = unvectorize(&v);
        let tr = m.trace();
        if tr.norm() < 1e-12 {
            return Err(Error::NoConvergence("null vector of L is traceless".into()));
        }
        let rho = m / tr;
        return Ok(SteadyState {
            state: (rho + rho.adjoint()) * c(0.5),
            nullity,
        });
    }
    let rho0 = rho0.ok_or(Error::DegenerateSteadyState { nullity })?;
    let v0 = vectorize(rho0.matrix());
    let mut t = 1.0 / largest.max(1.0);
    let mut p = (l * c(t)).exp();
    let mut prev = unvectorize(&(p * v0));
    while t < horizon {
        p = p * p;
        t *= 2.0;
        let next = unvectorize(&(p * v0));
        if trace_distance(&next, &prev) < 1e-10 {
            return Ok(SteadyState {
                state: (next + next.adjoint()) * c(0.5),
                nullity,
            });
        }
        prev = next;
    }
    Err(Error::NoConvergence(format!("long-time limit not reached by t = {horizon:e}")))
}

/// Stationary heat currents, one per bath.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatCurrents {
    /// `J_k = Tr(H L_k[rho])` with `L_k` every term sourced by bath `k`;
    /// positive values flow into the system.
    pub currents: Vec<f64>,
}

impl HeatCurrents {
    pub fn total(&self) -> f64 {
        self.currents.iter().sum()
    }
}

/// Heat currents at `rho_inf`. Each bath's Lamb shift is included with its
/// dissipator, so the currents of a stationary state sum to zero.
pub fn heat_currents(l: &Liouvillian, rho_inf: &Op) -> HeatCurrents {
    let v = vectorize(rho_inf);
    let currents: Vec<f64> = l
        .bath_parts
        .iter()
        .map(|part| expectation(&unvectorize(&(part.generator() * v)), &l.hamiltonian))
        .collect();
    let out = HeatCurrents { currents };
    let scale = out.currents.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if out.total().abs() > 1e-12 + 1e-10 * scale {
        log::warn!("heat currents do not balance: sum {:e} against scale {:e}", out.total(), scale);
    }
    out
}

fn uniform_step(times: &[f64]) -> Result<f64> {
    if times.len() < 4 {
        return Err(Error::InvalidParameter {
            name: "times",
            reason: "need at least four samples".into(),
        });
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if !(dt > 0.0) || times.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt) {
        return Err(Error::InvalidParameter {
            name: "times",
            reason: "grid is not uniform".into(),
        });
    }
    Ok(dt)
}

/// One-sided amplitude spectrum of a detrended, Hann-windowed series.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Angular frequencies `2 pi k / (N dt)`.
    pub frequencies: Vec<f64>,
    /// `2 |X_k| / sum(w)`; a pure tone of amplitude `A` on a bin peaks at `A`.
    pub amplitudes: Vec<f64>,
}

impl Spectrum {
    /// Amplitude at the bin nearest to `omega`.
    pub fn amplitude_at(&self, omega: f64) -> f64 {
        let dw = self.frequencies.get(1).copied().unwrap_or(1.0);
        let k = ((omega / dw).round() as usize).min(self.amplitudes.len() - 1);
        self.amplitudes[k]
    }
}

pub fn amplitude_spectrum(times: &[f64], series: &[f64]) -> Result<Spectrum> {
    let dt = uniform_step(times)?;
    if series.len() != times.len() {
        return Err(Error::InvalidParameter {
            name: "series",
            reason: "length differs from the time grid".into(),
        });
    }
    let n = series.len();
    // least-squares line in the sample index
    let nf = n as f64;
    let mean_k = (nf - 1.0) / 2.0;
    let mean_x = series.iter().sum::<f64>() / nf;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (k, x) in series.iter().enumerate() {
        let dk = k as f64 - mean_k;
        sxy += dk * (x - mean_x);
        sxx += dk * dk;
    }
    let slope = sxy / sxx;
    let window: Vec<f64> = (0..n)
        .map(|k| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * k as f64 / (nf - 1.0)).cos()))
        .collect();
    let wsum: f64 = window.iter().sum();
    let mut buf: Vec<rustfft::num_complex::Complex<f64>> = series
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let r = x - mean_x - slope * (k as f64 - mean_k);
            rustfft::num_complex::Complex::new(r * window[k], 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2 + 1;
    Ok(Spectrum {
        frequencies: (0..half).map(|k| 2.0 * std::f64::consts::PI * k as f64 / (nf * dt)).collect(),
        amplitudes: buf[..half].iter().map(|z| 2.0 * z.norm() / wsum).collect(),
    })
}

/// Dominant oscillation of a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeatPeak {
    pub frequency: f64,
    pub amplitude: f64,
}

/// Largest strict local maximum of the amplitude spectrum away from zero
/// frequency; `None` when nothing rises above the round-off floor.
///
/// Bins inside the Hann main lobe of the zero-frequency component
/// (`k < 3`) are skipped, since residual trend leaks there.
pub fn beat_spectrum(times: &[f64], series: &[f64]) -> Result<Option<BeatPeak>> {
    let spec = amplitude_spectrum(times, series)?;
    let scale = series.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let floor = 1e-10 * scale.max(f64::MIN_POSITIVE);
    let a = &spec.amplitudes;
    let best = (3..a.len().saturating_sub(1))
        .filter(|&k| a[k] > a[k - 1] && a[k] > a[k + 1] && a[k] > floor)
        .max_by(|&i, &j| a[i].total_cmp(&a[j]));
    Ok(best.map(|k| BeatPeak {
        frequency: spec.frequencies[k],
        amplitude: a[k],
    }))
}

/// Sliding-window Pearson correlation of two series.
///
/// Entry `i` correlates the `window` time units ending at `times[i]`; it is
/// `None` before the first full window and where either series is constant
/// over the window.
pub fn synchronization_measure(times: &[f64], a: &[f64], b: &[f64], window: f64) -> Result<Vec<Option<f64>>> {
    let dt = uniform_step(times)?;
    if a.len() != times.len() || b.len() != times.len() {
        return Err(Error::InvalidParameter {
            name: "series",
            reason: "length differs from the time grid".into(),
        });
    }
    let w = (window / dt).round() as usize;
    if w < 10 {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: format!("window spans {w} samples, at least 10 are needed"),
        });
    }
    let n = times.len();
    // centre globally to limit cancellation in the running sums
    let centred = |x: &[f64]| {
        let m = x.iter().sum::<f64>() / n as f64;
        x.iter().map(|v| v - m).collect::<Vec<f64>>()
    };
    let (x, y) = (centred(a), centred(b));
    let scale = |v: &[f64]| v.iter().map(|z| z.abs()).fold(0.0, f64::max);
    let (sx_, sy_) = (scale(&x), scale(&y));
    let prefix = |f: &dyn Fn(usize) -> f64| {
        let mut p = vec![0.0; n + 1];
        for i in 0..n {
            p[i + 1] = p[i] + f(i);
        }
        p
    };
    let px = prefix(&|i| x[i]);
    let py = prefix(&|i| y[i]);
    let pxx = prefix(&|i| x[i] * x[i]);
    let pyy = prefix(&|i| y[i] * y[i]);
    let pxy = prefix(&|i| x[i] * y[i]);
    let wf = w as f64;
    let mut out = vec![None; n];
    for i in (w - 1)..n {
        let (lo, hi) = (i + 1 - w, i + 1);
        let mx = (px[hi] - px[lo]) / wf;
        let my = (py[hi] - py[lo]) / wf;
        let vx = (pxx[hi] - pxx[lo]) / wf - mx * mx;
        let vy = (pyy[hi] - pyy[lo]) / wf - my * my;
        let cov = (pxy[hi] - pxy[lo]) / wf - mx * my;
        let degenerate = |v: f64, s: f64| v <= (1e-7 * s).powi(2);
        if degenerate(vx, sx_) || degenerate(vy, sy_) {
            continue;
        }
        out[i] = Some((cov / (vx * vy).sqrt()).clamp(-1.0, 1.0));
    }
    Ok(out)
}
