//! Exact propagation of `i|Ψ̇⟩ = H(R(t))|Ψ⟩` and the Pancharatnam phase of
//! the dynamically dressed state, used as an independent check on the
//! adiabatic geometric phase.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::frame::{phase_smooth, EigenFrame};
use crate::linalg::{inner, norm, CMatrix, CVector};
use crate::model::Hamiltonian;
use crate::path::ParameterPath;
use crate::phase::PhaseEngine;
use crate::quadrature::cumulative_trapezoid;

/// Largest allowed `dt · max‖H‖`.
pub const MAX_PHASE_STEP: f64 = 0.1;

/// Per-step norm defect (before renormalization) that trips the alarm.
pub const NORM_DRIFT_ALARM: f64 = 1e-6;

/// States `|Ψ;t_k⟩` on the integration grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<CVector>,
    /// `⟨Ψ|H|Ψ⟩` at every grid time.
    pub energies: Vec<f64>,
    /// Largest `|‖Ψ‖ − 1|` seen before renormalizing a step.
    pub max_norm_defect: f64,
}

impl StateTrajectory {
    pub fn final_state(&self) -> &CVector {
        &self.states[self.states.len() - 1]
    }

    /// `|Ψ;t⟩ e^{i∫⟨H⟩dt}`, with the integral accumulated by the trapezoid rule.
    pub fn dressed(&self) -> DressedTrajectory {
        let phase = cumulative_trapezoid(&self.times, &self.energies);
        let states = self
            .states
            .iter()
            .zip(&phase)
            .map(|(s, &p)| {
                let f = Complex64::from_polar(1.0, p);
                s.iter().map(|x| x * f).collect()
            })
            .collect();
        DressedTrajectory { times: self.times.clone(), states }
    }
}

/// States `|φ;t⟩` with the expectation-value dynamical phase removed.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<CVector>,
}

/// Largest `|E|` over the schedule's samples, the spectral norm of `H`.
pub fn max_energy<H: Hamiltonian + ?Sized>(model: &H, schedule: &ParameterPath) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in schedule.samples() {
        let spec = eigh(&model.evaluate(&s.point)?)?;
        for e in spec.values {
            worst = worst.max(e.abs());
        }
    }
    Ok(worst)
}

/// A step that satisfies both resolution conditions with a factor 2 margin.
pub fn default_dt<H: Hamiltonian + ?Sized>(model: &H, schedule: &ParameterPath) -> Result<f64> {
    let by_energy = 0.5 * MAX_PHASE_STEP / max_energy(model, schedule)?.max(1e-300);
    let by_schedule = if schedule.len() > 1 { 0.5 * schedule.min_spacing() } else { f64::INFINITY };
    Ok(by_energy.min(by_schedule).min(schedule.duration().max(f64::MIN_POSITIVE)))
}

fn apply(h: &CMatrix, v: &[Complex64]) -> CVector {
    // −iHv
    h.mul_vec(v).into_iter().map(|x| Complex64::new(x.im, -x.re)).collect()
}

fn axpy(v: &[Complex64], a: f64, k: &[Complex64]) -> CVector {
    v.iter().zip(k).map(|(x, y)| x + y * a).collect()
}

/// Integrates the Schrödinger equation along `schedule` with classical RK4
/// and renormalization after every step. `H(t)` interpolates the schedule's
/// parameters linearly. The grid has `ceil(duration/dt)` equal steps, so the
/// actual step never exceeds `dt`.
pub fn propagate<H: Hamiltonian + ?Sized>(
    model: &H,
    schedule: &ParameterPath,
    initial: &[Complex64],
    dt: f64,
) -> Result<StateTrajectory> {
    if initial.len() != model.dimension() {
        return Err(Error::Dimension { expected: model.dimension(), found: initial.len() });
    }
    if schedule.dim() != model.parameter_dim() {
        return Err(Error::Dimension { expected: model.parameter_dim(), found: schedule.dim() });
    }
    let h_max = max_energy(model, schedule)?;
    if !(dt > 0.0) || dt * h_max >= MAX_PHASE_STEP {
        return Err(Error::StepSize { dt, limit: MAX_PHASE_STEP / h_max.max(1e-300) });
    }
    if schedule.len() > 1 && dt >= schedule.min_spacing() {
        return Err(Error::StepSize { dt, limit: schedule.min_spacing() });
    }
    let mut psi: CVector = initial.to_vec();
    crate::linalg::normalize(&mut psi)?;

    let t0 = schedule.start_time();
    let steps = (schedule.duration() / dt).ceil() as usize;
    let h = if steps == 0 { 0.0 } else { schedule.duration() / steps as f64 };
    let ham = |t: f64| model.evaluate(&schedule.point_at(t));

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut energies = Vec::with_capacity(steps + 1);
    let mut h_now = ham(t0)?;
    times.push(t0);
    energies.push(h_now.sandwich(&psi, &psi).re);
    states.push(psi.clone());
    let mut max_defect: f64 = 0.0;

    for k in 0..steps {
        let t = t0 + h * k as f64;
        let t_next = if k + 1 == steps { schedule.end_time() } else { t0 + h * (k + 1) as f64 };
        let h_mid = ham(t + 0.5 * h)?;
        let h_end = ham(t_next)?;
        let k1 = apply(&h_now, &psi);
        let k2 = apply(&h_mid, &axpy(&psi, 0.5 * h, &k1));
        let k3 = apply(&h_mid, &axpy(&psi, 0.5 * h, &k2));
        let k4 = apply(&h_end, &axpy(&psi, h, &k3));
        for i in 0..psi.len() {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
        let n = norm(&psi);
        let defect = (n - 1.0).abs();
        if !(defect <= NORM_DRIFT_ALARM) {
            return Err(Error::NormDrift { drift: defect });
        }
        max_defect = max_defect.max(defect);
        for x in psi.iter_mut() {
            *x /= n;
        }
        h_now = h_end;
        times.push(t_next);
        energies.push(h_now.sandwich(&psi, &psi).re);
        states.push(psi.clone());
    }
    Ok(StateTrajectory { times, states, energies, max_norm_defect: max_defect })
}

/// `arg⟨state0|state1⟩`, undefined for nearly orthogonal states.
pub fn pancharatnam_phase(state0: &[Complex64], state1: &[Complex64], orthogonality_threshold: f64) -> Result<f64> {
    let ov = inner(state0, state1);
    if ov.norm() < orthogonality_threshold {
        return Err(Error::UndefinedPhase { magnitude: ov.norm(), threshold: orthogonality_threshold });
    }
    Ok(ov.arg())
}

/// Exact geometric phase of a run started in the instantaneous eigenstate
/// `level` at the start of `schedule`: the Pancharatnam phase between the
/// endpoints of the dressed trajectory.
pub fn oracle_geometric_phase<H: Hamiltonian + ?Sized>(
    engine: &PhaseEngine,
    model: &H,
    schedule: &ParameterPath,
    level: usize,
    dt: f64,
) -> Result<f64> {
    let start = engine.frame(model, &schedule.samples()[0].point, level)?;
    let traj = propagate(model, schedule, &start.vector, dt)?;
    let dressed = traj.dressed();
    pancharatnam_phase(&dressed.states[0], &dressed.states[dressed.states.len() - 1], engine.tol.orthogonality)
}

/// Parallel-transport gauge: rephases frames so that the discrete connection
/// vanishes on every segment. Identical to [`phase_smooth`].
pub fn parallel_transport_frames(frames: &[EigenFrame], orthogonality_threshold: f64) -> Result<Vec<EigenFrame>> {
    phase_smooth(frames, orthogonality_threshold)
}

/// One row of trajectory output.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryCheckpoint {
    pub time: f64,
    pub state: CVector,
    pub norm: f64,
    /// `|⟨n;R(t)|Ψ;t⟩|`.
    pub eigen_overlap: f64,
}

/// Every `stride`-th state of `traj` (and the last) with its overlap on the
/// instantaneous eigenstate `level`.
pub fn checkpoints<H: Hamiltonian + ?Sized>(
    engine: &PhaseEngine,
    model: &H,
    schedule: &ParameterPath,
    traj: &StateTrajectory,
    level: usize,
    stride: usize,
) -> Result<Vec<TrajectoryCheckpoint>> {
    let stride = stride.max(1);
    let last = traj.times.len() - 1;
    let mut out = Vec::new();
    for k in (0..=last).filter(|&k| k % stride == 0 || k == last) {
        let frame = engine.frame(model, &schedule.point_at(traj.times[k]), level)?;
        let state = traj.states[k].clone();
        out.push(TrajectoryCheckpoint {
            time: traj.times[k],
            norm: norm(&state),
            eigen_overlap: inner(&frame.vector, &state).norm(),
            state,
        });
    }
    Ok(out)
}
