//! The adiabatic noncyclic geometric phase of an open path.
//!
//! For a path `C` sampled at `R(t_0), …, R(t_N)` the geometric phase of level
//! `n` is
//!
//! ```text
//! γ_n[C] = arg⟨n;R(t_0)|n;R(t_N)⟩ + ∫ i⟨n|∇_R|n⟩ · dR
//! ```
//!
//! Without a closed-form connection the integral is discretized as
//! `−Σ_k arg⟨n(t_k)|n(t_{k+1})⟩`. The composite is then invariant under any
//! rephasing of the individual frames, sample by sample.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::eigen::{eigensolve, eigh};
use crate::error::{Error, Result};
use crate::frame::EigenFrame;
use crate::linalg::CMatrix;
use crate::model::Hamiltonian;
use crate::path::ParameterPath;
use crate::quadrature::cumulative_trapezoid;

/// `x mod m` in `[0, m)` for `m > 0`; `f64::rem_euclid` needs std.
pub(crate) fn rem_euclid(x: f64, m: f64) -> f64 {
    let r = x - m * (x / m).floor();
    if r >= m {
        r - m
    } else {
        r
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap(x: f64) -> f64 {
    let r = rem_euclid(x + PI, 2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

/// `|wrap(a − b)|`, the only comparison metric used for phases.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap(a - b).abs()
}

/// Continuous branch of a sequence of wrapped phases, starting from `values[0]`.
pub fn unwrap(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    for (k, &v) in values.iter().enumerate() {
        if k == 0 {
            acc = v;
        } else {
            acc += wrap(v - values[k - 1]);
        }
        out.push(acc);
    }
    out
}

/// Numerical thresholds shared by the phase computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Minimum spectral gap of the tracked level.
    pub degeneracy: f64,
    /// Overlap magnitude below which a relative phase is undefined.
    pub orthogonality: f64,
    /// Relative step of centered finite differences in parameter space.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { degeneracy: 1e-9, orthogonality: 1e-8, fd_step: 1e-5 }
    }
}

/// Phase bookkeeping at one time `t` along the path.
///
/// `total_phase = geometric_unwrapped + energy_phase` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDecomposition {
    pub time: f64,
    /// `−∫ E_n dt`.
    pub energy_phase: f64,
    /// `α_n(t) − α_n(0)`, the connection integral.
    pub connection_phase: f64,
    /// `arg⟨n;R(0)|n;R(t)⟩` in `(−π, π]`.
    pub overlap_phase: f64,
    /// `γ_n[C]` wrapped to `(−π, π]`.
    pub geometric_phase: f64,
    /// `γ_n[C]` continued along the path from `γ = 0` at the start.
    pub geometric_unwrapped: f64,
    pub total_phase: f64,
}

/// One row of a phase trace; `phases` is `None` where the endpoint overlap
/// vanishes and the phase is undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCheckpoint {
    pub time: f64,
    pub overlap_magnitude: f64,
    pub phases: Option<PhaseDecomposition>,
}

/// Result of the adiabaticity check `|⟨n|Ḣ|m⟩| / (E_n − E_m)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticityReport {
    pub metric: f64,
    pub worst_time: f64,
    pub worst_level: usize,
}

/// Gauge function `λ(R(t_k))` sampled at the path times.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFunction {
    pub values: Vec<f64>,
}

/// Multiplies frame `k` by `e^{iλ_k}`; energies are unchanged.
pub fn apply_gauge(frames: &[EigenFrame], gauge: &GaugeFunction) -> Result<Vec<EigenFrame>> {
    if frames.len() != gauge.values.len() {
        return Err(Error::Dimension { expected: frames.len(), found: gauge.values.len() });
    }
    Ok(frames.iter().zip(&gauge.values).map(|(f, &l)| f.rephased(l)).collect())
}

/// Which eigenvectors feed the phase computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrameSource {
    /// Closed-form frames and connection when the model provides them,
    /// numerical eigenvectors with the discrete connection otherwise.
    #[default]
    Auto,
    /// Always diagonalize numerically and use the discrete connection.
    Numeric,
}

/// Evaluates phases, connections and diagnostics with fixed [`Tolerances`].
#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseEngine {
    pub tol: Tolerances,
    pub source: FrameSource,
}

impl PhaseEngine {
    pub fn new(tol: Tolerances) -> Self {
        Self { tol, source: FrameSource::Auto }
    }

    pub fn numeric(tol: Tolerances) -> Self {
        Self { tol, source: FrameSource::Numeric }
    }

    fn check_gap(&self, frame: &EigenFrame) -> Result<()> {
        if frame.gap < self.tol.degeneracy {
            return Err(Error::Degeneracy { level: frame.level, gap: frame.gap, threshold: self.tol.degeneracy });
        }
        Ok(())
    }

    /// Eigenframe of `level` at `point`, analytic when allowed and available.
    pub fn frame<H: Hamiltonian + ?Sized>(&self, model: &H, point: &[f64], level: usize) -> Result<EigenFrame> {
        if self.source == FrameSource::Auto {
            if let Some(f) = model.analytic_frame(point, level)? {
                self.check_gap(&f)?;
                return Ok(f);
            }
        }
        eigensolve(&model.evaluate(point)?, level, point, self.tol.degeneracy)
    }

    /// One frame per path sample.
    pub fn frames_along<H: Hamiltonian + ?Sized>(&self, model: &H, path: &ParameterPath, level: usize) -> Result<Vec<EigenFrame>> {
        if path.dim() != model.parameter_dim() {
            return Err(Error::Dimension { expected: model.parameter_dim(), found: path.dim() });
        }
        path.samples().iter().map(|s| self.frame(model, &s.point, level)).collect()
    }

    /// `arg⟨frame0|frame1⟩`, failing when the frames are orthogonal.
    pub fn overlap_phase(&self, frame0: &EigenFrame, frame1: &EigenFrame) -> Result<f64> {
        let ov = frame0.overlap(frame1);
        if ov.norm() < self.tol.orthogonality {
            return Err(Error::UndefinedPhase { magnitude: ov.norm(), threshold: self.tol.orthogonality });
        }
        Ok(ov.arg())
    }

    /// Per-segment discrete connection increments `−arg⟨n_k|n_{k+1}⟩`.
    fn discrete_increments(&self, frames: &[EigenFrame]) -> Result<Vec<f64>> {
        frames
            .windows(2)
            .map(|w| {
                let ov = w[0].overlap(&w[1]);
                if ov.norm() < self.tol.orthogonality {
                    return Err(Error::Resolution("consecutive eigenframes are nearly orthogonal; refine the path sampling"));
                }
                Ok(-ov.arg())
            })
            .collect()
    }

    /// Discrete connection integral `−Σ_k arg⟨n_k|n_{k+1}⟩` over
    /// gauge-continuous frames.
    pub fn connection_integral(&self, frames: &[EigenFrame]) -> Result<f64> {
        Ok(self.discrete_increments(frames)?.iter().sum())
    }

    /// Builds the phase trace from frames and per-segment connection increments.
    fn trace_from(&self, frames: &[EigenFrame], increments: &[f64], times: &[f64]) -> Vec<PhaseCheckpoint> {
        let energies: Vec<f64> = frames.iter().map(|f| f.energy).collect();
        let energy_int = cumulative_trapezoid(times, &energies);
        let mut connection = 0.0;
        let mut unwrapped = 0.0;
        let mut last_wrapped: Option<f64> = None;
        let mut out = Vec::with_capacity(frames.len());
        for k in 0..frames.len() {
            if k > 0 {
                connection += increments[k - 1];
            }
            let ov = frames[0].overlap(&frames[k]);
            let magnitude = ov.norm();
            let phases = if magnitude < self.tol.orthogonality {
                None
            } else {
                let overlap_phase = ov.arg();
                let wrapped = wrap(overlap_phase + connection);
                match last_wrapped {
                    None => unwrapped = wrapped,
                    Some(prev) => unwrapped += wrap(wrapped - prev),
                }
                last_wrapped = Some(wrapped);
                let energy_phase = -energy_int[k];
                Some(PhaseDecomposition {
                    time: times[k],
                    energy_phase,
                    connection_phase: connection,
                    overlap_phase,
                    geometric_phase: wrapped,
                    geometric_unwrapped: unwrapped,
                    total_phase: unwrapped + energy_phase,
                })
            };
            out.push(PhaseCheckpoint { time: times[k], overlap_magnitude: magnitude, phases });
        }
        out
    }

    fn increments_for<H: Hamiltonian + ?Sized>(
        &self,
        model: &H,
        path: &ParameterPath,
        frames: &[EigenFrame],
        level: usize,
    ) -> Result<Vec<f64>> {
        let analytic = self.source == FrameSource::Auto
            && model.analytic_frame(&path.samples()[0].point, level)?.is_some()
            && (path.len() < 2
                || model.connection_over_segment(&path.samples()[0].point, &path.samples()[1].point, level).is_some());
        if !analytic {
            return self.discrete_increments(frames);
        }
        path.samples()
            .windows(2)
            .map(|w| {
                model
                    .connection_over_segment(&w[0].point, &w[1].point, level)
                    .ok_or(Error::Domain("model provides the connection only on part of the path"))
            })
            .collect()
    }

    /// Phase decomposition at every path sample.
    pub fn phase_trace<H: Hamiltonian + ?Sized>(&self, model: &H, path: &ParameterPath, level: usize) -> Result<Vec<PhaseCheckpoint>> {
        let frames = self.frames_along(model, path, level)?;
        let increments = self.increments_for(model, path, &frames, level)?;
        Ok(self.trace_from(&frames, &increments, &path.times()))
    }

    /// `γ_n[C]` and its decomposition at the end of `path`.
    pub fn geometric_phase<H: Hamiltonian + ?Sized>(&self, model: &H, path: &ParameterPath, level: usize) -> Result<PhaseDecomposition> {
        let trace = self.phase_trace(model, path, level)?;
        self.final_of(&trace)
    }

    /// Geometric phase of explicitly given frames (any gauge), using the
    /// discrete connection. `times` supplies the energy quadrature abscissae.
    pub fn geometric_phase_of_frames(&self, frames: &[EigenFrame], times: &[f64]) -> Result<PhaseDecomposition> {
        if frames.is_empty() {
            return Err(Error::Resolution("no frames"));
        }
        if frames.len() != times.len() {
            return Err(Error::Dimension { expected: frames.len(), found: times.len() });
        }
        for f in frames {
            self.check_gap(f)?;
        }
        let increments = self.discrete_increments(frames)?;
        let trace = self.trace_from(frames, &increments, times);
        self.final_of(&trace)
    }

    fn final_of(&self, trace: &[PhaseCheckpoint]) -> Result<PhaseDecomposition> {
        let last = trace.last().ok_or(Error::Resolution("empty path"))?;
        last.phases.ok_or(Error::UndefinedPhase { magnitude: last.overlap_magnitude, threshold: self.tol.orthogonality })
    }

    /// `−∫ E_n dt` by the trapezoid rule on the path's own time stamps.
    pub fn energy_phase<H: Hamiltonian + ?Sized>(&self, model: &H, path: &ParameterPath, level: usize) -> Result<f64> {
        let frames = self.frames_along(model, path, level)?;
        let energies: Vec<f64> = frames.iter().map(|f| f.energy).collect();
        Ok(-crate::quadrature::trapezoid(&path.times(), &energies))
    }

    /// Centered finite-difference derivative `∂H/∂R_i` at `point`.
    pub fn parameter_derivative<H: Hamiltonian + ?Sized>(&self, model: &H, point: &[f64], axis: usize) -> Result<CMatrix> {
        let h = self.tol.fd_step * point[axis].abs().max(1.0);
        let mut plus = point.to_vec();
        let mut minus = point.to_vec();
        plus[axis] += h;
        minus[axis] -= h;
        let hp = model.evaluate(&plus)?;
        let hm = model.evaluate(&minus)?;
        Ok((&hp - &hm).scale(0.5 / h))
    }

    /// `dH/dt` at sample `k`: chain rule through `∂H/∂R` when the model can be
    /// evaluated off the path, otherwise differences of `H` between neighbours.
    fn time_derivative<H: Hamiltonian + ?Sized>(&self, model: &H, path: &ParameterPath, k: usize) -> Result<CMatrix> {
        let s = path.samples();
        let n = s.len();
        let dim = model.dimension();
        if n < 2 {
            return Ok(CMatrix::zeros(dim));
        }
        let (a, b) = if k == 0 {
            (0, 1)
        } else if k == n - 1 {
            (n - 2, n - 1)
        } else {
            (k - 1, k + 1)
        };
        let dt = s[b].time - s[a].time;
        let velocity: Vec<f64> = s[a].point.iter().zip(&s[b].point).map(|(x, y)| (y - x) / dt).collect();
        let mut hdot = CMatrix::zeros(dim);
        let mut chain_ok = true;
        for (axis, &v) in velocity.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            match self.parameter_derivative(model, &s[k].point, axis) {
                Ok(d) => hdot = &hdot + &d.scale(v),
                Err(_) => {
                    chain_ok = false;
                    break;
                }
            }
        }
        if chain_ok {
            return Ok(hdot);
        }
        let ha = model.evaluate(&s[a].point)?;
        let hb = model.evaluate(&s[b].point)?;
        Ok((&hb - &ha).scale(1.0 / dt))
    }

    /// `max_{t, m≠n} |⟨n|Ḣ|m⟩| / (E_n − E_m)²` along the path (`ħ = 1`).
    pub fn adiabaticity_metric<H: Hamiltonian + ?Sized>(&self, model: &H, path: &ParameterPath, level: usize) -> Result<AdiabaticityReport> {
        if level >= model.dimension() {
            return Err(Error::Dimension { expected: model.dimension(), found: level });
        }
        let mut report = AdiabaticityReport { metric: 0.0, worst_time: path.start_time(), worst_level: level };
        for (k, sample) in path.samples().iter().enumerate() {
            let spec = eigh(&model.evaluate(&sample.point)?)?;
            let gap = spec.gap(level);
            if gap < self.tol.degeneracy {
                return Err(Error::Degeneracy { level, gap, threshold: self.tol.degeneracy });
            }
            let hdot = self.time_derivative(model, path, k)?;
            let n_vec = &spec.vectors[level];
            for m in 0..spec.values.len() {
                if m == level {
                    continue;
                }
                let de = spec.values[level] - spec.values[m];
                let value = hdot.sandwich(n_vec, &spec.vectors[m]).norm() / (de * de);
                if value > report.metric {
                    report = AdiabaticityReport { metric: value, worst_time: sample.time, worst_level: m };
                }
            }
        }
        Ok(report)
    }
}
