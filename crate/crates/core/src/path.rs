//! Time-stamped sampled curves in parameter space.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One sample `(t, R(t))` of a parameter path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub time: f64,
    pub point: Vec<f64>,
}

/// The curve `C`: parameter points `R(t_k)` at strictly increasing times.
///
/// A single-sample path is allowed and represents a path of zero length and
/// zero duration.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterPath {
    samples: Vec<PathSample>,
    closed: bool,
}

const CLOSED_TOL: f64 = 1e-10;

impl ParameterPath {
    /// Validates the samples; `closed` is detected from the endpoints.
    pub fn new(samples: Vec<PathSample>) -> Result<Self> {
        let closed = match (samples.first(), samples.last()) {
            (Some(a), Some(b)) if samples.len() > 1 => {
                a.point.len() == b.point.len() && a.point.iter().zip(&b.point).all(|(x, y)| (x - y).abs() <= CLOSED_TOL)
            }
            _ => false,
        };
        Self::with_closed(samples, closed)
    }

    /// Like [`ParameterPath::new`] but with an explicit closedness flag, for
    /// coordinates that are periodic (an angle running from 0 to 2π closes the
    /// physical loop although the coordinates differ).
    pub fn with_closed(samples: Vec<PathSample>, closed: bool) -> Result<Self> {
        let first = samples.first().ok_or(Error::Resolution("a path needs at least one sample"))?;
        let dim = first.point.len();
        for s in &samples {
            if s.point.len() != dim {
                return Err(Error::Dimension { expected: dim, found: s.point.len() });
            }
            if !s.time.is_finite() || s.point.iter().any(|x| !x.is_finite()) {
                return Err(Error::Domain("path samples must be finite"));
            }
        }
        if samples.windows(2).any(|w| !(w[1].time > w[0].time)) {
            return Err(Error::Domain("path times must be strictly increasing"));
        }
        Ok(Self { samples, closed })
    }

    /// Samples `point_of(s)` at `n` uniformly spaced times on `[t0, t1]`,
    /// passing the normalized progress `s ∈ [0, 1]`.
    pub fn uniform<F>(t0: f64, t1: f64, n: usize, point_of: F) -> Result<Self>
    where
        F: Fn(f64) -> Vec<f64>,
    {
        if n == 0 {
            return Err(Error::Resolution("a path needs at least one sample"));
        }
        let samples = (0..n)
            .map(|k| {
                let s = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
                PathSample { time: t0 + (t1 - t0) * s, point: point_of(s) }
            })
            .collect();
        Self::new(samples)
    }

    pub fn samples(&self) -> &[PathSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn dim(&self) -> usize {
        self.samples[0].point.len()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.time).collect()
    }

    pub fn start_time(&self) -> f64 {
        self.samples[0].time
    }

    pub fn end_time(&self) -> f64 {
        self.samples[self.samples.len() - 1].time
    }

    pub fn duration(&self) -> f64 {
        self.end_time() - self.start_time()
    }

    /// Smallest time step between consecutive samples (infinite for one sample).
    pub fn min_spacing(&self) -> f64 {
        self.samples.windows(2).map(|w| w[1].time - w[0].time).fold(f64::INFINITY, f64::min)
    }

    /// Parameter point at time `t`, linearly interpolated between samples and
    /// clamped to the endpoints.
    pub fn point_at(&self, t: f64) -> Vec<f64> {
        let s = &self.samples;
        if t <= s[0].time {
            return s[0].point.clone();
        }
        if t >= s[s.len() - 1].time {
            return s[s.len() - 1].point.clone();
        }
        let k = s.partition_point(|x| x.time <= t) - 1;
        let (a, b) = (&s[k], &s[k + 1]);
        let w = (t - a.time) / (b.time - a.time);
        a.point.iter().zip(&b.point).map(|(x, y)| x + (y - x) * w).collect()
    }

    /// Straight legs between consecutive `vertices`, each taking an equal share
    /// of `duration` and each traversed with the schedule
    /// `s(τ) = τ − sin(2πτ)/(2π)`, so the velocity vanishes at every vertex.
    /// Every leg carries `samples_per_leg` intervals.
    pub fn smooth_polyline(vertices: &[Vec<f64>], duration: f64, samples_per_leg: usize) -> Result<Self> {
        if vertices.len() < 2 || samples_per_leg == 0 {
            return Err(Error::Resolution("a polyline needs two vertices and at least one interval per leg"));
        }
        if !(duration > 0.0) {
            return Err(Error::Domain("duration must be positive"));
        }
        let legs = vertices.len() - 1;
        let leg_time = duration / legs as f64;
        let mut samples = Vec::with_capacity(legs * samples_per_leg + 1);
        for (leg, w) in vertices.windows(2).enumerate() {
            let first = if leg == 0 { 0 } else { 1 };
            for k in first..=samples_per_leg {
                let tau = k as f64 / samples_per_leg as f64;
                let s = tau - libm::sin(2.0 * core::f64::consts::PI * tau) / (2.0 * core::f64::consts::PI);
                let point = w[0].iter().zip(&w[1]).map(|(a, b)| a + (b - a) * s).collect();
                samples.push(PathSample { time: (leg as f64 + tau) * leg_time, point });
            }
        }
        Self::new(samples)
    }

    /// Same geometric samples with new time stamps.
    pub fn retimed(&self, times: &[f64]) -> Result<Self> {
        if times.len() != self.samples.len() {
            return Err(Error::Dimension { expected: self.samples.len(), found: times.len() });
        }
        let samples = self
            .samples
            .iter()
            .zip(times)
            .map(|(s, &t)| PathSample { time: t, point: s.point.clone() })
            .collect();
        Self::with_closed(samples, self.closed)
    }

    /// Affinely rescales the time stamps onto `[0, duration]`.
    pub fn rescaled(&self, duration: f64) -> Result<Self> {
        if self.samples.len() == 1 {
            return Ok(self.clone());
        }
        if !(duration > 0.0) {
            return Err(Error::Domain("duration must be positive"));
        }
        let (t0, span) = (self.start_time(), self.duration());
        let times: Vec<f64> = self.samples.iter().map(|s| (s.time - t0) / span * duration).collect();
        self.retimed(&times)
    }
}
