//! The spin-½ polarization experiment: a spin prepared along `+z` enters a
//! field of fixed strength whose direction `e(t)` is turned adiabatically
//! along a path `C`; the `z` polarization at the exit depends on the open
//! path only through `γ[C]`.
//!
//! Conventions: `H = −ω_B e·σ`, `γ_± = ±γ[C]` for the states aligned (`+`)
//! and anti-aligned (`−`) with the field, and
//!
//! ```text
//! γ[C] = f(e(0), e(t)) + ½ ∫ cos Θ dΦ,
//! f    = arg{ e^{−iΔΦ/2} cos(Θ₀/2) cos(Θ₁/2) + e^{iΔΦ/2} sin(Θ₀/2) sin(Θ₁/2) }.
//! ```

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::model::{mean_cos, SpinConfig, SpinModel};
use crate::oracle::{default_dt, propagate};
use crate::path::{ParameterPath, PathSample};
use crate::phase::{rem_euclid, wrap};
use crate::sphere::{SpherePath, SphericalPoint};

/// Endpoint overlaps below this leave `f` undefined.
pub const ORTHOGONALITY: f64 = 1e-8;

/// Endpoint-overlap angle `f(e(0), e(t))`: the phase of `⟨+;e(0)|+;e(t)⟩`
/// in the `e^{∓iΦ/2}` gauge.
pub fn f_overlap(p0: SphericalPoint, p1: SphericalPoint) -> Result<f64> {
    let dphi = p1.phi - p0.phi;
    let (s0, c0) = (p0.theta / 2.0).sin_cos();
    let (s1, c1) = (p1.theta / 2.0).sin_cos();
    let z = Complex64::from_polar(c0 * c1, -dphi / 2.0) + Complex64::from_polar(s0 * s1, dphi / 2.0);
    if z.norm() < ORTHOGONALITY {
        return Err(Error::UndefinedPhase { magnitude: z.norm(), threshold: ORTHOGONALITY });
    }
    Ok(z.arg())
}

/// `½ ∫ cos Θ dΦ` along the samples, exact for linear segments in `(Θ, Φ)`.
/// Azimuth steps are taken on the branch `(−π, π]`.
pub fn half_cos_integral(path: &SpherePath) -> f64 {
    path.points().windows(2).map(|w| 0.5 * wrap(w[1].phi - w[0].phi) * mean_cos(w[0].theta, w[1].theta)).sum()
}

/// `γ[C]`, wrapped to `(−π, π]`.
pub fn spin_geometric_phase(path: &SpherePath) -> Result<f64> {
    let f = f_overlap(path.first(), path.last())?;
    Ok(wrap(f + half_cos_integral(path)))
}

/// Both routes to `⟨σ_z⟩` at the exit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationResult {
    /// `cos Θ₀ cos Θ_t + sin Θ₀ sin Θ_t cos(2ω_B t + γ₊ − γ₋ − 2f)`.
    pub p_z_analytic: f64,
    /// `⟨Ψ|σ_z|Ψ⟩` from direct propagation.
    pub p_z_oracle: f64,
    /// The cross term with the opposite sign and argument
    /// `2f + 2ω_B t + γ₊ − γ₋` for the sign convention `γ_± = ∓f ∓ ½∫cosΘ dΦ`;
    /// gives `cos 2Θ₀` at `t = 0`.
    pub p_z_flipped: f64,
    pub f_value: f64,
    pub gamma: f64,
    /// The cosine argument `2ω_B t + 2γ[C] − 2f` of the analytic route.
    pub argument: f64,
}

fn check_start(theta0: f64, path: &SpherePath) -> Result<()> {
    let p = path.first();
    if (p.theta - theta0).abs() > 1e-12 || wrap(p.phi).abs() > 1e-12 {
        return Err(Error::Domain("the field path must start at (Θ(0), Φ = 0)"));
    }
    Ok(())
}

/// Analytic adiabatic `P_z`, its flipped-sign variant and the cosine argument.
pub fn polarization_analytic(theta0: f64, path: &SpherePath, omega_b: f64, t: f64) -> Result<PolarizationResult> {
    check_start(theta0, path)?;
    let f = f_overlap(path.first(), path.last())?;
    let a = half_cos_integral(path);
    let gamma = wrap(f + a);
    let theta_t = path.last().theta;
    let cc = theta0.cos() * theta_t.cos();
    let ss = theta0.sin() * theta_t.sin();
    let argument = 2.0 * omega_b * t + 2.0 * a;
    // γ₊ − γ₋ = −2f − 2a under the opposite sign convention
    let flipped_argument = 2.0 * f + 2.0 * omega_b * t + (-2.0 * f - 2.0 * a);
    Ok(PolarizationResult {
        p_z_analytic: cc + ss * argument.cos(),
        p_z_oracle: f64::NAN,
        p_z_flipped: cc - ss * flipped_argument.cos(),
        f_value: f,
        gamma,
        argument,
    })
}

/// The field path as a time schedule on `[0, t]`, uniform in sample index.
pub fn uniform_schedule(path: &SpherePath, t: f64) -> Result<ParameterPath> {
    let n = path.len();
    if n == 1 || t == 0.0 {
        let p = path.first();
        return ParameterPath::new(alloc::vec![PathSample { time: 0.0, point: alloc::vec![p.theta, p.phi] }]);
    }
    ParameterPath::with_closed(
        path.points()
            .iter()
            .enumerate()
            .map(|(k, p)| PathSample { time: t * k as f64 / (n - 1) as f64, point: alloc::vec![p.theta, p.phi] })
            .collect(),
        false,
    )
}

/// `⟨σ_z⟩` after propagating `|↑_z⟩` through the schedule (parameters
/// `(Θ, Φ)`), with step `dt` or the default step.
pub fn polarization_oracle(schedule: &ParameterPath, omega_b: f64, dt: Option<f64>) -> Result<f64> {
    if schedule.len() == 1 {
        return Ok(1.0);
    }
    let model = SpinModel::new(SpinConfig::new(omega_b)?);
    let dt = match dt {
        Some(dt) => dt,
        None => default_dt(&model, schedule)?,
    };
    let traj = propagate(&model, schedule, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], dt)?;
    let psi = traj.final_state();
    Ok(psi[0].norm_sqr() - psi[1].norm_sqr())
}

/// Both routes for a path traversed uniformly in sample index over `[0, t]`.
pub fn polarization_z(theta0: f64, path: &SpherePath, omega_b: f64, t: f64) -> Result<PolarizationResult> {
    let mut out = polarization_analytic(theta0, path, omega_b, t)?;
    out.p_z_oracle = polarization_oracle(&uniform_schedule(path, t)?, omega_b, None)?;
    Ok(out)
}

/// Both routes for an explicit `(Θ, Φ)` schedule; `t` is its duration.
pub fn polarization_z_schedule(theta0: f64, schedule: &ParameterPath, omega_b: f64) -> Result<PolarizationResult> {
    let path = SpherePath::new(schedule.samples().iter().map(|s| SphericalPoint::new(s.point[0], s.point[1])).collect())?;
    let t = if schedule.len() == 1 { 0.0 } else { schedule.duration() };
    let mut out = polarization_analytic(theta0, &path, omega_b, t)?;
    out.p_z_oracle = polarization_oracle(schedule, omega_b, None)?;
    Ok(out)
}

/// `P_z = (1 − I₋/I₊) / (1 + I₋/I₊)` from the two sub-beam intensities.
pub fn measured_polarization(i_plus: f64, i_minus: f64) -> Result<f64> {
    if !(i_minus >= 0.0) || !(i_plus >= 0.0) {
        return Err(Error::Domain("beam intensities must be nonnegative"));
    }
    if i_plus == 0.0 {
        return Err(Error::Domain("no counts in the up beam; swap the roles of the sub-beams"));
    }
    let r = i_minus / i_plus;
    Ok((1.0 - r) / (1.0 + r))
}

/// `γ[C] mod π`, in `[0, π)`, from a sweep of exit times at fixed path.
///
/// Fits `P_z − cos Θ₀ cos Θ_t = sin Θ₀ sin Θ_t cos(2ω_B t + φ)` by linear
/// least squares in `(cos φ, sin φ)`; then `φ = 2γ[C] − 2f (mod 2π)`, so only
/// the class of `γ[C]` modulo π is determined.
pub fn extract_gamma_mod_pi(theta0: f64, theta_t: f64, f: f64, omega_b: f64, samples: &[(f64, f64)]) -> Result<f64> {
    let cc = theta0.cos() * theta_t.cos();
    let ss = theta0.sin() * theta_t.sin();
    if ss.abs() < 1e-9 {
        return Err(Error::Domain("no interference term: the field starts or ends along ±z"));
    }
    if samples.len() < 2 {
        return Err(Error::Resolution("the fit needs at least two exit times"));
    }
    // y = X cos(2ωt) − Y sin(2ωt), X = ss cos φ, Y = ss sin φ
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(t, p) in samples {
        let (s, c) = (2.0 * omega_b * t).sin_cos();
        let y = p - cc;
        a11 += c * c;
        a12 -= c * s;
        a22 += s * s;
        b1 += c * y;
        b2 -= s * y;
    }
    let det = a11 * a22 - a12 * a12;
    if det.abs() < 1e-12 * (a11 * a22).max(1e-300) {
        return Err(Error::Resolution("exit times do not resolve the oscillation phase"));
    }
    let x = (a22 * b1 - a12 * b2) / det;
    let y = (a11 * b2 - a12 * b1) / det;
    let phi = y.atan2(x);
    Ok(rem_euclid((phi + 2.0 * f) / 2.0, PI))
}

/// Great-circle path between two directions with `n` samples, keeping the
/// given endpoint azimuths.
pub fn direct_path(p0: SphericalPoint, p1: SphericalPoint, n: usize) -> Result<SpherePath> {
    let arc = crate::sphere::geodesic_arc(p1.unit_vector(), p0.unit_vector(), n)?;
    let mut points: Vec<SphericalPoint> = arc.points().to_vec();
    if points.len() > 1 {
        let last = points.len() - 1;
        points[0] = p0;
        points[last] = p1;
    }
    SpherePath::new(points)
}
