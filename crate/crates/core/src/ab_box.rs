//! A charged particle confined to an angular box of length `Δθ` on a ring,
//! carried once around a flux line of strength `η` (in units of the flux
//! quantum).
//!
//! The box occupies `[Θ, Θ + Δθ)` (mod 2π). Its flux-dressed eigenfunction is
//! `φ(θ; Θ) = e^{iηu} ψ_n(u)` with `u = (θ − Θ) mod 2π`, single valued on the
//! ring. The overlap with the starting box reduces to two real integrals,
//!
//! ```text
//! ⟨φ;0|φ;Θ⟩ = e^{−iηΘ} (e^{2πiη} I₁ + I₂),
//! I₁ = ∫_0^{Θ+Δθ−2π} ψ(θ) ψ(θ−Θ+2π) dθ,   I₂ = ∫_Θ^{Δθ} ψ(θ) ψ(θ−Θ) dθ,
//! ```
//!
//! and the vector potential contributes `+ηΘ` to the connection, so
//! `γ = arg(e^{2πiη} I₁ + I₂)`. Empty integrals vanish, which makes `γ = 0`
//! exact while the two boxes overlap without wrapping (`Θ ≤ 2π − Δθ`).

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::phase::{rem_euclid, wrap};
use crate::quadrature::simpson;

/// Overlaps smaller than this leave the phase undefined.
pub const ORTHOGONALITY: f64 = 1e-8;

/// Flux, box length, mode number and quadrature resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ABConfig {
    pub eta: f64,
    pub delta_theta: f64,
    pub mode: u32,
    pub quadrature_nodes: usize,
}

impl ABConfig {
    /// `delta_theta` must lie in `(π, 2π)` and `mode` must be positive.
    pub fn new(eta: f64, delta_theta: f64, mode: u32) -> Result<Self> {
        if !eta.is_finite() {
            return Err(Error::Domain("eta must be finite"));
        }
        if !(delta_theta > PI && delta_theta < 2.0 * PI) {
            return Err(Error::Domain("box length must lie strictly between π and 2π"));
        }
        if mode == 0 {
            return Err(Error::Domain("box mode numbers start at 1"));
        }
        Ok(Self { eta, delta_theta, mode, quadrature_nodes: 4096 })
    }

    pub fn with_nodes(self, quadrature_nodes: usize) -> Self {
        Self { quadrature_nodes: quadrature_nodes.max(2), ..self }
    }

    pub fn regime(&self, theta: f64) -> Regime {
        if theta <= 2.0 * PI - self.delta_theta {
            Regime::A
        } else if theta <= self.delta_theta {
            Regime::B
        } else {
            Regime::C
        }
    }
}

/// Position of the displaced box relative to the starting one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `Θ ≤ 2π − Δθ`: the boxes overlap on one interval, no wrap-around.
    A,
    /// `2π − Δθ ≤ Θ ≤ Δθ`: the displaced box overlaps from both sides.
    B,
    /// `Θ ≥ Δθ`: only the wrapped-around part overlaps.
    C,
}

/// The real box mode `ψ_n(u) = √(2/Δθ) sin(nπu/Δθ)` supported on
/// `[offset, offset + Δθ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxWavefunction {
    pub mode: u32,
    pub delta_theta: f64,
    pub offset: f64,
}

impl BoxWavefunction {
    /// `ψ` at distance `u` from the box's left wall.
    pub fn local(&self, u: f64) -> f64 {
        if !(0.0..=self.delta_theta).contains(&u) {
            return 0.0;
        }
        (2.0 / self.delta_theta).sqrt() * (self.mode as f64 * PI * u / self.delta_theta).sin()
    }

    /// `ψ` at angle `theta` on the ring.
    pub fn evaluate(&self, theta: f64) -> f64 {
        let u = rem_euclid(theta - self.offset, 2.0 * PI);
        if u >= self.delta_theta {
            0.0
        } else {
            self.local(u)
        }
    }
}

pub fn box_mode(config: &ABConfig, offset: f64) -> BoxWavefunction {
    BoxWavefunction { mode: config.mode, delta_theta: config.delta_theta, offset }
}

/// The two real integrals `(I₁, I₂)` at box displacement `theta`.
fn overlap_integrals(config: &ABConfig, theta: f64) -> (f64, f64) {
    let psi = box_mode(config, 0.0);
    let dt = config.delta_theta;
    let n = config.quadrature_nodes;
    let i1 = simpson(|x| psi.local(x) * psi.local(x - theta + 2.0 * PI), 0.0, (theta + dt - 2.0 * PI).min(dt), n);
    let i2 = simpson(|x| psi.local(x) * psi.local(x - theta), theta, dt, n);
    (i1, i2)
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=2.0 * PI).contains(&theta) {
        return Err(Error::Domain("box displacement must lie in [0, 2π]"));
    }
    Ok(())
}

/// `⟨φ_n; 0 | φ_n; Θ⟩` by composite Simpson quadrature.
pub fn ab_overlap(config: &ABConfig, theta: f64) -> Result<Complex64> {
    check_theta(theta)?;
    let (i1, i2) = overlap_integrals(config, theta);
    let inner = Complex64::from_polar(i1, 2.0 * PI * config.eta) + i2;
    let ov = Complex64::from_polar(1.0, -config.eta * theta) * inner;
    if ov.norm() < ORTHOGONALITY {
        return Err(Error::UndefinedPhase { magnitude: ov.norm(), threshold: ORTHOGONALITY });
    }
    Ok(ov)
}

/// One sample of a Θ-sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ABPhasePoint {
    pub theta: f64,
    pub wrapped: f64,
    pub unwrapped: f64,
    pub overlap_magnitude: f64,
}

/// Geometric phase along an increasing list of displacements starting at 0.
///
/// The wrapped value is `arg(e^{2πiη} I₁ + I₂)`, the overlap phase plus the
/// analytic `+ηΘ` of the connection; the unwrapped value follows it
/// continuously from 0.
pub fn ab_geometric_phase(config: &ABConfig, thetas: &[f64]) -> Result<Vec<ABPhasePoint>> {
    if thetas.first() != Some(&0.0) {
        return Err(Error::Domain("a box sweep starts at Θ = 0"));
    }
    if thetas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("box displacements must increase"));
    }
    let mut out: Vec<ABPhasePoint> = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        check_theta(theta)?;
        let (i1, i2) = overlap_integrals(config, theta);
        let inner = Complex64::from_polar(i1, 2.0 * PI * config.eta) + i2;
        if inner.norm() < ORTHOGONALITY {
            return Err(Error::UndefinedPhase { magnitude: inner.norm(), threshold: ORTHOGONALITY });
        }
        let wrapped = inner.arg();
        let unwrapped = match out.last() {
            None => wrapped,
            Some(prev) => prev.unwrapped + wrap(wrapped - prev.wrapped),
        };
        out.push(ABPhasePoint { theta, wrapped, unwrapped, overlap_magnitude: inner.norm() });
    }
    Ok(out)
}

/// `steps + 1` uniform displacements covering `[0, 2π]`.
pub fn uniform_sweep(steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps).map(|k| 2.0 * PI * k as f64 / steps as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::circular_distance;

    fn cfg(eta: f64) -> ABConfig {
        ABConfig::new(eta, 1.5 * PI, 1).unwrap()
    }

    // independent oracle: midpoint rule over the whole ring with the
    // piecewise eigenfunctions written out directly
    fn brute_overlap(c: &ABConfig, theta: f64, nodes: usize) -> Complex64 {
        let phi = |x: f64, offset: f64| {
            let u = (x - offset).rem_euclid(2.0 * PI);
            if u >= c.delta_theta {
                Complex64::new(0.0, 0.0)
            } else {
                let amp = (2.0 / c.delta_theta).sqrt() * (c.mode as f64 * PI * u / c.delta_theta).sin();
                Complex64::from_polar(amp, c.eta * u)
            }
        };
        let h = 2.0 * PI / nodes as f64;
        (0..nodes).map(|k| (k as f64 + 0.5) * h).map(|x| phi(x, 0.0).conj() * phi(x, theta) * h).sum()
    }

    #[test]
    fn config_validation() {
        assert!(ABConfig::new(0.3, PI, 1).is_err());
        assert!(ABConfig::new(0.3, 2.0 * PI, 1).is_err());
        assert!(ABConfig::new(0.3, 4.0, 0).is_err());
        assert!(ABConfig::new(f64::NAN, 4.0, 1).is_err());
        assert_eq!(cfg(0.0).quadrature_nodes, 4096);
    }

    #[test]
    fn mode_examples() {
        let c = cfg(0.3);
        let m = box_mode(&c, 0.4);
        assert!((m.evaluate(0.4 + 0.75 * PI) - (4.0 / (3.0 * PI)).sqrt()).abs() < 1e-14);
        assert_eq!(m.evaluate(0.2), 0.0);
        assert!(m.evaluate(0.4).abs() < 1e-15);
        let norm: f64 = simpson(|x| m.evaluate(x) * m.evaluate(x), 0.0, 2.0 * PI, 20000);
        assert!((norm - 1.0).abs() < 1e-6, "kinks at the walls limit the full-ring rule");
        let exact: f64 = simpson(|u| m.local(u) * m.local(u), 0.0, c.delta_theta, 4096);
        assert!((exact - 1.0).abs() < 1e-10);
        let m2 = BoxWavefunction { mode: 2, ..m };
        let cross: f64 = simpson(|u| m.local(u) * m2.local(u), 0.0, c.delta_theta, 4096);
        assert!(cross.abs() < 1e-10);
    }

    #[test]
    fn overlap_examples() {
        let c = cfg(0.3);
        assert!((ab_overlap(&c, 0.0).unwrap() - 1.0).norm() < 1e-12);
        for theta in [0.1, 0.3, 1.2, PI / 2.0] {
            let ov = ab_overlap(&c, theta).unwrap();
            assert!(circular_distance(ov.arg(), -0.3 * theta) < 1e-12);
        }
        for theta in [PI, 2.0, 4.0, 5.0] {
            let a = ab_overlap(&c, theta).unwrap();
            let b = brute_overlap(&c, theta, 200_000);
            assert!((a - b).norm() < 1e-8, "theta {theta}: {a} vs {b}");
        }
        assert!(ab_overlap(&c, -0.1).is_err());
        // at η = ½ the two branches cancel at Θ = π
        assert!(matches!(ab_overlap(&cfg(0.5), PI), Err(Error::UndefinedPhase { .. })));
    }

    #[test]
    fn phase_cases() {
        for eta in [0.0, 0.3, 0.5, 0.9, -0.2] {
            let c = cfg(eta);
            let sweep = ab_geometric_phase(&c, &uniform_sweep(401)).unwrap();
            for p in &sweep {
                match c.regime(p.theta) {
                    Regime::A => assert_eq!(p.wrapped, 0.0),
                    // the sum of two positively weighted unit phasors never winds, so the
                    // continuous value reaches 2πη only for |η| ≤ ½
                    Regime::C => assert!((p.unwrapped - wrap(2.0 * PI * eta)).abs() < 1e-9, "eta {eta}: {}", p.unwrapped),
                    Regime::B => {}
                }
                if eta == 0.0 {
                    assert_eq!(p.unwrapped, 0.0);
                }
            }
        }
        let c = cfg(0.3);
        let mid = ab_geometric_phase(&c, &[0.0, PI]).unwrap()[1].unwrapped;
        assert!(mid > 0.0 && mid < 2.0 * PI * 0.3);
    }

    #[test]
    fn interpolation_is_monotone_for_the_ground_mode() {
        let sweep = ab_geometric_phase(&cfg(0.3), &uniform_sweep(600)).unwrap();
        for w in sweep.windows(2) {
            assert!(w[1].unwrapped >= w[0].unwrapped - 1e-12);
        }
    }

    #[test]
    fn limit_and_convergence() {
        let c = cfg(0.3);
        let near = ab_geometric_phase(&c, &[0.0, c.delta_theta - 1e-4, c.delta_theta]).unwrap();
        assert!((near[2].unwrapped - 2.0 * PI * 0.3).abs() < 1e-9);
        assert!((near[1].unwrapped - near[2].unwrapped).abs() < 1e-3);
        for theta in [2.0, PI, 4.2] {
            let a = ab_geometric_phase(&c, &[0.0, theta]).unwrap()[1].wrapped;
            let b = ab_geometric_phase(&c.with_nodes(8192), &[0.0, theta]).unwrap()[1].wrapped;
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn sweep_validation() {
        let c = cfg(0.3);
        assert!(ab_geometric_phase(&c, &[0.1, 0.2]).is_err());
        assert!(ab_geometric_phase(&c, &[0.0, 0.2, 0.2]).is_err());
    }
}
