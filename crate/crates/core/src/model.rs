//! Parametrized Hamiltonian families `R ↦ H(R)`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::frame::EigenFrame;
use crate::linalg::CMatrix;

/// A family of finite Hermitian matrices over a real parameter space.
///
/// Implementors may also provide closed-form eigenframes and the closed-form
/// integral of the Berry connection `i⟨n|∇_R|n⟩` along a straight parameter
/// segment; both must use the same gauge.
pub trait Hamiltonian: Sync {
    /// Hilbert-space dimension.
    fn dimension(&self) -> usize;

    /// Coordinate labels; their count is the parameter-space dimension.
    fn parameter_names(&self) -> Vec<String>;

    fn parameter_dim(&self) -> usize {
        self.parameter_names().len()
    }

    fn evaluate(&self, point: &[f64]) -> Result<CMatrix>;

    /// Closed-form eigenframe of `level` (ascending energy order), if known.
    fn analytic_frame(&self, _point: &[f64], _level: usize) -> Result<Option<EigenFrame>> {
        Ok(None)
    }

    /// `∫ i⟨n|∇_R|n⟩ · dR` along the straight segment `from → to`, in the gauge
    /// of [`Hamiltonian::analytic_frame`].
    fn connection_over_segment(&self, _from: &[f64], _to: &[f64], _level: usize) -> Option<f64> {
        None
    }
}

fn check_point(point: &[f64], dim: usize) -> Result<()> {
    if point.len() != dim {
        return Err(Error::Dimension { expected: dim, found: point.len() });
    }
    Ok(())
}

fn check_level(level: usize, dim: usize) -> Result<()> {
    if level >= dim {
        return Err(Error::Dimension { expected: dim, found: level });
    }
    Ok(())
}

/// Real symmetric two-level model near a conical intersection,
/// `H = R (sin Φ σ_x + cos Φ σ_z)` with fixed `R > 0` and parameter `Φ`.
///
/// Analytic frames use the real gauge `|+⟩ = (cos Φ/2, sin Φ/2)`,
/// `|−⟩ = (−sin Φ/2, cos Φ/2)`, whose connection vanishes identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicalModel {
    radius: f64,
}

impl ConicalModel {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain("conical radius must be positive; R = 0 is the intersection point"));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `|+;Φ⟩` of the real gauge.
    pub fn plus_state(phi: f64) -> [f64; 2] {
        [(phi / 2.0).cos(), (phi / 2.0).sin()]
    }

    /// `|−;Φ⟩` of the real gauge.
    pub fn minus_state(phi: f64) -> [f64; 2] {
        [-(phi / 2.0).sin(), (phi / 2.0).cos()]
    }
}

impl Hamiltonian for ConicalModel {
    fn dimension(&self) -> usize {
        2
    }

    fn parameter_names(&self) -> Vec<String> {
        vec!["phi".to_string()]
    }

    fn evaluate(&self, point: &[f64]) -> Result<CMatrix> {
        check_point(point, 1)?;
        let (s, c) = point[0].sin_cos();
        let r = self.radius;
        Ok(CMatrix::from_real_2x2([[r * c, r * s], [r * s, -r * c]]))
    }

    fn analytic_frame(&self, point: &[f64], level: usize) -> Result<Option<EigenFrame>> {
        check_point(point, 1)?;
        check_level(level, 2)?;
        let (v, energy) = if level == 1 {
            (Self::plus_state(point[0]), self.radius)
        } else {
            (Self::minus_state(point[0]), -self.radius)
        };
        Ok(Some(EigenFrame {
            level,
            energy,
            vector: vec![Complex64::new(v[0], 0.0), Complex64::new(v[1], 0.0)],
            point: point.to_vec(),
            gap: 2.0 * self.radius,
        }))
    }

    fn connection_over_segment(&self, _from: &[f64], _to: &[f64], _level: usize) -> Option<f64> {
        Some(0.0)
    }
}

/// Larmor frequency `ω_B = μB/ħ` of the spin model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinConfig {
    omega_b: f64,
}

impl SpinConfig {
    pub fn new(omega_b: f64) -> Result<Self> {
        if !(omega_b > 0.0) || !omega_b.is_finite() {
            return Err(Error::Domain("omega_B must be positive"));
        }
        Ok(Self { omega_b })
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }
}

/// `(1 / (b − a)) ∫_a^b cos θ dθ`, stable for `a ≈ b`.
pub(crate) fn mean_cos(a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let sinc = if half.abs() < 1e-8 { 1.0 - half * half / 6.0 } else { half.sin() / half };
    (0.5 * (a + b)).cos() * sinc
}

/// Spin-½ eigenvectors along `e(Θ, Φ)`, in the gauge with `e^{∓iΦ/2}` factors.
/// Index 0 is aligned with the field direction, index 1 anti-aligned.
pub fn spin_eigenvectors(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let em = Complex64::from_polar(1.0, -phi / 2.0);
    let ep = Complex64::from_polar(1.0, phi / 2.0);
    [[em * c, ep * s], [-em * s, ep * c]]
}

fn spin_matrix(omega: f64, e: [f64; 3]) -> CMatrix {
    let mut h = CMatrix::zeros(2);
    h[(0, 0)] = Complex64::new(-omega * e[2], 0.0);
    h[(1, 1)] = Complex64::new(omega * e[2], 0.0);
    h[(0, 1)] = Complex64::new(-omega * e[0], omega * e[1]);
    h[(1, 0)] = Complex64::new(-omega * e[0], -omega * e[1]);
    h
}

fn spin_frame(theta: f64, phi: f64, omega: f64, level: usize, point: &[f64]) -> EigenFrame {
    let vecs = spin_eigenvectors(theta, phi);
    EigenFrame {
        level,
        energy: if level == 0 { -omega } else { omega },
        vector: vecs[level].to_vec(),
        point: point.to_vec(),
        gap: 2.0 * omega,
    }
}

/// Spin-½ in a field of fixed magnitude and direction `e(Θ, Φ)`,
/// `H = −ω_B e·σ`; parameters `(Θ, Φ)`.
///
/// Level 0 (`E = −ω_B`) is the state aligned with the field, `|+;e⟩`;
/// level 1 (`E = +ω_B`) is `|−;e⟩`. The analytic gauge carries the phases
/// `e^{∓iΦ/2}`, with connection `±½ cos Θ dΦ` for levels 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinModel {
    config: SpinConfig,
}

impl SpinModel {
    pub fn new(config: SpinConfig) -> Self {
        Self { config }
    }

    pub fn omega_b(&self) -> f64 {
        self.config.omega_b
    }
}

pub fn unit_vector(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

impl Hamiltonian for SpinModel {
    fn dimension(&self) -> usize {
        2
    }

    fn parameter_names(&self) -> Vec<String> {
        vec!["theta".to_string(), "phi".to_string()]
    }

    fn evaluate(&self, point: &[f64]) -> Result<CMatrix> {
        check_point(point, 2)?;
        Ok(spin_matrix(self.config.omega_b, unit_vector(point[0], point[1])))
    }

    fn analytic_frame(&self, point: &[f64], level: usize) -> Result<Option<EigenFrame>> {
        check_point(point, 2)?;
        check_level(level, 2)?;
        Ok(Some(spin_frame(point[0], point[1], self.config.omega_b, level, point)))
    }

    fn connection_over_segment(&self, from: &[f64], to: &[f64], level: usize) -> Option<f64> {
        let sign = if level == 0 { 0.5 } else { -0.5 };
        Some(sign * (to[1] - from[1]) * mean_cos(from[0], to[0]))
    }
}

/// Spin-½ with the field vector itself as parameter, `H = −b·σ` with
/// `b ∈ ℝ³`; the Larmor frequency is `|b|`. Used where a three-dimensional
/// parameter space is required (Berry curvature and its flux).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpinFieldModel;

impl Hamiltonian for SpinFieldModel {
    fn dimension(&self) -> usize {
        2
    }

    fn parameter_names(&self) -> Vec<String> {
        vec!["bx".to_string(), "by".to_string(), "bz".to_string()]
    }

    fn evaluate(&self, point: &[f64]) -> Result<CMatrix> {
        check_point(point, 3)?;
        Ok(spin_matrix(1.0, [point[0], point[1], point[2]]))
    }

    fn analytic_frame(&self, point: &[f64], level: usize) -> Result<Option<EigenFrame>> {
        check_point(point, 3)?;
        check_level(level, 2)?;
        let b = (point[0] * point[0] + point[1] * point[1] + point[2] * point[2]).sqrt();
        if b == 0.0 {
            return Ok(Some(EigenFrame {
                level,
                energy: 0.0,
                vector: vec![Complex64::new(1.0 - level as f64, 0.0), Complex64::new(level as f64, 0.0)],
                point: point.to_vec(),
                gap: 0.0,
            }));
        }
        let theta = (point[2] / b).clamp(-1.0, 1.0).acos();
        let phi = point[1].atan2(point[0]);
        Ok(Some(spin_frame(theta, phi, b, level, point)))
    }
}

/// Custom model given as a table of Hermitian matrices over parameter points.
///
/// One-dimensional tables with strictly increasing points are interpolated
/// linearly; higher-dimensional tables are evaluated only at tabulated points.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedModel {
    names: Vec<String>,
    points: Vec<Vec<f64>>,
    matrices: Vec<CMatrix>,
}

const TABLE_MATCH_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;

impl TabulatedModel {
    pub fn new(names: Vec<String>, points: Vec<Vec<f64>>, matrices: Vec<CMatrix>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("custom model table is empty"));
        }
        if points.len() != matrices.len() {
            return Err(Error::Dimension { expected: points.len(), found: matrices.len() });
        }
        let pdim = names.len();
        let hdim = matrices[0].dim();
        if hdim == 0 {
            return Err(Error::Domain("custom model matrices must be non-empty"));
        }
        for (p, m) in points.iter().zip(&matrices) {
            check_point(p, pdim)?;
            if m.dim() != hdim {
                return Err(Error::Dimension { expected: hdim, found: m.dim() });
            }
            if m.hermiticity_defect() > HERMITIAN_TOL {
                return Err(Error::Domain("custom model matrix is not Hermitian"));
            }
        }
        if pdim == 1 && points.windows(2).any(|w| !(w[1][0] > w[0][0])) {
            return Err(Error::Domain("one-dimensional custom tables need strictly increasing points"));
        }
        Ok(Self { names, points, matrices })
    }
}

impl Hamiltonian for TabulatedModel {
    fn dimension(&self) -> usize {
        self.matrices[0].dim()
    }

    fn parameter_names(&self) -> Vec<String> {
        self.names.clone()
    }

    fn evaluate(&self, point: &[f64]) -> Result<CMatrix> {
        check_point(point, self.names.len())?;
        if let Some(k) = self
            .points
            .iter()
            .position(|p| p.iter().zip(point).all(|(a, b)| (a - b).abs() <= TABLE_MATCH_TOL))
        {
            return Ok(self.matrices[k].clone());
        }
        if self.names.len() == 1 && self.points.len() > 1 {
            let x = point[0];
            let first = self.points[0][0];
            let last = self.points[self.points.len() - 1][0];
            if x < first || x > last {
                return Err(Error::Domain("point outside the custom model table"));
            }
            let k = self.points.partition_point(|p| p[0] <= x) - 1;
            let (a, b) = (self.points[k][0], self.points[k + 1][0]);
            return Ok(self.matrices[k].lerp(&self.matrices[k + 1], (x - a) / (b - a)));
        }
        Err(Error::Domain("point is not in the custom model table"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigensolve;
    use crate::linalg::inner;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn residual(h: &CMatrix, f: &EigenFrame) -> f64 {
        h.mul_vec(&f.vector)
            .iter()
            .zip(&f.vector)
            .map(|(a, b)| (a - b * f.energy).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn conical_examples() {
        let m = ConicalModel::new(1.0).unwrap();
        let h = m.evaluate(&[0.0]).unwrap();
        assert_eq!(h, CMatrix::from_real_2x2([[1.0, 0.0], [0.0, -1.0]]));
        let plus = m.analytic_frame(&[0.0], 1).unwrap().unwrap();
        assert_eq!(plus.energy, 1.0);
        assert_eq!(plus.vector, vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);

        let h = m.evaluate(&[FRAC_PI_2]).unwrap();
        assert!((&h - &CMatrix::pauli_x()).max_abs() < 1e-15);
        let plus = m.analytic_frame(&[FRAC_PI_2], 1).unwrap().unwrap();
        assert!((plus.vector[0].re - FRAC_PI_4.cos()).abs() < 1e-15);
        assert!((plus.vector[1].re - FRAC_PI_4.sin()).abs() < 1e-15);

        let m2 = ConicalModel::new(2.0).unwrap();
        assert_eq!(m2.analytic_frame(&[0.7], 0).unwrap().unwrap().gap, 4.0);
        assert!(ConicalModel::new(0.0).is_err());
        assert!(ConicalModel::new(-1.0).is_err());
    }

    #[test]
    fn conical_numeric_matches_analytic() {
        let m = ConicalModel::new(1.0).unwrap();
        let h = m.evaluate(&[FRAC_PI_2]).unwrap();
        let num = eigensolve(&h, 1, &[FRAC_PI_2], 1e-9).unwrap();
        let ana = m.analytic_frame(&[FRAC_PI_2], 1).unwrap().unwrap();
        assert!((num.energy - 1.0).abs() < 1e-12);
        assert!(inner(&num.vector, &ana.vector).norm() > 1.0 - 1e-9);
        let tiny = ConicalModel::new(1e-12).unwrap();
        assert!(matches!(eigensolve(&tiny.evaluate(&[0.0]).unwrap(), 0, &[0.0], 1e-9), Err(Error::Degeneracy { .. })));
    }

    #[test]
    fn spin_examples() {
        let m = SpinModel::new(SpinConfig::new(1.0).unwrap());
        let h = m.evaluate(&[0.0, 0.0]).unwrap();
        assert!((&h - &CMatrix::pauli_z().scale(-1.0)).max_abs() < 1e-15);
        let plus = m.analytic_frame(&[0.0, 0.0], 0).unwrap().unwrap();
        assert!((plus.vector[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let eq = m.analytic_frame(&[FRAC_PI_2, 0.0], 0).unwrap().unwrap();
        assert!((eq.vector[0].re - FRAC_PI_4.cos()).abs() < 1e-15);
        assert!((eq.vector[1].re - FRAC_PI_4.sin()).abs() < 1e-15);
        let m3 = SpinModel::new(SpinConfig::new(3.0).unwrap());
        assert_eq!(m3.analytic_frame(&[1.0, 2.0], 1).unwrap().unwrap().gap, 6.0);
        assert!(SpinConfig::new(0.0).is_err());
    }

    #[test]
    fn analytic_frames_are_eigenvectors_everywhere() {
        let spin = SpinModel::new(SpinConfig::new(1.7).unwrap());
        let con = ConicalModel::new(0.6).unwrap();
        for k in 0..40 {
            let a = k as f64 * 0.173;
            let b = k as f64 * 0.311 - 2.0;
            for level in 0..2 {
                let p = [a.rem_euclid(PI), b];
                let h = spin.evaluate(&p).unwrap();
                assert!(h.hermiticity_defect() < 1e-12);
                let f = spin.analytic_frame(&p, level).unwrap().unwrap();
                assert!(residual(&h, &f) < 1e-10);
                let num = eigensolve(&h, level, &p, 1e-9).unwrap();
                assert!((num.energy - f.energy).abs() < 1e-10);
                assert!(inner(&num.vector, &f.vector).norm() > 1.0 - 1e-9);

                let h = con.evaluate(&[b]).unwrap();
                let f = con.analytic_frame(&[b], level).unwrap().unwrap();
                assert!(residual(&h, &f) < 1e-10);

                let bvec = [a - 3.0, b * 0.5, 0.3 + a];
                let field = SpinFieldModel;
                let h = field.evaluate(&bvec).unwrap();
                let f = field.analytic_frame(&bvec, level).unwrap().unwrap();
                assert!(residual(&h, &f) < 1e-10);
            }
        }
    }

    #[test]
    fn spin_segment_connection_is_exact() {
        let m = SpinModel::new(SpinConfig::new(1.0).unwrap());
        // brute-force midpoint integration of ½ cos Θ dΦ along a straight segment
        let (a, b) = ([0.3, -0.2], [1.4, 2.1]);
        let n = 200_000;
        let mut acc = 0.0;
        for k in 0..n {
            let s = (k as f64 + 0.5) / n as f64;
            let th = a[0] + (b[0] - a[0]) * s;
            acc += 0.5 * th.cos() * (b[1] - a[1]) / n as f64;
        }
        let exact = m.connection_over_segment(&a, &b, 0).unwrap();
        assert!((exact - acc).abs() < 1e-10);
        assert_eq!(m.connection_over_segment(&a, &b, 1).unwrap(), -exact);
    }

    #[test]
    fn tabulated_model() {
        let names = vec!["x".to_string()];
        let pts = vec![vec![0.0], vec![1.0]];
        let mats = vec![CMatrix::pauli_z(), CMatrix::pauli_x()];
        let m = TabulatedModel::new(names.clone(), pts.clone(), mats).unwrap();
        let mid = m.evaluate(&[0.5]).unwrap();
        assert!((mid[(0, 0)].re - 0.5).abs() < 1e-15 && (mid[(0, 1)].re - 0.5).abs() < 1e-15);
        assert!(m.evaluate(&[2.0]).is_err());
        let bad = vec![CMatrix::pauli_z(), CMatrix::from_real_2x2([[0.0, 1.0], [0.0, 0.0]])];
        assert!(TabulatedModel::new(names, pts, bad).is_err());
    }
}
