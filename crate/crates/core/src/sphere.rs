//! Paths on the unit sphere of field directions, great-circle closure of open
//! paths and enclosed solid angles.
//!
//! For a two-level system the parameter sphere and the ray space coincide, so
//! an open path `C` closed by the shortest geodesic `C_gc` back to its start
//! encloses a solid angle `Ω_gc` with `γ_± = ∓Ω_gc / 2`.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::model::mean_cos;
use crate::phase::{rem_euclid, wrap};

/// Tolerance on `p0·p1 + 1` below which endpoints count as antipodal.
pub const ANTIPODAL_EPS: f64 = 1e-9;

const POLE_EPS: f64 = 1e-12;
const CLOSED_EPS: f64 = 1e-9;

/// A direction given by polar angle `theta` and azimuth `phi`.
///
/// The azimuth is kept even at the poles, where it does not affect the
/// direction; gauge-dependent quantities such as the spin eigenvectors still
/// depend on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn from_vector(v: [f64; 3]) -> Self {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        Self { theta: (v[2] / r).clamp(-1.0, 1.0).acos(), phi: v[1].atan2(v[0]) }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        crate::model::unit_vector(self.theta, self.phi)
    }

    fn at_pole(&self) -> bool {
        self.theta.sin().abs() < POLE_EPS
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Great-circle distance between two unit vectors.
pub fn angular_distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    let c = cross(a, b);
    dot(c, c).sqrt().atan2(dot(a, b))
}

/// Ordered samples on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePath {
    points: Vec<SphericalPoint>,
}

impl SpherePath {
    pub fn new(points: Vec<SphericalPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Resolution("a sphere path needs at least one sample"));
        }
        if points.iter().any(|p| !p.theta.is_finite() || !p.phi.is_finite()) {
            return Err(Error::Domain("sphere path angles must be finite"));
        }
        Ok(Self { points })
    }

    pub fn from_angles(angles: &[(f64, f64)]) -> Result<Self> {
        Self::new(angles.iter().map(|&(t, p)| SphericalPoint::new(t, p)).collect())
    }

    /// Samples `f(s)` for `s ∈ [0, 1]` at `n` uniform steps.
    pub fn sampled<F: Fn(f64) -> SphericalPoint>(n: usize, f: F) -> Result<Self> {
        let n = n.max(1);
        Self::new((0..n).map(|k| f(if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 })).collect())
    }

    pub fn points(&self) -> &[SphericalPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> SphericalPoint {
        self.points[0]
    }

    pub fn last(&self) -> SphericalPoint {
        self.points[self.points.len() - 1]
    }

    /// First and last samples give the same direction.
    pub fn is_closed(&self) -> bool {
        self.points.len() > 1 && angular_distance(self.first().unit_vector(), self.last().unit_vector()) < CLOSED_EPS
    }

    /// Total great-circle length of the sampled polyline.
    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| angular_distance(w[0].unit_vector(), w[1].unit_vector())).sum()
    }

    /// Same samples in reverse order.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self { points }
    }

    /// This path followed by `other`; a duplicated junction sample is dropped.
    pub fn concat(&self, other: &SpherePath) -> Self {
        let mut points = self.points.clone();
        let skip = usize::from(angular_distance(self.last().unit_vector(), other.first().unit_vector()) < CLOSED_EPS);
        points.extend_from_slice(&other.points[skip..]);
        Self { points }
    }
}

/// Uniformly spaced great-circle arc from `p1` back to `p0`, the closure
/// direction of a path that starts at `p0` and ends at `p1`.
///
/// Coincident endpoints give a single-sample arc; antipodal endpoints have no
/// unique shortest geodesic and are rejected.
pub fn geodesic_arc(p0: [f64; 3], p1: [f64; 3], samples: usize) -> Result<SpherePath> {
    let cos = dot(p0, p1);
    if cos <= -1.0 + ANTIPODAL_EPS {
        return Err(Error::Antipodal { dot: cos });
    }
    let omega = angular_distance(p0, p1);
    if omega < 1e-15 {
        return SpherePath::new(alloc::vec![SphericalPoint::from_vector(p1)]);
    }
    let n = samples.max(2);
    let s = omega.sin();
    SpherePath::sampled(n, |u| {
        let a = ((1.0 - u) * omega).sin() / s;
        let b = (u * omega).sin() / s;
        SphericalPoint::from_vector([a * p1[0] + b * p0[0], a * p1[1] + b * p0[1], a * p1[2] + b * p0[2]])
    })
}

/// Solid angle bookkeeping of a closed path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidAngle {
    /// Reduced to `(−2π, 2π]`.
    pub normalized: f64,
    /// Accumulated value; counts multiple windings.
    pub raw: f64,
}

fn reduce_4pi(x: f64) -> f64 {
    let r = rem_euclid(x + 2.0 * PI, 4.0 * PI) - 2.0 * PI;
    if r <= -2.0 * PI {
        r + 4.0 * PI
    } else {
        r
    }
}

/// `∫ (1 − cos Θ) dΦ` along one segment, exact when `Θ` and `Φ` vary
/// linearly. At a pole the azimuth is taken from the other endpoint, so a
/// segment leaving a pole is a meridian.
fn segment_integral(a: SphericalPoint, b: SphericalPoint) -> f64 {
    let dphi = if a.at_pole() || b.at_pole() { 0.0 } else { wrap(b.phi - a.phi) };
    dphi * (1.0 - mean_cos(a.theta, b.theta))
}

/// Signed solid angle enclosed by a closed path, positive for
/// counterclockwise traversal about the enclosed region (right-hand rule).
///
/// Computed as the line integral of `(1 − cos Θ) dΦ` with the azimuth branch
/// tracked segment by segment, which measures the area to the left of the
/// path counted from the north pole. Paths through the south pole are
/// ambiguous by `4π`.
pub fn solid_angle(path: &SpherePath) -> Result<SolidAngle> {
    if !path.is_closed() {
        return Err(Error::Domain("solid angle needs a closed path"));
    }
    let mut raw = 0.0;
    for w in path.points.windows(2) {
        if angular_distance(w[0].unit_vector(), w[1].unit_vector()) >= PI / 2.0 {
            return Err(Error::Resolution("consecutive sphere samples must be less than π/2 apart"));
        }
        raw += segment_integral(w[0], w[1]);
    }
    Ok(SolidAngle { normalized: reduce_4pi(raw), raw })
}

/// Cross-check of [`solid_angle`]: summed signed spherical excess of the fan
/// of triangles `(north pole, p_k, p_{k+1})`, treating consecutive samples as
/// joined by great circles. Reduced to `(−2π, 2π]`.
pub fn solid_angle_fan(path: &SpherePath) -> f64 {
    let apex = [0.0, 0.0, 1.0];
    let mut total = 0.0;
    for w in path.points.windows(2) {
        let b = w[0].unit_vector();
        let c = w[1].unit_vector();
        let num = dot(apex, cross(b, c));
        let den = 1.0 + dot(apex, b) + dot(b, c) + dot(c, apex);
        total += 2.0 * num.atan2(den);
    }
    reduce_4pi(total)
}

/// Which of the two spin-½ levels: `Plus` is aligned with the field (model
/// level 0), `Minus` anti-aligned (model level 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinBranch {
    Plus,
    Minus,
}

/// Geodesic closure of an open path.
#[derive(Debug, Clone, PartialEq)]
pub struct SolidAngleResult {
    /// `Ω_gc` of `C + C_gc`, reduced to `(−2π, 2π]`.
    pub omega_gc: f64,
    pub omega_raw: f64,
    /// The closing arc `C_gc`, from the end of `C` back to its start.
    pub geodesic: SpherePath,
    /// `wrap(−Ω_gc / 2)`.
    pub phase_plus: f64,
    /// `wrap(+Ω_gc / 2)`.
    pub phase_minus: f64,
}

impl SolidAngleResult {
    pub fn phase(&self, branch: SpinBranch) -> f64 {
        match branch {
            SpinBranch::Plus => self.phase_plus,
            SpinBranch::Minus => self.phase_minus,
        }
    }
}

/// Maximum step of the sampled closing arc.
pub const CLOSURE_STEP: f64 = 1e-3;

/// Closes `open_path` with the shortest geodesic and returns `γ_± = ∓Ω_gc/2`.
pub fn closure_phase(open_path: &SpherePath) -> Result<SolidAngleResult> {
    let p0 = open_path.first().unit_vector();
    let p1 = open_path.last().unit_vector();
    let samples = (angular_distance(p0, p1) / CLOSURE_STEP).ceil() as usize + 1;
    closure_phase_with(open_path, samples)
}

/// [`closure_phase`] with an explicit number of samples on the closing arc.
pub fn closure_phase_with(open_path: &SpherePath, arc_samples: usize) -> Result<SolidAngleResult> {
    let p0 = open_path.first().unit_vector();
    let p1 = open_path.last().unit_vector();
    let mut geodesic = geodesic_arc(p0, p1, arc_samples)?;
    // keep the caller's azimuths at the junctions
    let n = geodesic.points.len();
    geodesic.points[0] = open_path.last();
    geodesic.points[n - 1] = open_path.first();
    let mut looped = open_path.clone();
    looped.points.extend_from_slice(&geodesic.points[1..]);
    if looped.points.len() == 1 {
        looped.points.push(open_path.first());
    }
    let angle = solid_angle(&looped)?;
    Ok(SolidAngleResult {
        omega_gc: angle.normalized,
        omega_raw: angle.raw,
        geodesic,
        phase_plus: wrap(-angle.raw / 2.0),
        phase_minus: wrap(angle.raw / 2.0),
    })
}

/// The open path of a quarter of the equator from `Φ = 0` to `Φ = π/2`
/// followed by the meridian `Φ = π/2` up to the north pole. Its geodesic
/// closure (the meridian `Φ = 0`) bounds one octant, a quarter of the upper
/// hemisphere, traversed counterclockwise.
pub fn octant_path(samples_per_leg: usize) -> Result<SpherePath> {
    let n = samples_per_leg.max(2);
    let equator = SpherePath::sampled(n, |s| SphericalPoint::new(PI / 2.0, s * PI / 2.0))?;
    let meridian = SpherePath::sampled(n, |s| SphericalPoint::new(PI / 2.0 * (1.0 - s), PI / 2.0))?;
    Ok(equator.concat(&meridian))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::circular_distance;
    use core::f64::consts::FRAC_PI_2;

    fn latitude_loop(theta: f64, n: usize) -> SpherePath {
        SpherePath::sampled(n, |s| SphericalPoint::new(theta, 2.0 * PI * s)).unwrap()
    }

    #[test]
    fn arc_examples() {
        let p = SphericalPoint::new(0.7, 0.2).unit_vector();
        assert_eq!(geodesic_arc(p, p, 10).unwrap().len(), 1);

        let a = SphericalPoint::new(FRAC_PI_2, 0.0).unit_vector();
        let b = SphericalPoint::new(FRAC_PI_2, FRAC_PI_2).unit_vector();
        let arc = geodesic_arc(a, b, 11).unwrap();
        assert_eq!(arc.len(), 11);
        assert!((arc.length() - FRAC_PI_2).abs() < 1e-12);
        for q in arc.points() {
            assert!((q.theta - FRAC_PI_2).abs() < 1e-12);
        }
        assert!((arc.first().phi - FRAC_PI_2).abs() < 1e-12 && arc.last().phi.abs() < 1e-12);

        let c = SphericalPoint::new(FRAC_PI_2, PI).unit_vector();
        assert!(matches!(geodesic_arc(a, c, 11), Err(Error::Antipodal { .. })));
    }

    #[test]
    fn solid_angle_examples() {
        let eq = solid_angle(&latitude_loop(FRAC_PI_2, 100)).unwrap();
        assert!((eq.normalized - 2.0 * PI).abs() < 1e-12);
        for theta in [0.3, 1.0, 2.0] {
            let s = solid_angle(&latitude_loop(theta, 50)).unwrap();
            assert!((s.raw - 2.0 * PI * (1.0 - f64::cos(theta))).abs() < 1e-12);
        }
        let octant = closure_phase(&octant_path(200).unwrap()).unwrap();
        assert!((octant.omega_gc - FRAC_PI_2).abs() < 1e-9);
        assert!(solid_angle(&octant_path(20).unwrap()).is_err(), "open path");
    }

    #[test]
    fn winding_and_reduction() {
        let twice = SpherePath::sampled(400, |s| SphericalPoint::new(1.0, 4.0 * PI * s)).unwrap();
        let s = solid_angle(&twice).unwrap();
        let once = 2.0 * PI * (1.0 - f64::cos(1.0));
        assert!((s.raw - 2.0 * once).abs() < 1e-12);
        assert!(s.normalized > -2.0 * PI && s.normalized <= 2.0 * PI);
        assert!((reduce_4pi(s.raw) - s.normalized).abs() < 1e-15);
        assert_eq!(reduce_4pi(-2.0 * PI), 2.0 * PI);
    }

    #[test]
    fn fan_cross_check() {
        for theta in [0.2, 0.9, FRAC_PI_2] {
            let path = latitude_loop(theta, 4000);
            let line = solid_angle(&path).unwrap().normalized;
            let fan = solid_angle_fan(&path);
            // the equator sits on the ±2π seam, so compare modulo 4π
            let d = (line - fan).rem_euclid(4.0 * PI);
            assert!(d.min(4.0 * PI - d) < 1e-5, "theta {theta}: {line} vs {fan}");
        }
        let mut oct = octant_path(100).unwrap();
        oct = oct.concat(&SpherePath::sampled(100, |s| SphericalPoint::new(FRAC_PI_2 * s, 0.0)).unwrap());
        assert!((solid_angle_fan(&oct) - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn closure_examples() {
        // equatorial arc shorter than π: the closure retraces it
        let short = SpherePath::sampled(100, |s| SphericalPoint::new(FRAC_PI_2, 2.5 * s)).unwrap();
        let r = closure_phase(&short).unwrap();
        assert!(r.omega_gc.abs() < 1e-12);
        assert!(circular_distance(r.phase_plus, 0.0) < 1e-12);
        // longer than π: closure continues around, enclosing the hemisphere
        for end in [3.5, 2.0 * PI] {
            let long = SpherePath::sampled(100, |s| SphericalPoint::new(FRAC_PI_2, end * s)).unwrap();
            let r = closure_phase(&long).unwrap();
            assert!((r.omega_gc - 2.0 * PI).abs() < 1e-9);
            assert!(circular_distance(r.phase_plus, -PI) < 1e-9);
            assert!(circular_distance(r.phase(SpinBranch::Minus), PI) < 1e-9);
        }
        let half = SpherePath::sampled(100, |s| SphericalPoint::new(FRAC_PI_2, PI * s)).unwrap();
        assert!(matches!(closure_phase(&half), Err(Error::Antipodal { .. })));

        let r = closure_phase(&octant_path(300).unwrap()).unwrap();
        assert!(circular_distance(r.phase_plus, -PI / 4.0) < 1e-9);
        assert!(circular_distance(r.phase_minus, PI / 4.0) < 1e-9);
    }

    #[test]
    fn orientation_and_additivity() {
        let path = SpherePath::sampled(300, |s| SphericalPoint::new(0.5 + 0.3 * (2.0 * PI * s).sin(), 2.0 * PI * s)).unwrap();
        let fwd = solid_angle(&path).unwrap().raw;
        let back = solid_angle(&path.reversed()).unwrap().raw;
        assert!((fwd + back).abs() < 1e-12);

        let wedge = |a: f64, b: f64| {
            let down = SpherePath::sampled(50, |s| SphericalPoint::new(FRAC_PI_2 * s, a)).unwrap();
            let along = SpherePath::sampled(50, |s| SphericalPoint::new(FRAC_PI_2, a + (b - a) * s)).unwrap();
            let up = SpherePath::sampled(50, |s| SphericalPoint::new(FRAC_PI_2 * (1.0 - s), b)).unwrap();
            solid_angle(&down.concat(&along).concat(&up)).unwrap().raw
        };
        let (x, y, both) = (wedge(0.0, 1.0), wedge(1.0, 2.5), wedge(0.0, 2.5));
        assert!((x + y - both).abs() < 1e-12);
        assert!((both - 2.5).abs() < 1e-12);
    }
}
