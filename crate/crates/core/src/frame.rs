//! Instantaneous eigenframes and gauge continuity along a sampled path.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{inner, CVector};

/// One instantaneous eigenpair `(E_n(R), |n;R⟩)` at parameter point `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFrame {
    pub level: usize,
    pub energy: f64,
    /// Unit-norm eigenvector; its overall phase is the gauge.
    pub vector: CVector,
    pub point: Vec<f64>,
    /// `min_{m≠n} |E_n − E_m|`.
    pub gap: f64,
}

impl EigenFrame {
    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &EigenFrame) -> Complex64 {
        inner(&self.vector, &other.vector)
    }

    /// Same frame multiplied by `e^{iλ}`.
    pub fn rephased(&self, lambda: f64) -> EigenFrame {
        let ph = Complex64::from_polar(1.0, lambda);
        EigenFrame { vector: self.vector.iter().map(|x| x * ph).collect(), ..self.clone() }
    }
}

/// Rephases frames so that every consecutive overlap `⟨n_k|n_{k+1}⟩` is real
/// and positive. The first frame is left untouched.
///
/// Fails with [`Error::Resolution`] when two consecutive frames are closer to
/// orthogonal than `orthogonality_threshold`; the path must be sampled more finely.
pub fn phase_smooth(frames: &[EigenFrame], orthogonality_threshold: f64) -> Result<Vec<EigenFrame>> {
    let mut out: Vec<EigenFrame> = Vec::with_capacity(frames.len());
    for frame in frames {
        match out.last() {
            None => out.push(frame.clone()),
            Some(prev) => {
                let ov = prev.overlap(frame);
                if ov.norm() < orthogonality_threshold {
                    return Err(Error::Resolution("consecutive eigenframes are nearly orthogonal; refine the path sampling"));
                }
                // multiply by conj(ov)/|ov| so that ⟨prev|new⟩ = |ov|
                let fixed = frame.rephased(-ov.arg());
                out.push(fixed);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    fn frame(v: [f64; 2], phase: f64) -> EigenFrame {
        let ph = Complex64::from_polar(1.0, phase);
        EigenFrame {
            level: 0,
            energy: 0.0,
            vector: vec![ph * v[0], ph * v[1]],
            point: vec![],
            gap: 1.0,
        }
    }

    #[test]
    fn positive_overlaps_are_a_fixed_point() {
        let frames = vec![frame([1.0, 0.0], 0.0), frame([0.8, 0.6], 0.0), frame([0.6, 0.8], 0.0)];
        let smoothed = phase_smooth(&frames, 1e-8).unwrap();
        assert_eq!(smoothed, frames);
    }

    #[test]
    fn negative_overlap_gets_flipped() {
        let frames = vec![frame([1.0, 0.0], 0.0), frame([0.8, 0.6], PI)];
        let smoothed = phase_smooth(&frames, 1e-8).unwrap();
        let ov = smoothed[0].overlap(&smoothed[1]);
        assert!((ov.re - 0.8).abs() < 1e-15 && ov.im.abs() < 1e-15);
        for (a, b) in smoothed[1].vector.iter().zip(&frames[1].vector) {
            assert!((a + b).norm() < 1e-15);
        }
    }

    #[test]
    fn orthogonal_neighbours_rejected() {
        let frames = vec![frame([1.0, 0.0], 0.0), frame([0.0, 1.0], 0.0)];
        assert!(matches!(phase_smooth(&frames, 1e-8), Err(Error::Resolution(_))));
    }
}
