//! Hermitian eigensolver (cyclic complex Jacobi) for small matrices.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::frame::EigenFrame;
use crate::linalg::{CMatrix, CVector};

/// Full spectral decomposition, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<CVector>,
}

impl Spectrum {
    /// Smallest distance from `values[level]` to any other eigenvalue.
    pub fn gap(&self, level: usize) -> f64 {
        let e = self.values[level];
        self.values
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != level)
            .map(|(_, v)| (e - v).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

const MAX_SWEEPS: usize = 64;

/// Diagonalizes a Hermitian matrix.
///
/// Eigenvectors are returned in a fixed gauge: the component of largest
/// modulus (lowest index on ties) is real and positive.
pub fn eigh(h: &CMatrix) -> Result<Spectrum> {
    let n = h.dim();
    if n == 0 {
        return Err(Error::Dimension { expected: 1, found: 0 });
    }
    let mut a = h.clone();
    // enforce exact hermiticity of the working copy
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = CMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.partial_cmp(&a[(y, y)].re).unwrap_or(core::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut col: CVector = (0..n).map(|i| v[(i, k)]).collect();
            fix_gauge(&mut col);
            col
        })
        .collect();
    Ok(Spectrum { values, vectors })
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U acts on the (p, q) plane: U = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
    let upp = Complex64::new(c, 0.0);
    let upq = Complex64::new(s, 0.0);
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;
    let n = a.dim();
    // A ← A U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    // A ← U† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V ← V U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}

fn fix_gauge(col: &mut [Complex64]) {
    let mut best = 0;
    let mut best_mod = -1.0;
    for (i, x) in col.iter().enumerate() {
        let m = x.norm();
        if m > best_mod + 1e-12 {
            best = i;
            best_mod = m;
        }
    }
    let lead = col[best];
    if lead.norm() > 0.0 {
        let ph = lead.conj() / lead.norm();
        for x in col.iter_mut() {
            *x *= ph;
        }
    }
    let nrm = crate::linalg::norm(col);
    for x in col.iter_mut() {
        *x /= nrm;
    }
}

/// Instantaneous eigenframe of level `level` (ascending energy order).
///
/// Fails with [`Error::Degeneracy`] when the level's gap is below
/// `degeneracy_threshold`.
pub fn eigensolve(h: &CMatrix, level: usize, point: &[f64], degeneracy_threshold: f64) -> Result<EigenFrame> {
    if level >= h.dim() {
        return Err(Error::Dimension { expected: h.dim(), found: level });
    }
    let spec = eigh(h)?;
    let gap = spec.gap(level);
    if gap < degeneracy_threshold {
        return Err(Error::Degeneracy { level, gap, threshold: degeneracy_threshold });
    }
    Ok(EigenFrame {
        level,
        energy: spec.values[level],
        vector: spec.vectors[level].clone(),
        point: point.to_vec(),
        gap,
    })
}
