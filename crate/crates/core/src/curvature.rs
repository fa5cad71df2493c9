//! Berry curvature of a level over a three-dimensional parameter space and
//! its flux through triangulated surfaces.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::model::Hamiltonian;
use crate::phase::PhaseEngine;

/// The curvature vector `V_n(R)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureVector {
    pub components: [f64; 3],
    pub point: [f64; 3],
}

impl CurvatureVector {
    pub fn magnitude(&self) -> f64 {
        dot(self.components, self.components).sqrt()
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// `V_n = Im Σ_{m≠n} ⟨n|∇H|m⟩ × ⟨m|∇H|n⟩ / (E_n − E_m)²` with `∇H` from
/// centered finite differences.
///
/// The sum contains no eigenvector phases, so the result is gauge independent.
pub fn berry_curvature<H: Hamiltonian + ?Sized>(
    engine: &PhaseEngine,
    model: &H,
    point: [f64; 3],
    level: usize,
) -> Result<CurvatureVector> {
    if model.parameter_dim() != 3 {
        return Err(Error::Dimension { expected: 3, found: model.parameter_dim() });
    }
    if level >= model.dimension() {
        return Err(Error::Dimension { expected: model.dimension(), found: level });
    }
    let spec = eigh(&model.evaluate(&point)?)?;
    let gap = spec.gap(level);
    if gap < engine.tol.degeneracy {
        return Err(Error::Degeneracy { level, gap, threshold: engine.tol.degeneracy });
    }
    let grads = [
        engine.parameter_derivative(model, &point, 0)?,
        engine.parameter_derivative(model, &point, 1)?,
        engine.parameter_derivative(model, &point, 2)?,
    ];
    let n = &spec.vectors[level];
    let mut v = [0.0; 3];
    for m in 0..spec.values.len() {
        if m == level {
            continue;
        }
        let a: Vec<_> = grads.iter().map(|g| g.sandwich(n, &spec.vectors[m])).collect();
        let de = spec.values[level] - spec.values[m];
        let w = 1.0 / (de * de);
        // ⟨m|∂H|n⟩ = conj(⟨n|∂H|m⟩)
        v[0] += (a[1] * a[2].conj() - a[2] * a[1].conj()).im * w;
        v[1] += (a[2] * a[0].conj() - a[0] * a[2].conj()).im * w;
        v[2] += (a[0] * a[1].conj() - a[1] * a[0].conj()).im * w;
    }
    Ok(CurvatureVector { components: v, point })
}

/// Triangulated surface; each triangle's normal follows the right-hand rule
/// on its vertex order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

impl TriangleMesh {
    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i]);
                0.5 * dot(cross(sub(b, a), sub(c, a)), cross(sub(b, a), sub(c, a))).sqrt()
            })
            .sum()
    }
}

/// `−Σ_triangles V(centroid) · (area · n̂)`: the cyclic phase of the mesh
/// boundary, computed from the curvature.
///
/// A mesh without triangles has zero flux; a triangle with vanishing area is
/// rejected.
pub fn curvature_flux<H: Hamiltonian + ?Sized>(engine: &PhaseEngine, model: &H, mesh: &TriangleMesh, level: usize) -> Result<f64> {
    let mut flux = 0.0;
    for (index, tri) in mesh.triangles.iter().enumerate() {
        let [a, b, c] = tri.map(|i| mesh.vertices[i]);
        let e1 = sub(b, a);
        let e2 = sub(c, a);
        let normal = cross(e1, e2);
        let scale = dot(e1, e1).sqrt() * dot(e2, e2).sqrt();
        if !(dot(normal, normal).sqrt() > 1e-14 * scale) {
            return Err(Error::DegenerateTriangle { index });
        }
        let centroid = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0, (a[2] + b[2] + c[2]) / 3.0];
        let v = berry_curvature(engine, model, centroid, level)?;
        flux -= 0.5 * dot(v.components, normal);
    }
    Ok(flux)
}

/// Triangulated spherical cap `Θ ≤ theta_max` around the +z axis with outward
/// normals. Ring `j` carries `6j` vertices, giving `6·rings²` nearly
/// equilateral triangles. The boundary ring runs counterclockwise seen from
/// above, starting at `Φ = 0`.
pub fn spherical_cap_mesh(radius: f64, theta_max: f64, rings: usize) -> Result<TriangleMesh> {
    if !(radius > 0.0) || !(theta_max > 0.0 && theta_max < PI) || rings == 0 {
        return Err(Error::Domain("cap mesh needs radius > 0, 0 < theta_max < π and at least one ring"));
    }
    let mut vertices = vec![[0.0, 0.0, radius]];
    let mut ring_start = vec![0usize];
    for j in 1..=rings {
        ring_start.push(vertices.len());
        let theta = theta_max * j as f64 / rings as f64;
        let count = 6 * j;
        for k in 0..count {
            let phi = 2.0 * PI * k as f64 / count as f64;
            let (st, ct) = theta.sin_cos();
            let (sp, cp) = phi.sin_cos();
            vertices.push([radius * st * cp, radius * st * sp, radius * ct]);
        }
    }
    let mut triangles = Vec::with_capacity(6 * rings * rings);
    for j in 1..=rings {
        let outer_n = 6 * j;
        let inner_n = if j == 1 { 1 } else { 6 * (j - 1) };
        let outer = |k: usize| ring_start[j] + k % outer_n;
        let inner = |k: usize| if j == 1 { 0 } else { ring_start[j - 1] + k % inner_n };
        // merge the two rings by angle: each step advances the ring whose next
        // vertex comes first
        let (mut i, mut o) = (if j == 1 { inner_n } else { 0 }, 0usize);
        while i < inner_n || o < outer_n {
            let next_inner = if i >= inner_n { f64::INFINITY } else { (i + 1) as f64 / inner_n as f64 };
            let next_outer = if o >= outer_n { f64::INFINITY } else { (o + 1) as f64 / outer_n as f64 };
            if next_outer <= next_inner {
                triangles.push([inner(i), outer(o), outer(o + 1)]);
                o += 1;
            } else {
                triangles.push([inner(i), outer(o), inner(i + 1)]);
                i += 1;
            }
        }
    }
    Ok(TriangleMesh { vertices, triangles })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ConicalModel, SpinFieldModel};
    use crate::phase::{apply_gauge, GaugeFunction};

    #[test]
    fn spin_curvature_is_a_monopole() {
        let eng = PhaseEngine::default();
        for &b in &[[0.0, 0.0, 1.0], [0.3, -0.4, 1.2], [-2.0, 0.5, 0.1]] {
            let v = berry_curvature(&eng, &SpinFieldModel, b, 0).unwrap();
            let r2 = dot(b, b);
            let r = r2.sqrt();
            assert!((v.magnitude() - 1.0 / (2.0 * r2)).abs() < 1e-9);
            for (c, bi) in v.components.iter().zip(b) {
                assert!((c - bi / r / (2.0 * r2)).abs() < 1e-9, "outward for the aligned level");
            }
            let anti = berry_curvature(&eng, &SpinFieldModel, [-b[0], -b[1], -b[2]], 0).unwrap();
            for i in 0..3 {
                assert!((anti.components[i] + v.components[i]).abs() < 1e-9);
            }
            let upper = berry_curvature(&eng, &SpinFieldModel, b, 1).unwrap();
            for i in 0..3 {
                assert!((upper.components[i] + v.components[i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn curvature_errors() {
        let eng = PhaseEngine::default();
        let cone = ConicalModel::new(1.0).unwrap();
        assert!(matches!(berry_curvature(&eng, &cone, [0.0; 3], 0), Err(Error::Dimension { .. })));
        assert!(matches!(berry_curvature(&eng, &SpinFieldModel, [0.0; 3], 0), Err(Error::Degeneracy { .. })));
    }

    #[test]
    fn curvature_ignores_gauge() {
        // the curvature sum sees only |n⟩⟨n|, which rephasing leaves unchanged
        let eng = PhaseEngine::default();
        let p = [0.2, 0.7, -0.4];
        let f = eng.frame(&SpinFieldModel, &p, 0).unwrap();
        let g = apply_gauge(core::slice::from_ref(&f), &GaugeFunction { values: vec![1.234] }).unwrap();
        let proj = |v: &[num_complex::Complex64]| [v[0] * v[0].conj(), v[0] * v[1].conj(), v[1] * v[1].conj()];
        let (a, b) = (proj(&f.vector), proj(&g[0].vector));
        for i in 0..3 {
            assert!((a[i] - b[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn cap_mesh_geometry() {
        let mesh = spherical_cap_mesh(1.0, 0.5, 8).unwrap();
        assert_eq!(mesh.triangles.len(), 6 * 64);
        for t in &mesh.triangles {
            let [a, b, c] = t.map(|i| mesh.vertices[i]);
            let n = cross(sub(b, a), sub(c, a));
            let centroid = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0, (a[2] + b[2] + c[2]) / 3.0];
            assert!(dot(n, centroid) > 0.0, "outward normal");
        }
        let cap = 2.0 * PI * (1.0 - 0.5f64.cos());
        assert!((mesh.area() - cap).abs() / cap < 1e-2);
    }

    #[test]
    fn small_cap_flux() {
        let eng = PhaseEngine::default();
        let theta = 0.2;
        let mesh = spherical_cap_mesh(1.0, theta, 20).unwrap();
        let flux = curvature_flux(&eng, &SpinFieldModel, &mesh, 0).unwrap();
        let omega = 2.0 * PI * (1.0 - theta.cos());
        assert!((flux + omega / 2.0).abs() < 1e-4);
        assert_eq!(curvature_flux(&eng, &SpinFieldModel, &TriangleMesh::default(), 0).unwrap(), 0.0);
        let bad = TriangleMesh { vertices: vec![[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], triangles: vec![[0, 1, 2]] };
        assert!(matches!(curvature_flux(&eng, &SpinFieldModel, &bad, 0), Err(Error::DegenerateTriangle { index: 0 })));
    }
}
