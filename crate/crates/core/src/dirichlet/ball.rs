//! Harmonic extension on the unit ball via solid harmonics.
//!
//! A trace on the sphere grid is projected onto the orthonormal spherical
//! polynomial basis; the extension is the same coefficient sum read as
//! solid harmonics (each degree-`l` function IS a homogeneous polynomial,
//! so `r^l` is built in). The DtN multiplier on degree `l` is `l`.

use super::DirichletError;
use crate::jetgeom::sphere::{shared_basis, SphericalBasis};
use std::sync::Arc;

/// Spherical-harmonic coefficients per component against a shared basis.
#[derive(Debug, Clone)]
pub struct BallTrace {
    pub basis: Arc<SphericalBasis>,
    /// `coeffs[component][basis function]`
    pub coeffs: Vec<Vec<f64>>,
}

impl BallTrace {
    /// Project interleaved samples `[sample * m + a]` on the basis grid.
    pub fn from_samples(
        values: &[f64],
        m: usize,
        basis: Arc<SphericalBasis>,
    ) -> Result<Self, DirichletError> {
        let s = basis.grid.num_samples();
        if m == 0 || values.len() != s * m {
            return Err(DirichletError::TraceShape { got: values.len(), expect: s, m });
        }
        let coeffs = (0..m)
            .map(|a| {
                let col: Vec<f64> = (0..s).map(|j| values[j * m + a]).collect();
                basis.project(&col)
            })
            .collect();
        Ok(BallTrace { basis, coeffs })
    }

    pub fn components(&self) -> usize {
        self.coeffs.len()
    }

    /// Trace values back on the grid, interleaved.
    pub fn values(&self) -> Vec<f64> {
        let s = self.basis.grid.num_samples();
        let m = self.components();
        let mut out = vec![0.0; s * m];
        for (a, c) in self.coeffs.iter().enumerate() {
            let vals = self.basis.reconstruct(c);
            for j in 0..s {
                out[j * m + a] = vals[j];
            }
        }
        out
    }

    /// Residual between the projected trace and the input samples; large
    /// when the data exceeds the basis band (aliasing diagnostic).
    pub fn projection_residual(&self, values: &[f64]) -> f64 {
        let back = self.values();
        values
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Build (or fetch) the basis appropriate for degree `l_max` traces on an
/// `n_theta x n_phi` grid.
pub fn ball_basis(
    n_theta: usize,
    n_phi: usize,
    l_max: usize,
) -> Result<Arc<SphericalBasis>, DirichletError> {
    let cap = (n_theta - 1).min((n_phi - 1) / 2);
    if l_max > cap {
        return Err(DirichletError::Aliasing { l: l_max, cap });
    }
    Ok(shared_basis(n_theta, n_phi, l_max))
}

/// Harmonic extension of a [`BallTrace`] to the closed unit ball.
#[derive(Debug, Clone)]
pub struct BallExtension {
    pub trace: BallTrace,
}

pub fn solve_ball(trace: &BallTrace) -> BallExtension {
    BallExtension { trace: trace.clone() }
}

impl BallExtension {
    pub fn eval(&self, a: usize, p: [f64; 3]) -> f64 {
        self.trace.basis.eval_sum(&self.trace.coeffs[a], p)
    }

    pub fn grad(&self, a: usize, p: [f64; 3]) -> [f64; 3] {
        self.trace.basis.grad_sum(&self.trace.coeffs[a], p)
    }

    /// Gradient at every grid sample of the boundary sphere,
    /// `[sample * 3 + axis]`.
    pub fn boundary_gradient(&self, a: usize) -> Vec<f64> {
        let basis = &self.trace.basis;
        let s = basis.grid.num_samples();
        let mut out = vec![0.0; s * 3];
        for (c, f) in self.trace.coeffs[a].iter().zip(&basis.funcs) {
            if *c != 0.0 {
                for (o, v) in out.iter_mut().zip(&f.grad_values) {
                    *o += c * v;
                }
            }
        }
        out
    }
}

/// Dirichlet-to-Neumann on the unit sphere: multiplier `l` per degree
/// block.
pub fn dtn_ball(trace: &BallTrace) -> BallTrace {
    let coeffs = trace
        .coeffs
        .iter()
        .map(|c| {
            c.iter()
                .zip(&trace.basis.funcs)
                .map(|(v, f)| v * f.l as f64)
                .collect()
        })
        .collect();
    BallTrace { basis: trace.basis.clone(), coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_samples(basis: &SphericalBasis, f: impl Fn([f64; 3]) -> f64) -> Vec<f64> {
        let g = &basis.grid;
        let mut out = vec![0.0; g.num_samples()];
        for it in 0..g.n_theta {
            for ip in 0..g.n_phi {
                out[g.index(it, ip)] = f(g.point(it, ip));
            }
        }
        out
    }

    #[test]
    fn coordinate_trace_extends_to_itself() {
        let basis = ball_basis(12, 24, 4).unwrap();
        let vals = grid_samples(&basis, |p| p[2]); // v = z
        let tr = BallTrace::from_samples(&vals, 1, basis.clone()).unwrap();
        let ext = solve_ball(&tr);
        for p in [[0.1, 0.2, 0.3], [0.0, 0.0, 0.0], [0.5, -0.4, 0.7]] {
            assert!((ext.eval(0, p) - p[2]).abs() < 1e-11);
        }
        // DtN multiplier 1 on degree-1 data
        let dtn = dtn_ball(&tr);
        let back = dtn.values();
        for (a, b) in back.iter().zip(&vals) {
            assert!((a - b).abs() < 1e-11);
        }
        // gradient is the constant e_z
        let g = ext.grad(0, [0.3, 0.1, -0.2]);
        assert!((g[0]).abs() < 1e-11 && (g[1]).abs() < 1e-11 && (g[2] - 1.0).abs() < 1e-11);
    }

    #[test]
    fn constant_trace_has_zero_dtn() {
        let basis = ball_basis(10, 20, 3).unwrap();
        let vals = grid_samples(&basis, |_| 2.5);
        let tr = BallTrace::from_samples(&vals, 1, basis).unwrap();
        let dtn = dtn_ball(&tr);
        assert!(dtn.values().iter().all(|v| v.abs() < 1e-11));
        let ext = solve_ball(&tr);
        assert!((ext.eval(0, [0.2, 0.1, 0.05]) - 2.5).abs() < 1e-11);
    }

    #[test]
    fn degree_two_dtn_multiplier() {
        let basis = ball_basis(12, 24, 4).unwrap();
        // v = x y, a degree-2 solid harmonic
        let vals = grid_samples(&basis, |p| p[0] * p[1]);
        let tr = BallTrace::from_samples(&vals, 1, basis).unwrap();
        let dtn = dtn_ball(&tr).values();
        for (d, v) in dtn.iter().zip(&vals) {
            assert!((d - 2.0 * v).abs() < 1e-11);
        }
    }

    #[test]
    fn aliasing_guard() {
        assert!(matches!(
            ball_basis(8, 16, 9),
            Err(DirichletError::Aliasing { .. })
        ));
    }

    #[test]
    fn maximum_principle_and_mean_value() {
        let basis = ball_basis(14, 28, 6).unwrap();
        let vals = grid_samples(&basis, |p| p[0] * p[1] * p[2] + 0.4 * p[2] - 0.2);
        let tr = BallTrace::from_samples(&vals, 1, basis.clone()).unwrap();
        let ext = solve_ball(&tr);
        let (mut vmin, mut vmax) = (f64::MAX, f64::MIN);
        for v in &vals {
            vmin = vmin.min(*v);
            vmax = vmax.max(*v);
        }
        for q in [
            [0.3, 0.3, 0.3],
            [0.0, 0.0, 0.9],
            [-0.5, 0.2, 0.1],
            [0.0, 0.0, 0.0],
        ] {
            let v = ext.eval(0, q);
            assert!(v >= vmin - 1e-9 && v <= vmax + 1e-9);
        }
        // mean value at the center
        let g = &basis.grid;
        let mut mean = 0.0;
        let mut area = 0.0;
        for it in 0..g.n_theta {
            for ip in 0..g.n_phi {
                mean += g.unit_weight(it) * vals[g.index(it, ip)];
                area += g.unit_weight(it);
            }
        }
        mean /= area;
        assert!((ext.eval(0, [0.0; 3]) - mean).abs() < 1e-10);
    }

    #[test]
    fn dtn_self_adjoint_on_sphere() {
        let basis = ball_basis(12, 24, 5).unwrap();
        let v1 = grid_samples(&basis, |p| p[0] * p[1] + 0.5 * p[2]);
        let v2 = grid_samples(&basis, |p| p[2] * p[2] - 1.0 / 3.0 + 0.2 * p[0]);
        let t1 = BallTrace::from_samples(&v1, 1, basis.clone()).unwrap();
        let t2 = BallTrace::from_samples(&v2, 1, basis.clone()).unwrap();
        let l1 = dtn_ball(&t1).values();
        let l2 = dtn_ball(&t2).values();
        let g = &basis.grid;
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        for it in 0..g.n_theta {
            for ip in 0..g.n_phi {
                let j = g.index(it, ip);
                let w = g.unit_weight(it);
                lhs += w * v1[j] * l2[j];
                rhs += w * v2[j] * l1[j];
            }
        }
        assert!((lhs - rhs).abs() < 1e-10);
    }
}
