//! Dirichlet solvers and Dirichlet-to-Neumann maps.
//!
//! Three realizations of "there is a unique harmonic `V` with `V = v` on the
//! boundary":
//! - the unit disk, spectrally: `V(r, phi) = sum_k c_k r^{|k|} e^{i k phi}`,
//!   DtN multiplier `|k|`;
//! - the unit ball, spectrally: solid-harmonic expansion through
//!   [`crate::jetgeom::sphere::SphericalBasis`], DtN multiplier `l`;
//! - general plane domains bounded by a sampled curve: Shortley–Weller
//!   finite differences on an embedded Cartesian grid ([`fd`]).

pub mod ball;
pub mod fd;

use crate::numerics::spectral;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DirichletError {
    #[error("trace length {got} does not match {expect} samples x {m} components")]
    TraceShape { got: usize, expect: usize, m: usize },
    #[error("spherical harmonic degree {l} exceeds the grid's alias-free band {cap}")]
    Aliasing { l: usize, cap: usize },
    #[error("interior mask construction failed near ({x:.6}, {y:.6}); boundary not resolved by the grid")]
    MaskConstruction { x: f64, y: f64 },
    #[error("one-sided normal stencil exits the interior at boundary sample {sample}")]
    StencilExitsInterior { sample: usize },
    #[error("grid spacing {h} cannot resolve the domain")]
    GridTooCoarse { h: f64 },
    #[error("boundary is not a plane curve")]
    NotACurve,
    #[error(transparent)]
    Solver(#[from] crate::numerics::sparse::SolveError),
    #[error(transparent)]
    Geometry(#[from] crate::jetgeom::GeomError),
}

impl DirichletError {
    pub fn code(&self) -> &'static str {
        match self {
            DirichletError::TraceShape { .. } => "dirichlet_trace_shape",
            DirichletError::Aliasing { .. } => "dirichlet_aliasing",
            DirichletError::MaskConstruction { .. } => "dirichlet_mask",
            DirichletError::StencilExitsInterior { .. } => "dirichlet_stencil",
            DirichletError::GridTooCoarse { .. } => "dirichlet_grid",
            DirichletError::NotACurve => "dirichlet_not_a_curve",
            DirichletError::Solver(_) => "dirichlet_solver",
            DirichletError::Geometry(e) => e.code(),
        }
    }
}

/// Fourier trace data on the unit circle, one coefficient vector per
/// component (standard FFT bin order, length = sample count).
#[derive(Debug, Clone)]
pub struct DiskTrace {
    pub samples: usize,
    pub coeffs: Vec<Vec<Complex64>>,
}

impl DiskTrace {
    /// From interleaved samples `[sample * m + a]`.
    pub fn from_samples(values: &[f64], m: usize) -> Result<Self, DirichletError> {
        if m == 0 || values.len() % m != 0 {
            return Err(DirichletError::TraceShape { got: values.len(), expect: values.len() / m.max(1), m });
        }
        let samples = values.len() / m;
        let coeffs = (0..m)
            .map(|a| {
                let col: Vec<f64> = (0..samples).map(|j| values[j * m + a]).collect();
                spectral::fourier_coeffs(&col)
            })
            .collect();
        Ok(DiskTrace { samples, coeffs })
    }

    pub fn components(&self) -> usize {
        self.coeffs.len()
    }

    /// Trace values back on the sample grid.
    pub fn values(&self) -> Vec<f64> {
        let m = self.components();
        let mut out = vec![0.0; self.samples * m];
        for (a, c) in self.coeffs.iter().enumerate() {
            let vals = spectral::fourier_values(c);
            for j in 0..self.samples {
                out[j * m + a] = vals[j];
            }
        }
        out
    }
}

/// Harmonic extension of a [`DiskTrace`] to the closed unit disk.
#[derive(Debug, Clone)]
pub struct DiskExtension {
    pub trace: DiskTrace,
}

/// `V(r, phi) = sum_k c_k r^{|k|} e^{i k phi}`; the trace at `r = 1`
/// reproduces the input coefficients exactly.
pub fn solve_disk(trace: &DiskTrace) -> DiskExtension {
    DiskExtension { trace: trace.clone() }
}

impl DiskExtension {
    pub fn components(&self) -> usize {
        self.trace.components()
    }

    /// Evaluate component `a` at polar coordinates `(r, phi)`.
    pub fn eval(&self, a: usize, r: f64, phi: f64) -> f64 {
        let n = self.trace.samples;
        let coeffs = &self.trace.coeffs[a];
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in coeffs.iter().enumerate() {
            let k = spectral::wavenumber(j, n);
            let rk = r.powi(k.unsigned_abs() as i32);
            if n % 2 == 0 && j == n / 2 {
                let e_plus = Complex64::new(0.0, k as f64 * phi).exp();
                let e_minus = Complex64::new(0.0, -(k as f64) * phi).exp();
                acc += c * rk * (e_plus + e_minus) * 0.5;
            } else {
                acc += c * rk * Complex64::new(0.0, k as f64 * phi).exp();
            }
        }
        acc.re
    }

    /// Cartesian gradient of component `a` at `(r, phi)`; finite at the
    /// origin (only the `|k| = 1` modes contribute there).
    pub fn grad(&self, a: usize, r: f64, phi: f64) -> [f64; 2] {
        let n = self.trace.samples;
        let coeffs = &self.trace.coeffs[a];
        let mut dr = Complex64::new(0.0, 0.0);
        let mut dphi_over_r = Complex64::new(0.0, 0.0);
        for (j, c) in coeffs.iter().enumerate() {
            let k = spectral::wavenumber(j, n);
            let ka = k.unsigned_abs() as i32;
            if k == 0 {
                continue;
            }
            let rk1 = r.powi(ka - 1);
            if n % 2 == 0 && j == n / 2 {
                let e_plus = Complex64::new(0.0, k as f64 * phi).exp();
                let e_minus = Complex64::new(0.0, -(k as f64) * phi).exp();
                dr += c * (ka as f64) * rk1 * (e_plus + e_minus) * 0.5;
                dphi_over_r += c
                    * rk1
                    * (Complex64::new(0.0, k as f64) * e_plus
                        + Complex64::new(0.0, -k as f64) * e_minus)
                    * 0.5;
            } else {
                let e = Complex64::new(0.0, k as f64 * phi).exp();
                dr += c * (ka as f64) * rk1 * e;
                dphi_over_r += c * rk1 * Complex64::new(0.0, k as f64) * e;
            }
        }
        let (s, co) = phi.sin_cos();
        [
            co * dr.re - s * dphi_over_r.re,
            s * dr.re + co * dphi_over_r.re,
        ]
    }

    /// Gradient at every boundary sample, `[sample * 2 + i]` per component
    /// `a`.
    pub fn boundary_gradient(&self, a: usize) -> Vec<f64> {
        let n = self.trace.samples;
        let mut out = vec![0.0; n * 2];
        for j in 0..n {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let g = self.grad(a, 1.0, phi);
            out[j * 2] = g[0];
            out[j * 2 + 1] = g[1];
        }
        out
    }
}

/// Dirichlet-to-Neumann on the unit circle: coefficient-wise multiplier
/// `|k|`.
pub fn dtn_disk(trace: &DiskTrace) -> DiskTrace {
    let n = trace.samples;
    let coeffs = trace
        .coeffs
        .iter()
        .map(|c| {
            c.iter()
                .enumerate()
                .map(|(j, v)| v * spectral::wavenumber(j, n).unsigned_abs() as f64)
                .collect()
        })
        .collect();
    DiskTrace { samples: n, coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn trace_from(f: impl Fn(f64) -> f64, n: usize) -> DiskTrace {
        let vals: Vec<f64> = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect();
        DiskTrace::from_samples(&vals, 1).unwrap()
    }

    #[test]
    fn cos_2s_extends_to_r2_cos_2phi() {
        let tr = trace_from(|s| (2.0 * s).cos(), 64);
        let ext = solve_disk(&tr);
        // V = r^2 cos(2 phi) = x^2 - y^2
        for (r, phi) in [(0.5, 0.3), (0.9, 2.0), (0.0, 1.0), (1.0, 4.2)] {
            let expect = r * r * (2.0f64 * phi).cos();
            assert!((ext.eval(0, r, phi) - expect).abs() < 1e-12);
        }
        // gradient matches grad(x^2 - y^2) = (2x, -2y)
        for (r, phi) in [(0.5, 0.3), (0.8, 5.1), (1.0, 0.0)] {
            let g = ext.grad(0, r, phi);
            let (x, y) = (r * phi.cos(), r * phi.sin());
            assert!((g[0] - 2.0 * x).abs() < 1e-12);
            assert!((g[1] + 2.0 * y).abs() < 1e-12);
        }
    }

    #[test]
    fn constants_and_zero() {
        let z = trace_from(|_| 0.0, 32);
        let ze = solve_disk(&z);
        assert_eq!(ze.eval(0, 0.37, 1.1), 0.0);
        let one = trace_from(|_| 1.0, 32);
        let oe = solve_disk(&one);
        assert!((oe.eval(0, 0.5, 2.2) - 1.0).abs() < 1e-14);
        let dtn = dtn_disk(&one);
        for c in &dtn.coeffs[0] {
            assert!(c.norm() < 1e-14);
        }
    }

    #[test]
    fn dtn_multiplier_is_abs_k() {
        let n = 64;
        // e^{3 i s} -> 3 e^{3 i s}: check via cos(3s), sin(3s) combinations
        let tr = trace_from(|s| (3.0 * s).cos() + 0.5 * (7.0 * s).sin(), n);
        let dtn = dtn_disk(&tr);
        let vals = dtn.values();
        for j in 0..n {
            let s = 2.0 * PI * j as f64 / n as f64;
            let expect = 3.0 * (3.0 * s).cos() + 3.5 * (7.0 * s).sin();
            assert!((vals[j] - expect).abs() < 1e-12);
        }
        // cos 2s -> 2 cos 2s
        let t2 = trace_from(|s| (2.0 * s).cos(), n);
        let d2 = dtn_disk(&t2).values();
        for j in 0..n {
            let s = 2.0 * PI * j as f64 / n as f64;
            assert!((d2[j] - 2.0 * (2.0 * s).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn linearity_and_uniqueness_surrogate() {
        let n = 128;
        let t1 = trace_from(|s| (3.0 * s).cos() - s.sin(), n);
        let t2 = trace_from(|s| 0.25 * (5.0 * s).sin() + 2.0, n);
        let diff: Vec<f64> = t1
            .values()
            .iter()
            .zip(t2.values())
            .map(|(a, b)| a - b)
            .collect();
        let td = DiskTrace::from_samples(&diff, 1).unwrap();
        let (e1, e2, ed) = (solve_disk(&t1), solve_disk(&t2), solve_disk(&td));
        for (r, phi) in [(0.3, 0.7), (0.9, 3.0)] {
            let lhs = e1.eval(0, r, phi) - e2.eval(0, r, phi);
            assert!((lhs - ed.eval(0, r, phi)).abs() < 1e-12);
        }
        // zero trace => zero solution
        let z = trace_from(|_| 0.0, n);
        assert_eq!(solve_disk(&z).eval(0, 0.77, 0.2), 0.0);
    }

    #[test]
    fn maximum_principle_and_mean_value() {
        let n = 128;
        let f = |s: f64| (2.0 * s).cos() + 0.3 * (5.0 * s).sin() - 0.1;
        let tr = trace_from(f, n);
        let ext = solve_disk(&tr);
        let vals = tr.values();
        let (mut vmin, mut vmax) = (f64::MAX, f64::MIN);
        for v in &vals {
            vmin = vmin.min(*v);
            vmax = vmax.max(*v);
        }
        for ir in 0..10 {
            for ip in 0..32 {
                let r = ir as f64 / 10.0;
                let phi = 2.0 * PI * ip as f64 / 32.0;
                let v = ext.eval(0, r, phi);
                assert!(v >= vmin - 1e-8 && v <= vmax + 1e-8);
            }
        }
        let mean = vals.iter().sum::<f64>() / n as f64;
        assert!((ext.eval(0, 0.0, 0.0) - mean).abs() < 1e-10);
    }

    #[test]
    fn dtn_is_self_adjoint() {
        let n = 128;
        let ds = 2.0 * PI / n as f64;
        let v1 = trace_from(|s| (4.0 * s).cos() + 0.2 * s.sin() + 1.0, n);
        let v2 = trace_from(|s| (3.0 * s).sin() - 0.7 * (6.0 * s).cos(), n);
        let l1 = dtn_disk(&v1).values();
        let l2 = dtn_disk(&v2).values();
        let a1 = v1.values();
        let a2 = v2.values();
        let lhs: f64 = (0..n).map(|j| a1[j] * l2[j] * ds).sum();
        let rhs: f64 = (0..n).map(|j| a2[j] * l1[j] * ds).sum();
        assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
    }
}
