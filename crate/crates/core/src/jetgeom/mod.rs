//! Sampled closed boundary data in the first jet space `J^1(R^n, R^m)` for
//! `n in {2, 3}`: isotropy residuals, outward normals, induced measure, and
//! the cylinder interpolating two lifts over the same base curve.
//!
//! Conventions, fixed here and relied on by every downstream sign:
//! - `n = 2`: uniform samples of `s in [0, 2 pi)`, counterclockwise; the
//!   induced measure `g^*(N ⌟ omega)` is positive. Clockwise input is
//!   rejected.
//! - `n = 3`: the Gauss–Legendre × uniform grid of [`sphere::SphereGrid`]
//!   on the unit sphere, `(theta, phi)` positively oriented with respect to
//!   the outward normal. Only boundaries sitting on this canonical grid are
//!   supported (the ball is the only n = 3 domain handled by the solver).

pub mod sphere;

use crate::numerics::spectral;
use sphere::{data_band, shared_basis, SphereGrid, SphericalBasis};
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("inconsistent dimensions: {0}")]
    Dimension(String),
    #[error("boundary data contains non-finite entries")]
    NonFinite,
    #[error("too few samples: got {got}, need at least {min}")]
    TooFewSamples { got: usize, min: usize },
    #[error("degenerate tangent at sample {sample} (|dx/ds| < 1e-12)")]
    DegenerateTangent { sample: usize },
    #[error("curve self-intersects near samples {i} and {j}")]
    SelfIntersection { i: usize, j: usize },
    #[error("curve must be traversed counterclockwise (signed area > 0)")]
    InvalidOrientation,
    #[error("n=3 boundaries must sample the canonical unit-sphere grid")]
    SphereGridMismatch,
    #[error("defect field length does not match the boundary grid")]
    ZetaLength,
    #[error("cylinder needs at least 2 radial nodes")]
    RGrid,
}

impl GeomError {
    pub fn code(&self) -> &'static str {
        match self {
            GeomError::Dimension(_) => "geom_dimension",
            GeomError::NonFinite => "geom_non_finite",
            GeomError::TooFewSamples { .. } => "geom_too_few_samples",
            GeomError::DegenerateTangent { .. } => "geom_degenerate_tangent",
            GeomError::SelfIntersection { .. } => "geom_self_intersection",
            GeomError::InvalidOrientation => "geom_orientation",
            GeomError::SphereGridMismatch => "geom_sphere_grid",
            GeomError::ZetaLength => "geom_zeta_length",
            GeomError::RGrid => "geom_r_grid",
        }
    }
}

/// One point of jet space: position, value, and gradient slot.
#[derive(Debug, Clone, PartialEq)]
pub struct JetPoint {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    /// `m x n`, row-major: `p[a*n + i]`.
    pub p: Vec<f64>,
}

/// Parameter grid of a sampled boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryGrid {
    /// `s_j = 2 pi j / N`, counterclockwise.
    Circle { samples: usize },
    Sphere(SphereGrid),
}

/// Sampled closed `(n-1)`-manifold in jet space: the object the fillability
/// test takes as input.
#[derive(Debug, Clone)]
pub struct JetBoundary {
    n: usize,
    m: usize,
    grid: BoundaryGrid,
    /// `[sample * n + i]`
    x: Vec<f64>,
    /// `[sample * m + a]`
    u: Vec<f64>,
    /// `[sample * m * n + a * n + i]` — the `A(s)` slot.
    p: Vec<f64>,
    derivs_cache: OnceLock<Arc<Derivatives>>,
}

/// Parameter-direction derivatives of all boundary data arrays; one entry
/// per direction (1 for curves, 2 for surfaces: theta then phi).
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub dx: Vec<Vec<f64>>,
    pub du: Vec<Vec<f64>>,
    pub dp: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy)]
pub struct IsotropyReport {
    /// `max |du/ds - A dx/ds|` over samples, components, directions.
    pub residual: f64,
    /// `max |du/ds| + max |A dx/ds|`, the natural scale of the two sides.
    pub scale: f64,
}

impl IsotropyReport {
    /// Residual relative to the data scale; equals the raw residual for
    /// O(1) data and is invariant under `u, A -> lambda u, lambda A`.
    pub fn normalized(&self) -> f64 {
        if self.scale > 1.0 {
            self.residual / self.scale
        } else {
            self.residual
        }
    }
}

impl JetBoundary {
    pub fn new(
        n: usize,
        m: usize,
        grid: BoundaryGrid,
        x: Vec<f64>,
        u: Vec<f64>,
        p: Vec<f64>,
    ) -> Result<Self, GeomError> {
        if !(n == 2 || n == 3) || m == 0 {
            return Err(GeomError::Dimension(format!("n={n} (must be 2 or 3), m={m} (must be >= 1)")));
        }
        let s = match &grid {
            BoundaryGrid::Circle { samples } => {
                if n != 2 {
                    return Err(GeomError::Dimension("circle grid requires n=2".into()));
                }
                if *samples < 16 {
                    return Err(GeomError::TooFewSamples { got: *samples, min: 16 });
                }
                *samples
            }
            BoundaryGrid::Sphere(g) => {
                if n != 3 {
                    return Err(GeomError::Dimension("sphere grid requires n=3".into()));
                }
                if g.n_theta < 8 || g.n_phi < 16 {
                    return Err(GeomError::TooFewSamples { got: g.n_theta.min(g.n_phi), min: 8 });
                }
                g.num_samples()
            }
        };
        if x.len() != s * n || u.len() != s * m || p.len() != s * m * n {
            return Err(GeomError::Dimension(format!(
                "expected x:{} u:{} A:{}, got x:{} u:{} A:{}",
                s * n,
                s * m,
                s * m * n,
                x.len(),
                u.len(),
                p.len()
            )));
        }
        if x.iter().chain(&u).chain(&p).any(|v| !v.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        let b = JetBoundary { n, m, grid, x, u, p, derivs_cache: OnceLock::new() };
        match &b.grid {
            BoundaryGrid::Circle { samples } => {
                // sample-resolution injectivity: no two coincident samples
                let s = *samples;
                for i in 0..s {
                    for j in i + 1..s {
                        let d2: f64 = (0..2).map(|k| (b.x[i * 2 + k] - b.x[j * 2 + k]).powi(2)).sum();
                        if d2 < 1e-24 {
                            return Err(GeomError::SelfIntersection { i, j });
                        }
                    }
                }
                let derivs = b.derivatives();
                for j in 0..s {
                    let t0 = derivs.dx[0][j * 2];
                    let t1 = derivs.dx[0][j * 2 + 1];
                    if (t0 * t0 + t1 * t1).sqrt() < 1e-12 {
                        return Err(GeomError::DegenerateTangent { sample: j });
                    }
                }
                if b.signed_area() <= 0.0 {
                    return Err(GeomError::InvalidOrientation);
                }
            }
            BoundaryGrid::Sphere(g) => {
                for it in 0..g.n_theta {
                    for ip in 0..g.n_phi {
                        let idx = g.index(it, ip);
                        let pt = g.point(it, ip);
                        for k in 0..3 {
                            if (b.x[idx * 3 + k] - pt[k]).abs() > 1e-9 {
                                return Err(GeomError::SphereGridMismatch);
                            }
                        }
                    }
                }
            }
        }
        Ok(b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn num_samples(&self) -> usize {
        match &self.grid {
            BoundaryGrid::Circle { samples } => *samples,
            BoundaryGrid::Sphere(g) => g.num_samples(),
        }
    }

    pub fn x_at(&self, s: usize) -> &[f64] {
        &self.x[s * self.n..(s + 1) * self.n]
    }

    pub fn u_at(&self, s: usize) -> &[f64] {
        &self.u[s * self.m..(s + 1) * self.m]
    }

    pub fn p_at(&self, s: usize) -> &[f64] {
        &self.p[s * self.m * self.n..(s + 1) * self.m * self.n]
    }

    pub fn x_raw(&self) -> &[f64] {
        &self.x
    }

    pub fn u_raw(&self) -> &[f64] {
        &self.u
    }

    pub fn p_raw(&self) -> &[f64] {
        &self.p
    }

    pub fn jet_point(&self, s: usize) -> JetPoint {
        JetPoint {
            x: self.x_at(s).to_vec(),
            u: self.u_at(s).to_vec(),
            p: self.p_at(s).to_vec(),
        }
    }

    /// Replace the gradient slot (used to build comparison lifts).
    pub fn with_p(&self, p: Vec<f64>) -> Result<Self, GeomError> {
        JetBoundary::new(self.n, self.m, self.grid.clone(), self.x.clone(), self.u.clone(), p)
    }

    /// Max spectral tail fraction of the data columns: a sampled-smoothness
    /// warning, not a proof of smoothness (which sampling cannot give).
    pub fn smoothness_tail(&self) -> f64 {
        match &self.grid {
            BoundaryGrid::Circle { samples } => {
                let s = *samples;
                let mut worst: f64 = 0.0;
                for c in 0..self.n {
                    let col: Vec<f64> = (0..s).map(|j| self.x[j * self.n + c]).collect();
                    worst = worst.max(spectral::tail_energy_fraction(&col));
                }
                for c in 0..self.m {
                    let col: Vec<f64> = (0..s).map(|j| self.u[j * self.m + c]).collect();
                    worst = worst.max(spectral::tail_energy_fraction(&col));
                }
                worst
            }
            BoundaryGrid::Sphere(_) => 0.0,
        }
    }

    fn sphere_basis(&self) -> Arc<SphericalBasis> {
        let BoundaryGrid::Sphere(g) = &self.grid else {
            panic!("sphere basis requested for a curve boundary");
        };
        shared_basis(g.n_theta, g.n_phi, data_band(g.n_theta, g.n_phi))
    }

    /// Tangential derivative of a scalar grid column along direction `dir`
    /// (0 = theta via the spectral basis, 1 = phi via FFT rows).
    fn sphere_col_derivative(&self, col: &[f64], dir: usize) -> Vec<f64> {
        let BoundaryGrid::Sphere(g) = &self.grid else { unreachable!() };
        if dir == 0 {
            self.sphere_basis().d_theta(col)
        } else {
            let mut out = vec![0.0; col.len()];
            for it in 0..g.n_theta {
                let row = &col[it * g.n_phi..(it + 1) * g.n_phi];
                let d = spectral::derivative(row);
                out[it * g.n_phi..(it + 1) * g.n_phi].copy_from_slice(&d);
            }
            out
        }
    }

    /// Parameter derivatives of every data column, computed once and cached.
    pub fn derivatives(&self) -> Arc<Derivatives> {
        self.derivs_cache
            .get_or_init(|| Arc::new(self.compute_derivatives()))
            .clone()
    }

    fn compute_derivatives(&self) -> Derivatives {
        match &self.grid {
            BoundaryGrid::Circle { samples } => {
                let s = *samples;
                let diff_cols = |data: &[f64], w: usize| -> Vec<f64> {
                    let mut out = vec![0.0; data.len()];
                    for c in 0..w {
                        let col: Vec<f64> = (0..s).map(|j| data[j * w + c]).collect();
                        let d = spectral::derivative(&col);
                        for j in 0..s {
                            out[j * w + c] = d[j];
                        }
                    }
                    out
                };
                Derivatives {
                    dx: vec![diff_cols(&self.x, self.n)],
                    du: vec![diff_cols(&self.u, self.m)],
                    dp: vec![diff_cols(&self.p, self.m * self.n)],
                }
            }
            BoundaryGrid::Sphere(g) => {
                let s = g.num_samples();
                let mut dx = vec![vec![0.0; self.x.len()]; 2];
                let mut du = vec![vec![0.0; self.u.len()]; 2];
                let mut dp = vec![vec![0.0; self.p.len()]; 2];
                // x is the canonical sphere: analytic tangents.
                for it in 0..g.n_theta {
                    for ip in 0..g.n_phi {
                        let idx = g.index(it, ip);
                        let tt = g.t_theta(it, ip);
                        let tp = g.t_phi(it, ip);
                        for k in 0..3 {
                            dx[0][idx * 3 + k] = tt[k];
                            dx[1][idx * 3 + k] = tp[k];
                        }
                    }
                }
                for dir in 0..2 {
                    for c in 0..self.m {
                        let col: Vec<f64> = (0..s).map(|j| self.u[j * self.m + c]).collect();
                        let d = self.sphere_col_derivative(&col, dir);
                        for j in 0..s {
                            du[dir][j * self.m + c] = d[j];
                        }
                    }
                    let w = self.m * self.n;
                    for c in 0..w {
                        let col: Vec<f64> = (0..s).map(|j| self.p[j * w + c]).collect();
                        let d = self.sphere_col_derivative(&col, dir);
                        for j in 0..s {
                            dp[dir][j * w + c] = d[j];
                        }
                    }
                }
                Derivatives { dx, du, dp }
            }
        }
    }

    /// Signed area enclosed by the curve (n = 2 only).
    pub fn signed_area(&self) -> f64 {
        assert_eq!(self.n, 2);
        let s = self.num_samples();
        let derivs = self.derivatives();
        let ds = 2.0 * std::f64::consts::PI / s as f64;
        let mut area = 0.0;
        for j in 0..s {
            let x1 = self.x[j * 2];
            let x2 = self.x[j * 2 + 1];
            let dx1 = derivs.dx[0][j * 2];
            let dx2 = derivs.dx[0][j * 2 + 1];
            area += 0.5 * (x1 * dx2 - x2 * dx1) * ds;
        }
        area
    }

    /// Max-norm isotropy residual `|du/ds - A dx/ds|` with its data scale.
    pub fn isotropy_report(&self) -> Result<IsotropyReport, GeomError> {
        let derivs = self.derivatives();
        let s = self.num_samples();
        let dirs = derivs.dx.len();
        let mut residual: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for dir in 0..dirs {
            for j in 0..s {
                let dxj = &derivs.dx[dir][j * self.n..(j + 1) * self.n];
                if dir == 0 && self.n == 2 {
                    let norm = (dxj[0] * dxj[0] + dxj[1] * dxj[1]).sqrt();
                    if norm < 1e-12 {
                        return Err(GeomError::DegenerateTangent { sample: j });
                    }
                }
                let a = self.p_at(j);
                for c in 0..self.m {
                    let duj = derivs.du[dir][j * self.m + c];
                    let adx: f64 = (0..self.n).map(|i| a[c * self.n + i] * dxj[i]).sum();
                    residual = residual.max((duj - adx).abs());
                    scale = scale.max(duj.abs() + adx.abs());
                }
            }
        }
        Ok(IsotropyReport { residual, scale })
    }

    /// The raw max-norm isotropy residual.
    pub fn isotropy_residual(&self) -> Result<f64, GeomError> {
        Ok(self.isotropy_report()?.residual)
    }

    /// Outward unit normal at each sample, flat `[sample * n + i]`.
    pub fn outward_normal(&self) -> Result<Vec<f64>, GeomError> {
        match &self.grid {
            BoundaryGrid::Circle { samples } => {
                let s = *samples;
                self.check_simple()?;
                let derivs = self.derivatives();
                let mut out = vec![0.0; s * 2];
                for j in 0..s {
                    let t1 = derivs.dx[0][j * 2];
                    let t2 = derivs.dx[0][j * 2 + 1];
                    let norm = (t1 * t1 + t2 * t2).sqrt();
                    if norm < 1e-12 {
                        return Err(GeomError::DegenerateTangent { sample: j });
                    }
                    // counterclockwise curve: rotate the tangent by -90 deg
                    out[j * 2] = t2 / norm;
                    out[j * 2 + 1] = -t1 / norm;
                }
                Ok(out)
            }
            BoundaryGrid::Sphere(g) => {
                let mut out = vec![0.0; g.num_samples() * 3];
                for it in 0..g.n_theta {
                    for ip in 0..g.n_phi {
                        let idx = g.index(it, ip);
                        let tt = g.t_theta(it, ip);
                        let tp = g.t_phi(it, ip);
                        let cross = [
                            tt[1] * tp[2] - tt[2] * tp[1],
                            tt[2] * tp[0] - tt[0] * tp[2],
                            tt[0] * tp[1] - tt[1] * tp[0],
                        ];
                        let norm = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
                        for k in 0..3 {
                            out[idx * 3 + k] = cross[k] / norm;
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    fn check_simple(&self) -> Result<(), GeomError> {
        let BoundaryGrid::Circle { samples } = &self.grid else {
            return Ok(());
        };
        let s = *samples;
        // segment-against-segment test on the sample polygon, skipping
        // adjacent edges
        let seg = |j: usize| {
            let k = (j + 1) % s;
            (
                [self.x[j * 2], self.x[j * 2 + 1]],
                [self.x[k * 2], self.x[k * 2 + 1]],
            )
        };
        for i in 0..s {
            for j in i + 2..s {
                if i == 0 && j == s - 1 {
                    continue;
                }
                let (a, b) = seg(i);
                let (c, d) = seg(j);
                if segments_cross(a, b, c, d) {
                    return Err(GeomError::SelfIntersection { i, j });
                }
            }
        }
        Ok(())
    }

    /// Quadrature weights for the induced surface measure; positive, and
    /// `sum w ≈ |boundary|`.
    pub fn surface_measure(&self) -> Result<Vec<f64>, GeomError> {
        match &self.grid {
            BoundaryGrid::Circle { samples } => {
                let s = *samples;
                let derivs = self.derivatives();
                let ds = 2.0 * std::f64::consts::PI / s as f64;
                let mut out = vec![0.0; s];
                for j in 0..s {
                    let t1 = derivs.dx[0][j * 2];
                    let t2 = derivs.dx[0][j * 2 + 1];
                    out[j] = (t1 * t1 + t2 * t2).sqrt() * ds;
                }
                Ok(out)
            }
            BoundaryGrid::Sphere(g) => {
                let mut out = vec![0.0; g.num_samples()];
                for it in 0..g.n_theta {
                    for ip in 0..g.n_phi {
                        out[g.index(it, ip)] = g.unit_weight(it);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Quadrature of `sum_s w(s) f(s)` over the boundary.
    pub fn integrate(&self, f: impl Fn(usize) -> f64) -> Result<f64, GeomError> {
        let w = self.surface_measure()?;
        Ok(w.iter().enumerate().map(|(j, wj)| wj * f(j)).sum())
    }
}

pub(crate) fn segments_cross(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    };
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// The cylinder `chi(r, s) = (x(s), u(s), A(s) + (1-r) zeta(s) N(s)^T)`
/// interpolating a boundary lift (at `r = 1`) and its normal-shifted
/// companion (at `r = 0`).
#[derive(Debug, Clone)]
pub struct CylinderSample {
    pub boundary: JetBoundary,
    /// `[sample * m + a]`
    pub zeta: Vec<f64>,
    pub normal: Vec<f64>,
    /// radial nodes including both endpoints `0` and `1`
    pub r_nodes: Vec<f64>,
    /// quadrature weights (zero at the endpoint nodes)
    pub r_weights: Vec<f64>,
    /// `[r][sample * m * n + a * n + i]`
    pub p_values: Vec<Vec<f64>>,
}

/// Build the cylinder with `n_r` radial nodes (two endpoints plus a
/// Gauss–Legendre interior rule).
pub fn build_cylinder(
    b: &JetBoundary,
    zeta: &[f64],
    n_r: usize,
) -> Result<CylinderSample, GeomError> {
    if n_r < 2 {
        return Err(GeomError::RGrid);
    }
    let s = b.num_samples();
    let m = b.m();
    let n = b.n();
    if zeta.len() != s * m {
        return Err(GeomError::ZetaLength);
    }
    let normal = b.outward_normal()?;
    let mut r_nodes = vec![0.0];
    let mut r_weights = vec![0.0];
    if n_r > 2 {
        let (nodes, weights) = crate::numerics::quad::gauss_legendre_on(0.0, 1.0, n_r - 2);
        r_nodes.extend(nodes);
        r_weights.extend(weights);
    }
    r_nodes.push(1.0);
    r_weights.push(0.0);
    let p_values = r_nodes
        .iter()
        .map(|&r| {
            let mut p = b.p_raw().to_vec();
            let f = 1.0 - r;
            for j in 0..s {
                for a in 0..m {
                    let z = zeta[j * m + a];
                    for i in 0..n {
                        p[j * m * n + a * n + i] += f * z * normal[j * n + i];
                    }
                }
            }
            p
        })
        .collect();
    Ok(CylinderSample {
        boundary: b.clone(),
        zeta: zeta.to_vec(),
        normal,
        r_nodes,
        r_weights,
        p_values,
    })
}

impl CylinderSample {
    /// The lift at `r = 0`: gradient slot `A + zeta N^T`.
    pub fn shifted_boundary(&self) -> Result<JetBoundary, GeomError> {
        self.boundary.with_p(self.p_values[0].clone())
    }

    /// Max over faces and samples of the contact-form pairing
    /// `|theta^a(d chi / d param)|`; zero (to quadrature accuracy) when the
    /// underlying boundary is isotropic.
    pub fn theta_pullback_max(&self) -> f64 {
        let b = &self.boundary;
        let derivs = b.derivatives();
        let s = b.num_samples();
        let (n, m) = (b.n(), b.m());
        let mut worst: f64 = 0.0;
        for p_face in &self.p_values {
            for dir in 0..derivs.dx.len() {
                for j in 0..s {
                    for a in 0..m {
                        let du = derivs.du[dir][j * m + a];
                        let pdx: f64 = (0..n)
                            .map(|i| p_face[j * m * n + a * n + i] * derivs.dx[dir][j * n + i])
                            .sum();
                        worst = worst.max((du - pdx).abs());
                    }
                }
            }
        }
        // the radial direction contributes exactly zero: x and u are
        // constant in r and theta has no dp terms
        worst
    }
}

#[cfg(test)]
pub(crate) mod tests;
