//! Boundaries of holomorphic disks in `C^m`, via the integrable extension
//! to the harmonic jet system.
//!
//! A closed curve `z(s)` in `C^m` with an embedded graph-coordinate
//! projection is tested against holomorphic moment conditions
//! `∮ (z^g)^k dz^a` and `∮ (z^g)^k z^a dz^g`, lifted to jet-space boundary
//! data through
//!
//! `x = (Re z^g, -Im z^g)`, `p^a = (Re z^a, Im z^a)`,
//! `u^a(s) = ∫_0^s p^a · dx` (periodic exactly when `Re ∮ z^a dz^g = 0`),
//!
//! and filled. The reconstructed disk is `f^a = ∂V^a/∂x1 + i ∂V^a/∂x2`,
//! a holomorphic function of `w = x1 - i x2`; its Cauchy–Riemann residual
//! `∂f/∂ w̄ = (f_x1 - i f_x2)/2` is measured by independent numerical
//! differentiation rather than assumed.

use crate::extcalc::upsilon::{verify_upsilon, UniPoly, UpsilonReport};
use crate::extcalc::{ExtError, Poly};
use crate::fill::{check, Extension, FillError, FillOptions, FillabilityReport};
use crate::jetgeom::{segments_cross, BoundaryGrid, GeomError, JetBoundary};
use crate::numerics::diffmat::{differentiation_matrix, matvec};
use crate::numerics::quad::chebyshev_lobatto;
use crate::numerics::spectral;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[cfg(test)]
mod tests;

#[derive(Debug, Error)]
pub enum HoloError {
    #[error("invalid loop data: {0}")]
    BadLoop(String),
    #[error("no coordinate projects to an embedded degree ±1 loop")]
    NoGraphCoordinate,
    #[error("lift is not periodic in component {component}: moment Re ∮ z^a dz^g = {moment:e}")]
    PeriodicityViolated { component: usize, moment: f64 },
    #[error(transparent)]
    Fill(#[from] FillError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Symbolic(#[from] ExtError),
}

impl HoloError {
    pub fn code(&self) -> &'static str {
        match self {
            HoloError::BadLoop(_) => "holo_bad_loop",
            HoloError::NoGraphCoordinate => "holo_no_graph_coordinate",
            HoloError::PeriodicityViolated { .. } => "holo_periodicity",
            HoloError::Fill(e) => e.code(),
            HoloError::Geometry(e) => e.code(),
            HoloError::Symbolic(e) => e.code(),
        }
    }
}

/// Uniformly sampled closed curve in `C^m` with a designated graph
/// coordinate.
#[derive(Debug, Clone)]
pub struct ComplexLoop {
    pub m: usize,
    pub samples: usize,
    /// `z[sample * m + a]`
    pub z: Vec<Complex64>,
    /// 1-based index of the graph coordinate.
    pub graph_coord: usize,
}

impl ComplexLoop {
    /// Validate and wrap loop data. With `graph_coord = None` the
    /// coordinates are tried in the order `m, m-1, ..., 1` and the first
    /// embedded, winding ±1 projection wins.
    pub fn new(
        m: usize,
        samples: usize,
        z: Vec<Complex64>,
        graph_coord: Option<usize>,
    ) -> Result<Self, HoloError> {
        if m < 2 {
            return Err(HoloError::BadLoop("need m >= 2 (one graph coordinate plus data)".into()));
        }
        if samples < 16 || z.len() != samples * m {
            return Err(HoloError::BadLoop(format!(
                "expected {} = {samples} x {m} entries, got {}",
                samples * m,
                z.len()
            )));
        }
        if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(HoloError::BadLoop("non-finite entries".into()));
        }
        let candidate = ComplexLoop { m, samples, z, graph_coord: m };
        match graph_coord {
            Some(g) => {
                if g == 0 || g > m {
                    return Err(HoloError::BadLoop(format!("graph coordinate {g} out of range")));
                }
                if !candidate.projection_ok(g) {
                    return Err(HoloError::NoGraphCoordinate);
                }
                Ok(ComplexLoop { graph_coord: g, ..candidate })
            }
            None => {
                for g in (1..=m).rev() {
                    if candidate.projection_ok(g) {
                        return Ok(ComplexLoop { graph_coord: g, ..candidate });
                    }
                }
                Err(HoloError::NoGraphCoordinate)
            }
        }
    }

    pub fn component(&self, a: usize) -> Vec<Complex64> {
        (0..self.samples).map(|j| self.z[j * self.m + a - 1]).collect()
    }

    /// Embeddedness (sample level) and winding ±1 of a coordinate
    /// projection.
    fn projection_ok(&self, g: usize) -> bool {
        let w = self.component(g);
        let n = self.samples;
        // distinct samples
        for i in 0..n {
            for j in i + 1..n {
                if (w[i] - w[j]).norm() < 1e-12 {
                    return false;
                }
            }
        }
        // no crossing edges
        let pt = |k: usize| [w[k % n].re, w[k % n].im];
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_cross(pt(i), pt(i + 1), pt(j), pt(j + 1)) {
                    return false;
                }
            }
        }
        // winding about the centroid
        let c = w.iter().sum::<Complex64>() / n as f64;
        let mut total = 0.0;
        for i in 0..n {
            let a = w[i] - c;
            let b = w[(i + 1) % n] - c;
            total += (b * a.conj()).arg();
        }
        let winding = total / (2.0 * PI);
        (winding.abs() - 1.0).abs() < 0.1
    }
}

/// One monomial holomorphic 1-form of the moment basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentForm {
    /// `(z^g)^k dz^a`
    PowDz { k: usize, a: usize },
    /// `(z^g)^k z^a dz^g`, `a != g`
    PowZaDzg { k: usize, a: usize },
}

impl std::fmt::Display for MomentForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MomentForm::PowDz { k, a } => write!(f, "(z^g)^{k} dz^{a}"),
            MomentForm::PowZaDzg { k, a } => write!(f, "(z^g)^{k} z^{a} dz^g"),
        }
    }
}

/// The moment basis for a given loop shape: `(z^g)^k dz^a` for all
/// components and `(z^g)^k z^a dz^g` for the non-graph components.
pub fn moment_basis(m: usize, graph: usize, k_max: usize) -> Vec<MomentForm> {
    let mut out = Vec::new();
    for a in 1..=m {
        for k in 0..=k_max {
            out.push(MomentForm::PowDz { k, a });
        }
    }
    for a in 1..=m {
        if a != graph {
            for k in 0..=k_max {
                out.push(MomentForm::PowZaDzg { k, a });
            }
        }
    }
    out
}

/// Spectral quadrature of `∮ form` over the loop in its given orientation.
pub fn holo_moment(lp: &ComplexLoop, form: MomentForm) -> Complex64 {
    let n = lp.samples;
    let g = lp.graph_coord;
    let zg = lp.component(g);
    let derivative = |vals: &[Complex64]| -> Vec<Complex64> {
        let re: Vec<f64> = vals.iter().map(|v| v.re).collect();
        let im: Vec<f64> = vals.iter().map(|v| v.im).collect();
        let dre = spectral::derivative(&re);
        let dim = spectral::derivative(&im);
        (0..vals.len()).map(|j| Complex64::new(dre[j], dim[j])).collect()
    };
    let ds = 2.0 * PI / n as f64;
    match form {
        MomentForm::PowDz { k, a } => {
            let za = lp.component(a);
            let dza = derivative(&za);
            (0..n)
                .map(|j| zg[j].powu(k as u32) * dza[j] * ds)
                .sum()
        }
        MomentForm::PowZaDzg { k, a } => {
            let za = lp.component(a);
            let dzg = derivative(&zg);
            (0..n)
                .map(|j| zg[j].powu(k as u32) * za[j] * dzg[j] * ds)
                .sum()
        }
    }
}

/// All basis moments with labels.
pub fn moment_spectrum(lp: &ComplexLoop, k_max: usize) -> Vec<(MomentForm, Complex64)> {
    moment_basis(lp.m, lp.graph_coord, k_max)
        .into_iter()
        .map(|f| (f, holo_moment(lp, f)))
        .collect()
}

/// Result of lifting a loop to jet-space boundary data.
#[derive(Debug, Clone)]
pub struct LiftedLoop {
    pub boundary: JetBoundary,
    /// true when the sample order was reversed to make the base curve
    /// counterclockwise
    pub reversed: bool,
    /// reordered loop matching the boundary's sample indexing
    pub reordered: ComplexLoop,
    /// non-graph component indices (1-based) in boundary target order
    pub targets: Vec<usize>,
}

/// Lift: `x = (Re z^g, -Im z^g)`, `p^a = (Re z^a, Im z^a)`, `u` by
/// cumulative spectral integration with `u(0) = 0`.
pub fn lift(lp: &ComplexLoop) -> Result<LiftedLoop, HoloError> {
    let n = lp.samples;
    let m = lp.m;
    let g = lp.graph_coord;

    // orientation of the base curve x = (Re z^g, -Im z^g)
    let zg = lp.component(g);
    let area = {
        let x1: Vec<f64> = zg.iter().map(|v| v.re).collect();
        let x2: Vec<f64> = zg.iter().map(|v| -v.im).collect();
        let dx2 = spectral::derivative(&x2);
        let ds = 2.0 * PI / n as f64;
        (0..n).map(|j| x1[j] * dx2[j] * ds).sum::<f64>()
    };
    let reversed = area < 0.0;
    let order: Vec<usize> = if reversed {
        (0..n).map(|j| (n - j) % n).collect()
    } else {
        (0..n).collect()
    };
    let z_reordered: Vec<Complex64> = order
        .iter()
        .flat_map(|&src| (0..m).map(move |a| (src, a)))
        .map(|(src, a)| lp.z[src * m + a])
        .collect();
    let reordered = ComplexLoop { m, samples: n, z: z_reordered, graph_coord: g };

    let targets: Vec<usize> = (1..=m).filter(|&a| a != g).collect();
    let mt = targets.len();
    let zg = reordered.component(g);
    let mut x = vec![0.0; n * 2];
    for j in 0..n {
        x[j * 2] = zg[j].re;
        x[j * 2 + 1] = -zg[j].im;
    }
    let x1col: Vec<f64> = (0..n).map(|j| x[j * 2]).collect();
    let x2col: Vec<f64> = (0..n).map(|j| x[j * 2 + 1]).collect();
    let dx1 = spectral::derivative(&x1col);
    let dx2 = spectral::derivative(&x2col);

    let mut u = vec![0.0; n * mt];
    let mut p = vec![0.0; n * mt * 2];
    for (t_idx, &a) in targets.iter().enumerate() {
        let za = reordered.component(a);
        let w: Vec<f64> = (0..n)
            .map(|j| za[j].re * dx1[j] + za[j].im * dx2[j])
            .collect();
        let mean = spectral::mean(&w);
        // |u(2 pi) - u(0)| = 2 pi |mean|; this is exactly the periodicity
        // moment Re ∮ z^a dz^g of the loop
        let scale = 1.0 + za.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if mean.abs() * 2.0 * PI > 1e-8 * scale {
            return Err(HoloError::PeriodicityViolated {
                component: a,
                moment: mean * 2.0 * PI,
            });
        }
        let w0: Vec<f64> = w.iter().map(|v| v - mean).collect();
        let ua = spectral::antiderivative_zero_start(&w0);
        for j in 0..n {
            u[j * mt + t_idx] = ua[j];
            p[j * mt * 2 + t_idx * 2] = za[j].re;
            p[j * mt * 2 + t_idx * 2 + 1] = za[j].im;
        }
    }
    let boundary = JetBoundary::new(2, mt, BoundaryGrid::Circle { samples: n }, x, u, p)?;
    Ok(LiftedLoop { boundary, reversed, reordered, targets })
}

/// Reconstructed holomorphic disk with diagnostics.
#[derive(Debug)]
pub struct HoloFill {
    pub report: FillabilityReport,
    pub reversed: bool,
    /// radial nodes of the reconstruction annulus (spectral path)
    pub r_nodes: Vec<f64>,
    pub n_phi: usize,
    /// `f[target][ir * n_phi + ip]`
    pub f: Vec<Vec<Complex64>>,
    /// sup of `|∂f/∂ w̄|` over the grid, by numerical differentiation
    pub cr_residual: f64,
    /// sup over samples of `|f|_boundary - z^a|`
    pub boundary_trace_error: f64,
    pub targets: Vec<usize>,
}

/// Lift, check, fill, and reconstruct `f^a(w)`.
pub fn fill_holo(lp: &ComplexLoop, opts: &FillOptions) -> Result<HoloFill, HoloError> {
    let lifted = lift(lp)?;
    let report = check(&lifted.boundary, opts)?;
    let b = &lifted.boundary;
    let n = b.num_samples();
    let mt = lifted.targets.len();

    // boundary trace of f from the filled gradient
    let mut trace_err: f64 = 0.0;
    for (t_idx, &a) in lifted.targets.iter().enumerate() {
        let za = lifted.reordered.component(a);
        for j in 0..n {
            let g1 = report.fill.gradient_trace[j * mt * 2 + t_idx * 2];
            let g2 = report.fill.gradient_trace[j * mt * 2 + t_idx * 2 + 1];
            let fb = Complex64::new(g1, g2);
            trace_err = trace_err.max((fb - za[j]).norm());
        }
    }

    // field reconstruction on an annulus (spectral disk path only)
    let (r_nodes, n_phi, f_fields, cr) = match &report.fill.extension {
        Extension::Disk(ext) => reconstruct_disk_field(ext, n),
        _ => (Vec::new(), 0, Vec::new(), f64::NAN),
    };

    Ok(HoloFill {
        report,
        reversed: lifted.reversed,
        r_nodes,
        n_phi,
        f: f_fields,
        cr_residual: cr,
        boundary_trace_error: trace_err,
        targets: lifted.targets,
    })
}

/// Values of the extension on the annulus `r in [r_min, 1]`, differentiated
/// numerically (Chebyshev collocation radially, Fourier in the angle) to
/// produce `f = V_x1 + i V_x2` and its Cauchy–Riemann residual.
fn reconstruct_disk_field(
    ext: &crate::dirichlet::DiskExtension,
    n_phi: usize,
) -> (Vec<f64>, usize, Vec<Vec<Complex64>>, f64) {
    let trace_n = ext.trace.samples;
    let n_r = trace_n / 2 + 9;
    let r_nodes = chebyshev_lobatto(0.05, 1.0, n_r);
    let dr = differentiation_matrix(&r_nodes);
    let m = ext.components();

    // V on the polar grid, one inverse FFT per radius
    let mut cr_max: f64 = 0.0;
    let mut f_fields = Vec::with_capacity(m);
    for a in 0..m {
        let coeffs = &ext.trace.coeffs[a];
        let mut v = vec![0.0; n_r * n_phi];
        for (ir, &r) in r_nodes.iter().enumerate() {
            let scaled: Vec<Complex64> = coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let k = spectral::wavenumber(j, trace_n).unsigned_abs() as i32;
                    c * r.powi(k)
                })
                .collect();
            // resample to n_phi if needed (trace_n == n_phi in practice)
            let vals = spectral::fourier_values(&scaled);
            debug_assert_eq!(vals.len(), n_phi);
            v[ir * n_phi..(ir + 1) * n_phi].copy_from_slice(&vals);
        }
        let (f, cr) = complex_gradient_field(&v, &r_nodes, &dr, n_phi);
        cr_max = cr_max.max(cr);
        f_fields.push(f);
    }
    (r_nodes, n_phi, f_fields, cr_max)
}

/// Differentiate a real scalar field on the polar grid and form
/// `f = V_x1 + i V_x2`; then differentiate `f` again and return the max
/// Cauchy–Riemann residual `|(f_x1 - i f_x2)/2|`.
fn complex_gradient_field(
    v: &[f64],
    r_nodes: &[f64],
    dr: &[Vec<f64>],
    n_phi: usize,
) -> (Vec<Complex64>, f64) {
    let n_r = r_nodes.len();
    let cart = |field_r: &[f64], field_phi: &[f64], ir: usize, ip: usize| {
        let phi = 2.0 * PI * ip as f64 / n_phi as f64;
        let (s, c) = phi.sin_cos();
        let r = r_nodes[ir];
        let fr = field_r[ir * n_phi + ip];
        let fp = field_phi[ir * n_phi + ip] / r;
        [c * fr - s * fp, s * fr + c * fp]
    };
    let diff_polar = |field: &[f64]| {
        // radial: Chebyshev collocation along columns
        let mut d_r = vec![0.0; n_r * n_phi];
        for ip in 0..n_phi {
            let col: Vec<f64> = (0..n_r).map(|ir| field[ir * n_phi + ip]).collect();
            let dcol = matvec(dr, &col);
            for ir in 0..n_r {
                d_r[ir * n_phi + ip] = dcol[ir];
            }
        }
        // angular: spectral along rows
        let mut d_phi = vec![0.0; n_r * n_phi];
        for ir in 0..n_r {
            let row = &field[ir * n_phi..(ir + 1) * n_phi];
            let drow = spectral::derivative(row);
            d_phi[ir * n_phi..(ir + 1) * n_phi].copy_from_slice(&drow);
        }
        (d_r, d_phi)
    };

    let (v_r, v_phi) = diff_polar(v);
    let mut f = vec![Complex64::new(0.0, 0.0); n_r * n_phi];
    let mut f_re = vec![0.0; n_r * n_phi];
    let mut f_im = vec![0.0; n_r * n_phi];
    for ir in 0..n_r {
        for ip in 0..n_phi {
            let g = cart(&v_r, &v_phi, ir, ip);
            f[ir * n_phi + ip] = Complex64::new(g[0], g[1]);
            f_re[ir * n_phi + ip] = g[0];
            f_im[ir * n_phi + ip] = g[1];
        }
    }
    // second differentiation for the CR residual
    let (re_r, re_phi) = diff_polar(&f_re);
    let (im_r, im_phi) = diff_polar(&f_im);
    let mut cr_max: f64 = 0.0;
    for ir in 0..n_r {
        for ip in 0..n_phi {
            let gre = cart(&re_r, &re_phi, ir, ip);
            let gim = cart(&im_r, &im_phi, ir, ip);
            // d/d w̄ = (d_x1 - i d_x2)/2 applied to f = f_re + i f_im
            let fx1 = Complex64::new(gre[0], gim[0]);
            let fx2 = Complex64::new(gre[1], gim[1]);
            let cr = 0.5 * (fx1 - Complex64::new(0.0, 1.0) * fx2).norm();
            cr_max = cr_max.max(cr);
        }
    }
    (f, cr_max)
}

/// Split a holomorphic polynomial `F = K + iH` of the graph coordinate into
/// its conservation-law pair and verify the symbolic Upsilon identities;
/// also exposes the boundary conjugation multiplier.
pub struct ConjugateLaw {
    pub k_poly: Poly,
    pub h_poly: Poly,
    pub report: UpsilonReport,
}

pub fn conjugate_law(m: usize, f: &UniPoly) -> Result<ConjugateLaw, HoloError> {
    let (k_poly, h_poly) = crate::extcalc::upsilon::conjugate_pair(m, f)?;
    let mut laws = vec![UniPoly::constant(crate::extcalc::scalar::s_int(0)); m - 1];
    laws[0] = f.clone();
    let report = verify_upsilon(m, &laws)?;
    Ok(ConjugateLaw { k_poly, h_poly, report })
}

/// Harmonic-conjugate trace operator on the circle in the boundary
/// parameterization: Fourier multiplier `-i sgn(k)`, zero on the mean.
/// Maps samples of `H` on `x(s) = (cos s, sin s)` to samples of `K` up to
/// the lost constant.
pub fn conjugate_trace(h_samples: &[f64]) -> Vec<f64> {
    let n = h_samples.len();
    let mut coeffs = spectral::fourier_coeffs(h_samples);
    for (j, c) in coeffs.iter_mut().enumerate() {
        let k = spectral::wavenumber(j, n);
        let mult = match k.cmp(&0) {
            std::cmp::Ordering::Greater => Complex64::new(0.0, -1.0),
            std::cmp::Ordering::Less => Complex64::new(0.0, 1.0),
            std::cmp::Ordering::Equal => Complex64::new(0.0, 0.0),
        };
        *c *= mult;
    }
    spectral::fourier_values(&coeffs)
}
