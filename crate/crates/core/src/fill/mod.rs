//! The fillability decision procedure and constructor: does sampled
//! boundary data in jet space bound the 1-jet graph of a harmonic map?
//!
//! Two independent routes answer the question and must agree:
//! - the moment route: every harmonic test polynomial pairs to (nearly)
//!   zero against the boundary;
//! - the construction route: solve the Dirichlet problem with the value
//!   trace and measure the normal defect
//!   `zeta = (A - grad V) · N`, which vanishes exactly on fillable data.
//!
//! The two are tied by the identity `mu(H) = ∮ H zeta dS` (for this sign
//! convention of `zeta`), reported as a per-test pairing diagnostic.

pub mod generate;

use crate::conslaw::{
    self, harmonic_basis, moment_report, HarmonicTest, MomentReport, Tolerances, Verdict,
};
use crate::dirichlet::{
    ball::{ball_basis, dtn_ball, solve_ball, BallExtension, BallTrace},
    fd::{normal_derivative_fd, solve_fd, FdSolution},
    solve_disk, DirichletError, DiskExtension, DiskTrace,
};
use crate::jetgeom::{BoundaryGrid, GeomError, IsotropyReport, JetBoundary};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(test)]
mod tests;

#[derive(Debug, Error)]
pub enum FillError {
    #[error("boundary is not isotropic: residual {residual:e} >= tolerance {tol:e}")]
    NotIsotropic { residual: f64, tol: f64 },
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Dirichlet(#[from] DirichletError),
    #[error(transparent)]
    Conslaw(#[from] conslaw::ConslawError),
}

impl FillError {
    pub fn code(&self) -> &'static str {
        match self {
            FillError::NotIsotropic { .. } => "fill_not_isotropic",
            FillError::BadParams(_) => "fill_bad_params",
            FillError::Geometry(e) => e.code(),
            FillError::Dirichlet(e) => e.code(),
            FillError::Conslaw(e) => e.code(),
        }
    }
}

/// Which Dirichlet realization produced the extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolverKind {
    #[serde(rename = "spectral_disk")]
    SpectralDisk,
    #[serde(rename = "spectral_ball")]
    SpectralBall,
    #[serde(rename = "finite_difference")]
    FiniteDifference,
}

/// The harmonic extension, kept for evaluation and export.
#[derive(Debug, Clone)]
pub enum Extension {
    Disk(DiskExtension),
    Ball(BallExtension),
    Fd(FdSolution),
}

/// Options for [`fill`] and [`check`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FillOptions {
    pub tol_iso: f64,
    pub tol_mom: f64,
    pub tol_zeta: f64,
    /// Basis size: max plane degree K (n = 2) or max spherical degree L
    /// (n = 3). `None` picks 16 / 8.
    pub basis: Option<usize>,
    /// Grid spacing for the finite-difference path.
    pub grid_h: f64,
}

impl Default for FillOptions {
    fn default() -> Self {
        FillOptions { tol_iso: 1e-7, tol_mom: 1e-6, tol_zeta: 1e-6, basis: None, grid_h: 1.0 / 128.0 }
    }
}

impl FillOptions {
    pub fn basis_size(&self, n: usize) -> usize {
        self.basis.unwrap_or(if n == 2 { 16 } else { 8 })
    }
}

/// The filling candidate `J^1(V)` restricted to the boundary, and the
/// defect separating it from the prescribed data.
#[derive(Debug)]
pub struct FillResult {
    pub solver: SolverKind,
    pub extension: Extension,
    /// `grad V` at the boundary samples, `[sample * m * n + a * n + i]`.
    pub gradient_trace: Vec<f64>,
    /// `zeta = (A - grad V) · N`, `[sample * m + a]`.
    pub zeta: Vec<f64>,
    pub zeta_sup: f64,
    /// `sqrt( ∮ |zeta|^2 dS )`
    pub zeta_l2: f64,
    /// max tangential component of `A - grad V`; implied small by isotropy
    /// but measured, not assumed.
    pub tangential_residual: f64,
    /// max defect of the reconstructed value trace against `u` (projection
    /// or interpolation error of the solver; 0 for the disk path).
    pub value_trace_error: f64,
    pub isotropy: IsotropyReport,
}

/// Solve the Dirichlet problem for the boundary's value trace and measure
/// the defect field. Rejects boundaries whose isotropy residual exceeds
/// `opts.tol_iso`.
pub fn fill(b: &JetBoundary, opts: &FillOptions) -> Result<FillResult, FillError> {
    let iso = b.isotropy_report()?;
    if !(iso.normalized() < opts.tol_iso) {
        return Err(FillError::NotIsotropic { residual: iso.normalized(), tol: opts.tol_iso });
    }
    fill_unchecked(b, opts, iso)
}

fn is_canonical_circle(b: &JetBoundary) -> bool {
    let BoundaryGrid::Circle { samples } = b.grid() else {
        return false;
    };
    let n_samp = *samples;
    (0..n_samp).all(|j| {
        let s = 2.0 * std::f64::consts::PI * j as f64 / n_samp as f64;
        let x = b.x_at(j);
        (x[0] - s.cos()).abs() < 1e-9 && (x[1] - s.sin()).abs() < 1e-9
    })
}

fn fill_unchecked(
    b: &JetBoundary,
    opts: &FillOptions,
    iso: IsotropyReport,
) -> Result<FillResult, FillError> {
    let (n, m) = (b.n(), b.m());
    let s = b.num_samples();
    let normals = b.outward_normal()?;
    let weights = b.surface_measure()?;

    let (solver, extension, gradient_trace, value_trace_error) = match b.grid() {
        BoundaryGrid::Sphere(g) => {
            let basis = ball_basis(g.n_theta, g.n_phi, opts.basis_size(3))?;
            let trace = BallTrace::from_samples(b.u_raw(), m, basis)?;
            let value_err = trace.projection_residual(b.u_raw());
            let ext = solve_ball(&trace);
            let mut grad = vec![0.0; s * m * n];
            for a in 0..m {
                let g_a = ext.boundary_gradient(a);
                for j in 0..s {
                    grad[j * m * n + a * n..j * m * n + (a + 1) * n]
                        .copy_from_slice(&g_a[j * 3..j * 3 + 3]);
                }
            }
            (SolverKind::SpectralBall, Extension::Ball(ext), grad, value_err)
        }
        BoundaryGrid::Circle { .. } if is_canonical_circle(b) => {
            let trace = DiskTrace::from_samples(b.u_raw(), m)?;
            let ext = solve_disk(&trace);
            let mut grad = vec![0.0; s * m * n];
            for a in 0..m {
                let g_a = ext.boundary_gradient(a);
                for j in 0..s {
                    grad[j * m * n + a * n..j * m * n + (a + 1) * n]
                        .copy_from_slice(&g_a[j * 2..j * 2 + 2]);
                }
            }
            (SolverKind::SpectralDisk, Extension::Disk(ext), grad, 0.0)
        }
        BoundaryGrid::Circle { .. } => {
            let sol = solve_fd(b, opts.grid_h)?;
            let dnu = normal_derivative_fd(&sol, b)?;
            // tangential part of grad V on the boundary equals the
            // tangential derivative of the (shared) value trace
            let derivs = b.derivatives();
            let mut grad = vec![0.0; s * m * n];
            for j in 0..s {
                let t = &derivs.dx[0][j * 2..j * 2 + 2];
                let tn = (t[0] * t[0] + t[1] * t[1]).sqrt();
                let that = [t[0] / tn, t[1] / tn];
                let nrm = &normals[j * 2..j * 2 + 2];
                for a in 0..m {
                    let du_ds = derivs.du[0][j * m + a];
                    let tang = du_ds / tn;
                    for i in 0..2 {
                        grad[j * m * n + a * n + i] = dnu[j * m + a] * nrm[i] + tang * that[i];
                    }
                }
            }
            (SolverKind::FiniteDifference, Extension::Fd(sol), grad, 0.0)
        }
    };

    let mut zeta = vec![0.0; s * m];
    let mut zeta_sup: f64 = 0.0;
    let mut zeta_l2_sq = 0.0;
    let mut tangential_residual: f64 = 0.0;
    let derivs = b.derivatives();
    for j in 0..s {
        let nrm = &normals[j * n..(j + 1) * n];
        for a in 0..m {
            let defect: Vec<f64> = (0..n)
                .map(|i| b.p_at(j)[a * n + i] - gradient_trace[j * m * n + a * n + i])
                .collect();
            let zn: f64 = (0..n).map(|i| defect[i] * nrm[i]).sum();
            zeta[j * m + a] = zn;
            zeta_sup = zeta_sup.max(zn.abs());
            zeta_l2_sq += weights[j] * zn * zn;
            for dx_dir in derivs.dx.iter() {
                let t = &dx_dir[j * n..(j + 1) * n];
                let tn: f64 = t.iter().map(|v| v * v).sum::<f64>().sqrt();
                if tn > 1e-12 {
                    let td: f64 = (0..n).map(|i| defect[i] * t[i] / tn).sum();
                    tangential_residual = tangential_residual.max(td.abs());
                }
            }
        }
    }

    Ok(FillResult {
        solver,
        extension,
        gradient_trace,
        zeta,
        zeta_sup,
        zeta_l2: zeta_l2_sq.sqrt(),
        tangential_residual,
        value_trace_error,
        isotropy: iso,
    })
}

/// Per-test pairing diagnostic: the measured moment against the defect
/// prediction `∮ H zeta dS`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairingEntry {
    pub label: String,
    pub target: usize,
    pub measured: f64,
    pub predicted: f64,
}

/// Combined verdict of the moment route and the defect route.
#[derive(Debug, Serialize)]
pub struct FillabilityReport {
    pub solver: SolverKind,
    pub moments: MomentReport,
    pub zeta_sup: f64,
    pub zeta_l2: f64,
    pub zeta_normalized: f64,
    /// Accuracy floor of the defect route (nonzero for the FD solver).
    pub zeta_floor: f64,
    pub zeta_verdict: Verdict,
    pub tangential_residual: f64,
    /// True when both routes produced the same verdict.
    pub agreement: bool,
    pub verdict: Verdict,
    pub pairing: Vec<PairingEntry>,
    /// Max relative pairing error over tests with a visible moment.
    pub pairing_max_rel_err: f64,
    pub options: FillOptions,
    #[serde(skip)]
    pub fill: FillResult,
}

/// Run both routes and combine. Boundaries that fail isotropy beyond the
/// gray band are rejected as invalid input rather than classified.
pub fn check(b: &JetBoundary, opts: &FillOptions) -> Result<FillabilityReport, FillError> {
    let iso = b.isotropy_report()?;
    if !(iso.normalized() < 10.0 * opts.tol_iso) {
        return Err(FillError::NotIsotropic { residual: iso.normalized(), tol: 10.0 * opts.tol_iso });
    }
    let basis = harmonic_basis(b.n(), b.m(), opts.basis_size(b.n()))?;
    let moments = moment_report(
        b,
        &basis,
        Tolerances { tol_iso: opts.tol_iso, tol_mom: opts.tol_mom },
    )?;
    let fill_res = fill_unchecked(b, opts, iso)?;

    let sup_a = b.p_raw().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let zeta_normalized = fill_res.zeta_sup / (1.0 + sup_a);
    // the FD normal derivative is O(h^2) accurate; the defect route cannot
    // claim anything below its own floor
    let zeta_floor = match fill_res.solver {
        SolverKind::FiniteDifference => 20.0 * opts.grid_h * opts.grid_h,
        _ => 0.0,
    };
    let tol_zeta_eff = opts.tol_zeta.max(zeta_floor);
    let zeta_verdict = if zeta_normalized < tol_zeta_eff {
        Verdict::Fillable
    } else if zeta_normalized < 10.0 * tol_zeta_eff {
        Verdict::Indeterminate
    } else {
        Verdict::NotFillable
    };

    let pairing = pairing_diagnostic(b, &basis, &fill_res)?;
    let mut pairing_max_rel_err: f64 = 0.0;
    {
        // only tests whose moment stands clear of quadrature noise say
        // anything about the pairing
        let visible = 1e-10 * (1.0 + sup_a) * moments.boundary_length;
        for (entry, p) in moments.entries.iter().zip(&pairing) {
            if entry.moment.value.abs() > visible {
                let rel = (p.measured - p.predicted).abs() / entry.moment.value.abs();
                pairing_max_rel_err = pairing_max_rel_err.max(rel);
            }
        }
    }

    let agreement = moments.verdict == zeta_verdict;
    let verdict = if agreement { moments.verdict } else { Verdict::Indeterminate };
    Ok(FillabilityReport {
        solver: fill_res.solver,
        moments,
        zeta_sup: fill_res.zeta_sup,
        zeta_l2: fill_res.zeta_l2,
        zeta_normalized,
        zeta_floor,
        zeta_verdict,
        tangential_residual: fill_res.tangential_residual,
        agreement,
        verdict,
        pairing,
        pairing_max_rel_err,
        options: *opts,
        fill: fill_res,
    })
}

fn pairing_diagnostic(
    b: &JetBoundary,
    basis: &[HarmonicTest],
    fill_res: &FillResult,
) -> Result<Vec<PairingEntry>, FillError> {
    let weights = b.surface_measure()?;
    let m = b.m();
    let mut out = Vec::with_capacity(basis.len());
    for test in basis {
        let measured = conslaw::eval_moment(b, test)?.value;
        let a = test.target();
        let predicted: f64 = (0..b.num_samples())
            .map(|j| weights[j] * test.eval(b.x_at(j)) * fill_res.zeta[j * m + a])
            .sum();
        out.push(PairingEntry {
            label: test.label().to_string(),
            target: a,
            measured,
            predicted,
        });
    }
    Ok(out)
}

/// Predicted Dirichlet-to-Neumann data of the value trace; used by tests to
/// cross-check the defect against the spectral multiplier directly.
pub fn dtn_of_trace(b: &JetBoundary, opts: &FillOptions) -> Result<Vec<f64>, FillError> {
    match b.grid() {
        BoundaryGrid::Sphere(g) => {
            let basis = ball_basis(g.n_theta, g.n_phi, opts.basis_size(3))?;
            let trace = BallTrace::from_samples(b.u_raw(), b.m(), basis)?;
            Ok(dtn_ball(&trace).values())
        }
        BoundaryGrid::Circle { .. } => {
            let trace = DiskTrace::from_samples(b.u_raw(), b.m())?;
            Ok(crate::dirichlet::dtn_disk(&trace).values())
        }
    }
}
