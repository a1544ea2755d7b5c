//! Conservation laws from harmonic test polynomials and the moment
//! conditions they impose on jet boundaries.
//!
//! For a harmonic `H` supported in component `a`, the undifferentiated law
//! is `phi_H = H p^a_i dx^{(i)} - u^a (*dH)` and the moment is
//! `mu(H) = ∮ g^* phi_H`. Pulling `phi_H` back along the boundary and using
//! `g^*(dx^{(i)}) = N_i dS` reduces this to
//!
//! `mu(H) = ∮ [ H (A^a · N) - u^a ∂_nu H ] dS`,
//!
//! the normal-form path. Both evaluations are computed for every moment and
//! must agree; a disagreement is reported as an error rather than averaged
//! away, since the equality is exactly the sign bookkeeping this module is
//! trusted for.

use crate::extcalc::harmonics::{plane_basis, solid_basis_upto};
use crate::extcalc::jet::{laplacian, normal_form_law, phi_antiderivative};
use crate::extcalc::{CompiledForm, ExtError, Poly, VarSpace};
use crate::jetgeom::{build_cylinder, GeomError, JetBoundary};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;


#[derive(Debug, Error)]
pub enum ConslawError {
    #[error("test function has n={test_n} but boundary has n={boundary_n}")]
    DimensionMismatch { test_n: usize, boundary_n: usize },
    #[error("test function targets component {target} but boundary has m={m}")]
    TargetOutOfRange { target: usize, m: usize },
    #[error("moment paths disagree: form {form:e} vs normal {normal:e} (scale {scale:e})")]
    PathMismatch { form: f64, normal: f64, scale: f64 },
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Symbolic(#[from] ExtError),
}

impl ConslawError {
    pub fn code(&self) -> &'static str {
        match self {
            ConslawError::DimensionMismatch { .. } => "conslaw_dimension",
            ConslawError::TargetOutOfRange { .. } => "conslaw_target",
            ConslawError::PathMismatch { .. } => "conslaw_path_mismatch",
            ConslawError::Geometry(e) => e.code(),
            ConslawError::Symbolic(e) => e.code(),
        }
    }
}

/// Compiled polynomial in the base variables for fast evaluation.
#[derive(Debug, Clone)]
struct CompiledPoly {
    n: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl CompiledPoly {
    fn from_poly(p: &Poly, n: usize) -> Self {
        let space = p.space().clone();
        let terms = p
            .terms()
            .map(|(exps, c)| {
                let xexp: Vec<u32> = (1..=n).map(|i| exps[space.x(i).idx()]).collect();
                (xexp, crate::extcalc::scalar::rat_to_f64(&c.re))
            })
            .collect();
        CompiledPoly { n, terms }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut m = *c;
            for i in 0..self.n {
                for _ in 0..e[i] {
                    m *= x[i];
                }
            }
            acc += m;
        }
        acc
    }
}

/// One harmonic test polynomial, tied to a target component of `R^m`.
#[derive(Debug, Clone)]
pub struct HarmonicTest {
    n: usize,
    m: usize,
    /// 0-based target component.
    target: usize,
    label: String,
    space: Arc<VarSpace>,
    poly: Poly,
    value: CompiledPoly,
    grad: Vec<CompiledPoly>,
    phi: Arc<CompiledForm>,
}

impl HarmonicTest {
    /// Wrap a harmonic base-variable polynomial; the Laplacian is checked
    /// symbolically and non-harmonic input is rejected.
    pub fn new(
        label: impl Into<String>,
        poly: Poly,
        target: usize,
        m: usize,
    ) -> Result<Self, ConslawError> {
        let space = poly.space().clone();
        let (n, sm) = space.jet_dims();
        assert_eq!(sm, m, "polynomial space must carry the boundary's m");
        if target >= m {
            return Err(ConslawError::TargetOutOfRange { target, m });
        }
        if !laplacian(&poly).is_zero() {
            return Err(ConslawError::Symbolic(ExtError::NotHarmonic(poly.to_string())));
        }
        let value = CompiledPoly::from_poly(&poly, n);
        let grad = (1..=n)
            .map(|i| CompiledPoly::from_poly(&poly.diff(space.x(i)), n))
            .collect();
        let mut h_vec = vec![Poly::zero(&space); m];
        h_vec[target] = poly.clone();
        let phi = Arc::new(phi_antiderivative(&h_vec)?.compile());
        Ok(HarmonicTest { n, m, target, label: label.into(), space, poly, value, grad, phi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.value.eval(x)
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        self.grad.iter().map(|g| g.eval(x)).collect()
    }

    /// The closed law `Phi_H`, compiled for numeric integration.
    pub fn law(&self) -> Result<CompiledForm, ConslawError> {
        let mut h_vec = vec![Poly::zero(&self.space); self.m];
        h_vec[self.target] = self.poly.clone();
        Ok(normal_form_law(&h_vec)?.compile())
    }

    /// Boundary L2 norm of the test function.
    pub fn boundary_norm(&self, b: &JetBoundary) -> Result<f64, ConslawError> {
        let sq = b.integrate(|j| {
            let h = self.eval(b.x_at(j));
            h * h
        })?;
        Ok(sq.max(0.0).sqrt())
    }
}

/// The test basis: for `n = 2`, `{1, Re z^k, Im z^k : k <= K}` per target
/// component; for `n = 3`, the harmonic kernel basis of each degree
/// `l <= L` per component.
pub fn harmonic_basis(n: usize, m: usize, k_or_l: usize) -> Result<Vec<HarmonicTest>, ConslawError> {
    let cap = (k_or_l + 2).max(crate::extcalc::vars::DEFAULT_MAX_DEGREE);
    let space = VarSpace::jet_with_cap(n, m, cap);
    let mut out = Vec::new();
    match n {
        2 => {
            let scalars = plane_basis(&space, k_or_l)?;
            for a in 0..m {
                for (idx, h) in scalars.iter().enumerate() {
                    let label = if idx == 0 {
                        "1".to_string()
                    } else {
                        let k = idx.div_ceil(2);
                        if idx % 2 == 1 {
                            format!("Re z^{k}")
                        } else {
                            format!("Im z^{k}")
                        }
                    };
                    out.push(HarmonicTest::new(label, h.clone(), a, m)?);
                }
            }
        }
        3 => {
            let levels = solid_basis_upto(&space, k_or_l);
            for a in 0..m {
                for (l, level) in levels.iter().enumerate() {
                    for (q, h) in level.iter().enumerate() {
                        out.push(HarmonicTest::new(format!("l={l} q={q}"), h.clone(), a, m)?);
                    }
                }
            }
        }
        other => {
            return Err(ConslawError::DimensionMismatch { test_n: other, boundary_n: other })
        }
    }
    Ok(out)
}

/// A single evaluated moment: both computation paths and their gap.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MomentValue {
    /// Normal-form quadrature `∮ [H (A·N) - u ∂_nu H] dS`.
    pub value: f64,
    /// Direct pullback quadrature of `g^* phi_H`.
    pub form_path: f64,
    pub path_gap: f64,
}

/// Evaluate `mu(H) = ∮ g^* phi_H` along both routes, erroring if they
/// disagree beyond rounding at the data's scale.
pub fn eval_moment(b: &JetBoundary, test: &HarmonicTest) -> Result<MomentValue, ConslawError> {
    if test.n() != b.n() {
        return Err(ConslawError::DimensionMismatch { test_n: test.n(), boundary_n: b.n() });
    }
    if test.m() != b.m() || test.target() >= b.m() {
        return Err(ConslawError::TargetOutOfRange { target: test.target(), m: b.m() });
    }
    let (n, m) = (b.n(), b.m());
    let a = test.target();
    let normals = b.outward_normal()?;
    let weights = b.surface_measure()?;
    let s = b.num_samples();

    // Path 1: normal form.
    let mut normal_val = 0.0;
    let mut sup_a: f64 = 0.0;
    for j in 0..s {
        let x = b.x_at(j);
        let nrm = &normals[j * n..(j + 1) * n];
        let arow = &b.p_at(j)[a * n..(a + 1) * n];
        let adotn: f64 = (0..n).map(|i| arow[i] * nrm[i]).sum();
        sup_a = sup_a.max(arow.iter().fold(0.0f64, |acc, v| acc.max(v.abs())));
        let h = test.eval(x);
        let grad = test.grad(x);
        let dnu: f64 = (0..n).map(|i| grad[i] * nrm[i]).sum();
        normal_val += weights[j] * (h * adotn - b.u_at(j)[a] * dnu);
    }

    // Path 2: pull the (n-1)-form back through the sampled boundary.
    let derivs = b.derivatives();
    let dim = n + m + n * m;
    let mut point = vec![0.0; dim];
    let mut form_val = 0.0;
    match b.grid() {
        crate::jetgeom::BoundaryGrid::Circle { samples } => {
            let ds = 2.0 * std::f64::consts::PI / *samples as f64;
            let mut tangent = vec![0.0; dim];
            for j in 0..s {
                fill_jet_vec(&mut point, b.x_at(j), b.u_at(j), b.p_at(j));
                fill_jet_vec(
                    &mut tangent,
                    &derivs.dx[0][j * n..(j + 1) * n],
                    &derivs.du[0][j * m..(j + 1) * m],
                    &derivs.dp[0][j * m * n..(j + 1) * m * n],
                );
                form_val += ds * test.phi.eval(&point, &[&tangent]).re;
            }
        }
        crate::jetgeom::BoundaryGrid::Sphere(g) => {
            let mut t1 = vec![0.0; dim];
            let mut t2 = vec![0.0; dim];
            for it in 0..g.n_theta {
                let w = g.param_weight(it);
                for ip in 0..g.n_phi {
                    let j = g.index(it, ip);
                    fill_jet_vec(&mut point, b.x_at(j), b.u_at(j), b.p_at(j));
                    fill_jet_vec(
                        &mut t1,
                        &derivs.dx[0][j * n..(j + 1) * n],
                        &derivs.du[0][j * m..(j + 1) * m],
                        &derivs.dp[0][j * m * n..(j + 1) * m * n],
                    );
                    fill_jet_vec(
                        &mut t2,
                        &derivs.dx[1][j * n..(j + 1) * n],
                        &derivs.du[1][j * m..(j + 1) * m],
                        &derivs.dp[1][j * m * n..(j + 1) * m * n],
                    );
                    form_val += w * test.phi.eval(&point, &[&t1, &t2]).re;
                }
            }
        }
    }

    let length: f64 = weights.iter().sum();
    let h_norm = test.boundary_norm(b)?;
    let scale = 1.0 + normal_val.abs() + form_val.abs() + h_norm * (1.0 + sup_a) * length;
    let gap = (normal_val - form_val).abs();
    if gap > 1e-8 * scale {
        return Err(ConslawError::PathMismatch { form: form_val, normal: normal_val, scale });
    }
    Ok(MomentValue { value: normal_val, form_path: form_val, path_gap: gap })
}

fn fill_jet_vec(out: &mut [f64], x: &[f64], u: &[f64], p: &[f64]) {
    out[..x.len()].copy_from_slice(x);
    out[x.len()..x.len() + u.len()].copy_from_slice(u);
    out[x.len() + u.len()..].copy_from_slice(p);
}

/// Thresholds for the fillability verdicts, with the gray band fixed at one
/// decade above each tolerance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_iso: f64,
    pub tol_mom: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol_iso: 1e-7, tol_mom: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "FILLABLE")]
    Fillable,
    #[serde(rename = "NOT_FILLABLE")]
    NotFillable,
    #[serde(rename = "INDETERMINATE")]
    Indeterminate,
}

/// Per-test entry of a [`MomentReport`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentEntry {
    pub label: String,
    pub target: usize,
    pub moment: MomentValue,
    pub h_boundary_norm: f64,
    pub normalized: f64,
}

/// Moment-condition test report over a finite basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentReport {
    pub basis_size: usize,
    pub entries: Vec<MomentEntry>,
    pub max_normalized: f64,
    pub isotropy_residual: f64,
    pub isotropy_normalized: f64,
    pub boundary_length: f64,
    pub sup_gradient_slot: f64,
    pub tolerances: Tolerances,
    /// True when the isotropy residual alone forces the verdict.
    pub isotropy_rejected: bool,
    pub verdict: Verdict,
}

/// Evaluate every basis moment and apply the thresholds.
///
/// The verdict is necessary-only at finite basis size: FILLABLE means "no
/// obstruction visible to this basis".
pub fn moment_report(
    b: &JetBoundary,
    basis: &[HarmonicTest],
    tol: Tolerances,
) -> Result<MomentReport, ConslawError> {
    assert!(!basis.is_empty(), "moment_report needs a nonempty basis");
    let weights = b.surface_measure()?;
    let length: f64 = weights.iter().sum();
    let iso = b.isotropy_report()?;
    let sup_a = b
        .p_raw()
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    let mut entries = Vec::with_capacity(basis.len());
    let mut max_normalized: f64 = 0.0;
    for test in basis {
        let moment = eval_moment(b, test)?;
        let h_norm = test.boundary_norm(b)?.max(1e-300);
        let normalized = moment.value.abs() / (h_norm * (1.0 + sup_a) * length);
        max_normalized = max_normalized.max(normalized);
        entries.push(MomentEntry {
            label: test.label().to_string(),
            target: test.target(),
            moment,
            h_boundary_norm: h_norm,
            normalized,
        });
    }
    let iso_norm = iso.normalized();
    let iso_ok = iso_norm < tol.tol_iso;
    let iso_gray = !iso_ok && iso_norm < 10.0 * tol.tol_iso;
    let mom_ok = max_normalized < tol.tol_mom;
    let mom_gray = !mom_ok && max_normalized < 10.0 * tol.tol_mom;
    let isotropy_rejected = !iso_ok && !iso_gray;
    let verdict = if iso_ok && mom_ok {
        Verdict::Fillable
    } else if isotropy_rejected || (!mom_ok && !mom_gray) {
        Verdict::NotFillable
    } else {
        Verdict::Indeterminate
    };
    Ok(MomentReport {
        basis_size: basis.len(),
        entries,
        max_normalized,
        isotropy_residual: iso.residual,
        isotropy_normalized: iso_norm,
        boundary_length: length,
        sup_gradient_slot: sup_a,
        tolerances: tol,
        isotropy_rejected,
        verdict,
    })
}

/// Result of the numeric Stokes test over the cylinder between a boundary
/// and its normal-shifted companion.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StokesCheck {
    /// `∫_cyl Phi_H`, integrated over the cylinder parameterization.
    pub cylinder_integral: f64,
    /// `mu_b(H) - mu_{b_shifted}(H)`.
    pub moment_difference: f64,
    /// `-∮ h zeta dS`, the closed-form value of both sides.
    pub closed_form: f64,
    pub err_integral_vs_moments: f64,
    pub err_integral_vs_closed_form: f64,
}

/// Numerically realize `∫_cyl Phi = mu_b - mu_{b~}` together with the
/// closed-form pairing `-∮ h zeta dS`.
pub fn stokes_cylinder_check(
    b: &JetBoundary,
    zeta: &[f64],
    test: &HarmonicTest,
    n_r: usize,
) -> Result<StokesCheck, ConslawError> {
    if test.n() != b.n() {
        return Err(ConslawError::DimensionMismatch { test_n: test.n(), boundary_n: b.n() });
    }
    let (n, m) = (b.n(), b.m());
    let cyl = build_cylinder(b, zeta, n_r)?;
    let law = test.law()?;
    let derivs = b.derivatives();
    let s = b.num_samples();
    let dim = n + m + n * m;

    // d p / d r = -zeta N^T, constant in r.
    let mut dpdr = vec![0.0; s * m * n];
    for j in 0..s {
        for a in 0..m {
            for i in 0..n {
                dpdr[j * m * n + a * n + i] = -zeta[j * m + a] * cyl.normal[j * n + i];
            }
        }
    }
    // s-derivatives of the normal-shift field zeta N^T (for the faces).
    let shift: Vec<f64> = (0..s * m * n)
        .map(|idx| {
            let j = idx / (m * n);
            let rest = idx % (m * n);
            let a = rest / n;
            let i = rest % n;
            zeta[j * m + a] * cyl.normal[j * n + i]
        })
        .collect();
    let dshift = differentiate_columns(b, &shift, m * n);

    let mut point = vec![0.0; dim];
    let mut vr = vec![0.0; dim];
    let mut integral = 0.0;
    for (ir, &r) in cyl.r_nodes.iter().enumerate() {
        let wr = cyl.r_weights[ir];
        if wr == 0.0 {
            continue;
        }
        let f = 1.0 - r;
        let face = &cyl.p_values[ir];
        match b.grid() {
            crate::jetgeom::BoundaryGrid::Circle { samples } => {
                let ds = 2.0 * std::f64::consts::PI / *samples as f64;
                let mut vs = vec![0.0; dim];
                for j in 0..s {
                    fill_jet_vec(&mut point, b.x_at(j), b.u_at(j), &face[j * m * n..(j + 1) * m * n]);
                    // radial tangent
                    vr[..n + m].fill(0.0);
                    vr[n + m..].copy_from_slice(&dpdr[j * m * n..(j + 1) * m * n]);
                    // parameter tangent
                    let mut dp_face = vec![0.0; m * n];
                    for c in 0..m * n {
                        dp_face[c] =
                            derivs.dp[0][j * m * n + c] + f * dshift[0][j * m * n + c];
                    }
                    fill_jet_vec(
                        &mut vs,
                        &derivs.dx[0][j * n..(j + 1) * n],
                        &derivs.du[0][j * m..(j + 1) * m],
                        &dp_face,
                    );
                    integral += wr * ds * law.eval(&point, &[&vr, &vs]).re;
                }
            }
            crate::jetgeom::BoundaryGrid::Sphere(g) => {
                let mut t1 = vec![0.0; dim];
                let mut t2 = vec![0.0; dim];
                for it in 0..g.n_theta {
                    let w = g.param_weight(it);
                    for ip in 0..g.n_phi {
                        let j = g.index(it, ip);
                        fill_jet_vec(
                            &mut point,
                            b.x_at(j),
                            b.u_at(j),
                            &face[j * m * n..(j + 1) * m * n],
                        );
                        vr[..n + m].fill(0.0);
                        vr[n + m..].copy_from_slice(&dpdr[j * m * n..(j + 1) * m * n]);
                        for (dir, t) in [(0usize, &mut t1), (1usize, &mut t2)] {
                            let mut dp_face = vec![0.0; m * n];
                            for c in 0..m * n {
                                dp_face[c] = derivs.dp[dir][j * m * n + c]
                                    + f * dshift[dir][j * m * n + c];
                            }
                            fill_jet_vec(
                                t,
                                &derivs.dx[dir][j * n..(j + 1) * n],
                                &derivs.du[dir][j * m..(j + 1) * m],
                                &dp_face,
                            );
                        }
                        integral += wr * w * law.eval(&point, &[&vr, &t1, &t2]).re;
                    }
                }
            }
        }
    }

    let shifted = cyl.shifted_boundary()?;
    let mu_b = eval_moment(b, test)?.value;
    let mu_shifted = eval_moment(&shifted, test)?.value;
    let moment_difference = mu_b - mu_shifted;

    let weights = b.surface_measure()?;
    let a = test.target();
    let closed_form: f64 = (0..s)
        .map(|j| -weights[j] * test.eval(b.x_at(j)) * zeta[j * m + a])
        .sum();

    Ok(StokesCheck {
        cylinder_integral: integral,
        moment_difference,
        closed_form,
        err_integral_vs_moments: (integral - moment_difference).abs(),
        err_integral_vs_closed_form: (integral - closed_form).abs(),
    })
}

/// Parameter derivatives of an arbitrary per-sample data block.
fn differentiate_columns(b: &JetBoundary, data: &[f64], width: usize) -> Vec<Vec<f64>> {
    use crate::numerics::spectral;
    let s = b.num_samples();
    match b.grid() {
        crate::jetgeom::BoundaryGrid::Circle { .. } => {
            let mut out = vec![0.0; data.len()];
            for c in 0..width {
                let col: Vec<f64> = (0..s).map(|j| data[j * width + c]).collect();
                let d = spectral::derivative(&col);
                for j in 0..s {
                    out[j * width + c] = d[j];
                }
            }
            vec![out]
        }
        crate::jetgeom::BoundaryGrid::Sphere(g) => {
            let basis = crate::jetgeom::sphere::shared_basis(
                g.n_theta,
                g.n_phi,
                crate::jetgeom::sphere::data_band(g.n_theta, g.n_phi),
            );
            let mut out_theta = vec![0.0; data.len()];
            let mut out_phi = vec![0.0; data.len()];
            for c in 0..width {
                let col: Vec<f64> = (0..s).map(|j| data[j * width + c]).collect();
                let dth = basis.d_theta(&col);
                for j in 0..s {
                    out_theta[j * width + c] = dth[j];
                }
                for it in 0..g.n_theta {
                    let row = &col[it * g.n_phi..(it + 1) * g.n_phi];
                    let d = spectral::derivative(row);
                    for ip in 0..g.n_phi {
                        out_phi[(it * g.n_phi + ip) * width + c] = d[ip];
                    }
                }
            }
            vec![out_theta, out_phi]
        }
    }
}
