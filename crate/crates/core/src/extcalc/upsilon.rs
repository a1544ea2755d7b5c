//! The integrable extension linking holomorphic disks in `C^m` to the
//! harmonic jet system for maps `R^2 -> R^{m-1}`, and its conservation laws.
//!
//! Identification: `z^a = p^a_1 + i p^a_2` for `a = 1..m-1` and
//! `z^m = x^1 - i x^2`; the projection `zeta : M -> C^m` forgets `u`.
//!
//! Two exact facts underpin the whole pipeline, both machine-verified here:
//!
//! - `zeta^*(dz^a ∧ dz^m) = -(d theta^a + i psi^a)`. (The combination of
//!   `d theta` and `psi` is what matters; the overall sign is pinned by this
//!   suite rather than assumed.)
//! - `zeta^*(Omega) = omega` for `Omega = -(i/2) dz^m ∧ d z̄^m`.
//!
//! For a holomorphic `F = K + iH` in `z^m`, the closed law
//! `Upsilon = F(z^m) dz^a ∧ dz^m` pulls back so that
//! `zeta^*(Re Upsilon) = -K̃ d theta + H̃ psi
//!                     = (*dH̃) ∧ theta + H̃ psi - d(K̃ theta)`,
//! an exact perturbation of the harmonic-system law with test function `H̃`.

use super::form::{PolyForm, PolyMap};
use super::jet::{normal_form_law, psi, star_d, theta};
use super::poly::Poly;
use super::scalar::{s_i, s_int, s_rat, Scalar};
use super::vars::VarSpace;
use super::ExtError;
use num_traits::Zero;
use std::sync::Arc;

/// Polynomial in one complex variable, ascending Gaussian-rational
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(pub Vec<Scalar>);

impl UniPoly {
    pub fn constant(c: Scalar) -> Self {
        UniPoly(vec![c])
    }

    pub fn monomial(k: usize) -> Self {
        let mut v = vec![Scalar::zero(); k + 1];
        v[k] = super::scalar::s_int(1);
        UniPoly(v)
    }

    pub fn degree(&self) -> usize {
        self.0
            .iter()
            .rposition(|c| !super::scalar::s_is_zero(c))
            .unwrap_or(0)
    }

    /// Substitute a polynomial argument.
    pub fn subst(&self, arg: &Poly) -> Result<Poly, ExtError> {
        let space = arg.space().clone();
        let mut out = Poly::zero(&space);
        let mut pw = Poly::one(&space);
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                pw = pw.mul(arg)?;
            }
            if !super::scalar::s_is_zero(c) {
                out = out.add(&pw.scale(c));
            }
        }
        Ok(out)
    }
}

/// The jet space of the induced harmonic system for `C^m` (targets
/// `R^{m-1}`, base `R^2`).
pub fn harmonic_side(m: usize) -> Arc<VarSpace> {
    assert!(m >= 2, "need at least one non-graph coordinate");
    VarSpace::jet(2, m - 1)
}

/// The complex side `C^m` as a real variable space.
pub fn complex_side(m: usize) -> Arc<VarSpace> {
    VarSpace::complex_space(m)
}

/// The projection `zeta : J^1(R^2, R^{m-1}) -> C^m`: forget `u`, send
/// `(zr_a, zi_a) = (p^a_1, p^a_2)` and `(zr_m, zi_m) = (x^1, -x^2)`.
pub fn zeta_projection(m: usize) -> PolyMap {
    let src = harmonic_side(m);
    let tgt = complex_side(m);
    let mut comps = Vec::with_capacity(tgt.dim());
    for a in 1..=m {
        if a < m {
            comps.push(Poly::var(&src, src.p(a, 1)));
            comps.push(Poly::var(&src, src.p(a, 2)));
        } else {
            comps.push(Poly::var(&src, src.x(1)));
            comps.push(Poly::var(&src, src.x(2)).neg());
        }
    }
    PolyMap::new(&src, &tgt, comps).expect("component count matches")
}

/// `dz^a = d(zr_a) + i d(zi_a)` on the complex side.
pub fn dz(space: &Arc<VarSpace>, a: usize) -> PolyForm {
    let dre = PolyForm::d_var(space, space.zr(a));
    let dim = PolyForm::d_var(space, space.zi(a));
    dre.add(&dim.scale(&s_i()))
}

/// `dz̄^a = d(zr_a) - i d(zi_a)`.
pub fn dz_bar(space: &Arc<VarSpace>, a: usize) -> PolyForm {
    let dre = PolyForm::d_var(space, space.zr(a));
    let dim = PolyForm::d_var(space, space.zi(a));
    dre.sub(&dim.scale(&s_i()))
}

/// `z^a` as a complex-coefficient polynomial on the complex side.
pub fn z_poly(space: &Arc<VarSpace>, a: usize) -> Poly {
    let re = Poly::var(space, space.zr(a));
    let im = Poly::var(space, space.zi(a));
    re.add(&im.scale(&s_i()))
}

/// The independence form `Omega = -(i/2) dz^m ∧ dz̄^m`.
pub fn big_omega(m: usize) -> PolyForm {
    let sp = complex_side(m);
    let w = dz(&sp, m).wedge(&dz_bar(&sp, m)).expect("same space");
    w.scale(&(s_rat(-1, 2) * s_i()))
}

/// `Upsilon = sum_a F^a(z^m) dz^a ∧ dz^m` for holomorphic polynomial data
/// `F^a = K^a + i H^a`, one per non-graph component.
pub fn upsilon(m: usize, laws: &[UniPoly]) -> Result<PolyForm, ExtError> {
    if laws.len() != m - 1 {
        return Err(ExtError::ArityMismatch { expected: m - 1, got: laws.len() });
    }
    let sp = complex_side(m);
    let zm = z_poly(&sp, m);
    let mut out = PolyForm::zero(&sp, 2);
    for (a, f) in laws.iter().enumerate() {
        let coef = f.subst(&zm)?;
        let w = dz(&sp, a + 1).wedge(&dz(&sp, m))?;
        out = out.add(&w.scale_poly(&coef)?);
    }
    Ok(out)
}

/// `F(x^1 - i x^2)` split into real and imaginary parts: the harmonic pair
/// `(K̃, H̃)` on the jet space.
pub fn conjugate_pair(m: usize, f: &UniPoly) -> Result<(Poly, Poly), ExtError> {
    let src = harmonic_side(m);
    let w = Poly::var(&src, src.x(1)).sub(&Poly::var(&src, src.x(2)).scale(&s_i()));
    let fw = f.subst(&w)?;
    Ok((fw.re_part(), fw.im_part()))
}

/// One named symbolic check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn equal(name: impl Into<String>, lhs: &PolyForm, rhs: &PolyForm) -> Check {
        let passed = lhs == rhs;
        Check {
            name: name.into(),
            passed,
            detail: if passed {
                String::new()
            } else {
                format!("lhs = {lhs}; rhs = {rhs}")
            },
        }
    }

    fn zero(name: impl Into<String>, f: &PolyForm) -> Check {
        let passed = f.is_zero();
        Check {
            name: name.into(),
            passed,
            detail: if passed { String::new() } else { format!("nonzero: {f}") },
        }
    }
}

/// Report from [`verify_upsilon`]: all checks with pass/fail state.
#[derive(Debug, Clone)]
pub struct UpsilonReport {
    pub checks: Vec<Check>,
}

impl UpsilonReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Verify, in exact arithmetic, the pullback identities tying the laws of
/// the complex side to the harmonic-system laws.
pub fn verify_upsilon(m: usize, laws: &[UniPoly]) -> Result<UpsilonReport, ExtError> {
    let zeta = zeta_projection(m);
    let src = zeta.source().clone();
    let csp = zeta.target().clone();
    let mut checks = Vec::new();

    // Structural identities of the extension itself.
    for a in 1..m {
        let pulled = zeta.pullback(&dz(&csp, a).wedge(&dz(&csp, m))?)?;
        let expect = theta(&src, a)
            .extd()
            .add(&psi(&src, a).scale(&s_i()))
            .neg();
        checks.push(Check::equal(
            format!("zeta^*(dz^{a} ∧ dz^m) = -(d theta^{a} + i psi^{a})"),
            &pulled,
            &expect,
        ));
    }
    let omega_src = super::jet::omega(&src);
    let pulled_omega = zeta.pullback(&big_omega(m))?;
    checks.push(Check::equal("zeta^*(Omega) = omega", &pulled_omega, &omega_src));

    // The law Upsilon and its pullback decomposition.
    let ups = upsilon(m, laws)?;
    checks.push(Check::zero("d Upsilon = 0", &ups.extd()));

    let pulled = zeta.pullback(&ups)?;
    let re_pulled = pulled.re_part();

    let mut direct = PolyForm::zero(&src, 2);
    let mut law_part = PolyForm::zero(&src, 2);
    let mut exact_primitive = PolyForm::zero(&src, 1);
    let mut h_vec = Vec::with_capacity(m - 1);
    for (a0, f) in laws.iter().enumerate() {
        let a = a0 + 1;
        let (k, h) = conjugate_pair(m, f)?;
        direct = direct.sub(&theta(&src, a).extd().scale_poly(&k)?);
        direct = direct.add(&psi(&src, a).scale_poly(&h)?);
        law_part = law_part.add(&star_d(&h)?.wedge(&theta(&src, a))?);
        law_part = law_part.add(&psi(&src, a).scale_poly(&h)?);
        exact_primitive = exact_primitive.add(&theta(&src, a).scale_poly(&k)?);
        h_vec.push(h);
    }
    checks.push(Check::equal(
        "zeta^*(Re Upsilon) = -K̃ d theta + H̃ psi",
        &re_pulled,
        &direct,
    ));
    let decomposition = law_part.sub(&exact_primitive.extd());
    checks.push(Check::equal(
        "zeta^*(Re Upsilon) = (*dH̃) ∧ theta + H̃ psi - d(K̃ theta)",
        &re_pulled,
        &decomposition,
    ));
    // The extracted law part is exactly the closed normal-form law for H̃.
    let nf = normal_form_law(&h_vec)?;
    checks.push(Check::equal("law part = Phi_{H̃}", &law_part, &nf));
    checks.push(Check::zero("d(law part) = 0", &law_part.extd()));

    Ok(UpsilonReport { checks })
}
