//! The exterior differential system for harmonic maps `R^n -> R^m` on the
//! first jet space, and its conservation laws.
//!
//! Generators of the differential ideal:
//! - contact forms `theta^a = du^a - p^a_i dx^i`,
//! - their derivatives `d theta^a = -dp^a_i ∧ dx^i`,
//! - the Laplace forms `psi^a = dp^a_i ∧ dx^{(i)}` with `dx^{(i)} = *dx^i`,
//!   which pull back to `(Δu^a) ω` on 1-jet graphs.
//!
//! A closed n-form in the ideal is determined by `(rho, sigma, H)` through
//! `Phi = rho ∧ theta + sigma ∧ d theta - H psi`; the sigma term can always
//! be rewritten away modulo an exact form. For harmonic `H` the closed
//! representative used throughout is
//! `Phi_H = rho ∧ theta + H psi` with `rho = (-1)^n * dH`;
//! its antiderivative is
//! `phi_H = H^a p^a_i dx^{(i)} - u^a (*dH^a)` with `d phi_H = Phi_H`.
//! Both facts are verified by the identity suite in exact arithmetic.

use super::form::PolyForm;
use super::poly::Poly;
use super::scalar::s_int;
use super::vars::VarSpace;
use super::ExtError;
use std::sync::Arc;

/// Contact form `theta^a = du^a - sum_i p^a_i dx^i`.
pub fn theta(space: &Arc<VarSpace>, a: usize) -> PolyForm {
    let (n, _) = space.jet_dims();
    let mut f = PolyForm::zero(space, 1);
    f.add_term(vec![space.u(a)], Poly::one(space));
    for i in 1..=n {
        f.add_term(vec![space.x(i)], Poly::var(space, space.p(a, i)).neg());
    }
    f
}

/// `psi^a = sum_i dp^a_i ∧ dx^{(i)}`.
pub fn psi(space: &Arc<VarSpace>, a: usize) -> PolyForm {
    let (n, _) = space.jet_dims();
    let mut out = PolyForm::zero(space, n);
    for i in 1..=n {
        let dp = PolyForm::d_var(space, space.p(a, i));
        let dxi_star = PolyForm::d_var(space, space.x(i)).base_star().expect("base form");
        out = out.add(&dp.wedge(&dxi_star).expect("same space"));
    }
    out
}

/// Volume form `omega = dx^1 ∧ ... ∧ dx^n`.
pub fn omega(space: &Arc<VarSpace>) -> PolyForm {
    let (n, _) = space.jet_dims();
    let mut out = PolyForm::from_poly(Poly::one(space));
    for i in 1..=n {
        out = out.wedge(&PolyForm::d_var(space, space.x(i))).expect("same space");
    }
    out
}

/// Laplacian in the base variables, `sum_i d^2/d(x^i)^2`.
pub fn laplacian(p: &Poly) -> Poly {
    let space = p.space().clone();
    let (n, _) = space.jet_dims();
    let mut out = Poly::zero(&space);
    for i in 1..=n {
        out = out.add(&p.diff(space.x(i)).diff(space.x(i)));
    }
    out
}

/// `*dH` for a base-variable polynomial `H`: an (n-1)-form.
pub fn star_d(h: &Poly) -> Result<PolyForm, ExtError> {
    PolyForm::from_poly(h.clone()).extd().base_star()
}

/// The general element of the ideal in degree n:
/// `Phi = sum_a rho^a ∧ theta^a + sigma^a ∧ d theta^a - H^a psi^a`.
///
/// `rho` must be (n-1)-forms, `sigma` (n-2)-forms, `H` polynomials, one per
/// target component.
pub fn assemble_general_law(
    rho: &[PolyForm],
    sigma: &[PolyForm],
    h: &[Poly],
) -> Result<PolyForm, ExtError> {
    let space = h
        .first()
        .map(|p| p.space().clone())
        .or_else(|| rho.first().map(|f| f.space().clone()))
        .ok_or(ExtError::ArityMismatch { expected: 1, got: 0 })?;
    let (n, m) = space.jet_dims();
    if rho.len() != m || sigma.len() != m || h.len() != m {
        return Err(ExtError::ArityMismatch { expected: m, got: rho.len().min(sigma.len()).min(h.len()) });
    }
    let mut out = PolyForm::zero(&space, n);
    for a in 1..=m {
        let r = &rho[a - 1];
        if !r.is_zero() {
            if r.degree() != n - 1 {
                return Err(ExtError::DegreeMismatch { expected: n - 1, got: r.degree() });
            }
            out = out.add(&r.wedge(&theta(&space, a))?);
        }
        let s = &sigma[a - 1];
        if !s.is_zero() {
            if n < 2 || s.degree() != n - 2 {
                return Err(ExtError::DegreeMismatch { expected: n.saturating_sub(2), got: s.degree() });
            }
            out = out.add(&s.wedge(&theta(&space, a).extd())?);
        }
        if !h[a - 1].is_zero() {
            out = out.sub(&psi(&space, a).scale_poly(&h[a - 1])?);
        }
    }
    Ok(out)
}

/// Result of rewriting the `sigma` term of a general law into an exact part:
/// `Phi = rho' ∧ theta - H psi + exact` with
/// `rho' = rho - (-1)^{n-2} d sigma` and `exact = (-1)^{n-2} d(sigma ∧ theta)`.
pub struct SigmaEliminated {
    pub rho: Vec<PolyForm>,
    pub h: Vec<Poly>,
    pub exact_part: PolyForm,
}

/// Rewrite a general law into a representative with `sigma = 0`, returning
/// the new data and the exact correction term. The identity
/// `assemble(rho, sigma, H) = assemble(rho', 0, H) + exact` is checked
/// symbolically and a failure is a bug, so it panics.
pub fn sigma_eliminate(
    rho: &[PolyForm],
    sigma: &[PolyForm],
    h: &[Poly],
) -> Result<SigmaEliminated, ExtError> {
    let space = h
        .first()
        .map(|p| p.space().clone())
        .ok_or(ExtError::ArityMismatch { expected: 1, got: 0 })?;
    let (n, m) = space.jet_dims();
    let sign = if (n as i64 - 2).rem_euclid(2) == 0 { 1 } else { -1 };
    let mut new_rho = Vec::with_capacity(m);
    let mut exact = PolyForm::zero(&space, n);
    for a in 1..=m {
        let s = &sigma[a - 1];
        let ds = s.extd();
        new_rho.push(rho[a - 1].sub(&ds.scale(&s_int(sign))));
        let st = s.wedge(&theta(&space, a))?;
        exact = exact.add(&st.extd().scale(&s_int(sign)));
    }
    let original = assemble_general_law(rho, sigma, h)?;
    let zero_sigma: Vec<PolyForm> = (0..m).map(|_| PolyForm::zero(&space, n - 2)).collect();
    let rewritten = assemble_general_law(&new_rho, &zero_sigma, h)?.add(&exact);
    if original != rewritten {
        panic!("sigma elimination identity failed symbolically");
    }
    Ok(SigmaEliminated { rho: new_rho, h: h.to_vec(), exact_part: exact })
}

/// The closed law `Phi_H = rho ∧ theta + H psi`, `rho = (-1)^n * dH`, for a
/// harmonic vector `H` (one base-variable polynomial per component).
pub fn normal_form_law(h: &[Poly]) -> Result<PolyForm, ExtError> {
    let space = h
        .first()
        .map(|p| p.space().clone())
        .ok_or(ExtError::ArityMismatch { expected: 1, got: 0 })?;
    let (n, m) = space.jet_dims();
    if h.len() != m {
        return Err(ExtError::ArityMismatch { expected: m, got: h.len() });
    }
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let mut out = PolyForm::zero(&space, n);
    for a in 1..=m {
        for (exp, _) in h[a - 1].terms() {
            let has_fiber = exp
                .iter()
                .enumerate()
                .any(|(j, &k)| k > 0 && !space.is_base(super::vars::Var(j as u32)));
            if has_fiber {
                return Err(ExtError::NotBaseForm);
            }
        }
        let rho = star_d(&h[a - 1])?.scale(&s_int(sign));
        out = out.add(&rho.wedge(&theta(&space, a))?);
        out = out.add(&psi(&space, a).scale_poly(&h[a - 1])?);
    }
    Ok(out)
}

/// The undifferentiated conservation law
/// `phi_H = sum_a ( H^a sum_i p^a_i dx^{(i)} - u^a (*dH^a) )`.
///
/// Requires each component harmonic (symbolic Laplacian check); satisfies
/// `d phi_H = Phi_H` by construction, which the identity suite re-verifies.
pub fn phi_antiderivative(h: &[Poly]) -> Result<PolyForm, ExtError> {
    let space = h
        .first()
        .map(|p| p.space().clone())
        .ok_or(ExtError::ArityMismatch { expected: 1, got: 0 })?;
    let (n, m) = space.jet_dims();
    if h.len() != m {
        return Err(ExtError::ArityMismatch { expected: m, got: h.len() });
    }
    let mut out = PolyForm::zero(&space, n - 1);
    for a in 1..=m {
        let ha = &h[a - 1];
        if !laplacian(ha).is_zero() {
            return Err(ExtError::NotHarmonic(ha.to_string()));
        }
        for i in 1..=n {
            let dxi_star = PolyForm::d_var(&space, space.x(i)).base_star()?;
            let coef = ha.mul(&Poly::var(&space, space.p(a, i)))?;
            out = out.add(&dxi_star.scale_poly(&coef)?);
        }
        let u_term = star_d(ha)?.scale_poly(&Poly::var(&space, space.u(a)))?;
        out = out.sub(&u_term);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extcalc::form::PolyForm;
    use crate::extcalc::scalar::s_int;

    #[test]
    fn d_theta_equals_minus_dp_wedge_dx() {
        let sp = VarSpace::jet(2, 1);
        let th = theta(&sp, 1);
        let mut expect = PolyForm::zero(&sp, 2);
        for i in 1..=2 {
            let dp = PolyForm::d_var(&sp, sp.p(1, i));
            let dx = PolyForm::d_var(&sp, sp.x(i));
            expect = expect.sub(&dp.wedge(&dx).unwrap());
        }
        assert_eq!(th.extd(), expect);
    }

    #[test]
    fn psi_pulls_back_to_laplacian_on_graphs() {
        // On the graph x -> (x, u(x), grad u(x)) with u = x1^2 - x2^2 the
        // Laplace form must pull back to zero; with u = x1^2 it gives 2 omega.
        let sp = VarSpace::jet(2, 1);
        let x1 = Poly::var(&sp, sp.x(1));
        let x2 = Poly::var(&sp, sp.x(2));
        for (u, expect_factor) in [
            (x1.mul(&x1).unwrap().sub(&x2.mul(&x2).unwrap()), 0i64),
            (x1.mul(&x1).unwrap(), 2),
        ] {
            let comps = vec![
                x1.clone(),
                x2.clone(),
                u.clone(),
                u.diff(sp.x(1)),
                u.diff(sp.x(2)),
            ];
            let graph = crate::extcalc::form::PolyMap::new(&sp, &sp, comps).unwrap();
            let pulled = graph.pullback(&psi(&sp, 1)).unwrap();
            let expect = omega(&sp).scale(&s_int(expect_factor));
            // omega pulls back to itself under a graph map
            assert_eq!(pulled, expect);
        }
    }

    #[test]
    fn normal_form_law_is_closed_only_for_harmonic_h() {
        let sp = VarSpace::jet(2, 1);
        let x1 = Poly::var(&sp, sp.x(1));
        let x2 = Poly::var(&sp, sp.x(2));
        let harmonic = x1.mul(&x1).unwrap().sub(&x2.mul(&x2).unwrap());
        let phi = normal_form_law(&[harmonic]).unwrap();
        assert!(phi.extd().is_zero());
        let not_harmonic = x1.mul(&x1).unwrap();
        let phi2 = normal_form_law(&[not_harmonic]).unwrap();
        assert!(!phi2.extd().is_zero());
    }

    #[test]
    fn general_law_with_zero_data_is_zero() {
        let sp = VarSpace::jet(2, 1);
        let rho = vec![PolyForm::zero(&sp, 1)];
        let sigma = vec![PolyForm::zero(&sp, 0)];
        let h = vec![Poly::zero(&sp)];
        assert!(assemble_general_law(&rho, &sigma, &h).unwrap().is_zero());
    }

    #[test]
    fn minus_h_bridges_general_and_normal_form() {
        // assemble(rho, 0, -H) must equal normal_form_law(H): the two sign
        // conventions differ exactly by H -> -H.
        let sp = VarSpace::jet(2, 1);
        let x1 = Poly::var(&sp, sp.x(1));
        let x2 = Poly::var(&sp, sp.x(2));
        let h = x1.mul(&x2).unwrap(); // harmonic
        let rho = star_d(&h).unwrap().scale(&s_int(1)); // (-1)^2 * dH
        let sigma = vec![PolyForm::zero(&sp, 0)];
        let lhs = assemble_general_law(&[rho], &sigma, &[h.neg()]).unwrap();
        let rhs = normal_form_law(&[h]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn phi_antiderivative_examples() {
        let sp = VarSpace::jet(2, 1);
        // H = x1: phi = x1 (p1 dx2 - p2 dx1) - u dx2
        let h = Poly::var(&sp, sp.x(1));
        let phi = phi_antiderivative(&[h.clone()]).unwrap();
        let mut expect = PolyForm::zero(&sp, 1);
        expect.add_term(vec![sp.x(2)], h.mul(&Poly::var(&sp, sp.p(1, 1))).unwrap());
        expect.add_term(vec![sp.x(1)], h.mul(&Poly::var(&sp, sp.p(1, 2))).unwrap().neg());
        expect.add_term(vec![sp.x(2)], Poly::var(&sp, sp.u(1)).neg());
        assert_eq!(phi, expect);
        assert_eq!(phi.extd(), normal_form_law(&[h]).unwrap());

        // H = 1: phi = sum p_i dx^{(i)}, d phi = psi
        let one = Poly::one(&sp);
        let phi1 = phi_antiderivative(&[one.clone()]).unwrap();
        assert_eq!(phi1.extd(), psi(&sp, 1));

        // H = 0 -> 0
        assert!(phi_antiderivative(&[Poly::zero(&sp)]).unwrap().is_zero());

        // non-harmonic input rejected
        let x1 = Poly::var(&sp, sp.x(1));
        assert!(matches!(
            phi_antiderivative(&[x1.mul(&x1).unwrap()]),
            Err(ExtError::NotHarmonic(_))
        ));
    }

    #[test]
    fn sigma_elimination_reproduces_rewriting() {
        // n=2, m=1, sigma = du1 is a 0-form? No: sigma must be (n-2)-form,
        // for n=2 a function. Use sigma = u1 (a 0-form) and also the spec's
        // du-flavored case via rho.
        let sp = VarSpace::jet(2, 1);
        let rho = {
            let mut f = PolyForm::zero(&sp, 1);
            f.add_term(vec![sp.x(2)], Poly::var(&sp, sp.x(1)));
            f
        };
        let sigma = PolyForm::from_poly(Poly::var(&sp, sp.u(1)));
        let h = Poly::var(&sp, sp.x(1)).mul(&Poly::var(&sp, sp.x(2))).unwrap();
        let out = sigma_eliminate(&[rho.clone()], &[sigma.clone()], &[h.clone()]).unwrap();
        // rho' = rho - (-1)^{n-2} d sigma = rho - du1
        let expect_rho = rho.sub(&sigma.extd());
        assert_eq!(out.rho[0], expect_rho);
        // and the assembled identity was checked inside; sanity: exact part
        // is d(sigma ∧ theta)
        let st = sigma.wedge(&theta(&sp, 1)).unwrap();
        assert_eq!(out.exact_part, st.extd());
    }

    #[test]
    fn sigma_elimination_in_three_dims() {
        let sp = VarSpace::jet(3, 1);
        let rho = {
            let mut f = PolyForm::zero(&sp, 2);
            f.add_term(vec![sp.x(1), sp.x(3)], Poly::var(&sp, sp.u(1)));
            f
        };
        let sigma = {
            let mut f = PolyForm::zero(&sp, 1);
            f.add_term(vec![sp.u(1)], Poly::var(&sp, sp.x(2)));
            f
        };
        let h = Poly::var(&sp, sp.x(3));
        // panics internally if the rewriting identity fails
        let out = sigma_eliminate(&[rho], &[sigma], &[h]).unwrap();
        assert_eq!(out.rho.len(), 1);
    }
}
