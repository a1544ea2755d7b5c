//! The identity regression suite: every structural form identity used by
//! the numeric modules, checked in exact arithmetic. `verify-identities` in
//! the CLI runs exactly this list.

use super::form::PolyForm;
use super::harmonics::{plane_basis, solid_basis_upto};
use super::jet::{assemble_general_law, normal_form_law, phi_antiderivative, psi, sigma_eliminate, star_d, theta};
use super::poly::Poly;
use super::scalar::s_int;
use super::upsilon::{verify_upsilon, Check, UniPoly};
use super::vars::VarSpace;
use super::ExtError;

fn check_eq(name: String, lhs: &PolyForm, rhs: &PolyForm) -> Check {
    let passed = lhs == rhs;
    Check {
        name,
        passed,
        detail: if passed { String::new() } else { format!("lhs = {lhs}; rhs = {rhs}") },
    }
}

fn check_zero(name: String, f: &PolyForm) -> Check {
    let passed = f.is_zero();
    Check { name, passed, detail: if passed { String::new() } else { format!("nonzero: {f}") } }
}

/// Run the whole suite. Exact arithmetic throughout; any failure is a sign
/// convention or calculus bug.
pub fn run_identity_suite() -> Result<Vec<Check>, ExtError> {
    let mut checks = Vec::new();

    // d o d = 0 on assorted forms, both spaces.
    for (label, form) in sample_forms()? {
        checks.push(check_zero(format!("d(d({label})) = 0"), &form.extd().extd()));
    }

    // d theta^a = -sum_i dp^a_i ∧ dx^i.
    for (n, m) in [(2usize, 1usize), (2, 2), (3, 1), (3, 2)] {
        let sp = VarSpace::jet(n, m);
        for a in 1..=m {
            let mut expect = PolyForm::zero(&sp, 2);
            for i in 1..=n {
                let dp = PolyForm::d_var(&sp, sp.p(a, i));
                let dx = PolyForm::d_var(&sp, sp.x(i));
                expect = expect.sub(&dp.wedge(&dx)?);
            }
            checks.push(check_eq(
                format!("n={n} m={m}: d theta^{a} = -dp^{a}_i ∧ dx^i"),
                &theta(&sp, a).extd(),
                &expect,
            ));
        }
    }

    // Hodge star table and involution sign.
    {
        let sp = VarSpace::jet(2, 1);
        let dx1 = PolyForm::d_var(&sp, sp.x(1));
        let dx2 = PolyForm::d_var(&sp, sp.x(2));
        checks.push(check_eq("n=2: *dx1 = dx2".into(), &dx1.base_star()?, &dx2));
        checks.push(check_eq("n=2: *dx2 = -dx1".into(), &dx2.base_star()?, &dx1.neg()));
        let sp3 = VarSpace::jet(3, 1);
        let d1 = PolyForm::d_var(&sp3, sp3.x(1));
        let d2 = PolyForm::d_var(&sp3, sp3.x(2));
        let d3 = PolyForm::d_var(&sp3, sp3.x(3));
        checks.push(check_eq(
            "n=3: *dx2 = -dx1 ∧ dx3".into(),
            &d2.base_star()?,
            &d1.wedge(&d3)?.neg(),
        ));
        checks.push(check_eq(
            "n=3: *(dx1 ∧ dx2) = dx3".into(),
            &d1.wedge(&d2)?.base_star()?,
            &d3,
        ));
        for n in [2usize, 3] {
            let sp = VarSpace::jet(n, 1);
            for k in 0..=n {
                let idx: Vec<_> = (1..=k).map(|i| sp.x(i)).collect();
                let mut f = PolyForm::zero(&sp, k);
                f.add_term(idx, Poly::one(&sp));
                let sign = if (k * (n - k)) % 2 == 0 { 1 } else { -1 };
                checks.push(check_eq(
                    format!("n={n}: ** = (-1)^{{k(n-k)}} on degree {k}"),
                    &f.base_star()?.base_star()?,
                    &f.scale(&s_int(sign)),
                ));
            }
        }
    }

    // The conservation-law pair for every harmonic basis polynomial of
    // degree <= 6, n in {2, 3}: Phi_H closed and d(phi_H) = Phi_H.
    {
        let sp = VarSpace::jet(2, 1);
        for (idx, h) in plane_basis(&sp, 6)?.into_iter().enumerate() {
            let phi_big = normal_form_law(&[h.clone()])?;
            checks.push(check_zero(format!("n=2 basis[{idx}]: d Phi_H = 0"), &phi_big.extd()));
            let phi = phi_antiderivative(&[h])?;
            checks.push(check_eq(
                format!("n=2 basis[{idx}]: d phi_H = Phi_H"),
                &phi.extd(),
                &phi_big,
            ));
        }
        let sp3 = VarSpace::jet(3, 1);
        for (l, level) in solid_basis_upto(&sp3, 6).into_iter().enumerate() {
            for (q, h) in level.into_iter().enumerate() {
                let phi_big = normal_form_law(&[h.clone()])?;
                checks.push(check_zero(format!("n=3 l={l} q={q}: d Phi_H = 0"), &phi_big.extd()));
                let phi = phi_antiderivative(&[h])?;
                checks.push(check_eq(
                    format!("n=3 l={l} q={q}: d phi_H = Phi_H"),
                    &phi.extd(),
                    &phi_big,
                ));
            }
        }
    }

    // The H -> -H bridge between the general-element sign and the closed
    // normal form.
    {
        let sp = VarSpace::jet(2, 1);
        let h = Poly::var(&sp, sp.x(1)).mul(&Poly::var(&sp, sp.x(2)))?;
        let rho = star_d(&h)?; // (-1)^2 * dH
        let sigma = vec![PolyForm::zero(&sp, 0)];
        checks.push(check_eq(
            "assemble(rho, 0, -H) = Phi_H".into(),
            &assemble_general_law(&[rho], &sigma, &[h.neg()])?,
            &normal_form_law(&[h])?,
        ));
    }

    // Sigma elimination identity (verified internally, surfaced here).
    {
        let sp = VarSpace::jet(2, 1);
        let mut rho = PolyForm::zero(&sp, 1);
        rho.add_term(vec![sp.x(2)], Poly::var(&sp, sp.x(1)));
        let sigma = PolyForm::from_poly(Poly::var(&sp, sp.u(1)));
        let h = Poly::var(&sp, sp.x(1));
        let ok = sigma_eliminate(&[rho], &[sigma], &[h]).is_ok();
        checks.push(Check {
            name: "n=2: sigma elimination rewriting".into(),
            passed: ok,
            detail: String::new(),
        });

        let sp3 = VarSpace::jet(3, 2);
        let mut rho1 = PolyForm::zero(&sp3, 2);
        rho1.add_term(vec![sp3.x(1), sp3.x(2)], Poly::var(&sp3, sp3.p(2, 3)));
        let rho2 = PolyForm::zero(&sp3, 2);
        let mut sig1 = PolyForm::zero(&sp3, 1);
        sig1.add_term(vec![sp3.u(1)], Poly::var(&sp3, sp3.x(2)));
        let mut sig2 = PolyForm::zero(&sp3, 1);
        sig2.add_term(vec![sp3.x(3)], Poly::var(&sp3, sp3.u(2)));
        let h = vec![Poly::var(&sp3, sp3.x(1)), Poly::zero(&sp3)];
        let ok3 = sigma_eliminate(&[rho1, rho2], &[sig1, sig2], &h).is_ok();
        checks.push(Check {
            name: "n=3 m=2: sigma elimination rewriting".into(),
            passed: ok3,
            detail: String::new(),
        });
    }

    // Integrable-extension identities and the Upsilon decomposition.
    for m in [2usize, 3] {
        let laws: Vec<UniPoly> = (0..m - 1)
            .map(|a| UniPoly::monomial(a + 1))
            .collect();
        let rep = verify_upsilon(m, &laws)?;
        for c in rep.checks {
            checks.push(Check { name: format!("m={m}: {}", c.name), ..c });
        }
    }
    for k in [0usize, 2, 3, 6] {
        let rep = verify_upsilon(2, &[UniPoly::monomial(k)])?;
        for c in rep.checks {
            checks.push(Check { name: format!("F=(z^m)^{k}: {}", c.name), ..c });
        }
    }

    // psi pulled back through a 1-jet graph gives the Laplacian density:
    // zero for a harmonic graph, nonzero otherwise.
    {
        let sp = VarSpace::jet(2, 1);
        let x1 = Poly::var(&sp, sp.x(1));
        let x2 = Poly::var(&sp, sp.x(2));
        let u = x1.mul(&x1)?.sub(&x2.mul(&x2)?);
        let comps = vec![x1.clone(), x2.clone(), u.clone(), u.diff(sp.x(1)), u.diff(sp.x(2))];
        let graph = super::form::PolyMap::new(&sp, &sp, comps)?;
        checks.push(check_zero(
            "psi pulls back to 0 on a harmonic 1-jet graph".into(),
            &graph.pullback(&psi(&sp, 1))?,
        ));
    }

    Ok(checks)
}


fn sample_forms() -> Result<Vec<(String, PolyForm)>, ExtError> {
    let mut out = Vec::new();
    let sp = VarSpace::jet(2, 1);
    let f = Poly::var(&sp, sp.x(1))
        .mul(&Poly::var(&sp, sp.u(1)))?
        .mul(&Poly::var(&sp, sp.p(1, 2)))?;
    out.push(("x1*u1*p1_2".to_string(), PolyForm::from_poly(f)));
    out.push(("theta".to_string(), theta(&sp, 1)));
    out.push(("psi".to_string(), psi(&sp, 1)));
    let sp3 = VarSpace::jet(3, 2);
    out.push(("theta^2 (n=3)".to_string(), theta(&sp3, 2)));
    let mut mixed = PolyForm::zero(&sp3, 2);
    mixed.add_term(
        vec![sp3.x(1), sp3.p(2, 3)],
        Poly::var(&sp3, sp3.u(1)).mul(&Poly::var(&sp3, sp3.x(2)))?,
    );
    out.push(("u1*x2 dx1∧dp2_3".to_string(), mixed));
    let csp = super::upsilon::complex_side(2);
    let mut cform = PolyForm::zero(&csp, 1);
    cform.add_term(
        vec![csp.zr(1)],
        super::upsilon::z_poly(&csp, 2).mul(&super::upsilon::z_poly(&csp, 1))?,
    );
    out.push(("z2*z1 d(zr1)".to_string(), cform));
    Ok(out)
}
