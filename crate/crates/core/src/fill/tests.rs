use super::generate::{generate, CurveKind, GenKind, GenParams};
use super::*;
use crate::jetgeom::tests::circle_boundary;
use std::f64::consts::PI;

fn re_z3_boundary(n_samp: usize) -> JetBoundary {
    // u = Re z^3, grad = (3 Re z^2, -3 Im z^2)
    circle_boundary(n_samp, 1, |s| {
        let (x, y) = (s.cos(), s.sin());
        let re2 = x * x - y * y;
        let im2 = 2.0 * x * y;
        (vec![(3.0 * s).cos()], vec![3.0 * re2, -3.0 * im2])
    })
}

#[test]
fn harmonic_graph_fills_with_tiny_defect() {
    let b = re_z3_boundary(256);
    let res = fill(&b, &FillOptions::default()).unwrap();
    assert_eq!(res.solver, SolverKind::SpectralDisk);
    assert!(res.zeta_sup < 1e-8, "zeta_sup {}", res.zeta_sup);
    assert!(res.tangential_residual < 1e-8);
    // V reproduces Re z^3 on a polar grid
    let Extension::Disk(ext) = &res.extension else {
        panic!("expected the disk solver")
    };
    for ir in 0..6 {
        for ip in 0..16 {
            let r = ir as f64 / 5.0;
            let phi = 2.0 * PI * ip as f64 / 16.0;
            let expect = r.powi(3) * (3.0 * phi).cos();
            assert!((ext.eval(0, r, phi) - expect).abs() < 1e-8);
        }
    }
}

#[test]
fn pure_normal_slot_gives_unit_defect() {
    // u = 0, A = N^T: V = 0 and zeta = (A - 0) . N = +1 with this crate's
    // sign convention zeta = (A - grad V) . N
    let b = circle_boundary(128, 1, |s| (vec![0.0], vec![s.cos(), s.sin()]));
    let res = fill(&b, &FillOptions::default()).unwrap();
    for j in 0..128 {
        assert!((res.zeta[j] - 1.0).abs() < 1e-10);
    }
    assert!((res.zeta_sup - 1.0).abs() < 1e-10);
    assert!((res.zeta_l2 * res.zeta_l2 - 2.0 * PI).abs() < 1e-8);

    let flat = circle_boundary(64, 1, |_| (vec![0.0], vec![0.0, 0.0]));
    let res = fill(&flat, &FillOptions::default()).unwrap();
    assert_eq!(res.zeta_sup, 0.0);
}

#[test]
fn non_isotropic_input_rejected() {
    let b = circle_boundary(128, 1, |s| {
        let t = [-s.sin(), s.cos()];
        (vec![0.0], vec![0.3 * t[0], 0.3 * t[1]])
    });
    assert!(matches!(
        fill(&b, &FillOptions::default()),
        Err(FillError::NotIsotropic { .. })
    ));
    assert!(matches!(
        check(&b, &FillOptions::default()),
        Err(FillError::NotIsotropic { .. })
    ));
}

#[test]
fn check_agrees_on_generated_graphs() {
    let opts = FillOptions::default();
    for seed in [1u64, 2, 3] {
        let b = generate(
            GenKind::HarmonicPolyGraph,
            seed,
            &GenParams { degree: 4, ..Default::default() },
        )
        .unwrap();
        let rep = check(&b, &opts).unwrap();
        assert_eq!(rep.verdict, Verdict::Fillable, "seed {seed}");
        assert!(rep.agreement);
        assert!(rep.moments.max_normalized < 1e-8);
        assert!(rep.zeta_sup < 1e-7);
    }
}

#[test]
fn normal_perturbation_is_flagged_with_linear_scaling() {
    let opts = FillOptions { tol_mom: 1e-8, ..Default::default() };
    let mut ratios_mu = Vec::new();
    let mut ratios_zeta = Vec::new();
    for eps in [1e-4, 1e-3, 1e-2] {
        let b = generate(
            GenKind::NormalPerturbed,
            7,
            &GenParams { degree: 3, eps, ..Default::default() },
        )
        .unwrap();
        let rep = check(&b, &opts).unwrap();
        assert_eq!(rep.verdict, Verdict::NotFillable, "eps={eps}");
        assert!(rep.agreement, "eps={eps}");
        ratios_mu.push(rep.moments.max_normalized / eps);
        ratios_zeta.push(rep.zeta_sup / eps);
        // the pairing identity ties the two routes together
        assert!(rep.pairing_max_rel_err < 1e-6, "eps={eps}: {}", rep.pairing_max_rel_err);
    }
    for r in &ratios_mu {
        assert!((r / ratios_mu[0] - 1.0).abs() < 0.1, "moment residual not linear in eps: {ratios_mu:?}");
    }
    for r in &ratios_zeta {
        assert!((r / ratios_zeta[0] - 1.0).abs() < 0.1, "defect not linear in eps: {ratios_zeta:?}");
    }
}

#[test]
fn tangential_perturbation_hits_isotropy_gate() {
    let b = generate(
        GenKind::TangentialPerturbed,
        5,
        &GenParams { degree: 3, eps: 1e-2, ..Default::default() },
    )
    .unwrap();
    match check(&b, &FillOptions::default()) {
        Err(FillError::NotIsotropic { .. }) => {}
        other => panic!("expected isotropy rejection, got {other:?}"),
    }
    // zero perturbation reduces to the unperturbed graph
    let b0 = generate(
        GenKind::NormalPerturbed,
        5,
        &GenParams { degree: 3, eps: 0.0, ..Default::default() },
    )
    .unwrap();
    let bg = generate(
        GenKind::HarmonicPolyGraph,
        5,
        &GenParams { degree: 3, eps: 0.0, ..Default::default() },
    )
    .unwrap();
    assert_eq!(b0.u_raw(), bg.u_raw());
    assert_eq!(b0.p_raw(), bg.p_raw());
}

#[test]
fn random_isotropic_is_isotropic_but_not_fillable() {
    let b = generate(GenKind::RandomIsotropic, 12, &GenParams::default()).unwrap();
    assert!(b.isotropy_residual().unwrap() < 1e-10);
    let rep = check(&b, &FillOptions::default()).unwrap();
    assert_eq!(rep.verdict, Verdict::NotFillable);
    assert!(rep.agreement);
}

#[test]
fn generation_is_deterministic() {
    let p = GenParams { degree: 5, eps: 1e-3, ..Default::default() };
    for kind in [
        GenKind::HarmonicPolyGraph,
        GenKind::NormalPerturbed,
        GenKind::TangentialPerturbed,
        GenKind::RandomIsotropic,
    ] {
        let a = generate(kind, 99, &p).unwrap();
        let b = generate(kind, 99, &p).unwrap();
        assert_eq!(a.x_raw(), b.x_raw());
        assert_eq!(a.u_raw(), b.u_raw());
        assert_eq!(a.p_raw(), b.p_raw());
        let c = generate(kind, 100, &p).unwrap();
        assert_ne!(a.u_raw(), c.u_raw(), "{kind:?} ignored the seed");
    }
}

#[test]
fn scaling_leaves_verdicts_invariant() {
    let b = generate(GenKind::HarmonicPolyGraph, 21, &GenParams::default()).unwrap();
    let lambda = 10.0;
    let bs = JetBoundary::new(
        2,
        1,
        b.grid().clone(),
        b.x_raw().to_vec(),
        b.u_raw().iter().map(|v| lambda * v).collect(),
        b.p_raw().iter().map(|v| lambda * v).collect(),
    )
    .unwrap();
    let opts = FillOptions::default();
    assert_eq!(check(&b, &opts).unwrap().verdict, Verdict::Fillable);
    assert_eq!(check(&bs, &opts).unwrap().verdict, Verdict::Fillable);

    let p = generate(
        GenKind::NormalPerturbed,
        21,
        &GenParams { eps: 1e-2, ..Default::default() },
    )
    .unwrap();
    let ps = JetBoundary::new(
        2,
        1,
        p.grid().clone(),
        p.x_raw().to_vec(),
        p.u_raw().iter().map(|v| lambda * v).collect(),
        p.p_raw().iter().map(|v| lambda * v).collect(),
    )
    .unwrap();
    assert_eq!(check(&p, &opts).unwrap().verdict, Verdict::NotFillable);
    assert_eq!(check(&ps, &opts).unwrap().verdict, Verdict::NotFillable);
}

#[test]
fn ellipse_graph_uses_fd_and_moments_stay_sharp() {
    let b = generate(
        GenKind::HarmonicPolyGraph,
        3,
        &GenParams {
            degree: 3,
            curve: CurveKind::Ellipse { a: 2.0, b: 1.0 },
            ..Default::default()
        },
    )
    .unwrap();
    let opts = FillOptions { grid_h: 1.0 / 96.0, ..Default::default() };
    let rep = check(&b, &opts).unwrap();
    assert_eq!(rep.solver, SolverKind::FiniteDifference);
    // the moment route does not depend on the solver and stays spectral
    assert_eq!(rep.moments.verdict, Verdict::Fillable);
    assert!(rep.moments.max_normalized < 1e-9);
    // the defect route is honest about its floor
    assert!(rep.zeta_floor > 0.0);
    assert_ne!(rep.zeta_verdict, Verdict::NotFillable);
    assert!(rep.zeta_sup < 0.05, "zeta_sup {}", rep.zeta_sup);
}

#[test]
fn sphere_graph_fills() {
    let b = generate(
        GenKind::HarmonicPolyGraph,
        17,
        &GenParams { n: 3, degree: 4, sphere: (24, 48), ..Default::default() },
    )
    .unwrap();
    let rep = check(&b, &FillOptions::default()).unwrap();
    assert_eq!(rep.solver, SolverKind::SpectralBall);
    assert_eq!(rep.verdict, Verdict::Fillable);
    assert!(rep.zeta_sup < 1e-7, "zeta {}", rep.zeta_sup);
    assert!(rep.moments.max_normalized < 1e-8);
}

#[test]
fn sphere_normal_perturbation_detected() {
    let b = generate(
        GenKind::NormalPerturbed,
        8,
        &GenParams { n: 3, degree: 3, eps: 1e-2, sphere: (24, 48), ..Default::default() },
    )
    .unwrap();
    let rep = check(&b, &FillOptions::default()).unwrap();
    assert_eq!(rep.verdict, Verdict::NotFillable);
    assert!(rep.agreement);
}

#[test]
fn defect_matches_dtn_prediction() {
    // zeta = A.N - DtN(u) on the disk: check against the multiplier
    let b = circle_boundary(256, 1, |s| {
        // u = cos 2s with a wrong normal slot A = 0: zeta = -DtN(u) = -2cos2s
        (vec![(2.0 * s).cos()], {
            // tangential part must satisfy isotropy: A = (du/ds) T
            let t = [-s.sin(), s.cos()];
            let du = -2.0 * (2.0 * s).sin();
            vec![du * t[0], du * t[1]]
        })
    });
    let res = fill(&b, &FillOptions::default()).unwrap();
    for j in 0..256 {
        let s = 2.0 * PI * j as f64 / 256.0;
        let expect = -2.0 * (2.0 * s).cos();
        assert!((res.zeta[j] - expect).abs() < 1e-10, "j={j}");
    }
    let dtn = dtn_of_trace(&b, &FillOptions::default()).unwrap();
    for j in 0..256 {
        let s = 2.0 * PI * j as f64 / 256.0;
        assert!((dtn[j] - 2.0 * (2.0 * s).cos()).abs() < 1e-10);
    }
}

#[test]
fn forward_direction_up_to_degree_six() {
    let opts = FillOptions::default();
    for seed in 31..36 {
        let b = generate(
            GenKind::HarmonicPolyGraph,
            seed,
            &GenParams { degree: 6, ..Default::default() },
        )
        .unwrap();
        let rep = check(&b, &opts).unwrap();
        assert!(rep.moments.max_normalized < 1e-8, "seed {seed}: {}", rep.moments.max_normalized);
        assert!(rep.zeta_sup < 1e-7, "seed {seed}: {}", rep.zeta_sup);
    }
}
