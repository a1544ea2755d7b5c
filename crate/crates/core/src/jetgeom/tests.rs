use super::sphere::SphereGrid;
use super::*;
use std::f64::consts::PI;

pub(crate) fn circle_grid(n_samp: usize) -> Vec<f64> {
    let mut x = vec![0.0; n_samp * 2];
    for j in 0..n_samp {
        let s = 2.0 * PI * j as f64 / n_samp as f64;
        x[j * 2] = s.cos();
        x[j * 2 + 1] = s.sin();
    }
    x
}

/// Boundary on the unit circle with caller-supplied value/gradient data.
pub(crate) fn circle_boundary(
    n_samp: usize,
    m: usize,
    data: impl Fn(f64) -> (Vec<f64>, Vec<f64>),
) -> JetBoundary {
    let x = circle_grid(n_samp);
    let mut u = vec![0.0; n_samp * m];
    let mut p = vec![0.0; n_samp * m * 2];
    for j in 0..n_samp {
        let s = 2.0 * PI * j as f64 / n_samp as f64;
        let (uj, aj) = data(s);
        u[j * m..(j + 1) * m].copy_from_slice(&uj);
        p[j * m * 2..(j + 1) * m * 2].copy_from_slice(&aj);
    }
    JetBoundary::new(2, m, BoundaryGrid::Circle { samples: n_samp }, x, u, p).unwrap()
}

fn zero_circle(n_samp: usize) -> JetBoundary {
    circle_boundary(n_samp, 1, |_| (vec![0.0], vec![0.0, 0.0]))
}

pub(crate) fn sphere_boundary(
    n_theta: usize,
    n_phi: usize,
    m: usize,
    data: impl Fn([f64; 3]) -> (Vec<f64>, Vec<f64>),
) -> JetBoundary {
    let g = SphereGrid::new(n_theta, n_phi);
    let s = g.num_samples();
    let mut x = vec![0.0; s * 3];
    let mut u = vec![0.0; s * m];
    let mut p = vec![0.0; s * m * 3];
    for it in 0..n_theta {
        for ip in 0..n_phi {
            let idx = g.index(it, ip);
            let pt = g.point(it, ip);
            x[idx * 3..idx * 3 + 3].copy_from_slice(&pt);
            let (uj, aj) = data(pt);
            u[idx * m..(idx + 1) * m].copy_from_slice(&uj);
            p[idx * m * 3..(idx + 1) * m * 3].copy_from_slice(&aj);
        }
    }
    JetBoundary::new(3, m, BoundaryGrid::Sphere(g), x, u, p).unwrap()
}

#[test]
fn isotropy_of_flat_data_is_zero() {
    let b = zero_circle(64);
    assert_eq!(b.isotropy_residual().unwrap(), 0.0);
}

#[test]
fn isotropy_of_harmonic_trace() {
    // u = Re z^2 = cos 2s on the unit circle, A = grad u = (2x1, -2x2)
    let b = circle_boundary(256, 1, |s| {
        ((vec![(2.0 * s).cos()]), vec![2.0 * s.cos(), -2.0 * s.sin()])
    });
    assert!(b.isotropy_residual().unwrap() < 1e-10);
    // wrong sign on the second component breaks isotropy at O(1)
    let bad = circle_boundary(256, 1, |s| {
        ((vec![(2.0 * s).cos()]), vec![2.0 * s.cos(), 2.0 * s.sin()])
    });
    assert!(bad.isotropy_residual().unwrap() > 0.5);
}

#[test]
fn isotropy_invariant_under_rotation() {
    let alpha: f64 = 0.7343;
    let (c, s) = (alpha.cos(), alpha.sin());
    let base = |t: f64| {
        let u = (2.0 * t).cos() + 0.3 * t.sin();
        let a = [2.0 * t.cos(), -2.0 * t.sin() + 0.1];
        (u, a)
    };
    let b = circle_boundary(128, 1, |t| {
        let (u, a) = base(t);
        (vec![u], vec![a[0], a[1]])
    });
    // rotate x and push A through: x' = R x, A' = A R^T
    let n_samp = 128;
    let mut x = vec![0.0; n_samp * 2];
    let mut u = vec![0.0; n_samp];
    let mut p = vec![0.0; n_samp * 2];
    for j in 0..n_samp {
        let t = 2.0 * PI * j as f64 / n_samp as f64;
        let (uj, a) = base(t);
        let (x1, x2) = (t.cos(), t.sin());
        x[j * 2] = c * x1 - s * x2;
        x[j * 2 + 1] = s * x1 + c * x2;
        u[j] = uj;
        p[j * 2] = a[0] * c - a[1] * s;
        p[j * 2 + 1] = a[0] * s + a[1] * c;
    }
    let br = JetBoundary::new(2, 1, BoundaryGrid::Circle { samples: n_samp }, x, u, p).unwrap();
    let r0 = b.isotropy_residual().unwrap();
    let r1 = br.isotropy_residual().unwrap();
    assert!((r0 - r1).abs() < 1e-12, "{r0} vs {r1}");
}

#[test]
fn outward_normal_on_circle_and_ellipse() {
    let b = zero_circle(128);
    let nrm = b.outward_normal().unwrap();
    for j in 0..128 {
        let s = 2.0 * PI * j as f64 / 128.0;
        assert!((nrm[j * 2] - s.cos()).abs() < 1e-12);
        assert!((nrm[j * 2 + 1] - s.sin()).abs() < 1e-12);
    }

    // ellipse (2 cos s, sin s)
    let n_samp = 128;
    let mut x = vec![0.0; n_samp * 2];
    for j in 0..n_samp {
        let s = 2.0 * PI * j as f64 / n_samp as f64;
        x[j * 2] = 2.0 * s.cos();
        x[j * 2 + 1] = s.sin();
    }
    let e = JetBoundary::new(
        2,
        1,
        BoundaryGrid::Circle { samples: n_samp },
        x,
        vec![0.0; n_samp],
        vec![0.0; n_samp * 2],
    )
    .unwrap();
    let nrm = e.outward_normal().unwrap();
    let derivs = e.derivatives();
    for j in 0..n_samp {
        let dot = nrm[j * 2] * derivs.dx[0][j * 2] + nrm[j * 2 + 1] * derivs.dx[0][j * 2 + 1];
        assert!(dot.abs() < 1e-12, "normal not orthogonal at {j}");
        let len = (nrm[j * 2].powi(2) + nrm[j * 2 + 1].powi(2)).sqrt();
        assert!((len - 1.0).abs() < 1e-12);
    }
    // outwardness at s = 0
    assert!((nrm[0] - 1.0).abs() < 1e-12 && nrm[1].abs() < 1e-12);
}

#[test]
fn outward_normal_on_sphere_is_position() {
    let b = sphere_boundary(8, 16, 1, |_| (vec![0.0], vec![0.0; 3]));
    let nrm = b.outward_normal().unwrap();
    for j in 0..b.num_samples() {
        for k in 0..3 {
            assert!((nrm[j * 3 + k] - b.x_at(j)[k]).abs() < 1e-12);
        }
    }
}

#[test]
fn surface_measure_totals() {
    let b = zero_circle(256);
    let total: f64 = b.surface_measure().unwrap().iter().sum();
    assert!((total - 2.0 * PI).abs() < 1e-12);

    // radius-3 circle
    let n_samp = 128;
    let mut x = vec![0.0; n_samp * 2];
    for j in 0..n_samp {
        let s = 2.0 * PI * j as f64 / n_samp as f64;
        x[j * 2] = 3.0 * s.cos();
        x[j * 2 + 1] = 3.0 * s.sin();
    }
    let b3 = JetBoundary::new(
        2,
        1,
        BoundaryGrid::Circle { samples: n_samp },
        x,
        vec![0.0; n_samp],
        vec![0.0; n_samp * 2],
    )
    .unwrap();
    let total: f64 = b3.surface_measure().unwrap().iter().sum();
    assert!((total - 6.0 * PI).abs() < 1e-10);

    let bs = sphere_boundary(32, 64, 1, |_| (vec![0.0], vec![0.0; 3]));
    let total: f64 = bs.surface_measure().unwrap().iter().sum();
    assert!((total - 4.0 * PI).abs() < 1e-8);
}

#[test]
fn spectral_accuracy_of_measure() {
    // doubling N does not degrade the (already spectral) total
    for n_samp in [64usize, 128] {
        let mut x = vec![0.0; n_samp * 2];
        for j in 0..n_samp {
            let s = 2.0 * PI * j as f64 / n_samp as f64;
            let r = 1.0 + 0.3 * (3.0 * s).cos();
            x[j * 2] = r * s.cos();
            x[j * 2 + 1] = r * s.sin();
        }
        let b = JetBoundary::new(
            2,
            1,
            BoundaryGrid::Circle { samples: n_samp },
            x,
            vec![0.0; n_samp],
            vec![0.0; n_samp * 2],
        )
        .unwrap();
        let total: f64 = b.surface_measure().unwrap().iter().sum();
        // reference computed at N=512 below
        let reference = {
            let n_ref = 512;
            let mut xr = vec![0.0; n_ref * 2];
            for j in 0..n_ref {
                let s = 2.0 * PI * j as f64 / n_ref as f64;
                let r = 1.0 + 0.3 * (3.0 * s).cos();
                xr[j * 2] = r * s.cos();
                xr[j * 2 + 1] = r * s.sin();
            }
            let br = JetBoundary::new(
                2,
                1,
                BoundaryGrid::Circle { samples: n_ref },
                xr,
                vec![0.0; n_ref],
                vec![0.0; n_ref * 2],
            )
            .unwrap();
            br.surface_measure().unwrap().iter().sum::<f64>()
        };
        assert!((total - reference).abs() < 1e-11, "N={n_samp}");
    }
}

#[test]
fn clockwise_curve_is_rejected() {
    let n_samp = 64;
    let mut x = vec![0.0; n_samp * 2];
    for j in 0..n_samp {
        let s = 2.0 * PI * j as f64 / n_samp as f64;
        x[j * 2] = s.cos();
        x[j * 2 + 1] = -s.sin();
    }
    let r = JetBoundary::new(
        2,
        1,
        BoundaryGrid::Circle { samples: n_samp },
        x,
        vec![0.0; n_samp],
        vec![0.0; n_samp * 2],
    );
    assert!(matches!(r, Err(GeomError::InvalidOrientation)));
}

#[test]
fn self_intersection_detected() {
    // a figure-eight-like curve
    let n_samp = 64;
    let mut x = vec![0.0; n_samp * 2];
    for j in 0..n_samp {
        let s = 2.0 * PI * j as f64 / n_samp as f64;
        x[j * 2] = s.sin();
        x[j * 2 + 1] = (2.0 * s).sin();
    }
    match JetBoundary::new(
        2,
        1,
        BoundaryGrid::Circle { samples: n_samp },
        x,
        vec![0.0; n_samp],
        vec![0.0; n_samp * 2],
    ) {
        Err(GeomError::SelfIntersection { .. }) | Err(GeomError::InvalidOrientation) => {}
        Ok(b) => {
            assert!(matches!(
                b.outward_normal(),
                Err(GeomError::SelfIntersection { .. })
            ));
        }
        Err(e) => panic!("unexpected error {e:?}"),
    }
}

#[test]
fn cylinder_endpoints_bit_exact() {
    let b = circle_boundary(64, 1, |s| (vec![s.cos()], vec![1.0, 0.5 * s.sin()]));
    let zeta: Vec<f64> = (0..64).map(|j| (j as f64 * 0.1).cos()).collect();
    let cyl = build_cylinder(&b, &zeta, 10).unwrap();
    let last = cyl.r_nodes.len() - 1;
    assert_eq!(cyl.r_nodes[0], 0.0);
    assert_eq!(cyl.r_nodes[last], 1.0);
    // r = 1 face reproduces A bit-for-bit
    assert_eq!(cyl.p_values[last], b.p_raw());
    // r = 0 face is A + zeta N^T
    let nrm = b.outward_normal().unwrap();
    for j in 0..64 {
        for i in 0..2 {
            let expect = b.p_raw()[j * 2 + i] + zeta[j] * nrm[j * 2 + i];
            assert_eq!(cyl.p_values[0][j * 2 + i], expect);
        }
    }
}

#[test]
fn cylinder_zero_defect_is_constant_in_r() {
    let b = zero_circle(32);
    let cyl = build_cylinder(&b, &vec![0.0; 32], 6).unwrap();
    for face in &cyl.p_values {
        assert_eq!(face, b.p_raw());
    }
}

#[test]
fn cylinder_contact_forms_vanish_for_isotropic_data() {
    // isotropic boundary: u' = A x'
    let b = circle_boundary(256, 1, |s| {
        ((vec![(3.0 * s).cos() / 3.0]), {
            // A = grad of Re z^3 / 3 restricted: (x1^2-x2^2, -2x1x2)
            let (x1, x2) = (s.cos(), s.sin());
            vec![x1 * x1 - x2 * x2, -2.0 * x1 * x2]
        })
    });
    assert!(b.isotropy_residual().unwrap() < 1e-12);
    let zeta: Vec<f64> = (0..256).map(|j| 1.0 + 0.2 * (j as f64).sin()).collect();
    let cyl = build_cylinder(&b, &zeta, 8).unwrap();
    assert!(cyl.theta_pullback_max() < 1e-12);
}

#[test]
fn cylinder_rejects_tiny_r_grid() {
    let b = zero_circle(32);
    assert!(matches!(build_cylinder(&b, &vec![0.0; 32], 1), Err(GeomError::RGrid)));
    assert!(matches!(build_cylinder(&b, &vec![0.0; 16], 4), Err(GeomError::ZetaLength)));
}

#[test]
fn sphere_isotropy_for_harmonic_graph() {
    // u = x y z (degree-3 harmonic), A = grad u
    let b = sphere_boundary(16, 32, 1, |p| {
        (
            vec![p[0] * p[1] * p[2]],
            vec![p[1] * p[2], p[0] * p[2], p[0] * p[1]],
        )
    });
    let res = b.isotropy_residual().unwrap();
    assert!(res < 1e-10, "residual {res}");
    // breaking A breaks isotropy
    let bad = sphere_boundary(16, 32, 1, |p| {
        (
            vec![p[0] * p[1] * p[2]],
            vec![p[1] * p[2], p[0] * p[2], -p[0] * p[1]],
        )
    });
    assert!(bad.isotropy_residual().unwrap() > 0.1);
}

#[test]
fn sphere_grid_mismatch_rejected() {
    let g = SphereGrid::new(8, 16);
    let s = g.num_samples();
    let mut x = vec![0.0; s * 3];
    for it in 0..8 {
        for ip in 0..16 {
            let idx = g.index(it, ip);
            let p = g.point(it, ip);
            x[idx * 3] = p[0] * 1.01; // off the canonical grid
            x[idx * 3 + 1] = p[1];
            x[idx * 3 + 2] = p[2];
        }
    }
    let r = JetBoundary::new(
        3,
        1,
        BoundaryGrid::Sphere(g),
        x,
        vec![0.0; s],
        vec![0.0; s * 3],
    );
    assert!(matches!(r, Err(GeomError::SphereGridMismatch)));
}

#[test]
fn smoothness_tail_flags_rough_data() {
    let smooth = circle_boundary(128, 1, |s| (vec![(2.0 * s).cos()], vec![0.0, 0.0]));
    assert!(smooth.smoothness_tail() < 1e-20);
    let rough = circle_boundary(128, 1, |s| {
        let mut v = 0.0;
        for k in 1..=60 {
            v += (k as f64 * s).cos() / k as f64;
        }
        (vec![v], vec![0.0, 0.0])
    });
    assert!(rough.smoothness_tail() > 1e-3);
}
