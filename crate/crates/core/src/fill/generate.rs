//! Deterministic test-case generators for the fillability pipeline.

use super::FillError;
use crate::jetgeom::sphere::{shared_basis, SphereGrid};
use crate::jetgeom::{BoundaryGrid, JetBoundary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// What kind of boundary to manufacture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    /// `(x, u, grad u)` for a random harmonic polynomial `u`: fillable by
    /// construction.
    HarmonicPolyGraph,
    /// A harmonic graph with `A -> A + eps * profile * N^T`: isotropy is
    /// preserved, fillability is destroyed at size `eps`.
    NormalPerturbed,
    /// A harmonic graph with a tangential gradient perturbation: breaks
    /// isotropy itself.
    TangentialPerturbed,
    /// Isotropic by construction with a random normal slot: generically
    /// unfillable data that still passes the contact conditions.
    RandomIsotropic,
}

impl GenKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "harmonic_poly_graph" => Some(GenKind::HarmonicPolyGraph),
            "normal_perturbed" => Some(GenKind::NormalPerturbed),
            "tangential_perturbed" => Some(GenKind::TangentialPerturbed),
            "random_isotropic" => Some(GenKind::RandomIsotropic),
            _ => None,
        }
    }
}

/// Base curve for plane boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CurveKind {
    Circle,
    Ellipse { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GenParams {
    pub n: usize,
    pub m: usize,
    /// Sample count for curves.
    pub samples: usize,
    /// Grid for sphere boundaries.
    pub sphere: (usize, usize),
    /// Max degree of the harmonic polynomial data.
    pub degree: usize,
    /// Perturbation amplitude for the perturbed kinds.
    pub eps: f64,
    pub curve: CurveKind,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 2,
            m: 1,
            samples: 256,
            sphere: (32, 64),
            degree: 4,
            eps: 1e-3,
            curve: CurveKind::Circle,
        }
    }
}

/// Plane harmonic basis values and gradients at a point, degrees `0..=k`:
/// `[1, Re z, Im z, Re z^2, Im z^2, ...]` with `z = x1 + i x2`.
fn plane_eval(k_max: usize, x: [f64; 2]) -> (Vec<f64>, Vec<[f64; 2]>) {
    let mut vals = Vec::with_capacity(2 * k_max + 1);
    let mut grads = Vec::with_capacity(2 * k_max + 1);
    vals.push(1.0);
    grads.push([0.0, 0.0]);
    let (mut re, mut im) = (1.0f64, 0.0f64); // z^0
    let mut prev = Vec::with_capacity(k_max + 1);
    prev.push((re, im));
    for k in 1..=k_max {
        let nre = re * x[0] - im * x[1];
        let nim = re * x[1] + im * x[0];
        re = nre;
        im = nim;
        prev.push((re, im));
        let (re1, im1) = prev[k - 1];
        vals.push(re);
        grads.push([k as f64 * re1, -(k as f64) * im1]);
        vals.push(im);
        grads.push([k as f64 * im1, k as f64 * re1]);
    }
    (vals, grads)
}

fn curve_point(curve: CurveKind, s: f64) -> [f64; 2] {
    match curve {
        CurveKind::Circle => [s.cos(), s.sin()],
        CurveKind::Ellipse { a, b } => [a * s.cos(), b * s.sin()],
    }
}

/// Deterministic boundary generation; identical `(kind, seed, params)`
/// produce identical bytes.
pub fn generate(kind: GenKind, seed: u64, params: &GenParams) -> Result<JetBoundary, FillError> {
    match params.n {
        2 => generate_curve(kind, seed, params),
        3 => generate_sphere(kind, seed, params),
        other => Err(FillError::BadParams(format!("n={other} not supported"))),
    }
}

fn generate_curve(kind: GenKind, seed: u64, params: &GenParams) -> Result<JetBoundary, FillError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_samp = params.samples;
    let m = params.m;
    if n_samp < 16 {
        return Err(FillError::BadParams("need at least 16 samples".into()));
    }
    if params.degree == 0 && matches!(kind, GenKind::HarmonicPolyGraph) {
        return Err(FillError::BadParams("degree must be >= 1".into()));
    }
    let mut x = vec![0.0; n_samp * 2];
    for j in 0..n_samp {
        let s = 2.0 * PI * j as f64 / n_samp as f64;
        let p = curve_point(params.curve, s);
        x[j * 2] = p[0];
        x[j * 2 + 1] = p[1];
    }

    match kind {
        GenKind::HarmonicPolyGraph | GenKind::NormalPerturbed | GenKind::TangentialPerturbed => {
            // coefficients over the plane harmonic basis, per component
            let n_coef = 2 * params.degree + 1;
            let coef: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..n_coef).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            // perturbation profile: band-limited, drawn even when unused to
            // keep the base data identical across kinds at equal seed
            let prof: Vec<[f64; 5]> = (0..m)
                .map(|_| {
                    let mut p = [0.0; 5];
                    for v in p.iter_mut() {
                        *v = rng.random_range(-1.0..1.0);
                    }
                    p
                })
                .collect();
            let profile = |a: usize, s: f64| {
                let p = &prof[a];
                p[0] + p[1] * s.cos() + p[2] * s.sin() + p[3] * (2.0 * s).cos()
                    + p[4] * (2.0 * s).sin()
            };
            let mut u = vec![0.0; n_samp * m];
            let mut pm = vec![0.0; n_samp * m * 2];
            for j in 0..n_samp {
                let s = 2.0 * PI * j as f64 / n_samp as f64;
                let pt = [x[j * 2], x[j * 2 + 1]];
                let (vals, grads) = plane_eval(params.degree, pt);
                let nrm = outward_on(params.curve, s);
                let tan = tangent_on(params.curve, s);
                for a in 0..m {
                    let mut uv = 0.0;
                    let mut g = [0.0f64; 2];
                    for (c, (v, gr)) in coef[a].iter().zip(vals.iter().zip(&grads)) {
                        uv += c * v;
                        g[0] += c * gr[0];
                        g[1] += c * gr[1];
                    }
                    u[j * m + a] = uv;
                    let shift = match kind {
                        GenKind::NormalPerturbed => {
                            let f = params.eps * profile(a, s);
                            [f * nrm[0], f * nrm[1]]
                        }
                        GenKind::TangentialPerturbed => {
                            let f = params.eps * profile(a, s);
                            [f * tan[0], f * tan[1]]
                        }
                        _ => [0.0, 0.0],
                    };
                    pm[j * m * 2 + a * 2] = g[0] + shift[0];
                    pm[j * m * 2 + a * 2 + 1] = g[1] + shift[1];
                }
            }
            Ok(JetBoundary::new(2, m, BoundaryGrid::Circle { samples: n_samp }, x, u, pm)?)
        }
        GenKind::RandomIsotropic => {
            // u random band-limited; A = tangential gradient of u plus a
            // random normal slot: contact conditions hold exactly, the
            // normal data is generically wrong
            let band = 4usize;
            let ucoef: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..2 * band + 1).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let zcoef: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..2 * band + 1).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let series = |c: &[f64], s: f64| {
                let mut v = c[0];
                for k in 1..=band {
                    v += c[2 * k - 1] * (k as f64 * s).cos() + c[2 * k] * (k as f64 * s).sin();
                }
                v
            };
            let series_d = |c: &[f64], s: f64| {
                let mut v = 0.0;
                for k in 1..=band {
                    v += k as f64
                        * (-c[2 * k - 1] * (k as f64 * s).sin() + c[2 * k] * (k as f64 * s).cos());
                }
                v
            };
            let mut u = vec![0.0; n_samp * m];
            let mut pm = vec![0.0; n_samp * m * 2];
            for j in 0..n_samp {
                let s = 2.0 * PI * j as f64 / n_samp as f64;
                let nrm = outward_on(params.curve, s);
                let tan = tangent_on(params.curve, s);
                let speed = speed_on(params.curve, s);
                for a in 0..m {
                    u[j * m + a] = series(&ucoef[a], s);
                    let du_ds = series_d(&ucoef[a], s);
                    let zeta = series(&zcoef[a], s);
                    // A = (du/ds / |x'|) T^ + zeta N^
                    for i in 0..2 {
                        pm[j * m * 2 + a * 2 + i] = du_ds / speed * tan[i] + zeta * nrm[i];
                    }
                }
            }
            Ok(JetBoundary::new(2, m, BoundaryGrid::Circle { samples: n_samp }, x, u, pm)?)
        }
    }
}

fn tangent_on(curve: CurveKind, s: f64) -> [f64; 2] {
    let d = match curve {
        CurveKind::Circle => [-s.sin(), s.cos()],
        CurveKind::Ellipse { a, b } => [-a * s.sin(), b * s.cos()],
    };
    let n = (d[0] * d[0] + d[1] * d[1]).sqrt();
    [d[0] / n, d[1] / n]
}

fn speed_on(curve: CurveKind, s: f64) -> f64 {
    match curve {
        CurveKind::Circle => 1.0,
        CurveKind::Ellipse { a, b } => {
            let d = [-a * s.sin(), b * s.cos()];
            (d[0] * d[0] + d[1] * d[1]).sqrt()
        }
    }
}

fn outward_on(curve: CurveKind, s: f64) -> [f64; 2] {
    let t = tangent_on(curve, s);
    [t[1], -t[0]]
}

fn generate_sphere(kind: GenKind, seed: u64, params: &GenParams) -> Result<JetBoundary, FillError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n_theta, n_phi) = params.sphere;
    let m = params.m;
    let grid = SphereGrid::new(n_theta, n_phi);
    let cap = (n_theta - 1).min((n_phi - 1) / 2);
    let degree = params.degree.min(cap);
    let basis = shared_basis(n_theta, n_phi, degree.max(3));
    let s = grid.num_samples();
    let mut x = vec![0.0; s * 3];
    for it in 0..n_theta {
        for ip in 0..n_phi {
            let idx = grid.index(it, ip);
            x[idx * 3..idx * 3 + 3].copy_from_slice(&grid.point(it, ip));
        }
    }
    // random coefficients over the basis functions with l <= degree
    let take: usize = basis.funcs.iter().take_while(|f| f.l <= degree).count();
    let coef: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..take).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let prof_take: usize = basis.funcs.iter().take_while(|f| f.l <= 3.min(degree)).count();
    let prof: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..prof_take).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();

    let mut u = vec![0.0; s * m];
    let mut pm = vec![0.0; s * m * 3];
    for it in 0..n_theta {
        for ip in 0..n_phi {
            let idx = grid.index(it, ip);
            let nrm = grid.point(it, ip);
            let tt = grid.t_theta(it, ip);
            for a in 0..m {
                let mut uv = 0.0;
                let mut g = [0.0f64; 3];
                for (c, f) in coef[a].iter().zip(basis.funcs.iter().take(take)) {
                    uv += c * f.values[idx];
                    for ax in 0..3 {
                        g[ax] += c * f.grad_values[idx * 3 + ax];
                    }
                }
                let mut profile = 0.0;
                for (c, f) in prof[a].iter().zip(basis.funcs.iter().take(prof_take)) {
                    profile += c * f.values[idx];
                }
                u[idx * m + a] = uv;
                match kind {
                    GenKind::HarmonicPolyGraph => {
                        for ax in 0..3 {
                            pm[idx * m * 3 + a * 3 + ax] = g[ax];
                        }
                    }
                    GenKind::NormalPerturbed => {
                        for ax in 0..3 {
                            pm[idx * m * 3 + a * 3 + ax] =
                                g[ax] + params.eps * profile * nrm[ax];
                        }
                    }
                    GenKind::TangentialPerturbed => {
                        let tn = (tt[0] * tt[0] + tt[1] * tt[1] + tt[2] * tt[2]).sqrt();
                        for ax in 0..3 {
                            pm[idx * m * 3 + a * 3 + ax] =
                                g[ax] + params.eps * profile * tt[ax] / tn;
                        }
                    }
                    GenKind::RandomIsotropic => {
                        // tangential part of grad u plus a random normal slot
                        let gn: f64 = (0..3).map(|ax| g[ax] * nrm[ax]).sum();
                        for ax in 0..3 {
                            pm[idx * m * 3 + a * 3 + ax] =
                                g[ax] - gn * nrm[ax] + profile * nrm[ax];
                        }
                    }
                }
            }
        }
    }
    Ok(JetBoundary::new(3, m, BoundaryGrid::Sphere(grid), x, u, pm)?)
}
