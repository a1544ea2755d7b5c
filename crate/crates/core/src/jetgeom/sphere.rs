//! The product grid on the unit sphere and a discrete spherical-harmonic
//! calculus on it.
//!
//! Colatitudes come from Gauss–Legendre nodes in `mu = cos(theta)`, so the
//! grid integrates spherical polynomials exactly; longitudes are uniform.
//! The working basis is built from the exact rational harmonic kernels of
//! [`crate::extcalc::harmonics`], evaluated in f64 and orthonormalized per
//! degree against the grid inner product. Distinct degrees are orthogonal
//! already; the result is a real orthonormal spherical-harmonic basis (a
//! fixed rotation of the textbook one, which is all that is needed).

use crate::extcalc::harmonics::solid_basis;
use crate::extcalc::scalar::rat_to_f64;
use crate::extcalc::vars::VarSpace;
use crate::numerics::quad::gauss_legendre;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Gauss–Legendre (colatitude) times uniform (longitude) grid on `S^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    /// Colatitudes, ascending in `(0, pi)`; poles are never nodes.
    pub theta: Vec<f64>,
    /// Gauss–Legendre weights in `mu`, matched to `theta` order.
    pub glw: Vec<f64>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (mu, w) = gauss_legendre(n_theta);
        // mu ascending -1..1 means theta descending; flip to ascending theta.
        let mut theta: Vec<f64> = mu.iter().rev().map(|&m| m.acos()).collect();
        let glw: Vec<f64> = w.iter().rev().copied().collect();
        // acos is monotone decreasing; after rev, theta is ascending.
        debug_assert!(theta.windows(2).all(|p| p[0] < p[1]));
        for t in &mut theta {
            *t = t.clamp(0.0, PI);
        }
        SphereGrid { n_theta, n_phi, theta, glw }
    }

    pub fn num_samples(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn index(&self, it: usize, ip: usize) -> usize {
        it * self.n_phi + ip
    }

    pub fn phi(&self, ip: usize) -> f64 {
        2.0 * PI * ip as f64 / self.n_phi as f64
    }

    pub fn point(&self, it: usize, ip: usize) -> [f64; 3] {
        let (st, ct) = self.theta[it].sin_cos();
        let (sp, cp) = self.phi(ip).sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Coordinate tangent `∂x/∂theta`.
    pub fn t_theta(&self, it: usize, ip: usize) -> [f64; 3] {
        let (st, ct) = self.theta[it].sin_cos();
        let (sp, cp) = self.phi(ip).sin_cos();
        [ct * cp, ct * sp, -st]
    }

    /// Coordinate tangent `∂x/∂phi`.
    pub fn t_phi(&self, it: usize, ip: usize) -> [f64; 3] {
        let (st, _) = self.theta[it].sin_cos();
        let (sp, cp) = self.phi(ip).sin_cos();
        [-st * sp, st * cp, 0.0]
    }

    /// Quadrature weight for the unit-sphere measure at row `it`; the
    /// weights sum to `4 pi` exactly (up to rounding).
    pub fn unit_weight(&self, it: usize) -> f64 {
        self.glw[it] * 2.0 * PI / self.n_phi as f64
    }

    /// Weight for integrating `f(theta, phi) d theta d phi`-type densities
    /// written against `d mu`: `glw / sin(theta) * (2 pi / n_phi)`.
    pub fn param_weight(&self, it: usize) -> f64 {
        self.glw[it] / self.theta[it].sin() * 2.0 * PI / self.n_phi as f64
    }
}

/// Sparse f64 polynomial in three variables.
#[derive(Debug, Clone, Default)]
pub struct PolyXyz {
    pub terms: Vec<([u8; 3], f64)>,
}

impl PolyXyz {
    pub fn eval(&self, p: [f64; 3]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut m = *c;
            for _ in 0..e[0] {
                m *= p[0];
            }
            for _ in 0..e[1] {
                m *= p[1];
            }
            for _ in 0..e[2] {
                m *= p[2];
            }
            acc += m;
        }
        acc
    }

    pub fn grad(&self) -> [PolyXyz; 3] {
        let mut out = [PolyXyz::default(), PolyXyz::default(), PolyXyz::default()];
        for (e, c) in &self.terms {
            for axis in 0..3 {
                if e[axis] > 0 {
                    let mut ne = *e;
                    ne[axis] -= 1;
                    out[axis].terms.push((ne, c * e[axis] as f64));
                }
            }
        }
        out
    }

    fn scaled_add(&mut self, other: &PolyXyz, factor: f64) {
        for (e, c) in &other.terms {
            if let Some(slot) = self.terms.iter_mut().find(|(te, _)| te == e) {
                slot.1 += c * factor;
            } else {
                self.terms.push((*e, c * factor));
            }
        }
    }
}

/// One orthonormal basis function: degree, grid values, polynomial and
/// gradient representation.
#[derive(Debug, Clone)]
pub struct BasisFun {
    pub l: usize,
    pub values: Vec<f64>,
    /// `∇Y · t_theta` on the grid, precomputed for derivative synthesis.
    pub dtheta_values: Vec<f64>,
    /// Full gradient on the grid, `[sample * 3 + axis]`.
    pub grad_values: Vec<f64>,
    pub poly: PolyXyz,
    pub grad: [PolyXyz; 3],
}

/// Orthonormal spherical polynomial basis on a [`SphereGrid`].
#[derive(Debug)]
pub struct SphericalBasis {
    pub grid: SphereGrid,
    pub l_max: usize,
    pub funcs: Vec<BasisFun>,
    /// start of each degree block in `funcs`
    pub offsets: Vec<usize>,
}

impl SphericalBasis {
    /// Build the basis; requires `l_max <= n_theta - 1` and
    /// `2*l_max < n_phi` so that all inner products are exact.
    pub fn new(grid: SphereGrid, l_max: usize) -> Result<Self, &'static str> {
        if l_max + 1 > grid.n_theta || 2 * l_max >= grid.n_phi {
            return Err("basis degree exceeds the grid's alias-free band");
        }
        let s = grid.num_samples();
        let weights: Vec<f64> = (0..grid.n_theta)
            .flat_map(|it| std::iter::repeat_n(grid.unit_weight(it), grid.n_phi))
            .collect();
        let mut funcs: Vec<BasisFun> = Vec::new();
        let mut offsets = Vec::new();
        for l in 0..=l_max {
            offsets.push(funcs.len());
            let raw = xyz_kernels(l);
            let mut block: Vec<BasisFun> = raw
                .iter()
                .map(|poly| {
                    let poly = poly.clone();
                    let grad = poly.grad();
                    let mut values = vec![0.0; s];
                    let mut dtheta_values = vec![0.0; s];
                    let mut grad_values = vec![0.0; s * 3];
                    for it in 0..grid.n_theta {
                        for ip in 0..grid.n_phi {
                            let pt = grid.point(it, ip);
                            let tt = grid.t_theta(it, ip);
                            let idx = grid.index(it, ip);
                            values[idx] = poly.eval(pt);
                            let g = [grad[0].eval(pt), grad[1].eval(pt), grad[2].eval(pt)];
                            dtheta_values[idx] = g[0] * tt[0] + g[1] * tt[1] + g[2] * tt[2];
                            grad_values[idx * 3..idx * 3 + 3].copy_from_slice(&g);
                        }
                    }
                    BasisFun { l, values, dtheta_values, grad_values, grad, poly }
                })
                .collect();
            // Modified Gram-Schmidt against the grid inner product, which is
            // the exact sphere inner product for these degrees.
            for j in 0..block.len() {
                for k in 0..j {
                    let proj = dot_w(&block[j].values, &block[k].values, &weights);
                    let (head, tail) = block.split_at_mut(j);
                    let prev = &head[k];
                    let cur = &mut tail[0];
                    for (v, pv) in cur.values.iter_mut().zip(&prev.values) {
                        *v -= proj * pv;
                    }
                    for (v, pv) in cur.dtheta_values.iter_mut().zip(&prev.dtheta_values) {
                        *v -= proj * pv;
                    }
                    for (v, pv) in cur.grad_values.iter_mut().zip(&prev.grad_values) {
                        *v -= proj * pv;
                    }
                    cur.poly.scaled_add(&prev.poly, -proj);
                    for axis in 0..3 {
                        cur.grad[axis].scaled_add(&prev.grad[axis], -proj);
                    }
                }
                let norm = dot_w(&block[j].values, &block[j].values, &weights).sqrt();
                assert!(norm > 1e-12, "degenerate harmonic block l={l}");
                let inv = 1.0 / norm;
                for v in &mut block[j].values {
                    *v *= inv;
                }
                for v in &mut block[j].dtheta_values {
                    *v *= inv;
                }
                for v in &mut block[j].grad_values {
                    *v *= inv;
                }
                for (_, c) in &mut block[j].poly.terms {
                    *c *= inv;
                }
                for axis in 0..3 {
                    for (_, c) in &mut block[j].grad[axis].terms {
                        *c *= inv;
                    }
                }
            }
            funcs.extend(block);
        }
        Ok(SphericalBasis { grid, l_max, funcs, offsets })
    }

    pub fn len(&self) -> usize {
        self.funcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.funcs.is_empty()
    }

    fn weights(&self) -> Vec<f64> {
        (0..self.grid.n_theta)
            .flat_map(|it| std::iter::repeat_n(self.grid.unit_weight(it), self.grid.n_phi))
            .collect()
    }

    /// Coefficients of grid data against the orthonormal basis.
    pub fn project(&self, values: &[f64]) -> Vec<f64> {
        let w = self.weights();
        self.funcs
            .iter()
            .map(|f| dot_w(values, &f.values, &w))
            .collect()
    }

    pub fn reconstruct(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.num_samples()];
        for (c, f) in coeffs.iter().zip(&self.funcs) {
            if *c != 0.0 {
                for (o, v) in out.iter_mut().zip(&f.values) {
                    *o += c * v;
                }
            }
        }
        out
    }

    pub fn eval_sum(&self, coeffs: &[f64], p: [f64; 3]) -> f64 {
        coeffs
            .iter()
            .zip(&self.funcs)
            .map(|(c, f)| c * f.poly.eval(p))
            .sum()
    }

    pub fn grad_sum(&self, coeffs: &[f64], p: [f64; 3]) -> [f64; 3] {
        let mut g = [0.0; 3];
        for (c, f) in coeffs.iter().zip(&self.funcs) {
            if *c != 0.0 {
                for axis in 0..3 {
                    g[axis] += c * f.grad[axis].eval(p);
                }
            }
        }
        g
    }

    /// Spectral `∂/∂theta` of grid data: project, then synthesize from the
    /// precomputed colatitude derivatives of the basis. Exact for data
    /// band-limited to `l_max`.
    pub fn d_theta(&self, values: &[f64]) -> Vec<f64> {
        let coeffs = self.project(values);
        let mut out = vec![0.0; self.grid.num_samples()];
        for (c, f) in coeffs.iter().zip(&self.funcs) {
            if *c != 0.0 {
                for (o, v) in out.iter_mut().zip(&f.dtheta_values) {
                    *o += c * v;
                }
            }
        }
        out
    }
}

fn dot_w(a: &[f64], b: &[f64], w: &[f64]) -> f64 {
    a.iter().zip(b).zip(w).map(|((x, y), wt)| x * y * wt).sum()
}

fn to_xyz(p: &crate::extcalc::Poly, space: &Arc<VarSpace>) -> PolyXyz {
    let ix = [space.x(1).idx(), space.x(2).idx(), space.x(3).idx()];
    let mut out = PolyXyz::default();
    for (exps, c) in p.terms() {
        let e = [exps[ix[0]] as u8, exps[ix[1]] as u8, exps[ix[2]] as u8];
        out.terms.push((e, rat_to_f64(&c.re)));
    }
    out
}

/// Degree-`l` harmonic kernel in f64 form, cached: the exact rational row
/// reduction runs once per degree for the whole process.
fn xyz_kernels(l: usize) -> Arc<Vec<PolyXyz>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<PolyXyz>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(l)
        .or_insert_with(|| {
            let space = VarSpace::jet_with_cap(3, 1, l.max(2) + 1);
            Arc::new(solid_basis(&space, l).iter().map(|p| to_xyz(p, &space)).collect())
        })
        .clone()
}

/// Shared cache of bases; contents are deterministic functions of the key.
pub fn shared_basis(n_theta: usize, n_phi: usize, l_max: usize) -> Arc<SphericalBasis> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), Arc<SphericalBasis>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry((n_theta, n_phi, l_max))
        .or_insert_with(|| {
            Arc::new(
                SphericalBasis::new(SphereGrid::new(n_theta, n_phi), l_max)
                    .expect("cached basis parameters are validated by callers"),
            )
        })
        .clone()
}

/// Differentiation band used for boundary data on an `n_theta x n_phi` grid.
pub fn data_band(n_theta: usize, n_phi: usize) -> usize {
    (n_theta - 1).min((n_phi - 1) / 2).min(16)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_weights_sum_to_sphere_area() {
        let g = SphereGrid::new(16, 32);
        let total: f64 = (0..g.n_theta)
            .map(|it| g.unit_weight(it) * g.n_phi as f64)
            .sum();
        assert!((total - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn basis_is_orthonormal() {
        let basis = SphericalBasis::new(SphereGrid::new(12, 24), 5).unwrap();
        let w = basis.weights();
        for i in 0..basis.len() {
            for j in 0..=i {
                let d = dot_w(&basis.funcs[i].values, &basis.funcs[j].values, &w);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((d - expect).abs() < 1e-11, "i={i} j={j}: {d}");
            }
        }
    }

    #[test]
    fn projection_round_trips_band_limited_data() {
        let basis = SphericalBasis::new(SphereGrid::new(12, 24), 6).unwrap();
        let g = &basis.grid;
        // f = x^2 z - y + 1/2, a spherical polynomial of degree 3
        let mut vals = vec![0.0; g.num_samples()];
        for it in 0..g.n_theta {
            for ip in 0..g.n_phi {
                let p = g.point(it, ip);
                vals[g.index(it, ip)] = p[0] * p[0] * p[2] - p[1] + 0.5;
            }
        }
        let coeffs = basis.project(&vals);
        let back = basis.reconstruct(&coeffs);
        let err = vals
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-11, "err={err}");
    }

    #[test]
    fn theta_derivative_is_spectrally_exact() {
        let basis = SphericalBasis::new(SphereGrid::new(14, 28), 6).unwrap();
        let g = basis.grid.clone();
        // f = z^2 => df/dtheta = -2 z sin(theta)
        let mut vals = vec![0.0; g.num_samples()];
        for it in 0..g.n_theta {
            for ip in 0..g.n_phi {
                let p = g.point(it, ip);
                vals[g.index(it, ip)] = p[2] * p[2];
            }
        }
        let d = basis.d_theta(&vals);
        for it in 0..g.n_theta {
            for ip in 0..g.n_phi {
                let th = g.theta[it];
                let exact = -2.0 * th.cos() * th.sin();
                assert!((d[g.index(it, ip)] - exact).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn gradient_of_projected_harmonic_matches() {
        let basis = SphericalBasis::new(SphereGrid::new(12, 24), 4).unwrap();
        let g = basis.grid.clone();
        // u = x y z is harmonic of degree 3
        let mut vals = vec![0.0; g.num_samples()];
        for it in 0..g.n_theta {
            for ip in 0..g.n_phi {
                let p = g.point(it, ip);
                vals[g.index(it, ip)] = p[0] * p[1] * p[2];
            }
        }
        let coeffs = basis.project(&vals);
        let p = g.point(3, 7);
        let grad = basis.grad_sum(&coeffs, p);
        let expect = [p[1] * p[2], p[0] * p[2], p[0] * p[1]];
        for a in 0..3 {
            assert!((grad[a] - expect[a]).abs() < 1e-11);
        }
    }
}
