//! Exact harmonic polynomial bases in the base variables of a jet space.
//!
//! - Plane (`n = 2`): `1, Re (x1 + i x2)^k, Im (x1 + i x2)^k`.
//! - Space (`n = 3`): for each degree `l`, the kernel of the Laplacian on
//!   homogeneous degree-`l` polynomials, computed by exact rational row
//!   reduction. Dimension `2l + 1` per degree.
//!
//! The n = 3 basis is not orthogonal on the sphere (no square roots appear
//! here); it is exact and spans the same space as the real solid harmonics,
//! which is all the moment conditions need.

use super::jet::laplacian;
use super::poly::Poly;
use super::scalar::{s_i, s_int, Rat, Scalar};
use super::vars::VarSpace;
use super::ExtError;
use num_traits::Zero;
use std::sync::Arc;

/// `Re (x1 + i x2)^k` and `Im (x1 + i x2)^k` as exact polynomials.
pub fn plane_pair(space: &Arc<VarSpace>, k: usize) -> Result<(Poly, Poly), ExtError> {
    let z = Poly::var(space, space.x(1)).add(&Poly::var(space, space.x(2)).scale(&s_i()));
    let zk = z.pow(k)?;
    Ok((zk.re_part(), zk.im_part()))
}

/// Plane harmonic basis up to degree `k_max`: `{1} ∪ {Re z^k, Im z^k}`,
/// `2*k_max + 1` polynomials, all with `Δ H = 0`.
pub fn plane_basis(space: &Arc<VarSpace>, k_max: usize) -> Result<Vec<Poly>, ExtError> {
    let mut out = vec![Poly::one(space)];
    for k in 1..=k_max {
        let (re, im) = plane_pair(space, k)?;
        out.push(re);
        out.push(im);
    }
    Ok(out)
}

/// Homogeneous degree-`l` exponent triples in a fixed deterministic order.
fn degree_monomials(l: usize) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for i in (0..=l).rev() {
        for j in (0..=l - i).rev() {
            let k = l - i - j;
            out.push((i as u32, j as u32, k as u32));
        }
    }
    out
}

fn monomial_poly(space: &Arc<VarSpace>, e: (u32, u32, u32), c: Scalar) -> Poly {
    let mut exps = vec![0u32; space.dim()];
    exps[space.x(1).idx()] = e.0;
    exps[space.x(2).idx()] = e.1;
    exps[space.x(3).idx()] = e.2;
    Poly::monomial(space, exps, c)
}

/// Basis of harmonic homogeneous polynomials of degree `l` in `x1, x2, x3`.
pub fn solid_basis(space: &Arc<VarSpace>, l: usize) -> Vec<Poly> {
    let (n, _) = space.jet_dims();
    assert_eq!(n, 3, "solid harmonics need a three dimensional base");
    let monos = degree_monomials(l);
    if l < 2 {
        // Laplacian is identically zero in degree 0 and 1.
        return monos
            .into_iter()
            .map(|e| monomial_poly(space, e, s_int(1)))
            .collect();
    }
    let targets = degree_monomials(l - 2);
    let tindex = |e: (u32, u32, u32)| targets.iter().position(|&t| t == e).unwrap();

    // Matrix of the Laplacian: rows = target monomials, cols = source.
    let rows = targets.len();
    let cols = monos.len();
    let mut a = vec![vec![Rat::zero(); cols]; rows];
    for (c, &(i, j, k)) in monos.iter().enumerate() {
        if i >= 2 {
            a[tindex((i - 2, j, k))][c] += Rat::from_integer(((i * (i - 1)) as i64).into());
        }
        if j >= 2 {
            a[tindex((i, j - 2, k))][c] += Rat::from_integer(((j * (j - 1)) as i64).into());
        }
        if k >= 2 {
            a[tindex((i, j, k - 2))][c] += Rat::from_integer(((k * (k - 1)) as i64).into());
        }
    }

    let kernel = rational_kernel(&mut a, cols);
    assert_eq!(kernel.len(), 2 * l + 1, "harmonic space of degree {l} has dimension 2l+1");
    kernel
        .into_iter()
        .map(|coeffs| {
            let mut p = Poly::zero(space);
            for (c, coef) in coeffs.into_iter().enumerate() {
                if !coef.is_zero() {
                    p = p.add(&monomial_poly(space, monos[c], Scalar::new(coef, Rat::zero())));
                }
            }
            p
        })
        .collect()
}

/// Kernel basis via exact RREF; `a` is destroyed.
fn rational_kernel(a: &mut [Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let rows = a.len();
    let mut pivot_col_of_row = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        // find pivot in column c at or below row r
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() / inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let sub = f.clone() * a[r][j].clone();
                    a[i][j] = a[i][j].clone() - sub;
                }
            }
        }
        pivot_col_of_row.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::from_integer(1.into());
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[row][free].clone();
        }
        kernel.push(v);
    }
    kernel
}

/// All solid-harmonic basis polynomials with degree `l <= l_max`,
/// `(l_max + 1)^2` in total, grouped by degree.
pub fn solid_basis_upto(space: &Arc<VarSpace>, l_max: usize) -> Vec<Vec<Poly>> {
    (0..=l_max).map(|l| solid_basis(space, l)).collect()
}

/// Debug-time validation that a polynomial is harmonic.
pub fn check_harmonic(p: &Poly) -> Result<(), ExtError> {
    if laplacian(p).is_zero() {
        Ok(())
    } else {
        Err(ExtError::NotHarmonic(p.to_string()))
    }
}
