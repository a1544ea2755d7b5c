//! Minimal sparse linear algebra for the finite-difference Laplace solver:
//! CSR storage, ILU(0) factorization, and BiCGSTAB.
//!
//! Single-threaded with a fixed operation order, so solves are bitwise
//! reproducible for identical inputs.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("bicgstab stagnated (rho breakdown) at iteration {0}")]
    Breakdown(usize),
    #[error("bicgstab did not reach tolerance {tol:e} in {iters} iterations (residual {residual:e})")]
    NoConvergence { iters: usize, tol: f64, residual: f64 },
}

/// Compressed sparse row matrix with sorted column indices per row.
#[derive(Debug, Clone)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl Csr {
    /// Build from per-row (col, val) lists; entries within a row are sorted
    /// and duplicates summed.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            for (c, v) in row {
                if last == Some(c) {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(cols.len());
        }
        Csr { n, row_ptr, cols, vals }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut acc = 0.0;
            for idx in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[idx] * x[self.cols[idx]];
            }
            y[i] = acc;
        }
    }

    pub fn residual_inf(&self, x: &[f64], b: &[f64]) -> f64 {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y.iter()
            .zip(b)
            .map(|(yi, bi)| (yi - bi).abs())
            .fold(0.0, f64::max)
    }
}

/// ILU(0): incomplete LU on the sparsity pattern of `a`.
pub struct Ilu0 {
    lu: Csr,
    diag_idx: Vec<usize>,
}

impl Ilu0 {
    pub fn new(a: &Csr) -> Self {
        let mut lu = a.clone();
        let n = lu.n;
        let mut diag_idx = vec![usize::MAX; n];
        for i in 0..n {
            for idx in lu.row_ptr[i]..lu.row_ptr[i + 1] {
                if lu.cols[idx] == i {
                    diag_idx[i] = idx;
                }
            }
            assert!(diag_idx[i] != usize::MAX, "zero diagonal pattern at row {i}");
        }
        // IKJ-variant restricted to the pattern.
        for i in 1..n {
            let row_start = lu.row_ptr[i];
            let row_end = lu.row_ptr[i + 1];
            for kk in row_start..row_end {
                let k = lu.cols[kk];
                if k >= i {
                    break;
                }
                let mult = lu.vals[kk] / lu.vals[diag_idx[k]];
                lu.vals[kk] = mult;
                // subtract mult*U[k, j] for j in this row's pattern, j > k
                let mut jj = kk + 1;
                let (ks, ke) = (lu.row_ptr[k], lu.row_ptr[k + 1]);
                for uidx in ks..ke {
                    let j = lu.cols[uidx];
                    if j <= k {
                        continue;
                    }
                    while jj < row_end && lu.cols[jj] < j {
                        jj += 1;
                    }
                    if jj < row_end && lu.cols[jj] == j {
                        let uval = lu.vals[uidx];
                        lu.vals[jj] -= mult * uval;
                    }
                }
            }
        }
        Ilu0 { lu, diag_idx }
    }

    /// Solve `LU z = r` in place.
    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        let n = self.lu.n;
        z.copy_from_slice(r);
        for i in 0..n {
            let mut acc = z[i];
            for idx in self.lu.row_ptr[i]..self.diag_idx[i] {
                acc -= self.lu.vals[idx] * z[self.lu.cols[idx]];
            }
            z[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = z[i];
            for idx in self.diag_idx[i] + 1..self.lu.row_ptr[i + 1] {
                acc -= self.lu.vals[idx] * z[self.lu.cols[idx]];
            }
            z[i] = acc / self.lu.vals[self.diag_idx[i]];
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Preconditioned BiCGSTAB, right preconditioning with ILU(0).
///
/// Converges to `||b - A x||_2 <= tol * ||b||_2` (with an absolute floor for
/// zero right-hand sides) or reports failure.
pub fn bicgstab(a: &Csr, b: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>, SolveError> {
    let n = a.n;
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let target = tol * bnorm;
    let pre = Ilu0::new(a);

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let r0 = r.clone();
    let mut rho = 1.0;
    let mut alpha = 1.0;
    let mut omega = 1.0;
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut phat = vec![0.0; n];
    let mut shat = vec![0.0; n];
    let mut t = vec![0.0; n];

    for it in 1..=max_iter {
        let rho_new = dot(&r0, &r);
        if rho_new.abs() < 1e-300 {
            return Err(SolveError::Breakdown(it));
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        pre.apply(&p, &mut phat);
        a.matvec(&phat, &mut v);
        alpha = rho / dot(&r0, &v);
        let s: Vec<f64> = r.iter().zip(&v).map(|(ri, vi)| ri - alpha * vi).collect();
        if norm2(&s) <= target {
            for i in 0..n {
                x[i] += alpha * phat[i];
            }
            return Ok(x);
        }
        pre.apply(&s, &mut shat);
        a.matvec(&shat, &mut t);
        let tt = dot(&t, &t);
        omega = dot(&t, &s) / tt;
        for i in 0..n {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        if norm2(&r) <= target {
            return Ok(x);
        }
    }
    // Final true-residual check before giving up.
    let res = {
        let mut y = vec![0.0; n];
        a.matvec(&x, &mut y);
        let diff: Vec<f64> = b.iter().zip(&y).map(|(bi, yi)| bi - yi).collect();
        norm2(&diff)
    };
    if res <= target {
        Ok(x)
    } else {
        Err(SolveError::NoConvergence { iters: max_iter, tol, residual: res / bnorm })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 1-D Dirichlet Laplacian, exact solution known.
    fn lap1d(n: usize) -> (Csr, Vec<f64>, Vec<f64>) {
        let h = 1.0 / (n + 1) as f64;
        let mut rows = Vec::with_capacity(n);
        let mut b = vec![0.0; n];
        let mut exact = vec![0.0; n];
        for i in 0..n {
            let x = (i + 1) as f64 * h;
            exact[i] = x * (1.0 - x);
            let mut row = vec![(i, 2.0 / (h * h))];
            if i > 0 {
                row.push((i - 1, -1.0 / (h * h)));
            }
            if i + 1 < n {
                row.push((i + 1, -1.0 / (h * h)));
            }
            rows.push(row);
            b[i] = 2.0; // -u'' = 2
        }
        (Csr::from_rows(rows), b, exact)
    }

    #[test]
    fn bicgstab_solves_laplacian() {
        let (a, b, exact) = lap1d(200);
        let x = bicgstab(&a, &b, 1e-13, 10_000).unwrap();
        let err = x
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "err={err}");
        assert!(a.residual_inf(&x, &b) < 1e-7);
    }

    #[test]
    fn zero_rhs_is_zero_solution() {
        let (a, _, _) = lap1d(50);
        let x = bicgstab(&a, &vec![0.0; 50], 1e-13, 100).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }
}
