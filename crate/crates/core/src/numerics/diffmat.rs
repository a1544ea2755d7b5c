//! Dense differentiation matrices for polynomial interpolation nodes,
//! built from barycentric weights. Used for the Gauss–Legendre colatitude
//! grid on the sphere and the radial Chebyshev grid of the disk
//! reconstruction.

/// Barycentric weights for distinct nodes, with internal rescaling so the
/// products stay in range.
fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let span = nodes[n - 1] - nodes[0];
    let scale = 4.0 / span.abs().max(f64::MIN_POSITIVE);
    let mut w = vec![1.0; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                w[i] *= (nodes[i] - nodes[j]) * scale;
            }
        }
        w[i] = 1.0 / w[i];
    }
    w
}

/// First-derivative collocation matrix `D` with `(D f)_i ≈ f'(x_i)` for the
/// polynomial interpolant through the nodes.
pub fn differentiation_matrix(nodes: &[f64]) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let w = barycentric_weights(nodes);
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if i != j {
                let v = (w[j] / w[i]) / (nodes[i] - nodes[j]);
                d[i][j] = v;
                row_sum += v;
            }
        }
        // Exactness on constants pins the diagonal.
        d[i][i] = -row_sum;
    }
    d
}

/// Apply a dense matrix to a vector.
pub fn matvec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad::{chebyshev_lobatto, gauss_legendre};

    #[test]
    fn differentiates_polynomials_exactly_on_gl_nodes() {
        let (x, _) = gauss_legendre(12);
        let d = differentiation_matrix(&x);
        let f: Vec<f64> = x.iter().map(|&t| t.powi(7) - 3.0 * t * t).collect();
        let df = matvec(&d, &f);
        for (i, &t) in x.iter().enumerate() {
            let exact = 7.0 * t.powi(6) - 6.0 * t;
            assert!((df[i] - exact).abs() < 1e-10, "i={i}");
        }
    }

    #[test]
    fn differentiates_high_degree_on_chebyshev_nodes() {
        let x = chebyshev_lobatto(0.0, 1.0, 40);
        let d = differentiation_matrix(&x);
        let f: Vec<f64> = x.iter().map(|&t| t.powi(30)).collect();
        let df = matvec(&d, &f);
        for (i, &t) in x.iter().enumerate() {
            let exact = 30.0 * t.powi(29);
            assert!((df[i] - exact).abs() < 1e-8, "i={i}: {} vs {}", df[i], exact);
        }
    }
}
