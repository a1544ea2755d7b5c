//! Spectral calculus for smooth periodic data sampled uniformly on
//! `s in [0, 2*pi)`.
//!
//! All routines use the complex FFT from `rustfft` with the coefficient
//! convention `c_k = (1/N) sum_j f(s_j) e^{-i k s_j}`, bins ordered
//! `k = 0, 1, ..., N/2-1, -N/2, ..., -1`.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Fourier coefficients of real periodic samples (forward DFT / N).
pub fn fourier_coeffs(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(&mut buf, false);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Real samples from Fourier coefficients (inverse of [`fourier_coeffs`]).
pub fn fourier_values(coeffs: &[Complex64]) -> Vec<f64> {
    let mut buf = coeffs.to_vec();
    fft_in_place(&mut buf, true);
    buf.iter().map(|c| c.re).collect()
}

fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    fft.process(buf);
}

/// Signed wavenumber of FFT bin `j` for length `n` (Nyquist bin -> `-n/2`).
pub fn wavenumber(j: usize, n: usize) -> i64 {
    if j <= n / 2 - (n + 1) % 2 && j <= (n - 1) / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// d/ds of periodic samples, computed in coefficient space.
///
/// For even `n` the Nyquist mode is differentiated to zero (the standard
/// choice that keeps the derivative of real data real).
pub fn derivative(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let mut coeffs = fourier_coeffs(samples);
    for (j, c) in coeffs.iter_mut().enumerate() {
        let k = wavenumber(j, n);
        if n % 2 == 0 && j == n / 2 {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c *= Complex64::new(0.0, k as f64);
        }
    }
    let mut buf = coeffs;
    fft_in_place(&mut buf, true);
    buf.iter().map(|c| c.re).collect()
}

/// Periodic antiderivative with the mean mode dropped, pinned to zero at
/// the first sample. The input must have (numerically) zero mean for the
/// result to be a genuine antiderivative.
pub fn antiderivative_zero_start(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let mut coeffs = fourier_coeffs(samples);
    for (j, c) in coeffs.iter_mut().enumerate() {
        let k = wavenumber(j, n);
        if k == 0 || (n % 2 == 0 && j == n / 2) {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c /= Complex64::new(0.0, k as f64);
        }
    }
    let mut vals = {
        let mut buf = coeffs;
        fft_in_place(&mut buf, true);
        buf.iter().map(|c| c.re).collect::<Vec<_>>()
    };
    let v0 = vals[0];
    for v in &mut vals {
        *v -= v0;
    }
    vals
}

/// Mean of samples (the `k = 0` Fourier coefficient).
pub fn mean(samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() / samples.len() as f64
}

/// Evaluate the trigonometric interpolant of `samples` at parameter `s`.
pub fn interp_at(coeffs: &[Complex64], s: f64) -> f64 {
    let n = coeffs.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, c) in coeffs.iter().enumerate() {
        let k = wavenumber(j, n);
        if n % 2 == 0 && j == n / 2 {
            // Split the Nyquist bin symmetrically: real interpolant.
            acc += c * (Complex64::new(0.0, k as f64 * s).exp()
                + Complex64::new(0.0, -(k as f64) * s).exp())
                * 0.5;
        } else {
            acc += c * Complex64::new(0.0, k as f64 * s).exp();
        }
    }
    acc.re
}

/// Zero-padded resampling of periodic samples onto `n_out >= n` points.
pub fn upsample(samples: &[f64], n_out: usize) -> Vec<f64> {
    let n = samples.len();
    assert!(n_out >= n, "upsample target must not be smaller");
    let coeffs = fourier_coeffs(samples);
    let mut padded = vec![Complex64::new(0.0, 0.0); n_out];
    for (j, c) in coeffs.iter().enumerate() {
        let k = wavenumber(j, n);
        if n % 2 == 0 && j == n / 2 {
            // Nyquist energy split across +-n/2 keeps the interpolant real.
            let idx_pos = (n / 2) % n_out;
            let idx_neg = n_out - n / 2;
            padded[idx_pos] += c * 0.5;
            padded[idx_neg % n_out] += c * 0.5;
        } else {
            let idx = if k >= 0 { k as usize } else { n_out - k.unsigned_abs() as usize };
            padded[idx] = *c;
        }
    }
    let mut buf = padded;
    fft_in_place(&mut buf, true);
    buf.iter().map(|c| c.re).collect()
}

/// Relative high-frequency content: the fraction of spectral mass carried by
/// the top third of wavenumbers. Used as a sampled-smoothness warning.
pub fn tail_energy_fraction(samples: &[f64]) -> f64 {
    let n = samples.len();
    let coeffs = fourier_coeffs(samples);
    let cutoff = (n / 2) as i64 * 2 / 3;
    let mut total = 0.0;
    let mut tail = 0.0;
    for (j, c) in coeffs.iter().enumerate() {
        let k = wavenumber(j, n).abs();
        if k == 0 {
            continue;
        }
        let e = c.norm_sqr();
        total += e;
        if k >= cutoff.max(1) {
            tail += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}
