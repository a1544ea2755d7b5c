//! Sparse multivariate polynomials with Gaussian-rational coefficients.

use super::scalar::{fmt_scalar, s_is_zero, s_to_f64, Scalar};
use super::vars::{Var, VarSpace};
use super::ExtError;
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Dense exponent vector over the space's variable order.
pub type Exps = Vec<u32>;

/// Polynomial in canonical form: exponent vector -> nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    space: Arc<VarSpace>,
    terms: BTreeMap<Exps, Scalar>,
}

impl Poly {
    pub fn zero(space: &Arc<VarSpace>) -> Self {
        Poly { space: space.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(space: &Arc<VarSpace>, c: Scalar) -> Self {
        let mut p = Poly::zero(space);
        if !s_is_zero(&c) {
            p.terms.insert(vec![0; space.dim()], c);
        }
        p
    }

    pub fn one(space: &Arc<VarSpace>) -> Self {
        Poly::constant(space, Scalar::one())
    }

    pub fn var(space: &Arc<VarSpace>, v: Var) -> Self {
        let mut exps = vec![0; space.dim()];
        exps[v.idx()] = 1;
        let mut p = Poly::zero(space);
        p.terms.insert(exps, Scalar::one());
        p
    }

    pub fn monomial(space: &Arc<VarSpace>, exps: Exps, c: Scalar) -> Self {
        assert_eq!(exps.len(), space.dim());
        let mut p = Poly::zero(space);
        if !s_is_zero(&c) {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, exps: Exps, c: Scalar) {
        if s_is_zero(&c) {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if s_is_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.space, other.space, "polynomials over different spaces");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if s_is_zero(c) {
            return Poly::zero(&self.space);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c.clone();
        }
        out
    }

    /// Product, failing if any term would exceed the space's degree cap.
    pub fn mul(&self, other: &Poly) -> Result<Poly, ExtError> {
        assert_eq!(self.space, other.space, "polynomials over different spaces");
        let cap = self.space.max_degree();
        let mut out = Poly::zero(&self.space);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let deg = exps.iter().sum::<u32>() as usize;
                if deg > cap {
                    return Err(ExtError::DegreeCap { degree: deg, cap });
                }
                out.add_term(exps, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Result<Poly, ExtError> {
        let mut out = Poly::one(&self.space);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Partial derivative; never exceeds the degree cap.
    pub fn diff(&self, v: Var) -> Poly {
        let mut out = Poly::zero(&self.space);
        for (e, c) in &self.terms {
            let k = e[v.idx()];
            if k == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[v.idx()] -= 1;
            out.add_term(exps, c.clone() * super::scalar::s_int(k as i64));
        }
        out
    }

    /// Complex conjugate of all coefficients.
    pub fn conj(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = super::scalar::s_conj(c);
        }
        out
    }

    /// Real part (coefficient-wise).
    pub fn re_part(&self) -> Poly {
        let mut out = Poly::zero(&self.space);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), Scalar::new(c.re.clone(), Zero::zero()));
        }
        out
    }

    /// Imaginary part (coefficient-wise, as a real polynomial).
    pub fn im_part(&self) -> Poly {
        let mut out = Poly::zero(&self.space);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), Scalar::new(c.im.clone(), Zero::zero()));
        }
        out
    }

    /// Substitute `point` for the variables, in f64 arithmetic.
    pub fn eval_f64(&self, point: &[f64]) -> Complex64 {
        assert_eq!(point.len(), self.space.dim());
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut mono = 1.0;
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    mono *= point[j];
                }
            }
            let (re, im) = s_to_f64(c);
            acc += Complex64::new(re * mono, im * mono);
        }
        acc
    }

    /// Coefficient terms as (exponents, f64 complex) for compiled evaluation.
    pub fn compiled_terms(&self) -> Vec<(Exps, Complex64)> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let (re, im) = s_to_f64(c);
                (e.clone(), Complex64::new(re, im))
            })
            .collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let cs = fmt_scalar(c);
            let (lead, body) = if let Some(stripped) = cs.strip_prefix('-') {
                ("-", stripped.to_string())
            } else {
                ("+", cs)
            };
            if first {
                if lead == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {lead} ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_unit = body == "1";
            if !is_unit || e.iter().all(|&k| k == 0) {
                factors.push(body);
            }
            for (j, &k) in e.iter().enumerate() {
                if k == 1 {
                    factors.push(self.space.name(Var(j as u32)).to_string());
                } else if k > 1 {
                    factors.push(format!("{}^{}", self.space.name(Var(j as u32)), k));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extcalc::scalar::{s_i, s_int, s_rat};

    #[test]
    fn arithmetic_and_cancellation() {
        let sp = VarSpace::jet(2, 1);
        let x1 = Poly::var(&sp, sp.x(1));
        let x2 = Poly::var(&sp, sp.x(2));
        let p = x1.mul(&x1).unwrap().sub(&x2.mul(&x2).unwrap());
        let q = x1.add(&x2);
        let r = x1.sub(&x2);
        assert_eq!(q.mul(&r).unwrap(), p);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn degree_cap_is_enforced() {
        let sp = VarSpace::jet_with_cap(2, 1, 3);
        let x1 = Poly::var(&sp, sp.x(1));
        let sq = x1.mul(&x1).unwrap();
        assert!(sq.mul(&sq).is_err());
    }

    #[test]
    fn differentiation() {
        let sp = VarSpace::jet(2, 1);
        let x1 = Poly::var(&sp, sp.x(1));
        let u = Poly::var(&sp, sp.u(1));
        // d/dx1 (x1^2 u) = 2 x1 u
        let p = x1.mul(&x1).unwrap().mul(&u).unwrap();
        let expect = x1.mul(&u).unwrap().scale(&s_int(2));
        assert_eq!(p.diff(sp.x(1)), expect);
        assert!(p.diff(sp.p(1, 2)).is_zero());
    }

    #[test]
    fn display_canonical() {
        let sp = VarSpace::jet(2, 1);
        let x1 = Poly::var(&sp, sp.x(1));
        let one = Poly::one(&sp);
        let p = x1.mul(&x1).unwrap().scale(&s_rat(3, 2)).sub(&one);
        assert_eq!(p.to_string(), "-1 + 3/2*x1^2");
        let q = x1.scale(&s_i());
        assert_eq!(q.to_string(), "i*x1");
    }

    #[test]
    fn eval_matches_symbolic() {
        let sp = VarSpace::jet(2, 1);
        let x1 = Poly::var(&sp, sp.x(1));
        let x2 = Poly::var(&sp, sp.x(2));
        let p = x1.mul(&x1).unwrap().sub(&x2.mul(&x2).unwrap());
        let mut pt = vec![0.0; sp.dim()];
        pt[0] = 0.5;
        pt[1] = -2.0;
        let v = p.eval_f64(&pt);
        assert!((v.re - (0.25 - 4.0)).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }
}
