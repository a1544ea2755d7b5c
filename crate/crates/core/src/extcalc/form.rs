//! Differential forms with polynomial coefficients, in canonical form:
//! strictly increasing differential index tuples, zero coefficients pruned.

use super::poly::Poly;
use super::scalar::Scalar;
use super::vars::{Var, VarSpace};
use super::ExtError;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// A degree-k form: map from sorted differential tuples to coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyForm {
    space: Arc<VarSpace>,
    degree: usize,
    terms: BTreeMap<Vec<Var>, Poly>,
}

/// Sort a differential tuple, returning the permutation sign, or `None` if
/// an index repeats (the term vanishes).
fn sort_signed(mut idx: Vec<Var>) -> Option<(Vec<Var>, i32)> {
    let mut sign = 1;
    // insertion sort with inversion counting; tuples are tiny
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in idx.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((idx, sign))
}

impl PolyForm {
    pub fn zero(space: &Arc<VarSpace>, degree: usize) -> Self {
        PolyForm { space: space.clone(), degree, terms: BTreeMap::new() }
    }

    /// Degree-0 form from a polynomial.
    pub fn from_poly(p: Poly) -> Self {
        let space = p.space().clone();
        let mut f = PolyForm::zero(&space, 0);
        if !p.is_zero() {
            f.terms.insert(vec![], p);
        }
        f
    }

    /// The 1-form `dv`.
    pub fn d_var(space: &Arc<VarSpace>, v: Var) -> Self {
        let mut f = PolyForm::zero(space, 1);
        f.terms.insert(vec![v], Poly::one(space));
        f
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Var>, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Insert `coef * d(idx)` reducing to canonical order.
    pub fn add_term(&mut self, idx: Vec<Var>, coef: Poly) {
        assert_eq!(idx.len(), self.degree, "tuple length must match form degree");
        if coef.is_zero() {
            return;
        }
        let Some((sorted, sign)) = sort_signed(idx) else {
            return;
        };
        let signed = if sign < 0 { coef.neg() } else { coef };
        match self.terms.entry(sorted) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(signed);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&signed);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        assert_eq!(self.space, other.space, "forms over different spaces");
        assert_eq!(self.degree, other.degree, "forms of different degree");
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> PolyForm {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> PolyForm {
        let mut out = PolyForm::zero(&self.space, self.degree);
        for (idx, p) in &self.terms {
            out.add_term(idx.clone(), p.scale(c));
        }
        out
    }

    pub fn scale_poly(&self, p: &Poly) -> Result<PolyForm, ExtError> {
        let mut out = PolyForm::zero(&self.space, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.mul(p)?);
        }
        Ok(out)
    }

    pub fn conj(&self) -> PolyForm {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    /// Real part: `(F + conj F)/2` done coefficient-wise.
    pub fn re_part(&self) -> PolyForm {
        let mut out = PolyForm::zero(&self.space, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.re_part());
        }
        out
    }

    /// Exterior (wedge) product.
    pub fn wedge(&self, other: &PolyForm) -> Result<PolyForm, ExtError> {
        if self.space != other.space {
            return Err(ExtError::SpaceMismatch);
        }
        let mut out = PolyForm::zero(&self.space, self.degree + other.degree);
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                let mut idx = ia.clone();
                idx.extend_from_slice(ib);
                out.add_term(idx, ca.mul(cb)?);
            }
        }
        Ok(out)
    }

    /// Exterior derivative. Degree +1, satisfies `d(d(a)) = 0` and the
    /// graded Leibniz rule by construction.
    pub fn extd(&self) -> PolyForm {
        let dim = self.space.dim();
        let mut out = PolyForm::zero(&self.space, self.degree + 1);
        for (idx, c) in &self.terms {
            for v in 0..dim {
                let var = Var(v as u32);
                let dc = c.diff(var);
                if dc.is_zero() {
                    continue;
                }
                let mut tuple = Vec::with_capacity(idx.len() + 1);
                tuple.push(var);
                tuple.extend_from_slice(idx);
                out.add_term(tuple, dc);
            }
        }
        out
    }

    /// Hodge star on base forms of a jet space (differentials among the
    /// `dx^i` only), with respect to the flat metric and volume form
    /// `dx^1 ∧ ... ∧ dx^n`.
    pub fn base_star(&self) -> Result<PolyForm, ExtError> {
        let (n, _) = match self.space.kind() {
            super::vars::SpaceKind::Jet { n, m } => (n, m),
            _ => return Err(ExtError::NotBaseForm),
        };
        for idx in self.terms.keys() {
            if idx.iter().any(|v| !self.space.is_base(*v)) {
                return Err(ExtError::NotBaseForm);
            }
        }
        if self.degree > n {
            // k > n base forms are zero; the star of zero is zero.
            return Ok(PolyForm::zero(&self.space, 0));
        }
        let mut out = PolyForm::zero(&self.space, n - self.degree);
        for (idx, c) in &self.terms {
            // complement of idx in {0..n-1}, and the sign of the permutation
            // (idx, complement) relative to (0..n-1)
            let mut complement: Vec<Var> = Vec::with_capacity(n - idx.len());
            for i in 0..n {
                let v = Var(i as u32);
                if !idx.contains(&v) {
                    complement.push(v);
                }
            }
            let mut perm: Vec<Var> = idx.clone();
            perm.extend_from_slice(&complement);
            let sign = permutation_sign(&perm);
            let coef = if sign < 0 { c.neg() } else { c.clone() };
            out.add_term(complement, coef);
        }
        Ok(out)
    }

    /// Evaluate the form at `point` on `k` tangent vectors, in f64.
    pub fn eval_f64(&self, point: &[f64], vectors: &[&[f64]]) -> Complex64 {
        assert_eq!(vectors.len(), self.degree);
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, c) in &self.terms {
            let det = minor_det(idx, vectors);
            if det != 0.0 {
                acc += c.eval_f64(point) * det;
            }
        }
        acc
    }

    /// Precompile for repeated numeric evaluation.
    pub fn compile(&self) -> CompiledForm {
        CompiledForm {
            degree: self.degree,
            dim: self.space.dim(),
            terms: self
                .terms
                .iter()
                .map(|(idx, c)| (idx.clone(), c.compiled_terms()))
                .collect(),
        }
    }
}

fn permutation_sign(perm: &[Var]) -> i32 {
    let mut sign = 1;
    let mut v: Vec<u32> = perm.iter().map(|x| x.0).collect();
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

fn minor_det(idx: &[Var], vectors: &[&[f64]]) -> f64 {
    match idx.len() {
        0 => 1.0,
        1 => vectors[0][idx[0].idx()],
        2 => {
            let (a, b) = (idx[0].idx(), idx[1].idx());
            vectors[0][a] * vectors[1][b] - vectors[0][b] * vectors[1][a]
        }
        3 => {
            let (a, b, c) = (idx[0].idx(), idx[1].idx(), idx[2].idx());
            let m = |r: usize, col: usize| vectors[r][col];
            m(0, a) * (m(1, b) * m(2, c) - m(1, c) * m(2, b))
                - m(0, b) * (m(1, a) * m(2, c) - m(1, c) * m(2, a))
                + m(0, c) * (m(1, a) * m(2, b) - m(1, b) * m(2, a))
        }
        k => panic!("numeric evaluation not implemented for degree {k}"),
    }
}

/// Numeric-ready copy of a form: exponent vectors and f64 coefficients.
#[derive(Debug, Clone)]
pub struct CompiledForm {
    degree: usize,
    dim: usize,
    terms: Vec<(Vec<Var>, Vec<(Vec<u32>, Complex64)>)>,
}

impl CompiledForm {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, point: &[f64], vectors: &[&[f64]]) -> Complex64 {
        debug_assert_eq!(point.len(), self.dim);
        debug_assert_eq!(vectors.len(), self.degree);
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, poly) in &self.terms {
            let det = minor_det(idx, vectors);
            if det == 0.0 {
                continue;
            }
            let mut val = Complex64::new(0.0, 0.0);
            for (exps, c) in poly {
                let mut mono = 1.0;
                for (j, &k) in exps.iter().enumerate() {
                    for _ in 0..k {
                        mono *= point[j];
                    }
                }
                val += c * mono;
            }
            acc += val * det;
        }
        acc
    }
}

/// Polynomial map between variable spaces, one component per target
/// variable; supports pullback of forms.
#[derive(Debug, Clone)]
pub struct PolyMap {
    source: Arc<VarSpace>,
    target: Arc<VarSpace>,
    comps: Vec<Poly>,
}

impl PolyMap {
    pub fn new(source: &Arc<VarSpace>, target: &Arc<VarSpace>, comps: Vec<Poly>) -> Result<Self, ExtError> {
        if comps.len() != target.dim() {
            return Err(ExtError::ArityMismatch { expected: target.dim(), got: comps.len() });
        }
        for c in &comps {
            if c.space() != source {
                return Err(ExtError::SpaceMismatch);
            }
        }
        Ok(PolyMap { source: source.clone(), target: target.clone(), comps })
    }

    pub fn identity(space: &Arc<VarSpace>) -> Self {
        let comps = (0..space.dim()).map(|i| Poly::var(space, Var(i as u32))).collect();
        PolyMap { source: space.clone(), target: space.clone(), comps }
    }

    pub fn source(&self) -> &Arc<VarSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VarSpace> {
        &self.target
    }

    pub fn component(&self, v: Var) -> &Poly {
        &self.comps[v.idx()]
    }

    /// Substitute the map's components into a polynomial on the target.
    pub fn pull_poly(&self, p: &Poly) -> Result<Poly, ExtError> {
        if p.space() != &self.target {
            return Err(ExtError::SpaceMismatch);
        }
        let mut out = Poly::zero(&self.source);
        for (exps, c) in p.terms() {
            let mut term = Poly::constant(&self.source, c.clone());
            for (j, &k) in exps.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&self.comps[j].pow(k as usize)?)?;
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Pullback of a form: an algebra homomorphism commuting with `extd`.
    pub fn pullback(&self, form: &PolyForm) -> Result<PolyForm, ExtError> {
        if form.space() != &self.target {
            return Err(ExtError::SpaceMismatch);
        }
        let mut out = PolyForm::zero(&self.source, form.degree());
        for (idx, c) in form.terms() {
            let coef = self.pull_poly(c)?;
            if coef.is_zero() {
                continue;
            }
            // wedge of the differentials of the mapped components
            let mut wedge = PolyForm::from_poly(coef);
            for v in idx {
                let df = PolyForm::from_poly(self.comps[v.idx()].clone()).extd();
                wedge = wedge.wedge(&df)?;
            }
            out = out.add(&wedge);
        }
        Ok(out)
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if idx.is_empty() {
                write!(f, "({c})")?;
            } else {
                let wedge = idx
                    .iter()
                    .map(|v| format!("d{}", self.space.name(*v)))
                    .collect::<Vec<_>>()
                    .join("^");
                write!(f, "({c}) {wedge}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extcalc::scalar::s_int;

    fn jet21() -> Arc<VarSpace> {
        VarSpace::jet(2, 1)
    }

    #[test]
    fn wedge_anticommutes_and_kills_repeats() {
        let sp = jet21();
        let dx1 = PolyForm::d_var(&sp, sp.x(1));
        let dx2 = PolyForm::d_var(&sp, sp.x(2));
        let a = dx1.wedge(&dx2).unwrap();
        let b = dx2.wedge(&dx1).unwrap();
        assert_eq!(a, b.neg());
        assert!(dx1.wedge(&dx1).unwrap().is_zero());
    }

    #[test]
    fn scalar_coefficient_carries_through_wedge() {
        let sp = jet21();
        let x1 = Poly::var(&sp, sp.x(1));
        let mut a = PolyForm::zero(&sp, 1);
        a.add_term(vec![sp.x(2)], x1.clone()); // x1 dx2
        let dp = PolyForm::d_var(&sp, sp.p(1, 1));
        let w = a.wedge(&dp).unwrap();
        let mut expect = PolyForm::zero(&sp, 2);
        expect.add_term(vec![sp.x(2), sp.p(1, 1)], x1);
        assert_eq!(w, expect);
    }

    #[test]
    fn extd_squares_to_zero() {
        let sp = jet21();
        // f = x1 * u1 * p1_2
        let f = Poly::var(&sp, sp.x(1))
            .mul(&Poly::var(&sp, sp.u(1)))
            .unwrap()
            .mul(&Poly::var(&sp, sp.p(1, 2)))
            .unwrap();
        let df = PolyForm::from_poly(f).extd();
        assert!(df.extd().is_zero());
    }

    #[test]
    fn extd_of_x1_dx2() {
        let sp = jet21();
        let mut a = PolyForm::zero(&sp, 1);
        a.add_term(vec![sp.x(2)], Poly::var(&sp, sp.x(1)));
        let da = a.extd();
        let dx1 = PolyForm::d_var(&sp, sp.x(1));
        let dx2 = PolyForm::d_var(&sp, sp.x(2));
        assert_eq!(da, dx1.wedge(&dx2).unwrap());
    }

    #[test]
    fn base_star_in_two_and_three_dims() {
        let sp = jet21();
        let dx1 = PolyForm::d_var(&sp, sp.x(1));
        let dx2 = PolyForm::d_var(&sp, sp.x(2));
        assert_eq!(dx1.base_star().unwrap(), dx2);
        assert_eq!(dx2.base_star().unwrap(), dx1.neg());
        // *(1) = omega
        let one = PolyForm::from_poly(Poly::one(&sp));
        assert_eq!(one.base_star().unwrap(), dx1.wedge(&dx2).unwrap());

        let sp3 = VarSpace::jet(3, 1);
        let d1 = PolyForm::d_var(&sp3, sp3.x(1));
        let d2 = PolyForm::d_var(&sp3, sp3.x(2));
        let d3 = PolyForm::d_var(&sp3, sp3.x(3));
        // *dx2 = -dx1 ∧ dx3
        assert_eq!(d2.base_star().unwrap(), d1.wedge(&d3).unwrap().neg());
        // du is not a base form
        let du = PolyForm::d_var(&sp3, sp3.u(1));
        assert!(matches!(du.base_star(), Err(ExtError::NotBaseForm)));
    }

    #[test]
    fn base_star_twice_is_signed_identity() {
        for n in [2usize, 3] {
            let sp = VarSpace::jet(n, 1);
            for k in 0..=n {
                // try a basis k-form
                let idx: Vec<Var> = (0..k).map(|i| sp.x(i + 1)).collect();
                let mut f = PolyForm::zero(&sp, k);
                f.add_term(idx, Poly::one(&sp));
                let ss = f.base_star().unwrap().base_star().unwrap();
                let sign = if (k * (n - k)) % 2 == 0 { 1 } else { -1 };
                assert_eq!(ss, f.scale(&s_int(sign)), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn pullback_identity_and_naturality() {
        let sp = jet21();
        let id = PolyMap::identity(&sp);
        let mut a = PolyForm::zero(&sp, 1);
        a.add_term(vec![sp.x(2)], Poly::var(&sp, sp.x(1)));
        a.add_term(vec![sp.p(1, 1)], Poly::var(&sp, sp.u(1)));
        assert_eq!(id.pullback(&a).unwrap(), a);
        // pullback commutes with d for a nontrivial map
        let tgt = jet21();
        let comps: Vec<Poly> = (0..tgt.dim())
            .map(|j| {
                let v = Poly::var(&sp, Var(j as u32));
                v.mul(&v).unwrap() // square every coordinate
            })
            .collect();
        let f = PolyMap::new(&sp, &tgt, comps).unwrap();
        let lhs = f.pullback(&a.extd()).unwrap();
        let rhs = f.pullback(&a).unwrap().extd();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn numeric_eval_matches_det() {
        let sp = jet21();
        let dx1 = PolyForm::d_var(&sp, sp.x(1));
        let dx2 = PolyForm::d_var(&sp, sp.x(2));
        let w = dx1.wedge(&dx2).unwrap();
        let pt = vec![0.0; sp.dim()];
        let mut v1 = vec![0.0; sp.dim()];
        let mut v2 = vec![0.0; sp.dim()];
        v1[0] = 2.0; // dx1 direction
        v2[1] = 3.0; // dx2 direction
        let val = w.eval_f64(&pt, &[&v1, &v2]);
        assert_eq!(val.re, 6.0);
    }
}
