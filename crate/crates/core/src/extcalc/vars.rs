//! Variable spaces for the polynomial exterior calculus.
//!
//! A space fixes an ordered list of real coordinates; canonical signs in
//! wedge products depend on this total order, so it never changes after
//! construction.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Index of a variable inside its [`VarSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var(pub u32);

impl Var {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// The two coordinate systems used by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    /// First jet space of maps `R^n -> R^m`: coordinates
    /// `x^1..x^n, u^1..u^m, p^1_1..p^m_n` in that order.
    Jet { n: usize, m: usize },
    /// `C^m` seen as `R^{2m}`: coordinates `zr1, zi1, ..., zrm, zim`,
    /// the real and imaginary parts of each complex coordinate.
    Complex { m: usize },
}

/// Ordered variable list with a polynomial degree cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSpace {
    kind: SpaceKind,
    names: Vec<String>,
    max_degree: usize,
}

pub const DEFAULT_MAX_DEGREE: usize = 8;

impl VarSpace {
    pub fn jet(n: usize, m: usize) -> Arc<Self> {
        Self::jet_with_cap(n, m, DEFAULT_MAX_DEGREE)
    }

    pub fn jet_with_cap(n: usize, m: usize, max_degree: usize) -> Arc<Self> {
        assert!(n >= 1 && m >= 1);
        let mut names = Vec::with_capacity(n + m + n * m);
        for i in 1..=n {
            names.push(format!("x{i}"));
        }
        for a in 1..=m {
            names.push(format!("u{a}"));
        }
        for a in 1..=m {
            for i in 1..=n {
                names.push(format!("p{a}_{i}"));
            }
        }
        Arc::new(VarSpace { kind: SpaceKind::Jet { n, m }, names, max_degree })
    }

    pub fn complex_space(m: usize) -> Arc<Self> {
        Self::complex_space_with_cap(m, DEFAULT_MAX_DEGREE)
    }

    pub fn complex_space_with_cap(m: usize, max_degree: usize) -> Arc<Self> {
        assert!(m >= 1);
        let mut names = Vec::with_capacity(2 * m);
        for a in 1..=m {
            names.push(format!("zr{a}"));
            names.push(format!("zi{a}"));
        }
        Arc::new(VarSpace { kind: SpaceKind::Complex { m }, names, max_degree })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v.idx()]
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.names.iter().position(|n| n == name).map(|i| Var(i as u32))
    }

    /// Jet-space accessors; 1-based indices matching the coordinate names.
    pub fn jet_dims(&self) -> (usize, usize) {
        match self.kind {
            SpaceKind::Jet { n, m } => (n, m),
            _ => panic!("not a jet space"),
        }
    }

    pub fn x(&self, i: usize) -> Var {
        let (n, _) = self.jet_dims();
        assert!((1..=n).contains(&i));
        Var((i - 1) as u32)
    }

    pub fn u(&self, a: usize) -> Var {
        let (n, m) = self.jet_dims();
        assert!((1..=m).contains(&a));
        Var((n + a - 1) as u32)
    }

    pub fn p(&self, a: usize, i: usize) -> Var {
        let (n, m) = self.jet_dims();
        assert!((1..=m).contains(&a) && (1..=n).contains(&i));
        Var((n + m + (a - 1) * n + (i - 1)) as u32)
    }

    /// Complex-space accessors: real and imaginary part of `z^a`.
    pub fn complex_m(&self) -> usize {
        match self.kind {
            SpaceKind::Complex { m } => m,
            _ => panic!("not a complex space"),
        }
    }

    pub fn zr(&self, a: usize) -> Var {
        let m = self.complex_m();
        assert!((1..=m).contains(&a));
        Var((2 * (a - 1)) as u32)
    }

    pub fn zi(&self, a: usize) -> Var {
        let m = self.complex_m();
        assert!((1..=m).contains(&a));
        Var((2 * (a - 1) + 1) as u32)
    }

    /// True if the variable is one of the base coordinates `x^i` of a jet
    /// space (the only differentials the Hodge star accepts).
    pub fn is_base(&self, v: Var) -> bool {
        match self.kind {
            SpaceKind::Jet { n, .. } => v.idx() < n,
            SpaceKind::Complex { .. } => false,
        }
    }
}

impl fmt::Display for VarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpaceKind::Jet { n, m } => write!(f, "(jet {n} {m})"),
            SpaceKind::Complex { m } => write!(f, "(cspace {m})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_variable_layout() {
        let sp = VarSpace::jet(2, 2);
        assert_eq!(sp.dim(), 2 + 2 + 4);
        assert_eq!(sp.name(sp.x(1)), "x1");
        assert_eq!(sp.name(sp.u(2)), "u2");
        assert_eq!(sp.name(sp.p(2, 1)), "p2_1");
        assert_eq!(sp.lookup("p1_2"), Some(sp.p(1, 2)));
        assert!(sp.is_base(sp.x(2)));
        assert!(!sp.is_base(sp.u(1)));
    }

    #[test]
    fn complex_variable_layout() {
        let sp = VarSpace::complex_space(3);
        assert_eq!(sp.dim(), 6);
        assert_eq!(sp.name(sp.zr(1)), "zr1");
        assert_eq!(sp.name(sp.zi(3)), "zi3");
    }
}
