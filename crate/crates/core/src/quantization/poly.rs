use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use smallvec::SmallVec;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::quiver::{Path, Quiver};
use crate::scalar::{PolyScalar, Rational};

pub type Exponents = SmallVec<[u32; 4]>;

/// A commutative polynomial in `x₁..x_d` with [`PolyScalar`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommPoly {
    d: usize,
    terms: BTreeMap<Exponents, PolyScalar>,
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

impl CommPoly {
    pub fn zero(d: usize) -> Self {
        CommPoly { d, terms: BTreeMap::new() }
    }

    pub fn constant(d: usize, c: PolyScalar) -> Self {
        Self::monomial(d, &vec![0; d], c)
    }

    pub fn one(d: usize) -> Self {
        Self::constant(d, PolyScalar::one())
    }

    /// The variable `x_i`, 0-based.
    pub fn var(d: usize, i: usize) -> Self {
        let mut e = vec![0; d];
        e[i] = 1;
        Self::monomial(d, &e, PolyScalar::one())
    }

    pub fn monomial(d: usize, exps: &[u32], c: PolyScalar) -> Self {
        assert_eq!(exps.len(), d);
        let mut p = Self::zero(d);
        p.add_term(exps.iter().copied().collect(), c);
        p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn add_term(&mut self, e: Exponents, c: PolyScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &PolyScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> PolyScalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&a| a == 0))
    }

    pub fn scale(&self, c: &PolyScalar) -> Self {
        let mut out = Self::zero(self.d);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&PolyScalar::constant(c.clone()))
    }

    pub fn truncate(&self, n: Option<u32>) -> Self {
        let mut out = Self::zero(self.d);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.truncate(n));
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&PolyScalar) -> PolyScalar) -> Self {
        let mut out = Self::zero(self.d);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), f(v));
        }
        out
    }

    /// `∂^[k]/∂x_i^k = (1/k!) ∂^k/∂x_i^k`.
    pub fn divided_derivative(&self, i: usize, k: u32) -> Self {
        let mut out = Self::zero(self.d);
        for (e, v) in &self.terms {
            if e[i] >= k {
                let mut f = e.clone();
                f[i] -= k;
                out.add_term(f, v.scale(&Rational::from_integer(binomial(e[i], k))));
            }
        }
        out
    }

    /// Divided derivative with respect to a multi-index.
    pub fn divided_derivative_multi(&self, alpha: &[u32]) -> Self {
        let mut p = self.clone();
        for (i, &k) in alpha.iter().enumerate() {
            if k > 0 {
                p = p.divided_derivative(i, k);
            }
        }
        p
    }

    pub fn derivative(&self, i: usize) -> Self {
        self.divided_derivative(i, 1)
    }

    /// Monomial `x₁^{a₁}⋯x_d^{a_d}` as the sorted word.
    pub fn to_element(&self, q: &Arc<Quiver>) -> Result<Element> {
        if q.num_vertices() != 1 || q.num_arrows() != self.d {
            return Err(Error::usage("quiver does not match the polynomial ring"));
        }
        let mut out = Element::zero(q);
        for (e, c) in &self.terms {
            let word: Vec<u32> = e.iter().enumerate().flat_map(|(i, &a)| std::iter::repeat(i as u32).take(a as usize)).collect();
            let p = if word.is_empty() { Path::Trivial(0) } else { Path::from_arrows(&word) };
            out.add_term(p, c.clone());
        }
        Ok(out)
    }

    /// Commutative image of an element of the free algebra.
    pub fn from_element(e: &Element) -> Self {
        let d = e.quiver().num_arrows();
        let mut out = Self::zero(d);
        for (p, c) in e.terms() {
            let mut ex: Exponents = std::iter::repeat(0).take(d).collect();
            for &a in p.arrows() {
                ex[a as usize] += 1;
            }
            out.add_term(ex, c.clone());
        }
        out
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay(self, names)
    }
}

struct PolyDisplay<'a>(&'a CommPoly, &'a [String]);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = Arc::new(
            Quiver::new(&["1"], &self.1.iter().map(|n| (n.as_str(), "1", "1")).collect::<Vec<_>>())
                .map_err(|_| fmt::Error)?,
        );
        write!(f, "{}", self.0.to_element(&q).map_err(|_| fmt::Error)?)
    }
}

impl std::ops::Add for &CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: &CommPoly) -> CommPoly {
        assert_eq!(self.d, rhs.d);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: &CommPoly) -> CommPoly {
        self + &rhs.scale(&PolyScalar::from_int(-1))
    }
}

impl std::ops::Mul for &CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &CommPoly) -> CommPoly {
        assert_eq!(self.d, rhs.d);
        let mut out = CommPoly::zero(self.d);
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                let e: Exponents = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, c * d);
            }
        }
        out
    }
}
