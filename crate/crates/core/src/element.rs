//! Elements of the path algebra: finite sums of paths with polynomial
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::quiver::{Path, PathDisplay, Quiver};
use crate::scalar::{fmt_rational, PolyScalar};

#[derive(Clone, Debug)]
pub struct Element {
    quiver: Arc<Quiver>,
    terms: BTreeMap<Path, PolyScalar>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_quiver(&self.quiver, &other.quiver)
    }
}

impl Eq for Element {}

pub(crate) fn same_quiver(a: &Arc<Quiver>, b: &Arc<Quiver>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Element {
    pub fn zero(quiver: &Arc<Quiver>) -> Self {
        Element { quiver: quiver.clone(), terms: BTreeMap::new() }
    }

    pub fn path(quiver: &Arc<Quiver>, p: Path) -> Self {
        Self::term(quiver, p, PolyScalar::one())
    }

    pub fn term(quiver: &Arc<Quiver>, p: Path, c: PolyScalar) -> Self {
        let mut e = Self::zero(quiver);
        e.add_term(p, c);
        e
    }

    /// The unit `Σ e_i`.
    pub fn unit(quiver: &Arc<Quiver>) -> Self {
        let mut e = Self::zero(quiver);
        for v in 0..quiver.num_vertices() {
            e.add_term(Path::Trivial(v), PolyScalar::one());
        }
        e
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn add_term(&mut self, p: Path, c: PolyScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &PolyScalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Path, PolyScalar)> {
        self.terms.into_iter()
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.terms.keys()
    }

    pub fn coeff(&self, p: &Path) -> PolyScalar {
        self.terms.get(p).cloned().unwrap_or_default()
    }

    fn check(&self, other: &Element) -> Result<()> {
        if same_quiver(&self.quiver, &other.quiver) {
            Ok(())
        } else {
            Err(Error::usage("elements belong to different quivers"))
        }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        Element {
            quiver: self.quiver.clone(),
            terms: self.terms.iter().map(|(p, c)| (p.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &PolyScalar) -> Element {
        let mut out = Element::zero(&self.quiver);
        for (p, d) in &self.terms {
            out.add_term(p.clone(), d * c);
        }
        out
    }

    /// Bilinear extension of path composition.
    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        let mut out = Element::zero(&self.quiver);
        for (p, c) in &self.terms {
            for (q, d) in &other.terms {
                if let Some(pq) = self.quiver.compose(p, q) {
                    out.add_term(pq, c * d);
                }
            }
        }
        Ok(out)
    }

    /// Drops terms of parameter degree above `n`.
    pub fn truncate(&self, n: Option<u32>) -> Element {
        let mut out = Element::zero(&self.quiver);
        for (p, c) in &self.terms {
            out.add_term(p.clone(), c.truncate(n));
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&PolyScalar) -> PolyScalar) -> Element {
        let mut out = Element::zero(&self.quiver);
        for (p, c) in &self.terms {
            out.add_term(p.clone(), f(c));
        }
        out
    }

    /// Coefficient polynomials of all terms.
    pub fn coefficients(&self) -> impl Iterator<Item = &PolyScalar> {
        self.terms.values()
    }

    pub fn min_param_degree(&self) -> Option<u32> {
        self.terms.values().filter_map(PolyScalar::min_param_degree).min()
    }
}

// Panicking operators for code that already knows the quivers agree.
impl std::ops::Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("quiver mismatch")
    }
}

impl std::ops::Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_sub(rhs).expect("quiver mismatch")
    }
}

impl std::ops::Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).expect("quiver mismatch")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (p, c)) in self.terms.iter().enumerate() {
            let path = PathDisplay(&self.quiver, p);
            let single = c.len() == 1;
            let (neg, body) = if single {
                let (m, r) = c.terms().next().unwrap();
                let a = r.abs();
                let body = if m.is_one() && a.is_one() {
                    path.to_string()
                } else if m.is_one() {
                    format!("{}*{path}", fmt_rational(&a))
                } else if a.is_one() {
                    format!("{m}*{path}")
                } else {
                    format!("{}*{m}*{path}", fmt_rational(&a))
                };
                (r.is_negative(), body)
            } else {
                (false, format!("({c})*{path}"))
            };
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}
