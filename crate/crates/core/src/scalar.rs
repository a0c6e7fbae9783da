//! Exact multivariate polynomials over the rationals.
//!
//! A [`PolyScalar`] mixes deformation parameters (`t`, `ħ`) with symbolic
//! unknowns (`λ`, `μ`, ...). Truncation only looks at the parameter degree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// Formal deformation parameter; counted by truncation.
    Param,
    /// Symbolic unknown; never truncated.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    name: Arc<str>,
    role: Role,
}

impl Var {
    pub fn param(name: &str) -> Self {
        Var { name: name.into(), role: Role::Param }
    }

    pub fn unknown(name: &str) -> Self {
        Var { name: name.into(), role: Role::Unknown }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn role(&self) -> Role {
        self.role
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Sparse exponent vector, sorted by variable, no zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        out.retain(|(_, e)| *e > 0);
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn param_degree(&self) -> u32 {
        self.0.iter().filter(|(v, _)| v.role == Role::Param).map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Drops every variable matching `pred`, returning the rest.
    pub fn without(&self, pred: impl Fn(&Var) -> bool) -> Monomial {
        Monomial(self.0.iter().filter(|(v, _)| !pred(v)).cloned().collect())
    }
}

/// Degree-lexicographic: total degree first, then the earlier variable
/// dominates.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (x, y) in self.0.iter().zip(other.0.iter()) {
            match x.0.cmp(&y.0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match x.1.cmp(&y.1) {
                    Ordering::Equal => {}
                    o => return o,
                },
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial with rational coefficients and an optional truncation order on
/// parameter degree.
#[derive(Clone, Debug, Default)]
pub struct PolyScalar {
    terms: BTreeMap<Monomial, Rational>,
    trunc: Option<u32>,
}

impl PartialEq for PolyScalar {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for PolyScalar {}

/// Compares term lists from the leading monomial down.
impl Ord for PolyScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((m, c)), Some((n, d))) => match m.cmp(n).then_with(|| c.cmp(d)) {
                    Ordering::Equal => {}
                    o => return o,
                },
            }
        }
    }
}

impl PartialOrd for PolyScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PolyScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v, 1))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn with_trunc(mut self, n: Option<u32>) -> Self {
        self.trunc = n;
        self.enforce();
        self
    }

    pub fn trunc(&self) -> Option<u32> {
        self.trunc
    }

    fn enforce(&mut self) {
        if let Some(n) = self.trunc {
            self.terms.retain(|m, _| m.param_degree() <= n);
        }
    }

    /// Drops terms of parameter degree above `n`; `None` is the identity.
    /// Unlike [`with_trunc`](Self::with_trunc) the order is not recorded.
    pub fn truncate(&self, n: Option<u32>) -> Self {
        let mut out = self.clone();
        if let Some(n) = n {
            out.terms.retain(|m, _| m.param_degree() <= n);
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        if let Some(n) = self.trunc {
            if m.param_degree() > n {
                return;
            }
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// The rational value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest monomial under degree-lex with its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn min_param_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::param_degree).min()
    }

    pub fn max_param_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::param_degree).max()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero().with_trunc(self.trunc);
        }
        Self {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one().with_trunc(self.trunc);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Part of parameter degree exactly `k`, with the parameters kept.
    pub fn param_homogeneous(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.param_degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            trunc: self.trunc,
        }
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining variables.
    pub fn coeff_of_power(&self, v: &Var, k: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.exponent(v) == k {
                out.add_term(m.without(|w| w == v), c.clone());
            }
        }
        out
    }

    /// Substitutes polynomials for variables; unlisted variables stay.
    pub fn substitute(&self, map: &BTreeMap<Var, PolyScalar>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (v, e) in &m.0 {
                let f = match map.get(v) {
                    Some(p) => p.pow(*e),
                    None => Self::term(Rational::one(), Monomial::var(v.clone(), *e)),
                };
                t = &t * &f;
            }
            out = &out + &t;
        }
        out.with_trunc(self.trunc)
    }

    /// Multiplies through so the coefficients are coprime integers with a
    /// positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = nums.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
        let mut scale = BigRational::new(lcm, g);
        if self.leading().is_some_and(|(_, c)| c.is_negative()) {
            scale = -scale;
        }
        self.scale(&scale)
    }
}

fn merge_trunc(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

impl Add for &PolyScalar {
    type Output = PolyScalar;
    fn add(self, rhs: &PolyScalar) -> PolyScalar {
        let mut out = self.clone();
        out.trunc = merge_trunc(self.trunc, rhs.trunc);
        out.enforce();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &PolyScalar {
    type Output = PolyScalar;
    fn sub(self, rhs: &PolyScalar) -> PolyScalar {
        let mut out = self.clone();
        out.trunc = merge_trunc(self.trunc, rhs.trunc);
        out.enforce();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &PolyScalar {
    type Output = PolyScalar;
    fn neg(self) -> PolyScalar {
        PolyScalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
            trunc: self.trunc,
        }
    }
}

impl Mul for &PolyScalar {
    type Output = PolyScalar;
    fn mul(self, rhs: &PolyScalar) -> PolyScalar {
        let mut out = PolyScalar::zero();
        out.trunc = merge_trunc(self.trunc, rhs.trunc);
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }
}

impl Add for PolyScalar {
    type Output = PolyScalar;
    fn add(self, rhs: PolyScalar) -> PolyScalar {
        &self + &rhs
    }
}

impl Sub for PolyScalar {
    type Output = PolyScalar;
    fn sub(self, rhs: PolyScalar) -> PolyScalar {
        &self - &rhs
    }
}

impl Mul for PolyScalar {
    type Output = PolyScalar;
    fn mul(self, rhs: PolyScalar) -> PolyScalar {
        &self * &rhs
    }
}

impl Neg for PolyScalar {
    type Output = PolyScalar;
    fn neg(self) -> PolyScalar {
        -&self
    }
}

impl From<Rational> for PolyScalar {
    fn from(c: Rational) -> Self {
        PolyScalar::constant(c)
    }
}

impl From<i64> for PolyScalar {
    fn from(n: i64) -> Self {
        PolyScalar::from_int(n)
    }
}

impl From<Var> for PolyScalar {
    fn from(v: Var) -> Self {
        PolyScalar::var(v)
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Terms from the leading monomial down, e.g. `λ^2*μ - λ*μ` or `-1/2*ħ`.
impl fmt::Display for PolyScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}
