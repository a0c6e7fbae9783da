use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{int, rat, Monomial, PolyScalar, Rational, Var};

use super::poisson::PoissonBivector;
use super::poly::{CommPoly, Exponents};

type Tensor = BTreeMap<(Exponents, Exponents), PolyScalar>;

/// `Σ c ∂_a ⊗ ∂_b` with constant coefficients.
type FirstOrder = Vec<(usize, usize, PolyScalar)>;

fn constant_entries(eta: &PoissonBivector) -> Result<Vec<(usize, usize, PolyScalar)>> {
    if !eta.is_constant() {
        return Err(Error::usage("closed exponential formulas need a constant bivector"));
    }
    let zero = vec![0; eta.dim()];
    Ok(eta.entries().map(|(&(j, i), p)| (j, i, p.coeff(&zero))).collect())
}

fn hbar_times(hbar: &Var, c: Rational) -> PolyScalar {
    PolyScalar::term(c, Monomial::var(hbar.clone(), 1))
}

fn apply(op: &FirstOrder, t: &Tensor, n: Option<u32>) -> Tensor {
    let mut out = Tensor::new();
    for ((a, b), c) in t {
        for (i, j, k) in op {
            if a[*i] == 0 || b[*j] == 0 {
                continue;
            }
            let (mut a2, mut b2) = (a.clone(), b.clone());
            a2[*i] -= 1;
            b2[*j] -= 1;
            let coeff = (c * k).scale(&int(i64::from(a[*i]) * i64::from(b[*j]))).truncate(n);
            let slot = out.entry((a2, b2)).or_default();
            *slot = &*slot + &coeff;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `exp(op)(f ⊗ g)` restricted to the diagonal, truncated at `ħ^n`.
fn exp_bidiff(op: &FirstOrder, f: &CommPoly, g: &CommPoly, n: u32) -> CommPoly {
    let d = f.dim();
    let mut t = Tensor::new();
    for (a, c) in f.terms() {
        for (b, e) in g.terms() {
            let slot = t.entry((a.clone(), b.clone())).or_default();
            *slot = &*slot + &(c * e).truncate(Some(n));
        }
    }
    t.retain(|_, v| !v.is_zero());
    let mut out = CommPoly::zero(d);
    let mut fact = Rational::from_integer(1.into());
    for k in 0..=n {
        if t.is_empty() {
            break;
        }
        if k > 0 {
            fact *= Rational::from_integer(k.into());
        }
        for ((a, b), c) in &t {
            let e: Exponents = a.iter().zip(b).map(|(x, y)| x + y).collect();
            out.add_term(e, c.scale(&(Rational::from_integer(1.into()) / &fact)));
        }
        t = apply(op, &t, Some(n));
    }
    out.truncate(Some(n))
}

/// Moyal product `exp((ħ/2) Σ η_ji (∂_j⊗∂_i − ∂_i⊗∂_j))`.
pub fn moyal(f: &CommPoly, g: &CommPoly, eta: &PoissonBivector, hbar: &Var, n: u32) -> Result<CommPoly> {
    let mut op = FirstOrder::new();
    for (j, i, c) in constant_entries(eta)? {
        op.push((j, i, &c * &hbar_times(hbar, rat(1, 2))));
        op.push((i, j, &c * &hbar_times(hbar, rat(-1, 2))));
    }
    Ok(exp_bidiff(&op, f, g, n))
}

/// `exp(ħ Σ η_ji ∂_j⊗∂_i)`, the closed form of the star product for
/// constant bivectors.
pub fn exponential_star(f: &CommPoly, g: &CommPoly, eta: &PoissonBivector, hbar: &Var, n: u32) -> Result<CommPoly> {
    let op: FirstOrder = constant_entries(eta)?
        .into_iter()
        .map(|(j, i, c)| (j, i, &c * &hbar_times(hbar, int(1))))
        .collect();
    Ok(exp_bidiff(&op, f, g, n))
}

/// `Φ(f) = exp(−(ħ/2) Σ η_ji ∂_i∂_j)(f)`, which satisfies
/// `Φ(f) ∗ Φ(g) = Φ(f ⋆ g)` with `∗` the Moyal product.
pub fn gauge_phi(f: &CommPoly, eta: &PoissonBivector, hbar: &Var, n: u32) -> Result<CommPoly> {
    let entries = constant_entries(eta)?;
    let step = |p: &CommPoly| -> CommPoly {
        let mut out = CommPoly::zero(p.dim());
        for (j, i, c) in &entries {
            let term = p.derivative(*i).derivative(*j).scale(&(c * &hbar_times(hbar, rat(-1, 2))));
            out = &out + &term;
        }
        out.truncate(Some(n))
    };
    let mut out = CommPoly::zero(f.dim());
    let mut cur = f.truncate(Some(n));
    let mut fact = Rational::from_integer(1.into());
    for k in 0..=n {
        if cur.is_zero() {
            break;
        }
        if k > 0 {
            fact *= Rational::from_integer(k.into());
        }
        out = &out + &cur.scale_rational(&(Rational::from_integer(1.into()) / &fact));
        cur = step(&cur);
    }
    Ok(out.truncate(Some(n)))
}
