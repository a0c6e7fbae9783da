use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::quiver::Path;
use crate::reduction::ReductionSystem;
use crate::scalar::{Monomial, PolyScalar, Var};
use crate::star::{mc_check, DeformationCochain, McReport};
use crate::Verdict;

use super::poly::CommPoly;

/// `η = Σ_{i<j} η_ji ∂_j ∧ ∂_i`, so that `{x_j, x_i} = η_ji`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonBivector {
    d: usize,
    entries: BTreeMap<(usize, usize), CommPoly>,
}

impl PoissonBivector {
    /// Entries keyed by `(j, i)` with `j > i`, 0-based.
    pub fn new(d: usize, entries: Vec<((usize, usize), CommPoly)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((j, i), p) in entries {
            if !(i < j && j < d) {
                return Err(Error::usage(format!("bivector entry ({j}, {i}) needs {d} > j > i")));
            }
            if p.dim() != d {
                return Err(Error::usage("bivector entry has the wrong number of variables"));
            }
            if !p.is_zero() && map.insert((j, i), p).is_some() {
                return Err(Error::usage(format!("bivector entry ({j}, {i}) given twice")));
            }
        }
        Ok(PoissonBivector { d, entries: map })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, j: usize, i: usize) -> CommPoly {
        self.entries.get(&(j, i)).cloned().unwrap_or_else(|| CommPoly::zero(self.d))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &CommPoly)> {
        self.entries.iter()
    }

    pub fn is_constant(&self) -> bool {
        self.entries.values().all(CommPoly::is_constant)
    }

    /// `{x_a, x_b}` for any `a, b`.
    pub fn bracket_of_vars(&self, a: usize, b: usize) -> CommPoly {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => CommPoly::zero(self.d),
            Greater => self.entry(a, b),
            Less => self.entry(b, a).scale(&PolyScalar::from_int(-1)),
        }
    }

    /// `{f, g} = Σ_{a,b} {x_a, x_b} ∂_a f ∂_b g`.
    pub fn bracket(&self, f: &CommPoly, g: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero(self.d);
        for a in 0..self.d {
            let fa = f.derivative(a);
            if fa.is_zero() {
                continue;
            }
            for b in 0..self.d {
                let p = self.bracket_of_vars(a, b);
                if !p.is_zero() {
                    out = &out + &(&(&p * &fa) * &g.derivative(b));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct JacobiReport {
    /// Nonzero components of the Jacobiator, keyed by `a < b < c`.
    pub defect: BTreeMap<(usize, usize, usize), CommPoly>,
    pub verdict: Verdict,
}

/// Jacobiator `{x_a,{x_b,x_c}} + cyclic`, which is `[η, η]` up to a factor.
pub fn schouten_jacobi_check(eta: &PoissonBivector) -> JacobiReport {
    let d = eta.d;
    let mut defect = BTreeMap::new();
    for a in 0..d {
        for b in a + 1..d {
            for c in b + 1..d {
                let mut j = CommPoly::zero(d);
                for (p, q, r) in [(a, b, c), (b, c, a), (c, a, b)] {
                    let inner = eta.bracket_of_vars(q, r);
                    for l in 0..d {
                        let outer = eta.bracket_of_vars(p, l);
                        if !outer.is_zero() {
                            j = &j + &(&outer * &inner.derivative(l));
                        }
                    }
                }
                if !j.is_zero() {
                    defect.insert((a, b, c), j);
                }
            }
        }
    }
    let verdict = if defect.is_empty() { Verdict::Pass } else { Verdict::Fail };
    JacobiReport { defect, verdict }
}

/// `φ̃(x_j x_i) = η_ji ħ` on a commutator system.
pub fn poisson_to_cochain(
    sys: &ReductionSystem,
    eta: &PoissonBivector,
    hbar: &Var,
    trunc: Option<u32>,
) -> Result<DeformationCochain> {
    if sys.quiver().num_arrows() != eta.d {
        return Err(Error::usage("bivector dimension does not match the system"));
    }
    let h = PolyScalar::term(crate::scalar::int(1), Monomial::var(hbar.clone(), 1));
    let mut values = Vec::new();
    for (&(j, i), p) in &eta.entries {
        let s = Path::from_arrows(&[j as u32, i as u32]);
        values.push((s, p.scale(&h).to_element(sys.quiver())?));
    }
    DeformationCochain::new(sys, values, trunc)
}

/// Associativity on every `x_k x_j x_i` with `k > j > i`; these are exactly
/// the overlaps of the commutator system.
pub fn quantize_check(sys: &ReductionSystem, phi: &DeformationCochain, budget: u64) -> McReport {
    mc_check(sys, phi, budget)
}
