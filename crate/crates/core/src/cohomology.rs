//! `HH²(A, A)` as first-order deformations of a reduction system modulo
//! first-order gauge transformations.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::linalg::{rank_of, Matrix};
use crate::quiver::{Path, PathDisplay, Quiver};
use crate::reduction::ReductionSystem;
use crate::scalar::{int, Monomial, PolyScalar, Rational, Var};
use crate::star::{DeformationCochain, StarProduct};

fn t_var() -> Var {
    Var::param("t")
}

fn t_coeff(c: &PolyScalar) -> Rational {
    c.coeff(&Monomial::var(t_var(), 1))
}

fn irreducible_upto(sys: &ReductionSystem, cap: Option<usize>) -> Result<Vec<Path>> {
    sys.irreducible_paths(cap).map_err(|e| match e {
        Error::Usage(m) => Error::usage(format!("{m}; pass a length cap")),
        e => e,
    })
}

/// Pairs `(s, u)` with `s ∈ S` and `u` irreducible and parallel to `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCochainBasis {
    pub pairs: Vec<(Path, Path)>,
}

impl TwoCochainBasis {
    pub fn new(sys: &ReductionSystem, cap: Option<usize>) -> Result<Self> {
        let irr = irreducible_upto(sys, cap)?;
        let q = sys.quiver();
        let mut pairs = Vec::new();
        for r in sys.rules() {
            for u in irr.iter().filter(|u| q.parallel(u, &r.lhs)) {
                pairs.push((r.lhs.clone(), u.clone()));
            }
        }
        Ok(TwoCochainBasis { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index_of(&self, s: &Path, u: &Path) -> Option<usize> {
        self.pairs.iter().position(|(a, b)| a == s && b == u)
    }

    /// The cochain with the given coordinates, as `s ↦ φ̃_s` pairs.
    pub fn values(&self, q: &Arc<Quiver>, coords: &[Rational]) -> Vec<(Path, Element)> {
        let mut map: BTreeMap<Path, Element> = BTreeMap::new();
        for ((s, u), c) in self.pairs.iter().zip(coords) {
            if !c.is_zero() {
                map.entry(s.clone())
                    .or_insert_with(|| Element::zero(q))
                    .add_term(u.clone(), PolyScalar::constant(c.clone()));
            }
        }
        map.into_iter().collect()
    }

    pub fn label(&self, q: &Quiver, i: usize) -> String {
        let (s, u) = &self.pairs[i];
        format!("{} ↦ {}", PathDisplay(q, s), PathDisplay(q, u))
    }
}

/// Pairs `(x, u)` with `x` an arrow and `u` irreducible and parallel to `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneCochainBasis {
    pub pairs: Vec<(u32, Path)>,
}

impl OneCochainBasis {
    pub fn new(sys: &ReductionSystem, cap: Option<usize>) -> Result<Self> {
        let irr = irreducible_upto(sys, cap)?;
        let q = sys.quiver();
        let mut pairs = Vec::new();
        for a in 0..q.num_arrows() as u32 {
            let x = Path::from_arrows(&[a]);
            for u in irr.iter().filter(|u| q.parallel(u, &x)) {
                pairs.push((a, u.clone()));
            }
        }
        Ok(OneCochainBasis { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Kernel of the first-order obstruction map.
#[derive(Clone, Debug)]
pub struct CocycleSpace {
    pub basis: TwoCochainBasis,
    /// Linear conditions in reduced row echelon form.
    pub conditions: Matrix,
    pub kernel: Vec<Vec<Rational>>,
}

/// The `t`-linear part of `(u⋆v)⋆w − u⋆(v⋆w)` on every overlap, as a
/// function of `φ̃₁`.
pub fn cocycle_space(sys: &ReductionSystem, cap: Option<usize>, budget: u64) -> Result<CocycleSpace> {
    let basis = TwoCochainBasis::new(sys, cap)?;
    let q = sys.quiver();
    let overlaps = sys.overlaps();
    let t = PolyScalar::var(t_var());
    let columns: Vec<BTreeMap<(usize, Path), Rational>> = basis
        .pairs
        .par_iter()
        .map(|(s, u)| {
            let phi = DeformationCochain::new(sys, vec![(s.clone(), Element::term(q, u.clone(), t.clone()))], Some(1))?;
            let engine = StarProduct::new(sys, &phi, budget);
            let mut col = BTreeMap::new();
            for (k, amb) in overlaps.iter().enumerate() {
                let (l, r) = engine.overlap_products(amb)?;
                for (p, c) in (&l - &r).terms() {
                    let v = t_coeff(c);
                    if !v.is_zero() {
                        col.insert((k, p.clone()), v);
                    }
                }
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    let mut row_keys: Vec<(usize, Path)> = columns.iter().flat_map(|c| c.keys().cloned()).collect();
    row_keys.sort();
    row_keys.dedup();
    let rows = row_keys
        .iter()
        .map(|key| columns.iter().map(|c| c.get(key).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    let m = Matrix::from_rows(rows, basis.len());
    let (conditions, _) = m.rref();
    let kernel = m.kernel();
    Ok(CocycleSpace { basis, conditions, kernel })
}

/// Image of the linearised gauge action.
#[derive(Clone, Debug)]
pub struct CoboundarySpace {
    pub basis: OneCochainBasis,
    /// `⟨ψ⟩` for each basis vector `ψ`, in coordinates of the 2-cochain basis.
    pub images: Vec<Vec<Rational>>,
    pub rank: usize,
}

/// `⟨ψ⟩(s) = Σ s₁⋯ψ(s_i)⋯s_m − ψ(φ_s)`, reduced, where `ψ` acts on paths
/// as a derivation.
pub fn coboundary_space(sys: &ReductionSystem, cap: Option<usize>, budget: u64) -> Result<CoboundarySpace> {
    let two = TwoCochainBasis::new(sys, cap)?;
    let longest = sys.rules().iter().map(|r| r.lhs.len()).max().unwrap_or(2);
    let one_cap = cap.map(|c| (c + 1).saturating_sub(longest));
    let basis = OneCochainBasis::new(sys, one_cap)?;
    let q = sys.quiver();
    let t = PolyScalar::var(t_var());
    let images = basis
        .pairs
        .par_iter()
        .map(|(a, u)| {
            let tx = |b: u32| -> Element {
                let x = Element::path(q, Path::from_arrows(&[b]));
                if b == *a {
                    &x + &Element::term(q, u.clone(), t.clone())
                } else {
                    x
                }
            };
            let t_path = |p: &Path| -> Result<Element> {
                let mut prod = Element::path(q, Path::Trivial(q.source(p)));
                for &b in p.arrows() {
                    prod = (&prod * &tx(b)).truncate(Some(1));
                }
                Ok(sys.reduce_full(&prod, budget)?.truncate(Some(1)))
            };
            let mut coords = vec![Rational::zero(); two.len()];
            for r in sys.rules() {
                let mut image = t_path(&r.lhs)?;
                for (p, c) in r.rhs.terms() {
                    image = &image - &t_path(p)?.scale(c);
                }
                for (p, c) in image.terms() {
                    let v = t_coeff(c);
                    if v.is_zero() {
                        continue;
                    }
                    let i = two.index_of(&r.lhs, p).ok_or_else(|| {
                        Error::usage(format!(
                            "coboundary reaches `{}` beyond the length cap",
                            PathDisplay(q, p)
                        ))
                    })?;
                    coords[i] = v;
                }
            }
            Ok(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    let rank = rank_of(&images, two.len());
    Ok(CoboundarySpace { basis, images, rank })
}

#[derive(Clone, Debug)]
pub struct Hh2 {
    pub cocycles: CocycleSpace,
    pub coboundaries: CoboundarySpace,
    pub dim: usize,
    /// Kernel vectors completing the coboundaries to a basis of the cocycles.
    pub representatives: Vec<Vec<Rational>>,
    pub image_in_kernel: bool,
    /// Length cap on cochain targets, when one was needed.
    pub cap: Option<usize>,
}

pub fn hh2(sys: &ReductionSystem, cap: Option<usize>, budget: u64) -> Result<Hh2> {
    let cocycles = cocycle_space(sys, cap, budget)?;
    let coboundaries = coboundary_space(sys, cap, budget)?;
    let n = cocycles.basis.len();
    let image_in_kernel = coboundaries
        .images
        .iter()
        .all(|v| cocycles.conditions.apply(v).iter().all(Zero::is_zero));
    let mut span: Vec<Vec<Rational>> = coboundaries.images.clone();
    let mut rank = rank_of(&span, n);
    let mut representatives = Vec::new();
    for k in &cocycles.kernel {
        span.push(k.clone());
        let r = rank_of(&span, n);
        if r > rank {
            rank = r;
            representatives.push(k.clone());
        } else {
            span.pop();
        }
    }
    let dim = cocycles.kernel.len() - coboundaries.rank.min(cocycles.kernel.len());
    Ok(Hh2 { cocycles, coboundaries, dim, representatives, image_in_kernel, cap })
}

/// The `t`-multiple of a representative, ready for [`crate::star::mc_check`].
pub fn first_order_cochain(sys: &ReductionSystem, basis: &TwoCochainBasis, coords: &[Rational]) -> Result<DeformationCochain> {
    let t = PolyScalar::var(t_var());
    let values = basis
        .values(sys.quiver(), coords)
        .into_iter()
        .map(|(s, v)| (s, v.scale(&t)))
        .collect();
    DeformationCochain::new(sys, values, Some(1))
}

/// Unit coordinate vector.
pub fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = int(1);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{brauer_tree, four_dim, nf_monomial, two_cycle};
    use crate::star::mc_check;
    use crate::{Verdict, DEFAULT_BUDGET};

    #[test]
    fn four_dim_conditions() {
        let f = four_dim();
        let h = hh2(&f.system, None, DEFAULT_BUDGET).unwrap();
        assert_eq!(h.cocycles.basis.len(), 12);
        assert_eq!(h.cocycles.kernel.len(), 7);
        assert_eq!(h.coboundaries.rank, 4);
        assert_eq!(h.dim, 3);
        assert!(h.image_in_kernel);
        let q = f.quiver();
        let mut zeroed: Vec<String> = h
            .cocycles
            .conditions
            .rows
            .iter()
            .map(|row| {
                let nz: Vec<usize> = (0..row.len()).filter(|&i| !row[i].is_zero()).collect();
                assert_eq!(nz.len(), 1, "condition is not a single coordinate");
                h.cocycles.basis.label(q, nz[0])
            })
            .collect();
        zeroed.sort();
        assert_eq!(zeroed, ["x*x ↦ e1", "x*x ↦ y", "y*x ↦ e1", "y*y ↦ e1", "y*y ↦ x"]);
    }

    #[test]
    fn representatives_are_first_order_mc() {
        for f in [four_dim(), two_cycle(), brauer_tree(4).unwrap()] {
            let h = hh2(&f.system, None, DEFAULT_BUDGET).unwrap();
            for r in &h.representatives {
                let phi = first_order_cochain(&f.system, &h.cocycles.basis, r).unwrap();
                assert_eq!(mc_check(&f.system, &phi, DEFAULT_BUDGET).verdict, Verdict::Pass);
            }
        }
    }

    #[test]
    fn two_cycle_and_brauer() {
        let h = hh2(&two_cycle().system, None, DEFAULT_BUDGET).unwrap();
        assert_eq!((h.cocycles.kernel.len(), h.coboundaries.rank, h.dim), (1, 0, 1));
        let h = hh2(&brauer_tree(5).unwrap().system, None, DEFAULT_BUDGET).unwrap();
        assert_eq!(h.cocycles.basis.len(), 6);
        assert_eq!(h.dim, 1);
    }

    #[test]
    fn no_overlaps_means_everything_is_a_cocycle() {
        let f = nf_monomial();
        let c = cocycle_space(&f.system, None, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.kernel.len(), c.basis.len());
    }

    #[test]
    fn infinite_basis_needs_a_cap() {
        let sys = crate::quantization::polynomial_system(2).unwrap();
        assert!(hh2(&sys, None, DEFAULT_BUDGET).is_err());
        let h = hh2(&sys, Some(3), DEFAULT_BUDGET).unwrap();
        assert!(h.image_in_kernel);
    }
}
