//! Symbolic Maurer–Cartan equations for cochains subject to a degree
//! condition.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::quiver::{AdmissibleOrder, Path, PathDisplay, Quiver};
use crate::reduction::ReductionSystem;
use crate::scalar::{PolyScalar, Var};
use crate::star::{mc_check, DeformationCochain, McReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DegreeCondition {
    /// Targets strictly shorter than the left side.
    Strict,
    /// Targets no longer than the left side.
    Weak,
    /// Targets smaller than the left side in the admissible order.
    Order,
}

impl DegreeCondition {
    pub fn as_str(self) -> &'static str {
        match self {
            DegreeCondition::Strict => "strict",
            DegreeCondition::Weak => "weak",
            DegreeCondition::Order => "order",
        }
    }

    pub fn admits(self, s: &Path, u: &Path, ord: &AdmissibleOrder) -> bool {
        match self {
            DegreeCondition::Strict => u.len() < s.len(),
            DegreeCondition::Weak => u.len() <= s.len(),
            DegreeCondition::Order => ord.less(u, s),
        }
    }
}

impl FromStr for DegreeCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" | "<" => Ok(DegreeCondition::Strict),
            "weak" | "<=" | "≤" => Ok(DegreeCondition::Weak),
            "order" | "≺" => Ok(DegreeCondition::Order),
            _ => Err(Error::usage(format!("unknown degree condition `{s}`"))),
        }
    }
}

impl fmt::Display for DegreeCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Pairs `(s, u)`, `u` irreducible, parallel to `s` and admitted by `cond`.
pub fn cochain_basis(sys: &ReductionSystem, cond: DegreeCondition, ord: &AdmissibleOrder) -> Result<Vec<(Path, Path)>> {
    let q = sys.quiver();
    let longest = sys.rules().iter().map(|r| r.lhs.len()).max().unwrap_or(0);
    let irr = sys.irreducible_paths(Some(longest))?;
    let mut out = Vec::new();
    for r in sys.rules() {
        for u in &irr {
            if q.parallel(u, &r.lhs) && cond.admits(&r.lhs, u, ord) {
                out.push((r.lhs.clone(), u.clone()));
            }
        }
    }
    Ok(out)
}

/// The generic cochain `Σ λ_{s,u} (s ↦ u)` over a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicCochain {
    pub entries: Vec<((Path, Path), Var)>,
}

fn compact(q: &Quiver, p: &Path) -> String {
    PathDisplay(q, p).to_string().replace('*', "")
}

impl SymbolicCochain {
    /// Unknowns are named `λ_<s>_<u>` from the printed paths.
    pub fn generic(q: &Quiver, basis: &[(Path, Path)]) -> Self {
        let mut seen = BTreeSet::new();
        let entries = basis
            .iter()
            .enumerate()
            .map(|(i, (s, u))| {
                let mut name = format!("λ_{}_{}", compact(q, s), compact(q, u));
                if !seen.insert(name.clone()) {
                    name = format!("{name}_{i}");
                    seen.insert(name.clone());
                }
                ((s.clone(), u.clone()), Var::unknown(&name))
            })
            .collect();
        SymbolicCochain { entries }
    }

    pub fn unknowns(&self) -> impl Iterator<Item = &Var> {
        self.entries.iter().map(|(_, v)| v)
    }

    pub fn values(&self, q: &std::sync::Arc<Quiver>) -> Vec<(Path, Element)> {
        let mut map: BTreeMap<Path, Element> = BTreeMap::new();
        for ((s, u), v) in &self.entries {
            map.entry(s.clone())
                .or_insert_with(|| Element::zero(q))
                .add_term(u.clone(), PolyScalar::var(v.clone()));
        }
        map.into_iter().collect()
    }
}

/// Polynomial equations `p = 0`, each primitive with positive leading
/// coefficient, deduplicated and sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquationSet {
    pub equations: Vec<PolyScalar>,
}

impl EquationSet {
    pub fn canonical(polys: impl IntoIterator<Item = PolyScalar>) -> Self {
        let set: BTreeSet<PolyScalar> = polys
            .into_iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.with_trunc(None).primitive())
            .collect();
        EquationSet { equations: set.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// True when every equation vanishes after substitution.
    pub fn vanishes_at(&self, point: &BTreeMap<Var, PolyScalar>) -> bool {
        self.equations.iter().all(|p| p.substitute(point).is_zero())
    }
}

impl fmt::Display for EquationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.equations {
            writeln!(f, "{p} = 0")?;
        }
        Ok(())
    }
}

fn equations_of(report: McReport) -> Result<EquationSet> {
    let mut polys = Vec::new();
    for e in report.entries {
        let (l, r) = e.outcome?;
        polys.extend((&l - &r).into_terms().map(|(_, c)| c));
    }
    Ok(EquationSet::canonical(polys))
}

/// Coefficients of all overlap defects of the star product for a cochain
/// with symbolic coefficients.
pub fn mc_equations_for(sys: &ReductionSystem, values: Vec<(Path, Element)>, budget: u64) -> Result<EquationSet> {
    let phi = DeformationCochain::new(sys, values, None)?;
    equations_of(mc_check(sys, &phi, budget))
}

/// The generic cochain for `cond` and its equations.
pub fn mc_equations(
    sys: &ReductionSystem,
    cond: DegreeCondition,
    ord: &AdmissibleOrder,
    budget: u64,
) -> Result<(SymbolicCochain, EquationSet)> {
    if cond == DegreeCondition::Weak {
        return Err(Error::usage("equations need the strict or the order condition"));
    }
    let basis = cochain_basis(sys, cond, ord)?;
    let generic = SymbolicCochain::generic(sys.quiver(), &basis);
    let eqs = mc_equations_for(sys, generic.values(sys.quiver()), budget)?;
    Ok((generic, eqs))
}

/// Flatness of the filtered deformation of a homogeneous system.
pub fn pbw_check(sys: &ReductionSystem, values: Vec<(Path, Element)>, budget: u64) -> Result<McReport> {
    let q = sys.quiver();
    for r in sys.rules() {
        if r.rhs.paths().any(|p| p.len() != r.lhs.len()) {
            return Err(Error::usage(format!("rule for `{}` is not homogeneous", PathDisplay(q, &r.lhs))));
        }
    }
    for (s, v) in &values {
        if v.paths().any(|p| p.len() >= s.len()) {
            return Err(Error::usage(format!(
                "deformation of `{}` does not lower the path length",
                PathDisplay(q, s)
            )));
        }
    }
    let phi = DeformationCochain::new(sys, values, None)?;
    Ok(mc_check(sys, &phi, budget))
}
