//! The combinatorial star product of a deformed reduction system.
//!
//! Rules `s ↦ φ_s + φ̃_s` are applied right-most first; each application of
//! `φ̃` is counted, and `star_k` collects the terms that used it exactly `k`
//! times. With a truncation order every `φ̃`-term carries a positive
//! parameter degree and the reduction graph is finite. Without one the
//! reduction graph is explored explicitly: branches that never reach an
//! irreducible path contribute nothing, and a cycle through a `φ̃`-step that
//! does reach one makes the product an infinite sum.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::element::{same_quiver, Element};
use crate::error::{Error, Result};
use crate::quiver::{Path, PathDisplay, Quiver};
use crate::reduction::{Ambiguity, ReductionSystem};
use crate::Verdict;

/// The deformation `s ↦ φ̃_s`, with an optional truncation order.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationCochain {
    values: BTreeMap<Path, Element>,
    trunc: Option<u32>,
}

impl DeformationCochain {
    /// With `trunc = Some(N)` every coefficient must have positive parameter
    /// degree; values are truncated at `N`.
    pub fn new(sys: &ReductionSystem, values: Vec<(Path, Element)>, trunc: Option<u32>) -> Result<Self> {
        let q = sys.quiver();
        let mut map = BTreeMap::new();
        for (s, v) in values {
            let name = PathDisplay(q, &s).to_string();
            if sys.rule_for(&s).is_none() {
                return Err(Error::usage(format!("`{name}` is not a left side of the reduction system")));
            }
            if !same_quiver(v.quiver(), q) {
                return Err(Error::usage("deformation value lives in a different quiver"));
            }
            for (p, c) in v.terms() {
                if !q.parallel(p, &s) {
                    return Err(Error::usage(format!(
                        "deformation of `{name}`: `{}` is not parallel",
                        PathDisplay(q, p)
                    )));
                }
                if !sys.is_irreducible(p) {
                    return Err(Error::usage(format!(
                        "deformation of `{name}`: `{}` is reducible",
                        PathDisplay(q, p)
                    )));
                }
                if trunc.is_some() && c.min_param_degree() == Some(0) {
                    return Err(Error::usage(format!(
                        "deformation of `{name}` has a term without a deformation parameter"
                    )));
                }
            }
            let v = v.truncate(trunc);
            if map.insert(s, v).is_some() {
                return Err(Error::usage(format!("`{name}` deformed twice")));
            }
        }
        map.retain(|_, v| !v.is_zero());
        Ok(DeformationCochain { values: map, trunc })
    }

    pub fn zero(trunc: Option<u32>) -> Self {
        DeformationCochain { values: BTreeMap::new(), trunc }
    }

    pub fn get(&self, s: &Path) -> Option<&Element> {
        self.values.get(s)
    }

    pub fn values(&self) -> impl Iterator<Item = (&Path, &Element)> {
        self.values.iter()
    }

    pub fn trunc(&self) -> Option<u32> {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }
}

/// `ψ` on arrows, inducing `T(x) = x + ψ(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeOnArrows {
    values: BTreeMap<u32, Element>,
}

impl GaugeOnArrows {
    pub fn new(sys: &ReductionSystem, values: Vec<(u32, Element)>) -> Result<Self> {
        let q = sys.quiver();
        let mut map = BTreeMap::new();
        for (a, v) in values {
            let x = Path::from_arrows(&[a]);
            for (p, c) in v.terms() {
                if !q.parallel(p, &x) || !sys.is_irreducible(p) {
                    return Err(Error::usage(format!(
                        "gauge value of `{}` must be irreducible and parallel",
                        PathDisplay(q, &x)
                    )));
                }
                if c.min_param_degree() == Some(0) {
                    return Err(Error::usage(format!(
                        "gauge value of `{}` has a term without a deformation parameter",
                        PathDisplay(q, &x)
                    )));
                }
            }
            map.insert(a, v);
        }
        Ok(GaugeOnArrows { values: map })
    }

    pub fn get(&self, arrow: u32) -> Option<&Element> {
        self.values.get(&arrow)
    }
}

/// Terms grouped by how many times `φ̃` was used.
pub type Levels = Vec<Element>;

type Key = (Path, Option<u32>);

struct Edge {
    coeff: crate::scalar::PolyScalar,
    child: Key,
    tilde: bool,
}

#[derive(Clone)]
struct Memo {
    levels: Levels,
    productive: bool,
}

/// Evaluates star products for one deformed system, caching per-path
/// normal forms.
pub struct StarProduct<'a> {
    sys: &'a ReductionSystem,
    phi: &'a DeformationCochain,
    tilde: Vec<Option<&'a Element>>,
    budget: u64,
    memo: RefCell<HashMap<Key, Memo>>,
}

impl<'a> StarProduct<'a> {
    pub fn new(sys: &'a ReductionSystem, phi: &'a DeformationCochain, budget: u64) -> Self {
        let tilde = sys.rules().iter().map(|r| phi.get(&r.lhs)).collect();
        StarProduct { sys, phi, tilde, budget, memo: RefCell::new(HashMap::new()) }
    }

    pub fn system(&self) -> &ReductionSystem {
        self.sys
    }

    pub fn cochain(&self) -> &DeformationCochain {
        self.phi
    }

    fn quiver(&self) -> &Arc<Quiver> {
        self.sys.quiver()
    }

    fn edges(&self, key: &Key) -> Option<Vec<Edge>> {
        let (p, m) = key;
        let w = p.arrows();
        let (start, i) = self.sys.lhs().split_word(w)?;
        let rule = &self.sys.rules()[i];
        let end = start + rule.lhs.len();
        let src = self.quiver().source(p);
        let mut out = Vec::new();
        let sides = std::iter::once((&rule.rhs, false)).chain(self.tilde[i].map(|e| (e, true)));
        for (e, tilde) in sides {
            for (u, c) in e.terms() {
                let d = c.min_param_degree().unwrap_or(0);
                let child_m = match m {
                    None => None,
                    Some(m) if d <= *m => Some(m - d),
                    Some(_) => continue,
                };
                let child = self.quiver().join(&[&w[..start], u.arrows(), &w[end..]], src);
                out.push(Edge { coeff: c.clone(), child: (child, child_m), tilde });
            }
        }
        Some(out)
    }

    /// Normal form of a single path, by level.
    fn path_levels(&self, root: Key) -> Result<Levels> {
        if let Some(m) = self.memo.borrow().get(&root) {
            return Ok(m.levels.clone());
        }
        // Explore the part of the reduction graph not yet evaluated.
        let mut ids: HashMap<Key, usize> = HashMap::new();
        let mut keys: Vec<Key> = Vec::new();
        let mut adj: Vec<Option<Vec<(Edge, usize)>>> = Vec::new();
        let mut old: Vec<Option<Memo>> = Vec::new();
        ids.insert(root.clone(), 0);
        keys.push(root);
        let mut next = 0;
        while next < keys.len() {
            let key = keys[next].clone();
            next += 1;
            if keys.len() as u64 > self.budget {
                return Err(Error::Budget { budget: self.budget, partial: None });
            }
            let cached = self.memo.borrow().get(&key).cloned();
            if let Some(m) = cached {
                old.push(Some(m));
                adj.push(None);
                continue;
            }
            old.push(None);
            match self.edges(&key) {
                None => adj.push(None),
                Some(edges) => {
                    let mut list = Vec::with_capacity(edges.len());
                    for e in edges {
                        let id = *ids.entry(e.child.clone()).or_insert_with(|| {
                            keys.push(e.child.clone());
                            keys.len() - 1
                        });
                        list.push((e, id));
                    }
                    adj.push(Some(list));
                }
            }
        }
        let n = keys.len();
        // Productive nodes reach an irreducible path.
        let mut productive = vec![false; n];
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut stack = Vec::new();
        for v in 0..n {
            match (&old[v], &adj[v]) {
                (Some(m), _) => productive[v] = m.productive,
                (None, None) => productive[v] = true,
                (None, Some(list)) => {
                    for (_, c) in list {
                        rev[*c].push(v);
                    }
                }
            }
            if productive[v] {
                stack.push(v);
            }
        }
        while let Some(v) = stack.pop() {
            for &u in &rev[v] {
                if !productive[u] {
                    productive[u] = true;
                    stack.push(u);
                }
            }
        }
        let order = self.acyclic_order(&adj, &productive, &keys)?;
        let mut values: Vec<Option<Levels>> = vec![None; n];
        for v in order {
            let levels = if let Some(m) = &old[v] {
                m.levels.clone()
            } else if !productive[v] {
                Vec::new()
            } else {
                match &adj[v] {
                    None => vec![Element::path(self.quiver(), keys[v].0.clone())],
                    Some(list) => {
                        let mut acc: Levels = Vec::new();
                        for (e, c) in list {
                            if !productive[*c] {
                                continue;
                            }
                            let child = values[*c].as_ref().expect("children first");
                            let shift = usize::from(e.tilde);
                            for (k, lv) in child.iter().enumerate() {
                                let term = lv.scale(&e.coeff).truncate(keys[v].1);
                                add_level(&mut acc, k + shift, &term, self.quiver());
                            }
                        }
                        trim(&mut acc);
                        acc
                    }
                }
            };
            values[v] = Some(levels);
        }
        let mut memo = self.memo.borrow_mut();
        for v in 0..n {
            if old[v].is_none() {
                memo.insert(
                    keys[v].clone(),
                    Memo { levels: values[v].clone().unwrap(), productive: productive[v] },
                );
            }
        }
        Ok(values[0].take().unwrap())
    }

    /// Children-first order of the productive subgraph; fails on cycles.
    fn acyclic_order(&self, adj: &[Option<Vec<(Edge, usize)>>], productive: &[bool], keys: &[Key]) -> Result<Vec<usize>> {
        let n = adj.len();
        let succ = |v: usize| -> Vec<(usize, bool)> {
            match &adj[v] {
                Some(list) if productive[v] => list
                    .iter()
                    .filter(|(_, c)| productive[*c])
                    .map(|(e, c)| (*c, e.tilde))
                    .collect(),
                _ => Vec::new(),
            }
        };
        // 0 = unvisited, 1 = on stack, 2 = done.
        let mut state = vec![0u8; n];
        let mut order = Vec::with_capacity(n);
        for s in 0..n {
            if state[s] != 0 {
                continue;
            }
            // (node, successors, next successor, entered through φ̃)
            let mut stack: Vec<(usize, Vec<(usize, bool)>, usize, bool)> = vec![(s, succ(s), 0, false)];
            state[s] = 1;
            while let Some((v, children, i, _)) = stack.last_mut() {
                if *i < children.len() {
                    let (c, tilde) = children[*i];
                    *i += 1;
                    match state[c] {
                        0 => {
                            state[c] = 1;
                            stack.push((c, succ(c), 0, tilde));
                        }
                        1 => {
                            let pos = stack.iter().position(|e| e.0 == c).unwrap();
                            let uses_tilde = tilde || stack[pos + 1..].iter().any(|e| e.3);
                            let p = PathDisplay(self.quiver(), &keys[c].0).to_string();
                            return Err(if uses_tilde {
                                Error::NotWellDefined(format!(
                                    "reduction of `{p}` cycles through the deformation and still reaches irreducible paths"
                                ))
                            } else {
                                Error::Budget { budget: self.budget, partial: None }
                            });
                        }
                        _ => {}
                    }
                } else {
                    state[*v] = 2;
                    order.push(*v);
                    stack.pop();
                }
            }
        }
        Ok(order)
    }

    /// Irreducible representative, reducing with `φ` alone if needed.
    fn representative(&self, a: &Element) -> Result<Element> {
        if !same_quiver(a.quiver(), self.quiver()) {
            return Err(Error::usage("element belongs to a different quiver"));
        }
        if a.paths().all(|p| self.sys.is_irreducible(p)) {
            Ok(a.clone())
        } else {
            self.sys.reduce_full(a, self.budget)
        }
    }

    /// Normal form of an arbitrary element under `φ + z·φ̃`, by level.
    pub fn normal_form_levels(&self, a: &Element) -> Result<Levels> {
        let n = self.phi.trunc;
        let mut acc: Levels = Vec::new();
        for (p, c) in a.terms() {
            let levels = self.path_levels((p.clone(), n))?;
            for (k, lv) in levels.iter().enumerate() {
                add_level(&mut acc, k, &lv.scale(c).truncate(n), self.quiver());
            }
        }
        trim(&mut acc);
        Ok(acc)
    }

    /// Normal form under `φ + φ̃` (all levels summed).
    pub fn normal_form(&self, a: &Element) -> Result<Element> {
        Ok(sum_levels(&self.normal_form_levels(a)?, self.quiver()))
    }

    pub fn star_levels(&self, a: &Element, b: &Element) -> Result<Levels> {
        let a = self.representative(a)?;
        let b = self.representative(b)?;
        self.normal_form_levels(&(&a * &b))
    }

    pub fn star_k(&self, a: &Element, b: &Element, k: usize) -> Result<Element> {
        let levels = self.star_levels(a, b)?;
        Ok(levels.get(k).cloned().unwrap_or_else(|| Element::zero(self.quiver())))
    }

    pub fn star(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(sum_levels(&self.star_levels(a, b)?, self.quiver()))
    }

    /// `(u⋆v)⋆w` and `u⋆(v⋆w)` for an overlap.
    pub fn overlap_products(&self, amb: &Ambiguity) -> Result<(Element, Element)> {
        let q = self.quiver();
        let [u, v, w] = &amb.factors[..] else {
            return Err(Error::usage("not an overlap ambiguity"));
        };
        let (u, v, w) = (Element::path(q, u.clone()), Element::path(q, v.clone()), Element::path(q, w.clone()));
        let left = self.star(&self.star(&u, &v)?, &w)?;
        let right = self.star(&u, &self.star(&v, &w)?)?;
        Ok((left, right))
    }
}

fn add_level(acc: &mut Levels, k: usize, e: &Element, q: &Arc<Quiver>) {
    if e.is_zero() {
        return;
    }
    while acc.len() <= k {
        acc.push(Element::zero(q));
    }
    acc[k] = &acc[k] + e;
}

fn trim(acc: &mut Levels) {
    while acc.last().is_some_and(Element::is_zero) {
        acc.pop();
    }
}

fn sum_levels(levels: &Levels, q: &Arc<Quiver>) -> Element {
    levels.iter().fold(Element::zero(q), |s, e| &s + e)
}

pub fn star_k(a: &Element, b: &Element, sys: &ReductionSystem, phi: &DeformationCochain, k: usize, budget: u64) -> Result<Element> {
    StarProduct::new(sys, phi, budget).star_k(a, b, k)
}

pub fn star(a: &Element, b: &Element, sys: &ReductionSystem, phi: &DeformationCochain, budget: u64) -> Result<Element> {
    StarProduct::new(sys, phi, budget).star(a, b)
}

#[derive(Clone, Debug)]
pub struct McEntry {
    pub ambiguity: Ambiguity,
    /// `(u⋆v)⋆w` and `u⋆(v⋆w)`, or the error that prevented them.
    pub outcome: std::result::Result<(Element, Element), Error>,
}

impl McEntry {
    pub fn defect(&self) -> Option<Element> {
        self.outcome.as_ref().ok().map(|(l, r)| l - r)
    }
}

#[derive(Clone, Debug)]
pub struct McReport {
    pub entries: Vec<McEntry>,
    pub verdict: Verdict,
}

/// Associativity of the star product on every overlap.
pub fn mc_check(sys: &ReductionSystem, phi: &DeformationCochain, budget: u64) -> McReport {
    let entries: Vec<McEntry> = sys
        .overlaps()
        .into_par_iter()
        .map(|amb| {
            let engine = StarProduct::new(sys, phi, budget);
            let outcome = engine.overlap_products(&amb);
            McEntry { ambiguity: amb, outcome }
        })
        .collect();
    let verdict = if entries.iter().any(|e| e.defect().is_some_and(|d| !d.is_zero())) {
        Verdict::Fail
    } else if entries.iter().any(|e| e.outcome.is_err()) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    McReport { entries, verdict }
}

#[derive(Clone, Debug)]
pub struct GaugeEntry {
    pub lhs_path: Path,
    /// `T(φ_s + φ̃′_s)` and the normal form of `T(s₁)⋯T(s_m)`.
    pub outcome: std::result::Result<(Element, Element), Error>,
}

#[derive(Clone, Debug)]
pub struct GaugeReport {
    pub entries: Vec<GaugeEntry>,
    pub verdict: Verdict,
}

/// Checks that `T(x) = x + ψ(x)` maps the system deformed by `phi_prime`
/// to the one deformed by `phi`, up to the truncation order of `phi`.
pub fn gauge_check(
    psi: &GaugeOnArrows,
    sys: &ReductionSystem,
    phi: &DeformationCochain,
    phi_prime: &DeformationCochain,
    budget: u64,
) -> GaugeReport {
    let engine = StarProduct::new(sys, phi, budget);
    let q = sys.quiver();
    let n = phi.trunc();
    let t_arrow = |a: u32| -> Element {
        let x = Element::path(q, Path::from_arrows(&[a]));
        match psi.get(a) {
            Some(v) => &x + v,
            None => x,
        }
    };
    let t_word = |w: &[u32], src: usize| -> Result<Element> {
        let mut prod = Element::path(q, Path::Trivial(src));
        for &a in w {
            prod = (&prod * &t_arrow(a)).truncate(n);
        }
        Ok(engine.normal_form(&prod)?.truncate(n))
    };
    let t_elem = |e: &Element| -> Result<Element> {
        let mut out = Element::zero(q);
        for (p, c) in e.terms() {
            out = &out + &t_word(p.arrows(), q.source(p))?.scale(c);
        }
        Ok(out.truncate(n))
    };
    let mut entries = Vec::new();
    for rule in sys.rules() {
        let s = &rule.lhs;
        let outcome = (|| {
            let mut target = rule.rhs.clone();
            if let Some(v) = phi_prime.get(s) {
                target = &target + v;
            }
            let lhs = t_elem(&target)?;
            let rhs = t_word(s.arrows(), q.source(s))?;
            Ok((lhs, rhs))
        })();
        entries.push(GaugeEntry { lhs_path: s.clone(), outcome });
    }
    let verdict = if entries.iter().any(|e| matches!(&e.outcome, Ok((l, r)) if l != r)) {
        Verdict::Fail
    } else if entries.iter().any(|e| e.outcome.is_err()) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    GaugeReport { entries, verdict }
}
