//! Reduction systems: right-most rewriting, ambiguities, the Diamond Lemma
//! check and completion from generators.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::element::{same_quiver, Element};
use crate::error::{Error, Result};
use crate::quiver::{AdmissibleOrder, Path, PathDisplay, Quiver, Word};
use crate::scalar::PolyScalar;
use crate::Verdict;

/// Default number of basic reductions allowed per input basis path.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Path,
    pub rhs: Element,
}

/// The set `S` of left sides with a lookup index.
#[derive(Clone, Debug)]
pub struct LeftSides {
    quiver: Arc<Quiver>,
    words: Vec<Path>,
    index: HashMap<Word, usize>,
    lens: Vec<usize>,
    max_len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResult {
    pub q: Path,
    pub s: Path,
    pub r: Path,
}

/// A word with a factorization witness: `[u, v, w]` for overlaps,
/// `[u₀, …, u_{n+1}]` for left n-ambiguities.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ambiguity {
    pub word: Path,
    pub factors: Vec<Path>,
}

impl Ambiguity {
    pub fn display<'a>(&'a self, q: &'a Quiver) -> impl fmt::Display + 'a {
        AmbiguityDisplay(q, self)
    }
}

struct AmbiguityDisplay<'a>(&'a Quiver, &'a Ambiguity);

impl fmt::Display for AmbiguityDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.1.factors.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{}", PathDisplay(self.0, p))?;
        }
        Ok(())
    }
}

impl LeftSides {
    pub fn new(quiver: &Arc<Quiver>, words: Vec<Path>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, w) in words.iter().enumerate() {
            quiver.validate(w)?;
            if w.len() < 2 {
                return Err(Error::usage(format!(
                    "left side `{}` must have length at least 2",
                    PathDisplay(quiver, w)
                )));
            }
            if index.insert(Word::from_slice(w.arrows()), i).is_some() {
                return Err(Error::usage(format!("duplicate left side `{}`", PathDisplay(quiver, w))));
            }
        }
        for a in &words {
            for b in &words {
                if a != b && b.contains_subword(a.arrows()) {
                    return Err(Error::usage(format!(
                        "left side `{}` is a subpath of `{}`",
                        PathDisplay(quiver, a),
                        PathDisplay(quiver, b)
                    )));
                }
            }
        }
        Ok(Self::build(quiver, words, index))
    }

    fn build(quiver: &Arc<Quiver>, words: Vec<Path>, index: HashMap<Word, usize>) -> Self {
        let mut lens: Vec<usize> = words.iter().map(Path::len).collect();
        lens.sort_unstable();
        lens.dedup();
        let max_len = lens.last().copied().unwrap_or(0);
        LeftSides { quiver: quiver.clone(), words, index, lens, max_len }
    }

    pub fn words(&self) -> &[Path] {
        &self.words
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    /// Index of the left side equal to `w`.
    pub fn lookup(&self, w: &[u32]) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// `(start, rule)` of the right-most occurrence of a left side in `w`.
    pub fn split_word(&self, w: &[u32]) -> Option<(usize, usize)> {
        for start in (0..w.len()).rev() {
            for &l in &self.lens {
                if start + l > w.len() {
                    break;
                }
                if let Some(&i) = self.index.get(&w[start..start + l]) {
                    return Some((start, i));
                }
            }
        }
        None
    }

    /// Whether some left side ends exactly at the end of `w`.
    fn has_suffix(&self, w: &[u32]) -> bool {
        self.lens.iter().any(|&l| l <= w.len() && self.index.contains_key(&w[w.len() - l..]))
    }

    pub fn is_irreducible(&self, p: &Path) -> bool {
        self.split_word(p.arrows()).is_none()
    }

    pub fn rightmost_split(&self, p: &Path) -> Option<SplitResult> {
        let w = p.arrows();
        let (start, i) = self.split_word(w)?;
        let s = &self.words[i];
        let end = start + s.len();
        let q = self.quiver.join(&[&w[..start]], self.quiver.source(p));
        let r = self.quiver.join(&[&w[end..]], self.quiver.target(s));
        Some(SplitResult { q, s: s.clone(), r })
    }

    /// All overlaps `uvw` with `uv, vw ∈ S`, including self-overlaps.
    pub fn overlaps(&self) -> Vec<Ambiguity> {
        let mut out = BTreeSet::new();
        for a in &self.words {
            for b in &self.words {
                let (x, y) = (a.arrows(), b.arrows());
                for k in 1..x.len().min(y.len()) {
                    if x[x.len() - k..] == y[..k] {
                        let u = Path::from_arrows(&x[..x.len() - k]);
                        let v = Path::from_arrows(&y[..k]);
                        let w = Path::from_arrows(&y[k..]);
                        let mut word = Word::from_slice(x);
                        word.extend_from_slice(&y[k..]);
                        out.insert(Ambiguity { word: Path::Word(word), factors: vec![u, v, w] });
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// The left n-ambiguities `S_{n+2}`.
    pub fn ambiguities(&self, n: usize) -> Vec<Ambiguity> {
        let mut chains: Vec<Vec<Path>> = self
            .words
            .iter()
            .map(|s| {
                let w = s.arrows();
                vec![Path::from_arrows(&w[..1]), Path::from_arrows(&w[1..])]
            })
            .collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for chain in &chains {
                for ext in self.minimal_extensions(chain.last().unwrap()) {
                    let mut c = chain.clone();
                    c.push(ext);
                    next.push(c);
                }
            }
            chains = next;
        }
        let out: BTreeSet<Ambiguity> = chains
            .into_iter()
            .map(|factors| {
                let mut word = Word::new();
                for f in &factors {
                    word.extend_from_slice(f.arrows());
                }
                Ambiguity { word: Path::Word(word), factors }
            })
            .collect();
        out.into_iter().collect()
    }

    /// Irreducible `w` such that `u·w` is reducible but `u·d` is not for
    /// every proper left subpath `d` of `w`.
    fn minimal_extensions(&self, u: &Path) -> BTreeSet<Path> {
        let x = u.arrows();
        let mut out = BTreeSet::new();
        for s in &self.words {
            let y = s.arrows();
            for k in 1..=x.len().min(y.len() - 1) {
                if x[x.len() - k..] != y[..k] {
                    continue;
                }
                let w = &y[k..];
                let mut uw = Word::from_slice(x);
                let mut minimal = true;
                for &a in &w[..w.len() - 1] {
                    uw.push(a);
                    if self.has_suffix(&uw) {
                        minimal = false;
                        break;
                    }
                }
                if minimal && self.split_word(w).is_none() {
                    out.insert(Path::from_arrows(w));
                }
            }
        }
        out
    }

    /// Irreducible paths of length at most `max_len`; `None` enumerates all
    /// of them and fails if there are infinitely many.
    pub fn irreducible_paths(&self, max_len: Option<usize>) -> Result<Vec<Path>> {
        let q = &self.quiver;
        let mut out: Vec<Path> = (0..q.num_vertices()).map(Path::Trivial).collect();
        if max_len == Some(0) {
            return Ok(out);
        }
        // Past this length some window state repeats and the path pumps.
        let window = self.max_len.max(1) - 1;
        let mut states: u64 = 0;
        for k in 0..=window {
            states = states.saturating_add((q.num_arrows() as u64).saturating_pow(k as u32));
        }
        let pump_bound = states.saturating_mul(q.num_vertices().max(1) as u64);
        let mut level: Vec<Word> = (0..q.num_arrows() as u32).map(|a| Word::from_slice(&[a])).collect();
        let mut len = 1usize;
        while !level.is_empty() {
            if max_len.is_none() && len as u64 > pump_bound {
                return Err(Error::usage(
                    "infinitely many irreducible paths; supply a length bound",
                ));
            }
            if out.len() + level.len() > 5_000_000 {
                return Err(Error::usage("irreducible path enumeration too large; lower the bound"));
            }
            level.sort();
            out.extend(level.iter().map(|w| Path::Word(w.clone())));
            if max_len.is_some_and(|m| len >= m) {
                break;
            }
            let mut next = Vec::new();
            for w in &level {
                let t = q.arrows()[*w.last().unwrap() as usize].target;
                for (a, arrow) in q.arrows().iter().enumerate() {
                    if arrow.source != t {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(a as u32);
                    if !self.has_suffix(&v) {
                        next.push(v);
                    }
                }
            }
            level = next;
            len += 1;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct ReductionSystem {
    lhs: LeftSides,
    rules: Vec<Rule>,
}

impl PartialEq for ReductionSystem {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
    }
}

impl ReductionSystem {
    /// Validates non-overlapping left sides, parallel and irreducible right
    /// sides.
    pub fn new(quiver: &Arc<Quiver>, rules: Vec<Rule>) -> Result<Self> {
        let lhs = LeftSides::new(quiver, rules.iter().map(|r| r.lhs.clone()).collect())?;
        for r in &rules {
            if !same_quiver(r.rhs.quiver(), quiver) {
                return Err(Error::usage("rule right side lives in a different quiver"));
            }
            for p in r.rhs.paths() {
                if !quiver.parallel(p, &r.lhs) {
                    return Err(Error::usage(format!(
                        "rule for `{}`: `{}` is not parallel to the left side",
                        PathDisplay(quiver, &r.lhs),
                        PathDisplay(quiver, p)
                    )));
                }
                if !lhs.is_irreducible(p) {
                    return Err(Error::usage(format!(
                        "rule for `{}`: `{}` is reducible",
                        PathDisplay(quiver, &r.lhs),
                        PathDisplay(quiver, p)
                    )));
                }
            }
        }
        Ok(ReductionSystem { lhs, rules })
    }

    /// Skips the irreducibility check on right sides (used mid-completion).
    fn new_loose(quiver: &Arc<Quiver>, rules: Vec<Rule>) -> Self {
        let words: Vec<Path> = rules.iter().map(|r| r.lhs.clone()).collect();
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (Word::from_slice(w.arrows()), i))
            .collect();
        ReductionSystem { lhs: LeftSides::build(quiver, words, index), rules }
    }

    /// Convenience constructor from `(lhs, rhs)` pairs.
    pub fn from_pairs(quiver: &Arc<Quiver>, pairs: Vec<(Path, Element)>) -> Result<Self> {
        Self::new(quiver, pairs.into_iter().map(|(lhs, rhs)| Rule { lhs, rhs }).collect())
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.lhs.quiver
    }

    pub fn lhs(&self) -> &LeftSides {
        &self.lhs
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule_for(&self, s: &Path) -> Option<&Rule> {
        self.lhs.lookup(s.arrows()).map(|i| &self.rules[i])
    }

    pub fn is_irreducible(&self, p: &Path) -> bool {
        self.lhs.is_irreducible(p)
    }

    pub fn rightmost_split(&self, p: &Path) -> Option<SplitResult> {
        self.lhs.rightmost_split(p)
    }

    pub fn overlaps(&self) -> Vec<Ambiguity> {
        self.lhs.overlaps()
    }

    pub fn ambiguities(&self, n: usize) -> Vec<Ambiguity> {
        self.lhs.ambiguities(n)
    }

    pub fn irreducible_paths(&self, max_len: Option<usize>) -> Result<Vec<Path>> {
        self.lhs.irreducible_paths(max_len)
    }

    /// `q·x·r` for every path `x` of `e`, scaled by `c`, added into `out`.
    pub(crate) fn splice(&self, w: &[u32], start: usize, end: usize, src: usize, e: &Element, c: &PolyScalar, out: &mut Element) {
        for (u, d) in e.terms() {
            let p = self.quiver().join(&[&w[..start], u.arrows(), &w[end..]], src);
            out.add_term(p, c * d);
        }
    }

    /// One right-most reduction applied to every reducible basis path.
    pub fn reduce_step(&self, a: &Element) -> Element {
        let mut out = Element::zero(self.quiver());
        for (p, c) in a.terms() {
            let w = p.arrows();
            match self.lhs.split_word(w) {
                None => out.add_term(p.clone(), c.clone()),
                Some((start, i)) => {
                    let end = start + self.rules[i].lhs.len();
                    self.splice(w, start, end, self.quiver().source(p), &self.rules[i].rhs, c, &mut out);
                }
            }
        }
        out
    }

    /// Iterates right-most reduction to the normal form. The budget counts
    /// basic reductions per input basis path.
    pub fn reduce_full(&self, a: &Element, budget: u64) -> Result<Element> {
        if budget == 0 {
            return Err(Error::usage("reduction budget must be positive"));
        }
        let limit = budget.saturating_mul(a.len().max(1) as u64);
        let mut steps = 0u64;
        let mut done = Element::zero(self.quiver());
        let mut pending = a.clone();
        while !pending.is_zero() {
            let mut next = Element::zero(self.quiver());
            for (p, c) in pending.terms() {
                let w = p.arrows();
                match self.lhs.split_word(w) {
                    None => done.add_term(p.clone(), c.clone()),
                    Some((start, i)) => {
                        steps += 1;
                        let end = start + self.rules[i].lhs.len();
                        self.splice(w, start, end, self.quiver().source(p), &self.rules[i].rhs, c, &mut next);
                    }
                }
            }
            if steps > limit {
                return Err(Error::Budget { budget, partial: Some(Box::new(&done + &next)) });
            }
            pending = next;
        }
        Ok(done)
    }

    pub fn reduce_path(&self, p: &Path, budget: u64) -> Result<Element> {
        self.reduce_full(&Element::path(self.quiver(), p.clone()), budget)
    }

    /// Compares the two ways of reducing each overlap.
    pub fn check_diamond(&self, budget: u64) -> DiamondReport {
        let entries: Vec<(Ambiguity, OverlapStatus)> = self
            .overlaps()
            .into_par_iter()
            .map(|amb| {
                let status = match self.resolve(&amb, budget) {
                    Ok((l, r)) if l == r => OverlapStatus::Resolved,
                    Ok((left, right)) => OverlapStatus::Failed { left, right },
                    Err(_) => OverlapStatus::BudgetExceeded,
                };
                (amb, status)
            })
            .collect();
        let verdict = if entries.iter().any(|(_, s)| matches!(s, OverlapStatus::Failed { .. })) {
            Verdict::Fail
        } else if entries.iter().any(|(_, s)| matches!(s, OverlapStatus::BudgetExceeded)) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        DiamondReport { entries, verdict }
    }

    /// Normal forms of `φ_{uv}·w` and `u·φ_{vw}`.
    pub fn resolve(&self, amb: &Ambiguity, budget: u64) -> Result<(Element, Element)> {
        let q = self.quiver();
        let [u, v, w] = &amb.factors[..] else {
            return Err(Error::usage("not an overlap ambiguity"));
        };
        let uv = q.compose(u, v).expect("overlap is a path");
        let vw = q.compose(v, w).expect("overlap is a path");
        let left = &self.rule_for(&uv).expect("uv ∈ S").rhs * &Element::path(q, w.clone());
        let right = &Element::path(q, u.clone()) * &self.rule_for(&vw).expect("vw ∈ S").rhs;
        Ok((self.reduce_full(&left, budget)?, self.reduce_full(&right, budget)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OverlapStatus {
    Resolved,
    Failed { left: Element, right: Element },
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct DiamondReport {
    pub entries: Vec<(Ambiguity, OverlapStatus)>,
    pub verdict: Verdict,
}

/// Buchberger-style completion of the two-sided ideal generated by
/// `generators`, orienting by tips under `ord`.
pub fn complete(
    quiver: &Arc<Quiver>,
    generators: &[Element],
    ord: &AdmissibleOrder,
    max_rounds: usize,
    budget: u64,
) -> Result<ReductionSystem> {
    for g in generators {
        let mut ps = g.paths();
        if let Some(first) = ps.next() {
            if ps.any(|p| !quiver.parallel(p, first)) {
                return Err(Error::usage(format!("generator `{g}` is not uniform")));
            }
        }
    }
    let mut rules: Vec<Rule> = Vec::new();
    let mut queue: VecDeque<Element> = generators.iter().cloned().collect();
    let mut rounds = 0;
    loop {
        while let Some(f) = queue.pop_front() {
            add_relation(quiver, &mut rules, &mut queue, &f, ord, budget)?;
        }
        let sys = ReductionSystem::new_loose(quiver, rules.clone());
        let mut outstanding = Vec::new();
        for amb in sys.overlaps() {
            let (l, r) = sys.resolve(&amb, budget)?;
            let d = &l - &r;
            if !d.is_zero() {
                outstanding.push(amb);
                queue.push_back(d);
            }
        }
        if outstanding.is_empty() {
            rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
            let sys = ReductionSystem::new(quiver, rules)?;
            debug_assert_eq!(sys.check_diamond(budget).verdict, Verdict::Pass);
            return Ok(sys);
        }
        rounds += 1;
        if rounds >= max_rounds {
            return Err(Error::Incomplete { rounds, outstanding, partial: Box::new(sys) });
        }
    }
}

fn add_relation(
    quiver: &Arc<Quiver>,
    rules: &mut Vec<Rule>,
    queue: &mut VecDeque<Element>,
    f: &Element,
    ord: &AdmissibleOrder,
    budget: u64,
) -> Result<()> {
    let sys = ReductionSystem::new_loose(quiver, rules.clone());
    let f = sys.reduce_full(f, budget)?;
    let Some(tip) = f.paths().max_by(|a, b| ord.cmp(a, b)).cloned() else {
        return Ok(());
    };
    let lc = f.coeff(&tip).as_constant().ok_or_else(|| {
        Error::usage(format!("leading coefficient of `{f}` is not a rational constant"))
    })?;
    if tip.len() < 2 {
        return Err(Error::usage(format!(
            "relation `{f}` has a leading path of length {}; eliminate that generator first",
            tip.len()
        )));
    }
    let inv = PolyScalar::constant(num_rational::BigRational::from_integer(1.into()) / lc);
    let monic = f.scale(&inv);
    let rhs = &Element::path(quiver, tip.clone()) - &monic;
    let mut kept = Vec::new();
    for r in rules.drain(..) {
        if r.lhs.contains_subword(tip.arrows()) {
            queue.push_back(&Element::path(quiver, r.lhs.clone()) - &r.rhs);
        } else {
            kept.push(r);
        }
    }
    kept.push(Rule { lhs: tip, rhs });
    let sys = ReductionSystem::new_loose(quiver, kept.clone());
    *rules = kept
        .into_iter()
        .map(|r| sys.reduce_full(&r.rhs, budget).map(|rhs| Rule { lhs: r.lhs, rhs }))
        .collect::<Result<_>>()?;
    Ok(())
}
