//! Brute-force oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use pathdef::quantization::{CommPoly, Exponents};
use pathdef::scalar::{int, Monomial};
use pathdef::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every element reachable by applying one rule at any position of any
/// term, and the subset with no reducible term.
pub struct Exhaustive {
    pub reachable: BTreeSet<String>,
    pub terminal: BTreeSet<String>,
}

pub fn exhaustive_reductions(sys: &ReductionSystem, start: &Element, max_states: usize) -> Option<Exhaustive> {
    let q = sys.quiver().clone();
    let mut seen = BTreeSet::new();
    let mut terminal = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.to_string());
    queue.push_back(start.clone());
    while let Some(e) = queue.pop_front() {
        let mut moved = false;
        for (p, c) in e.terms() {
            let w = p.arrows();
            for rule in sys.rules() {
                let s = rule.lhs.arrows();
                if s.len() > w.len() {
                    continue;
                }
                for at in 0..=w.len() - s.len() {
                    if &w[at..at + s.len()] != s {
                        continue;
                    }
                    moved = true;
                    let mut next = e.clone();
                    next.add_term(p.clone(), -c.clone());
                    for (u, d) in rule.rhs.terms() {
                        let mut word: Vec<u32> = w[..at].to_vec();
                        word.extend_from_slice(u.arrows());
                        word.extend_from_slice(&w[at + s.len()..]);
                        let path = if word.is_empty() { Path::Trivial(q.source(p)) } else { Path::from_arrows(&word) };
                        next.add_term(path, c * d);
                    }
                    if seen.insert(next.to_string()) {
                        if seen.len() > max_states {
                            return None;
                        }
                        queue.push_back(next);
                    }
                }
            }
        }
        if !moved {
            terminal.insert(e.to_string());
        }
    }
    Some(Exhaustive { reachable: seen, terminal })
}

/// Words of length `1..=max_len` over `n` loops at one vertex.
pub fn words(n: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..n {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn loops(n: u32) -> Arc<Quiver> {
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let arrows: Vec<(&str, &str, &str)> = names.iter().map(|s| (s.as_str(), "1", "1")).collect();
    Arc::new(Quiver::new(&["1"], &arrows).unwrap())
}

/// Confluent systems obtained by completing random binomial relations on
/// two or three loops; at most six rules each.
pub fn random_confluent_systems(count: usize, seed: u64) -> Vec<ReductionSystem> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 100 * count, "could not generate enough systems");
        let n = r.gen_range(2..=3u32);
        let q = loops(n);
        let ord = AdmissibleOrder::declaration(&q);
        let ngens = r.gen_range(1..=3);
        let mut gens = Vec::new();
        for _ in 0..ngens {
            let len = r.gen_range(2..=3);
            let w1: Vec<u32> = (0..len).map(|_| r.gen_range(0..n)).collect();
            let mut g = Element::path(&q, Path::from_arrows(&w1));
            if r.gen_bool(0.7) {
                let len2 = r.gen_range(0..=len);
                let w2: Vec<u32> = (0..len2).map(|_| r.gen_range(0..n)).collect();
                let p2 = if w2.is_empty() { Path::Trivial(0) } else { Path::from_arrows(&w2) };
                let c = r.gen_range(-2..=2i64);
                if c != 0 && p2 != Path::from_arrows(&w1) {
                    g.add_term(p2, PolyScalar::from_int(c));
                }
            }
            gens.push(g);
        }
        if let Ok(sys) = complete(&q, &gens, &ord, 6, 10_000) {
            if (1..=6).contains(&sys.rules().len()) {
                out.push(sys);
            }
        }
    }
    out
}

/// Exponent vectors in `d` variables of total degree `≤ max`.
pub fn monomials(d: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        let mut n = Vec::new();
        for m in &out {
            for e in 0..=max {
                let mut m2: Vec<u32> = m.clone();
                m2.push(e);
                n.push(m2);
            }
        }
        out = n;
    }
    out.into_iter().filter(|m| m.iter().sum::<u32>() <= max).collect()
}

/// A random cochain `x_j x_i ↦ Σ c ħ^a x^e` with `a ∈ {1, 2}`, `|e| ≤ 2`.
pub fn random_poly_cochain(sys: &ReductionSystem, d: usize, hbar: &Var, trunc: u32, r: &mut ChaCha8Rng) -> DeformationCochain {
    let q = sys.quiver();
    let mut vals = Vec::new();
    for j in 0..d {
        for i in 0..j {
            let mut p = CommPoly::zero(d);
            for e in monomials(d, 2) {
                for a in 1..=2u32 {
                    if r.gen_bool(0.4) {
                        let c = r.gen_range(-3..=3i64);
                        let e: Exponents = e.iter().copied().collect();
                        p.add_term(e, PolyScalar::term(int(c), Monomial::var(hbar.clone(), a)));
                    }
                }
            }
            vals.push((Path::from_arrows(&[j as u32, i as u32]), p.to_element(q).unwrap()));
        }
    }
    DeformationCochain::new(sys, vals, Some(trunc)).unwrap()
}

/// Count of acyclic two-leg graphs computed from adjacency matrices: every
/// 0/1 matrix on `k + 2` nodes where internal rows have exactly two ones
/// off the diagonal and the external rows are empty, weighted by the
/// incoming orders and divided by the `k!` relabellings.
pub fn graph_count_oracle(k: usize) -> u64 {
    let n = k + 2;
    let cells = k * n;
    let mut total = 0u64;
    for mask in 0u64..(1u64 << cells) {
        let row = |v: usize| -> Vec<usize> { (0..n).filter(|&c| mask >> (v * n + c) & 1 == 1).collect() };
        let rows: Vec<Vec<usize>> = (0..k).map(row).collect();
        if rows.iter().enumerate().any(|(v, r)| r.len() != 2 || r.contains(&(v + 2))) {
            continue;
        }
        // Kahn's algorithm on the internal nodes.
        let mut removed = vec![false; k];
        let mut progress = true;
        while progress {
            progress = false;
            for v in 0..k {
                if !removed[v] && rows[v].iter().all(|&t| t < 2 || removed[t - 2]) {
                    removed[v] = true;
                    progress = true;
                }
            }
        }
        if removed.iter().any(|r| !r) {
            continue;
        }
        let mut indeg = vec![0u64; n];
        for r in &rows {
            for &t in r {
                indeg[t] += 1;
            }
        }
        total += indeg.iter().map(|&d| (1..=d).product::<u64>()).product::<u64>();
    }
    total / (1..=k as u64).product::<u64>()
}

/// `(f, g)` commutative images of elements, for comparisons.
pub fn comm(e: &Element) -> CommPoly {
    CommPoly::from_element(e)
}

pub fn mono(d: usize, e: &[u32]) -> CommPoly {
    CommPoly::monomial(d, e, PolyScalar::one())
}

/// Substitution map from `(name, value)` pairs.
pub fn point(symbols: &Symbols, values: &[(&str, i64)]) -> BTreeMap<Var, PolyScalar> {
    values
        .iter()
        .map(|(n, v)| (symbols.get(n).unwrap().clone(), PolyScalar::from_int(*v)))
        .collect()
}
