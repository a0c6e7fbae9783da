//! Acyclic graphs with two legs per internal vertex and ordered incoming
//! edges, and the bidifferential operators they index.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::reduction::ReductionSystem;
use crate::star::DeformationCochain;

use super::poly::{CommPoly, Exponents};

pub const DEFAULT_GRAPH_CAP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    F,
    G,
    Internal(usize),
}

impl Node {
    fn index(self) -> usize {
        match self {
            Node::F => 0,
            Node::G => 1,
            Node::Internal(v) => v + 2,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::F => f.write_str("f"),
            Node::G => f.write_str("g"),
            Node::Internal(v) => write!(f, "{}", v + 1),
        }
    }
}

/// `targets[v]` are the two endpoints of the legs of internal vertex `v`;
/// `incoming[n]` lists the sources of edges into node `n` (`f`, `g`, then
/// the internal vertices) from left to right.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KGraph {
    targets: Vec<[Node; 2]>,
    incoming: Vec<Vec<usize>>,
}

impl KGraph {
    /// Validates loops, parallel edges, cycles and the incoming orders.
    pub fn new(targets: Vec<[Node; 2]>, incoming: Vec<Vec<usize>>) -> Result<Self> {
        let k = targets.len();
        if incoming.len() != k + 2 {
            return Err(Error::usage("one incoming order per node is required"));
        }
        let mut expected: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k + 2];
        for (v, ts) in targets.iter().enumerate() {
            if ts[0] == ts[1] {
                return Err(Error::usage(format!("vertex {} has parallel legs", v + 1)));
            }
            for t in ts {
                if let Node::Internal(w) = t {
                    if *w >= k {
                        return Err(Error::usage("leg points to a missing vertex"));
                    }
                    if *w == v {
                        return Err(Error::usage(format!("vertex {} has a loop", v + 1)));
                    }
                }
                expected[t.index()].insert(v);
            }
        }
        for (n, order) in incoming.iter().enumerate() {
            let got: BTreeSet<usize> = order.iter().copied().collect();
            if got.len() != order.len() || got != expected[n] {
                return Err(Error::usage("incoming order does not match the legs"));
            }
        }
        let mut g = KGraph { targets, incoming };
        for t in &mut g.targets {
            t.sort();
        }
        if g.topological_order().is_none() {
            return Err(Error::usage("graph has an oriented cycle"));
        }
        Ok(g)
    }

    pub fn k(&self) -> usize {
        self.targets.len()
    }

    pub fn targets(&self) -> &[[Node; 2]] {
        &self.targets
    }

    pub fn incoming(&self, n: Node) -> &[usize] {
        &self.incoming[n.index()]
    }

    /// Internal vertices, sinks first.
    fn topological_order(&self) -> Option<Vec<usize>> {
        let k = self.k();
        let mut done = vec![false; k];
        let mut order = Vec::with_capacity(k);
        while order.len() < k {
            let next = (0..k).find(|&v| {
                !done[v]
                    && self.targets[v].iter().all(|t| match t {
                        Node::Internal(w) => done[*w],
                        _ => true,
                    })
            })?;
            done[next] = true;
            order.push(next);
        }
        Some(order)
    }

    fn relabel(&self, perm: &[usize]) -> KGraph {
        let k = self.k();
        let map = |n: Node| match n {
            Node::Internal(v) => Node::Internal(perm[v]),
            other => other,
        };
        let mut targets = vec![[Node::F, Node::F]; k];
        for (v, ts) in self.targets.iter().enumerate() {
            let mut t = [map(ts[0]), map(ts[1])];
            t.sort();
            targets[perm[v]] = t;
        }
        let mut incoming = vec![Vec::new(); k + 2];
        for (n, order) in self.incoming.iter().enumerate() {
            let new_n = if n < 2 { n } else { perm[n - 2] + 2 };
            incoming[new_n] = order.iter().map(|&s| perm[s]).collect();
        }
        KGraph { targets, incoming }
    }

    /// Lexicographically least relabelling of the internal vertices.
    pub fn canonical(&self) -> KGraph {
        let mut perm: Vec<usize> = (0..self.k()).collect();
        let mut best = self.clone();
        while next_permutation(&mut perm) {
            let g = self.relabel(&perm);
            if g < best {
                best = g;
            }
        }
        best
    }
}

impl fmt::Display for KGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, ts) in self.targets.iter().enumerate() {
            if v > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} -> {},{}", v + 1, ts[0], ts[1])?;
        }
        let names = |n: usize| match n {
            0 => Node::F,
            1 => Node::G,
            v => Node::Internal(v - 2),
        };
        for (n, order) in self.incoming.iter().enumerate() {
            if order.len() > 1 {
                let list: Vec<String> = order.iter().map(|s| (s + 1).to_string()).collect();
                write!(f, "; <{} {}", names(n), list.join(" "))?;
            }
        }
        Ok(())
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn all_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    let mut out = vec![items.to_vec()];
    while next_permutation(&mut idx) {
        out.push(idx.iter().map(|&i| items[i]).collect());
    }
    out
}

fn with_all_orders(targets: &[[Node; 2]], out: &mut BTreeSet<KGraph>) {
    let k = targets.len();
    let mut sources: Vec<Vec<usize>> = vec![Vec::new(); k + 2];
    for (v, ts) in targets.iter().enumerate() {
        for t in ts {
            sources[t.index()].push(v);
        }
    }
    let choices: Vec<Vec<Vec<usize>>> = sources.iter().map(|s| all_permutations(s)).collect();
    let mut pick = vec![0usize; k + 2];
    loop {
        let incoming = (0..k + 2).map(|n| choices[n][pick[n]].clone()).collect();
        let g = KGraph { targets: targets.to_vec(), incoming };
        out.insert(g.canonical());
        let mut n = 0;
        loop {
            if n == k + 2 {
                return;
            }
            pick[n] += 1;
            if pick[n] < choices[n].len() {
                break;
            }
            pick[n] = 0;
            n += 1;
        }
    }
}

/// All graphs with `k` internal vertices up to isomorphism, in canonical
/// order.
pub fn enumerate_graphs(k: usize, cap: usize) -> Result<Vec<KGraph>> {
    if k == 0 {
        return Err(Error::usage("graphs need at least one internal vertex"));
    }
    if k > cap {
        return Err(Error::usage(format!("k = {k} exceeds the graph cap {cap}")));
    }
    // Vertex v points to f, g or an earlier vertex; every acyclic graph has
    // such a labelling.
    let mut shapes: Vec<Vec<[Node; 2]>> = vec![Vec::new()];
    for v in 0..k {
        let nodes: Vec<Node> = [Node::F, Node::G].into_iter().chain((0..v).map(Node::Internal)).collect();
        let mut next = Vec::new();
        for s in &shapes {
            for a in 0..nodes.len() {
                for b in a + 1..nodes.len() {
                    let mut t = s.clone();
                    t.push([nodes[a], nodes[b]]);
                    next.push(t);
                }
            }
        }
        shapes = next;
    }
    let sets: Vec<BTreeSet<KGraph>> = shapes
        .par_iter()
        .map(|t| {
            let mut s = BTreeSet::new();
            with_all_orders(t, &mut s);
            s
        })
        .collect();
    let all: BTreeSet<KGraph> = sets.into_iter().flatten().collect();
    Ok(all.into_iter().collect())
}

/// Independent count: every directed graph on `k + 2` vertices with two
/// legs per internal vertex, filtered for acyclicity, weighted by the
/// number of incoming orders and divided by `k!` (automorphisms are
/// trivial once incoming edges are ordered).
pub fn brute_force_graph_count(k: usize) -> u64 {
    let n = k + 2;
    let mut total: u64 = 0;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut choice = vec![0usize; k];
    'outer: loop {
        // adj[v] for internal vertex v (node v + 2).
        let mut ok = true;
        let mut indeg = vec![0u64; n];
        for v in 0..k {
            let (a, b) = pairs[choice[v]];
            if a == v + 2 || b == v + 2 {
                ok = false;
                break;
            }
            indeg[a] += 1;
            indeg[b] += 1;
        }
        if ok && acyclic(k, &choice, &pairs) {
            total += indeg.iter().map(|&d| (1..=d).product::<u64>()).product::<u64>();
        }
        let mut i = 0;
        loop {
            if i == k {
                break 'outer;
            }
            choice[i] += 1;
            if choice[i] < pairs.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
    total / (1..=k as u64).product::<u64>()
}

fn acyclic(k: usize, choice: &[usize], pairs: &[(usize, usize)]) -> bool {
    let mut done = vec![false; k];
    for _ in 0..k {
        let Some(v) = (0..k).find(|&v| {
            !done[v] && {
                let (a, b) = pairs[choice[v]];
                [a, b].iter().all(|&t| t < 2 || done[t - 2])
            }
        }) else {
            return false;
        };
        done[v] = true;
    }
    true
}

/// `Σ c(x) ∂^[α] ⊗ ∂^[β]`, keyed by `(α, β)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiDiffOperator {
    terms: BTreeMap<(Exponents, Exponents), CommPoly>,
}

impl BiDiffOperator {
    pub fn identity(d: usize) -> Self {
        let z: Exponents = std::iter::repeat(0).take(d).collect();
        let mut op = BiDiffOperator::default();
        op.terms.insert((z.clone(), z), CommPoly::one(d));
        op
    }

    pub fn add(&mut self, alpha: Exponents, beta: Exponents, c: CommPoly) {
        if c.is_zero() {
            return;
        }
        let key = (alpha, beta);
        let sum = match self.terms.remove(&key) {
            Some(prev) => &prev + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn extend(&mut self, other: BiDiffOperator) {
        for ((a, b), c) in other.terms {
            self.add(a, b, c);
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

    pub fn apply(&self, f: &CommPoly, g: &CommPoly, n: Option<u32>) -> CommPoly {
        let mut out = CommPoly::zero(f.dim());
        for ((a, b), c) in &self.terms {
            let fa = f.divided_derivative_multi(a);
            if fa.is_zero() {
                continue;
            }
            let gb = g.divided_derivative_multi(b);
            if gb.is_zero() {
                continue;
            }
            out = &out + &(&(c * &fa) * &gb).truncate(n);
        }
        out
    }
}

/// `φ̃(x_j x_i)` as polynomials, keyed by `(j, i)`.
pub fn cochain_polys(sys: &ReductionSystem, phi: &DeformationCochain) -> Result<BTreeMap<(usize, usize), CommPoly>> {
    let mut out = BTreeMap::new();
    for (s, v) in phi.values() {
        let w = s.arrows();
        if w.len() != 2 || w[0] <= w[1] || sys.quiver().num_vertices() != 1 {
            return Err(Error::usage("graph evaluation needs a cochain on a commutator system"));
        }
        out.insert((w[0] as usize, w[1] as usize), CommPoly::from_element(v));
    }
    Ok(out)
}

struct Sim<'a> {
    g: &'a KGraph,
    labels: &'a [[usize; 2]],
}

impl Sim<'_> {
    /// Tokens of node `n`, left to right: `(vertex, leg)`.
    fn tokens(&self, n: usize) -> Vec<(usize, usize)> {
        self.g.incoming[n]
            .iter()
            .map(|&v| {
                let leg = if self.g.targets[v][0].index() == n { 0 } else { 1 };
                (v, leg)
            })
            .collect()
    }

    fn label(&self, t: (usize, usize)) -> usize {
        self.labels[t.0][t.1]
    }

    /// Replays right-most reduction on the consumed letters only; the
    /// labelling is realized iff every vertex fires.
    fn realizable(&self) -> bool {
        let mut unsorted = self.tokens(0);
        let mut sorted = self.tokens(1);
        let mut fired = 0;
        while let Some(c) = unsorted.pop() {
            let partner = (c.0, 1 - c.1);
            let pos = sorted.iter().position(|&t| t == partner);
            match pos {
                Some(p) if self.label(partner) < self.label(c) => {
                    let passed: Vec<_> = sorted.drain(..=p).collect();
                    unsorted.extend_from_slice(&passed[..p]);
                    unsorted.extend(self.tokens(c.0 + 2));
                    fired += 1;
                }
                _ => {
                    let at = sorted.iter().position(|&t| self.label(t) >= self.label(c)).unwrap_or(sorted.len());
                    sorted.insert(at, c);
                }
            }
        }
        fired == self.g.k()
    }
}

/// The operator `C_Π`: sum over labelled versions of `Π` that right-most
/// reduction can produce.
pub fn graph_operator(g: &KGraph, phi: &BTreeMap<(usize, usize), CommPoly>, d: usize, n: Option<u32>) -> BiDiffOperator {
    let k = g.k();
    let pairs: Vec<[usize; 2]> = (0..d).flat_map(|a| (0..d).filter(move |&b| b != a).map(move |b| [a, b])).collect();
    let mut op = BiDiffOperator::default();
    let mut choice = vec![0usize; k];
    if pairs.is_empty() {
        return op;
    }
    loop {
        let labels: Vec<[usize; 2]> = choice.iter().map(|&c| pairs[c]).collect();
        if let Some((alpha, beta, c)) = evaluate_labelling(g, &labels, phi, d, n) {
            op.add(alpha, beta, c);
        }
        let mut i = 0;
        loop {
            if i == k {
                return op;
            }
            choice[i] += 1;
            if choice[i] < pairs.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn evaluate_labelling(
    g: &KGraph,
    labels: &[[usize; 2]],
    phi: &BTreeMap<(usize, usize), CommPoly>,
    d: usize,
    n: Option<u32>,
) -> Option<(Exponents, Exponents, CommPoly)> {
    let sim = Sim { g, labels };
    let k = g.k();
    let mut consumed: Vec<Exponents> = vec![std::iter::repeat(0).take(d).collect(); k + 2];
    for node in 0..k + 2 {
        let toks = sim.tokens(node);
        if toks.windows(2).any(|w| sim.label(w[0]) > sim.label(w[1])) {
            return None;
        }
        for t in toks {
            consumed[node][sim.label(t)] += 1;
        }
    }
    if !sim.realizable() {
        return None;
    }
    let mut coeff = CommPoly::one(d);
    for v in 0..k {
        let [a, b] = labels[v];
        let p = phi.get(&(a.max(b), a.min(b)))?;
        let dp = p.divided_derivative_multi(&consumed[v + 2]);
        if dp.is_zero() {
            return None;
        }
        coeff = (&coeff * &dp).truncate(n);
        if coeff.is_zero() {
            return None;
        }
    }
    Some((consumed[0].clone(), consumed[1].clone(), coeff))
}

/// `C_Π(f, g)`.
pub fn eval_graph(
    g: &KGraph,
    phi: &BTreeMap<(usize, usize), CommPoly>,
    f: &CommPoly,
    h: &CommPoly,
    n: Option<u32>,
) -> CommPoly {
    graph_operator(g, phi, f.dim(), n).apply(f, h, n)
}

/// `Σ_{k ≤ N} Σ_Π C_Π` as one operator.
pub fn graphical_operator(phi: &BTreeMap<(usize, usize), CommPoly>, d: usize, n: u32, cap: usize) -> Result<BiDiffOperator> {
    let mut op = BiDiffOperator::identity(d);
    for k in 1..=n as usize {
        let graphs = enumerate_graphs(k, cap)?;
        let parts: Vec<BiDiffOperator> = graphs.par_iter().map(|g| graph_operator(g, phi, d, Some(n))).collect();
        for p in parts {
            op.extend(p);
        }
    }
    Ok(op)
}

/// The graphical expansion of `f ⋆ g` up to `ħ^n`.
pub fn graphical_star(
    f: &CommPoly,
    g: &CommPoly,
    phi: &BTreeMap<(usize, usize), CommPoly>,
    n: u32,
    cap: usize,
) -> Result<CommPoly> {
    Ok(graphical_operator(phi, f.dim(), n, cap)?.apply(f, g, Some(n)))
}
