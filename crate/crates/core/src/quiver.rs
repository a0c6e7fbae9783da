//! Quivers, paths and degree-lexicographic orders.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Word = SmallVec<[u32; 8]>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl Quiver {
    /// Builds a quiver from vertex ids and `(name, source, target)` triples.
    pub fn new<V: AsRef<str>>(vertices: &[V], arrows: &[(&str, &str, &str)]) -> Result<Self> {
        let mut q = Quiver {
            vertices: Vec::new(),
            arrows: Vec::new(),
            vertex_index: HashMap::new(),
            arrow_index: HashMap::new(),
        };
        for v in vertices {
            q.add_vertex(v.as_ref())?;
        }
        for (name, s, t) in arrows {
            q.add_arrow(name, s, t)?;
        }
        Ok(q)
    }

    pub fn add_vertex(&mut self, id: &str) -> Result<usize> {
        if self.vertex_index.contains_key(id) {
            return Err(Error::usage(format!("duplicate vertex `{id}`")));
        }
        self.vertices.push(id.to_string());
        self.vertex_index.insert(id.to_string(), self.vertices.len() - 1);
        Ok(self.vertices.len() - 1)
    }

    pub fn add_arrow(&mut self, name: &str, source: &str, target: &str) -> Result<usize> {
        if self.arrow_index.contains_key(name) {
            return Err(Error::usage(format!("duplicate arrow `{name}`")));
        }
        let s = self.vertex(source)?;
        let t = self.vertex(target)?;
        self.arrows.push(Arrow { name: name.to_string(), source: s, target: t });
        self.arrow_index.insert(name.to_string(), self.arrows.len() - 1);
        Ok(self.arrows.len() - 1)
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::usage(format!("unknown vertex `{id}`")))
    }

    pub fn arrow(&self, name: &str) -> Result<usize> {
        self.arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::usage(format!("unknown arrow `{name}`")))
    }

    pub fn has_arrow(&self, name: &str) -> bool {
        self.arrow_index.contains_key(name)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn source(&self, p: &Path) -> usize {
        match p {
            Path::Trivial(v) => *v,
            Path::Word(w) => self.arrows[w[0] as usize].source,
        }
    }

    pub fn target(&self, p: &Path) -> usize {
        match p {
            Path::Trivial(v) => *v,
            Path::Word(w) => self.arrows[*w.last().unwrap() as usize].target,
        }
    }

    pub fn parallel(&self, p: &Path, q: &Path) -> bool {
        self.source(p) == self.source(q) && self.target(p) == self.target(q)
    }

    /// Checks composability and index ranges.
    pub fn validate(&self, p: &Path) -> Result<()> {
        match p {
            Path::Trivial(v) if *v < self.vertices.len() => Ok(()),
            Path::Trivial(v) => Err(Error::usage(format!("vertex index {v} out of range"))),
            Path::Word(w) => {
                if w.is_empty() {
                    return Err(Error::usage("empty arrow word"));
                }
                if w.iter().any(|&a| a as usize >= self.arrows.len()) {
                    return Err(Error::usage("arrow index out of range"));
                }
                for pair in w.windows(2) {
                    if self.arrows[pair[0] as usize].target != self.arrows[pair[1] as usize].source {
                        return Err(Error::usage(format!(
                            "arrows `{}` and `{}` are not composable",
                            self.arrows[pair[0] as usize].name,
                            self.arrows[pair[1] as usize].name
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Path from arrow names; an empty list is rejected.
    pub fn path(&self, names: &[&str]) -> Result<Path> {
        let w: Word = names.iter().map(|n| self.arrow(n).map(|a| a as u32)).collect::<Result<_>>()?;
        let p = Path::Word(w);
        self.validate(&p)?;
        Ok(p)
    }

    /// Parses `x*y*z` or `e<id>`.
    pub fn parse_path(&self, text: &str) -> Result<Path> {
        let text = text.trim();
        let names: Vec<&str> = text.split('*').map(str::trim).collect();
        if names.len() == 1 && !self.has_arrow(names[0]) {
            if let Some(id) = names[0].strip_prefix('e') {
                if let Ok(v) = self.vertex(id) {
                    return Ok(Path::Trivial(v));
                }
            }
        }
        self.path(&names)
    }

    pub fn idempotent(&self, id: &str) -> Result<Path> {
        Ok(Path::Trivial(self.vertex(id)?))
    }

    /// Concatenation, or `None` for the zero of the path algebra.
    pub fn compose(&self, p: &Path, q: &Path) -> Option<Path> {
        if self.target(p) != self.source(q) {
            return None;
        }
        Some(match (p, q) {
            (Path::Trivial(_), _) => q.clone(),
            (_, Path::Trivial(_)) => p.clone(),
            (Path::Word(a), Path::Word(b)) => {
                let mut w = a.clone();
                w.extend_from_slice(b);
                Path::Word(w)
            }
        })
    }

    /// Concatenation of raw words; the caller guarantees composability.
    pub(crate) fn join(&self, parts: &[&[u32]], src: usize) -> Path {
        let mut w = Word::new();
        for p in parts {
            w.extend_from_slice(p);
        }
        if w.is_empty() {
            Path::Trivial(src)
        } else {
            Path::Word(w)
        }
    }

    pub fn display_path(&self, p: &Path) -> String {
        PathDisplay(self, p).to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Path {
    Trivial(usize),
    Word(Word),
}

impl Path {
    pub fn len(&self) -> usize {
        match self {
            Path::Trivial(_) => 0,
            Path::Word(w) => w.len(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Path::Trivial(_))
    }

    pub fn is_empty(&self) -> bool {
        self.is_trivial()
    }

    pub fn arrows(&self) -> &[u32] {
        match self {
            Path::Trivial(_) => &[],
            Path::Word(w) => w,
        }
    }

    pub fn from_arrows(arrows: &[u32]) -> Path {
        assert!(!arrows.is_empty(), "use Path::Trivial for length 0");
        Path::Word(Word::from_slice(arrows))
    }

    pub fn contains_subword(&self, s: &[u32]) -> bool {
        let w = self.arrows();
        !s.is_empty() && w.len() >= s.len() && w.windows(s.len()).any(|x| x == s)
    }
}

/// Canonical order: length, then arrow indices lexicographically; trivial
/// paths by vertex.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Path::Trivial(a), Path::Trivial(b)) => a.cmp(b),
            (Path::Trivial(_), Path::Word(_)) => Ordering::Less,
            (Path::Word(_), Path::Trivial(_)) => Ordering::Greater,
            (Path::Word(a), Path::Word(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
        }
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct PathDisplay<'a>(pub &'a Quiver, pub &'a Path);

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.1 {
            Path::Trivial(v) => write!(f, "e{}", self.0.vertices[*v]),
            Path::Word(w) => {
                for (k, a) in w.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    f.write_str(&self.0.arrows[*a as usize].name)?;
                }
                Ok(())
            }
        }
    }
}

/// Total order on arrows and the induced degree-lexicographic path order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleOrder {
    rank: Vec<u32>,
}

impl AdmissibleOrder {
    /// Arrows ranked in declaration order.
    pub fn declaration(q: &Quiver) -> Self {
        AdmissibleOrder { rank: (0..q.num_arrows() as u32).collect() }
    }

    /// Arrows ranked by the given names, smallest first.
    pub fn from_names(q: &Quiver, names: &[&str]) -> Result<Self> {
        if names.len() != q.num_arrows() {
            return Err(Error::usage(format!(
                "order lists {} arrows but the quiver has {}",
                names.len(),
                q.num_arrows()
            )));
        }
        let mut rank = vec![u32::MAX; q.num_arrows()];
        for (r, n) in names.iter().enumerate() {
            let a = q.arrow(n)?;
            if rank[a] != u32::MAX {
                return Err(Error::usage(format!("arrow `{n}` listed twice in order")));
            }
            rank[a] = r as u32;
        }
        Ok(AdmissibleOrder { rank })
    }

    pub fn rank(&self, arrow: u32) -> u32 {
        self.rank[arrow as usize]
    }

    pub fn cmp(&self, p: &Path, q: &Path) -> Ordering {
        match (p, q) {
            (Path::Trivial(a), Path::Trivial(b)) => a.cmp(b),
            _ => p.len().cmp(&q.len()).then_with(|| {
                p.arrows()
                    .iter()
                    .map(|&a| self.rank(a))
                    .cmp(q.arrows().iter().map(|&a| self.rank(a)))
            }),
        }
    }

    pub fn less(&self, p: &Path, q: &Path) -> bool {
        self.cmp(p, q) == Ordering::Less
    }
}

pub fn deglex_less(p: &Path, q: &Path, ord: &AdmissibleOrder) -> bool {
    ord.less(p, q)
}
