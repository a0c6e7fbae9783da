//! Ready-made reduction systems used by the tests, the benchmarks and the
//! command line.

use std::sync::Arc;

use crate::element::Element;
use crate::error::Result;
use crate::quantization::{commutator_system, CommPoly, PoissonBivector};
use crate::quiver::{AdmissibleOrder, Path, Quiver};
use crate::reduction::ReductionSystem;
use crate::scalar::{int, Monomial, PolyScalar, Role, Var};
use crate::star::DeformationCochain;
use crate::text::{parse_element, Symbols};

/// A reduction system with its arrow order and declared symbols.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub system: ReductionSystem,
    pub order: AdmissibleOrder,
    pub symbols: Symbols,
}

impl Fixture {
    fn build(
        vertices: &[String],
        arrows: &[(String, String, String)],
        order: Option<&[String]>,
        rules: &[(String, String)],
        symbols: &[(&str, Role)],
    ) -> Result<Self> {
        let arrow_refs: Vec<(&str, &str, &str)> =
            arrows.iter().map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str())).collect();
        let q = Arc::new(Quiver::new(vertices, &arrow_refs)?);
        let mut syms = Symbols::new();
        for (name, role) in symbols {
            syms.declare(name, *role)?;
        }
        let pairs = rules
            .iter()
            .map(|(l, r)| Ok((q.parse_path(l)?, parse_element(&q, r, &syms)?)))
            .collect::<Result<Vec<_>>>()?;
        let system = ReductionSystem::from_pairs(&q, pairs)?;
        let order = match order {
            Some(names) => {
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                AdmissibleOrder::from_names(&q, &refs)?
            }
            None => AdmissibleOrder::declaration(&q),
        };
        Ok(Fixture { system, order, symbols: syms })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        self.system.quiver()
    }

    pub fn path(&self, src: &str) -> Result<Path> {
        self.quiver().parse_path(src)
    }

    pub fn element(&self, src: &str) -> Result<Element> {
        parse_element(self.quiver(), src, &self.symbols)
    }

    pub fn var(&self, name: &str) -> Var {
        self.symbols.get(name).cloned().unwrap_or_else(|| panic!("fixture has no symbol `{name}`"))
    }

    /// `s ↦ value` pairs in the text syntax.
    pub fn cochain(&self, values: &[(&str, &str)], trunc: Option<u32>) -> Result<DeformationCochain> {
        let values = values
            .iter()
            .map(|(s, v)| Ok((self.path(s)?, self.element(v)?)))
            .collect::<Result<Vec<_>>>()?;
        DeformationCochain::new(&self.system, values, trunc)
    }

    /// The same rules with `rhs + value` for each given pair.
    pub fn deformed_system(&self, values: &[(&str, &str)]) -> Result<ReductionSystem> {
        let q = self.quiver();
        let mut pairs = Vec::new();
        for r in self.system.rules() {
            let mut rhs = r.rhs.clone();
            for (s, v) in values {
                if self.path(s)? == r.lhs {
                    rhs = &rhs + &self.element(v)?;
                }
            }
            pairs.push((r.lhs.clone(), rhs));
        }
        ReductionSystem::from_pairs(q, pairs)
    }
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn arrows(xs: &[(&str, &str, &str)]) -> Vec<(String, String, String)> {
    xs.iter().map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string())).collect()
}

fn rules(xs: &[(&str, &str)]) -> Vec<(String, String)> {
    xs.iter().map(|(l, r)| (l.to_string(), r.to_string())).collect()
}

/// `x: 1 → 2`, `y: 2 → 1` with `S = {xy, yx}`.
pub fn two_cycle() -> Fixture {
    Fixture::build(
        &strings(&["1", "2"]),
        &arrows(&[("x", "1", "2"), ("y", "2", "1")]),
        None,
        &rules(&[("x*y", "0"), ("y*x", "0")]),
        &[("t", Role::Param), ("λ", Role::Unknown), ("μ", Role::Unknown)],
    )
    .expect("fixture")
}

/// One vertex, loops `x < y`, `S = {yx, x², y²}`; a 4-dimensional algebra.
pub fn four_dim() -> Fixture {
    Fixture::build(
        &strings(&["1"]),
        &arrows(&[("x", "1", "1"), ("y", "1", "1")]),
        Some(&strings(&["x", "y"])),
        &rules(&[("y*x", "0"), ("x*x", "0"), ("y*y", "0")]),
        &[("t", Role::Param), ("λ", Role::Unknown), ("μ", Role::Unknown), ("ν", Role::Unknown)],
    )
    .expect("fixture")
}

/// The subspace `yx ↦ λxy`, `x² ↦ μx`, `y² ↦ νy`.
pub const FOUR_DIM_FAMILY: [(&str, &str); 3] = [("y*x", "λ*x*y"), ("x*x", "μ*x"), ("y*y", "ν*y")];

/// `x: 1→2`, `y₁, y₂: 2→3`, `z: 3→4`, `w: 2→4`, monomial `S = {xy₁, y₂z}`.
pub fn nf_monomial() -> Fixture {
    Fixture::build(
        &strings(&["1", "2", "3", "4"]),
        &arrows(&[("x", "1", "2"), ("y1", "2", "3"), ("y2", "2", "3"), ("z", "3", "4"), ("w", "2", "4")]),
        None,
        &rules(&[("x*y1", "0"), ("y2*z", "0")]),
        &[("t", Role::Param), ("λ", Role::Unknown), ("μ", Role::Unknown), ("ν", Role::Unknown)],
    )
    .expect("fixture")
}

/// `xy₁ ↦ λxy₂`, `y₂z ↦ μy₁z + νw`.
pub const NF_DEFORMATION: [(&str, &str); 2] = [("x*y1", "λ*x*y2"), ("y2*z", "μ*y1*z + ν*w")];

/// Arrow names `x1..x_{n-2}`, `y1..y_{n-2}` of the Brauer tree quiver.
fn brauer_arrows(n: usize) -> Vec<(String, String, String)> {
    let mut out = Vec::new();
    for i in 1..=n - 2 {
        out.push((format!("x{i}"), i.to_string(), (i + 1).to_string()));
    }
    for i in 1..=n - 2 {
        out.push((format!("y{i}"), (i + 1).to_string(), i.to_string()));
    }
    out
}

/// The Brauer tree algebra on `n - 1` vertices, `n ≥ 4`, with the order
/// `y₁ < ⋯ < y_{n−2} < x_{n−2} < ⋯ < x₁`. Unknowns `λ1.., μ1..`.
pub fn brauer_tree(n: usize) -> Result<Fixture> {
    if n < 4 {
        return Err(crate::Error::usage("the Brauer tree fixture needs n ≥ 4"));
    }
    let vertices: Vec<String> = (1..n).map(|v| v.to_string()).collect();
    let mut order: Vec<String> = (1..=n - 2).map(|i| format!("y{i}")).collect();
    order.extend((1..=n - 2).rev().map(|i| format!("x{i}")));
    let mut rs = vec![("x1*y1*x1".to_string(), "0".to_string()), ("y1*x1*y1".to_string(), "0".to_string())];
    for i in 1..=n - 3 {
        let j = i + 1;
        rs.push((format!("x{i}*x{j}"), "0".into()));
        rs.push((format!("y{j}*y{i}"), "0".into()));
        rs.push((format!("x{j}*y{j}"), format!("y{i}*x{i}")));
    }
    let names: Vec<String> =
        (1..=n - 2).flat_map(|i| [format!("λ{i}"), format!("μ{i}")]).collect();
    let mut symbols: Vec<(&str, Role)> = vec![("t", Role::Param)];
    symbols.extend(names.iter().map(|s| (s.as_str(), Role::Unknown)));
    Fixture::build(&vertices, &brauer_arrows(n), Some(&order), &rs, &symbols)
}

/// The general cochain `x₁y₁x₁ ↦ λ1 x₁`, `y₁x₁y₁ ↦ μ1 y₁`,
/// `x_{i+1}y_{i+1} ↦ λ_{i+1} e_{i+1} + μ_{i+1} y_i x_i`.
pub fn brauer_values(n: usize) -> Vec<(String, String)> {
    let mut out = vec![("x1*y1*x1".to_string(), "λ1*x1".to_string()), ("y1*x1*y1".to_string(), "μ1*y1".to_string())];
    for i in 1..=n - 3 {
        let j = i + 1;
        out.push((format!("x{j}*y{j}"), format!("λ{j}*e{j} + μ{j}*y{i}*x{i}")));
    }
    out
}

/// `η = −(x² + λyz) ∂_z∧∂_y` on three variables; `λ` is an unknown.
pub fn quadratic_poisson(lambda: &Var) -> PoissonBivector {
    let x = CommPoly::var(3, 0);
    let y = CommPoly::var(3, 1);
    let z = CommPoly::var(3, 2);
    let l = CommPoly::constant(3, PolyScalar::var(lambda.clone()));
    let e = &(&x * &x) + &(&l * &(&y * &z));
    PoissonBivector::new(3, vec![((2, 1), e.scale(&PolyScalar::from_int(-1)))]).expect("bivector")
}

/// `yx ↦ xy·a(ħ)`, `zx ↦ xz·b(ħ)`, `zy ↦ (yz + x^k)ħ` on the commutator
/// system in `x, y, z`, with `a`, `b` given by coefficient lists from `ħ¹`.
pub fn exact_poisson_cochain(
    sys: &ReductionSystem,
    k: u32,
    hbar: &Var,
    a: &[i64],
    b: &[i64],
    trunc: Option<u32>,
) -> Result<DeformationCochain> {
    let series = |cs: &[i64]| -> PolyScalar {
        PolyScalar::from_terms(
            cs.iter().enumerate().map(|(i, &c)| (Monomial::var(hbar.clone(), i as u32 + 1), int(c))),
        )
    };
    let h = PolyScalar::var(hbar.clone());
    let (x, y, z) = (CommPoly::var(3, 0), CommPoly::var(3, 1), CommPoly::var(3, 2));
    let mut xk = CommPoly::one(3);
    for _ in 0..k {
        xk = &xk * &x;
    }
    let q = sys.quiver();
    let values = vec![
        (Path::from_arrows(&[1, 0]), (&x * &y).scale(&series(a)).to_element(q)?),
        (Path::from_arrows(&[2, 0]), (&x * &z).scale(&series(b)).to_element(q)?),
        (Path::from_arrows(&[2, 1]), (&(&y * &z) + &xk).scale(&h).to_element(q)?),
    ];
    DeformationCochain::new(sys, values, trunc)
}

/// Coefficients of the corrected series to `ħ⁵`: `a = ħ/(1 + ħ)`,
/// `b = −ħ/(1 + 2ħ)`.
pub const CORRECTION_YX: [i64; 5] = [1, -1, 1, -1, 1];
pub const CORRECTION_ZX: [i64; 5] = [-1, 2, -4, 8, -16];

/// The commutator system in `x, y, z`.
pub fn polynomial3() -> ReductionSystem {
    commutator_system(&["x", "y", "z"]).expect("fixture")
}
