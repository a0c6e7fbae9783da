//! End-to-end acceptance suite: one line per criterion, nonzero exit on any
//! failure.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use pathdef::cohomology::{hh2, TwoCochainBasis};
use pathdef::examples::*;
use pathdef::quantization::*;
use pathdef::star::{mc_check, StarProduct};
use pathdef::variety::{cochain_basis, mc_equations_for, pbw_check, DegreeCondition, EquationSet};
use pathdef::*;
use rand::Rng;

use common::*;

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn values(f: &Fixture, pairs: &[(&str, &str)]) -> std::result::Result<Vec<(Path, Element)>, String> {
    pairs.iter().map(|(s, v)| Ok((f.path(s).map_err(e)?, f.element(v).map_err(e)?))).collect()
}

fn eqs(f: &Fixture, src: &[&str]) -> EquationSet {
    EquationSet::canonical(src.iter().map(|s| pathdef::text::parse_scalar(s, &f.symbols).unwrap()))
}

fn c1_fig2() -> Outcome {
    let sys = polynomial_system(3).map_err(e)?;
    let q = sys.quiver();
    let start = Element::path(q, q.parse_path("z*y*y*x").map_err(e)?);
    let nf = sys.reduce_full(&start, DEFAULT_BUDGET).map_err(e)?;
    ensure!(nf.to_string() == "x*y*y*z", "normal form {nf}");
    let ex = exhaustive_reductions(&sys, &start, 10_000).ok_or("state space too large")?;
    let others = ex.reachable.len() - 1;
    ensure!(others == 11, "{others} words reachable besides the start");
    ensure!(ex.terminal.len() == 1 && ex.terminal.contains("x*y*y*z"), "terminal words {:?}", ex.terminal);
    Ok(format!("x3x2x2x1 -> {nf}; 11 intermediate words, one terminal"))
}

fn c2_two_cycle() -> Outcome {
    let f = two_cycle();
    let got = mc_equations_for(&f.system, values(&f, &[("x*y", "λ*e1"), ("y*x", "μ*e2")])?, DEFAULT_BUDGET).map_err(e)?;
    ensure!(got == eqs(&f, &["λ - μ"]), "equations {got}");
    let numeric = |l: &str, m: &str| -> std::result::Result<Verdict, String> {
        let phi = f.cochain(&[("x*y", l), ("y*x", m)], None).map_err(e)?;
        Ok(mc_check(&f.system, &phi, DEFAULT_BUDGET).verdict)
    };
    ensure!(numeric("e1", "e2")? == Verdict::Pass, "mc at λ = μ = 1");
    ensure!(numeric("e1", "0")? == Verdict::Fail, "mc at λ = 1, μ = 0");
    let pbw = pbw_check(&f.system, values(&f, &[("x*y", "e1"), ("y*x", "e2")])?, DEFAULT_BUDGET).map_err(e)?;
    ensure!(pbw.verdict == Verdict::Pass, "pbw at λ = 1");
    Ok(format!("equations {{{}}}", got.to_string().trim()))
}

fn c3_nf() -> Outcome {
    let f = nf_monomial();
    let irr = f.system.irreducible_paths(None).map_err(e)?;
    ensure!(irr.len() == 12, "{} irreducible paths", irr.len());
    let deformed = f.deformed_system(&NF_DEFORMATION).map_err(e)?;
    let xyz = f.element("x*y1*z").map_err(e)?;
    match deformed.reduce_full(&xyz, 10_000) {
        Err(err) if err.is_budget() => {}
        other => return Err(format!("expected the budget signal, got {other:?}")),
    }
    let phi = f.cochain(&[("x*y1", "λ*x*y2"), ("y2*z", "μ*y1*z")], None).map_err(e)?;
    let engine = StarProduct::new(&f.system, &phi, DEFAULT_BUDGET);
    let short: Vec<&Path> = irr.iter().filter(|p| p.len() <= 2).collect();
    let mut pairs = 0;
    for a in &short {
        for b in &short {
            let (ea, eb) = (Element::path(f.quiver(), (*a).clone()), Element::path(f.quiver(), (*b).clone()));
            engine.star(&ea, &eb).map_err(|err| format!("{} ⋆ {}: {err}", ea, eb))?;
            pairs += 1;
        }
    }
    let with_nu = f.cochain(&NF_DEFORMATION, None).map_err(e)?;
    let engine = StarProduct::new(&f.system, &with_nu, DEFAULT_BUDGET);
    let bad = engine.star(&f.element("x").map_err(e)?, &f.element("y1*z").map_err(e)?);
    ensure!(matches!(bad, Err(Error::NotWellDefined(_))), "x ⋆ y1z with ν ≠ 0 gave {bad:?}");
    Ok(format!("12 irreducible paths; budget signal on x*y1*z; {pairs} products with ν = 0 terminate"))
}

fn c4_four_dim() -> Outcome {
    let f = four_dim();
    let h = hh2(&f.system, None, DEFAULT_BUDGET).map_err(e)?;
    ensure!(h.dim == 3, "dim HH² = {}", h.dim);
    let q = f.quiver();
    let mut zeroed = Vec::new();
    for row in &h.cocycles.conditions.rows {
        let nz: Vec<usize> = (0..row.len()).filter(|&i| row[i] != Rational::from_integer(0.into())).collect();
        ensure!(nz.len() == 1, "condition touches {} coordinates", nz.len());
        zeroed.push(h.cocycles.basis.label(q, nz[0]));
    }
    zeroed.sort();
    let want = ["x*x ↦ e1", "x*x ↦ y", "y*x ↦ e1", "y*y ↦ e1", "y*y ↦ x"];
    ensure!(zeroed == want, "cocycle conditions {zeroed:?}");
    let got = mc_equations_for(&f.system, values(&f, &FOUR_DIM_FAMILY)?, DEFAULT_BUDGET).map_err(e)?;
    let expected = eqs(&f, &["λ*(λ - 1)*μ", "λ*(λ - 1)*ν"]);
    ensure!(got == expected, "equations {got}");
    Ok(format!("dim 3; conditions λ_e, μ_e, μ_y, ν_e, ν_x; equations {}", got.to_string().trim().replace('\n', ", ")))
}

/// `λ_i = (−1)^{i+1} μ₁(1+μ₂)⋯(1+μ_i)` as a substitution.
fn brauer_solution(f: &Fixture, n: usize) -> std::collections::BTreeMap<Var, PolyScalar> {
    let mut map = std::collections::BTreeMap::new();
    let mut prod = PolyScalar::var(f.var("μ1"));
    for i in 1..=n - 2 {
        if i > 1 {
            prod = &prod * &(&PolyScalar::one() + &PolyScalar::var(f.var(&format!("μ{i}"))));
        }
        let sign = if i % 2 == 1 { 1 } else { -1 };
        map.insert(f.var(&format!("λ{i}")), prod.scale(&Rational::from_integer(sign.into())));
    }
    map
}

/// The equations cut out the graph of the expected map: each vanishes on
/// it, and for every `i` some equation is linear in `λ_i` with unit
/// coefficient and involves no `λ_j` with `j > i`.
fn brauer_equations_match(f: &Fixture, n: usize, got: &EquationSet) -> std::result::Result<(), String> {
    let sol = brauer_solution(f, n);
    ensure!(got.vanishes_at(&sol), "equations do not vanish on the expected family");
    let lam: Vec<Var> = (1..=n - 2).map(|i| f.var(&format!("λ{i}"))).collect();
    let unit = |c: Rational| c == Rational::from_integer(1.into()) || c == Rational::from_integer((-1).into());
    let mut leaders = BTreeSet::new();
    for eq in &got.equations {
        let Some(top) = lam.iter().rposition(|v| eq.vars().contains(v)) else { continue };
        let lin = eq.coeff_of_power(&lam[top], 1);
        if eq.coeff_of_power(&lam[top], 2).is_zero() && lin.as_constant().is_some_and(unit) {
            leaders.insert(top);
        }
    }
    ensure!(leaders.len() == n - 2, "solved for λ's {leaders:?} only");
    Ok(())
}

fn c5_brauer() -> Outcome {
    for n in 4..=7 {
        let f = brauer_tree(n).map_err(e)?;
        let full = TwoCochainBasis::new(&f.system, None).map_err(e)?;
        ensure!(full.len() == 2 * n - 4, "n={n}: cochain space {}", full.len());
        let ord = cochain_basis(&f.system, DegreeCondition::Order, &f.order).map_err(e)?;
        ensure!(ord.len() == 2 * n - 4, "n={n}: ordered cochain space {}", ord.len());
        let irr = f.system.irreducible_paths(None).map_err(e)?.len();
        ensure!(irr == 4 * n - 6, "n={n}: {irr} irreducible paths");
        let v = brauer_values(n);
        let refs: Vec<(&str, &str)> = v.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let got = mc_equations_for(&f.system, values(&f, &refs)?, DEFAULT_BUDGET).map_err(e)?;
        brauer_equations_match(&f, n, &got).map_err(|m| format!("n={n}: {m}\n{got}"))?;
        let h = hh2(&f.system, None, DEFAULT_BUDGET).map_err(e)?;
        ensure!(h.dim == 1, "n={n}: dim HH² = {}", h.dim);
    }
    Ok("n = 4..7: 2n-4 cochains, 4n-6 paths, MC equations, HH² = 1".into())
}

fn c6_graphs() -> Outcome {
    let c1 = enumerate_graphs(1, DEFAULT_GRAPH_CAP).map_err(e)?.len();
    let c2 = enumerate_graphs(2, DEFAULT_GRAPH_CAP).map_err(e)?.len();
    let c3 = enumerate_graphs(3, DEFAULT_GRAPH_CAP).map_err(e)?.len() as u64;
    let oracle = graph_count_oracle(3);
    ensure!(c1 == 1 && c2 == 6, "counts {c1}, {c2}");
    ensure!(c3 == oracle, "k=3: {c3} graphs, oracle {oracle}");
    Ok(format!("1, 6, {c3} (oracle {oracle})"))
}

fn c7_graphical() -> Outcome {
    let h = Var::param("ħ");
    let mut r = rng(2024);
    let mut pairs = 0;
    for d in [2usize, 3] {
        let sys = polynomial_system(d).map_err(e)?;
        let q = sys.quiver();
        let ms = monomials(d, 3);
        for trial in 0..5 {
            let phi = random_poly_cochain(&sys, d, &h, 3, &mut r);
            let polys = cochain_polys(&sys, &phi).map_err(e)?;
            let op = graphical_operator(&polys, d, 3, DEFAULT_GRAPH_CAP).map_err(e)?;
            let engine = StarProduct::new(&sys, &phi, DEFAULT_BUDGET);
            for a in &ms {
                for b in &ms {
                    let (f, g) = (mono(d, a), mono(d, b));
                    let graph = op.apply(&f, &g, Some(3));
                    let red = comm(&engine.star(&f.to_element(q).map_err(e)?, &g.to_element(q).map_err(e)?).map_err(e)?);
                    ensure!(graph == red, "d={d} trial {trial} {a:?} {b:?}");
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} monomial pairs agree"))
}

fn c8_constant() -> Outcome {
    let h = Var::param("ħ");
    let mut r = rng(7);
    let mut checked = 0;
    for d in [2usize, 3] {
        let sys = polynomial_system(d).map_err(e)?;
        let q = sys.quiver();
        let mut entries = Vec::new();
        for j in 0..d {
            for i in 0..j {
                let c = loop {
                    let c = r.gen_range(-3..=3i64);
                    if c != 0 {
                        break c;
                    }
                };
                entries.push(((j, i), CommPoly::constant(d, PolyScalar::from_int(c))));
            }
        }
        let eta = PoissonBivector::new(d, entries).map_err(e)?;
        let ms = monomials(d, 3);
        for (n, gauge) in [(4u32, false), (3, true)] {
            let phi = poisson_to_cochain(&sys, &eta, &h, Some(n)).map_err(e)?;
            let engine = StarProduct::new(&sys, &phi, DEFAULT_BUDGET);
            for a in &ms {
                for b in &ms {
                    let (f, g) = (mono(d, a), mono(d, b));
                    let star = comm(&engine.star(&f.to_element(q).map_err(e)?, &g.to_element(q).map_err(e)?).map_err(e)?);
                    if gauge {
                        let lhs = moyal(
                            &gauge_phi(&f, &eta, &h, n).map_err(e)?,
                            &gauge_phi(&g, &eta, &h, n).map_err(e)?,
                            &eta,
                            &h,
                            n,
                        )
                        .map_err(e)?;
                        let rhs = gauge_phi(&star, &eta, &h, n).map_err(e)?;
                        ensure!(lhs == rhs, "d={d}: gauge identity fails on {a:?} {b:?}");
                    } else {
                        let closed = exponential_star(&f, &g, &eta, &h, n).map_err(e)?;
                        ensure!(star == closed, "d={d}: exponential formula fails on {a:?} {b:?}");
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} checks against the closed formula and the gauge identity"))
}

fn c9_quadratic() -> Outcome {
    let sys = polynomial3();
    let h = Var::param("ħ");
    let lam = Var::unknown("λ");
    let eta = quadratic_poisson(&lam);
    ensure!(schouten_jacobi_check(&eta).verdict == Verdict::Pass, "Jacobi identity");
    let n = 4;
    let phi = poisson_to_cochain(&sys, &eta, &h, Some(n)).map_err(e)?;
    let report = quantize_check(&sys, &phi, DEFAULT_BUDGET);
    ensure!(report.verdict == Verdict::Pass, "quantize_check {}", report.verdict);
    let q = sys.quiver();
    let engine = StarProduct::new(&sys, &phi, DEFAULT_BUDGET);
    let el = |s: &str| q.parse_path(s).map(|p| Element::path(q, p)).map_err(e);
    let zy_x = engine.star(&engine.star(&el("z")?, &el("y")?).map_err(e)?, &el("x")?).map_err(e)?;
    let mut symbols = Symbols::new();
    symbols.declare("ħ", Role::Param).map_err(e)?;
    symbols.declare("λ", Role::Unknown).map_err(e)?;
    let want = pathdef::text::parse_element(q, "x*y*z - ħ*x*x*x - λ*ħ*x*y*z", &symbols).map_err(e)?;
    ensure!(zy_x == want, "(z⋆y)⋆x = {zy_x}");
    Ok(format!("(z⋆y)⋆x = {zy_x}"))
}

fn c10_corrections() -> Outcome {
    let sys = polynomial3();
    let h = Var::param("ħ");
    let mut as_printed = CORRECTION_ZX;
    as_printed[0] = -as_printed[0];
    for k in [2u32, 3] {
        let first = exact_poisson_cochain(&sys, k, &h, &[1], &[-1], Some(5)).map_err(e)?;
        let v = quantize_check(&sys, &first, DEFAULT_BUDGET).verdict;
        ensure!(v == Verdict::Fail, "k={k}: first-order term alone gave {v}");
        let corrected = exact_poisson_cochain(&sys, k, &h, &CORRECTION_YX, &CORRECTION_ZX, Some(5)).map_err(e)?;
        let v = quantize_check(&sys, &corrected, DEFAULT_BUDGET).verdict;
        ensure!(v == Verdict::Pass, "k={k}: corrected series gave {v}");
        let flipped = exact_poisson_cochain(&sys, k, &h, &CORRECTION_YX, &as_printed, Some(5)).map_err(e)?;
        let v = quantize_check(&sys, &flipped, DEFAULT_BUDGET).verdict;
        ensure!(v == Verdict::Fail, "k={k}: leading zx coefficient +1 gave {v}");
    }
    Ok("k = 2, 3: first order fails; zx series -1, 2, -4, 8, -16 passes to ħ⁵ (leading +1 fails)".into())
}

fn c11_properties() -> Outcome {
    // Confluence against all reduction sequences.
    let systems = random_confluent_systems(50, 11);
    let mut words_checked = 0;
    for (i, sys) in systems.iter().enumerate() {
        ensure!(sys.check_diamond(DEFAULT_BUDGET).verdict == Verdict::Pass, "system {i} not confluent");
        let n = sys.quiver().num_arrows() as u32;
        for w in words(n, 6).iter().step_by(if n == 2 { 1 } else { 7 }) {
            let start = Element::path(sys.quiver(), Path::from_arrows(w));
            let nf = sys.reduce_full(&start, DEFAULT_BUDGET).map_err(e)?;
            let Some(ex) = exhaustive_reductions(sys, &start, 20_000) else { continue };
            ensure!(
                ex.terminal.len() == 1 && ex.terminal.contains(&nf.to_string()),
                "system {i}, word {w:?}: normal forms {:?} vs {nf}",
                ex.terminal
            );
            words_checked += 1;
        }
    }
    // Associativity on all triples of short paths at Maurer–Cartan points.
    let mut triples = 0;
    let two = two_cycle();
    let b5 = brauer_tree(5).map_err(e)?;
    let four = four_dim();
    let cases: Vec<(&Fixture, Vec<(&str, &str)>, Option<u32>)> = vec![
        (&two, vec![("x*y", "t*e1"), ("y*x", "t*e2")], Some(3)),
        (&b5, vec![("x1*y1*x1", "2*x1"), ("y1*x1*y1", "2*y1"), ("x2*y2", "-6*e2 + 2*y1*x1"), ("x3*y3", "18*e3 + 2*y2*x2")], None),
        (&four, vec![("y*x", "x*y"), ("x*x", "3*x"), ("y*y", "-2*y")], None),
    ];
    for (f, vals, trunc) in &cases {
        let phi = f.cochain(vals, *trunc).map_err(e)?;
        ensure!(mc_check(&f.system, &phi, DEFAULT_BUDGET).verdict == Verdict::Pass, "fixture cochain is not MC");
        let engine = StarProduct::new(&f.system, &phi, DEFAULT_BUDGET);
        let paths = f.system.irreducible_paths(Some(4)).map_err(e)?;
        let q = f.quiver();
        for a in &paths {
            for b in &paths {
                for c in &paths {
                    let (a, b, c) = (Element::path(q, a.clone()), Element::path(q, b.clone()), Element::path(q, c.clone()));
                    let l = engine.star(&engine.star(&a, &b).map_err(e)?, &c).map_err(e)?;
                    let r = engine.star(&a, &engine.star(&b, &c).map_err(e)?).map_err(e)?;
                    ensure!(l == r, "({a}⋆{b})⋆{c} = {l} but {a}⋆({b}⋆{c}) = {r}");
                    triples += 1;
                }
            }
        }
    }
    // Coboundaries are cocycles.
    let mut fixtures: Vec<(ReductionSystem, Option<usize>)> =
        vec![(two_cycle().system, None), (four_dim().system, None), (nf_monomial().system, None)];
    for n in 4..=7 {
        fixtures.push((brauer_tree(n).map_err(e)?.system, None));
    }
    fixtures.push((polynomial_system(2).map_err(e)?, Some(3)));
    for (sys, cap) in &fixtures {
        let h = hh2(sys, *cap, DEFAULT_BUDGET).map_err(e)?;
        ensure!(h.image_in_kernel, "coboundary outside the kernel");
    }
    // Admissible order axioms.
    let mut r = rng(5);
    let q = Quiver::new(&["1"], &[("a", "1", "1"), ("b", "1", "1"), ("c", "1", "1")]).map_err(e)?;
    let ord = AdmissibleOrder::from_names(&q, &["b", "c", "a"]).map_err(e)?;
    let ws = words(3, 4);
    for _ in 0..2000 {
        let pick = |r: &mut rand_chacha::ChaCha8Rng| Path::from_arrows(&ws[r.gen_range(0..ws.len())]);
        let (p, s, t) = (pick(&mut r), pick(&mut r), pick(&mut r));
        let cat = |x: &Path, y: &Path| q.compose(x, y).unwrap();
        if deglex_less(&p, &s, &ord) {
            ensure!(deglex_less(&cat(&p, &t), &cat(&s, &t), &ord) && deglex_less(&cat(&t, &p), &cat(&t, &s), &ord), "compatibility");
        }
        ensure!(!deglex_less(&cat(&cat(&p, &s), &t), &s, &ord), "subword bound");
        ensure!(deglex_less(&p, &s, &ord) as u8 + deglex_less(&s, &p, &ord) as u8 + (p == s) as u8 == 1, "trichotomy");
    }
    Ok(format!("{words_checked} words on {} systems, {triples} triples, {} fixtures, 2000 order samples", systems.len(), fixtures.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome, Duration)> = vec![
        ("reduction graph of x3x2x2x1", c1_fig2, Duration::from_secs(1)),
        ("two-cycle deformations", c2_two_cycle, Duration::from_secs(1)),
        ("finiteness conditions", c3_nf, Duration::from_secs(5)),
        ("4-dimensional algebra", c4_four_dim, Duration::from_secs(5)),
        ("Brauer tree algebras", c5_brauer, Duration::from_secs(30)),
        ("graph enumeration", c6_graphs, Duration::from_secs(10)),
        ("graphical expansion", c7_graphical, Duration::from_secs(60)),
        ("constant Poisson", c8_constant, Duration::from_secs(30)),
        ("quadratic Poisson", c9_quadratic, Duration::from_secs(5)),
        ("higher corrections", c10_corrections, Duration::from_secs(10)),
        ("property suites", c11_properties, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed();
        let outcome = match outcome {
            Ok(msg) if dt > limit => Err(format!("{msg}; took {dt:.2?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name} ({dt:.2?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({dt:.2?}): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
