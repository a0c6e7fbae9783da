mod common;

use pathdef::examples::{brauer_tree, brauer_values, four_dim, two_cycle, Fixture};
use pathdef::star::{gauge_check, mc_check, star_k};
use pathdef::*;
use rand::Rng;

use common::*;

fn paths_up_to(f: &Fixture, n: usize) -> Vec<Element> {
    f.system.irreducible_paths(Some(n)).unwrap().into_iter().map(|p| Element::path(f.quiver(), p)).collect()
}

#[test]
fn first_level_of_the_two_cycle() {
    let f = two_cycle();
    let phi = f.cochain(&[("x*y", "λ*e1"), ("y*x", "μ*e2")], None).unwrap();
    let (x, y) = (f.element("x").unwrap(), f.element("y").unwrap());
    assert_eq!(star_k(&x, &y, &f.system, &phi, 1, DEFAULT_BUDGET).unwrap(), f.element("λ*e1").unwrap());
    assert!(star_k(&x, &y, &f.system, &phi, 0, DEFAULT_BUDGET).unwrap().is_zero());
    let engine = StarProduct::new(&f.system, &phi, DEFAULT_BUDGET);
    let yx = engine.star(&y, &x).unwrap();
    assert_eq!(engine.star(&x, &yx).unwrap(), f.element("μ*x").unwrap());
    let xy = engine.star(&x, &y).unwrap();
    assert_eq!(engine.star(&xy, &x).unwrap(), f.element("λ*x").unwrap());
}

#[test]
fn levels_sum_to_the_product() {
    let f = four_dim();
    let phi = f.cochain(&[("y*x", "t*x*y"), ("x*x", "2*t*x")], Some(3)).unwrap();
    let engine = StarProduct::new(&f.system, &phi, DEFAULT_BUDGET);
    let ps = paths_up_to(&f, 2);
    for a in &ps {
        for b in &ps {
            let levels = engine.star_levels(a, b).unwrap();
            let sum = levels.iter().fold(Element::zero(f.quiver()), |acc, l| &acc + l);
            assert_eq!(sum, engine.star(a, b).unwrap());
        }
    }
}

#[test]
fn vertex_idempotents_are_units() {
    let f = brauer_tree(5).unwrap();
    let v = brauer_values(5);
    let refs: Vec<(&str, &str)> = v.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let phi = f.cochain(&refs, None).unwrap();
    let engine = StarProduct::new(&f.system, &phi, DEFAULT_BUDGET);
    let q = f.quiver();
    let unit = Element::unit(q);
    for p in f.system.irreducible_paths(None).unwrap() {
        let a = Element::path(q, p.clone());
        assert_eq!(engine.star(&unit, &a).unwrap(), a);
        assert_eq!(engine.star(&a, &unit).unwrap(), a);
        let src = Element::path(q, Path::Trivial(q.source(&p)));
        assert_eq!(engine.star(&src, &a).unwrap(), a);
    }
}

/// On a terminating example the product of irreducible paths is the normal
/// form of their concatenation for the rules `s ↦ φ_s + φ̃_s`.
#[test]
fn product_is_the_deformed_normal_form() {
    let f = two_cycle();
    let vals = [("x*y", "t*e1 + 2*t*t*e1"), ("y*x", "t*e2 + 2*t*t*e2")];
    let phi = f.cochain(&vals, None).unwrap();
    let engine = StarProduct::new(&f.system, &phi, DEFAULT_BUDGET);
    let deformed = f.deformed_system(&vals).unwrap();
    let ps = paths_up_to(&f, 4);
    for a in &ps {
        for b in &ps {
            let direct = deformed.reduce_full(&(a * b), DEFAULT_BUDGET).unwrap();
            assert_eq!(engine.star(a, b).unwrap(), direct, "{a} ⋆ {b}");
        }
    }
}

#[test]
fn associativity_follows_the_overlap_test() {
    let f = four_dim();
    let mut r = rng(17);
    let ps = paths_up_to(&f, 4);
    let mut passing = 0;
    let mut samples = vec![vec![1, 0, 0, 0, 0, 0], vec![0, 1, 2, 0, 1, 1], vec![1, 2, -1, 0, 0, 0]];
    for _ in 0..12 {
        samples.push((0..6).map(|_| r.gen_range(-2..=2)).collect());
    }
    for c in samples {
        let vals = [
            ("y*x", format!("({})*t*x*y + ({})*t*t*x*y", c[0], c[3])),
            ("x*x", format!("({})*t*x + ({})*t*t*x", c[1], c[4])),
            ("y*y", format!("({})*t*y + ({})*t*t*y", c[2], c[5])),
        ];
        let refs: Vec<(&str, &str)> = vals.iter().map(|(a, b)| (*a, b.as_str())).collect();
        let phi = f.cochain(&refs, Some(3)).unwrap();
        let report = mc_check(&f.system, &phi, DEFAULT_BUDGET);
        let engine = StarProduct::new(&f.system, &phi, DEFAULT_BUDGET);
        let mut associative = true;
        for a in &ps {
            for b in &ps {
                for d in &ps {
                    let l = engine.star(&engine.star(a, b).unwrap(), d).unwrap();
                    let rr = engine.star(a, &engine.star(b, d).unwrap()).unwrap();
                    associative &= l == rr;
                }
            }
        }
        assert_eq!(report.verdict == Verdict::Pass, associative, "{c:?}");
        passing += associative as usize;
    }
    assert!(passing >= 2);
}

#[test]
fn brauer_parametrized_point_is_maurer_cartan() {
    let f = brauer_tree(6).unwrap();
    let good = [
        ("x1*y1*x1", "3*x1"),
        ("y1*x1*y1", "3*y1"),
        ("x2*y2", "-6*e2 + y1*x1"),
        ("x3*y3", "12*e3 + y2*x2"),
        ("x4*y4", "12*e4 - 2*y3*x3"),
    ];
    let phi = f.cochain(&good, None).unwrap();
    assert_eq!(mc_check(&f.system, &phi, DEFAULT_BUDGET).verdict, Verdict::Pass);
    let mut bad = good;
    bad[3] = ("x3*y3", "11*e3 + y2*x2");
    let phi = f.cochain(&bad, None).unwrap();
    let report = mc_check(&f.system, &phi, DEFAULT_BUDGET);
    assert_eq!(report.verdict, Verdict::Fail);
    assert!(report.entries.iter().any(|e| e.defect().is_some_and(|d| !d.is_zero())));
}

#[test]
fn first_order_gauge_shift() {
    let f = four_dim();
    let x = f.quiver().arrow("x").unwrap() as u32;
    let psi = GaugeOnArrows::new(&f.system, vec![(x, f.element("3*t*e1").unwrap())]).unwrap();
    let zero = f.cochain(&[], Some(1)).unwrap();
    let shifted = f.cochain(&[("y*x", "-3*t*y"), ("x*x", "-6*t*x")], Some(1)).unwrap();
    assert_eq!(gauge_check(&psi, &f.system, &shifted, &zero, DEFAULT_BUDGET).verdict, Verdict::Pass);
    let wrong = f.cochain(&[("y*x", "-3*t*y"), ("x*x", "-3*t*x")], Some(1)).unwrap();
    assert_eq!(gauge_check(&psi, &f.system, &wrong, &zero, DEFAULT_BUDGET).verdict, Verdict::Fail);
}

/// Solves for `T(x₂) = c(t)·x₂` order by order so that `T` carries the
/// cochain with `μ₂ = 0, μ₃ = t` to the one with `μ₂ = t, μ₃ = 0`, and
/// compares with `c = 1/(1 + t)`.
#[test]
fn brauer_gauge_removes_mu2() {
    let n_trunc = 4;
    let mut f = brauer_tree(5).unwrap();
    let cvar = f.symbols.declare("c", Role::Unknown).unwrap();
    let phi = f
        .cochain(
            &[
                ("x1*y1*x1", "2*t*x1"),
                ("y1*x1*y1", "2*t*y1"),
                ("x2*y2", "(-2*t - 2*t^2)*e2 + t*y1*x1"),
                ("x3*y3", "(2*t + 2*t^2)*e3"),
            ],
            Some(n_trunc),
        )
        .unwrap();
    let phi_prime = f
        .cochain(
            &[
                ("x1*y1*x1", "2*t*x1"),
                ("y1*x1*y1", "2*t*y1"),
                ("x2*y2", "-2*t*e2"),
                ("x3*y3", "(2*t + 2*t^2)*e3 + t*y2*x2"),
            ],
            Some(n_trunc),
        )
        .unwrap();
    assert_eq!(mc_check(&f.system, &phi, DEFAULT_BUDGET).verdict, Verdict::Pass);
    assert_eq!(mc_check(&f.system, &phi_prime, DEFAULT_BUDGET).verdict, Verdict::Pass);

    let t = f.var("t");
    let x2 = f.quiver().arrow("x2").unwrap() as u32;
    let x2_el = f.element("x2").unwrap();
    let mut series: Vec<Rational> = Vec::new();
    let psi_with = |coeffs: &[Rational], last: Option<&Var>| -> GaugeOnArrows {
        let mut s = PolyScalar::zero();
        for (k, c) in coeffs.iter().enumerate() {
            s = &s + &PolyScalar::var(t.clone()).pow(k as u32 + 1).scale(c);
        }
        if let Some(v) = last {
            s = &s + &(&PolyScalar::var(v.clone()) * &PolyScalar::var(t.clone()).pow(coeffs.len() as u32 + 1));
        }
        GaugeOnArrows::new(&f.system, vec![(x2, x2_el.scale(&s))]).unwrap()
    };
    for k in 1..=n_trunc {
        let report = gauge_check(&psi_with(&series, Some(&cvar)), &f.system, &phi, &phi_prime, DEFAULT_BUDGET);
        let mut solution: Option<Rational> = None;
        for entry in &report.entries {
            let (l, r) = entry.outcome.as_ref().unwrap();
            for (_, coeff) in (l - r).terms() {
                let at_k = coeff.coeff_of_power(&t, k);
                let a = at_k.coeff_of_power(&cvar, 1).as_constant().unwrap();
                let b = at_k.coeff_of_power(&cvar, 0).as_constant().unwrap();
                if a == Rational::from_integer(0.into()) {
                    assert_eq!(b, Rational::from_integer(0.into()), "order {k} is not solvable");
                    continue;
                }
                let s = -b / a;
                assert!(solution.as_ref().is_none_or(|x| *x == s), "inconsistent order {k}");
                solution = Some(s);
            }
        }
        series.push(solution.expect("coefficient determined"));
    }
    let expected: Vec<Rational> = (1..=n_trunc as i64).map(|k| Rational::from_integer((if k % 2 == 1 { -1 } else { 1 }).into())).collect();
    assert_eq!(series, expected);
    assert_eq!(gauge_check(&psi_with(&series, None), &f.system, &phi, &phi_prime, DEFAULT_BUDGET).verdict, Verdict::Pass);
}
