//! Acceptance criteria 1-10. Every criterion prints one
//! `criterion N: pass|fail (...)` line before asserting.

mod common;

use std::time::Instant;

use common::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use wkb_cech::cech::{classical_cech, compare_hyper, h0, h1, DEFAULT_BUDGET};
use wkb_cech::crossed::CrossedModule;
use wkb_cech::descent::{bridge_verify, extract_class, validate_descent, WkbDescentDatum};
use wkb_cech::group::FiniteGroup;
use wkb_cech::nerve::Nerve;
use wkb_cech::rational::{rat, ratio};
use wkb_cech::wkb::WkbError;
use wkb_cech::{CoeffFn, HalfFormOperator, Poly, RatFn, TauSeries, WkbSymbol};

fn verdict(n: u32, what: &str, ok: bool, start: Instant) {
    let status = if ok { "pass" } else { "fail" };
    println!("criterion {n}: {status} ({what}; {:.2}s)", start.elapsed().as_secs_f64());
    assert!(ok, "criterion {n} failed: {what}");
}

fn oracle_symbol(r: &mut ChaCha8Rng, n: usize) -> WkbSymbol {
    let top = r.gen_range(0..=2);
    let s = random_symbol(r, n, top, top, 12, 3, false);
    s.truncate(s.floor())
}

fn oracle_set() -> Vec<WkbSymbol> {
    let mut r = rng(202);
    // nonzero, so that every member has a principal symbol
    (0..100)
        .map(|i| loop {
            let s = oracle_symbol(&mut r, 1 + i % 2);
            if !s.is_zero() {
                break s;
            }
        })
        .collect()
}

#[test]
fn criterion_01_associativity() {
    let start = Instant::now();
    let mut r = rng(101);
    let mut bad = 0;
    for case in 0..200 {
        let n = 1 + case % 2;
        let rational = case % 4 == 0;
        let pick = |r: &mut ChaCha8Rng| {
            let top = r.gen_range(-1..=2);
            random_symbol(r, n, top, 4, 5, 3, rational)
        };
        let (p, q, s) = (pick(&mut r), pick(&mut r), pick(&mut r));
        let left = p.star(&q).unwrap().star(&s).unwrap();
        let right = p.star(&q.star(&s).unwrap()).unwrap();
        if !left.eq_on_window(&right) {
            bad += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(1, &format!("200 triples, {bad} mismatches, {secs:.1}s of 60s"), bad == 0 && secs <= 60.0, start);
}

#[test]
fn criterion_02_operator_oracle() {
    let start = Instant::now();
    let set = oracle_set();
    let mut bad = 0;
    for (i, p) in set.iter().enumerate() {
        // neighbours two apart share the chart dimension
        bad += star_mismatches(p, &set[(i + 2) % set.len()]);
        let (tp, ta) = (oracle_terms(p), oracle_terms(&p.adjoint_flat()));
        for e in basis(p.dim(), 6) {
            let m = monomial(e);
            if apply(&ta, -1, &m) != apply_transpose(&tp, &m) {
                bad += 1;
            }
        }
    }
    verdict(2, &format!("100 symbols, star and adjoint on monomials of degree <= 6, {bad} mismatches"), bad == 0, start);
}

fn star_mismatches(p: &WkbSymbol, q: &WkbSymbol) -> usize {
    let pq = p.star(q).unwrap();
    let (tp, tq, tpq) = (oracle_terms(p), oracle_terms(q), oracle_terms(&pq));
    basis(p.dim(), 6)
        .into_iter()
        .filter(|e| {
            let m = monomial(e.clone());
            apply(&tpq, 1, &m) != apply(&tp, 1, &apply(&tq, 1, &m))
        })
        .count()
}

#[test]
fn criterion_03_graded_homomorphism() {
    let start = Instant::now();
    let set = oracle_set();
    let mut bad = 0;
    for p in &set {
        for q in set.iter().filter(|q| q.dim() == p.dim()).take(3) {
            let (m, sp) = p.principal_symbol().unwrap();
            let (k, sq) = q.principal_symbol().unwrap();
            if p.star(q).unwrap().sigma(m + k).unwrap() != sp.mul(&sq) {
                bad += 1;
            }
        }
    }
    verdict(3, &format!("sigma(PQ) = sigma(P) sigma(Q) on 300 pairs, {bad} mismatches"), bad == 0, start);
}

#[test]
fn criterion_04_invertibility() {
    let start = Instant::now();
    let mut r = rng(404);
    let mut bad = 0;
    for case in 0..50 {
        let top = r.gen_range(-2..=2);
        let p = random_invertible(&mut r, 1 + case % 2, top, 5);
        let q = p.invert().unwrap();
        if !(p.star(&q).unwrap().is_one_on_window() && q.star(&p).unwrap().is_one_on_window()) {
            bad += 1;
        }
    }
    let mut raised = 0;
    for case in 0..20 {
        let n = 1 + case % 2;
        let m = r.gen_range(0..=2);
        // principal symbol (u_0 + c) τ^{m+1}: it vanishes on u_0 = -c
        let lead = CoeffFn::u(n, 0).add(&CoeffFn::constant(n, rat(r.gen_range(-2..=2))));
        let p = WkbSymbol::monomial(lead, m + 1, 5).add(&random_symbol(&mut r, n, m, 3, 5, 2, true)).unwrap();
        if p.invert() == Err(WkbError::NotInvertible) && p.is_invertible() == Ok(false) {
            raised += 1;
        }
    }
    verdict(4, &format!("50 inverses two-sided ({bad} bad), NotInvertible on {raised}/20"), bad == 0 && raised == 20, start);
}

fn density(r: &mut ChaCha8Rng, n: usize) -> RatFn {
    let lead = Poly::var(n, r.gen_range(0..n)).pow(2);
    RatFn::new(Poly::constant(n, rat(r.gen_range(1..=3))).add(&lead), Poly::one(n)).unwrap()
}

#[test]
fn criterion_05_anti_involution() {
    let start = Instant::now();
    let mut r = rng(505);
    let mut bad = 0;
    for case in 0..100 {
        let n = 1 + case % 2;
        let p = HalfFormOperator::new(density(&mut r, n), random_symbol(&mut r, n, 1, 3, 5, 2, case % 3 == 0)).unwrap();
        let q = HalfFormOperator::new(density(&mut r, n), random_symbol(&mut r, n, 0, 3, 5, 2, case % 3 == 1)).unwrap();
        // common density: that of p
        let q = q.transport(p.density()).unwrap();
        let involutive = p.adjoint().adjoint().eq_section(&p) && q.adjoint().adjoint().eq_section(&q);
        let anti = p.star(&q).unwrap().adjoint().eq_section(&q.adjoint().star(&p.adjoint()).unwrap());
        if !(involutive && anti) {
            bad += 1;
        }
    }
    verdict(5, &format!("adjoint^2 = id and (PQ)* = Q*P* on 100 pairs, {bad} failures"), bad == 0, start);
}

#[test]
fn criterion_06_kstar_group() {
    let start = Instant::now();
    let mut r = rng(606);
    let members: Vec<TauSeries> = (0..10)
        .map(|_| {
            let odd = [-1, -3, -5].map(|e| (e, ratio(r.gen_range(-4..=4), r.gen_range(1..=3))));
            TauSeries::new(-1, 6, odd).unwrap().exp(6).unwrap()
        })
        .collect();
    let mut ok = members.iter().all(TauSeries::kstar_check);
    for a in &members {
        ok &= a.invert().unwrap().kstar_check();
        for b in &members {
            ok &= a.mul(b).kstar_check() && a.mul(&b.invert().unwrap()).kstar_check();
        }
    }
    let rejected = !TauSeries::new(0, 6, [(0, rat(1)), (-1, rat(1))]).unwrap().kstar_check();
    verdict(6, "products and inverses of k* members stay in k*; 1 + τ^-1 rejected", ok && rejected, start);
}

#[test]
fn criterion_07_crossed_modules() {
    let start = Instant::now();
    let by = |s: &str| FiniteGroup::by_name(s).unwrap();
    let mut accepted = vec![
        ("G[0](S3)", CrossedModule::make_g0(&by("S3"))),
        ("Q8 -> Aut(Q8)", CrossedModule::make_central(&by("Q8"))),
        ("Z4 -> Aut(Z4)", CrossedModule::make_central(&by("Z4"))),
    ];
    for n in 1..=6 {
        accepted.push(("G[1](Z/n)", CrossedModule::make_g1(&FiniteGroup::cyclic(n)).unwrap()));
    }
    let all_valid = accepted.iter().all(|(_, cm)| cm.validate().is_empty());
    let collapse_rejected = !CrossedModule::collapse(&by("S3")).validate().is_empty();
    let fast = start.elapsed().as_secs_f64() < 1.0;
    verdict(7, "9 fixtures accepted, [S3 -> 1] rejected, under 1s", all_valid && collapse_rejected && fast, start);
}

#[test]
fn criterion_08_hypercohomology_shift() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    // expected classical orders: H^1(S^1) = G, H^2(S^1) = 0, H^1(S^2) = 0, H^2(S^2) = G
    for (p, name) in [(2, "Z2"), (3, "Z3")] {
        let g = FiniteGroup::by_name(name).unwrap();
        let g1 = CrossedModule::make_g1(&g).unwrap();
        for (nerve_name, nerve) in [("circle", Nerve::circle()), ("sphere", Nerve::sphere())] {
            let a0 = h0(&g1, &nerve, DEFAULT_BUDGET).unwrap().len();
            let a1 = h1(&g1, &nerve, DEFAULT_BUDGET).unwrap().len();
            let (o1, o2) = (cohomology_order(&nerve, 1, p), cohomology_order(&nerve, 2, p));
            let (c1, c2) =
                (classical_cech(&g, &nerve, 1).unwrap().order, classical_cech(&g, &nerve, 2).unwrap().order);
            let report = compare_hyper(&g, &nerve, DEFAULT_BUDGET).unwrap();
            let bijections = report.entries.iter().all(|e| e.pairs.len() == e.crossed_classes);
            ok &= a0 == o1 && a1 == o2 && c1 == o1 && c2 == o2 && bijections;
            lines.push(format!("{nerve_name} {name}: h0(G[1]) {a0} ~ H^1 {o1}, h1(G[1]) {a1} ~ H^2 {o2}"));
        }
    }
    let count = |name: &str, nerve: Nerve| {
        h1(&CrossedModule::make_g1(&FiniteGroup::by_name(name).unwrap()).unwrap(), &nerve, DEFAULT_BUDGET)
            .unwrap()
            .len()
    };
    let circle_h1 = h0(&CrossedModule::make_g1(&FiniteGroup::cyclic(2)).unwrap(), &Nerve::circle(), DEFAULT_BUDGET)
        .unwrap()
        .len();
    // H^2(S^2; Z/3) = Z/3 has three classes
    ok &= circle_h1 == 2 && count("Z2", Nerve::sphere()) == 2 && count("Z3", Nerve::sphere()) == 3;
    for l in &lines {
        println!("  {l}");
    }
    verdict(8, "G[1] shifts degree on circle and sphere for Z/2, Z/3 with explicit bijections", ok, start);
}

#[test]
fn criterion_09_bridge() {
    let start = Instant::now();
    let mut ok = true;
    let mut what = Vec::new();
    for (name, nerve_name, nerve) in [("Z4", "sphere", Nerve::sphere()), ("Q8", "circle", Nerve::circle())] {
        let g = FiniteGroup::by_name(name).unwrap();
        let report = bridge_verify(&g, &nerve, DEFAULT_BUDGET).unwrap();
        // the nerves have torsion-free homology, so |H^2(nerve; Z(G))| = |Z(G)|^{b_2}
        let center: usize = if name == "Z4" { 4 } else { 2 };
        let expected = center.pow(betti(&nerve, 2));
        ok &= report.verified && report.crossed_classes == expected && report.classical_classes == expected;
        what.push(format!("{name} on {nerve_name}: |Z| = {center}, {} = {}", report.crossed_classes, report.classical_classes));
    }
    verdict(9, &what.join("; "), ok, start);
}

fn betti(nerve: &Nerve, k: usize) -> u32 {
    let mut order = cohomology_order(nerve, k, 101);
    let mut b = 0;
    while order > 1 {
        order /= 101;
        b += 1;
    }
    b
}

fn kstar(a: i64, b: i64) -> TauSeries {
    TauSeries::new(-1, 3, [(-1, ratio(a, 2)), (-3, rat(b))]).unwrap().exp(5).unwrap()
}

#[test]
fn criterion_10_descent() {
    let start = Instant::now();
    const CHECK: usize = 4;
    let nerve = Nerve::solid_tetrahedron();
    let ne = nerve.edges().len();
    let ones = || vec![WkbSymbol::one(1, 5); ne];
    let twists = |c: &[TauSeries]| c.iter().map(|s| HalfFormOperator::flat(WkbSymbol::from_scalar(1, s))).collect();
    // c = δs for s_ij in k*
    let s: Vec<TauSeries> = (0..ne).map(|e| kstar(e as i64 + 1, 1 - e as i64)).collect();
    let at = |a, b| &s[nerve.edge_index(a, b).unwrap()];
    let c: Vec<TauSeries> =
        nerve.triangles().iter().map(|&[i, j, k]| at(i, j).mul(at(j, k)).mul(&at(i, k).invert().unwrap())).collect();

    let trivial = WkbDescentDatum::new(nerve.clone(), ones(), twists(&vec![TauSeries::one(5); 4])).unwrap();
    let twisted = WkbDescentDatum::new(nerve.clone(), ones(), twists(&c)).unwrap();
    let mut bent = c.clone();
    bent[2] = bent[2].mul(&kstar(2, 0));
    let perturbed = WkbDescentDatum::new(nerve.clone(), ones(), twists(&bent)).unwrap();

    let valid = |d: &WkbDescentDatum| validate_descent(d, CHECK).unwrap().valid;
    let verdicts = (valid(&trivial), valid(&twisted), valid(&perturbed));
    let class = extract_class(&twisted, CHECK).unwrap();
    // inverse of δs is δ(s^{-1}) with s^{-1} = exp(-log s), built without `invert`
    let neg: Vec<TauSeries> = (0..ne)
        .map(|e| TauSeries::new(-1, 3, [(-1, ratio(-(e as i64 + 1), 2)), (-3, rat(e as i64 - 1))]).unwrap().exp(5).unwrap())
        .collect();
    let inverse_ok = nerve.triangles().iter().zip(&class).all(|(&[i, j, k], got)| {
        let n = |a, b| &neg[nerve.edge_index(a, b).unwrap()];
        let ij_ik = n(i, j).mul(n(j, k));
        // (s_ij s_jk s_ik^{-1})^{-1} = s_ij^{-1} s_jk^{-1} s_ik
        let s_ik = at(i, k);
        got.eq_on_window(&ij_ik.mul(s_ik).truncate(-(CHECK as i64) + 1))
    });
    let ok = verdicts == (true, true, false) && inverse_ok && start.elapsed().as_secs_f64() <= 30.0;
    verdict(10, &format!("valid/valid/invalid = {verdicts:?}, extracted class is the inverse: {inverse_ok}"), ok, start);
}
