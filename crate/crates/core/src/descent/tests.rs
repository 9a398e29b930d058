use super::*;
use crate::cech::{classical_cech, OneCocycle};
use crate::coeff::CoeffFn;
use crate::group::FiniteGroup;
use crate::rational::{rat, ratio};

const D: usize = 5;
const CHECK: usize = 4;

fn kstar(a: i64, b: i64) -> TauSeries {
    // exp of an odd series lies in k*
    let arg = TauSeries::new(-1, 3, [(-1, ratio(a, 2)), (-3, rat(b))]).unwrap();
    arg.exp(D).unwrap()
}

fn filled_triangle() -> Nerve {
    Nerve::new(3, &[[0, 1], [0, 2], [1, 2]], &[[0, 1, 2]], &[]).unwrap()
}

fn ones(nerve: &Nerve) -> (Vec<WkbSymbol>, Vec<HalfFormOperator>) {
    let q = vec![WkbSymbol::one(1, D); nerve.edges().len()];
    let p = vec![HalfFormOperator::flat(WkbSymbol::one(1, D)); nerve.triangles().len()];
    (q, p)
}

/// `c = δs` for `s_ij` in `k*`, a classical 2-cocycle.
fn central_cocycle(nerve: &Nerve) -> Vec<TauSeries> {
    let s: Vec<TauSeries> = (0..nerve.edges().len()).map(|e| kstar(e as i64 + 1, 1 - e as i64)).collect();
    nerve
        .triangles()
        .iter()
        .map(|&[i, j, k]| {
            let at = |a, b| &s[nerve.edge_index(a, b).unwrap()];
            at(i, j).mul(at(j, k)).mul(&at(i, k).invert().unwrap())
        })
        .collect()
}

fn scalar_twists(c: &[TauSeries]) -> Vec<HalfFormOperator> {
    c.iter().map(|s| HalfFormOperator::flat(WkbSymbol::from_scalar(1, s))).collect()
}

/// A non-scalar element of `W^{√v,*}`.
fn unitary(a: i64, b: i64) -> WkbSymbol {
    let u = CoeffFn::u(1, 0);
    let x = CoeffFn::x(1, 0);
    let coeff = u.mul(&u).scale(&rat(a)).add(&x.scale(&rat(b))).add(&x.mul(&u));
    let m = WkbSymbol::new(1, -1, D - 1, [(-1, coeff)]).unwrap();
    let anti = m.sub(&m.adjoint_flat()).unwrap().scale(&ratio(1, 2));
    anti.star_exp(D).unwrap()
}

#[test]
fn trivial_datum() {
    let nerve = Nerve::solid_tetrahedron();
    let (q, p) = ones(&nerve);
    let d = WkbDescentDatum::new(nerve, q, p).unwrap();
    let report = validate_descent(&d, CHECK).unwrap();
    assert!(report.valid);
    // 4 triangles x 2 generators + 1 tetrahedron
    assert_eq!(report.checks.len(), 9);
    let c = extract_class(&d, CHECK).unwrap();
    assert!(c.iter().all(TauSeries::is_one_on_window));
}

#[test]
fn central_twist_is_valid_and_extracts_the_inverse() {
    let nerve = Nerve::solid_tetrahedron();
    let c = central_cocycle(&nerve);
    assert!(c.iter().all(TauSeries::kstar_check));
    let (q, _) = ones(&nerve);
    let d = WkbDescentDatum::new(nerve, q, scalar_twists(&c)).unwrap();
    assert!(validate_descent(&d, CHECK).unwrap().valid);
    let got = extract_class(&d, CHECK).unwrap();
    for (g, s) in got.iter().zip(&c) {
        let inv = s.invert().unwrap().truncate(-(CHECK as i64) + 1);
        assert_eq!(g, &inv);
    }
}

#[test]
fn perturbed_twist_is_invalid() {
    let nerve = Nerve::solid_tetrahedron();
    let mut c = central_cocycle(&nerve);
    c[2] = c[2].mul(&kstar(2, 0));
    let (q, _) = ones(&nerve);
    let d = WkbDescentDatum::new(nerve, q, scalar_twists(&c)).unwrap();
    let report = validate_descent(&d, CHECK).unwrap();
    assert!(!report.valid);
    let failed: Vec<_> = report.failures().collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0].simplex, vec![0, 1, 2, 3]);
    assert!(failed[0].residual.as_deref().is_some_and(|r| r.contains("τ^-1")));
    assert_eq!(extract_class(&d, CHECK), Err(DescentError::InvalidDatum { failed: 1 }));
}

#[test]
fn inner_twists_give_the_trivial_class() {
    let nerve = Nerve::solid_tetrahedron();
    let q: Vec<WkbSymbol> = (0..nerve.edges().len()).map(|e| unitary(e as i64 + 1, 2 - e as i64)).collect();
    let p: Vec<HalfFormOperator> = nerve
        .triangles()
        .iter()
        .map(|&[i, j, k]| {
            let at = |a, b| &q[nerve.edge_index(a, b).unwrap()];
            let op = at(i, j).star(at(j, k)).unwrap().star(&at(i, k).invert().unwrap()).unwrap();
            HalfFormOperator::flat(op)
        })
        .collect();
    let d = WkbDescentDatum::new(nerve, q, p).unwrap();
    assert!(validate_descent(&d, CHECK).unwrap().valid);
    let c = extract_class(&d, CHECK).unwrap();
    assert!(c.iter().all(TauSeries::is_one_on_window), "{c:?}");
}

#[test]
fn scalar_gauge_shifts_by_a_coboundary() {
    let nerve = Nerve::solid_tetrahedron();
    let c = central_cocycle(&nerve);
    let s: Vec<TauSeries> = (0..nerve.edges().len()).map(|e| kstar(3 - e as i64, e as i64)).collect();
    let q: Vec<WkbSymbol> = s.iter().map(|x| WkbSymbol::from_scalar(1, x)).collect();
    let d = WkbDescentDatum::new(nerve.clone(), q, scalar_twists(&c)).unwrap();
    let got = extract_class(&d, CHECK).unwrap();
    for (t, &[i, j, k]) in nerve.triangles().iter().enumerate() {
        let at = |a, b| &s[nerve.edge_index(a, b).unwrap()];
        let expected = at(i, j).mul(at(j, k)).mul(&at(i, k).invert().unwrap()).mul(&c[t].invert().unwrap());
        assert!(got[t].eq_on_window(&expected));
    }
}

#[test]
fn defects_outside_the_model() {
    // a central defect that is not in k*
    let nerve = filled_triangle();
    let (mut q, p) = ones(&nerve);
    q[0] = WkbSymbol::from_scalar(1, &TauSeries::new(0, D, [(0, rat(1)), (-1, rat(1))]).unwrap());
    let d = WkbDescentDatum::new(nerve.clone(), q, p.clone()).unwrap();
    assert!(validate_descent(&d, CHECK).unwrap().valid);
    assert_eq!(extract_class(&d, CHECK), Err(DescentError::DefectOutsideKStar { triangle: [0, 1, 2] }));

    // a defect invisible to the relations at this depth but not scalar
    let (mut q, _) = ones(&nerve);
    let bump = WkbSymbol::new(1, 0, 3, [(0, CoeffFn::one(1)), (-2, CoeffFn::x(1, 0))]).unwrap();
    q[0] = bump;
    let d = WkbDescentDatum::new(nerve, q, p).unwrap();
    assert!(validate_descent(&d, 3).unwrap().valid);
    assert_eq!(extract_class(&d, 3), Err(DescentError::NonCentralDefect { triangle: [0, 1, 2] }));
}

#[test]
fn datum_invariants() {
    let nerve = filled_triangle();
    let (mut q, p) = ones(&nerve);
    q[1] = WkbSymbol::u_tau(1, 0, D);
    assert_eq!(
        WkbDescentDatum::new(nerve.clone(), q, p.clone()).unwrap_err(),
        DescentError::NotInvertible { edge: [0, 2] }
    );
    let (q, _) = ones(&nerve);
    let bad = WkbSymbol::new(1, 0, D, [(0, CoeffFn::one(1)), (-1, CoeffFn::u(1, 0))]).unwrap();
    assert_eq!(
        WkbDescentDatum::new(nerve.clone(), q.clone(), vec![HalfFormOperator::flat(bad)]).unwrap_err(),
        DescentError::NotUnitary { triangle: [0, 1, 2] }
    );
    assert!(matches!(
        WkbDescentDatum::new(nerve.clone(), q[..2].to_vec(), p.clone()),
        Err(DescentError::MissingAssignment(_))
    ));
    let mut q2 = q.clone();
    q2[2] = WkbSymbol::one(2, D);
    assert!(matches!(WkbDescentDatum::new(nerve.clone(), q2, p.clone()), Err(DescentError::InvalidGenerator(_))));
    let d = WkbDescentDatum::new(nerve, q, p).unwrap();
    assert_eq!(validate_descent(&d, D + 1), Err(DescentError::DepthInsufficient { needed: D + 1, available: D }));
}

#[test]
fn datum_json_round_trip() {
    let nerve = Nerve::solid_tetrahedron();
    let c = central_cocycle(&nerve);
    let (q, _) = ones(&nerve);
    let d = WkbDescentDatum::new(nerve, q, scalar_twists(&c)).unwrap();
    let text = serde_json::to_string(&DescentJson::from(&d)).unwrap();
    let j: DescentJson = serde_json::from_str(&text).unwrap();
    assert_eq!(WkbDescentDatum::try_from(j.clone()).unwrap(), d);
    let mut missing = j;
    missing.p.remove("0,1,2");
    assert!(matches!(WkbDescentDatum::try_from(missing), Err(DescentError::MissingAssignment(_))));
}

#[test]
fn bridge_examples() {
    let z4 = FiniteGroup::cyclic(4);
    let r = bridge_verify(&z4, &Nerve::sphere(), 1_000_000).unwrap();
    assert!(r.verified);
    // Z/4 is its own center: H^2(S^2; Z/4) = Z/4
    assert_eq!((r.crossed_classes, r.classical_classes), (4, 4));
    assert_eq!(r.center_order, 4);

    let q8 = FiniteGroup::quaternion();
    let r = bridge_verify(&q8, &Nerve::circle(), 1_000_000).unwrap();
    assert!(r.verified);
    assert_eq!((r.crossed_classes, r.classical_classes), (1, 1));

    // the trivial cocycle goes to the trivial class both ways
    let nerve = Nerve::sphere();
    let trivial = OneCocycle::identity(&nerve);
    assert_eq!(bridge_forward(&z4, &nerve, &trivial).unwrap(), vec![0; 4]);
    assert_eq!(bridge_backward(&z4, &nerve, &[0; 4]).unwrap(), trivial);
}

#[test]
fn bridge_round_trips_on_all_cocycles() {
    let g = FiniteGroup::quaternion();
    let nerve = Nerve::sphere();
    let b = Bridge::new(&g);
    let classical = classical_cech(b.center(), &nerve, 2).unwrap();
    assert_eq!(classical.order, 2);
    for z in &classical.reps {
        let c = b.backward(&nerve, z).unwrap();
        assert_eq!(&b.forward(&nerve, &c).unwrap(), z);
    }
    // the sphere has no 3-simplices, so test the cocycle condition on the ball
    let ball = Nerve::solid_tetrahedron();
    assert_eq!(b.backward(&ball, &[1, 0, 0, 0]), Err(BridgeError::NotCocycle));
    let r = b.verify(&nerve, 10_000_000).unwrap();
    assert!(r.verified, "{r:?}");
    assert_eq!(r.crossed_classes, 2);
}
