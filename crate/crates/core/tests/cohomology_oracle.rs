//! Čech computations against linear algebra over F_p, relabelings of the
//! nerve, and the laws of gauge equivalence.

mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use wkb_cech::cech::{
    apply0, apply1, classical_cech, equiv0, equiv1, h0, h1, OneCocycle, Witness0, Witness1, ZeroCocycle,
};
use wkb_cech::crossed::CrossedModule;
use wkb_cech::descent::Bridge;
use wkb_cech::group::FiniteGroup;
use wkb_cech::nerve::Nerve;

const BUDGET: u64 = 10_000_000;

fn fixtures() -> Vec<(&'static str, Nerve)> {
    ["point", "interval", "circle", "sphere", "ball"].into_iter().map(|n| (n, Nerve::by_name(n).unwrap())).collect()
}

#[test]
fn classical_cech_matches_rank_computation() {
    for (name, nerve) in fixtures() {
        for p in [2usize, 3, 5] {
            let g = FiniteGroup::cyclic(p);
            for k in 0..=2 {
                let h = classical_cech(&g, &nerve, k).unwrap();
                assert_eq!(h.order, cohomology_order(&nerve, k, p as i64), "{name} H^{k}(Z/{p})");
                assert_eq!(h.reps.len(), h.order);
            }
        }
    }
}

#[test]
fn shifted_coefficients_match_rank_computation() {
    for (name, nerve) in fixtures() {
        for p in [2usize, 3] {
            let g = FiniteGroup::cyclic(p);
            let g0 = CrossedModule::make_g0(&g);
            let g1 = CrossedModule::make_g1(&g).unwrap();
            let oracle = |k| cohomology_order(&nerve, k, p as i64);
            assert_eq!(h0(&g0, &nerve, BUDGET).unwrap().len(), oracle(0), "{name} H^0(G[0]) Z/{p}");
            assert_eq!(h1(&g0, &nerve, BUDGET).unwrap().len(), oracle(1), "{name} H^1(G[0]) Z/{p}");
            assert_eq!(h0(&g1, &nerve, BUDGET).unwrap().len(), oracle(1), "{name} H^0(G[1]) Z/{p}");
            assert_eq!(h1(&g1, &nerve, BUDGET).unwrap().len(), oracle(2), "{name} H^1(G[1]) Z/{p}");
        }
    }
}

#[test]
fn class_groups_have_the_classical_invariants() {
    let nerve = Nerve::sphere();
    let g = FiniteGroup::cyclic(3);
    let classes = h1(&CrossedModule::make_g1(&g).unwrap(), &nerve, BUDGET).unwrap();
    let group = classes.group().unwrap();
    assert_eq!(group.abelian_invariants().unwrap(), classical_cech(&g, &nerve, 2).unwrap().invariants);
    assert_eq!(group.abelian_invariants().unwrap(), vec![3]);
}

#[test]
fn class_counts_survive_relabeling() {
    let perms = |n: usize| -> Vec<Vec<usize>> {
        match n {
            3 => vec![vec![1, 0, 2], vec![2, 0, 1], vec![2, 1, 0]],
            _ => vec![vec![1, 0, 2, 3], vec![3, 2, 1, 0], vec![2, 0, 3, 1]],
        }
    };
    let cases = [
        (CrossedModule::make_g0(&FiniteGroup::symmetric(3)), Nerve::circle()),
        (CrossedModule::make_g1(&FiniteGroup::cyclic(2)).unwrap(), Nerve::sphere()),
        (CrossedModule::make_central(&FiniteGroup::quaternion()), Nerve::circle()),
        (CrossedModule::make_g1(&FiniteGroup::cyclic(3)).unwrap(), Nerve::solid_tetrahedron()),
    ];
    for (cm, nerve) in &cases {
        let base = (h0(cm, nerve, BUDGET).unwrap().len(), h1(cm, nerve, BUDGET).unwrap().len());
        for perm in perms(nerve.vertices()) {
            let relabeled = nerve.relabel(&perm).unwrap();
            let counts = (h0(cm, &relabeled, BUDGET).unwrap().len(), h1(cm, &relabeled, BUDGET).unwrap().len());
            assert_eq!(counts, base);
        }
    }
}

#[test]
fn bridge_round_trips_every_classical_cocycle() {
    let g = FiniteGroup::quaternion();
    let nerve = Nerve::solid_tetrahedron();
    let bridge = Bridge::new(&g);
    let center = bridge.center().clone();
    // every Z/2-valued 2-cochain, kept if it is a cocycle
    for bits in 0u32..16 {
        let z: Vec<usize> = (0..4).map(|t| ((bits >> t) & 1) as usize).collect();
        let delta = wkb_cech::cech::coboundary(&center, &nerve, 2, &z);
        match bridge.backward(&nerve, &z) {
            Ok(c) => {
                assert!(delta.iter().all(|&v| v == 0));
                assert_eq!(bridge.forward(&nerve, &c).unwrap(), z);
            }
            Err(_) => assert!(delta.iter().any(|&v| v != 0)),
        }
    }
}

fn random_witness1(r: &mut rand_chacha::ChaCha8Rng, cm: &CrossedModule, nerve: &Nerve) -> Witness1 {
    Witness1 {
        l: (0..nerve.vertices()).map(|_| r.gen_range(0..cm.g0().size())).collect(),
        k: (0..nerve.edges().len()).map(|_| r.gen_range(0..cm.gm1().size())).collect(),
    }
}

fn random_witness0(r: &mut rand_chacha::ChaCha8Rng, cm: &CrossedModule, nerve: &Nerve) -> Witness0 {
    Witness0 { k: (0..nerve.vertices()).map(|_| r.gen_range(0..cm.gm1().size())).collect() }
}

struct Case {
    cm: CrossedModule,
    nerve: Nerve,
    reps1: Vec<OneCocycle>,
    reps0: Vec<ZeroCocycle>,
}

fn cases() -> Vec<Case> {
    let data = [
        (CrossedModule::make_g0(&FiniteGroup::symmetric(3)), Nerve::circle()),
        (CrossedModule::make_central(&FiniteGroup::quaternion()), Nerve::circle()),
        (CrossedModule::make_g1(&FiniteGroup::cyclic(2)).unwrap(), Nerve::sphere()),
        (CrossedModule::make_central(&FiniteGroup::symmetric(3)), Nerve::solid_tetrahedron()),
    ];
    data.into_iter()
        .map(|(cm, nerve)| {
            let reps1 = h1(&cm, &nerve, BUDGET).unwrap().reps;
            let reps0 = h0(&cm, &nerve, BUDGET).unwrap().reps;
            Case { cm, nerve, reps1, reps0 }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauge_equivalence_is_an_equivalence_relation(seed in any::<u64>(), which in 0usize..4) {
        let case = &cases()[which];
        let (cm, nerve) = (&case.cm, &case.nerve);
        let mut r = rng(seed);
        let c = case.reps1[r.gen_range(0..case.reps1.len())].clone();
        let c1 = apply1(cm, nerve, &c, &random_witness1(&mut r, cm, nerve));
        let c2 = apply1(cm, nerve, &c1, &random_witness1(&mut r, cm, nerve));
        prop_assert!(equiv1(cm, nerve, &c, &c, BUDGET).unwrap().is_some());
        prop_assert!(equiv1(cm, nerve, &c, &c1, BUDGET).unwrap().is_some());
        prop_assert!(equiv1(cm, nerve, &c1, &c, BUDGET).unwrap().is_some());
        prop_assert!(equiv1(cm, nerve, &c, &c2, BUDGET).unwrap().is_some());
        // distinct representatives are never equivalent
        for other in &case.reps1 {
            let same = *other == c;
            prop_assert_eq!(equiv1(cm, nerve, &c1, other, BUDGET).unwrap().is_some(), same);
        }

        let z = case.reps0[r.gen_range(0..case.reps0.len())].clone();
        let z1 = apply0(cm, nerve, &z, &random_witness0(&mut r, cm, nerve));
        prop_assert!(equiv0(cm, nerve, &z1, &z).unwrap().is_some());
        for other in &case.reps0 {
            prop_assert_eq!(equiv0(cm, nerve, &z1, other).unwrap().is_some(), *other == z);
        }
    }
}
