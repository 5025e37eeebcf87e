//! Flower classification fixtures that the unit tests do not reach: the
//! Vamos-like class, flower duality, the modularity consequence for
//! displayed sets, loose-fan tagging, and family facts tied to minors and
//! clones.

use matroid::catalog::catalog_at_most;
use matroid::connectivity::{self, lambda};
use matroid::families::{generate, leg_mask, FamilySpec};
use matroid::flowers::{
    classify_flower, flower_order, loose_elements, FanElementRole, FlowerCandidate, FlowerClass,
};
use matroid::freedom;
use matroid::ground::{bits, popcount, subsets_of, GroundSet, Mask};
use matroid::matroid::{find_isomorphism, uniform, Matroid, MinorSpec};

/// The Vamos matroid: rank 4 on pairs a, b, c, d with five of the six
/// pair-union planes as circuit-hyperplanes ({c, d} stays independent).
fn vamos() -> Matroid {
    let labels: Vec<String> = ["a0", "a1", "b0", "b1", "c0", "c1", "d0", "d1"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let pair = |i: usize| -> Mask { 0b11 << (2 * i) };
    // circuit-hyperplanes: ab, ac, ad, bc, bd (not cd)
    let chs: Vec<Mask> = vec![
        pair(0) | pair(1),
        pair(0) | pair(2),
        pair(0) | pair(3),
        pair(1) | pair(2),
        pair(1) | pair(3),
    ];
    let g = GroundSet::new(labels).unwrap();
    Matroid::from_rank_fn(g, move |x| {
        if chs.contains(&x) {
            3
        } else {
            popcount(x).min(4)
        }
    })
    .unwrap()
}

#[test]
fn vamos_flower_is_vamos_like() {
    let v = vamos();
    assert!(v.check_axioms().valid);
    let petals: Vec<Mask> = (0..4).map(|i| 0b11 << (2 * i)).collect();
    let rep = classify_flower(&v, &FlowerCandidate { petals }).unwrap();
    assert_eq!(rep.class, FlowerClass::VamosLike);
    // no loose elements in a Vamos-like flower
    assert_eq!(rep.tight_elements, v.full_mask());
}

#[test]
fn flower_duality_swaps_paddle_and_copaddle() {
    let m = generate(&FamilySpec::Mk3nDual { n: 4 }).unwrap();
    let petals: Vec<Mask> = (0..4)
        .map(|j| {
            m.ground()
                .mask_of(&[format!("a0b{j}"), format!("a1b{j}"), format!("a2b{j}")])
                .unwrap()
        })
        .collect();
    let rep = classify_flower(&m, &FlowerCandidate { petals: petals.clone() }).unwrap();
    assert_eq!(rep.class, FlowerClass::AnemoneCopaddle);
    let d = m.dual();
    let rep_d = classify_flower(&d, &FlowerCandidate { petals }).unwrap();
    assert_eq!(rep_d.class, FlowerClass::AnemonePaddle);

    // swirl-like flowers stay swirl-like under duality
    let d5 = generate(&FamilySpec::FreeSwirl { n: 5 }).unwrap();
    let legs: Vec<Mask> = (0..5).map(leg_mask).collect();
    let rep_s = classify_flower(&d5, &FlowerCandidate { petals: legs.clone() }).unwrap();
    let rep_sd = classify_flower(&d5.dual(), &FlowerCandidate { petals: legs }).unwrap();
    assert_eq!(rep_s.class, FlowerClass::SwirlLike);
    assert_eq!(rep_sd.class, FlowerClass::SwirlLike);

    // spike-like flowers stay spike-like
    let l4 = generate(&FamilySpec::FreeSpike { n: 4 }).unwrap();
    let legs4: Vec<Mask> = (0..4).map(leg_mask).collect();
    let rep_p = classify_flower(&l4, &FlowerCandidate { petals: legs4.clone() }).unwrap();
    let rep_pd = classify_flower(&l4.dual(), &FlowerCandidate { petals: legs4 }).unwrap();
    assert_eq!(rep_p.class, FlowerClass::SpikeLike);
    assert_eq!(rep_pd.class, FlowerClass::SpikeLike);
}

#[test]
fn displayed_sets_with_inner_and_outer_petals_are_modular_pairs() {
    // for displayed sets A, B with a petal inside A∩B and a petal outside
    // A∪B, r(A) + r(B) = r(A∪B) + r(A∩B)
    for (m, petals) in [
        (
            generate(&FamilySpec::FreeSwirl { n: 5 }).unwrap(),
            (0..5).map(leg_mask).collect::<Vec<Mask>>(),
        ),
        (
            generate(&FamilySpec::FreeSpike { n: 5 }).unwrap(),
            (0..5).map(leg_mask).collect::<Vec<Mask>>(),
        ),
    ] {
        let n = petals.len();
        for sel_a in 1u32..(1 << n) - 1 {
            for sel_b in 1u32..(1 << n) - 1 {
                if sel_a & sel_b == 0 || sel_a | sel_b == (1 << n) - 1 {
                    continue;
                }
                let a: Mask = bits(sel_a).fold(0, |x, i| x | petals[i]);
                let b: Mask = bits(sel_b).fold(0, |x, i| x | petals[i]);
                // displayed sets must be 3-separating sides of the flower
                if lambda(&m, a) != 2 || lambda(&m, b) != 2 {
                    continue;
                }
                assert_eq!(
                    m.rank(a) + m.rank(b),
                    m.rank(a | b) + m.rank(a & b),
                    "modularity fails"
                );
            }
        }
    }
}

#[test]
fn loose_fan_tags_match_closure_queries() {
    // the swirl with one joint kept: b0 is a loose guts (spoke) element
    let m = matroid::acceptance::swirl_with_one_joint(4).unwrap();
    let b0 = m.ground().index_of("b0").unwrap();
    let petals: Vec<Mask> = vec![
        m.ground().mask_of(&["p0", "q0", "b0"]).unwrap(),
        m.ground().mask_of(&["p1", "q1"]).unwrap(),
        m.ground().mask_of(&["p2", "q2"]).unwrap(),
        m.ground().mask_of(&["p3", "q3"]).unwrap(),
    ];
    let rep = classify_flower(&m, &FlowerCandidate { petals: petals.clone() }).unwrap();
    assert_eq!(rep.class, FlowerClass::SwirlLike);
    assert_eq!(rep.tight_elements, m.full_mask() & !(1 << b0));
    // b0 appears in the fan between petal 3 and petal 0 as a spoke (guts)
    // element: it lies in cl of both neighbor tight parts
    let fan = rep
        .loose_fans
        .iter()
        .find(|f| f.elements.iter().any(|&(e, _)| e == b0))
        .expect("joint appears in a loose fan");
    let (_, role) = fan.elements.iter().find(|&&(e, _)| e == b0).unwrap();
    assert_eq!(*role, FanElementRole::Spoke);
    // direct closure checks: guts element per the closure criteria
    let p3 = m.ground().mask_of(&["p3", "q3"]).unwrap();
    let p0 = m.ground().mask_of(&["p0", "q0"]).unwrap();
    assert!(m.closure(p3) >> b0 & 1 == 1);
    assert!(m.closure(p0) >> b0 & 1 == 1);
    // alternation is trivial for the singleton fan; the dual fixture tags
    // the same element as a rim (coguts) element
    let d = m.dual().materialize().unwrap();
    let rep_d = classify_flower(
        &d,
        &FlowerCandidate {
            petals: vec![
                d.ground().mask_of(&["p0", "q0", "b0"]).unwrap(),
                d.ground().mask_of(&["p1", "q1"]).unwrap(),
                d.ground().mask_of(&["p2", "q2"]).unwrap(),
                d.ground().mask_of(&["p3", "q3"]).unwrap(),
            ],
        },
    )
    .unwrap();
    let fan_d = rep_d
        .loose_fans
        .iter()
        .find(|f| f.elements.iter().any(|&(e, _)| e == b0))
        .expect("joint appears in the dual's loose fan");
    let (_, role_d) = fan_d.elements.iter().find(|&&(e, _)| e == b0).unwrap();
    assert_eq!(*role_d, FanElementRole::Rim);
}

#[test]
fn tight_petals_have_two_tight_elements() {
    // every tight petal of a reported tight flower keeps at least two
    // tight elements
    for (m, petals) in [
        (
            generate(&FamilySpec::FreeSwirl { n: 5 }).unwrap(),
            (0..5).map(leg_mask).collect::<Vec<Mask>>(),
        ),
        (
            generate(&FamilySpec::FreeSpike { n: 4 }).unwrap(),
            (0..4).map(leg_mask).collect::<Vec<Mask>>(),
        ),
    ] {
        let loose = loose_elements(&m, &petals);
        for &p in &petals {
            let tight_in_petal = popcount(p & !loose);
            assert!(tight_in_petal == 0 || tight_in_petal >= 2);
        }
    }
}

#[test]
fn swirl_minor_of_next_size_down() {
    // contracting one leg element and deleting its partner from a free
    // swirl gives the next smaller free swirl
    for n in [4usize, 5] {
        let d = generate(&FamilySpec::FreeSwirl { n }).unwrap();
        let q = d.ground().mask_of(&[format!("q{}", n - 1)]).unwrap();
        let p = d.ground().mask_of(&[format!("p{}", n - 1)]).unwrap();
        let minor = d
            .minor(MinorSpec::new(q, p).unwrap())
            .unwrap()
            .materialize()
            .unwrap();
        let smaller = generate(&FamilySpec::FreeSwirl { n: n - 1 }).unwrap();
        assert!(
            find_isomorphism(&minor, &smaller).unwrap().is_some(),
            "Delta{n} minus a leg is not Delta{}",
            n - 1
        );
    }
}

#[test]
fn tipped_spike_deletion_gives_free_spike() {
    let sp = matroid::acceptance::tipped_free_spike(3).unwrap();
    assert!(sp.check_axioms().valid);
    let t = sp.ground().mask_of(&["t"]).unwrap();
    let tipless = sp.delete(t).unwrap();
    let l3 = generate(&FamilySpec::FreeSpike { n: 3 }).unwrap();
    for x in subsets_of(tipless.full_mask()) {
        assert_eq!(tipless.rank(x), l3.rank(x));
    }
    // closure of two legs in the tipless spike contains nothing further
    let l4 = generate(&FamilySpec::FreeSpike { n: 4 }).unwrap();
    let two = leg_mask(0) | leg_mask(1);
    assert_eq!(l4.closure(two), two);
}

#[test]
fn joints_minus_basis_is_free_swirl() {
    for n in [3usize, 4] {
        let joints = generate(&FamilySpec::SwirlWithJoints { n }).unwrap();
        let basis: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
        let b = joints.ground().mask_of(&basis).unwrap();
        let legs_only = joints.delete(b).unwrap();
        let d = generate(&FamilySpec::FreeSwirl { n }).unwrap();
        for x in subsets_of(d.full_mask()) {
            assert_eq!(legs_only.rank(x), d.rank(x));
        }
    }
}

#[test]
fn clones_only_in_free_spikes_and_swirls() {
    // a declared circuit transversal splits every leg's clonal pair
    let free = generate(&FamilySpec::Spike {
        n: 4,
        circuit_transversals: vec![],
    })
    .unwrap();
    let free_classes = freedom::clonal_analysis(&free).classes;
    assert!(free_classes.iter().all(|c| c.len() == 2));
    let tightened = generate(&FamilySpec::Spike {
        n: 4,
        circuit_transversals: vec![0b0000],
    })
    .unwrap();
    let classes = freedom::clonal_analysis(&tightened).classes;
    assert!(classes.iter().all(|c| c.len() == 1));
    // same for swirls
    let sw = generate(&FamilySpec::Swirl {
        n: 4,
        circuit_transversals: vec![0b0101],
    })
    .unwrap();
    assert!(freedom::clonal_analysis(&sw).classes.iter().all(|c| c.len() == 1));
}

#[test]
fn born_free_consistency_on_catalog_minors() {
    // if b is fixed in M/a but not in M, then a is not freer than b
    for (name, m) in catalog_at_most(8).unwrap() {
        let analysis = freedom::clonal_analysis(&m);
        for a in 0..m.size() {
            let mc = m.contract(1u32 << a).unwrap();
            for b in 0..m.size() {
                if b == a {
                    continue;
                }
                let b_in_minor = mc
                    .ground()
                    .index_of(m.ground().label(b))
                    .unwrap();
                let fixed_minor = freedom::is_fixed(&mc, b_in_minor).unwrap().0;
                let fixed_full = freedom::is_fixed(&m, b).unwrap().0;
                if fixed_minor && !fixed_full {
                    // a is below b in the freer order: every cyclic flat
                    // containing a contains b
                    assert!(
                        analysis.freer[b][a] || analysis.freer[a][b],
                        "{name}: born-free pair ({a}, {b}) incomparable"
                    );
                    assert!(
                        analysis.freer[b][a],
                        "{name}: expected {b} freer than {a}"
                    );
                }
            }
        }
    }
}

#[test]
fn whirl_rim_is_basis_wheel_rim_is_circuit_hyperplane() {
    for n in [3usize, 4, 5] {
        let wheel = generate(&FamilySpec::Wheel { n }).unwrap();
        let whirl = generate(&FamilySpec::Whirl { n }).unwrap();
        let rim = matroid::families::wheel_rim_mask(n);
        assert_eq!(wheel.rank(rim), n as u32 - 1);
        assert!(whirl.is_independent(rim));
    }
}

#[test]
fn spike_rank4_legs_give_spike_like_fracture_shape() {
    // spikes and swirls are 3-connected
    for n in [3usize, 4, 5] {
        assert!(connectivity::is_3connected(
            &generate(&FamilySpec::FreeSwirl { n }).unwrap()
        ));
        assert!(connectivity::is_3connected(
            &generate(&FamilySpec::FreeSpike { n }).unwrap()
        ));
    }
}

#[test]
fn u36_flower_order_one_and_quad_order_two() {
    let u36 = uniform(3, 6, "e").unwrap();
    let petals: Vec<Mask> = vec![0b000011, 0b001100, 0b110000];
    let (order, _) = flower_order(&u36, &FlowerCandidate { petals }).unwrap();
    assert_eq!(order, 1);
}
