mod common;

use common::*;
use nearby_core::kgroup::{
    all_strata, ic_to_shriek, ic_to_star, pi_class, psi_class, shriek_to_ic, star_to_ic, Basis,
    Class, Generator, KClass, SheafTable, Stratum,
};
use proptest::prelude::*;

fn to_oracle<B: Basis>(x: &Class<B>) -> Oracle {
    x.terms()
        .map(|(g, c)| ((g.stratum.to_vec(), g.twist), c))
        .collect()
}

fn stratum(members: &[u32], r: u32) -> Stratum {
    Stratum::new(members.iter().copied(), r).unwrap()
}

#[test]
fn shriek_expansion_matches_brute_force() {
    for r in 1..=6 {
        for i in all_subsets(r) {
            for a in [-2, 0, 3] {
                assert_eq!(
                    to_oracle(&shriek_to_ic(&stratum(&i, r), a)),
                    shriek_oracle(&i, a, r),
                    "I={i:?} a={a}"
                );
            }
        }
    }
}

#[test]
fn star_expansion_is_dual_of_shriek() {
    for r in 1..=6 {
        for i in all_strata(r).unwrap() {
            for a in [-1, 0, 2] {
                assert_eq!(star_to_ic(&i, a), shriek_to_ic(&i, -a).dual().to_ic());
            }
        }
    }
}

#[test]
fn shriek_and_ic_bases_invert_each_other() {
    for r in 1..=8 {
        for i in all_strata(r).unwrap() {
            let back = ic_to_shriek(&i, 1).to_ic();
            assert_eq!(back, KClass::single(Generator::new(i, 1)), "r={r} I={i}");
            let star_back = ic_to_star(&i, -2).to_ic();
            assert_eq!(star_back, KClass::single(Generator::new(i, -2)));
        }
    }
}

#[test]
fn psi_class_matches_grid_sum() {
    for r in 1..=8 {
        let psi = psi_class(r).unwrap();
        assert_eq!(to_oracle(&psi), psi_oracle(r));
        assert_eq!(psi.len() as u64, r as u64 * (1u64 << (r - 1)));
        assert!(psi.is_effective());
        assert_eq!(psi.dual(), psi);
    }
}

#[test]
fn psi_class_levels_r3() {
    let psi = psi_class(3).unwrap();
    let mut by_level: std::collections::BTreeMap<u32, std::collections::BTreeSet<i32>> =
        Default::default();
    for (g, c) in psi.terms() {
        assert_eq!(c, 1);
        by_level.entry(g.stratum.len()).or_default().insert(g.twist);
    }
    assert_eq!(by_level[&1], [0].into());
    assert_eq!(by_level[&2], [-1, 1].into());
    assert_eq!(by_level[&3], [-2, 0, 2].into());
}

#[test]
fn pi_class_is_shriek_minus_ic() {
    for r in 1..=5 {
        for i in all_subsets(r) {
            let mut expected = shriek_oracle(&i, 0, r);
            add(&mut expected, (i.clone(), 0), -1);
            assert_eq!(to_oracle(&pi_class(&stratum(&i, r))), expected);
        }
    }
}

/// Stratum-wise table of a class, recomputed from member lists.
fn table_oracle(
    x: &Oracle,
    r: u32,
    d: i32,
) -> std::collections::BTreeMap<(Vec<u32>, i32, i32), i64> {
    let mut out = std::collections::BTreeMap::new();
    for ((j, a), c) in x {
        for k in all_subsets(r) {
            if is_subset(j, &k) {
                let m = j.len() as i32;
                *out.entry((k, m, d - m + a)).or_insert(0) += c;
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

#[test]
fn sheaf_table_matches_brute_force() {
    for r in 1..=5 {
        for d in [r as i32, r as i32 + 2] {
            let psi = psi_class(r).unwrap();
            let table = SheafTable::from_class(&psi, d).unwrap();
            let got: std::collections::BTreeMap<_, _> = table
                .entries()
                .map(|(s, (m, t), c)| ((s.to_vec(), m, t), c))
                .collect();
            assert_eq!(got, table_oracle(&psi_oracle(r), r, d));
        }
    }
}

#[test]
fn reduced_psi_table_is_the_stalk_oracle() {
    for r in 1..=6 {
        for d in [r as i32, r as i32 + 1] {
            let table = SheafTable::from_class(&psi_class(r).unwrap(), d)
                .unwrap()
                .reduced();
            for i in all_strata(r).unwrap() {
                let expected: std::collections::BTreeMap<(i32, i32), i64> =
                    psi_stalk_oracle(i.len(), d)
                        .into_iter()
                        .map(|((q, t), m)| ((q + 1, t), m))
                        .collect();
                assert_eq!(table.at(&i), expected, "r={r} d={d} I={i}");
            }
        }
    }
}

#[test]
fn class_json_round_trip_and_basis_tag() {
    let x = shriek_to_ic(&stratum(&[2], 3), 1);
    let text = serde_json::to_string(&x).unwrap();
    assert_eq!(serde_json::from_str::<KClass>(&text).unwrap(), x);
    let y = ic_to_shriek(&stratum(&[2], 3), 1);
    let text = serde_json::to_string(&y).unwrap();
    assert!(serde_json::from_str::<KClass>(&text).is_err());
}

fn arb_class(r: u32) -> impl Strategy<Value = KClass> {
    prop::collection::vec((1u32..(1 << r), -4i32..=4, -3i64..=3), 0..12).prop_map(move |terms| {
        let mut x = KClass::zero(r);
        for (mask, a, c) in terms {
            x.add_term(Generator::new(Stratum::from_mask(mask, r).unwrap(), a), c);
        }
        x
    })
}

fn arb_r_class() -> impl Strategy<Value = KClass> {
    (1u32..=5).prop_flat_map(arb_class)
}

proptest! {
    #[test]
    fn table_map_is_injective(x in arb_r_class(), extra in 0i32..3) {
        let d = x.r() as i32 + extra;
        let table = SheafTable::from_class(&x, d).unwrap();
        prop_assert_eq!(table.decompose(), x.clone());
        prop_assert_eq!(table.reduced().decompose(), x);
    }

    #[test]
    fn table_map_is_linear(x in arb_class(4), y in arb_class(4)) {
        let mut lhs = SheafTable::from_class(&(&x + &y), 4).unwrap();
        let mut rhs = SheafTable::from_class(&x, 4).unwrap();
        rhs.add_table(&SheafTable::from_class(&y, 4).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        lhs.add_table(&SheafTable::from_class(&y, 4).unwrap().scaled(-1)).unwrap();
        prop_assert_eq!(lhs, SheafTable::from_class(&x, 4).unwrap());
    }

    #[test]
    fn basis_changes_round_trip(x in arb_r_class()) {
        prop_assert_eq!(x.to_shriek().to_ic(), x.clone());
        prop_assert_eq!(x.to_star().to_ic(), x.clone());
        prop_assert_eq!(x.dual().dual(), x.clone());
        prop_assert_eq!(x.to_shriek().dual().to_ic(), x.dual());
    }

    #[test]
    fn class_json_round_trip(x in arb_r_class()) {
        let text = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<KClass>(&text).unwrap(), x);
    }
}
