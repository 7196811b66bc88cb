//! Generator-level checks vs independent full-element brute-force oracles on
//! every small instance (|M|*|Gamma| <= 2^10).

mod common;

use common::*;
use gammaring_core::instances::{builtin_suite, nilpotent_instance};
use gammaring_core::maps::{
    check_role, enumerate_maps_default, is_scp, MapRole,
};
use gammaring_core::structure::{
    center_default, is_commutative, is_prime_default, is_semiprime_default,
};
use gammaring_core::GammaRing;
use std::collections::BTreeSet;

fn small_instances() -> Vec<(String, GammaRing)> {
    let mut list: Vec<(String, GammaRing)> = builtin_suite()
        .into_iter()
        .filter(|(_, gr)| gr.m_group().order() * gr.g_group().order() <= 1 << 10)
        .collect();
    list.push(("nilpotent3-2".into(), nilpotent_instance(2).unwrap()));
    list.push(("nilpotent3-3".into(), nilpotent_instance(3).unwrap()));
    list
}

#[test]
fn associativity_oracle_agrees() {
    for (name, gr) in small_instances() {
        assert_eq!(
            gr.validate_associativity().verdict,
            oracle_associative(&gr),
            "{name}"
        );
    }
}

#[test]
fn center_oracle_agrees() {
    for (name, gr) in small_instances() {
        let z = center_default(&gr).unwrap();
        let fast: BTreeSet<_> = z.elements().iter().cloned().collect();
        let slow: BTreeSet<_> = oracle_center(&gr).into_iter().collect();
        assert_eq!(fast, slow, "{name}");
    }
}

#[test]
fn commutativity_and_primeness_oracles_agree() {
    for (name, gr) in small_instances() {
        assert_eq!(
            is_commutative(&gr).unwrap().verdict,
            oracle_commutative(&gr),
            "{name} commutative"
        );
        assert_eq!(
            is_semiprime_default(&gr).unwrap().verdict,
            oracle_semiprime(&gr),
            "{name} semiprime"
        );
        assert_eq!(
            is_prime_default(&gr).unwrap().verdict,
            oracle_prime(&gr),
            "{name} prime"
        );
    }
}

#[test]
fn map_role_and_scp_oracles_agree() {
    // Exhaustive over every additive map; bounded to |M| <= 8 so the
    // brute-force side stays in the tens of millions of products.
    for (name, gr) in small_instances() {
        if gr.m_group().order() > 8 {
            continue;
        }
        for f in oracle_all_additive_maps(&gr) {
            for role in [
                MapRole::AdditiveOnly,
                MapRole::LeftDerivation,
                MapRole::RightDerivation,
                MapRole::Derivation,
                MapRole::Endomorphism,
            ] {
                assert_eq!(
                    check_role(&gr, &f, role).unwrap().verdict,
                    oracle_role(&gr, &f, role),
                    "{name} role {role:?} images {:?}",
                    f.images()
                );
            }
            assert_eq!(
                is_scp(&gr, &f).unwrap().verdict,
                oracle_scp(&gr, &f),
                "{name} scp images {:?}",
                f.images()
            );
        }
    }
}

#[test]
fn enumeration_agrees_with_oracle_filter() {
    for (name, gr) in small_instances() {
        if gr.m_group().order() > 8 {
            continue;
        }
        let all = oracle_all_additive_maps(&gr);
        for role in [MapRole::LeftDerivation, MapRole::Endomorphism] {
            let enumerated: BTreeSet<_> = enumerate_maps_default(&gr, role)
                .unwrap()
                .into_iter()
                .collect();
            let filtered: BTreeSet<_> = all
                .iter()
                .filter(|f| oracle_role(&gr, f, role))
                .cloned()
                .collect();
            assert_eq!(enumerated, filtered, "{name} role {role:?}");
        }
    }
}
