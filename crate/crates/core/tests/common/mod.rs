//! Independent full-element brute-force oracles.
//!
//! Everything here quantifies over all elements with naive loops and builds
//! maps by trying every image tuple, deliberately sharing no logic with the
//! generator-level implementations under test.

use gammaring_core::maps::MapRole;
use gammaring_core::{AdditiveMap, Element, GammaRing};

pub fn all_elements(gr: &GammaRing) -> Vec<Element> {
    gr.m_group().elements().collect()
}

pub fn all_gammas(gr: &GammaRing) -> Vec<Element> {
    gr.g_group().elements().collect()
}

/// Full-definition center: a with a*g*b == b*g*a for every b, gamma.
pub fn oracle_center(gr: &GammaRing) -> Vec<Element> {
    let ms = all_elements(gr);
    let gs = all_gammas(gr);
    ms.iter()
        .filter(|a| {
            ms.iter().all(|b| {
                gs.iter().all(|g| {
                    gr.product(a, g, b).unwrap() == gr.product(b, g, a).unwrap()
                })
            })
        })
        .cloned()
        .collect()
}

pub fn oracle_commutative(gr: &GammaRing) -> bool {
    oracle_center(gr).len() as u64 == gr.m_group().order()
}

/// a * g1 * m * g2 * b over all m, g1, g2 is everywhere zero.
fn annihilates(gr: &GammaRing, a: &Element, b: &Element) -> bool {
    let m_group = gr.m_group();
    for m in all_elements(gr) {
        for g1 in all_gammas(gr) {
            for g2 in all_gammas(gr) {
                let left = gr.product(a, &g1, &m).unwrap();
                if !m_group.is_zero(&gr.product(&left, &g2, b).unwrap()) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn oracle_semiprime(gr: &GammaRing) -> bool {
    let m_group = gr.m_group();
    all_elements(gr)
        .iter()
        .all(|a| m_group.is_zero(a) || !annihilates(gr, a, a))
}

pub fn oracle_prime(gr: &GammaRing) -> bool {
    let m_group = gr.m_group();
    let ms = all_elements(gr);
    for a in &ms {
        if m_group.is_zero(a) {
            continue;
        }
        for b in &ms {
            if m_group.is_zero(b) {
                continue;
            }
            if annihilates(gr, a, b) {
                return false;
            }
        }
    }
    true
}

/// Every well-defined additive self-map, built by trying all image tuples.
pub fn oracle_all_additive_maps(gr: &GammaRing) -> Vec<AdditiveMap> {
    let m = gr.m_group();
    let rank = m.rank();
    let elems = all_elements(gr);
    let mut maps = Vec::new();
    let total = elems.len().pow(rank as u32);
    for mut code in 0..total {
        let mut images = Vec::with_capacity(rank);
        for _ in 0..rank {
            images.push(elems[code % elems.len()].clone());
            code /= elems.len();
        }
        if let Ok(f) = AdditiveMap::new(m.clone(), m.clone(), images) {
            maps.push(f);
        }
    }
    maps
}

/// Role identity checked on every full-element triple.
pub fn oracle_role(gr: &GammaRing, f: &AdditiveMap, role: MapRole) -> bool {
    let m = gr.m_group();
    for x in all_elements(gr) {
        for y in all_elements(gr) {
            for g in all_gammas(gr) {
                let fx = f.apply(&x).unwrap();
                let fy = f.apply(&y).unwrap();
                let fxy = f.apply(&gr.product(&x, &g, &y).unwrap()).unwrap();
                let rhs = match role {
                    MapRole::AdditiveOnly => fxy.clone(),
                    MapRole::LeftDerivation => m
                        .add(
                            &gr.product(&x, &g, &fy).unwrap(),
                            &gr.product(&y, &g, &fx).unwrap(),
                        )
                        .unwrap(),
                    MapRole::RightDerivation => m
                        .add(
                            &gr.product(&fx, &g, &y).unwrap(),
                            &gr.product(&fy, &g, &x).unwrap(),
                        )
                        .unwrap(),
                    MapRole::Derivation => m
                        .add(
                            &gr.product(&fx, &g, &y).unwrap(),
                            &gr.product(&x, &g, &fy).unwrap(),
                        )
                        .unwrap(),
                    MapRole::Endomorphism => gr.product(&fx, &g, &fy).unwrap(),
                };
                if fxy != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// [f(x), f(y)]_g == [x, y]_g on every full-element triple.
pub fn oracle_scp(gr: &GammaRing, f: &AdditiveMap) -> bool {
    for x in all_elements(gr) {
        for y in all_elements(gr) {
            for g in all_gammas(gr) {
                let fx = f.apply(&x).unwrap();
                let fy = f.apply(&y).unwrap();
                if gr.commutator(&fx, &fy, &g).unwrap() != gr.commutator(&x, &y, &g).unwrap() {
                    return false;
                }
            }
        }
    }
    true
}

/// Full-element associativity over every 5-tuple.
pub fn oracle_associative(gr: &GammaRing) -> bool {
    let ms = all_elements(gr);
    let gs = all_gammas(gr);
    for a in &ms {
        for g1 in &gs {
            for b in &ms {
                for g2 in &gs {
                    for c in &ms {
                        let lhs = gr
                            .product(&gr.product(a, g1, b).unwrap(), g2, c)
                            .unwrap();
                        let rhs = gr
                            .product(a, g1, &gr.product(b, g2, c).unwrap())
                            .unwrap();
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}
