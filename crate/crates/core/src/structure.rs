//! Structural predicates and subobjects: center, commutativity, primeness,
//! semiprimeness, ideals, generated subgroups.

use crate::abelian::{Element, FinAbGroup, DEFAULT_ELEMENT_CAP};
use crate::error::{Error, Result};
use crate::gammaring::{GammaRing, OpTable, DEFAULT_TABLE_CAP};
use crate::report::{VerdictReport, Witness};
use std::collections::BTreeSet;

/// An additive subgroup of a [`FinAbGroup`]: the full (sorted) element set
/// plus a minimal-by-construction generating list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: FinAbGroup,
    elements: Vec<Element>,
    generators: Vec<Element>,
}

impl Subgroup {
    pub fn parent(&self) -> &FinAbGroup {
        &self.parent
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    pub fn is_whole_group(&self) -> bool {
        self.elements.len() as u64 == self.parent.order()
    }
}

/// Closure of `seeds` under addition, in deterministic (sorted) element order.
/// Generators keep only seeds not already generated by their predecessors.
pub fn subgroup_generated(
    group: &FinAbGroup,
    seeds: &[Element],
    cap: u64,
) -> Result<Subgroup> {
    if group.order() > cap {
        return Err(Error::CapExceeded {
            needed: group.order() as u128,
            cap: cap as u128,
        });
    }
    let mut closure: BTreeSet<Element> = BTreeSet::new();
    closure.insert(group.zero());
    let mut generators: Vec<Element> = Vec::new();
    for seed in seeds {
        if closure.contains(seed) {
            continue;
        }
        generators.push(seed.clone());
        // Closing a finite set under addition also closes it under negation.
        let mut frontier: Vec<Element> = vec![seed.clone()];
        while let Some(x) = frontier.pop() {
            if !closure.insert(x.clone()) {
                continue;
            }
            let snapshot: Vec<Element> = closure.iter().cloned().collect();
            for y in &snapshot {
                let s = group.add(&x, y)?;
                if !closure.contains(&s) {
                    frontier.push(s);
                }
            }
        }
    }
    Ok(Subgroup {
        parent: group.clone(),
        elements: closure.into_iter().collect(),
        generators,
    })
}

/// Centrality of a single element by the generator criterion:
/// [a, e_k]_{f_j} = 0 for all generator pairs, sufficient by biadditivity.
pub fn is_central(gr: &GammaRing, a: &Element) -> Result<bool> {
    let m = gr.m_group();
    for j in 0..gr.g_group().rank() {
        let fj = gr.g_group().generator(j);
        for k in 0..m.rank() {
            let ek = m.generator(k);
            if !m.is_zero(&gr.commutator(a, &ek, &fj)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The center Z(M) = { a : a alpha b = b alpha a for all b, alpha }, computed
/// by the generator criterion per element.
pub fn center(gr: &GammaRing, cap: u64) -> Result<Subgroup> {
    gr.ensure_validated()?;
    let m = gr.m_group();
    if m.order() > cap {
        return Err(Error::CapExceeded {
            needed: m.order() as u128,
            cap: cap as u128,
        });
    }
    let mut central: Vec<Element> = Vec::new();
    for a in m.elements() {
        if is_central(gr, &a)? {
            central.push(a);
        }
    }
    // The center is a subgroup; pick greedy generators in canonical order.
    subgroup_generated(m, &central, cap)
}

pub fn center_default(gr: &GammaRing) -> Result<Subgroup> {
    center(gr, DEFAULT_ELEMENT_CAP)
}

/// True iff all generator-pair commutators vanish.
pub fn is_commutative(gr: &GammaRing) -> Result<VerdictReport> {
    gr.ensure_validated()?;
    let m = gr.m_group();
    let g = gr.g_group();
    let mut checked = 0u64;
    for i in 0..m.rank() {
        for k in 0..m.rank() {
            for j in 0..g.rank() {
                checked += 1;
                let c = gr.commutator(&m.generator(i), &m.generator(k), &g.generator(j))?;
                if !m.is_zero(&c) {
                    let w = Witness::new("noncommuting generators")
                        .with("a", &m.generator(i))
                        .with("b", &m.generator(k))
                        .with("alpha", &g.generator(j))
                        .with("commutator", &c);
                    return Ok(VerdictReport::fail(w).count("pairs_checked", checked));
                }
            }
        }
    }
    Ok(VerdictReport::pass().count("pairs_checked", checked))
}

/// For each a, the set of indices { a alpha m : alpha, m } as a membership
/// bitmap. Turns the (semi)primeness triple loop into cheap probes.
fn left_product_row(t: &OpTable, a: usize) -> Vec<bool> {
    let mut row = vec![false; t.m_order()];
    for j in 0..t.g_order() {
        for m in 0..t.m_order() {
            row[t.prod(a, j, m)] = true;
        }
    }
    row
}

/// Semiprime: a Gamma M Gamma a = 0 implies a = 0. Witness on failure is the
/// first (canonical order) nonzero annihilated element.
pub fn is_semiprime(gr: &GammaRing, table_cap: u64) -> Result<VerdictReport> {
    gr.ensure_validated()?;
    let t = OpTable::build(gr, table_cap)?;
    let m = gr.m_group();
    let mut checked = 0u64;
    for a in 1..t.m_order() {
        checked += 1;
        let row = left_product_row(&t, a);
        let mut survives = false;
        'probe: for (x, &hit) in row.iter().enumerate() {
            if !hit {
                continue;
            }
            for j in 0..t.g_order() {
                if t.prod(x, j, a) != 0 {
                    survives = true;
                    break 'probe;
                }
            }
        }
        if !survives {
            let w = Witness::new("a with a.Gamma.M.Gamma.a = 0")
                .with("a", &m.element_at(a as u64));
            return Ok(VerdictReport::fail(w).count("elements_checked", checked));
        }
    }
    Ok(VerdictReport::pass().count("elements_checked", checked))
}

/// Prime: a Gamma M Gamma b = 0 implies a = 0 or b = 0. Witness is the
/// lexicographically least offending pair.
pub fn is_prime(gr: &GammaRing, table_cap: u64) -> Result<VerdictReport> {
    gr.ensure_validated()?;
    let t = OpTable::build(gr, table_cap)?;
    let m = gr.m_group();
    let mut checked = 0u64;
    for a in 1..t.m_order() {
        let row = left_product_row(&t, a);
        let hits: Vec<usize> = (0..t.m_order()).filter(|&x| row[x]).collect();
        for b in 1..t.m_order() {
            checked += 1;
            let mut survives = false;
            'probe: for &x in &hits {
                for j in 0..t.g_order() {
                    if t.prod(x, j, b) != 0 {
                        survives = true;
                        break 'probe;
                    }
                }
            }
            if !survives {
                let w = Witness::new("pair with a.Gamma.M.Gamma.b = 0")
                    .with("a", &m.element_at(a as u64))
                    .with("b", &m.element_at(b as u64));
                return Ok(VerdictReport::fail(w).count("pairs_checked", checked));
            }
        }
    }
    Ok(VerdictReport::pass().count("pairs_checked", checked))
}

pub fn is_semiprime_default(gr: &GammaRing) -> Result<VerdictReport> {
    is_semiprime(gr, DEFAULT_TABLE_CAP)
}

pub fn is_prime_default(gr: &GammaRing) -> Result<VerdictReport> {
    is_prime(gr, DEFAULT_TABLE_CAP)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealSide {
    Left,
    Right,
    TwoSided,
}

/// Ideal test on generators: every product of generators of M, Gamma, and U
/// lands in U (sufficient by multi-additivity and closure of U).
pub fn is_ideal(gr: &GammaRing, u: &Subgroup, side: IdealSide) -> Result<VerdictReport> {
    gr.ensure_validated()?;
    if let IdealSide::TwoSided = side {
        let mut left = is_ideal(gr, u, IdealSide::Left)?;
        let right = is_ideal(gr, u, IdealSide::Right)?;
        left.absorb(right);
        return Ok(left);
    }
    let m = gr.m_group();
    let g = gr.g_group();
    let mut checked = 0u64;
    for i in 0..m.rank() {
        let ei = m.generator(i);
        for j in 0..g.rank() {
            let fj = g.generator(j);
            for ug in u.generators() {
                checked += 1;
                let prod = match side {
                    IdealSide::Left => gr.product(&ei, &fj, ug)?,
                    IdealSide::Right => gr.product(ug, &fj, &ei)?,
                    IdealSide::TwoSided => unreachable!(),
                };
                if !u.contains(&prod) {
                    let w = Witness::new("product escaping the subgroup")
                        .with("m_generator", &ei)
                        .with("gamma_generator", &fj)
                        .with("u_generator", ug)
                        .with("product", &prod);
                    return Ok(VerdictReport::fail(w).count("products_checked", checked));
                }
            }
        }
    }
    Ok(VerdictReport::pass().count("products_checked", checked))
}
