//! Finite abelian groups given as products of cyclic factors, their elements,
//! additive self-maps, and backtracking enumeration of additive maps.

use crate::error::{Error, Result};
use serde::Serialize;

/// Default cap on the order of a group that may be exhaustively enumerated.
pub const DEFAULT_ELEMENT_CAP: u64 = 1 << 16;

/// Default node budget for additive-map backtracking.
pub const DEFAULT_NODE_BUDGET: u64 = 1 << 26;

/// A finite abelian group Z_{d_1} x ... x Z_{d_k}.
///
/// The moduli need not form a divisibility chain; any cyclic decomposition is
/// accepted so that direct products and matrix constructions compose without
/// renormalization. `moduli` empty gives the trivial group of order 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinAbGroup {
    moduli: Vec<u64>,
    order: u64,
}

/// An element of a [`FinAbGroup`]: one coordinate per cyclic factor, each
/// reduced mod its modulus. Ordering is lexicographic on coordinates, which is
/// the canonical enumeration order everywhere in the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Element {
    pub coords: Vec<u64>,
}

impl Element {
    pub fn new(coords: Vec<u64>) -> Self {
        Element { coords }
    }
}

impl FinAbGroup {
    /// Builds the group; every modulus must be at least 2.
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        let mut order: u128 = 1;
        for &d in &moduli {
            if d < 2 {
                return Err(Error::ModulusOutOfRange(d));
            }
            order *= d as u128;
            if order > u64::MAX as u128 {
                return Err(Error::CapExceeded {
                    needed: order,
                    cap: u64::MAX as u128,
                });
            }
        }
        Ok(FinAbGroup {
            moduli,
            order: order as u64,
        })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Number of cyclic factors (generator count).
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn zero(&self) -> Element {
        Element::new(vec![0; self.moduli.len()])
    }

    pub fn is_zero(&self, a: &Element) -> bool {
        a.coords.iter().all(|&c| c == 0)
    }

    /// The i-th canonical generator e_i.
    pub fn generator(&self, i: usize) -> Element {
        let mut coords = vec![0; self.moduli.len()];
        coords[i] = 1;
        Element::new(coords)
    }

    fn check(&self, a: &Element) -> Result<()> {
        if a.coords.len() != self.moduli.len() {
            return Err(Error::ShapeMismatch {
                expected: self.moduli.len(),
                got: a.coords.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        let coords = self
            .moduli
            .iter()
            .zip(a.coords.iter().zip(&b.coords))
            .map(|(&d, (&x, &y))| (x + y) % d)
            .collect();
        Ok(Element::new(coords))
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        let coords = self
            .moduli
            .iter()
            .zip(&a.coords)
            .map(|(&d, &x)| (d - x % d) % d)
            .collect();
        Ok(Element::new(coords))
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// Integer multiple n*a; negative n gives inverses.
    pub fn scale(&self, n: i64, a: &Element) -> Result<Element> {
        self.check(a)?;
        let coords = self
            .moduli
            .iter()
            .zip(&a.coords)
            .map(|(&d, &x)| {
                let r = (n as i128 * x as i128).rem_euclid(d as i128);
                r as u64
            })
            .collect();
        Ok(Element::new(coords))
    }

    /// Lexicographic index of an element (zero has index 0).
    pub fn index_of(&self, a: &Element) -> usize {
        let mut idx: u64 = 0;
        for (&d, &c) in self.moduli.iter().zip(&a.coords) {
            idx = idx * d + c % d;
        }
        idx as usize
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn element_at(&self, mut idx: u64) -> Element {
        let mut coords = vec![0; self.moduli.len()];
        for i in (0..self.moduli.len()).rev() {
            coords[i] = idx % self.moduli[i];
            idx /= self.moduli[i];
        }
        Element::new(coords)
    }

    /// Lazily iterates all elements in lexicographic coordinate order,
    /// starting at zero. No cap is applied; callers that expose exhaustive
    /// enumeration should go through [`enumerate_elements`](Self::enumerate_elements).
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    /// All elements in canonical order, refusing groups larger than `cap`.
    pub fn enumerate_elements(&self, cap: u64) -> Result<Vec<Element>> {
        if self.order > cap {
            return Err(Error::CapExceeded {
                needed: self.order as u128,
                cap: cap as u128,
            });
        }
        Ok(self.elements().collect())
    }
}

/// An additive map between finite abelian groups, stored by generator images.
///
/// Well-definedness (d_i * images[i] = 0 in the codomain) is checked at
/// construction; additivity of the induced map is then automatic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdditiveMap {
    domain: FinAbGroup,
    codomain: FinAbGroup,
    images: Vec<Element>,
}

impl AdditiveMap {
    pub fn new(domain: FinAbGroup, codomain: FinAbGroup, images: Vec<Element>) -> Result<Self> {
        if images.len() != domain.rank() {
            return Err(Error::ShapeMismatch {
                expected: domain.rank(),
                got: images.len(),
            });
        }
        for (i, img) in images.iter().enumerate() {
            let d = domain.moduli()[i];
            let killed = codomain.scale(d as i64, img)?;
            if !codomain.is_zero(&killed) {
                return Err(Error::NotWellDefined { index: i });
            }
        }
        Ok(AdditiveMap {
            domain,
            codomain,
            images,
        })
    }

    pub fn zero(domain: FinAbGroup, codomain: FinAbGroup) -> Self {
        let z = codomain.zero();
        let images = vec![z; domain.rank()];
        AdditiveMap {
            domain,
            codomain,
            images,
        }
    }

    pub fn identity(group: FinAbGroup) -> Self {
        let images = (0..group.rank()).map(|i| group.generator(i)).collect();
        AdditiveMap {
            domain: group.clone(),
            codomain: group,
            images,
        }
    }

    pub fn domain(&self) -> &FinAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FinAbGroup {
        &self.codomain
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.codomain
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, img)| *img == self.domain.generator(i))
    }

    pub fn is_zero_map(&self) -> bool {
        self.images.iter().all(|img| self.codomain.is_zero(img))
    }

    /// f(sum x_i e_i) = sum x_i * images[i].
    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.coords.len() != self.domain.rank() {
            return Err(Error::ShapeMismatch {
                expected: self.domain.rank(),
                got: x.coords.len(),
            });
        }
        apply_images(&self.codomain, &self.images, x)
    }

    /// Pointwise difference of two maps with matching shapes.
    pub fn pointwise_sub(&self, other: &AdditiveMap) -> Result<AdditiveMap> {
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| self.codomain.sub(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(AdditiveMap {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            images,
        })
    }
}

/// Applies generator images to `x`, requiring only that every coordinate of
/// `x` with a nonzero value has an assigned image. Used by the backtracker on
/// assigned prefixes.
pub(crate) fn apply_images(codomain: &FinAbGroup, images: &[Element], x: &Element) -> Result<Element> {
    let mut acc = codomain.zero();
    for (i, &c) in x.coords.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = codomain.scale(c as i64, &images[i])?;
        acc = codomain.add(&acc, &term)?;
    }
    Ok(acc)
}

/// Admissible images for generator `i` of `domain` inside `codomain`:
/// all y with d_i * y = 0, in lexicographic order.
pub fn admissible_images(domain: &FinAbGroup, codomain: &FinAbGroup, i: usize) -> Vec<Element> {
    let d = domain.moduli()[i];
    let choices: Vec<Vec<u64>> = codomain
        .moduli()
        .iter()
        .map(|&c| {
            let g = gcd(c, d);
            let step = c / g;
            (0..g).map(|t| t * step).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0usize; choices.len()];
    loop {
        out.push(Element::new(
            cur.iter().zip(&choices).map(|(&t, ch)| ch[t]).collect(),
        ));
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < choices[pos].len() {
                break;
            }
            cur[pos] = 0;
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Number of additive maps domain -> codomain (product of admissible-image
/// counts per generator).
pub fn additive_map_count(domain: &FinAbGroup, codomain: &FinAbGroup) -> u128 {
    domain
        .moduli()
        .iter()
        .map(|&d| {
            codomain
                .moduli()
                .iter()
                .map(|&c| gcd(c, d) as u128)
                .product::<u128>()
        })
        .product()
}

/// Backtracking enumeration of additive maps domain -> codomain.
///
/// The pruner is invoked after each generator image is fixed with the prefix
/// of assigned images; returning false cuts the whole subtree. With the
/// trivial pruner every additive map is yielded, in lexicographic order over
/// image tuples. Every visited partial assignment counts one node against
/// `node_budget`; exceeding it aborts with `CapExceeded` carrying the node
/// count reached.
pub fn enumerate_additive_maps<P>(
    domain: &FinAbGroup,
    codomain: &FinAbGroup,
    mut pruner: P,
    node_budget: u64,
) -> Result<Vec<AdditiveMap>>
where
    P: FnMut(&[Element]) -> bool,
{
    let k = domain.rank();
    let candidates: Vec<Vec<Element>> = (0..k)
        .map(|i| admissible_images(domain, codomain, i))
        .collect();
    let mut out = Vec::new();
    let mut prefix: Vec<Element> = Vec::with_capacity(k);
    let mut nodes: u64 = 0;
    backtrack(
        domain,
        codomain,
        &candidates,
        &mut pruner,
        node_budget,
        &mut nodes,
        &mut prefix,
        &mut out,
    )?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn backtrack<P>(
    domain: &FinAbGroup,
    codomain: &FinAbGroup,
    candidates: &[Vec<Element>],
    pruner: &mut P,
    node_budget: u64,
    nodes: &mut u64,
    prefix: &mut Vec<Element>,
    out: &mut Vec<AdditiveMap>,
) -> Result<()>
where
    P: FnMut(&[Element]) -> bool,
{
    let depth = prefix.len();
    if depth == candidates.len() {
        out.push(AdditiveMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images: prefix.clone(),
        });
        return Ok(());
    }
    for img in &candidates[depth] {
        *nodes += 1;
        if *nodes > node_budget {
            return Err(Error::CapExceeded {
                needed: *nodes as u128,
                cap: node_budget as u128,
            });
        }
        prefix.push(img.clone());
        if pruner(prefix) {
            backtrack(
                domain, codomain, candidates, pruner, node_budget, nodes, prefix, out,
            )?;
        }
        prefix.pop();
    }
    Ok(())
}

/// Parallel variant partitioning the first generator's image choices across
/// `workers` threads. Membership of the result is identical to the sequential
/// enumeration; the returned vector is sorted into canonical order so callers
/// see a deterministic sequence regardless of worker count.
pub fn enumerate_additive_maps_partitioned<P>(
    domain: &FinAbGroup,
    codomain: &FinAbGroup,
    pruner: &P,
    node_budget: u64,
    workers: usize,
) -> Result<Vec<AdditiveMap>>
where
    P: Fn(&[Element]) -> bool + Sync,
{
    if workers <= 1 || domain.rank() == 0 {
        return enumerate_additive_maps(domain, codomain, |p| pruner(p), node_budget);
    }
    let first = admissible_images(domain, codomain, 0);
    let chunks: Vec<Vec<Element>> = (0..workers)
        .map(|w| {
            first
                .iter()
                .enumerate()
                .filter(|(i, _)| i % workers == w)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect();
    let results: Vec<Result<Vec<AdditiveMap>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| {
                scope.spawn(move || {
                    let mut all = Vec::new();
                    for img in chunk {
                        if !pruner(std::slice::from_ref(img)) {
                            continue;
                        }
                        // Restrict the first choice by rejecting every other image.
                        let maps = enumerate_additive_maps(
                            domain,
                            codomain,
                            |prefix: &[Element]| {
                                if prefix.len() == 1 {
                                    prefix[0] == *img
                                } else {
                                    pruner(prefix)
                                }
                            },
                            node_budget,
                        )?;
                        all.extend(maps);
                    }
                    Ok(all)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut merged = Vec::new();
    for r in results {
        merged.extend(r?);
    }
    merged.sort();
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(moduli: &[u64]) -> FinAbGroup {
        FinAbGroup::new(moduli.to_vec()).unwrap()
    }

    fn el(coords: &[u64]) -> Element {
        Element::new(coords.to_vec())
    }

    #[test]
    fn make_group_examples() {
        assert_eq!(g(&[]).order(), 1);
        assert_eq!(g(&[2, 2]).order(), 4);
        assert_eq!(g(&[2, 4]).order(), 8);
        assert_eq!(
            FinAbGroup::new(vec![2, 1]),
            Err(Error::ModulusOutOfRange(1))
        );
        assert_eq!(
            FinAbGroup::new(vec![0]),
            Err(Error::ModulusOutOfRange(0))
        );
    }

    #[test]
    fn add_examples() {
        let k = g(&[2, 2]);
        assert_eq!(k.add(&el(&[1, 0]), &el(&[1, 1])).unwrap(), el(&[0, 1]));
        let z4 = g(&[4]);
        assert_eq!(z4.add(&el(&[3]), &el(&[2])).unwrap(), el(&[1]));
        let t = g(&[]);
        assert_eq!(t.add(&el(&[]), &el(&[])).unwrap(), el(&[]));
        assert!(matches!(
            k.add(&el(&[1]), &el(&[0, 0])),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn scale_examples() {
        let k = g(&[2, 2]);
        assert_eq!(k.scale(-1, &el(&[1, 0])).unwrap(), el(&[1, 0]));
        let z4 = g(&[4]);
        assert_eq!(z4.scale(3, &el(&[3])).unwrap(), el(&[1]));
        let m = g(&[2, 4]);
        assert_eq!(m.scale(2, &el(&[1, 1])).unwrap(), el(&[0, 2]));
    }

    #[test]
    fn enumerate_elements_examples() {
        assert_eq!(
            g(&[2]).enumerate_elements(16).unwrap(),
            vec![el(&[0]), el(&[1])]
        );
        assert_eq!(
            g(&[2, 2]).enumerate_elements(16).unwrap(),
            vec![el(&[0, 0]), el(&[0, 1]), el(&[1, 0]), el(&[1, 1])]
        );
        assert_eq!(g(&[]).enumerate_elements(16).unwrap(), vec![el(&[])]);
        assert!(matches!(
            g(&[64]).enumerate_elements(16),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn index_roundtrip() {
        let m = g(&[2, 4, 3]);
        for (i, e) in m.elements().enumerate() {
            assert_eq!(m.index_of(&e), i);
            assert_eq!(m.element_at(i as u64), e);
        }
    }

    #[test]
    fn make_additive_map_examples() {
        let m = g(&[2, 4]);
        let f = AdditiveMap::new(m.clone(), m.clone(), vec![el(&[0, 2]), el(&[1, 1])]).unwrap();
        assert_eq!(f.apply(&el(&[1, 1])).unwrap(), el(&[1, 3]));

        assert_eq!(
            AdditiveMap::new(m.clone(), m.clone(), vec![el(&[0, 1]), el(&[0, 0])]),
            Err(Error::NotWellDefined { index: 0 })
        );

        let z2 = g(&[2]);
        let zero = AdditiveMap::new(z2.clone(), z2.clone(), vec![el(&[0])]).unwrap();
        assert!(zero.is_zero_map());
    }

    /// Independent additivity oracle: counts maps (given by raw image tuples
    /// over the whole codomain) that pass an exhaustive additivity test.
    fn count_additive_maps_brute(domain: &FinAbGroup, codomain: &FinAbGroup) -> u64 {
        let k = domain.rank();
        let cod: Vec<Element> = codomain.elements().collect();
        let elems: Vec<Element> = domain.elements().collect();
        let mut count = 0;
        let total = (cod.len() as u64).pow(k as u32);
        for t in 0..total {
            let mut idx = t;
            let mut images = Vec::with_capacity(k);
            for _ in 0..k {
                images.push(cod[(idx % cod.len() as u64) as usize].clone());
                idx /= cod.len() as u64;
            }
            // f(x) = sum x_i images[i]; additive iff well-defined on each factor.
            let f = |x: &Element| apply_images(codomain, &images, x).unwrap();
            let mut ok = true;
            'outer: for a in &elems {
                for b in &elems {
                    let s = domain.add(a, b).unwrap();
                    if f(&s) != codomain.add(&f(a), &f(b)).unwrap() {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn enumerate_additive_maps_counts() {
        let z2 = g(&[2]);
        let maps = enumerate_additive_maps(&z2, &z2, |_| true, 1 << 20).unwrap();
        assert_eq!(maps.len(), 2);
        assert!(maps[0].is_zero_map());
        assert!(maps[1].is_identity());

        let k = g(&[2, 2]);
        let maps = enumerate_additive_maps(&k, &k, |_| true, 1 << 20).unwrap();
        assert_eq!(maps.len(), 16);
        assert_eq!(count_additive_maps_brute(&k, &k), 16);

        let m = g(&[2, 4]);
        let maps = enumerate_additive_maps(&m, &m, |_| true, 1 << 20).unwrap();
        assert_eq!(maps.len(), 32);
        assert_eq!(count_additive_maps_brute(&m, &m), 32);
        assert_eq!(additive_map_count(&m, &m), 32);
    }

    #[test]
    fn enumerated_maps_are_additive() {
        let m = g(&[2, 4]);
        for f in enumerate_additive_maps(&m, &m, |_| true, 1 << 20).unwrap() {
            for a in m.elements() {
                for b in m.elements() {
                    let s = m.add(&a, &b).unwrap();
                    assert_eq!(
                        f.apply(&s).unwrap(),
                        m.add(&f.apply(&a).unwrap(), &f.apply(&b).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn enumeration_budget_aborts() {
        let m = g(&[2, 4]);
        assert!(matches!(
            enumerate_additive_maps(&m, &m, |_| true, 3),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn pruner_cuts_subtrees() {
        let k = g(&[2, 2]);
        // Keep only maps whose first image is zero: 4 of 16.
        let maps = enumerate_additive_maps(
            &k,
            &k,
            |p: &[Element]| p.len() != 1 || p[0].coords == [0, 0],
            1 << 20,
        )
        .unwrap();
        assert_eq!(maps.len(), 4);
    }

    #[test]
    fn partitioned_enumeration_matches_sequential() {
        let m = g(&[2, 4]);
        let seq = enumerate_additive_maps(&m, &m, |_| true, 1 << 20).unwrap();
        for workers in [1, 2, 3, 4] {
            let par =
                enumerate_additive_maps_partitioned(&m, &m, &|_: &[Element]| true, 1 << 20, workers)
                    .unwrap();
            assert_eq!(par, seq, "workers={workers}");
        }
    }

    #[test]
    fn trivial_group_has_one_map() {
        let t = g(&[]);
        let maps = enumerate_additive_maps(&t, &t, |_| true, 1 << 10).unwrap();
        assert_eq!(maps.len(), 1);
        assert_eq!(maps[0].apply(&el(&[])).unwrap(), el(&[]));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_group() -> impl Strategy<Value = FinAbGroup> {
            proptest::collection::vec(2u64..=4, 0..=3)
                .prop_map(|m| FinAbGroup::new(m).unwrap())
        }

        proptest! {
            #[test]
            fn group_axioms_exhaustive(grp in small_group()) {
                // Orders here are at most 64.
                let elems: Vec<Element> = grp.elements().collect();
                let zero = grp.zero();
                for a in &elems {
                    prop_assert_eq!(grp.add(a, &zero).unwrap(), a.clone());
                    let na = grp.neg(a).unwrap();
                    prop_assert_eq!(grp.add(a, &na).unwrap(), zero.clone());
                    for b in &elems {
                        prop_assert_eq!(grp.add(a, b).unwrap(), grp.add(b, a).unwrap());
                        for c in &elems {
                            let ab_c = grp.add(&grp.add(a, b).unwrap(), c).unwrap();
                            let a_bc = grp.add(a, &grp.add(b, c).unwrap()).unwrap();
                            prop_assert_eq!(ab_c, a_bc);
                        }
                    }
                }
            }

            #[test]
            fn scale_is_repeated_addition(grp in small_group(), n in -8i64..=8) {
                for a in grp.elements() {
                    let mut acc = grp.zero();
                    let step = if n >= 0 { a.clone() } else { grp.neg(&a).unwrap() };
                    for _ in 0..n.unsigned_abs() {
                        acc = grp.add(&acc, &step).unwrap();
                    }
                    prop_assert_eq!(grp.scale(n, &a).unwrap(), acc);
                }
            }
        }
    }
}
