//! Built-in constructions and generators: wrapping associative rings as
//! gamma-rings, rectangular matrix instances, direct products, the finite
//! analog of the motivating example, and seeded random recipes.

use crate::abelian::{AdditiveMap, Element, FinAbGroup, DEFAULT_ELEMENT_CAP};
use crate::error::{Error, Result};
use crate::gammaring::GammaRing;
use crate::structure::subgroup_generated;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// An associative ring presented by structure constants: additive group plus
/// the products of generators e_i * e_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    group: FinAbGroup,
    /// mul[i][k] = e_i * e_k.
    mul: Vec<Vec<Element>>,
    unit: Option<Element>,
    name: String,
}

impl RingSpec {
    /// Checks well-definedness of the multiplication table and associativity
    /// on generator triples.
    pub fn new(
        group: FinAbGroup,
        mul: Vec<Vec<Element>>,
        unit: Option<Element>,
        name: impl Into<String>,
    ) -> Result<Self> {
        let k = group.rank();
        if mul.len() != k || mul.iter().any(|row| row.len() != k) {
            return Err(Error::TensorShapeMismatch);
        }
        for (i, row) in mul.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                for &d in &[group.moduli()[i], group.moduli()[j]] {
                    if !group.is_zero(&group.scale(d as i64, entry)?) {
                        return Err(Error::TensorNotWellDefined { i, j: 0, k: j });
                    }
                }
            }
        }
        let spec = RingSpec {
            group,
            mul,
            unit,
            name: name.into(),
        };
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let ei = spec.group.generator(i);
                    let ej = spec.group.generator(j);
                    let el = spec.group.generator(l);
                    let lhs = spec.multiply(&spec.multiply(&ei, &ej)?, &el)?;
                    let rhs = spec.multiply(&ei, &spec.multiply(&ej, &el)?)?;
                    if lhs != rhs {
                        return Err(Error::TensorNotWellDefined { i, j, k: l });
                    }
                }
            }
        }
        Ok(spec)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn unit(&self) -> Option<&Element> {
        self.unit.as_ref()
    }

    /// Bilinear extension of the generator table.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        let mut acc = self.group.zero();
        for (i, &xi) in x.coords.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.coords.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let term = self.group.scale((xi * yj) as i64, &self.mul[i][j])?;
                acc = self.group.add(&acc, &term)?;
            }
        }
        Ok(acc)
    }

    /// The ring Z_q.
    pub fn zn(q: u64) -> Result<Self> {
        let g = FinAbGroup::new(vec![q])?;
        let mul = vec![vec![Element::new(vec![1])]];
        RingSpec::new(g, mul, Some(Element::new(vec![1])), format!("z{q}"))
    }

    /// Dual numbers Z_q[t]/(t^2), basis {1, t}.
    pub fn dual_numbers(q: u64) -> Result<Self> {
        let g = FinAbGroup::new(vec![q, q])?;
        let e = |a: u64, b: u64| Element::new(vec![a, b]);
        let mul = vec![
            vec![e(1, 0), e(0, 1)],
            vec![e(0, 1), e(0, 0)],
        ];
        RingSpec::new(g, mul, Some(e(1, 0)), format!("dual{q}"))
    }
}

/// How to pick Gamma when wrapping a ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaChoice {
    /// Gamma = the whole additive group of R, product a alpha b = a*alpha*b.
    WholeRing,
    /// Gamma = the additive subgroup generated by the given seeds.
    Subgroup(Vec<Element>),
    /// Gamma = Z_n with product a k b = k*(a*b).
    Zn(u64),
}

/// Wraps an associative ring as a gamma-ring. For `WholeRing` and `Subgroup`
/// the tensor holds ring triple products; for `Zn(n)` it holds scaled pair
/// products. Associativity is inherited but re-validated by the caller's
/// first analysis op.
pub fn ring_as_gamma_ring(r: &RingSpec, gamma: &GammaChoice) -> Result<GammaRing> {
    let m = r.group().clone();
    let km = m.rank();
    match gamma {
        GammaChoice::WholeRing => {
            let g = m.clone();
            let mut tensor = vec![vec![vec![m.zero(); km]; km]; km];
            for i in 0..km {
                for j in 0..km {
                    for k in 0..km {
                        let ij = r.multiply(&m.generator(i), &m.generator(j))?;
                        tensor[i][j][k] = r.multiply(&ij, &m.generator(k))?;
                    }
                }
            }
            GammaRing::build(m, g, tensor, Some(format!("{}-whole", r.name())))
        }
        GammaChoice::Subgroup(seeds) => {
            let sub = subgroup_generated(&m, seeds, DEFAULT_ELEMENT_CAP)?;
            // Gamma is presented by the subgroup's generating list; each
            // generator keeps its order in the parent group.
            let gens: Vec<Element> = sub.generators().to_vec();
            let orders: Vec<u64> = gens
                .iter()
                .map(|e| element_order(&m, e))
                .collect::<Result<Vec<_>>>()?;
            let g = FinAbGroup::new(orders)?;
            let kg = g.rank();
            let mut tensor = vec![vec![vec![m.zero(); km]; kg]; km];
            for i in 0..km {
                for (j, gj) in gens.iter().enumerate() {
                    for k in 0..km {
                        let ij = r.multiply(&m.generator(i), gj)?;
                        tensor[i][j][k] = r.multiply(&ij, &m.generator(k))?;
                    }
                }
            }
            GammaRing::build(m, g, tensor, Some(format!("{}-sub", r.name())))
        }
        GammaChoice::Zn(n) => {
            let g = FinAbGroup::new(vec![*n])?;
            let mut tensor = vec![vec![vec![m.zero(); km]; 1]; km];
            for i in 0..km {
                for k in 0..km {
                    tensor[i][0][k] = r.multiply(&m.generator(i), &m.generator(k))?;
                }
            }
            GammaRing::build(m, g, tensor, Some(format!("{}-z{n}", r.name())))
        }
    }
}

fn element_order(group: &FinAbGroup, e: &Element) -> Result<u64> {
    let mut n = 1u64;
    let mut acc = e.clone();
    while !group.is_zero(&acc) {
        acc = group.add(&acc, e)?;
        n += 1;
    }
    Ok(n)
}

/// M = m x n matrices over Z_q, Gamma = n x m matrices, product = matrix
/// triple product. Generators are matrix units in row-major order.
pub fn rect_matrix_instance(m: usize, n: usize, q: u64) -> Result<GammaRing> {
    if m < 1 || n < 1 || q < 2 {
        return Err(Error::ModulusOutOfRange(q.min(1)));
    }
    let km = m * n;
    let kg = n * m;
    let order: u128 = (q as u128).pow(km as u32);
    if order > DEFAULT_ELEMENT_CAP as u128 {
        return Err(Error::CapExceeded {
            needed: order,
            cap: DEFAULT_ELEMENT_CAP as u128,
        });
    }
    let mg = FinAbGroup::new(vec![q; km])?;
    let gg = FinAbGroup::new(vec![q; kg])?;
    // M-unit index (r, c) with r < m, c < n at r*n + c; Gamma-unit (r, c)
    // with r < n, c < m at r*m + c. E_{rc} F_{st} E_{uv} = [c==s][t==u] E_{rv}.
    let mut tensor = vec![vec![vec![mg.zero(); km]; kg]; km];
    for r in 0..m {
        for c in 0..n {
            for s in 0..n {
                for t in 0..m {
                    for u in 0..m {
                        for v in 0..n {
                            if c == s && t == u {
                                let mut coords = vec![0u64; km];
                                coords[r * n + v] = 1;
                                tensor[r * n + c][s * m + t][u * n + v] =
                                    Element::new(coords);
                            }
                        }
                    }
                }
            }
        }
    }
    GammaRing::build(mg, gg, tensor, Some(format!("rect{m}{n}{q}")))
}

/// Componentwise direct product: M = M1 x M2, Gamma = Gamma1 x Gamma2, cross
/// terms zero. Never prime when both factors have nonzero products.
pub fn direct_product(a: &GammaRing, b: &GammaRing) -> Result<GammaRing> {
    let m1 = a.m_group();
    let m2 = b.m_group();
    let g1 = a.g_group();
    let g2 = b.g_group();
    let mut m_moduli = m1.moduli().to_vec();
    m_moduli.extend_from_slice(m2.moduli());
    let mut g_moduli = g1.moduli().to_vec();
    g_moduli.extend_from_slice(g2.moduli());
    let m = FinAbGroup::new(m_moduli)?;
    let g = FinAbGroup::new(g_moduli)?;
    let km1 = m1.rank();
    let kg1 = g1.rank();
    let km = m.rank();
    let kg = g.rank();
    let embed1 = |e: &Element| {
        let mut coords = e.coords.clone();
        coords.extend(vec![0; km - km1]);
        Element::new(coords)
    };
    let embed2 = |e: &Element| {
        let mut coords = vec![0; km1];
        coords.extend_from_slice(&e.coords);
        Element::new(coords)
    };
    let mut tensor = vec![vec![vec![m.zero(); km]; kg]; km];
    for i in 0..km {
        for j in 0..kg {
            for k in 0..km {
                let first = i < km1 && j < kg1 && k < km1;
                let second = i >= km1 && j >= kg1 && k >= km1;
                if first {
                    tensor[i][j][k] = embed1(a.tensor_entry(i, j, k));
                } else if second {
                    tensor[i][j][k] =
                        embed2(b.tensor_entry(i - km1, j - kg1, k - km1));
                }
            }
        }
    }
    let name = format!(
        "{}x{}",
        a.name().unwrap_or("anon"),
        b.name().unwrap_or("anon")
    );
    GammaRing::build(m, g, tensor, Some(name))
}

/// Strictly upper-triangular 3x3 matrices over Z_q with scalar Gamma = Z_q:
/// generators E12, E13, E23, the only nonzero generator product being
/// E12 * 1 * E23 = E13. Noncommutative, non-semiprime (E13 is a semiprime
/// witness since all 5-factor chains vanish), and it carries left derivations
/// with non-central image (e.g. E12 -> E12), so it separates the theorems
/// from their semiprimeness hypotheses.
pub fn nilpotent_instance(q: u64) -> Result<GammaRing> {
    let m = FinAbGroup::new(vec![q, q, q])?;
    let g = FinAbGroup::new(vec![q])?;
    let mut tensor = vec![vec![vec![m.zero(); 3]; 1]; 3];
    tensor[0][0][2] = Element::new(vec![0, 1, 0]);
    GammaRing::build(m, g, tensor, Some(format!("nilpotent3-{q}")))
}

/// The gamma-ring Z_2 (M = Gamma = Z_2, 1*1*1 = 1).
pub fn z2_instance() -> GammaRing {
    let r = RingSpec::zn(2).unwrap();
    ring_as_gamma_ring(&r, &GammaChoice::WholeRing)
        .unwrap()
        .with_name("z2")
}

/// Dual numbers Z_2[t]/(t^2) with Gamma = Z_2; carries four left derivations.
pub fn dual_numbers_instance() -> GammaRing {
    let r = RingSpec::dual_numbers(2).unwrap();
    ring_as_gamma_ring(&r, &GammaChoice::Zn(2))
        .unwrap()
        .with_name("dual2")
}

/// The ring M_2(F_2) x F_4 with F_4 = Z_2[x]/(x^2+x+1) in the basis {1, x}.
/// Generator order: E11, E12, E21, E22, 1_F4, x.
fn matrix2_f4_ring() -> RingSpec {
    let g = FinAbGroup::new(vec![2; 6]).unwrap();
    let zero = g.zero();
    let unit = |i: usize| {
        let mut c = vec![0u64; 6];
        c[i] = 1;
        Element::new(c)
    };
    let mut mul = vec![vec![zero.clone(); 6]; 6];
    // Matrix units E_{ab} at index a*2+b: E_{ab} E_{cd} = [b==c] E_{ad}.
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    if b == c {
                        mul[a * 2 + b][c * 2 + d] = unit(a * 2 + d);
                    }
                }
            }
        }
    }
    // Field part: 1*1 = 1, 1*x = x*1 = x, x*x = 1 + x.
    mul[4][4] = unit(4);
    mul[4][5] = unit(5);
    mul[5][4] = unit(5);
    mul[5][5] = Element::new(vec![0, 0, 0, 0, 1, 1]);
    let one = Element::new(vec![1, 0, 0, 1, 1, 0]);
    RingSpec::new(g, mul, Some(one), "m2f2xf4").unwrap()
}

/// Finite analog of the motivating example: M = M_2(F_2) x F_4 with Gamma
/// the additive subgroup M_2(F_2) x F_2, and sigma = identity on the matrix
/// component, Frobenius a -> a^2 on the field component.
///
/// Shipped guarantees (exercised in tests): sigma is a non-identity
/// endomorphism, strong commutativity preserving, sigma - id maps into the
/// center, and the instance is semiprime, noncommutative, and not prime.
pub fn paper_example_analog() -> (GammaRing, AdditiveMap) {
    let r = matrix2_f4_ring();
    let seeds: Vec<Element> = (0..5)
        .map(|i| {
            let mut c = vec![0u64; 6];
            c[i] = 1;
            Element::new(c)
        })
        .collect();
    let gr = ring_as_gamma_ring(&r, &GammaChoice::Subgroup(seeds))
        .unwrap()
        .with_name("paper-analog");
    let m = gr.m_group().clone();
    let mut images: Vec<Element> = (0..6).map(|i| m.generator(i)).collect();
    // Frobenius on F_4: x -> x^2 = 1 + x.
    images[5] = Element::new(vec![0, 0, 0, 0, 1, 1]);
    let sigma = AdditiveMap::new(m.clone(), m, images).unwrap();
    (gr, sigma)
}

/// Names and instances of every built-in the test-suite and the theorem
/// verifiers run over.
pub fn builtin_suite() -> Vec<(String, GammaRing)> {
    let rect12 = rect_matrix_instance(1, 2, 2).unwrap();
    let z2 = z2_instance();
    vec![
        ("z2".into(), z2.clone()),
        ("dual2".into(), dual_numbers_instance()),
        ("rect122".into(), rect12.clone()),
        ("rect212".into(), rect_matrix_instance(2, 1, 2).unwrap()),
        ("z2xz2".into(), direct_product(&z2, &z2).unwrap()),
        (
            "rect122xz2".into(),
            direct_product(&rect12, &z2).unwrap(),
        ),
        ("paper-analog".into(), paper_example_analog().0),
    ]
}

/// A validated instance sampled from the recipe space (never raw random
/// tensors), bit-reproducible from the seed.
pub fn random_instance(seed: u64) -> GammaRing {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = rng.gen_range(0..6u32);
    let gr = match kind {
        0 => {
            let m = rng.gen_range(1..=2usize);
            let n = rng.gen_range(1..=2usize);
            let q = [2u64, 3][rng.gen_range(0..2usize)];
            rect_matrix_instance(m, n, q).unwrap()
        }
        1 => {
            let q = [2u64, 3, 4][rng.gen_range(0..3usize)];
            let r = RingSpec::zn(q).unwrap();
            ring_as_gamma_ring(&r, &GammaChoice::WholeRing).unwrap()
        }
        2 => {
            let q = [2u64, 3][rng.gen_range(0..2usize)];
            let r = RingSpec::dual_numbers(q).unwrap();
            ring_as_gamma_ring(&r, &GammaChoice::Zn(q)).unwrap()
        }
        3 => {
            let q = [2u64, 3][rng.gen_range(0..2usize)];
            let r = RingSpec::zn(q).unwrap();
            let a = ring_as_gamma_ring(&r, &GammaChoice::WholeRing).unwrap();
            let n = rng.gen_range(1..=2usize);
            let b = rect_matrix_instance(1, n, q).unwrap();
            direct_product(&a, &b).unwrap()
        }
        4 => {
            let q = [2u64, 3][rng.gen_range(0..2usize)];
            let r = RingSpec::dual_numbers(q).unwrap();
            let a = ring_as_gamma_ring(&r, &GammaChoice::Zn(q)).unwrap();
            let b = z2_instance();
            direct_product(&a, &b).unwrap()
        }
        _ => {
            let q = [2u64, 3][rng.gen_range(0..2usize)];
            nilpotent_instance(q).unwrap()
        }
    };
    debug_assert!(gr.is_associative());
    gr.with_name(format!("random-{seed}"))
}

/// CLI-facing recipe constructor.
///
/// Recipes: `z2` | `zq <q>` | `dual <q>` | `rect <m> <n> <q>` |
/// `nilpotent <q>` | `paper-analog` | `prod-z2-z2` | `prod-rect122-z2` |
/// `random <seed>`.
pub fn by_recipe(name: &str, params: &[u64]) -> Result<GammaRing> {
    let wrong_arity = |expected: usize| Error::Parse {
        line: 0,
        reason: format!(
            "recipe {name} expects {expected} parameter(s), got {}",
            params.len()
        ),
    };
    match name {
        "z2" => {
            if !params.is_empty() {
                return Err(wrong_arity(0));
            }
            Ok(z2_instance())
        }
        "zq" => {
            if params.len() != 1 {
                return Err(wrong_arity(1));
            }
            let r = RingSpec::zn(params[0])?;
            ring_as_gamma_ring(&r, &GammaChoice::WholeRing)
        }
        "dual" => {
            if params.len() != 1 {
                return Err(wrong_arity(1));
            }
            let r = RingSpec::dual_numbers(params[0])?;
            ring_as_gamma_ring(&r, &GammaChoice::Zn(params[0]))
        }
        "rect" => {
            if params.len() != 3 {
                return Err(wrong_arity(3));
            }
            rect_matrix_instance(params[0] as usize, params[1] as usize, params[2])
        }
        "nilpotent" => {
            if params.len() != 1 {
                return Err(wrong_arity(1));
            }
            nilpotent_instance(params[0])
        }
        "paper-analog" => {
            if !params.is_empty() {
                return Err(wrong_arity(0));
            }
            Ok(paper_example_analog().0)
        }
        "prod-z2-z2" => direct_product(&z2_instance(), &z2_instance()),
        "prod-rect122-z2" => {
            direct_product(&rect_matrix_instance(1, 2, 2)?, &z2_instance())
        }
        "random" => {
            if params.len() != 1 {
                return Err(wrong_arity(1));
            }
            Ok(random_instance(params[0]))
        }
        _ => Err(Error::Parse {
            line: 0,
            reason: format!("unknown recipe: {name}"),
        }),
    }
}
