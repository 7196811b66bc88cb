//! Map classes of the theory: left/right derivations, derivations,
//! endomorphisms, strong commutativity preservation, and their enumeration by
//! constraint-scheduled backtracking over generator images.

use crate::abelian::{
    apply_images, AdditiveMap, Element, FinAbGroup, DEFAULT_NODE_BUDGET,
};
use crate::error::{Error, Result};
use crate::gammaring::GammaRing;
use crate::report::{VerdictReport, Witness};
use crate::structure::{is_central, Subgroup};
use serde::Serialize;

/// Defining identities an additive self-map may satisfy. Roles are
/// predicates, not exclusive: one map may hold several.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MapRole {
    /// delta(x alpha y) = x alpha delta(y) + y alpha delta(x)
    LeftDerivation,
    /// delta(x alpha y) = delta(y) alpha x + delta(x) alpha y
    RightDerivation,
    /// mu(x alpha y) = mu(x) alpha y + x alpha mu(y)
    Derivation,
    /// mu(x alpha y) = mu(x) alpha mu(y)
    Endomorphism,
    /// no identity beyond additivity
    AdditiveOnly,
}

impl MapRole {
    pub const ALL: [MapRole; 5] = [
        MapRole::LeftDerivation,
        MapRole::RightDerivation,
        MapRole::Derivation,
        MapRole::Endomorphism,
        MapRole::AdditiveOnly,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MapRole::LeftDerivation => "left_derivation",
            MapRole::RightDerivation => "right_derivation",
            MapRole::Derivation => "derivation",
            MapRole::Endomorphism => "endomorphism",
            MapRole::AdditiveOnly => "additive_only",
        }
    }
}

impl std::str::FromStr for MapRole {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left_derivation" | "left-derivation" => Ok(MapRole::LeftDerivation),
            "right_derivation" | "right-derivation" => Ok(MapRole::RightDerivation),
            "derivation" => Ok(MapRole::Derivation),
            "endomorphism" => Ok(MapRole::Endomorphism),
            "additive_only" | "additive-only" => Ok(MapRole::AdditiveOnly),
            other => Err(Error::Parse {
                line: 0,
                reason: format!("unknown map role: {other}"),
            }),
        }
    }
}

fn check_self_map(gr: &GammaRing, f: &AdditiveMap) -> Result<()> {
    if f.domain() != gr.m_group() || f.codomain() != gr.m_group() {
        return Err(Error::ShapeMismatch {
            expected: gr.m_group().rank(),
            got: f.domain().rank(),
        });
    }
    Ok(())
}

/// Defining-identity residual of `role` at (x, alpha, y); zero means the
/// identity holds there. Residuals are additive in each slot once f is
/// additive, so generator triples suffice for the global check.
pub fn role_residual(
    gr: &GammaRing,
    f: &AdditiveMap,
    role: MapRole,
    x: &Element,
    alpha: &Element,
    y: &Element,
) -> Result<Element> {
    let m = gr.m_group();
    let fxy = f.apply(&gr.product(x, alpha, y)?)?;
    let rhs = match role {
        MapRole::LeftDerivation => m.add(
            &gr.product(x, alpha, &f.apply(y)?)?,
            &gr.product(y, alpha, &f.apply(x)?)?,
        )?,
        MapRole::RightDerivation => m.add(
            &gr.product(&f.apply(y)?, alpha, x)?,
            &gr.product(&f.apply(x)?, alpha, y)?,
        )?,
        MapRole::Derivation => m.add(
            &gr.product(&f.apply(x)?, alpha, y)?,
            &gr.product(x, alpha, &f.apply(y)?)?,
        )?,
        MapRole::Endomorphism => gr.product(&f.apply(x)?, alpha, &f.apply(y)?)?,
        MapRole::AdditiveOnly => fxy.clone(),
    };
    m.sub(&fxy, &rhs)
}

/// Role check over all generator triples (e_i, f_j, e_k).
pub fn check_role(gr: &GammaRing, f: &AdditiveMap, role: MapRole) -> Result<VerdictReport> {
    gr.ensure_validated()?;
    check_self_map(gr, f)?;
    if role == MapRole::AdditiveOnly {
        return Ok(VerdictReport::pass());
    }
    let m = gr.m_group();
    let g = gr.g_group();
    let mut checked = 0u64;
    for i in 0..m.rank() {
        for j in 0..g.rank() {
            for k in 0..m.rank() {
                checked += 1;
                let r = role_residual(
                    gr,
                    f,
                    role,
                    &m.generator(i),
                    &g.generator(j),
                    &m.generator(k),
                )?;
                if !m.is_zero(&r) {
                    let w = Witness::new(format!("{} identity fails", role.as_str()))
                        .with("x", &m.generator(i))
                        .with("alpha", &g.generator(j))
                        .with("y", &m.generator(k))
                        .with("residual", &r);
                    return Ok(VerdictReport::fail(w).count("triples_checked", checked));
                }
            }
        }
    }
    Ok(VerdictReport::pass().count("triples_checked", checked))
}

/// One report per role.
pub fn classify_map(gr: &GammaRing, f: &AdditiveMap) -> Result<Vec<(MapRole, VerdictReport)>> {
    MapRole::ALL
        .iter()
        .map(|&role| Ok((role, check_role(gr, f, role)?)))
        .collect()
}

/// Strong commutativity preservation on M: [f(x), f(y)]_alpha = [x, y]_alpha.
/// Both sides are biadditive in (x, y) and additive in alpha, so generator
/// triples suffice. Defined on additive maps only.
pub fn is_scp(gr: &GammaRing, f: &AdditiveMap) -> Result<VerdictReport> {
    gr.ensure_validated()?;
    check_self_map(gr, f)?;
    let m = gr.m_group();
    let g = gr.g_group();
    let mut checked = 0u64;
    for i in 0..m.rank() {
        for k in 0..m.rank() {
            for j in 0..g.rank() {
                checked += 1;
                let lhs = gr.commutator(
                    &f.apply(&m.generator(i))?,
                    &f.apply(&m.generator(k))?,
                    &g.generator(j),
                )?;
                let rhs = gr.commutator(&m.generator(i), &m.generator(k), &g.generator(j))?;
                if lhs != rhs {
                    let w = Witness::new("scp identity fails")
                        .with("x", &m.generator(i))
                        .with("y", &m.generator(k))
                        .with("alpha", &g.generator(j))
                        .with("lhs_commutator", &lhs)
                        .with("rhs_commutator", &rhs);
                    return Ok(VerdictReport::fail(w).count("triples_checked", checked));
                }
            }
        }
    }
    Ok(VerdictReport::pass().count("triples_checked", checked))
}

/// True iff every generator image lies in the center (equivalent to
/// image ⊆ Z(M) since the center is a subgroup).
pub fn image_in_center(gr: &GammaRing, f: &AdditiveMap) -> Result<VerdictReport> {
    gr.ensure_validated()?;
    check_self_map(gr, f)?;
    let m = gr.m_group();
    let g = gr.g_group();
    for i in 0..m.rank() {
        let img = f.apply(&m.generator(i))?;
        if !is_central(gr, &img)? {
            // Find the pair it fails against for the witness.
            for k in 0..m.rank() {
                for j in 0..g.rank() {
                    let c = gr.commutator(&img, &m.generator(k), &g.generator(j))?;
                    if !m.is_zero(&c) {
                        let w = Witness::new("non-central generator image")
                            .with_index("generator", i)
                            .with("image", &img)
                            .with("against_b", &m.generator(k))
                            .with("against_alpha", &g.generator(j))
                            .with("commutator", &c);
                        return Ok(VerdictReport::fail(w));
                    }
                }
            }
        }
    }
    Ok(VerdictReport::pass())
}

/// The defect zeta(x) = sigma(x) - x of a map sigma, with its centrality flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectMap {
    pub base: AdditiveMap,
    pub defect: AdditiveMap,
    pub central: bool,
}

pub fn defect_map(gr: &GammaRing, sigma: &AdditiveMap) -> Result<DefectMap> {
    gr.ensure_validated()?;
    check_self_map(gr, sigma)?;
    let identity = AdditiveMap::identity(gr.m_group().clone());
    let defect = sigma.pointwise_sub(&identity)?;
    let central = image_in_center(gr, &defect)?.verdict;
    Ok(DefectMap {
        base: sigma.clone(),
        defect,
        central,
    })
}

/// Constraint schedule for the backtracker: generator triples grouped by the
/// earliest depth at which every referenced image is assigned. A triple
/// (i, j, k) references f on e_i, e_k, and on the additive decomposition of
/// e_i f_j e_k, so it becomes checkable once
/// max(i, k, support(T[i][j][k])) + 1 images are fixed.
struct TripleSchedule {
    by_depth: Vec<Vec<(usize, usize, usize)>>,
    scp_by_depth: Vec<Vec<(usize, usize, usize)>>,
}

impl TripleSchedule {
    fn build(gr: &GammaRing, with_scp: bool) -> Self {
        let km = gr.m_group().rank();
        let kg = gr.g_group().rank();
        let mut by_depth = vec![Vec::new(); km];
        let mut scp_by_depth = vec![Vec::new(); km];
        for i in 0..km {
            for j in 0..kg {
                for k in 0..km {
                    let support = gr
                        .tensor_entry(i, j, k)
                        .coords
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(l, _)| l)
                        .max()
                        .unwrap_or(0);
                    let depth = i.max(k).max(support);
                    by_depth[depth].push((i, j, k));
                    if with_scp {
                        scp_by_depth[i.max(k)].push((i, j, k));
                    }
                }
            }
        }
        TripleSchedule {
            by_depth,
            scp_by_depth,
        }
    }
}

fn prefix_apply(m: &FinAbGroup, prefix: &[Element], x: &Element) -> Element {
    apply_images(m, prefix, x).expect("support within prefix")
}

/// Checks the role residual of triple (i,j,k) against a partial assignment;
/// every referenced generator image must already be in `prefix`.
fn partial_role_ok(
    gr: &GammaRing,
    prefix: &[Element],
    role: MapRole,
    (i, j, k): (usize, usize, usize),
) -> bool {
    let m = gr.m_group();
    let fj = gr.g_group().generator(j);
    let ei = m.generator(i);
    let ek = m.generator(k);
    let fx = &prefix[i];
    let fy = &prefix[k];
    let f_prod = prefix_apply(m, prefix, gr.tensor_entry(i, j, k));
    let rhs = match role {
        MapRole::LeftDerivation => m
            .add(
                &gr.product(&ei, &fj, fy).unwrap(),
                &gr.product(&ek, &fj, fx).unwrap(),
            )
            .unwrap(),
        MapRole::RightDerivation => m
            .add(
                &gr.product(fy, &fj, &ei).unwrap(),
                &gr.product(fx, &fj, &ek).unwrap(),
            )
            .unwrap(),
        MapRole::Derivation => m
            .add(
                &gr.product(fx, &fj, &ek).unwrap(),
                &gr.product(&ei, &fj, fy).unwrap(),
            )
            .unwrap(),
        MapRole::Endomorphism => gr.product(fx, &fj, fy).unwrap(),
        MapRole::AdditiveOnly => f_prod.clone(),
    };
    f_prod == rhs
}

fn partial_scp_ok(gr: &GammaRing, prefix: &[Element], (i, j, k): (usize, usize, usize)) -> bool {
    let m = gr.m_group();
    let fj = gr.g_group().generator(j);
    let lhs = gr.commutator(&prefix[i], &prefix[k], &fj).unwrap();
    let rhs = gr
        .commutator(&m.generator(i), &m.generator(k), &fj)
        .unwrap();
    lhs == rhs
}

/// Exactly the additive self-maps of M satisfying `role` (and the scp
/// identity when `require_scp`), found by backtracking with every constraint
/// evaluated at the earliest depth its referenced images are determined.
/// Deterministic lexicographic order.
pub fn enumerate_maps_filtered(
    gr: &GammaRing,
    role: MapRole,
    require_scp: bool,
    node_budget: u64,
) -> Result<Vec<AdditiveMap>> {
    gr.ensure_validated()?;
    let schedule = TripleSchedule::build(gr, require_scp);
    let m = gr.m_group();
    crate::abelian::enumerate_additive_maps(
        m,
        m,
        |prefix: &[Element]| {
            let depth = prefix.len() - 1;
            schedule.by_depth[depth]
                .iter()
                .all(|&t| partial_role_ok(gr, prefix, role, t))
                && (!require_scp
                    || schedule.scp_by_depth[depth]
                        .iter()
                        .all(|&t| partial_scp_ok(gr, prefix, t)))
        },
        node_budget,
    )
}

pub fn enumerate_maps(gr: &GammaRing, role: MapRole, node_budget: u64) -> Result<Vec<AdditiveMap>> {
    enumerate_maps_filtered(gr, role, false, node_budget)
}

/// Parallel variant partitioning on the first generator image; identical
/// membership, canonical order.
pub fn enumerate_maps_partitioned(
    gr: &GammaRing,
    role: MapRole,
    require_scp: bool,
    node_budget: u64,
    workers: usize,
) -> Result<Vec<AdditiveMap>> {
    gr.ensure_validated()?;
    let schedule = TripleSchedule::build(gr, require_scp);
    let m = gr.m_group();
    let pruner = |prefix: &[Element]| {
        let depth = prefix.len() - 1;
        schedule.by_depth[depth]
            .iter()
            .all(|&t| partial_role_ok(gr, prefix, role, t))
            && (!require_scp
                || schedule.scp_by_depth[depth]
                    .iter()
                    .all(|&t| partial_scp_ok(gr, prefix, t)))
    };
    crate::abelian::enumerate_additive_maps_partitioned(m, m, &pruner, node_budget, workers)
}

/// All additive maps whose generator images lie in the given subgroup
/// (typically the center), for the sufficiency direction of the scp
/// endomorphism theorem.
pub fn enumerate_maps_into(
    gr: &GammaRing,
    target: &Subgroup,
    node_budget: u64,
) -> Result<Vec<AdditiveMap>> {
    let m = gr.m_group();
    crate::abelian::enumerate_additive_maps(
        m,
        m,
        |prefix: &[Element]| target.contains(prefix.last().unwrap()),
        node_budget,
    )
}

/// Default-budget helper used widely in tests and verifiers.
pub fn enumerate_maps_default(gr: &GammaRing, role: MapRole) -> Result<Vec<AdditiveMap>> {
    enumerate_maps(gr, role, DEFAULT_NODE_BUDGET)
}
