//! Extending a partial choice function to a total one under an axiom.
//!
//! For each of (α), (β) and WARP, `*_liftable` decides whether a partial
//! choice has a total extension satisfying the axiom, and constructs one
//! when it does. Decisions come with checkable evidence: an obstruction on
//! failure, the lifted choice on success (re-validated before it is
//! returned).

use std::collections::BTreeSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::choice::{
    check_axiom, euler_diagram, Axiom, AxiomViolation, ChoiceError, EulerDiagram, FiniteChoice,
};
use crate::sets::ElemSet;

/// Largest universe for which a total extension is materialized.
pub const MAX_LIFT_UNIVERSE: usize = 16;
/// Largest domain for which closed subfamilies are enumerated.
pub const MAX_CLOSURE_MENUS: usize = 16;
/// Largest item count accepted by [`exhaustive_preorder_ranks`].
pub const MAX_EXHAUSTIVE_ITEMS: usize = 8;
/// Lifts over universes up to this size are re-checked against the axiom
/// before being returned.
const VERIFY_UNIVERSE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LiftError {
    #[error("universe of {0} elements is too large to materialize a total choice")]
    UniverseTooLarge(usize),
    #[error("domain of {0} menus is too large to enumerate closed subfamilies")]
    TooManyMenus(usize),
    #[error("no lifting procedure for axiom {0}")]
    UnsupportedAxiom(&'static str),
    #[error("{0}")]
    Choice(#[from] ChoiceError),
}

/// Why a lift does not exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// The axiom already fails between two menus of the domain.
    Pairwise(AxiomViolation),
    /// A closed subfamily whose union is covered by its rejections, so no
    /// nonempty value is left for the union menu. Obstructs (α).
    RejectionCover { family: Vec<ElemSet> },
    /// No total preorder on the regions of the menus and their values is
    /// compatible with the choice. Obstructs WARP.
    NoRankFunction { regions: Vec<ElemSet> },
}

/// Outcome of a lifting decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftDecision {
    Liftable(FiniteChoice),
    Obstructed(Obstruction),
}

impl LiftDecision {
    pub fn is_liftable(&self) -> bool {
        matches!(self, LiftDecision::Liftable(_))
    }

    pub fn lift(&self) -> Option<&FiniteChoice> {
        match self {
            LiftDecision::Liftable(c) => Some(c),
            LiftDecision::Obstructed(_) => None,
        }
    }
}

/// Dispatches on the three liftable axioms.
pub fn liftable(ch: &FiniteChoice, axiom: Axiom) -> Result<LiftDecision, LiftError> {
    match axiom {
        Axiom::Alpha => alpha_liftable(ch),
        Axiom::Beta => beta_liftable(ch),
        Axiom::Warp => warp_liftable(ch),
        Axiom::Gamma | Axiom::Rho => Err(LiftError::UnsupportedAxiom(axiom.name())),
    }
}

fn total_from(ch: &FiniteChoice, value: impl Fn(ElemSet) -> ElemSet) -> Result<FiniteChoice, LiftError> {
    let n = ch.universe().len();
    if n > MAX_LIFT_UNIVERSE {
        return Err(LiftError::UniverseTooLarge(n));
    }
    let entries: Vec<(ElemSet, ElemSet)> = ch
        .universe()
        .full()
        .nonempty_subsets()
        .map(|m| (m, value(m)))
        .collect();
    Ok(FiniteChoice::new(ch.universe().clone(), entries)
        .expect("lift construction yields a valid choice"))
}

fn verify_lift(ch: &FiniteChoice, lift: &FiniteChoice, axiom: Axiom) {
    assert!(lift.is_total(), "lift must be total");
    assert!(ch.extended_by(lift), "lift must extend the given choice");
    if ch.universe().len() <= VERIFY_UNIVERSE {
        assert!(
            check_axiom(lift, axiom).satisfied,
            "constructed lift violates {}",
            axiom.name()
        );
    }
}

/// Decides whether `ch` extends to a total choice satisfying (α).
///
/// This holds iff (α) holds pairwise on the domain and no nonempty closed
/// subfamily has its union covered by the rejections of its members. The
/// witnessing extension keeps everything a relevant menu does not reject:
/// `c⁺(A) = A \ ⋃ { B \ c(B) : B ∈ Ω, B ⊆ A }`.
pub fn alpha_liftable(ch: &FiniteChoice) -> Result<LiftDecision, LiftError> {
    if let Some(v) = check_axiom(ch, Axiom::Alpha).counterexample {
        return Ok(LiftDecision::Obstructed(Obstruction::Pairwise(v)));
    }
    let menus: Vec<(ElemSet, ElemSet)> = ch.entries().collect();
    if menus.len() > MAX_CLOSURE_MENUS {
        return Err(LiftError::TooManyMenus(menus.len()));
    }
    // Every nonempty closed subfamily is the closure of some nonempty
    // subfamily, and the closure depends only on the subfamily's union.
    let mut unions = vec![ElemSet::EMPTY; 1usize << menus.len()];
    for mask in 1..unions.len() {
        let low = mask.trailing_zeros() as usize;
        unions[mask] = unions[mask & (mask - 1)].union(menus[low].0);
    }
    let distinct: BTreeSet<ElemSet> = unions[1..].iter().copied().collect();
    for u0 in distinct {
        let mut rejected = ElemSet::EMPTY;
        for (m, c) in &menus {
            if m.subset_of(u0) {
                rejected = rejected.union(m.diff(*c));
            }
        }
        if u0.diff(rejected).is_empty() {
            let family = menus
                .iter()
                .map(|(m, _)| *m)
                .filter(|m| m.subset_of(u0))
                .collect();
            return Ok(LiftDecision::Obstructed(Obstruction::RejectionCover { family }));
        }
    }
    let lift = total_from(ch, |a| {
        let mut rejected = ElemSet::EMPTY;
        for (m, c) in &menus {
            if m.subset_of(a) {
                rejected = rejected.union(m.diff(*c));
            }
        }
        a.diff(rejected)
    })?;
    verify_lift(ch, &lift, Axiom::Alpha);
    Ok(LiftDecision::Liftable(lift))
}

/// Decides whether `ch` extends to a total choice satisfying (β), which
/// holds iff (β) holds pairwise on the domain.
///
/// The extension picks an anchor for each menu `A` (the least element of
/// `c(A)` if `A` is a menu of the domain, otherwise the least element of
/// `A`) and returns the union of the connected component of the anchor in
/// the intersection graph of the values of menus inside `A`, or the anchor
/// alone when no such value contains it.
pub fn beta_liftable(ch: &FiniteChoice) -> Result<LiftDecision, LiftError> {
    if let Some(v) = check_axiom(ch, Axiom::Beta).counterexample {
        return Ok(LiftDecision::Obstructed(Obstruction::Pairwise(v)));
    }
    let lift = total_from(ch, |a| beta_value(ch, a))?;
    verify_lift(ch, &lift, Axiom::Beta);
    Ok(LiftDecision::Liftable(lift))
}

fn beta_value(ch: &FiniteChoice, a: ElemSet) -> ElemSet {
    let anchor = match ch.choose(a) {
        Some(c) => c.min().expect("choices are nonempty"),
        None => a.min().expect("menus are nonempty"),
    };
    let values: Vec<ElemSet> = ch
        .entries()
        .filter(|(m, _)| m.subset_of(a))
        .map(|(_, c)| c)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if !values.iter().any(|v| v.contains(anchor)) {
        return ElemSet::singleton(anchor);
    }
    // Union-find over the intersection graph of the values.
    let mut parent: Vec<usize> = (0..values.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i].intersects(values[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let anchor_root = (0..values.len())
        .find(|&i| values[i].contains(anchor))
        .map(|i| find(&mut parent, i))
        .expect("anchor lies in some value");
    let mut out = ElemSet::EMPTY;
    for (i, v) in values.iter().enumerate() {
        if find(&mut parent, i) == anchor_root {
            out = out.union(*v);
        }
    }
    out
}

/// A total preorder on the regions of an Euler diagram, given by ranks
/// (higher is better). Elements outside every region rank strictly below
/// all regions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionPreorder {
    pub diagram: EulerDiagram,
    pub ranks: Vec<u32>,
}

impl RegionPreorder {
    pub fn element_rank(&self, e: usize) -> i64 {
        match self.diagram.region_of(e) {
            Some(r) => self.ranks[r] as i64,
            None => -1,
        }
    }

    /// The elements of `menu` of maximal rank.
    pub fn max_choice(&self, menu: ElemSet) -> ElemSet {
        let best = menu.iter().map(|e| self.element_rank(e)).max();
        let mut out = ElemSet::EMPTY;
        if let Some(best) = best {
            for e in menu.iter() {
                if self.element_rank(e) == best {
                    out.insert(e);
                }
            }
        }
        out
    }
}

/// Builds the region preorder witnessing WARP-liftability, or reports why
/// none exists.
///
/// Regions are those of the Euler diagram of the menus together with their
/// values. A compatible preorder must rank every region of a value `c(B)`
/// at least as high as every region of its menu `B`, and the maximal
/// regions of each menu must lie inside its value.
pub fn warp_region_preorder(ch: &FiniteChoice) -> Result<RegionPreorder, Obstruction> {
    if let Some(v) = check_axiom(ch, Axiom::Warp).counterexample {
        return Err(Obstruction::Pairwise(v));
    }
    let family: Vec<ElemSet> = ch
        .entries()
        .flat_map(|(m, c)| [m, c])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let diagram = euler_diagram(&family);
    let regions = &diagram.regions;
    let groups: Vec<(Vec<usize>, Vec<usize>)> = ch
        .entries()
        .map(|(m, c)| {
            let env = (0..regions.len()).filter(|&r| regions[r].subset_of(m)).collect();
            let top = (0..regions.len()).filter(|&r| regions[r].subset_of(c)).collect();
            (env, top)
        })
        .collect();
    match preorder_ranks(regions.len(), &groups) {
        Some(ranks) => Ok(RegionPreorder { diagram, ranks }),
        None => Err(Obstruction::NoRankFunction { regions: regions.clone() }),
    }
}

/// Decides whether `ch` extends to a total choice satisfying WARP, which
/// holds iff a compatible total preorder on regions exists. The extension
/// picks the rank-maximal elements of every menu.
pub fn warp_liftable(ch: &FiniteChoice) -> Result<LiftDecision, LiftError> {
    match warp_region_preorder(ch) {
        Err(o) => Ok(LiftDecision::Obstructed(o)),
        Ok(pre) => {
            let lift = total_from(ch, |a| pre.max_choice(a))?;
            verify_lift(ch, &lift, Axiom::Warp);
            Ok(LiftDecision::Liftable(lift))
        }
    }
}

/// Checks a rank assignment against rank-feasibility constraints: for each
/// `(env, top)` group, every env item ranks at most every top item, and the
/// rank-maximal env items all lie in `top`.
pub fn verify_ranks(groups: &[(Vec<usize>, Vec<usize>)], ranks: &[u32]) -> bool {
    groups.iter().all(|(env, top)| {
        let bound_ok = env
            .iter()
            .all(|&e| top.iter().all(|&t| ranks[e] <= ranks[t]));
        let max = env.iter().map(|&e| ranks[e]).max();
        let max_ok = match max {
            None => true,
            Some(m) => env.iter().all(|&e| ranks[e] != m || top.contains(&e)),
        };
        bound_ok && max_ok
    })
}

/// Finds ranks over `n` items satisfying the constraints of
/// [`verify_ranks`], if any assignment does.
///
/// Seeds from the constraint digraph (an edge `e -> t` per group pair
/// forces `rank(e) <= rank(t)`): strongly connected items share a rank and
/// every cross-component edge is made strict by longest-path layering. If
/// the maximality condition fails on this seed, some menu has a non-value
/// region tied with its value regions by the order constraints alone, and
/// then no assignment can satisfy it.
pub fn preorder_ranks(n: usize, groups: &[(Vec<usize>, Vec<usize>)]) -> Option<Vec<u32>> {
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for (env, top) in groups {
        for &e in env {
            for &t in top {
                graph.add_edge(nodes[e], nodes[t], ());
            }
        }
    }
    let sccs = tarjan_scc(&graph);
    let mut comp = vec![usize::MAX; n];
    for (i, scc) in sccs.iter().enumerate() {
        for nx in scc {
            comp[nx.index()] = i;
        }
    }
    // tarjan_scc lists components in reverse topological order.
    let mut comp_rank = vec![0u32; sccs.len()];
    for scc in sccs.iter().rev() {
        for nx in scc {
            let cu = comp[nx.index()];
            for succ in graph.neighbors(*nx) {
                let cv = comp[succ.index()];
                if cv != cu {
                    comp_rank[cv] = comp_rank[cv].max(comp_rank[cu] + 1);
                }
            }
        }
    }
    let ranks: Vec<u32> = (0..n).map(|i| comp_rank[comp[i]]).collect();
    verify_ranks(groups, &ranks).then_some(ranks)
}

/// Reference implementation of [`preorder_ranks`] by enumeration of all
/// rank assignments with values below `n`, smallest assignment first.
/// Panics beyond [`MAX_EXHAUSTIVE_ITEMS`] items.
pub fn exhaustive_preorder_ranks(
    n: usize,
    groups: &[(Vec<usize>, Vec<usize>)],
) -> Option<Vec<u32>> {
    assert!(n <= MAX_EXHAUSTIVE_ITEMS, "exhaustive rank search is for small instances");
    if n == 0 {
        return verify_ranks(groups, &[]).then_some(Vec::new());
    }
    let mut ranks = vec![0u32; n];
    loop {
        if verify_ranks(groups, &ranks) {
            return Some(ranks);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if ranks[i] as usize != n - 1 {
                ranks[i] += 1;
                for r in &mut ranks[i + 1..] {
                    *r = 0;
                }
                break;
            }
        }
    }
}
