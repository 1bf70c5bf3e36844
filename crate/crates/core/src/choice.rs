//! Finite choice functions and their consistency axioms.
//!
//! A [`FiniteChoice`] is a map `c` from a family of nonempty menus (subsets
//! of a finite universe) to nonempty subsets, contractive in the sense that
//! `c(B) ⊆ B`. The module provides the classical consistency axioms
//! (contraction, expansion and their relatives), Euler diagrams of set
//! families, and rationalizability by a (possibly cyclic) strict relation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::sets::{ElemSet, Universe};

/// Errors for constructing or querying choice functions.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ChoiceError {
    #[error("invalid universe: {0}")]
    BadUniverse(String),
    #[error("menu {0:?} is empty")]
    EmptyMenu(String),
    #[error("choice for menu {0} is empty")]
    EmptyChoice(String),
    #[error("choice {0} is not contained in its menu {1}")]
    ChoiceOutsideMenu(String, String),
    #[error("duplicate menu {0}")]
    DuplicateMenu(String),
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("menu {0} is not in the domain")]
    MenuNotInDomain(String),
    #[error("family member {0} is not part of the reference family")]
    NotInFamily(String),
    #[error("malformed choice file: {0}")]
    Malformed(String),
}

/// A partial choice function on a finite universe.
///
/// The domain is a finite family of nonempty menus; values are nonempty and
/// contained in their menu. Menus iterate ascending by bitmask, so every
/// operation on a `FiniteChoice` is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteChoice {
    universe: Universe,
    menus: BTreeMap<ElemSet, ElemSet>,
}

impl FiniteChoice {
    /// Builds a choice function, validating every menu/choice pair.
    pub fn new(
        universe: Universe,
        entries: impl IntoIterator<Item = (ElemSet, ElemSet)>,
    ) -> Result<FiniteChoice, ChoiceError> {
        let full = universe.full();
        let mut menus = BTreeMap::new();
        for (menu, chosen) in entries {
            let show = |s: ElemSet| format!("{:?}", universe.render(s));
            if !menu.subset_of(full) {
                return Err(ChoiceError::UnknownElement(format!("{menu:?}")));
            }
            if menu.is_empty() {
                return Err(ChoiceError::EmptyMenu(show(menu)));
            }
            if chosen.is_empty() {
                return Err(ChoiceError::EmptyChoice(show(menu)));
            }
            if !chosen.subset_of(menu) {
                return Err(ChoiceError::ChoiceOutsideMenu(show(chosen), show(menu)));
            }
            if menus.insert(menu, chosen).is_some() {
                return Err(ChoiceError::DuplicateMenu(show(menu)));
            }
        }
        Ok(FiniteChoice { universe, menus })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Number of menus in the domain.
    pub fn len(&self) -> usize {
        self.menus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.menus.is_empty()
    }

    /// The domain, ascending by menu bitmask.
    pub fn domain(&self) -> impl Iterator<Item = ElemSet> + '_ {
        self.menus.keys().copied()
    }

    /// Menu/choice pairs, ascending by menu bitmask.
    pub fn entries(&self) -> impl Iterator<Item = (ElemSet, ElemSet)> + '_ {
        self.menus.iter().map(|(m, c)| (*m, *c))
    }

    pub fn contains_menu(&self, menu: ElemSet) -> bool {
        self.menus.contains_key(&menu)
    }

    /// The chosen set at a menu, if the menu is in the domain.
    pub fn choose(&self, menu: ElemSet) -> Option<ElemSet> {
        self.menus.get(&menu).copied()
    }

    /// True when the domain is every nonempty subset of the universe.
    pub fn is_total(&self) -> bool {
        let n = self.universe.len();
        n < 64 && self.menus.len() == (1usize << n) - 1
    }

    /// The rejected part `B \ c(B)` of a menu in the domain.
    pub fn rejection(&self, menu: ElemSet) -> Result<ElemSet, ChoiceError> {
        match self.choose(menu) {
            Some(c) => Ok(menu.diff(c)),
            None => Err(ChoiceError::MenuNotInDomain(format!(
                "{:?}",
                self.universe.render(menu)
            ))),
        }
    }

    /// Restriction of the domain to menus contained in `a` (same universe).
    pub fn relativized(&self, a: ElemSet) -> FiniteChoice {
        FiniteChoice {
            universe: self.universe.clone(),
            menus: self
                .menus
                .iter()
                .filter(|(m, _)| m.subset_of(a))
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    /// True when `other` has the same universe and agrees with `self` on
    /// every menu of `self`'s domain.
    pub fn extended_by(&self, other: &FiniteChoice) -> bool {
        self.universe == other.universe
            && self
                .menus
                .iter()
                .all(|(m, c)| other.choose(*m) == Some(*c))
    }
}

/// JSON shape of a choice file.
#[derive(Serialize, Deserialize)]
struct ChoiceFileDto {
    universe: Vec<String>,
    menus: Vec<MenuDto>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    implicit_singletons: bool,
}

#[derive(Serialize, Deserialize)]
struct MenuDto {
    menu: Vec<String>,
    choice: Vec<String>,
}

impl FiniteChoice {
    /// Parses the JSON choice-file format:
    /// `{"universe": ["x", ..], "menus": [{"menu": [..], "choice": [..]}, ..]}`.
    ///
    /// With `"implicit_singletons": true`, every singleton menu `{a}` absent
    /// from `menus` is added with choice `{a}`. Duplicate menu entries are
    /// rejected.
    pub fn from_json_str(s: &str) -> Result<FiniteChoice, ChoiceError> {
        let dto: ChoiceFileDto =
            serde_json::from_str(s).map_err(|e| ChoiceError::Malformed(e.to_string()))?;
        let universe = Universe::new(dto.universe).map_err(ChoiceError::BadUniverse)?;
        let mut entries = Vec::new();
        for m in &dto.menus {
            let menu = universe
                .set_of(&m.menu)
                .map_err(ChoiceError::UnknownElement)?;
            let chosen = universe
                .set_of(&m.choice)
                .map_err(ChoiceError::UnknownElement)?;
            entries.push((menu, chosen));
        }
        if dto.implicit_singletons {
            let explicit: Vec<ElemSet> = entries.iter().map(|(m, _)| *m).collect();
            for i in 0..universe.len() {
                let s = ElemSet::singleton(i);
                if !explicit.contains(&s) {
                    entries.push((s, s));
                }
            }
        }
        FiniteChoice::new(universe, entries)
    }

    /// Serializes in the same JSON format (all menus listed explicitly).
    pub fn to_json(&self) -> serde_json::Value {
        let dto = ChoiceFileDto {
            universe: self.universe.names().to_vec(),
            menus: self
                .entries()
                .map(|(m, c)| MenuDto {
                    menu: self.universe.render(m),
                    choice: self.universe.render(c),
                })
                .collect(),
            implicit_singletons: false,
        };
        serde_json::to_value(&dto).expect("serializable")
    }
}

/// The five consistency axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    /// Contraction: `A ⊆ B` implies `A ∩ c(B) ⊆ c(A)`.
    Alpha,
    /// Expansion: `c(A) ∩ c(B) ⊆ c(A ∪ B)` whenever `A ∪ B` is a menu.
    Gamma,
    /// `A ⊆ B` and `c(A) ∩ c(B) ≠ ∅` imply `c(A) ⊆ c(B)`.
    Beta,
    /// `c(A) \ c(A ∪ B) ≠ ∅` implies `B ∩ c(A ∪ B) ≠ ∅` whenever `A ∪ B`
    /// is a menu.
    Rho,
    /// `A ⊆ B` and `A ∩ c(B) ≠ ∅` imply `c(A) = A ∩ c(B)`.
    Warp,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [Axiom::Alpha, Axiom::Gamma, Axiom::Beta, Axiom::Rho, Axiom::Warp];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Alpha => "alpha",
            Axiom::Gamma => "gamma",
            Axiom::Beta => "beta",
            Axiom::Rho => "rho",
            Axiom::Warp => "warp",
        }
    }

    pub fn parse(s: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.name() == s)
    }
}

/// A pair of menus (and offending elements) violating an axiom instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub menu_a: ElemSet,
    pub menu_b: ElemSet,
    /// Elements instantiating the failure: the part of the conclusion that
    /// is missing, or for (ρ) the premise elements left unexplained.
    pub witness: ElemSet,
}

/// Outcome of checking one axiom against a choice function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomWitness {
    pub axiom: Axiom,
    pub satisfied: bool,
    pub counterexample: Option<AxiomViolation>,
}

// First violation of the axiom, scanning ordered pairs of menus ascending
// by (menu_a, menu_b) bitmask.
fn first_violation(ch: &FiniteChoice, axiom: Axiom) -> Option<AxiomViolation> {
    for (a, ca) in ch.entries() {
        for (b, cb) in ch.entries() {
            let v = match axiom {
                Axiom::Alpha => {
                    if !a.subset_of(b) {
                        continue;
                    }
                    a.inter(cb).diff(ca)
                }
                Axiom::Beta => {
                    if !a.subset_of(b) || ca.inter(cb).is_empty() {
                        continue;
                    }
                    ca.diff(cb)
                }
                Axiom::Warp => {
                    if !a.subset_of(b) || a.inter(cb).is_empty() {
                        continue;
                    }
                    let rhs = a.inter(cb);
                    ca.diff(rhs).union(rhs.diff(ca))
                }
                Axiom::Gamma => match ch.choose(a.union(b)) {
                    None => continue,
                    Some(cu) => ca.inter(cb).diff(cu),
                },
                Axiom::Rho => match ch.choose(a.union(b)) {
                    None => continue,
                    Some(cu) => {
                        let premise = ca.diff(cu);
                        if premise.is_empty() || !b.inter(cu).is_empty() {
                            continue;
                        }
                        premise
                    }
                },
            };
            if !v.is_empty() {
                return Some(AxiomViolation { menu_a: a, menu_b: b, witness: v });
            }
        }
    }
    None
}

/// Checks an axiom over all instances in the domain of `ch`.
///
/// For (α), (β) and WARP, instances are pairs `A ⊆ B` of menus; for (γ) and
/// (ρ), pairs with `A ∪ B` also a menu. The first violation in ascending
/// `(A, B)` order is reported.
pub fn check_axiom(ch: &FiniteChoice, axiom: Axiom) -> AxiomWitness {
    let counterexample = first_violation(ch, axiom);
    AxiomWitness { axiom, satisfied: counterexample.is_none(), counterexample }
}

/// Re-derives a reported violation directly from the axiom definition.
/// Used to validate counterexamples independently of the scan above.
pub fn replay_violation(ch: &FiniteChoice, axiom: Axiom, v: &AxiomViolation) -> bool {
    let (Some(ca), Some(cb)) = (ch.choose(v.menu_a), ch.choose(v.menu_b)) else {
        return false;
    };
    if v.witness.is_empty() {
        return false;
    }
    match axiom {
        Axiom::Alpha => {
            v.menu_a.subset_of(v.menu_b)
                && v.witness.subset_of(v.menu_a.inter(cb))
                && v.witness.inter(ca).is_empty()
        }
        Axiom::Beta => {
            v.menu_a.subset_of(v.menu_b)
                && !ca.inter(cb).is_empty()
                && v.witness.subset_of(ca)
                && v.witness.inter(cb).is_empty()
        }
        Axiom::Warp => {
            let rhs = v.menu_a.inter(cb);
            v.menu_a.subset_of(v.menu_b)
                && !rhs.is_empty()
                && v.witness == ca.diff(rhs).union(rhs.diff(ca))
        }
        Axiom::Gamma => match ch.choose(v.menu_a.union(v.menu_b)) {
            None => false,
            Some(cu) => v.witness.subset_of(ca.inter(cb)) && v.witness.inter(cu).is_empty(),
        },
        Axiom::Rho => match ch.choose(v.menu_a.union(v.menu_b)) {
            None => false,
            Some(cu) => {
                v.witness.subset_of(ca.diff(cu)) && v.menu_b.inter(cu).is_empty()
            }
        },
    }
}

/// The Euler diagram of a finite family of sets: the partition of the
/// family's union into maximal regions not crossing any member's boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerDiagram {
    pub family: Vec<ElemSet>,
    /// Nonempty, pairwise disjoint regions covering the union of the family,
    /// ascending by bitmask. Each family member is a union of regions.
    pub regions: Vec<ElemSet>,
    /// `signatures[r]` has bit `j` set iff `regions[r] ⊆ family[j]`.
    pub signatures: Vec<u64>,
}

/// Computes the Euler diagram by grouping elements of the union by their
/// membership signature across the family.
pub fn euler_diagram(family: &[ElemSet]) -> EulerDiagram {
    assert!(family.len() <= 64, "family too large");
    let union = family.iter().fold(ElemSet::EMPTY, |acc, s| acc.union(*s));
    let mut by_sig: BTreeMap<u64, ElemSet> = BTreeMap::new();
    for i in union.iter() {
        let mut sig = 0u64;
        for (j, s) in family.iter().enumerate() {
            if s.contains(i) {
                sig |= 1 << j;
            }
        }
        by_sig.entry(sig).or_insert(ElemSet::EMPTY).insert(i);
    }
    let mut pairs: Vec<(ElemSet, u64)> = by_sig.into_iter().map(|(sig, r)| (r, sig)).collect();
    pairs.sort();
    EulerDiagram {
        family: family.to_vec(),
        regions: pairs.iter().map(|(r, _)| *r).collect(),
        signatures: pairs.iter().map(|(_, sig)| *sig).collect(),
    }
}

impl EulerDiagram {
    /// Indices of the regions that meet `a`, in region order.
    pub fn envelope_indices(&self, a: ElemSet) -> Vec<usize> {
        (0..self.regions.len())
            .filter(|&r| self.regions[r].intersects(a))
            .collect()
    }

    /// The regions that meet `a`. For any union of members of the family,
    /// these are exactly the regions contained in it.
    pub fn envelope(&self, a: ElemSet) -> Vec<ElemSet> {
        self.envelope_indices(a)
            .into_iter()
            .map(|r| self.regions[r])
            .collect()
    }

    /// Index of the region containing element `i`, if any.
    pub fn region_of(&self, i: usize) -> Option<usize> {
        self.regions.iter().position(|r| r.contains(i))
    }
}

/// The members of `family` contained in `a`, preserving order.
pub fn relativized_domain(family: &[ElemSet], a: ElemSet) -> Vec<ElemSet> {
    family.iter().copied().filter(|b| b.subset_of(a)).collect()
}

/// Whether `sub` is closed in `omega`: every menu of `omega` contained in
/// the union of `sub` already belongs to `sub`. Errors if `sub` contains a
/// set that is not a member of `omega`.
pub fn is_subset_closed(sub: &[ElemSet], omega: &[ElemSet]) -> Result<bool, ChoiceError> {
    for s in sub {
        if !omega.contains(s) {
            return Err(ChoiceError::NotInFamily(format!("{s:?}")));
        }
    }
    let union = sub.iter().fold(ElemSet::EMPTY, |acc, s| acc.union(*s));
    Ok(omega
        .iter()
        .all(|b| !b.subset_of(union) || sub.contains(b)))
}

/// A strict (irreflexive, not necessarily acyclic) relation on a universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictRelation {
    n: usize,
    /// `above[a]` is the set of `b` with `a ≺ b`.
    above: Vec<ElemSet>,
}

impl StrictRelation {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> StrictRelation {
        let mut above = vec![ElemSet::EMPTY; n];
        for (a, b) in pairs {
            assert!(a != b, "strict relation is irreflexive");
            above[a].insert(b);
        }
        StrictRelation { n, above }
    }

    pub fn empty(n: usize) -> StrictRelation {
        StrictRelation { n, above: vec![ElemSet::EMPTY; n] }
    }

    pub fn holds(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }

    /// All pairs `(a, b)` with `a ≺ b`, ascending.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.above[a].iter() {
                out.push((a, b));
            }
        }
        out
    }

    /// Maximal elements of a menu: those not strictly below any member.
    pub fn max_in(&self, menu: ElemSet) -> ElemSet {
        let mut out = ElemSet::EMPTY;
        for a in menu.iter() {
            if !self.above[a].intersects(menu) {
                out.insert(a);
            }
        }
        out
    }

    /// True if the relation has a directed cycle.
    pub fn has_cycle(&self) -> bool {
        // Repeatedly strip elements with no successors; a cycle survives.
        let mut alive = ElemSet::full(self.n);
        loop {
            let mut removed = false;
            for a in alive.iter() {
                if !self.above[a].intersects(alive) {
                    alive.remove(a);
                    removed = true;
                }
            }
            if alive.is_empty() {
                return false;
            }
            if !removed {
                return true;
            }
        }
    }
}

/// Decides rationalizability: is there a binary relation whose maximal
/// elements reproduce `c` on every menu?
///
/// Builds the canonical strict relation (`a ≺ b` iff the two co-occur in
/// some menu and no menu containing both chooses `a`) and verifies it; the
/// choice is rationalizable iff this particular relation works. Cyclic
/// relations are allowed.
pub fn rationalizable(ch: &FiniteChoice) -> Option<StrictRelation> {
    let n = ch.universe().len();
    let mut rel = StrictRelation::empty(n);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let both = ElemSet::singleton(a).union(ElemSet::singleton(b));
            let mut co_occur = false;
            let mut ever_chosen = false;
            for (menu, chosen) in ch.entries() {
                if both.subset_of(menu) {
                    co_occur = true;
                    if chosen.contains(a) {
                        ever_chosen = true;
                        break;
                    }
                }
            }
            if co_occur && !ever_chosen {
                rel.above[a].insert(b);
            }
        }
    }
    let works = ch.entries().all(|(menu, chosen)| rel.max_in(menu) == chosen);
    works.then_some(rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u3() -> Universe {
        Universe::new(["x", "y", "z"]).unwrap()
    }

    fn s(u: &Universe, names: &[&str]) -> ElemSet {
        u.set_of(names).unwrap()
    }

    /// Pairs and singletons over {x, y, z} choosing x from {x,y}, y from
    /// {y,z}, z from {x,z}.
    fn three_cycle() -> FiniteChoice {
        let u = u3();
        let entries = vec![
            (s(&u, &["x"]), s(&u, &["x"])),
            (s(&u, &["y"]), s(&u, &["y"])),
            (s(&u, &["z"]), s(&u, &["z"])),
            (s(&u, &["x", "y"]), s(&u, &["x"])),
            (s(&u, &["y", "z"]), s(&u, &["y"])),
            (s(&u, &["x", "z"]), s(&u, &["z"])),
        ];
        FiniteChoice::new(u, entries).unwrap()
    }

    #[test]
    fn constructor_validates() {
        let u = u3();
        assert!(matches!(
            FiniteChoice::new(u.clone(), vec![(s(&u, &["x"]), ElemSet::EMPTY)]),
            Err(ChoiceError::EmptyChoice(_))
        ));
        assert!(matches!(
            FiniteChoice::new(u.clone(), vec![(s(&u, &["x"]), s(&u, &["y"]))]),
            Err(ChoiceError::ChoiceOutsideMenu(..))
        ));
        let dup = vec![
            (s(&u, &["x", "y"]), s(&u, &["x"])),
            (s(&u, &["x", "y"]), s(&u, &["y"])),
        ];
        assert!(matches!(
            FiniteChoice::new(u.clone(), dup),
            Err(ChoiceError::DuplicateMenu(_))
        ));
        assert!(matches!(
            FiniteChoice::new(u, vec![(ElemSet::EMPTY, ElemSet::EMPTY)]),
            Err(ChoiceError::EmptyMenu(_))
        ));
    }

    #[test]
    fn rejection_complements_the_choice() {
        let ch = three_cycle();
        let u = ch.universe().clone();
        assert_eq!(ch.rejection(s(&u, &["x", "y"])).unwrap(), s(&u, &["y"]));
        assert!(ch.rejection(s(&u, &["x", "y", "z"])).is_err());
    }

    #[test]
    fn json_round_trip_and_implicit_singletons() {
        let text = r#"{
            "universe": ["x", "y", "z"],
            "menus": [
                {"menu": ["x", "y"], "choice": ["x"]},
                {"menu": ["y", "z"], "choice": ["y"]},
                {"menu": ["x", "z"], "choice": ["z"]}
            ],
            "implicit_singletons": true
        }"#;
        let ch = FiniteChoice::from_json_str(text).unwrap();
        assert_eq!(ch, three_cycle());
        let back = FiniteChoice::from_json_str(&ch.to_json().to_string()).unwrap();
        assert_eq!(back, ch);

        let dup = r#"{"universe": ["x"], "menus": [
            {"menu": ["x"], "choice": ["x"]},
            {"menu": ["x"], "choice": ["x"]}
        ]}"#;
        assert!(matches!(
            FiniteChoice::from_json_str(dup),
            Err(ChoiceError::DuplicateMenu(_))
        ));
    }

    #[test]
    fn three_cycle_satisfies_all_pairwise_axioms() {
        let ch = three_cycle();
        for ax in Axiom::ALL {
            let w = check_axiom(&ch, ax);
            assert!(w.satisfied, "{} should hold on the 3-cycle", ax.name());
        }
    }

    #[test]
    fn alpha_violation_is_reported_and_replays() {
        // c({x,y,z}) = {y} but c({x,y}) = {x}: y ∈ A ∩ c(B) is not chosen in A.
        let u = u3();
        let entries = vec![
            (s(&u, &["x", "y"]), s(&u, &["x"])),
            (s(&u, &["x", "y", "z"]), s(&u, &["y"])),
        ];
        let ch = FiniteChoice::new(u.clone(), entries).unwrap();
        let w = check_axiom(&ch, Axiom::Alpha);
        assert!(!w.satisfied);
        let v = w.counterexample.unwrap();
        assert_eq!(v.menu_a, s(&u, &["x", "y"]));
        assert_eq!(v.menu_b, s(&u, &["x", "y", "z"]));
        assert_eq!(v.witness, s(&u, &["y"]));
        assert!(replay_violation(&ch, Axiom::Alpha, &v));
    }

    #[test]
    fn warp_violation_on_shrunken_choice() {
        // c({x,y}) = {x,y}, c({x,y,z}) = {x}: WARP forces c({x,y}) = {x}.
        let u = u3();
        let entries = vec![
            (s(&u, &["x", "y"]), s(&u, &["x", "y"])),
            (s(&u, &["x", "y", "z"]), s(&u, &["x"])),
        ];
        let ch = FiniteChoice::new(u.clone(), entries).unwrap();
        let w = check_axiom(&ch, Axiom::Warp);
        assert!(!w.satisfied);
        let v = w.counterexample.unwrap();
        assert!(replay_violation(&ch, Axiom::Warp, &v));
        // Same choice violates beta as well: c(A) ∩ c(B) = {x} but y ∉ c(B).
        let wb = check_axiom(&ch, Axiom::Beta);
        assert!(!wb.satisfied);
        assert!(replay_violation(&ch, Axiom::Beta, &wb.counterexample.unwrap()));
    }

    #[test]
    fn gamma_and_rho_use_union_menus() {
        // c({x}) = {x}, c({y}) = {y}, c({x,y}) = {x}:
        // gamma holds; rho: c({y}) \ c({x,y}) = {y} nonempty, and
        // {x} ∩ c({x,y}) = {x} nonempty, fine. Break rho with a third menu.
        let u = u3();
        let entries = vec![
            (s(&u, &["x"]), s(&u, &["x"])),
            (s(&u, &["y"]), s(&u, &["y"])),
            (s(&u, &["x", "y"]), s(&u, &["x"])),
        ];
        let ch = FiniteChoice::new(u.clone(), entries).unwrap();
        assert!(check_axiom(&ch, Axiom::Gamma).satisfied);
        assert!(check_axiom(&ch, Axiom::Rho).satisfied);

        // gamma failure: x chosen from both pairs but not from the union.
        let entries = vec![
            (s(&u, &["x", "y"]), s(&u, &["x"])),
            (s(&u, &["x", "z"]), s(&u, &["x"])),
            (s(&u, &["x", "y", "z"]), s(&u, &["y"])),
        ];
        let ch = FiniteChoice::new(u.clone(), entries).unwrap();
        let w = check_axiom(&ch, Axiom::Gamma);
        assert!(!w.satisfied);
        let v = w.counterexample.unwrap();
        assert_eq!(v.witness, s(&u, &["x"]));
        assert!(replay_violation(&ch, Axiom::Gamma, &v));

        // rho failure: c({x,y}) = {y}, c({y}) = {y}; take A = {x,y}, B = {y}:
        // wait, need c(A) \ c(A∪B) nonempty with B ∩ c(A∪B) = ∅.
        let entries = vec![
            (s(&u, &["x"]), s(&u, &["x"])),
            (s(&u, &["x", "y"]), s(&u, &["x"])),
            (s(&u, &["x", "y", "z"]), s(&u, &["y"])),
            (s(&u, &["z"]), s(&u, &["z"])),
        ];
        // A = {x,y}, B = {z}: c(A) \ c(A∪B) = {x} \ {y} = {x} nonempty,
        // B ∩ c(A∪B) = {z} ∩ {y} = ∅: rho fails.
        let ch = FiniteChoice::new(u.clone(), entries).unwrap();
        let w = check_axiom(&ch, Axiom::Rho);
        assert!(!w.satisfied);
        let v = w.counterexample.unwrap();
        assert!(replay_violation(&ch, Axiom::Rho, &v));
    }

    #[test]
    fn euler_diagram_partitions_the_union() {
        let u = Universe::new(["a", "b", "c", "d"]).unwrap();
        let fam = vec![s(&u, &["a", "b", "c"]), s(&u, &["b", "c", "d"]), s(&u, &["c"])];
        let d = euler_diagram(&fam);
        assert_eq!(
            d.regions,
            vec![s(&u, &["a"]), s(&u, &["b"]), s(&u, &["c"]), s(&u, &["d"])]
        );
        // Signatures: a in fam0; b in fam0, fam1; c in all; d in fam1.
        assert_eq!(d.signatures, vec![0b001, 0b011, 0b111, 0b010]);
        assert_eq!(d.envelope(s(&u, &["a", "d"])).len(), 2);
        assert_eq!(d.region_of(u.lookup("c").unwrap()), Some(2));
        // Empty family: no regions.
        assert!(euler_diagram(&[]).regions.is_empty());
    }

    #[test]
    fn relativized_domain_and_subset_closure() {
        let u = u3();
        let omega = vec![
            s(&u, &["x"]),
            s(&u, &["y"]),
            s(&u, &["x", "y"]),
            s(&u, &["x", "z"]),
        ];
        assert_eq!(
            relativized_domain(&omega, s(&u, &["x", "y"])),
            vec![s(&u, &["x"]), s(&u, &["y"]), s(&u, &["x", "y"])]
        );
        // {x}, {x,y} is not closed: {y} ⊆ {x,y} but {y} ∉ sub.
        let sub = vec![s(&u, &["x"]), s(&u, &["x", "y"])];
        assert_eq!(is_subset_closed(&sub, &omega), Ok(false));
        let sub = vec![s(&u, &["x"]), s(&u, &["y"]), s(&u, &["x", "y"])];
        assert_eq!(is_subset_closed(&sub, &omega), Ok(true));
        assert!(is_subset_closed(&[s(&u, &["z"])], &omega).is_err());
        assert_eq!(is_subset_closed(&[], &omega), Ok(true));
    }

    #[test]
    fn three_cycle_is_rationalized_by_a_cycle() {
        let ch = three_cycle();
        let rel = rationalizable(&ch).expect("rationalizable");
        let u = ch.universe();
        let (x, y, z) = (
            u.lookup("x").unwrap(),
            u.lookup("y").unwrap(),
            u.lookup("z").unwrap(),
        );
        // y loses to x, z loses to y, x loses to z.
        assert_eq!(rel.pairs(), vec![(x, z), (y, x), (z, y)]);
        assert!(rel.has_cycle());
    }

    #[test]
    fn identity_total_choice_is_rationalized_by_empty_relation() {
        let u = u3();
        let full = u.full();
        let entries: Vec<_> = full.nonempty_subsets().map(|m| (m, m)).collect();
        let ch = FiniteChoice::new(u, entries).unwrap();
        assert!(ch.is_total());
        let rel = rationalizable(&ch).unwrap();
        assert!(rel.pairs().is_empty());
        assert!(!rel.has_cycle());
    }

    #[test]
    fn non_rationalizable_choice_is_rejected() {
        // c({x,y}) = {x,y} and c({x,y,z}) = {y,z} and c({x,z}) = {x,z}:
        // the canonical relation is empty, which fails on the triple.
        let u = u3();
        let entries = vec![
            (s(&u, &["x", "y"]), s(&u, &["x", "y"])),
            (s(&u, &["x", "z"]), s(&u, &["x", "z"])),
            (s(&u, &["x", "y", "z"]), s(&u, &["y", "z"])),
        ];
        let ch = FiniteChoice::new(u, entries).unwrap();
        assert!(rationalizable(&ch).is_none());
    }
}
