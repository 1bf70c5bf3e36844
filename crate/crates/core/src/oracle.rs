//! Brute-force reference deciders.
//!
//! Everything here decides by enumeration and shares no machinery with the
//! certificate-based solver or the lifting theorems, so the two sides can
//! check each other. Searches are budgeted: exceeding a budget is an error,
//! never a wrong verdict.

use std::collections::{BTreeMap, BTreeSet};

use crate::choice::{check_axiom, Axiom, FiniteChoice, StrictRelation};
use crate::sets::{ElemSet, Universe};
use crate::solver::Semantics;
use crate::syntax::{Atom, AtomRel, Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("instance too large for brute force: {0}")]
    TooLarge(String),
}

/// A decrementing node budget.
#[derive(Clone, Debug)]
pub struct Budget {
    left: u64,
}

impl Budget {
    pub fn new(nodes: u64) -> Budget {
        Budget { left: nodes }
    }

    pub fn spend(&mut self, nodes: u64) -> Result<(), OracleError> {
        if self.left < nodes {
            return Err(OracleError::BudgetExhausted);
        }
        self.left -= nodes;
        Ok(())
    }
}

/// Limits for [`brute_decide`].
#[derive(Clone, Debug)]
pub struct OracleLimits {
    /// Universe sizes 1..=max_universe are tried in order.
    pub max_universe: usize,
    pub node_budget: u64,
    /// Quotient set assignments by element symmetry (sound because models
    /// are closed under permuting the universe). Disable to enumerate every
    /// assignment.
    pub symmetry: bool,
}

impl Default for OracleLimits {
    fn default() -> OracleLimits {
        OracleLimits { max_universe: 5, node_budget: 20_000_000, symmetry: true }
    }
}

/// A satisfying structure found by enumeration.
#[derive(Clone, Debug)]
pub struct BruteModel {
    pub universe: Universe,
    pub sets: BTreeMap<String, ElemSet>,
    pub individuals: BTreeMap<String, usize>,
    pub choice: FiniteChoice,
}

#[derive(Clone, Debug)]
pub enum BruteVerdict {
    Sat(Box<BruteModel>),
    /// No model with at most `max_universe` elements.
    Unsat,
}

impl BruteVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, BruteVerdict::Sat(_))
    }
}

/// Set and individual variables of a formula, each sorted by name.
pub fn inventory(f: &Formula) -> (Vec<String>, Vec<String>) {
    let mut sets = BTreeSet::new();
    let mut inds = BTreeSet::new();
    f.walk_atoms(&mut |atom: &Atom| {
        for side in [&atom.lhs, &atom.rhs] {
            side.walk(&mut |t: &Term| match t {
                Term::Var(v) => {
                    sets.insert(v.clone());
                }
                Term::Singleton(x) => {
                    inds.insert(x.clone());
                }
                _ => {}
            });
        }
    });
    (sets.into_iter().collect(), inds.into_iter().collect())
}

enum EvalStop {
    /// A choice term was queried at a menu with no assigned value.
    NeedGuess(ElemSet),
    /// A choice term's menu evaluated to the empty set, so the structure
    /// interprets nothing.
    EmptyMenu,
}

fn eval_term(
    t: &Term,
    sets: &BTreeMap<String, ElemSet>,
    inds: &BTreeMap<String, usize>,
    choice: &BTreeMap<ElemSet, ElemSet>,
) -> Result<ElemSet, EvalStop> {
    match t {
        Term::Empty => Ok(ElemSet::EMPTY),
        Term::Var(v) => Ok(sets[v]),
        Term::Singleton(x) => Ok(ElemSet::singleton(inds[x])),
        Term::Union(a, b) => Ok(eval_term(a, sets, inds, choice)?.union(eval_term(b, sets, inds, choice)?)),
        Term::Inter(a, b) => Ok(eval_term(a, sets, inds, choice)?.inter(eval_term(b, sets, inds, choice)?)),
        Term::Diff(a, b) => Ok(eval_term(a, sets, inds, choice)?.diff(eval_term(b, sets, inds, choice)?)),
        Term::Choice(a) => {
            let menu = eval_term(a, sets, inds, choice)?;
            if menu.is_empty() {
                return Err(EvalStop::EmptyMenu);
            }
            match choice.get(&menu) {
                Some(v) => Ok(*v),
                None => Err(EvalStop::NeedGuess(menu)),
            }
        }
    }
}

// Strict evaluation: every subterm is interpreted even when a connective's
// value is already determined, because a structure must interpret the whole
// formula.
fn eval_formula(
    f: &Formula,
    sets: &BTreeMap<String, ElemSet>,
    inds: &BTreeMap<String, usize>,
    choice: &BTreeMap<ElemSet, ElemSet>,
) -> Result<bool, EvalStop> {
    match f {
        Formula::Atom(a) => {
            let lhs = eval_term(&a.lhs, sets, inds, choice)?;
            let rhs = eval_term(&a.rhs, sets, inds, choice)?;
            Ok(match a.rel {
                AtomRel::Eq => lhs == rhs,
                AtomRel::Sub => lhs.subset_of(rhs),
            })
        }
        Formula::Not(g) => Ok(!eval_formula(g, sets, inds, choice)?),
        Formula::And(a, b) => {
            let va = eval_formula(a, sets, inds, choice)?;
            let vb = eval_formula(b, sets, inds, choice)?;
            Ok(va && vb)
        }
        Formula::Or(a, b) => {
            let va = eval_formula(a, sets, inds, choice)?;
            let vb = eval_formula(b, sets, inds, choice)?;
            Ok(va || vb)
        }
        Formula::Imp(a, b) => {
            let va = eval_formula(a, sets, inds, choice)?;
            let vb = eval_formula(b, sets, inds, choice)?;
            Ok(!va || vb)
        }
        Formula::Iff(a, b) => {
            let va = eval_formula(a, sets, inds, choice)?;
            let vb = eval_formula(b, sets, inds, choice)?;
            Ok(va == vb)
        }
    }
}

// Does the axiom hold between two assigned menus, in both orientations?
fn pair_ok(axiom: Axiom, a: ElemSet, ca: ElemSet, b: ElemSet, cb: ElemSet) -> bool {
    fn one(axiom: Axiom, a: ElemSet, ca: ElemSet, b: ElemSet, cb: ElemSet) -> bool {
        if !a.subset_of(b) {
            return true;
        }
        match axiom {
            Axiom::Alpha => a.inter(cb).subset_of(ca),
            Axiom::Beta => ca.inter(cb).is_empty() || ca.subset_of(cb),
            Axiom::Warp => a.inter(cb).is_empty() || ca == a.inter(cb),
            Axiom::Gamma | Axiom::Rho => unreachable!("pairwise axioms only"),
        }
    }
    one(axiom, a, ca, b, cb) && one(axiom, b, cb, a, ca)
}

fn missing_menus(ch: &FiniteChoice) -> Vec<ElemSet> {
    let mut missing: Vec<ElemSet> = ch
        .universe()
        .full()
        .nonempty_subsets()
        .filter(|m| !ch.contains_menu(*m))
        .collect();
    missing.sort_by_key(|m| (m.len(), *m));
    missing
}

fn brute_lift_inner(
    ch: &FiniteChoice,
    axiom: Axiom,
    budget: &mut Budget,
) -> Result<Option<FiniteChoice>, OracleError> {
    assert!(
        matches!(axiom, Axiom::Alpha | Axiom::Beta | Axiom::Warp),
        "extension search covers the pairwise axioms"
    );
    let n = ch.universe().len();
    if n > 10 {
        return Err(OracleError::TooLarge(format!("universe of {n} elements")));
    }
    if !check_axiom(ch, axiom).satisfied {
        return Ok(None);
    }
    let missing = missing_menus(ch);
    let mut assigned: Vec<(ElemSet, ElemSet)> = ch.entries().collect();

    fn dfs(
        missing: &[ElemSet],
        idx: usize,
        axiom: Axiom,
        assigned: &mut Vec<(ElemSet, ElemSet)>,
        budget: &mut Budget,
    ) -> Result<bool, OracleError> {
        if idx == missing.len() {
            return Ok(true);
        }
        let menu = missing[idx];
        for v in menu.nonempty_subsets() {
            budget.spend(1)?;
            if assigned.iter().all(|&(b, cb)| pair_ok(axiom, menu, v, b, cb)) {
                assigned.push((menu, v));
                if dfs(missing, idx + 1, axiom, assigned, budget)? {
                    return Ok(true);
                }
                assigned.pop();
            }
        }
        Ok(false)
    }

    if dfs(&missing, 0, axiom, &mut assigned, budget)? {
        let total = FiniteChoice::new(ch.universe().clone(), assigned)
            .expect("extension assigns valid values");
        debug_assert!(check_axiom(&total, axiom).satisfied);
        Ok(Some(total))
    } else {
        Ok(None)
    }
}

/// Searches for a total extension of `ch` satisfying the axiom, by direct
/// backtracking over the missing menus (smallest first) with pairwise
/// pruning. Returns the first extension found, if any.
pub fn brute_lift(
    ch: &FiniteChoice,
    axiom: Axiom,
    node_budget: u64,
) -> Result<Option<FiniteChoice>, OracleError> {
    let mut budget = Budget::new(node_budget);
    brute_lift_inner(ch, axiom, &mut budget)
}

/// Searches for a binary relation on the universe whose maximal elements
/// extend `ch` to a total choice, by enumerating every irreflexive relation.
/// Returns the first such relation and the induced total choice.
pub fn brute_rational_lift(
    ch: &FiniteChoice,
    node_budget: u64,
) -> Result<Option<(StrictRelation, FiniteChoice)>, OracleError> {
    let n = ch.universe().len();
    if n > 5 {
        return Err(OracleError::TooLarge(format!("universe of {n} elements")));
    }
    let mut budget = Budget::new(node_budget);
    let full = ch.universe().full();
    // Odometer over `above` sets, each ranging over subsets of U \ {i}.
    let mut above = vec![ElemSet::EMPTY; n];
    loop {
        budget.spend(1)?;
        let rel = StrictRelation::new(n, pairs_of(&above));
        if rationalizes(&rel, ch, full) {
            let entries: Vec<_> = full.nonempty_subsets().map(|m| (m, rel.max_in(m))).collect();
            let total = FiniteChoice::new(ch.universe().clone(), entries)
                .expect("maximal sets are nonempty on every menu");
            return Ok(Some((rel, total)));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            let cap = full.diff(ElemSet::singleton(i));
            if above[i] == cap {
                above[i] = ElemSet::EMPTY;
            } else {
                above[i] = next_subset_of(above[i], cap);
                break;
            }
        }
    }
}

fn pairs_of(above: &[ElemSet]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (a, s) in above.iter().enumerate() {
        for b in s.iter() {
            out.push((a, b));
        }
    }
    out
}

// Successor of `cur` among subsets of `cap`, assuming `cur != cap`.
fn next_subset_of(cur: ElemSet, cap: ElemSet) -> ElemSet {
    ElemSet(cur.0.wrapping_sub(cap.0) & cap.0)
}

fn rationalizes(rel: &StrictRelation, ch: &FiniteChoice, full: ElemSet) -> bool {
    ch.entries().all(|(m, c)| rel.max_in(m) == c)
        && full.nonempty_subsets().all(|m| !rel.max_in(m).is_empty())
}

/// Decides satisfiability by enumerating universes of size `1..=max`, set
/// assignments (up to symmetry by default), individual assignments, and
/// choice values lazily at the menus the formula queries; a candidate with
/// the formula true must then extend to a total choice of the semantics,
/// which is checked by [`brute_lift`].
pub fn brute_decide(
    f: &Formula,
    sem: Semantics,
    limits: &OracleLimits,
) -> Result<BruteVerdict, OracleError> {
    let (set_vars, ind_vars) = inventory(f);
    if set_vars.len() > 6 || ind_vars.len() > 6 {
        return Err(OracleError::TooLarge(format!(
            "{} set and {} individual variables",
            set_vars.len(),
            ind_vars.len()
        )));
    }
    let mut budget = Budget::new(limits.node_budget);
    for n in 1..=limits.max_universe {
        let universe = Universe::anonymous(n);
        for sets in set_assignments(n, &set_vars, limits.symmetry, &mut budget)? {
            for inds in ind_assignments(n, &ind_vars) {
                budget.spend(1)?;
                let mut guesses = BTreeMap::new();
                if let Some(total) =
                    search_choice(f, &universe, &sets, &inds, sem, &mut guesses, &mut budget)?
                {
                    return Ok(BruteVerdict::Sat(Box::new(BruteModel {
                        universe,
                        sets,
                        individuals: inds,
                        choice: total,
                    })));
                }
            }
        }
    }
    Ok(BruteVerdict::Unsat)
}

fn search_choice(
    f: &Formula,
    universe: &Universe,
    sets: &BTreeMap<String, ElemSet>,
    inds: &BTreeMap<String, usize>,
    sem: Semantics,
    guesses: &mut BTreeMap<ElemSet, ElemSet>,
    budget: &mut Budget,
) -> Result<Option<FiniteChoice>, OracleError> {
    budget.spend(1)?;
    match eval_formula(f, sets, inds, guesses) {
        Err(EvalStop::EmptyMenu) => Ok(None),
        Err(EvalStop::NeedGuess(menu)) => {
            for v in menu.nonempty_subsets() {
                guesses.insert(menu, v);
                let r = search_choice(f, universe, sets, inds, sem, guesses, budget)?;
                if r.is_some() {
                    return Ok(r);
                }
            }
            guesses.remove(&menu);
            Ok(None)
        }
        Ok(false) => Ok(None),
        Ok(true) => {
            let partial =
                FiniteChoice::new(universe.clone(), guesses.iter().map(|(m, v)| (*m, *v)))
                    .expect("guessed values are valid");
            match sem.axiom() {
                // Any completion will do; keep each remaining menu whole.
                None => {
                    let full = universe.full();
                    let entries = full
                        .nonempty_subsets()
                        .map(|m| (m, guesses.get(&m).copied().unwrap_or(m)));
                    Ok(Some(
                        FiniteChoice::new(universe.clone(), entries).expect("valid completion"),
                    ))
                }
                Some(ax) => brute_lift_inner(&partial, ax, budget),
            }
        }
    }
}

fn ind_assignments(n: usize, vars: &[String]) -> Vec<BTreeMap<String, usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; vars.len()];
    loop {
        out.push(vars.iter().cloned().zip(cur.iter().copied()).collect());
        let mut i = vars.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < n {
                break;
            }
            cur[i] = 0;
        }
    }
}

fn set_assignments(
    n: usize,
    vars: &[String],
    symmetry: bool,
    budget: &mut Budget,
) -> Result<Vec<BTreeMap<String, ElemSet>>, OracleError> {
    let k = vars.len();
    let mut out = Vec::new();
    if symmetry {
        // Elements are interchangeable, so only the number of elements in
        // each cell of the Venn diagram of the variables matters; fill
        // cells with consecutive elements.
        let cells = 1usize << k;
        let mut occ = vec![0usize; cells];
        occ[0] = n;
        loop {
            budget.spend(1)?;
            let mut sets = vec![ElemSet::EMPTY; k];
            let mut next = 0usize;
            for (cell, &count) in occ.iter().enumerate() {
                for _ in 0..count {
                    for (j, s) in sets.iter_mut().enumerate() {
                        if cell & (1 << j) != 0 {
                            s.insert(next);
                        }
                    }
                    next += 1;
                }
            }
            out.push(vars.iter().cloned().zip(sets).collect());
            if !next_composition(&mut occ) {
                return Ok(out);
            }
        }
    } else {
        let mut cur = vec![ElemSet::EMPTY; k];
        let full = ElemSet::full(n);
        loop {
            budget.spend(1)?;
            out.push(vars.iter().cloned().zip(cur.iter().copied()).collect());
            let mut i = k;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if cur[i] == full {
                    cur[i] = ElemSet::EMPTY;
                } else {
                    cur[i] = next_subset_of(cur[i], full);
                    break;
                }
            }
        }
    }
}

// Advances a weak composition (fixed total) to its successor; false at the
// last one. Ordering: move one unit from the leftmost movable position.
fn next_composition(occ: &mut [usize]) -> bool {
    let cells = occ.len();
    if cells <= 1 {
        return false;
    }
    // Find first nonzero among the first cells-1; move one unit right,
    // returning everything before it to cell 0.
    for i in 0..cells - 1 {
        if occ[i] > 0 {
            let take = occ[i] - 1;
            occ[i] = 0;
            occ[0] = take;
            occ[i + 1] += 1;
            return true;
        }
    }
    false
}

/// Decides satisfiability by enumerating entire total choice functions of
/// the semantics (backtracking over menus, smallest first, with pairwise
/// pruning) and evaluating the formula under each. Slower than
/// [`brute_decide`] but shares none of its search structure.
pub fn brute_decide_by_totals(
    f: &Formula,
    sem: Semantics,
    limits: &OracleLimits,
) -> Result<BruteVerdict, OracleError> {
    let (set_vars, ind_vars) = inventory(f);
    if set_vars.len() > 4 || ind_vars.len() > 4 {
        return Err(OracleError::TooLarge("too many variables".into()));
    }
    let mut budget = Budget::new(limits.node_budget);
    for n in 1..=limits.max_universe {
        let universe = Universe::anonymous(n);
        let mut menus: Vec<ElemSet> = universe.full().nonempty_subsets().collect();
        menus.sort_by_key(|m| (m.len(), *m));
        let mut assigned: Vec<(ElemSet, ElemSet)> = Vec::new();
        if let Some(model) = totals_dfs(
            f,
            sem,
            &universe,
            &set_vars,
            &ind_vars,
            &menus,
            &mut assigned,
            limits.symmetry,
            &mut budget,
        )? {
            return Ok(BruteVerdict::Sat(Box::new(model)));
        }
    }
    Ok(BruteVerdict::Unsat)
}

#[allow(clippy::too_many_arguments)]
fn totals_dfs(
    f: &Formula,
    sem: Semantics,
    universe: &Universe,
    set_vars: &[String],
    ind_vars: &[String],
    menus: &[ElemSet],
    assigned: &mut Vec<(ElemSet, ElemSet)>,
    symmetry: bool,
    budget: &mut Budget,
) -> Result<Option<BruteModel>, OracleError> {
    if assigned.len() == menus.len() {
        let total = FiniteChoice::new(universe.clone(), assigned.iter().copied())
            .expect("valid total choice");
        if let Some(ax) = sem.axiom() {
            if !check_axiom(&total, ax).satisfied {
                return Ok(None);
            }
        }
        let table: BTreeMap<ElemSet, ElemSet> = assigned.iter().copied().collect();
        for sets in set_assignments(universe.len(), set_vars, symmetry, budget)? {
            for inds in ind_assignments(universe.len(), ind_vars) {
                budget.spend(1)?;
                if let Ok(true) = eval_formula(f, &sets, &inds, &table) {
                    return Ok(Some(BruteModel {
                        universe: universe.clone(),
                        sets,
                        individuals: inds,
                        choice: total,
                    }));
                }
            }
        }
        return Ok(None);
    }
    let menu = menus[assigned.len()];
    for v in menu.nonempty_subsets() {
        budget.spend(1)?;
        let consistent = match sem.axiom() {
            None => true,
            Some(ax) => assigned.iter().all(|&(b, cb)| pair_ok(ax, menu, v, b, cb)),
        };
        if consistent {
            assigned.push((menu, v));
            let r = totals_dfs(
                f, sem, universe, set_vars, ind_vars, menus, assigned, symmetry, budget,
            )?;
            if r.is_some() {
                return Ok(r);
            }
            assigned.pop();
        }
    }
    Ok(None)
}
