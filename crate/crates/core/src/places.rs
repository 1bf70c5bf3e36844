//! The certificate engine.
//!
//! Satisfiability of a choice-flat formula reduces to finding a small set of
//! *places*: boolean valuations of the term universe that respect the set
//! operations. Each place stands for one occupied region of a would-be
//! model. A certificate fixes a truth value per atom, a set of places, a
//! designated (sole) place per individual variable, and, for the WARP
//! engine, a rank per place; [`validate_certificate`] re-checks all of this
//! against the definitions, and [`realize`] turns a certificate into a
//! finite model with one element per place.
//!
//! The search is a DPLL loop over atom polarities. At every node the
//! decided atoms are checked for a joint assignment of sole places and
//! per-atom witnesses (a monotone condition, so pruning is sound). Leaves
//! in WARP mode additionally search for a signature set admitting a
//! compatible total preorder, via [`crate::lifting::preorder_ranks`].

use std::collections::{BTreeMap, BTreeSet};

use crate::choice::FiniteChoice;
use crate::lifting::preorder_ranks;
use crate::normalize::{skeleton, NormalizedFormula, Skeleton};
use crate::sets::{ElemSet, Universe, MAX_UNIVERSE};
use crate::syntax::{AtomRel, Formula, Term};

/// Resource ceilings for the engine. Exceeding any of them aborts the
/// search with an error; limits never change a verdict.
#[derive(Clone, Debug)]
pub struct SearchLimits {
    /// Base bits are the free valuation bits of a place (set variables,
    /// singletons, choice values); candidate places are enumerated as all
    /// `2^bits` base assignments.
    pub max_base_bits: usize,
    pub node_budget: u64,
    /// Ceiling on places in a certificate (and so on model size).
    pub max_places: usize,
}

impl Default for SearchLimits {
    fn default() -> SearchLimits {
        SearchLimits { max_base_bits: 16, node_budget: 5_000_000, max_places: MAX_UNIVERSE }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("formula needs {0} base valuation bits, limit is {1}")]
    TooManyBaseBits(usize, usize),
    #[error("search budget exhausted")]
    BudgetExhausted,
    #[error("certificate needs more than {0} places")]
    PlaceLimit(usize),
    #[error("too many distinct choice signatures ({0})")]
    TooManySignatures(usize),
    #[error("{0} choice terms exceed the reduction limit {1}")]
    TooManyChoiceTerms(usize, usize),
    #[error("cannot materialize a model with {0} elements")]
    ModelTooLarge(usize),
}

/// A place's valuation of the whole term universe, one bit per term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Row(pub Vec<u64>);

impl Row {
    pub fn zeros(bits: usize) -> Row {
        Row(vec![0; bits.div_ceil(64)])
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if v {
            self.0[i / 64] |= 1 << (i % 64);
        } else {
            self.0[i / 64] &= !(1 << (i % 64));
        }
    }
}

/// A checkable witness for a satisfiability verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Truth value per skeleton atom.
    pub polarities: Vec<bool>,
    /// The places, each a valuation of the term universe.
    pub places: Vec<Row>,
    /// Index of the sole place carrying each individual variable's
    /// singleton bit, in `individual_vars` order.
    pub soles: Vec<usize>,
    /// WARP only: a rank per place (places outside every menu and value may
    /// carry -1).
    pub ranks: Option<Vec<i64>>,
}

/// Maximal certificate size for one atom assignment: one witness per false
/// atom, one sole place per individual variable, and in WARP mode with
/// choice terms present, one representative per choice signature.
pub fn certificate_bound(false_atoms: usize, ind_vars: usize, k: usize, warp: bool) -> usize {
    false_atoms + ind_vars + if warp && k > 0 { 1 << k } else { 0 }
}

/// Maximal certificate size over all atom assignments satisfying the
/// skeleton. `None` when the skeleton has too many atoms to enumerate.
pub fn formula_bound(nf: &NormalizedFormula, warp: bool) -> Option<usize> {
    let sk = skeleton(nf);
    let n = sk.atoms.len();
    if n > 20 {
        return None;
    }
    let k = nf.choice_terms.len();
    let m = nf.individual_vars.len();
    let mut best = 0;
    let mut vals = vec![false; n];
    for mask in 0u64..(1 << n) {
        for (j, v) in vals.iter_mut().enumerate() {
            *v = mask >> j & 1 == 1;
        }
        if sk.prop.eval(&vals) {
            let falses = vals.iter().filter(|v| !**v).count();
            best = best.max(certificate_bound(falses, m, k, warp));
        }
    }
    Some(best)
}

// How each term's bit derives from a place's base bits.
enum Step {
    Zero,
    Base(usize),
    Union(usize, usize),
    Inter(usize, usize),
    Diff(usize, usize),
}

fn build_steps(nf: &NormalizedFormula) -> (Vec<Step>, usize) {
    let mut steps = Vec::with_capacity(nf.term_universe.len());
    let mut base = 0usize;
    for t in &nf.term_universe {
        let idx = |s: &Term| nf.term_index(s).expect("children precede parents");
        steps.push(match t {
            Term::Empty => Step::Zero,
            Term::Var(_) | Term::Singleton(_) | Term::Choice(_) => {
                base += 1;
                Step::Base(base - 1)
            }
            Term::Union(a, b) => Step::Union(idx(a), idx(b)),
            Term::Inter(a, b) => Step::Inter(idx(a), idx(b)),
            Term::Diff(a, b) => Step::Diff(idx(a), idx(b)),
        });
    }
    (steps, base)
}

fn derive_row(steps: &[Step], base_bits: u64, width: usize) -> Row {
    let mut row = Row::zeros(width);
    for (t, step) in steps.iter().enumerate() {
        let v = match step {
            Step::Zero => false,
            Step::Base(b) => base_bits >> b & 1 == 1,
            Step::Union(a, b) => row.bit(*a) | row.bit(*b),
            Step::Inter(a, b) => row.bit(*a) & row.bit(*b),
            Step::Diff(a, b) => row.bit(*a) & !row.bit(*b),
        };
        row.set(t, v);
    }
    row
}

type SoleVisitor<'a> = dyn FnMut(&[usize], &mut u64) -> Result<bool, SolveError> + 'a;

struct Ctx<'a> {
    warp: bool,
    limits: &'a SearchLimits,
    sk: Skeleton,
    // (relation, lhs term, rhs term) per skeleton atom
    atom_idx: Vec<(AtomRel, usize, usize)>,
    rows: Vec<Row>,
    // signature per row: bit i = menu term of choice i, bit k+i = its value
    row_sigs: Vec<u32>,
    // singleton term index per individual variable
    sing_idx: Vec<usize>,
    // (menu term, value term) per choice term
    sig_terms: Vec<(usize, usize)>,
}

fn spend(budget: &mut u64, n: u64) -> Result<(), SolveError> {
    if *budget < n {
        return Err(SolveError::BudgetExhausted);
    }
    *budget -= n;
    Ok(())
}

impl<'a> Ctx<'a> {
    fn new(nf: &'a NormalizedFormula, warp: bool, limits: &'a SearchLimits, budget: &mut u64) -> Result<Ctx<'a>, SolveError> {
        let sk = skeleton(nf);
        let atom_idx = sk
            .atoms
            .iter()
            .map(|a| {
                let l = nf.term_index(&a.lhs).expect("atom terms are in the universe");
                let r = nf.term_index(&a.rhs).expect("atom terms are in the universe");
                (a.rel, l, r)
            })
            .collect();
        let (steps, base) = build_steps(nf);
        if base > limits.max_base_bits.min(22) {
            return Err(SolveError::TooManyBaseBits(base, limits.max_base_bits.min(22)));
        }
        let width = nf.term_universe.len();
        let count = 1u64 << base;
        spend(budget, count)?;
        let rows: Vec<Row> = (0..count).map(|b| derive_row(&steps, b, width)).collect();
        let sig_terms: Vec<(usize, usize)> = nf
            .choice_terms
            .iter()
            .map(|ct| {
                let arg = match ct {
                    Term::Choice(a) => a.as_ref(),
                    _ => unreachable!("choice terms are choices"),
                };
                (
                    nf.term_index(arg).expect("menu term present"),
                    nf.term_index(ct).expect("choice term present"),
                )
            })
            .collect();
        let k = sig_terms.len();
        assert!(2 * k <= 32, "signature must fit in 32 bits");
        let row_sigs = rows
            .iter()
            .map(|row| {
                let mut sig = 0u32;
                for (i, (t, c)) in sig_terms.iter().enumerate() {
                    if row.bit(*t) {
                        sig |= 1 << i;
                    }
                    if row.bit(*c) {
                        sig |= 1 << (k + i);
                    }
                }
                sig
            })
            .collect();
        let sing_idx = nf
            .individual_vars
            .iter()
            .map(|x| {
                nf.term_index(&Term::singleton(x))
                    .expect("individual variables occur as singletons")
            })
            .collect();
        Ok(Ctx { warp, limits, sk, atom_idx, rows, row_sigs, sing_idx, sig_terms })
    }

    fn row_sat(&self, row: usize, atom: usize) -> bool {
        let (rel, l, r) = self.atom_idx[atom];
        let (bl, br) = (self.rows[row].bit(l), self.rows[row].bit(r));
        match rel {
            AtomRel::Eq => bl == br,
            AtomRel::Sub => !bl || br,
        }
    }

    fn is_sole_candidate(&self, row: usize) -> bool {
        self.sing_idx.iter().any(|&s| self.rows[row].bit(s))
    }

    // Rows compatible with the decided-true atoms, split into general
    // places (no singleton bits) and the rest.
    fn feasible_rows(&self, assign: &[Option<bool>]) -> (Vec<usize>, Vec<usize>) {
        let mut ok = Vec::new();
        let mut p0 = Vec::new();
        'rows: for r in 0..self.rows.len() {
            for (j, v) in assign.iter().enumerate() {
                if *v == Some(true) && !self.row_sat(r, j) {
                    continue 'rows;
                }
            }
            ok.push(r);
            if !self.is_sole_candidate(r) {
                p0.push(r);
            }
        }
        (ok, p0)
    }

    // Enumerates consistent assignments of sole places to individual
    // variables; `visit` returns true to stop early.
    fn sole_combos(
        &self,
        ok: &[usize],
        budget: &mut u64,
        soles: &mut Vec<usize>,
        visit: &mut SoleVisitor,
    ) -> Result<bool, SolveError> {
        let j = soles.len();
        if j == self.sing_idx.len() {
            return visit(soles, budget);
        }
        let sj = self.sing_idx[j];
        for &r in ok {
            if !self.rows[r].bit(sj) {
                continue;
            }
            spend(budget, 1)?;
            let consistent = (0..j).all(|i| {
                soles[i] == r
                    || (!self.rows[r].bit(self.sing_idx[i]) && !self.rows[soles[i]].bit(sj))
            });
            if consistent {
                soles.push(r);
                if self.sole_combos(ok, budget, soles, visit)? {
                    return Ok(true);
                }
                soles.pop();
            }
        }
        Ok(false)
    }

    // One witness row (from the pool) at which the atom fails, or None.
    fn witness_for<'p>(
        &self,
        atom: usize,
        pool: impl IntoIterator<Item = &'p usize>,
    ) -> Option<usize> {
        pool.into_iter().copied().find(|&r| !self.row_sat(r, atom))
    }

    fn false_atoms(&self, assign: &[Option<bool>]) -> Vec<usize> {
        (0..assign.len()).filter(|&j| assign[j] == Some(false)).collect()
    }

    // Does any sole assignment admit witnesses for every decided-false
    // atom? Monotone in the decided set, so a failure prunes the subtree.
    fn partial_feasible(&self, assign: &[Option<bool>], budget: &mut u64) -> Result<bool, SolveError> {
        let (ok, p0) = self.feasible_rows(assign);
        let falses = self.false_atoms(assign);
        self.sole_combos(&ok, budget, &mut Vec::new(), &mut |soles, budget| {
            spend(budget, 1)?;
            Ok(falses
                .iter()
                .all(|&fa| self.witness_for(fa, p0.iter().chain(soles)).is_some()))
        })
    }

    fn make_certificate(
        &self,
        assign: &[Option<bool>],
        place_rows: &BTreeSet<usize>,
        soles: &[usize],
        rank_of_sig: Option<&BTreeMap<u32, i64>>,
    ) -> Certificate {
        let order: Vec<usize> = place_rows.iter().copied().collect();
        let position = |r: usize| order.iter().position(|&o| o == r).expect("row placed");
        Certificate {
            polarities: assign.iter().map(|v| v.expect("leaf assignment")).collect(),
            places: order.iter().map(|&r| self.rows[r].clone()).collect(),
            soles: soles.iter().map(|&r| position(r)).collect(),
            ranks: rank_of_sig.map(|m| {
                order
                    .iter()
                    .map(|&r| m.get(&self.row_sigs[r]).copied().unwrap_or(-1))
                    .collect()
            }),
        }
    }

    // Leaf search: all atoms decided and the skeleton is true; find an
    // actual certificate.
    fn leaf_certificate(
        &self,
        assign: &[Option<bool>],
        budget: &mut u64,
    ) -> Result<Option<Certificate>, SolveError> {
        let (ok, p0) = self.feasible_rows(assign);
        let falses = self.false_atoms(assign);
        let k = self.sig_terms.len();
        let bound = certificate_bound(falses.len(), self.sing_idx.len(), k, self.warp)
            .min(self.limits.max_places);
        let mut found: Option<Certificate> = None;
        self.sole_combos(&ok, budget, &mut Vec::new(), &mut |soles, budget| {
            spend(budget, 1)?;
            if !self.warp || k == 0 {
                let mut chosen: BTreeSet<usize> = soles.iter().copied().collect();
                for &fa in &falses {
                    match self.witness_for(fa, p0.iter().chain(soles)) {
                        Some(w) => {
                            chosen.insert(w);
                        }
                        None => return Ok(false),
                    }
                }
                if chosen.len() > bound {
                    return Err(SolveError::PlaceLimit(bound));
                }
                let ranks = self.warp.then(|| BTreeMap::from([(0u32, -1i64)]));
                found = Some(self.make_certificate(assign, &chosen, soles, ranks.as_ref()));
                return Ok(true);
            }
            self.warp_leaf(assign, &p0, soles, &falses, bound, budget, &mut found)
        })?;
        Ok(found)
    }

    // WARP leaf for one sole assignment: search signature sets (smallest
    // first) admitting a compatible preorder, witnesses included.
    #[allow(clippy::too_many_arguments)]
    fn warp_leaf(
        &self,
        assign: &[Option<bool>],
        p0: &[usize],
        soles: &[usize],
        falses: &[usize],
        bound: usize,
        budget: &mut u64,
        found: &mut Option<Certificate>,
    ) -> Result<bool, SolveError> {
        let k = self.sig_terms.len();
        let mandatory: BTreeSet<u32> = soles
            .iter()
            .map(|&r| self.row_sigs[r])
            .filter(|&s| s != 0)
            .collect();
        let optional: Vec<u32> = p0
            .iter()
            .map(|&r| self.row_sigs[r])
            .filter(|s| *s != 0 && !mandatory.contains(s))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if optional.len() > 16 {
            return Err(SolveError::TooManySignatures(optional.len()));
        }
        let mut masks: Vec<u32> = (0..1u32 << optional.len()).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        'masks: for mask in masks {
            if mandatory.len() + mask.count_ones() as usize > bound {
                continue;
            }
            spend(budget, 1)?;
            let mut sigs: BTreeSet<u32> = mandatory.clone();
            for (i, s) in optional.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    sigs.insert(*s);
                }
            }
            // Witnesses must come from places whose signature is allowed
            // (signature 0 places are always allowed).
            let mut chosen: BTreeSet<usize> = soles.iter().copied().collect();
            for &fa in falses {
                let w = self.witness_for(
                    fa,
                    p0.iter()
                        .filter(|&&r| {
                            let s = self.row_sigs[r];
                            s == 0 || sigs.contains(&s)
                        })
                        .chain(soles),
                );
                match w {
                    Some(w) => {
                        chosen.insert(w);
                    }
                    None => continue 'masks,
                }
            }
            let items: Vec<u32> = sigs.iter().copied().collect();
            let groups: Vec<(Vec<usize>, Vec<usize>)> = (0..k)
                .map(|i| {
                    let env = (0..items.len())
                        .filter(|&p| items[p] >> i & 1 == 1)
                        .collect();
                    let top = (0..items.len())
                        .filter(|&p| items[p] >> (k + i) & 1 == 1)
                        .collect();
                    (env, top)
                })
                .collect();
            let Some(ranks) = preorder_ranks(items.len(), &groups) else {
                continue;
            };
            // One representative place per signature in play.
            for s in &sigs {
                if chosen.iter().any(|&r| self.row_sigs[r] == *s) {
                    continue;
                }
                match p0.iter().find(|&&r| self.row_sigs[r] == *s) {
                    Some(&rep) => {
                        chosen.insert(rep);
                    }
                    None => continue 'masks,
                }
            }
            if chosen.len() > bound {
                continue;
            }
            let rank_of_sig: BTreeMap<u32, i64> = items
                .iter()
                .zip(&ranks)
                .map(|(s, r)| (*s, *r as i64))
                .chain([(0u32, -1i64)])
                .collect();
            *found = Some(self.make_certificate(assign, &chosen, soles, Some(&rank_of_sig)));
            return Ok(true);
        }
        Ok(false)
    }

    fn dpll(&self, assign: &mut [Option<bool>], budget: &mut u64) -> Result<Option<Certificate>, SolveError> {
        spend(budget, 1)?;
        if self.sk.prop.eval3(assign) == Some(false) {
            return Ok(None);
        }
        // Unit propagation: force any atom whose other value refutes the
        // skeleton outright.
        let mut assign = assign.to_vec();
        loop {
            let mut changed = false;
            for j in 0..assign.len() {
                if assign[j].is_some() {
                    continue;
                }
                let mut forced = None;
                for v in [true, false] {
                    assign[j] = Some(v);
                    let refuted = self.sk.prop.eval3(&assign) == Some(false);
                    assign[j] = None;
                    if refuted {
                        if forced == Some(!v) {
                            return Ok(None);
                        }
                        forced = Some(!v);
                    }
                }
                if let Some(v) = forced {
                    assign[j] = Some(v);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if self.sk.prop.eval3(&assign) == Some(false) {
            return Ok(None);
        }
        if !self.partial_feasible(&assign, budget)? {
            return Ok(None);
        }
        match assign.iter().position(|v| v.is_none()) {
            None => {
                debug_assert_eq!(self.sk.prop.eval3(&assign), Some(true));
                self.leaf_certificate(&assign, budget)
            }
            Some(j) => {
                for v in [true, false] {
                    assign[j] = Some(v);
                    if let Some(cert) = self.dpll(&mut assign, budget)? {
                        return Ok(Some(cert));
                    }
                }
                assign[j] = None;
                Ok(None)
            }
        }
    }
}

/// Decides satisfiability of a choice-flat formula over places.
///
/// With `warp` false this is the choice-free engine: choice values are
/// opaque base bits, constrained only by the formula's atoms. With `warp`
/// true, leaves additionally require a total preorder on choice signatures
/// compatible with every menu/value pair.
///
/// Returns a certificate for satisfiable formulas, `None` for unsatisfiable
/// ones. All limits surface as errors.
pub fn decide(
    nf: &NormalizedFormula,
    warp: bool,
    limits: &SearchLimits,
) -> Result<Option<Certificate>, SolveError> {
    let mut budget = limits.node_budget;
    let ctx = Ctx::new(nf, warp, limits, &mut budget)?;
    let mut assign = vec![None; ctx.sk.atoms.len()];
    let cert = ctx.dpll(&mut assign, &mut budget)?;
    if let Some(c) = &cert {
        debug_assert_eq!(validate_certificate(nf, warp, c), Ok(()));
    }
    Ok(cert)
}

/// Re-checks a certificate against the definitions, sharing nothing with
/// the search: skeleton truth, derivation of every compound term bit, sole
/// place uniqueness, witnesses for false atoms, rank compatibility (WARP),
/// and the place-count bound.
pub fn validate_certificate(
    nf: &NormalizedFormula,
    warp: bool,
    cert: &Certificate,
) -> Result<(), String> {
    let sk = skeleton(nf);
    if cert.polarities.len() != sk.atoms.len() {
        return Err("wrong polarity count".into());
    }
    if !sk.prop.eval(&cert.polarities) {
        return Err("polarities do not satisfy the skeleton".into());
    }
    let width = nf.term_universe.len();
    for (p, row) in cert.places.iter().enumerate() {
        if row.0.len() != width.div_ceil(64) {
            return Err(format!("place {p} has the wrong width"));
        }
        for (t, term) in nf.term_universe.iter().enumerate() {
            let idx = |s: &Term| nf.term_index(s).ok_or(format!("unknown subterm of term {t}"));
            let expect = match term {
                Term::Empty => false,
                Term::Var(_) | Term::Singleton(_) | Term::Choice(_) => continue,
                Term::Union(a, b) => row.bit(idx(a)?) | row.bit(idx(b)?),
                Term::Inter(a, b) => row.bit(idx(a)?) & row.bit(idx(b)?),
                Term::Diff(a, b) => row.bit(idx(a)?) & !row.bit(idx(b)?),
            };
            if row.bit(t) != expect {
                return Err(format!("place {p} breaks the set operations at term {t}"));
            }
        }
    }
    if cert.soles.len() != nf.individual_vars.len() {
        return Err("wrong sole count".into());
    }
    for (j, x) in nf.individual_vars.iter().enumerate() {
        let s = nf
            .term_index(&Term::singleton(x))
            .ok_or("missing singleton term")?;
        let carriers: Vec<usize> =
            (0..cert.places.len()).filter(|&p| cert.places[p].bit(s)).collect();
        if carriers != [cert.soles[j]] {
            return Err(format!("variable {x} must have exactly its sole place"));
        }
    }
    for (j, atom) in sk.atoms.iter().enumerate() {
        let l = nf.term_index(&atom.lhs).ok_or("missing atom term")?;
        let r = nf.term_index(&atom.rhs).ok_or("missing atom term")?;
        let sat = |row: &Row| match atom.rel {
            AtomRel::Eq => row.bit(l) == row.bit(r),
            AtomRel::Sub => !row.bit(l) || row.bit(r),
        };
        if cert.polarities[j] {
            if !cert.places.iter().all(sat) {
                return Err(format!("true atom {j} fails at some place"));
            }
        } else if cert.places.iter().all(sat) {
            return Err(format!("false atom {j} has no witness place"));
        }
    }
    let k = nf.choice_terms.len();
    if warp {
        let ranks = cert.ranks.as_ref().ok_or("warp certificate needs ranks")?;
        if ranks.len() != cert.places.len() {
            return Err("wrong rank count".into());
        }
        for ct in &nf.choice_terms {
            let arg = match ct {
                Term::Choice(a) => a.as_ref(),
                _ => unreachable!(),
            };
            let t = nf.term_index(arg).ok_or("missing menu term")?;
            let c = nf.term_index(ct).ok_or("missing value term")?;
            let menu: Vec<usize> = (0..cert.places.len())
                .filter(|&p| cert.places[p].bit(t))
                .collect();
            let value: Vec<usize> = (0..cert.places.len())
                .filter(|&p| cert.places[p].bit(c))
                .collect();
            for &p in &menu {
                for &q in &value {
                    if ranks[p] > ranks[q] {
                        return Err("menu place outranks a value place".into());
                    }
                }
            }
            if let Some(top) = menu.iter().map(|&p| ranks[p]).max() {
                for &p in &menu {
                    if ranks[p] == top && !cert.places[p].bit(c) {
                        return Err("rank-maximal menu place outside the value".into());
                    }
                }
            }
        }
    } else if cert.ranks.is_some() {
        return Err("unexpected ranks".into());
    }
    let falses = cert.polarities.iter().filter(|p| !**p).count();
    let bound = certificate_bound(falses, nf.individual_vars.len(), k, warp);
    if cert.places.len() > bound {
        return Err(format!("{} places exceed the bound {bound}", cert.places.len()));
    }
    if cert.places.len() > MAX_UNIVERSE {
        return Err("too many places".into());
    }
    Ok(())
}

/// A certificate made concrete: one element per place (or a single padding
/// element if the certificate has none).
#[derive(Clone, Debug)]
pub struct Realized {
    pub universe: Universe,
    pub sets: BTreeMap<String, ElemSet>,
    pub individuals: BTreeMap<String, usize>,
    /// Deduplicated menu/value pairs of the choice terms.
    pub menus: Vec<(ElemSet, ElemSet)>,
    /// Element ranks from a WARP certificate.
    pub ranks: Option<Vec<i64>>,
}

/// Reads a model skeleton off a certificate: element `i` realizes place
/// `i`, sets and menus are the columns of the place rows.
pub fn realize(nf: &NormalizedFormula, cert: &Certificate) -> Realized {
    let padded = cert.places.is_empty();
    let n = cert.places.len().max(1);
    let universe = Universe::anonymous(n);
    let column = |t: usize| {
        let mut s = ElemSet::EMPTY;
        for (p, row) in cert.places.iter().enumerate() {
            if row.bit(t) {
                s.insert(p);
            }
        }
        s
    };
    let sets = nf
        .set_vars
        .iter()
        .map(|v| {
            let t = nf.term_index(&Term::var(v)).expect("set variable occurs");
            (v.clone(), column(t))
        })
        .collect();
    let individuals = nf
        .individual_vars
        .iter()
        .zip(&cert.soles)
        .map(|(x, &p)| (x.clone(), p))
        .collect();
    let mut menus: BTreeMap<ElemSet, ElemSet> = BTreeMap::new();
    for ct in &nf.choice_terms {
        let arg = match ct {
            Term::Choice(a) => a.as_ref(),
            _ => unreachable!(),
        };
        let menu = column(nf.term_index(arg).expect("menu term occurs"));
        let value = column(nf.term_index(ct).expect("choice term occurs"));
        if let Some(prev) = menus.insert(menu, value) {
            assert_eq!(prev, value, "choice terms must value equal menus equally");
        }
    }
    let ranks = cert.ranks.as_ref().map(|rs| {
        if padded {
            vec![-1]
        } else {
            rs.clone()
        }
    });
    Realized {
        universe,
        sets,
        individuals,
        menus: menus.into_iter().collect(),
        ranks,
    }
}

/// A full finite structure: universe, variable assignments, and a total
/// choice function.
#[derive(Clone, Debug)]
pub struct FiniteModel {
    pub universe: Universe,
    pub sets: BTreeMap<String, ElemSet>,
    pub individuals: BTreeMap<String, usize>,
    pub choice: FiniteChoice,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("choice applied to the empty set")]
    EmptyMenu,
    #[error("choice undefined at a menu")]
    MissingMenu,
    #[error("unbound variable {0}")]
    UnboundVar(String),
}

impl FiniteModel {
    pub fn eval_term(&self, t: &Term) -> Result<ElemSet, ModelError> {
        match t {
            Term::Empty => Ok(ElemSet::EMPTY),
            Term::Var(v) => self
                .sets
                .get(v)
                .copied()
                .ok_or_else(|| ModelError::UnboundVar(v.clone())),
            Term::Singleton(x) => self
                .individuals
                .get(x)
                .map(|&i| ElemSet::singleton(i))
                .ok_or_else(|| ModelError::UnboundVar(x.clone())),
            Term::Union(a, b) => Ok(self.eval_term(a)?.union(self.eval_term(b)?)),
            Term::Inter(a, b) => Ok(self.eval_term(a)?.inter(self.eval_term(b)?)),
            Term::Diff(a, b) => Ok(self.eval_term(a)?.diff(self.eval_term(b)?)),
            Term::Choice(a) => {
                let menu = self.eval_term(a)?;
                if menu.is_empty() {
                    return Err(ModelError::EmptyMenu);
                }
                self.choice.choose(menu).ok_or(ModelError::MissingMenu)
            }
        }
    }

    /// Strict evaluation: every subterm must be interpretable.
    pub fn eval(&self, f: &Formula) -> Result<bool, ModelError> {
        match f {
            Formula::Atom(a) => {
                let l = self.eval_term(&a.lhs)?;
                let r = self.eval_term(&a.rhs)?;
                Ok(match a.rel {
                    AtomRel::Eq => l == r,
                    AtomRel::Sub => l.subset_of(r),
                })
            }
            Formula::Not(g) => Ok(!self.eval(g)?),
            Formula::And(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                Ok(x && y)
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                Ok(x || y)
            }
            Formula::Imp(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                Ok(!x || y)
            }
            Formula::Iff(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                Ok(x == y)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::{complete, to_choice_flat};
    use crate::syntax::parse_formula;

    fn prep(text: &str) -> NormalizedFormula {
        complete(&to_choice_flat(&parse_formula(text).unwrap()))
    }

    fn decide_text(text: &str, warp: bool) -> Option<Certificate> {
        let nf = prep(text);
        let cert = decide(&nf, warp, &SearchLimits::default()).unwrap();
        if let Some(c) = &cert {
            validate_certificate(&nf, warp, c).unwrap();
        }
        cert
    }

    #[test]
    fn decides_choice_free_basics() {
        assert!(decide_text("X != 0", false).is_some());
        assert!(decide_text("X = 0 and X != 0", false).is_none());
        assert!(decide_text("x in X and x in Y and X & Y = 0", false).is_none());
        assert!(decide_text("X <= Y and Y <= Z and not (X <= Z)", false).is_none());
        assert!(decide_text("X \\ Y != 0 and X <= Y", false).is_none());
    }

    #[test]
    fn sole_places_separate_individuals() {
        let cert = decide_text("x != y", false).expect("satisfiable");
        assert_eq!(cert.places.len(), 2);
        assert_eq!(cert.soles.len(), 2);
        assert_ne!(cert.soles[0], cert.soles[1]);

        let cert = decide_text("x = y and x in X", false).expect("satisfiable");
        assert_eq!(cert.soles[0], cert.soles[1]);
    }

    #[test]
    fn completion_forces_nonempty_choice_values() {
        // The completed formula constrains c(X) even without explicit
        // conditions in the input.
        let nf = prep("c(X) = c(X)");
        let cert = decide(&nf, false, &SearchLimits::default()).unwrap().unwrap();
        let realized = realize(&nf, &cert);
        let (menu, value) = realized.menus[0];
        assert!(!value.is_empty());
        assert!(value.subset_of(menu));
    }

    #[test]
    fn menu_contrast_is_satisfiable_without_ranks_but_not_with() {
        let text = "x in c({x} + {y}) and y in c({x} + {y} + {z}) \
                    and not (x in c({x} + {y} + {z})) and x != y and y != z and x != z";
        assert!(decide_text(text, false).is_some());
        assert!(decide_text(text, true).is_none());
    }

    #[test]
    fn warp_certificates_carry_compatible_ranks() {
        let cert = decide_text("x in c({x} + {y}) and x != y", true).expect("satisfiable");
        let ranks = cert.ranks.as_ref().unwrap();
        assert_eq!(ranks.len(), cert.places.len());
    }

    #[test]
    fn realized_models_satisfy_the_formula() {
        let texts = [
            "X != 0 and Y <= X",
            "x in X and not (x in Y) and y in Y",
            "c(X + Y) <= X and X != 0 and Y != 0",
        ];
        for text in texts {
            let f = parse_formula(text).unwrap();
            let nf = prep(text);
            let cert = decide(&nf, false, &SearchLimits::default()).unwrap().expect(text);
            let realized = realize(&nf, &cert);
            // Case-wise total choice: menus from the certificate, identity
            // elsewhere.
            let table: BTreeMap<ElemSet, ElemSet> = realized.menus.iter().copied().collect();
            let entries = realized
                .universe
                .full()
                .nonempty_subsets()
                .map(|m| (m, table.get(&m).copied().unwrap_or(m)));
            let choice = FiniteChoice::new(realized.universe.clone(), entries).unwrap();
            let model = FiniteModel {
                universe: realized.universe.clone(),
                sets: realized.sets.clone(),
                individuals: realized.individuals.clone(),
                choice,
            };
            assert_eq!(model.eval(&f), Ok(true), "{text}");
        }
    }

    #[test]
    fn validator_rejects_tampering() {
        let nf = prep("x in X and X != 0");
        let cert = decide(&nf, false, &SearchLimits::default()).unwrap().unwrap();
        let mut bad = cert.clone();
        bad.polarities[0] = !bad.polarities[0];
        assert!(validate_certificate(&nf, false, &bad).is_err());

        let mut bad = cert.clone();
        bad.places.clear();
        bad.soles.clear();
        assert!(validate_certificate(&nf, false, &bad).is_err());
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let nf = prep("X != 0 and Y != 0 and Z != 0 and x != y");
        let limits = SearchLimits { node_budget: 3, ..SearchLimits::default() };
        assert!(matches!(
            decide(&nf, false, &limits),
            Err(SolveError::BudgetExhausted)
        ));
    }

    #[test]
    fn place_ceiling_is_enforced() {
        let nf = prep("x != y and y != z and x != z");
        let limits = SearchLimits { max_places: 1, ..SearchLimits::default() };
        assert!(matches!(
            decide(&nf, false, &limits),
            Err(SolveError::PlaceLimit(1))
        ));
    }

    #[test]
    fn bounds_cover_found_certificates() {
        let texts = ["x != y", "X != 0 and Y != X", "c(X) != X"];
        for text in texts {
            let nf = prep(text);
            for warp in [false, true] {
                let bound = formula_bound(&nf, warp).unwrap();
                if let Some(cert) = decide(&nf, warp, &SearchLimits::default()).unwrap() {
                    assert!(cert.places.len() <= bound, "{text}");
                }
            }
        }
    }
}
