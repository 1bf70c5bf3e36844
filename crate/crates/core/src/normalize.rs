//! Choice-flattening, completion, and the propositional skeleton.
//!
//! The solver works on formulas in *choice-flat* form: every choice term
//! `c(T)` has a choice-free argument. Nested applications are eliminated by
//! introducing fresh set variables `_C1, _C2, ..`(one per eliminated term)
//! together with defining conjuncts. Completion then conjoins, for each
//! choice term, the conditions that make the choice symbol denote a choice
//! function (`0 != c(Ti)` and `c(Ti) <= Ti`) plus single-valuedness
//! (`Ti = Tj -> c(Ti) = c(Tj)`) for each unordered pair. Equality atoms
//! emitted here are order-normalized (lexicographically smaller side first),
//! so one implication per unordered pair suffices.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Atom, Formula, Term};

/// A formula in choice-flat form together with its derived inventories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedFormula {
    pub formula: Formula,
    /// Distinct choice terms `c(T1) .. c(Tk)`, in order of first occurrence.
    /// Every argument is choice-free.
    pub choice_terms: Vec<Term>,
    /// Fresh variables introduced by flattening, mapped to the choice term
    /// each one replaced.
    pub fresh_vars: BTreeMap<String, Term>,
    /// Individual variables, sorted by name.
    pub individual_vars: Vec<String>,
    /// Set variables (including fresh ones), sorted by name.
    pub set_vars: Vec<String>,
    /// Every distinct subterm of the formula. Index 0 is always the empty
    /// set (present by convention); the rest follow first occurrence, with
    /// children listed before parents.
    pub term_universe: Vec<Term>,
}

fn replace_term(t: &Term, from: &Term, to: &Term) -> Term {
    if t == from {
        return to.clone();
    }
    match t {
        Term::Empty | Term::Var(_) | Term::Singleton(_) => t.clone(),
        Term::Union(a, b) => Term::union(replace_term(a, from, to), replace_term(b, from, to)),
        Term::Inter(a, b) => Term::inter(replace_term(a, from, to), replace_term(b, from, to)),
        Term::Diff(a, b) => Term::diff(replace_term(a, from, to), replace_term(b, from, to)),
        Term::Choice(a) => Term::choice(replace_term(a, from, to)),
    }
}

fn replace_in_formula(f: &Formula, from: &Term, to: &Term) -> Formula {
    f.map_atoms(&mut |a| Atom {
        rel: a.rel,
        lhs: replace_term(&a.lhs, from, to),
        rhs: replace_term(&a.rhs, from, to),
    })
}

// First (in left-to-right, innermost-first order) choice term with a
// choice-free argument that occurs properly inside another choice term.
fn find_nested_choice(f: &Formula) -> Option<Term> {
    let mut found: Option<Term> = None;
    f.walk_atoms(&mut |a| {
        for side in [&a.lhs, &a.rhs] {
            side.walk(&mut |t| {
                if found.is_some() {
                    return;
                }
                // `t` is visited children-first; look for a choice term
                // directly containing a flat choice subterm.
                if let Term::Choice(arg) = t {
                    let mut inner: Option<Term> = None;
                    arg.walk(&mut |s| {
                        if inner.is_none() {
                            if let Term::Choice(inner_arg) = s {
                                if inner_arg.is_choice_free() {
                                    inner = Some(s.clone());
                                }
                            }
                        }
                    });
                    if let Some(i) = inner {
                        found = Some(i);
                    }
                }
            });
        }
    });
    found
}

impl NormalizedFormula {
    /// Wraps an already choice-flat formula, deriving all inventories.
    /// Panics if some choice term has a non-choice-free argument; callers
    /// flatten first.
    fn from_flat(formula: Formula, fresh_vars: BTreeMap<String, Term>) -> NormalizedFormula {
        let mut choice_terms: Vec<Term> = Vec::new();
        let mut individual_vars: BTreeSet<String> = BTreeSet::new();
        let mut set_vars: BTreeSet<String> = BTreeSet::new();
        let mut term_universe: Vec<Term> = vec![Term::Empty];
        let mut seen: BTreeSet<Term> = BTreeSet::new();
        seen.insert(Term::Empty);

        formula.walk_atoms(&mut |a| {
            for side in [&a.lhs, &a.rhs] {
                side.walk(&mut |t| {
                    match t {
                        Term::Var(v) => {
                            set_vars.insert(v.clone());
                        }
                        Term::Singleton(x) => {
                            individual_vars.insert(x.clone());
                        }
                        Term::Choice(arg) => {
                            assert!(arg.is_choice_free(), "formula is not choice-flat");
                            if !choice_terms.contains(t) {
                                choice_terms.push(t.clone());
                            }
                        }
                        _ => {}
                    }
                    if seen.insert(t.clone()) {
                        term_universe.push(t.clone());
                    }
                });
            }
        });

        NormalizedFormula {
            formula,
            choice_terms,
            fresh_vars,
            individual_vars: individual_vars.into_iter().collect(),
            set_vars: set_vars.into_iter().collect(),
            term_universe,
        }
    }

    /// Index of a term in [`Self::term_universe`], if present.
    pub fn term_index(&self, t: &Term) -> Option<usize> {
        self.term_universe.iter().position(|u| u == t)
    }

    /// Arguments of the choice terms, in the same order.
    pub fn choice_args(&self) -> Vec<&Term> {
        self.choice_terms
            .iter()
            .map(|t| match t {
                Term::Choice(arg) => arg.as_ref(),
                _ => unreachable!("choice_terms holds only choice terms"),
            })
            .collect()
    }
}

/// Rewrites a formula into choice-flat form.
///
/// Innermost nested choice terms are replaced first: each eliminated term
/// `c(T)` is replaced everywhere by a fresh variable `_Cn` and the defining
/// conjunct `_Cn = c(T)` is appended. The result is equisatisfiable with the
/// input under every semantics.
pub fn to_choice_flat(f: &Formula) -> NormalizedFormula {
    let mut formula = f.clone();
    let mut fresh = BTreeMap::new();
    let mut counter = 0usize;
    while let Some(inner) = find_nested_choice(&formula) {
        counter += 1;
        let name = format!("_C{counter}");
        formula = replace_in_formula(&formula, &inner, &Term::var(&name));
        formula = Formula::and(
            formula,
            Formula::atom(Atom::eq(Term::var(&name), inner.clone())),
        );
        fresh.insert(name, inner);
    }
    NormalizedFormula::from_flat(formula, fresh)
}

/// The conjuncts [`complete`] would add for one choice term.
fn choice_conditions(ct: &Term) -> [Formula; 2] {
    let arg = match ct {
        Term::Choice(arg) => arg.as_ref().clone(),
        _ => unreachable!(),
    };
    [
        Formula::not(Formula::Atom(Atom::eq_normalized(Term::Empty, ct.clone()))),
        Formula::Atom(Atom::sub(ct.clone(), arg)),
    ]
}

/// Conjoins the choice conditions and single-valuedness conditions.
///
/// For each choice term: `0 != c(Ti)` and `c(Ti) <= Ti`. For each unordered
/// pair `i < j`: `Ti = Tj -> c(Ti) = c(Tj)` with both equalities
/// order-normalized. Conjuncts already present are not duplicated, so the
/// operation is idempotent. The term universe is unchanged: every term in
/// the added conjuncts already occurs in the input.
pub fn complete(nf: &NormalizedFormula) -> NormalizedFormula {
    let existing: BTreeSet<Formula> =
        nf.formula.conjuncts().into_iter().cloned().collect();
    let mut additions: Vec<Formula> = Vec::new();
    let push_new = |f: Formula, additions: &mut Vec<Formula>| {
        if !existing.contains(&f) && !additions.contains(&f) {
            additions.push(f);
        }
    };

    for ct in &nf.choice_terms {
        for cond in choice_conditions(ct) {
            push_new(cond, &mut additions);
        }
    }
    let args = nf.choice_args();
    for i in 0..nf.choice_terms.len() {
        for j in i + 1..nf.choice_terms.len() {
            let cond = Formula::imp(
                Formula::Atom(Atom::eq_normalized(args[i].clone(), args[j].clone())),
                Formula::Atom(Atom::eq_normalized(
                    nf.choice_terms[i].clone(),
                    nf.choice_terms[j].clone(),
                )),
            );
            push_new(cond, &mut additions);
        }
    }

    let mut formula = nf.formula.clone();
    for a in additions {
        formula = Formula::and(formula, a);
    }
    let out = NormalizedFormula::from_flat(formula, nf.fresh_vars.clone());
    debug_assert_eq!(
        out.term_universe.len(),
        nf.term_universe.len(),
        "completion must not introduce new terms"
    );
    out
}

/// A propositional formula over numbered atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prop {
    Var(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Imp(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

impl Prop {
    /// Two-valued evaluation.
    pub fn eval(&self, vals: &[bool]) -> bool {
        match self {
            Prop::Var(i) => vals[*i],
            Prop::Not(a) => !a.eval(vals),
            Prop::And(a, b) => a.eval(vals) && b.eval(vals),
            Prop::Or(a, b) => a.eval(vals) || b.eval(vals),
            Prop::Imp(a, b) => !a.eval(vals) || b.eval(vals),
            Prop::Iff(a, b) => a.eval(vals) == b.eval(vals),
        }
    }

    /// Three-valued (Kleene) evaluation over a partial assignment.
    pub fn eval3(&self, vals: &[Option<bool>]) -> Option<bool> {
        match self {
            Prop::Var(i) => vals[*i],
            Prop::Not(a) => a.eval3(vals).map(|v| !v),
            Prop::And(a, b) => match (a.eval3(vals), b.eval3(vals)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Prop::Or(a, b) => match (a.eval3(vals), b.eval3(vals)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Prop::Imp(a, b) => match (a.eval3(vals), b.eval3(vals)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
            Prop::Iff(a, b) => match (a.eval3(vals), b.eval3(vals)) {
                (Some(x), Some(y)) => Some(x == y),
                _ => None,
            },
        }
    }
}

/// The propositional skeleton of a formula: its boolean structure over a
/// numbered list of distinct atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub prop: Prop,
    /// Atom `i` corresponds to `Prop::Var(i)`; syntactically equal atoms
    /// share a variable. Order of first occurrence.
    pub atoms: Vec<Atom>,
}

/// Extracts the propositional skeleton. The atom-to-variable map is a
/// bijection between distinct atoms and variable indices.
pub fn skeleton(nf: &NormalizedFormula) -> Skeleton {
    let mut atoms: Vec<Atom> = Vec::new();
    let mut index: BTreeMap<Atom, usize> = BTreeMap::new();
    fn go(f: &Formula, atoms: &mut Vec<Atom>, index: &mut BTreeMap<Atom, usize>) -> Prop {
        match f {
            Formula::Atom(a) => {
                let i = *index.entry(a.clone()).or_insert_with(|| {
                    atoms.push(a.clone());
                    atoms.len() - 1
                });
                Prop::Var(i)
            }
            Formula::Not(x) => Prop::Not(Box::new(go(x, atoms, index))),
            Formula::And(a, b) => Prop::And(
                Box::new(go(a, atoms, index)),
                Box::new(go(b, atoms, index)),
            ),
            Formula::Or(a, b) => Prop::Or(
                Box::new(go(a, atoms, index)),
                Box::new(go(b, atoms, index)),
            ),
            Formula::Imp(a, b) => Prop::Imp(
                Box::new(go(a, atoms, index)),
                Box::new(go(b, atoms, index)),
            ),
            Formula::Iff(a, b) => Prop::Iff(
                Box::new(go(a, atoms, index)),
                Box::new(go(b, atoms, index)),
            ),
        }
    }
    let prop = go(&nf.formula, &mut atoms, &mut index);
    Skeleton { prop, atoms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, render_formula};

    #[test]
    fn flattening_eliminates_nesting_innermost_first() {
        let f = parse_formula("c(c(c(X))) = 0").unwrap();
        let nf = to_choice_flat(&f);
        assert_eq!(
            render_formula(&nf.formula),
            "c(_C2) = 0 and _C1 = c(X) and _C2 = c(_C1)"
        );
        assert_eq!(nf.fresh_vars.len(), 2);
        assert_eq!(nf.choice_terms.len(), 3);
        for ct in &nf.choice_terms {
            match ct {
                Term::Choice(arg) => assert!(arg.is_choice_free()),
                _ => panic!(),
            }
        }
    }

    #[test]
    fn flat_formulas_are_untouched() {
        let f = parse_formula("0 != c(X) and c(Y + Z) <= Y").unwrap();
        let nf = to_choice_flat(&f);
        assert_eq!(nf.formula, f);
        assert!(nf.fresh_vars.is_empty());
        assert_eq!(nf.choice_terms.len(), 2);
    }

    #[test]
    fn completion_adds_choice_and_single_valuedness_conditions() {
        let f = parse_formula("0 != c(X)").unwrap();
        let nf = complete(&to_choice_flat(&f));
        assert_eq!(render_formula(&nf.formula), "0 != c(X) and c(X) <= X");

        let f = parse_formula("c(X) = X and c(Y) = Y and c(Z) = Z").unwrap();
        let base = to_choice_flat(&f);
        let done = complete(&base);
        let added = done.formula.conjuncts().len() - base.formula.conjuncts().len();
        // 2 conditions per choice term + C(3,2) single-valuedness implications.
        assert_eq!(added, 6 + 3);
        assert!(render_formula(&done.formula).contains("X = Y -> c(X) = c(Y)"));
    }

    #[test]
    fn completion_is_idempotent_and_preserves_terms() {
        for src in ["0 != c(X)", "c(X + Y) = c(Y + X) and x in c({x} + {y})", "X = 0"] {
            let nf = to_choice_flat(&parse_formula(src).unwrap());
            let once = complete(&nf);
            let twice = complete(&once);
            assert_eq!(once, twice, "completion not idempotent on {src}");
            assert_eq!(once.term_universe.len(), nf.term_universe.len());
        }
    }

    #[test]
    fn skeleton_shares_variables_between_equal_atoms() {
        let src = "((X = Y \\ X and Y = X + c(X1)) -> Z != 0) <-> (X = Y \\ X -> (Y = X + c(X1) -> Z = 0))";
        let nf = to_choice_flat(&parse_formula(src).unwrap());
        let sk = skeleton(&nf);
        assert_eq!(sk.atoms.len(), 3);
        use Prop::*;
        let expected = Iff(
            Box::new(Imp(
                Box::new(And(Box::new(Var(0)), Box::new(Var(1)))),
                Box::new(Not(Box::new(Var(2)))),
            )),
            Box::new(Imp(
                Box::new(Var(0)),
                Box::new(Imp(Box::new(Var(1)), Box::new(Var(2)))),
            )),
        );
        assert_eq!(sk.prop, expected);
    }

    #[test]
    fn term_universe_starts_with_empty_and_lists_children_first() {
        let nf = to_choice_flat(&parse_formula("X + Y != 0").unwrap());
        assert_eq!(nf.term_universe[0], Term::Empty);
        let ix = |t: &Term| nf.term_index(t).unwrap();
        assert!(ix(&Term::var("X")) < ix(&Term::union(Term::var("X"), Term::var("Y"))));
    }

    #[test]
    fn prop_eval3_is_kleene() {
        let p = Prop::Imp(Box::new(Prop::Var(0)), Box::new(Prop::Var(1)));
        assert_eq!(p.eval3(&[Some(false), None]), Some(true));
        assert_eq!(p.eval3(&[Some(true), None]), None);
        assert_eq!(p.eval3(&[Some(true), Some(false)]), Some(false));
    }
}
