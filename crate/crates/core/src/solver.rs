//! Satisfiability decisions for the full language.
//!
//! [`solve`] completes a formula, routes it through the place engine, and
//! turns certificates into concrete self-validated models. Each semantics
//! beyond the unrestricted one rides on a reduction:
//!
//!  * alpha: conjoin, per ordered pair of choice terms, the containment
//!    condition `Ti <= Tj -> Ti & c(Tj) <= c(Ti)`, and per nonempty index
//!    set the requirement that the pooled menus are not covered by the
//!    pooled rejections; decide choice-free; lift the model's menu table.
//!  * beta: conjoin `Ti <= Tj and c(Ti) & c(Tj) != 0 -> c(Ti) <= c(Tj)`
//!    per ordered pair; decide choice-free; lift the menu table.
//!  * warp: run the engine in rank mode and choose by maximal rank.
//!
//! Formulas without choice terms skip all of this: any verdict transfers
//! between the semantics, and a satisfying model takes the identity choice
//! function, which satisfies every axiom.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::choice::{check_axiom, Axiom, FiniteChoice};
use crate::lifting::{liftable, LiftDecision};
use crate::normalize::{complete, skeleton, to_choice_flat, NormalizedFormula};
use crate::places::{
    decide, formula_bound, realize, validate_certificate, Certificate, FiniteModel, SearchLimits,
    SolveError,
};
use crate::sets::{ElemSet, Universe};
use crate::syntax::{Atom, Formula, Term};

/// Which class of choice functions a formula is interpreted over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Any total choice function.
    Unrestricted,
    /// Total choice functions satisfying (α).
    Alpha,
    /// Total choice functions satisfying (β).
    Beta,
    /// Total choice functions satisfying WARP.
    Warp,
}

impl Semantics {
    pub const ALL: [Semantics; 4] = [
        Semantics::Unrestricted,
        Semantics::Alpha,
        Semantics::Beta,
        Semantics::Warp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Unrestricted => "unrestricted",
            Semantics::Alpha => "alpha",
            Semantics::Beta => "beta",
            Semantics::Warp => "warp",
        }
    }

    pub fn parse(s: &str) -> Option<Semantics> {
        Semantics::ALL.into_iter().find(|m| m.name() == s)
    }

    /// The axiom constraining the choice function, if any.
    pub fn axiom(self) -> Option<Axiom> {
        match self {
            Semantics::Unrestricted => None,
            Semantics::Alpha => Some(Axiom::Alpha),
            Semantics::Beta => Some(Axiom::Beta),
            Semantics::Warp => Some(Axiom::Warp),
        }
    }
}

/// Ceiling on choice terms for the alpha reduction, which conjoins one
/// condition per nonempty subset of them.
pub const MAX_REDUCTION_CHOICE_TERMS: usize = 12;

/// Ceiling on model size; bigger certificates are not materialized.
pub const MAX_MODEL_UNIVERSE: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct Stats {
    /// Distinct atoms of the formula actually decided (after completion
    /// and any reduction).
    pub atoms: usize,
    /// Choice terms of the completed input.
    pub choice_terms: usize,
    pub individual_vars: usize,
    /// Worst-case model size over all skeleton-satisfying atom
    /// assignments, when small enough to enumerate.
    pub place_bound: Option<usize>,
    /// Places of the found certificate.
    pub places: Option<usize>,
    pub model_size: Option<usize>,
}

/// A satisfying structure together with the certificate it came from.
#[derive(Clone, Debug)]
pub struct SatModel {
    pub model: FiniteModel,
    /// Element ranks under the warp semantics.
    pub ranks: Option<Vec<i64>>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Sat(Box<SatModel>),
    Unsat,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub semantics: Semantics,
    pub verdict: Verdict,
    pub stats: Stats,
}

impl Outcome {
    pub fn status(&self) -> &'static str {
        match self.verdict {
            Verdict::Sat(_) => "sat",
            Verdict::Unsat => "unsat",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let model = match &self.verdict {
            Verdict::Sat(sat) => model_json(sat),
            Verdict::Unsat => serde_json::Value::Null,
        };
        serde_json::json!({
            "status": self.status(),
            "semantics": self.semantics.name(),
            "model": model,
            "stats": self.stats,
        })
    }
}

fn model_json(sat: &SatModel) -> serde_json::Value {
    let u = &sat.model.universe;
    let sets: BTreeMap<&String, Vec<String>> =
        sat.model.sets.iter().map(|(v, s)| (v, u.render(*s))).collect();
    let individuals: BTreeMap<&String, &str> =
        sat.model.individuals.iter().map(|(x, &i)| (x, u.name(i))).collect();
    let choice: Vec<serde_json::Value> = sat
        .model
        .choice
        .entries()
        .map(|(m, v)| serde_json::json!({"menu": u.render(m), "chosen": u.render(v)}))
        .collect();
    let ranks = sat.ranks.as_ref().map(|rs| {
        rs.iter()
            .enumerate()
            .map(|(i, r)| (u.name(i), *r))
            .collect::<BTreeMap<&str, i64>>()
    });
    serde_json::json!({
        "universe": u.names(),
        "individuals": individuals,
        "sets": sets,
        "choice": choice,
        "ranks": ranks,
    })
}

/// Decides satisfiability of `f` over the given semantics and, when
/// satisfiable, materializes a model. Every returned model is re-checked:
/// it satisfies the input under strict evaluation, and its choice function
/// satisfies the semantics' axiom (verified exhaustively on small
/// universes).
pub fn solve(
    f: &Formula,
    semantics: Semantics,
    limits: &SearchLimits,
) -> Result<Outcome, SolveError> {
    let nfc = complete(&to_choice_flat(f));
    let k = nfc.choice_terms.len();
    let (nf, warp) = if k == 0 {
        (nfc, false)
    } else {
        match semantics {
            Semantics::Unrestricted => (nfc, false),
            Semantics::Alpha => (conjoined(&nfc, alpha_conditions(&nfc)?), false),
            Semantics::Beta => (conjoined(&nfc, beta_conditions(&nfc)), false),
            Semantics::Warp => (nfc, true),
        }
    };
    let cert = decide(&nf, warp, limits)?;
    let mut stats = Stats {
        atoms: skeleton(&nf).atoms.len(),
        choice_terms: k,
        individual_vars: nf.individual_vars.len(),
        place_bound: formula_bound(&nf, warp),
        places: cert.as_ref().map(|c| c.places.len()),
        model_size: None,
    };
    let verdict = match cert {
        None => Verdict::Unsat,
        Some(cert) => {
            validate_certificate(&nf, warp, &cert)
                .expect("certificates from the engine validate");
            let sat = build_model(f, &nf, semantics, cert)?;
            stats.model_size = Some(sat.model.universe.len());
            Verdict::Sat(Box::new(sat))
        }
    };
    Ok(Outcome { semantics, verdict, stats })
}

/// The completed input with the containment conditions conjoined.
/// Deciding the result with opaque choice terms is equivalent to deciding
/// `f` under the alpha semantics.
pub fn alpha_reduction(f: &Formula) -> Result<Formula, SolveError> {
    let nfc = complete(&to_choice_flat(f));
    Ok(conjoined(&nfc, alpha_conditions(&nfc)?).formula)
}

/// The completed input with the expansion conditions conjoined; the
/// opaque-choice counterpart of the beta semantics.
pub fn beta_reduction(f: &Formula) -> Formula {
    let nfc = complete(&to_choice_flat(f));
    conjoined(&nfc, beta_conditions(&nfc)).formula
}

// Reattaches extra top-level conditions and renormalizes. The conditions
// only mention menus already present, so the choice terms and their order
// are unchanged.
fn conjoined(nfc: &NormalizedFormula, conditions: Vec<Formula>) -> NormalizedFormula {
    let f = conditions.into_iter().fold(nfc.formula.clone(), Formula::and);
    let nf = to_choice_flat(&f);
    debug_assert_eq!(nf.choice_terms, nfc.choice_terms);
    nf
}

// Containment conditions making the choice-free engine complete for the
// alpha semantics: the pairwise axiom on the named menus, plus, for every
// nonempty group of menus, an element of their union that none of them
// rejects.
fn alpha_conditions(nfc: &NormalizedFormula) -> Result<Vec<Formula>, SolveError> {
    let args = nfc.choice_args();
    let k = args.len();
    if k > MAX_REDUCTION_CHOICE_TERMS {
        return Err(SolveError::TooManyChoiceTerms(k, MAX_REDUCTION_CHOICE_TERMS));
    }
    let mut conds = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let (ti, tj) = (args[i].clone(), args[j].clone());
            conds.push(Formula::imp(
                Formula::atom(Atom::sub(ti.clone(), tj.clone())),
                Formula::atom(Atom::sub(
                    Term::inter(ti.clone(), Term::choice(tj)),
                    Term::choice(ti),
                )),
            ));
        }
    }
    for group in 1u32..1 << k {
        let mut menus: Option<Term> = None;
        let mut rejections: Option<Term> = None;
        for (i, arg) in args.iter().enumerate() {
            if group >> i & 1 == 0 {
                continue;
            }
            let ti = (*arg).clone();
            let rej = Term::diff(ti.clone(), Term::choice(ti.clone()));
            menus = Some(match menus {
                None => ti,
                Some(u) => Term::union(u, ti),
            });
            rejections = Some(match rejections {
                None => rej,
                Some(u) => Term::union(u, rej),
            });
        }
        conds.push(Formula::not(Formula::atom(Atom::eq(
            Term::diff(menus.unwrap(), rejections.unwrap()),
            Term::Empty,
        ))));
    }
    Ok(conds)
}

// The pairwise expansion axiom on the named menus; for beta this alone
// makes the choice-free engine complete.
fn beta_conditions(nfc: &NormalizedFormula) -> Vec<Formula> {
    let args = nfc.choice_args();
    let k = args.len();
    let mut conds = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let (ti, tj) = (args[i].clone(), args[j].clone());
            conds.push(Formula::imp(
                Formula::and(
                    Formula::atom(Atom::sub(ti.clone(), tj.clone())),
                    Formula::not(Formula::atom(Atom::eq(
                        Term::inter(Term::choice(ti.clone()), Term::choice(tj.clone())),
                        Term::Empty,
                    ))),
                ),
                Formula::atom(Atom::sub(Term::choice(ti), Term::choice(tj))),
            ));
        }
    }
    conds
}

fn build_model(
    f: &Formula,
    nf: &NormalizedFormula,
    semantics: Semantics,
    cert: Certificate,
) -> Result<SatModel, SolveError> {
    let realized = realize(nf, &cert);
    let n = realized.universe.len();
    if n > MAX_MODEL_UNIVERSE {
        return Err(SolveError::ModelTooLarge(n));
    }
    let menus: BTreeMap<ElemSet, ElemSet> = realized.menus.iter().copied().collect();
    let choice = if nf.choice_terms.is_empty() {
        total_by_cases(&realized.universe, &BTreeMap::new())
    } else {
        match semantics {
            Semantics::Unrestricted => total_by_cases(&realized.universe, &menus),
            Semantics::Warp => {
                let ranks = realized.ranks.as_ref().expect("warp certificates carry ranks");
                let total = total_by_ranks(&realized.universe, ranks);
                for (menu, value) in &menus {
                    assert_eq!(
                        total.choose(*menu),
                        Some(*value),
                        "ranks must reproduce the certificate's menus"
                    );
                }
                total
            }
            Semantics::Alpha | Semantics::Beta => {
                let partial = FiniteChoice::new(realized.universe.clone(), menus)
                    .expect("certificate menus are valid");
                let axiom = semantics.axiom().expect("constrained semantics");
                match liftable(&partial, axiom).expect("model sizes are liftable sizes") {
                    LiftDecision::Liftable(total) => total,
                    LiftDecision::Obstructed(o) => {
                        unreachable!("the reduction guarantees liftability, got {o:?}")
                    }
                }
            }
        }
    };
    // Only the input's own variables go into the model; variables
    // introduced by flattening are internal.
    let (set_names, ind_names) = input_vars(f);
    let sets = realized
        .sets
        .iter()
        .filter(|(v, _)| set_names.contains(*v))
        .map(|(v, s)| (v.clone(), *s))
        .collect();
    let individuals = realized
        .individuals
        .iter()
        .filter(|(x, _)| ind_names.contains(*x))
        .map(|(x, i)| (x.clone(), *i))
        .collect();
    let model = FiniteModel { universe: realized.universe, sets, individuals, choice };
    assert_eq!(model.eval(f), Ok(true), "models must satisfy the input");
    if let Some(axiom) = semantics.axiom() {
        if n <= 10 {
            assert!(
                check_axiom(&model.choice, axiom).satisfied,
                "models must satisfy the {} axiom",
                axiom.name()
            );
        }
    }
    Ok(SatModel { model, ranks: realized.ranks, certificate: cert })
}

fn input_vars(f: &Formula) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut sets = BTreeSet::new();
    let mut inds = BTreeSet::new();
    f.walk_atoms(&mut |a| {
        for side in [&a.lhs, &a.rhs] {
            side.walk(&mut |t| match t {
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
    (sets, inds)
}

fn total_by_cases(universe: &Universe, menus: &BTreeMap<ElemSet, ElemSet>) -> FiniteChoice {
    let entries = universe
        .full()
        .nonempty_subsets()
        .map(|m| (m, menus.get(&m).copied().unwrap_or(m)));
    FiniteChoice::new(universe.clone(), entries).expect("case-wise totals are valid")
}

fn total_by_ranks(universe: &Universe, ranks: &[i64]) -> FiniteChoice {
    let entries = universe.full().nonempty_subsets().map(|m| {
        let top = m.iter().map(|i| ranks[i]).max().expect("nonempty menu");
        let mut v = ElemSet::EMPTY;
        for i in m.iter() {
            if ranks[i] == top {
                v.insert(i);
            }
        }
        (m, v)
    });
    FiniteChoice::new(universe.clone(), entries).expect("rank totals are valid")
}
