//! Seeded generators for test corpora, plus the named example datasets
//! used by fixtures and integration tests.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::choice::FiniteChoice;
use crate::sets::{ElemSet, Universe};
use crate::syntax::{parse_formula, Atom, Formula, Term};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_nonempty_subset(of: ElemSet, rng: &mut impl Rng) -> ElemSet {
    let elems: Vec<usize> = of.iter().collect();
    loop {
        let mut s = ElemSet::EMPTY;
        for &e in &elems {
            if rng.gen_bool(0.5) {
                s.insert(e);
            }
        }
        if !s.is_empty() {
            return s;
        }
    }
}

/// Total choice with uniformly random nonempty values.
pub fn random_total_choice(universe: &Universe, rng: &mut impl Rng) -> FiniteChoice {
    let entries: Vec<_> = universe
        .full()
        .nonempty_subsets()
        .map(|m| (m, random_nonempty_subset(m, rng)))
        .collect();
    FiniteChoice::new(universe.clone(), entries).expect("values stay inside their menus")
}

/// Partial choice over a random menu family of (at most) the given size.
pub fn random_partial_choice(
    universe: &Universe,
    menu_count: usize,
    rng: &mut impl Rng,
) -> FiniteChoice {
    let mut menus: Vec<ElemSet> = universe.full().nonempty_subsets().collect();
    menus.shuffle(rng);
    menus.truncate(menu_count);
    let entries: Vec<_> = menus
        .into_iter()
        .map(|m| (m, random_nonempty_subset(m, rng)))
        .collect();
    FiniteChoice::new(universe.clone(), entries).expect("values stay inside their menus")
}

/// Total choice picking the rank-maximal elements of a random ranking.
/// Such choices satisfy all the axioms, so their restrictions are always
/// liftable.
pub fn random_ranked_choice(universe: &Universe, rng: &mut impl Rng) -> FiniteChoice {
    let n = universe.len();
    let ranks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let entries: Vec<_> = universe
        .full()
        .nonempty_subsets()
        .map(|m| {
            let top = m.iter().map(|i| ranks[i]).max().expect("nonempty menu");
            let mut v = ElemSet::EMPTY;
            for i in m.iter() {
                if ranks[i] == top {
                    v.insert(i);
                }
            }
            (m, v)
        })
        .collect();
    FiniteChoice::new(universe.clone(), entries).expect("maxima stay inside their menus")
}

/// Restriction of a choice function to a random subfamily of (at most) the
/// given size.
pub fn random_restriction(
    ch: &FiniteChoice,
    menu_count: usize,
    rng: &mut impl Rng,
) -> FiniteChoice {
    let mut entries: Vec<_> = ch.entries().collect();
    entries.shuffle(rng);
    entries.truncate(menu_count);
    FiniteChoice::new(ch.universe().clone(), entries).expect("restriction of a valid choice")
}

/// Shape limits for [`random_formula`].
#[derive(Clone, Debug)]
pub struct FormulaOpts {
    pub set_vars: Vec<String>,
    pub ind_vars: Vec<String>,
    pub max_atoms: usize,
    pub max_choice_terms: usize,
    pub term_depth: usize,
}

impl Default for FormulaOpts {
    fn default() -> FormulaOpts {
        FormulaOpts {
            set_vars: vec!["X".into(), "Y".into(), "Z".into()],
            ind_vars: vec!["x".into(), "y".into()],
            max_atoms: 3,
            max_choice_terms: 2,
            term_depth: 2,
        }
    }
}

fn random_term(rng: &mut impl Rng, opts: &FormulaOpts, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..10u8) {
            0 => Term::Empty,
            1..=6 => Term::var(opts.set_vars.choose(rng).expect("set variables")),
            _ => Term::singleton(opts.ind_vars.choose(rng).expect("individual variables")),
        };
    }
    let a = random_term(rng, opts, depth - 1);
    let b = random_term(rng, opts, depth - 1);
    match rng.gen_range(0..10u8) {
        0..=4 => Term::union(a, b),
        5..=7 => Term::inter(a, b),
        _ => Term::diff(a, b),
    }
}

/// Random shallow formula, conjunction-biased, with choice applications
/// sprinkled over atom sides up to the option's budget.
pub fn random_formula(rng: &mut impl Rng, opts: &FormulaOpts) -> Formula {
    let mut choice_budget = opts.max_choice_terms;
    let n_atoms = rng.gen_range(1..=opts.max_atoms.max(1));
    let mut parts = Vec::with_capacity(n_atoms);
    for _ in 0..n_atoms {
        let mut sides = [Term::Empty, Term::Empty];
        for side in &mut sides {
            let t = random_term(rng, opts, opts.term_depth);
            *side = if choice_budget > 0 && rng.gen_bool(0.45) {
                choice_budget -= 1;
                Term::choice(t)
            } else {
                t
            };
        }
        let [lhs, rhs] = sides;
        let atom = if rng.gen_bool(0.5) {
            Atom::eq(lhs, rhs)
        } else {
            Atom::sub(lhs, rhs)
        };
        let f = Formula::atom(atom);
        parts.push(if rng.gen_bool(0.35) { Formula::not(f) } else { f });
    }
    let mut acc = parts.remove(0);
    for p in parts {
        acc = match rng.gen_range(0..10u8) {
            0..=5 => Formula::and(acc, p),
            6..=7 => Formula::or(acc, p),
            8 => Formula::imp(acc, p),
            _ => Formula::iff(acc, p),
        };
    }
    acc
}

fn named(u: &Universe, names: &[&str]) -> ElemSet {
    let mut s = ElemSet::EMPTY;
    for n in names {
        s.insert(u.lookup(n).expect("known element"));
    }
    s
}

/// Three items with all singleton menus and a cyclic pattern on the pairs:
/// x beats y, y beats z, z beats x. Satisfies every pairwise axiom and is
/// rationalized by a cyclic relation, yet admits no total extension that
/// keeps the containment axiom or a rank function.
pub fn cyclic_pairs_choice() -> FiniteChoice {
    let u = Universe::new(["x", "y", "z"]).expect("distinct names");
    let entries = vec![
        (named(&u, &["x"]), named(&u, &["x"])),
        (named(&u, &["y"]), named(&u, &["y"])),
        (named(&u, &["z"]), named(&u, &["z"])),
        (named(&u, &["x", "y"]), named(&u, &["x"])),
        (named(&u, &["y", "z"]), named(&u, &["y"])),
        (named(&u, &["x", "z"]), named(&u, &["z"])),
    ];
    FiniteChoice::new(u, entries).expect("valid cyclic pair data")
}

/// Four items and ten menus satisfying the containment axiom pairwise
/// while every element of the union is rejected by some menu, so no
/// containment-respecting total extension exists.
pub fn four_item_overlap_choice() -> FiniteChoice {
    let u = Universe::new(["x", "y", "z", "w"]).expect("distinct names");
    let entries = vec![
        (named(&u, &["x"]), named(&u, &["x"])),
        (named(&u, &["y"]), named(&u, &["y"])),
        (named(&u, &["z"]), named(&u, &["z"])),
        (named(&u, &["w"]), named(&u, &["w"])),
        (named(&u, &["x", "y"]), named(&u, &["x", "y"])),
        (named(&u, &["x", "z"]), named(&u, &["x", "z"])),
        (named(&u, &["x", "y", "z"]), named(&u, &["y", "z"])),
        (named(&u, &["x", "y", "w"]), named(&u, &["x", "w"])),
        (named(&u, &["x", "z", "w"]), named(&u, &["x", "z"])),
        (named(&u, &["y", "z", "w"]), named(&u, &["y", "w"])),
    ];
    FiniteChoice::new(u, entries).expect("valid overlap data")
}

/// The formula separating the warp semantics from the other three: an
/// element chosen in a pair must stay chosen in any extension whose value
/// still meets the pair, so these constraints admit no rank function.
pub fn menu_contrast_formula() -> Formula {
    parse_formula(
        "x in c({x} + {y}) and y in c({x} + {y} + {z}) \
         and not (x in c({x} + {y} + {z})) and x != y and y != z and x != z",
    )
    .expect("fixed formula parses")
}
