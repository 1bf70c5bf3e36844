//! The acceptance gate. One test per criterion; each prints a single
//! summary line and fails loudly otherwise.

use std::io::Write;
use std::time::{Duration, Instant};

use bstc_core::choice::{check_axiom, euler_diagram, rationalizable, Axiom};
use bstc_core::gen::{
    self, cyclic_pairs_choice, four_item_overlap_choice, menu_contrast_formula,
    random_partial_choice, random_ranked_choice, random_restriction, random_total_choice,
    FormulaOpts,
};
use bstc_core::lifting::{alpha_liftable, liftable, warp_liftable, LiftDecision, Obstruction};
use bstc_core::normalize::{complete, skeleton, to_choice_flat};
use bstc_core::oracle::{brute_decide, brute_lift, brute_rational_lift, OracleLimits};
use bstc_core::places::SearchLimits;
use bstc_core::solver::{
    alpha_reduction, beta_reduction, solve, Outcome, Semantics, Verdict,
};
use bstc_core::syntax::{parse_formula, render_formula, Formula};
use bstc_core::{ElemSet, Universe};

use rand::Rng;

fn line(criterion: &str, detail: String, t: Instant) {
    // Written straight to the process stdout so the line shows up in a plain
    // `cargo test` run instead of being captured by the harness.
    let msg = format!(
        "acceptance {criterion}: pass - {detail} ({:.2?})\n",
        t.elapsed()
    );
    std::io::stdout().write_all(msg.as_bytes()).expect("stdout");
}

#[test]
fn c1_named_fixtures_behave_exactly() {
    let t = Instant::now();

    let started = Instant::now();
    let cyc = cyclic_pairs_choice();
    let rel = rationalizable(&cyc).expect("cyclic pairs are rationalizable");
    assert!(rel.has_cycle());
    assert!(brute_rational_lift(&cyc, 1 << 24)
        .expect("search fits the budget")
        .is_none());
    assert!(matches!(
        warp_liftable(&cyc).unwrap(),
        LiftDecision::Obstructed(_)
    ));
    assert!(started.elapsed() < Duration::from_secs(1));

    let started = Instant::now();
    let overlap = four_item_overlap_choice();
    assert!(check_axiom(&overlap, Axiom::Alpha).satisfied);
    match alpha_liftable(&overlap).unwrap() {
        LiftDecision::Obstructed(Obstruction::RejectionCover { family }) => {
            // The witness family is the whole domain.
            let domain: Vec<ElemSet> = overlap.domain().collect();
            let mut got = family;
            got.sort();
            assert_eq!(got, domain);
        }
        other => panic!("expected a rejection cover, got {other:?}"),
    }
    assert!(started.elapsed() < Duration::from_secs(1));

    line(
        "criterion 1 (named fixtures)",
        "cyclic pairs: rationalizable, no rational or rank extension; \
         overlap: containment holds, no lift, witness family = whole domain"
            .into(),
        t,
    );
}

#[test]
fn c2_lifts_are_sound() {
    let t = Instant::now();
    let mut rng = gen::rng(20_240_501);
    let mut inputs = 0usize;
    let mut lifts = 0usize;
    while inputs < 600 {
        let u = Universe::anonymous(rng.gen_range(1..=5));
        let ch = if rng.gen_bool(0.5) {
            let total = random_ranked_choice(&u, &mut rng);
            random_restriction(&total, rng.gen_range(1..=10), &mut rng)
        } else {
            random_partial_choice(&u, rng.gen_range(1..=10), &mut rng)
        };
        inputs += 1;
        for axiom in [Axiom::Alpha, Axiom::Beta, Axiom::Warp] {
            if let LiftDecision::Liftable(total) = liftable(&ch, axiom).unwrap() {
                lifts += 1;
                assert!(total.is_total());
                for (m, v) in ch.entries() {
                    assert_eq!(total.choose(m), Some(v), "lifts must extend the input");
                }
                assert!(
                    check_axiom(&total, axiom).satisfied,
                    "{} must hold on the whole lift",
                    axiom.name()
                );
            }
        }
    }
    assert!(lifts >= 500, "want at least 500 verified lifts, got {lifts}");
    assert!(t.elapsed() < Duration::from_secs(60));
    line(
        "criterion 2 (lift soundness)",
        format!("{lifts} lifts verified exhaustively across {inputs} partial choices"),
        t,
    );
}

#[test]
fn c3_lift_checks_are_complete() {
    let t = Instant::now();
    let mut rng = gen::rng(20_240_502);
    let mut kept = 0usize;
    let mut attempts = 0usize;
    while kept < 200 {
        attempts += 1;
        assert!(attempts < 4_000, "generation should not stall");
        let u = Universe::anonymous(rng.gen_range(1..=4));
        let ch = random_partial_choice(&u, rng.gen_range(1..=6), &mut rng);
        let mut verdicts = Vec::new();
        for axiom in [Axiom::Alpha, Axiom::Beta, Axiom::Warp] {
            match brute_lift(&ch, axiom, 1 << 24) {
                Ok(b) => verdicts.push((axiom, b.is_some())),
                Err(_) => break,
            }
        }
        if verdicts.len() < 3 {
            continue;
        }
        for (axiom, brute_says) in verdicts {
            let fast = liftable(&ch, axiom).unwrap();
            assert_eq!(
                fast.is_liftable(),
                brute_says,
                "{} disagreement on {:?}",
                axiom.name(),
                ch.entries().collect::<Vec<_>>()
            );
        }
        kept += 1;
    }
    assert!(t.elapsed() < Duration::from_secs(300));
    line(
        "criterion 3 (lift completeness)",
        format!("{kept} partial choices agree with the extension search on all three axioms"),
        t,
    );
}

// Formulas the oracle can decide outright: every semantics' decided
// formula has a small enough model bound, and the solver stayed within
// budget. Returns the solver outcomes along the way.
fn solver_corpus(target: usize) -> Vec<(Formula, Vec<Outcome>)> {
    let mut rng = gen::rng(20_240_503);
    let opts = FormulaOpts::default();
    let limits = SearchLimits::default();
    let mut corpus = Vec::new();
    let mut attempts = 0usize;
    while corpus.len() < target {
        attempts += 1;
        assert!(attempts < 60_000, "corpus generation should not stall");
        let f = gen::random_formula(&mut rng, &opts);
        let nfc = complete(&to_choice_flat(&f));
        if skeleton(&nfc).atoms.len() > 9 {
            continue;
        }
        let mut outcomes = Vec::new();
        let mut ok = true;
        for sem in Semantics::ALL {
            let Ok(out) = solve(&f, sem, &limits) else {
                ok = false;
                break;
            };
            let ceiling = if sem == Semantics::Warp { 6 } else { 4 };
            match out.stats.place_bound {
                Some(b) if b <= ceiling => outcomes.push(out),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            corpus.push((f, outcomes));
        }
    }
    corpus
}

fn oracle_limits(bound: usize) -> OracleLimits {
    OracleLimits {
        max_universe: bound.max(1),
        node_budget: 400_000_000,
        symmetry: true,
    }
}

#[test]
fn c4_solver_agrees_with_oracle() {
    let t = Instant::now();
    let corpus = solver_corpus(300);
    let mut sat = 0usize;
    let mut unsat = 0usize;
    for (f, outcomes) in &corpus {
        for out in outcomes {
            let bound = out.stats.place_bound.expect("gated corpus");
            let oracle = brute_decide(f, out.semantics, &oracle_limits(bound))
                .expect("gated formulas fit the oracle budget");
            assert_eq!(
                out.verdict.is_sat(),
                oracle.is_sat(),
                "verdicts differ under {} on {}",
                out.semantics.name(),
                render_formula(f)
            );
            match &out.verdict {
                Verdict::Sat(model) => {
                    sat += 1;
                    // Criterion 8 rides along: the materialized universe
                    // respects the place bound.
                    let k = out.stats.choice_terms;
                    assert!(
                        model.model.universe.len()
                            <= out.stats.atoms + out.stats.individual_vars + (1 << k)
                    );
                }
                Verdict::Unsat => unsat += 1,
            }
        }
    }
    assert!(t.elapsed() < Duration::from_secs(600));
    line(
        "criterion 4 (solver vs oracle)",
        format!(
            "{} formulas, {} verdicts agree ({sat} sat, {unsat} unsat)",
            corpus.len(),
            sat + unsat
        ),
        t,
    );
}

#[test]
fn c5_menu_contrast_formula_separates_the_semantics() {
    let t = Instant::now();
    let f = menu_contrast_formula();
    let limits = SearchLimits::default();
    for (sem, want) in [
        (Semantics::Unrestricted, true),
        (Semantics::Alpha, true),
        (Semantics::Beta, true),
        (Semantics::Warp, false),
    ] {
        let out = solve(&f, sem, &limits).unwrap();
        assert_eq!(out.verdict.is_sat(), want, "under {}", sem.name());
        // Cross-check on small universes; three elements already carry the
        // satisfiable cases, and the engine's unsat verdict is exact.
        let oracle = brute_decide(&f, sem, &oracle_limits(5)).unwrap();
        assert_eq!(oracle.is_sat(), want, "oracle under {}", sem.name());
    }
    line(
        "criterion 5 (separating formula)",
        "sat under unrestricted, containment and expansion; unsat under warp".into(),
        t,
    );
}

#[test]
fn c6_reductions_preserve_satisfiability() {
    let t = Instant::now();
    let corpus = solver_corpus(300);
    for (f, outcomes) in &corpus {
        for out in outcomes {
            let reduced = match out.semantics {
                Semantics::Alpha => alpha_reduction(f).expect("small corpus"),
                Semantics::Beta => beta_reduction(f),
                _ => continue,
            };
            let bound = out.stats.place_bound.expect("gated corpus");
            let oracle = brute_decide(&reduced, Semantics::Unrestricted, &oracle_limits(bound))
                .expect("gated formulas fit the oracle budget");
            assert_eq!(
                out.verdict.is_sat(),
                oracle.is_sat(),
                "reduction changes the verdict under {} on {}",
                out.semantics.name(),
                render_formula(f)
            );
        }
    }
    assert!(t.elapsed() < Duration::from_secs(600));
    line(
        "criterion 6 (reduction equisatisfiability)",
        format!(
            "{} formulas: opaque-choice verdicts of both reductions match the solver",
            corpus.len()
        ),
        t,
    );
}

#[test]
fn c7_structural_invariants_hold_in_bulk() {
    let t = Instant::now();
    let mut rng = gen::rng(20_240_504);
    let cases = 1000usize;

    for _ in 0..cases {
        let u = Universe::anonymous(rng.gen_range(1..=6));
        let full = u.full();
        let sub = |of: ElemSet, rng: &mut dyn rand::RngCore| {
            let mut s = ElemSet::EMPTY;
            for e in of.iter() {
                if rng.gen_bool(0.5) {
                    s.insert(e);
                }
            }
            s
        };
        let b = sub(full, &mut rng);
        let a = sub(b, &mut rng);
        let a1 = sub(full, &mut rng);
        let b1 = sub(full, &mut rng);
        assert_eq!(
            a.inter(b1).subset_of(a1),
            a.diff(a1).subset_of(b.diff(b1)),
            "containment transfer must be an equivalence"
        );
    }

    for _ in 0..cases {
        let u = Universe::anonymous(rng.gen_range(2..=5));
        let ch = random_partial_choice(&u, rng.gen_range(1..=8), &mut rng);
        let direct = ch.entries().all(|(a, _)| {
            ch.entries().filter(|(b, _)| a.subset_of(*b)).all(|(b, _)| {
                ch.rejection(a).unwrap().subset_of(ch.rejection(b).unwrap())
            })
        });
        assert_eq!(check_axiom(&ch, Axiom::Alpha).satisfied, direct);
    }

    for _ in 0..cases {
        let u = Universe::anonymous(rng.gen_range(1..=5));
        let ch = random_total_choice(&u, &mut rng);
        assert_eq!(
            check_axiom(&ch, Axiom::Warp).satisfied,
            check_axiom(&ch, Axiom::Alpha).satisfied
                && check_axiom(&ch, Axiom::Beta).satisfied
        );
    }

    for _ in 0..cases {
        let u = Universe::anonymous(rng.gen_range(1..=6));
        let family: Vec<ElemSet> = (0..rng.gen_range(0..=6))
            .map(|_| {
                let mut s = ElemSet::EMPTY;
                for e in u.full().iter() {
                    if rng.gen_bool(0.5) {
                        s.insert(e);
                    }
                }
                s
            })
            .collect();
        let d = euler_diagram(&family);
        let union = family.iter().fold(ElemSet::EMPTY, |acc, s| acc.union(*s));
        let covered = d.regions.iter().fold(ElemSet::EMPTY, |acc, r| acc.union(*r));
        assert_eq!(covered, union);
        for (i, r) in d.regions.iter().enumerate() {
            assert!(!r.is_empty());
            for q in &d.regions[i + 1..] {
                assert!(!r.intersects(*q));
            }
        }
        for member in &family {
            let env = d.envelope(*member).into_iter().fold(ElemSet::EMPTY, |a, r| a.union(r));
            assert_eq!(env, *member);
        }
    }

    for _ in 0..cases {
        let f = gen::random_formula(&mut rng, &FormulaOpts::default());
        let text = render_formula(&f);
        assert_eq!(parse_formula(&text).expect("rendered text parses"), f, "{text}");
    }

    line(
        "criterion 7 (structural invariants)",
        format!("5 invariant families x {cases} random cases"),
        t,
    );
}

#[test]
fn c8_models_respect_the_small_model_bound() {
    let t = Instant::now();
    let corpus = solver_corpus(100);
    let mut checked = 0usize;
    let mut largest = 0usize;
    for (_, outcomes) in &corpus {
        for out in outcomes {
            if let Verdict::Sat(sat) = &out.verdict {
                let k = out.stats.choice_terms;
                let bound = out.stats.atoms + out.stats.individual_vars + (1 << k);
                assert!(sat.model.universe.len() <= bound);
                checked += 1;
                largest = largest.max(sat.model.universe.len());
            }
        }
    }
    assert!(checked > 0);
    line(
        "criterion 8 (small-model bound)",
        format!("{checked} models within bound, largest universe {largest}"),
        t,
    );
}
