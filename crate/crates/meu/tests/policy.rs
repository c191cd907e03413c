use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use asl::{parse_literal, Trigger};
use bdi::{AgentView, BeliefBase, IntentionSummary, SelectionStrategy, Source};
use meu_select::diagram::{diagram_json, edges_of, expected_edges, nodes_of, DECISION};
use meu_select::*;
use pgm::oracle::brute_expected_utilities;
use pgm::{meu_decide_restricted, Model};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn structure_is_exactly_the_six_nodes_and_nine_arcs() {
    let id = build_default_diagram();
    let nodes: BTreeSet<String> = nodes_of(&id);
    let want: BTreeSet<String> =
        ["Detected", "Assigned", "TransportedAgent", "TransportedTeam", "SelectedIntention", "Deposited"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    assert_eq!(nodes, want);
    let edges = edges_of(&id);
    assert_eq!(edges.len(), 9);
    let want: BTreeSet<(String, String)> = [
        ("Detected", "Assigned"),
        ("Assigned", "TransportedAgent"),
        ("Assigned", "TransportedTeam"),
        ("TransportedAgent", "TransportedTeam"),
        ("SelectedIntention", "Detected"),
        ("SelectedIntention", "Assigned"),
        ("SelectedIntention", "TransportedAgent"),
        ("SelectedIntention", "Deposited"),
        ("TransportedTeam", "Deposited"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    assert_eq!(edges, want);
    assert_eq!(expected_edges().len(), 9);
    let tt: BTreeSet<&str> = id.network().structure().parent_names("TransportedTeam").unwrap().into_iter().collect();
    assert_eq!(tt, BTreeSet::from(["Assigned", "TransportedAgent"]));
}

#[test]
fn every_cpd_row_sums_to_one() {
    let id = build_default_diagram();
    for f in id.network().cpds() {
        let k = f.scope().last().unwrap().cardinality();
        for row in f.table().chunks(k) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn model_round_trip() {
    let id = build_default_diagram();
    let text = diagram_json(&id);
    let back = match Model::from_json(&text).unwrap() {
        Model::Diagram(d) => d,
        Model::Network(_) => panic!("diagram expected"),
    };
    assert_eq!(back, id);
    assert_eq!(diagram_json(&back), text);
}

/// Brute-force argmax over the subset, earliest class on ties.
fn oracle_choice(eu: &[f64], subset: ClassSet) -> IntentionClass {
    let best = subset.iter().map(|c| eu[c.index()]).fold(f64::NEG_INFINITY, f64::max);
    subset.iter().find(|c| eu[c.index()] >= best - 1e-9 * best.abs().max(1.0)).unwrap()
}

#[test]
fn compiled_policy_equals_online_on_every_entry() {
    let id = build_default_diagram();
    let policy = compile_policy(&id, 0).unwrap();
    assert_eq!(policy.len(), 81 * 63);
    let mut checked = 0;
    for row in EvidenceRow::all() {
        let brute = brute_expected_utilities(&id, &row.to_evidence()).unwrap();
        for subset in ClassSet::all_non_empty() {
            let got = policy.lookup(row, subset).unwrap();
            assert!(subset.contains(got));
            let (k, _) = meu_decide_restricted(&id, &row.to_evidence(), &subset.indices()).unwrap();
            assert_eq!(got.index(), k, "row {row:?} subset {subset:?}");
            assert_eq!(got, oracle_choice(&brute, subset));
            checked += 1;
        }
    }
    assert_eq!(checked, 5103);
}

#[test]
fn singleton_subsets_are_forced() {
    let policy = compile_policy(&build_default_diagram(), 0).unwrap();
    for row in EvidenceRow::all() {
        for c in IntentionClass::ALL {
            assert_eq!(policy.lookup(row, [c].into_iter().collect()), Some(c));
        }
    }
}

#[test]
fn random_entries_match_fresh_decisions() {
    let id = build_default_diagram();
    let policy = compile_policy(&id, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let row = EvidenceRow::from_index(rng.gen_range(0..81));
        let subset = ClassSet::from_bits(rng.gen_range(1..64)).unwrap();
        assert_eq!(policy.lookup(row, subset).unwrap(), decide(&id, row, subset).unwrap());
    }
}

#[test]
fn positive_affine_rescaling_leaves_the_policy_unchanged() {
    let id = build_default_diagram();
    let base = compile_policy(&id, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let a: f64 = rng.gen_range(0.01..100.0);
        let b: f64 = rng.gen_range(-100.0..100.0);
        let scaled = compile_policy(&id.map_utility(|u| a * u + b), 0).unwrap();
        assert!(scaled.same_table(&base), "a={a} b={b}");
    }
}

#[test]
fn high_team_cargo_prefers_deliver() {
    let id = build_default_diagram();
    let policy = compile_policy(&id, 0).unwrap();
    for row in EvidenceRow::all().filter(|r| r.0[3] == 2) {
        // hand value: u(high, deliver) = 4 + 3, every other class 4
        let eu = brute_expected_utilities(&id, &row.to_evidence()).unwrap();
        assert!((eu[IntentionClass::Deliver.index()] - 7.0).abs() < 1e-9);
        assert!((eu[IntentionClass::Explore.index()] - 4.0).abs() < 1e-9);
        for subset in ClassSet::all_non_empty().filter(|s| s.contains(IntentionClass::Deliver)) {
            assert_eq!(policy.lookup(row, subset), Some(IntentionClass::Deliver));
        }
    }
}

#[test]
fn constant_utility_picks_the_first_available_class() {
    let id = build_default_diagram().map_utility(|_| 2.5);
    let policy = compile_policy(&id, 0).unwrap();
    for row in EvidenceRow::all() {
        for subset in ClassSet::all_non_empty() {
            assert_eq!(policy.lookup(row, subset), subset.iter().next());
        }
    }
    // and end to end through the selector
    let mut sel = ClassSelector::compiled(Arc::new(policy));
    let beliefs = BeliefBase::new();
    let active = [summary(1, "explore"), summary(2, "idle"), summary(3, "bid_request(1,1)")];
    let v = view(&beliefs, &active);
    assert_eq!(sel.select_intention(&active, &v), 2);
}

fn summary(id: u64, goal: &str) -> IntentionSummary {
    IntentionSummary { id, root: Some(Trigger::achieve(parse_literal(goal).unwrap())), current: None }
}

fn view<'a>(beliefs: &'a BeliefBase, intentions: &'a [IntentionSummary]) -> AgentView<'a> {
    AgentView { name: "m1", beliefs, intentions, cycle: 1 }
}

#[test]
fn single_class_is_round_robin_within_it() {
    let policy = Arc::new(compile_policy(&build_default_diagram(), 0).unwrap());
    let mut sel = ClassSelector::compiled(policy);
    let beliefs = BeliefBase::new();
    let mut active = vec![summary(1, "explore"), summary(2, "sweep")];
    let mut picks = Vec::new();
    for _ in 0..6 {
        let v = view(&beliefs, &active);
        let k = sel.select_intention(&active, &v);
        picks.push(active[k].id);
        // the engine rotates the executed intention to the back
        let x = active.remove(k);
        active.push(x);
    }
    assert_eq!(picks, vec![1, 2, 1, 2, 1, 2]);
}

#[test]
fn chosen_class_alternates_between_its_members_with_fixed_evidence() {
    let policy = Arc::new(compile_policy(&build_default_diagram(), 0).unwrap());
    let mut sel = ClassSelector::compiled(policy);
    let mut beliefs = BeliefBase::new();
    beliefs.add(parse_literal("carrying(3)").unwrap(), Source::Percept);
    // the array is never rotated: fairness comes from the selector itself
    let active = [summary(1, "explore"), summary(2, "deliver"), summary(3, "deliver")];
    let v = view(&beliefs, &active);
    let picks: Vec<usize> = (0..4).map(|_| sel.select_intention(&active, &v)).collect();
    assert_eq!(picks, vec![1, 2, 1, 2]);
}

#[test]
fn decisions_are_logged() {
    let log = Arc::new(Mutex::new(Vec::new()));
    let mut sel = ClassSelector::round_robin().with_log(log.clone());
    let mut beliefs = BeliefBase::new();
    beliefs.add(parse_literal("step(12)").unwrap(), Source::Percept);
    let active = [summary(1, "explore"), summary(2, "deliver")];
    assert_eq!(sel.select_intention(&active, &view(&beliefs, &active)), 0);
    let d = log.lock().unwrap()[0];
    assert_eq!((d.step, d.class), (12, IntentionClass::Explore));
    assert!(d.available.contains(IntentionClass::Deliver));
    assert_eq!(sel.name(), "rr");
}

#[test]
fn online_mode_agrees_with_compiled() {
    let id = Arc::new(build_default_diagram());
    let policy = Arc::new(compile_policy(&id, 0).unwrap());
    let mut on = ClassSelector::online(id);
    let mut off = ClassSelector::compiled(policy);
    let mut beliefs = BeliefBase::new();
    for s in ["gold_at(1,1)", "carrying(2)", "team_carrying(m2,1)"] {
        beliefs.add(parse_literal(s).unwrap(), Source::Percept);
    }
    let active = [summary(1, "explore"), summary(2, "fetch(3,3)"), summary(3, "deliver"), summary(4, "gold_at(1,1)")];
    let v = view(&beliefs, &active);
    for _ in 0..5 {
        assert_eq!(on.select_intention(&active, &v), off.select_intention(&active, &v));
    }
}

const GOALS: [&str; 8] =
    ["explore", "deliver", "fetch(1,2)", "bid_request(0,0)", "idle", "gold_at(3,3)", "done(1,1)", "sweep"];

proptest! {
    #[test]
    fn selector_index_is_always_in_bounds(
        goals in proptest::collection::vec(0usize..GOALS.len(), 1..12),
        carrying in 0i64..4,
        rounds in 1usize..20,
    ) {
        let policy = Arc::new(compile_policy(&build_default_diagram(), 0).unwrap());
        let mut sel = ClassSelector::compiled(policy);
        let mut beliefs = BeliefBase::new();
        beliefs.add(parse_literal(&format!("carrying({carrying})")).unwrap(), Source::Percept);
        let active: Vec<IntentionSummary> =
            goals.iter().enumerate().map(|(i, &g)| summary(i as u64 + 1, GOALS[g])).collect();
        for _ in 0..rounds {
            let k = sel.select_intention(&active, &view(&beliefs, &active));
            prop_assert!(k < active.len());
        }
        if active.len() == 1 {
            prop_assert_eq!(sel.select_intention(&active, &view(&beliefs, &active)), 0);
        }
    }
}

#[test]
fn refit_on_own_samples_recovers_the_tables() {
    let id = build_default_diagram();
    let records = sample_records(&id, 10_000, 3);
    let fitted = fit_diagram(&id, &records, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for (a, b) in id.network().cpds().iter().zip(fitted.network().cpds()) {
        if a.scope().last().unwrap().name() == DECISION {
            continue;
        }
        worst = worst.max(a.max_abs_diff(b).unwrap());
    }
    assert!(worst < 0.1, "worst CPD entry error {worst}");
}

#[test]
fn empty_traces_give_uniform_tables_and_default_utility() {
    let id = build_default_diagram();
    let fitted = fit_diagram(&id, &[], 1.0).unwrap();
    for f in fitted.network().cpds() {
        let k = f.scope().last().unwrap().cardinality() as f64;
        assert!(f.table().iter().all(|p| (p - 1.0 / k).abs() < 1e-12));
    }
    assert_eq!(fitted.utility(), id.utility());
}

#[test]
fn fit_is_deterministic_and_round_trips_through_tsv() {
    let id = build_default_diagram();
    let records = sample_records(&id, 500, 9);
    let text = write_traces(&records);
    let a = fit_diagram(&id, &read_traces(&text).unwrap(), 1.0).unwrap();
    let b = fit_diagram(&id, &read_traces(&text).unwrap(), 1.0).unwrap();
    assert_eq!(diagram_json(&a), diagram_json(&b));
    check_structure(&a).unwrap();
}

#[test]
fn utility_shrinks_toward_default_when_sparse() {
    let id = build_default_diagram();
    let r = TraceRecord {
        evidence: EvidenceRow([0; 4]),
        class: IntentionClass::Explore,
        next: EvidenceRow([0, 0, 0, 2]),
        deposited: 10.0,
    };
    let fitted = fit_diagram(&id, &[r; 4], 1.0).unwrap();
    // 4 observations of 10, 6 pseudo-observations of the prior 4
    let u = fitted.utility().values[2 * 6 + IntentionClass::Explore.index()];
    assert!((u - (40.0 + 24.0) / 10.0).abs() < 1e-12);
    let fitted = fit_diagram(&id, &[r; 12], 1.0).unwrap();
    assert_eq!(fitted.utility().values[2 * 6 + IntentionClass::Explore.index()], 10.0);
}
