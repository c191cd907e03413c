use pgm::oracle::{
    brute_expected_utilities, brute_product, brute_query, brute_sum_out, random_cpd, random_diagram, random_evidence,
    random_network,
};
use pgm::{
    learn_cpds, meu_decide, sample, ve_query, ve_query_with_order, BayesianNetwork, BnStructure, DiscreteVariable,
    Evidence, Factor, PgmError,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: &Factor, b: &Factor, tol: f64) -> bool {
    a.max_abs_diff(b).map(|d| d <= tol).unwrap_or(false)
}

fn random_factor(rng: &mut ChaCha8Rng, names: &[&str], cards: &[usize]) -> Factor {
    let scope: Vec<DiscreteVariable> = names
        .iter()
        .zip(cards)
        .map(|(n, &k)| DiscreteVariable::new(*n, (0..k).map(|s| format!("s{s}")).collect()).unwrap())
        .collect();
    let size = cards.iter().product();
    Factor::new(scope, (0..size).map(|_| rng.gen_range(0.0..2.0)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn product_and_sum_match_enumeration(seed in any::<u64>(), ka in 2usize..4, kb in 2usize..4, kc in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_factor(&mut rng, &["A", "B"], &[ka, kb]);
        let g = random_factor(&mut rng, &["B", "C"], &[kb, kc]);
        let fg = f.multiply(&g).unwrap();
        prop_assert!(close(&fg, &brute_product(&f, &g), 1e-12));
        for v in ["A", "B", "C"] {
            prop_assert!(close(&fg.marginalize(v).unwrap(), &brute_sum_out(&fg, v), 1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ve_matches_joint_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bn = random_network(&mut rng, 5, 3);
        let names: Vec<&str> = bn.variables().iter().map(|v| v.name()).collect();
        let evidence = random_evidence(&mut rng, bn.variables(), None);
        let mut query: Vec<&str> = names.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
        if query.is_empty() {
            query.push(names[0]);
        }
        match brute_query(&bn, &query, &evidence) {
            None => prop_assert_eq!(ve_query(&bn, &query, &evidence), Err(PgmError::InconsistentEvidence)),
            Some(expected) => {
                let got = ve_query(&bn, &query, &evidence).unwrap();
                prop_assert!(close(&got, &expected, 1e-9));
            }
        }
    }

    #[test]
    fn elimination_order_does_not_matter(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bn = random_network(&mut rng, 5, 3);
        let names: Vec<&str> = bn.variables().iter().map(|v| v.name()).collect();
        let query = vec![names[rng.gen_range(0..names.len())]];
        let evidence = random_evidence(&mut rng, bn.variables(), Some(query[0]));
        let Ok(reference) = ve_query(&bn, &query, &evidence) else { return Ok(()); };
        let mut hidden: Vec<&str> =
            names.iter().copied().filter(|n| *n != query[0] && !evidence.contains_key(*n)).collect();
        for _ in 0..3 {
            hidden.shuffle(&mut rng);
            let got = ve_query_with_order(&bn, &query, &evidence, &hidden).unwrap();
            prop_assert!(close(&got, &reference, 1e-9));
        }
    }

    #[test]
    fn meu_matches_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let id = random_diagram(&mut rng, 5, 3);
        let chance: Vec<DiscreteVariable> = id.network().variables().to_vec();
        let evidence = random_evidence(&mut rng, &chance, Some("D"));
        match brute_expected_utilities(&id, &evidence) {
            None => prop_assert!(meu_decide(&id, &evidence).is_err()),
            Some(expected) => {
                let (_, eu) = meu_decide(&id, &evidence).unwrap();
                for (a, b) in eu.iter().zip(&expected) {
                    prop_assert!((a - b).abs() <= 1e-9, "{:?} vs {:?}", eu, expected);
                }
            }
        }
    }

    #[test]
    fn meu_argmax_is_affine_invariant(seed in any::<u64>(), a in 0.01f64..100.0, b in -100.0f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let id = random_diagram(&mut rng, 4, 3);
        let (best, eu) = meu_decide(&id, &Evidence::new()).unwrap();
        let scaled = id.map_utility(|u| a * u + b);
        let (best2, eu2) = meu_decide(&scaled, &Evidence::new()).unwrap();
        // a near-tie may legitimately resolve either way after rounding
        let gap = eu.iter().enumerate().filter(|(i, _)| *i != best).map(|(_, v)| (eu[best] - v).abs()).fold(f64::INFINITY, f64::min);
        if gap > 1e-6 {
            prop_assert_eq!(best, best2);
        }
        for (x, y) in eu.iter().zip(&eu2) {
            prop_assert!((a * x + b - y).abs() <= 1e-6 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn learned_cpds_are_normalized(seed in any::<u64>(), n in 0usize..60, alpha in prop_oneof![Just(0.5f64), Just(1.0), Just(2.0)]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bn = random_network(&mut rng, 4, 3);
        let data = sample(&bn, n, seed);
        let learned = learn_cpds(bn.structure(), &data, alpha).unwrap();
        for cpd in learned.cpds() {
            let k = cpd.scope().last().unwrap().cardinality();
            for row in cpd.table().chunks(k) {
                prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
    }
}

fn three_node() -> BayesianNetwork {
    let a = DiscreteVariable::with_states("A", &["f", "t"]).unwrap();
    let b = DiscreteVariable::with_states("B", &["lo", "mid", "hi"]).unwrap();
    let c = DiscreteVariable::with_states("C", &["f", "t"]).unwrap();
    let s = BnStructure::new(
        vec![a.clone(), b.clone(), c.clone()],
        vec![("A".into(), "B".into()), ("A".into(), "C".into()), ("B".into(), "C".into())],
    )
    .unwrap();
    let pa = Factor::new(vec![a.clone()], vec![0.3, 0.7]).unwrap();
    let pb = Factor::new(vec![a.clone(), b.clone()], vec![0.6, 0.3, 0.1, 0.2, 0.3, 0.5]).unwrap();
    let pc = Factor::new(vec![a, b, c], vec![0.9, 0.1, 0.7, 0.3, 0.5, 0.5, 0.4, 0.6, 0.2, 0.8, 0.1, 0.9]).unwrap();
    BayesianNetwork::new(s, vec![pa, pb, pc]).unwrap()
}

/// Binary chain A -> B -> C with every parent row well populated.
fn chain3() -> BayesianNetwork {
    let v = |n: &str| DiscreteVariable::with_states(n, &["f", "t"]).unwrap();
    let s = BnStructure::new(vec![v("A"), v("B"), v("C")], vec![("A".into(), "B".into()), ("B".into(), "C".into())])
        .unwrap();
    let pa = Factor::new(vec![v("A")], vec![0.45, 0.55]).unwrap();
    let pb = Factor::new(vec![v("A"), v("B")], vec![0.8, 0.2, 0.3, 0.7]).unwrap();
    let pc = Factor::new(vec![v("B"), v("C")], vec![0.6, 0.4, 0.1, 0.9]).unwrap();
    BayesianNetwork::new(s, vec![pa, pb, pc]).unwrap()
}

#[test]
fn learning_recovers_a_known_network() {
    let truth = chain3();
    let data = sample(&truth, 100, 42);
    let learned = learn_cpds(truth.structure(), &data, 1.0).unwrap();
    for (t, l) in truth.cpds().iter().zip(learned.cpds()) {
        let d = t.max_abs_diff(l).unwrap();
        assert!(d <= 0.15, "entry off by {d}");
    }
}

#[test]
fn deterministic_network_is_learned_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut truth = three_node();
    // make every CPD row a point mass
    let s = truth.structure().clone();
    let cpds: Vec<Factor> = (0..3)
        .map(|i| {
            let f = random_cpd(&mut rng, &s, i, false);
            let k = s.variables()[i].cardinality();
            let table: Vec<f64> = f
                .table()
                .chunks(k)
                .flat_map(|row| {
                    let m = rng.gen_range(0..row.len());
                    (0..row.len()).map(move |j| if j == m { 1.0 } else { 0.0 })
                })
                .collect();
            Factor::new(f.scope().to_vec(), table).unwrap()
        })
        .collect();
    truth = BayesianNetwork::new(s, cpds).unwrap();
    let data = sample(&truth, 20, 1);
    assert!(data.windows(2).all(|w| w[0] == w[1]));
    let learned = learn_cpds(truth.structure(), &data, 0.0).unwrap();
    // rows visited by the data match exactly
    let record = &data[0];
    for (i, (t, l)) in truth.cpds().iter().zip(learned.cpds()).enumerate() {
        let mut row: Vec<usize> = truth.structure().parents_of(i).iter().map(|&p| record[p]).collect();
        row.push(0);
        let k = truth.variables()[i].cardinality();
        let start = t.index_of(&row);
        assert_eq!(&t.table()[start..start + k], &l.table()[start..start + k]);
    }
}

#[test]
fn empirical_marginals_match_inference() {
    let bn = three_node();
    let n = 10_000;
    let data = sample(&bn, n, 7);
    for (i, v) in bn.variables().iter().enumerate() {
        let exact = ve_query(&bn, &[v.name()], &Evidence::new()).unwrap();
        for s in 0..v.cardinality() {
            let p = exact.table()[s];
            let freq = data.iter().filter(|r| r[i] == s).count() as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((freq - p).abs() <= 3.0 * se, "{}={s}: {freq} vs {p}", v.name());
        }
    }
}
