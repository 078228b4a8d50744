use pqca::arith::{config_of_rat, rat, rat_of_config, Params, Rat, Word};
use pqca::ca::step_f_config;
use pqca::exec::Options;
use pqca::intervals::{build_i, build_x, push_forward, IntervalReport, Kind};
use pqca::trace::{build_det_table, decode_prefix, trace_of_window, ArithmeticDeterminer};
use pqca::verify::{orbit_stays_in, witness_search, OrbitQuery};
use proptest::prelude::*;

const PAIRS: [(u64, u64); 5] = [(3, 2), (5, 2), (5, 3), (4, 3), (7, 4)];

fn pair() -> impl Strategy<Value = Params> {
    (0..PAIRS.len()).prop_map(|i| Params::new(PAIRS[i].0, PAIRS[i].1).unwrap())
}

proptest! {
    #[test]
    fn decoding_a_centre_trace_recovers_the_window(params in pair(), k in 1usize..5, seed in proptest::collection::vec(any::<u32>(), 17)) {
        let len = 4 * k - 3;
        let b = params.base();
        let w = Word(seed.iter().take(len).map(|x| x % b).collect());
        let centre = 2 * k - 2;
        let u = trace_of_window(&params, &w, centre, -(k as i64 - 1), k as i64 - 1).unwrap();
        let table = build_det_table(&params, &Options::default()).unwrap();
        let by_table = decode_prefix(&table, &u).unwrap();
        let by_arith = decode_prefix(&ArithmeticDeterminer::new(&params), &u).unwrap();
        prop_assert_eq!(&by_table, &by_arith);
        prop_assert_eq!(by_table.digits(), &w.digits()[centre + 1 - k..=centre]);
    }

    #[test]
    fn forward_then_backward_is_identity(params in pair(), numer in 0i64..1_000_000, scale in 0u32..4, t in 0i64..6) {
        let x = rat(numer, (params.base() as i64).pow(scale));
        let c = config_of_rat(&params, &x).unwrap();
        let there = step_f_config(&params, &c, t);
        prop_assert_eq!(step_f_config(&params, &there, -t), c);
        let ratio = rat(params.p() as i64, params.q() as i64).pow(t as i32);
        prop_assert_eq!(rat_of_config(&params, &there), x * ratio);
    }
}

#[test]
fn first_level_sets_equal_x_for_wide_pairs() {
    for (p, q) in [(3, 2), (5, 2), (5, 3), (7, 2), (7, 3), (7, 4)] {
        let params = Params::new(p, q).unwrap();
        let i1 = build_i(&params, 1, false, &Options::default()).unwrap();
        assert_eq!(i1.set, build_x(&params).unwrap(), "({p},{q})");
        assert_eq!(i1.word_count, q * q);
    }
}

#[test]
fn second_level_word_counts_reach_the_bound() {
    // Every pruned candidate decodes and distinct candidates give distinct
    // prefixes, so the count is exactly q^(2k).
    for (p, q, k) in [(3u64, 2u64, 4usize), (5, 2, 3), (5, 3, 2)] {
        let params = Params::new(p, q).unwrap();
        let built = build_i(&params, k, false, &Options::default()).unwrap();
        assert_eq!(built.word_count, q.pow(2 * k as u32), "({p},{q}) k={k}");
        assert_eq!(built.set.measure(), rat(q as i64, p as i64).pow(k as i32));
    }
}

#[test]
fn push_forward_of_x_covers_orbit_images() {
    let params = Params::new(3, 2).unwrap();
    let x = build_x(&params).unwrap();
    let image = push_forward(&params, &x);
    for n in 0..600i64 {
        let xi = rat(n, 216);
        if x.contains(&xi) {
            assert!(image.contains(&(xi * rat(3, 2))));
        }
    }
}

#[test]
fn witnesses_exist_for_refined_sets() {
    let params = Params::new(3, 2).unwrap();
    for (k, horizon) in [(2, 12), (3, 6)] {
        let set = build_i(&params, k, false, &Options::default()).unwrap().set;
        let c = witness_search(&params, &OrbitQuery::full_cone(set.clone(), horizon), 50_000_000)
            .unwrap()
            .expect("witness");
        assert!(orbit_stays_in(&params, &c, &set, horizon).unwrap());
        assert!(rat_of_config(&params, &c) > Rat::from_integer(0.into()));
    }
}

#[test]
fn interval_report_field_order() {
    let params = Params::new(3, 2).unwrap();
    let x = build_x(&params).unwrap();
    let report = IntervalReport::new(&params, Kind::X, None, None, &x, 4);
    assert_eq!(
        serde_json::to_string(&report).unwrap(),
        r#"{"p":3,"q":2,"kind":"X","k":null,"epsilon":null,"intervals":[["0/1","1/6"],["1/3","2/3"],["5/6","1/1"]],"total_length":"2/3","word_count":4}"#
    );
    let back: IntervalReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(back.set().unwrap(), x);
}
