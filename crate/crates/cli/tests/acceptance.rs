//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so that every line is printed; the
//! process exits non-zero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use pqca::arith::{fmt_rat, rat, Params, Rat, Word};
use pqca::ca::g_local;
use pqca::exec::Options;
use pqca::intervals::{build_i, build_j, build_x, plan_j};
use pqca::trace::{build_det_table, language_census, pruned_language, Determination};
use pqca::verify::{
    escape_time_census, mixing_bound, mixing_measure, orbit_stays_in, verify_local_lemmas,
    verify_multiplication, verify_odometer, verify_reversibility, witness_search, EscapeQuery,
    MixingMethod, MixingQuery, OrbitQuery,
};

const PAIRS: [(u64, u64); 5] = [(3, 2), (5, 2), (5, 3), (4, 3), (7, 4)];

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn params(p: u64, q: u64) -> Params {
    Params::new(p, q).expect("valid pair")
}

fn within(limit: Duration, started: Instant) -> Result<String, String> {
    let spent = started.elapsed();
    if spent < limit {
        Ok(format!("{} ms < {} ms", spent.as_millis(), limit.as_millis()))
    } else {
        Err(format!("took {} ms, limit {} ms", spent.as_millis(), limit.as_millis()))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn diagram_fidelity() -> Outcome {
    let started = Instant::now();
    let published: [[u32; 6]; 6] = [
        [0, 0, 1, 1, 2, 2],
        [3, 3, 4, 4, 5, 5],
        [0, 0, 1, 1, 2, 2],
        [3, 3, 4, 4, 5, 5],
        [0, 0, 1, 1, 2, 2],
        [3, 3, 4, 4, 5, 5],
    ];
    let p32 = params(3, 2);
    let mut entries = 0;
    for (x, row) in published.iter().enumerate() {
        for (y, &want) in row.iter().enumerate() {
            let got = g_local(&p32, x as u32, y as u32);
            ensure(got == want, || format!("g({x},{y}) = {got}, table says {want}"))?;
            entries += 1;
        }
    }
    let out = Command::new(env!("CARGO_BIN_EXE_pqca"))
        .args(["simulate", "--p", "3", "--q", "2", "--word", "3434205"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("simulate exited with {}", out.status))?;
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<&str> = text.lines().map(str::trim).collect();
    ensure(rows == ["3434205", "35331", "521", "0"], || format!("simulate rows {rows:?}"))?;
    let time = within(Duration::from_secs(1), started)?;
    Ok(format!("{entries} table entries match; rows 35331 / 521 / 0; {time}"))
}

fn multiplication_law() -> Outcome {
    let started = Instant::now();
    let mut checked = 0;
    for (p, q) in PAIRS {
        let r = verify_multiplication(&params(p, q), 1000, 0x5eed + p * 10 + q, &Options::default());
        ensure(r.passed(), || format!("({p},{q}): {:?}", r.violations))?;
        checked += r.checked;
    }
    let time = within(Duration::from_secs(10), started)?;
    Ok(format!("{checked} rationals, G = ×p, F = ×p/q, F⁻¹ = ×q/p exactly; {time}"))
}

fn reversibility() -> Outcome {
    let started = Instant::now();
    let r = verify_reversibility(&params(3, 2), 5, &Options::default()).map_err(|e| e.to_string())?;
    ensure(r.passed() && r.checked == 2 * 6u64.pow(5), || format!("{r:?}"))?;
    let time = within(Duration::from_secs(30), started)?;
    Ok(format!("{} words, both orders, 0 exceptions; {time}", 6u64.pow(5)))
}

fn determination() -> Outcome {
    let mut defined = Vec::new();
    for (p, q) in PAIRS {
        let table = build_det_table(&params(p, q), &Options::default()).map_err(|e| format!("({p},{q}): {e}"))?;
        defined.push(format!("({p},{q}) {} keys", table.defined_keys()));
        if (p, q) == (3, 2) {
            let got = table.lookup(2, 4, 3);
            ensure(got == Some(3), || format!("lookup(2,4,3) = {got:?}"))?;
        }
    }
    Ok(format!("0 conflicts: {}; lookup(2,4,3) = 3", defined.join(", ")))
}

fn local_lemmas() -> Outcome {
    let mut checked = 0;
    for (p, q) in PAIRS {
        for r in verify_local_lemmas(&params(p, q), &Options::default()) {
            ensure(r.passed(), || format!("({p},{q}) {}: {:?}", r.name, r.violations))?;
            checked += r.checked;
        }
    }
    Ok(format!("{checked} tuples over five pairs, 0 violations"))
}

fn odometer() -> Outcome {
    let started = Instant::now();
    let r = verify_odometer(&params(3, 2), 7, 3, &Options::default()).map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("{:?}", r.violations))?;
    let time = within(Duration::from_secs(60), started)?;
    Ok(format!(
        "k ≤ 7, t ≤ 3 ({} words of length 7), {} checks, 0 violations; {time}",
        6u64.pow(7),
        r.checked
    ))
}

fn trace_language_bound() -> Outcome {
    let p32 = params(3, 2);
    for n in 1..=8usize {
        let size = pruned_language(&p32, n).map_err(|e| e.to_string())?.len();
        ensure(size == 1 << (n + 1), || format!("n={n}: {size} pruned words"))?;
    }
    let mut census = Vec::new();
    for n in 1..=4usize {
        let exact = language_census(&p32, n, true, &Options::default()).map_err(|e| e.to_string())?;
        let exact: u64 = exact.to_string().parse().expect("small census");
        ensure(exact <= 1 << (n + 1), || format!("n={n}: census {exact}"))?;
        census.push(format!("{exact}/{}", 1 << (n + 1)));
    }
    Ok(format!("pruned sizes 2^(n+1) for n ≤ 8; exact census n ≤ 4: {}", census.join(" ")))
}

fn interval_constructions() -> Outcome {
    let opts = Options::default();
    let p32 = params(3, 2);
    let mut parts = Vec::new();
    let mut failures = Vec::new();

    let x = build_x(&p32).map_err(|e| e.to_string())?;
    if x.measure() == rat(2, 3) {
        parts.push("measure(X) = 2/3".to_string());
    } else {
        failures.push(format!("measure(X) = {}", fmt_rat(&x.measure())));
    }
    let i1 = build_i(&p32, 1, false, &opts).map_err(|e| e.to_string())?;
    if i1.set == x {
        parts.push("I(1) = X".to_string());
    } else {
        failures.push("I(1) differs from X".to_string());
    }
    for k in 1..=4usize {
        let built = build_i(&p32, k, false, &opts).map_err(|e| e.to_string())?;
        let bound = rat(2, 3).pow(k as i32);
        if built.set.measure() > bound || built.word_count > 4u64.pow(k as u32) {
            failures.push(format!(
                "I({k}): measure {} words {}",
                fmt_rat(&built.set.measure()),
                built.word_count
            ));
        }
    }
    parts.push("I(k ≤ 4) within (2/3)^k and 4^k".to_string());

    for eps in [rat(1, 2), rat(1, 10)] {
        match build_j(&p32, &eps, &opts) {
            Ok(j) if j.set.measure() <= eps => {
                parts.push(format!("J(3,2,{}) = {}", fmt_rat(&eps), fmt_rat(&j.set.measure())))
            }
            Ok(j) => failures.push(format!("J(3,2,{}) = {}", fmt_rat(&eps), fmt_rat(&j.set.measure()))),
            Err(e) => failures.push(format!("J(3,2,{}): {e}", fmt_rat(&eps))),
        }
    }

    let p43 = params(4, 3);
    for eps in [rat(1, 2), rat(1, 10)] {
        let plan = plan_j(&p43, &eps).map_err(|e| e.to_string())?;
        if plan.n != 3 {
            failures.push(format!("J(4,3,{}) selected n = {}", fmt_rat(&eps), plan.n));
            continue;
        }
        match build_j(&p43, &eps, &opts) {
            Ok(j) if j.set.measure() <= eps => {
                parts.push(format!("J(4,3,{}) = {} with n = 3", fmt_rat(&eps), fmt_rat(&j.set.measure())))
            }
            Ok(j) => failures.push(format!("J(4,3,{}) = {}", fmt_rat(&eps), fmt_rat(&j.set.measure()))),
            Err(e) => failures.push(format!("J(4,3,{}) with n = 3, k = {}: {e}", fmt_rat(&eps), plan.k)),
        }
    }
    if failures.is_empty() {
        Ok(parts.join("; "))
    } else {
        Err(format!("{} | passed: {}", failures.join("; "), parts.join("; ")))
    }
}

fn mixing() -> Outcome {
    let started = Instant::now();
    let p32 = params(3, 2);
    let opts = Options::default();
    let zero = Word(vec![0]);
    let query = |t| MixingQuery { v1: zero.clone(), v2: zero.clone(), i: 0, t };
    let naive = mixing_measure(&p32, &query(1), MixingMethod::Naive, &opts).map_err(|e| e.to_string())?;
    let arith = mixing_measure(&p32, &query(1), MixingMethod::Arithmetic, &opts).map_err(|e| e.to_string())?;
    ensure(naive == rat(1, 18) && arith == naive, || {
        format!("t=1: naive {}, arithmetic {}", fmt_rat(&naive), fmt_rat(&arith))
    })?;
    let mut last = Rat::from_integer(0.into());
    for t in 1..=12 {
        let mu = mixing_measure(&p32, &query(t), MixingMethod::Arithmetic, &opts).map_err(|e| e.to_string())?;
        let (lo, hi) = mixing_bound(&p32, &query(t)).map_err(|e| e.to_string())?;
        ensure(lo <= mu && mu <= hi, || format!("t={t}: {} outside [{}, {}]", fmt_rat(&mu), fmt_rat(&lo), fmt_rat(&hi)))?;
        last = mu;
    }
    let gap = &last - rat(1, 36);
    let gap = if gap < Rat::from_integer(0.into()) { -gap } else { gap };
    ensure(gap < rat(1, 1000), || format!("|μ_12 - 1/36| = {}", fmt_rat(&gap)))?;
    let time = within(Duration::from_secs(60), started)?;
    Ok(format!(
        "μ_1 = 1/18 by both methods; μ_t within bounds for t ≤ 12; μ_12 = {} (gap {:.2e}); {time}",
        fmt_rat(&last),
        gap_f64(&gap)
    ))
}

fn gap_f64(x: &Rat) -> f64 {
    let n: f64 = x.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = x.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

fn witnesses() -> Outcome {
    let mut found = Vec::new();
    for (p, q) in [(3, 2), (5, 2), (5, 3)] {
        let params = params(p, q);
        let set = build_x(&params).map_err(|e| e.to_string())?;
        let query = OrbitQuery::full_cone(set.clone(), 20);
        let c = witness_search(&params, &query, pqca::exec::DEFAULT_WORK_LIMIT)
            .map_err(|e| format!("({p},{q}): {e}"))?
            .ok_or_else(|| format!("({p},{q}): no depth-20 witness"))?;
        let stays = orbit_stays_in(&params, &c, &set, 20).map_err(|e| e.to_string())?;
        ensure(stays, || format!("({p},{q}): witness leaves X"))?;
        found.push(format!("({p},{q}) {}", c.render(params.base())));
    }
    Ok(format!("depth-20 orbit prefixes inside X: {}", found.join(", ")))
}

fn escape_census() -> Outcome {
    let p32 = params(3, 2);
    let query = EscapeQuery {
        targets: vec![Word(vec![0, 0])],
        horizon: 1000,
        samples: 1000,
        seed: 20_240_601,
        radius: 8,
    };
    let first = escape_time_census(&p32, &query, &Options::default()).map_err(|e| e.to_string())?;
    let again = escape_time_census(&p32, &query, &Options::sequential()).map_err(|e| e.to_string())?;
    ensure(first == again, || "histogram changed between runs".to_string())?;
    let (miss, total) = first.no_hit_rate();
    let max_time = first.histogram.keys().next_back().copied().unwrap_or(0);
    Ok(format!(
        "cyl(00,1), horizon 1000, 1000 samples: no-hit {miss}/{total}, latest hit at t = {max_time}; reproducible"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1", "diagram fidelity", diagram_fidelity),
        ("2", "multiplication law", multiplication_law),
        ("3", "reversibility", reversibility),
        ("4", "determination", determination),
        ("5", "local lemmas", local_lemmas),
        ("6", "odometer", odometer),
        ("7", "trace-language bound", trace_language_bound),
        ("8", "interval constructions", interval_constructions),
        ("9", "mixing", mixing),
        ("10", "orbit witnesses", witnesses),
        ("S", "escape-time census", escape_census),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let ms = started.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name} [{ms} ms]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name} [{ms} ms]: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
