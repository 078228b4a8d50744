use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{Report, Tally};
use crate::arith::{config_of_rat, fill_word_u64, integ_u64, rat, rat_of_config, Digit, Params, Rat};
use crate::ca::{f_local, ftpow_value_u64, g_local, iterate_f, step_f_config, step_g_config};
use crate::error::{Error, Result};
use crate::exec::Options;
use crate::trace::{build_det_table, ArithmeticDeterminer, Determination};

fn tuple(base: u64, mut index: u64, out: &mut [Digit]) {
    for slot in out.iter_mut() {
        *slot = (index % base) as Digit;
        index /= base;
    }
}

fn pair_json(params: &Params) -> serde_json::Value {
    json!({ "p": params.p(), "q": params.q() })
}

/// Scans every digit tuple for the three local congruence lemmas:
/// `g(x,z) = g(y,w) ⇒ x ≡ y`, `g(x,a) ≡ g(y,a) ⇔ x ≡ y` and
/// `f(x,a,y) = f(z,a,w) ⇒ x ≡ z`, all modulo `q`.
pub fn verify_local_lemmas(params: &Params, opts: &Options) -> Vec<Report> {
    let b = params.base() as u64;
    let q = params.q();
    let p = *params;

    let started = Instant::now();
    let tally = opts.exec.fold_range(
        b.pow(4),
        Tally::default,
        |acc, idx| {
            let mut d = [0; 4];
            tuple(b, idx, &mut d);
            let [x, z, y, w] = d;
            let ok = g_local(&p, x, z) != g_local(&p, y, w) || x % q == y % q;
            acc.check(idx, ok, || format!("g({x},{z}) = g({y},{w}) but {x} ≢ {y} (mod {q})"))
        },
        Tally::merge,
    );
    let equal_images = tally.into_report("g-equal-images", pair_json(params), started);

    let started = Instant::now();
    let tally = opts.exec.fold_range(
        b.pow(3),
        Tally::default,
        |acc, idx| {
            let mut d = [0; 3];
            tuple(b, idx, &mut d);
            let [x, y, a] = d;
            let lhs = g_local(&p, x, a) % q == g_local(&p, y, a) % q;
            let rhs = x % q == y % q;
            acc.check(idx, lhs == rhs, || {
                format!("g({x},{a}) ≡ g({y},{a}) is {lhs} but {x} ≡ {y} is {rhs} (mod {q})")
            })
        },
        Tally::merge,
    );
    let congruent_images = tally.into_report("g-congruent-images", pair_json(params), started);

    let started = Instant::now();
    let tally = opts.exec.fold_range(
        b.pow(5),
        Tally::default,
        |acc, idx| {
            let mut d = [0; 5];
            tuple(b, idx, &mut d);
            let [x, a, y, z, w] = d;
            let ok = f_local(&p, x, a, y) != f_local(&p, z, a, w) || x % q == z % q;
            acc.check(idx, ok, || format!("f({x},{a},{y}) = f({z},{a},{w}) but {x} ≢ {z} (mod {q})"))
        },
        Tally::merge,
    );
    let f_images = tally.into_report("f-equal-images", pair_json(params), started);

    vec![equal_images, congruent_images, f_images]
}

/// Direct iteration of `F^t` on every word of length `k` against the
/// odometer description: words below `q^(2t)` map to zero, adding `q^(2t)`
/// adds one, and the closed form agrees everywhere.
pub fn verify_odometer(params: &Params, k_max: usize, t_max: usize, opts: &Options) -> Result<Report> {
    if t_max == 0 || k_max < 2 * t_max + 1 {
        return Err(Error::PreconditionViolated(format!(
            "need t_max >= 1 and k_max >= 2 t_max + 1, got k_max = {k_max}, t_max = {t_max}"
        )));
    }
    let b = params.base() as u64;
    if b.checked_pow(k_max as u32).is_none_or(|n| n > opts.work_limit) {
        return Err(Error::WorkLimit(opts.work_limit));
    }
    let started = Instant::now();
    let mut tally = Tally::default();
    let mut offset = 0u64;
    for t in 1..=t_max {
        for k in 2 * t + 1..=k_max {
            let count = b.pow(k as u32);
            let image_mod = b.pow((k - 2 * t) as u32);
            let jump = (params.q() as u64).pow(2 * t as u32);
            let values: Vec<u64> = opts.exec.map_range(count, |m| {
                let mut w = vec![0; k];
                fill_word_u64(b, m, &mut w);
                integ_u64(b, &iterate_f(params, &w, t)).expect("fits by construction")
            });
            let values = &values;
            let part = opts.exec.fold_range(
                count,
                Tally::default,
                |acc, m| {
                    let v = values[m as usize];
                    let acc = if m < jump {
                        acc.check(offset + 3 * m, v == 0, || format!("k={k} t={t}: integ {m} < {jump} maps to {v}"))
                    } else {
                        acc
                    };
                    let next = values[((m + jump) % count) as usize];
                    let acc = acc.check(offset + 3 * m + 1, next == (v + 1) % image_mod, || {
                        format!("k={k} t={t}: {m} maps to {v} but {m}+{jump} maps to {next}")
                    });
                    let closed = ftpow_value_u64(params, m, k, t);
                    acc.check(offset + 3 * m + 2, closed == Some(v), || {
                        format!("k={k} t={t}: {m} iterates to {v}, closed form gives {closed:?}")
                    })
                },
                Tally::merge,
            );
            tally = tally.merge(part);
            offset += 3 * count;
        }
    }
    Ok(tally.into_report(
        "odometer",
        json!({ "p": params.p(), "q": params.q(), "k_max": k_max, "t_max": t_max }),
        started,
    ))
}

/// For every word `w` of odd length `len ≥ 5`, applying `F_{p,q}` and then
/// `F_{q,p}` (and the other order) returns the middle window of `w`.
pub fn verify_reversibility(params: &Params, len: usize, opts: &Options) -> Result<Report> {
    if len < 5 || len.is_multiple_of(2) {
        return Err(Error::PreconditionViolated(format!("word length must be odd and at least 5, got {len}")));
    }
    let b = params.base() as u64;
    let count = b
        .checked_pow(len as u32)
        .filter(|n| *n <= opts.work_limit)
        .ok_or(Error::WorkLimit(opts.work_limit))?;
    let inverse = params.swapped();
    let started = Instant::now();
    let tally = opts.exec.fold_range(
        count,
        Tally::default,
        |acc, m| {
            let mut w = vec![0; len];
            fill_word_u64(b, m, &mut w);
            let middle = &w[2..len - 2];
            let there = iterate_f(&inverse, &iterate_f(params, &w, 1), 1);
            let back = iterate_f(params, &iterate_f(&inverse, &w, 1), 1);
            let acc = acc.check(2 * m, there == middle, || format!("{w:?} -> {there:?}"));
            acc.check(2 * m + 1, back == middle, || format!("{w:?} -> {back:?} (inverse first)"))
        },
        Tally::merge,
    );
    Ok(tally.into_report(
        "reversibility",
        json!({ "p": params.p(), "q": params.q(), "len": len }),
        started,
    ))
}

/// Builds the determination table, then compares it key by key with the
/// arithmetic determiner and with the digits it must recover.
pub fn verify_det_table(params: &Params, opts: &Options) -> Report {
    let started = Instant::now();
    let b = params.base() as u64;
    let table = match build_det_table(params, opts) {
        Ok(table) => table,
        Err(e) => {
            return Tally::default()
                .check(0, false, || e.to_string())
                .into_report("determination", pair_json(params), started)
        }
    };
    let arith = ArithmeticDeterminer::new(params);
    let inverse = params.swapped();
    let tally = opts.exec.fold_range(
        b.pow(3),
        Tally::default,
        |acc, idx| {
            let mut d = [0; 3];
            tuple(b, idx, &mut d);
            let [up, mid, down] = d;
            let (x, y) = (up, down);
            let (key_up, key_down) = (f_local(&inverse, x, mid, y), f_local(params, x, mid, y));
            let found = table.lookup(key_up, mid, key_down);
            let acc = acc.check(2 * idx, found == Some(x), || {
                format!("({key_up},{mid},{key_down}) from x={x} looks up {found:?}")
            });
            let (t, a) = (table.lookup(up, mid, down), arith.lookup(up, mid, down));
            acc.check(2 * idx + 1, t == a, || format!("({up},{mid},{down}): table {t:?}, arithmetic {a:?}"))
        },
        Tally::merge,
    );
    tally.into_report("determination", pair_json(params), started)
}

/// Random terminating rationals: `G` multiplies by `p`, `F` by `p/q` and
/// `F^-1` by `q/p`, all exactly.
pub fn verify_multiplication(params: &Params, samples: u64, seed: u64, opts: &Options) -> Report {
    let started = Instant::now();
    let b = params.base() as i64;
    let (p, q) = (params.p() as i64, params.q() as i64);
    let tally = opts.exec.fold_range(
        samples,
        Tally::default,
        |acc, i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let scale = rng.gen_range(0..5u32);
            let numer = rng.gen_range(0..b.pow(6));
            let x: Rat = rat(numer, b.pow(scale));
            let c = config_of_rat(params, &x).expect("non-negative terminating value");
            let g = rat_of_config(params, &step_g_config(params, &c));
            let f = rat_of_config(params, &step_f_config(params, &c, 1));
            let f_inv = rat_of_config(params, &step_f_config(params, &c, -1));
            let ok = g == &x * rat(p, 1) && f == &x * rat(p, q) && f_inv == &x * rat(q, p);
            acc.check(i, ok, || format!("x = {x}: G {g}, F {f}, F^-1 {f_inv}"))
        },
        Tally::merge,
    );
    tally.into_report(
        "multiplication",
        json!({ "p": params.p(), "q": params.q(), "samples": samples, "seed": seed }),
        started,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_lemma_tuple_counts() {
        let params = Params::new(3, 2).unwrap();
        let reports = verify_local_lemmas(&params, &Options::default());
        let counts: Vec<u64> = reports.iter().map(|r| r.checked).collect();
        assert_eq!(counts, vec![1296, 216, 7776]);
        assert!(reports.iter().all(Report::passed));
    }

    #[test]
    fn odometer_small() {
        let params = Params::new(3, 2).unwrap();
        let r = verify_odometer(&params, 5, 2, &Options::default()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(verify_odometer(&params, 4, 2, &Options::default()).is_err());
    }

    #[test]
    fn reversibility_and_table() {
        let params = Params::new(5, 2).unwrap();
        let r = verify_reversibility(&params, 5, &Options::default()).unwrap();
        assert_eq!(r.checked, 200_000);
        assert!(verify_reversibility(&params, 3, &Options::default()).is_err());
        assert!(r.passed());
        assert!(verify_det_table(&params, &Options::default()).passed());
    }

    #[test]
    fn tally_lists_smallest_indices_in_any_order() {
        let mut a = Tally::default();
        for i in (0..40).rev() {
            a = a.check(i, i % 2 == 0, || i.to_string());
        }
        assert_eq!(a.violations, 20);
        let listed: Vec<u64> = a.listed.iter().map(|l| l.0).collect();
        assert_eq!(listed, (0..16).map(|i| 2 * i + 1).collect::<Vec<_>>());
    }

    #[test]
    fn sequential_and_parallel_reports_agree() {
        let params = Params::new(3, 2).unwrap();
        let seq = verify_multiplication(&params, 200, 7, &Options::sequential());
        let par = verify_multiplication(&params, 200, 7, &Options::default());
        assert_eq!(seq.checked, par.checked);
        assert!(seq.passed() && par.passed());
    }
}
