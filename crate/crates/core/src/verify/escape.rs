use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{FiniteConfig, Params, Word};
use crate::ca::step_f_config;
use crate::error::{Error, Result};
use crate::exec::Options;

/// Sampled configurations carry uniform digits on positions
/// `1 - radius ..= radius` and zeros elsewhere.
#[derive(Debug, Clone)]
pub struct EscapeQuery {
    /// Target cylinders, each anchored at position 1.
    pub targets: Vec<Word>,
    pub horizon: usize,
    pub samples: u64,
    pub seed: u64,
    pub radius: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscapeCensus {
    pub p: u32,
    pub q: u32,
    pub targets: Vec<String>,
    pub horizon: usize,
    pub samples: u64,
    pub seed: u64,
    pub radius: usize,
    /// First hitting time → number of samples.
    pub histogram: BTreeMap<usize, u64>,
    pub no_hit: u64,
}

impl EscapeCensus {
    /// `(no_hit, samples)`, the no-hit rate as an exact fraction.
    pub fn no_hit_rate(&self) -> (u64, u64) {
        (self.no_hit, self.samples)
    }
}

fn hits(c: &FiniteConfig, targets: &[Word]) -> bool {
    targets
        .iter()
        .any(|w| w.digits().iter().enumerate().all(|(j, &d)| c.at(1 + j as i64) == d))
}

/// The least `t ≤ horizon` with `F^t(c)` in some target cylinder, for each
/// sampled `c`. Sample `n` draws from a ChaCha stream selected by `n`, so the
/// histogram depends only on the query.
pub fn escape_time_census(params: &Params, query: &EscapeQuery, opts: &Options) -> Result<EscapeCensus> {
    if query.targets.iter().any(Word::is_empty) {
        return Err(Error::EmptyWord);
    }
    for w in &query.targets {
        for &d in w.digits() {
            params.check_digit(d as u64)?;
        }
    }
    let b = params.base();
    let width = 2 * query.radius;
    let times = opts.exec.map_range(query.samples, |n| {
        let mut rng = ChaCha8Rng::seed_from_u64(query.seed);
        rng.set_stream(n);
        let digits = (0..width).map(|_| rng.gen_range(0..b)).collect();
        let mut c = FiniteConfig::new(1 - query.radius as i64, digits);
        for t in 0..=query.horizon {
            if hits(&c, &query.targets) {
                return Some(t);
            }
            if t < query.horizon {
                c = step_f_config(params, &c, 1);
            }
        }
        None
    });
    let mut histogram = BTreeMap::new();
    let mut no_hit = 0;
    for t in times {
        match t {
            Some(t) => *histogram.entry(t).or_insert(0) += 1,
            None => no_hit += 1,
        }
    }
    Ok(EscapeCensus {
        p: params.p(),
        q: params.q(),
        targets: query.targets.iter().map(|w| w.render(b)).collect(),
        horizon: query.horizon,
        samples: query.samples,
        seed: query.seed,
        radius: query.radius,
        histogram,
        no_hit,
    })
}
