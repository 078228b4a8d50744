//! Finite unions of half-open intervals in `[0, 1)` with exact endpoints, and
//! the interval constructions `Y`, `X`, `I` and `J`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_rat, frac, parse_rat, rat, real_of_word, Params, Rat, Word};
use crate::error::{Error, Result};
use crate::exec::Options;
use crate::trace::{
    build_det_table, decode_prefix, is_trace_word_limited, pruned_language_limited, pruned_size,
    special_digits, ArithmeticDeterminer, Determination, TraceWord, MAX_TABLE_BASE,
};

/// Sorted, disjoint, non-adjacent half-open intervals inside `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    intervals: Vec<(Rat, Rat)>,
}

impl IntervalSet {
    pub fn empty() -> IntervalSet {
        IntervalSet::default()
    }

    pub fn unit() -> IntervalSet {
        IntervalSet {
            intervals: vec![(Rat::zero(), Rat::one())],
        }
    }

    /// Normalizes arbitrary pairs: clips to `[0, 1)`, drops empty pieces,
    /// sorts and merges overlapping or touching intervals.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Rat, Rat)>) -> IntervalSet {
        let zero = Rat::zero();
        let one = Rat::one();
        let mut pairs: Vec<(Rat, Rat)> = pairs
            .into_iter()
            .map(|(a, b)| (a.max(zero.clone()), b.min(one.clone())))
            .filter(|(a, b)| a < b)
            .collect();
        pairs.sort();
        let mut merged: Vec<(Rat, Rat)> = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            match merged.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        IntervalSet { intervals: merged }
    }

    pub fn intervals(&self) -> &[(Rat, Rat)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_pairs(self.intervals.iter().chain(&other.intervals).cloned())
    }

    pub fn measure(&self) -> Rat {
        self.intervals
            .iter()
            .fold(Rat::zero(), |acc, (a, b)| acc + (b - a))
    }

    /// Whether the fractional part of `xi` lies in the set.
    pub fn contains(&self, xi: &Rat) -> bool {
        let x = frac(xi);
        let idx = self.intervals.partition_point(|(a, _)| *a <= x);
        idx > 0 && x < self.intervals[idx - 1].1
    }

    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = Rat::zero();
        for (a, b) in &self.intervals {
            if cursor < *a {
                out.push((cursor.clone(), a.clone()));
            }
            cursor = b.clone();
        }
        if cursor < Rat::one() {
            out.push((cursor, Rat::one()));
        }
        IntervalSet { intervals: out }
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.union(other) == *other
    }

    /// Compact JSON, e.g. `{"intervals":[["0/1","1/3"]],"total_length":"1/3"}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&IntervalSetDoc::from(self)).expect("plain strings serialize")
    }

    pub fn from_json(text: &str) -> Result<IntervalSet> {
        let doc: IntervalSetDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        parse_pairs(&doc.intervals)
    }

    /// One interval per row under the header `a_num,a_den,b_num,b_den`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a_num,a_den,b_num,b_den\n");
        for (a, b) in &self.intervals {
            out.push_str(&format!("{},{},{},{}\n", a.numer(), a.denom(), b.numer(), b.denom()));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<IntervalSet> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("a_num,a_den,b_num,b_den") {
            return Err(Error::Parse("missing interval CSV header".into()));
        }
        let mut pairs = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::Parse(format!("bad interval row {line:?}")));
            }
            let a = parse_rat(&format!("{}/{}", fields[0], fields[1]))?;
            let b = parse_rat(&format!("{}/{}", fields[2], fields[3]))?;
            pairs.push([fmt_rat(&a), fmt_rat(&b)]);
        }
        parse_pairs(&pairs)
    }
}

fn parse_pairs(pairs: &[[String; 2]]) -> Result<IntervalSet> {
    let mut out = Vec::with_capacity(pairs.len());
    for [a, b] in pairs {
        let (a, b) = (parse_rat(a)?, parse_rat(b)?);
        if a < Rat::zero() || b > Rat::one() || a >= b {
            return Err(Error::Parse(format!("bad interval [{a}, {b})")));
        }
        out.push((a, b));
    }
    Ok(IntervalSet::from_pairs(out))
}

#[derive(Serialize, Deserialize)]
struct IntervalSetDoc {
    intervals: Vec<[String; 2]>,
    total_length: String,
}

impl From<&IntervalSet> for IntervalSetDoc {
    fn from(s: &IntervalSet) -> Self {
        IntervalSetDoc {
            intervals: s.intervals.iter().map(|(a, b)| [fmt_rat(a), fmt_rat(b)]).collect(),
            total_length: fmt_rat(&s.measure()),
        }
    }
}

/// Which construction an [`IntervalReport`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    X,
    Y,
    I,
    J,
}

/// Full description of a constructed set, serialized in a fixed field order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalReport {
    pub p: u32,
    pub q: u32,
    pub kind: Kind,
    pub k: Option<usize>,
    pub epsilon: Option<String>,
    pub intervals: Vec<[String; 2]>,
    pub total_length: String,
    pub word_count: u64,
}

impl IntervalReport {
    pub fn new(
        params: &Params,
        kind: Kind,
        k: Option<usize>,
        epsilon: Option<&Rat>,
        set: &IntervalSet,
        word_count: u64,
    ) -> IntervalReport {
        let doc = IntervalSetDoc::from(set);
        IntervalReport {
            p: params.p(),
            q: params.q(),
            kind,
            k,
            epsilon: epsilon.map(fmt_rat),
            intervals: doc.intervals,
            total_length: doc.total_length,
            word_count,
        }
    }

    pub fn set(&self) -> Result<IntervalSet> {
        parse_pairs(&self.intervals)
    }
}

fn require_wide(params: &Params) -> Result<()> {
    if params.p() < 2 * params.q() - 1 {
        return Err(Error::PreconditionViolated(format!(
            "need p >= 2q - 1, got {params}"
        )));
    }
    Ok(())
}

/// `⋃_d [k_d/p, (k_d+1)/p)`.
pub fn build_y(params: &Params) -> Result<IntervalSet> {
    require_wide(params)?;
    let sd = special_digits(params)?;
    let p = params.p() as i64;
    Ok(IntervalSet::from_pairs(
        sd.k.iter().map(|&k| (rat(k as i64, p), rat(k as i64 + 1, p))),
    ))
}

/// `⋃_{a ∈ D} [a/pq, (a+1)/pq)`.
pub fn build_x(params: &Params) -> Result<IntervalSet> {
    require_wide(params)?;
    let sd = special_digits(params)?;
    let b = params.base() as i64;
    Ok(IntervalSet::from_pairs(
        sd.digits.iter().map(|&a| (rat(a as i64, b), rat(a as i64 + 1, b))),
    ))
}

/// A constructed `I` set with its pre-merge statistics.
#[derive(Debug, Clone)]
pub struct IBuild {
    pub set: IntervalSet,
    pub candidates: u64,
    /// Distinct decoded prefixes, one cylinder each before merging.
    pub word_count: u64,
}

/// Union of the cylinders `[0.w, 0.w + (pq)^-k)` over every prefix `w` decoded
/// from a candidate trace word of length `2k-1`.
pub fn build_i(params: &Params, k: usize, exact_filter: bool, opts: &Options) -> Result<IBuild> {
    require_wide(params)?;
    if k == 0 {
        return Err(Error::PreconditionViolated("k must be at least 1".into()));
    }
    let candidates = pruned_language_limited(params, 2 * k - 1, opts.work_limit)?;
    if params.base() <= MAX_TABLE_BASE {
        let table = build_det_table(params, opts)?;
        collect_cylinders(params, k, exact_filter, &candidates, &table, opts)
    } else {
        let det = ArithmeticDeterminer::new(params);
        collect_cylinders(params, k, exact_filter, &candidates, &det, opts)
    }
}

fn collect_cylinders(
    params: &Params,
    k: usize,
    exact_filter: bool,
    candidates: &[TraceWord],
    det: &(impl Determination + Sync),
    opts: &Options,
) -> Result<IBuild> {
    let decoded = opts.exec.map_slice(candidates, |u| -> Result<Option<Word>> {
        if exact_filter && !is_trace_word_limited(params, u, opts.work_limit)? {
            return Ok(None);
        }
        match decode_prefix(det, u) {
            Ok(w) => Ok(Some(w)),
            Err(Error::Unrealizable(_)) => Ok(None),
            Err(e) => Err(e),
        }
    });
    let mut words = BTreeSet::new();
    for w in decoded {
        if let Some(w) = w? {
            words.insert(w);
        }
    }
    let width = Rat::new(1.into(), params.base_big().pow(k as u32).into());
    let set = IntervalSet::from_pairs(words.iter().map(|w| {
        let a = real_of_word(params, w);
        let b = &a + &width;
        (a, b)
    }));
    Ok(IBuild {
        set,
        candidates: candidates.len() as u64,
        word_count: words.len() as u64,
    })
}

/// `{ {ξ p/q} : {ξ} ∈ S }`, i.e. the union over `j < q` of
/// `(j/q + (p/q) S) mod 1`.
pub fn push_forward(params: &Params, s: &IntervalSet) -> IntervalSet {
    let p = Rat::from_integer(params.p().into());
    let q = Rat::from_integer(params.q().into());
    let ratio = &p / &q;
    let mut pieces = Vec::new();
    for (a, b) in s.intervals() {
        for j in 0..params.q() {
            let shift = Rat::from_integer(j.into()) / &q;
            let lo = &shift + a * &ratio;
            let hi = &shift + b * &ratio;
            if &hi - &lo >= Rat::one() {
                return IntervalSet::unit();
            }
            let whole = lo.floor();
            let (lo, hi) = (lo - &whole, hi - &whole);
            if hi <= Rat::one() {
                pieces.push((lo, hi));
            } else {
                pieces.push((lo, Rat::one()));
                pieces.push((Rat::zero(), hi - Rat::one()));
            }
        }
    }
    IntervalSet::from_pairs(pieces)
}

/// The parameters chosen for a `J` construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JPlan {
    pub n: u32,
    pub eta: Rat,
    pub k: usize,
    pub inner: Params,
    /// Candidate trace words that building `I_0` enumerates.
    pub candidates: BigUint,
}

/// Least `n` with `p^n ≥ 2q^n - 1`, then `η = ε(p-1)/(p^n-1)` and the least
/// `k` with `(q^n/p^n)^k ≤ η`.
pub fn plan_j(params: &Params, epsilon: &Rat) -> Result<JPlan> {
    let (p, q) = (params.p(), params.q());
    if p <= q {
        return Err(Error::PreconditionViolated(format!("need p > q, got {params}")));
    }
    if *epsilon <= Rat::zero() || *epsilon > Rat::one() {
        return Err(Error::PreconditionViolated(format!(
            "epsilon must lie in (0, 1], got {}",
            fmt_rat(epsilon)
        )));
    }
    let (pb, qb) = (BigUint::from(p), BigUint::from(q));
    let mut n = 1u32;
    while pb.pow(n) + 1u32 < qb.pow(n) * 2u32 {
        n += 1;
    }
    let (pn, qn) = (pb.pow(n), qb.pow(n));
    let big = |x: &BigUint| Rat::from_integer(x.clone().into());
    let eta = epsilon * Rat::from_integer((p - 1).into()) / (big(&pn) - Rat::one());
    let ratio = big(&qn) / big(&pn);
    let mut k = 1usize;
    let mut power = ratio.clone();
    while power > eta {
        power *= &ratio;
        k += 1;
    }
    let (pn, qn) = match (pn.to_u64(), qn.to_u64()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::OutOfRange(format!("{p}^{n} or {q}^{n} does not fit in 64 bits")))
        }
    };
    let inner = Params::new(pn, qn)?;
    let candidates = pruned_size(&inner, 2 * k - 1);
    Ok(JPlan {
        n,
        eta,
        k,
        inner,
        candidates,
    })
}

#[derive(Debug, Clone)]
pub struct JBuild {
    pub plan: JPlan,
    pub set: IntervalSet,
    /// Decoded words behind `I_0`.
    pub word_count: u64,
}

/// `I_0 ∪ … ∪ I_{n-1}` where `I_0` is the `I` set of `(p^n, q^n)` and each
/// later `I_i` is the push-forward of the previous one under `ξ ↦ ξ p/q`.
pub fn build_j(params: &Params, epsilon: &Rat, opts: &Options) -> Result<JBuild> {
    let plan = plan_j(params, epsilon)?;
    if plan.candidates > BigUint::from(opts.work_limit) {
        return Err(Error::Infeasible {
            limit: opts.work_limit,
            needed: format!(
                "{} candidate trace words of length {} for {}",
                plan.candidates,
                2 * plan.k - 1,
                plan.inner
            ),
        });
    }
    let i0 = build_i(&plan.inner, plan.k, false, opts)?;
    let mut current = i0.set.clone();
    let mut set = current.clone();
    for _ in 1..plan.n {
        current = push_forward(params, &current);
        set = set.union(&current);
    }
    Ok(JBuild {
        plan,
        set,
        word_count: i0.word_count,
    })
}
