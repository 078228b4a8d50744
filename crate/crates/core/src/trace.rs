//! Traces of `F_{p,q}`: left determination of digits, decoding of trace words
//! into configuration prefixes, the special digit set `D_{p,q}` and the
//! transition-pruned enumeration of candidate trace words.
//!
//! Trace words are always indexed by increasing time: entry `t` is the digit
//! of the column in `F^t(c)`. The only place where time runs backwards is the
//! generator inside [`pruned_language`].

use num_bigint::BigUint;
use num_integer::Integer;

use crate::arith::{Digit, Params, Word};
use crate::ca::{f_local, f_word_into};
use crate::cone::ConeSearch;
use crate::error::{Error, Result};
use crate::exec::{Options, DEFAULT_WORK_LIMIT};

/// A column of a space-time diagram read by increasing time.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceWord(pub Word);

impl TraceWord {
    pub fn from_digits(digits: Vec<Digit>) -> TraceWord {
        TraceWord(Word(digits))
    }

    pub fn digits(&self) -> &[Digit] {
        self.0.digits()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The tables `k_d`, `j_d` and the digit set `D_{p,q}`.
///
/// For each `d < q`, `k_d < p` solves `k_d * q = j_d * p + d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialDigits {
    pub k: Vec<u32>,
    pub j: Vec<u32>,
    /// `D_{p,q}` in increasing order; `q^2` digits.
    pub digits: Vec<Digit>,
    /// `class[a mod p] = Some(d)` iff `a mod p = k_d`.
    class: Vec<Option<u32>>,
    member: Vec<bool>,
}

impl SpecialDigits {
    pub fn contains(&self, a: Digit) -> bool {
        self.member.get(a as usize).copied().unwrap_or(false)
    }

    /// The `d` with `a ≡ k_d (mod p)`, if `a` is in `D`.
    pub fn class_of(&self, params: &Params, a: Digit) -> Option<u32> {
        self.class[(a % params.p()) as usize]
    }
}

pub fn special_digits(params: &Params) -> Result<SpecialDigits> {
    let (p, q) = (params.p(), params.q());
    if p <= q {
        return Err(Error::PreconditionViolated(format!(
            "the digit tables need p > q, got {params}"
        )));
    }
    let mut k = Vec::with_capacity(q as usize);
    let mut j = Vec::with_capacity(q as usize);
    let mut class = vec![None; p as usize];
    for d in 0..q {
        let kd = (0..p)
            .find(|kd| (kd * q) % p == d % p)
            .expect("q is invertible mod p");
        // kd*q - d is a non-negative multiple of p because d < q < p.
        let jd = (kd * q - d) / p;
        k.push(kd);
        j.push(jd);
        class[kd as usize] = Some(d);
    }
    let member: Vec<bool> = (0..params.base())
        .map(|a| class[(a % p) as usize].is_some())
        .collect();
    let digits = (0..params.base()).filter(|&a| member[a as usize]).collect();
    Ok(SpecialDigits {
        k,
        j,
        digits,
        class,
        member,
    })
}

/// Left determination: the digit to the left of three vertically adjacent
/// digits `(up, mid, down)` at times `(τ-1, τ, τ+1)`.
pub trait Determination {
    fn params(&self) -> &Params;
    fn lookup(&self, up: Digit, mid: Digit, down: Digit) -> Option<Digit>;
}

const UNDEFINED: Digit = Digit::MAX;

/// The determination relation tabulated by scanning every `(x, a, y)`.
#[derive(Debug, Clone)]
pub struct DetTable {
    params: Params,
    /// Indexed `[mid][up][down]`.
    table: Vec<Digit>,
    defined: u64,
}

/// Largest base for which the dense table is built.
pub const MAX_TABLE_BASE: u32 = 256;

impl DetTable {
    pub fn defined_keys(&self) -> u64 {
        self.defined
    }

    fn index(&self, up: Digit, mid: Digit, down: Digit) -> usize {
        let b = self.params.base() as usize;
        (mid as usize * b + up as usize) * b + down as usize
    }
}

impl Determination for DetTable {
    fn params(&self) -> &Params {
        &self.params
    }

    fn lookup(&self, up: Digit, mid: Digit, down: Digit) -> Option<Digit> {
        let b = self.params.base();
        if up >= b || mid >= b || down >= b {
            return None;
        }
        let x = self.table[self.index(up, mid, down)];
        (x != UNDEFINED).then_some(x)
    }
}

/// Scans all of `A_pq^3` for the keys `(f_{q,p}(x,a,y), a, f_{p,q}(x,a,y))`.
/// A key reached from two different `x` is reported as a conflict.
pub fn build_det_table(params: &Params, opts: &Options) -> Result<DetTable> {
    let b = params.base();
    if b > MAX_TABLE_BASE {
        return Err(Error::Infeasible {
            limit: MAX_TABLE_BASE as u64,
            needed: format!("a dense table for base {b}"),
        });
    }
    let inverse = params.swapped();
    let bu = b as usize;
    // Keys with different `mid` never collide, so each slice is independent.
    let slices = opts.exec.map_range(b as u64, |a| {
        let a = a as Digit;
        let mut slice = vec![UNDEFINED; bu * bu];
        for x in 0..b {
            for y in 0..b {
                let up = f_local(&inverse, x, a, y);
                let down = f_local(params, x, a, y);
                let cell = &mut slice[up as usize * bu + down as usize];
                if *cell == UNDEFINED {
                    *cell = x;
                } else if *cell != x {
                    return Err(Error::ConsistencyViolation {
                        key: (up, a, down),
                        first: *cell,
                        second: x,
                    });
                }
            }
        }
        Ok(slice)
    });
    let mut table = Vec::with_capacity(bu * bu * bu);
    for slice in slices {
        table.extend(slice?);
    }
    let defined = table.iter().filter(|&&x| x != UNDEFINED).count() as u64;
    Ok(DetTable {
        params: *params,
        table,
        defined,
    })
}

/// Left determination computed arithmetically: `x mod q` is read off `(mid,
/// down)` and `x mod p` off `(up, mid)`, then `x` is recovered by CRT and the
/// key is checked for realizability. Works for any base, with no table.
#[derive(Debug, Clone)]
pub struct ArithmeticDeterminer {
    params: Params,
    p_inv_mod_q: u64,
    q_inv_mod_p: u64,
}

impl ArithmeticDeterminer {
    pub fn new(params: &Params) -> ArithmeticDeterminer {
        let (p, q) = (params.p() as u64, params.q() as u64);
        ArithmeticDeterminer {
            params: *params,
            p_inv_mod_q: mod_inverse(p, q),
            q_inv_mod_p: mod_inverse(q, p),
        }
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = (a as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i64) as u64
}

impl Determination for ArithmeticDeterminer {
    fn params(&self) -> &Params {
        &self.params
    }

    fn lookup(&self, up: Digit, mid: Digit, down: Digit) -> Option<Digit> {
        let params = &self.params;
        let b = params.base();
        if up >= b || mid >= b || down >= b {
            return None;
        }
        let (p, q) = (params.p() as u64, params.q() as u64);
        let (up, mid, down) = (up as u64, mid as u64, down as u64);
        // down = f_{p,q}(x, a, y) = (g(x,a) mod q)*p + g(a,y) div q and
        // g(x,a) mod q = (x0*p + a div q) mod q.
        let z0 = down / p;
        let x_mod_q = ((z0 + q - (mid / q) % q) % q) * self.p_inv_mod_q % q;
        // The same with the roles of p and q exchanged for up = f_{q,p}.
        let z0_inv = up / q;
        let x_mod_p = ((z0_inv + p - (mid / p) % p) % p) * self.q_inv_mod_p % p;
        let x = (x_mod_q..b as u64)
            .step_by(q as usize)
            .find(|x| x % p == x_mod_p)? as Digit;
        let inverse = params.swapped();
        let mid = mid as Digit;
        // The key is realizable when a single right neighbour produces both.
        (0..b)
            .any(|y| f_local(params, x, mid, y) as u64 == down && f_local(&inverse, x, mid, y) as u64 == up)
            .then_some(x)
    }
}

/// Decodes a trace word of length `2k-1`, read as column `k` at times
/// `-(k-1) ..= k-1`, into the time-0 digits `c(1..=k)`.
pub fn decode_prefix(det: &impl Determination, u: &TraceWord) -> Result<Word> {
    let n = u.len();
    if n.is_multiple_of(2) {
        return Err(Error::PreconditionViolated(format!(
            "trace word length must be odd, got {n}"
        )));
    }
    let k = n.div_ceil(2);
    let mut column = u.digits().to_vec();
    let mut prefix = vec![0; k];
    prefix[k - 1] = column[k - 1];
    for slot in (0..k - 1).rev() {
        let mut next = Vec::with_capacity(column.len() - 2);
        for s in column.windows(3) {
            let key = (s[0], s[1], s[2]);
            next.push(det.lookup(s[0], s[1], s[2]).ok_or(Error::Unrealizable(key))?);
        }
        column = next;
        prefix[slot] = column[column.len() / 2];
    }
    Ok(Word(prefix))
}

/// The digits of column `column` (0-based index into `w`) for times
/// `t_min ..= t_max`, stepping backwards with the inverse automaton.
pub fn trace_of_window(
    params: &Params,
    w: &Word,
    column: usize,
    t_min: i64,
    t_max: i64,
) -> Result<TraceWord> {
    if t_min > 0 || t_max < 0 {
        return Err(Error::PreconditionViolated(format!(
            "time range {t_min}..={t_max} must contain 0"
        )));
    }
    let reach = t_max.max(-t_min) as usize;
    if column < reach || column + reach >= w.len() {
        return Err(Error::OutOfCone);
    }
    let column_at = |rule: &Params, steps: usize| -> Vec<Digit> {
        let mut row = w.digits().to_vec();
        let mut next = Vec::new();
        let mut values = Vec::with_capacity(steps);
        for s in 1..=steps {
            f_word_into(rule, &row, &mut next);
            std::mem::swap(&mut row, &mut next);
            values.push(row[column - s]);
        }
        values
    };
    let backward = column_at(&params.swapped(), (-t_min) as usize);
    let forward = column_at(params, t_max as usize);
    let mut digits: Vec<Digit> = backward.into_iter().rev().collect();
    digits.push(w.digits()[column]);
    digits.extend(forward);
    Ok(TraceWord::from_digits(digits))
}

/// Whether `u` occurs as a column of some space-time diagram of `F_{p,q}`.
pub fn is_trace_word(params: &Params, u: &TraceWord) -> Result<bool> {
    is_trace_word_limited(params, u, DEFAULT_WORK_LIMIT)
}

pub fn is_trace_word_limited(params: &Params, u: &TraceWord, work_limit: u64) -> Result<bool> {
    if u.is_empty() {
        return Ok(true);
    }
    let target = u.digits();
    let accept = |t: usize, row: &[Digit]| row[0] == target[t];
    let search = ConeSearch {
        params: *params,
        width: 1,
        depth: u.len() - 1,
        radius: u.len(),
        require_nonzero: false,
        work_limit,
        accept: &accept,
    };
    Ok(search.run()?.is_some())
}

/// Candidate trace words of length `n` over `D_{p,q}` that respect the
/// transition rule of the mirrored language: reading backwards in time, a
/// digit `a ≡ k_d (mod p)` is followed by a digit `b ∈ D` with
/// `b ≡ j_d (mod q)`. Exactly `q^(n+1)` words, sorted; a superset of the
/// trace words over `D`.
pub fn pruned_language(params: &Params, n: usize) -> Result<Vec<TraceWord>> {
    pruned_language_limited(params, n, DEFAULT_WORK_LIMIT)
}

pub fn pruned_language_limited(params: &Params, n: usize, work_limit: u64) -> Result<Vec<TraceWord>> {
    let (p, q) = (params.p(), params.q());
    if p < 2 * q - 1 {
        return Err(Error::PreconditionViolated(format!("need p >= 2q - 1, got {params}")));
    }
    if n == 0 {
        return Ok(vec![TraceWord::from_digits(Vec::new())]);
    }
    let size = pruned_size(params, n);
    if size > BigUint::from(work_limit) {
        return Err(Error::Infeasible {
            limit: work_limit,
            needed: format!("{size} candidate trace words"),
        });
    }
    let special = special_digits(params)?;
    let successors: Vec<Vec<Digit>> = (0..params.base())
        .map(|a| match special.class_of(params, a) {
            Some(d) if special.contains(a) => special
                .digits
                .iter()
                .copied()
                .filter(|b| b % q == special.j[d as usize])
                .collect(),
            _ => Vec::new(),
        })
        .collect();
    let mut backwards: Vec<Vec<Digit>> = special.digits.iter().map(|&a| vec![a]).collect();
    for _ in 1..n {
        backwards = backwards
            .into_iter()
            .flat_map(|v| {
                let last = *v.last().expect("non-empty");
                successors[last as usize].iter().map(move |&b| {
                    let mut next = v.clone();
                    next.push(b);
                    next
                })
            })
            .collect();
    }
    let mut words: Vec<TraceWord> = backwards
        .into_iter()
        .map(|mut v| {
            v.reverse();
            TraceWord::from_digits(v)
        })
        .collect();
    words.sort();
    Ok(words)
}

/// `q^(n+1)`, the size of the pruned language of length `n`.
pub fn pruned_size(params: &Params, n: usize) -> BigUint {
    BigUint::from(params.q()).pow(n as u32 + 1)
}

/// `|L(p,q) ∩ D^n|` when `exact`, otherwise its upper bound `q^(n+1)`.
pub fn language_census(params: &Params, n: usize, exact: bool, opts: &Options) -> Result<BigUint> {
    let (p, q) = (params.p(), params.q());
    if p < 2 * q - 1 {
        return Err(Error::PreconditionViolated(format!("need p >= 2q - 1, got {params}")));
    }
    if !exact {
        return Ok(pruned_size(params, n));
    }
    let candidates = pruned_language_limited(params, n, opts.work_limit)?;
    let found = opts.exec.map_slice(&candidates, |u| {
        is_trace_word_limited(params, u, opts.work_limit).map_err(|e| match e {
            Error::WorkLimit(limit) => Error::Infeasible {
                limit,
                needed: format!("a witness search for {:?}", u.digits()),
            },
            other => other,
        })
    });
    let mut count = 0u64;
    for hit in found {
        count += hit? as u64;
    }
    Ok(BigUint::from(count))
}
