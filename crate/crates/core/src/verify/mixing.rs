use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;

use crate::arith::{fill_word_u64, integ, Params, Rat, Word};
use crate::ca::iterate_f;
use crate::error::{Error, Result};
use crate::exec::Options;

/// The cylinders `C1 = cyl(v1, 0)` and `C2 = cyl(v2, i)` and the time `t`
/// of the measure `μ(F^-t(C1) ∩ C2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixingQuery {
    pub v1: Word,
    pub v2: Word,
    pub i: usize,
    pub t: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingMethod {
    /// Enumerates every word of length `2t + |v1|`.
    Naive,
    /// Counts the same words by their integer values.
    Arithmetic,
}

impl MixingQuery {
    fn validate(&self, params: &Params) -> Result<()> {
        if self.v1.is_empty() || self.v2.is_empty() {
            return Err(Error::EmptyWord);
        }
        for &d in self.v1.digits().iter().chain(self.v2.digits()) {
            params.check_digit(d as u64)?;
        }
        if self.t < self.i + self.v2.len() {
            return Err(Error::PreconditionViolated(format!(
                "need t >= i + |v2|, got t = {}, i = {}, |v2| = {}",
                self.t,
                self.i,
                self.v2.len()
            )));
        }
        Ok(())
    }

    /// `μ(C1) μ(C2) = (pq)^-(|v1| + |v2|)`.
    pub fn product(&self, params: &Params) -> Rat {
        Rat::new(
            BigInt::one(),
            params.base_big().pow((self.v1.len() + self.v2.len()) as u32).into(),
        )
    }
}

/// `μ(F^-t(C1) ∩ C2)` exactly. A word `w` of length `L = 2t + |v1|` placed at
/// position `-t` contributes when `F^t(w) = v1` and `w` carries `v2` at offset
/// `t + i`.
pub fn mixing_measure(params: &Params, query: &MixingQuery, method: MixingMethod, opts: &Options) -> Result<Rat> {
    query.validate(params)?;
    let len = 2 * query.t + query.v1.len();
    let total = params.base_big().pow(len as u32);
    let count = match method {
        MixingMethod::Naive => count_naive(params, query, opts)?,
        MixingMethod::Arithmetic => count_arithmetic(params, query)?,
    };
    Ok(Rat::new(count.into(), total.into()))
}

fn count_naive(params: &Params, query: &MixingQuery, opts: &Options) -> Result<BigUint> {
    let len = 2 * query.t + query.v1.len();
    let b = params.base() as u64;
    let count = b
        .checked_pow(len as u32)
        .filter(|n| *n <= opts.work_limit)
        .ok_or(Error::WorkLimit(opts.work_limit))?;
    let at = query.t + query.i;
    let (v1, v2) = (query.v1.digits(), query.v2.digits());
    let hits = opts.exec.count_range(count, |m| {
        let mut w = vec![0; len];
        fill_word_u64(b, m, &mut w);
        w[at..at + v2.len()] == *v2 && iterate_f(params, &w, query.t) == v1
    });
    Ok(BigUint::from(hits))
}

/// With `m = integ(w)`, `Q = q^(2t)` and `B = pq`, the two conditions read
/// `m mod Q B^l1 ∈ [V1 Q, V1 Q + Q)` and `m mod B^s ∈ [V2 B^r, V2 B^r + B^r)`
/// where `r = t + l1 - i - l2` and `s = r + l2`. Both moduli divide `B^L`, so
/// the count is `B^L / lcm` times the number of compatible residue pairs,
/// which pair up through their common residue modulo `g = gcd`.
fn count_arithmetic(params: &Params, query: &MixingQuery) -> Result<BigUint> {
    let (t, i) = (query.t, query.i);
    let (l1, l2) = (query.v1.len(), query.v2.len());
    let len = 2 * t + l1;
    let r = t + l1 - i - l2;
    let s = r + l2;
    let big = |x: &BigUint| BigInt::from(x.clone());
    let base = params.base_big();
    let q_pow = BigUint::from(params.q()).pow(2 * t as u32);
    let n1 = &q_pow * base.pow(l1 as u32);
    let n2 = base.pow(s as u32);
    let g = n1.gcd(&n2);
    let period = n1.lcm(&n2);
    let block = base.pow(r as u32);
    let start1 = integ(params, &query.v1)? * &q_pow;
    let start2 = integ(params, &query.v2)? * &block;
    // Residues b in [start2, start2 + block) with b ≡ y (mod g), summed over y
    // in [start1, start1 + Q): each y sees floor(block / g) full periods plus
    // one more when (y - start2) mod g < block mod g.
    let (full, extra) = block.div_rem(&g);
    let below = |x: BigInt| -> BigInt {
        let (quot, rem) = x.div_mod_floor(&big(&g));
        quot * big(&extra) + rem.min(big(&extra))
    };
    let shift = big(&start1) - big(&start2);
    let partial = below(&shift + big(&q_pow)) - below(shift);
    let pairs = big(&q_pow) * big(&full) + partial;
    let copies = base.pow(len as u32) / period;
    let count = pairs * big(&copies);
    Ok(count.to_biguint().expect("a count is non-negative"))
}

/// The bounds `((pq)^(t-i-l2) ∓ q^(2t)) (pq)^(t+i) (pq)^-(2t+l1)` around the
/// measure.
pub fn mixing_bound(params: &Params, query: &MixingQuery) -> Result<(Rat, Rat)> {
    query.validate(params)?;
    let (t, i) = (query.t, query.i);
    let (l1, l2) = (query.v1.len(), query.v2.len());
    let base = BigInt::from(params.base());
    let main = base.pow((t - i - l2) as u32);
    let spread = BigInt::from(params.q()).pow(2 * t as u32);
    let scale = Rat::new(base.pow((t + i) as u32), base.pow((2 * t + l1) as u32));
    let lo = Rat::from_integer(&main - &spread) * &scale;
    let hi = Rat::from_integer(main + spread) * scale;
    Ok((lo, hi))
}
