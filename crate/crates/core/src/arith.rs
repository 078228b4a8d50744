//! Digits, words, configurations and exact rationals in base `pq`.
//!
//! Configurations are restricted to finite support, which is exactly the class
//! of non-negative rationals with a terminating base-`pq` expansion. Position
//! `i` of a configuration holds the digit of weight `(pq)^(-i)`, so position 0
//! is the units digit and positions `1, 2, ...` are the fractional digits.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Digit = u32;
pub type Rat = BigRational;

/// A validated pair of coprime integers `p, q >= 2` with base `pq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    p: u32,
    q: u32,
    base: u32,
}

impl Params {
    pub fn new(p: u64, q: u64) -> Result<Params> {
        if p < 2 || q < 2 {
            return Err(Error::OutOfRange(format!("need p, q >= 2, got p = {p}, q = {q}")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::NonCoprime { p, q });
        }
        let base = p
            .checked_mul(q)
            .filter(|b| *b <= u32::MAX as u64)
            .ok_or_else(|| Error::OutOfRange(format!("base {p}*{q} does not fit in 32 bits")))?;
        Ok(Params {
            p: p as u32,
            q: q as u32,
            base: base as u32,
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn base(&self) -> u32 {
        self.base
    }

    /// The pair `(q, p)`; its automaton is the inverse of this one.
    pub fn swapped(&self) -> Params {
        Params {
            p: self.q,
            q: self.p,
            base: self.base,
        }
    }

    /// Splits `x = hi * q + lo` with `hi < p`, `lo < q`.
    #[inline]
    pub fn decompose(&self, x: Digit) -> (u32, u32) {
        (x / self.q, x % self.q)
    }

    pub fn check_digit(&self, x: u64) -> Result<Digit> {
        if x < self.base as u64 {
            Ok(x as Digit)
        } else {
            Err(Error::DigitOutOfRange {
                digit: x,
                base: self.base as u64,
            })
        }
    }

    pub fn base_big(&self) -> BigUint {
        BigUint::from(self.base)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Checked split of a digit into its `A_p x A_q` coordinates.
pub fn digit_decompose(params: &Params, x: u64) -> Result<(u32, u32)> {
    let x = params.check_digit(x)?;
    Ok(params.decompose(x))
}

/// A finite word over the alphabet `A_pq`. The empty word is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Word(pub Vec<Digit>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn new(params: &Params, digits: Vec<Digit>) -> Result<Word> {
        for &d in &digits {
            params.check_digit(d as u64)?;
        }
        Ok(Word(digits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digits(&self) -> &[Digit] {
        &self.0
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Parses single-character digits (`0-9a-z`) or a comma-separated list of
    /// decimal digits, optionally bracketed.
    pub fn parse(params: &Params, text: &str) -> Result<Word> {
        let text = text.trim();
        let inner = text
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(text);
        let digits = if inner.contains(',') || text.starts_with('[') {
            inner
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad digit {s:?}")))
                        .and_then(|d| params.check_digit(d))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            inner
                .chars()
                .map(|c| {
                    c.to_digit(36)
                        .ok_or_else(|| Error::Parse(format!("bad digit character {c:?}")))
                        .and_then(|d| params.check_digit(d as u64))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Word(digits))
    }

    /// Single characters for bases up to 36, comma-separated decimals above.
    pub fn render(&self, base: u32) -> String {
        if base <= 36 {
            self.0
                .iter()
                .map(|&d| std::char::from_digit(d, 36).expect("digit below 36"))
                .collect()
        } else {
            self.0
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

/// Value of a non-empty word read as a base-`pq` integer, most significant
/// digit first.
pub fn integ(params: &Params, w: &Word) -> Result<BigUint> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let base = params.base_big();
    Ok(w.0.iter().fold(BigUint::zero(), |acc, &d| acc * &base + d))
}

/// `integ` for words short enough to fit a `u64`.
#[inline]
pub fn integ_u64(base: u64, digits: &[Digit]) -> Option<u64> {
    digits
        .iter()
        .try_fold(0u64, |acc, &d| acc.checked_mul(base)?.checked_add(d as u64))
}

/// Left-padded base-`pq` digits of `m`, exactly `len` of them.
pub fn word_of_nat(params: &Params, m: &BigUint, len: usize) -> Result<Word> {
    let base = params.base_big();
    let mut digits = vec![0; len];
    let mut rest = m.clone();
    for slot in digits.iter_mut().rev() {
        let (quot, rem) = rest.div_rem(&base);
        *slot = rem.to_u32().expect("remainder below base");
        rest = quot;
    }
    if !rest.is_zero() {
        return Err(Error::Overflow {
            value: m.to_string(),
            len,
        });
    }
    Ok(Word(digits))
}

/// Fast path of [`word_of_nat`]; the caller guarantees `m < base^len`.
#[inline]
pub fn fill_word_u64(base: u64, mut m: u64, out: &mut [Digit]) {
    for slot in out.iter_mut().rev() {
        *slot = (m % base) as Digit;
        m /= base;
    }
}

pub fn real_of_word(params: &Params, w: &Word) -> Rat {
    if w.is_empty() {
        return Rat::zero();
    }
    let numer = integ(params, w).expect("non-empty");
    let denom = params.base_big().pow(w.len() as u32);
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// A configuration that is zero outside a finite window.
///
/// `digits[j]` sits at position `offset + j`. The stored window never starts or
/// ends with a zero digit; the zero configuration has an empty window and
/// offset 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteConfig {
    offset: i64,
    digits: Vec<Digit>,
}

impl FiniteConfig {
    pub fn zero() -> FiniteConfig {
        FiniteConfig {
            offset: 0,
            digits: Vec::new(),
        }
    }

    pub fn new(offset: i64, digits: Vec<Digit>) -> FiniteConfig {
        let Some(first) = digits.iter().position(|&d| d != 0) else {
            return FiniteConfig::zero();
        };
        let last = digits.iter().rposition(|&d| d != 0).expect("non-zero digit exists");
        FiniteConfig {
            offset: offset + first as i64,
            digits: digits[first..=last].to_vec(),
        }
    }

    pub fn checked(params: &Params, offset: i64, digits: Vec<Digit>) -> Result<FiniteConfig> {
        for &d in &digits {
            params.check_digit(d as u64)?;
        }
        Ok(FiniteConfig::new(offset, digits))
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn at(&self, position: i64) -> Digit {
        let idx = position - self.offset;
        if idx < 0 || idx >= self.digits.len() as i64 {
            0
        } else {
            self.digits[idx as usize]
        }
    }

    /// Digits at positions `from..from + len`.
    pub fn window(&self, from: i64, len: usize) -> Vec<Digit> {
        (0..len as i64).map(|j| self.at(from + j)).collect()
    }

    /// The configuration translated so that every digit moves `by` positions
    /// to the right.
    pub fn translated(&self, by: i64) -> FiniteConfig {
        FiniteConfig::new(self.offset + by, self.digits.clone())
    }

    /// Human-readable positional rendering, e.g. `24.3`.
    pub fn render(&self, base: u32) -> String {
        let lo = self.offset.min(0);
        let hi = (self.offset + self.digits.len() as i64 - 1).max(0);
        let int_part = Word((lo..=0).map(|i| self.at(i)).collect()).render(base);
        let frac_part = Word((1..=hi).map(|i| self.at(i)).collect()).render(base);
        let sep = if base <= 36 { "" } else { "," };
        let int_part = if base <= 36 {
            let trimmed = int_part.trim_start_matches('0');
            if trimmed.is_empty() { "0".to_string() } else { trimmed.to_string() }
        } else {
            int_part
        };
        if frac_part.is_empty() {
            int_part
        } else {
            format!("{int_part}.{sep}{frac_part}")
        }
    }
}

/// The finite configuration holding the terminating base-`pq` expansion of `x`.
pub fn config_of_rat(params: &Params, x: &Rat) -> Result<FiniteConfig> {
    if x.is_negative() {
        return Err(Error::Negative(fmt_rat(x)));
    }
    if x.is_zero() {
        return Ok(FiniteConfig::zero());
    }
    let base = BigInt::from(params.base());
    let denom = x.denom().clone();
    let mut rest = denom.clone();
    loop {
        let g = rest.gcd(&base);
        if g.is_one() {
            break;
        }
        rest /= g;
    }
    if !rest.is_one() {
        return Err(Error::NonTerminating(fmt_rat(x)));
    }
    let mut frac_len: u32 = 0;
    let mut scale = BigInt::one();
    while !(&scale % &denom).is_zero() {
        scale *= &base;
        frac_len += 1;
    }
    let scaled = (x.numer() * &scale / &denom)
        .to_biguint()
        .expect("non-negative");
    let mut digits = Vec::new();
    let mut m = scaled;
    let base_u = params.base_big();
    while !m.is_zero() {
        let (quot, rem) = m.div_rem(&base_u);
        digits.push(rem.to_u32().expect("remainder below base"));
        m = quot;
    }
    digits.reverse();
    let offset = frac_len as i64 - (digits.len() as i64 - 1);
    Ok(FiniteConfig::new(offset, digits))
}

pub fn rat_of_config(params: &Params, c: &FiniteConfig) -> Rat {
    if c.is_zero() {
        return Rat::zero();
    }
    let base = params.base_big();
    let numer = c.digits.iter().fold(BigUint::zero(), |acc, &d| acc * &base + d);
    let last = c.offset + c.digits.len() as i64 - 1;
    if last >= 0 {
        Rat::new(BigInt::from(numer), BigInt::from(base.pow(last as u32)))
    } else {
        Rat::from_integer(BigInt::from(numer * base.pow((-last) as u32)))
    }
}

/// `{x} = x - floor(x)`.
pub fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

/// `num/den` in lowest terms, e.g. `0/1`, `2/3`, `1/1`.
pub fn fmt_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rat(text: &str) -> Result<Rat> {
    let text = text.trim();
    let bad = || Error::Parse(format!("bad rational {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}
