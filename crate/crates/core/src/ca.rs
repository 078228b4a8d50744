//! The local rules `g` and `f`, word- and configuration-level stepping of the
//! automata `G` (multiply by `p`) and `F` (multiply by `p/q`), and the
//! closed form of `F^t` on words.

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use crate::arith::{integ, word_of_nat, Digit, FiniteConfig, Params, Word};
use crate::error::{Error, Result};

/// `g(x1*q + x0, y1*q + y0) = x0*p + y1`.
#[inline]
pub fn g_local(params: &Params, x: Digit, y: Digit) -> Digit {
    (x % params.q()) * params.p() + y / params.q()
}

/// `f(x, a, y) = g(g(x, a), g(a, y))`, the radius-1 rule of `F`.
#[inline]
pub fn f_local(params: &Params, x: Digit, a: Digit, y: Digit) -> Digit {
    g_local(params, g_local(params, x, a), g_local(params, a, y))
}

/// One application of `F` to a word, writing `|w| - 2` digits into `out`.
#[inline]
pub fn f_word_into(params: &Params, w: &[Digit], out: &mut Vec<Digit>) {
    out.clear();
    out.extend(w.windows(3).map(|s| f_local(params, s[0], s[1], s[2])));
}

pub fn step_g_word(params: &Params, w: &Word) -> Result<Word> {
    if w.len() < 2 {
        return Err(Error::TooShort { need: 2, got: w.len() });
    }
    Ok(Word(
        w.digits()
            .windows(2)
            .map(|s| g_local(params, s[0], s[1]))
            .collect(),
    ))
}

/// `F^t` on a word; the result has length `|w| - 2t`.
pub fn step_f_word(params: &Params, w: &Word, t: usize) -> Result<Word> {
    let need = 2 * t + 1;
    if w.len() < need {
        return Err(Error::TooShort { need, got: w.len() });
    }
    Ok(Word(iterate_f(params, w.digits(), t)))
}

/// `F^t` on a raw digit slice; the caller checks the length.
pub fn iterate_f(params: &Params, w: &[Digit], t: usize) -> Vec<Digit> {
    let mut cur = w.to_vec();
    let mut next = Vec::with_capacity(w.len());
    for _ in 0..t {
        f_word_into(params, &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

/// `G` on a configuration: multiplies its value by `p`.
pub fn step_g_config(params: &Params, c: &FiniteConfig) -> FiniteConfig {
    if c.is_zero() {
        return FiniteConfig::zero();
    }
    let start = c.offset() - 1;
    let len = c.digits().len() + 1;
    let digits = (0..len as i64)
        .map(|j| {
            let i = start + j;
            g_local(params, c.at(i), c.at(i + 1))
        })
        .collect();
    FiniteConfig::new(start, digits)
}

fn step_f_once(params: &Params, c: &FiniteConfig) -> FiniteConfig {
    if c.is_zero() {
        return FiniteConfig::zero();
    }
    let start = c.offset() - 1;
    let len = c.digits().len() + 2;
    let digits = (0..len as i64)
        .map(|j| {
            let i = start + j;
            f_local(params, c.at(i - 1), c.at(i), c.at(i + 1))
        })
        .collect();
    FiniteConfig::new(start, digits)
}

/// `F^t` on a configuration; negative `t` steps with the inverse automaton
/// `F_{q,p}`. The value is multiplied by `(p/q)^t`.
pub fn step_f_config(params: &Params, c: &FiniteConfig, t: i64) -> FiniteConfig {
    let rule = if t >= 0 { *params } else { params.swapped() };
    (0..t.unsigned_abs()).fold(c.clone(), |acc, _| step_f_once(&rule, &acc))
}

/// `F^t(w)` computed arithmetically as
/// `floor(integ(w) / q^(2t)) mod (pq)^(|w| - 2t)`.
pub fn ftpow_closed_form(params: &Params, w: &Word, t: usize) -> Result<Word> {
    let need = 2 * t + 1;
    if w.len() < need {
        return Err(Error::TooShort { need, got: w.len() });
    }
    let m = integ(params, w)?;
    let out_len = w.len() - 2 * t;
    let divisor = BigUint::from(params.q()).pow(2 * t as u32);
    let modulus = params.base_big().pow(out_len as u32);
    let value = (m / divisor).mod_floor(&modulus);
    word_of_nat(params, &value, out_len)
}

/// `u64` version of the closed form on word values; `None` on overflow.
#[inline]
pub fn ftpow_value_u64(params: &Params, value: u64, len: usize, t: usize) -> Option<u64> {
    let divisor = (params.q() as u64).checked_pow(2 * t as u32)?;
    let modulus = (params.base() as u64).checked_pow((len - 2 * t) as u32)?;
    Some((value / divisor) % modulus)
}

/// Radius-1 rules whose space-time diagrams can be rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// `F_{p,q}`, neighbourhood `(-1, 0, 1)`.
    F(Params),
    /// `G_{p,q}`, neighbourhood `(0, 1)`.
    G(Params),
    /// Left shift, neighbourhood `(1)`.
    Shift,
}

impl Rule {
    fn reach(&self) -> (i64, i64) {
        match self {
            Rule::F(_) => (-1, 1),
            Rule::G(_) => (0, 1),
            Rule::Shift => (1, 1),
        }
    }

    fn apply(&self, nb: impl Fn(i64) -> Digit) -> Digit {
        match self {
            Rule::F(params) => f_local(params, nb(-1), nb(0), nb(1)),
            Rule::G(params) => g_local(params, nb(0), nb(1)),
            Rule::Shift => nb(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceTimeRow {
    pub time: i64,
    pub word: Word,
    /// Position of the first digit; the input word starts at position 1.
    pub leftmost: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceTime {
    pub rows: Vec<SpaceTimeRow>,
}

impl SpaceTime {
    /// Rows aligned by position, one per time step, using `base` for digits.
    pub fn render_text(&self, base: u32) -> String {
        let min_left = self.rows.iter().map(|r| r.leftmost).min().unwrap_or(0);
        let mut out = String::new();
        for row in &self.rows {
            let indent = (row.leftmost - min_left) as usize;
            if base <= 36 {
                out.push_str(&" ".repeat(indent));
                out.push_str(&row.word.render(base));
            } else {
                out.push_str(&"    ".repeat(indent));
                let cells: Vec<String> = row.word.digits().iter().map(|d| format!("{d:>4}")).collect();
                out.push_str(&cells.join(""));
            }
            out.push('\n');
        }
        out
    }
}

/// Space-time diagram of `rule` started from `w`, keeping at each time only
/// the cells determined by `w` that lie within `w`'s columns.
pub fn render_rule(rule: Rule, w: &Word, t_max: usize) -> Result<SpaceTime> {
    let n = w.len() as i64;
    let (lo_reach, hi_reach) = rule.reach();
    let mut rows = vec![SpaceTimeRow {
        time: 0,
        word: w.clone(),
        leftmost: 1,
    }];
    for t in 1..=t_max {
        let prev = rows.last().expect("at least one row");
        let prev_lo = prev.leftmost;
        let prev_hi = prev.leftmost + prev.word.len() as i64 - 1;
        let lo = (prev_lo - lo_reach).max(1);
        let hi = (prev_hi - hi_reach).min(n);
        if hi < lo {
            return Err(Error::TooShort {
                need: t + w.len(),
                got: w.len(),
            });
        }
        let at = |i: i64| prev.word.digits()[(i - prev_lo) as usize];
        let digits = (lo..=hi).map(|i| rule.apply(|d| at(i + d))).collect();
        rows.push(SpaceTimeRow {
            time: t as i64,
            word: Word(digits),
            leftmost: lo,
        });
    }
    Ok(SpaceTime { rows })
}

/// Space-time diagram of `F_{p,q}` on `w` for times `0..=t_max`.
pub fn render_space_time(params: &Params, w: &Word, t_max: usize) -> Result<SpaceTime> {
    let need = 2 * t_max + 1;
    if w.len() < need {
        return Err(Error::TooShort { need, got: w.len() });
    }
    render_rule(Rule::F(*params), w, t_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{config_of_rat, rat, rat_of_config};
    use proptest::prelude::*;

    fn p32() -> Params {
        Params::new(3, 2).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(&p32(), s).unwrap()
    }

    const FIG2: [[u32; 6]; 6] = [
        [0, 0, 1, 1, 2, 2],
        [3, 3, 4, 4, 5, 5],
        [0, 0, 1, 1, 2, 2],
        [3, 3, 4, 4, 5, 5],
        [0, 0, 1, 1, 2, 2],
        [3, 3, 4, 4, 5, 5],
    ];

    #[test]
    fn g_table_matches_published_table() {
        let params = p32();
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(g_local(&params, x, y), FIG2[x as usize][y as usize], "g({x},{y})");
            }
        }
        assert_eq!(g_local(&params, 1, 2), 4);
        assert_eq!(g_local(&params, 5, 5), 5);
    }

    #[test]
    fn f_examples() {
        let params = p32();
        assert_eq!(f_local(&params, 3, 4, 3), 3);
        assert_eq!(f_local(&params, 0, 0, 0), 0);
        assert_eq!(f_local(&params, 2, 0, 5), 1);
    }

    #[test]
    fn g_word_examples() {
        let params = p32();
        assert_eq!(step_g_word(&params, &w("3434205")).unwrap(), w("515102"));
        assert_eq!(step_g_word(&params, &w("00")).unwrap(), w("0"));
        assert_eq!(step_g_word(&params, &w("0530")).unwrap(), w("243"));
        assert!(step_g_word(&params, &w("3")).is_err());
    }

    #[test]
    fn f_word_examples() {
        let params = p32();
        let x = w("3434205");
        assert_eq!(step_f_word(&params, &x, 1).unwrap(), w("35331"));
        assert_eq!(step_f_word(&params, &x, 2).unwrap(), w("521"));
        assert_eq!(step_f_word(&params, &x, 3).unwrap(), w("0"));
        assert_eq!(step_f_word(&params, &x, 0).unwrap(), x);
        assert_eq!(
            step_f_word(&params, &x, 4),
            Err(Error::TooShort { need: 9, got: 7 })
        );
    }

    #[test]
    fn g_config_examples() {
        let params = p32();
        let c = config_of_rat(&params, &rat(11, 2)).unwrap();
        let gc = step_g_config(&params, &c);
        assert_eq!(gc.render(6), "24.3");
        assert_eq!(rat_of_config(&params, &gc), rat(33, 2));
        assert!(step_g_config(&params, &FiniteConfig::zero()).is_zero());
        let one = config_of_rat(&params, &rat(1, 1)).unwrap();
        assert_eq!(rat_of_config(&params, &step_g_config(&params, &one)), rat(3, 1));
    }

    #[test]
    fn f_config_examples() {
        let params = p32();
        let c = config_of_rat(&params, &rat(11, 2)).unwrap();
        let fc = step_f_config(&params, &c, 1);
        assert_eq!(fc.render(6), "12.13");
        assert_eq!(rat_of_config(&params, &fc), rat(33, 4));
        assert_eq!(step_f_config(&params, &c, 0), c);
        assert_eq!(step_f_config(&params, &fc, -1), c);
    }

    #[test]
    fn closed_form_examples() {
        let params = p32();
        let x = w("3434205");
        assert_eq!(ftpow_closed_form(&params, &x, 2).unwrap(), w("521"));
        assert_eq!(ftpow_closed_form(&params, &x, 3).unwrap(), w("0"));
        assert_eq!(ftpow_closed_form(&params, &x, 0).unwrap(), x);
        assert_eq!(ftpow_closed_form(&params, &x, 1).unwrap(), w("35331"));
    }

    #[test]
    fn closed_form_equals_iteration_exhaustively_for_3_2() {
        let params = p32();
        let base = 6u64;
        for k in 1..=6usize {
            let mut buf = vec![0; k];
            for m in 0..base.pow(k as u32) {
                crate::arith::fill_word_u64(base, m, &mut buf);
                for t in 0..=((k - 1) / 2).min(3) {
                    let direct = iterate_f(&params, &buf, t);
                    let value = ftpow_value_u64(&params, m, k, t).unwrap();
                    let mut expect = vec![0; k - 2 * t];
                    crate::arith::fill_word_u64(base, value, &mut expect);
                    assert_eq!(direct, expect, "k={k} t={t} m={m}");
                }
            }
        }
    }

    #[test]
    fn diagram_of_3434205() {
        let st = render_space_time(&p32(), &w("3434205"), 3).unwrap();
        assert_eq!(st.render_text(6), "3434205\n 35331\n  521\n   0\n");
        let lefts: Vec<i64> = st.rows.iter().map(|r| r.leftmost).collect();
        assert_eq!(lefts, vec![1, 2, 3, 4]);
        let single = render_space_time(&p32(), &w("3434205"), 0).unwrap();
        assert_eq!(single.rows.len(), 1);
    }

    #[test]
    fn shift_diagram_of_01101001() {
        let bin = Params::new(3, 2).unwrap();
        let st = render_rule(Rule::Shift, &Word::parse(&bin, "01101001").unwrap(), 2).unwrap();
        assert_eq!(st.render_text(2), "01101001\n1101001\n101001\n");
    }

    proptest! {
        #[test]
        fn multiplication_law(p_idx in 0usize..5, offset in -4i64..6, digits in proptest::collection::vec(0u32..28, 0..10)) {
            let (p, q) = [(3, 2), (5, 2), (5, 3), (4, 3), (7, 4)][p_idx];
            let params = Params::new(p, q).unwrap();
            let digits: Vec<u32> = digits.into_iter().map(|d| d % params.base()).collect();
            let c = FiniteConfig::new(offset, digits);
            let x = rat_of_config(&params, &c);
            prop_assert_eq!(rat_of_config(&params, &step_g_config(&params, &c)), &x * rat(p as i64, 1));
            prop_assert_eq!(rat_of_config(&params, &step_f_config(&params, &c, 1)), &x * rat(p as i64, q as i64));
            prop_assert_eq!(rat_of_config(&params, &step_f_config(&params, &c, -2)), &x * rat((q * q) as i64, (p * p) as i64));
        }

        #[test]
        fn stepping_commutes_with_translation(offset in -4i64..6, by in -5i64..5, digits in proptest::collection::vec(0u32..6, 0..10)) {
            let params = p32();
            let c = FiniteConfig::new(offset, digits);
            prop_assert_eq!(
                step_f_config(&params, &c.translated(by), 2),
                step_f_config(&params, &c, 2).translated(by)
            );
            prop_assert_eq!(
                step_g_config(&params, &c.translated(by)),
                step_g_config(&params, &c).translated(by)
            );
        }
    }
}
