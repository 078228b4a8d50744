//! Depth-first search over the light cone of a block of columns.
//!
//! The block occupies positions `1..=width`. At time `t` its contents depend
//! on the initial digits at positions `1-t ..= width+t`, so the search fixes
//! the block first and then adds one digit on each side per time step,
//! rejecting a branch as soon as the block at the new time fails the caller's
//! predicate. Rows of the space-time triangle are extended incrementally; only
//! the two new boundary cells of each row are computed per candidate.

use crate::arith::{Digit, Params};
use crate::ca::f_local;
use crate::error::{Error, Result};

pub struct ConeSearch<'a> {
    pub params: Params,
    pub width: usize,
    pub depth: usize,
    /// Layers beyond this radius only add zero digits.
    pub radius: usize,
    pub require_nonzero: bool,
    pub work_limit: u64,
    pub accept: &'a (dyn Fn(usize, &[Digit]) -> bool + Sync),
}

/// A successful search: the initial digits at positions `1-depth ..= width+depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeWitness {
    pub window: Vec<Digit>,
    pub nodes: u64,
}

impl ConeWitness {
    /// Position of `window[0]`.
    pub fn first_position(&self, depth: usize) -> i64 {
        1 - depth as i64
    }
}

struct State {
    /// `rows[s]` holds `F^s` of the window over positions `1-t+s ..= width+t-s`.
    rows: Vec<Vec<Digit>>,
    nodes: u64,
}

impl ConeSearch<'_> {
    pub fn run(&self) -> Result<Option<ConeWitness>> {
        let base = self.params.base() as u64;
        let blocks = base
            .checked_pow(self.width as u32)
            .filter(|n| *n <= self.work_limit)
            .ok_or(Error::WorkLimit(self.work_limit))?;
        let mut state = State {
            rows: Vec::new(),
            nodes: 0,
        };
        let mut block = vec![0; self.width];
        for m in 0..blocks {
            crate::arith::fill_word_u64(base, m, &mut block);
            state.nodes += 1;
            if state.nodes > self.work_limit {
                return Err(Error::WorkLimit(self.work_limit));
            }
            if !(self.accept)(0, &block) {
                continue;
            }
            state.rows = vec![block.clone()];
            if self.dfs(&mut state, 0)? {
                return Ok(Some(ConeWitness {
                    window: state.rows[0].clone(),
                    nodes: state.nodes,
                }));
            }
        }
        Ok(None)
    }

    fn dfs(&self, state: &mut State, t: usize) -> Result<bool> {
        if t == self.depth {
            return Ok(!self.require_nonzero || state.rows[0].iter().any(|&d| d != 0));
        }
        let p = &self.params;
        let base = if t < self.radius { p.base() } else { 1 };
        let mut left = vec![0; t + 1];
        let mut right = vec![0; t + 1];
        let mut last = vec![0; self.width];
        let mut wide = vec![0; self.width + 2];
        for l in 0..base {
            left[0] = l;
            for s in 1..=t {
                let row = &state.rows[s - 1];
                left[s] = f_local(p, left[s - 1], row[0], row[1]);
            }
            for r in 0..base {
                right[0] = r;
                for s in 1..=t {
                    let row = &state.rows[s - 1];
                    let n = row.len();
                    right[s] = f_local(p, row[n - 2], row[n - 1], right[s - 1]);
                }
                wide[0] = left[t];
                wide[1..=self.width].copy_from_slice(&state.rows[t]);
                wide[self.width + 1] = right[t];
                for (i, cell) in last.iter_mut().enumerate() {
                    *cell = f_local(p, wide[i], wide[i + 1], wide[i + 2]);
                }
                state.nodes += 1;
                if state.nodes > self.work_limit {
                    return Err(Error::WorkLimit(self.work_limit));
                }
                if !(self.accept)(t + 1, &last) {
                    continue;
                }
                for s in 0..=t {
                    state.rows[s].insert(0, left[s]);
                    state.rows[s].push(right[s]);
                }
                state.rows.push(last.clone());
                if self.dfs(state, t + 1)? {
                    return Ok(true);
                }
                state.rows.pop();
                for row in state.rows.iter_mut() {
                    row.remove(0);
                    row.pop();
                }
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::iterate_f;

    #[test]
    fn witness_window_reproduces_accepted_rows() {
        let params = Params::new(3, 2).unwrap();
        let target = [4u32, 3, 2, 0];
        let accept = |t: usize, row: &[Digit]| row[0] == target[t];
        let search = ConeSearch {
            params,
            width: 1,
            depth: 3,
            radius: 3,
            require_nonzero: false,
            work_limit: 1_000_000,
            accept: &accept,
        };
        let found = search.run().unwrap().expect("centre column of 3434205 is a trace");
        assert_eq!(found.window.len(), 7);
        for (t, want) in target.iter().enumerate() {
            let row = iterate_f(&params, &found.window, t);
            assert_eq!(row[3 - t], *want);
        }
    }

    #[test]
    fn work_limit_is_enforced() {
        let params = Params::new(5, 3).unwrap();
        let accept = |_: usize, _: &[Digit]| false;
        let search = ConeSearch {
            params,
            width: 2,
            depth: 1,
            radius: 1,
            require_nonzero: false,
            work_limit: 10,
            accept: &accept,
        };
        assert_eq!(search.run(), Err(Error::WorkLimit(10)));
    }
}
