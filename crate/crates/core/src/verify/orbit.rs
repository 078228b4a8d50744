use num_traits::Zero;

use crate::arith::{integ_u64, rat_of_config, FiniteConfig, Params, Rat};
use crate::ca::step_f_config;
use crate::cone::ConeSearch;
use crate::error::{Error, Result};
use crate::intervals::IntervalSet;

/// A finite-horizon membership question for `Z_{p/q}(S)`.
#[derive(Debug, Clone)]
pub struct OrbitQuery {
    pub set: IntervalSet,
    pub horizon: usize,
    /// Digits farther than this from the first `k` fractional cells are
    /// fixed to zero; `horizon` or more searches the whole light cone.
    pub window_radius: usize,
    /// Number of fractional cells tracked; raised to the grid resolution of
    /// the set when smaller.
    pub resolution: usize,
}

/// Whether `{ξ (p/q)^t} ∈ S` for `t = 0..=horizon`, where `ξ` is the value of `c`.
pub fn orbit_stays_in(params: &Params, c: &FiniteConfig, set: &IntervalSet, horizon: usize) -> Result<bool> {
    if rat_of_config(params, c) <= Rat::zero() {
        return Err(Error::NonPositive("the orbit must start at a positive value".into()));
    }
    let mut current = c.clone();
    for t in 0..=horizon {
        if !set.contains(&rat_of_config(params, &current)) {
            return Ok(false);
        }
        if t < horizon {
            current = step_f_config(params, &current, 1);
        }
    }
    Ok(true)
}

/// The least `k` such that every endpoint of `set` is a multiple of `(pq)^-k`.
pub fn grid_resolution(params: &Params, set: &IntervalSet) -> Option<usize> {
    let base = params.base_big();
    (0..=64usize).find(|&k| {
        let grid = base.pow(k as u32);
        set.intervals()
            .iter()
            .all(|(a, b)| [a, b].iter().all(|x| (&grid % x.denom().magnitude()).is_zero()))
    })
}

/// Searches the light cone of the first `k` fractional cells, `k` being the
/// larger of the requested resolution and the grid resolution of the set, for a positive finite configuration whose
/// orbit stays in the set up to the horizon and whose fractional part is at
/// least `(pq)^-k`.
pub fn witness_search(params: &Params, query: &OrbitQuery, work_limit: u64) -> Result<Option<FiniteConfig>> {
    let k = grid_resolution(params, &query.set)
        .ok_or_else(|| Error::PreconditionViolated("set endpoints are not on a base-pq grid".into()))?
        .max(query.resolution)
        .max(1);
    let base = params.base() as u64;
    let cell = |row: &[crate::arith::Digit]| -> Rat {
        let v = integ_u64(base, row).expect("block fits in 64 bits");
        Rat::new(v.into(), base.pow(k as u32).into())
    };
    if base.checked_pow(k as u32).is_none() {
        return Err(Error::WorkLimit(work_limit));
    }
    // A zero block at time 0 would admit near-zero values whose orbits stay
    // small for the whole horizon, so the tracked cells must start nonzero.
    let accept = |t: usize, row: &[crate::arith::Digit]| {
        (t > 0 || row.iter().any(|&d| d != 0)) && query.set.contains(&cell(row))
    };
    let search = ConeSearch {
        params: *params,
        width: k,
        depth: query.horizon,
        radius: query.window_radius,
        require_nonzero: false,
        work_limit,
        accept: &accept,
    };
    let Some(found) = search.run()? else {
        return Ok(None);
    };
    let config = FiniteConfig::new(found.first_position(query.horizon), found.window);
    assert!(
        orbit_stays_in(params, &config, &query.set, query.horizon)?,
        "cone search returned a configuration whose orbit leaves the set"
    );
    Ok(Some(config))
}

impl OrbitQuery {
    pub fn full_cone(set: IntervalSet, horizon: usize) -> OrbitQuery {
        OrbitQuery {
            set,
            horizon,
            window_radius: horizon,
            resolution: 1,
        }
    }
}
