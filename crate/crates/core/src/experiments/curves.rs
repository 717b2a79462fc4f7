//! Negativity curves for gravity scenarios and the detection-time searches
//! built on them.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gravity::{build_generator, GravityScenario};
use crate::propagator::{en_trajectory, Method, PropagationPlan, RkTolerances};
use crate::symplectic::GaussianState;

/// Integrator tolerances for physical-scale runs.
pub const CURVE_TOLERANCES: RkTolerances = RkTolerances { abs: 1e-13, rel: 1e-12 };

/// `E_N(t)` from the product vacuum, `times_s` in seconds and in any order.
pub fn en_curve(scn: &GravityScenario, times_s: &[f64]) -> Result<Vec<f64>> {
    if times_s.is_empty() {
        return Ok(Vec::new());
    }
    let gen = build_generator(scn)?;
    let mut order: Vec<usize> = (0..times_s.len()).collect();
    order.sort_by(|&a, &b| times_s[a].total_cmp(&times_s[b]));
    let mut taus: Vec<f64> = Vec::with_capacity(times_s.len());
    for &i in &order {
        let tau = scn.omega * times_s[i];
        if taus.last() != Some(&tau) {
            taus.push(tau);
        }
    }
    let plan = PropagationPlan::new(Method::LocalFrameRk, taus.clone())?.with_tolerances(CURVE_TOLERANCES);
    let traj = en_trajectory(&gen, &GaussianState::vacuum(2), &plan)?;
    let lookup = |tau: f64| {
        let k = taus.partition_point(|&x| x < tau);
        traj[k].1
    };
    Ok(times_s.iter().map(|&t| lookup(scn.omega * t)).collect())
}

pub fn en_at(scn: &GravityScenario, t_s: f64) -> Result<f64> {
    Ok(en_curve(scn, &[t_s])?[0])
}

/// First time the sampled curve reaches `threshold`, linearly interpolated.
pub fn first_crossing(times: &[f64], values: &[f64], threshold: f64) -> Option<f64> {
    for i in 0..times.len() {
        if values[i] >= threshold {
            if i == 0 {
                return Some(times[0]);
            }
            let (t0, t1, v0, v1) = (times[i - 1], times[i], values[i - 1], values[i]);
            return Some(t0 + (threshold - v0) * (t1 - t0) / (v1 - v0));
        }
    }
    None
}

/// First `t` in `[t_lo, t_hi]` with `f(t) >= threshold`, assuming `f` is
/// nondecreasing once it starts rising. A coarse scan of `scan` points is
/// refined by bisection to `t_tol` seconds.
pub fn first_time_reaching<F>(
    mut f: F,
    threshold: f64,
    t_lo: f64,
    t_hi: f64,
    scan: usize,
    t_tol: f64,
) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(t_hi > t_lo && scan >= 2) {
        return Err(Error::InvalidInput("need t_hi > t_lo and at least two scan points".into()));
    }
    let mut prev = t_lo;
    if f(t_lo)? >= threshold {
        return Ok(Some(t_lo));
    }
    for i in 1..scan {
        let t = t_lo + (t_hi - t_lo) * i as f64 / (scan - 1) as f64;
        if f(t)? >= threshold {
            let (mut lo, mut hi) = (prev, t);
            while hi - lo > t_tol {
                let mid = 0.5 * (lo + hi);
                if f(mid)? >= threshold {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(hi));
        }
        prev = t;
    }
    Ok(None)
}

/// Time at which `E_N` of the scenario first reaches `threshold`.
pub fn detection_time(scn: &GravityScenario, threshold: f64, t_hi: f64) -> Result<Option<f64>> {
    first_time_reaching(|t| en_at(scn, t), threshold, 0.0, t_hi, 200, 1e-6)
}

/// Maximum over `R0 ∈ [r0_min, r0_max]` of `E_N(t)` for a TD scenario,
/// with the maximizing `R0`. A log grid is refined by golden-section search.
pub fn td_max_over_r0(scn: &GravityScenario, t_s: f64, r0_min: f64, r0_max: f64) -> Result<(f64, f64)> {
    const GRID: usize = 41;
    let (la, lb) = (r0_min.ln(), r0_max.ln());
    let at = |lr: f64| en_at(&scn.with_r0(lr.exp()), t_s);
    let grid: Vec<f64> = (0..GRID).map(|i| la + (lb - la) * i as f64 / (GRID - 1) as f64).collect();
    let vals: Vec<f64> = grid.par_iter().map(|&lr| at(lr)).collect::<Result<_>>()?;
    let best = (0..GRID).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).expect("nonempty grid");
    if vals[best] == 0.0 {
        return Ok((0.0, grid[best].exp()));
    }
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(GRID - 1)];
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = at(x1)?;
    let mut f2 = at(x2)?;
    while b - a > 1e-7 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = at(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = at(x1)?;
        }
    }
    let (mut en, mut lr) = if f1 > f2 { (f1, x1) } else { (f2, x2) };
    if vals[best] > en {
        en = vals[best];
        lr = grid[best];
    }
    Ok((en, lr.exp()))
}

/// First time the best TD curve over `R0 ∈ [r0_min, r0_max]` reaches `threshold`.
pub fn td_detection_time(
    scn: &GravityScenario,
    threshold: f64,
    r0_min: f64,
    r0_max: f64,
    t_hi: f64,
) -> Result<Option<f64>> {
    first_time_reaching(
        |t| Ok(td_max_over_r0(scn, t, r0_min, r0_max)?.0),
        threshold,
        0.0,
        t_hi,
        (4.0 * t_hi).ceil() as usize + 1,
        1e-4,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_interpolates() {
        let t = [0.0, 1.0, 2.0];
        let v = [0.0, 0.5, 1.5];
        assert_eq!(first_crossing(&t, &v, 1.0), Some(1.5));
        assert_eq!(first_crossing(&t, &v, 2.0), None);
        assert_eq!(first_crossing(&t, &v, 0.0), Some(0.0));
    }

    #[test]
    fn bisection_finds_threshold() {
        let got = first_time_reaching(|t| Ok(t * t), 2.0, 0.0, 3.0, 4, 1e-10).unwrap().unwrap();
        assert!((got - 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(first_time_reaching(|_| Ok(0.0), 1.0, 0.0, 1.0, 3, 1e-3).unwrap(), None);
    }
}
