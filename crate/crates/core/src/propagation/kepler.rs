use std::f64::consts::TAU;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 50;
const RESIDUAL_TOL: f64 = 1e-13;

/// Solves Kepler's equation `E - e sin E = M` for the eccentric anomaly.
///
/// Newton iteration inside a shrinking bracket `[M - e, M + e]`; any step
/// that leaves the bracket is replaced by bisection.
pub fn solve_kepler(mean_anomaly: f64, eccentricity: f64) -> Result<f64> {
    let e = eccentricity;
    if !(0.0..1.0).contains(&e) {
        return Err(Error::UnsupportedOrbit(e));
    }
    if !mean_anomaly.is_finite() {
        return Err(Error::Numeric(format!(
            "mean anomaly {mean_anomaly} is not finite"
        )));
    }
    let turns = (mean_anomaly / TAU).round();
    let m = mean_anomaly - turns * TAU;
    if e == 0.0 {
        return Ok(mean_anomaly);
    }

    let residual = |x: f64| x - e * x.sin() - m;
    let (mut lo, mut hi) = (m - e, m + e);
    let mut x = (m + e * m.sin()).clamp(lo, hi);
    for _ in 0..MAX_ITERATIONS {
        let f = residual(x);
        if f.abs() < RESIDUAL_TOL {
            return Ok(x + turns * TAU);
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let step = x - f / (1.0 - e * x.cos());
        x = if step > lo && step < hi {
            step
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    if residual(x).abs() < 1e-12 {
        Ok(x + turns * TAU)
    } else {
        Err(Error::Numeric(format!(
            "Kepler solver did not converge for M={mean_anomaly}, e={e}"
        )))
    }
}
