use super::lemma::degree1_synthesize;
use super::projection::{scalar_projection, Sign};
use super::unitary::FullRankUnitary;
use crate::error::{Error, Result};
use crate::masks::MaskPair;

const BISECT_TOL: f64 = 1e-15;

/// Bracketing bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.signum() != fhi.signum()) {
        return Err(Error::NoRoot(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= BISECT_TOL * (1.0 + mid.abs()) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub(crate) fn scalar_pair(b: f64, sign: Sign) -> Result<MaskPair> {
    let p = scalar_projection(b, sign, false)?;
    degree1_synthesize(&p, &FullRankUnitary::scalar(1.0)?.u())
}

/// Σ_α (−1)^α α p_α(b) for the `+` scalar family.
pub fn scalar_order2_defect(b: f64) -> Result<f64> {
    let pair = scalar_pair(b, Sign::Plus)?;
    Ok(pair.p().moment(1, true)[(0, 0)].re)
}

pub fn solve_scalar_order2() -> Result<f64> {
    bisect(|b| scalar_order2_defect(b).unwrap_or(f64::NAN), 0.0, 1.0)
}

/// Same root, bracketed from an arbitrary starting point in [0, 1].
pub fn solve_scalar_order2_from(start: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&start) {
        return Err(Error::domain(format!("start {start} outside [0, 1]")));
    }
    let f = |b: f64| scalar_order2_defect(b).unwrap_or(f64::NAN);
    let fs = f(start);
    if fs == 0.0 {
        return Ok(start);
    }
    if fs.signum() != f(0.0).signum() {
        bisect(f, 0.0, start)
    } else {
        bisect(f, start, 1.0)
    }
}
