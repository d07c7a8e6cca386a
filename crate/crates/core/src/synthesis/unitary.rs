use nalgebra::DVector;
use num_complex::Complex64;

use super::projection::INVARIANT_TOL;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat, HALF_SQRT2, SQRT2};

/// U = (√2/2)·[[I, W], [I, −W]] for a unitary M×M matrix W.
#[derive(Debug, Clone, PartialEq)]
pub struct FullRankUnitary {
    w: CMat,
}

impl FullRankUnitary {
    pub fn new(w: CMat) -> Result<Self> {
        if !w.is_square() {
            return Err(Error::dims("W must be square"));
        }
        let r = linalg::unitarity_residual(&w);
        if !(r < INVARIANT_TOL) {
            return Err(Error::Invariant(format!("W is not unitary (residual {r:e})")));
        }
        Ok(FullRankUnitary { w })
    }

    /// W = I_M.
    pub fn identity(m: usize) -> Self {
        FullRankUnitary { w: linalg::identity(m) }
    }

    /// Scalar W = w (|w| = 1).
    pub fn scalar(w: f64) -> Result<Self> {
        Self::new(CMat::from_element(1, 1, linalg::re(w)))
    }

    pub fn w(&self) -> &CMat {
        &self.w
    }

    pub fn u(&self) -> CMat {
        let m = self.w.nrows();
        let id = linalg::identity(m);
        let h = linalg::re(HALF_SQRT2);
        linalg::from_blocks(&[vec![&id * h, &self.w * h], vec![&id * h, -&self.w * h]])
    }
}

/// Left factor V₁ of the rank-one family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeftSign {
    #[default]
    Identity,
    NegIdentity,
    S,
    NegS,
}

/// Right factor V₂ of the rank-one family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RightSign {
    #[default]
    Identity,
    S,
}

/// Parameters of V₁·[[U₁, U₂], [−U₂, U₁]]·V₂ with U₁ = diag(√2/2, ℓ), U₂ = diag(√2/2, √(1−ℓ²)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankOneUnitarySpec {
    pub ell: f64,
    pub left: LeftSign,
    pub right: RightSign,
}

impl RankOneUnitarySpec {
    pub fn new(ell: f64) -> Self {
        RankOneUnitarySpec {
            ell,
            left: LeftSign::Identity,
            right: RightSign::Identity,
        }
    }
}

fn lower_block(d: [f64; 2]) -> CMat {
    let mut v = linalg::identity(4);
    v[(2, 2)] = linalg::re(d[0]);
    v[(3, 3)] = linalg::re(d[1]);
    v
}

pub fn rank1_unitary(spec: &RankOneUnitarySpec) -> Result<CMat> {
    let l = spec.ell;
    if !(l.abs() <= 1.0) {
        return Err(Error::domain(format!("|ell| = {} exceeds 1", l.abs())));
    }
    let h = HALF_SQRT2;
    let c = (1.0 - l * l).max(0.0).sqrt();
    #[rustfmt::skip]
    let core = linalg::from_real_rows(4, 4, &[
         h,  0.0, h,   0.0,
         0.0, l,  0.0, c,
        -h,  0.0, h,   0.0,
         0.0, -c, 0.0, l,
    ]);
    let v1 = match spec.left {
        LeftSign::Identity => lower_block([1.0, 1.0]),
        LeftSign::NegIdentity => lower_block([-1.0, -1.0]),
        LeftSign::S => lower_block([1.0, -1.0]),
        LeftSign::NegS => lower_block([-1.0, 1.0]),
    };
    let v2 = match spec.right {
        RightSign::Identity => lower_block([1.0, 1.0]),
        RightSign::S => lower_block([1.0, -1.0]),
    };
    Ok(v1 * core * v2)
}

/// Residuals of (v, 0)·U = (√2/2)(v, v) and (v, v)·U* = √2·(v, 0).
pub fn rank1_sum_rule_residual(u: &CMat, v: &[f64]) -> Result<f64> {
    let m = v.len();
    linalg::check_square(u, 2 * m, "U")?;
    if v.iter().all(|&x| x == 0.0) {
        return Err(Error::domain("sum-rule vector must be nonzero"));
    }
    let row =
        |a: &[f64], b: &[f64]| DVector::from_iterator(2 * m, a.iter().chain(b).map(|&x| linalg::re(x))).transpose();
    let zero = vec![0.0; m];
    let v0 = row(v, &zero);
    let vv = row(v, v);
    let first = (&v0 * u - &vv * Complex64::new(HALF_SQRT2, 0.0)).norm();
    let second = (&vv * u.adjoint() - &v0 * Complex64::new(SQRT2, 0.0)).norm();
    Ok(first.max(second))
}

/// Balanced 4×4 unitary for the constant-preserving (v = (1, 1)) rank-one family.
pub fn lebrun_vetterli_unitary(ell: f64) -> Result<CMat> {
    let s2 = SQRT2;
    let rad_minus = 1.0 - 8.0 * ell * ell + 4.0 * s2 * ell;
    let rad_plus = 1.0 + 8.0 * ell * ell - 4.0 * s2 * ell;
    if rad_minus < 0.0 || rad_plus < 0.0 {
        return Err(Error::domain(format!("negative radicand for ell = {ell}")));
    }
    let denom = 8.0 * ell * ell - 1.0;
    if denom == 0.0 {
        return Err(Error::domain("8 ell^2 = 1 makes the (4,1) entry singular"));
    }
    let jm = rad_minus.sqrt();
    let jp = rad_plus.sqrt();
    let k = (2.0 * s2 * ell + 1.0) / (2.0 * denom) * jp * jm;
    let e = s2 / 4.0;
    let off = HALF_SQRT2 - ell;
    #[rustfmt::skip]
    let u = linalg::from_real_rows(4, 4, &[
        ell,  off,  e * (1.0 + jm), e * (1.0 - jm),
        off,  ell,  e * (1.0 - jm), e * (1.0 + jm),
        -0.5, -0.5, 0.5,            0.5,
        k,    -k,   -0.5 * jp,      0.5 * jp,
    ]);
    Ok(u)
}

/// ℓ = (√2/8)(2 − √7)
pub fn lebrun_vetterli_ell() -> f64 {
    SQRT2 / 8.0 * (2.0 - 7f64.sqrt())
}

/// ℓ = −√14/4
pub fn chui_lian_ell() -> f64 {
    -(14f64.sqrt()) / 4.0
}
