use super::solve::bisect;
use crate::error::{Error, Result};
use crate::linalg::{self, SQRT2};
use crate::masks::{polyphase_split, MaskPair};
use crate::qmf::PolyphaseMatrix;

/// The one-parameter degree-two scalar family with order-3 moments.
///
/// The radicand is −256t² + 32t + 7 and q₁ = −(1 + 32t − a_t)/16. F(1) is orthogonal for
/// every feasible t; the lag-two Gram coefficient vanishes only at isolated t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct D6Family {
    pub t: f64,
    pub a: f64,
    pub p0: f64,
    pub p1: f64,
    pub q0: f64,
    pub q1: f64,
}

fn radicand(t: f64) -> f64 {
    -256.0 * t * t + 32.0 * t + 7.0
}

/// Closed interval on which the radicand is non-negative.
pub fn d6_feasible_interval() -> (f64, f64) {
    let r = 8192f64.sqrt();
    ((32.0 - r) / 512.0, (32.0 + r) / 512.0)
}

/// t = 1/32 + √10/32 − √(5 + 2√10)/32
pub fn d6_reference_t() -> f64 {
    let s10 = 10f64.sqrt();
    (1.0 + s10 - (5.0 + 2.0 * s10).sqrt()) / 32.0
}

impl D6Family {
    pub fn new(t: f64) -> Result<Self> {
        let r = radicand(t);
        // Rounding at the interval endpoints.
        if !(r >= -1e-12) {
            return Err(Error::domain(format!("negative radicand {r} at t = {t}")));
        }
        let a = r.max(0.0).sqrt();
        Ok(D6Family {
            t,
            a,
            p0: (1.0 + a) / 16.0,
            p1: (2.0 - 8.0 * t + a) / 8.0,
            q0: t,
            q1: -(1.0 + 32.0 * t - a) / 16.0,
        })
    }

    pub fn polyphase(&self) -> PolyphaseMatrix {
        let D6Family { p0, p1, q0, q1, .. } = *self;
        let mk = |e: [f64; 4]| linalg::from_real_rows(2, 2, &e) * linalg::re(SQRT2);
        let f0 = mk([p0, q0, p1, q1]);
        let f1 = mk([
            0.125 - 4.0 * p0 + 2.0 * p1,
            0.125 - 4.0 * q0 - 2.0 * q1,
            0.375 - 2.0 * p0,
            -0.375 + 2.0 * q0,
        ]);
        let f2 = mk([
            0.375 + 3.0 * p0 - 2.0 * p1,
            0.375 + 3.0 * q0 + 2.0 * q1,
            0.125 + 2.0 * p0 - p1,
            -0.125 - 2.0 * q0 - q1,
        ]);
        PolyphaseMatrix::new(1, vec![f0, f1, f2]).expect("2x2 blocks")
    }
}

pub fn d6_family(t: f64) -> Result<PolyphaseMatrix> {
    Ok(D6Family::new(t)?.polyphase())
}

/// Re(F₀*F₂)₀₀, the lag-two Gram coefficient, which is a multiple of the identity on this family.
pub fn d6_lag2_defect(t: f64) -> Result<f64> {
    let f = d6_family(t)?;
    Ok((f.coeff(0).adjoint() * f.coeff(2))[(0, 0)].re)
}

/// The parameter of the standard Daubechies-6 branch.
pub fn solve_d6() -> Result<f64> {
    let (lo, hi) = d6_feasible_interval();
    let f = |t: f64| d6_lag2_defect(t.clamp(lo, hi)).unwrap_or(f64::NAN);
    bisect(f, lo, hi)
}

pub fn d6() -> Result<MaskPair> {
    Ok(polyphase_split(&d6_family(solve_d6()?)?))
}

/// Published Daubechies-6 scaling coefficients (sum √2).
pub const DAUBECHIES6: [f64; 6] = [
    0.332_670_552_950_082_6,
    0.806_891_509_311_092_6,
    0.459_877_502_118_491_6,
    -0.135_011_020_010_254_6,
    -0.085_441_273_882_026_66,
    0.035_226_291_885_709_54,
];
