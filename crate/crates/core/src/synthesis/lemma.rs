use super::projection::{Projection, INVARIANT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::masks::{polyphase_split, MaskPair};
use crate::qmf::PolyphaseMatrix;

fn check_unitary(u: &CMat, n: usize) -> Result<()> {
    linalg::check_square(u, n, "U")?;
    let r = linalg::unitarity_residual(u);
    if !(r < INVARIANT_TOL) {
        return Err(Error::Invariant(format!("U is not unitary (residual {r:e})")));
    }
    Ok(())
}

/// F(ξ) = (I − P)U* + P U*·ξ.
pub fn degree1_polyphase(p: &Projection, u: &CMat) -> Result<PolyphaseMatrix> {
    let n = p.size();
    if !n.is_multiple_of(2) {
        return Err(Error::dims(format!("projection size {n} is odd")));
    }
    check_unitary(u, n)?;
    let us = u.adjoint();
    let pm = p.matrix();
    let f0 = (linalg::identity(n) - pm) * &us;
    let f1 = pm * &us;
    PolyphaseMatrix::new(n / 2, vec![f0, f1])
}

pub fn degree1_synthesize(p: &Projection, u: &CMat) -> Result<MaskPair> {
    Ok(polyphase_split(&degree1_polyphase(p, u)?))
}

/// Residuals of the block conditions satisfied by a degree-one conservative system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaReport {
    pub abcd_unitarity: f64,
    pub dc: f64,
    pub bc_minus_c: f64,
    pub b_minus_cu: f64,
    pub d_minus_au: f64,
}

impl LemmaReport {
    pub fn max(&self) -> f64 {
        [
            self.abcd_unitarity,
            self.dc,
            self.bc_minus_c,
            self.b_minus_cu,
            self.d_minus_au,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Builds B = P, D = I − P, A = DU*, C = BU* and measures the block conditions,
/// with U recovered as A* + C*. `p` is deliberately unvalidated so that
/// non-projections can be probed.
pub fn verify_lemma_equivalence(p: &CMat, u: &CMat) -> Result<LemmaReport> {
    let n = p.nrows();
    linalg::check_square(p, n, "P")?;
    linalg::check_square(u, n, "U")?;
    let us = u.adjoint();
    let b = p.clone();
    let d = linalg::identity(n) - p;
    let a = &d * &us;
    let c = &b * &us;
    let u_rec = a.adjoint() + c.adjoint();
    let abcd = linalg::from_blocks(&[vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]);
    Ok(LemmaReport {
        abcd_unitarity: linalg::unitarity_residual(&abcd),
        dc: linalg::frobenius(&(&d * &c)),
        bc_minus_c: linalg::frobenius(&(&b * &c - &c)),
        b_minus_cu: linalg::frobenius(&(&b - &c * &u_rec)),
        d_minus_au: linalg::frobenius(&(&d - &a * &u_rec)),
    })
}
