use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

/// Tolerance for the Hermitian-idempotent and unitarity invariants.
pub const INVARIANT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "1" | "+1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            other => Err(Error::domain(format!("sign must be + or -, got {other:?}"))),
        }
    }
}

/// Hermitian idempotent matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection(CMat);

impl Projection {
    pub fn new(p: CMat) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::dims("projection must be square"));
        }
        let r = linalg::projection_residual(&p);
        if !(r < INVARIANT_TOL) {
            return Err(Error::Invariant(format!("not a Hermitian projection (residual {r:e})")));
        }
        Ok(Projection(p))
    }

    pub fn zero(n: usize) -> Self {
        Projection(linalg::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Projection(linalg::identity(n))
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }
}

fn unit_interval(name: &str, b: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::domain(format!(
            "{name} = {b} outside [0, 1]: complex projection entries"
        )));
    }
    Ok(())
}

/// B_± = [[b, ±√(b−b²)], [±√(b−b²), 1−b]], or I₂ when `identity` is set.
pub fn scalar_projection(b: f64, sign: Sign, identity: bool) -> Result<Projection> {
    if identity {
        return Ok(Projection::identity(2));
    }
    unit_interval("b", b)?;
    let r = sign.value() * (b - b * b).max(0.0).sqrt();
    Ok(Projection(linalg::from_real_rows(2, 2, &[b, r, r, 1.0 - b])))
}

/// [[inner, 0], [0, 0]] padded to `size`.
pub fn embedded_projection(inner: &Projection, size: usize) -> Result<Projection> {
    if inner.size() > size {
        return Err(Error::dims(format!(
            "cannot embed a {0}x{0} projection into {size}x{size}",
            inner.size()
        )));
    }
    let mut p = linalg::zeros(size, size);
    p.view_mut((0, 0), (inner.size(), inner.size()))
        .copy_from(inner.matrix());
    Ok(Projection(p))
}

/// Two-parameter 4×4 projection coupling components (1, 4) and (2, 3).
pub fn full_rank_projection_a4(b1: f64, b2: f64) -> Result<Projection> {
    unit_interval("b1", b1)?;
    unit_interval("b2", b2)?;
    let r1 = (b1 - b1 * b1).max(0.0).sqrt();
    let r2 = (b2 - b2 * b2).max(0.0).sqrt();
    #[rustfmt::skip]
    let data = [
        1.0 - b1, 0.0,      0.0, r1,
        0.0,      1.0 - b2, r2,  0.0,
        0.0,      r2,       b2,  0.0,
        r1,       0.0,      0.0, b1,
    ];
    Ok(Projection(linalg::from_real_rows(4, 4, &data)))
}

/// One-parameter 4×4 projection, |b| ≤ 1.
pub fn full_rank_projection_a3(b: f64) -> Result<Projection> {
    if !(-1.0..=1.0).contains(&b) {
        return Err(Error::domain(format!("b = {b} outside [-1, 1]")));
    }
    let s = (1.0 - b * b).max(0.0).sqrt();
    let k = std::f64::consts::SQRT_2 / 4.0;
    let e12 = (b * b - 1.0) / 4.0;
    let e13 = -k * s * (b + 1.0);
    let e23 = -k * s * (b - 1.0);
    #[rustfmt::skip]
    let data = [
        1.0, 0.0,                    0.0,                    0.0,
        0.0, (b + 1.0).powi(2) / 4.0, e12,                    e13,
        0.0, e12,                    (b - 1.0).powi(2) / 4.0, e23,
        0.0, e13,                    e23,                    (1.0 - b * b) / 2.0,
    ];
    Ok(Projection(linalg::from_real_rows(4, 4, &data)))
}
