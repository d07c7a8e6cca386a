use std::fmt;
use std::str::FromStr;

use super::blaschke::d6_potapov;
use super::d6::d6;
use super::lemma::degree1_synthesize;
use super::projection::{
    embedded_projection, full_rank_projection_a3, full_rank_projection_a4, scalar_projection, Sign,
};
use super::solve::{scalar_pair, solve_scalar_order2};
use super::unitary::{
    chui_lian_ell, lebrun_vetterli_ell, lebrun_vetterli_unitary, rank1_unitary, FullRankUnitary, RankOneUnitarySpec,
};
use crate::error::{Error, Result};
use crate::linalg::{self, HALF_SQRT2};
use crate::masks::{MaskPair, MatrixMask, SumRuleVectors};

/// Standard two-tap Haar pair.
pub fn haar() -> MaskPair {
    let h = HALF_SQRT2;
    MaskPair::new(
        MatrixMask::scalar(&[h, h]).expect("two taps"),
        MatrixMask::scalar(&[h, -h]).expect("two taps"),
    )
    .expect("matching supports")
}

/// Degree-one scalar pair from B_±(b) with W = 1.
pub fn scalar(b: f64, sign: Sign) -> Result<MaskPair> {
    scalar_pair(b, sign)
}

/// Four-tap pair with two vanishing moments (time-reversed Daubechies-4).
pub fn d4() -> Result<MaskPair> {
    scalar_pair(solve_scalar_order2()?, Sign::Plus)
}

pub fn chui_lian() -> Result<MaskPair> {
    let inner = scalar_projection(0.5, Sign::Plus, false)?;
    let p = embedded_projection(&inner, 4)?;
    degree1_synthesize(&p, &rank1_unitary(&RankOneUnitarySpec::new(chui_lian_ell()))?)
}

/// Rank-one family: B_±(b) embedded in 4×4 with the rank-one unitary.
pub fn rank1_family(spec: &RankOneUnitarySpec, b: f64, sign: Sign) -> Result<MaskPair> {
    let p = embedded_projection(&scalar_projection(b, sign, false)?, 4)?;
    degree1_synthesize(&p, &rank1_unitary(spec)?)
}

pub fn lebrun_vetterli() -> Result<MaskPair> {
    let inner = scalar_projection(1.0, Sign::Plus, false)?;
    let p = embedded_projection(&inner, 4)?;
    degree1_synthesize(&p, &lebrun_vetterli_unitary(lebrun_vetterli_ell())?)
}

pub fn fullrank_a3(b: f64) -> Result<MaskPair> {
    degree1_synthesize(&full_rank_projection_a3(b)?, &FullRankUnitary::identity(2).u())
}

pub fn fullrank_a4(b1: f64, b2: f64) -> Result<MaskPair> {
    degree1_synthesize(&full_rank_projection_a4(b1, b2)?, &FullRankUnitary::identity(2).u())
}

/// Named families exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Haar,
    D4,
    D6,
    D6Potapov,
    ChuiLian,
    LebrunVetterli,
    FullrankA3 { b: f64 },
    FullrankA4 { b1: f64, b2: f64 },
    Scalar { b: f64, sign: Sign },
}

impl Family {
    /// Every family with its default parameters.
    pub fn builtin() -> Vec<Family> {
        vec![
            Family::Haar,
            Family::D4,
            Family::D6,
            Family::D6Potapov,
            Family::ChuiLian,
            Family::LebrunVetterli,
            Family::FullrankA3 { b: 0.0 },
            Family::FullrankA4 { b1: 0.25, b2: 0.25 },
            Family::Scalar {
                b: 1.0,
                sign: Sign::Plus,
            },
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Haar => "haar",
            Family::D4 => "d4",
            Family::D6 => "d6",
            Family::D6Potapov => "d6-potapov",
            Family::ChuiLian => "chui-lian",
            Family::LebrunVetterli => "lebrun-vetterli",
            Family::FullrankA3 { .. } => "fullrank-a3",
            Family::FullrankA4 { .. } => "fullrank-a4",
            Family::Scalar { .. } => "scalar",
        }
    }

    pub fn build(&self) -> Result<MaskPair> {
        match *self {
            Family::Haar => Ok(haar()),
            Family::D4 => d4(),
            Family::D6 => d6(),
            Family::D6Potapov => d6_potapov(),
            Family::ChuiLian => chui_lian(),
            Family::LebrunVetterli => lebrun_vetterli(),
            Family::FullrankA3 { b } => fullrank_a3(b),
            Family::FullrankA4 { b1, b2 } => fullrank_a4(b1, b2),
            Family::Scalar { b, sign } => scalar(b, sign),
        }
    }

    /// Sum-rule vectors the family is designed for.
    pub fn sum_rule_vectors(&self) -> SumRuleVectors {
        match self {
            Family::ChuiLian => SumRuleVectors::from_real(&[&[1.0, 0.0]]).expect("nonzero"),
            Family::LebrunVetterli => SumRuleVectors::from_real(&[&[1.0, 1.0]]).expect("nonzero"),
            Family::FullrankA3 { .. } | Family::FullrankA4 { .. } => SumRuleVectors::full_rank(2),
            _ => SumRuleVectors::full_rank(1),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::FullrankA3 { b } => write!(f, "fullrank-a3(b={b})"),
            Family::FullrankA4 { b1, b2 } => write!(f, "fullrank-a4(b1={b1},b2={b2})"),
            Family::Scalar { b, sign } => {
                let s = if *sign == Sign::Plus { '+' } else { '-' };
                write!(f, "scalar({b},{s})")
            }
            other => f.write_str(other.name()),
        }
    }
}

fn parse_num(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::domain(format!("invalid number {s:?}")))
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts the plain names plus `scalar(b,sign)`, `fullrank-a3(b)` and `fullrank-a4(b1,b2)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            Some(_) => return Err(Error::domain(format!("unknown family {s:?}"))),
            None => (s, None),
        };
        let args: Vec<&str> = args.map(|a| a.split(',').map(str::trim).collect()).unwrap_or_default();
        let fam = match (head, args.as_slice()) {
            ("haar", []) => Family::Haar,
            ("d4", []) => Family::D4,
            ("d6", []) => Family::D6,
            ("d6-potapov", []) => Family::D6Potapov,
            ("chui-lian", []) => Family::ChuiLian,
            ("lebrun-vetterli", []) => Family::LebrunVetterli,
            ("fullrank-a3", []) => Family::FullrankA3 { b: 0.0 },
            ("fullrank-a3", [b]) => Family::FullrankA3 { b: parse_num(b)? },
            ("fullrank-a4", []) => Family::FullrankA4 { b1: 0.25, b2: 0.25 },
            ("fullrank-a4", [b1, b2]) => Family::FullrankA4 {
                b1: parse_num(b1)?,
                b2: parse_num(b2)?,
            },
            ("scalar", []) => Family::Scalar {
                b: 1.0,
                sign: Sign::Plus,
            },
            ("scalar", [b]) => Family::Scalar {
                b: parse_num(b)?,
                sign: Sign::Plus,
            },
            ("scalar", [b, sign]) => Family::Scalar {
                b: parse_num(b)?,
                sign: sign.parse()?,
            },
            _ => return Err(Error::domain(format!("unknown family {s:?}"))),
        };
        Ok(fam)
    }
}

/// S = diag(1, −1)
pub fn s_matrix() -> linalg::CMat {
    linalg::from_real_rows(2, 2, &[1.0, 0.0, 0.0, -1.0])
}
