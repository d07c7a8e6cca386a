use nalgebra::{Matrix2, Vector2};

use super::projection::{scalar_projection, Projection, Sign, INVARIANT_TOL};
use super::unitary::FullRankUnitary;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::masks::{polyphase_split, MaskPair};
use crate::qmf::PolyphaseMatrix;

/// Degree-one paraunitary factor (I − P + Pξ)·U.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeFactor {
    p: Projection,
    u: CMat,
}

impl BlaschkeFactor {
    pub fn new(p: Projection, u: CMat) -> Result<Self> {
        linalg::check_square(&u, p.size(), "U")?;
        let r = linalg::unitarity_residual(&u);
        if !(r < INVARIANT_TOL) {
            return Err(Error::Invariant(format!("U is not unitary (residual {r:e})")));
        }
        Ok(BlaschkeFactor { p, u })
    }

    /// Factor with U = I.
    pub fn pure(p: Projection) -> Self {
        let n = p.size();
        BlaschkeFactor {
            p,
            u: linalg::identity(n),
        }
    }

    pub fn projection(&self) -> &Projection {
        &self.p
    }

    pub fn unitary(&self) -> &CMat {
        &self.u
    }

    fn coeffs(&self) -> [CMat; 2] {
        let pm = self.p.matrix();
        let n = self.p.size();
        [(linalg::identity(n) - pm) * &self.u, pm * &self.u]
    }
}

fn poly_mul(a: &[CMat], b: &[CMat]) -> Vec<CMat> {
    let n = a[0].nrows();
    let mut out = vec![linalg::zeros(n, n); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of Π_j (I − P_j + P_j ξ)U_j · tail.
pub fn blaschke_product(factors: &[BlaschkeFactor], tail: &CMat) -> Result<PolyphaseMatrix> {
    let n = tail.nrows();
    if !n.is_multiple_of(2) {
        return Err(Error::dims(format!("tail size {n} is odd")));
    }
    linalg::check_square(tail, n, "tail")?;
    let r = linalg::unitarity_residual(tail);
    if !(r < INVARIANT_TOL) {
        return Err(Error::Invariant(format!("tail is not unitary (residual {r:e})")));
    }
    let mut acc = vec![linalg::identity(n)];
    for f in factors {
        if f.p.size() != n {
            return Err(Error::dims(format!(
                "factor of size {} with tail of size {n}",
                f.p.size()
            )));
        }
        acc = poly_mul(&acc, &f.coeffs());
    }
    let acc = poly_mul(&acc, std::slice::from_ref(tail));
    PolyphaseMatrix::new(n / 2, acc)
}

/// b₁ = 5/4 − √10/8, b₂ = √10/8
pub fn blaschke_d6_reference() -> (f64, f64) {
    let s = 10f64.sqrt() / 8.0;
    (1.25 - s, s)
}

/// Two scalar factors B_−(b₁), B_−(b₂) with the balanced tail U* = (√2/2)[[1,1],[1,−1]].
pub fn blaschke_d6_polyphase(b1: f64, b2: f64) -> Result<PolyphaseMatrix> {
    let f1 = BlaschkeFactor::pure(scalar_projection(b1, Sign::Minus, false)?);
    let f2 = BlaschkeFactor::pure(scalar_projection(b2, Sign::Minus, false)?);
    let tail = FullRankUnitary::scalar(1.0)?.u().adjoint();
    blaschke_product(&[f1, f2], &tail)
}

/// Order-two moments: Σ(−1)^α α^k p_α and Σ α^k q_α for k = 1, 2.
pub fn blaschke_d6_defect(b1: f64, b2: f64) -> Result<[f64; 4]> {
    let pair = polyphase_split(&blaschke_d6_polyphase(b1, b2)?);
    let pm = |k| pair.p().moment(k, true)[(0, 0)].re;
    let qm = |k| pair.q().moment(k, false)[(0, 0)].re;
    Ok([pm(1), pm(2), qm(1), qm(2)])
}

const SOLVE_TOL: f64 = 1e-13;

fn defect_norm(x: Vector2<f64>) -> f64 {
    blaschke_d6_defect(x[0], x[1]).map_or(f64::INFINITY, |r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
}

fn clamp_box(x: Vector2<f64>) -> Vector2<f64> {
    x.map(|v| v.clamp(0.0, 1.0))
}

/// Damped Gauss–Newton with a central-difference Jacobian inside [0, 1]².
fn gauss_newton(start: Vector2<f64>) -> (Vector2<f64>, f64) {
    let eval = |x: Vector2<f64>| blaschke_d6_defect(x[0], x[1]).ok();
    let mut x = clamp_box(start);
    let mut fx = defect_norm(x);
    let mut lambda: f64 = 1e-3;
    for _ in 0..200 {
        if fx < SOLVE_TOL {
            break;
        }
        let Some(r) = eval(x) else { break };
        let mut jac = [[0.0; 2]; 4];
        for j in 0..2 {
            let h = 1e-7;
            let mut lo = x;
            let mut hi = x;
            lo[j] = (x[j] - h).max(0.0);
            hi[j] = (x[j] + h).min(1.0);
            let (Some(rl), Some(rh)) = (eval(lo), eval(hi)) else {
                return (x, fx);
            };
            for i in 0..4 {
                jac[i][j] = (rh[i] - rl[i]) / (hi[j] - lo[j]);
            }
        }
        let mut jtj: Matrix2<f64> = Matrix2::zeros();
        let mut jtr = Vector2::zeros();
        for i in 0..4 {
            for a in 0..2 {
                jtr[a] += jac[i][a] * r[i];
                for b in 0..2 {
                    jtj[(a, b)] += jac[i][a] * jac[i][b];
                }
            }
        }
        let mut improved = false;
        for _ in 0..30 {
            let damped = jtj + Matrix2::identity() * lambda * (1.0 + jtj.trace());
            let Some(step) = damped.lu().solve(&jtr) else { break };
            let cand = clamp_box(x - step);
            let fc = defect_norm(cand);
            if fc < fx {
                x = cand;
                fx = fc;
                lambda = (lambda * 0.1).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (x, fx)
}

pub fn solve_blaschke_d6_from(start: (f64, f64)) -> Result<(f64, f64)> {
    let (x, fx) = gauss_newton(Vector2::new(start.0, start.1));
    if fx < SOLVE_TOL {
        return Ok((x[0], x[1]));
    }
    // Fall back to a coarse grid, most promising starting points first.
    let mut grid: Vec<(Vector2<f64>, f64)> = (0..=10)
        .flat_map(|i| (0..=10).map(move |j| Vector2::new(i as f64 / 10.0, j as f64 / 10.0)))
        .map(|g| (g, defect_norm(g)))
        .collect();
    grid.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut best = (x, fx);
    for (g, _) in grid.into_iter().take(8) {
        let (y, fy) = gauss_newton(g);
        if fy < SOLVE_TOL {
            return Ok((y[0], y[1]));
        }
        if fy < best.1 {
            best = (y, fy);
        }
    }
    Err(Error::NoRoot(format!(
        "moment residual {:e} at ({}, {})",
        best.1, best.0[0], best.0[1]
    )))
}

pub fn solve_blaschke_d6() -> Result<(f64, f64)> {
    solve_blaschke_d6_from((0.5, 0.5))
}

pub fn d6_potapov() -> Result<MaskPair> {
    let (b1, b2) = solve_blaschke_d6()?;
    Ok(polyphase_split(&blaschke_d6_polyphase(b1, b2)?))
}
