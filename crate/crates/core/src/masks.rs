//! Mask and symbol types, polyphase packing, and sum-rule diagnostics.
//!
//! Masks are stored QMF-normalized: the order-1 sum rule reads
//! `p(1) v = √2 v`, `p(−1) v = 0`, and the vanishing moment `q(1)* v = 0`.

use nalgebra::{DVector, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, SQRT2};
use crate::qmf::PolyphaseMatrix;

/// Finitely supported sequence of M×M matrices indexed α = 0…n.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixMask {
    m: usize,
    coeffs: Vec<CMat>,
}

impl MatrixMask {
    pub fn new(m: usize, coeffs: Vec<CMat>) -> Result<Self> {
        if m == 0 {
            return Err(Error::dims("M must be positive"));
        }
        if coeffs.is_empty() {
            return Err(Error::dims("mask needs at least one coefficient"));
        }
        for (a, c) in coeffs.iter().enumerate() {
            linalg::check_square(c, m, &format!("mask coefficient {a}"))?;
        }
        Ok(MatrixMask { m, coeffs })
    }

    /// Scalar mask from real taps.
    pub fn scalar(taps: &[f64]) -> Result<Self> {
        Self::new(
            1,
            taps.iter().map(|&t| CMat::from_element(1, 1, linalg::re(t))).collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Support end n.
    pub fn support_end(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: usize) -> &CMat {
        &self.coeffs[alpha]
    }

    /// Coefficient α, zero outside the stored support.
    pub fn coeff_or_zero(&self, alpha: usize) -> CMat {
        self.coeffs
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| linalg::zeros(self.m, self.m))
    }

    /// True if an end coefficient is nonzero (or the mask has a single tap).
    pub fn is_tight(&self) -> bool {
        let n = self.support_end();
        n == 0 || linalg::frobenius(&self.coeffs[0]) > 0.0 || linalg::frobenius(&self.coeffs[n]) > 0.0
    }

    pub fn padded_to(&self, n: usize) -> MatrixMask {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() < n + 1 {
            coeffs.push(linalg::zeros(self.m, self.m));
        }
        MatrixMask { m: self.m, coeffs }
    }

    pub fn scaled(&self, s: f64) -> MatrixMask {
        MatrixMask {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c * linalg::re(s)).collect(),
        }
    }

    /// Σ_α (±1)^α α^k c_α, the k-th discrete moment at z = sign.
    pub fn moment(&self, k: u32, alternating: bool) -> CMat {
        let mut acc = linalg::zeros(self.m, self.m);
        for (a, c) in self.coeffs.iter().enumerate() {
            let mut w = (a as f64).powi(k as i32);
            if k == 0 {
                w = 1.0;
            }
            if alternating && a % 2 == 1 {
                w = -w;
            }
            acc += c * linalg::re(w);
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &MatrixMask) -> f64 {
        let n = self.support_end().max(other.support_end());
        let a = self.padded_to(n);
        let b = other.padded_to(n);
        a.coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| linalg::max_abs_diff(x, y))
            .fold(0.0, f64::max)
    }
}

/// The (p, q) pair defining φ and ψ; both share M and n.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskPair {
    p: MatrixMask,
    q: MatrixMask,
}

impl MaskPair {
    pub fn new(p: MatrixMask, q: MatrixMask) -> Result<Self> {
        if p.m() != q.m() {
            return Err(Error::dims(format!("p has M = {}, q has M = {}", p.m(), q.m())));
        }
        let n = p.support_end().max(q.support_end());
        Ok(MaskPair {
            p: p.padded_to(n),
            q: q.padded_to(n),
        })
    }

    pub fn p(&self) -> &MatrixMask {
        &self.p
    }

    pub fn q(&self) -> &MatrixMask {
        &self.q
    }

    pub fn m(&self) -> usize {
        self.p.m()
    }

    pub fn support_end(&self) -> usize {
        self.p.support_end()
    }

    /// Same masks with zero taps appended up to support end n.
    pub fn padded_to(&self, n: usize) -> MaskPair {
        MaskPair {
            p: self.p.padded_to(n),
            q: self.q.padded_to(n),
        }
    }

    /// Index reversal α ↦ n − α of both masks.
    pub fn reversed(&self) -> MaskPair {
        let rev = |mask: &MatrixMask| MatrixMask {
            m: mask.m,
            coeffs: mask.coeffs.iter().rev().cloned().collect(),
        };
        MaskPair {
            p: rev(&self.p),
            q: rev(&self.q),
        }
    }

    pub fn max_abs_diff(&self, other: &MaskPair) -> f64 {
        self.p.max_abs_diff(&other.p).max(self.q.max_abs_diff(&other.q))
    }
}

/// v_1…v_M̃ for the sum rules; M̃ = M is full rank, M̃ = 1 is rank one.
#[derive(Debug, Clone, PartialEq)]
pub struct SumRuleVectors {
    vectors: Vec<DVector<Complex64>>,
}

impl SumRuleVectors {
    pub fn new(vectors: Vec<DVector<Complex64>>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::dims("need at least one sum-rule vector"));
        };
        let dim = first.len();
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::dims("sum-rule vectors differ in length"));
        }
        if vectors.len() > dim {
            return Err(Error::dims(format!(
                "{} sum-rule vectors in dimension {dim}",
                vectors.len()
            )));
        }
        if vectors.iter().any(|v| v.norm() == 0.0) {
            return Err(Error::domain("sum-rule vectors must be nonzero"));
        }
        let stacked = CMat::from_columns(&vectors);
        let sv = stacked.svd(false, false).singular_values;
        let smax = sv.max();
        if sv.iter().any(|&s| s <= smax * 1e-12) {
            return Err(Error::domain("sum-rule vectors are linearly dependent"));
        }
        Ok(SumRuleVectors { vectors })
    }

    pub fn from_real(vectors: &[&[f64]]) -> Result<Self> {
        Self::new(
            vectors
                .iter()
                .map(|v| DVector::from_iterator(v.len(), v.iter().map(|&x| linalg::re(x))))
                .collect(),
        )
    }

    /// The standard basis of C^M.
    pub fn full_rank(m: usize) -> Self {
        SumRuleVectors {
            vectors: (0..m)
                .map(|i| DVector::from_fn(m, |j, _| linalg::re(if i == j { 1.0 } else { 0.0 })))
                .collect(),
        }
    }

    pub fn vectors(&self) -> &[DVector<Complex64>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.count() == self.dim()
    }
}

/// Result of a sum-rule check: the residual plus the spectral condition on p(1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRuleReport {
    pub residual: f64,
    /// All eigenvalues of p(1) off span{v_j} have modulus < √2.
    pub spectral_ok: bool,
}

/// p(z) = Σ_α p_α z^α.
pub fn symbol_eval(mask: &MatrixMask, z: Complex64) -> CMat {
    linalg::horner(mask.coeffs(), z)
}

fn check_vectors(mask: &MatrixMask, v: &SumRuleVectors, order: usize) -> Result<()> {
    if mask.m() != v.dim() {
        return Err(Error::dims(format!(
            "mask has M = {}, sum-rule vectors have length {}",
            mask.m(),
            v.dim()
        )));
    }
    if order == 0 {
        return Err(Error::domain("order must be at least 1"));
    }
    if order > 1 && !v.is_full_rank() {
        return Err(Error::UnsupportedOrder {
            order,
            vectors: v.count(),
            dim: v.dim(),
        });
    }
    Ok(())
}

pub fn sum_rule_residual(p: &MatrixMask, v: &SumRuleVectors, order: usize) -> Result<SumRuleReport> {
    check_vectors(p, v, order)?;
    let one = symbol_eval(p, linalg::re(1.0));
    let minus = symbol_eval(p, linalg::re(-1.0));
    let mut residual = 0.0f64;
    for vj in v.vectors() {
        residual = residual
            .max((&one * vj - vj * linalg::re(SQRT2)).norm())
            .max((&minus * vj).norm());
    }
    for k in 1..order as u32 {
        residual = residual.max(linalg::frobenius(&p.moment(k, true)));
    }
    Ok(SumRuleReport {
        residual,
        spectral_ok: spectral_condition(&one, v.count()),
    })
}

pub fn vanishing_moment_residual(q: &MatrixMask, v: &SumRuleVectors, order: usize) -> Result<f64> {
    check_vectors(q, v, order)?;
    let one_adj = symbol_eval(q, linalg::re(1.0)).adjoint();
    let mut residual = v.vectors().iter().map(|vj| (&one_adj * vj).norm()).fold(0.0, f64::max);
    for k in 1..order as u32 {
        residual = residual.max(linalg::frobenius(&q.moment(k, false)));
    }
    Ok(residual)
}

/// Eigenvalues of p(1) with the `count` closest to √2 removed; the rest must lie
/// strictly inside the circle of radius √2.
fn spectral_condition(p1: &CMat, count: usize) -> bool {
    let Some(eig) = eigenvalues(p1) else {
        return false;
    };
    let mut eig: Vec<Complex64> = eig;
    eig.sort_by(|a, b| {
        let da = (a - linalg::re(SQRT2)).norm();
        let db = (b - linalg::re(SQRT2)).norm();
        da.total_cmp(&db)
    });
    eig.iter().skip(count).all(|z| z.norm() < SQRT2 * (1.0 - 1e-12))
}

pub(crate) fn eigenvalues(m: &CMat) -> Option<Vec<Complex64>> {
    if m.nrows() == 1 {
        return Some(vec![m[(0, 0)]]);
    }
    let schur = Schur::try_new(m.clone(), 1e-14, 10_000)?;
    schur.eigenvalues().map(|e| e.iter().copied().collect())
}

/// Orthonormal basis of {v : p(1)v = √2 v, p(−1)v = 0}, i.e. every vector for
/// which the order-1 sum rule holds to `tol`.
pub fn detect_sum_rule_vectors(p: &MatrixMask, tol: f64) -> Option<SumRuleVectors> {
    let m = p.m();
    let one = symbol_eval(p, linalg::re(1.0)) - linalg::identity(m) * linalg::re(SQRT2);
    let minus = symbol_eval(p, linalg::re(-1.0));
    let mut stacked = linalg::zeros(2 * m, m);
    stacked.view_mut((0, 0), (m, m)).copy_from(&one);
    stacked.view_mut((m, 0), (m, m)).copy_from(&minus);
    let svd = stacked.svd(false, true);
    let v_t = svd.v_t?;
    let mut vectors = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s < tol {
            vectors.push(v_t.row(i).adjoint());
        }
    }
    if vectors.is_empty() {
        None
    } else {
        SumRuleVectors::new(vectors).ok()
    }
}

/// Largest order (up to `max_order`) whose sum-rule residual is below `tol`.
pub fn sum_rule_order(p: &MatrixMask, v: &SumRuleVectors, tol: f64, max_order: usize) -> usize {
    let cap = if v.is_full_rank() { max_order } else { max_order.min(1) };
    (1..=cap)
        .take_while(|&k| sum_rule_residual(p, v, k).is_ok_and(|r| r.residual < tol))
        .last()
        .unwrap_or(0)
}

/// Largest order (up to `max_order`) whose vanishing-moment residual is below `tol`.
pub fn vanishing_moment_order(q: &MatrixMask, v: &SumRuleVectors, tol: f64, max_order: usize) -> usize {
    let cap = if v.is_full_rank() { max_order } else { max_order.min(1) };
    (1..=cap)
        .take_while(|&k| vanishing_moment_residual(q, v, k).is_ok_and(|r| r < tol))
        .last()
        .unwrap_or(0)
}

/// F_j = [[p_{2j}, q_{2j}], [p_{2j+1}, q_{2j+1}]], j = 0…⌊n/2⌋.
pub fn polyphase_assemble(pair: &MaskPair) -> PolyphaseMatrix {
    let m = pair.m();
    let n = pair.support_end();
    let big_n = n / 2;
    let coeffs = (0..=big_n)
        .map(|j| {
            linalg::from_blocks(&[
                vec![pair.p().coeff_or_zero(2 * j), pair.q().coeff_or_zero(2 * j)],
                vec![pair.p().coeff_or_zero(2 * j + 1), pair.q().coeff_or_zero(2 * j + 1)],
            ])
        })
        .collect();
    PolyphaseMatrix::new(m, coeffs).expect("blocks are 2M x 2M by construction")
}

/// Inverse of [`polyphase_assemble`]; the result has support end 2N + 1.
pub fn polyphase_split(f: &PolyphaseMatrix) -> MaskPair {
    let m = f.m();
    let mut p = Vec::with_capacity(2 * f.coeffs().len());
    let mut q = Vec::with_capacity(2 * f.coeffs().len());
    for fj in f.coeffs() {
        p.push(linalg::block(fj, 0, 0, m, m));
        p.push(linalg::block(fj, 1, 0, m, m));
        q.push(linalg::block(fj, 0, 1, m, m));
        q.push(linalg::block(fj, 1, 1, m, m));
    }
    MaskPair {
        p: MatrixMask { m, coeffs: p },
        q: MatrixMask { m, coeffs: q },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real_rows, zeros, HALF_SQRT2};

    fn haar() -> MaskPair {
        MaskPair::new(
            MatrixMask::scalar(&[HALF_SQRT2, HALF_SQRT2]).unwrap(),
            MatrixMask::scalar(&[HALF_SQRT2, -HALF_SQRT2]).unwrap(),
        )
        .unwrap()
    }

    fn shifted_haar() -> MaskPair {
        MaskPair::new(
            MatrixMask::scalar(&[0.0, HALF_SQRT2, HALF_SQRT2, 0.0]).unwrap(),
            MatrixMask::scalar(&[0.0, -HALF_SQRT2, HALF_SQRT2, 0.0]).unwrap(),
        )
        .unwrap()
    }

    fn d4() -> MaskPair {
        // time-reversed Daubechies D4 with its flip-trick wavelet
        let s3 = 3f64.sqrt();
        let d = 4.0 * 2f64.sqrt();
        let p = [(1.0 - s3) / d, (3.0 - s3) / d, (3.0 + s3) / d, (1.0 + s3) / d];
        let q: Vec<f64> = (0..4).map(|a| if a % 2 == 0 { p[3 - a] } else { -p[3 - a] }).collect();
        MaskPair::new(MatrixMask::scalar(&p).unwrap(), MatrixMask::scalar(&q).unwrap()).unwrap()
    }

    fn one() -> SumRuleVectors {
        SumRuleVectors::from_real(&[&[1.0]]).unwrap()
    }

    #[test]
    fn symbol_eval_haar() {
        let h = haar();
        assert!((symbol_eval(h.p(), linalg::re(1.0))[(0, 0)].re - SQRT2).abs() < 1e-15);
        assert!(symbol_eval(h.p(), linalg::re(-1.0))[(0, 0)].norm() < 1e-15);
        let z0 = symbol_eval(h.p(), linalg::re(0.0));
        assert_eq!(&z0, h.p().coeff(0));
    }

    #[test]
    fn symbol_at_one_is_exact_sum() {
        let d = d4();
        let sum = d.p().coeffs().iter().fold(zeros(1, 1), |acc, c| acc + c);
        let at_one = symbol_eval(d.p(), linalg::re(1.0));
        assert!(linalg::max_abs_diff(&sum, &at_one) <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn haar_sum_rules() {
        let r = sum_rule_residual(haar().p(), &one(), 1).unwrap();
        assert!(r.residual < 1e-15);
        assert!(r.spectral_ok);
        assert!(vanishing_moment_residual(haar().q(), &one(), 1).unwrap() < 1e-15);
    }

    #[test]
    fn delta_mask_fails() {
        let p = MatrixMask::scalar(&[1.0, 0.0]).unwrap();
        let r = sum_rule_residual(&p, &one(), 1).unwrap();
        assert!(r.residual >= SQRT2 - 1.0);
        assert!(r.residual > 0.0);
        let v = vanishing_moment_residual(&p, &one(), 1).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn d4_order_two() {
        let d = d4();
        assert!(sum_rule_residual(d.p(), &one(), 2).unwrap().residual < 1e-12);
        assert!(vanishing_moment_residual(d.q(), &one(), 2).unwrap() < 1e-12);
        assert!(sum_rule_residual(d.p(), &one(), 3).unwrap().residual > 1e-3);
        assert_eq!(sum_rule_order(d.p(), &one(), 1e-10, 8), 2);
        assert_eq!(vanishing_moment_order(d.q(), &one(), 1e-10, 8), 2);
    }

    #[test]
    fn rank_one_higher_order_unsupported() {
        let p = MatrixMask::new(2, vec![linalg::identity(2); 2]).unwrap();
        let v = SumRuleVectors::from_real(&[&[1.0, 0.0]]).unwrap();
        assert!(matches!(
            sum_rule_residual(&p, &v, 2),
            Err(Error::UnsupportedOrder { .. })
        ));
        assert!(sum_rule_residual(&p, &v, 1).is_ok());
    }

    #[test]
    fn dimension_mismatch() {
        let v = SumRuleVectors::from_real(&[&[1.0, 0.0]]).unwrap();
        assert!(matches!(
            sum_rule_residual(haar().p(), &v, 1),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn sum_rule_vectors_validation() {
        assert!(SumRuleVectors::from_real(&[&[0.0, 0.0]]).is_err());
        assert!(SumRuleVectors::from_real(&[&[1.0, 1.0], &[2.0, 2.0]]).is_err());
        assert!(SumRuleVectors::from_real(&[&[1.0, 0.0], &[0.0, 1.0]])
            .unwrap()
            .is_full_rank());
    }

    #[test]
    fn spectral_condition_detects_extra_eigenvalue() {
        // p(1) = √2·I but only one vector claimed: the second eigenvalue √2 is too big.
        let h = HALF_SQRT2;
        let p = MatrixMask::new(2, vec![linalg::identity(2) * linalg::re(h); 2]).unwrap();
        let v = SumRuleVectors::from_real(&[&[1.0, 0.0]]).unwrap();
        let r = sum_rule_residual(&p, &v, 1).unwrap();
        assert!(r.residual < 1e-15);
        assert!(!r.spectral_ok);
        let r = sum_rule_residual(&p, &SumRuleVectors::full_rank(2), 1).unwrap();
        assert!(r.spectral_ok);
    }

    #[test]
    fn detects_sum_rule_vectors() {
        let v = detect_sum_rule_vectors(haar().p(), 1e-10).unwrap();
        assert_eq!(v.count(), 1);
        assert!(detect_sum_rule_vectors(&MatrixMask::scalar(&[1.0, 0.0]).unwrap(), 1e-10).is_none());
    }

    #[test]
    fn assemble_haar() {
        let f = polyphase_assemble(&haar());
        assert_eq!(f.degree(), 0);
        let h = HALF_SQRT2;
        assert_eq!(f.coeff(0), &from_real_rows(2, 2, &[h, h, h, -h]));
    }

    #[test]
    fn assemble_shifted_haar() {
        let f = polyphase_assemble(&shifted_haar());
        let h = HALF_SQRT2;
        assert_eq!(f.degree(), 1);
        assert_eq!(f.coeff(0), &from_real_rows(2, 2, &[0.0, 0.0, h, -h]));
        assert_eq!(f.coeff(1), &from_real_rows(2, 2, &[h, h, 0.0, 0.0]));
    }

    #[test]
    fn assemble_zero_masks() {
        let z = MatrixMask::scalar(&[0.0; 4]).unwrap();
        let f = polyphase_assemble(&MaskPair::new(z.clone(), z).unwrap());
        assert_eq!(f.degree(), 1);
        assert!(f.coeffs().iter().all(|c| linalg::frobenius(c) == 0.0));
    }

    #[test]
    fn split_round_trips_examples() {
        for pair in [haar(), shifted_haar(), d4()] {
            let back = polyphase_split(&polyphase_assemble(&pair));
            let n = back.support_end();
            assert_eq!(back, pair.padded_to(n));
        }
    }

    #[test]
    fn odd_length_pads_to_even() {
        let p = MatrixMask::scalar(&[1.0, 2.0, 3.0]).unwrap();
        let pair = MaskPair::new(p.clone(), p).unwrap();
        let f = polyphase_assemble(&pair);
        assert_eq!(f.degree(), 1);
        assert_eq!(f.coeff(1)[(1, 0)], linalg::re(0.0));
    }

    #[test]
    fn pair_pads_shorter_mask() {
        let pair = MaskPair::new(
            MatrixMask::scalar(&[1.0, 2.0, 3.0, 4.0]).unwrap(),
            MatrixMask::scalar(&[1.0]).unwrap(),
        )
        .unwrap();
        assert_eq!(pair.q().support_end(), 3);
        assert!(!MatrixMask::scalar(&[0.0, 1.0, 0.0]).unwrap().is_tight());
    }
}
