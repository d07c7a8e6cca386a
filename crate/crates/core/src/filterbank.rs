//! Periodic analysis/synthesis and the cascade algorithm.

use nalgebra::RowDVector;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, SQRT2};
use crate::masks::{sum_rule_residual, MaskPair, SumRuleVectors};

/// Precondition tolerance on the order-1 sum rule for the cascade.
pub const CASCADE_SUM_RULE_TOL: f64 = 1e-10;

/// L samples of dimension M, one per row; periodic boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: CMat,
}

impl Signal {
    pub fn new(samples: CMat) -> Result<Self> {
        let l = samples.nrows();
        if l == 0 || !l.is_multiple_of(2) {
            return Err(Error::dims(format!("signal length {l} must be positive and even")));
        }
        if samples.ncols() == 0 {
            return Err(Error::dims("signal dimension must be positive"));
        }
        Ok(Signal { samples })
    }

    pub fn from_real(m: usize, data: &[f64]) -> Result<Self> {
        if m == 0 || !data.len().is_multiple_of(m) {
            return Err(Error::dims(format!("{} values do not fill rows of {m}", data.len())));
        }
        Signal::new(linalg::from_real_rows(data.len() / m, m, data))
    }

    /// Complex Gaussian samples.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, len: usize, m: usize) -> Result<Self> {
        Signal::new(linalg::random_gaussian_matrix(rng, len, m))
    }

    pub fn len(&self) -> usize {
        self.samples.nrows()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn m(&self) -> usize {
        self.samples.ncols()
    }

    pub fn samples(&self) -> &CMat {
        &self.samples
    }

    pub fn energy(&self) -> f64 {
        self.samples.norm_squared()
    }

    pub fn max_abs_diff(&self, other: &Signal) -> f64 {
        linalg::max_abs_diff(&self.samples, &other.samples)
    }
}

/// Low- and high-pass channels, L/2 rows each.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandPair {
    low: CMat,
    high: CMat,
}

impl SubbandPair {
    pub fn new(low: CMat, high: CMat) -> Result<Self> {
        if low.shape() != high.shape() {
            return Err(Error::dims(format!(
                "low is {:?}, high is {:?}",
                low.shape(),
                high.shape()
            )));
        }
        if low.nrows() == 0 || low.ncols() == 0 {
            return Err(Error::dims("empty subbands"));
        }
        Ok(SubbandPair { low, high })
    }

    pub fn low(&self) -> &CMat {
        &self.low
    }

    pub fn high(&self) -> &CMat {
        &self.high
    }

    pub fn m(&self) -> usize {
        self.low.ncols()
    }

    /// Length of the parent signal.
    pub fn signal_len(&self) -> usize {
        2 * self.low.nrows()
    }

    pub fn energy(&self) -> f64 {
        self.low.norm_squared() + self.high.norm_squared()
    }

    pub fn max_abs_diff(&self, other: &SubbandPair) -> f64 {
        linalg::max_abs_diff(&self.low, &other.low).max(linalg::max_abs_diff(&self.high, &other.high))
    }
}

fn check_pair(m: usize, len: usize, pair: &MaskPair) -> Result<()> {
    if m != pair.m() {
        return Err(Error::dims(format!("signal has M = {m}, masks have M = {}", pair.m())));
    }
    if len < pair.support_end() {
        return Err(Error::dims(format!(
            "signal length {len} shorter than mask support {}",
            pair.support_end()
        )));
    }
    Ok(())
}

/// low[k] = Σ_j p_j*·c[2k+j], high[k] = Σ_j q_j*·c[2k+j], indices mod L.
///
/// Each stored row is a coefficient vector acting on φ(· − k) from the right,
/// so the masks apply to it as column vectors.
pub fn analyze(c: &Signal, pair: &MaskPair) -> Result<SubbandPair> {
    let l = c.len();
    let m = c.m();
    check_pair(m, l, pair)?;
    // (p_j* c)ᵀ = cᵀ·conj(p_j)
    let p_adj: Vec<CMat> = pair.p().coeffs().iter().map(|x| x.conjugate()).collect();
    let q_adj: Vec<CMat> = pair.q().coeffs().iter().map(|x| x.conjugate()).collect();
    let mut low = linalg::zeros(l / 2, m);
    let mut high = linalg::zeros(l / 2, m);
    for k in 0..l / 2 {
        let mut lo = RowDVector::<Complex64>::zeros(m);
        let mut hi = RowDVector::<Complex64>::zeros(m);
        for (j, (pa, qa)) in p_adj.iter().zip(&q_adj).enumerate() {
            let row = c.samples.row((2 * k + j) % l);
            lo += row * pa;
            hi += row * qa;
        }
        low.set_row(k, &lo);
        high.set_row(k, &hi);
    }
    SubbandPair::new(low, high)
}

/// c[α] = Σ_k p_{α−2k}·low[k] + q_{α−2k}·high[k], indices mod L.
pub fn synthesize(s: &SubbandPair, pair: &MaskPair) -> Result<Signal> {
    let l = s.signal_len();
    let m = s.m();
    check_pair(m, l, pair)?;
    let mut out = linalg::zeros(l, m);
    for k in 0..l / 2 {
        let lo = s.low.row(k);
        let hi = s.high.row(k);
        for (j, (p, q)) in pair.p().coeffs().iter().zip(pair.q().coeffs()).enumerate() {
            let a = (2 * k + j) % l;
            let contrib = lo * p.transpose() + hi * q.transpose();
            let mut row = out.row_mut(a);
            row += contrib;
        }
    }
    Signal::new(out)
}

/// ‖synthesize(analyze(c)) − c‖∞ and |‖low‖² + ‖high‖² − ‖c‖²|.
pub fn reconstruction_defect(c: &Signal, pair: &MaskPair) -> Result<(f64, f64)> {
    let sub = analyze(c, pair)?;
    let back = synthesize(&sub, pair)?;
    Ok((back.max_abs_diff(c), (sub.energy() - c.energy()).abs()))
}

/// Piecewise-constant samples of φ and ψ (one row) on cells of width 2^{−level} over [0, n+1).
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeResult {
    level: usize,
    support_end: usize,
    phi_support_end: usize,
    phi: CMat,
    psi: CMat,
    increments: Vec<f64>,
}

impl CascadeResult {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn step(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    pub fn support_end(&self) -> usize {
        self.support_end
    }

    /// Last nonzero tap of p, i.e. the right end of supp φ.
    pub fn phi_support_end(&self) -> usize {
        self.phi_support_end
    }

    pub fn m(&self) -> usize {
        self.phi.ncols()
    }

    pub fn len(&self) -> usize {
        self.phi.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.nrows() == 0
    }

    /// Left endpoint of cell i.
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.step()
    }

    pub fn phi(&self) -> &CMat {
        &self.phi
    }

    pub fn psi(&self) -> &CMat {
        &self.psi
    }

    /// sup|φ_{m+1} − φ_m| for m = 0 … level−1.
    pub fn increments(&self) -> &[f64] {
        &self.increments
    }
}

/// √2·c computed as 2c/√2, which keeps √2·(√2/2) = 1 exact in floating point.
fn sqrt2_scaled(coeffs: &[CMat]) -> Vec<CMat> {
    coeffs.iter().map(|c| c.map(|z| z * 2.0 / SQRT2)).collect()
}

fn refine(prev: &CMat, level: usize, coeffs: &[CMat]) -> CMat {
    // prev lives on level `level`; output on level + 1.
    let m = prev.ncols();
    let n_out = prev.nrows() * 2;
    let shift = 1usize << level;
    let mut out = linalg::zeros(n_out, m);
    for i in 0..n_out {
        let mut acc = RowDVector::<Complex64>::zeros(m);
        for (alpha, c) in coeffs.iter().enumerate() {
            let Some(src) = i.checked_sub(alpha * shift) else { break };
            if src < prev.nrows() {
                acc += prev.row(src) * c;
            }
        }
        out.set_row(i, &acc);
    }
    out
}

/// ψ(x) = √2 Σ_α φ(2x − α) q_α on the grid of φ.
fn wavelet(phi: &CMat, level: usize, q: &[CMat]) -> CMat {
    let m = phi.ncols();
    let shift = 1usize << level;
    let len = phi.nrows();
    let mut out = linalg::zeros(len, m);
    for i in 0..len {
        let mut acc = RowDVector::<Complex64>::zeros(m);
        for (alpha, c) in q.iter().enumerate() {
            let Some(src) = (2 * i).checked_sub(alpha * shift) else {
                break;
            };
            if src < len {
                acc += phi.row(src) * c;
            }
        }
        out.set_row(i, &acc);
    }
    out
}

fn upsample(prev: &CMat) -> CMat {
    let mut out = linalg::zeros(prev.nrows() * 2, prev.ncols());
    for i in 0..out.nrows() {
        out.set_row(i, &prev.row(i / 2));
    }
    out
}

/// Cascade without the sum-rule precondition, starting from the indicator of [0, 1) times v*.
pub fn cascade_unchecked(pair: &MaskPair, v: &[Complex64], levels: usize) -> Result<CascadeResult> {
    let m = pair.m();
    if v.len() != m {
        return Err(Error::dims(format!("start vector has length {}, M = {m}", v.len())));
    }
    if levels == 0 {
        return Err(Error::domain("levels must be positive"));
    }
    if levels > 24 {
        return Err(Error::domain(format!("{levels} levels exceeds the limit of 24")));
    }
    let n = pair.support_end();
    let units = n + 1;
    let mut phi = linalg::zeros(units, m);
    for (j, vj) in v.iter().enumerate() {
        phi[(0, j)] = vj.conj();
    }
    let p = sqrt2_scaled(pair.p().coeffs());
    let mut increments = Vec::with_capacity(levels);
    for level in 0..levels {
        let next = refine(&phi, level, &p);
        let inc = linalg::max_abs_diff(&next, &upsample(&phi));
        increments.push(inc);
        phi = next;
    }
    let psi = wavelet(&phi, levels, &sqrt2_scaled(pair.q().coeffs()));
    Ok(CascadeResult {
        level: levels,
        support_end: n,
        phi_support_end: pair
            .p()
            .coeffs()
            .iter()
            .rposition(|c| c.iter().any(|z| *z != Complex64::new(0.0, 0.0)))
            .unwrap_or(0),
        phi,
        psi,
        increments,
    })
}

/// Cascade from the first sum-rule vector; refuses masks violating the order-1 sum rule.
pub fn cascade(pair: &MaskPair, v: &SumRuleVectors, levels: usize) -> Result<CascadeResult> {
    let residual = sum_rule_residual(pair.p(), v, 1)?.residual;
    if !(residual < CASCADE_SUM_RULE_TOL) {
        return Err(Error::Invariant(format!(
            "order-1 sum rule residual {residual:e}: cascade would diverge"
        )));
    }
    let v1: Vec<Complex64> = v.vectors()[0].iter().copied().collect();
    cascade_unchecked(pair, &v1, levels)
}

/// max over components of |∫|φ_i|² − 1| (Riemann sum over the cells).
pub fn l2_norm_residual(result: &CascadeResult) -> f64 {
    let h = result.step();
    (0..result.m())
        .map(|j| {
            let e: f64 = result.phi.column(j).iter().map(|z| z.norm_sqr()).sum();
            (e * h - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// max |φ_j(x) ∓ φ_j(n − x)| over the grid, n the last nonzero tap of p; `odd` selects antisymmetry.
pub fn symmetry_residual(result: &CascadeResult, component: usize, odd: bool) -> Result<f64> {
    if component >= result.m() {
        return Err(Error::dims(format!("component {component} with M = {}", result.m())));
    }
    // Grid samples sit at x_i = i·2^{−level}, so x ↦ n − x maps i to cells − i.
    let cells = result.phi_support_end << result.level;
    let col = result.phi.column(component);
    let sign = if odd { -1.0 } else { 1.0 };
    Ok((0..=cells)
        .map(|i| (col[i] - col[cells - i] * sign).norm())
        .fold(0.0, f64::max))
}
