//! QMF / UEP verification on polyphase coefficients.
//!
//! All checks run on the Laurent coefficients of `F*(ξ)F(ξ)` (finite
//! convolution), so there is no sampling of the unit circle involved. The
//! only sampled check is the displacement identity, which lives on the open
//! disk.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

/// Radius of the disk the sampled identities draw from.
pub const DISK_RADIUS: f64 = 0.9;

/// `F(ξ) = Σ_j F_j ξ^j` with 2M×2M coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyphaseMatrix {
    m: usize,
    coeffs: Vec<CMat>,
}

impl PolyphaseMatrix {
    pub fn new(m: usize, coeffs: Vec<CMat>) -> Result<Self> {
        if m == 0 {
            return Err(Error::dims("M must be positive"));
        }
        if coeffs.is_empty() {
            return Err(Error::dims("polyphase matrix needs at least F_0"));
        }
        for (j, f) in coeffs.iter().enumerate() {
            linalg::check_square(f, 2 * m, &format!("F_{j}"))?;
        }
        Ok(PolyphaseMatrix { m, coeffs })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Polynomial degree N (index of the last stored coefficient).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Side length 2M of each coefficient.
    pub fn size(&self) -> usize {
        2 * self.m
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &CMat {
        &self.coeffs[j]
    }

    pub fn eval(&self, xi: Complex64) -> CMat {
        linalg::horner(&self.coeffs, xi)
    }

    /// Same polynomial with zero coefficients appended up to the given degree.
    pub fn padded_to(&self, degree: usize) -> PolyphaseMatrix {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() < degree + 1 {
            coeffs.push(linalg::zeros(self.size(), self.size()));
        }
        PolyphaseMatrix { m: self.m, coeffs }
    }

    pub fn max_abs_diff(&self, other: &PolyphaseMatrix) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len()) - 1;
        let a = self.padded_to(n);
        let b = other.padded_to(n);
        a.coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| linalg::max_abs_diff(x, y))
            .fold(0.0, f64::max)
    }
}

/// Laurent coefficients G_k, k = −N…N, of `F*(1/ξ̄) F(ξ)` (or of `F F*` for UEP).
#[derive(Debug, Clone)]
pub struct GramCoefficients {
    degree: usize,
    coeffs: Vec<CMat>,
}

impl GramCoefficients {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// G_k for −N ≤ k ≤ N.
    pub fn get(&self, k: isize) -> &CMat {
        let idx = k + self.degree as isize;
        assert!(
            idx >= 0 && (idx as usize) < self.coeffs.len(),
            "Gram index {k} out of range"
        );
        &self.coeffs[idx as usize]
    }

    /// max_k ‖G_k − δ_{k0} I‖_F
    pub fn identity_residual(&self) -> f64 {
        let n = self.degree as isize;
        let size = self.coeffs[0].nrows();
        (-n..=n)
            .map(|k| {
                let g = self.get(k);
                if k == 0 {
                    linalg::frobenius(&(g - linalg::identity(size)))
                } else {
                    linalg::frobenius(g)
                }
            })
            .fold(0.0, f64::max)
    }
}

/// G_k = Σ_{j−i=k} F_i* F_j.
pub fn gram_coefficients(f: &PolyphaseMatrix) -> GramCoefficients {
    convolve(f, |fi, fj| fi.adjoint() * fj)
}

/// Co-Gram coefficients Σ_{j−i=k} F_i F_j*.
pub fn cogram_coefficients(f: &PolyphaseMatrix) -> GramCoefficients {
    convolve(f, |fi, fj| fi * fj.adjoint())
}

fn convolve(f: &PolyphaseMatrix, term: impl Fn(&CMat, &CMat) -> CMat) -> GramCoefficients {
    let n = f.degree();
    let size = f.size();
    let mut coeffs = vec![linalg::zeros(size, size); 2 * n + 1];
    // k >= 0 computed directly, k < 0 by adjoint so that G_{-k} = G_k* holds exactly.
    for k in 0..=n {
        let mut acc = linalg::zeros(size, size);
        for i in 0..=(n - k) {
            acc += term(f.coeff(i), f.coeff(i + k));
        }
        coeffs[n - k] = acc.adjoint();
        coeffs[n + k] = acc;
    }
    GramCoefficients { degree: n, coeffs }
}

pub fn qmf_residual(f: &PolyphaseMatrix) -> f64 {
    gram_coefficients(f).identity_residual()
}

pub fn uep_residual(f: &PolyphaseMatrix) -> f64 {
    cogram_coefficients(f).identity_residual()
}

/// Block-Hankel coefficient matrix of ℓ_N.
#[derive(Debug, Clone)]
pub struct EllMap {
    m: usize,
    degree: usize,
    hankel: CMat,
}

impl EllMap {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The 2MN×2MN block-Hankel matrix.
    pub fn hankel(&self) -> &CMat {
        &self.hankel
    }

    /// Block (r, c) of the Hankel matrix.
    pub fn block(&self, r: usize, c: usize) -> CMat {
        let s = 2 * self.m;
        linalg::block(&self.hankel, r, c, s, s)
    }

    /// ℓ_N(ξ) as a 2MN×2M matrix: block row r is Σ_c F_{r+c+1} ξ^c.
    pub fn eval(&self, xi: Complex64) -> CMat {
        let s = 2 * self.m;
        let n = self.degree;
        let mut powers = linalg::zeros(s * n, s);
        let mut p = Complex64::new(1.0, 0.0);
        for c in 0..n {
            let blk = linalg::identity(s) * p;
            linalg::set_block(&mut powers, c, 0, &blk);
            p *= xi;
        }
        &self.hankel * powers
    }
}

pub fn build_ell(f: &PolyphaseMatrix) -> Result<EllMap> {
    let n = f.degree();
    if n == 0 {
        return Err(Error::Degenerate("ell undefined for constant F"));
    }
    let s = f.size();
    let mut hankel = linalg::zeros(s * n, s * n);
    for r in 0..n {
        for c in 0..n {
            let idx = r + c + 1;
            if idx <= n {
                linalg::set_block(&mut hankel, r, c, f.coeff(idx));
            }
        }
    }
    Ok(EllMap {
        m: f.m(),
        degree: n,
        hankel,
    })
}

/// max over seeded disk pairs (ξ, η) of
/// ‖I − F*(η)F(ξ) − (1 − ξη̄) ℓ_N*(η) ℓ_N(ξ)‖_F.
pub fn displacement_residual(f: &PolyphaseMatrix, samples: usize, seed: u64) -> Result<f64> {
    let ell = build_ell(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = linalg::identity(f.size());
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let xi = linalg::random_disk_point(&mut rng, DISK_RADIUS);
        let eta = linalg::random_disk_point(&mut rng, DISK_RADIUS);
        worst = worst.max(displacement_at(f, &ell, &id, xi, eta));
    }
    Ok(worst)
}

/// Pointwise displacement defect at a single pair (ξ, η).
pub fn displacement_defect(f: &PolyphaseMatrix, xi: Complex64, eta: Complex64) -> Result<f64> {
    let ell = build_ell(f)?;
    let id = linalg::identity(f.size());
    Ok(displacement_at(f, &ell, &id, xi, eta))
}

fn displacement_at(f: &PolyphaseMatrix, ell: &EllMap, id: &CMat, xi: Complex64, eta: Complex64) -> f64 {
    let lhs = id - f.eval(eta).adjoint() * f.eval(xi);
    let rhs = ell.eval(eta).adjoint() * ell.eval(xi) * (Complex64::new(1.0, 0.0) - xi * eta.conj());
    linalg::frobenius(&(lhs - rhs))
}
