//! Block-circulant ABCD realization of a polyphase matrix.
//!
//! For `F(ξ) = Σ_{j≤N} F_j ξ^j` the realization is
//! `[[A, B], [C, D]] = circ(F_0, …, F_N) · diag(I, U)` with `U` the block
//! circulant whose first block row is `(F_0* + F_N*, F_1*, …, F_{N−1}*)`.
//! When F is paraunitary the ABCD matrix is unitary, `B Dᴺ = 0`, and
//! `F(ξ) = A + Bξ(I − Dξ)⁻¹C` on the disk.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::qmf::{self, PolyphaseMatrix, DISK_RADIUS};

pub use crate::linalg::unitarity_residual;

#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    m: usize,
    n: usize,
    a: CMat,
    b: CMat,
    c: CMat,
    d: CMat,
    u: CMat,
}

impl Realization {
    /// Assemble from explicit blocks; shapes must agree with M and N.
    pub fn from_blocks(m: usize, n: usize, a: CMat, b: CMat, c: CMat, d: CMat, u: CMat) -> Result<Self> {
        let s = 2 * m;
        let t = 2 * m * n;
        let expect = |x: &CMat, r: usize, cc: usize, what: &str| -> Result<()> {
            if x.shape() != (r, cc) {
                return Err(Error::dims(format!(
                    "{what} is {}x{}, expected {r}x{cc}",
                    x.nrows(),
                    x.ncols()
                )));
            }
            Ok(())
        };
        if m == 0 {
            return Err(Error::dims("M must be positive"));
        }
        expect(&a, s, s, "A")?;
        expect(&b, s, t, "B")?;
        expect(&c, t, s, "C")?;
        expect(&d, t, t, "D")?;
        expect(&u, t, t, "U")?;
        Ok(Realization { m, n, a, b, c, d, u })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    pub fn c(&self) -> &CMat {
        &self.c
    }

    pub fn d(&self) -> &CMat {
        &self.d
    }

    pub fn u(&self) -> &CMat {
        &self.u
    }

    /// The full [[A, B], [C, D]] matrix.
    pub fn abcd(&self) -> CMat {
        let s = 2 * self.m;
        let t = s * self.n;
        let mut out = linalg::zeros(s + t, s + t);
        out.view_mut((0, 0), (s, s)).copy_from(&self.a);
        out.view_mut((0, s), (s, t)).copy_from(&self.b);
        out.view_mut((s, 0), (t, s)).copy_from(&self.c);
        out.view_mut((s, s), (t, t)).copy_from(&self.d);
        out
    }
}

/// The auxiliary unitary U: block (i, j) is F*_{(j−i) mod N}, with F_0* + F_N* on the diagonal.
pub fn circulant_u(f: &PolyphaseMatrix) -> Result<CMat> {
    let n = f.degree();
    if n == 0 {
        return Err(Error::Degenerate("degenerate realization: F constant, A = F_0"));
    }
    let s = f.size();
    let diag = f.coeff(0).adjoint() + f.coeff(n).adjoint();
    let mut u = linalg::zeros(s * n, s * n);
    for i in 0..n {
        for j in 0..n {
            let k = (j + n - i) % n;
            let blk = if k == 0 { diag.clone() } else { f.coeff(k).adjoint() };
            linalg::set_block(&mut u, i, j, &blk);
        }
    }
    Ok(u)
}

pub fn build_abcd(f: &PolyphaseMatrix) -> Result<Realization> {
    let n = f.degree();
    let u = circulant_u(f)?;
    let s = f.size();
    let big = s * (n + 1);
    let mut circ = linalg::zeros(big, big);
    for i in 0..=n {
        for j in 0..=n {
            linalg::set_block(&mut circ, i, j, f.coeff((i + n + 1 - j) % (n + 1)));
        }
    }
    let full = circ * linalg::block_diag(&linalg::identity(s), &u);
    let t = s * n;
    let a = full.view((0, 0), (s, s)).into_owned();
    let b = full.view((0, s), (s, t)).into_owned();
    let c = full.view((s, 0), (t, s)).into_owned();
    let d = full.view((s, s), (t, t)).into_owned();
    Ok(Realization {
        m: f.m(),
        n,
        a,
        b,
        c,
        d,
        u,
    })
}

/// [`build_abcd`] with a constant F padded to degree one (F_1 = 0, so B = 0 and D = I).
pub fn realize(f: &PolyphaseMatrix) -> Result<Realization> {
    if f.degree() == 0 {
        build_abcd(&f.padded_to(1))
    } else {
        build_abcd(f)
    }
}

/// F(ξ) = A + Bξ(I − Dξ)⁻¹C for |ξ| < 1; the terminating series Σ B D^{j−1} C ξ^j otherwise.
pub fn transfer_eval(r: &Realization, xi: Complex64) -> Result<CMat> {
    if xi.norm() < 1.0 {
        let t = r.d.nrows();
        let lhs = linalg::identity(t) - &r.d * xi;
        let sol = lhs.lu().solve(&r.c).ok_or(Error::SingularResolvent(xi))?;
        if !linalg::is_finite(&sol) {
            return Err(Error::SingularResolvent(xi));
        }
        Ok(&r.a + &r.b * sol * xi)
    } else {
        let series = markov_coefficients(r, r.n);
        Ok(linalg::horner(&series, xi))
    }
}

/// A, B C, B D C, …, B D^{k−1} C.
fn markov_coefficients(r: &Realization, k: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(r.a.clone());
    let mut dc = r.c.clone();
    for _ in 0..k {
        out.push(&r.b * &dc);
        dc = &r.d * dc;
    }
    out
}

/// ‖B Dᴺ‖_F
pub fn nilpotency_residual(r: &Realization) -> f64 {
    linalg::frobenius(&(&r.b * linalg::matpow(&r.d, r.n)))
}

/// Taylor coefficients F_0 = A, F_j = B D^{j−1} C of the transfer function.
pub fn taylor_masks(r: &Realization, tol: f64) -> Result<PolyphaseMatrix> {
    let nil = nilpotency_residual(r);
    if nil >= tol {
        return Err(Error::NotNilpotent(nil));
    }
    PolyphaseMatrix::new(r.m, markov_coefficients(r, r.n))
}

/// max over seeded disk points of ‖F(ξ) − A − ξBℓ_N(ξ)‖_F and ‖ℓ_N(ξ) − C − ξDℓ_N(ξ)‖_F.
pub fn state_equation_residual(r: &Realization, f: &PolyphaseMatrix, samples: usize, seed: u64) -> Result<f64> {
    let ell = qmf::build_ell(f)?;
    if ell.degree() != r.n || f.m() != r.m {
        return Err(Error::dims("realization and polyphase matrix disagree in M or N"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let xi = linalg::random_disk_point(&mut rng, DISK_RADIUS);
        worst = worst.max(state_equation_at(r, f, &ell, xi));
    }
    Ok(worst)
}

pub fn state_equation_defect(r: &Realization, f: &PolyphaseMatrix, xi: Complex64) -> Result<f64> {
    let ell = qmf::build_ell(f)?;
    Ok(state_equation_at(r, f, &ell, xi))
}

fn state_equation_at(r: &Realization, f: &PolyphaseMatrix, ell: &qmf::EllMap, xi: Complex64) -> f64 {
    let l = ell.eval(xi);
    let top = f.eval(xi) - &r.a - &r.b * &l * xi;
    let bottom = &l - &r.c - &r.d * &l * xi;
    linalg::frobenius(&top).max(linalg::frobenius(&bottom))
}

/// max over seeded disk points of ‖transfer_eval(ξ) − F(ξ)‖ with Horner evaluation as reference.
pub fn transfer_vs_horner(r: &Realization, f: &PolyphaseMatrix, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let xi = linalg::random_disk_point(&mut rng, DISK_RADIUS);
        let t = transfer_eval(r, xi)?;
        worst = worst.max(linalg::frobenius(&(t - f.eval(xi))));
    }
    Ok(worst)
}
