//! Small dense complex matrix helpers shared by every module.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

pub const SQRT2: f64 = std::f64::consts::SQRT_2;
pub const HALF_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

/// Real matrix from row-major data.
pub fn from_real_rows(rows: usize, cols: usize, data: &[f64]) -> CMat {
    assert_eq!(data.len(), rows * cols);
    CMat::from_fn(rows, cols, |i, j| re(data[i * cols + j]))
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// ‖X*X − I‖_F.
pub fn unitarity_residual(x: &CMat) -> f64 {
    assert!(x.is_square(), "unitarity_residual needs a square matrix");
    let n = x.nrows();
    frobenius(&(x.adjoint() * x - identity(n)))
}

/// Max of ‖P² − P‖_F and ‖P* − P‖_F.
pub fn projection_residual(p: &CMat) -> f64 {
    let idem = frobenius(&(p * p - p));
    let herm = frobenius(&(p.adjoint() - p));
    idem.max(herm)
}

pub fn block(m: &CMat, bi: usize, bj: usize, rows: usize, cols: usize) -> CMat {
    m.view((bi * rows, bj * cols), (rows, cols)).into_owned()
}

pub fn set_block(m: &mut CMat, bi: usize, bj: usize, b: &CMat) {
    let (r, c) = b.shape();
    m.view_mut((bi * r, bj * c), (r, c)).copy_from(b);
}

/// Assemble a block matrix from a row-major grid of equally sized blocks.
pub fn from_blocks(grid: &[Vec<CMat>]) -> CMat {
    let br = grid.len();
    let bc = grid[0].len();
    let (r, c) = grid[0][0].shape();
    let mut out = zeros(br * r, bc * c);
    for (i, row) in grid.iter().enumerate() {
        assert_eq!(row.len(), bc);
        for (j, b) in row.iter().enumerate() {
            set_block(&mut out, i, j, b);
        }
    }
    out
}

pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = zeros(ar + br, ac + bc);
    out.view_mut((0, 0), (ar, ac)).copy_from(a);
    out.view_mut((ar, ac), (br, bc)).copy_from(b);
    out
}

pub fn matpow(m: &CMat, k: usize) -> CMat {
    let mut out = identity(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Horner evaluation of Σ coeffs[j] ξ^j.
pub fn horner(coeffs: &[CMat], xi: Complex64) -> CMat {
    let mut acc = zeros(coeffs[0].nrows(), coeffs[0].ncols());
    for c in coeffs.iter().rev() {
        acc = acc * xi + c;
    }
    acc
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn random_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| Complex64::new(gauss(rng), gauss(rng)))
}

/// Haar-distributed unitary from the QR factorization of a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = random_gaussian_matrix(rng, n, n);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { re(1.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Hermitian projection of the given rank onto a random subspace.
pub fn random_projection<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> CMat {
    assert!(rank <= n);
    let q = random_unitary(rng, n);
    let cols = q.columns(0, rank).into_owned();
    &cols * cols.adjoint()
}

/// Uniform point in the open disk of the given radius.
pub fn random_disk_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    Complex64::from_polar(r, theta)
}

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller; u1 in (0, 1]
    let u1 = 1.0 - rng.gen::<f64>();
    let u2 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub(crate) fn check_square(m: &CMat, n: usize, what: &str) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::dims(format!(
            "{what} is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Complex matrix as rows of `[re, im]` pairs.
pub fn encode_matrix(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn decode_matrix(rows: &[Vec<[f64; 2]>], nrows: usize, ncols: usize, what: &str) -> Result<CMat> {
    if rows.len() != nrows {
        return Err(Error::format(format!(
            "{what}: expected {nrows} rows, found {}",
            rows.len()
        )));
    }
    let mut out = zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::format(format!(
                "{what}: row {i} has {} entries, expected {ncols}",
                row.len()
            )));
        }
        for (j, z) in row.iter().enumerate() {
            if !z[0].is_finite() || !z[1].is_finite() {
                return Err(Error::format(format!("{what}: non-finite entry at ({i}, {j})")));
            }
            out[(i, j)] = Complex64::new(z[0], z[1]);
        }
    }
    Ok(out)
}
