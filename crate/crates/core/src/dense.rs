//! Dense complex matrices for the floating-point paths (verification,
//! approximate synthesis). Exact synthesis never goes through here.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type Matrix = DMatrix<Complex64>;

/// Largest qubit count accepted by dense constructions.
pub const DENSE_LIMIT: usize = 10;

pub fn check_dense_limit(what: &'static str, n: usize) -> Result<()> {
    if n > DENSE_LIMIT {
        return Err(Error::SizeLimit {
            what,
            n,
            limit: DENSE_LIMIT,
        });
    }
    Ok(())
}

/// Qubit count of a square `2^n x 2^n` matrix.
pub fn qubits_of(u: &Matrix) -> Result<usize> {
    let (rows, cols) = u.shape();
    if rows != cols || rows == 0 || !rows.is_power_of_two() {
        return Err(Error::NotSquare { rows, cols });
    }
    Ok(rows.trailing_zeros() as usize)
}

pub fn identity(n: usize) -> Matrix {
    let d = 1usize << n;
    Matrix::identity(d, d)
}

/// Largest entrywise deviation of `u^dagger u` from the identity.
pub fn unitarity_error(u: &Matrix) -> f64 {
    let prod = u.adjoint() * u;
    let d = prod.nrows();
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub fn check_unitary(u: &Matrix, tol: f64) -> Result<usize> {
    let n = qubits_of(u)?;
    let err = unitarity_error(u);
    if err > tol {
        return Err(Error::NotUnitary(err));
    }
    Ok(n)
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let d = 1usize << n;
    let g = Matrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Single-qubit z-rotation `diag(e^{-i t/2}, e^{i t/2})`.
pub fn rz(theta: f64) -> Matrix {
    let mut m = Matrix::zeros(2, 2);
    m[(0, 0)] = Complex64::from_polar(1.0, -theta / 2.0);
    m[(1, 1)] = Complex64::from_polar(1.0, theta / 2.0);
    m
}

/// Single-qubit `T = diag(1, e^{i pi/4})`.
pub fn t_gate() -> Matrix {
    let mut m = Matrix::identity(2, 2);
    m[(1, 1)] = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    m
}

/// Two-qubit controlled-S `diag(1, 1, 1, i)`.
pub fn cs_gate() -> Matrix {
    let mut m = Matrix::identity(4, 4);
    m[(3, 3)] = Complex64::new(0.0, 1.0);
    m
}

/// Largest entrywise difference.
pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
