//! Resultants through the Sylvester matrix and Bareiss elimination.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Resultant of two monic nonconstant polynomials.
///
/// Computed as the determinant of the Sylvester matrix. Only `|r|` and its
/// valuations are meaningful: the sign follows the row convention of
/// [`sylvester_matrix`] and is not normalised.
pub fn resultant(f: &Polynomial, g: &Polynomial) -> Result<BigInt> {
    for h in [f, g] {
        if !h.is_monic() {
            return Err(Error::NotMonic);
        }
        if h.is_constant() {
            return Err(Error::Constant);
        }
    }
    Ok(bareiss_determinant(sylvester_matrix(f, g)))
}

/// The `(m + n) x (m + n)` Sylvester matrix: `n` shifted rows of `f`
/// followed by `m` shifted rows of `g`, coefficients in descending degree.
pub fn sylvester_matrix(f: &Polynomial, g: &Polynomial) -> Vec<Vec<BigInt>> {
    let m = f.degree().unwrap_or(0);
    let n = g.degree().unwrap_or(0);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (poly, shifts) in [(f, n), (g, m)] {
        let desc: Vec<BigInt> = poly.coeffs().iter().rev().cloned().collect();
        for s in 0..shifts {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in desc.iter().enumerate() {
                row[s + j] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Fraction-free Gaussian elimination. Every division is exact.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}
