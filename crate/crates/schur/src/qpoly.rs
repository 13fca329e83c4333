//! Exact arithmetic in Z[q]: quantum integers, factorials, evaluation and
//! interpolation from integer point counts.
//!
//! Coefficients are arbitrary-precision integers throughout; interpolation
//! goes through exact rationals and fails hard on any non-integer
//! coefficient rather than rounding.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A polynomial in q with integer coefficients, stored in ascending degree
/// with no trailing zero. The zero polynomial has an empty coefficient list
/// (degree -1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![BigInt::from(c)])
    }

    /// The indeterminate q.
    pub fn q() -> Self {
        Self::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    /// q^k.
    pub fn q_power(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Ascending coefficients, canonical (no trailing zero).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }
}

/// The quantum integer [m] = q^{m-1} + ... + q + 1; [0] = 0.
pub fn quantum_int(m: u32) -> QPoly {
    QPoly::from_coeffs(vec![BigInt::one(); m as usize])
}

/// The quantum factorial [m]! = [m][m-1]...[1]; [0]! = 1.
pub fn quantum_factorial(m: u32) -> QPoly {
    let mut acc = QPoly::one();
    for k in 1..=m {
        acc = &acc * &quantum_int(k);
    }
    acc
}

/// The unique integer polynomial of degree <= degree_bound through the given
/// points. Uses Newton's divided differences over exact rationals; a
/// non-integer coefficient is an error (inconsistent counts or a violated
/// degree bound), never rounded.
pub fn interpolate(points: &[(i64, BigInt)], degree_bound: usize) -> Result<QPoly> {
    if points.len() < degree_bound + 1 {
        return Err(Error::InvalidInput(format!(
            "need {} points for degree bound {degree_bound}, got {}",
            degree_bound + 1,
            points.len()
        )));
    }
    let points = &points[..degree_bound + 1];
    let xs: Vec<BigRational> = points
        .iter()
        .map(|(x, _)| BigRational::from(BigInt::from(*x)))
        .collect();
    for (a, xa) in xs.iter().enumerate() {
        for xb in xs.iter().skip(a + 1) {
            if xa == xb {
                return Err(Error::InvalidInput("duplicate interpolation node".into()));
            }
        }
    }
    let mut diffs: Vec<BigRational> = points
        .iter()
        .map(|(_, y)| BigRational::from(y.clone()))
        .collect();
    // divided differences in place: diffs[k] becomes f[x_0..x_k]
    for level in 1..diffs.len() {
        for k in (level..diffs.len()).rev() {
            let num = &diffs[k] - &diffs[k - 1];
            let den = &xs[k] - &xs[k - level];
            diffs[k] = num / den;
        }
    }
    // expand the Newton form into monomial coefficients
    let mut coeffs = vec![BigRational::zero(); diffs.len()];
    let mut basis = vec![BigRational::one()]; // prod (x - x_j), j < k
    for (k, dk) in diffs.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            coeffs[i] += dk * b;
        }
        // basis *= (x - x_k)
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] += b;
            next[i] -= b * &xs[k];
        }
        basis = next;
    }
    let mut int_coeffs = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        if !c.is_integer() {
            return Err(Error::InconsistentCounts(format!(
                "non-integer interpolated coefficient {c}"
            )));
        }
        int_coeffs.push(c.to_integer());
    }
    Ok(QPoly::from_coeffs(int_coeffs))
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
