use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{c64, CMat, C64};

/// A dense complex square matrix acting on the ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    entries: CMat,
}

impl Operator {
    pub fn new(entries: CMat) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { entries })
    }

    /// Real row-major entries. Panics on ragged or non-square input.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "operator must be square");
        Self { entries: CMat::from_fn(n, n, |i, j| c64(rows[i][j], 0.0)) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { entries: CMat::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: CMat::identity(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.entries
    }

    pub fn into_matrix(self) -> CMat {
        self.entries
    }

    pub fn adjoint(&self) -> Operator {
        Operator { entries: self.entries.adjoint() }
    }

    pub fn scale(&self, s: C64) -> Operator {
        Operator { entries: &self.entries * s }
    }

    pub fn scale_real(&self, s: f64) -> Operator {
        Operator { entries: self.entries.scale(s) }
    }

    pub fn fro(&self) -> f64 {
        self.entries.norm()
    }

    pub(crate) fn wrap(entries: CMat) -> Self {
        debug_assert!(entries.is_square());
        Self { entries }
    }
}

impl From<Operator> for CMat {
    fn from(op: Operator) -> CMat {
        op.entries
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
                Operator { entries: &self.entries $op &rhs.entries }
            }
        }
        impl $trait<Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                &self $op &rhs
            }
        }
        impl $trait<&Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                &self $op rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { entries: -&self.entries }
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(Operator::new(CMat::zeros(0, 0)), Err(Error::EmptyMatrix)));
        assert!(matches!(Operator::new(CMat::zeros(2, 3)), Err(Error::NotSquare { .. })));
        let mut m = CMat::zeros(2, 2);
        m[(0, 1)] = c64(f64::NAN, 0.0);
        assert!(matches!(Operator::new(m), Err(Error::NonFinite)));
    }

    #[test]
    fn arithmetic() {
        let x = Operator::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let y = Operator::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let s = &x + &y;
        assert_eq!(s, Operator::from_real(&[&[1.0, 1.0], &[0.0, 0.0]]));
        assert_eq!(&y * &x, x);
        assert_eq!(&x * &x, Operator::zeros(2));
        assert_eq!(&(-&x) + &x, Operator::zeros(2));
    }
}
