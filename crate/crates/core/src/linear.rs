//! Square matrices over a coefficient ring: linear parts of formal maps.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

/// A `d x d` matrix; entry `(i, j)` of a linear part is the coefficient of
/// `x_j` in component `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearPart {
    ring: Ring,
    rows: Vec<Vec<Elem>>,
}

impl LinearPart {
    pub fn new(ring: Ring, rows: Vec<Vec<Elem>>) -> Result<LinearPart> {
        let d = rows.len();
        for row in &rows {
            if row.len() != d {
                return Err(Error::DimMismatch(d, row.len()));
            }
            for e in row {
                if e.ring() != ring {
                    return Err(Error::RingMismatch { left: ring, right: e.ring() });
                }
            }
        }
        Ok(LinearPart { ring, rows })
    }

    pub fn identity(ring: Ring, d: usize) -> LinearPart {
        let rows = (0..d).map(|i| (0..d).map(|j| if i == j { ring.one() } else { ring.zero() }).collect()).collect();
        LinearPart { ring, rows }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        *self == LinearPart::identity(self.ring, self.dim())
    }

    pub fn mul(&self, other: &LinearPart) -> Result<LinearPart> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring, right: other.ring });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        let d = self.dim();
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).fold(self.ring.zero(), |acc, k| &acc + &(&self.rows[i][k] * &other.rows[k][j])))
                    .collect()
            })
            .collect();
        Ok(LinearPart { ring: self.ring, rows })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Elem {
        let d = self.dim();
        if d == 0 {
            return self.ring.one();
        }
        let mut a = self.rows.clone();
        let mut sign_flip = false;
        let mut prev = self.ring.one();
        for k in 0..d {
            if a[k][k].is_zero() {
                match (k + 1..d).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign_flip = !sign_flip;
                    }
                    None => return self.ring.zero(),
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.exact_div(&prev).expect("Bareiss quotients are exact");
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[d - 1][d - 1].clone();
        if sign_flip {
            -det
        } else {
            det
        }
    }

    /// Invertible over the ring iff the determinant is a unit.
    pub fn is_invertible(&self) -> bool {
        self.determinant().is_unit()
    }

    /// Inverse via the adjugate divided by the determinant.
    pub fn inverse(&self) -> Result<LinearPart> {
        let det_inv = self.determinant().unit_inverse().map_err(|_| Error::NotInvertible(self.ring))?;
        let d = self.dim();
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        // adj(A)_{ij} = (-1)^{i+j} det(A with row j and column i removed)
                        let c = self.minor(j, i).determinant();
                        let c = if (i + j) % 2 == 1 { -c } else { c };
                        &c * &det_inv
                    })
                    .collect()
            })
            .collect();
        Ok(LinearPart { ring: self.ring, rows })
    }

    fn minor(&self, row: usize, col: usize) -> LinearPart {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != row)
            .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, e)| e.clone()).collect())
            .collect();
        LinearPart { ring: self.ring, rows }
    }

    /// Least `s <= bound` with `self^s = 1`.
    pub fn order_upto(&self, bound: u32) -> Option<u32> {
        let mut p = self.clone();
        for s in 1..=bound {
            if p.is_identity() {
                return Some(s);
            }
            p = p.mul(self).expect("same shape");
        }
        None
    }
}

impl fmt::Display for LinearPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(ring: Ring, rows: &[&[i64]]) -> LinearPart {
        LinearPart::new(ring, rows.iter().map(|r| r.iter().map(|&x| ring.from_integer(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn invertibility_depends_on_the_ring() {
        assert!(!mat(Ring::Z, &[&[2]]).is_invertible());
        assert!(mat(Ring::Q, &[&[2]]).is_invertible());
        let f5 = Ring::prime_field(5).unwrap();
        let m = mat(f5, &[&[1, 2], &[3, 4]]);
        assert_eq!(m.determinant(), f5.from_integer(3));
        assert!(m.is_invertible());
    }

    #[test]
    fn determinants() {
        assert_eq!(mat(Ring::Z, &[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]]).determinant(), Ring::Z.from_integer(-3));
        assert_eq!(mat(Ring::Z, &[&[1, 2], &[2, 4]]).determinant(), Ring::Z.zero());
        assert_eq!(mat(Ring::Z, &[&[0, 1], &[1, 0]]).determinant(), Ring::Z.from_integer(-1));
    }

    #[test]
    fn inverse_round_trip() {
        let m = mat(Ring::Z, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, mat(Ring::Z, &[&[1, -1], &[-1, 2]]));
        assert!(m.mul(&inv).unwrap().is_identity());
        assert_eq!(mat(Ring::Z, &[&[2]]).inverse(), Err(Error::NotInvertible(Ring::Z)));
    }

    #[test]
    fn orders() {
        assert_eq!(mat(Ring::Q, &[&[0, -1], &[1, 0]]).order_upto(10), Some(4));
        assert_eq!(mat(Ring::Q, &[&[-1]]).order_upto(10), Some(2));
        assert_eq!(mat(Ring::Q, &[&[2]]).order_upto(10), None);
        assert_eq!(LinearPart::identity(Ring::Q, 3).order_upto(1), Some(1));
    }
}
