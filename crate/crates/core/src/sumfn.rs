//! Sum-functions: `K`-linear combinations of the basic functions
//! `rho_m(k) = C(m + k, m)` (the binomial mapped into `K`).
//!
//! `rho_0 = 1` and `rho_{m+1}(k) = rho_m(0) + ... + rho_m(k)`. In
//! characteristic zero the sum-functions are the integer-valued polynomials
//! over `K`; in characteristic `c` they are exactly the functions whose least
//! period is a power of `c`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::blockmatrix;
use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

/// Exact binomial coefficient `C(n, r)`.
pub fn binomial(n: u64, r: u64) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 1..=r {
        acc = acc * BigInt::from(n - r + i) / BigInt::from(i);
    }
    acc
}

/// `rho_m(k)` in `ring`, from the exact binomial `C(m + k, m)`.
pub fn rho_eval(m: u64, k: u64, ring: Ring) -> Elem {
    ring.from_bigint(&binomial(m + k, m))
}

/// `rho_m(0), ..., rho_m(len - 1)`.
pub fn rho_row(m: u64, len: usize, ring: Ring) -> Vec<Elem> {
    let mut out = Vec::with_capacity(len);
    let mut b = BigInt::one();
    for k in 0..len as u64 {
        if k > 0 {
            // C(m+k, m) = C(m+k-1, m) (m+k) / k
            b = b * BigInt::from(m + k) / BigInt::from(k);
        }
        out.push(ring.from_bigint(&b));
    }
    out
}

/// Coefficient vector `(l_0, ..., l_m)` of `sum_i l_i rho_i`.
///
/// The last coefficient is nonzero; the zero function has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumFunction {
    ring: Ring,
    coeffs: Vec<Elem>,
}

impl SumFunction {
    pub fn new(ring: Ring, mut coeffs: Vec<Elem>) -> Result<SumFunction> {
        if let Some(bad) = coeffs.iter().find(|c| c.ring() != ring) {
            return Err(Error::RingMismatch { left: ring, right: bad.ring() });
        }
        while coeffs.last().is_some_and(Elem::is_zero) {
            coeffs.pop();
        }
        Ok(SumFunction { ring, coeffs })
    }

    pub fn zero(ring: Ring) -> SumFunction {
        SumFunction { ring, coeffs: Vec::new() }
    }

    /// The basic function `rho_m`.
    pub fn basis(ring: Ring, m: usize) -> SumFunction {
        let mut coeffs = vec![ring.zero(); m + 1];
        coeffs[m] = ring.one();
        SumFunction { ring, coeffs }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last nonzero coefficient; `None` for the zero function
    /// (degree minus infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, k: u64) -> Elem {
        let mut acc = self.ring.zero();
        let mut rho = BigInt::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                // rho_i(k) = rho_{i-1}(k) (i + k) / i
                rho = rho * BigInt::from(i as u64 + k) / BigInt::from(i as u64);
            }
            if !c.is_zero() {
                acc = &acc + &(c * &self.ring.from_bigint(&rho));
            }
        }
        acc
    }

    /// `h(0), ..., h(len - 1)`.
    pub fn values(&self, len: usize) -> Vec<Elem> {
        (0..len as u64).map(|k| self.eval(k)).collect()
    }

    pub fn add(&self, other: &SumFunction) -> Result<SumFunction> {
        self.check_ring(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.ring.zero();
        let coeffs =
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)).collect();
        SumFunction::new(self.ring, coeffs)
    }

    /// Pointwise product, computed by evaluation and refitting.
    pub fn mul(&self, other: &SumFunction) -> Result<SumFunction> {
        self.check_ring(other)?;
        let (Some(a), Some(b)) = (self.degree(), other.degree()) else {
            return Ok(SumFunction::zero(self.ring));
        };
        let bound = a + b;
        let len = match self.ring.characteristic() {
            0 => bound + 1,
            c => {
                let mut n = 1usize;
                while n <= bound {
                    n *= c as usize;
                }
                n
            }
        };
        let values: Vec<Elem> = (0..len as u64).map(|k| &self.eval(k) * &other.eval(k)).collect();
        match self.ring.characteristic() {
            0 => fit_char0(self.ring, &values),
            _ => fit_charc(self.ring, &values),
        }
    }

    /// Least power of `c` that is a period of `k -> h(k)`.
    pub fn period(&self) -> Result<u64> {
        let c = self.ring.characteristic();
        if c == 0 {
            return Err(Error::NeedsCharPositive { op: "period_of", ring: self.ring });
        }
        let Some(deg) = self.degree() else { return Ok(1) };
        // rho_m has period c^r whenever m < c^r.
        let mut top = 1u64;
        let mut r = 0u32;
        while top <= deg as u64 {
            top *= c;
            r += 1;
        }
        let vals = self.values(top as usize);
        let is_period = |p: u64| (0..top).all(|k| vals[k as usize] == vals[((k + p) % top) as usize]);
        let mut best = top;
        for s in (0..r).rev() {
            let p = c.pow(s);
            if !is_period(p) {
                break;
            }
            best = p;
        }
        Ok(best)
    }

    fn check_ring(&self, other: &SumFunction) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring, right: other.ring });
        }
        Ok(())
    }
}

impl fmt::Display for SumFunction {
    /// `[l0, l1, ...]` in ring literal syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Characteristic zero: the unique `l_0..l_n` with `sum_j l_j rho_j(k) = values[k]`
/// for `k = 0..=n`.
///
/// Solves the Pascal system `C(k + j, j)` (determinant 1) exactly over `Q`,
/// then checks that every coefficient lies in the ring.
pub fn fit_char0(ring: Ring, values: &[Elem]) -> Result<SumFunction> {
    if ring.characteristic() != 0 {
        return Err(Error::NeedsCharZero { op: "fit_char0", ring });
    }
    let rhs = values
        .iter()
        .map(|v| {
            if v.ring() != ring {
                return Err(Error::RingMismatch { left: ring, right: v.ring() });
            }
            Ok(v.to_rational().expect("characteristic zero"))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = rhs.len();
    let matrix: Vec<Vec<BigRational>> =
        (0..n as u64).map(|k| (0..n as u64).map(|j| BigRational::from_integer(binomial(k + j, j))).collect()).collect();
    let lambda = solve_rational(matrix, rhs);
    let coeffs = lambda
        .iter()
        .enumerate()
        .map(|(index, l)| {
            ring.from_rational(l).map_err(|_| Error::NotASumFunction { ring, index, value: l.to_string() })
        })
        .collect::<Result<Vec<_>>>()?;
    SumFunction::new(ring, coeffs)
}

/// Characteristic `c`: the unique `l_0..l_{c^r - 1}` reproducing one full
/// period of length `c^r`.
pub fn fit_charc(ring: Ring, values: &[Elem]) -> Result<SumFunction> {
    let c = ring.characteristic();
    if c == 0 {
        return Err(Error::NeedsCharPositive { op: "fit_charc", ring });
    }
    let r = blockmatrix::log_exact(values.len() as u64, c).ok_or(Error::NotAPowerOf { len: values.len(), c })?;
    let lambda = blockmatrix::solve_against_br(values, c, r)?;
    SumFunction::new(ring, lambda)
}

/// Gaussian elimination over `Q` for a nonsingular square system.
fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero()).expect("nonsingular system");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        let pivot_row = a[col].clone();
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = &a[i][col] * &inv;
            for (aij, pj) in a[i][col..].iter_mut().zip(&pivot_row[col..]) {
                *aij -= &factor * pj;
            }
            let t = &factor * &b[col];
            b[i] -= t;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i].clone();
        for j in i + 1..n {
            s -= &a[i][j] * &x[j];
        }
        x[i] = s / &a[i][i];
    }
    x
}
