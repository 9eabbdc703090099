#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use formalflows::{FormalMap, LinearPart, Monomial, Ring, Series};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A small coefficient: an integer in [-3, 3], or over Q sometimes a
/// fraction with denominator at most 3.
pub fn small_coeff(ring: Ring, rng: &mut ChaCha8Rng) -> formalflows::Elem {
    let n: i64 = rng.gen_range(-3..=3);
    if ring == Ring::Q && rng.gen_bool(0.25) {
        let d: i64 = rng.gen_range(2..=3);
        ring.from_rational(&q(n, d)).unwrap()
    } else {
        ring.from_integer(n)
    }
}

/// Nonlinear terms of degree 2..=cap with roughly the given density.
pub fn random_higher_terms(ring: Ring, dim: usize, cap: u32, density: f64, rng: &mut ChaCha8Rng) -> Vec<Series> {
    (0..dim)
        .map(|_| {
            let mut terms = Vec::new();
            for m in Monomial::up_to_degree(dim, 2, cap) {
                if rng.gen_bool(density) {
                    terms.push((m, small_coeff(ring, rng)));
                }
            }
            Series::from_terms(ring, dim, cap, terms).unwrap()
        })
        .collect()
}

/// `1 + h` with random `h` of lower degree at least 2.
pub fn random_tangent(ring: Ring, dim: usize, cap: u32, rng: &mut ChaCha8Rng) -> FormalMap {
    let higher = random_higher_terms(ring, dim, cap, 0.5, rng);
    let comps = higher.iter().enumerate().map(|(i, h)| Series::var(ring, dim, cap, i).add(h).unwrap()).collect();
    FormalMap::new(comps).unwrap()
}

/// A map whose linear part is invertible over the ring: a product of a
/// random unipotent matrix and a diagonal of units.
pub fn random_invertible(ring: Ring, dim: usize, cap: u32, rng: &mut ChaCha8Rng) -> FormalMap {
    let units: Vec<i64> = match ring.characteristic() {
        0 if ring == Ring::Z => vec![1, -1],
        0 => vec![1, -1, 2, -3],
        c => (1..c as i64).collect(),
    };
    let rows: Vec<Vec<_>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Equal => ring.from_integer(units[rng.gen_range(0..units.len())]),
                    std::cmp::Ordering::Greater => ring.from_integer(rng.gen_range(-2..=2)),
                    std::cmp::Ordering::Less => ring.zero(),
                })
                .collect()
        })
        .collect();
    let lin = FormalMap::linear(&LinearPart::new(ring, rows).unwrap(), cap);
    let tangent = random_tangent(ring, dim, cap, rng);
    lin.compose(&tangent).unwrap()
}

pub fn map1(ring: Ring, cap: u32, coeffs: &[(u32, i64)]) -> FormalMap {
    let terms = coeffs.iter().map(|&(e, c)| (Monomial::new([e]), ring.from_integer(c)));
    FormalMap::new(vec![Series::from_terms(ring, 1, cap, terms).unwrap()]).unwrap()
}

/// The series of `x/(1+kx)` up to `cap`.
pub fn moebius(ring: Ring, cap: u32, k: i64) -> FormalMap {
    let terms = (1..=cap).map(|e| (Monomial::new([e]), ring.from_integer(-k).pow(e - 1)));
    FormalMap::new(vec![Series::from_terms(ring, 1, cap, terms).unwrap()]).unwrap()
}

/// Rational height at most `h`: `p/q` with `|p| <= h`, `1 <= q <= h`.
pub fn random_rational(h: i64, rng: &mut ChaCha8Rng) -> BigRational {
    q(rng.gen_range(-h..=h), rng.gen_range(1..=h))
}

/// Dense one-variable power series over Q, `coeffs[j]` the coefficient of
/// `x^j`, used as an oracle independent of the sparse library kernels.
pub mod dense {
    use super::*;

    pub type Poly = Vec<BigRational>;

    pub fn from_map(g: &FormalMap) -> Poly {
        assert_eq!(g.dim(), 1);
        let mut out = vec![BigRational::zero(); g.cap() as usize + 1];
        for (m, c) in g.component(0).terms() {
            out[m.degree() as usize] = c.to_rational().unwrap();
        }
        out
    }

    pub fn to_map(p: &Poly) -> FormalMap {
        let cap = (p.len() - 1) as u32;
        let terms =
            p.iter().enumerate().skip(1).map(|(e, c)| (Monomial::new([e as u32]), formalflows::Elem::Rat(c.clone())));
        FormalMap::new(vec![Series::from_terms(Ring::Q, 1, cap, terms).unwrap()]).unwrap()
    }

    pub fn mul(a: &Poly, b: &Poly) -> Poly {
        let n = a.len();
        let mut out = vec![BigRational::zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                out[i + j] += &a[i] * &b[j];
            }
        }
        out
    }

    /// `f(g(x))` by Horner's rule; `g` has no constant term.
    pub fn compose(f: &Poly, g: &Poly) -> Poly {
        let n = f.len();
        let mut acc = vec![BigRational::zero(); n];
        for c in f.iter().rev() {
            acc = mul(&acc, g);
            acc[0] += c;
        }
        acc
    }

    fn identity(n: usize) -> Poly {
        let mut id = vec![BigRational::zero(); n];
        if n > 1 {
            id[1] = BigRational::one();
        }
        id
    }

    /// `k` with `g o k = x`, solved one degree at a time.
    pub fn inverse(g: &Poly) -> Poly {
        let n = g.len();
        let a1 = g[1].clone();
        let mut k = identity(n);
        k[1] = a1.recip();
        for d in 2..n {
            k[d] = BigRational::zero();
            let cur = compose(g, &k);
            // the x^d coefficient of g o k is a1 * k_d + (terms in lower k_j)
            k[d] = -&cur[d] / &a1;
        }
        k
    }

    /// `h` tangent to the identity with `h o h = g`, one degree at a time.
    pub fn half_iterate(g: &Poly) -> Poly {
        let n = g.len();
        let mut h = identity(n);
        for d in 2..n {
            let cur = compose(&h, &h);
            // the x^d coefficient of h o h is 2 h_d + (terms in lower h_j)
            h[d] = (&g[d] - &cur[d]) / BigRational::from_integer(BigInt::from(2));
        }
        h
    }
}
