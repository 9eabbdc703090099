//! The basic sum-function matrix `B = (rho_m(k))` over a prime field `F_c`.
//!
//! `B` is symmetric. Its top-left `c x c` block is the *template* `T`, and the
//! top-left `c^r x c^r` block `B_r` is self-similar: the `(i, j)` block of
//! `B_r` is `T[i][j] * B_{r-1}`. Equivalently, `rho_m(k)` is the product of
//! template entries over the base-`c` digits of `m` and `k`.
//!
//! `B_r` vanishes below its antidiagonal and has `+1, -1, +1, ...` on it, so
//! reversing its rows gives a lower-triangular matrix with unit diagonal:
//! `B_r` is invertible over any ring of characteristic `c`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};
use crate::sumfn;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrix {
    c: u64,
    r: u32,
    /// `entries[m][k] = rho_m(k) mod c`.
    entries: Vec<Vec<u64>>,
}

impl BlockMatrix {
    pub fn characteristic(&self) -> u64 {
        self.c
    }

    pub fn level(&self) -> u32 {
        self.r
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, m: usize, k: usize) -> u64 {
        self.entries[m][k]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|m| (0..m).all(|k| self.entries[m][k] == self.entries[k][m]))
    }

    /// Zero at every `(m, k)` with `m + k >= c^r`.
    pub fn is_upper_left_triangular(&self) -> bool {
        let n = self.size();
        (0..n).all(|m| (n - m..n).all(|k| self.entries[m][k] == 0))
    }

    /// Rows of space-separated digits.
    pub fn render_grid(&self) -> String {
        let mut out = String::new();
        for row in &self.entries {
            let line: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// `B_2` in block form: the `(i, j)` block written as `aT` (or `T`, `0`).
    ///
    /// Fails unless the matrix has level 2 and every block is a multiple of
    /// the template.
    pub fn render_template_blocks(&self) -> Result<String> {
        if self.r != 2 {
            return Err(Error::InvalidArgument("template-block notation needs r = 2".into()));
        }
        let c = self.c as usize;
        let t = template(self.c)?;
        let mut out = String::new();
        for i in 0..c {
            let mut labels = Vec::with_capacity(c);
            for j in 0..c {
                let a = t.entries[i][j];
                let matches =
                    (0..c).all(|u| (0..c).all(|v| self.entries[i * c + u][j * c + v] == a * t.entries[u][v] % self.c));
                if !matches {
                    return Err(Error::VerificationFailed(format!("block ({i}, {j}) is not {a}T")));
                }
                labels.push(match a {
                    0 => "0".to_string(),
                    1 => "T".to_string(),
                    _ => format!("{a}T"),
                });
            }
            let _ = writeln!(out, "{}", labels.join(" "));
        }
        Ok(out)
    }
}

/// The `c x c` template `C(m + k, k) mod c`.
pub fn template(c: u64) -> Result<BlockMatrix> {
    block_matrix(c, 1)
}

/// `B_r`, with entries computed from exact binomials.
pub fn block_matrix(c: u64, r: u32) -> Result<BlockMatrix> {
    let ring = Ring::prime_field(c)?;
    let n = c.pow(r) as usize;
    let entries = (0..n as u64).map(|m| sumfn::rho_row(m, n, ring).iter().map(digit).collect()).collect();
    Ok(BlockMatrix { c, r, entries })
}

/// `B_r` built only from the template by the self-similar block rule.
pub fn block_matrix_self_similar(c: u64, r: u32) -> Result<BlockMatrix> {
    let t = template(c)?;
    let mut cur = vec![vec![1u64]];
    for _ in 0..r {
        let n = cur.len();
        let cu = c as usize;
        let mut next = vec![vec![0u64; n * cu]; n * cu];
        for i in 0..cu {
            for j in 0..cu {
                let a = t.entries[i][j];
                for u in 0..n {
                    for v in 0..n {
                        next[i * n + u][j * n + v] = a * cur[u][v] % c;
                    }
                }
            }
        }
        cur = next;
    }
    Ok(BlockMatrix { c, r, entries: cur })
}

/// `rho_m(k) mod c` as the product of template entries over the base-`c`
/// digits of `m` and `k`.
pub fn rho_product_formula(m: u64, k: u64, c: u64) -> Result<u64> {
    Ring::prime_field(c)?;
    let (mut m, mut k) = (m, k);
    let mut acc = 1u64;
    while m > 0 || k > 0 {
        acc = acc * small_binomial_mod(m % c + k % c, k % c, c) % c;
        if acc == 0 {
            return Ok(0);
        }
        m /= c;
        k /= c;
    }
    Ok(acc)
}

/// `C(n, j) mod c` for `j <= n < 2c`; zero once `n >= c`.
fn small_binomial_mod(n: u64, j: u64, c: u64) -> u64 {
    if n >= c {
        return 0;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % c as u128) as u64;
    let num = (n - j + 1..=n).fold(1, |acc, x| mul(acc, x % c));
    let den = (1..=j).fold(1, |acc, x| mul(acc, x % c));
    mul(num, pow_mod(den, c - 2, c))
}

fn pow_mod(mut b: u64, mut e: u64, c: u64) -> u64 {
    let mut acc = 1u64 % c;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % c as u128) as u64;
        }
        b = ((b as u128 * b as u128) % c as u128) as u64;
        e >>= 1;
    }
    acc
}

/// `rho_m(c^r - 1 - m)` for `0 <= m < c^r`; these alternate `1, -1, 1, ...`.
pub fn antidiagonal(c: u64, r: u32) -> Result<Vec<u64>> {
    let ring = Ring::prime_field(c)?;
    let n = c.pow(r);
    let diag: Vec<u64> = (0..n).map(|m| digit(&sumfn::rho_eval(m, n - 1 - m, ring))).collect();
    for (m, &v) in diag.iter().enumerate() {
        let expected = if m % 2 == 0 { 1 } else { c - 1 };
        if v != expected {
            return Err(Error::VerificationFailed(format!(
                "antidiagonal entry {m} of B_{r} in characteristic {c} is {v}"
            )));
        }
    }
    Ok(diag)
}

/// The unique `l` with `B_r l = values` over a ring of characteristic `c`.
///
/// Row `c^r - 1 - i` of `B_r` has its last nonzero entry `+-1` in column `i`,
/// so forward substitution over the reversed rows never divides.
pub fn solve_against_br(values: &[Elem], c: u64, r: u32) -> Result<Vec<Elem>> {
    let ring = Ring::prime_field(c)?;
    let n = c.pow(r) as usize;
    if values.len() != n {
        return Err(Error::InvalidArgument(format!(
            "expected {n} values for B_{r} in characteristic {c}, got {}",
            values.len()
        )));
    }
    if let Some(bad) = values.iter().find(|v| v.ring() != ring) {
        return Err(Error::RingMismatch { left: ring, right: bad.ring() });
    }
    let b = block_matrix(c, r)?;
    let mut lambda: Vec<Elem> = Vec::with_capacity(n);
    for i in 0..n {
        let row = &b.entries[n - 1 - i];
        let mut rhs = values[n - 1 - i].clone();
        for (k, l) in lambda.iter().enumerate() {
            if row[k] != 0 {
                rhs = &rhs - &(l * &ring.from_integer(row[k] as i64));
            }
        }
        // the pivot is +-1, its own inverse
        let pivot = ring.from_integer(row[i] as i64);
        lambda.push(&rhs * &pivot);
    }
    Ok(lambda)
}

/// `r` with `c^r = n`, if any.
pub(crate) fn log_exact(n: u64, c: u64) -> Option<u32> {
    let mut p = 1u64;
    let mut r = 0u32;
    while p < n {
        p = p.checked_mul(c)?;
        r += 1;
    }
    (p == n).then_some(r)
}

fn digit(e: &Elem) -> u64 {
    match e {
        Elem::Mod { value, .. } => *value,
        _ => unreachable!("block matrices live over prime fields"),
    }
}
