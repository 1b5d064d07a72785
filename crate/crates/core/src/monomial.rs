//! Monomials in `x_0, ..., x_N` and the canonical order on them.
//!
//! The order compares exponents starting from the last variable, so
//! `x_N > x_{N-1} > ... > x_0`, and a monomial with a larger power of `x_N`
//! is larger. Sorting descending puts `x_N^d` first; this is the column order
//! of the Macaulay matrix and the term order of serialized forms.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Pow};

use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial { exponents: vec![0; num_vars] }
    }

    /// `x_var^power` in `num_vars` variables.
    pub fn power(num_vars: usize, var: usize, power: u32) -> Self {
        let mut m = Monomial::one(num_vars);
        m.exponents[var] = power;
        m
    }

    /// `x_j * x_k` (`x_j^2` when `j == k`).
    pub fn quadratic(num_vars: usize, j: usize, k: usize) -> Self {
        let mut m = Monomial::one(num_vars);
        m.exponents[j] += 1;
        m.exponents[k] += 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.num_vars(), other.num_vars());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents.iter().zip(&other.exponents).all(|(a, b)| a <= b)
    }

    pub fn eval(&self, coords: &[Rational]) -> Rational {
        let mut acc = Rational::one();
        for (x, &e) in coords.iter().zip(&self.exponents) {
            if e > 0 {
                acc *= Pow::pow(x, e);
            }
        }
        acc
    }

    /// Moves exponent `v` to slot `mapping[v]` in a monomial of `num_vars`
    /// variables. Colliding targets add up.
    pub fn remap(&self, num_vars: usize, mapping: &[usize]) -> Monomial {
        let mut out = vec![0; num_vars];
        for (v, &e) in self.exponents.iter().enumerate() {
            out[mapping[v]] += e;
        }
        Monomial { exponents: out }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exponents
            .len()
            .cmp(&other.exponents.len())
            .then_with(|| self.exponents.iter().rev().cmp(other.exponents.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", v)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// All monomials of total degree `degree` in `num_vars` variables, largest
/// first in the canonical order.
pub fn monomials_of_degree(num_vars: usize, degree: usize) -> Vec<Monomial> {
    fn fill(slot: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if slot == 0 {
            cur[0] = left;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[slot] = e;
            fill(slot - 1, left - e, cur, out);
        }
        cur[slot] = 0;
    }
    let mut out = Vec::new();
    if num_vars == 0 {
        if degree == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return out;
    }
    let mut cur = vec![0; num_vars];
    fill(num_vars - 1, degree as u32, &mut cur, &mut out);
    out
}

/// `C(n, k)` without overflow for the sizes used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_puts_last_variable_first() {
        let ms = monomials_of_degree(3, 2);
        let text: Vec<_> = ms.iter().map(|m| alloc::format!("{}", m)).collect();
        assert_eq!(text, ["x2^2", "x1*x2", "x0*x2", "x1^2", "x0*x1", "x0^2"]);
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn counts_match_binomials() {
        for n in 1..6 {
            for d in 0..6 {
                assert_eq!(monomials_of_degree(n, d).len(), binomial(n + d - 1, d));
            }
        }
        assert_eq!(binomial(10, 6), 210);
        assert_eq!(binomial(8, 4), 70);
    }

    #[test]
    fn eval_and_mul() {
        use crate::rational::int;
        let m = Monomial::quadratic(2, 0, 1);
        assert_eq!(m.eval(&[int(2), int(3)]), int(6));
        assert_eq!(m.mul(&m), Monomial::new(vec![2, 2]));
        assert!(m.divides(&Monomial::new(vec![2, 1])));
        assert_eq!(Monomial::new(vec![1, 2]).remap(4, &[1, 3]), Monomial::new(vec![0, 1, 0, 2]));
    }
}
