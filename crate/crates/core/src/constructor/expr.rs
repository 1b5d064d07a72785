use alloc::collections::BTreeMap;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::monomial::Monomial;
use crate::rational::{format_rational, Rational};

/// The unknown `c_i(j,k)`: coefficient of `x_j x_k` (`j <= k`) in leading
/// coordinate `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoefficientId {
    pub coordinate: usize,
    pub j: usize,
    pub k: usize,
}

impl CoefficientId {
    pub fn new(coordinate: usize, j: usize, k: usize) -> Self {
        let (j, k) = if j <= k { (j, k) } else { (k, j) };
        CoefficientId { coordinate, j, k }
    }

    pub fn monomial(&self, dimension: usize) -> Monomial {
        Monomial::quadratic(dimension + 1, self.j, self.k)
    }

    /// Every unknown of a degree-2 map on P^dimension, `N (N+1)(N+2)/2` of
    /// them (coordinate N is fixed).
    pub fn all(dimension: usize) -> impl Iterator<Item = CoefficientId> {
        (0..dimension).flat_map(move |i| {
            (0..=dimension).flat_map(move |j| (j..=dimension).map(move |k| CoefficientId::new(i, j, k)))
        })
    }
}

impl fmt::Display for CoefficientId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}({},{})", self.coordinate, self.j, self.k)
    }
}

/// `constant + sum a_u * u` over not-yet-fixed unknowns `u`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CoefficientExpression {
    constant: Rational,
    linear: BTreeMap<CoefficientId, Rational>,
}

impl CoefficientExpression {
    pub fn constant(value: Rational) -> Self {
        CoefficientExpression { constant: value, linear: BTreeMap::new() }
    }

    pub fn variable(id: CoefficientId) -> Self {
        let mut linear = BTreeMap::new();
        linear.insert(id, Rational::one());
        CoefficientExpression { constant: Rational::zero(), linear }
    }

    pub fn from_parts<I>(constant: Rational, terms: I) -> Self
    where
        I: IntoIterator<Item = (CoefficientId, Rational)>,
    {
        let mut e = CoefficientExpression::constant(constant);
        for (id, a) in terms {
            e.add_linear(id, a);
        }
        e
    }

    fn add_linear(&mut self, id: CoefficientId, a: Rational) {
        if a.is_zero() {
            return;
        }
        let slot = self.linear.entry(id).or_insert_with(Rational::zero);
        *slot += a;
        if slot.is_zero() {
            self.linear.remove(&id);
        }
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.linear.is_empty()
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        self.is_constant().then_some(&self.constant)
    }

    /// Multiplier of `id` (the partial derivative).
    pub fn coefficient_of(&self, id: &CoefficientId) -> Rational {
        self.linear.get(id).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn unknowns(&self) -> impl Iterator<Item = (&CoefficientId, &Rational)> + '_ {
        self.linear.iter()
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &CoefficientExpression, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        self.constant += &other.constant * factor;
        for (id, a) in &other.linear {
            self.add_linear(*id, a * factor);
        }
    }

    /// Replaces the unknown `id` by `value`.
    pub fn substitute(&mut self, id: &CoefficientId, value: &CoefficientExpression) {
        if let Some(a) = self.linear.remove(id) {
            self.add_scaled(value, &a);
        }
    }

    /// Solves `self == target` for `id`, returning the expression it must
    /// equal. `None` when `id` has zero multiplier.
    pub fn solve_for(&self, id: &CoefficientId, target: &Rational) -> Option<CoefficientExpression> {
        let a = self.linear.get(id)?;
        let inv = a.recip();
        let mut rest = CoefficientExpression::constant((target - &self.constant) * &inv);
        for (other, b) in &self.linear {
            if other != id {
                rest.add_linear(*other, -(b * &inv));
            }
        }
        Some(rest)
    }
}

impl fmt::Display for CoefficientExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.constant.is_zero() || self.linear.is_empty() {
            f.write_str(&format_rational(&self.constant))?;
            wrote = true;
        }
        for (id, a) in &self.linear {
            let mag = a.abs();
            if wrote {
                f.write_str(if a.is_negative() { " - " } else { " + " })?;
            } else if a.is_negative() {
                f.write_str("-")?;
            }
            if !mag.is_one() {
                write!(f, "{}*", format_rational(&mag))?;
            }
            write!(f, "{}", id)?;
            wrote = true;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use alloc::string::ToString;

    #[test]
    fn counts_unknowns() {
        assert_eq!(CoefficientId::all(1).count(), 3);
        assert_eq!(CoefficientId::all(3).count(), 3 * 4 * 5 / 2);
    }

    #[test]
    fn solve_with_remaining_unknown() {
        // a + b + 1 = 2  =>  b = 1 - a
        let a = CoefficientId::new(0, 0, 0);
        let b = CoefficientId::new(0, 0, 1);
        let e = CoefficientExpression::from_parts(int(1), [(a, int(1)), (b, int(1))]);
        let sol = e.solve_for(&b, &int(2)).unwrap();
        assert_eq!(sol, CoefficientExpression::from_parts(int(1), [(a, int(-1))]));
        assert_eq!(sol.to_string(), "1 - c0(0,0)");

        // 4a + 2b + 1 with b = 1 - a gives 2a + 3
        let mut e = CoefficientExpression::from_parts(int(1), [(a, int(4)), (b, int(2))]);
        e.substitute(&b, &sol);
        assert_eq!(e, CoefficientExpression::from_parts(int(3), [(a, int(2))]));
        assert_eq!(e.solve_for(&a, &int(0)).unwrap().as_constant(), Some(&rat(-3, 2)));
        assert!(e.solve_for(&b, &int(0)).is_none());
    }
}
