use alloc::collections::BTreeMap;
use alloc::format;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::rational::{format_rational, Rational};

/// A homogeneous form of degree `degree` in `dimension + 1` variables, stored
/// sparsely. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HomogeneousForm {
    dimension: usize,
    degree: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl HomogeneousForm {
    pub fn zero(dimension: usize, degree: usize) -> Self {
        HomogeneousForm { dimension, degree, terms: BTreeMap::new() }
    }

    /// Builds a form from terms; repeated monomials are summed and zero sums
    /// dropped. Every monomial must have `dimension + 1` slots and total
    /// degree `degree`.
    pub fn from_terms<I>(dimension: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut form = HomogeneousForm::zero(dimension, degree);
        for (m, c) in terms {
            if m.num_vars() != dimension + 1 {
                return Err(Error::InvalidForm(format!(
                    "monomial {} has {} variables, expected {}",
                    m,
                    m.num_vars(),
                    dimension + 1
                )));
            }
            if m.degree() != degree {
                return Err(Error::InvalidForm(format!(
                    "monomial {} has degree {}, expected {}",
                    m,
                    m.degree(),
                    degree
                )));
            }
            form.add_term(m, c);
        }
        Ok(form)
    }

    /// `x_var^degree`.
    pub fn power(dimension: usize, var: usize, degree: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::power(dimension + 1, var, degree as u32), Rational::one());
        HomogeneousForm { dimension, degree, terms }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical order (largest monomial first).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter().rev()
    }

    pub fn eval(&self, coords: &[Rational]) -> Rational {
        debug_assert_eq!(coords.len(), self.dimension + 1);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * m.eval(coords);
        }
        acc
    }

    pub fn scale(&self, factor: &Rational) -> HomogeneousForm {
        if factor.is_zero() {
            return HomogeneousForm::zero(self.dimension, self.degree);
        }
        HomogeneousForm {
            dimension: self.dimension,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect(),
        }
    }

    pub fn mul_monomial(&self, r: &Monomial) -> HomogeneousForm {
        HomogeneousForm {
            dimension: self.dimension,
            degree: self.degree + r.degree(),
            terms: self.terms.iter().map(|(m, c)| (m.mul(r), c.clone())).collect(),
        }
    }

    /// Renames variable `v` to `mapping[v]` inside a space of dimension
    /// `new_dimension`.
    pub fn remap(&self, new_dimension: usize, mapping: &[usize]) -> HomogeneousForm {
        debug_assert_eq!(mapping.len(), self.dimension + 1);
        let mut out = HomogeneousForm::zero(new_dimension, self.degree);
        for (m, c) in &self.terms {
            out.add_term(m.remap(new_dimension + 1, mapping), c.clone());
        }
        out
    }

    /// Variables with a nonzero exponent in some term.
    pub fn support(&self) -> alloc::vec::Vec<bool> {
        let mut used = alloc::vec![false; self.dimension + 1];
        for m in self.terms.keys() {
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    used[v] = true;
                }
            }
        }
        used
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms().enumerate() {
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if mag.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), m)?;
            }
        }
        Ok(())
    }
}

/// Evaluates a form at a coordinate vector; thin wrapper over
/// [`HomogeneousForm::eval`] that checks the length.
pub fn eval_form(form: &HomogeneousForm, coords: &[Rational]) -> Result<Rational> {
    if coords.len() != form.dimension() + 1 {
        return Err(Error::DimensionMismatch { expected: form.dimension() + 1, found: coords.len() });
    }
    Ok(form.eval(coords))
}
