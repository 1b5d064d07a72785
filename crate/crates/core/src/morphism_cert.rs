//! Morphism test: the forms have no common nontrivial zero exactly when
//! their Macaulay matrix in degree `D = 1 + sum(d_i - 1)` has full column
//! rank, i.e. every monomial of degree `D` lies in the ideal they generate.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::constructor::{construct, period_bound, ConstructOptions, Seeded};
use crate::error::{Error, Result};
use crate::form::HomogeneousForm;
use crate::linalg::{exact_rank, integer_rows};
use crate::map::PolynomialMap;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::rational::Rational;

/// Rows are `r * F_i` for every monomial `r` of degree `D - d_i`; columns
/// are the monomials of degree `D`, both in descending canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacaulayMatrix {
    degree: usize,
    columns: Vec<Monomial>,
    rows: Vec<(usize, Monomial)>,
    entries: Vec<Vec<(usize, Rational)>>,
}

impl MacaulayMatrix {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    /// `(form index, multiplier)` per row.
    pub fn rows(&self) -> &[(usize, Monomial)] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    /// Nonzero entries of one row as `(column, value)`, columns ascending.
    pub fn row(&self, index: usize) -> &[(usize, Rational)] {
        &self.entries[index]
    }

    pub fn entry(&self, row: usize, column: usize) -> Rational {
        self.entries[row]
            .iter()
            .find(|(c, _)| *c == column)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.entries
            .iter()
            .map(|row| {
                let mut dense = alloc::vec![Rational::zero(); self.columns.len()];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect()
    }

    /// Dense integer matrix with each row scaled to clear denominators.
    pub fn to_integer_rows(&self) -> Vec<Vec<BigInt>> {
        integer_rows(&self.to_dense())
    }

    /// Exact rank; full rank modulo a large prime short-circuits the
    /// rational elimination.
    pub fn rank(&self) -> usize {
        exact_rank(self.to_integer_rows())
    }
}

pub fn build_macaulay(forms: &[HomogeneousForm]) -> Result<MacaulayMatrix> {
    let Some(first) = forms.first() else {
        return Err(Error::InvalidMap("no forms".into()));
    };
    let dimension = first.dimension();
    if forms.len() != dimension + 1 {
        return Err(Error::DimensionMismatch { expected: dimension + 1, found: forms.len() });
    }
    for f in forms {
        if f.dimension() != dimension {
            return Err(Error::DimensionMismatch { expected: dimension, found: f.dimension() });
        }
        if f.degree() == 0 {
            return Err(Error::InvalidForm("constant form".into()));
        }
    }
    let num_vars = dimension + 1;
    let degree = 1 + forms.iter().map(|f| f.degree() - 1).sum::<usize>();
    let columns = monomials_of_degree(num_vars, degree);
    let index: BTreeMap<&Monomial, usize> = columns.iter().enumerate().map(|(i, m)| (m, i)).collect();

    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        for r in monomials_of_degree(num_vars, degree - f.degree()) {
            let mut row: Vec<(usize, Rational)> =
                f.terms().map(|(m, c)| (index[&m.mul(&r)], c.clone())).collect();
            row.sort_by_key(|(c, _)| *c);
            entries.push(row);
            rows.push((i, r));
        }
    }
    Ok(MacaulayMatrix { degree, columns, rows, entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MorphismDecision {
    Morphism,
    CommonZeroExists,
}

impl MorphismDecision {
    /// Report label: `"morphism"` or `"common_zero"`.
    pub fn label(self) -> &'static str {
        match self {
            MorphismDecision::Morphism => "morphism",
            MorphismDecision::CommonZeroExists => "common_zero",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismCertificate {
    pub decision: MorphismDecision,
    pub rank: usize,
    pub rows: usize,
    pub columns: usize,
    pub degree: usize,
}

pub fn certify_forms(forms: &[HomogeneousForm]) -> Result<MorphismCertificate> {
    let m = build_macaulay(forms)?;
    let rank = m.rank();
    let decision = if rank == m.num_columns() { MorphismDecision::Morphism } else { MorphismDecision::CommonZeroExists };
    Ok(MorphismCertificate { decision, rank, rows: m.num_rows(), columns: m.num_columns(), degree: m.degree() })
}

pub fn is_morphism(map: &PolynomialMap) -> MorphismCertificate {
    certify_forms(map.coordinates()).expect("a valid map always has N+1 forms of one dimension")
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilySample {
    pub trials: usize,
    pub morphisms: usize,
    pub common_zero: usize,
    pub construction_failures: usize,
}

impl FamilySample {
    /// Morphisms among successfully constructed maps; `None` if there were none.
    pub fn fraction(&self) -> Option<(usize, usize)> {
        let certified = self.morphisms + self.common_zero;
        (certified > 0).then_some((self.morphisms, certified))
    }
}

/// Builds `trials` maps of maximal period on P^dimension with seeds
/// `seed, seed + 1, ...` and certifies each one.
pub fn sample_family_morphisms(dimension: usize, trials: usize, seed: u64) -> FamilySample {
    let mut out = FamilySample { trials, ..Default::default() };
    let period = period_bound(dimension);
    for t in 0..trials as u64 {
        let mut source = Seeded::new(seed.wrapping_add(t));
        match construct(dimension, period, &mut source, &ConstructOptions::default()) {
            Ok(c) => match is_morphism(&c.map).decision {
                MorphismDecision::Morphism => out.morphisms += 1,
                MorphismDecision::CommonZeroExists => out.common_zero += 1,
            },
            Err(_) => out.construction_failures += 1,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{power_map, quadratic_map};
    use crate::monomial::binomial;
    use crate::rational::int;

    #[test]
    fn shapes_follow_binomials() {
        for n in 1..=4 {
            let m = build_macaulay(power_map(n, 2).coordinates()).unwrap();
            assert_eq!(m.degree(), n + 2);
            assert_eq!(m.num_columns(), binomial(2 * n + 2, n + 2));
            assert_eq!(m.num_rows(), (n + 1) * binomial(2 * n, n));
        }
    }

    #[test]
    fn powers_are_morphisms() {
        for n in 1..=3 {
            assert_eq!(is_morphism(&power_map(n, 2)).decision, MorphismDecision::Morphism);
        }
    }

    #[test]
    fn shared_zero_detected() {
        // [x0^2, x0 x1, x2^2] vanish at [0, 1, 0].
        let map = quadratic_map(2, |i, j, k| int(((i, j, k) == (0, 0, 0) || (i, j, k) == (1, 0, 1)) as i64));
        let cert = is_morphism(&map);
        assert_eq!(cert.decision, MorphismDecision::CommonZeroExists);
        assert!(cert.rank < cert.columns);
    }

    #[test]
    fn rows_reproduce_products() {
        let map = quadratic_map(2, |i, j, k| int((i * 7 + j * 3 + k) as i64 - 5));
        let m = build_macaulay(map.coordinates()).unwrap();
        for (idx, (i, r)) in m.rows().iter().enumerate() {
            let product = map.coordinates()[*i].mul_monomial(r);
            for (c, col) in m.columns().iter().enumerate() {
                assert_eq!(m.entry(idx, c), product.coefficient(col));
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let forms = power_map(2, 2).coordinates()[..2].to_vec();
        assert!(matches!(build_macaulay(&forms), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn empty_sample() {
        assert_eq!(sample_family_morphisms(2, 0, 1), FamilySample::default());
    }
}
