use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::form::HomogeneousForm;
use crate::monomial::Monomial;
use crate::point::ProjectivePoint;
use crate::rational::Rational;

/// `[phi_0, ..., phi_{N-1}, x_N^d]`: N free forms plus the fixed last
/// coordinate.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolynomialMap {
    dimension: usize,
    degree: usize,
    coordinates: Vec<HomogeneousForm>,
}

impl PolynomialMap {
    /// Validates a full coordinate list (N+1 forms, last one `x_N^d`).
    pub fn new(coordinates: Vec<HomogeneousForm>) -> Result<Self> {
        let first = coordinates.first().ok_or_else(|| Error::InvalidMap("no coordinates".into()))?;
        let dimension = first.dimension();
        let degree = first.degree();
        if degree == 0 {
            return Err(Error::InvalidMap("degree must be positive".into()));
        }
        if coordinates.len() != dimension + 1 {
            return Err(Error::InvalidMap(format!(
                "{} coordinates for dimension {}",
                coordinates.len(),
                dimension
            )));
        }
        for f in &coordinates {
            if f.dimension() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: f.dimension() });
            }
            if f.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: f.degree() });
            }
        }
        if coordinates[dimension] != HomogeneousForm::power(dimension, dimension, degree) {
            return Err(Error::InvalidMap(format!("last coordinate must be x{}^{}", dimension, degree)));
        }
        Ok(PolynomialMap { dimension, degree, coordinates })
    }

    /// Appends `x_N^d` to the N leading forms.
    pub fn from_leading(dimension: usize, degree: usize, mut leading: Vec<HomogeneousForm>) -> Result<Self> {
        if leading.len() != dimension {
            return Err(Error::InvalidMap(format!("{} leading forms for dimension {}", leading.len(), dimension)));
        }
        for f in &leading {
            if f.dimension() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: f.dimension() });
            }
            if f.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: f.degree() });
            }
        }
        leading.push(HomogeneousForm::power(dimension, dimension, degree));
        PolynomialMap::new(leading)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coordinates(&self) -> &[HomogeneousForm] {
        &self.coordinates
    }

    /// The N forms before the fixed last coordinate.
    pub fn leading(&self) -> &[HomogeneousForm] {
        &self.coordinates[..self.dimension]
    }

    pub fn evaluate(&self, point: &ProjectivePoint) -> Result<ProjectivePoint> {
        if point.dimension() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, found: point.dimension() });
        }
        let image: Vec<Rational> = self.coordinates.iter().map(|f| f.eval(point.coords())).collect();
        ProjectivePoint::normalize(image).map_err(|_| Error::IndeterminatePoint)
    }

    /// Restriction to the chart `x_N = 1`.
    pub fn dehomogenize(&self) -> AffineMapRecord {
        let polynomials = self
            .leading()
            .iter()
            .map(|f| {
                let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
                for (m, c) in f.terms() {
                    let key = Monomial::new(m.exponents()[..self.dimension].to_vec());
                    let slot = terms.entry(key).or_insert_with(Rational::zero);
                    *slot += c;
                }
                terms.retain(|_, c| !c.is_zero());
                AffinePolynomial { variables: self.dimension, terms }
            })
            .collect();
        AffineMapRecord { dimension: self.dimension, degree: self.degree, polynomials }
    }
}

impl fmt::Display for PolynomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coordinates.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", c)?;
        }
        f.write_str("]")
    }
}

/// A (not necessarily homogeneous) polynomial in `variables` variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffinePolynomial {
    pub variables: usize,
    pub terms: BTreeMap<Monomial, Rational>,
}

impl AffinePolynomial {
    pub fn eval(&self, coords: &[Rational]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (m, c)| acc + c * m.eval(coords))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(&Monomial::new(exponents.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }
}

/// The N coordinate polynomials of a map on the chart `x_N = 1`, with the
/// ambient dimension and degree kept for rehomogenization.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineMapRecord {
    pub dimension: usize,
    pub degree: usize,
    pub polynomials: Vec<AffinePolynomial>,
}

impl AffineMapRecord {
    /// Multiplies each term by the power of `x_N` that brings it to degree
    /// `d`, and appends `x_N^d`.
    pub fn homogenize(&self) -> Result<PolynomialMap> {
        let forms = self
            .polynomials
            .iter()
            .map(|p| {
                let mut terms = Vec::with_capacity(p.terms.len());
                for (m, c) in &p.terms {
                    let deg = m.degree();
                    if deg > self.degree {
                        return Err(Error::DegreeMismatch { expected: self.degree, found: deg });
                    }
                    let mut e = m.exponents().to_vec();
                    e.push((self.degree - deg) as u32);
                    terms.push((Monomial::new(e), c.clone()));
                }
                HomogeneousForm::from_terms(self.dimension, self.degree, terms)
            })
            .collect::<Result<Vec<_>>>()?;
        PolynomialMap::from_leading(self.dimension, self.degree, forms)
    }

    /// Applies the affine map to a point of the chart.
    pub fn apply(&self, coords: &[Rational]) -> Vec<Rational> {
        self.polynomials.iter().map(|p| p.eval(coords)).collect()
    }
}

/// `phi_i = sum c_i(j,k) x_j x_k` helper: the degree-2 map whose leading
/// coordinate `i` has coefficient `coeff(i, j, k)` on `x_j x_k`, `j <= k`.
pub fn quadratic_map<F>(dimension: usize, mut coeff: F) -> PolynomialMap
where
    F: FnMut(usize, usize, usize) -> Rational,
{
    let leading = (0..dimension)
        .map(|i| {
            let mut terms = Vec::new();
            for j in 0..=dimension {
                for k in j..=dimension {
                    terms.push((Monomial::quadratic(dimension + 1, j, k), coeff(i, j, k)));
                }
            }
            HomogeneousForm::from_terms(dimension, 2, terms).expect("quadratic monomials are well formed")
        })
        .collect();
    PolynomialMap::from_leading(dimension, 2, leading).expect("leading forms share dimension and degree")
}

/// The identity-like squaring map `[x_0^d, ..., x_N^d]`.
pub fn power_map(dimension: usize, degree: usize) -> PolynomialMap {
    let coords = (0..=dimension).map(|v| HomogeneousForm::power(dimension, v, degree)).collect();
    PolynomialMap::new(coords).expect("power map is well formed")
}
