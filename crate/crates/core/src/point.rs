use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// A point of projective space, scaled so that its last nonzero coordinate
/// is 1. Equality of points is equality of these canonical vectors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProjectivePoint {
    coords: Vec<Rational>,
}

impl ProjectivePoint {
    /// Rescales `raw` so that its last nonzero entry is 1.
    pub fn normalize(mut raw: Vec<Rational>) -> Result<Self> {
        let pivot = raw.iter().rposition(|c| !c.is_zero()).ok_or(Error::AllZero)?;
        if !raw[pivot].is_one() {
            let inv = raw[pivot].recip();
            for c in raw.iter_mut().take(pivot + 1) {
                *c *= &inv;
            }
        }
        Ok(ProjectivePoint { coords: raw })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        ProjectivePoint::normalize(values.iter().map(|&v| crate::rational::int(v)).collect())
    }

    /// `[0, ..., 0, 1]` in P^dimension.
    pub fn base(dimension: usize) -> Self {
        let mut coords = alloc::vec![Rational::zero(); dimension + 1];
        coords[dimension] = Rational::one();
        ProjectivePoint { coords }
    }

    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn in_affine_chart(&self) -> bool {
        !self.coords[self.coords.len() - 1].is_zero()
    }

    /// First `dimension` coordinates when the point lies in the chart
    /// `x_N != 0` (where the canonical form has `x_N = 1`).
    pub fn affine_part(&self) -> Result<&[Rational]> {
        if !self.in_affine_chart() {
            return Err(Error::NotInChart);
        }
        Ok(&self.coords[..self.coords.len() - 1])
    }

    /// Largest numerator/denominator bit length among the coordinates.
    pub fn bit_height(&self) -> u64 {
        self.coords.iter().map(crate::rational::bit_height).max().unwrap_or(0)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(c))?;
        }
        f.write_str("]")
    }
}

/// Free-function form of [`ProjectivePoint::normalize`].
pub fn normalize(raw: Vec<Rational>) -> Result<ProjectivePoint> {
    ProjectivePoint::normalize(raw)
}
