//! Splicing two maps into one on the product's affine chart: the combined
//! point's period is the lcm of the two periods.

use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::form::HomogeneousForm;
use crate::map::PolynomialMap;
use crate::point::ProjectivePoint;

/// `left` on P^N and `right` on P^M become one map on P^(N+M). Both charts
/// share the last variable, so no dehomogenization is needed.
pub fn product_map(left: &PolynomialMap, right: &PolynomialMap) -> Result<PolynomialMap> {
    if left.degree() != right.degree() {
        return Err(Error::DegreeMismatch { expected: left.degree(), found: right.degree() });
    }
    let (n, m) = (left.dimension(), right.dimension());
    let total = n + m;
    let left_vars: Vec<usize> = (0..n).chain([total]).collect();
    let right_vars: Vec<usize> = (n..total).chain([total]).collect();
    let leading = left
        .leading()
        .iter()
        .map(|f| f.remap(total, &left_vars))
        .chain(right.leading().iter().map(|f| f.remap(total, &right_vars)))
        .collect();
    PolynomialMap::from_leading(total, left.degree(), leading)
}

/// Concatenates the affine parts of two chart points.
pub fn product_point(left: &ProjectivePoint, right: &ProjectivePoint) -> Result<ProjectivePoint> {
    let mut coords = left.affine_part()?.to_vec();
    coords.extend_from_slice(right.affine_part()?);
    coords.push(num_traits::One::one());
    ProjectivePoint::normalize(coords)
}

pub fn combined_period(n: usize, m: usize) -> usize {
    n.lcm(&m)
}

/// Inverse of [`product_map`]: splits a map on P^T into factors on P^N and
/// P^(T-N). Fails with the index of the first coordinate that mixes blocks.
pub fn split_map(map: &PolynomialMap, left_dimension: usize) -> Result<(PolynomialMap, PolynomialMap)> {
    let total = map.dimension();
    if left_dimension == 0 || left_dimension >= total {
        return Err(Error::InvalidDimension(left_dimension));
    }
    let extract = |coords: core::ops::Range<usize>, lo: usize| -> Result<Vec<HomogeneousForm>> {
        let width = coords.len();
        let mut mapping = alloc::vec![0; total + 1];
        for v in 0..width {
            mapping[lo + v] = v;
        }
        mapping[total] = width;
        let mut out = Vec::new();
        for i in coords {
            let f = &map.coordinates()[i];
            let foreign = f.support().iter().enumerate().any(|(v, &used)| used && v != total && !(lo..lo + width).contains(&v));
            if foreign {
                return Err(Error::NotSplittable(i));
            }
            out.push(f.remap(width, &mapping));
        }
        Ok(out)
    };
    let left = extract(0..left_dimension, 0)?;
    let right = extract(left_dimension..total, left_dimension)?;
    Ok((
        PolynomialMap::from_leading(left_dimension, map.degree(), left)?,
        PolynomialMap::from_leading(total - left_dimension, map.degree(), right)?,
    ))
}
