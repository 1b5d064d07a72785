//! Forward iteration, cycle detection and primitive-period certificates.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::map::PolynomialMap;
use crate::point::ProjectivePoint;

/// Caps on orbit exploration. Heights of rational points can grow
/// doubly exponentially, so every step also checks coordinate size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitLimits {
    pub max_iters: usize,
    /// Largest admissible numerator/denominator bit length.
    pub max_bits: u64,
}

impl Default for OrbitLimits {
    fn default() -> Self {
        OrbitLimits { max_iters: 500, max_bits: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitOutcome {
    /// The start point came back after `period` steps.
    PeriodicReturn { period: usize },
    /// Some later point repeated: `tail` points lead into a cycle of length
    /// `cycle` that avoids the start.
    PreperiodicCycle { tail: usize, cycle: usize },
    Exhausted { max_iters: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord {
    pub start: ProjectivePoint,
    /// Distinct points visited, starting with `start`.
    pub points: Vec<ProjectivePoint>,
    pub outcome: OrbitOutcome,
}

fn step(map: &PolynomialMap, p: &ProjectivePoint, index: usize, limits: &OrbitLimits) -> Result<ProjectivePoint> {
    let next = map.evaluate(p)?;
    if next.bit_height() > limits.max_bits {
        return Err(Error::HeightExceeded { steps: index, max_bits: limits.max_bits });
    }
    Ok(next)
}

/// `map` applied `n` times.
pub fn iterate(map: &PolynomialMap, point: &ProjectivePoint, n: usize) -> Result<ProjectivePoint> {
    iterate_with(map, point, n, &OrbitLimits::default())
}

pub fn iterate_with(map: &PolynomialMap, point: &ProjectivePoint, n: usize, limits: &OrbitLimits) -> Result<ProjectivePoint> {
    let mut p = point.clone();
    for i in 0..n {
        p = step(map, &p, i + 1, limits)?;
    }
    Ok(p)
}

/// Iterates until the start recurs, another point recurs, or
/// `limits.max_iters` applications have been made.
pub fn detect_orbit(map: &PolynomialMap, point: &ProjectivePoint, limits: &OrbitLimits) -> Result<OrbitRecord> {
    if point.dimension() != map.dimension() {
        return Err(Error::DimensionMismatch { expected: map.dimension(), found: point.dimension() });
    }
    let mut seen: BTreeMap<ProjectivePoint, usize> = BTreeMap::new();
    seen.insert(point.clone(), 0);
    let mut points = alloc::vec![point.clone()];
    let mut current = point.clone();
    for i in 1..=limits.max_iters {
        current = step(map, &current, i, limits)?;
        if let Some(&first) = seen.get(&current) {
            let outcome = if first == 0 {
                OrbitOutcome::PeriodicReturn { period: i }
            } else {
                OrbitOutcome::PreperiodicCycle { tail: first, cycle: i - first }
            };
            return Ok(OrbitRecord { start: point.clone(), points, outcome });
        }
        seen.insert(current.clone(), i);
        points.push(current.clone());
    }
    Ok(OrbitRecord {
        start: point.clone(),
        points,
        outcome: OrbitOutcome::Exhausted { max_iters: limits.max_iters },
    })
}

/// Proof that `orbit[0]` has primitive period `period`: the `period` points
/// listed are pairwise distinct and the map sends the last back to the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodCertificate {
    pub period: usize,
    pub orbit: Vec<ProjectivePoint>,
}

pub fn assert_primitive_period(map: &PolynomialMap, point: &ProjectivePoint, n: usize) -> Result<PeriodCertificate> {
    assert_primitive_period_with(map, point, n, &OrbitLimits::default())
}

pub fn assert_primitive_period_with(
    map: &PolynomialMap,
    point: &ProjectivePoint,
    n: usize,
    limits: &OrbitLimits,
) -> Result<PeriodCertificate> {
    if n == 0 {
        return Err(Error::NotPeriodic(0));
    }
    if point.dimension() != map.dimension() {
        return Err(Error::DimensionMismatch { expected: map.dimension(), found: point.dimension() });
    }
    let mut orbit = alloc::vec![point.clone()];
    let mut current = point.clone();
    for k in 1..=n {
        current = step(map, &current, k, limits)?;
        if current == *point {
            return if k == n {
                Ok(PeriodCertificate { period: n, orbit })
            } else if n.is_multiple_of(k) {
                Err(Error::PeriodDivides(k))
            } else {
                Err(Error::NotPeriodic(n))
            };
        }
        orbit.push(current.clone());
    }
    Err(Error::NotPeriodic(n))
}
