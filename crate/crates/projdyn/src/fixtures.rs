//! Golden maps from the literature, embedded as canonical JSON.

use projdyn_core::morphism_cert::{is_morphism, MorphismDecision};
use projdyn_core::orbits::{assert_primitive_period_with, OrbitLimits};
use projdyn_core::products::split_map;
use projdyn_core::{PolynomialMap, ProjectivePoint};
use serde::{Deserialize, Serialize};

use crate::format::{to_canonical_string, FormatError, MapJson, PointJson};

pub const FIXTURE_IDS: [&str; 4] = ["sec1_p1_period3", "ex1_p2_period9", "ex2_p3_period24", "ex3_p4_period72"];

const SOURCES: [(&str, &str); 4] = [
    ("sec1_p1_period3", include_str!("../fixtures/sec1_p1_period3.json")),
    ("ex1_p2_period9", include_str!("../fixtures/ex1_p2_period9.json")),
    ("ex2_p3_period24", include_str!("../fixtures/ex2_p3_period24.json")),
    ("ex3_p4_period72", include_str!("../fixtures/ex3_p4_period72.json")),
];

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("fixture {id}: {source}")]
    Corrupt { id: String, source: FormatError },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureJson {
    id: String,
    period: usize,
    morphism: bool,
    point: PointJson,
    map: MapJson,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceFixture {
    pub id: String,
    pub map: PolynomialMap,
    pub point: ProjectivePoint,
    pub period: usize,
    pub morphism: bool,
}

impl ReferenceFixture {
    pub fn to_canonical_string(&self) -> String {
        to_canonical_string(&FixtureJson {
            id: self.id.clone(),
            period: self.period,
            morphism: self.morphism,
            point: PointJson::from(&self.point),
            map: MapJson::from(&self.map),
        })
    }
}

/// The embedded text of a fixture, byte for byte.
pub fn fixture_source(id: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(k, _)| *k == id).map(|(_, v)| *v)
}

pub fn parse_fixture(text: &str) -> Result<ReferenceFixture, FormatError> {
    let json: FixtureJson = serde_json::from_str(text)?;
    Ok(ReferenceFixture {
        map: PolynomialMap::try_from(&json.map)?,
        point: ProjectivePoint::try_from(&json.point)?,
        id: json.id,
        period: json.period,
        morphism: json.morphism,
    })
}

pub fn load_fixture(id: &str) -> Result<ReferenceFixture, FixtureError> {
    let text = fixture_source(id).ok_or_else(|| FixtureError::UnknownFixture(id.to_string()))?;
    parse_fixture(text).map_err(|source| FixtureError::Corrupt { id: id.to_string(), source })
}

pub fn all_fixtures() -> Vec<ReferenceFixture> {
    FIXTURE_IDS.iter().map(|id| load_fixture(id).expect("embedded fixtures parse")).collect()
}

/// The period-8 map on P^2 inside the P^3 example (its first block).
pub fn period8_factor() -> PolynomialMap {
    let host = load_fixture("ex2_p3_period24").expect("embedded fixture").map;
    split_map(&host, 2).expect("first two coordinates form a block").0
}

/// The period-3 map on P^1 inside the P^3 example (its second block).
pub fn period3_factor() -> PolynomialMap {
    let host = load_fixture("ex2_p3_period24").expect("embedded fixture").map;
    split_map(&host, 2).expect("last coordinate forms a block").1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureCheck {
    pub id: String,
    pub period_ok: bool,
    pub period_detail: String,
    /// `None` when the morphism check is skipped.
    pub morphism_ok: Option<bool>,
}

impl FixtureCheck {
    pub fn passed(&self) -> bool {
        self.period_ok && self.morphism_ok.unwrap_or(true)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<FixtureCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(FixtureCheck::passed)
    }

    pub fn period_passes(&self) -> usize {
        self.checks.iter().filter(|c| c.period_ok).count()
    }

    pub fn morphism_passes(&self) -> usize {
        self.checks.iter().filter(|c| c.morphism_ok == Some(true)).count()
    }
}

/// Period and morphism checks for each fixture. On P^1 the morphism check
/// is skipped: a polynomial map there is a morphism whenever its first form
/// is not divisible by the last variable, which holds for the one fixture.
pub fn verify_fixtures(fixtures: &[ReferenceFixture], limits: &OrbitLimits) -> VerifyReport {
    let checks = fixtures
        .iter()
        .map(|f| {
            let (period_ok, period_detail) = match assert_primitive_period_with(&f.map, &f.point, f.period, limits) {
                Ok(c) => (true, format!("primitive period {}", c.period)),
                Err(e) => (false, e.to_string()),
            };
            let morphism_ok = (f.map.dimension() > 1)
                .then(|| (is_morphism(&f.map).decision == MorphismDecision::Morphism) == f.morphism);
            FixtureCheck { id: f.id.clone(), period_ok, period_detail, morphism_ok }
        })
        .collect();
    VerifyReport { checks }
}

pub fn verify_all(limits: &OrbitLimits) -> VerifyReport {
    verify_fixtures(&all_fixtures(), limits)
}
