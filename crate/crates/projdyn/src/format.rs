//! Canonical JSON for maps, points and reports.
//!
//! Terms are written in descending monomial order and coefficients as
//! reduced `"p/q"` strings (`"p"` when integral), so equal maps always
//! serialize to identical bytes.

use projdyn_core::constructor::{Construction, TranscriptEntry};
use projdyn_core::monomial::Monomial;
use projdyn_core::morphism_cert::MorphismCertificate;
use projdyn_core::orbits::PeriodCertificate;
use projdyn_core::planner::PeriodPlan;
use projdyn_core::rational::{format_rational, parse_rational, ParseRationalError};
use projdyn_core::{HomogeneousForm, PolynomialMap, ProjectivePoint};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("invalid map: {0}")]
    Map(#[from] projdyn_core::Error),
    #[error("{0}")]
    Shape(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub dimension: usize,
    pub degree: usize,
    pub coordinates: Vec<Vec<TermJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub coords: Vec<String>,
}

impl From<&PolynomialMap> for MapJson {
    fn from(map: &PolynomialMap) -> Self {
        MapJson {
            dimension: map.dimension(),
            degree: map.degree(),
            coordinates: map
                .coordinates()
                .iter()
                .map(|f| {
                    f.terms()
                        .map(|(m, c)| TermJson { exponents: m.exponents().to_vec(), coefficient: format_rational(c) })
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<&MapJson> for PolynomialMap {
    type Error = FormatError;

    fn try_from(json: &MapJson) -> Result<Self, FormatError> {
        if json.coordinates.len() != json.dimension + 1 {
            return Err(FormatError::Shape(format!(
                "expected {} coordinates, found {}",
                json.dimension + 1,
                json.coordinates.len()
            )));
        }
        let mut forms = Vec::with_capacity(json.coordinates.len());
        for terms in &json.coordinates {
            let mut parsed = Vec::with_capacity(terms.len());
            for t in terms {
                parsed.push((Monomial::new(t.exponents.clone()), parse_rational(&t.coefficient)?));
            }
            forms.push(HomogeneousForm::from_terms(json.dimension, json.degree, parsed)?);
        }
        Ok(PolynomialMap::new(forms)?)
    }
}

impl From<&ProjectivePoint> for PointJson {
    fn from(p: &ProjectivePoint) -> Self {
        PointJson { coords: p.coords().iter().map(format_rational).collect() }
    }
}

impl TryFrom<&PointJson> for ProjectivePoint {
    type Error = FormatError;

    fn try_from(json: &PointJson) -> Result<Self, FormatError> {
        let coords = json.coords.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
        Ok(ProjectivePoint::normalize(coords)?)
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

pub fn map_to_string(map: &PolynomialMap) -> String {
    to_canonical_string(&MapJson::from(map))
}

/// Reads a map given either bare or wrapped as `{"map": {...}, ...}`
/// (fixture files and construction reports).
pub fn map_from_str(text: &str) -> Result<PolynomialMap, FormatError> {
    let value: Value = serde_json::from_str(text)?;
    let inner = match value {
        Value::Object(mut obj) if obj.contains_key("map") && !obj.contains_key("coordinates") => {
            obj.remove("map").expect("checked")
        }
        other => other,
    };
    let json: MapJson = serde_json::from_value(inner)?;
    PolynomialMap::try_from(&json)
}

/// `"0,0,1"`, `"[0, 1/2, 1]"` or a JSON point object.
pub fn point_from_str(text: &str) -> Result<ProjectivePoint, FormatError> {
    let t = text.trim();
    if t.starts_with('{') {
        let json: PointJson = serde_json::from_str(t)?;
        return ProjectivePoint::try_from(&json);
    }
    let inner = t.trim_start_matches('[').trim_end_matches(']');
    let coords = inner
        .split(',')
        .map(|s| parse_rational(s.trim().trim_matches('"')))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProjectivePoint::normalize(coords)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub period: usize,
    pub orbit: Vec<PointJson>,
}

impl From<&PeriodCertificate> for OrbitReport {
    fn from(c: &PeriodCertificate) -> Self {
        OrbitReport { period: c.period, orbit: c.orbit.iter().map(PointJson::from).collect() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub decision: &'static str,
    pub rank: usize,
    pub columns: usize,
    pub rows: usize,
    pub elapsed_ms: u128,
}

impl CertifyReport {
    pub fn new(cert: &MorphismCertificate, elapsed_ms: u128) -> Self {
        CertifyReport {
            decision: cert.decision.label(),
            rank: cert.rank,
            columns: cert.columns,
            rows: cert.rows,
            elapsed_ms,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockJson {
    pub dim: usize,
    pub period: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanJson {
    pub blocks: Vec<BlockJson>,
    pub achieved: u128,
}

impl From<&PeriodPlan> for PlanJson {
    fn from(p: &PeriodPlan) -> Self {
        PlanJson {
            blocks: p.blocks.iter().map(|b| BlockJson { dim: b.dim, period: b.period }).collect(),
            achieved: p.achieved,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolvedJson {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TranscriptJson {
    pub step: usize,
    pub pattern: Vec<String>,
    pub solved: Vec<SolvedJson>,
    pub draws: Vec<String>,
}

impl From<&TranscriptEntry> for TranscriptJson {
    fn from(e: &TranscriptEntry) -> Self {
        TranscriptJson {
            step: e.step,
            pattern: e.pattern.entries().iter().map(|t| t.to_string()).collect(),
            solved: e
                .solved
                .iter()
                .map(|s| SolvedJson { i: s.id.coordinate, j: s.id.j, k: s.id.k, value: s.value.to_string() })
                .collect(),
            draws: e.draws.iter().map(format_rational).collect(),
        }
    }
}

/// Everything `construct` prints: the map, the certified orbit, the
/// transcript and the morphism decision.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    pub map: MapJson,
    pub period: OrbitReport,
    pub transcript: Vec<TranscriptJson>,
    pub leftovers: Vec<SolvedJson>,
    pub draws_used: usize,
    pub morphism: Option<CertifyReport>,
}

impl ConstructionReport {
    pub fn new(c: &Construction, morphism: Option<CertifyReport>) -> Self {
        ConstructionReport {
            map: MapJson::from(&c.map),
            period: OrbitReport::from(&c.certificate),
            transcript: c.transcript.iter().map(TranscriptJson::from).collect(),
            leftovers: c
                .leftovers
                .iter()
                .map(|(id, v)| SolvedJson { i: id.coordinate, j: id.j, k: id.k, value: format_rational(v) })
                .collect(),
            draws_used: c.draws_used,
            morphism,
        }
    }
}
