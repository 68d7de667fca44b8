//! Configuration records: generation, validation and JSON persistence.

mod generators;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::incidence::{detect_hyperplanes, format_table, table_from_strings, IncidenceStructure, WeakTable};
use crate::points::PointConfiguration;

pub use generators::{
    a4k1_lines, gen_a13_3, gen_a15_1, gen_a30_3, gen_a4k1, gen_d4, gen_dk_points, gen_fermat_sets, gen_penrose20,
    DkVariant, FermatSets,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    PaperFigure,
    ExternalReference,
    Generated,
}

/// Named combinatorial checks for configurations whose coordinates come
/// from outside references.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Validator {
    /// 12 planes with 6 points, 6 of them through every point.
    D4,
    /// 20 planes with 8 points, 8 of them through every point.
    Penrose20,
}

impl Validator {
    fn shape(self) -> (usize, usize, usize) {
        // (points, planes, points per plane = planes per point)
        match self {
            Validator::D4 => (12, 12, 6),
            Validator::Penrose20 => (20, 20, 8),
        }
    }

    pub fn check(self, inc: &IncidenceStructure) -> Result<String> {
        let (points, planes, size) = self.shape();
        let fail = |msg: String| Err(Error::ValidationFailed(format!("{self:?}: {msg}")));
        if inc.point_count != points {
            return fail(format!("{} points, expected {points}", inc.point_count));
        }
        let rich: Vec<usize> = (0..inc.hyperplanes.len())
            .filter(|&h| inc.hyperplanes[h].len() == size)
            .collect();
        if rich.len() != planes {
            return fail(format!("{} planes with {size} points, expected {planes}", rich.len()));
        }
        if let Some(h) = inc.hyperplanes.iter().find(|h| h.len() > size) {
            return fail(format!("a plane carries {} points", h.len()));
        }
        for i in 0..inc.point_count {
            let k = rich.iter().filter(|&&h| inc.hyperplanes[h].contains(i)).count();
            if k != size {
                return fail(format!("point {i} lies on {k} rich planes, expected {size}"));
            }
        }
        Ok(format!(
            "{self:?} validator: {planes} planes with {size} points, {size} through each point, Σ = {}",
            planes * size
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub source: Source,
    pub citation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validator: Option<Validator>,
}

/// One configuration file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationRecord {
    pub schema: u32,
    pub name: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub field: FieldSpec,
    #[serde(default)]
    pub points: Vec<Vec<String>>,
    /// Required when `points` is empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_incidence: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_weak_table: Option<BTreeMap<String, usize>>,
    pub metadata: Metadata,
}

impl ConfigurationRecord {
    pub fn from_configuration(config: &PointConfiguration, source: Source, citation: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            name: config.name.clone(),
            n: config.ambient_dim(),
            field: config.field(),
            points: config.point_strings(),
            point_count: None,
            declared_incidence: None,
            expected_weak_table: None,
            metadata: Metadata {
                source,
                citation: citation.into(),
                validator: None,
            },
        }
    }

    pub fn with_expected_table(mut self, table: &WeakTable) -> Self {
        self.expected_weak_table = Some(table.iter().map(|(k, v)| (k.to_string(), *v)).collect());
        self
    }

    pub fn with_validator(mut self, v: Validator) -> Self {
        self.metadata.validator = Some(v);
        self
    }

    /// Same combinatorics with the coordinates dropped.
    pub fn declared_only(&self, name: impl Into<String>) -> Result<Self> {
        let inc = self.incidence()?;
        let mut out = self.clone();
        out.name = name.into();
        out.points = Vec::new();
        out.point_count = Some(inc.point_count);
        out.declared_incidence = Some(inc.hyperplanes.iter().map(|h| h.members.clone()).collect());
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.point_count.unwrap_or(self.points.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn has_coordinates(&self) -> bool {
        !self.points.is_empty()
    }

    /// Parsed coordinates, or `None` for declared-only records.
    pub fn configuration(&self) -> Result<Option<PointConfiguration>> {
        if self.points.is_empty() {
            return Ok(None);
        }
        let pts = self
            .points
            .iter()
            .map(|p| p.iter().map(|x| Scalar::parse(x, self.field)).collect())
            .collect::<Result<Vec<Vec<Scalar>>>>()?;
        let config = PointConfiguration::new(self.name.clone(), self.n, self.field, pts).map_err(|e| match e {
            Error::DuplicatePoint(a, b) => Error::ValidationFailed(format!("points {a} and {b} coincide")),
            Error::ZeroPoint(i) => Error::ValidationFailed(format!("point {i} is zero")),
            other => other,
        })?;
        Ok(Some(config))
    }

    /// Declared incidence when present, otherwise detected from coordinates.
    pub fn incidence(&self) -> Result<IncidenceStructure> {
        if let Some(members) = &self.declared_incidence {
            let count = self.point_count.unwrap_or(self.points.len());
            return IncidenceStructure::declared(self.n, count, members.clone());
        }
        let config = self.configuration()?.ok_or(Error::NoCoordinates)?;
        detect(&config)
    }

    pub fn expected_table(&self) -> Result<Option<WeakTable>> {
        self.expected_weak_table.as_ref().map(table_from_strings).transpose()
    }

    /// Runs every applicable check and lists what passed.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut passed = Vec::new();
        if self.schema != SCHEMA_VERSION {
            return Err(Error::ValidationFailed(format!("unsupported schema {}", self.schema)));
        }
        self.field.validate()?;
        if self.points.is_empty() && self.point_count.is_none() {
            return Err(Error::ValidationFailed("no points and no point_count".into()));
        }
        if let (Some(c), false) = (self.point_count, self.points.is_empty()) {
            if c != self.points.len() {
                return Err(Error::ValidationFailed(format!(
                    "point_count {c} disagrees with {} listed points",
                    self.points.len()
                )));
            }
        }
        if let Some(config) = self.configuration()? {
            passed.push(format!("{} distinct points in P^{} over {}", config.len(), self.n, self.field));
        }
        let inc = self.incidence()?;
        passed.push(format!(
            "incidence ({:?}): {} hyperplanes, table {}",
            inc.source,
            inc.hyperplanes.len(),
            format_table(&inc.weak_table())
        ));
        if let Some(want) = self.expected_table()? {
            let got = trimmed(&inc.weak_table(), inc.n);
            if got != trimmed(&want, inc.n) {
                return Err(Error::ValidationFailed(format!(
                    "weak table {} differs from expected {}",
                    format_table(&got),
                    format_table(&want)
                )));
            }
            passed.push(format!("weak table matches {}", format_table(&want)));
        }
        match (self.metadata.source, self.metadata.validator) {
            (_, Some(v)) => passed.push(v.check(&inc)?),
            (Source::ExternalReference, None) => {
                return Err(Error::ValidationFailed("external-reference record without a validator".into()))
            }
            _ => {}
        }
        Ok(passed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses and validates.
    pub fn from_json(text: &str) -> Result<(Self, Vec<String>)> {
        let rec: Self = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let checks = rec.validate()?;
        Ok((rec, checks))
    }
}

/// Weak tables compare on hyperplanes rich enough to be detected.
fn trimmed(t: &WeakTable, n: usize) -> WeakTable {
    let floor = if n == 2 { 3 } else { n + 1 };
    t.iter().filter(|(&k, _)| k >= floor).map(|(&k, &v)| (k, v)).collect()
}

/// Hyperplanes with at least the detection floor of members.
pub fn detect(config: &PointConfiguration) -> Result<IncidenceStructure> {
    let n = config.ambient_dim();
    let floor = if n == 2 { 3 } else { n + 1 };
    crate::with_field!(config.field(), |f| detect_hyperplanes(&config.point_set(&f)?, floor))
}

pub fn load(path: impl AsRef<Path>) -> Result<(ConfigurationRecord, Vec<String>)> {
    let text = std::fs::read_to_string(path)?;
    ConfigurationRecord::from_json(&text)
}

pub fn save(record: &ConfigurationRecord, path: impl AsRef<Path>) -> Result<()> {
    let mut text = record.to_json()?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// A catalog entry and the `(d, m)` cases it is meant for.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub cases: &'static [(u32, u32)],
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry { name: "a4k1-2", summary: "dual of A(9,1), 9 points over F_p", cases: &[(4, 3)] },
        CatalogEntry { name: "a4k1-3", summary: "dual of A(13,1), 13 points over F_p", cases: &[(6, 5)] },
        CatalogEntry { name: "a4k1-4", summary: "dual of A(17,1), 17 points over F_p", cases: &[(8, 7)] },
        CatalogEntry { name: "a13-3", summary: "13 rational points with table {3:10, 4:3, 5:2}", cases: &[(6, 5)] },
        CatalogEntry { name: "a13-3-declared", summary: "a13-3 as declared lines only", cases: &[(6, 5)] },
        CatalogEntry { name: "a30-3", summary: "dual of A(30,3), 30 rational points", cases: &[(14, 13)] },
        CatalogEntry { name: "a30-3-minus", summary: "a30-3 without one point at infinity", cases: &[(14, 13)] },
        CatalogEntry { name: "a30-3-declared", summary: "a30-3 as declared lines only", cases: &[(14, 13)] },
        CatalogEntry { name: "a15-1", summary: "dual of A(15,1), 15 points over F_p", cases: &[(7, 6), (6, 5)] },
        CatalogEntry { name: "a15-1-minus", summary: "a15-1 without one coordinate point", cases: &[(6, 5)] },
        CatalogEntry { name: "a15-1-declared", summary: "a15-1 as declared lines only", cases: &[(7, 6)] },
        CatalogEntry { name: "d4", summary: "12 points e_i ± e_j of P^3", cases: &[(3, 3)] },
        CatalogEntry { name: "penrose20", summary: "20 points of P^3 on 20 eight-point planes", cases: &[(4, 4)] },
        CatalogEntry { name: "dk-seven", summary: "7 rational points in general position", cases: &[(3, 2)] },
        CatalogEntry { name: "dk-nine", summary: "dk-seven plus two points", cases: &[(4, 3)] },
        CatalogEntry { name: "fermat-z", summary: "(F6 minus F3) with the coordinate points, 30 points", cases: &[(7, 3), (8, 5)] },
    ]
}

/// Builds a catalog entry by name.
pub fn build(name: &str) -> Result<ConfigurationRecord> {
    match name {
        "a4k1-2" => gen_a4k1(2, None),
        "a4k1-3" => gen_a4k1(3, None),
        "a4k1-4" => gen_a4k1(4, None),
        "a13-3" => gen_a13_3(),
        "a13-3-declared" => gen_a13_3()?.declared_only("a13-3-declared"),
        "a30-3" => gen_a30_3(false),
        "a30-3-minus" => gen_a30_3(true),
        "a30-3-declared" => gen_a30_3(false)?.declared_only("a30-3-declared"),
        "a15-1" => gen_a15_1(false),
        "a15-1-minus" => gen_a15_1(true),
        "a15-1-declared" => gen_a15_1(false)?.declared_only("a15-1-declared"),
        "d4" => gen_d4(),
        "penrose20" => gen_penrose20(),
        "dk-seven" => gen_dk_points(DkVariant::Seven),
        "dk-nine" => gen_dk_points(DkVariant::Nine),
        "fermat-z" => Ok(gen_fermat_sets(None)?.z),
        other => Err(Error::InvalidArgument(format!("unknown catalog entry {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_validation() {
        let rec = gen_dk_points(DkVariant::Seven).unwrap();
        let text = rec.to_json().unwrap();
        let (back, checks) = ConfigurationRecord::from_json(&text).unwrap();
        assert_eq!(back, rec);
        assert!(!checks.is_empty());
    }

    #[test]
    fn duplicate_points_fail_validation() {
        let mut rec = gen_dk_points(DkVariant::Seven).unwrap();
        rec.points.push(rec.points[0].clone());
        assert!(matches!(rec.validate(), Err(Error::ValidationFailed(_))));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = ConfigurationRecord::from_json("{\n  \"schema\": 1,\n  \"name\": }").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_expected_table_is_rejected() {
        let rec = gen_dk_points(DkVariant::Seven)
            .unwrap()
            .with_expected_table(&[(3usize, 1usize)].into_iter().collect());
        assert!(matches!(rec.validate(), Err(Error::ValidationFailed(_))));
    }

    #[test]
    fn declared_only_records() {
        let rec = build("a13-3-declared").unwrap();
        assert!(!rec.has_coordinates());
        assert_eq!(rec.len(), 13);
        assert!(rec.configuration().unwrap().is_none());
        rec.validate().unwrap();
        let inc = rec.incidence().unwrap();
        assert!(matches!(
            inc.lines_through_point(&crate::field::Rationals, &[]),
            Err(Error::NoCoordinates)
        ));
    }

    #[test]
    fn external_records_need_validators() {
        let mut rec = gen_d4().unwrap();
        rec.validate().unwrap();
        rec.metadata.validator = None;
        assert!(rec.validate().is_err());
    }
}
