//! Hyperplanes rich in points of `Z` and the weak-combinatorics table.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{normalize, Field, FieldSpec, Scalar};
use crate::linalg::{kernel, Matrix};
use crate::monomial::binomial;
use crate::points::{PointConfiguration, PointSet};

/// Counts of hyperplanes by number of members, e.g. `{3: 10, 4: 3, 5: 2}`.
pub type WeakTable = BTreeMap<usize, usize>;

/// Largest number of spanning subsets `detect_hyperplanes` will enumerate.
pub const MAX_SUBSETS: u128 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IncidenceSource {
    /// Found from coordinates by exact evaluation.
    Detected,
    /// Asserted by a configuration file without coordinates.
    Declared,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    /// Normalized coefficients as decimal strings; absent for declared data.
    pub coefficients: Option<Vec<String>>,
    /// Sorted indices into the configuration.
    pub members: Vec<usize>,
}

impl Hyperplane {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceStructure {
    /// Ambient dimension `N`.
    pub n: usize,
    pub point_count: usize,
    pub source: IncidenceSource,
    pub field: Option<FieldSpec>,
    pub min_members: usize,
    /// Whole configuration on one hyperplane.
    pub degenerate: bool,
    pub hyperplanes: Vec<Hyperplane>,
    /// Hyperplane indices through each point.
    pub pencils: Vec<Vec<usize>>,
}

impl IncidenceStructure {
    fn assemble(
        n: usize,
        point_count: usize,
        source: IncidenceSource,
        field: Option<FieldSpec>,
        min_members: usize,
        mut hyperplanes: Vec<Hyperplane>,
    ) -> Self {
        hyperplanes.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.members.cmp(&b.members)));
        let mut pencils = vec![Vec::new(); point_count];
        for (h, hp) in hyperplanes.iter().enumerate() {
            for &i in &hp.members {
                pencils[i].push(h);
            }
        }
        let degenerate = hyperplanes.iter().any(|h| h.len() == point_count) && point_count > n;
        Self {
            n,
            point_count,
            source,
            field,
            min_members,
            degenerate,
            hyperplanes,
            pencils,
        }
    }

    /// Builds a structure from asserted member lists.
    pub fn declared(n: usize, point_count: usize, members: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut hps = Vec::with_capacity(members.len());
        for (h, mut m) in members.into_iter().enumerate() {
            m.sort_unstable();
            if m.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::ValidationFailed(format!("hyperplane {h} repeats a point")));
            }
            if let Some(&bad) = m.iter().find(|&&i| i >= point_count) {
                return Err(Error::ValidationFailed(format!(
                    "hyperplane {h} names point {bad} but there are {point_count} points"
                )));
            }
            if m.len() < n {
                return Err(Error::ValidationFailed(format!(
                    "hyperplane {h} has {} members, fewer than N = {n}",
                    m.len()
                )));
            }
            if !seen.insert(m.clone()) {
                return Err(Error::ValidationFailed(format!("hyperplane {h} is listed twice")));
            }
            hps.push(Hyperplane {
                coefficients: None,
                members: m,
            });
        }
        if n == 2 {
            // two distinct lines meet in at most one point
            for a in 0..hps.len() {
                for b in a + 1..hps.len() {
                    let common = hps[a].members.iter().filter(|i| hps[b].contains(**i)).count();
                    if common > 1 {
                        return Err(Error::ValidationFailed(format!(
                            "declared lines share {common} points"
                        )));
                    }
                }
            }
        }
        let min = hps.iter().map(|h| h.len()).min().unwrap_or(0);
        Ok(Self::assemble(n, point_count, IncidenceSource::Declared, None, min, hps))
    }

    pub fn weak_table(&self) -> WeakTable {
        weak_table(self)
    }

    /// Sizes of all hyperplanes, largest first.
    pub fn member_counts(&self) -> Vec<usize> {
        self.hyperplanes.iter().map(|h| h.len()).collect()
    }

    /// Hyperplanes through configuration point `i`, with their member counts.
    pub fn lines_through_index(&self, i: usize) -> Vec<(usize, usize)> {
        self.pencils[i]
            .iter()
            .map(|&h| (h, self.hyperplanes[h].len()))
            .collect()
    }

    /// Hyperplanes through an arbitrary point, by exact evaluation.
    pub fn lines_through_point<F: Field>(&self, field: &F, b: &[F::Elem]) -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for (h, hp) in self.hyperplanes.iter().enumerate() {
            let coeffs = hp.coefficients.as_ref().ok_or(Error::NoCoordinates)?;
            let mut acc = field.zero();
            for (c, x) in coeffs.iter().zip(b) {
                let c = field.from_scalar(&Scalar::parse(c, field.spec())?)?;
                acc = field.add(&acc, &field.mul(&c, x));
            }
            if field.is_zero(&acc) {
                out.push((h, hp.len()));
            }
        }
        Ok(out)
    }

    /// Σ |members| equals Σ pencil sizes, and both lists agree entry by entry.
    pub fn check_double_counting(&self) -> bool {
        let by_planes: usize = self.hyperplanes.iter().map(|h| h.len()).sum();
        let by_points: usize = self.pencils.iter().map(|p| p.len()).sum();
        by_planes == by_points
            && self
                .pencils
                .iter()
                .enumerate()
                .all(|(i, p)| p.iter().all(|&h| self.hyperplanes[h].contains(i)))
    }

    /// Restriction to a subset of the points, keeping hyperplanes with at
    /// least `min_members` surviving members; indices are renumbered.
    pub fn restrict(&self, keep: &[usize], min_members: usize) -> Self {
        let mut new_index = vec![usize::MAX; self.point_count];
        for (k, &i) in keep.iter().enumerate() {
            new_index[i] = k;
        }
        let hps = self
            .hyperplanes
            .iter()
            .filter_map(|h| {
                let members: Vec<usize> = h
                    .members
                    .iter()
                    .filter(|&&i| new_index[i] != usize::MAX)
                    .map(|&i| new_index[i])
                    .collect();
                (members.len() >= min_members).then(|| Hyperplane {
                    coefficients: h.coefficients.clone(),
                    members: sorted(members),
                })
            })
            .collect();
        Self::assemble(self.n, keep.len(), self.source, self.field, min_members, hps)
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

pub fn weak_table(inc: &IncidenceStructure) -> WeakTable {
    let mut t = WeakTable::new();
    for h in &inc.hyperplanes {
        *t.entry(h.len()).or_insert(0) += 1;
    }
    t
}

/// Parses a table given with string keys, as stored in JSON files.
pub fn table_from_strings(raw: &BTreeMap<String, usize>) -> Result<WeakTable> {
    raw.iter()
        .map(|(k, &v)| {
            k.trim()
                .parse::<usize>()
                .map(|k| (k, v))
                .map_err(|_| Error::ValidationFailed(format!("bad weak-table key {k:?}")))
        })
        .collect()
}

pub fn format_table(t: &WeakTable) -> String {
    let parts: Vec<String> = t.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Every hyperplane with at least `min_members` points, by exact membership.
///
/// Each hyperplane is found as the kernel of an `N`-subset of points that
/// spans it, then deduplicated by its normalized coefficient vector.
pub fn detect_hyperplanes<F: Field>(points: &PointSet<F>, min_members: usize) -> Result<IncidenceStructure> {
    let n = points.n;
    let f = &points.field;
    let floor = if n == 2 { 3 } else { n + 1 };
    if n >= 2 && min_members < floor {
        return Err(Error::InvalidArgument(format!(
            "in P^{n} ask for at least {floor} members per hyperplane"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("incidence needs N >= 2".into()));
    }
    let count = points.len();
    let subsets = binomial(count as u64, n as u64);
    if subsets > MAX_SUBSETS {
        return Err(Error::InvalidArgument(format!(
            "{count} points need {subsets} spanning subsets, over the limit {MAX_SUBSETS}"
        )));
    }
    let tuples = tuples(count, n);
    let unique: HashSet<Vec<Scalar>> = tuples
        .par_iter()
        .filter_map(|t| {
            let rows: Vec<Vec<F::Elem>> = t.iter().map(|&i| points.points[i].clone()).collect();
            let mat = Matrix::from_rows(rows, n + 1).expect("uniform");
            let ker = kernel(f, &mat);
            if ker.len() != 1 {
                return None;
            }
            let c = normalize(f, &ker[0]).expect("nonzero kernel vector");
            Some(c.iter().map(|x| f.to_scalar(x)).collect::<Vec<_>>())
        })
        .collect();
    let found: Vec<Vec<Scalar>> = unique.into_iter().collect();
    let hps: Vec<Hyperplane> = found
        .into_par_iter()
        .filter_map(|c| {
            let coeffs: Vec<F::Elem> = c.iter().map(|x| f.from_scalar(x).expect("same field")).collect();
            let members: Vec<usize> = (0..count)
                .filter(|&i| {
                    let v = coeffs
                        .iter()
                        .zip(&points.points[i])
                        .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
                    f.is_zero(&v)
                })
                .collect();
            (members.len() >= min_members).then(|| Hyperplane {
                coefficients: Some(c.iter().map(|x| x.to_string()).collect()),
                members,
            })
        })
        .collect();
    Ok(IncidenceStructure::assemble(
        n,
        count,
        IncidenceSource::Detected,
        Some(f.spec()),
        min_members,
        hps,
    ))
}

fn tuples(count: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > count {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < count - k + i) else {
            return out;
        };
        cur[i] += 1;
        for t in i + 1..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

/// Lines `(a : b : c)` of `P^2` become the points `(a : b : c)`.
pub fn dualize(name: impl Into<String>, field: FieldSpec, lines: Vec<Vec<Scalar>>) -> Result<PointConfiguration> {
    if lines.iter().any(|l| l.len() != 3) {
        return Err(Error::InvalidArgument("dualize works in P^2".into()));
    }
    PointConfiguration::new(name, 2, field, lines).map_err(|e| match e {
        Error::DuplicatePoint(a, b) => Error::DuplicateLine(a, b),
        other => other,
    })
}
