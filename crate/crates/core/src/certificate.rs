//! Combinatorial lower bounds on `mult(F)` and certificates that `F ≡ 0`.
//!
//! Every bound here depends only on the weak combinatorics of `Z`. A
//! certificate stores its inputs next to the numbers derived from them;
//! parsing one back rebuilds it from the inputs and rejects any mismatch.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incidence::{format_table, IncidenceStructure, WeakTable};
use crate::interpolation::{degree_of_f, square_size};
use crate::monomial::{binom_i, binomial};

/// Per-hyperplane lower bound on the multiplicity of that hyperplane in `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineBound {
    pub members: usize,
    pub bound: u64,
    /// `max(0, contribution_j)` for `j = 1..=m`.
    pub per_j: Vec<u64>,
    /// Set for `N > 2`, where the bound is the plane analogue of the line case.
    pub beyond_plane: bool,
}

/// `Σ_{j=1}^{m} max(0, n + binom(j+N-2, N-1) - binom(d+N-1, N-1))`.
pub fn line_multiplicity_bound(members: usize, d: u32, m: u32, ambient: usize) -> LineBound {
    let k = ambient as i64 - 1;
    let cap = binom_i(d as i64 + k, k);
    let per_j: Vec<u64> = (1..=m as i64)
        .map(|j| (members as i64 + binom_i(j + k - 1, k) - cap).max(0) as u64)
        .collect();
    LineBound {
        members,
        bound: per_j.iter().sum(),
        per_j,
        beyond_plane: ambient > 2,
    }
}

/// `k(j-d-1) + Σ|L_i|` for `B ∉ Z`, `k(j-d-2) + Σ|L_i| + 1` for `B ∈ Z`,
/// where `k` is the number of lines through `B`.
pub fn fixed_point_bound(counts: &[usize], j: u32, d: u32, b_in_z: bool) -> Result<i64> {
    if counts.is_empty() {
        return Err(Error::InvalidArgument("fixed point bound needs at least one line".into()));
    }
    let k = counts.len() as i64;
    let sum: i64 = counts.iter().map(|&c| c as i64).sum();
    let (j, d) = (j as i64, d as i64);
    Ok(if b_in_z {
        k * (j - d - 2) + sum + 1
    } else {
        k * (j - d - 1) + sum
    })
}

/// Fixed point bound for chosen hyperplanes of `inc` through configuration
/// point `b` (or through an outside point when `b` is `None`).
///
/// The hyperplanes must pairwise meet in no configuration point other than `b`.
pub fn fixed_point_bound_at(inc: &IncidenceStructure, lines: &[usize], j: u32, d: u32, b: Option<usize>) -> Result<i64> {
    for (x, &a) in lines.iter().enumerate() {
        let ha = inc
            .hyperplanes
            .get(a)
            .ok_or_else(|| Error::InvalidArgument(format!("no hyperplane {a}")))?;
        if let Some(b) = b {
            if !ha.contains(b) {
                return Err(Error::InvalidArgument(format!("hyperplane {a} misses point {b}")));
            }
        }
        for &c in &lines[x + 1..] {
            if a == c {
                return Err(Error::PencilNotDistinct(a, c));
            }
            let hc = inc
                .hyperplanes
                .get(c)
                .ok_or_else(|| Error::InvalidArgument(format!("no hyperplane {c}")))?;
            if ha.members.iter().any(|&i| Some(i) != b && hc.contains(i)) {
                return Err(Error::PencilNotDistinct(a, c));
            }
        }
    }
    let counts: Vec<usize> = lines.iter().map(|&h| inc.hyperplanes[h].len()).collect();
    fixed_point_bound(&counts, j, d, b.is_some())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CertificateKind {
    SquareCase,
    PlusOneCase,
    FamilyA4k1,
    PlaneCount,
    RemovalAudit,
    SubsetSweep,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CertificateKind::SquareCase => "square case",
            CertificateKind::PlusOneCase => "plus-one case",
            CertificateKind::FamilyA4k1 => "A(4k+1,1) family",
            CertificateKind::PlaneCount => "plane count",
            CertificateKind::RemovalAudit => "removal audit",
            CertificateKind::SubsetSweep => "subset sweep",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Proven,
    Inconclusive,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Proven
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proven => "Proven",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

/// All hyperplanes of one size, with their common bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineGroup {
    pub members: usize,
    pub count: usize,
    pub bound: u64,
    pub per_j: Vec<u64>,
    pub subtotal: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraTerm {
    pub label: String,
    pub value: i64,
}

/// Totals of the plane-count certificate over every removable pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTotals {
    pub pairs: usize,
    pub min_total: u64,
    pub max_total: u64,
    /// Σ n_i over the richest planes after removal, min and max over pairs.
    pub rich_sum_min: usize,
    pub rich_sum_max: usize,
}

/// Summary of a removal audit as carried by its certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub remove_count: usize,
    pub removals: usize,
    pub planes: usize,
    pub plane_size: usize,
    pub uniform_profiles: usize,
    pub min_rich_planes: usize,
    pub plane_sum_min: usize,
    pub plane_sum_max: usize,
    pub square_total_min: u64,
}

/// Subsets of one weak table met during a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepGroup {
    pub weak_table: WeakTable,
    pub subsets: usize,
    pub total: i64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub inner: CertificateKind,
    pub subset_size: usize,
    pub total_subsets: usize,
    pub checked: usize,
    pub groups: Vec<SweepGroup>,
    /// Points left out of the first subset whose certificate failed.
    pub first_failure: Option<Vec<usize>>,
}

macro_rules! certificate_struct {
    ($(#[$meta:meta])* $vis:vis struct $name:ident) => {
        $(#[$meta])*
        $vis struct $name {
            pub kind: CertificateKind,
            #[serde(rename = "N")]
            pub n: usize,
            pub d: u32,
            pub m: u32,
            pub s: usize,
            pub points: usize,
            pub weak_table: WeakTable,
            pub line_bounds: Vec<LineGroup>,
            pub extra_terms: Vec<ExtraTerm>,
            pub total: i64,
            #[serde(rename = "deg_F")]
            pub deg_f: i64,
            pub verdict: Verdict,
            pub derivation: Vec<String>,
            #[serde(default, skip_serializing_if = "Vec::is_empty")]
            pub notes: Vec<String>,
            #[serde(default, skip_serializing_if = "Option::is_none")]
            pub k: Option<u64>,
            #[serde(default, skip_serializing_if = "Option::is_none")]
            pub removed: Option<Vec<usize>>,
            #[serde(default, skip_serializing_if = "Option::is_none")]
            pub pair_totals: Option<PairTotals>,
            #[serde(default, skip_serializing_if = "Option::is_none")]
            pub audit: Option<AuditSummary>,
            #[serde(default, skip_serializing_if = "Option::is_none")]
            pub sweep: Option<SweepSummary>,
        }
    };
}

certificate_struct! {
    /// A checked claim that `F ≡ 0` (Proven), or the numbers showing the
    /// bound falls short (Inconclusive).
    #[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
    #[serde(try_from = "UncheckedCertificate")]
    pub struct Certificate
}

certificate_struct! {
    #[derive(Deserialize)]
    struct UncheckedCertificate
}

impl TryFrom<UncheckedCertificate> for Certificate {
    type Error = Error;

    fn try_from(u: UncheckedCertificate) -> Result<Self> {
        let cert = Certificate {
            kind: u.kind,
            n: u.n,
            d: u.d,
            m: u.m,
            s: u.s,
            points: u.points,
            weak_table: u.weak_table,
            line_bounds: u.line_bounds,
            extra_terms: u.extra_terms,
            total: u.total,
            deg_f: u.deg_f,
            verdict: u.verdict,
            derivation: u.derivation,
            notes: u.notes,
            k: u.k,
            removed: u.removed,
            pair_totals: u.pair_totals,
            audit: u.audit,
            sweep: u.sweep,
        };
        cert.verify()?;
        Ok(cert)
    }
}

impl Certificate {
    pub fn is_proven(&self) -> bool {
        self.verdict == Verdict::Proven
    }

    /// Rebuilds the certificate from its inputs and compares every field.
    pub fn verify(&self) -> Result<()> {
        let rebuilt = match self.kind {
            CertificateKind::SquareCase => {
                square_from_table(&Combinatorics::new(self.n, self.points, self.weak_table.clone()), self.d, self.m)?
            }
            CertificateKind::PlusOneCase => {
                plus_one_from_table(&Combinatorics::new(self.n, self.points, self.weak_table.clone()), self.d)?
            }
            CertificateKind::FamilyA4k1 => family_a4k1_certificate(self.k.ok_or_else(|| missing("k"))?)?,
            CertificateKind::PlaneCount => plane_count_from_parts(
                self.weak_table.clone(),
                self.removed.clone().ok_or_else(|| missing("removed"))?,
                self.pair_totals.clone().ok_or_else(|| missing("pair_totals"))?,
            )?,
            CertificateKind::RemovalAudit => {
                removal_certificate_from_summary(
                self.n,
                self.d,
                self.m,
                self.weak_table.clone(),
                self.audit.clone().ok_or_else(|| missing("audit"))?,
            )?
            }
            CertificateKind::SubsetSweep => sweep_from_summary(
                self.n,
                self.points,
                self.d,
                self.m,
                self.weak_table.clone(),
                self.sweep.clone().ok_or_else(|| missing("sweep"))?,
            )?,
        };
        if &rebuilt != self {
            return Err(Error::VerificationFailed(format!(
                "{} certificate does not match its recomputation (total {} vs {}, verdict {} vs {})",
                self.kind, self.total, rebuilt.total, self.verdict, rebuilt.verdict
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn missing(field: &str) -> Error {
    Error::VerificationFailed(format!("certificate lacks {field}"))
}

/// The weak-combinatorics input of a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combinatorics {
    pub n: usize,
    pub points: usize,
    pub table: WeakTable,
}

impl Combinatorics {
    pub fn new(n: usize, points: usize, table: WeakTable) -> Self {
        Self { n, points, table }
    }
}

impl From<&IncidenceStructure> for Combinatorics {
    fn from(inc: &IncidenceStructure) -> Self {
        Self::new(inc.n, inc.point_count, inc.weak_table())
    }
}

fn line_groups(table: &WeakTable, n: usize, d: u32, m: u32) -> Vec<LineGroup> {
    table
        .iter()
        .map(|(&members, &count)| {
            let lb = line_multiplicity_bound(members, d, m, n);
            LineGroup {
                members,
                count,
                bound: lb.bound,
                per_j: lb.per_j,
                subtotal: lb.bound * count as u64,
            }
        })
        .collect()
}

fn sum_expression(groups: &[LineGroup]) -> (String, u64) {
    let terms: Vec<String> = groups
        .iter()
        .filter(|g| g.subtotal > 0)
        .map(|g| format!("{}·{}", g.count, g.bound))
        .collect();
    let total = groups.iter().map(|g| g.subtotal).sum();
    let expr = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    (expr, total)
}

fn conclusion(total: i64, bound: i64) -> String {
    if total > bound {
        format!("{total} > {bound} ⇒ F ≡ 0")
    } else {
        format!("{total} ≤ {bound}: the bound does not force F ≡ 0")
    }
}

fn header(n: usize, d: u32, m: u32, s: usize, points: usize) -> String {
    format!("(N, d, m) = ({n}, {d}, {m}), s = {s}, |Z| = {points}")
}

fn bound_note(n: usize) -> Vec<String> {
    if n > 2 {
        vec![format!(
            "hyperplane bounds in P^{n} use n + binom(j+N-2, N-1) - binom(d+N-1, N-1) per j, extending the planar count"
        )]
    } else {
        Vec::new()
    }
}

/// Square case: `|Z| = s`; Proven iff the summed hyperplane bounds exceed `deg F`.
pub fn square_certificate(input: &Combinatorics, d: u32, m: u32) -> Result<Certificate> {
    let s = square_size(input.n, d, m)?;
    if input.points != s {
        return Err(Error::SizeMismatch(format!(
            "|Z| = {} but s = {s}; use plus_one_certificate for |Z| = s+1 or a subset sweep",
            input.points
        )));
    }
    square_from_table(input, d, m)
}

fn square_from_table(input: &Combinatorics, d: u32, m: u32) -> Result<Certificate> {
    let n = input.n;
    let s = square_size(n, d, m)?;
    if input.points != s {
        return Err(Error::VerificationFailed(format!("square case needs |Z| = {s}")));
    }
    let groups = line_groups(&input.table, n, d, m);
    let (expr, total) = sum_expression(&groups);
    let total = total as i64;
    let deg = degree_of_f(n, d, m) as i64;
    let derivation = vec![
        header(n, d, m, s, input.points),
        format!("weak table {}", format_table(&input.table)),
        format!("Σ hyperplane bounds = {expr} = {total}"),
        format!("deg F = binom(m+N-1, N)·(d-m+1) = {deg}"),
        conclusion(total, deg),
    ];
    Ok(Certificate {
        kind: CertificateKind::SquareCase,
        n,
        d,
        m,
        s,
        points: input.points,
        weak_table: input.table.clone(),
        line_bounds: groups,
        extra_terms: Vec::new(),
        total,
        deg_f: deg,
        verdict: Verdict::from_bool(total > deg),
        derivation,
        notes: bound_note(n),
        k: None,
        removed: None,
        pair_totals: None,
        audit: None,
        sweep: None,
    })
}

/// Point count of the plus-one case, `binom(d+2,2) - binom(d,2) + 1`.
pub fn plus_one_size(d: u32) -> usize {
    (binomial(d as u64 + 2, 2) - binomial(d as u64, 2) + 1) as usize
}

/// `|Z| = s + 1` in the plane with `m = d - 1`:
/// Proven iff `Σ binom(|L|-1, 2) + d - |Z| + 2 > 2·binom(d, 2)`.
pub fn plus_one_certificate(input: &Combinatorics, d: u32) -> Result<Certificate> {
    if input.n != 2 {
        return Err(Error::InvalidArgument("the plus-one criterion is for N = 2".into()));
    }
    let s = plus_one_size(d);
    if input.points != s {
        return Err(Error::SizeMismatch(format!(
            "|Z| = {} but the plus-one case for d = {d} needs {s} points",
            input.points
        )));
    }
    plus_one_from_table(input, d)
}

fn plus_one_from_table(input: &Combinatorics, d: u32) -> Result<Certificate> {
    if d < 2 {
        return Err(Error::InvalidArgument("plus-one case needs d >= 2".into()));
    }
    let s = plus_one_size(d);
    if input.n != 2 || input.points != s {
        return Err(Error::VerificationFailed(format!("plus-one case needs N = 2 and |Z| = {s}")));
    }
    let m = d - 1;
    let groups: Vec<LineGroup> = input
        .table
        .iter()
        .filter(|(&members, _)| members >= 3)
        .map(|(&members, &count)| {
            let b = binomial(members as u64 - 1, 2) as u64;
            LineGroup {
                members,
                count,
                bound: b,
                per_j: Vec::new(),
                subtotal: b * count as u64,
            }
        })
        .collect();
    let (expr, sum) = sum_expression(&groups);
    let sum = sum as i64;
    let extra = vec![
        ExtraTerm { label: "d".into(), value: d as i64 },
        ExtraTerm { label: "-|Z|".into(), value: -(s as i64) },
        ExtraTerm { label: "+2".into(), value: 2 },
    ];
    let total = sum + extra.iter().map(|e| e.value).sum::<i64>();
    let rhs = 2 * binomial(d as u64, 2) as i64;
    let variant = total + 1;
    let derivation = vec![
        header(2, d, m, s - 1, s),
        format!("weak table {}", format_table(&input.table)),
        format!("Σ binom(|L|-1, 2) = {expr} = {sum}"),
        format!("LHS = {sum} + {d} - {s} + 2 = {total}"),
        format!("RHS = 2·binom(d, 2) = {rhs}"),
        conclusion(total, rhs),
    ];
    let notes = vec![format!(
        "with |Z| - 1 = {} in place of |Z| the left side is {sum} + {d} - {} + 2 = {variant}; the verdict {} with it",
        s - 1,
        s - 1,
        if (variant > rhs) == (total > rhs) { "is the same" } else { "changes" }
    )];
    Ok(Certificate {
        kind: CertificateKind::PlusOneCase,
        n: 2,
        d,
        m,
        s,
        points: s,
        weak_table: input.table.clone(),
        line_bounds: groups,
        extra_terms: extra,
        total,
        deg_f: rhs,
        verdict: Verdict::from_bool(total > rhs),
        derivation,
        notes,
        k: None,
        removed: None,
        pair_totals: None,
        audit: None,
        sweep: None,
    })
}

/// Weak table of the dual of `A(4k+1, 1)`: `{3: 2k(k-1), 4: k, 2k: 1}`.
pub fn a4k1_table(k: u64) -> WeakTable {
    let k = k as usize;
    let mut t = WeakTable::new();
    for (size, count) in [(3, 2 * k * (k - 1)), (4, k), (2 * k, 1)] {
        if count > 0 && size >= 3 {
            *t.entry(size).or_insert(0) += count;
        }
    }
    t
}

/// Square case with `d = 2k`, `m = 2k - 1` on the `A(4k+1, 1)` table.
pub fn family_a4k1_certificate(k: u64) -> Result<Certificate> {
    if k < 1 {
        return Err(Error::InvalidArgument("k >= 1".into()));
    }
    let d = 2 * k as u32;
    let m = d - 1;
    let input = Combinatorics::new(2, 4 * k as usize + 1, a4k1_table(k));
    let mut cert = square_certificate(&input, d, m)?;
    cert.kind = CertificateKind::FamilyA4k1;
    cert.k = Some(k);
    cert.derivation.insert(
        1,
        format!(
            "k = {k}: {} three-point lines × 1 + {k} four-point lines × 3 + one {}-point line × binom({}, 2)",
            2 * k * (k - 1),
            2 * k,
            2 * k - 1
        ),
    );
    cert.derivation.insert(
        cert.derivation.len() - 1,
        format!("4k² - 2k + 1 = {} against deg F = 4k² - 2k = {}", 4 * k * k - 2 * k + 1, 4 * k * k - 2 * k),
    );
    Ok(cert)
}

/// `P^3`, `d = m = 3`, with two points removed so the rest is square.
///
/// The total uses the hyperplanes of the remaining points; every other
/// removable pair is evaluated too, and the spread is recorded.
pub fn plane_count_certificate(inc: &IncidenceStructure, removed: [usize; 2]) -> Result<Certificate> {
    let (d, m) = (3, 3);
    let s = square_size(inc.n, d, m)?;
    if inc.n != 3 || inc.point_count != s + 2 {
        return Err(Error::SizeMismatch(format!(
            "plane count needs {} points in P^3, got {} in P^{}",
            s + 2,
            inc.point_count,
            inc.n
        )));
    }
    if removed[0] == removed[1] || removed.iter().any(|&i| i >= inc.point_count) {
        return Err(Error::InvalidArgument(format!("bad removal pair {removed:?}")));
    }
    let richest = inc.member_counts().into_iter().max().unwrap_or(0);
    let pair_data = |pair: [usize; 2]| -> (WeakTable, u64, usize) {
        let keep: Vec<usize> = (0..inc.point_count).filter(|i| !pair.contains(i)).collect();
        let sub = inc.restrict(&keep, 4);
        let table = sub.weak_table();
        let total = line_groups(&table, 3, d, m).iter().map(|g| g.subtotal).sum();
        let rich_sum = inc
            .hyperplanes
            .iter()
            .filter(|h| h.len() == richest)
            .map(|h| h.members.iter().filter(|i| !pair.contains(i)).count())
            .sum();
        (table, total, rich_sum)
    };
    let pairs: Vec<[usize; 2]> = (0..inc.point_count)
        .flat_map(|a| (a + 1..inc.point_count).map(move |b| [a, b]))
        .collect();
    let all: Vec<(WeakTable, u64, usize)> = pairs.par_iter().map(|&p| pair_data(p)).collect();
    let totals = PairTotals {
        pairs: all.len(),
        min_total: all.iter().map(|x| x.1).min().unwrap_or(0),
        max_total: all.iter().map(|x| x.1).max().unwrap_or(0),
        rich_sum_min: all.iter().map(|x| x.2).min().unwrap_or(0),
        rich_sum_max: all.iter().map(|x| x.2).max().unwrap_or(0),
    };
    let mut removed = removed.to_vec();
    removed.sort_unstable();
    let (table, _, _) = pair_data([removed[0], removed[1]]);
    plane_count_from_parts(table, removed, totals)
}

fn plane_count_from_parts(table: WeakTable, removed: Vec<usize>, totals: PairTotals) -> Result<Certificate> {
    let (n, d, m) = (3usize, 3u32, 3u32);
    let s = square_size(n, d, m)?;
    if removed.len() != 2 {
        return Err(Error::VerificationFailed("plane count removes exactly two points".into()));
    }
    let groups = line_groups(&table, n, d, m);
    let (expr, total) = sum_expression(&groups);
    let total = total as i64;
    let deg = degree_of_f(n, d, m) as i64;
    let uniform = totals.min_total == totals.max_total;
    let derivation = vec![
        header(n, d, m, s, s),
        format!("removed points {removed:?}; planes with at least 4 remaining points {}", format_table(&table)),
        format!("Σ max(0, n_i - 4) = {expr} = {total}"),
        format!("deg F = {deg}"),
        conclusion(total, deg),
        format!(
            "over all {} removable pairs the total ranges over [{}, {}]{}",
            totals.pairs,
            totals.min_total,
            totals.max_total,
            if uniform { ", independent of the pair" } else { "" }
        ),
        format!(
            "Σ n_i over the richest planes after removal ranges over [{}, {}]",
            totals.rich_sum_min, totals.rich_sum_max
        ),
    ];
    Ok(Certificate {
        kind: CertificateKind::PlaneCount,
        n,
        d,
        m,
        s,
        points: s,
        weak_table: table,
        line_bounds: groups,
        extra_terms: Vec::new(),
        total,
        deg_f: deg,
        verdict: Verdict::from_bool(total > deg),
        derivation,
        notes: bound_note(n),
        k: None,
        removed: Some(removed),
        pair_totals: Some(totals),
        audit: None,
        sweep: None,
    })
}

/// Per-plane member counts after one removal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalProfile {
    pub removed: Vec<usize>,
    pub counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub d: u32,
    pub m: u32,
    pub points: usize,
    pub weak_table: WeakTable,
    pub summary: AuditSummary,
    /// Sorted count profile, written as `8^2 7^4 ...`, with its frequency.
    pub distribution: BTreeMap<String, usize>,
    pub profiles: Vec<RemovalProfile>,
}

impl AuditReport {
    /// Plain statement of the uniform-profile finding.
    pub fn finding(&self) -> String {
        let s = &self.summary;
        let left = self.points - s.remove_count;
        let even = s.planes > 0 && (s.plane_sum_min % s.planes == 0) && s.plane_sum_min == s.plane_sum_max;
        let target = if even { s.plane_sum_min / s.planes.max(1) } else { 0 };
        match (s.uniform_profiles, even) {
            (0, true) => format!("no {left}-point subset has {target} points on every plane"),
            (0, false) => format!("no {left}-point subset has the same number of points on every plane"),
            (k, _) => format!("{k} of {} subsets have {target} points on every plane", s.removals),
        }
    }
}

/// Removes every `remove_count`-subset of points and records how many
/// points stay on each of the richest hyperplanes.
pub fn removal_audit(inc: &IncidenceStructure, remove_count: usize, d: u32, m: u32) -> Result<AuditReport> {
    let total = binomial(inc.point_count as u64, remove_count as u64);
    if total > crate::incidence::MAX_SUBSETS {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget: crate::incidence::MAX_SUBSETS,
        });
    }
    let plane_size = inc.member_counts().into_iter().max().ok_or(Error::Empty)?;
    let planes: Vec<&crate::incidence::Hyperplane> =
        inc.hyperplanes.iter().filter(|h| h.len() == plane_size).collect();
    let subsets = index_subsets(inc.point_count, remove_count);
    let profiles: Vec<RemovalProfile> = subsets
        .par_iter()
        .map(|r| RemovalProfile {
            removed: r.clone(),
            counts: planes
                .iter()
                .map(|h| h.members.iter().filter(|i| r.binary_search(i).is_err()).count())
                .collect(),
        })
        .collect();
    let sq = |c: &[usize]| -> u64 {
        c.iter()
            .map(|&x| line_multiplicity_bound(x, d, m, inc.n).bound)
            .sum()
    };
    let mut distribution = BTreeMap::new();
    for p in &profiles {
        let mut c = p.counts.clone();
        c.sort_unstable_by(|a, b| b.cmp(a));
        let mut key = Vec::new();
        let mut i = 0;
        while i < c.len() {
            let run = c[i..].iter().take_while(|&&x| x == c[i]).count();
            key.push(format!("{}^{}", c[i], run));
            i += run;
        }
        *distribution.entry(key.join(" ")).or_insert(0) += 1;
    }
    let sums: Vec<usize> = profiles.iter().map(|p| p.counts.iter().sum()).collect();
    let summary = AuditSummary {
        remove_count,
        removals: profiles.len(),
        planes: planes.len(),
        plane_size,
        uniform_profiles: profiles
            .iter()
            .filter(|p| p.counts.windows(2).all(|w| w[0] == w[1]))
            .count(),
        min_rich_planes: profiles
            .iter()
            .map(|p| {
                let mean = p.counts.iter().sum::<usize>() / p.counts.len().max(1);
                p.counts.iter().filter(|&&c| c > mean).count()
            })
            .min()
            .unwrap_or(0),
        plane_sum_min: sums.iter().copied().min().unwrap_or(0),
        plane_sum_max: sums.iter().copied().max().unwrap_or(0),
        square_total_min: profiles.iter().map(|p| sq(&p.counts)).min().unwrap_or(0),
    };
    Ok(AuditReport {
        n: inc.n,
        d,
        m,
        points: inc.point_count,
        weak_table: inc.weak_table(),
        summary,
        distribution,
        profiles,
    })
}

fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for t in i + 1..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

/// Certificate view of a removal audit.
///
/// Its total is the least square-case bound over all removals, so it is
/// Proven only if every `s`-subset is individually certified.
pub fn removal_certificate(audit: &AuditReport) -> Result<Certificate> {
    removal_certificate_from_summary(audit.n, audit.d, audit.m, audit.weak_table.clone(), audit.summary.clone())
}

fn removal_certificate_from_summary(n: usize, d: u32, m: u32, table: WeakTable, a: AuditSummary) -> Result<Certificate> {
    let s = square_size(n, d, m)?;
    let points = s + a.remove_count;
    let deg = degree_of_f(n, d, m) as i64;
    let total = a.square_total_min as i64;
    let left = points - a.remove_count;
    let double_count = a.planes as i64 + a.min_rich_planes as i64;
    let derivation = vec![
        header(n, d, m, s, points),
        format!("{} planes with {} points each, weak table {}", a.planes, a.plane_size, format_table(&table)),
        format!("{} removals of {} points", a.removals, a.remove_count),
        format!(
            "Σ n_i after removal ranges over [{}, {}]",
            a.plane_sum_min, a.plane_sum_max
        ),
        format!(
            "{} removals leave the same number of points on every plane",
            a.uniform_profiles
        ),
        format!(
            "every removal leaves at least {} planes with more than the average",
            a.min_rich_planes
        ),
        format!("least Σ hyperplane bounds over all {left}-point subsets = {total}"),
        format!("deg F = {deg}"),
        conclusion(total, deg),
    ];
    let notes = vec![format!(
        "if all {} planes lie in the locus, counting each once and the richer ones twice gives at least {} > {}; \
         that premise is not machine-verified",
        a.planes, double_count, deg
    )];
    Ok(Certificate {
        kind: CertificateKind::RemovalAudit,
        n,
        d,
        m,
        s,
        points,
        weak_table: table,
        line_bounds: Vec::new(),
        extra_terms: Vec::new(),
        total,
        deg_f: deg,
        verdict: Verdict::from_bool(total > deg),
        derivation,
        notes,
        k: None,
        removed: None,
        pair_totals: None,
        audit: Some(a),
        sweep: None,
    })
}

const SWEEP_BLOCK: usize = 4096;

/// `|Z| > s`: certifies every `s`-subset (or every `(s+1)`-subset via the
/// plus-one criterion when `N = 2`, `m = d - 1`). If all are Proven the full
/// system is nonempty. Stops after the first block containing a failure.
pub fn subset_sweep(inc: &IncidenceStructure, d: u32, m: u32) -> Result<Certificate> {
    let n = inc.n;
    let s = square_size(n, d, m)?;
    let plus_one = n == 2 && m + 1 == d;
    let (inner, size) = if plus_one {
        (CertificateKind::PlusOneCase, s + 1)
    } else {
        (CertificateKind::SquareCase, s)
    };
    if inc.point_count <= size {
        return Err(Error::SizeMismatch(format!(
            "a sweep needs more than {size} points, got {}",
            inc.point_count
        )));
    }
    let total_subsets = binomial(inc.point_count as u64, (inc.point_count - size) as u64);
    if total_subsets > crate::incidence::MAX_SUBSETS {
        return Err(Error::BudgetExceeded {
            needed: total_subsets,
            budget: crate::incidence::MAX_SUBSETS,
        });
    }
    let floor = if n == 2 { 3 } else { n + 1 };
    let removals = index_subsets(inc.point_count, inc.point_count - size);
    let mut results: Vec<(Vec<usize>, WeakTable, i64, Verdict)> = Vec::new();
    for block in removals.chunks(SWEEP_BLOCK) {
        let part: Vec<_> = block
            .par_iter()
            .map(|r| {
                let keep: Vec<usize> = (0..inc.point_count).filter(|i| r.binary_search(i).is_err()).collect();
                let table = inc.restrict(&keep, floor).weak_table();
                let c = Combinatorics::new(n, size, table.clone());
                let cert = if plus_one { plus_one_from_table(&c, d) } else { square_from_table(&c, d, m) }?;
                Ok((r.clone(), table, cert.total, cert.verdict))
            })
            .collect::<Result<_>>()?;
        let failed = part.iter().any(|x| x.3 == Verdict::Inconclusive);
        results.extend(part);
        if failed {
            break;
        }
    }
    let first_failure = results
        .iter()
        .find(|x| x.3 == Verdict::Inconclusive)
        .map(|x| x.0.clone());
    let mut groups: BTreeMap<WeakTable, (usize, i64, Verdict)> = BTreeMap::new();
    for (_, t, total, v) in &results {
        groups.entry(t.clone()).or_insert((0, *total, *v)).0 += 1;
    }
    let summary = SweepSummary {
        inner,
        subset_size: size,
        total_subsets: total_subsets as usize,
        checked: results.len(),
        groups: groups
            .into_iter()
            .map(|(weak_table, (subsets, total, verdict))| SweepGroup {
                weak_table,
                subsets,
                total,
                verdict,
            })
            .collect(),
        first_failure,
    };
    sweep_from_summary(n, inc.point_count, d, m, inc.weak_table(), summary)
}

fn sweep_from_summary(
    n: usize,
    points: usize,
    d: u32,
    m: u32,
    table: WeakTable,
    sw: SweepSummary,
) -> Result<Certificate> {
    let s = square_size(n, d, m)?;
    let mut totals = Vec::with_capacity(sw.groups.len());
    for g in &sw.groups {
        let c = Combinatorics::new(n, sw.subset_size, g.weak_table.clone());
        let cert = match sw.inner {
            CertificateKind::PlusOneCase => plus_one_from_table(&c, d)?,
            CertificateKind::SquareCase => square_from_table(&c, d, m)?,
            other => return Err(Error::VerificationFailed(format!("sweep over {other} certificates"))),
        };
        if cert.total != g.total || cert.verdict != g.verdict {
            return Err(Error::VerificationFailed(format!(
                "sweep group {} recomputes to {}",
                format_table(&g.weak_table),
                cert.total
            )));
        }
        totals.push((cert.total, cert.deg_f));
    }
    let counted: usize = sw.groups.iter().map(|g| g.subsets).sum();
    if counted != sw.checked || sw.checked > sw.total_subsets || sw.checked == 0 {
        return Err(Error::VerificationFailed("sweep subset counts are inconsistent".into()));
    }
    let total = totals.iter().map(|t| t.0).min().unwrap_or(0);
    let deg = totals.first().map(|t| t.1).unwrap_or(0);
    let complete = sw.checked == sw.total_subsets;
    let all_proven = sw.groups.iter().all(|g| g.verdict == Verdict::Proven);
    let proven = complete && all_proven && total > deg;
    let mut derivation = vec![
        header(n, d, m, s, points),
        format!("weak table {}", format_table(&table)),
        format!(
            "{} of {} subsets of size {} checked with the {} criterion",
            sw.checked, sw.total_subsets, sw.subset_size, sw.inner
        ),
    ];
    for g in &sw.groups {
        derivation.push(format!(
            "{} subsets with table {}: total {} ({})",
            g.subsets,
            format_table(&g.weak_table),
            g.total,
            if g.verdict == Verdict::Proven { "certified" } else { "not certified" }
        ));
    }
    if proven {
        derivation.push(format!(
            "least total {total} > {deg} for every subset ⇒ L(d; mB+Z) is nonempty for general B"
        ));
    } else if let Some(r) = &sw.first_failure {
        derivation.push(format!("the subset leaving out {r:?} is not certified; sweep stopped"));
    }
    Ok(Certificate {
        kind: CertificateKind::SubsetSweep,
        n,
        d,
        m,
        s,
        points,
        weak_table: table,
        line_bounds: Vec::new(),
        extra_terms: Vec::new(),
        // keeps Proven iff total > deg_F for incomplete sweeps as well
        total: if proven { total } else { total.min(deg) },
        deg_f: deg,
        verdict: Verdict::from_bool(proven),
        derivation,
        notes: bound_note(n),
        k: None,
        removed: None,
        pair_totals: None,
        audit: None,
        sweep: Some(sw),
    })
}

/// Picks the certificate by size bookkeeping: square for `|Z| = s`, plus-one
/// for `|Z| = s + 1` in the plane with `m = d - 1`, the plane count for
/// `P^3` with `d = m = 3` and two extra points, and a subset sweep otherwise.
pub fn certify(inc: &IncidenceStructure, d: u32, m: u32) -> Result<Certificate> {
    let n = inc.n;
    let s = square_size(n, d, m)?;
    let points = inc.point_count;
    let input = Combinatorics::from(inc);
    if points < s {
        return Err(Error::SizeMismatch(format!(
            "|Z| = {points} < s = {s}: the system is nonempty by a dimension count"
        )));
    }
    if points == s {
        return square_certificate(&input, d, m);
    }
    if points == s + 1 && n == 2 && m + 1 == d {
        return plus_one_certificate(&input, d);
    }
    if points == s + 2 && n == 3 && d == 3 && m == 3 {
        let cert = plane_count_certificate(inc, [0, 1])?;
        let pt = cert.pair_totals.as_ref().expect("pair totals");
        if pt.min_total as i64 > cert.deg_f {
            return Ok(cert);
        }
    }
    subset_sweep(inc, d, m)
}

/// One step of a partial argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub text: String,
    pub machine_verified: bool,
}

/// Arithmetic ingredients for one `(d, m)` case of the Fermat-type set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatCase {
    pub d: u32,
    pub m: u32,
    pub deg_f: u64,
    pub rich_line_size: usize,
    pub rich_lines: usize,
    pub rich_line_bound: u64,
    pub residual_degree: i64,
    /// `(j, bound)` from the fixed point bound at a coordinate point.
    pub fixed_point: Vec<(u32, i64)>,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatReport {
    pub points: usize,
    pub weak_table: WeakTable,
    /// `(dim [I_{Z1}]_4, dim [I_{Z1}]_5)` for each choice of removed point.
    pub support_dims: Vec<(usize, usize)>,
    pub cases: Vec<FermatCase>,
    pub verdict: Verdict,
}

/// Partial report for the Fermat-type set: combinatorial totals and
/// fixed-point bounds are computed, the closing geometric steps are not.
///
/// `b` is a coordinate point of the configuration and `support_dims` the
/// interpolation facts for the 20-point sets `Z1`.
pub fn fermat_report(inc: &IncidenceStructure, b: usize, support_dims: Vec<(usize, usize)>) -> Result<FermatReport> {
    let rich = inc.member_counts().into_iter().max().ok_or(Error::Empty)?;
    let rich_lines = inc.hyperplanes.iter().filter(|h| h.len() == rich).count();
    let through_b: Vec<usize> = inc.pencils[b]
        .iter()
        .copied()
        .filter(|&h| inc.hyperplanes[h].len() == rich)
        .collect();
    let mut cases = Vec::new();
    for (d, m, js) in [(7u32, 3u32, vec![3u32]), (8, 5, vec![4, 5])] {
        let deg_f = degree_of_f(2, d, m);
        let lb = line_multiplicity_bound(rich, d, m, 2).bound;
        let residual = deg_f as i64 - (rich_lines as u64 * lb) as i64;
        let fixed_point = js
            .iter()
            .map(|&j| Ok((j, fixed_point_bound_at(inc, &through_b, j, d, Some(b))?)))
            .collect::<Result<Vec<_>>>()?;
        let fp_text: Vec<String> = fixed_point.iter().map(|(j, v)| format!("h_{j},B >= {v}")).collect();
        let steps = vec![
            Step {
                text: format!("each {rich}-point line has bound {lb}; {rich_lines} such lines account for {} of deg F = {deg_f}", rich_lines as u64 * lb),
                machine_verified: true,
            },
            Step {
                text: format!("residual degree {residual} once the rich lines are removed from F"),
                machine_verified: true,
            },
            Step {
                text: format!("at a coordinate point B on {} rich lines: {}", through_b.len(), fp_text.join(", ")),
                machine_verified: true,
            },
            Step {
                text: "higher h_j,B at B from residual systems after splitting off the lines through B".into(),
                machine_verified: false,
            },
            Step {
                text: "the residual curve is forced to be lines through the coordinate points, and a point of F3 \
                       outside it lies on the locus, so F ≡ 0"
                    .into(),
                machine_verified: false,
            },
        ];
        cases.push(FermatCase {
            d,
            m,
            deg_f,
            rich_line_size: rich,
            rich_lines,
            rich_line_bound: lb,
            residual_degree: residual,
            fixed_point,
            steps,
        });
    }
    Ok(FermatReport {
        points: inc.point_count,
        weak_table: inc.weak_table(),
        support_dims,
        cases,
        verdict: Verdict::Inconclusive,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

pub fn render_certificate(cert: &Certificate, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(cert)?),
        Format::Text => {
            let mut out = format!("{} certificate\n", cert.kind);
            for line in &cert.derivation {
                out.push_str("  ");
                out.push_str(line);
                out.push('\n');
            }
            for g in &cert.line_bounds {
                if g.subtotal > 0 {
                    out.push_str(&format!(
                        "  {} hyperplanes with {} points: bound {} each{}\n",
                        g.count,
                        g.members,
                        g.bound,
                        if g.per_j.is_empty() { String::new() } else { format!(" (per j: {:?})", g.per_j) }
                    ));
                }
            }
            for note in &cert.notes {
                out.push_str(&format!("  note: {note}\n"));
            }
            out.push_str(&format!("verdict: {}\n", cert.verdict));
            Ok(out)
        }
    }
}
