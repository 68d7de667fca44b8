//! Interpolation matrices for `L(d; mB + Z)`, their ranks, and the
//! dimension bookkeeping behind the `h_{j,B}` bounds.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{determinant, kernel, rank, Matrix, RowBasis};
use crate::monomial::{binomial, exponents_of_degree, indices_up_to, MonomialBasis};
use crate::points::{Chart, PointSet};
use crate::poly::Poly;

/// `binom(d+N, N) - binom(m+N-1, N)`, the point count making `M` square.
pub fn square_size(n: usize, d: u32, m: u32) -> Result<usize> {
    check_dm(d, m)?;
    let value = forms(n, d) as i64 - fat_conditions(n, m) as i64;
    if value <= 0 {
        return Err(Error::NotSquare {
            n,
            d: d as usize,
            m: m as usize,
            value,
        });
    }
    Ok(value as usize)
}

fn check_dm(d: u32, m: u32) -> Result<()> {
    if m < 1 || d < m {
        return Err(Error::InvalidArgument(format!(
            "need d >= m >= 1, got d = {d}, m = {m}"
        )));
    }
    Ok(())
}

/// `binom(d+N, N)`, the number of degree-`d` monomials.
pub fn forms(n: usize, d: u32) -> usize {
    binomial(d as u64 + n as u64, n as u64) as usize
}

/// `binom(m+N-1, N)`, the conditions imposed by an `m`-fold point.
pub fn fat_conditions(n: usize, m: u32) -> usize {
    if m == 0 {
        return 0;
    }
    binomial(m as u64 + n as u64 - 1, n as u64) as usize
}

/// `binom(m+N-1, N) * (d-m+1)`.
pub fn degree_of_f(n: usize, d: u32, m: u32) -> u64 {
    fat_conditions(n, m) as u64 * (d - m + 1) as u64
}

/// Dimension data for `L(d; jB + Z)` at one point `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDims {
    pub d: u32,
    pub j: u32,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Vector-space dimension of the system.
    pub dim: usize,
    pub vdim: i64,
    /// `h_{j,B}`.
    pub h: i64,
}

impl SystemDims {
    /// `min(rows, cols) - rank`.
    pub fn deficiency(&self) -> usize {
        self.rows.min(self.cols) - self.rank
    }
}

/// The affine matrices `M_1 ⊂ ... ⊂ M_d` at a numeric point `B`.
///
/// Rows are the `s` point rows followed by the derivative rows of orders
/// `0, 1, ..., d-1` at `B` in the chart `a_0 = 1`; `M_j` is the prefix with
/// `s + binom(j-1+N, N)` rows.
#[derive(Clone, Debug)]
pub struct InterpolationChain<F: Field> {
    field: F,
    n: usize,
    d: u32,
    s: usize,
    chart: Chart,
    b_affine: Vec<F::Elem>,
    derivative_indices: Vec<Vec<u32>>,
    rows: Matrix<F::Elem>,
}

impl<F: Field> InterpolationChain<F> {
    pub fn build(points: &PointSet<F>, d: u32, b: &[F::Elem]) -> Result<Self> {
        let f = &points.field;
        let n = points.n;
        if d < 1 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        if b.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: b.len(),
            });
        }
        let mut refs: Vec<&[F::Elem]> = points.points.iter().map(|p| p.as_slice()).collect();
        refs.push(b);
        let chart = Chart::find(f, n, &refs)?;
        let basis = MonomialBasis::affine(n, d);
        let cols = basis.len();
        let mut rows = Matrix::filled(0, cols, f.zero());
        let zero_idx = vec![0u32; n];
        for p in &points.points {
            let a = chart.affine(f, p)?;
            rows.push_row(&basis.evaluate_row(f, &zero_idx, &a));
        }
        let b_affine = chart.affine(f, b)?;
        let derivative_indices = indices_up_to(n, d - 1);
        for idx in &derivative_indices {
            rows.push_row(&basis.evaluate_row(f, idx, &b_affine));
        }
        Ok(Self {
            field: f.clone(),
            n,
            d,
            s: points.len(),
            chart,
            b_affine,
            derivative_indices,
            rows,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn b_affine(&self) -> &[F::Elem] {
        &self.b_affine
    }

    pub fn cols(&self) -> usize {
        self.rows.ncols()
    }

    /// Number of rows of `M_j`.
    pub fn rows_of(&self, j: u32) -> usize {
        self.s + forms(self.n, j - 1)
    }

    pub fn matrix(&self, j: u32) -> Matrix<F::Elem> {
        assert!(1 <= j && j <= self.d, "block index out of range");
        self.rows.prefix(self.rows_of(j))
    }

    /// Multi-indices labelling the derivative rows, in row order.
    pub fn derivative_indices(&self) -> &[Vec<u32>] {
        &self.derivative_indices
    }

    /// `rank(M_j)` for `j = 1..=d`, from one incremental elimination.
    pub fn ranks(&self) -> Vec<usize> {
        let mut basis = RowBasis::new(self.field.clone(), self.cols());
        let mut out = Vec::with_capacity(self.d as usize);
        let mut next = 0;
        for j in 1..=self.d {
            let end = self.rows_of(j);
            while next < end {
                basis.insert(self.rows.row(next));
                next += 1;
            }
            out.push(basis.rank());
        }
        out
    }

    /// `SystemDims` for every `j = 1..=d`, with `h` split at `m`.
    pub fn dims(&self, m: u32) -> Vec<SystemDims> {
        let n_forms = self.cols();
        self.ranks()
            .into_iter()
            .enumerate()
            .map(|(i, rank)| {
                let j = i as u32 + 1;
                let dim = n_forms - rank;
                let vdim = n_forms as i64 - fat_conditions(self.n, j) as i64 - self.s as i64;
                let h = if j <= m { dim as i64 - vdim } else { dim as i64 };
                SystemDims {
                    d: self.d,
                    j,
                    rows: self.rows_of(j),
                    cols: n_forms,
                    rank,
                    dim,
                    vdim,
                    h,
                }
            })
            .collect()
    }
}

pub fn dim_system<F: Field>(points: &PointSet<F>, d: u32, m: u32, j: u32, b: &[F::Elem]) -> Result<SystemDims> {
    if j < 1 || j > d {
        return Err(Error::InvalidArgument(format!("need 1 <= j <= d, got j = {j}")));
    }
    let chain = InterpolationChain::build(points, d, b)?;
    Ok(chain.dims(m).swap_remove(j as usize - 1))
}

/// `h_B = Σ_j h_{j,B}` over `j = 1..=d`; requires `|Z|` to make `M` square.
pub fn h_total<F: Field>(points: &PointSet<F>, d: u32, m: u32, b: &[F::Elem]) -> Result<i64> {
    let s = square_size(points.n, d, m)?;
    if points.len() != s {
        return Err(Error::SizeMismatch(format!(
            "|Z| = {} but square size is {s}",
            points.len()
        )));
    }
    let chain = InterpolationChain::build(points, d, b)?;
    Ok(chain.dims(m).iter().map(|x| x.h).sum())
}

/// Point rows `w(P)` plus all homogeneous partials of order `m-1` at `B`.
///
/// Valid for any `B`, including points at infinity of the affine chart.
pub fn homogeneous_matrix<F: Field>(points: &PointSet<F>, d: u32, m: u32, b: &[F::Elem]) -> Matrix<F::Elem> {
    let f = &points.field;
    let n = points.n;
    let basis = MonomialBasis::homogeneous(n, d);
    let mut rows = Matrix::filled(0, basis.len(), f.zero());
    let zero = vec![0u32; n + 1];
    for p in &points.points {
        rows.push_row(&basis.evaluate_row(f, &zero, p));
    }
    if m >= 1 && m - 1 <= d {
        for idx in exponents_of_degree(n + 1, m - 1) {
            rows.push_row(&basis.evaluate_row(f, &idx, b));
        }
    }
    rows
}

/// `dim L(d; mB + Z)` computed from the homogeneous matrix.
pub fn system_dim<F: Field>(points: &PointSet<F>, d: u32, m: u32, b: &[F::Elem]) -> usize {
    let mat = homogeneous_matrix(points, d, m, b);
    mat.ncols() - rank(&points.field, &mat)
}

/// The square matrix whose determinant is the locus polynomial at `b`.
///
/// Point rows are `w(P)` at the stored (normalized) coordinates; derivative
/// rows are the affine partials of orders `0..m-1` at `(1, b)`.
pub fn locus_matrix<F: Field>(points: &PointSet<F>, d: u32, m: u32, b_affine: &[F::Elem]) -> Matrix<F::Elem> {
    let f = &points.field;
    let n = points.n;
    let hom = MonomialBasis::homogeneous(n, d);
    let aff = MonomialBasis::affine(n, d);
    let mut rows = Matrix::filled(0, hom.len(), f.zero());
    let zero = vec![0u32; n + 1];
    for p in &points.points {
        rows.push_row(&hom.evaluate_row(f, &zero, p));
    }
    for idx in indices_up_to(n, m - 1) {
        rows.push_row(&aff.evaluate_row(f, &idx, b_affine));
    }
    rows
}

/// `dim [I_Z]_d`: forms of degree `d` through every point of `Z`.
pub fn ideal_dimension<F: Field>(points: &PointSet<F>, d: u32) -> usize {
    let f = &points.field;
    let basis = MonomialBasis::homogeneous(points.n, d);
    let zero = vec![0u32; points.n + 1];
    let rows: Vec<Vec<F::Elem>> = points
        .points
        .iter()
        .map(|p| basis.evaluate_row(f, &zero, p))
        .collect();
    let mat = Matrix::from_rows(rows, basis.len()).expect("uniform rows");
    basis.len() - rank(f, &mat)
}

/// Sampler of points `(1, b_1, ..., b_N)`; trial `t` always draws the same point.
pub fn sample_affine<F: Field>(field: &F, n: usize, seed: u64, trial: u64) -> Vec<F::Elem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let rng: &mut dyn RngCore = &mut rng;
    (0..n).map(|_| field.sample(rng)).collect()
}

fn with_leading_one<F: Field>(field: &F, b: &[F::Elem]) -> Vec<F::Elem> {
    let mut v = Vec::with_capacity(b.len() + 1);
    v.push(field.one());
    v.extend_from_slice(b);
    v
}

/// Outcome of the random-evaluation test for `F ≡ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum ZeroVerdict {
    /// Every sampled matrix was singular.
    ProbablyZero {
        /// `trials * log2(deg F / p)`; the error probability is `2^bound`.
        log2_error_bound: f64,
    },
    /// A sample where the system is empty, so `F` is not identically zero.
    NonzeroWitness { trial: u64, b: Vec<String> },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroVerdict::ProbablyZero { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroTestReport {
    pub d: u32,
    pub m: u32,
    pub points: usize,
    pub square_size: usize,
    pub deg_f: u64,
    pub prime: String,
    pub seed: u64,
    pub trials: u64,
    pub verdict: ZeroVerdict,
}

/// Evaluates the interpolation matrix at `trials` random points `B`.
///
/// For `|Z| = s` the test is `det M(B) = 0`. For `|Z| > s` it checks
/// `rank < binom(d+N, N)`, which holds exactly when every `s`-subset has a
/// singular matrix at `B`; the same error bound applies.
pub fn zero_locus_test<F: Field>(points: &PointSet<F>, d: u32, m: u32, trials: u64, seed: u64) -> Result<ZeroTestReport> {
    let f = &points.field;
    let p = f.characteristic();
    if p == 0 {
        return Err(Error::RequiresPrimeField);
    }
    let n = points.n;
    let s = square_size(n, d, m)?;
    if points.len() < s {
        return Err(Error::SizeMismatch(format!(
            "|Z| = {} is below the square size {s}",
            points.len()
        )));
    }
    let deg_f = degree_of_f(n, d, m);
    let outcomes: Vec<Option<Vec<F::Elem>>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let b = sample_affine(f, n, seed, t);
            let mat = locus_matrix(points, d, m, &b);
            let singular = if mat.nrows() == mat.ncols() {
                f.is_zero(&determinant(f, &mat).expect("square"))
            } else {
                rank(f, &mat) < mat.ncols()
            };
            (!singular).then_some(b)
        })
        .collect();
    let verdict = match outcomes.iter().position(|o| o.is_some()) {
        Some(t) => {
            let b = with_leading_one(f, outcomes[t].as_ref().expect("witness"));
            ZeroVerdict::NonzeroWitness {
                trial: t as u64,
                b: b.iter().map(|x| f.to_scalar(x).to_string()).collect(),
            }
        }
        None => ZeroVerdict::ProbablyZero {
            log2_error_bound: trials as f64 * ((deg_f as f64).log2() - (p as f64).log2()),
        },
    };
    Ok(ZeroTestReport {
        d,
        m,
        points: points.len(),
        square_size: s,
        deg_f,
        prime: p.to_string(),
        seed,
        trials,
        verdict,
    })
}

/// Generic dimension report in the sense of the unexpectedness definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnexpectednessReport {
    pub d: u32,
    pub m: u32,
    pub points: usize,
    /// `dim [I_Z]_d`.
    pub ideal_dim: usize,
    /// Whether `Z` imposes independent conditions on degree-`d` forms.
    pub independent: bool,
    /// `binom(m+N-1, N)`.
    pub fat_conditions: usize,
    /// Minimum of `dim L(d; mB+Z)` over the sampled `B`.
    pub actual: usize,
    /// `max(0, dim [I_Z]_d - binom(m+N-1, N))`.
    pub expected: usize,
    pub unexpected: bool,
    pub seed: u64,
    pub trials: u64,
    pub warnings: Vec<String>,
}

pub fn unexpectedness_report<F: Field>(points: &PointSet<F>, d: u32, m: u32, trials: u64, seed: u64) -> Result<UnexpectednessReport> {
    check_dm(d, m)?;
    let f = &points.field;
    let n = points.n;
    let ideal_dim = ideal_dimension(points, d);
    let independent = ideal_dim as i64 == forms(n, d) as i64 - points.len() as i64;
    let mut warnings = Vec::new();
    if !independent {
        warnings.push(format!(
            "DependentConditions: Z imposes {} conditions on degree-{d} forms, not {}",
            forms(n, d) - ideal_dim,
            points.len()
        ));
    }
    let r = fat_conditions(n, m);
    let actual = (0..trials.max(1))
        .into_par_iter()
        .map(|t| {
            let b = with_leading_one(f, &sample_affine(f, n, seed, t));
            system_dim(points, d, m, &b)
        })
        .min()
        .expect("at least one trial");
    let expected = ideal_dim.saturating_sub(r);
    Ok(UnexpectednessReport {
        d,
        m,
        points: points.len(),
        ideal_dim,
        independent,
        fat_conditions: r,
        actual,
        expected,
        unexpected: actual > expected,
        seed,
        trials: trials.max(1),
        warnings,
    })
}

/// The unique (up to scale) form in `L(d; mB + Z)`, in the original coordinates.
///
/// The returned form is checked to vanish on `Z` and to have multiplicity
/// at least `m` at `B`.
pub fn kernel_form<F: Field>(points: &PointSet<F>, d: u32, m: u32, b: &[F::Elem]) -> Result<Poly<F::Elem>> {
    let f = &points.field;
    let n = points.n;
    if b.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: b.len(),
        });
    }
    let mat = homogeneous_matrix(points, d, m, b);
    let ker = kernel(f, &mat);
    match ker.len() {
        0 => return Err(Error::Empty),
        1 => {}
        k => return Err(Error::NotUnique(k)),
    }
    let basis = MonomialBasis::homogeneous(n, d);
    let form = Poly::from_terms(f, n + 1, basis.entries().iter().cloned().zip(ker[0].iter().cloned()))
        .normalized(f);
    for (i, p) in points.points.iter().enumerate() {
        if !f.is_zero(&form.eval(f, p)) {
            return Err(Error::VerificationFailed(format!("form does not vanish at point {i}")));
        }
    }
    if m >= 1 {
        let parts = form.taylor(f, b, m - 1);
        if parts.iter().any(|p| !p.is_zero()) {
            return Err(Error::VerificationFailed(format!(
                "form is not {m}-fold at B"
            )));
        }
    }
    Ok(form)
}

/// Coordinates of `b` as decimal strings.
pub fn point_strings<F: Field>(field: &F, b: &[F::Elem]) -> Vec<String> {
    b.iter().map(|x| field.to_scalar(x).to_string()).collect()
}

pub fn parse_point<F: Field>(field: &F, coords: &[String]) -> Result<Vec<F::Elem>> {
    coords
        .iter()
        .map(|c| field.from_scalar(&Scalar::parse(c, field.spec())?))
        .collect()
}
