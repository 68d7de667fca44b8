//! The locus polynomial `F = det M` as a polynomial in the coordinates of `B`.
//!
//! `M` has `s` numeric point rows and `r = binom(m+N-1, N)` derivative rows
//! whose entries are monomials in `b = (a_1, ..., a_N)`. Expanding along the
//! derivative rows,
//!
//! ```text
//! det M = Σ_S ± det M[R, S] · det M[R^c, S^c]
//! ```
//!
//! over column sets `S` of size `r`. Entry `(β, k)` of `M[R, S]` is
//! `c(e_k, β) · a^(e_k - β)`, so every term of `det M[R, S]` carries the same
//! monomial `a^(Σ_{k∈S} e_k - Σ β)` and the minor is that monomial times the
//! integer determinant `det c(e_k, β)`. The integer minors depend only on
//! `(N, d, m)` and are cached across configurations.

use std::collections::HashMap;
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, Rationals, Scalar};
use crate::interpolation::{degree_of_f, forms, square_size};
use crate::linalg::{determinant, Matrix};
use crate::monomial::{binomial, derivative_coefficient_u128, indices_up_to, Exponents, MonomialBasis};
use crate::points::PointSet;
use crate::poly::Poly;

/// Default cap on the number of column subsets.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

type SymbolicMinor = Option<(BigInt, Exponents)>;

/// Expands `det M` for a fixed `(N, d, m)`, reusing integer minors between calls.
#[derive(Debug)]
pub struct LocusExpander {
    n: usize,
    d: u32,
    m: u32,
    budget: u128,
    affine: MonomialBasis,
    derivatives: Vec<Exponents>,
    minors: Arc<DashMap<Vec<u16>, SymbolicMinor>>,
}

impl LocusExpander {
    pub fn new(n: usize, d: u32, m: u32, budget: u128) -> Result<Self> {
        square_size(n, d, m)?;
        let cols = forms(n, d);
        let r = indices_up_to(n, m - 1).len();
        let needed = binomial(cols as u64, r as u64);
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        Ok(Self {
            n,
            d,
            m,
            budget,
            affine: MonomialBasis::affine(n, d),
            derivatives: indices_up_to(n, m - 1),
            minors: Arc::new(DashMap::new()),
        })
    }

    pub fn budget(&self) -> u128 {
        self.budget
    }

    /// Number of cached integer minors.
    pub fn cached(&self) -> usize {
        self.minors.len()
    }

    fn symbolic_minor(&self, cols: &[u16]) -> SymbolicMinor {
        if let Some(v) = self.minors.get(cols) {
            return v.clone();
        }
        let v = self.compute_symbolic(cols);
        self.minors.insert(cols.to_vec(), v.clone());
        v
    }

    fn compute_symbolic(&self, cols: &[u16]) -> SymbolicMinor {
        let n = self.n;
        // monomial a^(Σ e_k - Σ β); a negative entry forces every term to vanish
        let mut gamma = vec![0i64; n];
        for &k in cols {
            for (g, &e) in gamma.iter_mut().zip(&self.affine.entries()[k as usize]) {
                *g += e as i64;
            }
        }
        for beta in &self.derivatives {
            for (g, &b) in gamma.iter_mut().zip(beta) {
                *g -= b as i64;
            }
        }
        if gamma.iter().any(|&g| g < 0) {
            return None;
        }
        let q = Rationals;
        let r = cols.len();
        let rows: Vec<Vec<BigRational>> = self
            .derivatives
            .iter()
            .map(|beta| {
                cols.iter()
                    .map(|&k| {
                        let e = &self.affine.entries()[k as usize];
                        match derivative_coefficient_u128(e, beta) {
                            Some(c) => BigRational::from_integer(BigInt::from(c)),
                            None => BigRational::zero(),
                        }
                    })
                    .collect()
            })
            .collect();
        let det = determinant(&q, &Matrix::from_rows(rows, r).expect("square")).expect("square");
        if det.is_zero() {
            return None;
        }
        Some((det.to_integer(), gamma.iter().map(|&g| g as u32).collect()))
    }

    /// `F` as a homogeneous polynomial in `a_0..a_N` of degree `deg F`, or zero.
    pub fn expand<F: Field>(&self, points: &PointSet<F>) -> Result<Poly<F::Elem>> {
        let f = &points.field;
        let n = self.n;
        if points.n != n {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: points.n + 1,
            });
        }
        let s = square_size(n, self.d, self.m)?;
        if points.len() != s {
            return Err(Error::SizeMismatch(format!(
                "|Z| = {} but the square size for (N, d, m) = ({n}, {}, {}) is {s}",
                points.len(),
                self.d,
                self.m
            )));
        }
        let hom = MonomialBasis::homogeneous(n, self.d);
        let zero = vec![0u32; n + 1];
        let point_rows: Vec<Vec<F::Elem>> = points
            .points
            .iter()
            .map(|p| hom.evaluate_row(f, &zero, p))
            .collect();
        let cols = hom.len();
        let r = self.derivatives.len();
        // rows R are s+1..s+r (1-based)
        let row_sum: usize = (s + 1..=s + r).sum();
        let subsets = combinations(cols, r);
        let point_matrix = Matrix::from_rows(point_rows, cols)?;
        let all_rows: Vec<usize> = (0..s).collect();

        let partial = subsets
            .par_iter()
            .fold(HashMap::<Exponents, F::Elem>::new, |mut acc, sub| {
                let Some((c, gamma)) = self.symbolic_minor(sub) else {
                    return acc;
                };
                let comp: Vec<usize> = complement(cols, sub);
                let numeric = determinant(f, &point_matrix.select(&all_rows, &comp)).expect("square");
                if f.is_zero(&numeric) {
                    return acc;
                }
                let col_sum: usize = sub.iter().map(|&k| k as usize + 1).sum();
                let mut term = f.mul(&numeric, &f.from_scalar(&Scalar::Rational(BigRational::from_integer(c))).expect("integer"));
                if (row_sum + col_sum) % 2 == 1 {
                    term = f.neg(&term);
                }
                let slot = acc.entry(gamma).or_insert_with(|| f.zero());
                *slot = f.add(slot, &term);
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    let slot = a.entry(k).or_insert_with(|| f.zero());
                    *slot = f.add(slot, &v);
                }
                a
            });
        let affine = Poly::from_terms(f, n, partial);
        let deg = degree_of_f(n, self.d, self.m) as u32;
        affine.homogenize(f, deg)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur: Vec<u16> = (0..k as u16).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| (cur[i] as usize) < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for t in i + 1..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

fn complement(n: usize, sub: &[u16]) -> Vec<usize> {
    let mut out = Vec::with_capacity(n - sub.len());
    let mut it = sub.iter().peekable();
    for c in 0..n {
        if it.peek().map(|&&x| x as usize) == Some(c) {
            it.next();
        } else {
            out.push(c);
        }
    }
    out
}

/// One-shot expansion with a fresh minor cache.
pub fn symbolic_locus<F: Field>(points: &PointSet<F>, d: u32, m: u32, budget: u128) -> Result<Poly<F::Elem>> {
    LocusExpander::new(points.n, d, m, budget)?.expand(points)
}

/// Multiplicity of the locus polynomial at a point `B`.
pub fn multiplicity_at<F: Field>(field: &F, locus: &Poly<F::Elem>, b: &[F::Elem]) -> Result<u32> {
    locus.multiplicity_at(field, b)
}
