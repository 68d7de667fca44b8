//! Dense exact linear algebra: rank, determinant, nullspace.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Row-major dense matrix of field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Self {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut m = Self::filled(n, n, field.zero());
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[E]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn push_row(&mut self, row: &[E]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// The first `k` rows.
    pub fn prefix(&self, k: usize) -> Self {
        Self {
            rows: k,
            cols: self.cols,
            data: self.data[..k * self.cols].to_vec(),
        }
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            let row = self.row(r);
            data.extend(cols.iter().map(|&c| row[c].clone()));
        }
        Self {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn to_scalars<F: Field<Elem = E>>(&self, field: &F) -> Vec<Vec<Scalar>> {
        self.rows()
            .map(|r| r.iter().map(|x| field.to_scalar(x)).collect())
            .collect()
    }

    /// Row-major array of decimal strings.
    pub fn to_strings<F: Field<Elem = E>>(&self, field: &F) -> Vec<Vec<String>> {
        self.rows()
            .map(|r| r.iter().map(|x| field.to_scalar(x).to_string()).collect())
            .collect()
    }
}

impl<E> std::ops::Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (r, c): (usize, usize)) -> &E {
        &self.data[r * self.cols + c]
    }
}

impl<E> std::ops::IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut E {
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
///
/// Also returns the sign of the row permutation and the product of the
/// pivots before normalization, which together give the determinant.
fn reduce<F: Field>(field: &F, m: &mut Matrix<F::Elem>, full: bool) -> (Vec<usize>, bool, F::Elem) {
    let mut pivots = Vec::new();
    let mut odd = false;
    let mut prod = field.one();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !field.is_zero(&m[(i, c)])) else {
            continue;
        };
        if p != r {
            m.swap_rows(p, r);
            odd = !odd;
        }
        let piv = m[(r, c)].clone();
        prod = field.mul(&prod, &piv);
        let inv = field.inv(&piv).expect("nonzero pivot");
        for k in c..m.cols {
            m[(r, k)] = field.mul(&m[(r, k)], &inv);
        }
        let targets: Box<dyn Iterator<Item = usize>> = if full {
            Box::new((0..m.rows).filter(move |&i| i != r))
        } else {
            Box::new(r + 1..m.rows)
        };
        for i in targets {
            let factor = m[(i, c)].clone();
            if field.is_zero(&factor) {
                continue;
            }
            for k in c..m.cols {
                let t = field.mul(&factor, &m[(r, k)]);
                m[(i, k)] = field.sub(&m[(i, k)], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, odd, prod)
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    reduce(field, &mut work, false).0.len()
}

/// Determinant of a square matrix.
pub fn determinant<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Result<F::Elem> {
    if m.rows != m.cols {
        return Err(Error::SizeMismatch(format!(
            "determinant of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let mut work = m.clone();
    let (pivots, odd, prod) = reduce(field, &mut work, false);
    if pivots.len() < m.rows {
        return Ok(field.zero());
    }
    Ok(if odd { field.neg(&prod) } else { prod })
}

/// A basis of the right nullspace `{x : M x = 0}`.
pub fn kernel<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut work = m.clone();
    let (pivots, _, _) = reduce(field, &mut work, true);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); m.cols];
        v[free] = field.one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = field.neg(&work[(r, free)]);
        }
        out.push(v);
    }
    out
}

pub fn mul_vec<F: Field>(field: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    m.rows()
        .map(|r| {
            r.iter()
                .zip(v)
                .fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
        })
        .collect()
}

/// Row space built one row at a time; reports the rank after every insertion.
#[derive(Clone, Debug)]
pub struct RowBasis<F: Field> {
    field: F,
    cols: usize,
    /// Rows normalized with a leading 1 at `pivot`.
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> RowBasis<F> {
    pub fn new(field: F, cols: usize) -> Self {
        Self {
            field,
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `row`; returns whether it enlarged the span.
    pub fn insert(&mut self, row: &[F::Elem]) -> bool {
        assert_eq!(row.len(), self.cols);
        let f = &self.field;
        let mut v = row.to_vec();
        for (p, b) in &self.rows {
            let c = v[*p].clone();
            if !f.is_zero(&c) {
                for k in *p..self.cols {
                    v[k] = f.sub(&v[k], &f.mul(&c, &b[k]));
                }
            }
        }
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("nonzero");
        for x in &mut v[p..] {
            *x = f.mul(x, &inv);
        }
        // keep the basis sorted by pivot so reduction walks left to right
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
        true
    }

    pub fn contains(&self, row: &[F::Elem]) -> bool {
        let mut probe = self.clone();
        !probe.insert(row)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals, DEFAULT_PRIME};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(rows: &[&[i64]]) -> Matrix<num_rational::BigRational> {
        let f = Rationals;
        let cols = rows[0].len();
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| f.from_i64(v)).collect())
                .collect(),
            cols,
        )
        .unwrap()
    }

    #[test]
    fn identity_rank_and_duplicates() {
        let f = Rationals;
        let mut m = Matrix::identity(&f, 5);
        assert_eq!(rank(&f, &m), 5);
        let r0 = m.row(0).to_vec();
        let r3 = m.row(3).to_vec();
        m.push_row(&r0);
        m.push_row(&r3);
        assert_eq!(rank(&f, &m), 5);
    }

    #[test]
    fn small_determinants() {
        let f = Rationals;
        assert_eq!(determinant(&f, &q(&[&[1, 2], &[3, 4]])).unwrap(), f.from_i64(-2));
        assert_eq!(
            determinant(&f, &q(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]])).unwrap(),
            f.from_i64(-5)
        );
        assert!(determinant(&f, &q(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = Rationals;
        let m = q(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ker = kernel(&f, &m);
        assert_eq!(ker.len(), 4 - rank(&f, &m));
        for v in &ker {
            assert!(mul_vec(&f, &m, v).iter().all(|x| f.is_zero(x)));
        }
    }

    fn random_int_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, rank_cap: usize) -> Vec<Vec<i64>> {
        // product of r x k and k x c integer matrices has rank <= k
        let k = rank_cap.min(r).min(c);
        let a: Vec<Vec<i64>> = (0..r).map(|_| (0..k).map(|_| rng.random_range(-3..=3)).collect()).collect();
        let b: Vec<Vec<i64>> = (0..k).map(|_| (0..c).map(|_| rng.random_range(-3..=3)).collect()).collect();
        (0..r)
            .map(|i| (0..c).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn rank_agrees_across_fields() {
        let fq = Rationals;
        let p1 = PrimeField::new(DEFAULT_PRIME).unwrap();
        let p2 = PrimeField::new((1 << 60) + 33).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let r = rng.random_range(1..=40);
            let c = rng.random_range(1..=40);
            let cap = rng.random_range(0..=40);
            let m = random_int_matrix(&mut rng, r, c, cap);
            let mq = Matrix::from_rows(m.iter().map(|row| row.iter().map(|&v| fq.from_i64(v)).collect()).collect(), c).unwrap();
            let m1 = Matrix::from_rows(m.iter().map(|row| row.iter().map(|&v| p1.from_i64(v)).collect()).collect(), c).unwrap();
            let m2 = Matrix::from_rows(m.iter().map(|row| row.iter().map(|&v| p2.from_i64(v)).collect()).collect(), c).unwrap();
            let rq = rank(&fq, &mq);
            assert_eq!(rq, rank(&p1, &m1));
            assert_eq!(rq, rank(&p2, &m2));
        }
    }

    proptest! {
        #[test]
        fn incremental_rank_matches_batch(seed in any::<u64>()) {
            let f = PrimeField::new(DEFAULT_PRIME).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_int_matrix(&mut rng, 12, 9, 6);
            let rows: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
            let mut basis = RowBasis::new(f, 9);
            for (i, r) in rows.iter().enumerate() {
                basis.insert(r);
                let prefix = Matrix::from_rows(rows[..=i].to_vec(), 9).unwrap();
                prop_assert_eq!(basis.rank(), rank(&f, &prefix));
            }
            for r in &rows {
                prop_assert!(basis.contains(r));
            }
        }

        #[test]
        fn determinant_is_multiplicative(seed in any::<u64>()) {
            let f = PrimeField::new(DEFAULT_PRIME).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 6;
            let gen = |rng: &mut ChaCha8Rng| {
                Matrix::from_rows((0..n).map(|_| (0..n).map(|_| f.sample(rng)).collect()).collect(), n).unwrap()
            };
            let a = gen(&mut rng);
            let b = gen(&mut rng);
            let mut ab = Matrix::filled(n, n, 0u64);
            for i in 0..n {
                for j in 0..n {
                    ab[(i, j)] = (0..n).fold(0, |acc, k| f.add(&acc, &f.mul(&a[(i, k)], &b[(k, j)])));
                }
            }
            let lhs = determinant(&f, &ab).unwrap();
            let rhs = f.mul(&determinant(&f, &a).unwrap(), &determinant(&f, &b).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
