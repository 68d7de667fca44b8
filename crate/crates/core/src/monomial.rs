//! Monomial bases, multi-indices and rows of (derivatives of) monomial values.
//!
//! Homogeneous bases in `a_0..a_N` are listed lexicographically descending
//! with `a_0` heaviest, so the first entry is `a_0^d` and the last `a_N^d`.
//! Dropping `e_0` from that list gives the dehomogenized basis in graded
//! order: `1, a_1, a_2, a_1^2, a_1 a_2, a_2^2, ...` for `N = 2`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::field::Field;

/// Exponents of a monomial; also used for derivative multi-indices.
pub type Exponents = Vec<u32>;

/// Exact binomial coefficient. Panics on overflow of `u128`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial overflow")
            / (i + 1) as u128;
    }
    acc
}

/// Binomial with possibly negative upper argument clamped to zero.
pub fn binom_i(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n as u64, k as u64) as i64
    }
}

/// All exponent vectors with `nvars` entries summing to exactly `degree`,
/// lexicographically descending.
pub fn exponents_of_degree(nvars: usize, degree: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, degree, &mut cur, &mut out);
    out
}

/// Derivative multi-indices of total order `0..=max_order`, grouped by
/// order ascending and descending-lex within each order.
pub fn indices_up_to(nvars: usize, max_order: u32) -> Vec<Exponents> {
    (0..=max_order)
        .flat_map(|t| exponents_of_degree(nvars, t))
        .collect()
}

/// An ordered monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    degree: u32,
    homogeneous: bool,
    entries: Vec<Exponents>,
    index: HashMap<Exponents, usize>,
}

impl MonomialBasis {
    /// Forms of degree `d` in `a_0..a_N`.
    pub fn homogeneous(n: usize, d: u32) -> Self {
        Self::build(n, d, true)
    }

    /// The same basis after setting `a_0 = 1`.
    pub fn affine(n: usize, d: u32) -> Self {
        Self::build(n, d, false)
    }

    fn build(n: usize, degree: u32, homogeneous: bool) -> Self {
        let mut entries = exponents_of_degree(n + 1, degree);
        if !homogeneous {
            for e in &mut entries {
                e.remove(0);
            }
        }
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Self {
            n,
            degree,
            homogeneous,
            entries,
            index,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// Number of variables a point fed to this basis must have.
    pub fn arity(&self) -> usize {
        if self.homogeneous {
            self.n + 1
        } else {
            self.n
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Exponents] {
        &self.entries
    }

    pub fn position(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Homogeneous exponents of entry `k` (restores `e_0` for affine bases).
    pub fn homogeneous_exponents(&self, k: usize) -> Exponents {
        let e = &self.entries[k];
        if self.homogeneous {
            e.clone()
        } else {
            let rest: u32 = e.iter().sum();
            let mut h = Vec::with_capacity(e.len() + 1);
            h.push(self.degree - rest);
            h.extend_from_slice(e);
            h
        }
    }

    /// Human-readable name of entry `k`, e.g. `a0^2*a1`.
    pub fn label(&self, k: usize) -> String {
        monomial_label(&self.entries[k], if self.homogeneous { 0 } else { 1 })
    }

    /// `idx`-th derivative of every basis monomial, evaluated at `point`.
    pub fn evaluate_row<F: Field>(&self, field: &F, idx: &[u32], point: &[F::Elem]) -> Vec<F::Elem> {
        evaluate_row(field, self, idx, point)
    }
}

pub(crate) fn monomial_label(e: &[u32], first_var: usize) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0)
        .map(|(i, &x)| {
            if x == 1 {
                format!("a{}", i + first_var)
            } else {
                format!("a{}^{}", i + first_var, x)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// `∂^idx a^e = coeff * a^result`; `None` when the derivative vanishes.
///
/// The coefficient is the product of falling factorials `e_i (e_i - 1) ... (e_i - idx_i + 1)`.
pub fn differentiate_monomial(e: &[u32], idx: &[u32]) -> Option<(BigUint, Exponents)> {
    assert_eq!(e.len(), idx.len(), "exponent and index lengths differ");
    let mut coeff = BigUint::one();
    let mut out = Vec::with_capacity(e.len());
    for (&ei, &ki) in e.iter().zip(idx) {
        if ki > ei {
            return None;
        }
        for t in 0..ki {
            coeff *= ei - t;
        }
        out.push(ei - ki);
    }
    Some((coeff, out))
}

/// Falling-factorial coefficient as a field element.
pub fn derivative_coefficient<F: Field>(field: &F, e: &[u32], idx: &[u32]) -> Option<F::Elem> {
    let mut c = field.one();
    for (&ei, &ki) in e.iter().zip(idx) {
        if ki > ei {
            return None;
        }
        for t in 0..ki {
            c = field.mul(&c, &field.from_u64((ei - t) as u64));
        }
    }
    Some(c)
}

/// Integer falling-factorial coefficient, `None` when it vanishes.
pub fn derivative_coefficient_u128(e: &[u32], idx: &[u32]) -> Option<u128> {
    differentiate_monomial(e, idx).map(|(c, _)| c.to_u128().expect("coefficient overflow"))
}

/// Powers `x^0..=x^max` of every coordinate.
pub(crate) fn power_table<F: Field>(field: &F, point: &[F::Elem], max: u32) -> Vec<Vec<F::Elem>> {
    point
        .iter()
        .map(|x| {
            let mut row = Vec::with_capacity(max as usize + 1);
            row.push(field.one());
            for i in 0..max as usize {
                row.push(field.mul(&row[i], x));
            }
            row
        })
        .collect()
}

/// Entry `k` is `∂^idx m_k (point)` for the `k`-th basis monomial `m_k`.
pub fn evaluate_row<F: Field>(
    field: &F,
    basis: &MonomialBasis,
    idx: &[u32],
    point: &[F::Elem],
) -> Vec<F::Elem> {
    assert_eq!(point.len(), basis.arity(), "point arity");
    assert_eq!(idx.len(), basis.arity(), "index arity");
    let pw = power_table(field, point, basis.degree());
    basis
        .entries()
        .iter()
        .map(|e| match derivative_coefficient(field, e, idx) {
            None => field.zero(),
            Some(c) => e.iter().zip(idx).enumerate().fold(c, |acc, (i, (&ei, &ki))| {
                field.mul(&acc, &pw[i][(ei - ki) as usize])
            }),
        })
        .collect()
}
