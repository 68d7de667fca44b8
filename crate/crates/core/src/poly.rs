//! Sparse multivariate polynomials, used for locus polynomials and kernel forms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, Scalar};
use crate::monomial::{binomial, monomial_label, power_table, Exponents};

/// Polynomial over `F` as an exponent-vector to coefficient map (no zero coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<E> {
    nvars: usize,
    terms: BTreeMap<Exponents, E>,
}

impl<E: Clone> Poly<E> {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms with `a_0` heaviest first.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &E)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, e: &[u32]) -> Option<&E> {
        self.terms.get(e)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn add_term<F: Field<Elem = E>>(&mut self, field: &F, e: Exponents, c: E) {
        assert_eq!(e.len(), self.nvars, "exponent length");
        if field.is_zero(&c) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = field.add(o.get(), &c);
                if field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn from_terms<F: Field<Elem = E>>(
        field: &F,
        nvars: usize,
        terms: impl IntoIterator<Item = (Exponents, E)>,
    ) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(field, e, c);
        }
        p
    }

    pub fn eval<F: Field<Elem = E>>(&self, field: &F, point: &[E]) -> E {
        assert_eq!(point.len(), self.nvars, "point arity");
        let max = self
            .terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0);
        let pw = power_table(field, point, max);
        self.terms.iter().fold(field.zero(), |acc, (e, c)| {
            let m = e
                .iter()
                .enumerate()
                .fold(c.clone(), |t, (i, &k)| field.mul(&t, &pw[i][k as usize]));
            field.add(&acc, &m)
        })
    }

    /// Multiplies every monomial by `a_0^(degree - deg)` after prepending a
    /// new first variable `a_0`.
    pub fn homogenize<F: Field<Elem = E>>(&self, field: &F, degree: u32) -> Result<Self> {
        let mut out = Self::zero(self.nvars + 1);
        for (e, c) in &self.terms {
            let d: u32 = e.iter().sum();
            if d > degree {
                return Err(Error::InvalidArgument(format!(
                    "term of degree {d} exceeds homogenization degree {degree}"
                )));
            }
            let mut h = Vec::with_capacity(e.len() + 1);
            h.push(degree - d);
            h.extend_from_slice(e);
            out.add_term(field, h, c.clone());
        }
        Ok(out)
    }

    /// Sets `a_0 = 1`.
    pub fn dehomogenize<F: Field<Elem = E>>(&self, field: &F) -> Self {
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            out.add_term(field, e[1..].to_vec(), c.clone());
        }
        out
    }

    /// Coefficients of `P(B + y)` grouped by total degree in `y`, up to `max_order`.
    pub fn taylor<F: Field<Elem = E>>(&self, field: &F, b: &[E], max_order: u32) -> Vec<Self> {
        assert_eq!(b.len(), self.nvars, "point arity");
        let maxe = self
            .terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0);
        let pw = power_table(field, b, maxe);
        let mut out = vec![Self::zero(self.nvars); max_order as usize + 1];
        for (e, c) in &self.terms {
            // iterate over all k <= e with |k| <= max_order
            let mut k = vec![0u32; e.len()];
            loop {
                let order: u32 = k.iter().sum();
                if order <= max_order {
                    let mut t = c.clone();
                    for i in 0..e.len() {
                        let bin = binomial(e[i] as u64, k[i] as u64);
                        t = field.mul(&t, &from_u128(field, bin));
                        t = field.mul(&t, &pw[i][(e[i] - k[i]) as usize]);
                    }
                    out[order as usize].add_term(field, k.clone(), t);
                }
                // odometer step over k <= e
                let Some(i) = (0..e.len()).find(|&i| k[i] < e[i]) else {
                    break;
                };
                k[i] += 1;
                k[..i].iter_mut().for_each(|x| *x = 0);
            }
        }
        out
    }

    /// Least `t` such that some order-`t` partial derivative is nonzero at `b`.
    ///
    /// The order-`t` Taylor coefficient at `b` is `∂^k P(b) / k!`, and `k!` is
    /// a unit whenever the characteristic exceeds the degree.
    pub fn multiplicity_at<F: Field<Elem = E>>(&self, field: &F, b: &[E]) -> Result<u32> {
        let deg = self.degree().ok_or(Error::ZeroPolynomial)?;
        let parts = self.taylor(field, b, deg);
        Ok(parts
            .iter()
            .position(|p| !p.is_zero())
            .expect("nonzero polynomial has a nonzero Taylor part") as u32)
    }

    /// Formal partial derivative `∂^idx P`.
    pub fn derivative<F: Field<Elem = E>>(&self, field: &F, idx: &[u32]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if let Some(k) = crate::monomial::derivative_coefficient(field, e, idx) {
                let r = e.iter().zip(idx).map(|(a, b)| a - b).collect();
                out.add_term(field, r, field.mul(c, &k));
            }
        }
        out
    }

    /// Divides by the first coefficient (in term order) so the result is monic.
    pub fn normalized<F: Field<Elem = E>>(&self, field: &F) -> Self {
        let Some((_, lead)) = self.terms().next() else {
            return self.clone();
        };
        let inv = field.inv(lead).expect("nonzero coefficient");
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), field.mul(c, &inv)))
                .collect(),
        }
    }

    pub fn to_record<F: Field<Elem = E>>(&self, field: &F) -> PolyRecord {
        PolyRecord {
            field: field.spec(),
            nvars: self.nvars,
            degree: self.degree(),
            zero: self.is_zero(),
            terms: self
                .terms()
                .map(|(e, c)| TermRecord {
                    exponents: e.clone(),
                    coeff: field.to_scalar(c).to_string(),
                })
                .collect(),
        }
    }

    pub fn from_record<F: Field<Elem = E>>(field: &F, rec: &PolyRecord) -> Result<Self> {
        let mut p = Self::zero(rec.nvars);
        for t in &rec.terms {
            if t.exponents.len() != rec.nvars {
                return Err(Error::DimensionMismatch {
                    expected: rec.nvars,
                    found: t.exponents.len(),
                });
            }
            let c = field.from_scalar(&Scalar::parse(&t.coeff, field.spec())?)?;
            p.add_term(field, t.exponents.clone(), c);
        }
        Ok(p)
    }

    /// Readable form such as `3*a0^2*a1 - a2^3`.
    pub fn display<F: Field<Elem = E>>(&self, field: &F) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            let s = field.to_scalar(c).to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_label(e, 0);
            match (mag.as_str(), mono.as_str()) {
                (m, "1") => out.push_str(m),
                ("1", m) => out.push_str(m),
                (c, m) => {
                    out.push_str(c);
                    out.push('*');
                    out.push_str(m);
                }
            }
        }
        out
    }
}

pub(crate) fn from_u128<F: Field>(field: &F, v: u128) -> F::Elem {
    let hi = field.from_u64((v >> 64) as u64);
    let lo = field.from_u64(v as u64);
    let two64 = field.mul(&field.from_u64(1 << 32), &field.from_u64(1 << 32));
    field.add(&field.mul(&hi, &two64), &lo)
}

/// Serialized polynomial: terms with exponent vectors and decimal-string coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub field: FieldSpec,
    pub nvars: usize,
    pub degree: Option<u32>,
    pub zero: bool,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Exponents,
    pub coeff: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals, DEFAULT_PRIME};
    use proptest::prelude::*;

    fn q() -> Rationals {
        Rationals
    }

    #[test]
    fn eval_and_display() {
        let f = q();
        // x^2 - 2xy + 3
        let p = Poly::from_terms(
            &f,
            2,
            [
                (vec![2, 0], f.from_i64(1)),
                (vec![1, 1], f.from_i64(-2)),
                (vec![0, 0], f.from_i64(3)),
            ],
        );
        assert_eq!(p.eval(&f, &[f.from_i64(2), f.from_i64(5)]), f.from_i64(-13));
        assert_eq!(p.display(&f), "a0^2 - 2*a0*a1 + 3");
        assert_eq!(p.degree(), Some(2));
        assert!(!p.is_homogeneous());
        let h = p.homogenize(&f, 2).unwrap();
        assert!(h.is_homogeneous());
        assert_eq!(h.dehomogenize(&f), p);
    }

    #[test]
    fn multiplicity_of_node_and_cusp() {
        let f = q();
        // y^2 z - x^3 - x^2 z : node at (0:0:1)
        let p = Poly::from_terms(
            &f,
            3,
            [
                (vec![0, 2, 1], f.from_i64(1)),
                (vec![3, 0, 0], f.from_i64(-1)),
                (vec![2, 0, 1], f.from_i64(-1)),
            ],
        );
        let pt = |v: [i64; 3]| v.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>();
        assert_eq!(p.multiplicity_at(&f, &pt([0, 0, 1])).unwrap(), 2);
        assert_eq!(p.multiplicity_at(&f, &pt([-1, 0, 1])).unwrap(), 1);
        assert_eq!(p.multiplicity_at(&f, &pt([1, 1, 1])).unwrap(), 0);
        assert!(Poly::<num_rational::BigRational>::zero(3)
            .multiplicity_at(&f, &pt([1, 1, 1]))
            .is_err());
    }

    #[test]
    fn record_round_trip() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let p = Poly::from_terms(&f, 3, [(vec![1, 1, 0], 5u64), (vec![0, 0, 2], DEFAULT_PRIME - 1)]);
        let rec = p.to_record(&f);
        let j = serde_json::to_string(&rec).unwrap();
        let back: PolyRecord = serde_json::from_str(&j).unwrap();
        assert_eq!(Poly::from_record(&f, &back).unwrap(), p);
    }

    proptest! {
        #[test]
        fn taylor_agrees_with_partials(
            coeffs in prop::collection::vec(-5i64..5, 10),
            b in prop::collection::vec(-4i64..4, 3),
        ) {
            // a random cubic form, compared against formal partials at b
            let f = q();
            let basis = crate::monomial::exponents_of_degree(3, 3);
            let p = Poly::from_terms(&f, 3, basis.iter().cloned().zip(coeffs.iter().map(|&c| f.from_i64(c))));
            let b: Vec<_> = b.iter().map(|&x| f.from_i64(x)).collect();
            let parts = p.taylor(&f, &b, 3);
            for t in 0..=3u32 {
                for k in crate::monomial::exponents_of_degree(3, t) {
                    let fact: i64 = k.iter().map(|&x| (1..=x as i64).product::<i64>()).product();
                    let partial = p.derivative(&f, &k).eval(&f, &b);
                    let tay = parts[t as usize].coefficient(&k).cloned().unwrap_or_else(|| f.zero());
                    prop_assert_eq!(partial, tay * f.from_i64(fact));
                }
            }
        }
    }
}
