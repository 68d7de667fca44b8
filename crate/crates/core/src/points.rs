//! Projective point configurations and the affine chart `a_0 = 1`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{normalize, Field, FieldSpec, Rationals, Scalar};

/// A named set of distinct points of `P^N`, stored normalized so the first
/// nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfiguration {
    pub name: String,
    n: usize,
    field: FieldSpec,
    points: Vec<Vec<Scalar>>,
}

impl PointConfiguration {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        field: FieldSpec,
        points: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        field.validate()?;
        let normalized = crate::with_field!(field, |f| normalize_all(&f, n, &points)?);
        Ok(Self {
            name: name.into(),
            n,
            field,
            points: normalized,
        })
    }

    /// Rational configuration from integer coordinates.
    pub fn from_ints(name: impl Into<String>, n: usize, points: &[Vec<i64>]) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| p.iter().map(|&v| Scalar::int(v)).collect())
            .collect();
        Self::new(name, n, FieldSpec::Rational, pts)
    }

    /// Configuration from coordinates already living in `f`.
    pub fn from_elems<F: Field>(name: impl Into<String>, n: usize, f: &F, points: &[Vec<F::Elem>]) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| p.iter().map(|x| f.to_scalar(x)).collect())
            .collect();
        Self::new(name, n, f.spec(), pts)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    /// Points as decimal strings.
    pub fn point_strings(&self) -> Vec<Vec<String>> {
        self.points
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).collect())
            .collect()
    }

    pub fn subset(&self, keep: &[usize], name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            n: self.n,
            field: self.field,
            points: keep.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    pub fn without(&self, drop: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.len()).filter(|i| !drop.contains(i)).collect();
        self.subset(&keep, format!("{} minus {:?}", self.name, drop))
    }

    /// Index of a point given in any scaling.
    pub fn index_of(&self, p: &[Scalar]) -> Option<usize> {
        crate::with_field!(self.field, |f| {
            let v: Vec<_> = p.iter().map(|x| f.from_scalar(x)).collect::<Result<_>>().ok()?;
            let v = normalize(&f, &v)?;
            let v: Vec<Scalar> = v.iter().map(|x| f.to_scalar(x)).collect();
            self.points.iter().position(|q| *q == v)
        })
    }

    /// Coordinates in field `f`.
    ///
    /// Rational configurations can be reduced into any prime field; prime
    /// configurations only live in their own field.
    pub fn point_set<F: Field>(&self, f: &F) -> Result<PointSet<F>> {
        match (self.field, f.spec()) {
            (FieldSpec::Rational, _) => {}
            (a, b) if a == b => {}
            (a, b) => {
                return Err(Error::FieldMismatch(format!(
                    "configuration over {a} used in {b}"
                )))
            }
        }
        let raw: Vec<Vec<F::Elem>> = self
            .points
            .iter()
            .map(|p| p.iter().map(|x| f.from_scalar(x)).collect())
            .collect::<Result<_>>()?;
        let points = normalize_elems(f, self.n, raw)?;
        Ok(PointSet {
            field: f.clone(),
            n: self.n,
            points,
        })
    }
}

fn normalize_all<F: Field>(f: &F, n: usize, points: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let raw: Vec<Vec<F::Elem>> = points
        .iter()
        .map(|p| p.iter().map(|x| f.from_scalar(x)).collect())
        .collect::<Result<_>>()?;
    Ok(normalize_elems(f, n, raw)?
        .iter()
        .map(|p| p.iter().map(|x| f.to_scalar(x)).collect())
        .collect())
}

fn normalize_elems<F: Field>(f: &F, n: usize, raw: Vec<Vec<F::Elem>>) -> Result<Vec<Vec<F::Elem>>> {
    let mut seen: HashMap<Vec<F::Elem>, usize> = HashMap::new();
    let mut out = Vec::with_capacity(raw.len());
    for (i, p) in raw.into_iter().enumerate() {
        if p.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: p.len(),
            });
        }
        let p = normalize(f, &p).ok_or(Error::ZeroPoint(i))?;
        if let Some(&j) = seen.get(&p) {
            return Err(Error::DuplicatePoint(j, i));
        }
        seen.insert(p.clone(), i);
        out.push(p);
    }
    Ok(out)
}

/// Points of a configuration as elements of a concrete field.
#[derive(Clone, Debug)]
pub struct PointSet<F: Field> {
    pub field: F,
    pub n: usize,
    pub points: Vec<Vec<F::Elem>>,
}

impl<F: Field> PointSet<F> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn subset(&self, keep: &[usize]) -> Self {
        Self {
            field: self.field.clone(),
            n: self.n,
            points: keep.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    pub fn to_configuration(&self, name: impl Into<String>) -> Result<PointConfiguration> {
        PointConfiguration::from_elems(name, self.n, &self.field, &self.points)
    }
}

/// Rational points convenience for tests and generators.
pub fn rational_points(points: &[Vec<i64>]) -> Vec<Vec<num_rational::BigRational>> {
    let f = Rationals;
    points
        .iter()
        .map(|p| p.iter().map(|&v| f.from_i64(v)).collect())
        .collect()
}

/// Coordinate change `x_0 -> x_0 + c_1 x_1 + ... + c_N x_N`, other coordinates fixed.
///
/// Chosen so every point of interest gets a nonzero first coordinate, which
/// makes dehomogenization at `a_0 = 1` valid. The identity is used whenever possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub shift: Vec<i64>,
}

impl Chart {
    pub fn identity(n: usize) -> Self {
        Self { shift: vec![0; n] }
    }

    pub fn is_identity(&self) -> bool {
        self.shift.iter().all(|&c| c == 0)
    }

    /// First shift, in order of increasing max-norm and then lexicographically,
    /// that moves every point off the hyperplane `x_0 = 0`.
    pub fn find<F: Field>(field: &F, n: usize, points: &[&[F::Elem]]) -> Result<Self> {
        for radius in 0i64..=64 {
            let mut found = None;
            for_each_shift(n, radius, &mut |c| {
                if found.is_none() {
                    let chart = Chart { shift: c.to_vec() };
                    if points.iter().all(|p| !field.is_zero(&chart.first(field, p))) {
                        found = Some(chart);
                    }
                }
            });
            if let Some(c) = found {
                return Ok(c);
            }
        }
        Err(Error::InvalidArgument("no small affine chart covers the points".into()))
    }

    fn first<F: Field>(&self, field: &F, p: &[F::Elem]) -> F::Elem {
        self.shift
            .iter()
            .zip(&p[1..])
            .fold(p[0].clone(), |acc, (&c, x)| {
                field.add(&acc, &field.mul(&field.from_i64(c), x))
            })
    }

    pub fn apply<F: Field>(&self, field: &F, p: &[F::Elem]) -> Vec<F::Elem> {
        let mut q = p.to_vec();
        q[0] = self.first(field, p);
        q
    }

    /// Affine coordinates `(x_1/x_0, ..., x_N/x_0)` after the change.
    pub fn affine<F: Field>(&self, field: &F, p: &[F::Elem]) -> Result<Vec<F::Elem>> {
        let q = self.apply(field, p);
        let inv = field
            .inv(&q[0])
            .ok_or_else(|| Error::InvalidArgument("point at infinity of the chart".into()))?;
        Ok(q[1..].iter().map(|x| field.mul(x, &inv)).collect())
    }

    pub fn describe(&self) -> String {
        if self.is_identity() {
            return "identity".into();
        }
        let mut s = "x0' = x0".to_string();
        for (i, &c) in self.shift.iter().enumerate() {
            if c != 0 {
                s.push_str(&format!(" {} {}*x{}", if c < 0 { '-' } else { '+' }, c.abs(), i + 1));
            }
        }
        s
    }
}

fn for_each_shift(n: usize, radius: i64, visit: &mut dyn FnMut(&[i64])) {
    let mut cur = vec![0i64; n];
    fn rec(i: usize, radius: i64, hit: bool, cur: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64])) {
        if i == cur.len() {
            if hit || radius == 0 {
                visit(cur);
            }
            return;
        }
        for c in -radius..=radius {
            cur[i] = c;
            rec(i + 1, radius, hit || c.abs() == radius, cur, visit);
        }
    }
    rec(0, radius, false, &mut cur, visit);
}
