use super::{ConfigurationRecord, Source, Validator};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Scalar};
use crate::incidence::{dualize, WeakTable};
use crate::points::PointConfiguration;
use crate::primes::{find_prime_with_unity, primitive_root_of_unity};

fn table(entries: &[(usize, usize)]) -> WeakTable {
    let mut t = WeakTable::new();
    for &(k, v) in entries {
        if v > 0 {
            *t.entry(k).or_insert(0) += v;
        }
    }
    t
}

/// A prime field holding a primitive `order`-th root of unity, and that root.
fn field_with_unity(order: u64, prime: Option<u64>) -> Result<(PrimeField, u64)> {
    let p = match prime {
        Some(p) => p,
        None => find_prime_with_unity(order, 61)?,
    };
    let f = PrimeField::new(p)?;
    let z = primitive_root_of_unity(p, order).map_err(|_| Error::FieldLacksUnity { p, order })?;
    Ok((f, z))
}

fn residues(f: &PrimeField, rows: &[Vec<u64>]) -> Vec<Vec<Scalar>> {
    rows.iter()
        .map(|r| r.iter().map(|x| f.to_scalar(x)).collect())
        .collect()
}

/// Lines of `A(4k+1, 1)` as coefficient triples: the `2k` sides of the
/// regular `2k`-gon, its `2k` symmetry axes, and the line at infinity.
pub fn a4k1_lines(f: &PrimeField, zeta: u64, k: u64) -> Vec<Vec<u64>> {
    let order = 4 * k;
    let pw = |e: i64| f.pow(&zeta, e.rem_euclid(order as i64) as u64);
    let mut lines = Vec::new();
    for t in 0..2 * k as i64 {
        lines.push(vec![1, f.neg(&pw(2 * t)), 0]);
    }
    let c = f.neg(&f.add(&zeta, &pw(-1)));
    for j in 0..2 * k as i64 {
        lines.push(vec![pw(-(2 * j + 1)), pw(2 * j + 1), c]);
    }
    lines.push(vec![0, 0, 1]);
    lines
}

/// Dual of `A(4k+1, 1)` over a prime field with primitive `4k`-th roots of unity.
pub fn gen_a4k1(k: u64, prime: Option<u64>) -> Result<ConfigurationRecord> {
    if k < 2 {
        return Err(Error::InvalidArgument("A(4k+1,1) needs a polygon with 2k >= 4 sides".into()));
    }
    let (f, zeta) = field_with_unity(4 * k, prime)?;
    let lines = a4k1_lines(&f, zeta, k);
    let name = format!("a4k1-{k}");
    let config = dualize(name, f.spec(), residues(&f, &lines))?;
    let ku = k as usize;
    let want = table(&[(3, 2 * ku * (ku - 1)), (4, ku), (2 * ku, 1)]);
    let rec = ConfigurationRecord::from_configuration(
        &config,
        Source::Generated,
        format!("dual of the simplicial arrangement A({},1) from a regular {}-gon", 4 * k + 1, 2 * k),
    )
    .with_expected_table(&want);
    rec.validate()?;
    Ok(rec)
}

const A30_FINITE: [(i64, i64); 24] = [
    (0, 0),
    (-2, 6),
    (2, 6),
    (2, -6),
    (-2, -6),
    (2, -2),
    (-2, -2),
    (2, 2),
    (-2, 2),
    (-4, 0),
    (4, 0),
    (0, 4),
    (0, -4),
    (-4, 4),
    (-4, -4),
    (4, -4),
    (4, 4),
    (0, 2),
    (0, -2),
    (1, -1),
    (1, 1),
    (-1, -1),
    (-1, 1),
    (0, -8),
];

const A30_INFINITE: [(i64, i64); 6] = [(0, 1), (1, 0), (1, 3), (1, 1), (1, -3), (1, -1)];

/// A rational realization of 30 points with the weak table of the dual of
/// `A(30,3)`; `minus` drops the point at infinity `(1:1:0)`.
pub fn gen_a30_3(minus: bool) -> Result<ConfigurationRecord> {
    let mut pts: Vec<Vec<i64>> = A30_FINITE.iter().map(|&(x, y)| vec![x, y, 1]).collect();
    for &(x, y) in &A30_INFINITE {
        if minus && (x, y) == (1, 1) {
            continue;
        }
        pts.push(vec![x, y, 0]);
    }
    let (name, want) = if minus {
        ("a30-3-minus", table(&[(3, 42), (4, 18), (5, 5), (7, 2), (8, 1)]))
    } else {
        ("a30-3", table(&[(3, 44), (4, 17), (5, 6), (6, 1), (7, 1), (8, 2)]))
    };
    let config = PointConfiguration::from_ints(name, 2, &pts)?;
    let rec = ConfigurationRecord::from_configuration(
        &config,
        Source::Generated,
        "rational points realizing the weak combinatorics of the dual of A(30,3)",
    )
    .with_expected_table(&want);
    rec.validate()?;
    Ok(rec)
}

const A13: [[i64; 3]; 13] = [
    [0, 0, 1],
    [-2, -2, 1],
    [2, 2, 1],
    [-2, 2, 1],
    [-4, 0, 1],
    [0, 4, 1],
    [0, -4, 1],
    [-4, -4, 1],
    [0, 1, 0],
    [1, 0, 0],
    [1, 3, 0],
    [1, 1, 0],
    [1, -1, 0],
];

/// 13 rational points with the weak table `{3:10, 4:3, 5:2}` of the dual of `A(13,3)`.
pub fn gen_a13_3() -> Result<ConfigurationRecord> {
    let pts: Vec<Vec<i64>> = A13.iter().map(|p| p.to_vec()).collect();
    let config = PointConfiguration::from_ints("a13-3", 2, &pts)?;
    let rec = ConfigurationRecord::from_configuration(
        &config,
        Source::Generated,
        "subset of the a30-3 points found by search to match the dual of A(13,3)",
    )
    .with_expected_table(&table(&[(3, 10), (4, 3), (5, 2)]));
    rec.validate()?;
    Ok(rec)
}

/// The 15 points of the dual of `A(15,1)`: coordinate points and the cyclic
/// shifts of `(1, ±φ, ±1/φ)`, over a prime field where `√5` exists.
/// `minus` drops `(1:0:0)`, leaving the table `{3:8, 4:2, 5:4}`.
pub fn gen_a15_1(minus: bool) -> Result<ConfigurationRecord> {
    let (f, z) = field_with_unity(5, None)?;
    let zp = |e: u64| f.pow(&z, e);
    let sqrt5 = f.sub(&f.add(&zp(1), &zp(4)), &f.add(&zp(2), &zp(3)));
    debug_assert_eq!(f.mul(&sqrt5, &sqrt5), 5);
    let phi = f.div(&f.add(&1, &sqrt5), &2).expect("2 is invertible");
    let iphi = f.sub(&phi, &1);
    let mut pts: Vec<Vec<u64>> = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
    for a in [phi, f.neg(&phi)] {
        for b in [iphi, f.neg(&iphi)] {
            let v = [1, a, b];
            for r in 0..3 {
                pts.push((0..3).map(|i| v[(i + 3 - r) % 3]).collect());
            }
        }
    }
    if minus {
        pts.remove(0);
    }
    let (name, want) = if minus {
        ("a15-1-minus", table(&[(3, 8), (4, 2), (5, 4)]))
    } else {
        ("a15-1", table(&[(3, 10), (5, 6)]))
    };
    let config = PointConfiguration::from_elems(name, 2, &f, &pts)?;
    let rec = ConfigurationRecord::from_configuration(
        &config,
        Source::Generated,
        "icosahedral realization of the dual of A(15,1)",
    )
    .with_expected_table(&want);
    rec.validate()?;
    Ok(rec)
}

/// The 12 points `e_i ± e_j` of `P^3`.
pub fn gen_d4() -> Result<ConfigurationRecord> {
    let mut pts = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for s in [1, -1] {
                let mut v = vec![0i64; 4];
                v[i] = 1;
                v[j] = s;
                pts.push(v);
            }
        }
    }
    let config = PointConfiguration::from_ints("d4", 3, &pts)?;
    let rec = ConfigurationRecord::from_configuration(&config, Source::ExternalReference, "the D4 root system modulo sign")
        .with_validator(Validator::D4);
    rec.validate()?;
    Ok(rec)
}

/// Coordinates as `0`, `+k` = ω^k or `-k` = -ω^k with ω a primitive cube root of unity.
const PENROSE20: [[&str; 4]; 20] = [
    ["0", "0", "0", "+0"],
    ["0", "0", "+0", "0"],
    ["0", "+0", "+0", "-2"],
    ["0", "+0", "+0", "-1"],
    ["0", "+0", "+0", "-0"],
    ["0", "+0", "+1", "-2"],
    ["0", "+0", "+1", "-1"],
    ["0", "+0", "+1", "-0"],
    ["+0", "0", "-2", "-2"],
    ["+0", "0", "-2", "-1"],
    ["+0", "0", "-1", "-2"],
    ["+0", "0", "-1", "-1"],
    ["+0", "0", "-0", "-2"],
    ["+0", "0", "-0", "-1"],
    ["+0", "+0", "0", "+0"],
    ["+0", "+1", "0", "+0"],
    ["+0", "-2", "+1", "0"],
    ["+0", "+2", "0", "+0"],
    ["+0", "-1", "+0", "0"],
    ["+0", "-0", "+2", "0"],
];

/// 20 points of `P^3` lying by eights on 20 planes, over a prime field with
/// primitive cube roots of unity.
pub fn gen_penrose20() -> Result<ConfigurationRecord> {
    let (f, w) = field_with_unity(3, None)?;
    let decode = |s: &str| -> u64 {
        if s == "0" {
            return 0;
        }
        let k: u64 = s[1..].parse().expect("exponent");
        let v = f.pow(&w, k);
        if s.starts_with('-') {
            f.neg(&v)
        } else {
            v
        }
    };
    let pts: Vec<Vec<u64>> = PENROSE20.iter().map(|p| p.iter().map(|s| decode(s)).collect()).collect();
    let config = PointConfiguration::from_elems("penrose20", 3, &f, &pts)?;
    let rec = ConfigurationRecord::from_configuration(
        &config,
        Source::ExternalReference,
        "20-point subconfiguration of the Penrose/Klein 40-point configuration",
    )
    .with_validator(Validator::Penrose20);
    rec.validate()?;
    Ok(rec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DkVariant {
    Seven,
    Nine,
}

impl std::str::FromStr for DkVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seven" | "7" => Ok(DkVariant::Seven),
            "nine" | "9" => Ok(DkVariant::Nine),
            other => Err(Error::InvalidArgument(format!("unknown variant {other:?}"))),
        }
    }
}

const DK_SEVEN: [[i64; 3]; 7] = [[0, 0, 1], [1, 0, 1], [0, 1, 1], [2, -2, 1], [-1, -3, 1], [3, 5, 1], [4, 1, 1]];
const DK_EXTRA: [[i64; 3]; 2] = [[-3, 5, 1], [-5, 2, 1]];

pub fn gen_dk_points(variant: DkVariant) -> Result<ConfigurationRecord> {
    let mut pts: Vec<Vec<i64>> = DK_SEVEN.iter().map(|p| p.to_vec()).collect();
    let name = match variant {
        DkVariant::Seven => "dk-seven",
        DkVariant::Nine => {
            pts.extend(DK_EXTRA.iter().map(|p| p.to_vec()));
            "dk-nine"
        }
    };
    let config = PointConfiguration::from_ints(name, 2, &pts)?;
    let mut rec = ConfigurationRecord::from_configuration(
        &config,
        Source::PaperFigure,
        "general-position points for the Dolgachev-Kapranov locus",
    );
    if variant == DkVariant::Seven {
        rec = rec.with_expected_table(&WeakTable::new());
    }
    rec.validate()?;
    Ok(rec)
}

/// The Fermat-type sets `F_m = {x^m = y^m = z^m} ∪ T` for `m = 3, 6`.
#[derive(Clone, Debug)]
pub struct FermatSets {
    pub prime: u64,
    pub f3: PointConfiguration,
    pub f6: PointConfiguration,
    pub t: PointConfiguration,
    /// `(F6 \ F3) ∪ T`, 30 points.
    pub z: ConfigurationRecord,
    /// For each `P ∈ F3 \ T`: `P` and `F6` minus the three `F3`-lines through `P`.
    pub z1: Vec<(Vec<String>, ConfigurationRecord)>,
}

pub fn gen_fermat_sets(prime: Option<u64>) -> Result<FermatSets> {
    let (f, zeta) = field_with_unity(6, prime)?;
    let zp = |e: u64| f.pow(&zeta, e % 6);
    let t_pts: Vec<Vec<u64>> = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
    let grid = |step: u64| -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for i in (0..6).step_by(step as usize) {
            for j in (0..6).step_by(step as usize) {
                out.push(vec![zp(i), zp(j), 1]);
            }
        }
        out
    };
    let f6_pts: Vec<Vec<u64>> = grid(1).into_iter().chain(t_pts.clone()).collect();
    let f3_pts: Vec<Vec<u64>> = grid(2).into_iter().chain(t_pts.clone()).collect();
    let z_pts: Vec<Vec<u64>> = grid(1)
        .into_iter()
        .filter(|p| !f3_pts.contains(p))
        .chain(t_pts.clone())
        .collect();
    let spec = f.spec();
    let f3 = PointConfiguration::from_elems("fermat-f3", 2, &f, &f3_pts)?;
    let f6 = PointConfiguration::from_elems("fermat-f6", 2, &f, &f6_pts)?;
    let t = PointConfiguration::from_elems("fermat-t", 2, &f, &t_pts)?;
    let z_cfg = PointConfiguration::from_elems("fermat-z", 2, &f, &z_pts)?;
    let z = ConfigurationRecord::from_configuration(
        &z_cfg,
        Source::Generated,
        "Fermat-type configuration: F6 minus F3, plus the coordinate points",
    )
    .with_expected_table(&table(&[(4, 9), (7, 9)]));
    z.validate()?;
    let mut z1 = Vec::new();
    for i in (0..6).step_by(2) {
        for j in (0..6).step_by(2) {
            let (a, b) = (zp(i), zp(j));
            // x = (a/b) y, y = b z, x = a z
            let ratio = f.div(&a, &b).expect("unit");
            let lines = [vec![1, f.neg(&ratio), 0], vec![0, 1, f.neg(&b)], vec![1, 0, f.neg(&a)]];
            let on = |p: &Vec<u64>| {
                lines.iter().any(|l| {
                    let v = l.iter().zip(p).fold(0, |acc, (c, x)| f.add(&acc, &f.mul(c, x)));
                    v == 0
                })
            };
            let pts: Vec<Vec<u64>> = f6_pts.iter().filter(|p| !on(p)).cloned().collect();
            let cfg = PointConfiguration::from_elems(format!("fermat-z1-{}{}", i / 2, j / 2), 2, &f, &pts)?;
            let rec = ConfigurationRecord::from_configuration(
                &cfg,
                Source::Generated,
                "F6 minus the three F3-lines through one point of F3",
            );
            let p: Vec<String> = [a, b, 1].iter().map(|x| f.to_scalar(x).to_string()).collect();
            z1.push((p, rec));
        }
    }
    Ok(FermatSets {
        prime: spec.modulus().expect("prime"),
        f3,
        f6,
        t,
        z,
        z1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a4k1_tables() {
        let r2 = gen_a4k1(2, None).unwrap();
        assert_eq!(r2.len(), 9);
        assert_eq!(r2.incidence().unwrap().weak_table(), table(&[(3, 4), (4, 3)]));
        let r3 = gen_a4k1(3, None).unwrap();
        assert_eq!(r3.incidence().unwrap().weak_table(), table(&[(3, 12), (4, 3), (6, 1)]));
        for k in 4..=6 {
            assert_eq!(gen_a4k1(k, None).unwrap().len() as u64, 4 * k + 1);
        }
        assert!(gen_a4k1(1, None).is_err());
        // 2^61 - 1 has no primitive 8th root of unity
        assert!(matches!(
            gen_a4k1(2, Some(crate::field::DEFAULT_PRIME)),
            Err(Error::FieldLacksUnity { .. })
        ));
    }

    #[test]
    fn fermat_counts() {
        let fs = gen_fermat_sets(None).unwrap();
        assert_eq!(fs.f3.len(), 12);
        assert_eq!(fs.f6.len(), 39);
        assert_eq!(fs.z.len(), 30);
        assert_eq!(fs.z1.len(), 9);
        let z = fs.z.configuration().unwrap().unwrap();
        let in_f3 = z.points().iter().filter(|p| fs.f3.index_of(p).is_some()).count();
        assert_eq!(in_f3, 3);
        for (_, r) in &fs.z1 {
            assert_eq!(r.len(), 20);
        }
    }

    #[test]
    fn external_shapes() {
        let d4 = gen_d4().unwrap();
        let inc = d4.incidence().unwrap();
        let six: usize = inc.hyperplanes.iter().filter(|h| h.len() == 6).map(|h| h.len()).sum();
        assert_eq!(six, 72);
        let pen = gen_penrose20().unwrap();
        assert_eq!(pen.len(), 20);
    }

    #[test]
    fn a15_subset_table() {
        let r = gen_a15_1(true).unwrap();
        assert_eq!(r.len(), 14);
    }

    #[test]
    fn scalar_names_are_field_elements() {
        let r = gen_a13_3().unwrap();
        assert_eq!(r.field, crate::field::FieldSpec::Rational);
        assert_eq!(r.points[0], vec!["0", "0", "1"]);
    }
}
