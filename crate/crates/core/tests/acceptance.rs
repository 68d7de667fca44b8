//! One line per acceptance criterion, then a single assertion over all of them.

use std::time::{Duration, Instant};

use hyperlocus_core::atlas::{build, catalog, gen_a4k1, gen_d4, gen_dk_points, gen_fermat_sets, gen_penrose20, DkVariant};
use hyperlocus_core::certificate::{
    certify, family_a4k1_certificate, fermat_report, fixed_point_bound, plane_count_certificate, plus_one_certificate,
    removal_audit, render_certificate, square_certificate, Combinatorics, Format, Verdict,
};
use hyperlocus_core::interpolation::{
    degree_of_f, h_total, ideal_dimension, square_size, unexpectedness_report, zero_locus_test,
};
use hyperlocus_core::locus::{multiplicity_at, symbolic_locus};
use hyperlocus_core::primes::find_prime_with_unity;
use hyperlocus_core::{PrimeField, DEFAULT_BUDGET, DEFAULT_PRIME};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn c1_degree_formula() -> Outcome {
    let cases = [((2, 6, 5), 30), ((2, 14, 13), 182), ((2, 7, 3), 30), ((2, 8, 5), 60), ((3, 3, 3), 10), ((3, 4, 4), 20)];
    for ((n, d, m), want) in cases {
        let got = degree_of_f(n, d, m);
        check(got == want, format!("deg F({n},{d},{m}) = {got}, want {want}"))?;
    }
    Ok("six degree values reproduced".into())
}

fn c2_a13() -> Outcome {
    let rec = build("a13-3-declared").map_err(e)?;
    check(!rec.has_coordinates(), "declared record carries coordinates")?;
    let inc = rec.incidence().map_err(e)?;
    let cert = square_certificate(&Combinatorics::from(&inc), 6, 5).map_err(e)?;
    check(cert.total == 31 && cert.deg_f == 30 && cert.verdict == Verdict::Proven, format!("total {}", cert.total))?;
    let text = render_certificate(&cert, Format::Text).map_err(e)?;
    check(text.contains("31 > 30 ⇒ F ≡ 0"), "text lacks the conclusion line")?;
    Ok("31 > 30, Proven".into())
}

fn c3_a30() -> Outcome {
    let minus = build("a30-3-minus").map_err(e)?.incidence().map_err(e)?;
    let sq = square_certificate(&Combinatorics::from(&minus), 14, 13).map_err(e)?;
    check(sq.total == 177 && sq.verdict == Verdict::Inconclusive, format!("square total {}", sq.total))?;
    let full = build("a30-3-declared").map_err(e)?.incidence().map_err(e)?;
    let po = plus_one_certificate(&Combinatorics::from(&full), 14).map_err(e)?;
    let sum: u64 = po.line_bounds.iter().map(|g| g.subtotal).sum();
    check(sum == 198, format!("Σ binom(|L|-1, 2) = {sum}"))?;
    check(po.total == 184 && po.deg_f == 182 && po.verdict == Verdict::Proven, format!("LHS {}", po.total))?;
    check(po.notes.iter().any(|n| n.contains("= 185")), "variant 185 not reported")?;
    Ok("square 177 Inconclusive; plus-one Σ = 198, LHS 184 (variant 185) > 182, Proven".into())
}

fn c4_a15() -> Outcome {
    let minus = build("a15-1-minus").map_err(e)?.incidence().map_err(e)?;
    let po = plus_one_certificate(&Combinatorics::from(&minus), 6).map_err(e)?;
    check(po.total == 32 && po.deg_f == 30 && po.is_proven(), format!("plus-one {}", po.total))?;
    let full = build("a15-1-declared").map_err(e)?.incidence().map_err(e)?;
    let sq = square_certificate(&Combinatorics::from(&full), 7, 6).map_err(e)?;
    check(sq.total == 46 && sq.deg_f == 42 && sq.is_proven(), format!("square {}", sq.total))?;
    Ok("(6,5) 32 > 30 and (7,6) 46 > 42, both Proven".into())
}

fn c5_family() -> Outcome {
    for k in 2..=50u64 {
        let c = family_a4k1_certificate(k).map_err(e)?;
        check(c.total - c.deg_f == 1, format!("k = {k}: {} vs {}", c.total, c.deg_f))?;
        check(c.total as u64 == 4 * k * k - 2 * k + 1, format!("k = {k}: total {}", c.total))?;
    }
    Ok("total - deg F = 1 for k = 2..50".into())
}

fn c6_quartic() -> Outcome {
    let p1 = find_prime_with_unity(8, 61).map_err(e)?;
    let p2 = find_prime_with_unity(8, 62).map_err(e)?;
    check(p1 != p2, "primes coincide")?;
    let mut bounds = Vec::new();
    for p in [p1, p2] {
        let rec = gen_a4k1(2, Some(p)).map_err(e)?;
        let cfg = rec.configuration().map_err(e)?.ok_or("no coordinates")?;
        let f = PrimeField::new(p).map_err(e)?;
        let ps = cfg.point_set(&f).map_err(e)?;
        let rep = unexpectedness_report(&ps, 4, 3, 20, 7).map_err(e)?;
        check(rep.independent, "nine points fail to impose independent conditions on quartics")?;
        check(rep.actual == 1 && rep.expected == 0, format!("actual {} expected {}", rep.actual, rep.expected))?;
        let zt = zero_locus_test(&ps, 4, 3, 20, 11).map_err(e)?;
        match zt.verdict {
            hyperlocus_core::ZeroVerdict::ProbablyZero { log2_error_bound } => {
                check(log2_error_bound < -200.0, format!("bound 2^{log2_error_bound}"))?;
                bounds.push(log2_error_bound);
            }
            other => return Err(format!("over F_{p}: {other:?}")),
        }
    }
    Ok(format!(
        "dim 1 > 0 with independent conditions; ProbablyZero over F_{p1} and F_{p2}, error <= 2^{:.0}",
        bounds.iter().cloned().fold(f64::MIN, f64::max)
    ))
}

fn c7_dk() -> Outcome {
    let f = PrimeField::new(DEFAULT_PRIME).map_err(e)?;
    let mut notes = Vec::new();
    for (variant, d, m) in [(DkVariant::Seven, 3, 2), (DkVariant::Nine, 4, 3)] {
        let start = Instant::now();
        let cfg = gen_dk_points(variant).map_err(e)?.configuration().map_err(e)?.ok_or("no coordinates")?;
        let ps = cfg.point_set(&f).map_err(e)?;
        let locus = symbolic_locus(&ps, d, m, DEFAULT_BUDGET).map_err(e)?;
        let want = d * (d - 1);
        check(locus.degree() == Some(want), format!("{variant:?}: degree {:?}", locus.degree()))?;
        for p in &ps.points {
            let mult = multiplicity_at(&f, &locus, p).map_err(e)?;
            check(mult == d - 1, format!("{variant:?}: multiplicity {mult} at {p:?}"))?;
        }
        let t = start.elapsed();
        if variant == DkVariant::Nine {
            check(t < Duration::from_secs(10), format!("nine-point case took {t:?}"))?;
        }
        notes.push(format!("{} points: degree {want}, multiplicity {} everywhere ({:.2?})", ps.len(), d - 1, t));
    }
    Ok(notes.join("; "))
}

fn c8_main_inequality() -> Outcome {
    let f = PrimeField::new(DEFAULT_PRIME).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut instances = 0;
    let mut attempts = 0;
    let mut checks = 0;
    while instances < 25 {
        attempts += 1;
        check(attempts < 2000, "too few nonzero loci")?;
        let d = rng.random_range(2..=4u32);
        let m = rng.random_range(1..=d);
        let s = square_size(2, d, m).map_err(e)?;
        let mut pts: Vec<Vec<i64>> = Vec::new();
        while pts.len() < s {
            let p = vec![rng.random_range(-3..=3i64), rng.random_range(-3..=3i64), 1];
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let cfg = hyperlocus_core::PointConfiguration::from_ints("random", 2, &pts).map_err(e)?;
        let ps = cfg.point_set(&f).map_err(e)?;
        let locus = symbolic_locus(&ps, d, m, DEFAULT_BUDGET).map_err(e)?;
        if locus.is_zero() {
            continue;
        }
        instances += 1;
        let mut bs: Vec<Vec<u64>> = ps.points.iter().take(8).cloned().collect();
        // points on lines joining two configuration points
        for t in 0..6u64 {
            let (a, b) = (&ps.points[t as usize % s], &ps.points[(t as usize + 1) % s]);
            let lam = 2 + t;
            bs.push(a.iter().zip(b).map(|(x, y)| f_add_mul(&f, *x, lam, *y)).collect());
        }
        while bs.len() < 20 {
            bs.push(vec![1, rng.random_range(0..1000), rng.random_range(0..1000)]);
        }
        for b in &bs {
            let mult = multiplicity_at(&f, &locus, b).map_err(e)? as i64;
            let h = h_total(&ps, d, m, b).map_err(e)?;
            check(mult >= h, format!("(d, m) = ({d}, {m}), B = {b:?}: mult {mult} < h {h}"))?;
            checks += 1;
        }
    }
    Ok(format!("{instances} nonzero loci, {checks} points B, mult_B F >= h_B throughout"))
}

fn f_add_mul(f: &PrimeField, x: u64, lam: u64, y: u64) -> u64 {
    use hyperlocus_core::Field;
    f.add(&x, &f.mul(&lam, &y))
}

fn c9_d4() -> Outcome {
    let start = Instant::now();
    let inc = gen_d4().map_err(e)?.incidence().map_err(e)?;
    let mut pairs = 0;
    for a in 0..12 {
        for b in a + 1..12 {
            let c = plane_count_certificate(&inc, [a, b]).map_err(e)?;
            check(c.total == 12 && c.deg_f == 10 && c.is_proven(), format!("pair ({a},{b}): {}", c.total))?;
            let pt = c.pair_totals.as_ref().ok_or("no pair totals")?;
            check(pt.rich_sum_min == 60 && pt.rich_sum_max == 60, "Σ n_i differs from 60")?;
            check(pt.min_total == 12 && pt.max_total == 12, "total depends on the pair")?;
            pairs += 1;
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(5), format!("took {t:?}"))?;
    Ok(format!("{pairs} pairs, each 12 > 10 with Σ n_i = 60 ({t:.2?})"))
}

fn c10_penrose() -> Outcome {
    let inc = gen_penrose20().map_err(e)?.incidence().map_err(e)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(e)?;
    let start = Instant::now();
    let audit = pool.install(|| removal_audit(&inc, 5, 4, 4)).map_err(e)?;
    let t = start.elapsed();
    let s = &audit.summary;
    check(s.removals == 15504 && audit.profiles.len() == 15504, format!("{} removals", s.removals))?;
    check(s.uniform_profiles == 0, format!("{} all-six profiles", s.uniform_profiles))?;
    check(s.min_rich_planes >= 1, "a removal with no plane of 7 or more")?;
    check(s.plane_sum_min == 120 && s.plane_sum_max == 120, "Σ n_i differs from 120")?;
    check(t < Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!(
        "15504 removals, no all-six profile, at least {} planes with 7+ points in each ({t:.2?} single-threaded)",
        s.min_rich_planes
    ))
}

fn c11_fermat() -> Outcome {
    let fs = gen_fermat_sets(None).map_err(e)?;
    let f = PrimeField::new(fs.prime).map_err(e)?;
    let mut dims = Vec::new();
    for (p, rec) in &fs.z1 {
        let ps = rec.configuration().map_err(e)?.ok_or("no coordinates")?.point_set(&f).map_err(e)?;
        let (i4, i5) = (ideal_dimension(&ps, 4), ideal_dimension(&ps, 5));
        check(i4 >= 1 && i5 == 4, format!("Z1({p:?}): dims {i4}, {i5}"))?;
        dims.push((i4, i5));
    }
    check(fixed_point_bound(&[7, 7, 7], 3, 7, true).map_err(e)? == 4, "(7,3) bound")?;
    check(fixed_point_bound(&[7, 7, 7], 5, 8, true).map_err(e)? == 7, "(8,5) bound")?;
    let inc = fs.z.incidence().map_err(e)?;
    let z = fs.z.configuration().map_err(e)?.ok_or("no coordinates")?;
    let b = z.index_of(fs.t.points()[2].as_slice()).ok_or("T point missing")?;
    let rep = fermat_report(&inc, b, dims).map_err(e)?;
    let fp: Vec<i64> = rep.cases.iter().flat_map(|c| c.fixed_point.iter().map(|x| x.1)).collect();
    check(fp == vec![4, 4, 7], format!("fixed point bounds {fp:?}"))?;
    check(rep.verdict == Verdict::Inconclusive, "partial report claims a proof")?;
    Ok("all nine Z1 have dim [I]_4 >= 1 and dim [I]_5 = 4; fixed point bounds 4 and 7".into())
}

fn c12_soundness() -> Outcome {
    let mut proven = 0;
    let mut tested = 0;
    for entry in catalog() {
        let rec = build(entry.name).map_err(e)?;
        let Some(cfg) = rec.configuration().map_err(e)? else { continue };
        let inc = rec.incidence().map_err(e)?;
        let p = match cfg.field().modulus() {
            Some(p) => p,
            None => DEFAULT_PRIME,
        };
        let f = PrimeField::new(p).map_err(e)?;
        let ps = cfg.point_set(&f).map_err(e)?;
        for &(d, m) in entry.cases {
            let cert = certify(&inc, d, m).map_err(|x| format!("{} ({d},{m}): {x}", entry.name))?;
            let zt = zero_locus_test(&ps, d, m, 20, 99).map_err(e)?;
            tested += 1;
            if cert.is_proven() {
                proven += 1;
                check(
                    zt.verdict.is_zero(),
                    format!("{} ({d},{m}) Proven but {:?}", entry.name, zt.verdict),
                )?;
            }
        }
    }
    Ok(format!("{tested} catalog cases, {proven} Proven, all with ProbablyZero"))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 deg F formula", c1_degree_formula),
        ("2 A(13,3) certificate", c2_a13),
        ("3 A(30,3) square and plus-one", c3_a30),
        ("4 A(15,1) certificates", c4_a15),
        ("5 A(4k+1,1) family identity", c5_family),
        ("6 unexpected quartic on nine points", c6_quartic),
        ("7 Dolgachev-Kapranov loci", c7_dk),
        ("8 multiplicity bounds h_B", c8_main_inequality),
        ("9 D4 plane count", c9_d4),
        ("10 Penrose removal audit", c10_penrose),
        ("11 Fermat support facts", c11_fermat),
        ("12 soundness sweep", c12_soundness),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let t = start.elapsed();
        match &out {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{t:.2?}]"),
            Err(msg) => {
                println!("FAIL criterion {name}: {msg} [{t:.2?}]");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
