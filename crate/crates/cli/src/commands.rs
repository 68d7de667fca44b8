use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;

use hyperlocus_core::atlas::{
    self, build, gen_a13_3, gen_a15_1, gen_a30_3, gen_a4k1, gen_d4, gen_dk_points, gen_fermat_sets, gen_penrose20,
    DkVariant,
};
use hyperlocus_core::certificate::{self, removal_audit, removal_certificate, render_certificate, Format};
use hyperlocus_core::incidence::format_table;
use hyperlocus_core::interpolation::{
    degree_of_f, fat_conditions, forms, kernel_form, point_strings, sample_affine, square_size, unexpectedness_report,
    zero_locus_test,
};
use hyperlocus_core::locus::{multiplicity_at, symbolic_locus};
use hyperlocus_core::{
    ConfigurationRecord, Field, FieldSpec, IncidenceSource, PointConfiguration, PolyRecord, PrimeField, Rationals,
    ZeroVerdict, DEFAULT_PRIME,
};

use crate::manifest::Report;
use crate::sample::{affine_box, sample_curve};
use crate::Ctx;

/// A file path, or failing that a catalog name.
fn load(spec: &str) -> Result<(ConfigurationRecord, Vec<String>)> {
    if Path::new(spec).exists() {
        return atlas::load(spec).with_context(|| format!("loading {spec}"));
    }
    if atlas::catalog().iter().any(|e| e.name == spec) {
        let rec = build(spec)?;
        let checks = rec.validate()?;
        return Ok((rec, checks));
    }
    bail!("{spec:?} is neither a file nor a catalog entry")
}

fn coordinates(rec: &ConfigurationRecord) -> Result<PointConfiguration> {
    rec.configuration()?
        .ok_or_else(|| anyhow!("{} has declared incidence only; this command needs coordinates", rec.name))
}

fn prime_field(cfg: &PointConfiguration, requested: Option<u64>) -> Result<PrimeField> {
    let p = match (cfg.field(), requested) {
        (FieldSpec::Prime(p), Some(q)) if p != q => bail!("configuration lives over F_{p}, not F_{q}"),
        (FieldSpec::Prime(p), _) => p,
        (FieldSpec::Rational, q) => q.unwrap_or(DEFAULT_PRIME),
    };
    Ok(PrimeField::new(p)?)
}

fn point_text(p: &[String]) -> String {
    format!("({})", p.join(" : "))
}

pub fn generate(ctx: &Ctx, name: &str, k: u64, variant: &str, minus: bool) -> Result<Report> {
    let rec = match name {
        "a4k1" => gen_a4k1(k, ctx.prime)?,
        "dk" => gen_dk_points(variant.parse::<DkVariant>()?)?,
        "d4" => gen_d4()?,
        "penrose20" => gen_penrose20()?,
        "fermat" => gen_fermat_sets(ctx.prime)?.z,
        "a13-3" => gen_a13_3()?,
        "a30-3" => gen_a30_3(minus)?,
        "a15-1" => gen_a15_1(minus)?,
        other => build(other)?,
    };
    let checks = rec.validate()?;
    let mut text = format!("{}: {} points in P^{} over {}\n", rec.name, rec.len(), rec.n, rec.field);
    for (i, p) in rec.points.iter().enumerate() {
        writeln!(text, "  {i:>3} {}", point_text(p))?;
    }
    for c in &checks {
        writeln!(text, "check: {c}")?;
    }
    let mut report = Report::new(text, serde_json::to_value(&rec)?).flag("name", name);
    report = match name {
        "a4k1" => report.flag("k", k),
        "dk" => report.flag("variant", variant),
        "a30-3" | "a15-1" => report.flag("minus", minus),
        _ => report,
    };
    if let Some(p) = rec.field.modulus() {
        report = report.prime(p);
    }
    Ok(report)
}

pub fn catalog() -> Report {
    let entries = atlas::catalog();
    let mut text = String::new();
    let mut rows = Vec::new();
    for e in &entries {
        let cases: Vec<String> = e.cases.iter().map(|(d, m)| format!("({d},{m})")).collect();
        let _ = writeln!(text, "{:<16} {:<10} {}", e.name, cases.join(" "), e.summary);
        rows.push(json!({ "name": e.name, "summary": e.summary, "cases": e.cases }));
    }
    Report::new(text, json!({ "entries": rows }))
}

pub fn incidence(spec: &str) -> Result<Report> {
    let (rec, checks) = load(spec)?;
    let inc = rec.incidence()?;
    let source = match inc.source {
        IncidenceSource::Detected => "detected",
        IncidenceSource::Declared => "declared",
    };
    let table = inc.weak_table();
    let double = inc.check_double_counting();
    let mut text = format!(
        "{}: {} points in P^{}, {} hyperplanes with at least {} points ({source})\n",
        rec.name,
        inc.point_count,
        inc.n,
        inc.hyperplanes.len(),
        inc.min_members
    );
    writeln!(text, "weak table: {}", format_table(&table))?;
    writeln!(text, "double counting: {}", if double { "consistent" } else { "FAILED" })?;
    if inc.degenerate {
        writeln!(text, "all points lie on one hyperplane")?;
    }
    for h in &inc.hyperplanes {
        match &h.coefficients {
            Some(c) => writeln!(text, "  {:?} on {}", h.members, point_text(c))?,
            None => writeln!(text, "  {:?}", h.members)?,
        }
    }
    for c in &checks {
        writeln!(text, "check: {c}")?;
    }
    let json = json!({
        "name": rec.name,
        "incidence": inc,
        "weak_table": table,
        "double_counting": double,
        "checks": checks,
    });
    Ok(Report::new(text, json).flag("config", spec))
}

pub fn certify(spec: &str, d: u32, m: u32) -> Result<Report> {
    let (rec, _) = load(spec)?;
    let inc = rec.incidence()?;
    let cert = certificate::certify(&inc, d, m)?;
    let status = if cert.is_proven() { "PROVEN" } else { "INCONCLUSIVE" };
    let text = format!(
        "{}: {} points in P^{}, d = {d}, m = {m}\n{}status: {status}\n",
        rec.name,
        inc.point_count,
        inc.n,
        render_certificate(&cert, Format::Text)?
    );
    let json = json!({ "name": rec.name, "certificate": cert, "status": status });
    Ok(Report::new(text, json)
        .flag("config", spec)
        .flag("d", d)
        .flag("m", m)
        .exit(if cert.is_proven() { 0 } else { 2 }))
}

pub fn analyze(ctx: &Ctx, spec: &str, d: u32, m: u32) -> Result<Report> {
    let (rec, _) = load(spec)?;
    let cfg = coordinates(&rec)?;
    let f = prime_field(&cfg, ctx.prime)?;
    let ps = cfg.point_set(&f)?;
    let n = cfg.ambient_dim();
    let rep = unexpectedness_report(&ps, d, m, ctx.trials, ctx.seed)?;
    let fat = fat_conditions(n, m);
    let vdim = forms(n, d) as i64 - fat as i64 - cfg.len() as i64;
    let zero = match square_size(n, d, m) {
        Ok(s) if cfg.len() >= s => Some(zero_locus_test(&ps, d, m, ctx.trials, ctx.seed)?),
        _ => None,
    };
    // A sampled dimension bounds the generic one from above and `expected`
    // bounds it from below. Reducing rational points mod p can only lose
    // rank, so "no" is exact if Z lives in F_p or its conditions stay
    // independent mod p.
    let exact = cfg.field() == f.spec() || rep.independent;
    let unexpected_class = if !rep.unexpected && exact { "PROVEN" } else { "EVIDENCE" };
    let mut text = format!(
        "{}: {} points in P^{n} over {}, computing in F_{}\n",
        rec.name,
        cfg.len(),
        cfg.field(),
        f.modulus()
    );
    writeln!(
        text,
        "dim [I_Z]_{d} = {} of {} forms: {}",
        rep.ideal_dim,
        forms(n, d),
        if rep.independent { "Z imposes independent conditions" } else { "conditions are dependent" }
    )?;
    writeln!(text, "fat point conditions: {fat}")?;
    writeln!(text, "vdim L({d}; {m}B + Z) = {vdim}")?;
    writeln!(text, "generic dim L({d}; {m}B + Z) = {} (least over {} random B)", rep.actual, rep.trials)?;
    writeln!(text, "expected dim = {}", rep.expected)?;
    writeln!(
        text,
        "unexpected: {} [{unexpected_class}]",
        if rep.unexpected { "yes" } else { "no" }
    )?;
    let cone = m == d && rep.actual > 0;
    if cone {
        writeln!(text, "m = d: every member is a cone with vertex B")?;
        if rep.unexpected {
            writeln!(text, "unexpected cone ({d}; {d}B + Z)")?;
        }
    }
    let zero_class = match &zero {
        Some(zt) => match &zt.verdict {
            ZeroVerdict::ProbablyZero { log2_error_bound } => {
                writeln!(
                    text,
                    "F ≡ 0: ProbablyZero, error ≤ 2^{log2_error_bound:.1} after {} trials [EVIDENCE]",
                    zt.trials
                )?;
                "EVIDENCE"
            }
            ZeroVerdict::NonzeroWitness { trial, b } => {
                writeln!(
                    text,
                    "F ≢ 0: locus nonzero, M has full rank at B = {} (trial {trial}) [PROVEN]",
                    point_text(b)
                )?;
                "PROVEN"
            }
        },
        None => {
            writeln!(text, "F undefined: |Z| is below the square size [INCONCLUSIVE]")?;
            "INCONCLUSIVE"
        }
    };
    // the unique member at the first sampled B
    let member = if rep.actual == 1 {
        let mut b = vec![f.one()];
        b.extend(sample_affine(&f, n, ctx.seed, 0));
        kernel_form(&ps, d, m, &b).ok().map(|form| (point_strings(&f, &b), form))
    } else {
        None
    };
    if let Some((b, form)) = &member {
        writeln!(text, "member at B = {}: {} terms, checked to vanish on Z and to order {m} at B", point_text(b), form.len())?;
        if form.len() <= 40 {
            writeln!(text, "  {}", form.display(&f))?;
        }
    }
    for w in &rep.warnings {
        writeln!(text, "warning: {w}")?;
    }
    let member = member.map(|(b, form)| json!({ "b": b, "form": form.to_record(&f) }));
    let json = json!({
        "name": rec.name,
        "N": n,
        "member": member,
        "field": f.spec(),
        "vdim": vdim,
        "report": rep,
        "zero_test": zero,
        "cone": cone,
        "verdicts": { "unexpected": unexpected_class, "zero": zero_class },
    });
    Ok(Report::new(text, json)
        .flag("config", spec)
        .flag("d", d)
        .flag("m", m)
        .prime(f.modulus()))
}

struct Expanded {
    record: PolyRecord,
    display: String,
    multiplicities: Option<Vec<u32>>,
}

fn expand<F: Field>(f: &F, cfg: &PointConfiguration, d: u32, m: u32, budget: u128) -> Result<Expanded> {
    let ps = cfg.point_set(f)?;
    let poly = symbolic_locus(&ps, d, m, budget)?;
    let multiplicities = if poly.is_zero() {
        None
    } else {
        Some(
            ps.points
                .iter()
                .map(|p| multiplicity_at(f, &poly, p))
                .collect::<hyperlocus_core::Result<Vec<_>>>()?,
        )
    };
    Ok(Expanded {
        record: poly.to_record(f),
        display: poly.display(f),
        multiplicities,
    })
}

pub fn locus(ctx: &Ctx, spec: &str, d: u32, m: u32, budget: u128, sample: Option<usize>) -> Result<Report> {
    let (rec, _) = load(spec)?;
    let cfg = coordinates(&rec)?;
    let n = cfg.ambient_dim();
    let (ex, prime) = match (cfg.field(), ctx.prime) {
        (FieldSpec::Rational, None) => (expand(&Rationals, &cfg, d, m, budget)?, None),
        _ => {
            let f = prime_field(&cfg, ctx.prime)?;
            (expand(&f, &cfg, d, m, budget)?, Some(f.modulus()))
        }
    };
    let samples = match sample {
        None => None,
        Some(_) if ex.record.field != FieldSpec::Rational || n != 2 => {
            bail!("--sample needs a plane configuration with rational coordinates")
        }
        Some(k) => Some(sample_curve(&ex.record, affine_box(&cfg.point_strings()), k)),
    };
    let deg_f = degree_of_f(n, d, m);
    let mut text = format!("{}: locus for d = {d}, m = {m} over {}\n", rec.name, ex.record.field);
    match ex.record.degree {
        None => writeln!(text, "F ≡ 0 (the zero polynomial)")?,
        Some(deg) => {
            writeln!(text, "degree {deg} (deg F = {deg_f}), {} terms", ex.record.terms.len())?;
            if ex.record.terms.len() <= 200 {
                writeln!(text, "F = {}", ex.display)?;
            }
        }
    }
    if let Some(ms) = &ex.multiplicities {
        let ms: Vec<String> = ms.iter().map(|x| x.to_string()).collect();
        writeln!(text, "multiplicity at the points of Z: {}", ms.join(" "))?;
    }
    if let Some(pts) = &samples {
        writeln!(text, "{} sampled points in the chart a2 = 1:", pts.len())?;
        for [x, y] in pts {
            writeln!(text, "  {x:.6} {y:.6}")?;
        }
    }
    let json = json!({
        "name": rec.name,
        "N": n,
        "d": d,
        "m": m,
        "deg_F": deg_f,
        "zero": ex.record.zero,
        "polynomial": ex.record,
        "multiplicities": ex.multiplicities,
        "chart": "a2 = 1",
        "samples": samples,
    });
    let mut report = Report::new(text, json)
        .flag("config", spec)
        .flag("d", d)
        .flag("m", m)
        .flag("budget", budget);
    if let Some(k) = sample {
        report = report.flag("sample", k);
    }
    if let Some(p) = prime {
        report = report.prime(p);
    }
    Ok(report)
}

pub fn audit(spec: &str, remove: usize, d: u32, m: u32) -> Result<Report> {
    let (rec, _) = load(spec)?;
    let inc = rec.incidence()?;
    let audit = removal_audit(&inc, remove, d, m)?;
    let s = square_size(inc.n, d, m)?;
    let cert = if audit.points == s + remove { Some(removal_certificate(&audit)?) } else { None };
    let sm = &audit.summary;
    let finding = audit.finding();
    let mut text = format!(
        "{}: removing {remove} of {} points, {} subsets\n",
        rec.name, audit.points, sm.removals
    );
    writeln!(text, "finding: {finding}")?;
    writeln!(text, "planes with {} points: {}", sm.plane_size, sm.planes)?;
    writeln!(text, "Σ n_i after removal: [{}, {}]", sm.plane_sum_min, sm.plane_sum_max)?;
    writeln!(text, "least number of planes above the average: {}", sm.min_rich_planes)?;
    writeln!(text, "profile distribution (subsets, sorted plane counts):")?;
    let mut dist: Vec<(&String, &usize)> = audit.distribution.iter().collect();
    dist.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    for (profile, count) in dist {
        writeln!(text, "  {count:>6}  {profile}")?;
    }
    if let Some(c) = &cert {
        text.push_str(&render_certificate(c, Format::Text)?);
        writeln!(text, "status: {}", if c.is_proven() { "PROVEN" } else { "INCONCLUSIVE" })?;
    }
    let json = json!({ "name": rec.name, "finding": finding, "audit": audit, "certificate": cert });
    Ok(Report::new(text, json)
        .flag("config", spec)
        .flag("remove", remove)
        .flag("d", d)
        .flag("m", m))
}
