//! Real points on a plane curve for external plotting.
//!
//! Floating point is fine here: the samples only feed a plotter, every
//! exact claim is made elsewhere.

use hyperlocus_core::PolyRecord;

fn parse_coeff(s: &str) -> f64 {
    match s.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap_or(f64::NAN) / d.parse::<f64>().unwrap_or(f64::NAN),
        None => s.parse().unwrap_or(f64::NAN),
    }
}

/// Bounding box `[x0, x1, y0, y1]` of the affine points `(a0/a2, a1/a2)`,
/// padded so the curve is visible around them.
pub fn affine_box(points: &[Vec<String>]) -> [f64; 4] {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| {
            let z = parse_coeff(&p[2]);
            (z != 0.0).then(|| (parse_coeff(&p[0]) / z, parse_coeff(&p[1]) / z))
        })
        .collect();
    if pts.is_empty() {
        return [-5.0, 5.0, -5.0, 5.0];
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let px = 0.25 * (x1 - x0) + 1.0;
    let py = 0.25 * (y1 - y0) + 1.0;
    [x0 - px, x1 + px, y0 - py, y1 + py]
}

/// The curve restricted to the vertical line `x`, as coefficients in `y`.
fn column(terms: &[(Vec<u32>, f64)], x: f64, degree: usize) -> Vec<f64> {
    let mut c = vec![0.0; degree + 1];
    for (e, v) in terms {
        c[e[1] as usize] += v * x.powi(e[0] as i32);
    }
    c
}

fn horner(c: &[f64], y: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * y + a)
}

fn bisect(c: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = horner(c, lo);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let fm = horner(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Up to `n` points `(x, y)` with `F(x, y, 1) = 0` inside `bbox`, spread
/// along the curve by scanning vertical lines and picking evenly from the roots.
pub fn sample_curve(poly: &PolyRecord, bbox: [f64; 4], n: usize) -> Vec<[f64; 2]> {
    if poly.zero || n == 0 || poly.nvars != 3 {
        return Vec::new();
    }
    let terms: Vec<(Vec<u32>, f64)> = poly.terms.iter().map(|t| (t.exponents.clone(), parse_coeff(&t.coeff))).collect();
    let scale = terms.iter().map(|t| t.1.abs()).fold(0.0, f64::max);
    let terms: Vec<(Vec<u32>, f64)> = terms.into_iter().map(|(e, v)| (e, v / scale)).collect();
    let degree = terms.iter().map(|t| t.0[1] as usize).max().unwrap_or(0);
    let [x0, x1, y0, y1] = bbox;
    let cols = 4 * n;
    let rows = 2000;
    let mut roots = Vec::new();
    for i in 0..cols {
        let x = x0 + (i as f64 + 0.5) * (x1 - x0) / cols as f64;
        let c = column(&terms, x, degree);
        let ys: Vec<f64> = (0..=rows).map(|j| y0 + j as f64 * (y1 - y0) / rows as f64).collect();
        let vals: Vec<f64> = ys.iter().map(|&y| horner(&c, y)).collect();
        for j in 0..rows {
            if vals[j] == 0.0 {
                roots.push([x, ys[j]]);
            } else if vals[j].signum() != vals[j + 1].signum() && vals[j + 1] != 0.0 {
                roots.push([x, bisect(&c, ys[j], ys[j + 1])]);
            }
        }
    }
    if roots.len() <= n {
        return roots;
    }
    (0..n).map(|i| roots[i * roots.len() / n]).collect()
}
