//! Tongue tables and the boundary curves drawn over a sweep.

use std::io::Write;

use tongue_core::tongue::Atlas;
use tongue_core::{farey_atlas, region_boundaries, stern_brocot, FamilySpec, SolveOptions, TongueInterval};

use crate::num;

pub const TONGUE_HEADER: [&str; 7] = ["n", "l", "c_left", "c_right", "iterations", "residual_left", "residual_right"];

/// Writes intervals sorted by `c_left`.
pub fn write_tongue_csv<W: Write>(out: W, tongues: &[TongueInterval<f64>]) -> csv::Result<()> {
    let mut sorted: Vec<&TongueInterval<f64>> = tongues.iter().collect();
    sorted.sort_by(|a, b| a.c_left.total_cmp(&b.c_left));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TONGUE_HEADER)?;
    for t in sorted {
        w.write_record([
            t.rational.period().to_string(),
            t.rational.wraps().to_string(),
            num(t.c_left),
            num(t.c_right),
            t.iterations.to_string(),
            num(t.residuals.0),
            num(t.residuals.1),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Tongue of `(n, l)` at one slope, in the sweep's second coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlayPoint {
    pub alpha: f64,
    pub n: u32,
    pub l: u32,
    pub lower: f64,
    pub upper: f64,
}

pub const OVERLAY_HEADER: [&str; 5] = ["alpha", "n", "l", "lower", "upper"];

/// Tongues down to `depth` at each slope. For the linear family the bounds
/// are `B^L, B^U` in `β`; otherwise the solved `c` interval. Slopes where a
/// family cannot be built or a tongue fails are skipped.
pub fn overlay(family: &str, alphas: &[f64], depth: u32, opts: &SolveOptions<f64>) -> Vec<OverlayPoint> {
    let mut out = Vec::new();
    for &alpha in alphas {
        if family == "linear" {
            for node in stern_brocot(depth) {
                if let Ok(reg) = region_boundaries(node.rational, &alpha) {
                    out.push(OverlayPoint {
                        alpha,
                        n: node.rational.period(),
                        l: node.rational.wraps(),
                        lower: reg.lower,
                        upper: reg.upper,
                    });
                }
            }
            continue;
        }
        let Ok(fam) = FamilySpec::builtin(family, alpha) else {
            continue;
        };
        let Atlas { tongues, .. } = farey_atlas(&fam, depth, opts);
        out.extend(tongues.iter().map(|t| OverlayPoint {
            alpha,
            n: t.rational.period(),
            l: t.rational.wraps(),
            lower: t.c_left,
            upper: t.c_right,
        }));
    }
    out
}

pub fn write_overlay_csv<W: Write>(out: W, points: &[OverlayPoint]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(OVERLAY_HEADER)?;
    for p in points {
        w.write_record([num(p.alpha), p.n.to_string(), p.l.to_string(), num(p.lower), num(p.upper)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tongue_core::Rational;

    #[test]
    fn tongue_rows_sorted() {
        let fam = FamilySpec::linear(0.5).unwrap();
        let atlas = farey_atlas(&fam, 2, &SolveOptions::default());
        let mut reversed = atlas.tongues.clone();
        reversed.reverse();
        let mut buf = Vec::new();
        write_tongue_csv(&mut buf, &reversed).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows[0], "n,l,c_left,c_right,iterations,residual_left,residual_right");
        assert!(rows[1].starts_with("3,2,"));
        assert!(rows[3].starts_with("3,1,"));
    }

    #[test]
    fn linear_overlay_uses_closed_form() {
        let pts = overlay("linear", &[0.5], 1, &SolveOptions::default());
        assert_eq!(pts.len(), 1);
        let reg = region_boundaries(Rational::new(2, 1).unwrap(), &0.5).unwrap();
        assert_eq!((pts[0].lower, pts[0].upper), (reg.lower, reg.upper));
    }

    #[test]
    fn bad_slopes_are_skipped() {
        let pts = overlay("quadratic", &[0.3, 7.0], 2, &SolveOptions::default());
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| p.alpha == 0.3));
    }
}
