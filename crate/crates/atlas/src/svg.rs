//! Standalone SVG 1.1 rendering of period grids.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use thiserror::Error;

use crate::sweep::GRID_HEADER;
use crate::tongues::{OverlayPoint, OVERLAY_HEADER};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("grid is not rectangular: {cells} cells over {columns} distinct slopes")]
    NotRectangular { cells: usize, columns: usize },
    #[error("grid has fewer than 2 rows or columns")]
    TooSmall,
}

/// A parsed grid row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub alpha: f64,
    pub y: f64,
    pub period: usize,
}

fn malformed(line: u64, message: impl Into<String>) -> RenderError {
    RenderError::Malformed {
        line,
        message: message.into(),
    }
}

fn records<R: Read>(input: R, header: &[&str]) -> Result<Vec<(u64, csv::StringRecord)>, RenderError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let found = rdr.headers().map_err(|e| malformed(1, e.to_string()))?.clone();
    let found: Vec<&str> = found.iter().collect();
    if found.len() < header.len() || found[..header.len()] != *header {
        return Err(malformed(1, format!("expected header starting `{}`", header.join(","))));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            malformed(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        out.push((line, rec));
    }
    Ok(out)
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, line: u64, name: &str) -> Result<T, RenderError> {
    let raw = rec.get(i).ok_or_else(|| malformed(line, format!("missing column `{name}`")))?;
    raw.trim()
        .parse()
        .map_err(|_| malformed(line, format!("cannot parse {name} `{raw}`")))
}

pub fn parse_grid_csv<R: Read>(input: R) -> Result<Vec<GridPoint>, RenderError> {
    records(input, &GRID_HEADER[..6])?
        .into_iter()
        .map(|(line, rec)| {
            Ok(GridPoint {
                alpha: field(&rec, 0, line, "alpha")?,
                y: field(&rec, 1, line, "c_or_beta")?,
                period: field(&rec, 2, line, "period")?,
            })
        })
        .collect()
}

pub fn parse_overlay_csv<R: Read>(input: R) -> Result<Vec<OverlayPoint>, RenderError> {
    records(input, &OVERLAY_HEADER)?
        .into_iter()
        .map(|(line, rec)| {
            Ok(OverlayPoint {
                alpha: field(&rec, 0, line, "alpha")?,
                n: field(&rec, 1, line, "n")?,
                l: field(&rec, 2, line, "l")?,
                lower: field(&rec, 3, line, "lower")?,
                upper: field(&rec, 4, line, "upper")?,
            })
        })
        .collect()
}

/// 64 fixed colours; entry 0 (no period found, and multiples of 64) is dark.
pub fn palette() -> Vec<String> {
    let mut out = vec!["#1e1e1e".to_string()];
    for i in 1..64u32 {
        let hue = (f64::from(i) * 137.507_764) % 360.0;
        let light = [0.45, 0.6, 0.75][(i % 3) as usize];
        out.push(hsl_hex(hue, 0.7, light));
    }
    out
}

fn hsl_hex(h: f64, s: f64, l: f64) -> String {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let byte = |v: f64| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    format!("#{:02x}{:02x}{:02x}", byte(r), byte(g), byte(b))
}

/// Grid dimensions `(columns, rows)` of a row-major grid.
pub fn grid_shape(points: &[GridPoint]) -> Result<(usize, usize), RenderError> {
    let first_y = points.first().ok_or(RenderError::TooSmall)?.y;
    let columns = points.iter().take_while(|p| p.y == first_y).count();
    if columns < 2 || !points.len().is_multiple_of(columns) {
        return Err(RenderError::NotRectangular {
            cells: points.len(),
            columns,
        });
    }
    let rows = points.len() / columns;
    if rows < 2 {
        return Err(RenderError::TooSmall);
    }
    Ok((columns, rows))
}

/// One unit square per cell, `α` to the right and the second parameter up.
/// Overlay curves trace each tongue's two bounds across the sampled slopes.
pub fn render_svg(points: &[GridPoint], overlay: &[OverlayPoint]) -> Result<String, RenderError> {
    let (w, h) = grid_shape(points)?;
    let colours = palette();
    let amin = points.iter().map(|p| p.alpha).fold(f64::INFINITY, f64::min);
    let amax = points.iter().map(|p| p.alpha).fold(f64::NEG_INFINITY, f64::max);
    let ymin = points.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let ymax = points.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let px = (1024 / w.max(h)).max(1);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    s.push_str("<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" \"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {w} {h}\" shape-rendering=\"crispEdges\">",
        w * px,
        h * px
    );
    s.push_str("<g id=\"cells\" stroke=\"none\">\n");
    for (k, p) in points.iter().enumerate() {
        let (i, j) = (k % w, k / w);
        let _ = writeln!(
            s,
            "<rect x=\"{i}\" y=\"{}\" width=\"1\" height=\"1\" fill=\"{}\"/>",
            h - 1 - j,
            colours[p.period % 64]
        );
    }
    s.push_str("</g>\n");

    let to_x = |a: f64| (a - amin) / (amax - amin) * (w - 1) as f64 + 0.5;
    let to_y = |v: f64| h as f64 - ((v - ymin) / (ymax - ymin) * (h - 1) as f64 + 0.5);
    let mut curves: BTreeMap<(u32, u32), Vec<&OverlayPoint>> = BTreeMap::new();
    for p in overlay {
        curves.entry((p.n, p.l)).or_default().push(p);
    }
    s.push_str("<g id=\"tongues\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.15\">\n");
    for ((n, l), mut pts) in curves {
        pts.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
        for bound in [|p: &OverlayPoint| p.lower, |p: &OverlayPoint| p.upper] {
            let coords: Vec<String> = pts
                .iter()
                .map(|p| format!("{:.4},{:.4}", to_x(p.alpha), to_y(bound(p))))
                .collect();
            let _ = writeln!(s, "<polyline class=\"t{n}-{l}\" points=\"{}\"/>", coords.join(" "));
        }
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: usize, h: usize) -> Vec<GridPoint> {
        (0..w * h)
            .map(|k| GridPoint {
                alpha: (k % w) as f64,
                y: (k / w) as f64,
                period: k,
            })
            .collect()
    }

    #[test]
    fn palette_has_64_distinct_entries() {
        let p = palette();
        assert_eq!(p.len(), 64);
        let set: std::collections::HashSet<_> = p.iter().collect();
        assert_eq!(set.len(), 64);
    }

    #[test]
    fn one_rect_per_cell() {
        let svg = render_svg(&grid(64, 64), &[]).unwrap();
        assert_eq!(svg.matches("<rect ").count(), 4096);
        assert!(svg.contains("version=\"1.1\""));
    }

    #[test]
    fn overlay_draws_two_curves_per_tongue() {
        let ov = [0.0, 3.0].map(|alpha| OverlayPoint {
            alpha,
            n: 2,
            l: 1,
            lower: 1.0,
            upper: 2.0,
        });
        let svg = render_svg(&grid(4, 4), &ov).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
    }

    #[test]
    fn malformed_rows_name_their_line() {
        let text = "alpha,c_or_beta,period,l,rotation_num,rotation_den,note\n0.1,0.2,2,1,1,2,\n0.2,zz,2,1,1,2,\n";
        match parse_grid_csv(text.as_bytes()) {
            Err(RenderError::Malformed { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_grid_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn ragged_grid_rejected() {
        let mut g = grid(3, 3);
        g.pop();
        assert!(matches!(render_svg(&g, &[]), Err(RenderError::NotRectangular { .. })));
    }
}
