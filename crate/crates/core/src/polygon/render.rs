use std::collections::BTreeSet;
use std::fmt::Write;

use super::{NewtonPolygon, PolygonPoint};
use crate::valuation::{fmt_ratio, ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

impl std::str::FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(Self::Ascii),
            "svg" => Ok(Self::Svg),
            other => Err(format!("unknown render format `{other}` (expected ascii or svg)")),
        }
    }
}

pub fn render(np: &NewtonPolygon, format: RenderFormat) -> String {
    match format {
        RenderFormat::Ascii => ascii(np),
        RenderFormat::Svg => svg(np),
    }
}

const CELL: usize = 3;
const SCALE: usize = 40;
const MARGIN: usize = 40;

fn y_max(np: &NewtonPolygon) -> u64 {
    np.points.iter().map(|pt| pt.y).max().unwrap_or(0)
}

// `*` point, `o` vertex, `+` lattice point crossed by the path, `.` empty
fn ascii(np: &NewtonPolygon) -> String {
    let vertices: BTreeSet<PolygonPoint> = np.vertices().into_iter().collect();
    let points: BTreeSet<PolygonPoint> = np.points.iter().copied().collect();
    let ymax = y_max(np);
    let label_w = ymax.to_string().len();

    let mut out = String::new();
    writeln!(out, "phi-Newton polygon: p = {}, phi = {}, n = {}", np.p, np.phi, np.n).unwrap();
    for y in (0..=ymax).rev() {
        write!(out, "{y:>label_w$} |").unwrap();
        for x in 0..=np.n {
            let here = PolygonPoint { x, y };
            let c = if vertices.contains(&here) {
                'o'
            } else if points.contains(&here) {
                '*'
            } else if np.path_height(x) == Some(ratio(y, 1)) {
                '+'
            } else {
                '.'
            };
            write!(out, "{c:>CELL$}").unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "{:>label_w$} +{}", "", "-".repeat(CELL * (np.n + 1))).unwrap();
    write!(out, "{:>label_w$}  ", "").unwrap();
    for x in 0..=np.n {
        write!(out, "{x:>CELL$}").unwrap();
    }
    out.push('\n');
    writeln!(out, "edges:").unwrap();
    for e in &np.edges {
        writeln!(
            out,
            "  ({},{})-({},{}) slope={} hlen={}",
            e.start.x,
            e.start.y,
            e.end.x,
            e.end.y,
            fmt_ratio(&e.slope),
            e.hlen
        )
        .unwrap();
    }
    out
}

fn svg(np: &NewtonPolygon) -> String {
    let ymax = y_max(np) as usize;
    let width = np.n * SCALE + 2 * MARGIN;
    let height = ymax * SCALE + 2 * MARGIN;
    let sx = |x: usize| MARGIN + x * SCALE;
    let sy = |y: u64| MARGIN + (ymax - y as usize) * SCALE;

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray"/>"#,
        sx(0),
        sy(0),
        sx(np.n),
        sy(0)
    )
    .unwrap();
    let path: Vec<String> = np
        .vertices()
        .iter()
        .map(|v| format!("{},{}", sx(v.x), sy(v.y)))
        .collect();
    writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        path.join(" ")
    )
    .unwrap();
    let vertices: BTreeSet<PolygonPoint> = np.vertices().into_iter().collect();
    for pt in &np.points {
        let (r, fill) = if vertices.contains(pt) { (6, "white") } else { (4, "black") };
        writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{r}" fill="{fill}" stroke="black"/>"#,
            sx(pt.x),
            sy(pt.y)
        )
        .unwrap();
    }
    for e in &np.edges {
        let mx = (sx(e.start.x) + sx(e.end.x)) / 2;
        let my = (sy(e.start.y) + sy(e.end.y)) / 2;
        writeln!(
            out,
            r#"<text x="{mx}" y="{}" font-family="monospace" font-size="12">slope={}</text>"#,
            my.saturating_sub(8),
            fmt_ratio(&e.slope)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;
    use crate::polygon::build_polygon;

    fn eisenstein() -> NewtonPolygon {
        build_polygon(&IntPoly::from_i64s(&[2, 4, 6, 1]), &IntPoly::x(), 2).unwrap()
    }

    #[test]
    fn ascii_layout() {
        let np = build_polygon(&IntPoly::from_i64s(&[2, 2, 1]), &IntPoly::x(), 2).unwrap();
        let expected = "\
phi-Newton polygon: p = 2, phi = x, n = 2
1 |  .  *  o
0 |  o  .  .
  +---------
     0  1  2
edges:
  (0,0)-(2,1) slope=1/2 hlen=2
";
        assert_eq!(render(&np, RenderFormat::Ascii), expected);
    }

    #[test]
    fn eisenstein_renders_one_segment() {
        let np = eisenstein();
        let svg = render(&np, RenderFormat::Svg);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg.matches("<circle").count(), np.n + 1);
        assert_eq!(svg.matches("slope=1/3").count(), 1);
        let ascii = render(&np, RenderFormat::Ascii);
        assert_eq!(ascii.matches("slope=").count(), 1);
    }

    #[test]
    fn rendering_is_deterministic() {
        let np = eisenstein();
        for f in [RenderFormat::Ascii, RenderFormat::Svg] {
            assert_eq!(render(&np, f), render(&np.clone(), f));
        }
    }

    #[test]
    fn horizontal_only_polygon() {
        // (x+1)(x+3) over p = 2: points (0,0),(1,2),(2,0)
        let np = build_polygon(&IntPoly::from_i64s(&[3, 4, 1]), &IntPoly::x(), 2).unwrap();
        assert!(np.principal_part().edges.is_empty());
        let ascii = render(&np, RenderFormat::Ascii);
        assert!(ascii.contains("slope=0/1 hlen=2"));
        assert!(ascii.contains("0 |  o  +  o"));
    }
}
