//! SVG rendering of sweep results: strict success rate against `p11` in
//! threshold units `p11·n / ln n`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::CSV_HEADER;
use crate::error::{Error, Result};

/// The columns of a sweep CSV row that the plot uses.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotRow {
    pub n: usize,
    pub p11: f64,
    pub strict_rate: f64,
}

impl PlotRow {
    /// `p11·n / ln n`.
    pub fn threshold_x(&self) -> f64 {
        let n = self.n as f64;
        self.p11 * n / n.ln()
    }
}

/// Parses sweep CSV text; errors carry the 1-based line number.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<PlotRow>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 1;
        let rec = rec.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        if !saw_header {
            if rec.iter().ne(CSV_HEADER.iter().copied()) {
                return Err(Error::Parse { line, msg: format!("expected header {}", CSV_HEADER.join(",")) });
            }
            saw_header = true;
            continue;
        }
        if rec.len() != CSV_HEADER.len() {
            return Err(Error::Parse { line, msg: format!("expected {} fields, got {}", CSV_HEADER.len(), rec.len()) });
        }
        let num = |idx: usize| -> Result<f64> {
            rec[idx]
                .parse::<f64>()
                .map_err(|_| Error::Parse { line, msg: format!("column {} is not a number: '{}'", CSV_HEADER[idx], &rec[idx]) })
        };
        let n = rec[0]
            .parse::<usize>()
            .map_err(|_| Error::Parse { line, msg: format!("column n is not an integer: '{}'", &rec[0]) })?;
        for idx in 1..CSV_HEADER.len() {
            num(idx)?;
        }
        rows.push(PlotRow { n, p11: num(1)?, strict_rate: num(6)? });
    }
    if !saw_header {
        return Err(Error::Parse { line: 1, msg: "empty file, expected a header".into() });
    }
    Ok(rows)
}

const W: f64 = 800.0;
const H: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// A self-contained 800×600 SVG: one polyline with circle markers per `n`,
/// labeled axes, a legend and a dashed reference line at `x = 1`.
pub fn render_svg(rows: &[PlotRow]) -> String {
    let x_max = rows.iter().map(PlotRow::threshold_x).filter(|x| x.is_finite()).fold(1.0f64, f64::max) * 1.1;
    let sx = |x: f64| LEFT + x / x_max * (W - LEFT - RIGHT);
    let sy = |y: f64| H - BOTTOM - y.clamp(0.0, 1.0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);

    let (x0, x1, y0, y1) = (sx(0.0), sx(x_max), sy(0.0), sy(1.0));
    let _ = writeln!(s, r#"<g id="axes" stroke="black">"#);
    let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#);
    for k in 0..=5 {
        let y = k as f64 / 5.0;
        let py = sy(y);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}"/>"#, x0 - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" stroke="none" text-anchor="end">{y:.1}</text>"#, x0 - 8.0, py + 4.0);
    }
    for k in 0..=5 {
        let x = x_max * k as f64 / 5.0;
        let px = sx(x);
        let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}"/>"#, y0 + 5.0);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" stroke="none" text-anchor="middle">{x:.2}</text>"#, y0 + 20.0);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">p11 · n / ln n</text>"#,
        (x0 + x1) / 2.0,
        H - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">strict success rate</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
    let rx = sx(1.0);
    let _ = writeln!(
        s,
        r##"<line id="threshold" x1="{rx:.2}" y1="{y0:.2}" x2="{rx:.2}" y2="{y1:.2}" stroke="#777" stroke-dasharray="6 4"/>"##
    );

    let mut by_n: BTreeMap<usize, Vec<&PlotRow>> = BTreeMap::new();
    for r in rows {
        by_n.entry(r.n).or_default().push(r);
    }
    for (i, (n, pts)) in by_n.iter_mut().enumerate() {
        pts.sort_by(|a, b| a.threshold_x().total_cmp(&b.threshold_x()));
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> =
            pts.iter().map(|r| format!("{:.2},{:.2}", sx(r.threshold_x()), sy(r.strict_rate))).collect();
        let _ = writeln!(s, r#"<g class="series" data-n="{n}">"#);
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, coords.join(" "));
        for r in pts.iter() {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{color}"/>"#,
                sx(r.threshold_x()),
                sy(r.strict_rate)
            );
        }
        let ly = TOP + 20.0 * i as f64;
        let lx = W - RIGHT + 20.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 25.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">n = {n}</text>"#, lx + 32.0, ly + 4.0);
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

/// Reads a sweep CSV and writes its SVG plot.
pub fn emit_plot(csv_path: &Path, out: &Path) -> Result<()> {
    let text = fs::read_to_string(csv_path).map_err(|e| Error::io(csv_path, e))?;
    let rows = parse_sweep_csv(&text)?;
    fs::write(out, render_svg(&rows)).map_err(|e| Error::io(out, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "n,p11,p10,p01,p00,trials,strict_rate,mean_eta,mean_q,mean_aut,seed\n";

    #[test]
    fn empty_sweep_gives_axes_only() {
        let rows = parse_sweep_csv(HEAD).unwrap();
        let svg = render_svg(&rows);
        assert!(svg.contains(r#"id="axes""#));
        assert!(svg.contains(r#"id="threshold""#));
        assert_eq!(svg.matches("<circle").count(), 0);
    }

    #[test]
    fn markers_per_cell() {
        let mut text = HEAD.to_string();
        for k in 0..6 {
            text.push_str(&format!("9,{},0,0,{},10,0.5,0.5,2,3,{k}\n", 0.1 * k as f64, 1.0 - 0.1 * k as f64));
        }
        let svg = render_svg(&parse_sweep_csv(&text).unwrap());
        assert_eq!(svg.matches("<circle").count(), 6);
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn schema_errors_name_the_line() {
        match parse_sweep_csv("a,b\n") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        let text = format!("{HEAD}9,0.1,0,0,0.9,10,0.5,0.5,2,3,0\n9,x,0,0,0.9,10,0.5,0.5,2,3,0\n");
        match parse_sweep_csv(&text) {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
