//! Barcode strips as plain text and as SVG 1.1.

use std::fmt::Write;

use laddermod::persistence::{Barcode, Interval};

fn rows(barcode: &Barcode) -> Vec<Interval> {
    barcode.bars()
}

fn range(bars: &[Interval]) -> (i64, i64) {
    let lo = bars.iter().map(|b| b.birth()).min().unwrap_or(0);
    let hi = bars.iter().map(|b| b.death()).max().unwrap_or(0);
    (lo, hi)
}

/// One row per bar: `#` at every index the bar covers.
pub fn text_diagram(barcode: &Barcode) -> String {
    let bars = rows(barcode);
    if bars.is_empty() {
        return String::new();
    }
    let (lo, hi) = range(&bars);
    let labels: Vec<String> = bars.iter().map(Interval::to_string).collect();
    let width = labels.iter().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    let axis: String = (lo..=hi)
        .map(|t| if t.rem_euclid(5) == 0 { '|' } else { '.' })
        .collect();
    writeln!(out, "{:width$}  {axis}  {lo}..{hi}", "").unwrap();
    for (bar, label) in bars.iter().zip(&labels) {
        let strip: String = (lo..=hi)
            .map(|t| if bar.contains(t) { '#' } else { ' ' })
            .collect();
        writeln!(out, "{label:>width$}  {}", strip.trim_end()).unwrap();
    }
    out
}

const CELL: i64 = 24;
const ROW: i64 = 18;
const MARGIN: i64 = 60;

/// Static SVG: bars drawn as strips over an index axis, one row per bar.
pub fn svg_diagram(barcode: &Barcode, title: &str) -> String {
    let bars = rows(barcode);
    let (lo, hi) = range(&bars);
    let width = MARGIN * 2 + CELL * (hi - lo + 1);
    let height = 50 + ROW * bars.len() as i64 + 30;
    let x = |t: i64| MARGIN + CELL * (t - lo);
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(out, r#"<title>{}</title>"#, escape(title)).unwrap();
    writeln!(
        out,
        r#"<text x="{MARGIN}" y="24" font-family="monospace" font-size="14">{}</text>"#,
        escape(title)
    )
    .unwrap();
    for (k, bar) in bars.iter().enumerate() {
        let y = 40 + ROW * k as i64;
        writeln!(
            out,
            r##"<rect x="{}" y="{y}" width="{}" height="{}" fill="#3465a4"/>"##,
            x(bar.birth()),
            CELL * (bar.length() + 1),
            ROW - 6
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="11" text-anchor="end">{bar}</text>"#,
            MARGIN - 6,
            y + ROW - 8
        )
        .unwrap();
    }
    let axis_y = 40 + ROW * bars.len() as i64 + 6;
    writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black"/>"#,
        x(hi + 1)
    )
    .unwrap();
    if !bars.is_empty() {
        for t in lo..=hi {
            writeln!(
                out,
                r#"<text x="{}" y="{}" font-family="monospace" font-size="10" text-anchor="middle">{t}</text>"#,
                x(t) + CELL / 2,
                axis_y + 14
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rows() {
        let b: Barcode = [Interval::of(0, 4), Interval::of(1, 7), Interval::of(4, 4)]
            .into_iter()
            .collect();
        let t = text_diagram(&b);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "[0,4]  #####");
        assert_eq!(lines[2], "[1,7]   #######");
        assert_eq!(lines[3], "[4,4]      #");
        assert_eq!(text_diagram(&Barcode::new()), "");
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let b: Barcode = [Interval::of(0, 2)].into_iter().collect();
        let s = svg_diagram(&b, "V <bars>");
        assert!(s.starts_with("<?xml"));
        assert!(s.contains(r#"version="1.1""#));
        assert_eq!(s.matches("<rect").count(), 1);
        assert!(s.contains("V &lt;bars&gt;"));
        assert!(s.trim_end().ends_with("</svg>"));
    }
}
