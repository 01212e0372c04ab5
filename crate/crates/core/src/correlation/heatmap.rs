//! Heatmap artifacts: a fixed-point CSV of the matrix and an SVG rendering
//! with a blue-white-red diverging ramp over [-1, 1]. Both outputs are
//! deterministic byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

use super::CorrelationMatrix;

const NEGATIVE_END: [u8; 3] = [0x21, 0x66, 0xac];
const MIDPOINT: [u8; 3] = [0xf7, 0xf7, 0xf7];
const POSITIVE_END: [u8; 3] = [0xb2, 0x18, 0x2b];

const CELL: usize = 36;
const LEFT_MARGIN: usize = 130;
const TOP_MARGIN: usize = 120;

/// Hex fill for a correlation value: `#2166ac` at -1, near-white at 0,
/// `#b2182b` at +1.
pub fn ramp_color(r: f64) -> String {
    let r = r.clamp(-1.0, 1.0);
    let (end, t) = if r < 0.0 {
        (NEGATIVE_END, -r)
    } else {
        (POSITIVE_END, r)
    };
    let mix = |a: u8, b: u8| -> u8 { (f64::from(a) + (f64::from(b) - f64::from(a)) * t).round() as u8 };
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(MIDPOINT[0], end[0]),
        mix(MIDPOINT[1], end[1]),
        mix(MIDPOINT[2], end[2])
    )
}

/// Renders the matrix as CSV with six fixed fractional digits.
pub fn heatmap_csv(cm: &CorrelationMatrix) -> String {
    let mut out = String::new();
    for name in cm.columns() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for i in 0..cm.size() {
        out.push_str(&cm.columns()[i]);
        for j in 0..cm.size() {
            let _ = write!(out, ",{:.6}", cm.get(i, j));
        }
        out.push('\n');
    }
    out
}

/// Renders the matrix as a standalone SVG heatmap.
pub fn heatmap_svg(cm: &CorrelationMatrix) -> String {
    let k = cm.size();
    let width = LEFT_MARGIN + k * CELL + 20;
    let height = TOP_MARGIN + k * CELL + 20;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">"
    );
    for (j, name) in cm.columns().iter().enumerate() {
        let x = LEFT_MARGIN + j * CELL + CELL / 2;
        let y = TOP_MARGIN - 6;
        let _ = writeln!(
            svg,
            "<text x=\"{x}\" y=\"{y}\" text-anchor=\"start\" transform=\"rotate(-60 {x} {y})\">{name}</text>"
        );
    }
    for (i, name) in cm.columns().iter().enumerate() {
        let x = LEFT_MARGIN - 6;
        let y = TOP_MARGIN + i * CELL + CELL / 2 + 4;
        let _ = writeln!(svg, "<text x=\"{x}\" y=\"{y}\" text-anchor=\"end\">{name}</text>");
    }
    let _ = writeln!(svg, "</g>");
    for i in 0..k {
        for j in 0..k {
            let r = cm.get(i, j);
            let x = LEFT_MARGIN + j * CELL;
            let y = TOP_MARGIN + i * CELL;
            let fill = ramp_color(r);
            let _ = writeln!(
                svg,
                "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{fill}\" stroke=\"white\"/>"
            );
            let text_fill = if r.abs() > 0.55 { "white" } else { "black" };
            let tx = x + CELL / 2;
            let ty = y + CELL / 2 + 4;
            let _ = writeln!(
                svg,
                "<text x=\"{tx}\" y=\"{ty}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\" fill=\"{text_fill}\">{r:.2}</text>"
            );
        }
    }
    let _ = writeln!(svg, "</svg>");
    svg
}

/// Writes `<csv_path>` and `<svg_path>` for the matrix.
pub fn emit_heatmap(cm: &CorrelationMatrix, csv_path: &Path, svg_path: &Path) -> Result<()> {
    std::fs::write(csv_path, heatmap_csv(cm))?;
    std::fs::write(svg_path, heatmap_svg(cm))?;
    Ok(())
}
