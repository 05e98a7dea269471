//! Static SVG line charts. Presentational only; the CSV next to the
//! plot is the source of truth. Output bytes are deterministic for a
//! given result.

use std::io::Write;
use std::path::Path;

use super::SweepResult;
use crate::error::{Error, Result};

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 220.0;
const MARGIN_T: f64 = 24.0;
const MARGIN_B: f64 = 56.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

/// Render one line per (mode, estimator) series of the sweep.
pub fn emit_plot(result: &SweepResult, path: &Path) -> Result<()> {
    let mut series: Vec<Series> = Vec::new();
    for row in result.rows.iter().filter(|r| r.feasible) {
        let label = if result.rows.iter().any(|o| o.estimator != row.estimator) {
            format!("{} [{}]", row.mode_label, row.estimator)
        } else {
            row.mode_label.clone()
        };
        match series.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push((row.sweep_value, row.mean_xi)),
            None => series.push(Series {
                label,
                points: vec![(row.sweep_value, row.mean_xi)],
            }),
        }
    }
    if series.is_empty() {
        return Err(Error::Domain("nothing to plot: no feasible series".into()));
    }

    let xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    let ys: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .collect();
    let (x_lo, x_hi) = padded_range(&xs);
    let (y_lo, y_hi) = padded_range(&ys);
    let sx = move |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * (WIDTH - MARGIN_L - MARGIN_R);
    let sy = move |y: f64| {
        HEIGHT - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - MARGIN_T - MARGIN_B)
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" fill=\"white\"/>\n"
    ));

    // axes
    let x0 = sx(x_lo);
    let x1 = sx(x_hi);
    let y0 = sy(y_lo);
    let y1 = sy(y_hi);
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"black\"/>\n"
    ));
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = x_lo + t * (x_hi - x_lo);
        let yv = y_lo + t * (y_hi - y_lo);
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
            sx(xv),
            y0 + 18.0,
            tick(xv)
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
            x0 - 6.0,
            sy(yv) + 4.0,
            tick(yv)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        result.sweep_name
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" transform=\"rotate(-90 16 {:.2})\" text-anchor=\"middle\">mean_xi_bpj</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    ));

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
        for &(x, y) in &s.points {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>\n",
                sx(x),
                sy(y)
            ));
        }
        let ly = MARGIN_T + 16.0 * i as f64 + 8.0;
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            WIDTH - MARGIN_R + 12.0,
            WIDTH - MARGIN_R + 38.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>\n",
            WIDTH - MARGIN_R + 44.0,
            ly + 4.0,
            s.label
        ));
    }
    svg.push_str("</svg>\n");

    let mut out = std::fs::File::create(path)?;
    out.write_all(svg.as_bytes())?;
    Ok(())
}

fn padded_range(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn tick(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::SweepRow;

    fn result_with(rows: Vec<SweepRow>) -> SweepResult {
        SweepResult {
            sweep_name: "speed_kmh",
            rows,
        }
    }

    fn row(speed: f64, xi: f64, feasible: bool) -> SweepRow {
        SweepRow {
            sweep_value: speed,
            mode_label: "SIMO".into(),
            estimator: "upper",
            mean_xi: xi,
            se_xi: 0.0,
            mean_p_t: 1.0,
            mean_capacity: 1.0,
            feasible,
        }
    }

    #[test]
    fn empty_series_is_an_error() {
        let dir = std::env::temp_dir().join("bitjoule_plot_empty");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("plot.svg");
        assert!(emit_plot(&result_with(vec![]), &path).is_err());
        assert!(emit_plot(&result_with(vec![row(3.0, 1.0, false)]), &path).is_err());
    }

    #[test]
    fn plot_bytes_are_deterministic_and_nonempty() {
        let dir = std::env::temp_dir().join("bitjoule_plot_det");
        std::fs::create_dir_all(&dir).unwrap();
        let rows = vec![
            row(3.0, 1.0e5, true),
            row(30.0, 9.0e4, true),
            row(120.0, 7.5e4, true),
        ];
        let p1 = dir.join("a.svg");
        let p2 = dir.join("b.svg");
        emit_plot(&result_with(rows.clone()), &p1).unwrap();
        emit_plot(&result_with(rows), &p2).unwrap();
        let a = std::fs::read(&p1).unwrap();
        let b = std::fs::read(&p2).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b);
    }
}
