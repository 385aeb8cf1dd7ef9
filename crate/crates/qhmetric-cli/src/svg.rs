//! Self-contained SVG rendering of eigenvalue curves.

use qhmetric::positivity::CurveTable;
use qhmetric::rational::rational_to_f64;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 620.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f",
];

/// Renders the table as one polyline per eigenvalue curve, axes labeled
/// g and p(g) (ln p(g) in log mode). Nonpositive values in log mode break
/// the polyline into segments.
pub fn curves_svg(table: &CurveTable, n: usize, a0: &str, title_extra: &str) -> String {
    let ts: Vec<f64> = table.ts.iter().map(rational_to_f64).collect();
    // collect plotted values per curve
    let values: Vec<Vec<Option<f64>>> = if table.log_scale {
        table.log_curves.clone().unwrap_or_default()
    } else {
        table
            .curves
            .iter()
            .map(|curve| curve.iter().map(|v| Some(v.to_f64())).collect())
            .collect()
    };

    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for curve in &values {
        for v in curve.iter().flatten() {
            y_min = y_min.min(*v);
            y_max = y_max.max(*v);
        }
    }
    if !y_min.is_finite() || !y_max.is_finite() {
        y_min = -1.0;
        y_max = 1.0;
    }
    if (y_max - y_min).abs() < 1e-300 {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;
    let x_min = ts.first().copied().unwrap_or(0.0);
    let x_max = ts.last().copied().unwrap_or(1.0);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let y_label = if table.log_scale { "ln p(g)" } else { "p(g)" };
    out.push_str(&format!(
        "<text x=\"{}\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">eigenvalue curves, N={n}, a={a0}{title_extra}</text>\n",
        WIDTH / 2.0
    ));

    // axes
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        MARGIN_LEFT,
        MARGIN_TOP,
        MARGIN_LEFT,
        HEIGHT - MARGIN_BOTTOM
    ));
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        MARGIN_LEFT,
        HEIGHT - MARGIN_BOTTOM,
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM
    ));
    // zero line when visible
    if y_min < 0.0 && y_max > 0.0 {
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{:.2}\" x2=\"{}\" y2=\"{:.2}\" stroke=\"#cccccc\" stroke-dasharray=\"4 3\"/>\n",
            MARGIN_LEFT,
            sy(0.0),
            WIDTH - MARGIN_RIGHT,
            sy(0.0)
        ));
    }
    // ticks
    for k in 0..=5 {
        let x = x_min + (x_max - x_min) * k as f64 / 5.0;
        let px = sx(x);
        out.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{}\" x2=\"{px:.2}\" y2=\"{}\" stroke=\"black\"/>\n",
            HEIGHT - MARGIN_BOTTOM,
            HEIGHT - MARGIN_BOTTOM + 6.0
        ));
        out.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            HEIGHT - MARGIN_BOTTOM + 22.0,
            format_tick(x)
        ));
        let y = y_min + (y_max - y_min) * k as f64 / 5.0;
        let py = sy(y);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{py:.2}\" x2=\"{}\" y2=\"{py:.2}\" stroke=\"black\"/>\n",
            MARGIN_LEFT - 6.0,
            MARGIN_LEFT
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            MARGIN_LEFT - 10.0,
            py + 4.0,
            format_tick(y)
        ));
    }
    // axis labels
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">g</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0
    ));
    out.push_str(&format!(
        "<text x=\"22\" y=\"{}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 22 {})\">{y_label}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));

    // curves
    for (j, curve) in values.iter().enumerate() {
        let color = PALETTE[j % PALETTE.len()];
        let mut segment: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, out: &mut String| {
            if seg.len() >= 2 {
                out.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                    seg.join(" ")
                ));
            }
            seg.clear();
        };
        for (k, v) in curve.iter().enumerate() {
            match v {
                Some(y) if y.is_finite() => {
                    segment.push(format!("{:.2},{:.2}", sx(ts[k]), sy(*y)))
                }
                _ => flush(&mut segment, &mut out),
            }
        }
        flush(&mut segment, &mut out);
        // legend swatch
        let ly = MARGIN_TOP + 8.0 + j as f64 * 16.0;
        out.push_str(&format!(
            "<rect x=\"{}\" y=\"{:.2}\" width=\"10\" height=\"10\" fill=\"{color}\"/>\n",
            WIDTH - MARGIN_RIGHT - 70.0,
            ly - 9.0
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{ly:.2}\" font-family=\"sans-serif\" font-size=\"12\">p{}</text>\n",
            WIDTH - MARGIN_RIGHT - 55.0,
            j + 1
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-3..1e5).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        s
    } else {
        format!("{v:.2e}")
    }
}
