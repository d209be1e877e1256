use std::fmt::Write as _;

use super::results::SummaryRow;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// One SVG per graph family: mean hitting time (log scale) against `k`, a
/// polyline per walker, and the cap rate printed next to any point that has
/// capped runs. Families appear in order of first occurrence.
pub fn plot_svg(summary: &[SummaryRow]) -> Vec<(String, String)> {
    let mut families: Vec<&str> = Vec::new();
    for r in summary {
        if !families.contains(&r.family.as_str()) {
            families.push(&r.family);
        }
    }
    families
        .into_iter()
        .map(|fam| {
            let rows: Vec<&SummaryRow> = summary.iter().filter(|r| r.family == fam).collect();
            (fam.to_string(), render(fam, &rows))
        })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn decade_label(d: i32) -> String {
    if (0..=4).contains(&d) {
        format!("{}", 10_u64.pow(d as u32))
    } else {
        format!("1e{d}")
    }
}

fn render(family: &str, rows: &[&SummaryRow]) -> String {
    // Means below one (immediate hits) sit on the bottom axis.
    let log_mean = |r: &SummaryRow| r.mean.max(1.0).log10();
    let mut ks: Vec<usize> = rows.iter().map(|r| r.k).collect();
    ks.sort_unstable();
    ks.dedup();
    let (k_lo, k_hi) = (ks[0] as f64, *ks.last().unwrap() as f64);
    let y_lo = rows.iter().map(|r| log_mean(r)).fold(f64::INFINITY, f64::min).floor();
    let mut y_hi = rows.iter().map(|r| log_mean(r)).fold(f64::NEG_INFINITY, f64::max).ceil();
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x_of = |k: usize| {
        if k_hi > k_lo {
            LEFT + (k as f64 - k_lo) / (k_hi - k_lo) * plot_w
        } else {
            LEFT + plot_w / 2.0
        }
    };
    let y_of = |v: f64| TOP + (y_hi - v) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}: mean hitting time vs k</text>"#,
        LEFT + plot_w / 2.0,
        escape(family)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for d in (y_lo as i32)..=(y_hi as i32) {
        let y = y_of(d as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#dddddd"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            decade_label(d)
        );
    }
    for &k in &ks {
        let x = x_of(k);
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{k}</text>"#,
            TOP + plot_h + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">k</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">mean T_hit</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let mut labels: Vec<String> = Vec::new();
    for r in rows {
        let l = r.label();
        if !labels.contains(&l) {
            labels.push(l);
        }
    }
    for (si, label) in labels.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let mut pts: Vec<&&SummaryRow> = rows.iter().filter(|r| r.label() == *label).collect();
        pts.sort_by_key(|r| r.k);
        if pts.len() >= 2 {
            let coords: Vec<String> =
                pts.iter().map(|r| format!("{:.1},{:.1}", x_of(r.k), y_of(log_mean(r)))).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                coords.join(" ")
            );
        }
        for r in &pts {
            let (x, y) = (x_of(r.k), y_of(log_mean(r)));
            let _ = writeln!(s, r#"<circle cx="{x:.1}" cy="{y:.1}" r="3.5" fill="{color}"/>"#);
            if r.cap_rate > 0.0 {
                let _ = writeln!(
                    s,
                    r#"<text x="{:.1}" y="{:.1}" fill="{color}" font-size="10">cap {:.1}%</text>"#,
                    x + 5.0,
                    y - 5.0,
                    100.0 * r.cap_rate
                );
            }
        }
        let ly = TOP + 10.0 + 20.0 * si as f64;
        let lx = WIDTH - RIGHT + 16.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, lx + 26.0, ly + 4.0, escape(label));
    }
    s.push_str("</svg>\n");
    s
}
