//! Line charts of a replayed match: long-term probability, smoothed
//! efficiency and TMM, one panel each, with a polyline per player.

use std::fmt::Write;

use tmm_core::momentum::PlayerSample;
use tmm_core::MomentumSample64;

const WIDTH: f64 = 900.0;
const PANEL: f64 = 220.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

struct Panel {
    title: &'static str,
    value: fn(&PlayerSample<f64>) -> f64,
}

const PANELS: [Panel; 3] = [
    Panel {
        title: "Long-term scoring probability",
        value: |p| p.p_ltm,
    },
    Panel {
        title: "Efficiency",
        value: |p| p.efficiency_smoothed,
    },
    Panel {
        title: "TMM",
        value: |p| p.tmm,
    },
];

pub fn render(samples: &[MomentumSample64], labels: [&str; 2]) -> String {
    let height = MARGIN + PANELS.len() as f64 * (PANEL + MARGIN);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (i, label) in labels.iter().enumerate() {
        let x = MARGIN + i as f64 * 200.0;
        writeln!(
            out,
            r#"<text x="{x:.1}" y="20" fill="{}">{}</text>"#,
            COLORS[i],
            escape(label)
        )
        .unwrap();
    }
    let n = samples.len().max(2) as f64;
    let plot_w = WIDTH - 2.0 * MARGIN;
    for (k, panel) in PANELS.iter().enumerate() {
        let top = MARGIN + k as f64 * (PANEL + MARGIN);
        let values = samples
            .iter()
            .flat_map(|s| s.players.iter().map(panel.value));
        let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
        let (lo, hi) = if lo.is_finite() && hi > lo {
            (lo, hi)
        } else {
            (0.0, 1.0)
        };
        let x = |i: usize| MARGIN + plot_w * i as f64 / (n - 1.0);
        let y = |v: f64| top + PANEL * (1.0 - (v - lo) / (hi - lo));

        writeln!(
            out,
            r##"<g><text x="{MARGIN}" y="{:.1}">{}</text><rect x="{MARGIN}" y="{top:.1}" width="{plot_w:.1}" height="{PANEL}" fill="none" stroke="#999"/>"##,
            top - 6.0,
            panel.title
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{hi:.3}</text><text x="{:.1}" y="{:.1}" text-anchor="end">{lo:.3}</text>"#,
            MARGIN - 4.0,
            top + 10.0,
            MARGIN - 4.0,
            top + PANEL,
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">point</text>"#,
            MARGIN + plot_w / 2.0,
            top + PANEL + 16.0
        )
        .unwrap();
        for (player, color) in COLORS.iter().enumerate() {
            let mut points = String::new();
            for (i, s) in samples.iter().enumerate() {
                if i > 0 {
                    points.push(' ');
                }
                write!(
                    points,
                    "{:.2},{:.2}",
                    x(i),
                    y((panel.value)(&s.players[player]))
                )
                .unwrap();
            }
            writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>"#
            )
            .unwrap();
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
