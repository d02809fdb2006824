use std::fmt::Write;

use paracalc_core::regcalc::{flags, MembershipGrid, SmoothnessPoint};

const WIDTH: f64 = 680.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const TOP: f64 = 30.0;
const PLOT: f64 = 420.0;

const LAYERS: [(u8, &str, &str, &str); 4] = [
    (flags::IN_A, "in_a", "D(A): s > 1/p", "#1f77b4"),
    (flags::IN_LU, "in_lu", "D(L_u)", "#2ca02c"),
    (flags::IN_DU, "in_du", "D_u = D(A) and D(L_u)", "#ff7f0e"),
    (flags::IN_N, "in_n", "D(N)", "#d62728"),
];

/// Tick positions at multiples of a 1-2-2.5-5 step, with labels printed to
/// the precision of the step.
fn ticks(lo: f64, hi: f64) -> Vec<(f64, String)> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(raw);
    let mut decimals = 0;
    while decimals < 6
        && ((step * 10f64.powi(decimals)).round() - step * 10f64.powi(decimals)).abs() > 1e-9
    {
        decimals += 1;
    }
    let first = (lo / step - 1e-9).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last)
        .map(|k| {
            let t = k as f64 * step;
            let label = format!("{:.*}", decimals as usize, t);
            let label =
                if label.starts_with('-') && label[1..].chars().all(|c| c == '0' || c == '.') {
                    label[1..].to_string()
                } else {
                    label
                };
            (t, label)
        })
        .collect()
}

/// One layer per flag, axes with `1/p` horizontal and `s` vertical, a legend,
/// and the a priori point when it lies in the window.
pub fn render_regions(grid: &MembershipGrid, apriori: Option<&SmoothnessPoint>) -> String {
    let w = grid.window;
    let res = grid.resolution;
    let px = PLOT / res as f64;
    let x_of = |invp: f64| LEFT + (invp - w.invp_min) / (w.invp_max - w.invp_min) * PLOT;
    let y_of = |s: f64| TOP + PLOT - (s - w.s_min) / (w.s_max - w.s_min) * PLOT;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    for (flag, id, _, color) in LAYERS {
        let _ = writeln!(
            out,
            r#"<g id="layer-{id}" fill="{color}" fill-opacity="0.35" stroke="none">"#
        );
        for row in 0..res {
            let y = TOP + PLOT - (row + 1) as f64 * px;
            let mut col = 0;
            while col < res {
                if grid.get(row, col) & flag == 0 {
                    col += 1;
                    continue;
                }
                let start = col;
                while col < res && grid.get(row, col) & flag != 0 {
                    col += 1;
                }
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
                    LEFT + start as f64 * px,
                    y,
                    (col - start) as f64 * px,
                    px
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(
        out,
        r#"<g id="axes" stroke="black" stroke-width="1" fill="none">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{PLOT}" height="{PLOT}"/>"#
    );
    for (t, _) in ticks(w.invp_min, w.invp_max) {
        let x = x_of(t);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}"/>"#,
            TOP + PLOT,
            TOP + PLOT + 5.0
        );
    }
    for (t, _) in ticks(w.s_min, w.s_max) {
        let y = y_of(t);
        let _ = writeln!(
            out,
            r#"<line x1="{:.3}" y1="{y:.3}" x2="{LEFT}" y2="{y:.3}"/>"#,
            LEFT - 5.0
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="labels" fill="black">"#);
    for (t, label) in ticks(w.invp_min, w.invp_max) {
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{label}</text>"#,
            x_of(t),
            TOP + PLOT + 18.0
        );
    }
    for (t, label) in ticks(w.s_min, w.s_max) {
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{label}</text>"#,
            LEFT - 8.0,
            y_of(t) + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">1/p</text>"#,
        LEFT + PLOT / 2.0,
        TOP + PLOT + 38.0
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.3}" text-anchor="middle" transform="rotate(-90 20 {:.3})">s</text>"#,
        TOP + PLOT / 2.0,
        TOP + PLOT / 2.0
    );
    let _ = writeln!(out, "</g>");

    if let Some(a) = apriori {
        let (ix, s) = (1.0 / a.p, a.s);
        if (w.invp_min..=w.invp_max).contains(&ix) && (w.s_min..=w.s_max).contains(&s) {
            let _ = writeln!(
                out,
                r#"<g id="apriori"><circle cx="{:.3}" cy="{:.3}" r="4" fill="black"/></g>"#,
                x_of(ix),
                y_of(s)
            );
        }
    }

    let lx = LEFT + PLOT + 20.0;
    let _ = writeln!(out, r#"<g id="legend">"#);
    for (i, (_, _, label, color)) in LAYERS.iter().enumerate() {
        let y = TOP + 10.0 + 22.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{lx}" y="{y}" width="14" height="14" fill="{color}" fill-opacity="0.35" stroke="black" stroke-width="0.5"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{label}</text>"#,
            lx + 20.0,
            y + 11.0
        );
    }
    if apriori.is_some() {
        let y = TOP + 10.0 + 22.0 * LAYERS.len() as f64;
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="4" fill="black"/>"#,
            lx + 7.0,
            y + 7.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">a priori (s0, 1/p0)</text>"#,
            lx + 20.0,
            y + 11.0
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use paracalc_core::regcalc::Window;

    fn blank() -> MembershipGrid {
        MembershipGrid {
            window: Window::new(-1.0, 3.0, 0.0, 1.0).unwrap(),
            resolution: 2,
            flags: vec![0; 4],
        }
    }

    #[test]
    fn empty_grid_keeps_axes_and_layers() {
        let svg = render_regions(&blank(), None);
        assert!(svg.contains(r#"viewBox="0 0 680 500""#));
        assert!(svg.contains(r#"version="1.1""#));
        for (_, id, _, _) in LAYERS {
            assert!(svg.contains(&format!(r#"<g id="layer-{id}""#)));
        }
        assert!(svg.contains(r#"<g id="axes""#));
        assert!(svg.contains(r#"<g id="legend">"#));
        assert!(!svg.contains("href"));
        assert_eq!(svg.matches("<rect").count(), 1 + 1 + LAYERS.len());
    }

    #[test]
    fn rendering_is_deterministic() {
        let mut g = blank();
        g.flags = vec![flags::IN_A, flags::IN_A | flags::IN_N, 0, flags::IN_LU];
        assert_eq!(render_regions(&g, None), render_regions(&g, None));
    }

    #[test]
    fn runs_merge_into_one_rect() {
        let mut g = blank();
        g.flags = vec![flags::IN_A, flags::IN_A, 0, 0];
        let svg = render_regions(&g, None);
        let layer = svg.split(r#"<g id="layer-in_a""#).nth(1).unwrap();
        let layer = layer.split("</g>").next().unwrap();
        assert_eq!(layer.matches("<rect").count(), 1);
    }

    #[test]
    fn tick_positions() {
        let labels = |lo, hi| ticks(lo, hi).into_iter().map(|t| t.1).collect::<Vec<_>>();
        assert_eq!(labels(0.0, 1.0), ["0.0", "0.2", "0.4", "0.6", "0.8", "1.0"]);
        assert_eq!(labels(-1.0, 3.0), ["-1", "0", "1", "2", "3"]);
        assert_eq!(labels(-0.5, 0.5), ["-0.4", "-0.2", "0.0", "0.2", "0.4"]);
    }
}
