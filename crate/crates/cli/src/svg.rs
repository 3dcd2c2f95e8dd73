//! Minimal hand-written SVG charts.

use std::collections::BTreeMap;
use std::fmt::Write as _;

pub fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn open(width: f64, height: f64, comment: &str) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(comment);
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"12\">"
    )
    .unwrap();
    writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>").unwrap();
    s
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: &'static str,
}

/// Bars grouped by category; `values[g][s]` is series `s` in group `g`,
/// `None` leaves a gap marked `n/a`.
#[derive(Debug, Clone)]
pub struct BarChart {
    pub title: String,
    pub y_label: String,
    pub groups: Vec<String>,
    pub series: Vec<Series>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl BarChart {
    pub fn render(&self, comment: &str) -> String {
        let (width, height) = (720.0, 420.0);
        let (left, right, top, bottom) = (70.0, 210.0, 50.0, 60.0);
        let plot_w = width - left - right;
        let plot_h = height - top - bottom;
        let max = self
            .values
            .iter()
            .flatten()
            .flatten()
            .fold(0.0f64, |m, &v| m.max(v));
        let y_max = nice_ceiling(max);
        let y = |v: f64| top + plot_h * (1.0 - v / y_max);

        let mut s = open(width, height, comment);
        writeln!(
            s,
            "<text x=\"{:.1}\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">{}</text>",
            left + plot_w / 2.0,
            escape(&self.title)
        )
        .unwrap();

        for i in 0..=5 {
            let v = y_max * i as f64 / 5.0;
            let yy = y(v);
            writeln!(
                s,
                "<line x1=\"{left:.1}\" y1=\"{yy:.1}\" x2=\"{:.1}\" y2=\"{yy:.1}\" stroke=\"#dddddd\"/>",
                left + plot_w
            )
            .unwrap();
            writeln!(
                s,
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{v:.2}</text>",
                left - 6.0,
                yy + 4.0
            )
            .unwrap();
        }
        writeln!(
            s,
            "<text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">{}</text>",
            top + plot_h / 2.0,
            top + plot_h / 2.0,
            escape(&self.y_label)
        )
        .unwrap();

        let group_w = plot_w / self.groups.len().max(1) as f64;
        let bar_w = group_w * 0.8 / self.series.len().max(1) as f64;
        for (g, name) in self.groups.iter().enumerate() {
            let gx = left + group_w * g as f64 + group_w * 0.1;
            for (k, series) in self.series.iter().enumerate() {
                let x = gx + bar_w * k as f64;
                match self.values.get(g).and_then(|row| row.get(k)).copied().flatten() {
                    Some(v) => {
                        writeln!(
                            s,
                            "<rect x=\"{x:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"{}\"><title>{}: {v}</title></rect>",
                            y(v),
                            bar_w - 2.0,
                            plot_h - (y(v) - top),
                            series.color,
                            escape(&series.label)
                        )
                        .unwrap();
                    }
                    None => {
                        writeln!(
                            s,
                            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"10\" fill=\"#888888\">n/a</text>",
                            x + bar_w / 2.0,
                            top + plot_h - 4.0
                        )
                        .unwrap();
                    }
                }
            }
            writeln!(
                s,
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
                left + group_w * (g as f64 + 0.5),
                top + plot_h + 22.0,
                escape(name)
            )
            .unwrap();
        }
        writeln!(
            s,
            "<line x1=\"{left:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#000000\"/>",
            top + plot_h,
            left + plot_w,
            top + plot_h
        )
        .unwrap();

        for (k, series) in self.series.iter().enumerate() {
            let ly = top + 20.0 * k as f64;
            let lx = left + plot_w + 20.0;
            writeln!(
                s,
                "<rect x=\"{lx:.1}\" y=\"{ly:.1}\" width=\"14\" height=\"14\" fill=\"{}\"/>",
                series.color
            )
            .unwrap();
            writeln!(
                s,
                "<text x=\"{:.1}\" y=\"{:.1}\">{}</text>",
                lx + 20.0,
                ly + 11.0,
                escape(&series.label)
            )
            .unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}

fn nice_ceiling(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    let step = 10f64.powf(v.log10().floor()) / 2.0;
    ((v * 1.05) / step).ceil() * step
}

/// Proportion heat map with `n_ant` across and `n_syn` up; the last
/// row/column collects values `>= cap`.
pub fn heatmap(title: &str, counts: &BTreeMap<(usize, usize), usize>, total: usize, cap: usize, comment: &str) -> String {
    let max_syn = counts.keys().map(|c| c.0).max().unwrap_or(0).min(cap);
    let max_ant = counts.keys().map(|c| c.1).max().unwrap_or(0).min(cap);
    let cell = 40.0;
    let (left, top) = (70.0, 50.0);
    let cols = max_ant + 1;
    let rows = max_syn + 1;
    let width = left + cell * cols as f64 + 30.0;
    let height = top + cell * rows as f64 + 60.0;
    let label = |v: usize| if v == cap { format!("{cap}+") } else { v.to_string() };

    let mut s = open(width.max(320.0), height, comment);
    writeln!(s, "<text x=\"{left:.1}\" y=\"28\" font-size=\"15\">{}</text>", escape(title)).unwrap();
    for syn in 0..rows {
        let y = top + cell * (max_syn - syn) as f64;
        for ant in 0..cols {
            let x = left + cell * ant as f64;
            let count = counts.get(&(syn, ant)).copied().unwrap_or(0);
            let p = count as f64 / total.max(1) as f64;
            writeln!(
                s,
                "<rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{cell}\" height=\"{cell}\" fill=\"{}\" stroke=\"#ffffff\"><title>n_syn={syn} n_ant={ant}: {count}</title></rect>",
                ramp(p)
            )
            .unwrap();
            if count > 0 {
                let ink = if p > 0.5 { "#ffffff" } else { "#000000" };
                writeln!(
                    s,
                    "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"10\" fill=\"{ink}\">{p:.2}</text>",
                    x + cell / 2.0,
                    y + cell / 2.0 + 4.0
                )
                .unwrap();
            }
        }
        writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>",
            left - 6.0,
            y + cell / 2.0 + 4.0,
            label(syn)
        )
        .unwrap();
    }
    let base = top + cell * rows as f64;
    for ant in 0..cols {
        writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            left + cell * (ant as f64 + 0.5),
            base + 16.0,
            label(ant)
        )
        .unwrap();
    }
    writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">n_ant</text>",
        left + cell * cols as f64 / 2.0,
        base + 40.0
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"20\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.1})\">n_syn</text>",
        top + cell * rows as f64 / 2.0,
        top + cell * rows as f64 / 2.0
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

/// White to dark blue.
fn ramp(p: f64) -> String {
    let p = p.clamp(0.0, 1.0);
    let mix = |from: f64, to: f64| (from + (to - from) * p).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(255.0, 8.0), mix(255.0, 48.0), mix(255.0, 107.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_ends() {
        assert_eq!(ramp(0.0), "#ffffff");
        assert_eq!(ramp(1.0), "#08306b");
    }

    #[test]
    fn nice_ceiling_covers_value() {
        for v in [0.3, 1.0, 1.6667, 7.2, 123.0] {
            assert!(nice_ceiling(v) >= v);
        }
        assert_eq!(nice_ceiling(0.0), 1.0);
    }

    #[test]
    fn escaping() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}
