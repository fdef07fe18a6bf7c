//! Plain SVG charts. Coordinates are printed with two decimals and every collection is
//! iterated in a fixed order, so equal inputs give byte-identical files.
use crate::pipeline::RunReport;
use solarsite_core::supply::Step;
use std::fmt::Write;

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];

struct Svg {
    out: String,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Svg {
    fn new(title: &str) -> Self {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(out, r#"<text x="{:.2}" y="24" font-size="15" text-anchor="middle">{}</text>"#, W / 2.0, esc(title));
        Self { out }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        let _ = writeln!(
            self.out,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}" stroke-width="{width}"/>"#
        );
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(self.out, r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{fill}"/>"#);
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        let _ = writeln!(self.out, r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}">{}</text>"#, esc(s));
    }

    fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, dash: Option<&str>) {
        let mut p = String::new();
        for (x, y) in pts {
            let _ = write!(p, "{x:.2},{y:.2} ");
        }
        let dash = dash.map_or(String::new(), |d| format!(r#" stroke-dasharray="{d}""#));
        let _ = writeln!(
            self.out,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="2"{dash}/>"#,
            p.trim_end()
        );
    }

    fn legend(&mut self, items: &[(&str, &str)]) {
        for (k, (label, color)) in items.iter().enumerate() {
            let y = TOP + 10.0 + 18.0 * k as f64;
            self.rect(W - RIGHT + 15.0, y - 9.0, 12.0, 10.0, color);
            self.text(W - RIGHT + 32.0, y, "start", label);
        }
    }

    /// Legend of line samples; `dash` as in `polyline`.
    fn line_legend(&mut self, items: &[(&str, &str, Option<&str>)]) {
        for (k, (label, color, dash)) in items.iter().enumerate() {
            let y = TOP + 10.0 + 18.0 * k as f64 - 4.0;
            self.polyline(&[(W - RIGHT + 10.0, y), (W - RIGHT + 32.0, y)], color, *dash);
            self.text(W - RIGHT + 38.0, y + 4.0, "start", label);
        }
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

/// About five round tick values covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-9);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * span {
        out.push(if t.abs() < 1e-9 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1e6 {
        format!("{:.1}M", v / 1e6)
    } else if v.abs() >= 1e3 {
        format!("{:.1}k", v / 1e3)
    } else if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

/// Linear map from data to the plot area.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0).max(1e-12) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y0) / (self.y1 - self.y0).max(1e-12) * (H - TOP - BOTTOM)
    }

    fn axes(&self, svg: &mut Svg, xlabel: &str, ylabel: &str, xticks: bool) {
        let (xa, xb) = (self.px(self.x0), self.px(self.x1));
        let (ya, yb) = (self.py(self.y0), self.py(self.y1));
        svg.line(xa, ya, xb, ya, "black", 1.0);
        svg.line(xa, ya, xa, yb, "black", 1.0);
        for t in ticks(self.y0, self.y1) {
            let y = self.py(t);
            svg.line(xa - 4.0, y, xa, y, "black", 1.0);
            svg.line(xa, y, xb, y, "#e0e0e0", 0.5);
            svg.text(xa - 6.0, y + 4.0, "end", &fmt_tick(t));
        }
        if xticks {
            for t in ticks(self.x0, self.x1) {
                let x = self.px(t);
                svg.line(x, ya, x, ya + 4.0, "black", 1.0);
                svg.text(x, ya + 16.0, "middle", &fmt_tick(t));
            }
        }
        svg.text((xa + xb) / 2.0, H - 15.0, "middle", xlabel);
        let _ = writeln!(
            svg.out,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            (ya + yb) / 2.0,
            (ya + yb) / 2.0,
            esc(ylabel)
        );
    }
}

fn step_points(steps: &[Step], f: &Frame) -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for s in steps {
        pts.push((f.px(s.from_mw / 1e3), f.py(s.value)));
        pts.push((f.px(s.to_mw / 1e3), f.py(s.value)));
    }
    pts
}

/// Solar supply curve with the net and gross benefit curves on one axis ($/MW-yr against
/// cumulative GW).
pub fn curves_svg(supply: &[Step], net: &[Step], gross: &[Step]) -> String {
    let all = supply.iter().chain(net).chain(gross);
    let xmax = all.clone().map(|s| s.to_mw / 1e3).fold(0.0, f64::max);
    let ymax = all.map(|s| s.value).fold(0.0, f64::max) * 1.05;
    let f = Frame {
        x0: 0.0,
        x1: xmax.max(1e-3),
        y0: 0.0,
        y1: ymax.max(1.0),
    };
    let mut svg = Svg::new("County solar supply and local benefit");
    f.axes(&mut svg, "cumulative solar capacity (GW)", "$/MW-yr", true);
    svg.polyline(&step_points(supply, &f), PALETTE[1], None);
    svg.polyline(&step_points(gross, &f), PALETTE[0], Some("6 4"));
    svg.polyline(&step_points(net, &f), PALETTE[0], None);
    svg.line_legend(&[
        ("supply cost", PALETTE[1], None),
        ("benefit, gross", PALETTE[0], Some("6 4")),
        ("benefit, net of ag", PALETTE[0], None),
    ]);
    svg.finish()
}

/// Grouped bars of MW built by technology, one group per weight.
pub fn investment_svg(report: &RunReport) -> String {
    let mut cats: Vec<&String> = report.rows.iter().flat_map(|r| r.investment.keys()).collect();
    cats.sort();
    cats.dedup();
    let ymax = report
        .rows
        .iter()
        .flat_map(|r| r.investment.values())
        .fold(0.0f64, |a, v| a.max(*v))
        * 1.05;
    let ngroups = report.rows.len().max(1) as f64;
    let f = Frame {
        x0: 0.0,
        x1: ngroups,
        y0: 0.0,
        y1: ymax.max(1.0),
    };
    let mut svg = Svg::new("Investment by technology");
    f.axes(&mut svg, "cost weight w", "MW built", false);
    let bw = 0.8 / cats.len().max(1) as f64;
    for (g, row) in report.rows.iter().enumerate() {
        for (k, cat) in cats.iter().enumerate() {
            let v = row.investment.get(*cat).copied().unwrap_or(0.0).max(0.0);
            let x = f.px(g as f64 + 0.1 + bw * k as f64);
            let x2 = f.px(g as f64 + 0.1 + bw * (k + 1) as f64);
            svg.rect(x, f.py(v), x2 - x, f.py(0.0) - f.py(v), PALETTE[k % PALETTE.len()]);
        }
        svg.text(f.px(g as f64 + 0.5), f.py(0.0) + 16.0, "middle", &format!("{:.1}", row.weight_cost));
    }
    let items: Vec<(&str, &str)> = cats.iter().enumerate().map(|(k, c)| (c.as_str(), PALETTE[k % PALETTE.len()])).collect();
    svg.legend(&items);
    svg.finish()
}

/// Horizontal bars of the change in final solar MW per state relative to the base row,
/// grouped by state with one bar per weight below 1.
pub fn state_delta_svg(report: &RunReport) -> String {
    let rows: Vec<_> = report.rows.iter().skip(1).collect();
    let mut states: Vec<&String> = rows.iter().flat_map(|r| r.delta_solar_by_state.keys()).collect();
    states.sort();
    states.dedup();
    let m = rows
        .iter()
        .flat_map(|r| r.delta_solar_by_state.values())
        .fold(0.0f64, |a, v| a.max(v.abs()))
        .max(1.0)
        * 1.1;
    // x is MW, y is a slot index counted from the bottom.
    let nrows = rows.len().max(1);
    let slots = (states.len() * (nrows + 1)).max(1) as f64;
    let f = Frame {
        x0: -m,
        x1: m,
        y0: 0.0,
        y1: slots,
    };
    let mut svg = Svg::new("Change in solar capacity by state vs least cost");
    let (ya, yb) = (f.py(0.0), f.py(slots));
    svg.line(f.px(-m), ya, f.px(m), ya, "black", 1.0);
    for t in ticks(-m, m) {
        let x = f.px(t);
        svg.line(x, ya, x, ya + 4.0, "black", 1.0);
        svg.text(x, ya + 16.0, "middle", &fmt_tick(t));
    }
    svg.line(f.px(0.0), ya, f.px(0.0), yb, "black", 1.0);
    svg.text(f.px(0.0), H - 15.0, "middle", "change in solar MW");
    for (s, state) in states.iter().enumerate() {
        let top = slots - (s * (nrows + 1)) as f64;
        svg.text(LEFT - 6.0, f.py(top - nrows as f64 / 2.0) + 4.0, "end", state);
        for (k, row) in rows.iter().enumerate() {
            let v = row.delta_solar_by_state.get(*state).copied().unwrap_or(0.0);
            let y = f.py(top - k as f64);
            let h = f.py(top - k as f64 - 0.9) - y;
            let (x, w) = if v >= 0.0 { (f.px(0.0), f.px(v) - f.px(0.0)) } else { (f.px(v), f.px(0.0) - f.px(v)) };
            svg.rect(x, y, w, h, PALETTE[k % PALETTE.len()]);
        }
    }
    let labels: Vec<String> = rows.iter().map(|r| format!("w = {:.1}", r.weight_cost)).collect();
    let items: Vec<(&str, &str)> = labels.iter().enumerate().map(|(k, l)| (l.as_str(), PALETTE[k % PALETTE.len()])).collect();
    svg.legend(&items);
    svg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(county: &str, a: f64, b: f64, v: f64) -> Step {
        Step {
            county: county.into(),
            from_mw: a,
            to_mw: b,
            value: v,
        }
    }

    #[test]
    fn ticks_are_round() {
        assert_eq!(ticks(0.0, 10.0), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(ticks(-50.0, 50.0), vec![-40.0, -20.0, 0.0, 20.0, 40.0]);
    }

    #[test]
    fn two_county_curve_has_two_steps() {
        let net = vec![step("A", 0.0, 1000.0, 30_000.0), step("B", 1000.0, 3000.0, 20_000.0)];
        let gross = vec![step("A", 0.0, 1000.0, 34_000.0), step("B", 1000.0, 3000.0, 23_000.0)];
        let svg = curves_svg(&[], &net, &gross);
        // Three curves, then three legend samples.
        let lines: Vec<&str> = svg.lines().filter(|l| l.starts_with("<polyline")).collect();
        assert_eq!(lines.len(), 6);
        // The net curve has 2 steps, so 4 vertices.
        assert_eq!(lines[2].split("points=\"").nth(1).unwrap().split('"').next().unwrap().split(' ').count(), 4);
        assert_eq!(svg, curves_svg(&[], &net, &gross));
    }
}
