//! Deterministic line charts from experiment CSV.

use std::fmt::Write as _;

use super::table::{parse_csv, ParsedCsv};
use super::LabError;

pub const SVG_WIDTH: u32 = 800;
pub const SVG_HEIGHT: u32 = 600;

const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;
const MAX_LEGEND: usize = 16;

const PALETTE: [&str; 8] = ["blue", "green", "black", "red", "orange", "purple", "teal", "gray"];

#[derive(Debug, Clone, PartialEq)]
pub enum Series {
    /// One polyline per `(column, colour)`.
    Columns(Vec<(String, String)>),
    /// One polyline per distinct key of `group_by`, coloured by the integer
    /// in `color_by` (palette index) or by group order.
    Grouped {
        y: String,
        group_by: Vec<String>,
        color_by: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x: String,
    pub y_label: String,
    pub series: Series,
}

fn columns(specs: &[(&str, &str)]) -> Series {
    Series::Columns(specs.iter().map(|(c, k)| ((*c).to_owned(), (*k).to_owned())).collect())
}

/// Plot layout for a known experiment name.
pub fn plot_spec_for(experiment: &str) -> Result<PlotSpec, LabError> {
    let spec = |title: &str, x: &str, y_label: &str, series| PlotSpec {
        title: title.to_owned(),
        x: x.to_owned(),
        y_label: y_label.to_owned(),
        series,
    };
    Ok(match experiment {
        "fidelity_curve" => spec(
            "fidelity and Jaro similarity",
            "index",
            "value",
            columns(&[("fidelity", "black"), ("jaro", "red")]),
        ),
        "quantum_input" => spec(
            "fidelity of superposed inputs",
            "theta",
            "fidelity",
            Series::Grouped {
                y: "fidelity".into(),
                group_by: vec!["other_string".into()],
                color_by: Some("match_count".into()),
            },
        ),
        "bounds" => spec(
            "largest non-word acceptance",
            "n",
            "probability",
            columns(&[("max_accept", "black"), ("paper_claim", "red")]),
        ),
        "resources" => spec(
            "acceptor size",
            "n",
            "nodes",
            Series::Grouped {
                y: "nodes".into(),
                group_by: vec!["family".into()],
                color_by: None,
            },
        ),
        "discriminate" => spec(
            "discrimination",
            "theta",
            "probability",
            columns(&[("success", "black"), ("p_accept_1", "blue"), ("p_accept_2", "red")]),
        ),
        other => return Err(LabError::Plot(format!("no plot layout for experiment {other:?}"))),
    })
}

/// Renders CSV written by an experiment, choosing the layout from its
/// header comment.
pub fn render_svg(csv_text: &str) -> Result<String, LabError> {
    let data = parse_csv(csv_text)?;
    let experiment = data
        .experiment
        .clone()
        .ok_or_else(|| LabError::Plot("missing experiment header comment".into()))?;
    draw(&data, &plot_spec_for(&experiment)?)
}

pub fn render_svg_with(csv_text: &str, spec: &PlotSpec) -> Result<String, LabError> {
    draw(&parse_csv(csv_text)?, spec)
}

struct Line {
    label: String,
    legend: String,
    color: String,
    points: Vec<(f64, f64)>,
}

fn number(data: &ParsedCsv, row: usize, col: usize) -> Result<Option<f64>, LabError> {
    let cell = data.rows[row].get(col).map(String::as_str).unwrap_or("");
    if cell.is_empty() {
        return Ok(None);
    }
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(LabError::Plot(format!(
            "row {}: column {:?} is not a finite number: {cell:?}",
            row + 1,
            data.columns[col]
        ))),
    }
}

fn lines(data: &ParsedCsv, spec: &PlotSpec) -> Result<Vec<Line>, LabError> {
    let xc = data.column(&spec.x)?;
    let xs = (0..data.rows.len())
        .map(|r| number(data, r, xc))
        .collect::<Result<Vec<_>, _>>()?;
    match &spec.series {
        Series::Columns(cols) => cols
            .iter()
            .map(|(name, color)| {
                let yc = data.column(name)?;
                let mut points = Vec::new();
                for (r, x) in xs.iter().enumerate() {
                    if let (Some(x), Some(y)) = (*x, number(data, r, yc)?) {
                        points.push((x, y));
                    }
                }
                Ok(Line {
                    label: name.clone(),
                    legend: name.clone(),
                    color: color.clone(),
                    points,
                })
            })
            .collect(),
        Series::Grouped { y, group_by, color_by } => {
            let yc = data.column(y)?;
            let gcs = group_by.iter().map(|g| data.column(g)).collect::<Result<Vec<_>, _>>()?;
            let cc = color_by.as_ref().map(|c| data.column(c)).transpose()?;
            let mut out: Vec<Line> = Vec::new();
            for (r, x) in xs.iter().enumerate() {
                let key = gcs.iter().map(|&c| data.rows[r][c].as_str()).collect::<Vec<_>>().join(" ");
                let i = match out.iter().position(|l| l.label == key) {
                    Some(i) => i,
                    None => {
                        let (color, legend) = match cc {
                            Some(c) => {
                                let k = number(data, r, c)?.unwrap_or(0.0);
                                let color = PALETTE[(k.max(0.0) as usize).min(PALETTE.len() - 1)];
                                (color, format!("{} = {}", data.columns[c], data.rows[r][c]))
                            }
                            None => (PALETTE[out.len() % PALETTE.len()], key.clone()),
                        };
                        out.push(Line {
                            label: key,
                            legend,
                            color: color.to_owned(),
                            points: Vec::new(),
                        });
                        out.len() - 1
                    }
                };
                if let (Some(x), Some(y)) = (*x, number(data, r, yc)?) {
                    out[i].points.push((x, y));
                }
            }
            Ok(out)
        }
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if c.is_control() => {}
            c => out.push(c),
        }
    }
    out
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn draw(data: &ParsedCsv, spec: &PlotSpec) -> Result<String, LabError> {
    if data.rows.is_empty() {
        return Err(LabError::Plot("csv has no data rows".into()));
    }
    let lines = lines(data, spec)?;
    let all = || lines.iter().flat_map(|l| l.points.iter().copied());
    if all().next().is_none() {
        return Err(LabError::Plot("no plottable points".into()));
    }
    let (mut x0, mut x1) = all().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (x, _)| (a.min(x), b.max(x)));
    let (y0, y1) = all().fold((0.0f64, 1.0f64), |(a, b), (_, y)| (a.min(y), b.max(y)));
    if x1 - x0 <= 0.0 {
        x0 -= 0.5;
        x1 += 0.5;
    }

    let (w, h) = (SVG_WIDTH as f64, SVG_HEIGHT as f64);
    let (pw, ph) = (w - LEFT - RIGHT, h - TOP - BOTTOM);
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (tx, ty) = (px(xv), py(yv));
        let _ = writeln!(
            s,
            r#"<line x1="{tx:.2}" y1="{:.2}" x2="{tx:.2}" y2="{:.2}" stroke="black"/><text x="{tx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 20.0,
            tick_label(xv)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ty:.2}" x2="{LEFT:.2}" y2="{ty:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            ty + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        h - 15.0,
        escape(&spec.x)
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&spec.y_label)
    );

    for line in &lines {
        if line.points.is_empty() {
            continue;
        }
        let pts: Vec<String> = line.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            escape(&line.color),
            pts.join(" ")
        );
    }

    let mut entries: Vec<(&str, &str)> = Vec::new();
    for l in &lines {
        if !entries.contains(&(l.legend.as_str(), l.color.as_str())) {
            entries.push((&l.legend, &l.color));
        }
    }
    if matches!(spec.series, Series::Grouped { color_by: Some(_), .. }) {
        entries.sort();
    }
    let lx = LEFT + pw + 15.0;
    for (i, (label, color)) in entries.iter().take(MAX_LEGEND).enumerate() {
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            escape(color),
            lx + 26.0,
            ly + 4.0,
            escape(label)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CURVE: &str = "# lingwalk v1 fidelity_curve\nindex,string,length,fidelity,jaro,acceptance,in_language\n\
        1,a,1,0.5,0,0.5,false\n2,b,1,0,0,0,false\n3,aa,2,0.25,0.6,0.25,false\n4,ab,2,1,1,1,true\n";

    #[test]
    fn renders_curve() {
        let svg = render_svg(CURVE).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(r#"width="800" height="600""#));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(r#"stroke="black""#) && svg.contains(r#"stroke="red""#));
        assert_eq!(svg, render_svg(CURVE).unwrap());
    }

    #[test]
    fn grouped_colours() {
        let csv = "# lingwalk v1 quantum_input\ntheta,other_string,match_count,fidelity\n\
            0,aaab,3,1\n1,aaab,3,0.5\n0,bbaa,0,1\n1,bbaa,0,0\n0,<x>,1,1\n";
        let svg = render_svg(csv).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("match_count = 0"));
        assert!(svg.contains(r#"stroke="blue""#));
        assert!(!svg.contains("<x>"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(render_svg("").is_err());
        assert!(render_svg("# lingwalk v1 fidelity_curve\nindex,fidelity,jaro\n").is_err());
        assert!(render_svg("# lingwalk v1 fidelity_curve\nindex,fidelity,jaro\n1,x,0\n").is_err());
        assert!(render_svg("# lingwalk v1 fidelity_curve\nindex,fidelity\n1,0\n").is_err());
        assert!(render_svg("# lingwalk v1 mystery\nx\n1\n").is_err());
        assert!(render_svg("index,fidelity,jaro\n1,0,0\n").is_err());
    }
}
