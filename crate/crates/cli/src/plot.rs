//! SVG line plots of a [`Table`].

use plotters::prelude::*;
use qpair::{Error, Result};

use crate::table::Table;

const PALETTE: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(255, 127, 14),
    RGBColor(44, 160, 44),
    RGBColor(148, 103, 189),
    RGBColor(140, 86, 75),
];

#[derive(Debug, Clone, Default)]
pub struct PlotSpec {
    pub title: String,
    pub log_x: bool,
    /// Columns to draw; all but the abscissa when empty.
    pub series: Vec<String>,
}

fn bounds(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > hi {
        return None;
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 * lo.abs().max(1e-12) };
    Some((lo - pad, hi + pad))
}

fn err<E: std::fmt::Display>(e: E) -> Error {
    Error::Io(format!("plot: {e}"))
}

/// Renders `table` as an SVG document.
pub fn render_svg(table: &Table, spec: &PlotSpec) -> Result<String> {
    let names: Vec<&String> = if spec.series.is_empty() {
        table.columns.iter().skip(1).collect()
    } else {
        spec.series.iter().collect()
    };
    let x = &table.data[0];
    let ys: Vec<(&String, &[f64])> = names
        .iter()
        .map(|n| {
            table
                .column(n)
                .map(|c| (*n, c))
                .ok_or_else(|| Error::Config(format!("no column `{n}` to plot")))
        })
        .collect::<Result<_>>()?;
    let (y0, y1) = bounds(ys.iter().flat_map(|(_, c)| c.iter().copied())).unwrap_or((0.0, 1.0));
    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (900, 560)).into_drawing_area();
        root.fill(&WHITE).map_err(err)?;
        let mut builder = ChartBuilder::on(&root);
        builder
            .caption(&spec.title, ("sans-serif", 20))
            .margin(12)
            .x_label_area_size(40)
            .y_label_area_size(70);
        let x_name = &table.columns[0];
        if spec.log_x {
            let pos = x.iter().copied().filter(|v| *v > 0.0);
            let lo = pos.clone().fold(f64::INFINITY, f64::min);
            let hi = pos.fold(0.0, f64::max);
            let (lo, hi) = if lo <= hi { (lo, hi.max(lo * 10.0)) } else { (1e-6, 1.0) };
            let mut chart = builder
                .build_cartesian_2d((lo..hi).log_scale(), y0..y1)
                .map_err(err)?;
            chart.configure_mesh().x_desc(x_name.as_str()).draw().map_err(err)?;
            for (k, (name, col)) in ys.iter().enumerate() {
                let color = PALETTE[k % PALETTE.len()];
                let points = x.iter().zip(col.iter()).filter(|(a, b)| **a > 0.0 && b.is_finite());
                chart
                    .draw_series(LineSeries::new(points.map(|(a, b)| (*a, *b)), color.stroke_width(2)))
                    .map_err(err)?
                    .label(name.as_str())
                    .legend(move |(px, py)| PathElement::new(vec![(px, py), (px + 18, py)], color));
            }
            chart
                .configure_series_labels()
                .background_style(WHITE.mix(0.8))
                .border_style(BLACK)
                .draw()
                .map_err(err)?;
        } else {
            let (x0, x1) = bounds(x.iter().copied()).unwrap_or((0.0, 1.0));
            let mut chart = builder.build_cartesian_2d(x0..x1, y0..y1).map_err(err)?;
            chart.configure_mesh().x_desc(x_name.as_str()).draw().map_err(err)?;
            for (k, (name, col)) in ys.iter().enumerate() {
                let color = PALETTE[k % PALETTE.len()];
                let points = x.iter().zip(col.iter()).filter(|(_, b)| b.is_finite());
                chart
                    .draw_series(LineSeries::new(points.map(|(a, b)| (*a, *b)), color.stroke_width(2)))
                    .map_err(err)?
                    .label(name.as_str())
                    .legend(move |(px, py)| PathElement::new(vec![(px, py), (px + 18, py)], color));
            }
            chart
                .configure_series_labels()
                .background_style(WHITE.mix(0.8))
                .border_style(BLACK)
                .draw()
                .map_err(err)?;
        }
        root.present().map_err(err)?;
    }
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_every_series_label() {
        let mut t = Table::new("lambda", vec![1e-3, 1e-2, 1e-1]);
        t.push("F(GP,GF)", vec![0.9, 0.95, 1.0]);
        t.push("F(GP,LF)", vec![1.0, 1.0, f64::NAN]);
        let spec = PlotSpec {
            title: "fidelity".into(),
            log_x: true,
            series: vec![],
        };
        let svg = render_svg(&t, &spec).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("F(GP,LF)") && svg.contains("F(GP,GF)"));
        assert_eq!(svg, render_svg(&t, &spec).unwrap());
    }
}
