//! Centroid scatter plots.
//!
//! Points are coloured by cluster, obtained centroids are filled black
//! circles (`class="centroid"`) and generating means are red triangles
//! (`class="true-mean"`). 3-D data is drawn on its first two coordinates.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;

use super::runner::write_file;
use crate::clustering::Clustering;
use crate::dataset::Dataset;
use crate::{Error, Result};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22",
    "#7f7f7f", "#aec7e8",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Maps data coordinates onto the canvas (y grows upward).
struct Frame {
    x0: f64,
    y0: f64,
    scale_x: f64,
    scale_y: f64,
}

impl Frame {
    fn fit(xy: impl Iterator<Item = (f64, f64)>) -> Self {
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for (x, y) in xy {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
        let inner = SIZE - 2.0 * MARGIN;
        Frame {
            x0: xmin,
            y0: ymin,
            scale_x: inner / span(xmin, xmax),
            scale_y: inner / span(ymin, ymax),
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + (x - self.x0) * self.scale_x,
            SIZE - MARGIN - (y - self.y0) * self.scale_y,
        )
    }
}

pub fn render_scatter_svg(
    ds: &Dataset,
    clustering: &Clustering,
    true_means: Option<&Array2<f64>>,
) -> Result<String> {
    let n = ds.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::PlotDimension(n));
    }
    if clustering.labels.len() != ds.len() {
        return Err(Error::LengthMismatch {
            left: ds.len(),
            right: clustering.labels.len(),
        });
    }
    if clustering.centroids.ncols() != n || true_means.is_some_and(|t| t.ncols() != n) {
        return Err(Error::InvalidParams(
            "centroid dimension differs from data".into(),
        ));
    }
    let x = ds.points();
    let c = &clustering.centroids;
    let all = x
        .rows()
        .into_iter()
        .chain(c.rows())
        .chain(true_means.into_iter().flat_map(|t| t.rows()))
        .map(|r| (r[0], r[1]));
    let frame = Frame::fit(all);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&ds.name));
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(s, r#"<g class="points">"#);
    for (row, &l) in x.rows().into_iter().zip(&clustering.labels) {
        let (px, py) = frame.map(row[0], row[1]);
        let _ = writeln!(
            s,
            r#"<circle class="point" cx="{px:.2}" cy="{py:.2}" r="2.5" fill="{}" fill-opacity="0.7"/>"#,
            PALETTE[l % PALETTE.len()]
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g class="centroids">"#);
    for row in c.rows() {
        let (px, py) = frame.map(row[0], row[1]);
        let _ = writeln!(
            s,
            r#"<circle class="centroid" cx="{px:.2}" cy="{py:.2}" r="6" fill="black"/>"#
        );
    }
    let _ = writeln!(s, "</g>");
    if let Some(t) = true_means {
        let _ = writeln!(s, r#"<g class="true-means">"#);
        for row in t.rows() {
            let (px, py) = frame.map(row[0], row[1]);
            let _ = writeln!(
                s,
                r#"<polygon class="true-mean" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="red"/>"#,
                px,
                py - 7.0,
                px - 6.0,
                py + 5.0,
                px + 6.0,
                py + 5.0
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s += "</svg>\n";
    Ok(s)
}

pub fn emit_scatter_svg(
    ds: &Dataset,
    clustering: &Clustering,
    true_means: Option<&Array2<f64>>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let svg = render_scatter_svg(ds, clustering, true_means)?;
    write_file(path.as_ref(), svg.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn clustering(labels: Vec<usize>, centroids: Array2<f64>) -> Clustering {
        Clustering {
            labels,
            centroids,
            membership: None,
            iterations: 1,
            converged: true,
            objective: vec![],
        }
    }

    fn count(doc: &roxmltree::Document, tag: &str, class: &str) -> usize {
        doc.descendants()
            .filter(|n| n.has_tag_name(tag) && n.attribute("class") == Some(class))
            .count()
    }

    #[test]
    fn two_points_two_clusters() {
        let ds = Dataset::new("a&b", array![[0.0, 0.0], [1.0, 1.0]], None).unwrap();
        let c = clustering(vec![0, 1], array![[0.0, 0.0], [1.0, 1.0]]);
        let svg = render_scatter_svg(&ds, &c, None).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        assert_eq!(count(&doc, "circle", "point"), 2);
        assert_eq!(count(&doc, "circle", "centroid"), 2);
        assert_eq!(count(&doc, "polygon", "true-mean"), 0);
    }

    #[test]
    fn triangles_for_true_means_and_3d_projection() {
        let ds = Dataset::new(
            "t",
            array![[0.0, 0.0, 5.0], [4.0, 2.0, -1.0], [1.0, 3.0, 0.0]],
            None,
        )
        .unwrap();
        let c = clustering(vec![0, 1, 2], ds.points().clone());
        let means = array![[0.0, 0.0, 0.0], [1.0, 1.0, 1.0], [2.0, 2.0, 2.0]];
        let svg = render_scatter_svg(&ds, &c, Some(&means)).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        assert_eq!(count(&doc, "circle", "centroid"), 3);
        assert_eq!(count(&doc, "polygon", "true-mean"), 3);
        for n in doc.descendants().filter(|n| n.has_tag_name("circle")) {
            let cx: f64 = n.attribute("cx").unwrap().parse().unwrap();
            let cy: f64 = n.attribute("cy").unwrap().parse().unwrap();
            assert!((0.0..=SIZE).contains(&cx) && (0.0..=SIZE).contains(&cy));
        }
    }

    #[test]
    fn unsupported_dimensions() {
        let one = Dataset::new("t", array![[0.0], [1.0]], None).unwrap();
        let c = clustering(vec![0, 1], array![[0.0], [1.0]]);
        assert!(matches!(
            render_scatter_svg(&one, &c, None),
            Err(Error::PlotDimension(1))
        ));
        let four = Dataset::new("t", Array2::zeros((2, 4)), None).unwrap();
        let c = clustering(vec![0, 0], Array2::zeros((1, 4)));
        assert!(matches!(
            render_scatter_svg(&four, &c, None),
            Err(Error::PlotDimension(4))
        ));
    }

    #[test]
    fn identical_points_still_render() {
        let ds = Dataset::new("t", array![[2.0, 2.0], [2.0, 2.0]], None).unwrap();
        let c = clustering(vec![0, 0], array![[2.0, 2.0]]);
        let svg = render_scatter_svg(&ds, &c, None).unwrap();
        assert!(roxmltree::Document::parse(&svg).is_ok());
        assert!(!svg.contains("NaN"));
    }
}
