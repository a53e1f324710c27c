//! Static figures: binary PGM rasters of cell sets and SVG sketches of the
//! discontinuity set with point clouds on top.

use crate::geometry::{BoundaryFn, CellSet, Grid, Point2};
use crate::map_model::PwcMap2;
use std::fmt::Write as _;

/// P5 raster, one pixel per cell, white background.
///
/// Layers are painted in order with evenly spaced greys, the last darkest, so
/// nested covers (coarse generation first) show as bands. Pixel `(i, j)`
/// (row `j` from the top) is cell `(i, ny − 1 − j)`.
pub fn pgm_layers(grid: &Grid, layers: &[&CellSet]) -> Vec<u8> {
    let (nx, ny) = (grid.nx as usize, grid.ny as usize);
    let header = format!("P5\n{nx} {ny}\n255\n");
    let mut out = Vec::with_capacity(header.len() + nx * ny);
    out.extend_from_slice(header.as_bytes());
    let base = out.len();
    out.resize(base + nx * ny, 255);
    let n = layers.len();
    for (k, layer) in layers.iter().enumerate() {
        let grey = 255 - (200 * (k + 1) / n) as u8;
        for (ix, iy) in layer.iter() {
            let row = ny - 1 - iy as usize;
            out[base + row * nx + ix as usize] = grey;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SvgStyle {
    pub width: u32,
    pub height: u32,
    /// Sampling resolution per axis for tracing boundary zero sets.
    pub samples: u32,
    pub point_radius: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self { width: 600, height: 600, samples: 400, point_radius: 3.0 }
    }
}

/// Zero set of `g` on the domain as line segments (marching squares).
fn trace(g: &BoundaryFn<f64>, m: &PwcMap2<f64>, n: u32) -> Vec<(Point2<f64>, Point2<f64>)> {
    let d = m.domain_f64();
    let at = |i: u32, j: u32| {
        Point2::new(
            d.xlo + d.width() * i as f64 / n as f64,
            d.ylo + d.height() * j as f64 / n as f64,
        )
    };
    let vals: Vec<f64> = (0..=n).flat_map(|j| (0..=n).map(move |i| (i, j))).map(|(i, j)| g.eval(&at(i, j))).collect();
    let v = |i: u32, j: u32| vals[(j * (n + 1) + i) as usize];
    let mut segs = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let mut cross = Vec::with_capacity(4);
            for e in 0..4 {
                let (a, b) = (corners[e], corners[(e + 1) % 4]);
                let (va, vb) = (v(a.0, a.1), v(b.0, b.1));
                if !(va.is_finite() && vb.is_finite()) || (va > 0.0) == (vb > 0.0) {
                    continue;
                }
                let t = va / (va - vb);
                let (pa, pb) = (at(a.0, a.1), at(b.0, b.1));
                cross.push(Point2::new(pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)));
            }
            for pair in cross.chunks_exact(2) {
                segs.push((pair[0].clone(), pair[1].clone()));
            }
        }
    }
    segs
}

/// Domain frame, every boundary curve of the map, and `points` as dots.
pub fn svg_figure(m: &PwcMap2<f64>, points: &[Point2<f64>], style: &SvgStyle) -> String {
    let d = m.domain_f64();
    let (w, h) = (style.width as f64, style.height as f64);
    let px = |p: &Point2<f64>| ((p.x - d.xlo) / d.width() * w, h - (p.y - d.ylo) / d.height() * h);
    let mut s = String::new();
    // writing to a String cannot fail
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        style.width, style.height, style.width, style.height
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white" stroke="black"/>"#);
    let mut seen = Vec::new();
    for g in m.boundaries_f64().iter().flatten().map(|(g, _)| g) {
        if seen.contains(&g) {
            continue;
        }
        seen.push(g);
        let mut path = String::new();
        for (a, b) in trace(g, m, style.samples) {
            let ((x0, y0), (x1, y1)) = (px(&a), px(&b));
            let _ = write!(path, "M{x0:.3} {y0:.3}L{x1:.3} {y1:.3}");
        }
        if !path.is_empty() {
            let _ = writeln!(s, r#"<path d="{path}" stroke="red" stroke-width="1" fill="none"/>"#);
        }
    }
    for p in points {
        let (x, y) = px(p);
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="black"/>"#, style.point_radius);
    }
    s.push_str("</svg>\n");
    s
}
