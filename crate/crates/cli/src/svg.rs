//! Standalone SVG drawings of polygons.

use std::fmt::Write;

use cyclogon_core::ComplexPolygon;

pub const CANVAS: f64 = 800.0;
/// Fraction of the canvas left empty on each side.
pub const PADDING: f64 = 0.1;
const MARKER_RADIUS: f64 = 4.0;

/// Canvas position of every vertex. The vertex centroid lands on the canvas
/// center and the farthest coordinate offset reaches the padding boundary;
/// the y axis points up.
pub fn canvas_points(polygon: &ComplexPolygon) -> Vec<(f64, f64)> {
    let n = polygon.n() as f64;
    let center = polygon.vertices().iter().sum::<cyclogon_core::C64>() / n;
    let reach = polygon
        .vertices()
        .iter()
        .map(|z| (z.re - center.re).abs().max((z.im - center.im).abs()))
        .fold(0.0, f64::max);
    let half = CANVAS / 2.0;
    let scale = if reach > 0.0 {
        half * (1.0 - 2.0 * PADDING) / reach
    } else {
        0.0
    };
    polygon
        .vertices()
        .iter()
        .map(|z| {
            (
                half + scale * (z.re - center.re),
                half - scale * (z.im - center.im),
            )
        })
        .collect()
}

/// Closed polyline through the vertices in index order, one marker per
/// vertex.
pub fn polygon_to_svg(polygon: &ComplexPolygon) -> String {
    let pts = canvas_points(polygon);
    let mut s = String::new();
    let size = CANVAS as u32;
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{size}" height="{size}" fill="white"/>"#).unwrap();
    let coords: Vec<String> = pts
        .iter()
        .map(|&(x, y)| format!("{},{}", px(x), px(y)))
        .collect();
    writeln!(
        s,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="1.5" stroke-linejoin="round"/>"#,
        coords.join(" ")
    )
    .unwrap();
    writeln!(s, r#"<g fill="black">"#).unwrap();
    for (j, &(x, y)) in pts.iter().enumerate() {
        writeln!(
            s,
            r#"<circle class="vertex" data-index="{j}" cx="{}" cy="{}" r="{MARKER_RADIUS}"/>"#,
            px(x),
            px(y)
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();
    writeln!(s, "</svg>").unwrap();
    s
}

fn px(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cyclogon_core::cyclotomic::fourier_vector;
    use cyclogon_core::C64;

    #[test]
    fn square_golden() {
        let square = ComplexPolygon::new(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ])
        .unwrap();
        let expected = r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="800" height="800" viewBox="0 0 800 800">
<rect width="800" height="800" fill="white"/>
<polygon points="720.000,400.000 400.000,80.000 80.000,400.000 400.000,720.000" fill="none" stroke="black" stroke-width="1.5" stroke-linejoin="round"/>
<g fill="black">
<circle class="vertex" data-index="0" cx="720.000" cy="400.000" r="4"/>
<circle class="vertex" data-index="1" cx="400.000" cy="80.000" r="4"/>
<circle class="vertex" data-index="2" cx="80.000" cy="400.000" r="4"/>
<circle class="vertex" data-index="3" cx="400.000" cy="720.000" r="4"/>
</g>
</svg>
"#;
        assert_eq!(polygon_to_svg(&square), expected);
    }

    #[test]
    fn pentagon_markers_equidistant_from_center() {
        let pts = canvas_points(&fourier_vector(5, 1).unwrap());
        let r: Vec<f64> = pts
            .iter()
            .map(|&(x, y)| (x - 400.0).hypot(y - 400.0))
            .collect();
        let (lo, hi) = r
            .iter()
            .fold((f64::MAX, 0.0_f64), |(a, b), &x| (a.min(x), b.max(x)));
        assert!(hi - lo < 1.0);
    }

    #[test]
    fn points_stay_inside_padding() {
        let p = fourier_vector(30, 7)
            .unwrap()
            .map(|z| C64::new(3.0 * z.re + 10.0, z.im - 2.0));
        for (x, y) in canvas_points(&p) {
            assert!((80.0 - 1e-9..=720.0 + 1e-9).contains(&x));
            assert!((80.0 - 1e-9..=720.0 + 1e-9).contains(&y));
        }
    }
}
