//! SVG drawing of an environment with its routes.

use std::fmt::Write as _;

use circframe_core::env::{Environment, TerminalKind};

use crate::io::RouteDoc;

/// Drawing options.
#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    /// Pixels per plane unit.
    pub scale: f64,
    /// Route stroke width in plane units.
    pub stroke: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: 8.0,
            stroke: 0.12,
        }
    }
}

/// Stroke colour of a net.
pub fn net_color(net: usize) -> String {
    let hue = (net as f64 * 137.508) % 360.0;
    format!("hsl({hue:.1},70%,40%)")
}

/// Draws the bounds, every terminal to scale, the cut edges when given and one
/// polyline per route. The y axis points up.
pub fn render_svg(env: &Environment, routes: &[RouteDoc], cuts: Option<&[[[f64; 2]; 2]]>, opts: &RenderOptions) -> String {
    let b = env.bounds;
    let (w, h) = (b.x_max - b.x_min, b.y_max - b.y_min);
    let pad = 0.02 * w.max(h);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{} {} {} {}">"#,
        (w + 2.0 * pad) * opts.scale,
        (h + 2.0 * pad) * opts.scale,
        b.x_min - pad,
        -b.y_max - pad,
        w + 2.0 * pad,
        h + 2.0 * pad
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)">"#);
    let _ = writeln!(
        s,
        r#"<rect x="{}" y="{}" width="{w}" height="{h}" fill="none" stroke="black" stroke-width="{}"/>"#,
        b.x_min,
        b.y_min,
        opts.stroke
    );
    if let Some(cuts) = cuts {
        for [p, q] in cuts {
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-width="{}" stroke-dasharray="{}"/>"#,
                p[0],
                p[1],
                q[0],
                q[1],
                opts.stroke,
                4.0 * opts.stroke
            );
        }
    }
    for r in routes {
        let pts: Vec<String> = r.points.iter().map(|[x, y]| format!("{x},{y}")).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="{}" stroke-linejoin="round"/>"#,
            pts.join(" "),
            net_color(r.net),
            opts.stroke
        );
    }
    for t in env.terminals() {
        let color = net_color(t.net);
        let fill = match t.kind {
            TerminalKind::Start => "white",
            TerminalKind::End => &color,
        };
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}" stroke="{}" stroke-width="{}"/>"#,
            t.center.x,
            t.center.y,
            t.radius,
            color,
            opts.stroke
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use circframe_core::env::{generate, Bounds, GenParams};
    use circframe_core::pipeline::route_circular_frame;
    use crate::io::cut_lines;

    fn count(doc: &str, tag: &str) -> usize {
        doc.matches(&format!("<{tag} ")).count()
    }

    #[test]
    fn empty_environment_draws_only_the_bounds() {
        let env = Environment::from_centers(Bounds::square50(), 0.5, &[], &[], 0);
        let doc = render_svg(&env, &[], None, &RenderOptions::default());
        assert_eq!(count(&doc, "rect"), 1);
        assert_eq!(count(&doc, "circle") + count(&doc, "polyline") + count(&doc, "line"), 0);
    }

    #[test]
    fn routed_environment_has_one_polyline_per_net() {
        let env = generate(&GenParams::default(), 7).unwrap();
        let out = route_circular_frame(&env, false).unwrap();
        let routes: Vec<RouteDoc> = out.embedding.routes.iter().map(|r| RouteDoc::new(r.net, &r.polyline)).collect();
        let doc = render_svg(&env, &routes, None, &RenderOptions::default());
        let n = env.net_count();
        assert_eq!(count(&doc, "polyline"), n);
        assert_eq!(count(&doc, "circle"), 2 * n);
        assert_eq!(doc.matches(r#"fill="white""#).count(), n);

        let cuts = cut_lines(&out.forest);
        let with = render_svg(&env, &routes, Some(&cuts), &RenderOptions::default());
        assert_eq!(count(&with, "line"), cuts.len());
        assert_eq!(count(&doc, "line"), 0);
    }
}
