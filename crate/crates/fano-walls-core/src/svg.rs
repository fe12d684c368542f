//! Deterministic SVG rendering of wall atlases.
//!
//! The half-plane is drawn with beta horizontal and alpha = sqrt(s)
//! vertical, so a wall `s + (beta - center)^2 = radius_sq` really is a
//! semicircle of radius `sqrt(radius_sq)` touching the beta-axis. Output is
//! byte-identical for identical input: no timestamps, no randomness, and
//! every coordinate printed through the same 12-significant-digit float
//! formatter. Labels keep exact rational strings; only coordinates are
//! floated.

use crate::rat::{fmt_sig12, Rat};
use crate::walls::{Wall, WallLocus, Window};
use num_traits::ToPrimitive;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderStyle {
    pub width: u32,
    pub height: u32,
    pub show_legend: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle { width: 640, height: 420, show_legend: true }
    }
}

const MARGIN: f64 = 46.0;
const PALETTE: [&str; 6] = ["#1b6ca8", "#c2571a", "#2e7d32", "#8e3b9e", "#a8201a", "#54626f"];

fn rf(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

struct Frame {
    x0: f64,
    x1: f64,
    alpha_max: f64,
    w: f64,
    h: f64,
}

impl Frame {
    fn x(&self, beta: f64) -> f64 {
        MARGIN + (beta - self.x0) / (self.x1 - self.x0) * (self.w - 2.0 * MARGIN)
    }

    fn y(&self, alpha: f64) -> f64 {
        self.h - MARGIN - alpha / self.alpha_max * (self.h - 2.0 * MARGIN)
    }

    fn sx(&self) -> f64 {
        (self.w - 2.0 * MARGIN) / (self.x1 - self.x0)
    }

    fn sy(&self) -> f64 {
        (self.h - 2.0 * MARGIN) / self.alpha_max
    }
}

fn wall_label(wall: &Wall) -> String {
    let locus = match &wall.locus {
        WallLocus::Vertical { beta0 } => format!("vertical beta = {beta0}"),
        WallLocus::Semicircle { center, radius_sq } => {
            format!("center {center}, radius_sq {radius_sq}")
        }
    };
    format!("{locus}  [ch = {}]", wall.destabilizer)
}

/// Renders the walls over the window. Walls are deduplicated by identity
/// (locus equality, first witness wins); everything outside the window is
/// clipped, not dropped, so partially visible arcs still show.
pub fn render_walls(walls: &[Wall], window: &Window, style: &RenderStyle) -> String {
    let mut unique: Vec<&Wall> = Vec::new();
    for w in walls {
        if !unique.contains(&w) {
            unique.push(w);
        }
    }

    let frame = Frame {
        x0: rf(&window.beta_min),
        x1: rf(&window.beta_max),
        alpha_max: rf(&window.s_max).max(1e-9).sqrt(),
        w: f64::from(style.width),
        h: f64::from(style.height),
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        style.width, style.height, style.width, style.height
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##,
        style.width, style.height
    );
    let _ = writeln!(
        out,
        r#"<clipPath id="plot"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath>"#,
        fmt_sig12(MARGIN),
        fmt_sig12(MARGIN),
        fmt_sig12(frame.w - 2.0 * MARGIN),
        fmt_sig12(frame.h - 2.0 * MARGIN)
    );

    // axes: beta-axis at alpha = 0, frame box around the plot area
    let _ = writeln!(
        out,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444444" stroke-width="1"/>"##,
        fmt_sig12(MARGIN),
        fmt_sig12(MARGIN),
        fmt_sig12(frame.w - 2.0 * MARGIN),
        fmt_sig12(frame.h - 2.0 * MARGIN)
    );
    if frame.x0 < 0.0 && frame.x1 > 0.0 {
        let x = frame.x(0.0);
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#bbbbbb" stroke-width="1"/>"##,
            fmt_sig12(x),
            fmt_sig12(MARGIN),
            fmt_sig12(x),
            fmt_sig12(frame.h - MARGIN)
        );
    }
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-size="12" fill="#333333">beta = {}</text>"##,
        fmt_sig12(MARGIN),
        fmt_sig12(frame.h - MARGIN + 16.0),
        window.beta_min
    );
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-size="12" fill="#333333" text-anchor="end">beta = {}</text>"##,
        fmt_sig12(frame.w - MARGIN),
        fmt_sig12(frame.h - MARGIN + 16.0),
        window.beta_max
    );
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-size="12" fill="#333333">alpha</text>"##,
        fmt_sig12(8.0),
        fmt_sig12(MARGIN + 12.0)
    );

    let _ = writeln!(out, r#"<g clip-path="url(#plot)">"#);
    for (i, wall) in unique.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        match &wall.locus {
            WallLocus::Vertical { beta0 } => {
                let x = frame.x(rf(beta0));
                let _ = writeln!(
                    out,
                    r#"<line class="wall" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
                    fmt_sig12(x),
                    fmt_sig12(frame.y(0.0)),
                    fmt_sig12(x),
                    fmt_sig12(frame.y(frame.alpha_max)),
                    color
                );
            }
            WallLocus::Semicircle { center, radius_sq } => {
                let c = rf(center);
                let rho = rf(radius_sq).max(0.0).sqrt();
                let x1 = frame.x(c - rho);
                let x2 = frame.x(c + rho);
                let y0 = frame.y(0.0);
                // sweep flag 1 walks the arc over the top of the circle
                let _ = writeln!(
                    out,
                    r#"<path class="wall" d="M {} {} A {} {} 0 0 1 {} {}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                    fmt_sig12(x1),
                    fmt_sig12(y0),
                    fmt_sig12(rho * frame.sx()),
                    fmt_sig12(rho * frame.sy()),
                    fmt_sig12(x2),
                    fmt_sig12(y0),
                    color
                );
            }
        }
    }
    let _ = writeln!(out, "</g>");

    if style.show_legend {
        for (i, wall) in unique.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let y = MARGIN + 14.0 + 16.0 * i as f64;
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="10" height="10" fill="{}"/>"#,
                fmt_sig12(MARGIN + 6.0),
                fmt_sig12(y - 9.0),
                color
            );
            let _ = writeln!(
                out,
                r##"<text x="{}" y="{}" font-size="11" fill="#222222">{}</text>"##,
                fmt_sig12(MARGIN + 22.0),
                fmt_sig12(y),
                wall_label(wall)
            );
        }
    }

    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numclass::ChernCharacter;
    use crate::rat::{rat, ratio};

    fn window() -> Window {
        Window::new(rat(-2), rat(0), rat(4)).unwrap()
    }

    fn arc_wall() -> Wall {
        Wall {
            locus: WallLocus::Semicircle { center: ratio(-3, 2), radius_sq: ratio(1, 4) },
            destabilizer: ChernCharacter::of_ints(1, -1, 0, 0),
        }
    }

    fn vertical_wall() -> Wall {
        Wall {
            locus: WallLocus::Vertical { beta0: rat(0) },
            destabilizer: ChernCharacter::unit(),
        }
    }

    #[test]
    fn empty_input_gives_axes_only() {
        let svg = render_walls(&[], &window(), &RenderStyle::default());
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(!svg.contains(r#"class="wall""#));
    }

    #[test]
    fn atlas_has_dashed_vertical_and_arc() {
        let svg = render_walls(&[vertical_wall(), arc_wall()], &window(), &RenderStyle::default());
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
        assert_eq!(svg.matches("<path class=\"wall\"").count(), 1);
        // legend carries the provenance
        assert!(svg.contains("center -3/2, radius_sq 1/4"));
        assert!(svg.contains("vertical beta = 0"));
    }

    #[test]
    fn proportional_walls_render_once() {
        let mut twin = arc_wall();
        twin.destabilizer = ChernCharacter::of_ints(2, -2, 0, 0);
        let svg = render_walls(&[arc_wall(), twin], &window(), &RenderStyle::default());
        assert_eq!(svg.matches("<path class=\"wall\"").count(), 1);
    }

    #[test]
    fn output_is_byte_identical() {
        let walls = [vertical_wall(), arc_wall()];
        let a = render_walls(&walls, &window(), &RenderStyle::default());
        let b = render_walls(&walls, &window(), &RenderStyle::default());
        assert_eq!(a, b);
        // "stroke-width" contains "e-"; only digit-adjacent hits are bad
        for (i, _) in a.match_indices("e-") {
            assert!(
                i == 0 || !a.as_bytes()[i - 1].is_ascii_digit(),
                "scientific notation in coordinates"
            );
        }
    }

    #[test]
    fn frozen_arc_coordinates() {
        // plot area 548x328, so sx = 274, sy = 164: the rho = 1/2 arc spans
        // x in [46, 320] at y = 374 with rx = 137, ry = 82
        let svg = render_walls(&[arc_wall()], &window(), &RenderStyle::default());
        assert!(svg.contains("M 46 374 A 137 82 0 0 1 320 374"), "arc path:\n{svg}");
    }
}
