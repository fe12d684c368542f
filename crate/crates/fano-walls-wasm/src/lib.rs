//! Browser bindings for the core library.
//!
//! Every export is string-in, string-out so the demo page stays one static
//! file and the wrappers are testable on the host. Errors come back as
//! values, never as thrown exceptions: JSON endpoints return
//! `{"error": "..."}`, text and SVG endpoints return a line starting with
//! `error:`.

use fano_walls_core::expr::parse_class_expr;
use fano_walls_core::kulattice::{rotation_orbit, to_ku_class};
use fano_walls_core::numclass::FanoContext;
use fano_walls_core::rat::rat_from_str;
use fano_walls_core::svg::{render_walls, RenderStyle};
use fano_walls_core::walls::{
    numerical_wall, scan_candidates, Bounds, Wall, WallComputation, Window,
};
use wasm_bindgen::prelude::*;

/// Rotation steps before `orbit_text` gives up on closure.
const ORBIT_MAX_STEPS: usize = 24;

fn context(degree: u32) -> Result<FanoContext, String> {
    FanoContext::new(i64::from(degree)).map_err(|e| e.to_string())
}

fn class(ctx: &FanoContext, label: &str, src: &str) -> Result<
    fano_walls_core::numclass::ChernCharacter,
    String,
> {
    parse_class_expr(ctx, src).map_err(|e| format!("{label}: {e}"))
}

/// JSON description of the numerical wall between two class expressions,
/// tagged `semicircle`, `vertical`, `everywhere` or `nowhere`.
#[wasm_bindgen]
pub fn wall_json(degree: u32, class_src: &str, vs_src: &str) -> String {
    fn inner(degree: u32, class_src: &str, vs_src: &str) -> Result<String, String> {
        let ctx = context(degree)?;
        let v = class(&ctx, "class", class_src)?;
        let u = class(&ctx, "vs", vs_src)?;
        let value = match numerical_wall(&ctx, &v, &u) {
            WallComputation::Wall(w) => serde_json::to_value(&w).map_err(|e| e.to_string())?,
            WallComputation::Everywhere => serde_json::json!({ "type": "everywhere" }),
            WallComputation::Nowhere => serde_json::json!({ "type": "nowhere" }),
        };
        Ok(value.to_string())
    }
    inner(degree, class_src, vs_src)
        .unwrap_or_else(|e| serde_json::json!({ "error": e }).to_string())
}

/// SVG atlas of the candidate walls of a class inside a window, scanned
/// with the default bounds. Deterministic markup, byte for byte.
#[wasm_bindgen]
pub fn atlas_svg(
    degree: u32,
    class_src: &str,
    beta_min: &str,
    beta_max: &str,
    alpha2_max: &str,
) -> String {
    fn inner(
        degree: u32,
        class_src: &str,
        beta_min: &str,
        beta_max: &str,
        alpha2_max: &str,
    ) -> Result<String, String> {
        let ctx = context(degree)?;
        let v = class(&ctx, "class", class_src)?;
        let window = Window::new(
            rat_from_str(beta_min)?,
            rat_from_str(beta_max)?,
            rat_from_str(alpha2_max)?,
        )
        .map_err(|e| e.to_string())?;
        let report = scan_candidates(&ctx, &v, &window, &Bounds::default());
        let walls: Vec<Wall> = report.candidates.iter().map(|c| c.wall.clone()).collect();
        Ok(render_walls(&walls, &window, &RenderStyle::default()))
    }
    inner(degree, class_src, beta_min, beta_max, alpha2_max)
        .unwrap_or_else(|e| format!("error: {e}"))
}

/// Rotation orbit of a residual-lattice class as an arrow-separated listing.
#[wasm_bindgen]
pub fn orbit_text(degree: u32, class_src: &str) -> String {
    fn inner(degree: u32, class_src: &str) -> Result<String, String> {
        let ctx = context(degree)?;
        let e = class(&ctx, "class", class_src)?;
        let k = to_ku_class(&ctx, &e).map_err(|e| e.to_string())?;
        let report =
            rotation_orbit(ctx.degree(), &k, ORBIT_MAX_STEPS).map_err(|e| e.to_string())?;
        let line: Vec<String> = report.classes.iter().map(|c| c.to_string()).collect();
        Ok(match report.period {
            Some(p) => format!("{} -> {}\nperiod {p}", line.join(" -> "), report.start),
            None => format!(
                "{} -> ...\nno period within {ORBIT_MAX_STEPS} steps",
                line.join(" -> ")
            ),
        })
    }
    inner(degree, class_src).unwrap_or_else(|e| format!("error: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wall_json_reports_the_semicircle() {
        let s = wall_json(1, "-k1", "ch(1,-1,1/2,-1/6)");
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["type"], "semicircle");
        assert_eq!(v["center"], "-3/2");
        assert_eq!(v["radius_sq"], "1/4");
    }

    #[test]
    fn wall_json_surfaces_errors_as_values() {
        let s = wall_json(7, "k1", "k2");
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v["error"].as_str().unwrap().contains("degree"));
        let s = wall_json(1, "k3", "k2");
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v["error"].as_str().unwrap().contains("parse error"));
    }

    #[test]
    fn atlas_svg_is_deterministic_markup() {
        let a = atlas_svg(1, "-k1", "-2", "0", "4");
        assert!(a.starts_with("<svg "), "got: {}", &a[..a.len().min(60)]);
        assert_eq!(a, atlas_svg(1, "-k1", "-2", "0", "4"));
        assert!(atlas_svg(1, "-k1", "0", "-2", "4").starts_with("error:"));
    }

    #[test]
    fn orbit_text_lists_the_six_cycle() {
        assert_eq!(
            orbit_text(1, "k1"),
            "k1 -> k2 -> -k1 + k2 -> -k1 -> -k2 -> k1 - k2 -> k1\nperiod 6"
        );
        // classes outside the residual lattice are rejected, not crashed on
        assert!(orbit_text(1, "ch(0,0,1,0)").starts_with("error:"));
    }
}
