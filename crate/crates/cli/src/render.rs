//! SVG drawing of a scene, its free space and optionally a plan.

use std::f64::consts::PI;
use std::fmt::Write;

use discplan::free_space::{FreeSpace, COLLISION_RADIUS};
use discplan::geom::{Arc, PathPiece, Point};
use discplan::planner::{MotionPlan, Scene};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn arc_command(out: &mut String, a: &Arc) {
    // Split so no single command spans a half turn or more; SVG cannot
    // draw a full circle in one arc.
    let parts = ((a.sweep().abs() / (PI * 0.99)).ceil() as usize).max(1);
    for k in 1..=parts {
        let p = a.point_at(k as f64 / parts as f64);
        let sweep_flag = if a.sweep() > 0.0 { 1 } else { 0 };
        let _ = write!(
            out,
            " A {r} {r} 0 0 {sweep_flag} {} {}",
            num(p.x),
            num(p.y),
            r = num(a.radius)
        );
    }
}

/// Path data for consecutive pieces. Coordinates are in world units; the
/// caller flips the y axis.
pub fn path_data(pieces: &[PathPiece]) -> String {
    let mut out = String::new();
    let mut pen: Option<Point> = None;
    for piece in pieces {
        let s = piece.start();
        if pen.map_or(true, |q| !q.approx_eq(s, 1e-9)) {
            let _ = write!(out, "M {} {}", num(s.x), num(s.y));
        }
        match piece {
            PathPiece::Seg(seg) => {
                let _ = write!(out, " L {} {}", num(seg.b.x), num(seg.b.y));
            }
            PathPiece::Arc(a) => arc_command(&mut out, a),
        }
        pen = Some(piece.end());
    }
    out
}

fn circle(out: &mut String, c: Point, r: f64, style: &str) {
    let _ = writeln!(
        out,
        r#"  <circle cx="{}" cy="{}" r="{}" {style}/>"#,
        num(c.x),
        num(c.y),
        num(r)
    );
}

pub fn render_svg(scene: &Scene, free_space: Option<&FreeSpace>, plan: Option<&MotionPlan>) -> String {
    let (mut lo, mut hi) = scene.polygon.bbox();
    for p in scene.starts.iter().chain(&scene.targets) {
        lo = Point::new(lo.x.min(p.x - COLLISION_RADIUS), lo.y.min(p.y - COLLISION_RADIUS));
        hi = Point::new(hi.x.max(p.x + COLLISION_RADIUS), hi.y.max(p.y + COLLISION_RADIUS));
    }
    let pad = 0.5;
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let scale = 800.0 / w.max(h);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        num(w * scale),
        num(h * scale),
        num(lo.x - pad),
        num(-(hi.y + pad)),
        num(w),
        num(h)
    );
    let stroke = num(1.5 / scale);
    let _ = writeln!(out, r#"<g transform="scale(1,-1)" stroke-width="{stroke}">"#);

    let mut poly = String::new();
    for (i, v) in scene.polygon.vertices().iter().enumerate() {
        let _ = write!(poly, "{} {} {}", if i == 0 { "M" } else { " L" }, num(v.x), num(v.y));
    }
    let _ = writeln!(out, r##"  <path d="{poly} Z" fill="#f4f1e8" stroke="#333"/>"##);

    if let Some(fs) = free_space {
        for comp in fs.components() {
            let pieces: Vec<PathPiece> = comp.boundary.pieces().iter().map(|tp| tp.piece).collect();
            let _ = writeln!(
                out,
                r##"  <path d="{} Z" fill="#dfe9f5" stroke="#6b8fb8"/>"##,
                path_data(&pieces)
            );
        }
    }

    for &s in &scene.starts {
        circle(&mut out, s, COLLISION_RADIUS, r##"fill="none" stroke="#2b6" stroke-dasharray="0.15 0.1""##);
        circle(&mut out, s, 1.0, r##"fill="#2b6" fill-opacity="0.35" stroke="#2b6""##);
    }
    for &t in &scene.targets {
        circle(&mut out, t, COLLISION_RADIUS, r##"fill="none" stroke="#c33" stroke-dasharray="0.15 0.1""##);
        circle(&mut out, t, 1.0, r##"fill="none" stroke="#c33""##);
    }

    if let Some(plan) = plan {
        for (i, mv) in plan.moves.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let _ = writeln!(
                out,
                r#"  <path d="{}" fill="none" stroke="{color}" stroke-opacity="0.8"><title>move {}</title></path>"#,
                path_data(&mv.path),
                i + 1
            );
            // Labels are flipped back upright.
            let _ = writeln!(
                out,
                r#"  <text x="{}" y="{}" transform="scale(1,-1)" font-size="{}" fill="{color}">{}</text>"#,
                num(mv.to.x),
                num(-mv.to.y),
                num(14.0 / scale),
                i + 1
            );
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}
