//! Brute-force reference for what each pixel should show.
//!
//! Works from the scene description alone: the ray through a pixel center
//! is marched cell by cell until it meets a floor, a ceiling, or a wall
//! step, and every sprite billboard is intersected separately.

use doomsight_core::render::{Camera, RenderConfig};

use super::synth::Scene;

pub const SKY: u32 = 0;
pub const VERTICAL: u32 = 1;
pub const HORIZONTAL: u32 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleFrame {
    pub width: u32,
    pub height: u32,
    pub label: Vec<u32>,
    pub depth: Vec<f64>,
}

struct Basis {
    origin: (f64, f64),
    eye: f64,
    fwd: (f64, f64),
    right: (f64, f64),
    focal: f64,
    cx: f64,
    cy: f64,
}

fn basis(camera: &Camera, cfg: &RenderConfig) -> Basis {
    let a = camera.angle.0 as f64 / 4_294_967_296.0 * std::f64::consts::TAU;
    let focal = (cfg.width as f64 / 2.0) / (cfg.hfov.to_radians() / 2.0).tan();
    Basis {
        origin: (camera.x.to_f64(), camera.y.to_f64()),
        eye: camera.eye_z.to_f64(),
        fwd: (a.cos(), a.sin()),
        right: (a.sin(), -a.cos()),
        focal,
        cx: cfg.width as f64 / 2.0,
        cy: cfg.height as f64 / 2.0,
    }
}

/// Nearest map surface along one pixel ray: `(label, depth)`.
fn surface(scene: &Scene, b: &Basis, dir: (f64, f64), slope: f64) -> (u32, f64) {
    let Some(mut cur) = scene.cell_at(b.origin.0, b.origin.1) else {
        return (VERTICAL, 0.0);
    };
    loop {
        let c = scene.cells[cur];
        let exit_x = if dir.0 > 0.0 {
            (c.x1 as f64 - b.origin.0) / dir.0
        } else if dir.0 < 0.0 {
            (c.x0 as f64 - b.origin.0) / dir.0
        } else {
            f64::INFINITY
        };
        let exit_y = if dir.1 > 0.0 {
            (c.y1 as f64 - b.origin.1) / dir.1
        } else if dir.1 < 0.0 {
            (c.y0 as f64 - b.origin.1) / dir.1
        } else {
            f64::INFINITY
        };
        let t_exit = exit_x.min(exit_y);
        if slope < 0.0 {
            let t = (c.floor as f64 - b.eye) / slope;
            if t <= t_exit {
                return (HORIZONTAL, t);
            }
        } else if slope > 0.0 {
            let t = (c.ceiling as f64 - b.eye) / slope;
            if t <= t_exit {
                return if c.sky {
                    (SKY, f64::INFINITY)
                } else {
                    (HORIZONTAL, t)
                };
            }
        }
        let z = b.eye + slope * t_exit;
        let probe = t_exit + 1e-6;
        let next = scene
            .cell_at(b.origin.0 + dir.0 * probe, b.origin.1 + dir.1 * probe)
            .filter(|&n| n != cur);
        let Some(n) = next else {
            return (VERTICAL, t_exit);
        };
        let nc = scene.cells[n];
        if z < nc.floor as f64 {
            return (VERTICAL, t_exit);
        }
        if z > nc.ceiling as f64 {
            return if c.sky && nc.sky {
                (SKY, f64::INFINITY)
            } else {
                (VERTICAL, t_exit)
            };
        }
        cur = n;
    }
}

/// Labels and depths of every pixel. Instance labels are `3 + index`.
pub fn render(scene: &Scene, camera: &Camera, cfg: &RenderConfig) -> OracleFrame {
    let b = basis(camera, cfg);
    let (w, h) = (cfg.width, cfg.height);
    let mut label = Vec::with_capacity((w * h) as usize);
    let mut depth = Vec::with_capacity((w * h) as usize);

    struct Billboard<'a> {
        id: u32,
        depth: f64,
        left: f64,
        top: f64,
        pic: &'a doomsight_core::gfx::Picture,
    }
    let mut boards = Vec::new();
    for (id, t) in scene.things.iter().enumerate() {
        let Some(pic) = scene.sprites.get(&t.doomed_type) else {
            continue;
        };
        let (rx, ry) = (t.x as f64 - b.origin.0, t.y as f64 - b.origin.1);
        let d = rx * b.fwd.0 + ry * b.fwd.1;
        if d < 1.0 {
            continue;
        }
        let lateral = rx * b.right.0 + ry * b.right.1;
        let floor = scene.cells[scene
            .cell_at(t.x as f64, t.y as f64)
            .expect("thing inside the map")]
        .floor;
        boards.push(Billboard {
            id: id as u32,
            depth: d,
            left: lateral - pic.left_offset as f64,
            top: floor as f64 + pic.top_offset as f64,
            pic,
        });
    }

    for r in 0..h {
        let slope = -(r as f64 + 0.5 - b.cy) / b.focal;
        for c in 0..w {
            let k = (c as f64 + 0.5 - b.cx) / b.focal;
            let dir = (b.fwd.0 + k * b.right.0, b.fwd.1 + k * b.right.1);
            let (mut l, mut d) = surface(scene, &b, dir, slope);
            let mut best: Option<(f64, u32)> = None;
            for s in &boards {
                if s.depth > d {
                    continue;
                }
                let u = (k * s.depth - s.left).floor();
                let v = (s.top - (b.eye + slope * s.depth)).floor();
                if u < 0.0 || v < 0.0 || u >= s.pic.width as f64 || v >= s.pic.height as f64 {
                    continue;
                }
                if s.pic.texels[v as usize * s.pic.width as usize + u as usize].is_none() {
                    continue;
                }
                if best.map_or(true, |(bd, bid)| (s.depth, s.id) < (bd, bid)) {
                    best = Some((s.depth, s.id));
                }
            }
            if let Some((sd, id)) = best {
                l = 3 + id;
                d = sd;
            }
            label.push(l);
            depth.push(d);
        }
    }
    OracleFrame {
        width: w,
        height: h,
        label,
        depth,
    }
}
