#![allow(dead_code)]

pub mod oracle;
pub mod synth;

use std::path::Path;

use doomsight_core::gfx::Resources;
use doomsight_core::render::{render_frame, Camera, FrameBuffers, RenderConfig};
use doomsight_core::{load_level, LevelMap, WadArchive};
use rand::Rng;

use synth::Scene;

pub struct Loaded {
    pub archive: WadArchive,
    pub level: LevelMap,
    pub res: Resources,
}

pub fn load(scene: &Scene) -> Loaded {
    let archive = WadArchive::parse(scene.to_wad()).expect("synthetic WAD parses");
    let level = load_level(&archive, synth::MAP).expect("synthetic map loads");
    let res = Resources::load(&archive).expect("synthetic resources load");
    Loaded {
        archive,
        level,
        res,
    }
}

pub fn render(l: &Loaded, camera: &Camera, cfg: &RenderConfig) -> FrameBuffers {
    render_frame(&l.level, &l.level.things, camera, cfg, &l.res).expect("camera inside the map")
}

/// A camera at a non-grid spot inside `scene`, eye strictly between the
/// floor and ceiling of its cell.
pub fn random_camera(scene: &Scene, rng: &mut impl Rng) -> Camera {
    let (i, x, y) = scene.random_point(rng, 4.0);
    let c = scene.cells[i];
    let eye = rng.gen_range(c.floor as f64 + 1.5..c.ceiling as f64 - 1.5) + 0.013;
    Camera::new(x, y, eye, rng.gen_range(0.0..360.0) + 0.0071)
}

pub fn small_config(rng: &mut impl Rng) -> RenderConfig {
    RenderConfig {
        width: 2 * rng.gen_range(8..=32),
        height: 2 * rng.gen_range(8..=32),
        hfov: rng.gen_range(60.0..=110.0),
        ..RenderConfig::default()
    }
}

/// Every regular file under `root`, relative path to SHA-256 hex digest.
pub fn tree_digest(root: &Path) -> std::collections::BTreeMap<String, String> {
    use sha2::{Digest, Sha256};
    let mut out = std::collections::BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let digest = Sha256::digest(std::fs::read(&p).unwrap());
                let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
                out.insert(
                    p.strip_prefix(root).unwrap().to_string_lossy().into_owned(),
                    hex,
                );
            }
        }
    }
    out
}

/// Adds up to `n` things in front of `camera`, between 8 and 200 units
/// away and inside the horizontal field of view.
pub fn place_things_in_view(
    scene: &mut Scene,
    camera: &Camera,
    cfg: &RenderConfig,
    rng: &mut impl Rng,
    n: usize,
) {
    let a = camera.angle.0 as f64 / 4_294_967_296.0 * std::f64::consts::TAU;
    let half = (cfg.hfov / 2.0).to_radians().tan();
    let (cx, cy) = (camera.x.to_f64(), camera.y.to_f64());
    let mut placed = 0;
    for _ in 0..200 {
        if placed == n {
            break;
        }
        let (_, x, y) = scene.random_point(rng, 12.0);
        let (x, y) = (x.floor(), y.floor());
        let (rx, ry) = (x - cx, y - cy);
        let depth = rx * a.cos() + ry * a.sin();
        let lateral = rx * a.sin() - ry * a.cos();
        if !(8.0..200.0).contains(&depth) || lateral.abs() > depth * half {
            continue;
        }
        let (ty, _) = synth::SPRITE_TYPES[rng.gen_range(0..synth::SPRITE_TYPES.len())];
        scene.things.push(synth::SynthThing {
            x: x as i32,
            y: y as i32,
            angle: 0,
            doomed_type: ty,
        });
        placed += 1;
    }
}

/// Renders a session of `scene` along `track` into `out`.
pub fn render_session(
    scene: &Scene,
    track: &doomsight_core::session::PoseTrack,
    out: &Path,
    render: RenderConfig,
) -> doomsight::session::SessionSummary {
    let archive = WadArchive::parse(scene.to_wad()).unwrap();
    let mut cfg = doomsight::session::SessionConfig::new(out, synth::MAP);
    cfg.render = render;
    doomsight::session::run_session(&archive, &cfg, track).expect("session runs")
}

/// A track circling inside cell `cell` of `scene`, one sample per tic.
pub fn circling_track(
    scene: &Scene,
    cell: usize,
    tics: impl Iterator<Item = u32>,
) -> doomsight_core::session::PoseTrack {
    let c = scene.cells[cell];
    let (mx, my) = ((c.x0 + c.x1) as f64 / 2.0, (c.y0 + c.y1) as f64 / 2.0);
    let r = ((c.x1 - c.x0).min(c.y1 - c.y0) as f64 / 2.0 - 8.0) * 0.6;
    let eye = (c.floor as f64 + 41.0).min(c.ceiling as f64 - 2.0);
    let samples = tics
        .map(|t| {
            let phase = t as f64 / 97.0 * std::f64::consts::TAU;
            doomsight_core::session::PoseSample {
                tic: t,
                x: mx + r * phase.cos() + 0.25,
                y: my + r * phase.sin() + 0.75,
                z: eye,
                yaw: (t as f64 * 2.5 + 0.3) % 360.0,
            }
        })
        .collect();
    doomsight_core::session::PoseTrack::new(samples).unwrap()
}
