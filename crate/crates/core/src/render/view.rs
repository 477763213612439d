use core::fmt;

use super::{Camera, RenderConfig};

/// Camera basis and screen constants shared by every pixel of a frame.
///
/// Screen coordinates are continuous: pixel `(c, r)` covers
/// `[c, c + 1) × [r, r + 1)` and is sampled at its center.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct View {
    pub origin: (f64, f64),
    pub eye_z: f64,
    pub forward: (f64, f64),
    /// Screen-right direction on the ground plane.
    pub right: (f64, f64),
    pub focal: f64,
    pub center_x: f64,
    pub horizon: f64,
}

impl View {
    pub fn new(camera: &Camera, cfg: &RenderConfig) -> View {
        let a = camera.angle.radians();
        let (s, c) = (libm::sin(a), libm::cos(a));
        View {
            origin: (camera.x.to_f64(), camera.y.to_f64()),
            eye_z: camera.eye_z.to_f64(),
            forward: (c, s),
            right: (s, -c),
            focal: cfg.focal(),
            center_x: cfg.width as f64 / 2.0,
            horizon: cfg.height as f64 / 2.0,
        }
    }

    /// `(depth along forward, lateral offset to the right)` of a ground point.
    pub fn to_view(&self, x: f64, y: f64) -> (f64, f64) {
        let rx = x - self.origin.0;
        let ry = y - self.origin.1;
        (
            rx * self.forward.0 + ry * self.forward.1,
            rx * self.right.0 + ry * self.right.1,
        )
    }

    /// Ground direction of the ray through the center of `column`, scaled so
    /// its forward component is 1: a point at parameter `t` along it has
    /// perpendicular view depth `t`.
    pub fn column_ray(&self, column: u32) -> (f64, f64) {
        let k = (column as f64 + 0.5 - self.center_x) / self.focal;
        (
            self.forward.0 + k * self.right.0,
            self.forward.1 + k * self.right.1,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScreenPoint {
    pub column: f64,
    pub row: f64,
    pub view_depth: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Behind;

impl fmt::Display for Behind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("point is behind the camera")
    }
}

/// Perspective projection of a world point.
pub fn world_to_screen(
    camera: &Camera,
    cfg: &RenderConfig,
    p: (f64, f64, f64),
) -> Result<ScreenPoint, Behind> {
    let v = View::new(camera, cfg);
    let (depth, lateral) = v.to_view(p.0, p.1);
    if depth <= 0.0 {
        return Err(Behind);
    }
    Ok(ScreenPoint {
        column: v.center_x + v.focal * lateral / depth,
        row: v.horizon + v.focal * (v.eye_z - p.2) / depth,
        view_depth: depth,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AtHorizon;

impl fmt::Display for AtHorizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("row lies on the horizon")
    }
}

/// Perpendicular distance at which screen row `row` (continuous) meets the
/// horizontal plane at height `plane_z`.
pub fn plane_depth_at_row(
    camera: &Camera,
    cfg: &RenderConfig,
    plane_z: f64,
    row: f64,
) -> Result<f64, AtHorizon> {
    plane_depth(
        cfg.focal(),
        camera.eye_z.to_f64() - plane_z,
        row - cfg.height as f64 / 2.0,
    )
}

pub(crate) fn plane_depth(focal: f64, dz: f64, dr: f64) -> Result<f64, AtHorizon> {
    if dr == 0.0 {
        return Err(AtHorizon);
    }
    Ok(focal * libm::fabs(dz) / libm::fabs(dr))
}
