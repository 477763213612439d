//! Software renderer producing synchronized color, depth and label planes.
//!
//! Walls are drawn column by column while walking the BSP front to back;
//! floors and ceilings are filled per pixel from the horizontal-plane ray
//! distance in the spans the walls leave open; sprites are billboards
//! composited last, back to front, with a per-texel depth test.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fixed::{Angle, Fixed};
use crate::gfx::Rgb;

mod bsp;
mod frame;
mod light;
mod view;

pub use bsp::{classify_point, point_in_world, subsector_at, Side};
pub use frame::{render_frame, MIN_SPRITE_DEPTH, NEAR_CLIP};
pub use light::{light_row, shade, LIGHT_LEVELS, NUM_LIGHT_MAPS};
pub use view::{plane_depth_at_row, world_to_screen, ScreenPoint, View};

/// Flat name marking a sky ceiling.
pub const SKY_FLAT: &str = "F_SKY1";

/// Eye position and heading. The camera only turns about the vertical axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Camera {
    pub x: Fixed,
    pub y: Fixed,
    /// Absolute eye height in map units.
    pub eye_z: Fixed,
    pub angle: Angle,
}

impl Camera {
    pub fn new(x: f64, y: f64, eye_z: f64, yaw_degrees: f64) -> Camera {
        Camera {
            x: Fixed::from_f64(x),
            y: Fixed::from_f64(y),
            eye_z: Fixed::from_f64(eye_z),
            angle: Angle::from_degrees(yaw_degrees),
        }
    }

    /// Heading in degrees, in `[0, 360)`.
    pub fn yaw(&self) -> f64 {
        self.angle.degrees()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderConfig {
    pub width: u32,
    pub height: u32,
    /// Horizontal field of view in degrees.
    pub hfov: f64,
    pub apply_light: bool,
    /// Depth image counts per map unit.
    pub depth_scale: f64,
    pub sky_depth_sentinel: u16,
    /// Palette index painted where the sky shows.
    pub sky_index: u8,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            width: 320,
            height: 200,
            hfov: 90.0,
            apply_light: true,
            depth_scale: 8.0,
            sky_depth_sentinel: 65535,
            sky_index: 200,
        }
    }
}

impl RenderConfig {
    pub fn validate(&self) -> Result<(), RenderError> {
        if self.width == 0 || self.height == 0 {
            return Err(RenderError::InvalidConfig(
                "width and height must be positive",
            ));
        }
        if self.width > 16384 || self.height > 16384 {
            return Err(RenderError::InvalidConfig(
                "width and height must be at most 16384",
            ));
        }
        if !(self.hfov > 10.0 && self.hfov < 170.0) {
            return Err(RenderError::InvalidConfig(
                "hfov must lie in (10, 170) degrees",
            ));
        }
        if !(self.depth_scale > 0.0 && self.depth_scale.is_finite()) {
            return Err(RenderError::InvalidConfig("depth_scale must be positive"));
        }
        Ok(())
    }

    /// Focal length in pixels: half the width over tan(hfov / 2).
    pub fn focal(&self) -> f64 {
        (self.width as f64 / 2.0) / libm::tan((self.hfov / 2.0).to_radians())
    }
}

/// Per-pixel surface class: sky, wall, floor/ceiling, or a thing instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

impl LabelId {
    pub const SKY: LabelId = LabelId(0);
    pub const VERTICAL: LabelId = LabelId(1);
    pub const HORIZONTAL: LabelId = LabelId(2);
    pub const FIRST_INSTANCE: u32 = 3;

    pub fn instance(instance_id: u32) -> LabelId {
        LabelId(instance_id + Self::FIRST_INSTANCE)
    }

    pub fn instance_id(self) -> Option<u32> {
        self.0.checked_sub(Self::FIRST_INSTANCE)
    }
}

/// One rendered view.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameBuffers {
    pub width: u32,
    pub height: u32,
    pub color: Vec<Rgb>,
    /// Perpendicular view distance in map units; `f64::INFINITY` for sky.
    pub depth: Vec<f64>,
    pub label: Vec<LabelId>,
    /// Textures, flats or sprites that were drawn as placeholders.
    pub missing: BTreeSet<String>,
}

impl FrameBuffers {
    pub fn new(width: u32, height: u32, sky: Rgb) -> FrameBuffers {
        let n = width as usize * height as usize;
        FrameBuffers {
            width,
            height,
            color: vec![sky; n],
            depth: vec![f64::INFINITY; n],
            label: vec![LabelId::SKY; n],
            missing: BTreeSet::new(),
        }
    }

    pub fn index(&self, column: u32, row: u32) -> usize {
        row as usize * self.width as usize + column as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RenderError {
    CameraOutOfWorld { x: Fixed, y: Fixed },
    InvalidConfig(&'static str),
}

impl fmt::Display for RenderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenderError::CameraOutOfWorld { x, y } => {
                write!(f, "camera at ({x}, {y}) is outside the level")
            }
            RenderError::InvalidConfig(why) => write!(f, "invalid render config: {why}"),
        }
    }
}

impl core::error::Error for RenderError {}
