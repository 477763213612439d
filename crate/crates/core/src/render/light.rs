use crate::gfx::{PaletteSet, Rgb};

use super::RenderConfig;

pub const LIGHT_LEVELS: usize = 16;
pub const NUM_LIGHT_MAPS: usize = 32;
const MAX_LIGHT_Z: usize = 128;
const LIGHT_Z_UNITS: f64 = 16.0;
const DIST_MAP: i64 = 2;

/// Colormap row (0 = brightest, 31 = darkest) for a sector light level seen
/// at `view_depth`, following the classic distance-diminishing table:
/// the sector light picks a start row and nearby surfaces are brightened by
/// up to `focal / (depth / 16 + 1) / 2` rows.
pub fn light_row(sector_light: u8, view_depth: f64, focal: f64) -> usize {
    let level = sector_light as i64 / LIGHT_LEVELS as i64;
    let start = (LIGHT_LEVELS as i64 - 1 - level) * 2 * NUM_LIGHT_MAPS as i64 / LIGHT_LEVELS as i64;
    let bucket = if view_depth > 0.0 {
        libm::floor(view_depth / LIGHT_Z_UNITS).min((MAX_LIGHT_Z - 1) as f64) as i64
    } else {
        0
    };
    let boost = (libm::floor(focal) as i64 / (bucket + 1)) / DIST_MAP;
    (start - boost).clamp(0, NUM_LIGHT_MAPS as i64 - 1) as usize
}

/// Final color of a palette texel under sector light and distance.
pub fn shade(
    palette: &PaletteSet,
    texel: u8,
    sector_light: u8,
    view_depth: f64,
    cfg: &RenderConfig,
) -> Rgb {
    let row = if cfg.apply_light {
        light_row(sector_light, view_depth, cfg.focal())
    } else {
        0
    };
    palette.render_palette()[palette.colormaps[row][texel as usize] as usize]
}
