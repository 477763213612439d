use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::CocoError;
use crate::render::LabelId;

/// A 16-bit label image as written to `objects/`.
#[derive(Clone, Copy, Debug)]
pub struct LabelImage<'a> {
    pub width: u32,
    pub height: u32,
    pub pixels: &'a [u16],
}

/// Binary mask stored over its bounding box; coordinates are absolute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    pub x0: u32,
    pub y0: u32,
    pub width: u32,
    pub height: u32,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(x0: u32, y0: u32, width: u32, height: u32) -> Mask {
        Mask {
            x0,
            y0,
            width,
            height,
            bits: vec![false; width as usize * height as usize],
        }
    }

    /// Tight mask around a set of absolute pixel coordinates.
    pub fn from_pixels(pixels: &[(u32, u32)]) -> Mask {
        let Some(&(fx, fy)) = pixels.first() else {
            return Mask::new(0, 0, 0, 0);
        };
        let (mut x0, mut y0, mut x1, mut y1) = (fx, fy, fx, fy);
        for &(x, y) in pixels {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        let mut m = Mask::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1);
        for &(x, y) in pixels {
            m.set(x, y);
        }
        m
    }

    pub fn get(&self, x: i64, y: i64) -> bool {
        let lx = x - self.x0 as i64;
        let ly = y - self.y0 as i64;
        if lx < 0 || ly < 0 || lx >= self.width as i64 || ly >= self.height as i64 {
            return false;
        }
        self.bits[ly as usize * self.width as usize + lx as usize]
    }

    pub fn set(&mut self, x: u32, y: u32) {
        let i = (y - self.y0) as usize * self.width as usize + (x - self.x0) as usize;
        self.bits[i] = true;
    }

    pub fn count(&self) -> u64 {
        self.bits.iter().filter(|b| **b).count() as u64
    }

    /// Set pixels in raster order, absolute coordinates.
    pub fn pixels(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(move |(i, _)| {
                (
                    self.x0 + (i % self.width as usize) as u32,
                    self.y0 + (i / self.width as usize) as u32,
                )
            })
    }
}

/// Everything one instance contributes to one frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceObservation {
    pub instance_id: u32,
    pub category: String,
    pub mask: Mask,
    /// Pixel count.
    pub area: u64,
    /// Tight `[x, y, w, h]`.
    pub bbox: [u32; 4],
}

/// One observation per instance id present in the image, ordered by id.
/// Disconnected pieces of one instance stay in one observation.
pub fn extract_instances(
    image: &LabelImage<'_>,
    categories: &BTreeMap<u32, String>,
) -> Result<Vec<InstanceObservation>, CocoError> {
    let w = image.width as usize;
    // id -> (x0, y0, x1, y1)
    let mut boxes: BTreeMap<u32, (u32, u32, u32, u32)> = BTreeMap::new();
    for (i, &v) in image.pixels.iter().enumerate() {
        let Some(id) = LabelId(v as u32).instance_id() else {
            continue;
        };
        let (x, y) = ((i % w) as u32, (i / w) as u32);
        boxes
            .entry(id)
            .and_modify(|b| {
                b.0 = b.0.min(x);
                b.1 = b.1.min(y);
                b.2 = b.2.max(x);
                b.3 = b.3.max(y);
            })
            .or_insert((x, y, x, y));
    }
    let mut out = Vec::with_capacity(boxes.len());
    for (&id, &(x0, y0, x1, y1)) in &boxes {
        let category = categories
            .get(&id)
            .ok_or(CocoError::UnknownInstance { instance_id: id })?;
        let mut mask = Mask::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1);
        let want = (id + LabelId::FIRST_INSTANCE) as u16;
        for y in y0..=y1 {
            let row = &image.pixels[y as usize * w..(y as usize + 1) * w];
            for x in x0..=x1 {
                if row[x as usize] == want {
                    mask.set(x, y);
                }
            }
        }
        let area = mask.count();
        out.push(InstanceObservation {
            instance_id: id,
            category: category.clone(),
            bbox: [x0, y0, mask.width, mask.height],
            mask,
            area,
        });
    }
    Ok(out)
}
