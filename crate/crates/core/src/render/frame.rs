use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::bsp::{classify_point, point_in_world, seg_cross, subsector_at};
use super::light::shade;
use super::view::{plane_depth, View};
use super::{Camera, FrameBuffers, LabelId, RenderConfig, RenderError, SKY_FLAT};
use crate::fixed::Angle;
use crate::gfx::{Picture, Resources, Rgb, FLAT_SIZE};
use crate::level::{Child, LevelMap, Sector, Seg, Thing, ML_DONTPEGBOTTOM, ML_DONTPEGTOP};
use crate::things::thing_info;
use crate::wad::LumpName;

/// Walls are clipped to this view depth before projection.
pub const NEAR_CLIP: f64 = 1.0 / 256.0;
/// Things closer than this (or behind the camera) are not drawn.
pub const MIN_SPRITE_DEPTH: f64 = 1.0;

const PLACEHOLDER_A: Rgb = [255, 0, 255];
const PLACEHOLDER_B: Rgb = [0, 0, 0];

fn placeholder(u: i64, v: i64) -> Rgb {
    if ((u >> 3) + (v >> 3)) & 1 == 0 {
        PLACEHOLDER_A
    } else {
        PLACEHOLDER_B
    }
}

/// Open row window `[top, bottom)` of one screen column.
#[derive(Clone, Copy)]
struct Clip {
    top: i32,
    bottom: i32,
}

struct Ctx<'a> {
    level: &'a LevelMap,
    cfg: &'a RenderConfig,
    res: &'a Resources,
    view: View,
    clips: Vec<Clip>,
    open_columns: usize,
    out: FrameBuffers,
    sky: Rgb,
}

/// Renders one view. A pure function of its inputs.
pub fn render_frame(
    level: &LevelMap,
    things: &[Thing],
    camera: &Camera,
    cfg: &RenderConfig,
    res: &Resources,
) -> Result<FrameBuffers, RenderError> {
    cfg.validate()?;
    let cam = (camera.x, camera.y);
    if !point_in_world(level, cam) {
        return Err(RenderError::CameraOutOfWorld {
            x: camera.x,
            y: camera.y,
        });
    }
    let sky = res.palette.render_palette()[cfg.sky_index as usize];
    let mut ctx = Ctx {
        level,
        cfg,
        res,
        view: View::new(camera, cfg),
        clips: vec![
            Clip {
                top: 0,
                bottom: cfg.height as i32
            };
            cfg.width as usize
        ],
        open_columns: cfg.width as usize,
        out: FrameBuffers::new(cfg.width, cfg.height, sky),
        sky,
    };

    // Front-to-back walk: at each node, descend into the camera's side first.
    let mut stack: Vec<Child> = level.root().into_iter().collect();
    while let Some(child) = stack.pop() {
        if ctx.open_columns == 0 {
            break;
        }
        match child {
            Child::Node(n) => {
                let node = &level.nodes[n];
                let near = classify_point(node, cam).child_slot();
                stack.push(node.children[near ^ 1]);
                stack.push(node.children[near]);
            }
            Child::Subsector(s) => {
                for seg in level.subsector_segs(s) {
                    ctx.draw_seg(seg, camera);
                }
            }
        }
    }

    ctx.draw_sprites(things);
    Ok(ctx.out)
}

#[derive(Clone, Copy)]
enum Surface<'a> {
    Sky,
    Wall {
        tex: Option<&'a Picture>,
        name: LumpName,
        anchor: f64,
    },
}

impl<'a> Ctx<'a> {
    fn texture(&self, name: &LumpName) -> Option<&'a Picture> {
        self.res.textures.get(name)
    }

    fn draw_seg(&mut self, seg: &Seg, camera: &Camera) {
        let level = self.level;
        let v1 = level.vertices[seg.v1];
        let v2 = level.vertices[seg.v2];
        // Only segs whose front faces the camera are drawn.
        if seg_cross(v1.x, v1.y, v2.x, v2.y, (camera.x, camera.y)) >= 0 {
            return;
        }
        let (x1, y1, x2, y2) = (v1.x.to_f64(), v1.y.to_f64(), v2.x.to_f64(), v2.y.to_f64());
        let (mut d1, mut l1) = self.view.to_view(x1, y1);
        let (mut d2, mut l2) = self.view.to_view(x2, y2);
        if d1 < NEAR_CLIP && d2 < NEAR_CLIP {
            return;
        }
        if d1 < NEAR_CLIP {
            let f = (NEAR_CLIP - d1) / (d2 - d1);
            l1 += f * (l2 - l1);
            d1 = NEAR_CLIP;
        } else if d2 < NEAR_CLIP {
            let f = (NEAR_CLIP - d2) / (d1 - d2);
            l2 += f * (l1 - l2);
            d2 = NEAR_CLIP;
        }
        let v = self.view;
        let sx1 = v.center_x + v.focal * l1 / d1;
        let sx2 = v.center_x + v.focal * l2 / d2;
        if sx1.is_nan() || sx2.is_nan() || sx1 >= sx2 {
            return;
        }
        let width = self.cfg.width as f64;
        let c0 = libm::ceil((sx1 - 0.5).clamp(0.0, width)) as u32;
        let c1 = libm::ceil((sx2 - 0.5).clamp(0.0, width)) as u32;
        if c0 >= c1 {
            return;
        }

        let side = *level.seg_sidedef(seg);
        let line = level.linedefs[seg.linedef];
        let front = level.sectors[side.sector];
        let back = level.seg_back_sector(seg).map(|b| level.sectors[b]);
        let (ex, ey) = (x2 - x1, y2 - y1);
        let seg_len = libm::sqrt(ex * ex + ey * ey);
        let (wx, wy) = (x1 - v.origin.0, y1 - v.origin.1);
        let u_base = seg.offset.to_f64() + side.x_offset as f64;
        let y_off = side.y_offset as f64;

        let fc = front.ceiling.to_f64();
        let ff = front.floor.to_f64();
        let front_sky = front.ceiling_flat.matches(SKY_FLAT);

        // Wall surfaces, with the height their texture's top row is pinned to.
        let (upper, lower, middle) = match back {
            None => {
                let tex = self.texture(&side.middle);
                let h = tex.map_or(0.0, |t| t.height as f64);
                let anchor = if line.flags & ML_DONTPEGBOTTOM != 0 {
                    ff + h
                } else {
                    fc
                };
                (
                    None,
                    None,
                    Some(Surface::Wall {
                        tex,
                        name: side.middle,
                        anchor: anchor + y_off,
                    }),
                )
            }
            Some(b) => {
                let bc = b.ceiling.to_f64();
                let bf = b.floor.to_f64();
                let upper = if bc < fc {
                    if front_sky && b.ceiling_flat.matches(SKY_FLAT) {
                        Some(Surface::Sky)
                    } else {
                        let tex = self.texture(&side.upper);
                        let h = tex.map_or(0.0, |t| t.height as f64);
                        let anchor = if line.flags & ML_DONTPEGTOP != 0 {
                            fc
                        } else {
                            bc + h
                        };
                        Some(Surface::Wall {
                            tex,
                            name: side.upper,
                            anchor: anchor + y_off,
                        })
                    }
                } else {
                    None
                };
                let lower = if bf > ff {
                    let tex = self.texture(&side.lower);
                    let anchor = if line.flags & ML_DONTPEGBOTTOM != 0 {
                        fc
                    } else {
                        bf
                    };
                    Some(Surface::Wall {
                        tex,
                        name: side.lower,
                        anchor: anchor + y_off,
                    })
                } else {
                    None
                };
                (upper, lower, None)
            }
        };

        for c in c0..c1 {
            let clip = self.clips[c as usize];
            if clip.top >= clip.bottom {
                continue;
            }
            let (dx, dy) = v.column_ray(c);
            let denom = dx * ey - dy * ex;
            if denom == 0.0 {
                continue;
            }
            let t = ((wx * ey - wy * ex) / denom).max(NEAR_CLIP);
            let s = (wx * dy - wy * dx) / denom;
            let u = u_base + s * seg_len;

            let row_of = |z: f64| -> i32 {
                let y = v.horizon + v.focal * (v.eye_z - z) / t;
                libm::ceil((y - 0.5).clamp(clip.top as f64, clip.bottom as f64)) as i32
            };
            let ceil_row = row_of(fc);
            let floor_row = row_of(ff);

            if v.eye_z < fc {
                self.fill_plane(c, clip.top, ceil_row, &front, true, (dx, dy));
            }
            if v.eye_z > ff {
                self.fill_plane(c, floor_row, clip.bottom, &front, false, (dx, dy));
            }

            match back {
                None => {
                    if let Some(surface) = middle {
                        self.fill_wall(c, ceil_row, floor_row, surface, t, u, front.light);
                    }
                    self.close(c);
                }
                Some(b) => {
                    let upper_end = match upper {
                        Some(surface) => {
                            let end = row_of(b.ceiling.to_f64()).min(floor_row);
                            self.fill_wall(c, ceil_row, end, surface, t, u, front.light);
                            end
                        }
                        None => ceil_row,
                    };
                    let lower_start = match lower {
                        Some(surface) => {
                            let start = row_of(b.floor.to_f64()).max(upper_end);
                            self.fill_wall(c, start, floor_row, surface, t, u, front.light);
                            start
                        }
                        None => floor_row,
                    };
                    if upper_end >= lower_start {
                        self.close(c);
                    } else {
                        self.clips[c as usize] = Clip {
                            top: upper_end,
                            bottom: lower_start,
                        };
                    }
                }
            }
        }
    }

    fn close(&mut self, c: u32) {
        let clip = &mut self.clips[c as usize];
        if clip.top < clip.bottom {
            self.open_columns -= 1;
        }
        *clip = Clip { top: 0, bottom: 0 };
    }

    #[allow(clippy::too_many_arguments)]
    fn fill_wall(
        &mut self,
        c: u32,
        r0: i32,
        r1: i32,
        surface: Surface<'a>,
        t: f64,
        u: f64,
        light: u8,
    ) {
        let v = self.view;
        for r in r0.max(0)..r1 {
            let i = self.out.index(c, r as u32);
            match surface {
                Surface::Sky => {
                    self.out.color[i] = self.sky;
                    self.out.depth[i] = f64::INFINITY;
                    self.out.label[i] = LabelId::SKY;
                }
                Surface::Wall { tex, name, anchor } => {
                    let z = v.eye_z - (r as f64 + 0.5 - v.horizon) * t / v.focal;
                    let tu = libm::floor(u) as i64;
                    let tv = libm::floor(anchor - z) as i64;
                    self.out.color[i] = match tex {
                        Some(tex) => {
                            let x = tu.rem_euclid(tex.width.max(1) as i64) as usize;
                            let y = tv.rem_euclid(tex.height.max(1) as i64) as usize;
                            let texel = tex.texel(x, y).unwrap_or(0);
                            shade(&self.res.palette, texel, light, t, self.cfg)
                        }
                        None => {
                            if !name.is_blank() {
                                self.out.missing.insert(format!("texture {name}"));
                            }
                            placeholder(tu, tv)
                        }
                    };
                    self.out.depth[i] = t;
                    self.out.label[i] = LabelId::VERTICAL;
                }
            }
        }
    }

    fn fill_plane(
        &mut self,
        c: u32,
        r0: i32,
        r1: i32,
        sector: &Sector,
        ceiling: bool,
        ray: (f64, f64),
    ) {
        if r0 >= r1 {
            return;
        }
        let flat_name = if ceiling {
            sector.ceiling_flat
        } else {
            sector.floor_flat
        };
        if ceiling && flat_name.matches(SKY_FLAT) {
            self.fill_wall(c, r0, r1, Surface::Sky, 0.0, 0.0, 0);
            return;
        }
        let v = self.view;
        let z = if ceiling {
            sector.ceiling
        } else {
            sector.floor
        }
        .to_f64();
        let flat = self
            .res
            .flats
            .get(&flat_name)
            .filter(|f| f.len() >= FLAT_SIZE);
        if flat.is_none() {
            self.out.missing.insert(format!("flat {flat_name}"));
        }
        for r in r0.max(0)..r1 {
            let Ok(dist) = plane_depth(v.focal, v.eye_z - z, r as f64 + 0.5 - v.horizon) else {
                continue;
            };
            let px = libm::floor(v.origin.0 + dist * ray.0) as i64;
            let py = libm::floor(-(v.origin.1 + dist * ray.1)) as i64;
            let i = self.out.index(c, r as u32);
            self.out.color[i] = match flat {
                Some(flat) => {
                    let texel = flat[(py.rem_euclid(64) * 64 + px.rem_euclid(64)) as usize];
                    shade(&self.res.palette, texel, sector.light, dist, self.cfg)
                }
                None => placeholder(px, py),
            };
            self.out.depth[i] = dist;
            self.out.label[i] = LabelId::HORIZONTAL;
        }
    }

    fn draw_sprites(&mut self, things: &[Thing]) {
        let v = self.view;
        let res = self.res;
        let missing_pic = missing_sprite();
        let mut visible: Vec<VisSprite<'_>> = Vec::new();
        for thing in things {
            let Some(info) = thing_info(thing.doomed_type) else {
                continue;
            };
            if info.sprite.is_empty() {
                continue;
            }
            let (tx, ty) = (thing.x.to_f64(), thing.y.to_f64());
            let (depth, lateral) = v.to_view(tx, ty);
            if depth.is_nan() || depth < MIN_SPRITE_DEPTH {
                continue;
            }
            let bearing = Angle::of_vector(tx - v.origin.0, ty - v.origin.1);
            let facing = Angle::from_degrees(thing.angle as f64);
            let rot = (bearing
                .wrapping_sub(facing)
                .wrapping_add(Angle((Angle::ANG45.0 / 2) * 9))
                .0
                >> 29) as usize;
            let (pic, flip) = match res
                .sprites
                .frame(info.sprite, info.frame)
                .and_then(|f| f.pick(rot))
            {
                Some((idx, flip)) => (&res.sprites.pictures[idx], flip),
                None => {
                    self.out
                        .missing
                        .insert(format!("sprite {}{}", info.sprite, info.frame as char));
                    (&missing_pic, false)
                }
            };
            let sector = &self.level.sectors[self
                .level
                .subsector_sector(subsector_at(self.level, (thing.x, thing.y)))];
            visible.push(VisSprite {
                depth,
                instance: thing.instance_id,
                left: lateral - pic.left_offset as f64,
                top: sector.floor.to_f64() + pic.top_offset as f64,
                pic,
                flip,
                placeholder: core::ptr::eq(pic, &missing_pic),
                light: sector.light,
            });
        }
        // Back to front; among equal depths the lower instance id ends on top.
        visible.sort_by(|a, b| {
            b.depth
                .total_cmp(&a.depth)
                .then(b.instance.cmp(&a.instance))
        });
        for s in &visible {
            self.draw_sprite(s);
        }
    }

    fn draw_sprite(&mut self, s: &VisSprite<'_>) {
        let v = self.view;
        let w = s.pic.width as f64;
        let h = s.pic.height as f64;
        let width = self.cfg.width as f64;
        let height = self.cfg.height as f64;
        let sx1 = v.center_x + v.focal * s.left / s.depth;
        let sx2 = v.center_x + v.focal * (s.left + w) / s.depth;
        let sy1 = v.horizon + v.focal * (v.eye_z - s.top) / s.depth;
        let sy2 = v.horizon + v.focal * (v.eye_z - (s.top - h)) / s.depth;
        let c0 = libm::ceil((sx1 - 0.5).clamp(0.0, width)) as u32;
        let c1 = libm::ceil((sx2 - 0.5).clamp(0.0, width)) as u32;
        let r0 = libm::ceil((sy1 - 0.5).clamp(0.0, height)) as u32;
        let r1 = libm::ceil((sy2 - 0.5).clamp(0.0, height)) as u32;
        let label = LabelId::instance(s.instance);
        for c in c0..c1 {
            let lateral = (c as f64 + 0.5 - v.center_x) * s.depth / v.focal;
            let u = libm::floor(lateral - s.left);
            if !(u >= 0.0 && u < w) {
                continue;
            }
            let u = if s.flip {
                s.pic.width as usize - 1 - u as usize
            } else {
                u as usize
            };
            for r in r0..r1 {
                let z = v.eye_z - (r as f64 + 0.5 - v.horizon) * s.depth / v.focal;
                let tv = libm::floor(s.top - z);
                if !(tv >= 0.0 && tv < h) {
                    continue;
                }
                let Some(texel) = s.pic.texel(u, tv as usize) else {
                    continue;
                };
                let i = self.out.index(c, r);
                if s.depth <= self.out.depth[i] {
                    self.out.color[i] = if s.placeholder {
                        placeholder(u as i64, tv as i64)
                    } else {
                        shade(&self.res.palette, texel, s.light, s.depth, self.cfg)
                    };
                    self.out.depth[i] = s.depth;
                    self.out.label[i] = label;
                }
            }
        }
    }
}

struct VisSprite<'p> {
    depth: f64,
    instance: u32,
    /// Lateral view coordinate of the picture's left edge.
    left: f64,
    /// World height of the picture's top row.
    top: f64,
    pic: &'p Picture,
    flip: bool,
    placeholder: bool,
    light: u8,
}

/// Solid 32×48 stand-in for a sprite with no picture.
fn missing_sprite() -> Picture {
    let mut p = Picture::transparent(32, 48);
    p.texels.iter_mut().for_each(|t| *t = Some(0));
    p.left_offset = 16;
    p.top_offset = 48;
    p
}
