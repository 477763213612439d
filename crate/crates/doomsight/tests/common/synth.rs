//! Synthetic WADs for tests.
//!
//! A scene is an axis-aligned rectangle cut recursively into cells. Every
//! cell is its own sector and subsector; every cut is a BSP node with the
//! low-coordinate half on the left of its partition line. Shared cell
//! edges become two-sided linedefs, outer edges one-sided walls.

use std::collections::BTreeMap;

use doomsight_core::gfx::Picture;
use doomsight_core::wad::{WadBuilder, WadKind};
use doomsight_core::Angle;
use rand::Rng;

pub const MAP: &str = "MAP01";
pub const WALLS: [&str; 4] = ["WALL0", "WALL1", "WALL2", "WALL3"];
pub const FLOORS: [&str; 4] = ["FLOOR0", "FLOOR1", "FLOOR2", "FLOOR3"];
pub const CEILING: &str = "CEIL0";
pub const SKY: &str = "F_SKY1";

/// Thing types with a sprite in every synthetic WAD, and their prefixes.
pub const SPRITE_TYPES: [(u16, &str); 4] = [
    (2035, "BAR1"),
    (3004, "POSS"),
    (3001, "TROO"),
    (2014, "BON1"),
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub x0: i32,
    pub y0: i32,
    pub x1: i32,
    pub y1: i32,
    pub floor: i32,
    pub ceiling: i32,
    pub light: u8,
    pub sky: bool,
}

impl Cell {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 as f64 && x <= self.x1 as f64 && y >= self.y0 as f64 && y <= self.y1 as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kd {
    Leaf(usize),
    /// `vertical`: the cut is the line x = `at`; otherwise y = `at`.
    Split {
        vertical: bool,
        at: i32,
        low: Box<Kd>,
        high: Box<Kd>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthThing {
    pub x: i32,
    pub y: i32,
    pub angle: i16,
    pub doomed_type: u16,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub cells: Vec<Cell>,
    pub kd: Kd,
    pub things: Vec<SynthThing>,
    /// Sprite picture per thing type.
    pub sprites: BTreeMap<u16, Picture>,
}

impl Scene {
    /// One rectangular room.
    pub fn room(x0: i32, y0: i32, x1: i32, y1: i32, floor: i32, ceiling: i32) -> Scene {
        Scene {
            cells: vec![Cell {
                x0,
                y0,
                x1,
                y1,
                floor,
                ceiling,
                light: 160,
                sky: false,
            }],
            kd: Kd::Leaf(0),
            things: Vec::new(),
            sprites: default_sprites(),
        }
    }

    /// A random cut-up room of 1 to 8 cells with varied heights, some sky.
    pub fn random(rng: &mut impl Rng) -> Scene {
        let w = rng.gen_range(4..=10) * 64;
        let h = rng.gen_range(4..=10) * 64;
        let mut cells = Vec::new();
        let kd = cut(rng, (0, 0, w, h), 3, &mut cells);
        Scene {
            cells,
            kd,
            things: Vec::new(),
            sprites: random_sprites(rng),
        }
    }

    pub fn cell_at(&self, x: f64, y: f64) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(x, y))
    }

    /// A random point at least `margin` inside a random cell, with a
    /// fractional part so it lies on no grid line.
    pub fn random_point(&self, rng: &mut impl Rng, margin: f64) -> (usize, f64, f64) {
        let i = rng.gen_range(0..self.cells.len());
        let c = self.cells[i];
        let x = rng.gen_range(c.x0 as f64 + margin..c.x1 as f64 - margin) + 0.37;
        let y = rng.gen_range(c.y0 as f64 + margin..c.y1 as f64 - margin) + 0.61;
        (i, x, y)
    }

    /// Places up to `n` things of random sprite types at integer spots.
    pub fn scatter_things(&mut self, rng: &mut impl Rng, n: usize) {
        for _ in 0..n {
            let (_, x, y) = self.random_point(rng, 12.0);
            let (ty, _) = SPRITE_TYPES[rng.gen_range(0..SPRITE_TYPES.len())];
            self.things.push(SynthThing {
                x: x as i32,
                y: y as i32,
                angle: rng.gen_range(0..8) * 45,
                doomed_type: ty,
            });
        }
    }

    pub fn to_wad(&self) -> Vec<u8> {
        build_wad(self)
    }
}

fn cut(rng: &mut impl Rng, r: (i32, i32, i32, i32), depth: u32, cells: &mut Vec<Cell>) -> Kd {
    let (x0, y0, x1, y1) = r;
    let can_x = x1 - x0 >= 128;
    let can_y = y1 - y0 >= 128;
    if depth == 0 || !(can_x || can_y) || rng.gen_bool(0.2) {
        let floor = [-16, 0, 0, 8, 16, 24, 40][rng.gen_range(0..7)];
        let ceiling = floor + rng.gen_range(56..=160);
        cells.push(Cell {
            x0,
            y0,
            x1,
            y1,
            floor,
            ceiling,
            light: rng.gen_range(96..=255),
            sky: rng.gen_bool(0.3),
        });
        return Kd::Leaf(cells.len() - 1);
    }
    let vertical = if can_x && can_y {
        rng.gen_bool(0.5)
    } else {
        can_x
    };
    let (lo, hi) = if vertical { (x0, x1) } else { (y0, y1) };
    let at = rng.gen_range(lo + 64..=hi - 64);
    let (a, b) = if vertical {
        ((x0, y0, at, y1), (at, y0, x1, y1))
    } else {
        ((x0, y0, x1, at), (x0, at, x1, y1))
    };
    let low = Box::new(cut(rng, a, depth - 1, cells));
    let high = Box::new(cut(rng, b, depth - 1, cells));
    Kd::Split {
        vertical,
        at,
        low,
        high,
    }
}

/// 256 colors: 8 hues by 32 brightness steps.
pub fn palette() -> Vec<[u8; 3]> {
    const HUES: [[u8; 3]; 8] = [
        [255, 255, 255],
        [255, 64, 64],
        [64, 255, 64],
        [64, 64, 255],
        [255, 255, 64],
        [64, 255, 255],
        [160, 200, 255],
        [255, 128, 0],
    ];
    (0..256)
        .map(|i| {
            let base = HUES[i / 32];
            let level = (i % 32 + 1) as u32;
            base.map(|c| (c as u32 * level / 32) as u8)
        })
        .collect()
}

fn colormap() -> Vec<u8> {
    let mut out = Vec::with_capacity(34 * 256);
    for row in 0..34u32 {
        for i in 0..256u32 {
            let (hue, level) = (i / 32, i % 32);
            let dimmed = if row < 32 { level * (31 - row) / 31 } else { 0 };
            out.push((hue * 32 + dimmed) as u8);
        }
    }
    out
}

fn pattern(width: u16, height: u16, hue: u8) -> Picture {
    let texels = (0..height as usize * width as usize)
        .map(|i| {
            let (x, y) = (i % width as usize, i / width as usize);
            Some(hue * 32 + 8 + ((x / 8 + y / 8) % 2) as u8 * 16 + (x % 8) as u8)
        })
        .collect();
    Picture {
        width,
        height,
        left_offset: 0,
        top_offset: 0,
        texels,
    }
}

fn sprite_picture(
    width: u16,
    height: u16,
    opaque: impl Fn(usize, usize) -> bool,
    hue: u8,
) -> Picture {
    let texels = (0..height as usize * width as usize)
        .map(|i| {
            let (x, y) = (i % width as usize, i / width as usize);
            opaque(x, y).then_some(hue * 32 + 20 + (y % 8) as u8)
        })
        .collect();
    Picture {
        width,
        height,
        left_offset: width as i16 / 2,
        top_offset: height as i16,
        texels,
    }
}

/// Sprites with transparent corners and a transparent slot.
pub fn default_sprites() -> BTreeMap<u16, Picture> {
    SPRITE_TYPES
        .iter()
        .enumerate()
        .map(|(k, &(ty, _))| {
            let (w, h) = (20 + 6 * k as u16, 28 + 8 * k as u16);
            let pic = sprite_picture(
                w,
                h,
                move |x, y| {
                    let corner = (x < 3 || x + 3 >= w as usize) && (y < 3 || y + 3 >= h as usize);
                    let slot = x == w as usize / 2 && y > 4 && y < 10;
                    !(corner || slot)
                },
                k as u8 + 1,
            );
            (ty, pic)
        })
        .collect()
}

/// Sprites of random size whose opaque texels form a random blob.
pub fn random_sprites(rng: &mut impl Rng) -> BTreeMap<u16, Picture> {
    SPRITE_TYPES
        .iter()
        .enumerate()
        .map(|(k, &(ty, _))| {
            let w = rng.gen_range(10..=40u16);
            let h = rng.gen_range(16..=60u16);
            let mask: Vec<bool> = (0..w as usize * h as usize)
                .map(|_| rng.gen_bool(0.8))
                .collect();
            (
                ty,
                sprite_picture(w, h, |x, y| mask[y * w as usize + x], k as u8 + 1),
            )
        })
        .collect()
}

fn name8(s: &str) -> [u8; 8] {
    let mut b = [0u8; 8];
    b[..s.len()].copy_from_slice(s.as_bytes());
    b
}

fn push_i16(out: &mut Vec<u8>, v: i32) {
    out.extend_from_slice(
        &i16::try_from(v)
            .expect("fits a map coordinate")
            .to_le_bytes(),
    );
}

fn push_u16(out: &mut Vec<u8>, v: usize) {
    out.extend_from_slice(&u16::try_from(v).expect("fits an index").to_le_bytes());
}

struct MapLumps {
    vertexes: Vec<u8>,
    linedefs: Vec<u8>,
    sidedefs: Vec<u8>,
    segs: Vec<u8>,
    ssectors: Vec<u8>,
    nodes: Vec<u8>,
    sectors: Vec<u8>,
    things: Vec<u8>,
}

fn map_lumps(scene: &Scene) -> MapLumps {
    let mut vertex_ids: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    let mut vertexes = Vec::new();
    let mut vertex = |p: (i32, i32), vertexes: &mut Vec<u8>| -> usize {
        let n = vertex_ids.len();
        *vertex_ids.entry(p).or_insert_with(|| {
            push_i16(vertexes, p.0);
            push_i16(vertexes, p.1);
            n
        })
    };

    let mut linedefs = Vec::new();
    let mut sidedefs = Vec::new();
    let mut segs = Vec::new();
    let mut ssectors = Vec::new();
    // Unordered vertex pair -> linedef index.
    let mut lines: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut seg_count = 0usize;

    let sidedef =
        |sidedefs: &mut Vec<u8>, upper: &str, lower: &str, middle: &str, sector: usize| -> usize {
            let id = sidedefs.len() / 30;
            push_i16(sidedefs, 0);
            push_i16(sidedefs, 0);
            sidedefs.extend_from_slice(&name8(upper));
            sidedefs.extend_from_slice(&name8(lower));
            sidedefs.extend_from_slice(&name8(middle));
            push_u16(sidedefs, sector);
            id
        };

    for (ci, c) in scene.cells.iter().enumerate() {
        let first = seg_count;
        let corners = [(c.x0, c.y0), (c.x0, c.y1), (c.x1, c.y1), (c.x1, c.y0)];
        for k in 0..4 {
            let (a, b) = (corners[k], corners[(k + 1) % 4]);
            for (p, q) in split_edge(scene, a, b) {
                let (va, vb) = (vertex(p, &mut vertexes), vertex(q, &mut vertexes));
                let key = (va.min(vb), va.max(vb));
                let (line, side) = match lines.get(&key) {
                    Some(&l) => (l, 1),
                    None => {
                        // The neighbor lies to the left of p -> q.
                        let (mx, my) = ((p.0 + q.0) as f64 / 2.0, (p.1 + q.1) as f64 / 2.0);
                        let (dx, dy) = ((q.0 - p.0).signum() as f64, (q.1 - p.1).signum() as f64);
                        let neighbor = scene.cell_at(mx - dy * 0.5, my + dx * 0.5);
                        let wall = WALLS[ci % 4];
                        let l = linedefs.len() / 14;
                        let (front, back, flags) = match neighbor {
                            None => (sidedef(&mut sidedefs, "-", "-", wall, ci), None, 1),
                            Some(n) => {
                                let f = sidedef(&mut sidedefs, wall, wall, "-", ci);
                                let nw = WALLS[n % 4];
                                (f, Some(sidedef(&mut sidedefs, nw, nw, "-", n)), 4)
                            }
                        };
                        push_u16(&mut linedefs, va);
                        push_u16(&mut linedefs, vb);
                        push_u16(&mut linedefs, flags);
                        push_u16(&mut linedefs, 0);
                        push_u16(&mut linedefs, 0);
                        push_u16(&mut linedefs, front);
                        linedefs
                            .extend_from_slice(&back.map_or(0xFFFF, |b| b as u16).to_le_bytes());
                        lines.insert(key, l);
                        (l, 0)
                    }
                };
                push_u16(&mut segs, va);
                push_u16(&mut segs, vb);
                let angle = Angle::of_vector((q.0 - p.0) as f64, (q.1 - p.1) as f64);
                segs.extend_from_slice(&((angle.0 >> 16) as u16).to_le_bytes());
                push_u16(&mut segs, line);
                push_u16(&mut segs, side);
                push_i16(&mut segs, 0);
                seg_count += 1;
            }
        }
        push_u16(&mut ssectors, seg_count - first);
        push_u16(&mut ssectors, first);
    }

    let mut nodes = Vec::new();
    if let Kd::Split { .. } = scene.kd {
        let (mut x0, mut y0, mut x1, mut y1) = (i32::MAX, i32::MAX, i32::MIN, i32::MIN);
        for c in &scene.cells {
            x0 = x0.min(c.x0);
            y0 = y0.min(c.y0);
            x1 = x1.max(c.x1);
            y1 = y1.max(c.y1);
        }
        emit_node(&scene.kd, (x0, y0, x1, y1), &mut nodes);
    }

    let mut sectors = Vec::new();
    for (i, c) in scene.cells.iter().enumerate() {
        push_i16(&mut sectors, c.floor);
        push_i16(&mut sectors, c.ceiling);
        sectors.extend_from_slice(&name8(FLOORS[i % 4]));
        sectors.extend_from_slice(&name8(if c.sky { SKY } else { CEILING }));
        push_i16(&mut sectors, c.light as i32);
        push_u16(&mut sectors, 0);
        push_u16(&mut sectors, 0);
    }

    let mut things = Vec::new();
    for t in &scene.things {
        push_i16(&mut things, t.x);
        push_i16(&mut things, t.y);
        push_i16(&mut things, t.angle as i32);
        push_u16(&mut things, t.doomed_type as usize);
        push_u16(&mut things, 7);
    }

    MapLumps {
        vertexes,
        linedefs,
        sidedefs,
        segs,
        ssectors,
        nodes,
        sectors,
        things,
    }
}

/// Pieces of edge a -> b, cut at every other cell corner lying inside it.
fn split_edge(scene: &Scene, a: (i32, i32), b: (i32, i32)) -> Vec<((i32, i32), (i32, i32))> {
    let horizontal = a.1 == b.1;
    let (lo, hi) = if horizontal {
        (a.0.min(b.0), a.0.max(b.0))
    } else {
        (a.1.min(b.1), a.1.max(b.1))
    };
    let mut cuts: Vec<i32> = scene
        .cells
        .iter()
        .flat_map(|c| [(c.x0, c.y0), (c.x0, c.y1), (c.x1, c.y0), (c.x1, c.y1)])
        .filter_map(|(x, y)| {
            if horizontal {
                (y == a.1).then_some(x)
            } else {
                (x == a.0).then_some(y)
            }
        })
        .filter(|&v| v > lo && v < hi)
        .collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort();
    cuts.dedup();
    let forward = if horizontal { b.0 > a.0 } else { b.1 > a.1 };
    if !forward {
        cuts.reverse();
    }
    let point = |v: i32| if horizontal { (v, a.1) } else { (a.0, v) };
    cuts.windows(2)
        .map(|w| (point(w[0]), point(w[1])))
        .collect()
}

/// Writes the subtree's nodes in post-order; returns the child reference.
fn emit_node(kd: &Kd, r: (i32, i32, i32, i32), out: &mut Vec<u8>) -> u16 {
    match kd {
        Kd::Leaf(i) => 0x8000 | *i as u16,
        Kd::Split {
            vertical,
            at,
            low,
            high,
        } => {
            let (x0, y0, x1, y1) = r;
            let (lr, hr) = if *vertical {
                ((x0, y0, *at, y1), (*at, y0, x1, y1))
            } else {
                ((x0, y0, x1, *at), (x0, *at, x1, y1))
            };
            let lo = emit_node(low, lr, out);
            let hi = emit_node(high, hr, out);
            // Partition lines run north (vertical cuts) or west, putting
            // the low half on their left.
            let (x, y, dx, dy) = if *vertical {
                (*at, y0, 0, y1 - y0)
            } else {
                (x1, *at, x0 - x1, 0)
            };
            for v in [x, y, dx, dy] {
                push_i16(out, v);
            }
            for (bx0, by0, bx1, by1) in [hr, lr] {
                for v in [by1, by0, bx0, bx1] {
                    push_i16(out, v);
                }
            }
            out.extend_from_slice(&hi.to_le_bytes());
            out.extend_from_slice(&lo.to_le_bytes());
            (out.len() / 28 - 1) as u16
        }
    }
}

fn texture_lumps() -> (Vec<u8>, Vec<u8>) {
    let mut pnames = (WALLS.len() as i32).to_le_bytes().to_vec();
    for i in 0..WALLS.len() {
        pnames.extend_from_slice(&name8(&format!("WALLP{i}")));
    }
    let mut tex = (WALLS.len() as i32).to_le_bytes().to_vec();
    let header = 4 + 4 * WALLS.len();
    for i in 0..WALLS.len() {
        tex.extend_from_slice(&((header + i * 32) as i32).to_le_bytes());
    }
    for (i, w) in WALLS.iter().enumerate() {
        tex.extend_from_slice(&name8(w));
        tex.extend_from_slice(&0i32.to_le_bytes());
        tex.extend_from_slice(&64i16.to_le_bytes());
        tex.extend_from_slice(&128i16.to_le_bytes());
        tex.extend_from_slice(&0i32.to_le_bytes());
        tex.extend_from_slice(&1i16.to_le_bytes());
        for v in [0i16, 0, i as i16, 1, 0] {
            tex.extend_from_slice(&v.to_le_bytes());
        }
    }
    (pnames, tex)
}

pub fn build_wad(scene: &Scene) -> Vec<u8> {
    let mut w = WadBuilder::new(WadKind::Iwad);
    let playpal: Vec<u8> = palette()
        .iter()
        .flatten()
        .copied()
        .cycle()
        .take(14 * 768)
        .collect();
    w.lump("PLAYPAL", playpal).lump("COLORMAP", colormap());
    let (pnames, tex) = texture_lumps();
    w.lump("PNAMES", pnames).lump("TEXTURE1", tex);

    let m = map_lumps(scene);
    w.marker(MAP)
        .lump("THINGS", m.things)
        .lump("LINEDEFS", m.linedefs)
        .lump("SIDEDEFS", m.sidedefs)
        .lump("VERTEXES", m.vertexes)
        .lump("SEGS", m.segs)
        .lump("SSECTORS", m.ssectors)
        .lump("NODES", m.nodes)
        .lump("SECTORS", m.sectors)
        .lump("REJECT", Vec::new())
        .lump("BLOCKMAP", Vec::new());

    w.marker("P_START");
    for i in 0..WALLS.len() {
        w.lump(
            &format!("WALLP{i}"),
            pattern(64, 128, i as u8 + 1).to_bytes(),
        );
    }
    w.marker("P_END");

    w.marker("F_START");
    for (i, f) in FLOORS.iter().chain([&CEILING, &SKY]).enumerate() {
        let flat: Vec<u8> = pattern(64, 64, (i % 8) as u8)
            .texels
            .iter()
            .map(|t| t.unwrap())
            .collect();
        w.lump(f, flat);
    }
    w.marker("F_END");

    w.marker("S_START");
    for (ty, prefix) in SPRITE_TYPES {
        if let Some(pic) = scene.sprites.get(&ty) {
            w.lump(&format!("{prefix}A0"), pic.to_bytes());
        }
    }
    w.marker("S_END");
    w.build()
}
