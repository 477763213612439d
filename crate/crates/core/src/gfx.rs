//! Palettes, pictures, composite wall textures, flats and the sprite index.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::wad::{LumpName, WadArchive};

pub const PALETTE_COUNT: usize = 14;
pub const PLAYPAL_SIZE: usize = PALETTE_COUNT * 256 * 3;
pub const COLORMAP_COUNT: usize = 34;
pub const COLORMAP_MIN_SIZE: usize = COLORMAP_COUNT * 256;
pub const FLAT_SIZE: usize = 64 * 64;
const MAX_PICTURE_TEXELS: usize = 4096 * 4096;

pub type Rgb = [u8; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GfxError {
    MissingLump(&'static str),
    WrongSize {
        lump: &'static str,
        size: usize,
        expected: usize,
    },
    Malformed(&'static str),
    UnknownTexture(String),
    UnknownPatch(String),
}

impl fmt::Display for GfxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfxError::MissingLump(l) => write!(f, "missing lump {l}"),
            GfxError::WrongSize {
                lump,
                size,
                expected,
            } => {
                write!(f, "{lump} is {size} bytes, expected {expected}")
            }
            GfxError::Malformed(why) => write!(f, "malformed picture: {why}"),
            GfxError::UnknownTexture(t) => write!(f, "unknown texture {t}"),
            GfxError::UnknownPatch(p) => write!(f, "unknown patch {p}"),
        }
    }
}

impl core::error::Error for GfxError {}

/// PLAYPAL palettes and COLORMAP light tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaletteSet {
    pub palettes: Vec<[Rgb; 256]>,
    pub colormaps: Vec<[u8; 256]>,
}

impl PaletteSet {
    pub fn from_bytes(playpal: &[u8], colormap: &[u8]) -> Result<PaletteSet, GfxError> {
        if playpal.len() != PLAYPAL_SIZE {
            return Err(GfxError::WrongSize {
                lump: "PLAYPAL",
                size: playpal.len(),
                expected: PLAYPAL_SIZE,
            });
        }
        if colormap.len() < COLORMAP_MIN_SIZE {
            return Err(GfxError::WrongSize {
                lump: "COLORMAP",
                size: colormap.len(),
                expected: COLORMAP_MIN_SIZE,
            });
        }
        let palettes = playpal
            .chunks_exact(768)
            .map(|p| {
                let mut pal = [[0u8; 3]; 256];
                for (dst, src) in pal.iter_mut().zip(p.chunks_exact(3)) {
                    dst.copy_from_slice(src);
                }
                pal
            })
            .collect();
        let colormaps = colormap[..COLORMAP_MIN_SIZE]
            .chunks_exact(256)
            .map(|row| {
                let mut m = [0u8; 256];
                m.copy_from_slice(row);
                m
            })
            .collect();
        Ok(PaletteSet {
            palettes,
            colormaps,
        })
    }

    /// Palette 0, the one used for rendering.
    pub fn render_palette(&self) -> &[Rgb; 256] {
        &self.palettes[0]
    }
}

pub fn load_palette(archive: &WadArchive) -> Result<PaletteSet, GfxError> {
    let playpal = archive
        .lump_bytes("PLAYPAL")
        .map_err(|_| GfxError::MissingLump("PLAYPAL"))?;
    let colormap = archive
        .lump_bytes("COLORMAP")
        .map_err(|_| GfxError::MissingLump("COLORMAP"))?;
    PaletteSet::from_bytes(playpal, colormap)
}

/// A decoded patch/sprite, or a composed texture. Texels are row-major;
/// `None` is transparent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Picture {
    pub width: u16,
    pub height: u16,
    pub left_offset: i16,
    pub top_offset: i16,
    pub texels: Vec<Option<u8>>,
}

impl Picture {
    pub fn transparent(width: u16, height: u16) -> Picture {
        Picture {
            width,
            height,
            left_offset: 0,
            top_offset: 0,
            texels: vec![None; width as usize * height as usize],
        }
    }

    pub fn texel(&self, x: usize, y: usize) -> Option<u8> {
        if x < self.width as usize && y < self.height as usize {
            self.texels[y * self.width as usize + x]
        } else {
            None
        }
    }

    pub fn opaque_count(&self) -> usize {
        self.texels.iter().filter(|t| t.is_some()).count()
    }

    /// Encodes in the column/post picture format. Runs longer than 128
    /// texels are split into several posts. Posts starting at row 255 or
    /// below use tall-patch offsets, relative to the previous post, with
    /// empty posts inserted as stepping stones where needed.
    pub fn to_bytes(&self) -> Vec<u8> {
        let w = self.width as usize;
        let mut out = Vec::new();
        out.extend_from_slice(&self.width.to_le_bytes());
        out.extend_from_slice(&self.height.to_le_bytes());
        out.extend_from_slice(&self.left_offset.to_le_bytes());
        out.extend_from_slice(&self.top_offset.to_le_bytes());
        let table = out.len();
        out.resize(table + 4 * w, 0);
        for x in 0..w {
            let start = out.len() as u32;
            out[table + 4 * x..table + 4 * x + 4].copy_from_slice(&start.to_le_bytes());
            let mut y = 0;
            let mut prev: Option<usize> = None;
            while y < self.height as usize {
                if self.texel(x, y).is_none() {
                    y += 1;
                    continue;
                }
                let code = loop {
                    let p = prev.unwrap_or(0);
                    if y < 255 {
                        break y;
                    }
                    if prev.is_some() && y - p <= p {
                        break y - p;
                    }
                    let step = if p < 254 { 254 } else { p.min(254) };
                    out.extend_from_slice(&[step as u8, 0, 0, 0]);
                    prev = Some(if p < 254 { 254 } else { p + step });
                };
                prev = Some(y);
                let top = code;
                let mut run = Vec::new();
                while y < self.height as usize && run.len() < 128 {
                    match self.texel(x, y) {
                        Some(t) => run.push(t),
                        None => break,
                    }
                    y += 1;
                }
                out.push(top as u8);
                out.push(run.len() as u8);
                out.push(0);
                out.extend_from_slice(&run);
                out.push(0);
            }
            out.push(0xFF);
        }
        out
    }
}

/// Decodes a picture lump. Never reads outside `bytes`.
pub fn decode_picture(bytes: &[u8]) -> Result<Picture, GfxError> {
    if bytes.len() < 8 {
        return Err(GfxError::Malformed("header truncated"));
    }
    let width = u16::from_le_bytes([bytes[0], bytes[1]]);
    let height = u16::from_le_bytes([bytes[2], bytes[3]]);
    let left_offset = i16::from_le_bytes([bytes[4], bytes[5]]);
    let top_offset = i16::from_le_bytes([bytes[6], bytes[7]]);
    let w = width as usize;
    let h = height as usize;
    if bytes.len() < 8 + 4 * w {
        return Err(GfxError::Malformed("column table truncated"));
    }
    if w * h > MAX_PICTURE_TEXELS {
        return Err(GfxError::Malformed("picture dimensions too large"));
    }
    let mut pic = Picture {
        width,
        height,
        left_offset,
        top_offset,
        texels: vec![None; w * h],
    };
    for x in 0..w {
        let at = 8 + 4 * x;
        let mut p =
            u32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]]) as usize;
        let mut prev: Option<usize> = None;
        loop {
            let raw = *bytes
                .get(p)
                .ok_or(GfxError::Malformed("column runs past end of lump"))?
                as usize;
            if raw == 0xFF {
                break;
            }
            // Tall patches: an offset not past the previous one is relative.
            let top = match prev {
                Some(pt) if raw <= pt => pt + raw,
                _ => raw,
            };
            prev = Some(top);
            let len = *bytes
                .get(p + 1)
                .ok_or(GfxError::Malformed("post header truncated"))?
                as usize;
            if top + len > h {
                return Err(GfxError::Malformed("post overruns column"));
            }
            let data = bytes
                .get(p + 3..p + 3 + len)
                .ok_or(GfxError::Malformed("post data truncated"))?;
            for (dy, &t) in data.iter().enumerate() {
                pic.texels[(top + dy) * w + x] = Some(t);
            }
            p += len + 4;
        }
    }
    Ok(pic)
}

/// One patch placement inside a TEXTURE1/TEXTURE2 definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchRef {
    pub origin_x: i16,
    pub origin_y: i16,
    pub patch: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextureDef {
    pub name: LumpName,
    pub width: u16,
    pub height: u16,
    pub patches: Vec<PatchRef>,
}

fn read_u32(b: &[u8], at: usize) -> Option<u32> {
    Some(u32::from_le_bytes(b.get(at..at + 4)?.try_into().ok()?))
}

fn read_i16(b: &[u8], at: usize) -> Option<i16> {
    Some(i16::from_le_bytes(b.get(at..at + 2)?.try_into().ok()?))
}

pub fn parse_pnames(bytes: &[u8]) -> Result<Vec<LumpName>, GfxError> {
    let n = read_u32(bytes, 0).ok_or(GfxError::Malformed("PNAMES truncated"))? as usize;
    let body = bytes
        .get(4..4 + n * 8)
        .ok_or(GfxError::Malformed("PNAMES truncated"))?;
    Ok(body
        .chunks_exact(8)
        .map(|c| LumpName(c.try_into().unwrap()))
        .collect())
}

pub fn parse_texture_defs(bytes: &[u8]) -> Result<Vec<TextureDef>, GfxError> {
    const BAD: GfxError = GfxError::Malformed("texture directory truncated");
    let n = read_u32(bytes, 0).ok_or(BAD)? as usize;
    let mut out = Vec::with_capacity(n.min(4096));
    for i in 0..n {
        let at = read_u32(bytes, 4 + 4 * i).ok_or(BAD)? as usize;
        let name = LumpName(bytes.get(at..at + 8).ok_or(BAD)?.try_into().unwrap());
        let width = read_i16(bytes, at + 12).ok_or(BAD)? as u16;
        let height = read_i16(bytes, at + 14).ok_or(BAD)? as u16;
        let count = read_i16(bytes, at + 20).ok_or(BAD)?.max(0) as usize;
        let mut patches = Vec::with_capacity(count);
        for p in 0..count {
            let pa = at + 22 + p * 10;
            patches.push(PatchRef {
                origin_x: read_i16(bytes, pa).ok_or(BAD)?,
                origin_y: read_i16(bytes, pa + 2).ok_or(BAD)?,
                patch: read_i16(bytes, pa + 4).ok_or(BAD)? as u16 as usize,
            });
        }
        out.push(TextureDef {
            name,
            width,
            height,
            patches,
        });
    }
    Ok(out)
}

/// Blits patches over a blank canvas in definition order; later patches
/// overwrite earlier ones where they overlap.
pub fn compose(
    def: &TextureDef,
    pnames: &[LumpName],
    archive: &WadArchive,
) -> Result<Picture, GfxError> {
    let mut canvas = Picture::transparent(def.width, def.height);
    for p in &def.patches {
        let pname = pnames
            .get(p.patch)
            .ok_or_else(|| GfxError::UnknownPatch(alloc::format!("#{}", p.patch)))?;
        let bytes = archive
            .lump_bytes(crate::wad::LumpSelector::Name(*pname))
            .map_err(|_| GfxError::UnknownPatch(pname.as_str()))?;
        let patch = decode_picture(bytes)?;
        for py in 0..patch.height as i32 {
            let y = p.origin_y as i32 + py;
            if y < 0 || y >= def.height as i32 {
                continue;
            }
            for px in 0..patch.width as i32 {
                let x = p.origin_x as i32 + px;
                if x < 0 || x >= def.width as i32 {
                    continue;
                }
                if let Some(t) = patch.texel(px as usize, py as usize) {
                    canvas.texels[y as usize * def.width as usize + x as usize] = Some(t);
                }
            }
        }
    }
    Ok(canvas)
}

fn texture_defs(archive: &WadArchive) -> Result<Vec<TextureDef>, GfxError> {
    let mut defs = Vec::new();
    for lump in ["TEXTURE1", "TEXTURE2"] {
        if let Ok(bytes) = archive.lump_bytes(lump) {
            defs.extend(parse_texture_defs(bytes)?);
        }
    }
    Ok(defs)
}

/// Builds the named wall texture from TEXTURE1/TEXTURE2 and PNAMES.
pub fn compose_texture(archive: &WadArchive, name: &str) -> Result<Picture, GfxError> {
    let pnames = parse_pnames(
        archive
            .lump_bytes("PNAMES")
            .map_err(|_| GfxError::MissingLump("PNAMES"))?,
    )?;
    if archive.find("TEXTURE1").is_none() {
        return Err(GfxError::MissingLump("TEXTURE1"));
    }
    let defs = texture_defs(archive)?;
    let def = defs
        .iter()
        .rev()
        .find(|d| d.name.matches(name))
        .ok_or_else(|| GfxError::UnknownTexture(name.into()))?;
    compose(def, &pnames, archive)
}

/// Lumps strictly between the first start marker and the matching end
/// marker (either naming convention).
fn marked_range(archive: &WadArchive, starts: &[&str], ends: &[&str]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut inside = false;
    for (i, e) in archive.lumps().iter().enumerate() {
        if starts.iter().any(|s| e.name.matches(s)) {
            inside = true;
        } else if ends.iter().any(|s| e.name.matches(s)) {
            inside = false;
        } else if inside && e.size > 0 {
            out.push(i);
        }
    }
    out
}

/// One frame of a sprite: up to eight rotations, or one for all angles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpriteFrame {
    /// Index into [`SpriteSet::pictures`] and mirror flag, per rotation 1..=8.
    pub rotations: [Option<(usize, bool)>; 8],
}

impl SpriteFrame {
    /// Picture for rotation index `rot` in 0..8.
    pub fn pick(&self, rot: usize) -> Option<(usize, bool)> {
        self.rotations[rot].or_else(|| self.rotations.iter().flatten().next().copied())
    }
}

#[derive(Clone, Debug, Default)]
pub struct SpriteSet {
    pub pictures: Vec<Picture>,
    /// Keyed by four-letter prefix and frame letter.
    pub frames: BTreeMap<([u8; 4], u8), SpriteFrame>,
}

impl SpriteSet {
    pub fn frame(&self, prefix: &str, frame: u8) -> Option<&SpriteFrame> {
        let p: [u8; 4] = prefix.as_bytes().try_into().ok()?;
        self.frames.get(&(p, frame))
    }

    fn insert(&mut self, prefix: [u8; 4], frame: u8, rot: u8, pic: usize, flip: bool) {
        let entry = self
            .frames
            .entry((prefix, frame.to_ascii_uppercase()))
            .or_default();
        match rot {
            b'0' => entry.rotations = [Some((pic, flip)); 8],
            b'1'..=b'8' => entry.rotations[(rot - b'1') as usize] = Some((pic, flip)),
            _ => {}
        }
    }
}

/// Everything the renderer samples from the archive.
#[derive(Clone, Debug)]
pub struct Resources {
    pub palette: PaletteSet,
    pub textures: BTreeMap<LumpName, Picture>,
    pub flats: BTreeMap<LumpName, Vec<u8>>,
    pub sprites: SpriteSet,
}

impl Resources {
    /// Loads palettes and decodes every texture, flat and sprite. Textures
    /// or sprites that fail to decode are left out and later render as the
    /// missing-resource placeholder.
    pub fn load(archive: &WadArchive) -> Result<Resources, GfxError> {
        let palette = load_palette(archive)?;

        let mut textures = BTreeMap::new();
        if let Ok(pn) = archive.lump_bytes("PNAMES") {
            let pnames = parse_pnames(pn)?;
            for def in texture_defs(archive)? {
                if let Ok(pic) = compose(&def, &pnames, archive) {
                    textures.insert(def.name, pic);
                }
            }
        }

        let mut flats = BTreeMap::new();
        for i in marked_range(archive, &["F_START", "FF_START"], &["F_END", "FF_END"]) {
            let data = archive.lump_at(i).unwrap();
            if data.len() >= FLAT_SIZE {
                flats.insert(archive.lumps()[i].name, data[..FLAT_SIZE].to_vec());
            }
        }

        let mut sprites = SpriteSet::default();
        for i in marked_range(archive, &["S_START", "SS_START"], &["S_END", "SS_END"]) {
            let name = archive.lumps()[i].name;
            let b = name.bytes();
            if b.len() != 6 && b.len() != 8 {
                continue;
            }
            let Ok(pic) = decode_picture(archive.lump_at(i).unwrap()) else {
                continue;
            };
            let prefix: [u8; 4] = [
                b[0].to_ascii_uppercase(),
                b[1].to_ascii_uppercase(),
                b[2].to_ascii_uppercase(),
                b[3].to_ascii_uppercase(),
            ];
            let idx = sprites.pictures.len();
            sprites.pictures.push(pic);
            sprites.insert(prefix, b[4], b[5], idx, false);
            if b.len() == 8 {
                sprites.insert(prefix, b[6], b[7], idx, true);
            }
        }

        Ok(Resources {
            palette,
            textures,
            flats,
            sprites,
        })
    }
}
