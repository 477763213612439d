//! Map geometry: the eight classic map lumps decoded and cross-checked.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fixed::{Angle, Fixed};
use crate::wad::{LumpName, WadArchive};

/// Map lumps in their conventional order after the marker.
pub const MAP_LUMPS: [&str; 8] = [
    "THINGS", "LINEDEFS", "SIDEDEFS", "VERTEXES", "SEGS", "SSECTORS", "NODES", "SECTORS",
];

const OPTIONAL_MAP_LUMPS: [&str; 3] = ["REJECT", "BLOCKMAP", "BEHAVIOR"];

/// Linedef flags used by the renderer.
pub const ML_TWOSIDED: u16 = 4;
pub const ML_DONTPEGTOP: u16 = 8;
pub const ML_DONTPEGBOTTOM: u16 = 16;

/// Child reference bit marking a subsector in NODES.
pub const NF_SUBSECTOR: u16 = 0x8000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub x: Fixed,
    pub y: Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Linedef {
    pub v1: usize,
    pub v2: usize,
    pub flags: u16,
    pub special: u16,
    pub tag: u16,
    pub front: Option<usize>,
    pub back: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sidedef {
    pub x_offset: i16,
    pub y_offset: i16,
    pub upper: LumpName,
    pub lower: LumpName,
    pub middle: LumpName,
    pub sector: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sector {
    pub floor: Fixed,
    pub ceiling: Fixed,
    pub floor_flat: LumpName,
    pub ceiling_flat: LumpName,
    pub light: u8,
    pub special: u16,
    pub tag: u16,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seg {
    pub v1: usize,
    pub v2: usize,
    pub angle: Angle,
    pub linedef: usize,
    /// 0 = runs along the linedef's front side, 1 = back side.
    pub side: u8,
    pub offset: Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Subsector {
    pub first_seg: usize,
    pub seg_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Child {
    Node(usize),
    Subsector(usize),
}

/// Axis-aligned box in map units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BBox {
    pub top: Fixed,
    pub bottom: Fixed,
    pub left: Fixed,
    pub right: Fixed,
}

/// BSP node. `children[0]` is the right-hand half-plane of the partition
/// direction, `children[1]` the left-hand one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Node {
    pub x: Fixed,
    pub y: Fixed,
    pub dx: Fixed,
    pub dy: Fixed,
    pub bbox: [BBox; 2],
    pub children: [Child; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thing {
    pub x: Fixed,
    pub y: Fixed,
    /// Facing in whole degrees, as stored in the map.
    pub angle: i16,
    pub doomed_type: u16,
    pub flags: u16,
    /// Index of the record in THINGS.
    pub instance_id: u32,
}

#[derive(Clone, Debug)]
pub struct LevelMap {
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub linedefs: Vec<Linedef>,
    pub sidedefs: Vec<Sidedef>,
    pub sectors: Vec<Sector>,
    pub segs: Vec<Seg>,
    pub subsectors: Vec<Subsector>,
    pub nodes: Vec<Node>,
    pub things: Vec<Thing>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelError {
    MapNotFound(String),
    MissingLump(&'static str),
    /// Lump size is not a whole number of records.
    BadLumpSize {
        lump: &'static str,
        size: usize,
        record: usize,
    },
    DanglingReference {
        lump: &'static str,
        record: usize,
        field: &'static str,
        value: usize,
        limit: usize,
    },
    InvertedSector {
        sector: usize,
    },
    EmptySubsector {
        subsector: usize,
    },
    BadBspTree(String),
}

impl fmt::Display for LevelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelError::MapNotFound(m) => write!(f, "map not found: {m}"),
            LevelError::MissingLump(l) => write!(f, "missing map lump {l}"),
            LevelError::BadLumpSize { lump, size, record } => {
                write!(f, "{lump} size {size} is not a multiple of {record}")
            }
            LevelError::DanglingReference {
                lump,
                record,
                field,
                value,
                limit,
            } => write!(
                f,
                "{lump} record {record}: {field} = {value} out of range (< {limit})"
            ),
            LevelError::InvertedSector { sector } => {
                write!(f, "sector {sector} has ceiling below floor")
            }
            LevelError::EmptySubsector { subsector } => {
                write!(f, "subsector {subsector} has no segs")
            }
            LevelError::BadBspTree(msg) => write!(f, "bad BSP tree: {msg}"),
        }
    }
}

impl core::error::Error for LevelError {}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn i16_at(b: &[u8], at: usize) -> i16 {
    i16::from_le_bytes([b[at], b[at + 1]])
}

fn name_at(b: &[u8], at: usize) -> LumpName {
    let mut raw = [0u8; 8];
    raw.copy_from_slice(&b[at..at + 8]);
    LumpName(raw)
}

fn records<'a>(
    lump: &'static str,
    data: &'a [u8],
    size: usize,
) -> Result<core::slice::ChunksExact<'a, u8>, LevelError> {
    if data.len() % size != 0 {
        return Err(LevelError::BadLumpSize {
            lump,
            size: data.len(),
            record: size,
        });
    }
    Ok(data.chunks_exact(size))
}

fn check(
    lump: &'static str,
    record: usize,
    field: &'static str,
    value: usize,
    limit: usize,
) -> Result<(), LevelError> {
    if value >= limit {
        Err(LevelError::DanglingReference {
            lump,
            record,
            field,
            value,
            limit,
        })
    } else {
        Ok(())
    }
}

fn side_ref(raw: u16) -> Option<usize> {
    if raw == 0xFFFF {
        None
    } else {
        Some(raw as usize)
    }
}

fn child_ref(raw: u16) -> Child {
    if raw & NF_SUBSECTOR != 0 {
        Child::Subsector((raw & !NF_SUBSECTOR) as usize)
    } else {
        Child::Node(raw as usize)
    }
}

/// Locates the sub-lumps of `map_name` and decodes them.
pub fn load_level(archive: &WadArchive, map_name: &str) -> Result<LevelMap, LevelError> {
    let marker = archive
        .find(map_name)
        .ok_or_else(|| LevelError::MapNotFound(map_name.into()))?;
    let mut found: [Option<&[u8]>; 8] = [None; 8];
    for (i, entry) in archive.lumps().iter().enumerate().skip(marker + 1) {
        let Some(slot) = MAP_LUMPS.iter().position(|n| entry.name.matches(n)) else {
            if OPTIONAL_MAP_LUMPS.iter().any(|n| entry.name.matches(n)) {
                continue;
            }
            break;
        };
        if found[slot].is_some() {
            break;
        }
        found[slot] = archive.lump_at(i);
    }
    let mut lumps = [&[][..]; 8];
    for (slot, name) in MAP_LUMPS.iter().enumerate() {
        lumps[slot] = found[slot].ok_or(LevelError::MissingLump(name))?;
    }
    let [things, linedefs, sidedefs, vertexes, segs, ssectors, nodes, sectors] = lumps;
    decode_level(
        map_name, things, linedefs, sidedefs, vertexes, segs, ssectors, nodes, sectors,
    )
}

#[allow(clippy::too_many_arguments)]
fn decode_level(
    name: &str,
    things: &[u8],
    linedefs: &[u8],
    sidedefs: &[u8],
    vertexes: &[u8],
    segs: &[u8],
    ssectors: &[u8],
    nodes: &[u8],
    sectors: &[u8],
) -> Result<LevelMap, LevelError> {
    let vertices: Vec<Vertex> = records("VERTEXES", vertexes, 4)?
        .map(|r| Vertex {
            x: Fixed::from_int(i16_at(r, 0) as i32),
            y: Fixed::from_int(i16_at(r, 2) as i32),
        })
        .collect();

    let sectors: Vec<Sector> = records("SECTORS", sectors, 26)?
        .map(|r| Sector {
            floor: Fixed::from_int(i16_at(r, 0) as i32),
            ceiling: Fixed::from_int(i16_at(r, 2) as i32),
            floor_flat: name_at(r, 4),
            ceiling_flat: name_at(r, 12),
            light: i16_at(r, 20).clamp(0, 255) as u8,
            special: u16_at(r, 22),
            tag: u16_at(r, 24),
        })
        .collect();

    let sidedefs: Vec<Sidedef> = records("SIDEDEFS", sidedefs, 30)?
        .map(|r| Sidedef {
            x_offset: i16_at(r, 0),
            y_offset: i16_at(r, 2),
            upper: name_at(r, 4),
            lower: name_at(r, 12),
            middle: name_at(r, 20),
            sector: u16_at(r, 28) as usize,
        })
        .collect();

    let linedefs: Vec<Linedef> = records("LINEDEFS", linedefs, 14)?
        .map(|r| Linedef {
            v1: u16_at(r, 0) as usize,
            v2: u16_at(r, 2) as usize,
            flags: u16_at(r, 4),
            special: u16_at(r, 6),
            tag: u16_at(r, 8),
            front: side_ref(u16_at(r, 10)),
            back: side_ref(u16_at(r, 12)),
        })
        .collect();

    let segs: Vec<Seg> = records("SEGS", segs, 12)?
        .map(|r| Seg {
            v1: u16_at(r, 0) as usize,
            v2: u16_at(r, 2) as usize,
            angle: Angle((u16_at(r, 4) as u32) << 16),
            linedef: u16_at(r, 6) as usize,
            side: u16_at(r, 8).min(1) as u8,
            offset: Fixed::from_int(i16_at(r, 10) as i32),
        })
        .collect();

    let subsectors: Vec<Subsector> = records("SSECTORS", ssectors, 4)?
        .map(|r| Subsector {
            seg_count: u16_at(r, 0) as usize,
            first_seg: u16_at(r, 2) as usize,
        })
        .collect();

    let bbox = |r: &[u8], at: usize| BBox {
        top: Fixed::from_int(i16_at(r, at) as i32),
        bottom: Fixed::from_int(i16_at(r, at + 2) as i32),
        left: Fixed::from_int(i16_at(r, at + 4) as i32),
        right: Fixed::from_int(i16_at(r, at + 6) as i32),
    };
    let nodes: Vec<Node> = records("NODES", nodes, 28)?
        .map(|r| Node {
            x: Fixed::from_int(i16_at(r, 0) as i32),
            y: Fixed::from_int(i16_at(r, 2) as i32),
            dx: Fixed::from_int(i16_at(r, 4) as i32),
            dy: Fixed::from_int(i16_at(r, 6) as i32),
            bbox: [bbox(r, 8), bbox(r, 16)],
            children: [child_ref(u16_at(r, 24)), child_ref(u16_at(r, 26))],
        })
        .collect();

    let things: Vec<Thing> = records("THINGS", things, 10)?
        .enumerate()
        .map(|(i, r)| Thing {
            x: Fixed::from_int(i16_at(r, 0) as i32),
            y: Fixed::from_int(i16_at(r, 2) as i32),
            angle: i16_at(r, 4),
            doomed_type: u16_at(r, 6),
            flags: u16_at(r, 8),
            instance_id: i as u32,
        })
        .collect();

    let level = LevelMap {
        name: name.into(),
        vertices,
        linedefs,
        sidedefs,
        sectors,
        segs,
        subsectors,
        nodes,
        things,
    };
    level.validate()?;
    Ok(level)
}

impl LevelMap {
    /// Checks every cross-reference, sector heights and the BSP tree shape.
    pub fn validate(&self) -> Result<(), LevelError> {
        let nv = self.vertices.len();
        let ns = self.sidedefs.len();
        for (i, l) in self.linedefs.iter().enumerate() {
            check("LINEDEFS", i, "v1", l.v1, nv)?;
            check("LINEDEFS", i, "v2", l.v2, nv)?;
            match (l.front, l.back) {
                (Some(f), back) => {
                    check("LINEDEFS", i, "front sidedef", f, ns)?;
                    if let Some(b) = back {
                        check("LINEDEFS", i, "back sidedef", b, ns)?;
                    }
                }
                (None, _) => {
                    return Err(LevelError::DanglingReference {
                        lump: "LINEDEFS",
                        record: i,
                        field: "front sidedef",
                        value: 0xFFFF,
                        limit: ns,
                    })
                }
            }
        }
        for (i, s) in self.sidedefs.iter().enumerate() {
            check("SIDEDEFS", i, "sector", s.sector, self.sectors.len())?;
        }
        for (i, s) in self.sectors.iter().enumerate() {
            if s.ceiling < s.floor {
                return Err(LevelError::InvertedSector { sector: i });
            }
        }
        for (i, s) in self.segs.iter().enumerate() {
            check("SEGS", i, "v1", s.v1, nv)?;
            check("SEGS", i, "v2", s.v2, nv)?;
            check("SEGS", i, "linedef", s.linedef, self.linedefs.len())?;
            let line = &self.linedefs[s.linedef];
            if s.side == 1 && line.back.is_none() {
                return Err(LevelError::DanglingReference {
                    lump: "SEGS",
                    record: i,
                    field: "back side",
                    value: 1,
                    limit: 1,
                });
            }
        }
        for (i, ss) in self.subsectors.iter().enumerate() {
            if ss.seg_count == 0 {
                return Err(LevelError::EmptySubsector { subsector: i });
            }
            check(
                "SSECTORS",
                i,
                "last seg",
                ss.first_seg + ss.seg_count - 1,
                self.segs.len(),
            )?;
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for (c, child) in n.children.iter().enumerate() {
                let field = if c == 0 { "right child" } else { "left child" };
                match *child {
                    Child::Node(k) => check("NODES", i, field, k, self.nodes.len())?,
                    Child::Subsector(k) => check("NODES", i, field, k, self.subsectors.len())?,
                }
            }
        }
        self.check_bsp()
    }

    fn check_bsp(&self) -> Result<(), LevelError> {
        if self.subsectors.is_empty() {
            return Err(LevelError::BadBspTree("no subsectors".into()));
        }
        if self.nodes.is_empty() {
            if self.subsectors.len() != 1 {
                return Err(LevelError::BadBspTree(alloc::format!(
                    "no nodes but {} subsectors",
                    self.subsectors.len()
                )));
            }
            return Ok(());
        }
        let mut node_seen = vec![false; self.nodes.len()];
        let mut leaf_seen = vec![false; self.subsectors.len()];
        let mut stack = vec![self.root().unwrap()];
        while let Some(child) = stack.pop() {
            match child {
                Child::Node(k) => {
                    if core::mem::replace(&mut node_seen[k], true) {
                        return Err(LevelError::BadBspTree(alloc::format!(
                            "node {k} reached twice"
                        )));
                    }
                    stack.extend(self.nodes[k].children);
                }
                Child::Subsector(k) => {
                    if core::mem::replace(&mut leaf_seen[k], true) {
                        return Err(LevelError::BadBspTree(alloc::format!(
                            "subsector {k} reached twice"
                        )));
                    }
                }
            }
        }
        if let Some(k) = leaf_seen.iter().position(|s| !s) {
            return Err(LevelError::BadBspTree(alloc::format!(
                "subsector {k} unreachable"
            )));
        }
        Ok(())
    }

    /// Root of the BSP: the last node, or subsector 0 for node-less maps.
    pub fn root(&self) -> Option<Child> {
        if self.subsectors.is_empty() {
            None
        } else if self.nodes.is_empty() {
            Some(Child::Subsector(0))
        } else {
            Some(Child::Node(self.nodes.len() - 1))
        }
    }

    pub fn seg_sidedef(&self, seg: &Seg) -> &Sidedef {
        let line = &self.linedefs[seg.linedef];
        let side = if seg.side == 0 { line.front } else { line.back };
        &self.sidedefs[side.expect("validated seg side")]
    }

    /// Sector on the far side of a seg, if its linedef is two-sided.
    pub fn seg_back_sector(&self, seg: &Seg) -> Option<usize> {
        let line = &self.linedefs[seg.linedef];
        let other = if seg.side == 0 { line.back } else { line.front };
        other.map(|s| self.sidedefs[s].sector)
    }

    pub fn subsector_segs(&self, subsector: usize) -> &[Seg] {
        let ss = &self.subsectors[subsector];
        &self.segs[ss.first_seg..ss.first_seg + ss.seg_count]
    }

    pub fn subsector_sector(&self, subsector: usize) -> usize {
        let seg = &self.segs[self.subsectors[subsector].first_seg];
        self.seg_sidedef(seg).sector
    }

    /// Subsector ids in the order a depth-first walk from the root reaches
    /// them, right child first.
    pub fn walk_subsectors(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.subsectors.len());
        let mut stack: Vec<Child> = self.root().into_iter().collect();
        while let Some(c) = stack.pop() {
            match c {
                Child::Subsector(k) => out.push(k),
                Child::Node(k) => {
                    let n = &self.nodes[k];
                    stack.push(n.children[1]);
                    stack.push(n.children[0]);
                }
            }
        }
        out
    }

    /// Bounding box of all vertices.
    pub fn bounds(&self) -> Option<BBox> {
        let first = self.vertices.first()?;
        let mut b = BBox {
            top: first.y,
            bottom: first.y,
            left: first.x,
            right: first.x,
        };
        for v in &self.vertices {
            b.top = b.top.max(v.y);
            b.bottom = b.bottom.min(v.y);
            b.left = b.left.min(v.x);
            b.right = b.right.max(v.x);
        }
        Some(b)
    }
}

/// Names of all map markers in the archive, in directory order
/// (ExMy and MAPxx forms, each listed once).
pub fn map_names(archive: &WadArchive) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for (i, entry) in archive.lumps().iter().enumerate() {
        let name = entry.name.as_str();
        if !is_map_name(&name) {
            continue;
        }
        let next = archive.lumps().get(i + 1);
        if next.is_some_and(|n| n.name.matches("THINGS")) && !out.contains(&name) {
            out.push(name);
        }
    }
    out
}

/// `ExMy` or `MAPxx`.
pub fn is_map_name(name: &str) -> bool {
    let b = name.as_bytes();
    let classic = b.len() == 4
        && b[0] == b'E'
        && b[2] == b'M'
        && b[1].is_ascii_digit()
        && b[3].is_ascii_digit();
    let doom2 =
        b.len() == 5 && name.starts_with("MAP") && b[3].is_ascii_digit() && b[4].is_ascii_digit();
    classic || doom2
}
