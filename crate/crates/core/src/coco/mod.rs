//! Turning label images into Coco object annotations.
//!
//! The rules: one annotation per instance visible in a frame, outlined by
//! pixel-edge polygons; instances under `min_area` pixels are dropped;
//! only every `frame_stride`-th frame of each (run, map) is kept;
//! categories seen in fewer than `min_category_images` training images are
//! removed everywhere; frames are split by run or by episode.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use core::fmt;

use crate::things::THING_TYPES;

mod dataset;
mod instances;
mod polygon;
mod rules;

pub use dataset::{
    assemble, filter_categories, Annotation, Category, CocoDataset, FrameAnnotations, Image, Info,
    License, SplitDatasets,
};
pub use instances::{extract_instances, InstanceObservation, LabelImage, Mask};
pub use polygon::trace_polygons;
pub use rules::{
    assign_split, assign_splits, filter_small, subsample_frames, FrameKey, Split, SplitMode,
};

pub const DEFAULT_MIN_AREA: u64 = 30;
pub const DEFAULT_FRAME_STRIDE: usize = 5;
pub const DEFAULT_MIN_CATEGORY_IMAGES: usize = 100;
pub const UNKNOWN_CATEGORY: &str = "unknown";
pub const SUPERCATEGORY: &str = "doom";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocoError {
    UnknownInstance { instance_id: u32 },
    UnmappedImage { run: u32, map: String },
    Table { line: usize, message: String },
}

impl fmt::Display for CocoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocoError::UnknownInstance { instance_id } => {
                write!(f, "instance {instance_id} has no spawn record")
            }
            CocoError::UnmappedImage { run, map } => {
                write!(
                    f,
                    "frame of run {run}, map {map} has no split under the chosen mode"
                )
            }
            CocoError::Table { line, message } => write!(f, "table line {line}: {message}"),
        }
    }
}

impl core::error::Error for CocoError {}

/// DoomEd thing type to category name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryTable(pub BTreeMap<u16, String>);

impl Default for CategoryTable {
    fn default() -> Self {
        CategoryTable(
            THING_TYPES
                .iter()
                .map(|t| (t.doomed_type, t.name.to_string()))
                .collect(),
        )
    }
}

impl CategoryTable {
    pub fn get(&self, doomed_type: u16) -> Option<&str> {
        self.0.get(&doomed_type).map(String::as_str)
    }

    /// Parses lines of `<doomed_type> <category_name>`; `#` comments.
    pub fn parse(text: &str) -> Result<CategoryTable, CocoError> {
        let mut map = BTreeMap::new();
        for (i, a, b) in table_rows(text)? {
            let ty = a.parse::<u16>().map_err(|_| CocoError::Table {
                line: i,
                message: "bad thing type".into(),
            })?;
            map.insert(ty, b.to_string());
        }
        Ok(CategoryTable(map))
    }
}

fn table_rows(text: &str) -> Result<alloc::vec::Vec<(usize, &str, &str)>, CocoError> {
    let mut out = alloc::vec::Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut it = body.split_whitespace();
        match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => out.push((i + 1, a, b)),
            _ => {
                return Err(CocoError::Table {
                    line: i + 1,
                    message: "expected two fields".into(),
                })
            }
        }
    }
    Ok(out)
}

/// Map name to episode 1..=4.
///
/// `ExMy` maps to episode `x`. `MAPxx` maps by eight-map blocks
/// (01–08, 09–16, 17–24, 25–32). Explicit overrides win.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EpisodeMap {
    pub overrides: BTreeMap<String, u8>,
}

impl EpisodeMap {
    pub fn episode(&self, map: &str) -> Option<u8> {
        if let Some(&e) = self.overrides.get(map) {
            return Some(e);
        }
        let b = map.as_bytes();
        if b.len() == 4 && b[0] == b'E' && b[2] == b'M' && b[1].is_ascii_digit() {
            return Some(b[1] - b'0');
        }
        let n: u32 = map.strip_prefix("MAP")?.parse().ok()?;
        match n {
            1..=32 => Some(((n - 1) / 8 + 1) as u8),
            _ => None,
        }
    }

    /// Parses lines of `<map> <episode>`.
    pub fn parse(text: &str) -> Result<EpisodeMap, CocoError> {
        let mut overrides = BTreeMap::new();
        for (i, a, b) in table_rows(text)? {
            let e = b.parse::<u8>().map_err(|_| CocoError::Table {
                line: i,
                message: "bad episode".into(),
            })?;
            overrides.insert(a.to_string(), e);
        }
        Ok(EpisodeMap { overrides })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExportConfig {
    pub min_area: u64,
    /// Keep every n-th frame; 5 gives the standard subset, 1 the full one.
    pub frame_stride: usize,
    pub min_category_images: usize,
    pub split: SplitMode,
    pub episodes: EpisodeMap,
    /// Renames categories by thing type; `None` keeps the names recorded
    /// in the session logs.
    pub category_table: Option<CategoryTable>,
}

impl Default for ExportConfig {
    fn default() -> Self {
        ExportConfig {
            min_area: DEFAULT_MIN_AREA,
            frame_stride: DEFAULT_FRAME_STRIDE,
            min_category_images: DEFAULT_MIN_CATEGORY_IMAGES,
            split: SplitMode::Run,
            episodes: EpisodeMap::default(),
            category_table: None,
        }
    }
}
