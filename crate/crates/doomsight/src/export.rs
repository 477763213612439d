//! Coco export of rendered session trees.
//!
//! The manifest lists one session per line as `run <n> <session_dir>`;
//! relative directories are resolved against the manifest's own
//! directory and recorded as written in each image's `file_name`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use doomsight_core::coco::{
    assemble, extract_instances, subsample_frames, CocoDataset, ExportConfig, FrameAnnotations,
    FrameKey, LabelImage, Split, SplitDatasets,
};
use doomsight_core::session::parse_log;
use rayon::prelude::*;

use crate::session::{frame_file_name, LOG_FILE};
use crate::{io_err, pngio, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub run: u32,
    /// The directory as written in the manifest.
    pub path: String,
    pub dir: PathBuf,
}

pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: &str| Error::Manifest {
            line: i + 1,
            message: message.to_string(),
        };
        let f: Vec<&str> = body.split_whitespace().collect();
        if f.len() != 3 || f[0] != "run" {
            return Err(err("expected `run <n> <session_dir>`"));
        }
        let run = f[1].parse().map_err(|_| err("bad run number"))?;
        out.push(ManifestEntry {
            run,
            path: f[2].to_string(),
            dir: base.join(f[2]),
        });
    }
    if out.is_empty() {
        return Err(Error::EmptyManifest);
    }
    Ok(out)
}

pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_manifest(&text, path.parent().unwrap_or(Path::new("")))
}

struct FrameRef {
    run: u32,
    map: String,
    tic: u32,
    session: usize,
}

impl FrameKey for FrameRef {
    fn run(&self) -> u32 {
        self.run
    }
    fn map(&self) -> &str {
        &self.map
    }
    fn tic(&self) -> u32 {
        self.tic
    }
}

/// Reads every listed session and builds the split datasets.
pub fn build_datasets(entries: &[ManifestEntry], cfg: &ExportConfig) -> Result<SplitDatasets> {
    let missing: Vec<String> = entries
        .iter()
        .filter(|e| !e.dir.join(LOG_FILE).is_file())
        .map(|e| e.path.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingSessions(missing));
    }

    let mut spawn_tables = Vec::with_capacity(entries.len());
    let mut refs = Vec::new();
    for (session, e) in entries.iter().enumerate() {
        let log_path = e.dir.join(LOG_FILE);
        let text = fs::read_to_string(&log_path).map_err(io_err(&log_path))?;
        let log = parse_log(&text).map_err(|source| Error::Log {
            path: log_path.clone(),
            source,
        })?;
        let table: BTreeMap<u32, String> = log
            .spawns
            .iter()
            .map(|s| {
                let renamed = cfg
                    .category_table
                    .as_ref()
                    .and_then(|t| t.get(s.doomed_type));
                (s.instance_id, renamed.unwrap_or(&s.category).to_string())
            })
            .collect();
        spawn_tables.push(table);
        refs.extend(log.poses.iter().map(|p| FrameRef {
            run: e.run,
            map: log.map.clone(),
            tic: p.tic,
            session,
        }));
    }

    let kept = subsample_frames(refs, cfg.frame_stride);
    let frames: Vec<Result<FrameAnnotations>> = kept
        .par_iter()
        .map(|f| {
            let e = &entries[f.session];
            let name = frame_file_name(f.tic);
            let path = e.dir.join("objects").join(&name);
            let bytes = fs::read(&path).map_err(io_err(&path))?;
            let img = pngio::decode_gray16(&bytes).map_err(|message| Error::Png {
                path: path.clone(),
                message,
            })?;
            let label = LabelImage {
                width: img.width,
                height: img.height,
                pixels: &img.samples,
            };
            let instances = extract_instances(&label, &spawn_tables[f.session])?;
            Ok(FrameAnnotations {
                run: f.run,
                map: f.map.clone(),
                tic: f.tic,
                file_name: format!("{}/rgb/{name}", e.path.trim_end_matches('/')),
                width: img.width,
                height: img.height,
                instances,
            })
        })
        .collect();
    let frames = frames.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(assemble(frames, cfg)?)
}

/// Canonical JSON: fixed key order, arrays in id order, shortest
/// round-trip floats, trailing newline.
pub fn emit_json(dataset: &CocoDataset) -> Vec<u8> {
    let mut bytes = serde_json::to_vec(dataset).expect("dataset serializes");
    bytes.push(b'\n');
    bytes
}

pub fn dataset_file_name(split: Split) -> String {
    format!("instances_{}.json", split.name())
}

/// Per split sizes and, per category, the number of distinct images it
/// annotates in each split.
pub fn stats_report(sets: &SplitDatasets) -> String {
    let mut s = String::new();
    for split in Split::ALL {
        let ds = sets.get(split);
        let _ = writeln!(
            s,
            "split {} images {} annotations {}",
            split.name(),
            ds.images.len(),
            ds.annotations.len()
        );
    }
    for c in &sets.train.categories {
        let _ = write!(s, "category {} {}", c.id, c.name);
        for split in Split::ALL {
            let images: BTreeSet<u64> = sets
                .get(split)
                .annotations
                .iter()
                .filter(|a| a.category_id == c.id)
                .map(|a| a.image_id)
                .collect();
            let _ = write!(s, " {} {}", split.name(), images.len());
        }
        s.push('\n');
    }
    s
}

/// Writes `instances_{train,val,test}.json` and `stats.txt` into `out`.
pub fn write_datasets(out: &Path, sets: &SplitDatasets) -> Result<()> {
    fs::create_dir_all(out).map_err(io_err(out))?;
    for split in Split::ALL {
        let p = out.join(dataset_file_name(split));
        fs::write(&p, emit_json(sets.get(split))).map_err(io_err(&p))?;
    }
    let p = out.join("stats.txt");
    fs::write(&p, stats_report(sets)).map_err(io_err(&p))
}
