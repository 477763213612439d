//! Running an extraction session: one rendered frame triple and one pose
//! record per track sample.
//!
//! Output layout:
//!
//! ```text
//! <out>/log.txt
//! <out>/rgb/000035.png
//! <out>/depth/000035.png
//! <out>/objects/000035.png
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use doomsight_core::coco::{CategoryTable, EpisodeMap, UNKNOWN_CATEGORY};
use doomsight_core::gfx::Resources;
use doomsight_core::render::{render_frame, RenderConfig};
use doomsight_core::session::{format_event, FrameTriple, PoseSample, PoseTrack, SessionEvent};
use doomsight_core::{load_level, WadArchive};
use rayon::prelude::*;

use crate::{io_err, pngio, Error, Result};

pub const LOG_FILE: &str = "log.txt";
pub const IMAGE_DIRS: [&str; 3] = ["rgb", "depth", "objects"];

/// `000035.png` for tic 35.
pub fn frame_file_name(tic: u32) -> String {
    format!("{tic:06}.png")
}

#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub out_dir: PathBuf,
    pub map_name: String,
    pub render: RenderConfig,
    /// Playthrough ordinal; the export manifest refers to sessions by it.
    pub run_id: u32,
    pub categories: CategoryTable,
    pub episodes: EpisodeMap,
}

impl SessionConfig {
    pub fn new(out_dir: impl Into<PathBuf>, map_name: &str) -> SessionConfig {
        SessionConfig {
            out_dir: out_dir.into(),
            map_name: map_name.to_string(),
            render: RenderConfig::default(),
            run_id: 1,
            categories: CategoryTable::default(),
            episodes: EpisodeMap::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SessionSummary {
    pub frames_written: usize,
    pub warnings: Vec<String>,
}

struct Encoded {
    rgb: Vec<u8>,
    depth: Vec<u8>,
    objects: Vec<u8>,
    missing: BTreeSet<String>,
}

fn png_err(path: &Path, e: png::EncodingError) -> Error {
    Error::Png {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Renders every sample of `track` and writes the session tree.
///
/// Frames are rendered on the current rayon pool; files and log records
/// are written by this thread in tic order, so the output does not depend
/// on the number of workers.
pub fn run_session(
    archive: &WadArchive,
    cfg: &SessionConfig,
    track: &PoseTrack,
) -> Result<SessionSummary> {
    cfg.render.validate()?;
    let level = load_level(archive, &cfg.map_name)?;
    if cfg.episodes.episode(&level.name).is_none() {
        return Err(Error::UnmappedMap(level.name.clone()));
    }
    let res = Resources::load(archive)?;

    let out = &cfg.out_dir;
    for d in IMAGE_DIRS {
        let p = out.join(d);
        fs::create_dir_all(&p).map_err(io_err(&p))?;
    }
    let log_path = out.join(LOG_FILE);
    let file = fs::File::create(&log_path).map_err(io_err(&log_path))?;
    let mut log = BufWriter::new(file);
    let mut summary = SessionSummary::default();
    let emit = |log: &mut BufWriter<fs::File>, e: SessionEvent| -> Result<()> {
        log.write_all(format_event(&e).as_bytes())
            .map_err(io_err(&log_path))
    };

    let first_tic = track.samples()[0].tic;
    emit(
        &mut log,
        SessionEvent::MapStart {
            name: level.name.clone(),
        },
    )?;
    let mut spawn_warnings = Vec::new();
    for t in &level.things {
        let category = match cfg.categories.get(t.doomed_type) {
            Some(c) => c.to_string(),
            None => {
                spawn_warnings.push(format!(
                    "unknown thing type {} for instance {}",
                    t.doomed_type, t.instance_id
                ));
                UNKNOWN_CATEGORY.to_string()
            }
        };
        emit(
            &mut log,
            SessionEvent::Spawn {
                instance_id: t.instance_id,
                doomed_type: t.doomed_type,
                category,
                x: t.x.to_f64(),
                y: t.y.to_f64(),
            },
        )?;
    }
    for message in spawn_warnings {
        emit(
            &mut log,
            SessionEvent::Warn {
                tic: first_tic,
                message: message.clone(),
            },
        )?;
        summary.warnings.push(message);
    }

    let batch = (rayon::current_num_threads() * 2).max(1);
    let mut reported: BTreeSet<String> = BTreeSet::new();
    for chunk in track.samples().chunks(batch) {
        let encoded: Vec<Result<Encoded>> = chunk
            .par_iter()
            .map(|s| {
                let frame = render_frame(&level, &level.things, &s.camera(), &cfg.render, &res)?;
                let triple = FrameTriple::encode(&frame, &cfg.render)?;
                let name = out.join(frame_file_name(s.tic));
                let (w, h) = (triple.width, triple.height);
                Ok(Encoded {
                    rgb: pngio::encode_rgb(w, h, &triple.rgb).map_err(|e| png_err(&name, e))?,
                    depth: pngio::encode_gray16(w, h, &triple.depth)
                        .map_err(|e| png_err(&name, e))?,
                    objects: pngio::encode_gray16(w, h, &triple.objects)
                        .map_err(|e| png_err(&name, e))?,
                    missing: frame.missing,
                })
            })
            .collect();
        for (sample, enc) in chunk.iter().zip(encoded) {
            let enc = enc?;
            write_triple(out, sample, &enc)?;
            emit(&mut log, SessionEvent::Pose(*sample))?;
            for m in enc.missing {
                if reported.insert(m.clone()) {
                    let message = format!("missing {m}");
                    emit(
                        &mut log,
                        SessionEvent::Warn {
                            tic: sample.tic,
                            message: message.clone(),
                        },
                    )?;
                    summary.warnings.push(message);
                }
            }
            summary.frames_written += 1;
        }
    }
    log.flush().map_err(io_err(&log_path))?;
    Ok(summary)
}

fn write_triple(out: &Path, sample: &PoseSample, enc: &Encoded) -> Result<()> {
    let name = frame_file_name(sample.tic);
    for (dir, bytes) in IMAGE_DIRS.iter().zip([&enc.rgb, &enc.depth, &enc.objects]) {
        let p = out.join(dir).join(&name);
        fs::write(&p, bytes).map_err(io_err(&p))?;
    }
    Ok(())
}
