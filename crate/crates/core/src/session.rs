//! Text formats and pixel encodings of an extraction session.
//!
//! Pose script (`track.txt`), one sample per line:
//!
//! ```text
//! # tic  x      y     z    yaw
//! 0      1056  -3616  41   90
//! ```
//!
//! Event log (`log.txt`), one record per line:
//!
//! ```text
//! map MAP01
//! spawn 7 3004 possessed 96.000 -32.000
//! tic 35 pose 0.000 0.000 41.000 90.000
//! warn 35 missing texture FOO
//! ```

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::fixed::fmt_milli;
use crate::render::{Camera, LabelId, RenderConfig};

/// Simulation steps per second.
pub const TICRATE: u32 = 35;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoseSample {
    pub tic: u32,
    pub x: f64,
    pub y: f64,
    /// Absolute eye height.
    pub z: f64,
    pub yaw: f64,
}

impl PoseSample {
    pub fn camera(&self) -> Camera {
        Camera::new(self.x, self.y, self.z, self.yaw)
    }

    /// The sample as it reads back from the log: every field rounded to
    /// thousandths.
    pub fn quantized(&self) -> PoseSample {
        let q = |v: f64| to_milli(v) as f64 / 1000.0;
        PoseSample {
            tic: self.tic,
            x: q(self.x),
            y: q(self.y),
            z: q(self.z),
            yaw: q(self.yaw),
        }
    }

    /// Seconds since tic 0.
    pub fn seconds(&self) -> f64 {
        self.tic as f64 / TICRATE as f64
    }
}

fn to_milli(v: f64) -> i64 {
    libm::round(v * 1000.0) as i64
}

/// Camera path: at least one sample, tics strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct PoseTrack {
    samples: Vec<PoseSample>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrackError {
    Syntax { line: usize, message: String },
    NonMonotonicTic { line: usize, tic: u32 },
    EmptyTrack,
}

impl fmt::Display for TrackError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrackError::Syntax { line, message } => write!(f, "line {line}: {message}"),
            TrackError::NonMonotonicTic { line, tic } => {
                write!(f, "line {line}: tic {tic} does not increase")
            }
            TrackError::EmptyTrack => f.write_str("track has no samples"),
        }
    }
}

impl core::error::Error for TrackError {}

impl PoseTrack {
    pub fn new(samples: Vec<PoseSample>) -> Result<PoseTrack, TrackError> {
        if samples.is_empty() {
            return Err(TrackError::EmptyTrack);
        }
        if let Some(i) = samples.windows(2).position(|w| w[1].tic <= w[0].tic) {
            return Err(TrackError::NonMonotonicTic {
                line: i + 2,
                tic: samples[i + 1].tic,
            });
        }
        Ok(PoseTrack { samples })
    }

    pub fn samples(&self) -> &[PoseSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Parses a pose script. `#` starts a comment; blank lines are skipped.
pub fn parse_pose_script(text: &str) -> Result<PoseTrack, TrackError> {
    let mut samples: Vec<PoseSample> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(TrackError::Syntax {
                line,
                message: alloc::format!("expected 5 fields, found {}", fields.len()),
            });
        }
        let tic: u32 = fields[0].parse().map_err(|_| TrackError::Syntax {
            line,
            message: alloc::format!("bad tic {:?}", fields[0]),
        })?;
        let mut nums = [0.0f64; 4];
        for (slot, field) in nums.iter_mut().zip(&fields[1..]) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| TrackError::Syntax {
                    line,
                    message: alloc::format!("bad number {field:?}"),
                })?;
        }
        if let Some(prev) = samples.last() {
            if tic <= prev.tic {
                return Err(TrackError::NonMonotonicTic { line, tic });
            }
        }
        samples.push(PoseSample {
            tic,
            x: nums[0],
            y: nums[1],
            z: nums[2],
            yaw: nums[3],
        });
    }
    PoseTrack::new(samples)
}

/// One record of the session log.
#[derive(Clone, Debug, PartialEq)]
pub enum SessionEvent {
    MapStart {
        name: String,
    },
    Spawn {
        instance_id: u32,
        doomed_type: u16,
        category: String,
        x: f64,
        y: f64,
    },
    Pose(PoseSample),
    Warn {
        tic: u32,
        message: String,
    },
}

/// Formats a record as one newline-terminated log line.
pub fn format_event(event: &SessionEvent) -> String {
    let mut s = String::new();
    let w = &mut s;
    // Writing into a String cannot fail.
    let _ = match event {
        SessionEvent::MapStart { name } => write!(w, "map {name}"),
        SessionEvent::Spawn {
            instance_id,
            doomed_type,
            category,
            x,
            y,
        } => {
            let _ = write!(w, "spawn {instance_id} {doomed_type} {category} ");
            let _ = fmt_milli(w, to_milli(*x));
            let _ = w.write_char(' ');
            fmt_milli(w, to_milli(*y))
        }
        SessionEvent::Pose(p) => {
            let _ = write!(w, "tic {} pose", p.tic);
            for v in [p.x, p.y, p.z, p.yaw] {
                let _ = w.write_char(' ');
                let _ = fmt_milli(w, to_milli(v));
            }
            Ok(())
        }
        SessionEvent::Warn { tic, message } => {
            write!(w, "warn {tic} {}", message.replace(['\n', '\r'], " "))
        }
    };
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "log line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for LogError {}

/// Spawn record as read back from a log.
#[derive(Clone, Debug, PartialEq)]
pub struct SpawnRecord {
    pub instance_id: u32,
    pub doomed_type: u16,
    pub category: String,
    pub x: f64,
    pub y: f64,
}

/// A parsed session log.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SessionLog {
    pub map: String,
    pub spawns: Vec<SpawnRecord>,
    pub poses: Vec<PoseSample>,
    pub warnings: Vec<(u32, String)>,
}

impl SessionLog {
    /// Instance id to category name.
    pub fn categories(&self) -> BTreeMap<u32, String> {
        self.spawns
            .iter()
            .map(|s| (s.instance_id, s.category.clone()))
            .collect()
    }

    pub fn track(&self) -> Result<PoseTrack, TrackError> {
        PoseTrack::new(self.poses.clone())
    }
}

pub fn parse_log(text: &str) -> Result<SessionLog, LogError> {
    let mut log = SessionLog::default();
    let mut seen_map = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: &str| LogError {
            line,
            message: message.to_string(),
        };
        if raw.is_empty() {
            continue;
        }
        let f: Vec<&str> = raw.split(' ').collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| err("bad number"));
        match f[0] {
            "map" if f.len() == 2 => {
                if seen_map {
                    return Err(err("second map record"));
                }
                seen_map = true;
                log.map = f[1].to_string();
            }
            "spawn" if f.len() == 6 => {
                if !log.poses.is_empty() {
                    return Err(err("spawn after first pose"));
                }
                log.spawns.push(SpawnRecord {
                    instance_id: f[1].parse().map_err(|_| err("bad instance id"))?,
                    doomed_type: f[2].parse().map_err(|_| err("bad thing type"))?,
                    category: f[3].to_string(),
                    x: num(f[4])?,
                    y: num(f[5])?,
                });
            }
            "tic" if f.len() == 7 && f[2] == "pose" => {
                log.poses.push(PoseSample {
                    tic: f[1].parse().map_err(|_| err("bad tic"))?,
                    x: num(f[3])?,
                    y: num(f[4])?,
                    z: num(f[5])?,
                    yaw: num(f[6])?,
                });
            }
            "warn" if f.len() >= 3 => {
                let tic = f[1].parse().map_err(|_| err("bad tic"))?;
                let message = raw.splitn(3, ' ').nth(2).unwrap_or("").to_string();
                log.warnings.push((tic, message));
            }
            _ => return Err(err("unrecognized record")),
        }
    }
    if !seen_map {
        return Err(LogError {
            line: 0,
            message: "no map record".into(),
        });
    }
    Ok(log)
}

/// Quantizes depths: `round(depth × scale)` clamped to `[0, 65534]`;
/// infinite depth (sky) becomes 65535.
pub fn encode_depth(depth: &[f64], depth_scale: f64) -> Vec<u16> {
    depth
        .iter()
        .map(|&d| {
            if d == f64::INFINITY {
                u16::MAX
            } else {
                libm::round(d * depth_scale).clamp(0.0, (u16::MAX - 1) as f64) as u16
            }
        })
        .collect()
}

/// Highest instance id whose label still fits a 16-bit pixel.
pub const MAX_INSTANCE_ID: u32 = u16::MAX as u32 - LabelId::FIRST_INSTANCE;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TooManyInstances {
    pub instance_id: u32,
}

impl fmt::Display for TooManyInstances {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "instance id {} exceeds {MAX_INSTANCE_ID}",
            self.instance_id
        )
    }
}

impl core::error::Error for TooManyInstances {}

/// Label plane to 16-bit pixels, value for value.
pub fn encode_labels(labels: &[LabelId]) -> Result<Vec<u16>, TooManyInstances> {
    labels
        .iter()
        .map(|l| {
            u16::try_from(l.0).map_err(|_| TooManyInstances {
                instance_id: l.0 - LabelId::FIRST_INSTANCE,
            })
        })
        .collect()
}

/// The three per-tic images, ready for PNG encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameTriple {
    pub width: u32,
    pub height: u32,
    /// Packed 8-bit RGB.
    pub rgb: Vec<u8>,
    pub depth: Vec<u16>,
    pub objects: Vec<u16>,
}

impl FrameTriple {
    pub fn encode(
        frame: &crate::render::FrameBuffers,
        cfg: &RenderConfig,
    ) -> Result<FrameTriple, TooManyInstances> {
        Ok(FrameTriple {
            width: frame.width,
            height: frame.height,
            rgb: frame.color.iter().flatten().copied().collect(),
            depth: encode_depth(&frame.depth, cfg.depth_scale),
            objects: encode_labels(&frame.label)?,
        })
    }
}
