use alloc::string::ToString;
use alloc::vec::Vec;

use super::{CocoError, EpisodeMap, InstanceObservation};

/// Drops observations with fewer than `min_area` pixels.
pub fn filter_small(
    observations: Vec<InstanceObservation>,
    min_area: u64,
) -> Vec<InstanceObservation> {
    observations
        .into_iter()
        .filter(|o| o.area >= min_area)
        .collect()
}

/// Identifies a frame within the corpus.
pub trait FrameKey {
    fn run(&self) -> u32;
    fn map(&self) -> &str;
    fn tic(&self) -> u32;
}

/// Keeps frames whose index within their (run, map) group is a multiple
/// of `stride`, counting from 0 in tic order. Output is sorted by
/// (run, map, tic). A stride of 0 behaves like 1.
pub fn subsample_frames<T: FrameKey>(mut frames: Vec<T>, stride: usize) -> Vec<T> {
    let stride = stride.max(1);
    frames.sort_by(|a, b| (a.run(), a.map(), a.tic()).cmp(&(b.run(), b.map(), b.tic())));
    let mut out = Vec::with_capacity(frames.len() / stride + 1);
    let mut index = 0usize;
    let mut group: Option<(u32, alloc::string::String)> = None;
    for f in frames {
        let same = matches!(&group, Some((r, m)) if *r == f.run() && m == f.map());
        if !same {
            group = Some((f.run(), f.map().to_string()));
            index = 0;
        }
        if index % stride == 0 {
            out.push(f);
        }
        index += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitMode {
    /// Run 1 trains, run 2 validates, run 3 tests.
    Run,
    /// Episodes 1 and 2 train, 3 validates, 4 tests.
    Episode,
}

pub fn assign_split(
    mode: SplitMode,
    run: u32,
    map: &str,
    episodes: &EpisodeMap,
) -> Result<Split, CocoError> {
    let split = match mode {
        SplitMode::Run => match run {
            1 => Some(Split::Train),
            2 => Some(Split::Val),
            3 => Some(Split::Test),
            _ => None,
        },
        SplitMode::Episode => match episodes.episode(map) {
            Some(1 | 2) => Some(Split::Train),
            Some(3) => Some(Split::Val),
            Some(4) => Some(Split::Test),
            _ => None,
        },
    };
    split.ok_or_else(|| CocoError::UnmappedImage {
        run,
        map: map.to_string(),
    })
}

pub fn assign_splits<T: FrameKey>(
    frames: &[T],
    mode: SplitMode,
    episodes: &EpisodeMap,
) -> Result<Vec<Split>, CocoError> {
    frames
        .iter()
        .map(|f| assign_split(mode, f.run(), f.map(), episodes))
        .collect()
}
