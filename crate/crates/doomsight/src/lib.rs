//! File-system side of doomsight: extraction sessions that write PNG
//! frame triples and event logs, Coco export of session trees, dataset
//! validation, and the `doomsight` command line.

pub mod cli;
pub mod export;
pub mod pngio;
pub mod session;
pub mod validate;

use std::path::PathBuf;

pub use doomsight_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Wad(#[from] doomsight_core::wad::WadError),
    #[error(transparent)]
    Level(#[from] doomsight_core::level::LevelError),
    #[error(transparent)]
    Gfx(#[from] doomsight_core::gfx::GfxError),
    #[error(transparent)]
    Render(#[from] doomsight_core::render::RenderError),
    #[error(transparent)]
    Track(#[from] doomsight_core::session::TrackError),
    #[error("{}: {source}", path.display())]
    Log {
        path: PathBuf,
        #[source]
        source: doomsight_core::session::LogError,
    },
    #[error(transparent)]
    Labels(#[from] doomsight_core::session::TooManyInstances),
    #[error(transparent)]
    Coco(#[from] doomsight_core::coco::CocoError),
    #[error("{}: {message}", path.display())]
    Png { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("map {0} has no episode number")]
    UnmappedMap(String),
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("manifest lists no sessions")]
    EmptyManifest,
    #[error("missing sessions: {}", .0.join(", "))]
    MissingSessions(Vec<String>),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
