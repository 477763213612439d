//! Core of doomsight: WAD archive parsing, level geometry, a deterministic
//! BSP software renderer producing color, depth and label planes, the
//! session text formats, and the rules that turn label images into Coco
//! object datasets.
//!
//! The crate is `no_std` and only needs `alloc`. File IO, PNG and JSON live
//! in the `doomsight` companion crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod coco;
pub mod fixed;
pub mod gfx;
pub mod level;
pub mod render;
pub mod session;
pub mod things;
pub mod wad;

pub use fixed::{Angle, Fixed};
pub use level::{load_level, LevelMap, Thing};
pub use wad::{LumpName, WadArchive, WadKind};
