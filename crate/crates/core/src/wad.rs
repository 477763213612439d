//! WAD container parsing.
//!
//! Layout: a 12-byte header (`IWAD`/`PWAD` magic, little-endian `i32` lump
//! count, `i32` directory offset) and a directory of 16-byte entries
//! (`i32` offset, `i32` size, 8-byte NUL-padded name).

use alloc::vec::Vec;
use core::fmt;

pub const HEADER_SIZE: usize = 12;
pub const DIR_ENTRY_SIZE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WadKind {
    Iwad,
    Pwad,
}

impl WadKind {
    pub fn magic(self) -> &'static [u8; 4] {
        match self {
            WadKind::Iwad => b"IWAD",
            WadKind::Pwad => b"PWAD",
        }
    }
}

impl fmt::Display for WadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WadKind::Iwad => "IWAD",
            WadKind::Pwad => "PWAD",
        })
    }
}

/// Eight-byte lump or resource name as stored on disk.
///
/// The raw bytes are kept verbatim (including anything after the first NUL)
/// so that the directory can be written back unchanged; comparisons only
/// look at the significant, case-folded prefix.
#[derive(Clone, Copy, Default)]
pub struct LumpName(pub [u8; 8]);

impl LumpName {
    /// Builds a name from text, uppercased and NUL-padded. Longer input is
    /// truncated to eight bytes.
    pub fn new(name: &str) -> LumpName {
        let mut raw = [0u8; 8];
        for (dst, src) in raw.iter_mut().zip(name.bytes()) {
            *dst = src.to_ascii_uppercase();
        }
        LumpName(raw)
    }

    /// Significant bytes: everything before the first NUL.
    pub fn bytes(&self) -> &[u8] {
        let end = self.0.iter().position(|&b| b == 0).unwrap_or(8);
        &self.0[..end]
    }

    /// Printable form; non-UTF-8 bytes are replaced by `?`.
    pub fn as_str(&self) -> alloc::string::String {
        self.bytes()
            .iter()
            .map(|&b| {
                if b.is_ascii_graphic() {
                    b.to_ascii_uppercase() as char
                } else {
                    '?'
                }
            })
            .collect()
    }

    pub fn matches(&self, name: &str) -> bool {
        let ours = self.bytes();
        ours.len() == name.len()
            && ours
                .iter()
                .zip(name.bytes())
                .all(|(a, b)| a.eq_ignore_ascii_case(&b))
    }

    pub fn is_blank(&self) -> bool {
        self.bytes().is_empty() || self.bytes() == b"-"
    }

    fn key(&self) -> [u8; 8] {
        let mut k = [0u8; 8];
        for (dst, src) in k.iter_mut().zip(self.bytes()) {
            *dst = src.to_ascii_uppercase();
        }
        k
    }
}

impl PartialEq for LumpName {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for LumpName {}

impl PartialOrd for LumpName {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LumpName {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl core::hash::Hash for LumpName {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl fmt::Debug for LumpName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_str())
    }
}

impl fmt::Display for LumpName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LumpEntry {
    pub name: LumpName,
    pub offset: u32,
    pub size: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WadError {
    TooShort {
        len: usize,
    },
    BadMagic([u8; 4]),
    TruncatedDirectory {
        offset: i64,
        count: i64,
        len: usize,
    },
    BadEntry {
        index: usize,
        offset: i64,
        size: i64,
    },
    NotFound(LumpSelector),
}

impl fmt::Display for WadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WadError::TooShort { len } => {
                write!(f, "file of {len} bytes is too short for a WAD header")
            }
            WadError::BadMagic(m) => {
                write!(f, "bad magic {:?}, expected IWAD or PWAD", m.escape_ascii())
            }
            WadError::TruncatedDirectory { offset, count, len } => write!(
                f,
                "directory of {count} entries at offset {offset} exceeds file length {len}"
            ),
            WadError::BadEntry {
                index,
                offset,
                size,
            } => {
                write!(
                    f,
                    "lump {index} window (offset {offset}, size {size}) is out of bounds"
                )
            }
            WadError::NotFound(sel) => write!(f, "lump {sel} not found"),
        }
    }
}

impl core::error::Error for WadError {}

/// How to pick a lump out of the directory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LumpSelector {
    Name(LumpName),
    Index(usize),
}

impl From<&str> for LumpSelector {
    fn from(name: &str) -> Self {
        LumpSelector::Name(LumpName::new(name))
    }
}

impl From<usize> for LumpSelector {
    fn from(index: usize) -> Self {
        LumpSelector::Index(index)
    }
}

impl fmt::Display for LumpSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LumpSelector::Name(n) => write!(f, "{n:?}"),
            LumpSelector::Index(i) => write!(f, "#{i}"),
        }
    }
}

/// A parsed archive. Owns the source bytes; lump access is zero-copy.
#[derive(Clone, Debug)]
pub struct WadArchive {
    kind: WadKind,
    lumps: Vec<LumpEntry>,
    dir_offset: usize,
    raw: Vec<u8>,
}

fn read_i32(b: &[u8], at: usize) -> i32 {
    i32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

impl WadArchive {
    pub fn parse(bytes: Vec<u8>) -> Result<WadArchive, WadError> {
        if bytes.len() < HEADER_SIZE {
            return Err(WadError::TooShort { len: bytes.len() });
        }
        let kind = match &bytes[0..4] {
            b"IWAD" => WadKind::Iwad,
            b"PWAD" => WadKind::Pwad,
            other => return Err(WadError::BadMagic([other[0], other[1], other[2], other[3]])),
        };
        let count = read_i32(&bytes, 4) as i64;
        let dir = read_i32(&bytes, 8) as i64;
        let len = bytes.len();
        let dir_end = dir + count * DIR_ENTRY_SIZE as i64;
        if count < 0 || dir < 0 || dir_end > len as i64 {
            return Err(WadError::TruncatedDirectory {
                offset: dir,
                count,
                len,
            });
        }
        let mut lumps = Vec::with_capacity(count as usize);
        for index in 0..count as usize {
            let at = dir as usize + index * DIR_ENTRY_SIZE;
            let offset = read_i32(&bytes, at) as i64;
            let size = read_i32(&bytes, at + 4) as i64;
            if offset < 0 || size < 0 || offset + size > len as i64 {
                return Err(WadError::BadEntry {
                    index,
                    offset,
                    size,
                });
            }
            let mut name = [0u8; 8];
            name.copy_from_slice(&bytes[at + 8..at + 16]);
            lumps.push(LumpEntry {
                name: LumpName(name),
                offset: offset as u32,
                size: size as u32,
            });
        }
        Ok(WadArchive {
            kind,
            lumps,
            dir_offset: dir as usize,
            raw: bytes,
        })
    }

    pub fn kind(&self) -> WadKind {
        self.kind
    }

    pub fn lumps(&self) -> &[LumpEntry] {
        &self.lumps
    }

    pub fn raw(&self) -> &[u8] {
        &self.raw
    }

    /// Index of the last lump called `name`.
    pub fn find(&self, name: &str) -> Option<usize> {
        self.lumps.iter().rposition(|l| l.name.matches(name))
    }

    /// Index of the first lump called `name` at or after `start`.
    pub fn find_from(&self, start: usize, name: &str) -> Option<usize> {
        self.lumps
            .iter()
            .skip(start)
            .position(|l| l.name.matches(name))
            .map(|i| i + start)
    }

    pub fn lump_at(&self, index: usize) -> Option<&[u8]> {
        let e = self.lumps.get(index)?;
        Some(&self.raw[e.offset as usize..(e.offset + e.size) as usize])
    }

    /// Bytes of a lump. Name lookup resolves to the last entry with that
    /// name, so later (patch) lumps override earlier ones.
    pub fn lump_bytes(&self, selector: impl Into<LumpSelector>) -> Result<&[u8], WadError> {
        let selector = selector.into();
        let index = match &selector {
            LumpSelector::Index(i) => Some(*i),
            LumpSelector::Name(n) => self.lumps.iter().rposition(|l| l.name == *n),
        };
        index
            .and_then(|i| self.lump_at(i))
            .ok_or(WadError::NotFound(selector))
    }

    /// Serializes the directory exactly as it is laid out on disk.
    pub fn directory_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.lumps.len() * DIR_ENTRY_SIZE);
        for l in &self.lumps {
            out.extend_from_slice(&(l.offset as i32).to_le_bytes());
            out.extend_from_slice(&(l.size as i32).to_le_bytes());
            out.extend_from_slice(&l.name.0);
        }
        out
    }

    /// The directory window of the source bytes.
    pub fn source_directory(&self) -> &[u8] {
        &self.raw[self.dir_offset..self.dir_offset + self.lumps.len() * DIR_ENTRY_SIZE]
    }
}

/// Assembles WAD files: lump data follows the header in insertion order and
/// the directory comes last.
#[derive(Clone, Debug)]
pub struct WadBuilder {
    kind: WadKind,
    lumps: Vec<(LumpName, Vec<u8>)>,
}

impl WadBuilder {
    pub fn new(kind: WadKind) -> WadBuilder {
        WadBuilder {
            kind,
            lumps: Vec::new(),
        }
    }

    pub fn lump(&mut self, name: &str, data: impl Into<Vec<u8>>) -> &mut Self {
        self.lumps.push((LumpName::new(name), data.into()));
        self
    }

    pub fn marker(&mut self, name: &str) -> &mut Self {
        self.lump(name, Vec::new())
    }

    pub fn build(&self) -> Vec<u8> {
        let data_len: usize = self.lumps.iter().map(|(_, d)| d.len()).sum();
        let dir = HEADER_SIZE + data_len;
        let mut out = Vec::with_capacity(dir + self.lumps.len() * DIR_ENTRY_SIZE);
        out.extend_from_slice(self.kind.magic());
        out.extend_from_slice(&(self.lumps.len() as i32).to_le_bytes());
        out.extend_from_slice(&(dir as i32).to_le_bytes());
        let mut offsets = Vec::with_capacity(self.lumps.len());
        for (_, data) in &self.lumps {
            offsets.push(out.len());
            out.extend_from_slice(data);
        }
        for ((name, data), offset) in self.lumps.iter().zip(offsets) {
            let offset = if data.is_empty() { 0 } else { offset };
            out.extend_from_slice(&(offset as i32).to_le_bytes());
            out.extend_from_slice(&(data.len() as i32).to_le_bytes());
            out.extend_from_slice(&name.0);
        }
        out
    }
}
