//! PNG encoding of frame images: 8-bit RGB and 16-bit grayscale.

use std::io::Cursor;

use png::{BitDepth, ColorType, Compression, Decoder, Encoder, Transformations};

fn encode(
    width: u32,
    height: u32,
    color: ColorType,
    depth: BitDepth,
    data: &[u8],
) -> Result<Vec<u8>, png::EncodingError> {
    let mut out = Vec::new();
    let mut enc = Encoder::new(&mut out, width, height);
    enc.set_color(color);
    enc.set_depth(depth);
    enc.set_compression(Compression::Fast);
    let mut w = enc.write_header()?;
    w.write_image_data(data)?;
    w.finish()?;
    Ok(out)
}

pub fn encode_rgb(width: u32, height: u32, rgb: &[u8]) -> Result<Vec<u8>, png::EncodingError> {
    encode(width, height, ColorType::Rgb, BitDepth::Eight, rgb)
}

/// Samples are stored big-endian, as PNG requires.
pub fn encode_gray16(
    width: u32,
    height: u32,
    samples: &[u16],
) -> Result<Vec<u8>, png::EncodingError> {
    let bytes: Vec<u8> = samples.iter().flat_map(|v| v.to_be_bytes()).collect();
    encode(
        width,
        height,
        ColorType::Grayscale,
        BitDepth::Sixteen,
        &bytes,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gray16 {
    pub width: u32,
    pub height: u32,
    pub samples: Vec<u16>,
}

fn decode(bytes: &[u8]) -> Result<(png::OutputInfo, Vec<u8>), png::DecodingError> {
    let mut dec = Decoder::new(Cursor::new(bytes));
    dec.set_transformations(Transformations::IDENTITY);
    let mut reader = dec.read_info()?;
    let mut buf = vec![0; reader.output_buffer_size().unwrap_or(0)];
    let info = reader.next_frame(&mut buf)?;
    buf.truncate(info.buffer_size());
    Ok((info, buf))
}

/// Decodes a 16-bit single-channel PNG. Other layouts are rejected.
pub fn decode_gray16(bytes: &[u8]) -> Result<Gray16, String> {
    let (info, buf) = decode(bytes).map_err(|e| e.to_string())?;
    if info.color_type != ColorType::Grayscale || info.bit_depth != BitDepth::Sixteen {
        return Err(format!(
            "expected 16-bit grayscale, found {:?} {:?}",
            info.color_type, info.bit_depth
        ));
    }
    let samples = buf
        .chunks_exact(2)
        .map(|c| u16::from_be_bytes([c[0], c[1]]))
        .collect();
    Ok(Gray16 {
        width: info.width,
        height: info.height,
        samples,
    })
}

/// Decodes an 8-bit RGB PNG into packed RGB bytes.
pub fn decode_rgb(bytes: &[u8]) -> Result<(u32, u32, Vec<u8>), String> {
    let (info, buf) = decode(bytes).map_err(|e| e.to_string())?;
    if info.color_type != ColorType::Rgb || info.bit_depth != BitDepth::Eight {
        return Err(format!(
            "expected 8-bit RGB, found {:?} {:?}",
            info.color_type, info.bit_depth
        ));
    }
    Ok((info.width, info.height, buf))
}
