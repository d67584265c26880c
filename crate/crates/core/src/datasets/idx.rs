//! IDX file format, bit-exact: big-endian 32-bit magic (0x00000803 for
//! image files, 0x00000801 for label files), big-endian dimension sizes,
//! then raw unsigned bytes.

use crate::error::{Error, Result};

/// Magic number of an IDX image file (unsigned byte, 3 dimensions).
pub const IMAGE_MAGIC: u32 = 0x0000_0803;
/// Magic number of an IDX label file (unsigned byte, 1 dimension).
pub const LABEL_MAGIC: u32 = 0x0000_0801;

/// Parsed image file: `count` images of `rows`×`cols` raw bytes each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxImages {
    /// Pixel rows per image.
    pub rows: usize,
    /// Pixel columns per image.
    pub cols: usize,
    /// Row-major pixel bytes, one inner vector per image.
    pub images: Vec<Vec<u8>>,
}

fn read_be_u32(bytes: &[u8], offset: usize, what: &str) -> Result<u32> {
    let end = offset + 4;
    if bytes.len() < end {
        return Err(Error::Data(format!("idx stream truncated reading {what}")));
    }
    Ok(u32::from_be_bytes([
        bytes[offset],
        bytes[offset + 1],
        bytes[offset + 2],
        bytes[offset + 3],
    ]))
}

/// Parses an IDX image stream.
///
/// # Errors
/// `Error::Data` on a wrong magic number, a truncated header or payload,
/// or trailing garbage after the pixel data.
pub fn load_idx_images(bytes: &[u8]) -> Result<IdxImages> {
    let magic = read_be_u32(bytes, 0, "magic")?;
    if magic != IMAGE_MAGIC {
        return Err(Error::Data(format!(
            "image file magic is {magic:#010x}, expected {IMAGE_MAGIC:#010x}"
        )));
    }
    let count = read_be_u32(bytes, 4, "image count")? as usize;
    let rows = read_be_u32(bytes, 8, "row count")? as usize;
    let cols = read_be_u32(bytes, 12, "column count")? as usize;
    // The three header fields are attacker-controlled; their product can
    // overflow usize, so it must not be computed bare.
    let expected = count
        .checked_mul(rows)
        .and_then(|v| v.checked_mul(cols))
        .and_then(|v| v.checked_add(16))
        .ok_or_else(|| {
            Error::Data(format!("image dimensions {count}x{rows}x{cols} overflow"))
        })?;
    if bytes.len() < expected {
        return Err(Error::Data(format!(
            "image payload truncated: {} bytes, expected {expected}",
            bytes.len()
        )));
    }
    if bytes.len() > expected {
        return Err(Error::Data(format!(
            "image file has {} trailing bytes",
            bytes.len() - expected
        )));
    }
    let images = bytes[16..]
        .chunks_exact(rows * cols)
        .map(|c| c.to_vec())
        .collect();
    Ok(IdxImages { rows, cols, images })
}

/// Parses an IDX label stream. Labels must be digits 0–9.
///
/// # Errors
/// `Error::Data` on a wrong magic number, truncation, trailing garbage, or
/// an out-of-range label byte.
pub fn load_idx_labels(bytes: &[u8]) -> Result<Vec<u8>> {
    let magic = read_be_u32(bytes, 0, "magic")?;
    if magic != LABEL_MAGIC {
        return Err(Error::Data(format!(
            "label file magic is {magic:#010x}, expected {LABEL_MAGIC:#010x}"
        )));
    }
    let count = read_be_u32(bytes, 4, "label count")? as usize;
    let expected = 8 + count;
    if bytes.len() < expected {
        return Err(Error::Data(format!(
            "label payload truncated: {} bytes, expected {expected}",
            bytes.len()
        )));
    }
    if bytes.len() > expected {
        return Err(Error::Data(format!(
            "label file has {} trailing bytes",
            bytes.len() - expected
        )));
    }
    let labels = bytes[8..].to_vec();
    if let Some(bad) = labels.iter().find(|&&l| l > 9) {
        return Err(Error::Data(format!("label byte {bad} outside 0–9")));
    }
    Ok(labels)
}

/// Serializes images to IDX bytes (inverse of [`load_idx_images`]).
///
/// # Errors
/// `Error::Argument` if any image's length differs from `rows·cols`.
pub fn write_idx_images(rows: usize, cols: usize, images: &[Vec<u8>]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(16 + images.len() * rows * cols);
    out.extend_from_slice(&IMAGE_MAGIC.to_be_bytes());
    out.extend_from_slice(&(images.len() as u32).to_be_bytes());
    out.extend_from_slice(&(rows as u32).to_be_bytes());
    out.extend_from_slice(&(cols as u32).to_be_bytes());
    for (i, img) in images.iter().enumerate() {
        if img.len() != rows * cols {
            return Err(Error::Argument(format!(
                "image {i} has {} bytes, expected {}",
                img.len(),
                rows * cols
            )));
        }
        out.extend_from_slice(img);
    }
    Ok(out)
}

/// Serializes labels to IDX bytes (inverse of [`load_idx_labels`]).
///
/// # Errors
/// `Error::Argument` on a label outside 0–9.
pub fn write_idx_labels(labels: &[u8]) -> Result<Vec<u8>> {
    if let Some(bad) = labels.iter().find(|&&l| l > 9) {
        return Err(Error::Argument(format!("label {bad} outside 0–9")));
    }
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    Ok(out)
}
