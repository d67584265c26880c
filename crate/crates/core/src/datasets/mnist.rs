//! MNIST-specific preparation: the 28→24 center crop, byte-to-unit-range
//! scaling, one-hot targets, and a loader that ties images to labels.

use std::fs;
use std::path::Path;

use crate::datasets::idx::{load_idx_images, load_idx_labels};
use crate::error::{Error, Result};

/// Side length of a raw MNIST image.
pub const RAW_SIDE: usize = 28;
/// Side length after the center crop.
pub const CROP_SIDE: usize = 24;
/// Input dimension after preprocessing (24·24).
pub const INPUT_DIM: usize = CROP_SIDE * CROP_SIDE;

/// Reduces a raw 28×28 image to the 24×24 network input: center crop to
/// rows/cols 2..=25 (dropping the 2-pixel border on each side — digits are
/// centered in the frame and the border is mostly empty), then scale each
/// byte by 1/255 into `[0, 1]`.
///
/// The reduction is a crop, not a resample.
///
/// # Errors
/// `Error::Argument` if the input is not exactly 28×28 bytes.
pub fn preprocess(image28: &[u8]) -> Result<Vec<f64>> {
    if image28.len() != RAW_SIDE * RAW_SIDE {
        return Err(Error::Argument(format!(
            "preprocess expects a {RAW_SIDE}x{RAW_SIDE} image ({} bytes), got {}",
            RAW_SIDE * RAW_SIDE,
            image28.len()
        )));
    }
    let mut out = Vec::with_capacity(INPUT_DIM);
    for r in 2..2 + CROP_SIDE {
        for c in 2..2 + CROP_SIDE {
            out.push(image28[r * RAW_SIDE + c] as f64 / 255.0);
        }
    }
    Ok(out)
}

/// One-hot target for a digit class: entry `label` is 1, the rest 0.
///
/// # Errors
/// `Error::Argument` for a label outside 0–9.
pub fn one_hot(label: u8) -> Result<Vec<f64>> {
    if label > 9 {
        return Err(Error::Argument(format!("label {label} outside 0–9")));
    }
    let mut v = vec![0.0; 10];
    v[label as usize] = 1.0;
    Ok(v)
}

/// A preprocessed digit set: 576-pixel unit-range images with their labels.
#[derive(Debug, Clone)]
pub struct MnistSet {
    images: Vec<Vec<f64>>,
    labels: Vec<u8>,
}

impl MnistSet {
    /// Parses and preprocesses a set from raw IDX byte streams.
    ///
    /// # Errors
    /// `Error::Data` on malformed streams, non-28×28 images, or an
    /// image/label count mismatch.
    pub fn from_idx_bytes(image_bytes: &[u8], label_bytes: &[u8]) -> Result<Self> {
        let parsed = load_idx_images(image_bytes)?;
        let labels = load_idx_labels(label_bytes)?;
        if parsed.rows != RAW_SIDE || parsed.cols != RAW_SIDE {
            return Err(Error::Data(format!(
                "expected {RAW_SIDE}x{RAW_SIDE} images, file has {}x{}",
                parsed.rows, parsed.cols
            )));
        }
        if parsed.images.len() != labels.len() {
            return Err(Error::Data(format!(
                "{} images but {} labels",
                parsed.images.len(),
                labels.len()
            )));
        }
        let images = parsed
            .images
            .iter()
            .map(|img| preprocess(img))
            .collect::<Result<Vec<_>>>()?;
        Ok(MnistSet { images, labels })
    }

    /// Loads a set from an IDX image file and an IDX label file.
    ///
    /// # Errors
    /// `Error::Io` if a file cannot be read; otherwise as
    /// [`MnistSet::from_idx_bytes`].
    pub fn load(images_path: &Path, labels_path: &Path) -> Result<Self> {
        let image_bytes = fs::read(images_path)?;
        let label_bytes = fs::read(labels_path)?;
        Self::from_idx_bytes(&image_bytes, &label_bytes)
    }

    /// Number of digits in the set.
    pub fn len(&self) -> usize {
        self.images.len()
    }

    /// True if the set holds no digits.
    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Preprocessed images (576 values each, in `[0, 1]`).
    pub fn images(&self) -> &[Vec<f64>] {
        &self.images
    }

    /// Digit labels, aligned with [`MnistSet::images`].
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }
}
