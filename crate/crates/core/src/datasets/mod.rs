//! Data ingestion and generation: MNIST IDX files with the 24×24
//! preprocessing, and the Mackey-Glass chaotic series with delay embedding.

pub mod idx;
pub mod mackey_glass;
pub mod mnist;

pub use idx::{load_idx_images, load_idx_labels, write_idx_images, write_idx_labels, IdxImages};
pub use mackey_glass::{
    delay_embed, mackey_glass, mackey_glass_default, EmbeddedSample, MgSeries, TRANSIENT_DISCARD,
};
pub use mnist::{one_hot, preprocess, MnistSet};
