//! On-disk formats and dataset splitting.

mod annotation;
mod folds;
mod manifest;
mod pgm;

pub use annotation::{write_frame, AnnotatedObject, AnnotationFile};
pub use folds::{build_training_round, make_folds, FoldSplit, SplitsDocument, TrainingRound};
pub use manifest::{DatasetManifest, ManifestEntry, Source};
pub use pgm::{decode_pgm, encode_pgm16, encode_pgm8_preview, read_pgm, write_pgm16, GrayImage16};
