use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::annotation::AnnotationFile;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Real,
    Synthetic,
}

/// Paths are stored relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub image_path: String,
    pub annotation_path: String,
    pub source: Source,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub seed: u64,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn new(seed: u64) -> Self {
        DatasetManifest {
            seed,
            entries: Vec::new(),
        }
    }

    /// Checks that image and annotation paths are unique across entries.
    pub fn validate(&self) -> Result<()> {
        let mut images = BTreeSet::new();
        let mut annotations = BTreeSet::new();
        for e in &self.entries {
            if !images.insert(e.image_path.as_str()) {
                return Err(Error::Format(format!(
                    "duplicate image path {}",
                    e.image_path
                )));
            }
            if !annotations.insert(e.annotation_path.as_str()) {
                return Err(Error::Format(format!(
                    "duplicate annotation path {}",
                    e.annotation_path
                )));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let m: DatasetManifest = serde_json::from_str(&text).map_err(|e| Error::json(path, e))?;
        m.validate()?;
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.validate()?;
        let mut text = serde_json::to_string_pretty(self).map_err(|e| Error::json(path, e))?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn entry(&self, image_path: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.image_path == image_path)
    }

    pub fn paths_of(&self, source: Source) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.source == source)
            .map(|e| e.image_path.as_str())
            .collect()
    }

    /// Loads every annotation file and checks it names its entry's image.
    pub fn load_annotations(&self, base_dir: &Path) -> Result<Vec<AnnotationFile>> {
        self.entries
            .iter()
            .map(|e| {
                let path = resolve(base_dir, &e.annotation_path);
                let ann = AnnotationFile::load(&path)?;
                let expected = Path::new(&e.image_path)
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                if ann.image != expected && ann.image != e.image_path {
                    return Err(Error::Format(format!(
                        "{} references image {:?}, manifest entry is {:?}",
                        path.display(),
                        ann.image,
                        e.image_path
                    )));
                }
                Ok(ann)
            })
            .collect()
    }
}

/// Resolves a manifest-relative path; absolute paths pass through.
pub(crate) fn resolve(base_dir: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base_dir.join(p)
    }
}
