use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::pgm::{write_pgm16, GrayImage16};
use crate::error::{Error, Result};
use crate::render::Frame;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedObject {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
    pub rso_id: u32,
    pub magnitude: f64,
}

/// Per-image ground truth: `(x, y, w, h)` boxes with top-left origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationFile {
    pub image: String,
    pub width: u32,
    pub height: u32,
    pub objects: Vec<AnnotatedObject>,
}

impl AnnotationFile {
    pub fn from_frame(frame: &Frame, image_name: &str) -> Self {
        AnnotationFile {
            image: image_name.to_string(),
            width: frame.width,
            height: frame.height,
            objects: frame
                .annotations
                .iter()
                .map(|a| AnnotatedObject {
                    x: a.x,
                    y: a.y,
                    w: a.w,
                    h: a.h,
                    rso_id: a.rso_id,
                    magnitude: a.apparent_magnitude,
                })
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| Error::json(path, e))?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Writes the quantized raster as 16-bit PGM and its annotations as JSON.
pub fn write_frame(frame: &Frame, image_path: &Path, annotation_path: &Path) -> Result<()> {
    let img = GrayImage16::new(frame.width, frame.height, frame.dn.clone())?;
    write_pgm16(image_path, &img)?;
    let name = image_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    AnnotationFile::from_frame(frame, &name).save(annotation_path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::read_pgm;
    use crate::render::StreakAnnotation;
    use crate::sensor::Attitude;
    use crate::time::Epoch;

    fn frame() -> Frame {
        let mut f = Frame::new(5, 3, 1, Epoch::J2000, Attitude::new(0.0, 0.0, 0.0));
        f.dn = (0..15).map(|v| v * 4000).collect();
        f
    }

    #[test]
    fn empty_objects_array() {
        let dir = tempfile::tempdir().unwrap();
        let (img, ann) = (dir.path().join("a.pgm"), dir.path().join("a.json"));
        write_frame(&frame(), &img, &ann).unwrap();
        let text = fs::read_to_string(&ann).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["objects"], serde_json::json!([]));
        assert_eq!(v["image"], "a.pgm");
        assert_eq!(v["width"], 5);
        assert_eq!(read_pgm(&img).unwrap().data, frame().dn);
    }

    #[test]
    fn object_schema() {
        let mut f = frame();
        f.annotations.push(StreakAnnotation {
            x: 1,
            y: 0,
            w: 3,
            h: 2,
            endpoints: (1.5, 0.5, 3.5, 1.5),
            rso_id: 42,
            apparent_magnitude: 5.25,
        });
        let dir = tempfile::tempdir().unwrap();
        let ann = dir.path().join("b.json");
        write_frame(&f, &dir.path().join("b.pgm"), &ann).unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&ann).unwrap()).unwrap();
        assert_eq!(
            v["objects"][0],
            serde_json::json!({"x": 1, "y": 0, "w": 3, "h": 2, "rso_id": 42, "magnitude": 5.25})
        );
        assert_eq!(AnnotationFile::load(&ann).unwrap().objects.len(), 1);
    }

    #[test]
    fn io_error_has_path() {
        let err = write_frame(
            &frame(),
            Path::new("/nonexistent/dir/x.pgm"),
            Path::new("/nonexistent/x.json"),
        )
        .unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/x.pgm"));
    }
}
