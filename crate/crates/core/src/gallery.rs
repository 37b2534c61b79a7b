//! Built-in scenes shipped as DSL sources.

use thiserror::Error;

use crate::expr::{parse_program, SceneProgram};
use crate::scene::{compile, Scene, SceneError};

#[derive(Debug, Error)]
pub enum GalleryError {
    #[error("no gallery entry `{0}`")]
    UnknownEntry(String),
    #[error("gallery entry `{id}`: {source}")]
    Scene {
        id: String,
        #[source]
        source: SceneError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GalleryEntry {
    pub id: &'static str,
    pub source: &'static str,
    /// What the entry depicts.
    pub caption: &'static str,
    /// Ids of the verification checks run for this entry.
    pub checks: &'static [&'static str],
}

macro_rules! entry {
    ($id:literal, $caption:literal, [$($check:literal),* $(,)?]) => {
        GalleryEntry {
            id: $id,
            source: include_str!(concat!("../gallery/", $id, ".m4d")),
            caption: $caption,
            checks: &[$(concat!($id, "/", $check)),*],
        }
    };
}

pub const ENTRIES: [GalleryEntry; 10] = [
    entry!(
        "cube",
        "A 3-cube in DOP and 4-D perspective",
        [
            "edge-lengths",
            "shared-shadow",
            "parallel-edges",
            "crossed-edges"
        ]
    ),
    entry!(
        "clifford-sum",
        "Clifford torus as the sum of two circles",
        [
            "unit-norm",
            "torus-standard",
            "shadow-xz",
            "bilinear-control"
        ]
    ),
    entry!(
        "clifford-prod",
        "Clifford torus as the product of two circles",
        [
            "unit-norm",
            "circles-u",
            "circles-v",
            "torus-standard-control"
        ]
    ),
    entry!(
        "clifford-rotation",
        "Rotation of the product torus onto the sum torus",
        ["rotation", "offset-removed", "self-map", "left-product"]
    ),
    entry!(
        "quad-cone",
        "Quadratic cone over a parameter cube with a point on three rulings",
        [
            "implicit",
            "implicit-control",
            "planar-u-faces",
            "planar-control",
            "bilinear-v-faces",
            "rulings",
            "marked-point",
            "marked-rulings",
        ]
    ),
    entry!(
        "cone-sphere",
        "Intersection of the quadratic cone with the unit 3-sphere",
        [
            "implicit",
            "unit-norm",
            "torus-rotated45",
            "full-torus-rotated45",
            "torus-standard-control",
        ]
    ),
    entry!(
        "hopf-3sphere",
        "3-sphere in Hopf coordinates with its torus slices",
        ["unit-norm", "slice-radii", "torus-standard-control"]
    ),
    entry!(
        "pluecker",
        "Line times circle; Pluecker's conoid in the w = 0 shadow",
        [
            "conoid",
            "rulings-u",
            "circles-v",
            "rulings-v-control",
            "circle-radius"
        ]
    ),
    entry!(
        "line-helix",
        "Line times helix, t = 2",
        ["rulings-u", "helices-open", "conoid-control"]
    ),
    entry!(
        "butterfly",
        "Line times helix, t = 2 pi",
        ["rulings-u", "helices-open"]
    ),
];

pub fn list() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.id).collect()
}

pub fn get(id: &str) -> Result<&'static GalleryEntry, GalleryError> {
    ENTRIES
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| GalleryError::UnknownEntry(id.to_string()))
}

impl GalleryEntry {
    pub fn program(&self) -> Result<SceneProgram, GalleryError> {
        parse_program(self.source).map_err(|e| GalleryError::Scene {
            id: self.id.to_string(),
            source: e.into(),
        })
    }

    /// The compiled scene with the entry's checks attached.
    pub fn scene(&self) -> Result<Scene, GalleryError> {
        let err = |source| GalleryError::Scene {
            id: self.id.to_string(),
            source,
        };
        let mut scene = compile(&self.program()?).map_err(err)?;
        scene.checks = self.checks.iter().map(|c| c.to_string()).collect();
        Ok(scene)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quaternion;

    #[test]
    fn ids() {
        assert_eq!(
            list(),
            [
                "cube",
                "clifford-sum",
                "clifford-prod",
                "clifford-rotation",
                "quad-cone",
                "cone-sphere",
                "hopf-3sphere",
                "pluecker",
                "line-helix",
                "butterfly"
            ]
        );
        assert!(matches!(get("nope"), Err(GalleryError::UnknownEntry(_))));
    }

    #[test]
    fn all_compile() {
        for e in ENTRIES {
            let s = e.scene().unwrap();
            assert!(!s.top_level().is_empty(), "{}", e.id);
        }
    }

    #[test]
    fn marked_point() {
        let s = get("quad-cone").unwrap().scene().unwrap();
        let cone = s.set("cone").unwrap();
        let p = cone
            .eval_point(&[("u", -0.6), ("v1", 0.4), ("v2", 0.5)])
            .unwrap();
        let expected = Quaternion::from_array([0.3, 0.4, -0.24, 0.5]).unwrap();
        assert!(p.max_abs_diff(&expected) < 1e-15);
        let mark = s.set("mark").unwrap().eval_point(&[("x", 0.0); 0]).unwrap();
        assert!(mark.max_abs_diff(&expected) < 1e-15);
    }
}
