//! OBJ meshes and the sharpness sidecar file.
//!
//! Indices are 1-based in files and 0-based in memory.

mod obj;
mod tags;

use std::path::PathBuf;

use thiserror::Error;

use crate::mesh::{EdgeKey, MeshError};

pub use obj::{format_obj, parse_obj, read_obj, write_obj, ObjData};
pub use tags::{format_tags, parse_tags, read_tags, write_tags, TAGS_HEADER};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: face has {count} vertices, only triangles are supported")]
    NonTriangleFace { line: usize, count: usize },
    #[error("line {line}: vertex index {index} out of range")]
    IndexOutOfRange { line: usize, index: i64 },
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("line {line}: edge ({}, {}) is not in the mesh", .edge.a() + 1, .edge.b() + 1)]
    UnknownEdge { line: usize, edge: EdgeKey },
    #[error("line {line}: face {} out of range", .index + 1)]
    FaceIndexOutOfRange { line: usize, index: usize },
    #[error("line {line}: duplicate tag")]
    DuplicateTag { line: usize },
}

impl IoError {
    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        IoError::Parse {
            line,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IoError::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error is a tag reference that does not resolve against
    /// the mesh.
    pub fn is_tag_mismatch(&self) -> bool {
        matches!(
            self,
            IoError::UnknownEdge { .. } | IoError::FaceIndexOutOfRange { .. }
        )
    }
}
