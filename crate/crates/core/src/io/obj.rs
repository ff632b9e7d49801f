use std::fmt::Write as _;
use std::path::Path;

use crate::mesh::{TriMesh, Vec3};

use super::IoError;

/// Vertices and triangles as read from a file, before any topology checks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObjData {
    pub positions: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
}

impl ObjData {
    pub fn into_mesh(self) -> Result<TriMesh, IoError> {
        Ok(TriMesh::new(self.positions, self.faces)?)
    }
}

// Keywords that carry no geometry we use.
const IGNORED: &[&str] = &["vn", "vt", "vp", "o", "g", "s", "mtllib", "usemtl"];

/// Parses `v` and triangular `f` records. Face corners may use the
/// `v/vt/vn` forms and negative (relative) indices.
pub fn parse_obj(text: &str) -> Result<ObjData, IoError> {
    let mut data = ObjData::default();
    // Face corners are resolved after all vertices are known.
    let mut pending: Vec<(usize, [i64; 3])> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut tokens = content.split_whitespace();
        let Some(keyword) = tokens.next() else {
            continue;
        };
        match keyword {
            "v" => {
                let coords: Vec<&str> = tokens.collect();
                if coords.len() != 3 && coords.len() != 4 {
                    return Err(IoError::parse(line, format!("expected 3 coordinates, got {}", coords.len())));
                }
                let mut xyz = [0.0; 3];
                for (k, c) in coords.iter().take(3).enumerate() {
                    xyz[k] = c
                        .parse::<f64>()
                        .map_err(|_| IoError::parse(line, format!("invalid coordinate `{c}`")))?;
                    if !xyz[k].is_finite() {
                        return Err(IoError::parse(line, format!("non-finite coordinate `{c}`")));
                    }
                }
                data.positions.push(Vec3::new(xyz[0], xyz[1], xyz[2]));
            }
            "f" => {
                let corners: Vec<&str> = tokens.collect();
                if corners.len() > 3 {
                    return Err(IoError::NonTriangleFace {
                        line,
                        count: corners.len(),
                    });
                }
                if corners.len() < 3 {
                    return Err(IoError::parse(line, "face needs three vertices"));
                }
                let mut idx = [0i64; 3];
                for (k, c) in corners.iter().enumerate() {
                    let first = c.split('/').next().unwrap_or("");
                    idx[k] = first
                        .parse::<i64>()
                        .map_err(|_| IoError::parse(line, format!("invalid vertex reference `{c}`")))?;
                    if idx[k] == 0 {
                        return Err(IoError::parse(line, "vertex indices are 1-based"));
                    }
                    // Relative indices count back from the vertices seen so far.
                    if idx[k] < 0 {
                        idx[k] += data.positions.len() as i64 + 1;
                        if idx[k] < 1 {
                            return Err(IoError::IndexOutOfRange { line, index: idx[k] });
                        }
                    }
                }
                pending.push((line, idx));
            }
            k if IGNORED.contains(&k) => {}
            other => return Err(IoError::parse(line, format!("unsupported record `{other}`"))),
        }
    }
    let count = data.positions.len() as i64;
    for (line, idx) in pending {
        let mut face = [0usize; 3];
        for k in 0..3 {
            if idx[k] > count {
                return Err(IoError::IndexOutOfRange { line, index: idx[k] });
            }
            face[k] = (idx[k] - 1) as usize;
        }
        data.faces.push(face);
    }
    Ok(data)
}

pub fn read_obj(path: impl AsRef<Path>) -> Result<TriMesh, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    parse_obj(&text)?.into_mesh()
}

/// Serializes vertices then faces. Coordinates carry 17 significant digits,
/// enough to read back the identical `f64`.
pub fn format_obj(mesh: &TriMesh) -> String {
    let mut out = String::with_capacity(64 * (mesh.vertex_count() + mesh.face_count()) + 32);
    out.push_str("# crease-subdiv mesh\n");
    for p in mesh.positions() {
        let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", p.x, p.y, p.z);
    }
    for f in mesh.faces() {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    out
}

pub fn write_obj(mesh: &TriMesh, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    std::fs::write(path, format_obj(mesh)).map_err(|e| IoError::io(path, e))
}
