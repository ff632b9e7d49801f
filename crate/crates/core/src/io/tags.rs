use std::fmt::Write as _;
use std::path::Path;

use crate::mesh::{EdgeKey, TriMesh};
use crate::tagging::SharpnessTags;

use super::IoError;

/// Required first line of a tags file.
pub const TAGS_HEADER: &str = "# crease-subdiv tags v1";

/// Parses a tags file and resolves every reference against `mesh`.
///
/// ```text
/// # crease-subdiv tags v1
/// e <i> <j>    sharp edge between 1-based vertices i and j
/// f <k>        sharp face, 1-based
/// ```
///
/// Other `#` lines and blank lines are skipped.
pub fn parse_tags(text: &str, mesh: &TriMesh) -> Result<SharpnessTags, IoError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first == TAGS_HEADER => {}
        _ => return Err(IoError::parse(1, format!("expected header `{TAGS_HEADER}`"))),
    }
    let mut tags = SharpnessTags::new();
    for (i, raw) in lines {
        let line = i + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let index = |s: &str| -> Result<usize, IoError> {
            match s.parse::<usize>() {
                Ok(0) => Err(IoError::parse(line, "indices are 1-based")),
                Ok(k) => Ok(k - 1),
                Err(_) => Err(IoError::parse(line, format!("invalid index `{s}`"))),
            }
        };
        match tokens.as_slice() {
            ["e", i, j] => {
                let (a, b) = (index(i)?, index(j)?);
                let edge = EdgeKey::try_new(a, b).ok_or_else(|| IoError::parse(line, "edge endpoints must differ"))?;
                if !mesh.has_edge(edge) {
                    return Err(IoError::UnknownEdge { line, edge });
                }
                if !tags.sharp_edges.insert(edge) {
                    return Err(IoError::DuplicateTag { line });
                }
            }
            ["f", k] => {
                let f = index(k)?;
                if f >= mesh.face_count() {
                    return Err(IoError::FaceIndexOutOfRange { line, index: f });
                }
                if !tags.sharp_faces.insert(f) {
                    return Err(IoError::DuplicateTag { line });
                }
            }
            _ => return Err(IoError::parse(line, format!("unrecognized line `{raw}`"))),
        }
    }
    Ok(tags)
}

pub fn read_tags(path: impl AsRef<Path>, mesh: &TriMesh) -> Result<SharpnessTags, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    parse_tags(&text, mesh)
}

/// Canonical form: edges in sorted key order, then faces ascending.
pub fn format_tags(tags: &SharpnessTags) -> String {
    let mut out = String::with_capacity(16 * (tags.sharp_edges.len() + tags.sharp_faces.len()) + 32);
    out.push_str(TAGS_HEADER);
    out.push('\n');
    for e in &tags.sharp_edges {
        let _ = writeln!(out, "e {} {}", e.a() + 1, e.b() + 1);
    }
    for f in &tags.sharp_faces {
        let _ = writeln!(out, "f {}", f + 1);
    }
    out
}

pub fn write_tags(tags: &SharpnessTags, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    std::fs::write(path, format_tags(tags)).map_err(|e| IoError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    fn with_header(body: &str) -> String {
        format!("{TAGS_HEADER}\n{body}")
    }

    #[test]
    fn edge_and_face_tags() {
        let m = shapes::single_triangle();
        let t = parse_tags(&with_header("e 1 2\n"), &m).unwrap();
        assert_eq!(t.sharp_edges.iter().copied().collect::<Vec<_>>(), vec![EdgeKey::new(0, 1)]);
        let t = parse_tags(&with_header("# note\n\nf 1\n"), &m).unwrap();
        assert!(t.is_sharp_face(0));
    }

    #[test]
    fn reference_errors() {
        let m = shapes::single_triangle();
        assert!(matches!(parse_tags(&with_header("e 1 9\n"), &m), Err(IoError::UnknownEdge { line: 2, .. })));
        assert!(matches!(parse_tags(&with_header("f 2\n"), &m), Err(IoError::FaceIndexOutOfRange { line: 2, index: 1 })));
        assert!(matches!(parse_tags(&with_header("e 1 2\ne 2 1\n"), &m), Err(IoError::DuplicateTag { line: 3 })));
        assert!(parse_tags(&with_header("e 1 9\n"), &m).unwrap_err().is_tag_mismatch());
    }

    #[test]
    fn grammar_errors() {
        let m = shapes::single_triangle();
        assert!(matches!(parse_tags("e 1 2\n", &m), Err(IoError::Parse { line: 1, .. })));
        assert!(matches!(parse_tags("", &m), Err(IoError::Parse { line: 1, .. })));
        for bad in ["e 1\n", "e 1 2 3\n", "x 1\n", "f 0\n", "e 1 1\n", "f -1\n", " # indented\n"] {
            assert!(
                matches!(parse_tags(&with_header(bad), &m), Err(IoError::Parse { line: 2, .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn empty_tags_are_header_only() {
        assert_eq!(format_tags(&SharpnessTags::new()), format!("{TAGS_HEADER}\n"));
    }

    #[test]
    fn canonical_order() {
        let m = shapes::grid(2, 2);
        let mut t = SharpnessTags::new();
        t.tag_path(&[8, 4, 0]);
        t.sharp_faces.extend([5, 1]);
        assert_eq!(format_tags(&t), with_header("e 1 5\ne 5 9\nf 2\nf 6\n"));
        assert_eq!(parse_tags(&format_tags(&t), &m).unwrap(), t);
    }
}
