//! Wavefront OBJ export: `v`, `l`, `f` and `p` records with `o`/`g` names.

use std::fmt::Write;

use crate::tessellate::Mesh3;

fn num(v: f64) -> String {
    // Avoid `-0` in output.
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

/// Writes meshes into one OBJ document. Indices are 1-based and global.
/// Clipped vertices are kept so indices stay aligned across projections.
pub fn write_obj(meshes: &[Mesh3]) -> String {
    let mut out = String::from("# m4d\n");
    let mut base = 1;
    for m in meshes {
        let _ = writeln!(out, "o {}", m.name);
        for (v, clipped) in m.vertices.iter().zip(&m.clipped) {
            let _ = write!(out, "v {} {} {}", num(v.x), num(v.y), num(v.w));
            out.push_str(if *clipped { " # clipped\n" } else { "\n" });
        }
        if !m.points.is_empty() {
            out.push('p');
            for i in &m.points {
                let _ = write!(out, " {}", i + base);
            }
            out.push('\n');
        }
        for pl in &m.polylines {
            if pl.closed {
                out.push_str("# closed\n");
            }
            for w in pl.indices.windows(2) {
                let _ = writeln!(out, "l {} {}", w[0] + base, w[1] + base);
            }
        }
        let mut group = None;
        for (k, q) in m.quads.iter().enumerate() {
            let g = m.quad_groups.get(k).copied();
            if g != group {
                group = g;
                match g.and_then(|g| m.groups.get(g)) {
                    Some(tag) => {
                        let _ = writeln!(out, "g {}.{}={}", m.name, tag.param, tag.value);
                    }
                    None => {
                        let _ = writeln!(out, "g {}", m.name);
                    }
                }
            }
            let _ = write!(
                out,
                "f {} {} {} {}",
                q[0] + base,
                q[1] + base,
                q[2] + base,
                q[3] + base
            );
            out.push_str(if m.degenerate.get(k).copied().unwrap_or(false) {
                " # degenerate\n"
            } else {
                "\n"
            });
        }
        base += m.vertices.len();
    }
    out
}
