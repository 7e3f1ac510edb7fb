//! The line-oriented `mesh2d v1` text format.
//!
//! ```text
//! mesh2d v1
//! nodes N
//! <id> <x> <y>            (N lines)
//! tris M
//! <id> <n1> <n2> <n3>     (M lines, node ids, counterclockwise)
//! dirichlet K
//! <node> <ux|free> <uy|free>
//! neumann L
//! <n1> <n2> <tx> <ty>
//! ```
//!
//! Node ids are arbitrary unique integers; the writer emits zero-based
//! indices and shortest round-trip float formatting, so writing and reading
//! back is bit-exact. Concentrated forces and thickness are not part of the
//! format.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::VolumeMesh;
use crate::error::{PorodeError, Result};
use crate::tensor::Vec2;

/// Serializes a mesh.
pub fn write_mesh2d(mesh: &VolumeMesh) -> String {
    let mut s = String::new();
    s.push_str("mesh2d v1\n");
    let _ = writeln!(s, "nodes {}", mesh.num_nodes());
    for (i, p) in mesh.nodes().iter().enumerate() {
        let _ = writeln!(s, "{i} {:?} {:?}", p.x, p.y);
    }
    let _ = writeln!(s, "tris {}", mesh.num_elements());
    for (i, t) in mesh.elements().iter().enumerate() {
        let _ = writeln!(s, "{i} {} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(s, "dirichlet {}", mesh.dirichlet().len());
    let fmt = |v: Option<f64>| v.map_or_else(|| "free".to_string(), |x| format!("{x:?}"));
    for (n, v) in mesh.dirichlet() {
        let _ = writeln!(s, "{n} {} {}", fmt(v[0]), fmt(v[1]));
    }
    let _ = writeln!(s, "neumann {}", mesh.neumann().len());
    for e in mesh.neumann() {
        let _ = writeln!(
            s,
            "{} {} {:?} {:?}",
            e.nodes[0], e.nodes[1], e.traction.x, e.traction.y
        );
    }
    s
}

struct Lines<'a> {
    name: &'a str,
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, message: impl Into<String>) -> PorodeError {
        PorodeError::Parse {
            source_name: self.name.to_string(),
            line: self.line,
            message: message.into(),
        }
    }

    fn next_tokens(&mut self) -> Result<Vec<&'a str>> {
        for (i, l) in self.iter.by_ref() {
            self.line = i + 1;
            let t = l.trim();
            if t.is_empty() {
                continue;
            }
            return Ok(t.split_whitespace().collect());
        }
        self.line += 1;
        Err(self.err("unexpected end of file"))
    }

    fn section(&mut self, keyword: &str) -> Result<usize> {
        let tok = self.next_tokens()?;
        if tok.len() != 2 || tok[0] != keyword {
            return Err(self.err(format!(
                "expected '{keyword} <count>', found '{}'",
                tok.join(" ")
            )));
        }
        tok[1]
            .parse()
            .map_err(|_| self.err(format!("invalid count '{}'", tok[1])))
    }

    fn float(&self, s: &str) -> Result<f64> {
        let v: f64 = s
            .parse()
            .map_err(|_| self.err(format!("invalid number '{s}'")))?;
        if !v.is_finite() {
            return Err(self.err(format!("non-finite number '{s}'")));
        }
        Ok(v)
    }

    fn int(&self, s: &str) -> Result<i64> {
        s.parse()
            .map_err(|_| self.err(format!("invalid integer '{s}'")))
    }
}

/// Parses a `mesh2d v1` document; `name` is used in error messages.
pub fn parse_mesh2d(text: &str, name: &str) -> Result<VolumeMesh> {
    let mut r = Lines {
        name,
        iter: text.lines().enumerate(),
        line: 0,
    };
    let header = r.next_tokens()?;
    if header != ["mesh2d", "v1"] {
        return Err(r.err("missing 'mesh2d v1' header"));
    }
    let n = r.section("nodes")?;
    let mut ids: HashMap<i64, usize> = HashMap::with_capacity(n);
    let mut nodes = Vec::with_capacity(n);
    for _ in 0..n {
        let t = r.next_tokens()?;
        if t.len() != 3 {
            return Err(r.err("node line must be '<id> <x> <y>'"));
        }
        let id = r.int(t[0])?;
        if ids.insert(id, nodes.len()).is_some() {
            return Err(r.err(format!("duplicate node id {id}")));
        }
        nodes.push(Vec2::new(r.float(t[1])?, r.float(t[2])?));
    }
    let node = |r: &Lines, s: &str| -> Result<usize> {
        let id = r.int(s)?;
        ids.get(&id)
            .copied()
            .ok_or_else(|| r.err(format!("unknown node id {id}")))
    };
    let m = r.section("tris")?;
    let mut elements = Vec::with_capacity(m);
    let mut tri_ids = std::collections::HashSet::with_capacity(m);
    for _ in 0..m {
        let t = r.next_tokens()?;
        if t.len() != 4 {
            return Err(r.err("triangle line must be '<id> <n1> <n2> <n3>'"));
        }
        if !tri_ids.insert(r.int(t[0])?) {
            return Err(r.err(format!("duplicate triangle id {}", t[0])));
        }
        elements.push([node(&r, t[1])?, node(&r, t[2])?, node(&r, t[3])?]);
    }
    let mut mesh = VolumeMesh::new(nodes, elements, 1.0).map_err(|e| r.err(e.to_string()))?;
    let k = r.section("dirichlet")?;
    for _ in 0..k {
        let t = r.next_tokens()?;
        if t.len() != 3 {
            return Err(r.err("dirichlet line must be '<node> <ux|free> <uy|free>'"));
        }
        let comp = |s: &str| -> Result<Option<f64>> {
            if s == "free" {
                Ok(None)
            } else {
                r.float(s).map(Some)
            }
        };
        let nd = node(&r, t[0])?;
        mesh.set_dirichlet(nd, [comp(t[1])?, comp(t[2])?])
            .map_err(|e| r.err(e.to_string()))?;
    }
    let l = r.section("neumann")?;
    for _ in 0..l {
        let t = r.next_tokens()?;
        if t.len() != 4 {
            return Err(r.err("neumann line must be '<n1> <n2> <tx> <ty>'"));
        }
        let a = node(&r, t[0])?;
        let b = node(&r, t[1])?;
        let tr = Vec2::new(r.float(t[2])?, r.float(t[3])?);
        mesh.add_neumann([a, b], tr)
            .map_err(|e| r.err(e.to_string()))?;
    }
    for (i, rest) in r.iter.by_ref() {
        if !rest.trim().is_empty() {
            r.line = i + 1;
            return Err(r.err("trailing content after neumann section"));
        }
    }
    Ok(mesh)
}

/// Reads a `mesh2d v1` file.
pub fn read_mesh2d(path: impl AsRef<std::path::Path>) -> Result<VolumeMesh> {
    let p = path.as_ref();
    let text = std::fs::read_to_string(p).map_err(|e| PorodeError::io(p, e))?;
    parse_mesh2d(&text, &p.display().to_string())
}
