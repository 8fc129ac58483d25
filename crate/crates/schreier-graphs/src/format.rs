//! Plain-text graph files.
//!
//! ```text
//! schreier n=4 d=3 inv=1,2,3
//! perm 1: 2 1 4 3
//! perm 2: 3 4 1 2
//! perm 3: 4 3 2 1
//! #sha256:<hex digest of every preceding byte>
//! ```
//!
//! A lift file adds `base r=<r>` after the header and one `edge <letter> <u> <v>`
//! line per letter before the permutation lines. All indices are 1-based.
//! Other lines starting with `#` are comments. The checksum line is optional
//! and, when present, must come last.

use std::fmt::Write as _;
use std::path::Path;

use group_core::Alphabet;
use sha2::{Digest, Sha256};

use crate::{BaseGraph, GraphError, LiftGraph, Result, SchreierGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphFile {
    Graph(SchreierGraph),
    Lift(LiftGraph),
}

fn perm_lines(out: &mut String, g: &SchreierGraph) {
    for i in 0..g.alphabet().d() {
        let _ = write!(out, "perm {}:", i + 1);
        for &y in g.perm(i) {
            let _ = write!(out, " {}", y + 1);
        }
        out.push('\n');
    }
}

fn header(out: &mut String, g: &SchreierGraph) {
    let _ = writeln!(
        out,
        "schreier n={} d={} inv={}",
        g.n(),
        g.alphabet().d(),
        g.alphabet().involution_string()
    );
}

fn seal(mut body: String) -> String {
    let digest = hex::encode(Sha256::digest(body.as_bytes()));
    let _ = writeln!(body, "#sha256:{digest}");
    body
}

/// Serializes a graph, prefixed by optional comment lines and sealed with a checksum.
pub fn export_graph(g: &SchreierGraph, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    header(&mut out, g);
    perm_lines(&mut out, g);
    seal(out)
}

pub fn export_lift(lift: &LiftGraph, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    header(&mut out, lift.fiber());
    let _ = writeln!(out, "base r={}", lift.base().r());
    for (i, &(u, v)) in lift.base().edges().iter().enumerate() {
        let _ = writeln!(out, "edge {} {} {}", i + 1, u + 1, v + 1);
    }
    perm_lines(&mut out, lift.fiber());
    seal(out)
}

struct Cursor<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

impl<'a> Cursor<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let item = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| err(self.last_line + 1, 1, format!("unexpected end of file, expected {what}")))?;
        self.pos += 1;
        Ok(item)
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).map(|l| l.1)
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(k),
            (true, Some(b)) => {
                out.push((b + 1, &s[b..k]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((b + 1, &s[b..]));
    }
    out
}

fn key_value<'a>(line: usize, tok: (usize, &'a str), key: &str) -> Result<&'a str> {
    tok.1
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| err(line, tok.0, format!("expected `{key}=`")))
}

fn number(line: usize, col: usize, s: &str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| err(line, col, format!("`{s}` is not a non-negative integer")))
}

fn one_based(line: usize, col: usize, s: &str, bound: usize) -> Result<usize> {
    let v = number(line, col, s)?;
    if v == 0 || v > bound {
        return Err(err(line, col, format!("{v} is outside 1..={bound}")));
    }
    Ok(v - 1)
}

pub fn import(text: &str) -> Result<GraphFile> {
    let mut lines = Vec::new();
    let mut checksum: Option<(usize, usize, &str)> = None; // (byte offset, line, digest)
    let mut offset = 0usize;
    let mut last_line = 0;
    for (k, raw) in text.split_inclusive('\n').enumerate() {
        let line_no = k + 1;
        last_line = line_no;
        let line = raw.trim_end_matches(['\n', '\r']);
        if let Some((_, l, _)) = checksum {
            if !line.trim().is_empty() {
                return Err(err(line_no, 1, format!("content after the checksum on line {l}")));
            }
        } else if let Some(hexd) = line.trim().strip_prefix("#sha256:") {
            checksum = Some((offset, line_no, hexd.trim()));
        } else if !line.trim().is_empty() && !line.trim_start().starts_with('#') {
            lines.push((line_no, line));
        }
        offset += raw.len();
    }
    if let Some((end, _, expected)) = checksum {
        let actual = hex::encode(Sha256::digest(&text.as_bytes()[..end]));
        if !actual.eq_ignore_ascii_case(expected) {
            return Err(GraphError::Checksum {
                expected: expected.to_string(),
                actual,
            });
        }
    }
    let mut cur = Cursor {
        lines,
        pos: 0,
        last_line,
    };

    let (ln, head) = cur.next("the `schreier` header")?;
    let toks = tokens(head);
    if toks.first().map(|t| t.1) != Some("schreier") || toks.len() != 4 {
        return Err(err(ln, 1, "expected `schreier n=<n> d=<d> inv=<i1,...,id>`"));
    }
    let n = number(ln, toks[1].0 + 2, key_value(ln, toks[1], "n")?)?;
    let d = number(ln, toks[2].0 + 2, key_value(ln, toks[2], "d")?)?;
    let inv_str = key_value(ln, toks[3], "inv")?;
    let mut inv = Vec::with_capacity(d);
    let mut col = toks[3].0 + 4;
    for part in inv_str.split(',') {
        inv.push(one_based(ln, col, part, d)? + 1);
        col += part.len() + 1;
    }
    let alphabet =
        Alphabet::from_one_based(d, &inv).map_err(|e| err(ln, toks[3].0, e.to_string()))?;

    let base = if cur.peek().is_some_and(|l| l.trim_start().starts_with("base")) {
        let (ln, line) = cur.next("`base r=<r>`")?;
        let toks = tokens(line);
        if toks.len() != 2 {
            return Err(err(ln, 1, "expected `base r=<r>`"));
        }
        let r = number(ln, toks[1].0 + 2, key_value(ln, toks[1], "r")?)?;
        if r == 0 {
            return Err(err(ln, toks[1].0, "r must be positive"));
        }
        let mut edges = vec![None; d];
        for _ in 0..d {
            let (ln, line) = cur.next("an `edge <letter> <u> <v>` line")?;
            let toks = tokens(line);
            if toks.len() != 4 || toks[0].1 != "edge" {
                return Err(err(ln, 1, "expected `edge <letter> <u> <v>`"));
            }
            let i = one_based(ln, toks[1].0, toks[1].1, d)?;
            let u = one_based(ln, toks[2].0, toks[2].1, r)?;
            let v = one_based(ln, toks[3].0, toks[3].1, r)?;
            if edges[i].replace((u, v)).is_some() {
                return Err(err(ln, toks[1].0, format!("edge {} declared twice", i + 1)));
            }
        }
        let edges: Vec<(usize, usize)> = edges.into_iter().map(|e| e.unwrap()).collect();
        Some(BaseGraph::new(r, &alphabet, edges).map_err(|e| err(ln, 1, e.to_string()))?)
    } else {
        None
    };

    let mut perms: Vec<Option<Vec<u32>>> = vec![None; d];
    let mut last_perm_line = ln;
    for _ in 0..d {
        let (ln, line) = cur.next("a `perm <i>: ...` line")?;
        last_perm_line = ln;
        let toks = tokens(line);
        if toks.len() < 2 || toks[0].1 != "perm" || !toks[1].1.ends_with(':') {
            return Err(err(ln, 1, "expected `perm <i>: <p(1)> ... <p(n)>`"));
        }
        let i = one_based(ln, toks[1].0, toks[1].1.trim_end_matches(':'), d)?;
        let values = &toks[2..];
        if values.len() != n {
            let col = values.last().map_or(toks[1].0 + toks[1].1.len(), |t| t.0 + t.1.len());
            return Err(err(ln, col, format!("expected {n} entries, found {}", values.len())));
        }
        let perm = values
            .iter()
            .map(|&(c, s)| one_based(ln, c, s, n).map(|v| v as u32))
            .collect::<Result<Vec<u32>>>()?;
        if perms[i].replace(perm).is_some() {
            return Err(err(ln, toks[1].0, format!("perm {} declared twice", i + 1)));
        }
    }
    if let Some(&(ln, _)) = cur.lines.get(cur.pos) {
        return Err(err(ln, 1, "unexpected trailing content"));
    }
    let perms: Vec<Vec<u32>> = perms.into_iter().map(|p| p.unwrap()).collect();
    let located = |e: GraphError| match e {
        GraphError::Parse { .. } => e,
        other => err(last_perm_line, 1, other.to_string()),
    };
    match base {
        Some(base) => Ok(GraphFile::Lift(LiftGraph::from_raw(base, perms, n).map_err(located)?)),
        None => {
            let perms = perms
                .into_iter()
                .map(|p| p.into_iter().map(|x| x as usize).collect())
                .collect();
            Ok(GraphFile::Graph(
                SchreierGraph::from_permutations(&alphabet, perms).map_err(located)?,
            ))
        }
    }
}

pub fn read_file(path: impl AsRef<Path>) -> Result<GraphFile> {
    import(&std::fs::read_to_string(path)?)
}

pub fn write_file(path: impl AsRef<Path>, file: &GraphFile, comments: &[&str]) -> Result<()> {
    let text = match file {
        GraphFile::Graph(g) => export_graph(g, comments),
        GraphFile::Lift(l) => export_lift(l, comments),
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const K4: &str = "schreier n=4 d=3 inv=1,2,3\nperm 1: 2 1 4 3\nperm 2: 3 4 1 2\nperm 3: 4 3 2 1\n";

    #[test]
    fn hand_written_k4() {
        assert_eq!(import(K4).unwrap(), GraphFile::Graph(SchreierGraph::k4()));
        let sealed = export_graph(&SchreierGraph::k4(), &[]);
        assert!(sealed.starts_with(K4));
        assert_eq!(import(&sealed).unwrap(), GraphFile::Graph(SchreierGraph::k4()));
    }

    #[test]
    fn truncated_and_corrupt() {
        let cut = &K4[..K4.len() - 5];
        match import(cut).unwrap_err() {
            GraphError::Parse { line, .. } => assert_eq!(line, 4),
            e => panic!("{e}"),
        }
        let two = "schreier n=4 d=3 inv=1,2,3\nperm 1: 2 1 4 3\nperm 2: 3 4 1 2\n";
        match import(two).unwrap_err() {
            GraphError::Parse { line, col, .. } => assert_eq!((line, col), (4, 1)),
            e => panic!("{e}"),
        }
        let bad_value = K4.replace("perm 2: 3 4 1 2", "perm 2: 3 9 1 2");
        match import(&bad_value).unwrap_err() {
            GraphError::Parse { line, col, .. } => assert_eq!((line, col), (3, 11)),
            e => panic!("{e}"),
        }
        let sealed = export_graph(&SchreierGraph::k4(), &[]);
        let tampered = sealed.replacen("perm 1: 2 1 4 3", "perm 1: 2 1 3 4", 1);
        assert!(matches!(import(&tampered), Err(GraphError::Checksum { .. })));
    }

    #[test]
    fn involution_checked_on_import() {
        let text = "schreier n=3 d=4 inv=2,1,4,3\nperm 1: 2 3 1\nperm 2: 2 3 1\nperm 3: 1 2 3\nperm 4: 1 2 3\n";
        assert!(matches!(import(text), Err(GraphError::Parse { .. })));
    }
}
