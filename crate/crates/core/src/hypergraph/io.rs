//! Plain edge-list files.
//!
//! ```text
//! n r
//! v1 v2 ... vr
//! ...
//! ```
//!
//! One edge per line, labels ascending and 1-based. Blank lines and lines
//! starting with `#` are ignored. The reader runs the full validation.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::OrderedHypergraph;
use crate::{Error, Result};

fn parse_line(line: &str, lineno: usize) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<u32>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("{tok:?} is not a vertex label"),
            })
        })
        .collect()
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<OrderedHypergraph> {
    let mut header: Option<(u32, usize)> = None;
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums = parse_line(line, lineno)?;
        match header {
            None => {
                let [n, r] = nums[..] else {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "header must be `n r`".into(),
                    });
                };
                header = Some((n, r as usize));
            }
            Some((_, r)) => {
                if nums.len() != r {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("edge has {} vertices, expected {r}", nums.len()),
                    });
                }
                rows.push(nums);
            }
        }
    }
    let (n, r) = header.ok_or(Error::Parse {
        line: 0,
        message: "missing `n r` header".into(),
    })?;
    Ok(OrderedHypergraph::from_edges(n, r, rows)?)
}

pub fn write_edge_list<W: Write>(mut w: W, h: &OrderedHypergraph) -> std::io::Result<()> {
    writeln!(w, "{} {}", h.n(), h.r())?;
    for e in h.edges() {
        let mut first = true;
        for v in e {
            if !first {
                w.write_all(b" ")?;
            }
            write!(w, "{v}")?;
            first = false;
        }
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<OrderedHypergraph> {
    let path = path.as_ref();
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_edge_list(BufReader::new(f))
}

pub fn save_edge_list(path: impl AsRef<Path>, h: &OrderedHypergraph) -> Result<()> {
    let path = path.as_ref();
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_edge_list(BufWriter::new(f), h).map_err(|e| Error::io(path, e))
}
