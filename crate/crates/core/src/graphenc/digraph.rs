use std::fmt;

use serde::{Deserialize, Serialize};

use super::perm::Permutation;
use crate::error::{Error, Result};

/// Directed graph on `n` vertices given by its full 0/1 adjacency matrix.
/// Loops are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digraph {
    n: usize,
    adj: Vec<bool>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            adj: vec![false; n * n],
        }
    }

    /// All-ones matrix: every arc including every loop.
    pub fn complete(n: usize) -> Self {
        Digraph {
            n,
            adj: vec![true; n * n],
        }
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut adj = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::parse(
                    i + 2,
                    format!("row {i} has {} entries, expected {n}", row.len()),
                ));
            }
            for &v in row {
                match v {
                    0 => adj.push(false),
                    1 => adj.push(true),
                    _ => return Err(Error::parse(i + 2, format!("entry {v} is not 0 or 1"))),
                }
            }
        }
        Ok(Digraph { n, adj })
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(i, j) in arcs {
            g.adj[i * n + j] = true;
        }
        g
    }

    /// The graph whose row-major adjacency bits, most significant first, spell
    /// `code`. Enumerating `0..2^{n²}` visits all digraphs in lexicographic
    /// order of their row-major strings.
    pub fn from_code(n: usize, code: u64) -> Self {
        let len = n * n;
        Digraph {
            n,
            adj: (0..len).map(|k| code >> (len - 1 - k) & 1 == 1).collect(),
        }
    }

    /// Every digraph on `n` vertices; `n <= 8` so the count fits in `u64`.
    pub fn all(n: usize) -> impl Iterator<Item = Digraph> {
        assert!(n * n < 64, "too many digraphs to enumerate");
        (0..1u64 << (n * n)).map(move |c| Self::from_code(n, c))
    }

    /// Directed `n`-cycle `0 → 1 → … → n-1 → 0`.
    pub fn cycle(n: usize) -> Self {
        let arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_arcs(n, &arcs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    pub fn arc_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count()
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.adj
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|r| r.iter().map(|&b| u8::from(b)).collect())
            .collect()
    }

    /// Row-major `0`/`1` string of the matrix.
    pub fn code_string(&self) -> String {
        self.adj.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// `P_σ^T C P_σ`, i.e. the graph with entries `C'_{ij} = C_{σ(i)σ(j)}`.
    pub fn relabel(&self, sigma: &Permutation) -> Digraph {
        let n = self.n;
        let mut adj = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                adj.push(self.get(sigma.apply(i), sigma.apply(j)));
            }
        }
        Digraph { n, adj }
    }

    /// The relabeling whose row-major string is lexicographically smallest
    /// over all `n!` relabelings.
    pub fn canonical_form(&self) -> Digraph {
        Permutation::all(self.n)
            .map(|s| self.relabel(&s))
            .min_by(|a, b| a.adj.cmp(&b.adj))
            .expect("S_n is non-empty")
    }

    pub fn is_isomorphic(&self, other: &Digraph) -> bool {
        self.n == other.n && self.canonical_form() == other.canonical_form()
    }

    /// Graph file text: `n` on the first line, then one row per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses either the plain text format or a JSON object with an `adj`
    /// field (and optional `n`). Comment lines start with `#`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (first, header) = lines.next().ok_or_else(|| Error::parse(1, "missing vertex count"))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::parse(first, format!("invalid vertex count `{header}`")))?;
        let mut adj = Vec::with_capacity(n * n);
        for row in 0..n {
            let (line, body) = lines
                .next()
                .ok_or_else(|| Error::parse(first + row + 1, format!("missing row {row}")))?;
            let cells: Vec<&str> = body.split_whitespace().collect();
            if cells.len() != n {
                return Err(Error::parse(
                    line,
                    format!("row {row} has {} entries, expected {n}", cells.len()),
                ));
            }
            for cell in cells {
                match cell {
                    "0" => adj.push(false),
                    "1" => adj.push(true),
                    other => return Err(Error::parse(line, format!("entry `{other}` is not 0 or 1"))),
                }
            }
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::parse(line, format!("extra row beyond the declared {n}")));
        }
        Ok(Digraph { n, adj })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let file: GraphJson = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        let g = Digraph::from_rows(&file.adj)?;
        if let Some(n) = file.n {
            if n != g.n {
                return Err(Error::parse(1, format!("declared n = {n} but matrix has {} rows", g.n)));
            }
        }
        Ok(g)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    adj: Vec<Vec<u8>>,
}

impl Serialize for Digraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            n: Some(self.n),
            adj: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = GraphJson::deserialize(d)?;
        Digraph::from_rows(&file.adj).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code_string())
    }
}
