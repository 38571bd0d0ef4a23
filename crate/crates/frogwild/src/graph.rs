//! Directed-graph ingestion and random-walk step semantics.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use rand::Rng;
use thiserror::Error;

use crate::rank::RankVector;

/// Edge-list dialects accepted by the loader.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeListFormat {
    /// Every non-blank line is "src dst".
    PlainPairs,
    /// Like [`EdgeListFormat::PlainPairs`] but lines starting with '#' are
    /// comments (the convention used by the SNAP dataset dumps).
    SnapWithComments,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed edge at line {line}: expected two nonnegative integers")]
    Malformed { line: usize },
    #[error("vertex id at line {line} overflows the supported range")]
    IdOverflow { line: usize },
    #[error("edge list is empty")]
    Empty,
    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    VertexOutOfRange { vertex: usize, n: usize },
}

/// What ingestion did to the raw edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestReport {
    pub vertices: usize,
    pub edges: usize,
    pub duplicates_collapsed: usize,
    pub self_loops: usize,
    pub dangling: usize,
}

/// Immutable directed graph in compressed sparse form. Vertex ids are dense
/// (`0..n`), duplicate edges are collapsed, self-loops are kept.
#[derive(Debug, Clone)]
pub struct DirectedGraph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    in_degree: Vec<u32>,
    dangling: Vec<u32>,
}

impl DirectedGraph {
    /// Builds a graph from raw (src, dst) pairs: ids are densified in
    /// ascending order of the original labels and duplicates collapse.
    pub fn from_edges(raw: &[(u64, u64)]) -> Result<(Self, IngestReport), GraphError> {
        if raw.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut ids: Vec<u64> = raw.iter().flat_map(|&(s, d)| [s, d]).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() > u32::MAX as usize {
            return Err(GraphError::IdOverflow { line: 0 });
        }
        let relabel = |id: u64| ids.binary_search(&id).expect("id present") as u32;

        let mut edges: Vec<(u32, u32)> = raw
            .iter()
            .map(|&(s, d)| (relabel(s), relabel(d)))
            .collect();
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        let duplicates_collapsed = before - edges.len();
        let self_loops = edges.iter().filter(|(s, d)| s == d).count();

        let n = ids.len();
        let mut offsets = vec![0usize; n + 1];
        for &(s, _) in &edges {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets: Vec<u32> = edges.iter().map(|&(_, d)| d).collect();
        let mut in_degree = vec![0u32; n];
        for &t in &targets {
            in_degree[t as usize] += 1;
        }
        let dangling: Vec<u32> = (0..n as u32)
            .filter(|&v| offsets[v as usize] == offsets[v as usize + 1])
            .collect();

        let report = IngestReport {
            vertices: n,
            edges: edges.len(),
            duplicates_collapsed,
            self_loops,
            dangling: dangling.len(),
        };
        Ok((
            Self {
                n,
                offsets,
                targets,
                in_degree,
                dangling,
            },
            report,
        ))
    }

    /// Parses edge-list text. Exposed separately from [`Self::load_edge_list`]
    /// so untrusted input can be fed in without touching the filesystem.
    pub fn parse_edge_list(
        text: &str,
        format: EdgeListFormat,
    ) -> Result<(Self, IngestReport), GraphError> {
        let mut edges = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if trimmed.starts_with('#') {
                match format {
                    EdgeListFormat::SnapWithComments => continue,
                    EdgeListFormat::PlainPairs => {
                        return Err(GraphError::Malformed { line: line_no })
                    }
                }
            }
            let mut fields = trimmed.split_whitespace();
            let src = parse_id(fields.next(), line_no)?;
            let dst = parse_id(fields.next(), line_no)?;
            if fields.next().is_some() {
                return Err(GraphError::Malformed { line: line_no });
            }
            edges.push((src, dst));
        }
        Self::from_edges(&edges)
    }

    pub fn load_edge_list(
        path: impl AsRef<Path>,
        format: EdgeListFormat,
    ) -> Result<(Self, IngestReport), GraphError> {
        let mut text = String::new();
        BufReader::new(File::open(path)?).read_to_string(&mut text)?;
        Self::parse_edge_list(&text, format)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn out_edges(&self, v: u32) -> &[u32] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn out_degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn in_degree(&self, v: u32) -> usize {
        self.in_degree[v as usize] as usize
    }

    pub fn is_dangling(&self, v: u32) -> bool {
        self.out_degree(v) == 0
    }

    /// Vertices with zero out-degree, ascending.
    pub fn dangling(&self) -> &[u32] {
        &self.dangling
    }

    /// Index of the first out-edge of `v` in global edge order.
    pub fn edge_offset(&self, v: u32) -> usize {
        self.offsets[v as usize]
    }

    /// Iterates `(edge index, source, target)` in global edge order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, u32, u32)> + '_ {
        (0..self.n as u32).flat_map(move |src| {
            let base = self.offsets[src as usize];
            self.out_edges(src)
                .iter()
                .enumerate()
                .map(move |(i, &dst)| (base + i, src, dst))
        })
    }

    /// One-step transition distribution out of `j`: uniform over successors,
    /// or uniform over all vertices when `j` is dangling.
    pub fn step_distribution(&self, j: u32) -> Result<RankVector, GraphError> {
        if (j as usize) >= self.n {
            return Err(GraphError::VertexOutOfRange {
                vertex: j as usize,
                n: self.n,
            });
        }
        if self.is_dangling(j) {
            return Ok(RankVector::uniform(self.n));
        }
        let mut values = vec![0.0; self.n];
        let share = 1.0 / self.out_degree(j) as f64;
        for &t in self.out_edges(j) {
            values[t as usize] += share;
        }
        Ok(RankVector::new(values).expect("step distribution is on the simplex"))
    }

    /// Draws one step from [`Self::step_distribution`].
    pub fn sample_step<R: Rng>(&self, j: u32, rng: &mut R) -> u32 {
        assert!((j as usize) < self.n, "vertex {j} out of range");
        let succ = self.out_edges(j);
        if succ.is_empty() {
            rng.random_range(0..self.n as u32)
        } else {
            succ[rng.random_range(0..succ.len())]
        }
    }
}

fn parse_id(field: Option<&str>, line: usize) -> Result<u64, GraphError> {
    let field = field.ok_or(GraphError::Malformed { line })?;
    if field.bytes().all(|b| b.is_ascii_digit()) {
        field.parse().map_err(|_| GraphError::IdOverflow { line })
    } else {
        Err(GraphError::Malformed { line })
    }
}
