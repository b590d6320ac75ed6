//! Vertex-coloring instances and the classical feasibility oracle.
//!
//! An instance fixes a vertex count `n`, a color count `k` and an edge list.
//! Each color is encoded in `m = ceil(log2 k)` bits, so an assignment of all
//! `n` vertices occupies `m * n` bits. The classical oracle compares full
//! m-bit values: when `k < 2^m` the surplus bit patterns count as extra
//! distinct colors, which is exactly the predicate the compiled circuit
//! evaluates. Use [`ColoringInstance::within_color_bound`] to filter those
//! out when a strict k-coloring is wanted.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Default bound on `m * n` for exhaustive assignment enumeration.
pub const ENUMERATION_CAP_BITS: usize = 24;

/// Number of qubits needed to encode one of `k` colors: the smallest `m`
/// with `2^m >= k`.
pub fn qubits_per_vertex(k: u32) -> Result<usize> {
    if k < 2 {
        return Err(Error::InvalidInstance(format!(
            "a coloring needs at least 2 colors, got {k}"
        )));
    }
    Ok((u32::BITS - (k - 1).leading_zeros()) as usize)
}

/// A k-coloring problem on an undirected graph.
///
/// Edges are stored 0-based, normalized to `(low, high)` and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringInstance {
    vertex_count: usize,
    color_count: u32,
    bits_per_vertex: usize,
    edges: Vec<(usize, usize)>,
}

impl ColoringInstance {
    pub fn new(vertex_count: usize, color_count: u32, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidInstance("vertex count must be >= 1".into()));
        }
        let bits_per_vertex = qubits_per_vertex(color_count)?;
        let mut normalized = BTreeSet::new();
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidInstance(format!(
                    "edge ({u}, {v}) out of range for {vertex_count} vertices"
                )));
            }
            normalized.insert((u.min(v), u.max(v)));
        }
        Ok(ColoringInstance {
            vertex_count,
            color_count,
            bits_per_vertex,
            edges: normalized.into_iter().collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn color_count(&self) -> u32 {
        self.color_count
    }

    /// Qubits per vertex, `ceil(log2 k)`.
    pub fn bits_per_vertex(&self) -> usize {
        self.bits_per_vertex
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Normalized edge list: 0-based `(low, high)` pairs in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Total number of data bits, `m * n`.
    pub fn data_bits(&self) -> usize {
        self.bits_per_vertex * self.vertex_count
    }

    /// True iff no edge joins two vertices carrying the same m-bit value.
    pub fn is_feasible(&self, assignment: &Assignment) -> bool {
        assert_eq!(
            assignment.colors.len(),
            self.vertex_count,
            "assignment length must match vertex count"
        );
        let bound = 1u32 << self.bits_per_vertex;
        assert!(
            assignment.colors.iter().all(|&c| c < bound),
            "assignment color does not fit in {} bits",
            self.bits_per_vertex
        );
        self.edges
            .iter()
            .all(|&(u, v)| assignment.colors[u] != assignment.colors[v])
    }

    /// True iff every color value is below `k` (not a surplus bit pattern).
    pub fn within_color_bound(&self, assignment: &Assignment) -> bool {
        assignment.colors.iter().all(|&c| c < self.color_count)
    }

    /// All feasible assignments in ascending bit-pattern order, subject to
    /// the default enumeration cap.
    pub fn enumerate_feasible(&self) -> Result<Vec<Assignment>> {
        self.enumerate_feasible_capped(ENUMERATION_CAP_BITS)
    }

    pub fn enumerate_feasible_capped(&self, cap_bits: usize) -> Result<Vec<Assignment>> {
        let bits = self.data_bits();
        if bits > cap_bits {
            return Err(Error::ResourceLimit(format!(
                "enumeration needs {bits} bits, cap is {cap_bits}"
            )));
        }
        let mut feasible = Vec::new();
        for pattern in 0..(1u64 << bits) {
            let assignment = Assignment::from_bits(pattern, self.vertex_count, self.bits_per_vertex);
            if self.is_feasible(&assignment) {
                feasible.push(assignment);
            }
        }
        Ok(feasible)
    }
}

/// One color per vertex. Values live in `[0, 2^m)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Assignment {
    pub colors: Vec<u32>,
}

impl Assignment {
    pub fn new(colors: Vec<u32>) -> Self {
        Assignment { colors }
    }

    /// Decode an assignment from a data-bit pattern: vertex `v` occupies bits
    /// `[v*m, v*m + m)`, least significant bit first.
    pub fn from_bits(bits: u64, vertex_count: usize, bits_per_vertex: usize) -> Self {
        let mask = (1u64 << bits_per_vertex) - 1;
        let colors = (0..vertex_count)
            .map(|v| ((bits >> (v * bits_per_vertex)) & mask) as u32)
            .collect();
        Assignment { colors }
    }

    /// Inverse of [`Assignment::from_bits`].
    pub fn to_bits(&self, bits_per_vertex: usize) -> u64 {
        self.colors
            .iter()
            .enumerate()
            .fold(0u64, |acc, (v, &c)| acc | ((c as u64) << (v * bits_per_vertex)))
    }
}

/// What `parse_dimacs` found besides the instance itself.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    /// Edge count declared on the `p` line.
    pub declared_edges: usize,
    /// Duplicate `e` lines dropped during normalization.
    pub duplicates_removed: usize,
    /// Set when the declared count differs from the deduplicated count.
    pub edge_count_mismatch: bool,
}

/// Parse a DIMACS edge-format graph (`c` comments, one `p edge <n> <g>`
/// header, `e <u> <v>` lines with 1-based vertices). The color count is not
/// part of the format and is supplied by the caller.
pub fn parse_dimacs(text: &str, color_count: u32) -> Result<(ColoringInstance, ParseReport)> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut last_line = 0;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "duplicate `p` line".into(),
                    });
                }
                if tokens.len() != 4 || tokens[1] != "edge" {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "expected `p edge <n> <g>`".into(),
                    });
                }
                let n = parse_count(tokens[2], line_no, "vertex count")?;
                let g = parse_count(tokens[3], line_no, "edge count")?;
                header = Some((n, g));
            }
            Some("e") => {
                let (n, _) = header.ok_or(Error::Parse {
                    line: line_no,
                    message: "`e` line before `p edge` header".into(),
                })?;
                if tokens.len() != 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "expected `e <u> <v>`".into(),
                    });
                }
                let u = parse_count(tokens[1], line_no, "vertex")?;
                let v = parse_count(tokens[2], line_no, "vertex")?;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("vertex out of range 1..={n}"),
                    });
                }
                if u == v {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("self-loop at vertex {u}"),
                    });
                }
                edges.push((u - 1, v - 1));
            }
            Some(other) => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unrecognized line type `{other}`"),
                });
            }
        }
    }

    let (n, declared) = header.ok_or(Error::Parse {
        line: last_line.max(1),
        message: "missing `p edge` header".into(),
    })?;
    let instance = ColoringInstance::new(n, color_count, &edges).map_err(|e| match e {
        Error::InvalidInstance(msg) => Error::Parse {
            line: last_line,
            message: msg,
        },
        other => other,
    })?;
    let duplicates_removed = edges.len() - instance.edge_count();
    let report = ParseReport {
        declared_edges: declared,
        duplicates_removed,
        edge_count_mismatch: declared != instance.edge_count(),
    };
    Ok((instance, report))
}

fn parse_count(token: &str, line: usize, what: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("malformed {what} `{token}`"),
    })
}
