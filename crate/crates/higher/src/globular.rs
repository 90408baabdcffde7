//! Finite globular sets: cells graded by dimension with source and target
//! maps satisfying `ss = st` and `ts = tt`.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    /// Indices into the cells of the previous dimension; absent at dimension 0.
    pub src: Option<usize>,
    pub tgt: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GlobularSet {
    cells: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GlobularError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("duplicate cell {0}")]
    Duplicate(String),
    #[error("cell {cell}: unknown boundary cell {name}")]
    Unknown { cell: String, name: String },
    #[error("cell {cell}: boundary {name} has dimension {found}, expected {expected}")]
    Dimension {
        cell: String,
        name: String,
        found: usize,
        expected: usize,
    },
    #[error("cell {0}: a 0-cell has no boundary")]
    BoundaryOnPoint(String),
    #[error("cell {0}: missing source or target")]
    MissingBoundary(String),
    #[error("cell {cell}: source {src} and target {tgt} are not parallel")]
    NotGlobular { cell: String, src: String, tgt: String },
}

/// One `cell` line before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCell {
    pub dim: usize,
    pub name: String,
    pub boundary: Option<(String, String)>,
}

impl GlobularSet {
    /// The empty globular set.
    pub fn new() -> Self {
        GlobularSet::default()
    }

    /// Highest dimension with at least one cell, if any.
    pub fn max_dim(&self) -> Option<usize> {
        self.cells.iter().rposition(|c| !c.is_empty())
    }

    pub fn cells(&self, dim: usize) -> &[Cell] {
        self.cells.get(dim).map_or(&[], |c| c.as_slice())
    }

    pub fn cell(&self, dim: usize, i: usize) -> &Cell {
        &self.cells[dim][i]
    }

    pub fn count(&self, dim: usize) -> usize {
        self.cells(dim).len()
    }

    pub fn total(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn src(&self, dim: usize, i: usize) -> usize {
        self.cells[dim][i].src.expect("positive dimension")
    }

    pub fn tgt(&self, dim: usize, i: usize) -> usize {
        self.cells[dim][i].tgt.expect("positive dimension")
    }

    /// `(dimension, index)` of the named cell.
    pub fn find(&self, name: &str) -> Option<(usize, usize)> {
        self.cells
            .iter()
            .enumerate()
            .find_map(|(d, cs)| cs.iter().position(|c| c.name == name).map(|i| (d, i)))
    }

    /// Whether this is a graph: no cells above dimension 1.
    pub fn is_graph(&self) -> bool {
        self.max_dim().is_none_or(|d| d <= 1)
    }

    /// Appends a cell without validation; [`validate_globular`] is the
    /// checked route.
    pub(crate) fn push_unchecked(&mut self, dim: usize, cell: Cell) -> usize {
        while self.cells.len() <= dim {
            self.cells.push(Vec::new());
        }
        self.cells[dim].push(cell);
        self.cells[dim].len() - 1
    }

    /// A graph with the given vertex names and `(name, src, tgt)` edges.
    pub fn graph(vertices: &[String], edges: &[(String, usize, usize)]) -> Self {
        let mut g = GlobularSet::new();
        for v in vertices {
            g.push_unchecked(
                0,
                Cell {
                    name: v.clone(),
                    src: None,
                    tgt: None,
                },
            );
        }
        for (n, s, t) in edges {
            g.push_unchecked(
                1,
                Cell {
                    name: n.clone(),
                    src: Some(*s),
                    tgt: Some(*t),
                },
            );
        }
        g
    }

    /// Checks `s(s x) = s(t x)` and `t(s x) = t(t x)` for every cell of
    /// dimension at least 2.
    pub fn check_globularity(&self) -> Result<(), GlobularError> {
        for d in 2..self.cells.len() {
            for (i, c) in self.cells[d].iter().enumerate() {
                let (s, t) = (self.src(d, i), self.tgt(d, i));
                if self.src(d - 1, s) != self.src(d - 1, t) || self.tgt(d - 1, s) != self.tgt(d - 1, t) {
                    return Err(GlobularError::NotGlobular {
                        cell: c.name.clone(),
                        src: self.cells[d - 1][s].name.clone(),
                        tgt: self.cells[d - 1][t].name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The `cell` lines describing this set, lowest dimension first.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (d, cs) in self.cells.iter().enumerate() {
            for c in cs {
                match (c.src, c.tgt) {
                    (Some(a), Some(b)) => {
                        let names = &self.cells[d - 1];
                        s.push_str(&format!("cell {d} {} src {} tgt {}\n", c.name, names[a].name, names[b].name));
                    }
                    _ => s.push_str(&format!("cell {d} {}\n", c.name)),
                }
            }
        }
        s
    }
}

/// Builds a globular set from cells listed so that boundaries come first.
pub fn validate_globular(raw: &[RawCell]) -> Result<GlobularSet, GlobularError> {
    let mut g = GlobularSet::new();
    let mut names: HashMap<&str, (usize, usize)> = HashMap::new();
    for c in raw {
        if names.contains_key(c.name.as_str()) {
            return Err(GlobularError::Duplicate(c.name.clone()));
        }
        let cell = match (&c.boundary, c.dim) {
            (Some(_), 0) => return Err(GlobularError::BoundaryOnPoint(c.name.clone())),
            (None, 0) => Cell {
                name: c.name.clone(),
                src: None,
                tgt: None,
            },
            (None, _) => return Err(GlobularError::MissingBoundary(c.name.clone())),
            (Some((s, t)), d) => {
                let look = |n: &String| -> Result<usize, GlobularError> {
                    let &(dim, i) = names.get(n.as_str()).ok_or_else(|| GlobularError::Unknown {
                        cell: c.name.clone(),
                        name: n.clone(),
                    })?;
                    if dim + 1 != d {
                        return Err(GlobularError::Dimension {
                            cell: c.name.clone(),
                            name: n.clone(),
                            found: dim,
                            expected: d - 1,
                        });
                    }
                    Ok(i)
                };
                Cell {
                    name: c.name.clone(),
                    src: Some(look(s)?),
                    tgt: Some(look(t)?),
                }
            }
        };
        let i = g.push_unchecked(c.dim, cell);
        names.insert(c.name.as_str(), (c.dim, i));
    }
    g.check_globularity()?;
    Ok(g)
}

/// Parses `cell <dim> <name> [src <name> tgt <name>]` lines; `--` starts a
/// comment.
pub fn parse_globular(text: &str) -> Result<GlobularSet, GlobularError> {
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split("--").next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let bad = |m: &str| GlobularError::Syntax {
            line: i + 1,
            message: m.into(),
        };
        let (dim, name, boundary) = match words[..] {
            ["cell", d, n] => (d, n, None),
            ["cell", d, n, "src", s, "tgt", t] => (d, n, Some((s.to_owned(), t.to_owned()))),
            _ => return Err(bad("expected `cell <dim> <name> [src <name> tgt <name>]`")),
        };
        let dim = dim.parse().map_err(|_| bad("dimension must be a natural number"))?;
        raw.push(RawCell {
            dim,
            name: name.to_owned(),
            boundary,
        });
    }
    validate_globular(&raw)
}
