//! Finite bigraded dimension bookkeeping for spectral-sequence arguments.
//!
//! A `PageTable` stores the finitely many nonzero entries of one page; the
//! page-r differential has bidegree `(r, 1-r)`, the right-pointing
//! convention for a three-column first page. Differentials are specified by
//! rank only, which is all the source arguments ever pin down ("the maps in
//! the middle rows are non-zero", "has one-dimensional image").
//!
//! Entries printed as `*` are represented by an explicit unknown sentinel.
//! Unknowns poison everything they touch: a cell stays unknown across
//! pages, an antidiagonal containing one has no abutment dimension, and the
//! Euler sum reports them separately. The one forced case: a differential
//! of unspecified rank out of or into a zero-dimensional space has rank 0.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecSeqError {
    #[error("infeasible rank {rank} out of ({p},{q}): source dim {src}, target dim {dst}")]
    InfeasibleRank { p: i32, q: i32, rank: u32, src: String, dst: String },
    #[error("entry at ({p},{q}) would become negative")]
    NegativeDimension { p: i32, q: i32 },
}

/// A dimension that may be the paper's `*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Known(u32),
    Unknown,
}

impl Dim {
    pub fn known(self) -> Option<u32> {
        match self {
            Dim::Known(n) => Some(n),
            Dim::Unknown => None,
        }
    }

    fn is_zero(self) -> bool {
        self == Dim::Known(0)
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Known(n) => write!(f, "{n}"),
            Dim::Unknown => write!(f, "*"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DimRepr {
    Num(u32),
    Star(String),
}

/// Sparse page of nonnegative dimensions, absent cells are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageTable {
    pub page: u32,
    entries: BTreeMap<(i32, i32), Dim>,
}

impl PageTable {
    pub fn new(page: u32) -> Self {
        PageTable { page, entries: BTreeMap::new() }
    }

    pub fn with_entries(page: u32, cells: &[(i32, i32, u32)]) -> Self {
        let mut t = PageTable::new(page);
        for &(p, q, n) in cells {
            t.set(p, q, Dim::Known(n));
        }
        t
    }

    pub fn set(&mut self, p: i32, q: i32, dim: Dim) {
        if dim.is_zero() {
            self.entries.remove(&(p, q));
        } else {
            self.entries.insert((p, q), dim);
        }
    }

    pub fn dim(&self, p: i32, q: i32) -> Dim {
        self.entries.get(&(p, q)).copied().unwrap_or(Dim::Known(0))
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(i32, i32), &Dim)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Serialize for PageTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            page: u32,
            entries: Vec<(i32, i32, &'a DimRepr)>,
        }
        let reprs: Vec<((i32, i32), DimRepr)> = self
            .entries
            .iter()
            .map(|(&(p, q), &d)| {
                let r = match d {
                    Dim::Known(n) => DimRepr::Num(n),
                    Dim::Unknown => DimRepr::Star("*".into()),
                };
                ((p, q), r)
            })
            .collect();
        let repr = Repr {
            page: self.page,
            entries: reprs.iter().map(|((p, q), r)| (*p, *q, r)).collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PageTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            page: u32,
            entries: Vec<(i32, i32, DimRepr)>,
        }
        let repr = Repr::deserialize(d)?;
        let mut t = PageTable::new(repr.page);
        for (p, q, r) in repr.entries {
            let dim = match r {
                DimRepr::Num(n) => Dim::Known(n),
                DimRepr::Star(s) if s == "*" => Dim::Unknown,
                DimRepr::Star(s) => {
                    return Err(serde::de::Error::custom(format!(
                        "dimension must be a number or \"*\", got {s:?}"
                    )))
                }
            };
            t.set(p, q, dim);
        }
        Ok(t)
    }
}

/// Rank of the outgoing page differential per cell; absent cells are rank 0.
/// `Unknown` records a map the source does not pin down.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DifferentialSpec {
    ranks: BTreeMap<(i32, i32), Dim>,
}

impl DifferentialSpec {
    pub fn new() -> Self {
        DifferentialSpec::default()
    }

    pub fn rank(mut self, p: i32, q: i32, rank: u32) -> Self {
        self.ranks.insert((p, q), Dim::Known(rank));
        self
    }

    pub fn unknown_rank(mut self, p: i32, q: i32) -> Self {
        self.ranks.insert((p, q), Dim::Unknown);
        self
    }
}

/// Bidegree of `d_r`.
fn target_of(page: u32, p: i32, q: i32) -> (i32, i32) {
    (p + page as i32, q + 1 - page as i32)
}

fn source_of(page: u32, p: i32, q: i32) -> (i32, i32) {
    (p - page as i32, q - 1 + page as i32)
}

/// Effective rank out of `(p,q)`, after forcing rank 0 where either
/// endpoint is zero-dimensional.
fn rank_out(t: &PageTable, d: &DifferentialSpec, p: i32, q: i32) -> Result<Dim, SpecSeqError> {
    let declared = d.ranks.get(&(p, q)).copied().unwrap_or(Dim::Known(0));
    let source = t.dim(p, q);
    let (tp, tq) = target_of(t.page, p, q);
    let target = t.dim(tp, tq);
    match declared {
        Dim::Known(k) => {
            let fits = |dim: Dim| dim.known().is_none_or(|n| k <= n);
            if fits(source) && fits(target) {
                Ok(Dim::Known(k))
            } else {
                Err(SpecSeqError::InfeasibleRank {
                    p,
                    q,
                    rank: k,
                    src: source.to_string(),
                    dst: target.to_string(),
                })
            }
        }
        Dim::Unknown => {
            if source.is_zero() || target.is_zero() {
                Ok(Dim::Known(0))
            } else {
                Ok(Dim::Unknown)
            }
        }
    }
}

fn sub(a: Dim, b: Dim) -> Dim {
    match (a, b) {
        (Dim::Known(x), Dim::Known(y)) => Dim::Known(x.saturating_sub(y)),
        _ => Dim::Unknown,
    }
}

/// Turns one page by the given differential ranks: each cell loses the rank
/// leaving it and the rank arriving into it.
pub fn next_page(t: &PageTable, d: &DifferentialSpec) -> Result<PageTable, SpecSeqError> {
    let mut cells: Vec<(i32, i32)> = t.entries.keys().copied().collect();
    for &(p, q) in d.ranks.keys() {
        cells.push((p, q));
        cells.push(target_of(t.page, p, q));
    }
    cells.sort_unstable();
    cells.dedup();

    let mut out = PageTable::new(t.page + 1);
    for (p, q) in cells {
        let old = t.dim(p, q);
        let leaving = rank_out(t, d, p, q)?;
        let (sp, sq) = source_of(t.page, p, q);
        let arriving = rank_out(t, d, sp, sq)?;
        if let (Dim::Known(o), Dim::Known(l), Dim::Known(a)) = (old, leaving, arriving) {
            if l + a > o {
                return Err(SpecSeqError::NegativeDimension { p, q });
            }
        }
        out.set(p, q, sub(sub(old, leaving), arriving));
    }
    Ok(out)
}

/// Totals along antidiagonals `n = p + q`; an unknown cell poisons its
/// antidiagonal.
pub fn abutment_dims(t: &PageTable) -> BTreeMap<i32, Dim> {
    let mut out: BTreeMap<i32, Dim> = BTreeMap::new();
    for (&(p, q), &dim) in &t.entries {
        let n = p + q;
        let cur = out.entry(n).or_insert(Dim::Known(0));
        *cur = match (*cur, dim) {
            (Dim::Known(a), Dim::Known(b)) => Dim::Known(a + b),
            _ => Dim::Unknown,
        };
    }
    out
}

/// Signed total of the known entries plus a count of unknowns. The full
/// alternating sum is conserved by `next_page` because the two ends of
/// every differential carry opposite signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCheck {
    pub known_sum: i64,
    pub unknown_cells: usize,
}

impl EulerCheck {
    pub fn exact(self) -> Option<i64> {
        (self.unknown_cells == 0).then_some(self.known_sum)
    }
}

pub fn euler_check(t: &PageTable) -> EulerCheck {
    let mut sum = 0i64;
    let mut unknown = 0usize;
    for (&(p, q), &dim) in &t.entries {
        match dim {
            Dim::Known(n) => {
                let sign = if (p + q).rem_euclid(2) == 0 { 1 } else { -1 };
                sum += sign * i64::from(n);
            }
            Dim::Unknown => unknown += 1,
        }
    }
    EulerCheck { known_sum: sum, unknown_cells: unknown }
}
