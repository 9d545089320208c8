//! Multi-index labels of S-patch control points.
//!
//! A label of an n-sided, depth-d patch is an n-tuple of non-negative
//! integers summing to d. Entry indexing is cyclic. Shifts move one unit from
//! an entry to a cyclic neighbour; two labels are adjacent when a single shift
//! maps one onto the other.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::{Error, Result};

pub const MAX_SIDES: usize = 12;
pub const MAX_DEPTH: usize = 16;
/// Hard cap on `|L_{n,d}|`; larger nets are rejected rather than allocated.
pub const MAX_LABELS: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(SmallVec<[u8; MAX_SIDES]>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDir {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LabelClass {
    /// On a boundary curve: `s_i + s_{i+1} = d` for some side.
    Boundary,
    /// One row in from a boundary: maximal adjacent-pair sum is `d - 1`.
    PanelRing,
    Free,
}

impl Label {
    pub fn new(entries: &[usize]) -> Result<Self> {
        if entries.len() < 3 || entries.len() > MAX_SIDES {
            return Err(Error::UnsupportedSize(format!(
                "labels need 3..={MAX_SIDES} entries, got {}",
                entries.len()
            )));
        }
        let mut s = SmallVec::new();
        for &e in entries {
            if e > MAX_DEPTH {
                return Err(Error::UnsupportedSize(format!(
                    "label entry {e} exceeds maximum depth {MAX_DEPTH}"
                )));
            }
            s.push(e as u8);
        }
        Ok(Label(s))
    }

    /// Label `depth · e_k`, the corner control point at vertex `k`.
    pub fn corner(n: usize, depth: usize, k: usize) -> Self {
        let mut s: SmallVec<[u8; MAX_SIDES]> = SmallVec::from_elem(0, n);
        s[k % n] = depth as u8;
        Label(s)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn depth(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// Entry with cyclic indexing.
    pub fn get(&self, i: usize) -> usize {
        self.0[i % self.n()] as usize
    }

    pub fn entries(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&e| e as usize)
    }

    /// Decrement entry `j` and increment its cyclic successor (forward) or
    /// predecessor (backward).
    pub fn shift(&self, j: usize, dir: ShiftDir) -> Result<Label> {
        let n = self.n();
        let j = j % n;
        if self.0[j] == 0 {
            return Err(Error::InapplicableShift {
                label: self.to_string(),
                position: j,
            });
        }
        let target = match dir {
            ShiftDir::Forward => (j + 1) % n,
            ShiftDir::Backward => (j + n - 1) % n,
        };
        let mut s = self.0.clone();
        s[j] -= 1;
        s[target] += 1;
        Ok(Label(s))
    }

    /// All labels reachable by one applicable shift, deduplicated, in the
    /// canonical (descending) order.
    pub fn neighbors(&self) -> Vec<Label> {
        let mut out: Vec<Label> = (0..self.n())
            .filter(|&j| self.0[j] > 0)
            .flat_map(|j| {
                [ShiftDir::Forward, ShiftDir::Backward]
                    .into_iter()
                    .filter_map(move |dir| self.shift(j, dir).ok())
            })
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out.dedup();
        out
    }

    /// Largest `s_i + s_{i+1}` over all sides, with the first side attaining it.
    pub fn max_pair(&self) -> (usize, usize) {
        (0..self.n())
            .map(|i| (self.get(i) + self.get(i + 1), i))
            .fold((0, 0), |best, (sum, i)| if sum > best.0 { (sum, i) } else { best })
    }

    pub fn classify(&self, depth: usize) -> LabelClass {
        let (m, _) = self.max_pair();
        if m == depth {
            LabelClass::Boundary
        } else if m + 1 == depth {
            LabelClass::PanelRing
        } else {
            LabelClass::Free
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad label entry '{t}' in '{s}': {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Label::new(&entries)
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `|L_{n,d}|`, the number of n-tuples summing to d.
pub fn label_count(n: usize, d: usize) -> u128 {
    binomial(n + d - 1, d)
}

pub(crate) fn check_size(n: usize, d: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidPolygon(n));
    }
    if n > MAX_SIDES || d > MAX_DEPTH || d == 0 {
        return Err(Error::UnsupportedSize(format!(
            "n = {n}, depth = {d}; supported are 3 <= n <= {MAX_SIDES}, 1 <= depth <= {MAX_DEPTH}"
        )));
    }
    if label_count(n, d) > MAX_LABELS as u128 {
        return Err(Error::UnsupportedSize(format!(
            "n = {n}, depth = {d} needs {} control points (limit {MAX_LABELS})",
            label_count(n, d)
        )));
    }
    Ok(())
}

/// Every label of `L_{n,d}` in lexicographically descending order, with the
/// reverse map.
#[derive(Clone, Debug)]
pub struct LabelIndex {
    n: usize,
    depth: usize,
    labels: Vec<Label>,
    ordinals: HashMap<Label, usize>,
}

impl LabelIndex {
    pub fn new(n: usize, depth: usize) -> Result<Self> {
        check_size(n, depth)?;
        let mut labels = Vec::with_capacity(label_count(n, depth) as usize);
        let mut buf = vec![0usize; n];
        enumerate_into(&mut buf, 0, depth, &mut labels);
        let ordinals = labels
            .iter()
            .enumerate()
            .map(|(o, l)| (l.clone(), o))
            .collect();
        Ok(LabelIndex {
            n,
            depth,
            labels,
            ordinals,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, ordinal: usize) -> &Label {
        &self.labels[ordinal]
    }

    pub fn ordinal(&self, label: &Label) -> Option<usize> {
        self.ordinals.get(label).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Label> {
        self.labels.iter()
    }

    /// Ordinals of the labels adjacent to `ordinal`.
    pub fn neighbor_ordinals(&self, ordinal: usize) -> Vec<usize> {
        self.labels[ordinal]
            .neighbors()
            .iter()
            .map(|l| self.ordinals[l])
            .collect()
    }

    /// Adjacency lists for the whole index.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|o| self.neighbor_ordinals(o)).collect()
    }
}

fn enumerate_into(buf: &mut [usize], pos: usize, remaining: usize, out: &mut Vec<Label>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(Label(buf.iter().map(|&e| e as u8).collect()));
        return;
    }
    for v in (0..=remaining).rev() {
        buf[pos] = v;
        enumerate_into(buf, pos + 1, remaining - v, out);
    }
}

/// Convenience wrapper around [`LabelIndex::new`].
pub fn enumerate_labels(n: usize, d: usize) -> Result<LabelIndex> {
    LabelIndex::new(n, d)
}

/// Label `s_{i,j}`: the `j`-th control point of boundary `i`, with
/// `s_i = d - j` and `s_{i+1} = j`.
pub fn boundary_label(i: usize, j: usize, n: usize, d: usize) -> Result<Label> {
    check_size(n, d)?;
    if i >= n {
        return Err(Error::IndexRange {
            what: "side",
            value: i,
            min: 0,
            max: n - 1,
        });
    }
    if j > d {
        return Err(Error::IndexRange {
            what: "boundary position",
            value: j,
            min: 0,
            max: d,
        });
    }
    let mut s: SmallVec<[u8; MAX_SIDES]> = SmallVec::from_elem(0, n);
    s[i] = (d - j) as u8;
    s[(i + 1) % n] += j as u8;
    Ok(Label(s))
}

/// Boundary panel `j` of side `i`: `n` labels starting at `s_{i,j}`, each
/// obtained from the previous by a forward shift at positions
/// `i, i+1, …, i+n-2`. The second element is `s_{i,j+1}`; one more shift at
/// `i-1` closes the loop.
pub fn panel(i: usize, j: usize, n: usize, d: usize) -> Result<Vec<Label>> {
    if j >= d {
        return Err(Error::IndexRange {
            what: "panel index",
            value: j,
            min: 0,
            max: d.saturating_sub(1),
        });
    }
    let first = boundary_label(i, j, n, d)?;
    let mut out = Vec::with_capacity(n);
    out.push(first);
    for k in 0..n - 1 {
        let next = out[k].shift(i + k, ShiftDir::Forward)?;
        out.push(next);
    }
    Ok(out)
}

/// Wrapper matching the free-function form used in the CLI and tests.
pub fn classify(s: &Label, d: usize) -> LabelClass {
    s.classify(d)
}
