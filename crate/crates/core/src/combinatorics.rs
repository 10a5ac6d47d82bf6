//! Partitions, Gelfand-Zetlin patterns, and the canonical bases they index.
//!
//! A partition with `d` parts labels an irrep of U(d); a Gelfand-Zetlin
//! pattern (triangular array whose consecutive rows interlace) labels one
//! basis vector of that irrep. The one-row irrep `[n, 0, ..., 0]` is the
//! symmetric subspace of n qudits; its patterns are in bijection with
//! occupation vectors, which is the basis the compressor works in.

use std::fmt;

use crate::error::{Error, Result};

/// Non-increasing vector of non-negative integers with explicit trailing
/// zeros, labeling a U(d) irrep where `d = parts.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("partition needs at least one part".into()));
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "parts must be non-increasing, got {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    /// The one-row partition `[n, 0, ..., 0]` with `d` parts.
    pub fn symmetric(n: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("d must be >= 1".into()));
        }
        let mut parts = vec![0; d];
        parts[0] = n;
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, i: usize) -> usize {
        self.parts[i]
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// True iff this partition is `[w, 0, ..., 0]`.
    pub fn is_one_row(&self) -> bool {
        self.parts.iter().skip(1).all(|&p| p == 0)
    }

    /// `self + e_j` for 1-based position `j`, if the result is still a
    /// partition.
    pub fn add_box(&self, j: usize) -> Option<Partition> {
        if j == 0 || j > self.parts.len() {
            return None;
        }
        if j > 1 && self.parts[j - 2] == self.parts[j - 1] {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[j - 1] += 1;
        Some(Partition { parts })
    }

    /// All partitions `self + e_j`, ordered by increasing `j` (which is
    /// descending lexicographic order of the results).
    pub fn add_boxes(&self) -> Vec<Partition> {
        (1..=self.parts.len()).filter_map(|j| self.add_box(j)).collect()
    }

    /// All partitions obtained by decrementing one part; empty for weight 0.
    pub fn remove_boxes(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for j in 0..self.parts.len() {
            if self.parts[j] == 0 {
                continue;
            }
            if j + 1 < self.parts.len() && self.parts[j] == self.parts[j + 1] {
                continue;
            }
            let mut parts = self.parts.clone();
            parts[j] -= 1;
            out.push(Partition { parts });
        }
        out
    }

    /// Betweenness: `self` (d-1 parts, a trailing zero is accepted as
    /// padding) interlaces `lambda` (d parts) iff
    /// `lambda[i] >= self[i] >= lambda[i+1]` for all i.
    pub fn interlaces(&self, lambda: &Partition) -> Result<bool> {
        let d = lambda.num_parts();
        let mu = if self.num_parts() == d - 1 {
            &self.parts[..]
        } else if self.num_parts() == d && self.parts[d - 1] == 0 {
            &self.parts[..d - 1]
        } else {
            return Err(Error::InvalidArgument(format!(
                "interlacing expects {} parts against {}, got {}",
                d - 1,
                d,
                self.num_parts()
            )));
        };
        Ok((0..d - 1).all(|i| lambda.parts[i] >= mu[i] && mu[i] >= lambda.parts[i + 1]))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Triangular array of non-negative integers; `rows[0]` is the top (length
/// d) row, `rows[s]` has length `d - s`, and consecutive rows interlace.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GelfandPattern {
    rows: Vec<Vec<usize>>,
}

impl GelfandPattern {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::InvalidArgument("pattern needs at least one row".into()));
        }
        for (s, row) in rows.iter().enumerate() {
            if row.len() != d - s {
                return Err(Error::InvalidArgument(format!(
                    "row {s} has length {}, expected {}",
                    row.len(),
                    d - s
                )));
            }
        }
        for s in 0..d {
            let upper = Partition::new(rows[s].clone())?;
            if s + 1 < d {
                let lower = Partition::new(rows[s + 1].clone())?;
                if !lower.interlaces(&upper)? {
                    return Err(Error::InvalidArgument(format!(
                        "rows {} and {} do not interlace: {:?} / {:?}",
                        s,
                        s + 1,
                        rows[s],
                        rows[s + 1]
                    )));
                }
            }
        }
        Ok(GelfandPattern { rows })
    }

    /// Number of levels d (top row length).
    pub fn levels(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// The level-`s` row (length s, 1-based level; level d is the top row).
    pub fn row(&self, s: usize) -> &[usize] {
        &self.rows[self.rows.len() - s]
    }

    pub fn top_row(&self) -> Partition {
        Partition { parts: self.rows[0].clone() }
    }

    /// The pattern below the top row, as a (d-1)-level pattern.
    pub fn sub_pattern(&self) -> Result<GelfandPattern> {
        if self.rows.len() < 2 {
            return Err(Error::InvalidArgument("no sub-pattern below level 1".into()));
        }
        Ok(GelfandPattern { rows: self.rows[1..].to_vec() })
    }

    /// Stack `top` above a (d-1)-level pattern.
    pub fn with_top(top: &Partition, sub: &GelfandPattern) -> Result<GelfandPattern> {
        let mut rows = Vec::with_capacity(sub.rows.len() + 1);
        rows.push(top.parts().to_vec());
        rows.extend(sub.rows.iter().cloned());
        GelfandPattern::new(rows)
    }
}

/// Patterns compare lexicographically, rows top to bottom and entries left
/// to right; canonical enumeration order is descending in this order.
impl PartialOrd for GelfandPattern {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GelfandPattern {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rows.cmp(&other.rows)
    }
}

/// Letter counts `(c_1, ..., c_d)` of a weight-n type class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationVector {
    counts: Vec<usize>,
}

impl OccupationVector {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidArgument("occupation needs at least one slot".into()));
        }
        Ok(OccupationVector { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn d(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, i: usize) -> usize {
        self.counts[i]
    }

    pub fn weight(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `self + e_i` for 0-based slot i.
    pub fn incremented(&self, i: usize) -> OccupationVector {
        let mut counts = self.counts.clone();
        counts[i] += 1;
        OccupationVector { counts }
    }

    /// `self - e_i` for 0-based slot i, if the count is positive.
    pub fn decremented(&self, i: usize) -> Option<OccupationVector> {
        if self.counts[i] == 0 {
            return None;
        }
        let mut counts = self.counts.clone();
        counts[i] -= 1;
        Some(OccupationVector { counts })
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `C(n, k)` in 64 bits, with an explicit error on overflow.
pub fn binomial(n: usize, k: usize) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - k + i + 1) as u128)
            .ok_or_else(|| Error::Overflow(format!("C({n},{k})")))?;
        acc /= (i + 1) as u128; // exact: product of (i+1) consecutive integers
    }
    u64::try_from(acc).map_err(|_| Error::Overflow(format!("C({n},{k}) exceeds 64 bits")))
}

/// Dimension of the symmetric weight-n subspace of d-dimensional letters:
/// `C(n+d-1, d-1)`.
pub fn dim_symmetric(n: usize, d: usize) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be >= 1".into()));
    }
    binomial(n + d - 1, d - 1)
}

/// All patterns with the given top row, in canonical (descending
/// lexicographic) order.
pub fn enumerate_patterns(lambda: &Partition, d: usize) -> Result<Vec<GelfandPattern>> {
    if lambda.num_parts() != d {
        return Err(Error::InvalidArgument(format!(
            "top row {lambda} has {} parts, expected {d}",
            lambda.num_parts()
        )));
    }
    let mut out = Vec::new();
    let mut rows = vec![lambda.parts().to_vec()];
    descend(&mut rows, &mut out);
    Ok(out)
}

fn descend(rows: &mut Vec<Vec<usize>>, out: &mut Vec<GelfandPattern>) {
    let cur = rows.last().unwrap().clone();
    if cur.len() == 1 {
        out.push(GelfandPattern { rows: rows.clone() });
        return;
    }
    let mut next = vec![0usize; cur.len() - 1];
    fill_row(&cur, 0, &mut next, rows, out);
}

fn fill_row(
    cur: &[usize],
    i: usize,
    next: &mut Vec<usize>,
    rows: &mut Vec<Vec<usize>>,
    out: &mut Vec<GelfandPattern>,
) {
    if i == next.len() {
        rows.push(next.clone());
        descend(rows, out);
        rows.pop();
        return;
    }
    // betweenness bounds; non-increasing within the row follows from them
    for v in (cur[i + 1]..=cur[i]).rev() {
        next[i] = v;
        fill_row(cur, i + 1, next, rows, out);
    }
}

/// Irrep dimension by direct pattern enumeration.
pub fn dim_irrep(lambda: &Partition, d: usize) -> Result<u64> {
    Ok(enumerate_patterns(lambda, d)?.len() as u64)
}

/// All weight-n occupation vectors over d slots, in canonical (descending
/// lexicographic) order.
pub fn enumerate_occupations(n: usize, d: usize) -> Result<Vec<OccupationVector>> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be >= 1".into()));
    }
    let mut out = Vec::new();
    let mut counts = vec![0usize; d];
    fill_occupation(n, 0, &mut counts, &mut out);
    Ok(out)
}

fn fill_occupation(rem: usize, slot: usize, counts: &mut Vec<usize>, out: &mut Vec<OccupationVector>) {
    if slot == counts.len() - 1 {
        counts[slot] = rem;
        out.push(OccupationVector { counts: counts.clone() });
        return;
    }
    for v in (0..=rem).rev() {
        counts[slot] = v;
        fill_occupation(rem - v, slot + 1, counts, out);
    }
}

/// Rank of `c` in the canonical order of weight-n occupation vectors,
/// in `0..dim_symmetric(n, d)`.
pub fn occupation_index(c: &OccupationVector) -> Result<usize> {
    let d = c.d();
    let mut rank: u64 = 0;
    let mut rem = c.weight();
    for s in 0..d - 1 {
        for v in c.count(s) + 1..=rem {
            rank += dim_symmetric(rem - v, d - s - 1)?;
        }
        rem -= c.count(s);
    }
    usize::try_from(rank).map_err(|_| Error::Overflow(format!("rank of {c}")))
}

/// The unique symmetric pattern whose level-s row sums are the partial
/// sums `m_s = c_1 + ... + c_s`.
pub fn pattern_of_occupation(c: &OccupationVector) -> Result<GelfandPattern> {
    let d = c.d();
    let mut rows = Vec::with_capacity(d);
    let mut m: usize = c.counts().iter().sum();
    for s in (1..=d).rev() {
        let mut row = vec![0usize; s];
        row[0] = m;
        rows.push(row);
        if s > 1 {
            m -= c.count(s - 1);
        }
    }
    GelfandPattern::new(rows)
}

/// Inverse of [`pattern_of_occupation`]; errors unless every row of the
/// pattern is one-row (i.e. the pattern belongs to a symmetric irrep).
pub fn occupation_of_pattern(p: &GelfandPattern) -> Result<OccupationVector> {
    let d = p.levels();
    let mut counts = vec![0usize; d];
    let mut below = 0usize;
    for s in 1..=d {
        let row = p.row(s);
        if row.iter().skip(1).any(|&x| x != 0) {
            return Err(Error::InvalidArgument(format!(
                "pattern row {row:?} is not one-row; not a symmetric pattern"
            )));
        }
        counts[s - 1] = row[0] - below;
        below = row[0];
    }
    OccupationVector::new(counts)
}
