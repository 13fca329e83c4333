//! Flag types, orbit matrices, line pairs and quiver segments.
//!
//! An orbit of pairs of n-step flags in an r-dimensional space is labelled by
//! an n-by-n matrix of non-negative integers with entry sum r; its row sums
//! give the type of the left flag and its column sums the type of the right
//! flag. The same orbit can be read as a multiset of r "line pairs" (i,j):
//! one basis line entering the left flag at step i and the right flag at
//! step j. Off-diagonal entries correspond to segments of the linear
//! A_n quiver, which drive the Hall-algebra side of the picture.

use crate::{Error, Result};
use std::fmt;

/// A decomposition of r into n ordered non-negative parts: the type of a flag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidInput("composition needs n >= 1 parts".into()));
        }
        Ok(Self { parts })
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn r(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> u32 {
        self.parts[i - 1]
    }

    /// The unit composition delta(i) in n parts (1-based i).
    pub fn delta(n: usize, i: usize) -> Self {
        let mut parts = vec![0; n];
        parts[i - 1] = 1;
        Self { parts }
    }

    /// d + alpha_i - alpha_{i+1}; `None` if d_{i+1} = 0 or i = n.
    pub fn raise(&self, i: usize) -> Option<Self> {
        if i >= self.n() || self.parts[i] == 0 {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[i - 1] += 1;
        parts[i] -= 1;
        Some(Self { parts })
    }

    /// d - alpha_i + alpha_{i+1}; `None` if d_i = 0 or i = n.
    pub fn lower(&self, i: usize) -> Option<Self> {
        if i >= self.n() || self.parts[i - 1] == 0 {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[i - 1] -= 1;
        parts[i] += 1;
        Some(Self { parts })
    }

    /// Prefix sums (dim V_1, ..., dim V_n) of the flag type.
    pub fn prefix_sums(&self) -> Vec<u32> {
        let mut acc = 0;
        self.parts
            .iter()
            .map(|&p| {
                acc += p;
                acc
            })
            .collect()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidInput(format!("bad composition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

/// All compositions of r into n parts, in lexicographic order.
pub fn compositions(n: usize, r: u32) -> Vec<Composition> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fill(&mut out, &mut current, 0, r);
    out
}

fn fill(out: &mut Vec<Composition>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Composition {
            parts: current.clone(),
        });
        return;
    }
    for v in 0..=remaining {
        current[pos] = v;
        fill(out, current, pos + 1, remaining - v);
    }
}

/// An n-by-n matrix of non-negative integers labelling a GL(V)-orbit of flag
/// pairs. Entries sum to r; row sums are the left flag type, column sums the
/// right flag type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitMatrix {
    n: usize,
    entries: Vec<u32>, // row-major
}

impl OrbitMatrix {
    pub fn new(n: usize, entries: Vec<u32>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "orbit matrix needs n*n entries, got {} for n={n}",
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn diagonal(d: &Composition) -> Self {
        let n = d.n();
        let mut m = Self::zero(n);
        for i in 1..=n {
            m.set(i, i, d.part(i));
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// 1-based entry access.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[(i - 1) * self.n + (j - 1)] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: i64) -> Result<()> {
        let cur = self.get(i, j) as i64 + v;
        if cur < 0 {
            return Err(Error::InvalidInput(format!(
                "entry ({i},{j}) would become negative"
            )));
        }
        self.set(i, j, cur as u32);
        Ok(())
    }

    pub fn row_type(&self) -> Composition {
        let parts = (1..=self.n)
            .map(|i| (1..=self.n).map(|j| self.get(i, j)).sum())
            .collect();
        Composition { parts }
    }

    pub fn col_type(&self) -> Composition {
        let parts = (1..=self.n)
            .map(|j| (1..=self.n).map(|i| self.get(i, j)).sum())
            .collect();
        Composition { parts }
    }

    pub fn is_diagonal(&self) -> bool {
        (1..=self.n).all(|i| (1..=self.n).all(|j| i == j || self.get(i, j) == 0))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.n);
        for i in 1..=self.n {
            for j in 1..=self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Prefix-sum matrix r_{ij} = sum_{a<=i, b<=j} A_{ab}.
    pub fn rank_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.n;
        let mut r = vec![vec![0u32; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut v = self.entries[i * n + j];
                if i > 0 {
                    v += r[i - 1][j];
                }
                if j > 0 {
                    v += r[i][j - 1];
                }
                if i > 0 && j > 0 {
                    v -= r[i - 1][j - 1];
                }
                r[i][j] = v;
            }
        }
        r
    }

    /// Parse the canonical text form "a,b;c,d" (rows joined by semicolons).
    pub fn parse(s: &str) -> Result<Self> {
        let rows: Vec<Vec<u32>> = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::InvalidInput(format!("bad matrix entry {t:?}")))
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!("matrix {s:?} is not square")));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    /// Segments of the upper triangle: entry A_{ij} with i<j contributes
    /// A_{ij} copies of the segment [i, j-1]. These are the indecomposable
    /// summands of f/(f cap f') for [f,f'] in this orbit.
    pub fn upper_segments(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                for _ in 0..self.get(i, j) {
                    out.push(Segment::new(i, j - 1).unwrap());
                }
            }
        }
        out.sort();
        out
    }

    /// Segments of the lower triangle: entry A_{ij} with i>j contributes
    /// A_{ij} copies of [j, i-1], the summands of f'/(f cap f').
    pub fn lower_segments(&self) -> Vec<Segment> {
        self.transpose().upper_segments()
    }

    /// Type of the join flag f1 + f2 for [f1,f2] in this orbit:
    /// row type shifted by alpha_a - alpha_{b+1} for every lower segment [a,b].
    pub fn join_type(&self) -> Composition {
        let mut parts = self.row_type().parts;
        for seg in self.lower_segments() {
            parts[seg.lo() - 1] += 1;
            parts[seg.hi()] -= 1; // hi+1 in 1-based is index hi in 0-based
        }
        Composition { parts }
    }
}

impl fmt::Display for OrbitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (1..=self.n)
            .map(|i| {
                (1..=self.n)
                    .map(|j| self.get(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// All n-by-n orbit matrices with entry sum r, in lexicographic order of the
/// flattened entries.
pub fn all_orbit_matrices(n: usize, r: u32) -> Vec<OrbitMatrix> {
    compositions(n * n, r)
        .into_iter()
        .map(|c| OrbitMatrix {
            n,
            entries: c.parts,
        })
        .collect()
}

/// All orbit matrices with the given row and column types.
pub fn matrices_with_margins(d: &Composition, e: &Composition) -> Vec<OrbitMatrix> {
    assert_eq!(d.n(), e.n());
    let n = d.n();
    let mut out = Vec::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut col_rem: Vec<u32> = e.parts().to_vec();
    fill_rows(d, n, &mut rows, &mut col_rem, &mut out);
    out
}

fn fill_rows(
    d: &Composition,
    n: usize,
    rows: &mut Vec<Vec<u32>>,
    col_rem: &mut Vec<u32>,
    out: &mut Vec<OrbitMatrix>,
) {
    if rows.len() == n {
        if col_rem.iter().all(|&c| c == 0) {
            out.push(OrbitMatrix {
                n,
                entries: rows.concat(),
            });
        }
        return;
    }
    let target = d.part(rows.len() + 1);
    let mut row = vec![0u32; n];
    fill_row(d, n, 0, target, &mut row, rows, col_rem, out);
}

#[allow(clippy::too_many_arguments)]
fn fill_row(
    d: &Composition,
    n: usize,
    j: usize,
    remaining: u32,
    row: &mut Vec<u32>,
    rows: &mut Vec<Vec<u32>>,
    col_rem: &mut Vec<u32>,
    out: &mut Vec<OrbitMatrix>,
) {
    if j == n {
        if remaining == 0 {
            rows.push(row.clone());
            fill_rows(d, n, rows, col_rem, out);
            rows.pop();
        }
        return;
    }
    let max = remaining.min(col_rem[j]);
    for v in 0..=max {
        row[j] = v;
        col_rem[j] -= v;
        fill_row(d, n, j + 1, remaining - v, row, rows, col_rem, out);
        col_rem[j] += v;
    }
    row[j] = 0;
}

/// The multiset of r line pairs (i,j) of an orbit, canonically listed sorted
/// by j, then i. Pair (i,j) occurs with multiplicity A_{ij}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinePairs {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl LinePairs {
    pub fn from_matrix(a: &OrbitMatrix) -> Self {
        let n = a.n();
        let mut pairs = Vec::with_capacity(a.r() as usize);
        for j in 1..=n {
            for i in 1..=n {
                for _ in 0..a.get(i, j) {
                    pairs.push((i, j));
                }
            }
        }
        Self { n, pairs }
    }

    /// Build directly from (i,j) pairs; canonicalizes the listing.
    pub fn new(n: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs
            .iter()
            .any(|&(i, j)| i < 1 || j < 1 || i > n || j > n)
        {
            return Err(Error::InvalidInput("line pair index out of range".into()));
        }
        pairs.sort_by_key(|&(i, j)| (j, i));
        Ok(Self { n, pairs })
    }

    pub fn to_matrix(&self) -> OrbitMatrix {
        let mut a = OrbitMatrix::zero(self.n);
        for &(i, j) in &self.pairs {
            let v = a.get(i, j);
            a.set(i, j, v + 1);
        }
        a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.pairs.len()
    }

    /// Pairs in canonical order: j ascending, then i ascending.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Left-flag entry steps i_1, ..., i_r in the canonical j-sorted listing.
    pub fn i_sequence(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(i, _)| i).collect()
    }
}

/// An interval [lo, hi] of vertices of the linear A_n quiver; the support of
/// an indecomposable representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    lo: usize,
    hi: usize,
}

impl Segment {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo < 1 || hi < lo {
            return Err(Error::InvalidInput(format!("bad segment [{lo},{hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    /// Number of vertices in the support; always positive.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }
}

/// Total order on segments: [i,j] <= [i',j'] iff j < j', or j = j' and i <= i'.
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.hi, self.lo).cmp(&(other.hi, other.lo))
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

pub fn segment_leq(s: &Segment, t: &Segment) -> bool {
    s <= t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_counts() {
        assert_eq!(compositions(2, 2).len(), 3);
        assert_eq!(compositions(1, 5), vec![Composition::new(vec![5]).unwrap()]);
        // brute-force count C(5,2) = 10
        assert_eq!(compositions(3, 3).len(), 10);
        // lexicographic order
        let c = compositions(2, 2);
        assert_eq!(c[0].parts(), &[0, 2]);
        assert_eq!(c[1].parts(), &[1, 1]);
        assert_eq!(c[2].parts(), &[2, 0]);
    }

    #[test]
    fn matrix_parse_roundtrip() {
        let a = OrbitMatrix::parse("0,1;1,0").unwrap();
        assert_eq!(a.get(1, 2), 1);
        assert_eq!(a.to_string(), "0,1;1,0");
        assert!(OrbitMatrix::parse("0,1;1").is_err());
    }

    #[test]
    fn pairs_roundtrip() {
        let a = OrbitMatrix::parse("0,1;1,0").unwrap();
        let lp = LinePairs::from_matrix(&a);
        assert_eq!(lp.pairs(), &[(2, 1), (1, 2)]);
        assert_eq!(lp.to_matrix(), a);

        let id = OrbitMatrix::parse("1,0;0,1").unwrap();
        assert_eq!(LinePairs::from_matrix(&id).pairs(), &[(1, 1), (2, 2)]);

        let rep = OrbitMatrix::parse("2,0;0,0").unwrap();
        assert_eq!(LinePairs::from_matrix(&rep).pairs(), &[(1, 1), (1, 1)]);
    }

    #[test]
    fn pairs_roundtrip_exhaustive_small() {
        for n in 1..=3 {
            for r in 0..=4 {
                for a in all_orbit_matrices(n, r) {
                    assert_eq!(LinePairs::from_matrix(&a).to_matrix(), a);
                }
            }
        }
    }

    #[test]
    fn segment_order() {
        let s11 = Segment::new(1, 1).unwrap();
        let s12 = Segment::new(1, 2).unwrap();
        let s22 = Segment::new(2, 2).unwrap();
        assert!(segment_leq(&s11, &s12));
        assert!(!segment_leq(&s12, &s22) || true);
        // [1,2] vs [2,2]: hi 2 = 2, lo 1 <= 2
        assert!(segment_leq(&s12, &s22));
        assert!(!segment_leq(&s22, &s12));
        assert!(segment_leq(&s22, &s22));
    }

    #[test]
    fn segments_of_matrix() {
        let a = OrbitMatrix::parse("0,1;1,0").unwrap();
        assert_eq!(a.upper_segments(), vec![Segment::new(1, 1).unwrap()]);
        assert_eq!(a.lower_segments(), vec![Segment::new(1, 1).unwrap()]);

        let d = OrbitMatrix::parse("1,0;0,1").unwrap();
        assert!(d.upper_segments().is_empty());
        assert!(d.lower_segments().is_empty());

        // 3x3 with single entry A_{13} = 1, rest on diagonal
        let m = OrbitMatrix::parse("0,0,1;0,1,0;0,0,1").unwrap();
        assert_eq!(m.upper_segments(), vec![Segment::new(1, 2).unwrap()]);
    }

    #[test]
    fn rank_matrix_examples() {
        let a = OrbitMatrix::parse("0,1;1,0").unwrap();
        assert_eq!(a.rank_matrix(), vec![vec![0, 1], vec![1, 2]]);
        let id = OrbitMatrix::parse("1,0;0,1").unwrap();
        assert_eq!(id.rank_matrix(), vec![vec![1, 1], vec![1, 2]]);
        let one = OrbitMatrix::parse("3").unwrap();
        assert_eq!(one.rank_matrix(), vec![vec![3]]);
    }

    #[test]
    fn types_from_pairs() {
        let a = OrbitMatrix::parse("1,1;1,0").unwrap();
        let lp = LinePairs::from_matrix(&a);
        let mut row = vec![0u32; 2];
        let mut col = vec![0u32; 2];
        for &(i, j) in lp.pairs() {
            row[i - 1] += 1;
            col[j - 1] += 1;
        }
        assert_eq!(row, a.row_type().parts());
        assert_eq!(col, a.col_type().parts());
    }

    #[test]
    fn join_type_example() {
        let a = OrbitMatrix::parse("0,1;1,0").unwrap();
        assert_eq!(a.join_type().parts(), &[2, 0]);
    }
}
