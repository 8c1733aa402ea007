use std::fmt;

use super::GraphKind;
use crate::{Error, Result};

/// Dense 0/1 matrix, packed row-major into 64-bit words.
///
/// Bit `p = i * n_cols + j` lives in word `p / 64` at position
/// `63 - p % 64`, so comparing the word vectors compares the row-major
/// bit strings lexicographically. The derived `Ord` therefore orders
/// matrices of equal shape by their row-major bit string.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMatrix {
    n_rows: usize,
    n_cols: usize,
    words: Vec<u64>,
}

#[inline]
fn locate(p: usize) -> (usize, u64) {
    (p >> 6, 1u64 << (63 - (p & 63)))
}

impl BinaryMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        let bits = n_rows * n_cols;
        BinaryMatrix {
            n_rows,
            n_cols,
            words: vec![0; bits.div_ceil(64)],
        }
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of 0/1 values. All rows must have equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(n_rows, n_cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::LengthMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    other => return Err(Error::Parse(format!("entry {other} is not 0 or 1"))),
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        let (w, mask) = locate(i * self.n_cols + j);
        self.words[w] & mask != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        let (w, mask) = locate(i * self.n_cols + j);
        if value {
            self.words[w] |= mask;
        } else {
            self.words[w] &= !mask;
        }
    }

    pub fn row_sum(&self, i: usize) -> usize {
        (0..self.n_cols).filter(|&j| self.get(i, j)).count()
    }

    pub fn col_sum(&self, j: usize) -> usize {
        (0..self.n_rows).filter(|&i| self.get(i, j)).count()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.n_rows).map(|i| self.row_sum(i)).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.n_cols).map(|j| self.col_sum(j)).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Positions of the 1-entries in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n_rows).flat_map(move |i| (0..self.n_cols).filter(move |&j| self.get(i, j)).map(move |j| (i, j)))
    }

    pub fn row(&self, i: usize) -> Vec<u8> {
        (0..self.n_cols).map(|j| self.get(i, j) as u8).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.n_rows).map(|i| self.row(i)).collect()
    }

    /// Row `i` as a string of `0`/`1` characters.
    pub fn row_string(&self, i: usize) -> String {
        (0..self.n_cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect()
    }

    /// Canonical byte encoding: `n_rows` and `n_cols` as little-endian `u32`,
    /// followed by the row-major bits packed MSB-first.
    pub fn to_key(&self) -> Vec<u8> {
        let bits = self.n_rows * self.n_cols;
        let mut key = Vec::with_capacity(8 + bits.div_ceil(8));
        key.extend_from_slice(&(self.n_rows as u32).to_le_bytes());
        key.extend_from_slice(&(self.n_cols as u32).to_le_bytes());
        let bytes = self.words.iter().flat_map(|w| w.to_be_bytes());
        key.extend(bytes.take(bits.div_ceil(8)));
        key
    }

    /// Checks the structural constraints of `kind`: square with zero diagonal
    /// for simple graphs, and symmetric for undirected graphs.
    pub fn check_kind(&self, kind: GraphKind) -> Result<()> {
        if kind == GraphKind::Bipartite {
            return Ok(());
        }
        if self.n_rows != self.n_cols {
            return Err(Error::InvalidState(format!(
                "{kind} adjacency matrix must be square, got {}x{}",
                self.n_rows, self.n_cols
            )));
        }
        for i in 0..self.n_rows {
            if self.get(i, i) {
                return Err(Error::InvalidState(format!("diagonal entry ({i},{i}) is set")));
            }
            if kind == GraphKind::Undirected {
                for j in i + 1..self.n_cols {
                    if self.get(i, j) != self.get(j, i) {
                        return Err(Error::InvalidState(format!("entries ({i},{j}) and ({j},{i}) differ")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Text form: a header line `n n' kind` followed by one line per row of
    /// space-separated digits.
    pub fn to_text(&self, kind: GraphKind) -> String {
        let mut out = format!("{} {} {}\n", self.n_rows, self.n_cols, kind);
        for i in 0..self.n_rows {
            let line: Vec<&str> = (0..self.n_cols).map(|j| if self.get(i, j) { "1" } else { "0" }).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<(BinaryMatrix, GraphKind)> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing header line".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("header must be `n n' kind`, got `{header}`")));
        }
        let parse_count = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("bad dimension `{s}`: {e}")));
        let n_rows = parse_count(fields[0])?;
        let n_cols = parse_count(fields[1])?;
        let kind: GraphKind = fields[2].parse()?;

        let mut m = BinaryMatrix::zeros(n_rows, n_cols);
        for i in 0..n_rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {n_rows} rows, found {i}")))?;
            let digits: Vec<&str> = line.split_whitespace().collect();
            if digits.len() != n_cols {
                return Err(Error::Parse(format!("row {i} has {} entries, expected {n_cols}", digits.len())));
            }
            for (j, d) in digits.iter().enumerate() {
                match *d {
                    "0" => {}
                    "1" => m.set(i, j, true),
                    other => return Err(Error::Parse(format!("entry `{other}` at ({i},{j}) is not 0 or 1"))),
                }
            }
        }
        if lines.next().is_some() {
            return Err(Error::Parse(format!("more than {n_rows} rows")));
        }
        m.check_kind(kind)?;
        Ok((m, kind))
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n_rows).map(|i| self.row_string(i)).collect();
        write!(f, "BinaryMatrix[{}]", rows.join("/"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_row_major_lexicographic() {
        let a = BinaryMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap();
        let b = BinaryMatrix::from_rows(&[[1, 0], [0, 1]]).unwrap();
        assert!(a < b);
        // wide matrices spill over one word
        let mut c = BinaryMatrix::zeros(3, 30);
        let mut d = BinaryMatrix::zeros(3, 30);
        c.set(2, 29, true);
        d.set(2, 28, true);
        assert!(c < d);
    }

    #[test]
    fn key_encodes_shape_and_bits() {
        let a = BinaryMatrix::from_rows(&[[1, 0, 1], [0, 1, 0]]).unwrap();
        assert_eq!(a.to_key(), vec![2, 0, 0, 0, 3, 0, 0, 0, 0b1010_1000]);
    }

    #[test]
    fn text_round_trip() {
        let a = BinaryMatrix::from_rows(&[[0, 1, 1], [1, 0, 0], [1, 0, 0]]).unwrap();
        let text = a.to_text(GraphKind::Undirected);
        assert_eq!(text, "3 3 undirected\n0 1 1\n1 0 0\n1 0 0\n");
        let (b, kind) = BinaryMatrix::parse_text(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(kind, GraphKind::Undirected);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(BinaryMatrix::parse_text("2 2 bipartite\n1 0\n").is_err());
        assert!(BinaryMatrix::parse_text("2 2 bipartite\n1 2\n0 1\n").is_err());
        assert!(BinaryMatrix::parse_text("2 2 undirected\n0 1\n0 0\n").is_err());
        assert!(BinaryMatrix::parse_text("2 2 directed\n1 0\n0 0\n").is_err());
        assert!(BinaryMatrix::parse_text("2 2 weird\n1 0\n0 1\n").is_err());
    }

    #[test]
    fn sums() {
        let a = BinaryMatrix::from_rows(&[[1, 1, 0], [0, 1, 1]]).unwrap();
        assert_eq!(a.row_sums(), vec![2, 2]);
        assert_eq!(a.col_sums(), vec![1, 2, 1]);
        assert_eq!(a.count_ones(), 4);
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![(0, 0), (0, 1), (1, 1), (1, 2)]);
    }
}
