//! Permutations in one-line notation.
//!
//! All external indexing is 1-based: `w.at(i)` is `w(i)` for `1 <= i <= n`.
//! Products follow `(v * w)(i) = v(w(i))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("not a permutation of 1..{n}: {word}")]
    NotAPermutation { n: usize, word: String },
    #[error("cannot parse permutation {0:?}")]
    Parse(String),
    #[error("index set must be nonempty and inside [1, {0}]")]
    BadIndexSet(usize),
    #[error("pattern of size {0} is longer than host of size {1}")]
    PatternTooLong(usize, usize),
    #[error("permutations of size {0} are not supported (max 255)")]
    TooLarge(usize),
}

/// A permutation of `[n]`, stored as its one-line word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        if n > 255 {
            return Err(PermError::TooLarge(n));
        }
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(PermError::NotAPermutation {
                    n,
                    word: format!("{images:?}"),
                });
            }
            seen[v] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|v| v as u8).collect(),
        })
    }

    /// Trusted constructor for internally generated words.
    pub(crate) fn from_u8(images: Vec<u8>) -> Self {
        debug_assert!(Permutation::new(images.iter().map(|&v| v as usize).collect()).is_ok());
        Permutation { images }
    }

    pub fn identity(n: usize) -> Self {
        Permutation::from_u8((1..=n as u8).collect())
    }

    /// `w0 = n (n-1) ... 1`.
    pub fn longest_word(n: usize) -> Self {
        Permutation::from_u8((1..=n as u8).rev().collect())
    }

    /// The adjacent transposition `s_i`, `1 <= i <= n-1`.
    pub fn simple_reflection(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "s_{i} out of range for n = {n}");
        let mut w = Permutation::identity(n);
        w.images.swap(i - 1, i);
        w
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `w(i)`, 1-based.
    #[inline]
    pub fn at(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    /// The one-line word as 1-based values.
    pub fn word(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i + 1)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize - 1] = (i + 1) as u8;
        }
        Permutation::from_u8(inv)
    }

    /// `self * other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.n() != other.n() {
            return Err(PermError::SizeMismatch(self.n(), other.n()));
        }
        Ok(Permutation::from_u8(
            other
                .images
                .iter()
                .map(|&j| self.images[j as usize - 1])
                .collect(),
        ))
    }

    /// `w0 * self * w0`.
    pub fn conjugate_by_longest(&self) -> Permutation {
        let n = self.n() as u8;
        Permutation::from_u8(self.images.iter().rev().map(|&v| n + 1 - v).collect())
    }

    /// `self * (i j)`: swap the entries in positions `i` and `j`.
    pub fn swap_positions(&self, i: usize, j: usize) -> Permutation {
        let mut images = self.images.clone();
        images.swap(i - 1, j - 1);
        Permutation::from_u8(images)
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.images;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn sign(&self) -> i64 {
        if self.length().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Inversions `(i, j)` with `i < j` and `w(i) > w(j)`, 1-based.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                if self.at(i) > self.at(j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// A reduced word `[i1, ..., ik]` with `w = s_{i1} s_{i2} ... s_{ik}`.
    ///
    /// Selection sort: move 1 to the front by adjacent position swaps, then 2, and so on.
    /// Each swap is a right multiplication `w s_j`, so the recorded letters come out in
    /// reverse.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.images.clone();
        let mut applied = Vec::with_capacity(self.length());
        for target in 0..w.len() {
            let mut p = w.iter().position(|&v| v as usize == target + 1).unwrap();
            while p > target {
                w.swap(p - 1, p);
                applied.push(p);
                p -= 1;
            }
        }
        applied.reverse();
        applied
    }

    /// Product `s_{i1} ... s_{ik}` in `S_n`.
    pub fn from_reduced_word(n: usize, word: &[usize]) -> Permutation {
        let mut w = Permutation::identity(n);
        for &i in word {
            w.images.swap(i - 1, i);
        }
        w
    }

    /// The flattening of `w` to the positions in `indices` (any order, duplicates rejected).
    pub fn restriction(&self, indices: &[usize]) -> Result<Permutation, PermError> {
        let n = self.n();
        let mut idx: Vec<usize> = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.is_empty() || idx.len() != indices.len() || idx[0] == 0 || *idx.last().unwrap() > n {
            return Err(PermError::BadIndexSet(n));
        }
        let values: Vec<u8> = idx.iter().map(|&i| self.images[i - 1]).collect();
        Ok(Permutation::from_u8(flatten(&values)))
    }

    /// Whether some subsequence of `self` is order-isomorphic to `pattern`.
    ///
    /// Depth-first search over increasing positions; a branch is cut as soon as the chosen
    /// values stop being order-isomorphic to the corresponding prefix of the pattern.
    pub fn contains_pattern(&self, pattern: &Permutation) -> Result<bool, PermError> {
        let (k, n) = (pattern.n(), self.n());
        if k > n {
            return Err(PermError::PatternTooLong(k, n));
        }
        if k == 0 {
            return Ok(true);
        }
        let mut chosen = Vec::with_capacity(k);
        Ok(search(&self.images, &pattern.images, 0, &mut chosen))
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        !matches!(self.contains_pattern(pattern), Ok(true))
    }

    pub fn avoids_321(&self) -> bool {
        // 321-avoiding iff the word is a union of two increasing subsequences:
        // track the largest value seen and the largest value below it.
        let mut max = 0u8;
        let mut second = 0u8;
        for &v in &self.images {
            if v > max {
                max = v;
            } else if v > second {
                second = v;
            } else {
                return false;
            }
        }
        true
    }

    /// `|w([1,i]) ∩ [1,j]|` for `0 <= i, j <= n`, as an `(n+1) x (n+1)` table.
    pub fn rank_matrix(&self) -> Vec<Vec<u16>> {
        let n = self.n();
        let mut r = vec![vec![0u16; n + 1]; n + 1];
        for i in 1..=n {
            let wi = self.at(i);
            let (above, row) = r.split_at_mut(i);
            for (j, cell) in row[0].iter_mut().enumerate() {
                *cell = above[i - 1][j] + u16::from(wi <= j);
            }
        }
        r
    }

    /// Bruhat order via rank matrices.
    pub fn bruhat_leq(&self, other: &Permutation) -> Result<bool, PermError> {
        if self.n() != other.n() {
            return Err(PermError::SizeMismatch(self.n(), other.n()));
        }
        let (ru, rv) = (self.rank_matrix(), other.rank_matrix());
        Ok(ru
            .iter()
            .zip(&rv)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x >= y)))
    }

    /// Coarsest block structure: maximal runs of consecutive increasing values.
    pub fn block_structure(&self) -> BlockStructure {
        let w = &self.images;
        let mut runs: Vec<(u8, usize)> = Vec::new();
        for (i, &v) in w.iter().enumerate() {
            if i > 0 && w[i - 1] + 1 == v {
                runs.last_mut().unwrap().1 += 1;
            } else {
                runs.push((v, 1));
            }
        }
        let starts: Vec<u8> = runs.iter().map(|r| r.0).collect();
        let ranks = flatten(&starts);
        BlockStructure {
            blocks: ranks
                .into_iter()
                .zip(runs)
                .map(|(r, (_, len))| (r as usize, len))
                .collect(),
        }
    }

    /// 1324-adjacency: `other` is `self` with the values at positions `a < b` swapped, and
    /// there are `c < a`, `d > b` with `w(c) < min`, `w(d) > max` of the swapped values.
    pub fn is_1324_adjacent(&self, other: &Permutation) -> Result<bool, PermError> {
        if self.n() != other.n() {
            return Err(PermError::SizeMismatch(self.n(), other.n()));
        }
        let diff: Vec<usize> = (1..=self.n())
            .filter(|&i| self.at(i) != other.at(i))
            .collect();
        if diff.len() != 2 {
            return Ok(false);
        }
        let (a, b) = (diff[0], diff[1]);
        if self.at(a) != other.at(b) || self.at(b) != other.at(a) {
            return Ok(false);
        }
        Ok(self.has_1324_witness(a, b))
    }

    /// Whether the swap of positions `a < b` is a 1324-move.
    pub fn has_1324_witness(&self, a: usize, b: usize) -> bool {
        let lo = self.at(a).min(self.at(b));
        let hi = self.at(a).max(self.at(b));
        (1..a).any(|c| self.at(c) < lo) && (b + 1..=self.n()).any(|d| self.at(d) > hi)
    }

    /// All permutations of `[n]` in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((1..=n as u8).collect()),
        }
    }

    /// 321-avoiding permutations of `[n]`, lexicographic.
    pub fn all_321_avoiding(n: usize) -> impl Iterator<Item = Permutation> {
        Permutation::all(n).filter(Permutation::avoids_321)
    }

    /// Comma-separated form, always unambiguous.
    pub fn to_comma_string(&self) -> String {
        self.word()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Rank-compress a sequence of distinct values to `1..k`.
fn flatten(values: &[u8]) -> Vec<u8> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    values
        .iter()
        .map(|v| (sorted.binary_search(v).unwrap() + 1) as u8)
        .collect()
}

fn search(host: &[u8], pattern: &[u8], from: usize, chosen: &mut Vec<u8>) -> bool {
    let k = chosen.len();
    if k == pattern.len() {
        return true;
    }
    // not enough positions left
    if host.len() - from < pattern.len() - k {
        return false;
    }
    for p in from..host.len() {
        let v = host[p];
        let consistent = chosen
            .iter()
            .zip(pattern)
            .all(|(&c, &q)| (c < v) == (q < pattern[k]));
        if consistent {
            chosen.push(v);
            if search(host, pattern, p + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

pub struct AllPermutations {
    next: Option<Vec<u8>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if next_lex(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation::from_u8(cur))
    }
}

fn next_lex(w: &mut [u8]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

impl std::ops::Mul for &Permutation {
    type Output = Permutation;

    /// Panics on size mismatch; use [`Permutation::compose`] for a checked product.
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs).expect("permutation sizes differ")
    }
}

/// Run structure of a one-line word: `(value rank, run length)` per block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockStructure {
    pub blocks: Vec<(usize, usize)>,
}

impl BlockStructure {
    pub fn ranks(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.0).collect()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.1).collect()
    }
}

impl fmt::Display for BlockStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, _) in &self.blocks {
            write!(f, "[{r}]")?;
        }
        Ok(())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for &v in &self.images {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            f.write_str(&self.to_comma_string())
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts `"2143"` (n <= 9) or `"2,1,4,3"`.
    fn from_str(s: &str) -> Result<Self, PermError> {
        let s = s.trim();
        let parse_err = || PermError::Parse(s.to_string());
        let values: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| parse_err()))
                .collect::<Result<_, _>>()?
        } else {
            if s.is_empty() || s.len() > 9 {
                return Err(parse_err());
            }
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(parse_err))
                .collect::<Result<_, _>>()?
        };
        Permutation::new(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse helper for tests and examples; panics on bad input.
pub fn perm(s: &str) -> Permutation {
    s.parse()
        .unwrap_or_else(|e| panic!("bad permutation {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_examples() {
        assert_eq!(&perm("213") * &perm("132"), perm("231"));
        let w = perm("3142");
        assert_eq!(&w * &Permutation::identity(4), w);
        let w0 = Permutation::longest_word(4);
        assert!((&w0 * &w0).is_identity());
        assert!(perm("12").compose(&perm("123")).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(perm("2341").inverse(), perm("4123"));
        assert_eq!(perm("21").inverse(), perm("21"));
        assert!(Permutation::identity(5).inverse().is_identity());
    }

    #[test]
    fn length_and_sign() {
        assert_eq!(Permutation::longest_word(4), perm("4321"));
        assert_eq!(Permutation::longest_word(1), perm("1"));
        assert_eq!(Permutation::longest_word(4).length(), 6);
        assert_eq!(perm("2143").length(), 2);
        assert_eq!(perm("2143").sign(), 1);
        assert_eq!(perm("4123").sign(), -1);
    }

    #[test]
    fn reduced_words() {
        assert_eq!(perm("2341").reduced_word(), vec![1, 2, 3]);
        assert_eq!(perm("21").reduced_word(), vec![1]);
        assert!(Permutation::identity(4).reduced_word().is_empty());
        for n in 1..=6 {
            for w in Permutation::all(n) {
                let word = w.reduced_word();
                assert_eq!(word.len(), w.length());
                let mut acc = Permutation::identity(n);
                for &i in &word {
                    acc = &acc * &Permutation::simple_reflection(n, i);
                }
                assert_eq!(acc, w);
                assert_eq!(Permutation::from_reduced_word(n, &word), w);
            }
        }
    }

    #[test]
    fn restriction_examples() {
        assert_eq!(perm("31524").restriction(&[2, 4, 5]).unwrap(), perm("123"));
        assert_eq!(
            perm("56123784").restriction(&[1, 2, 3]).unwrap(),
            perm("231")
        );
        let w = perm("2413");
        assert_eq!(w.restriction(&[1, 2, 3, 4]).unwrap(), w);
        assert!(w.restriction(&[]).is_err());
        assert!(w.restriction(&[0, 2]).is_err());
        assert!(w.restriction(&[5]).is_err());
    }

    #[test]
    fn pattern_examples() {
        assert!(perm("31524").contains_pattern(&perm("123")).unwrap());
        assert!(!perm("31524").contains_pattern(&perm("321")).unwrap());
        assert!(perm("2143").contains_pattern(&perm("2143")).unwrap());
        assert!(perm("21").contains_pattern(&perm("321")).is_err());
    }

    #[test]
    fn fast_321_test_matches_search() {
        let p = perm("321");
        for n in 1..=7 {
            for w in Permutation::all(n) {
                assert_eq!(w.avoids_321(), w.avoids(&p), "{w}");
            }
        }
    }

    #[test]
    fn bruhat_examples() {
        assert!(perm("1423").bruhat_leq(&perm("2431")).unwrap());
        assert!(perm("2431").bruhat_leq(&perm("2431")).unwrap());
        assert!(!perm("2143").bruhat_leq(&perm("1234")).unwrap());
    }

    #[test]
    fn block_structure_examples() {
        let b = perm("56123784").block_structure();
        assert_eq!(b.ranks(), vec![3, 1, 4, 2]);
        assert_eq!(b.lengths(), vec![2, 3, 2, 1]);
        assert_eq!(b.to_string(), "[3][1][4][2]");
        let id = Permutation::identity(5).block_structure();
        assert_eq!(id.blocks, vec![(1, 5)]);
        let b = perm("2143").block_structure();
        assert_eq!(b.ranks(), vec![2, 1, 4, 3]);
        assert_eq!(b.lengths(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn adjacency_examples() {
        assert!(perm("14235").is_1324_adjacent(&perm("13245")).unwrap());
        assert!(perm("13245").is_1324_adjacent(&perm("14235")).unwrap());
        let w = perm("2413");
        assert!(!w.is_1324_adjacent(&w).unwrap());
        assert!(!perm("2143").is_1324_adjacent(&perm("2413")).unwrap());
    }

    #[test]
    fn text_formats() {
        assert_eq!(perm("2143").to_string(), "2143");
        let big = Permutation::new((1..=10).rev().collect()).unwrap();
        assert_eq!(big.to_string(), "10,9,8,7,6,5,4,3,2,1");
        assert_eq!(big.to_string().parse::<Permutation>().unwrap(), big);
        assert_eq!("2,1,4,3".parse::<Permutation>().unwrap(), perm("2143"));
        assert!("2243".parse::<Permutation>().is_err());
        assert!("21a".parse::<Permutation>().is_err());
        let json = serde_json::to_string(&perm("2143")).unwrap();
        assert_eq!(json, "\"2143\"");
        assert_eq!(
            serde_json::from_str::<Permutation>(&json).unwrap(),
            perm("2143")
        );
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all: Vec<String> = Permutation::all(3).map(|w| w.to_string()).collect();
        assert_eq!(all, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(Permutation::all(6).count(), 720);
        assert_eq!(Permutation::all(1).count(), 1);
    }
}
