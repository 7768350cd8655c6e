//! Black/white colorings of matching vertices.
//!
//! A [`Coloring`] `(I, J)` colors unprimed `i` black iff `i ∈ I` and primed `j'` white iff
//! `j ∈ J`. A [`CircularColoring`] colors circular positions `1..=2n` directly.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::Permutation;
use crate::tl::{beta, beta_inv, NonCrossingMatching, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("|I| = {0} differs from |J| = {1}; no compatible matching exists")]
    Unbalanced(usize, usize),
    #[error("{0} contains the pattern 321")]
    Contains321(Permutation),
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("cannot parse coloring {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    n: usize,
    i: BTreeSet<usize>,
    j: BTreeSet<usize>,
}

impl Coloring {
    pub fn new(
        n: usize,
        i: impl IntoIterator<Item = usize>,
        j: impl IntoIterator<Item = usize>,
    ) -> Result<Self, ColoringError> {
        let i: BTreeSet<usize> = i.into_iter().collect();
        let j: BTreeSet<usize> = j.into_iter().collect();
        if i.iter().chain(&j).any(|&x| x == 0 || x > n) {
            return Err(ColoringError::BadParameters(format!(
                "I, J must lie in [1, {n}]"
            )));
        }
        Ok(Coloring { n, i, j })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Unprimed black vertices.
    pub fn i(&self) -> &BTreeSet<usize> {
        &self.i
    }

    /// Labels of the primed white vertices.
    pub fn j(&self) -> &BTreeSet<usize> {
        &self.j
    }

    pub fn color(&self, v: Vertex) -> Color {
        match v {
            Vertex::Unprimed(x) if self.i.contains(&x) => Color::Black,
            Vertex::Unprimed(_) => Color::White,
            Vertex::Primed(x) if self.j.contains(&x) => Color::White,
            Vertex::Primed(_) => Color::Black,
        }
    }

    pub fn to_circular(&self) -> CircularColoring {
        let n = self.n;
        CircularColoring {
            n,
            colors: (1..=2 * n)
                .map(|p| self.color(Vertex::from_position(n, p)))
                .collect(),
        }
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &BTreeSet<usize>| {
            s.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "I={{{}}} J={{{}}}", show(&self.i), show(&self.j))
    }
}

impl Coloring {
    /// Parses `"I={1,4} J={1,4}"`; `n` must be supplied since it is not recorded.
    pub fn parse(n: usize, s: &str) -> Result<Coloring, ColoringError> {
        let err = || ColoringError::Parse(s.to_string());
        let set = |t: &str, key: &str| -> Result<Vec<usize>, ColoringError> {
            let body = t
                .trim()
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix("={"))
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(err)?;
            body.split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse().map_err(|_| err()))
                .collect()
        };
        let (a, b) = s.trim().split_once(' ').ok_or_else(err)?;
        Coloring::new(n, set(a, "I")?, set(b, "J")?)
    }
}

/// Colors of circular positions `1..=2n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CircularColoring {
    n: usize,
    colors: Vec<Color>,
}

impl CircularColoring {
    pub fn new(colors: Vec<Color>) -> Result<Self, ColoringError> {
        if !colors.len().is_multiple_of(2) {
            return Err(ColoringError::BadParameters(
                "odd number of vertices".into(),
            ));
        }
        Ok(CircularColoring {
            n: colors.len() / 2,
            colors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Color at 1-based position `p`.
    pub fn at(&self, p: usize) -> Color {
        self.colors[p - 1]
    }

    pub fn to_coloring(&self) -> Coloring {
        let n = self.n;
        let i = (1..=n).filter(|&p| self.at(p) == Color::Black);
        let j = (1..=n).filter(|&x| self.at(2 * n + 1 - x) == Color::White);
        Coloring::new(n, i, j).expect("labels in range")
    }

    pub fn count(&self, positions: impl IntoIterator<Item = usize>, c: Color) -> usize {
        positions.into_iter().filter(|&p| self.at(p) == c).count()
    }
}

impl fmt::Display for CircularColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.colors {
            f.write_str(if *c == Color::Black { "B" } else { "W" })?;
        }
        Ok(())
    }
}

impl FromStr for CircularColoring {
    type Err = ColoringError;

    fn from_str(s: &str) -> Result<Self, ColoringError> {
        let colors = s
            .trim()
            .chars()
            .map(|ch| match ch {
                'B' => Ok(Color::Black),
                'W' => Ok(Color::White),
                _ => Err(ColoringError::Parse(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        CircularColoring::new(colors)
    }
}

fn bichromatic(m: &NonCrossingMatching, col: &CircularColoring) -> bool {
    m.position_pairs()
        .into_iter()
        .all(|(p, q)| col.at(p) != col.at(q))
}

/// Every pair of `m` joins a black and a white vertex.
pub fn is_compatible(m: &NonCrossingMatching, c: &Coloring) -> Result<bool, ColoringError> {
    if m.n() != c.n() {
        return Err(ColoringError::SizeMismatch(m.n(), c.n()));
    }
    Ok(m.pairs().into_iter().all(|(x, y)| c.color(x) != c.color(y)))
}

/// All 321-avoiding `w` whose matching is compatible with `c`, lexicographic.
pub fn compatible_permutations(c: &Coloring) -> Result<Vec<Permutation>, ColoringError> {
    if c.i.len() != c.j.len() {
        return Err(ColoringError::Unbalanced(c.i.len(), c.j.len()));
    }
    let mut out: Vec<Permutation> = NonCrossingMatching::all(c.n)
        .into_iter()
        .filter(|m| is_compatible(m, c).unwrap())
        .map(|m| beta_inv(&m))
        .collect();
    out.sort();
    Ok(out)
}

/// `i` black and `w(i)'` white when `w(i) >= i`; `i` white and `w(i)'` black otherwise.
pub fn canonical_coloring(w: &Permutation) -> Result<Coloring, ColoringError> {
    if !w.avoids_321() {
        return Err(ColoringError::Contains321(w.clone()));
    }
    let n = w.n();
    let weak: Vec<usize> = (1..=n).filter(|&i| w.at(i) >= i).collect();
    Coloring::new(n, weak.iter().copied(), weak.iter().map(|&i| w.at(i)))
}

/// Whether some pair of `m` has both endpoints in `s`.
pub fn has_internal_pairing(m: &NonCrossingMatching, s: &[Vertex]) -> bool {
    s.iter().any(|&v| s.contains(&m.partner_of(v)))
}

/// A coloring together with a compatible matching, both on circular positions.
pub type Solution = (CircularColoring, NonCrossingMatching);

// Working form: colors and pairs on positions 1..=2n.
struct Raw {
    n: usize,
    colors: Vec<Color>,
    pairs: Vec<(usize, usize)>,
}

impl Raw {
    fn finish(self) -> Solution {
        let m = NonCrossingMatching::from_position_pairs(self.n, &self.pairs)
            .expect("construction yields a non-crossing matching");
        (CircularColoring::new(self.colors).unwrap(), m)
    }

    /// Relabel by the reflection `x -> k - x (mod 2n)`, optionally swapping colors.
    fn reflect(self, k: i64, flip: bool) -> Raw {
        let m = 2 * self.n as i64;
        let map = |x: usize| -> usize {
            let y = (k - x as i64).rem_euclid(m);
            if y == 0 {
                m as usize
            } else {
                y as usize
            }
        };
        let mut colors = vec![Color::Black; self.colors.len()];
        for (idx, c) in self.colors.iter().enumerate() {
            colors[map(idx + 1) - 1] = if flip { c.flip() } else { *c };
        }
        Raw {
            n: self.n,
            colors,
            pairs: self.pairs.iter().map(|&(p, q)| (map(p), map(q))).collect(),
        }
    }

    /// Embed into size `n + 1` with a new chord from 1 (black) to `2n + 2` (white).
    fn wrap(self) -> Raw {
        let n = self.n + 1;
        let mut colors = vec![Color::Black];
        colors.extend(self.colors);
        colors.push(Color::White);
        let mut pairs = vec![(1, 2 * n)];
        pairs.extend(self.pairs.iter().map(|&(p, q)| (p + 1, q + 1)));
        Raw { n, colors, pairs }
    }
}

fn simple_raw(a: usize, b: usize, c: usize) -> Raw {
    let n = (a + b + c) / 2;
    if a == 0 {
        // rainbow: 1..n black, x paired with 2n + 1 - x
        let colors = (1..=2 * n)
            .map(|p| if p <= n { Color::Black } else { Color::White })
            .collect();
        let pairs = (1..=n).map(|x| (x, 2 * n + 1 - x)).collect();
        return Raw { n, colors, pairs };
    }
    if b <= c {
        simple_raw(a - 1, b, c - 1).wrap()
    } else {
        simple_raw(a, c, b).reflect(a as i64 + 1, true)
    }
}

/// The unique coloring and matching on `[2n]` (`a + b + c = 2n`) with `[a+1, a+b]` black,
/// `[a+b+1, 2n]` white and no pair inside `[1, a]`.
pub fn unique_matching_simple(a: usize, b: usize, c: usize) -> Result<Solution, ColoringError> {
    let total = a + b + c;
    if !total.is_multiple_of(2) || total == 0 {
        return Err(ColoringError::BadParameters(format!(
            "a + b + c = {total} must be even and positive"
        )));
    }
    let n = total / 2;
    if a > n || b > n || c > n {
        return Err(ColoringError::BadParameters(format!(
            "each of a, b, c must be at most n = {n}"
        )));
    }
    Ok(simple_raw(a, b, c).finish())
}

fn general_raw(a: usize, b: usize, c: usize, d: usize, e: usize) -> Raw {
    let n = a + b + c + d + e;
    if c == 0 && d == 0 {
        // base: the simple construction with the mixed interval first, then reflected into place
        let k0 = (a + 2 * b + e + 1) as i64;
        return simple_raw(a + b, b + e, a + e).reflect(k0, false);
    }
    if c >= d {
        general_raw(a, b, c - 1, d, e).wrap()
    } else {
        let k = (2 * n - c - d + 1) as i64;
        general_raw(b, a, d, c, e).reflect(k, true)
    }
}

/// The unique coloring and matching of the four-interval conditions with parameters
/// `a, b, c, d, e` (`n = a + b + c + d + e`), built by peeling the chord `{1, 2n}`.
pub fn unique_matching_general(
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    e: usize,
) -> Result<Solution, ColoringError> {
    if a + b + c + d + e == 0 {
        return Err(ColoringError::BadParameters("n must be positive".into()));
    }
    let sol = general_raw(a, b, c, d, e).finish();
    debug_assert!(satisfies_general([a, b, c, d, e], &sol.0, &sol.1));
    Ok(sol)
}

// Pull a general solution back through the reflection `x -> k - x (mod 2n)`.
fn pull_back(sol: Solution, k: i64) -> (Coloring, NonCrossingMatching) {
    let n = sol.0.n();
    let raw = Raw {
        n,
        colors: sol.0.colors,
        pairs: sol.1.position_pairs(),
    }
    .reflect(k, false);
    let (col, m) = raw.finish();
    (col.to_coloring(), m)
}

/// The forced coloring and matching for case-1 parameters.
pub fn unique_matching_case1(
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    e: usize,
) -> Result<(Coloring, NonCrossingMatching), ColoringError> {
    if a == 0 || b == 0 || c == 0 || d == 0 {
        return Err(ColoringError::BadParameters(
            "case 1 needs a, b, c, d >= 1".into(),
        ));
    }
    let n = a + b + c + d + e;
    let sol = unique_matching_general(a, b, c, d, e)?;
    Ok(pull_back(sol, (n - d + 1) as i64))
}

/// The forced coloring and matching for case-2 parameters.
pub fn unique_matching_case2(
    a: usize,
    e: usize,
    b: usize,
    c: usize,
    f: usize,
    d: usize,
) -> Result<(Coloring, NonCrossingMatching), ColoringError> {
    if a == 0 || b == 0 || c == 0 || d == 0 || e.max(f) == 0 {
        return Err(ColoringError::BadParameters(
            "case 2 needs a, b, c, d >= 1 and max(e, f) >= 1".into(),
        ));
    }
    let sol = unique_matching_general(d, a, b, c, e + f)?;
    Ok(pull_back(sol, (a + e + 1) as i64))
}

fn range(lo: usize, hi: usize) -> std::ops::RangeInclusive<usize> {
    lo..=hi
}

fn no_internal(m: &NonCrossingMatching, positions: &[usize]) -> bool {
    positions
        .iter()
        .all(|&p| !positions.contains(&m.partner_position(p)))
}

/// Conditions of the simple construction for `[a, b, c]`.
pub fn satisfies_simple(
    [a, b, _c]: [usize; 3],
    col: &CircularColoring,
    m: &NonCrossingMatching,
) -> bool {
    let n2 = 2 * col.n();
    bichromatic(m, col)
        && range(a + 1, a + b).all(|p| col.at(p) == Color::Black)
        && range(a + b + 1, n2).all(|p| col.at(p) == Color::White)
        && no_internal(m, &range(1, a).collect::<Vec<_>>())
}

/// Conditions of the general four-interval construction for `[a, b, c, d, e]`.
pub fn satisfies_general(
    [a, b, c, d, e]: [usize; 5],
    col: &CircularColoring,
    m: &NonCrossingMatching,
) -> bool {
    let n = col.n();
    let mixed1: Vec<usize> = range(b + c + e + 1, a + 2 * b + c + e).collect();
    let mixed2: Vec<usize> = range(a + b + e + n + 1, 2 * n).collect();
    bichromatic(m, col)
        && range(1, b + c + e).all(|p| col.at(p) == Color::Black)
        && col.count(mixed1.iter().copied(), Color::Black) == a
        && col.count(mixed1.iter().copied(), Color::White) == b
        && no_internal(m, &mixed1)
        && range(a + 2 * b + c + e + 1, a + b + e + n).all(|p| col.at(p) == Color::White)
        && col.count(mixed2.iter().copied(), Color::Black) == d
        && col.count(mixed2.iter().copied(), Color::White) == c
        && no_internal(m, &mixed2)
}

fn positions(n: usize, vs: impl IntoIterator<Item = Vertex>) -> Vec<usize> {
    vs.into_iter().map(|v| v.position(n)).collect()
}

/// Conditions forcing the case-1 matching for `[a, b, c, d, e]`.
pub fn satisfies_case1(
    [a, b, c, d, _e]: [usize; 5],
    col: &CircularColoring,
    m: &NonCrossingMatching,
) -> bool {
    let n = col.n();
    let at = |v: Vertex| col.at(v.position(n));
    let left = positions(
        n,
        range(1, a)
            .map(Vertex::Unprimed)
            .chain(range(1, b).map(Vertex::Primed)),
    );
    let right = positions(
        n,
        range(n - d + 1, n)
            .map(Vertex::Unprimed)
            .chain(range(n - c + 1, n).map(Vertex::Primed)),
    );
    bichromatic(m, col)
        && range(a + 1, n - d).all(|i| at(Vertex::Unprimed(i)) == Color::Black)
        && range(b + 1, n - c).all(|i| at(Vertex::Primed(i)) == Color::White)
        && col.count(left.iter().copied(), Color::Black) == a
        && col.count(left.iter().copied(), Color::White) == b
        && col.count(right.iter().copied(), Color::Black) == d
        && col.count(right.iter().copied(), Color::White) == c
        && no_internal(m, &left)
        && no_internal(m, &right)
}

/// Conditions forcing the case-2 matching for `[a, e, b, c, f, d]`.
pub fn satisfies_case2(
    [a, e, b, c, f, d]: [usize; 6],
    col: &CircularColoring,
    m: &NonCrossingMatching,
) -> bool {
    let n = col.n();
    let at = |v: Vertex| col.at(v.position(n));
    let mid = positions(n, range(a + e + 1, a + e + b + c).map(Vertex::Unprimed));
    let mid_p = positions(n, range(b + f + 1, b + f + a + d).map(Vertex::Primed));
    bichromatic(m, col)
        && range(1, a + e).all(|i| at(Vertex::Unprimed(i)) == Color::Black)
        && range(a + e + b + c + 1, n).all(|i| at(Vertex::Unprimed(i)) == Color::White)
        && range(1, b + f).all(|i| at(Vertex::Primed(i)) == Color::Black)
        && range(b + f + a + d + 1, n).all(|i| at(Vertex::Primed(i)) == Color::White)
        && col.count(mid.iter().copied(), Color::Black) == c
        && col.count(mid.iter().copied(), Color::White) == b
        && col.count(mid_p.iter().copied(), Color::Black) == d
        && col.count(mid_p.iter().copied(), Color::White) == a
        && no_internal(m, &mid)
        && no_internal(m, &mid_p)
}

/// Every (coloring, compatible matching) on `2n` vertices accepted by `pred`.
///
/// Exhaustive: each matching admits `2^n` compatible colorings (one choice per pair).
pub fn brute_force(
    n: usize,
    pred: impl Fn(&CircularColoring, &NonCrossingMatching) -> bool,
) -> Vec<Solution> {
    let mut out = Vec::new();
    for m in NonCrossingMatching::all(n) {
        let pairs = m.position_pairs();
        for mask in 0u32..(1 << n) {
            let mut colors = vec![Color::White; 2 * n];
            for (k, &(p, q)) in pairs.iter().enumerate() {
                let black = if mask >> k & 1 == 1 { p } else { q };
                colors[black - 1] = Color::Black;
            }
            let col = CircularColoring::new(colors).unwrap();
            if pred(&col, &m) {
                out.push((col, m.clone()));
            }
        }
    }
    out
}

/// `β(w)` and the canonical coloring together.
pub fn canonical_pair(w: &Permutation) -> Result<(Coloring, NonCrossingMatching), ColoringError> {
    let col = canonical_coloring(w)?;
    let m = beta(w).map_err(|_| ColoringError::Contains321(w.clone()))?;
    Ok((col, m))
}
