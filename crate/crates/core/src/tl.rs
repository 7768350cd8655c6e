//! The Temperley-Lieb algebra `TL_n(2)` on its diagram basis.
//!
//! Basis diagrams are non-crossing perfect matchings of `{1..n} ∪ {1'..n'}`, placed on a
//! circle with `i` at position `i` and `i'` at position `2n + 1 - i`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::limits::{self, LimitExceeded};
use crate::perm::Permutation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TlError {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("generator index {i} out of range for n = {n}")]
    GeneratorOutOfRange { n: usize, i: usize },
    #[error("{0} contains the pattern 321")]
    Contains321(Permutation),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error(transparent)]
    Limit(#[from] LimitExceeded),
}

/// A vertex of a matching diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Unprimed(usize),
    Primed(usize),
}

impl Vertex {
    /// The 1-based label `i` of `i` or `i'`.
    pub fn label(self) -> usize {
        match self {
            Vertex::Unprimed(i) | Vertex::Primed(i) => i,
        }
    }

    /// Circular position in `1..=2n`.
    pub fn position(self, n: usize) -> usize {
        match self {
            Vertex::Unprimed(i) => i,
            Vertex::Primed(i) => 2 * n + 1 - i,
        }
    }

    pub fn from_position(n: usize, p: usize) -> Vertex {
        if p <= n {
            Vertex::Unprimed(p)
        } else {
            Vertex::Primed(2 * n + 1 - p)
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Unprimed(i) => write!(f, "{i}"),
            Vertex::Primed(i) => write!(f, "{i}'"),
        }
    }
}

/// A non-crossing perfect matching on `2n` circular positions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NonCrossingMatching {
    n: usize,
    // partner[p] for 0-based circular positions
    partner: Vec<u8>,
}

impl NonCrossingMatching {
    /// Build from vertex pairs; checks perfectness and non-crossing.
    pub fn from_pairs(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self, TlError> {
        let mut partner = vec![u8::MAX; 2 * n];
        for &(x, y) in pairs {
            for v in [x, y] {
                if v.label() == 0 || v.label() > n {
                    return Err(TlError::InvalidMatching(format!("vertex {v} out of range")));
                }
            }
            let (p, q) = (x.position(n) - 1, y.position(n) - 1);
            if p == q || partner[p] != u8::MAX || partner[q] != u8::MAX {
                return Err(TlError::InvalidMatching(format!(
                    "vertex reused in {x}-{y}"
                )));
            }
            partner[p] = q as u8;
            partner[q] = p as u8;
        }
        if partner.contains(&u8::MAX) {
            return Err(TlError::InvalidMatching("not a perfect matching".into()));
        }
        let m = NonCrossingMatching { n, partner };
        if !m.is_non_crossing() {
            return Err(TlError::InvalidMatching("pairs cross".into()));
        }
        Ok(m)
    }

    /// From 1-based circular position pairs.
    pub fn from_position_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, TlError> {
        let vp: Vec<(Vertex, Vertex)> = pairs
            .iter()
            .map(|&(p, q)| (Vertex::from_position(n, p), Vertex::from_position(n, q)))
            .collect();
        NonCrossingMatching::from_pairs(n, &vp)
    }

    /// All `{j, j'}`: the unit of the algebra.
    pub fn identity(n: usize) -> Self {
        let partner = (0..2 * n).map(|p| (2 * n - 1 - p) as u8).collect();
        NonCrossingMatching { n, partner }
    }

    /// Diagram of `t_i`: `{i, i+1}`, `{i', (i+1)'}` and `{j, j'}` otherwise.
    pub fn generator(n: usize, i: usize) -> Result<Self, TlError> {
        if i == 0 || i >= n {
            return Err(TlError::GeneratorOutOfRange { n, i });
        }
        let mut m = NonCrossingMatching::identity(n);
        let (a, b) = (i - 1, i);
        let (pa, pb) = (2 * n - i, 2 * n - i - 1);
        m.partner[a] = b as u8;
        m.partner[b] = a as u8;
        m.partner[pa] = pb as u8;
        m.partner[pb] = pa as u8;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The vertex paired with `v`.
    pub fn partner_of(&self, v: Vertex) -> Vertex {
        let p = self.partner[v.position(self.n) - 1] as usize;
        Vertex::from_position(self.n, p + 1)
    }

    /// Partner in 1-based circular positions.
    pub fn partner_position(&self, p: usize) -> usize {
        self.partner[p - 1] as usize + 1
    }

    /// Pairs in canonical order: by the first unprimed vertex `1..n`, then primed `1'..n'`.
    pub fn pairs(&self) -> Vec<(Vertex, Vertex)> {
        let n = self.n;
        let mut seen = vec![false; 2 * n];
        let mut out = Vec::with_capacity(n);
        let order = (1..=n)
            .map(Vertex::Unprimed)
            .chain((1..=n).map(Vertex::Primed));
        for v in order {
            let p = v.position(n) - 1;
            if seen[p] {
                continue;
            }
            let q = self.partner[p] as usize;
            seen[p] = true;
            seen[q] = true;
            out.push((v, Vertex::from_position(n, q + 1)));
        }
        out
    }

    /// Pairs as 1-based circular positions `(p, q)` with `p < q`.
    pub fn position_pairs(&self) -> Vec<(usize, usize)> {
        (0..2 * self.n)
            .filter(|&p| (self.partner[p] as usize) > p)
            .map(|p| (p + 1, self.partner[p] as usize + 1))
            .collect()
    }

    fn is_non_crossing(&self) -> bool {
        let m = 2 * self.n;
        for p in 0..m {
            let q = self.partner[p] as usize;
            if q <= p {
                continue;
            }
            for r in p + 1..q {
                let s = self.partner[r] as usize;
                if s < p || s > q {
                    return false;
                }
            }
        }
        true
    }

    /// Paired positions always differ by an odd amount in a non-crossing matching.
    pub fn has_odd_parity(&self) -> bool {
        (0..2 * self.n).all(|p| (p as i64 - self.partner[p] as i64) % 2 != 0)
    }

    /// Glue `self` on top of `below`: `self`'s unprimed side meets `below`'s primed side.
    /// The result keeps `below`'s unprimed and `self`'s primed vertices. Returns the
    /// diagram and the number of closed loops.
    fn glue(&self, below: &NonCrossingMatching) -> (NonCrossingMatching, u32) {
        // The two diagrams are traced with local 0-based positions. For a diagram, a
        // position p < n is unprimed i = p + 1, a position p >= n is primed i = 2n - p.
        // Middle vertex k (1-based) is unprimed k of `self` and primed k of `below`.
        let n = self.n;
        let mut out = vec![u8::MAX; 2 * n];
        let mut mid_seen = vec![false; n + 1];
        // Exit a diagram at local position `p`; returns Some(result position) if the strand
        // reaches the outer boundary, else the middle label crossed.
        enum Step {
            Outer(usize),
            Middle(usize),
        }
        let step_top = |p: usize| -> Step {
            if p < n {
                Step::Middle(p + 1)
            } else {
                Step::Outer(p)
            }
        };
        let step_below = |p: usize| -> Step {
            if p < n {
                Step::Outer(p)
            } else {
                Step::Middle(2 * n - p)
            }
        };
        for start in 0..2 * n {
            if out[start] != u8::MAX {
                continue;
            }
            // start lives in `below` if unprimed, in `self` if primed
            let mut in_top = start >= n;
            let mut p = start;
            let end = loop {
                let q = if in_top {
                    self.partner[p] as usize
                } else {
                    below.partner[p] as usize
                };
                let step = if in_top { step_top(q) } else { step_below(q) };
                match step {
                    Step::Outer(r) => break r,
                    Step::Middle(k) => {
                        mid_seen[k] = true;
                        if in_top {
                            p = 2 * n - k; // primed k of below
                        } else {
                            p = k - 1; // unprimed k of top
                        }
                        in_top = !in_top;
                    }
                }
            };
            out[start] = end as u8;
            out[end] = start as u8;
        }
        let mut loops = 0;
        for k in 1..=n {
            if mid_seen[k] {
                continue;
            }
            loops += 1;
            let mut p = k - 1;
            let mut in_top = true;
            loop {
                let q = if in_top {
                    self.partner[p] as usize
                } else {
                    below.partner[p] as usize
                };
                let j = if in_top { q + 1 } else { 2 * n - q };
                mid_seen[j] = true;
                if in_top {
                    p = 2 * n - j;
                } else {
                    p = j - 1;
                }
                in_top = !in_top;
                if in_top && p == k - 1 {
                    break;
                }
            }
        }
        (NonCrossingMatching { n, partner: out }, loops)
    }

    /// Diagram product `self * other` with its loop count.
    pub fn mul(&self, other: &NonCrossingMatching) -> Result<(NonCrossingMatching, u32), TlError> {
        if self.n != other.n {
            return Err(TlError::SizeMismatch(self.n, other.n));
        }
        Ok(self.glue(other))
    }

    /// Every non-crossing perfect matching of size `n` (Catalan(n) of them).
    pub fn all(n: usize) -> Vec<NonCrossingMatching> {
        let mut out = Vec::new();
        let mut partner = vec![u8::MAX; 2 * n];
        fill(&mut partner, 0, 2 * n, &mut |p| {
            out.push(NonCrossingMatching {
                n,
                partner: p.to_vec(),
            })
        });
        out.sort();
        out
    }
}

// Enumerate matchings of the interval [lo, hi) into `partner`, calling `emit` when the whole
// array is complete. Intervals are filled left to right.
fn fill(partner: &mut [u8], lo: usize, hi: usize, emit: &mut dyn FnMut(&[u8])) {
    fn go(partner: &mut [u8], stack: &mut Vec<(usize, usize)>, emit: &mut dyn FnMut(&[u8])) {
        let Some((lo, hi)) = stack.pop() else {
            emit(partner);
            return;
        };
        if lo >= hi {
            go(partner, stack, emit);
            stack.push((lo, hi));
            return;
        }
        let mut q = lo + 1;
        while q < hi {
            partner[lo] = q as u8;
            partner[q] = lo as u8;
            stack.push((q + 1, hi));
            stack.push((lo + 1, q));
            go(partner, stack, emit);
            stack.pop();
            stack.pop();
            q += 2;
        }
        stack.push((lo, hi));
    }
    let mut stack = vec![(lo, hi)];
    go(partner, &mut stack, emit);
}

impl fmt::Display for NonCrossingMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs()
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for NonCrossingMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCM({self})")
    }
}

fn parse_vertex(s: &str) -> Option<Vertex> {
    if let Some(num) = s.strip_suffix('\'') {
        num.parse().ok().map(Vertex::Primed)
    } else {
        s.parse().ok().map(Vertex::Unprimed)
    }
}

impl FromStr for NonCrossingMatching {
    type Err = TlError;

    /// Parses `"1-3' 2-4' 3-4 1'-2'"`; pairs in any order. `n` is the number of pairs.
    fn from_str(s: &str) -> Result<Self, TlError> {
        let mut pairs = Vec::new();
        for tok in s.split_whitespace() {
            let (a, b) = tok
                .split_once('-')
                .ok_or_else(|| TlError::InvalidMatching(format!("bad pair {tok:?}")))?;
            let (a, b) = parse_vertex(a)
                .zip(parse_vertex(b))
                .ok_or_else(|| TlError::InvalidMatching(format!("bad pair {tok:?}")))?;
            pairs.push((a, b));
        }
        NonCrossingMatching::from_pairs(pairs.len(), &pairs)
    }
}

impl Serialize for NonCrossingMatching {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NonCrossingMatching {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// A sparse integer combination of basis diagrams.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TLElement {
    n: usize,
    terms: BTreeMap<NonCrossingMatching, i64>,
}

impl TLElement {
    pub fn zero(n: usize) -> Self {
        TLElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        TLElement::from_diagram(NonCrossingMatching::identity(n))
    }

    pub fn from_diagram(d: NonCrossingMatching) -> Self {
        let n = d.n;
        let mut terms = BTreeMap::new();
        terms.insert(d, 1);
        TLElement { n, terms }
    }

    pub fn generator(n: usize, i: usize) -> Result<Self, TlError> {
        Ok(TLElement::from_diagram(NonCrossingMatching::generator(
            n, i,
        )?))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NonCrossingMatching, i64)> {
        self.terms.iter().map(|(d, &c)| (d, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, d: &NonCrossingMatching) -> i64 {
        self.terms.get(d).copied().unwrap_or(0)
    }

    fn add_term(&mut self, d: NonCrossingMatching, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(d);
        match e {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &TLElement) -> Result<TLElement, TlError> {
        if self.n != other.n {
            return Err(TlError::SizeMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (d, c) in other.terms() {
            out.add_term(d.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: i64) -> TLElement {
        let mut out = TLElement::zero(self.n);
        for (d, x) in self.terms() {
            out.add_term(d.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, other: &TLElement) -> Result<TLElement, TlError> {
        self.add(&other.scale(-1))
    }

    /// Bilinear product; each closed loop contributes a factor 2.
    pub fn multiply(&self, other: &TLElement) -> Result<TLElement, TlError> {
        if self.n != other.n {
            return Err(TlError::SizeMismatch(self.n, other.n));
        }
        let mut out = TLElement::zero(self.n);
        for (x, a) in self.terms() {
            for (y, b) in other.terms() {
                let (d, loops) = x.glue(y);
                out.add_term(d, a * b * (1i64 << loops));
            }
        }
        Ok(out)
    }

    /// `self * (t_i - 1)`.
    fn times_theta_generator(&self, i: usize) -> TLElement {
        let g = NonCrossingMatching::generator(self.n, i).expect("index checked by caller");
        let mut out = self.scale(-1);
        for (x, a) in self.terms() {
            let (d, loops) = x.glue(&g);
            out.add_term(d, a * (1i64 << loops));
        }
        out
    }
}

impl fmt::Display for TLElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms().map(|(d, c)| format!("{c}*[{d}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `θ(u)`: the product of `t_i - 1` over a reduced word of `u`.
pub fn theta(u: &Permutation) -> TLElement {
    let mut e = TLElement::one(u.n());
    for i in u.reduced_word() {
        e = e.times_theta_generator(i);
    }
    e
}

/// `β(w)`: the diagram of `t_{i1} ... t_{ik}` over a reduced word of a 321-avoiding `w`.
pub fn beta(w: &Permutation) -> Result<NonCrossingMatching, TlError> {
    if !w.avoids_321() {
        return Err(TlError::Contains321(w.clone()));
    }
    let n = w.n();
    let mut d = NonCrossingMatching::identity(n);
    for i in w.reduced_word() {
        let (next, loops) = d.glue(&NonCrossingMatching::generator(n, i)?);
        debug_assert_eq!(
            loops, 0,
            "reduced word of a 321-avoiding permutation made a loop"
        );
        d = next;
    }
    Ok(d)
}

/// The 321-avoiding `w` with `β(w) = m`.
///
/// In each pair the endpoint with the smaller label is black, and for a pair `{i, i'}` the
/// unprimed end is black. The black unprimed vertices are then the weak excedance positions
/// of `w` and the white primed ones their values; both halves of a 321-avoiding word are
/// increasing, which fixes `w`.
pub fn beta_inv(m: &NonCrossingMatching) -> Permutation {
    let n = m.n();
    let mut exc_pos = Vec::new();
    let mut exc_val = Vec::new();
    for (a, b) in m.pairs() {
        for (x, y) in [(a, b), (b, a)] {
            let black = x.label() < y.label()
                || (x.label() == y.label() && matches!(x, Vertex::Unprimed(_)));
            match (x, black) {
                (Vertex::Unprimed(i), true) => exc_pos.push(i),
                (Vertex::Primed(j), false) => exc_val.push(j),
                _ => {}
            }
        }
    }
    exc_pos.sort_unstable();
    exc_val.sort_unstable();
    let rest_pos: Vec<usize> = (1..=n).filter(|i| !exc_pos.contains(i)).collect();
    let rest_val: Vec<usize> = (1..=n).filter(|j| !exc_val.contains(j)).collect();
    let mut word = vec![0; n];
    for (p, v) in exc_pos
        .iter()
        .zip(&exc_val)
        .chain(rest_pos.iter().zip(&rest_val))
    {
        word[p - 1] = *v;
    }
    Permutation::new(word).expect("matching decodes to a permutation")
}

/// `θ(u)` for every `u ∈ S_n`.
#[derive(Debug)]
pub struct ThetaTable {
    n: usize,
    table: HashMap<Permutation, TLElement>,
}

impl ThetaTable {
    /// Builds the table along weak order: `θ(u) = θ(u s_i)(t_i - 1)` for a descent `i`.
    pub fn build(n: usize) -> Result<ThetaTable, TlError> {
        limits::check(n)?;
        let mut perms: Vec<Permutation> = Permutation::all(n).collect();
        perms.sort_by_key(Permutation::length);
        let mut table: HashMap<Permutation, TLElement> = HashMap::with_capacity(perms.len());
        for u in perms {
            let value = match (1..n).find(|&i| u.at(i) > u.at(i + 1)) {
                None => TLElement::one(n),
                Some(i) => table[&u.swap_positions(i, i + 1)].times_theta_generator(i),
            };
            table.insert(u, value);
        }
        Ok(ThetaTable { n, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, u: &Permutation) -> Option<&TLElement> {
        self.table.get(u)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Permutation, &TLElement)> {
        self.table.iter()
    }

    /// `f_w(u)` read from the table.
    pub fn f_coeff(&self, w: &Permutation, u: &Permutation) -> Result<i64, TlError> {
        let b = beta(w)?;
        let t = self.get(u).ok_or(TlError::SizeMismatch(self.n, u.n()))?;
        Ok(t.coeff(&b))
    }

    /// `u -> f_w(u)` for all `u` with nonzero coefficient, grouped by `w`.
    pub fn coefficients_by_w(&self) -> HashMap<Permutation, Vec<(Permutation, i64)>> {
        let mut out: HashMap<Permutation, Vec<(Permutation, i64)>> = HashMap::new();
        for (u, t) in &self.table {
            for (d, c) in t.terms() {
                out.entry(beta_inv(d)).or_default().push((u.clone(), c));
            }
        }
        out
    }
}

/// A shared, lazily built theta table for size `n`.
pub fn theta_table(n: usize) -> Result<Arc<ThetaTable>, TlError> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ThetaTable>>>> = OnceLock::new();
    limits::check(n)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let built = Arc::new(ThetaTable::build(n)?);
    Ok(cache.lock().unwrap().entry(n).or_insert(built).clone())
}

/// `f_w(u)`, the coefficient of `β(w)` in `θ(u)`.
pub fn f_coeff(w: &Permutation, u: &Permutation) -> Result<i64, TlError> {
    if w.n() != u.n() {
        return Err(TlError::SizeMismatch(w.n(), u.n()));
    }
    Ok(theta(u).coeff(&beta(w)?))
}
