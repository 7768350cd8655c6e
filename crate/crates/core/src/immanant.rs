//! Immanants as sparse integer vectors over `S_n`, %-immanants of skew shapes,
//! complementary minors, and the span of %-immanants.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::limits::{self, LimitExceeded};
use crate::perm::Permutation;
use crate::tl::{self, TlError};

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImmanantError {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid skew shape: {0}")]
    BadShape(String),
    #[error("|I| = {0} differs from |J| = {1}")]
    Unbalanced(usize, usize),
    #[error("index set must lie in [1, {0}]")]
    BadIndexSet(usize),
    #[error("scaling produced a non-integer coefficient")]
    NonIntegral,
    #[error("not in the %-span: f({w}) = {fw} but f({w2}) = {fw2}")]
    NotInSpan {
        w: Permutation,
        w2: Permutation,
        fw: i64,
        fw2: i64,
    },
    #[error("invalid matrix: {0}")]
    BadMatrix(String),
    #[error(transparent)]
    Tl(#[from] TlError),
    #[error(transparent)]
    Limit(#[from] LimitExceeded),
}

/// A skew shape `λ/μ` in the `n x n` box; cell `(i, j)` is in it iff `μ_i < j <= λ_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ShapeRepr")]
pub struct SkewShape {
    #[serde(skip_serializing)]
    n: usize,
    lambda: Vec<usize>,
    mu: Vec<usize>,
}

#[derive(Deserialize)]
struct ShapeRepr {
    n: Option<usize>,
    lambda: Vec<usize>,
    mu: Vec<usize>,
}

impl TryFrom<ShapeRepr> for SkewShape {
    type Error = ImmanantError;

    fn try_from(r: ShapeRepr) -> Result<Self, ImmanantError> {
        SkewShape::new(r.n.unwrap_or(r.lambda.len()), r.lambda, r.mu)
    }
}

impl SkewShape {
    pub fn new(n: usize, lambda: Vec<usize>, mu: Vec<usize>) -> Result<Self, ImmanantError> {
        let bad = |m: &str| Err(ImmanantError::BadShape(m.to_string()));
        if lambda.len() != n || mu.len() != n {
            return bad("lambda and mu need n entries");
        }
        if lambda.iter().chain(&mu).any(|&x| x > n) {
            return bad("entries must lie in [0, n]");
        }
        if lambda.windows(2).any(|p| p[0] < p[1]) || mu.windows(2).any(|p| p[0] < p[1]) {
            return bad("lambda and mu must be non-increasing");
        }
        if lambda.iter().zip(&mu).any(|(l, m)| m > l) {
            return bad("mu_i must not exceed lambda_i");
        }
        Ok(SkewShape { n, lambda, mu })
    }

    /// The whole `n x n` box.
    pub fn full(n: usize) -> SkewShape {
        SkewShape {
            n,
            lambda: vec![n; n],
            mu: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &[usize] {
        &self.lambda
    }

    pub fn mu(&self) -> &[usize] {
        &self.mu
    }

    /// Whether cell `(i, j)` (1-based) is in the shape.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.mu[i - 1] < j && j <= self.lambda[i - 1]
    }

    pub fn cells(&self) -> BTreeSet<(usize, usize)> {
        (1..=self.n)
            .flat_map(|i| (self.mu[i - 1] + 1..=self.lambda[i - 1]).map(move |j| (i, j)))
            .collect()
    }

    /// The skew shape with exactly these cells, if one exists.
    pub fn from_cells(
        n: usize,
        cells: &BTreeSet<(usize, usize)>,
    ) -> Result<SkewShape, ImmanantError> {
        let mut lambda = vec![0; n];
        let mut mu = vec![0; n];
        for i in 1..=n {
            let row: Vec<usize> = cells.iter().filter(|c| c.0 == i).map(|c| c.1).collect();
            if let (Some(&lo), Some(&hi)) = (row.first(), row.last()) {
                if hi - lo + 1 != row.len() {
                    return Err(ImmanantError::BadShape(format!(
                        "row {i} is not an interval"
                    )));
                }
                mu[i - 1] = lo - 1;
                lambda[i - 1] = hi;
            }
        }
        // an empty row gets λ_i = μ_i = λ_{i+1}, the smallest value keeping both monotone
        for i in (0..n).rev() {
            if !cells.iter().any(|c| c.0 == i + 1) {
                let v = if i + 1 < n { lambda[i + 1] } else { 0 };
                lambda[i] = v;
                mu[i] = v;
            }
        }
        let shape = SkewShape::new(n, lambda, mu)?;
        if &shape.cells() != cells {
            return Err(ImmanantError::BadShape(
                "cells do not form a skew shape".into(),
            ));
        }
        Ok(shape)
    }

    fn map_cells(&self, f: impl Fn(usize, usize) -> (usize, usize)) -> SkewShape {
        let cells = self.cells().into_iter().map(|(i, j)| f(i, j)).collect();
        SkewShape::from_cells(self.n, &cells).expect("symmetry of a skew shape is a skew shape")
    }

    /// Reflection through the anti-diagonal: `(i, j) -> (n+1-j, n+1-i)`.
    pub fn anti_transpose(&self) -> SkewShape {
        let n = self.n;
        self.map_cells(|i, j| (n + 1 - j, n + 1 - i))
    }

    /// `(i, j) -> (j, i)`.
    pub fn transpose(&self) -> SkewShape {
        self.map_cells(|i, j| (j, i))
    }

    /// `(i, j) -> (n+1-i, n+1-j)`.
    pub fn rotate_half_turn(&self) -> SkewShape {
        let n = self.n;
        self.map_cells(|i, j| (n + 1 - i, n + 1 - j))
    }

    /// Every valid shape in the `n x n` box.
    pub fn all(n: usize) -> Vec<SkewShape> {
        fn seqs(len: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == len {
                out.push(cur.clone());
                return;
            }
            for v in 0..=max {
                cur.push(v);
                seqs(len, v, cur, out);
                cur.pop();
            }
        }
        let mut all = Vec::new();
        seqs(n, n, &mut Vec::new(), &mut all);
        let mut out = Vec::new();
        for l in &all {
            for m in &all {
                if let Ok(s) = SkewShape::new(n, l.clone(), m.clone()) {
                    out.push(s);
                }
            }
        }
        out
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{:?}", self.lambda, self.mu)
    }
}

/// `μ_i = min w([1, i]) - 1`, `λ_i = max w([i, n])`.
pub fn hull(w: &Permutation) -> SkewShape {
    let n = w.n();
    let mut mu = Vec::with_capacity(n);
    let mut run_min = usize::MAX;
    for i in 1..=n {
        run_min = run_min.min(w.at(i));
        mu.push(run_min - 1);
    }
    let mut lambda = vec![0; n];
    let mut run_max = 0;
    for i in (1..=n).rev() {
        run_max = run_max.max(w.at(i));
        lambda[i - 1] = run_max;
    }
    SkewShape { n, lambda, mu }
}

/// Every `(i, σ(i))` is a cell of `shape`.
pub fn lies_in(s: &Permutation, shape: &SkewShape) -> bool {
    s.n() == shape.n && (1..=s.n()).all(|i| shape.contains(i, s.at(i)))
}

/// Cellwise containment `s1 ⊆ s2`.
pub fn shape_leq(s1: &SkewShape, s2: &SkewShape) -> Result<bool, ImmanantError> {
    if s1.n != s2.n {
        return Err(ImmanantError::SizeMismatch(s1.n, s2.n));
    }
    Ok((0..s1.n).all(|i| {
        s1.mu[i] >= s1.lambda[i] || (s2.mu[i] <= s1.mu[i] && s1.lambda[i] <= s2.lambda[i])
    }))
}

/// A function `S_n -> Z`, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Immanant {
    n: usize,
    coeffs: BTreeMap<Permutation, i64>,
}

impl Immanant {
    pub fn zero(n: usize) -> Self {
        Immanant {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Permutation, i64)>,
    ) -> Result<Self, ImmanantError> {
        let mut f = Immanant::zero(n);
        for (u, c) in terms {
            if u.n() != n {
                return Err(ImmanantError::SizeMismatch(n, u.n()));
            }
            f.add_term(u, c);
        }
        Ok(f)
    }

    /// `Σ sign(σ) x_σ`.
    pub fn determinant(n: usize) -> Self {
        percent_immanant(&SkewShape::full(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, u: &Permutation) -> i64 {
        self.coeffs.get(u).copied().unwrap_or(0)
    }

    /// Nonzero terms in lexicographic order of the permutation.
    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, i64)> {
        self.coeffs.iter().map(|(u, &c)| (u, c))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn add_term(&mut self, u: Permutation, c: i64) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(u) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Immanant) -> Result<Immanant, ImmanantError> {
        if self.n != other.n {
            return Err(ImmanantError::SizeMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (u, c) in other.terms() {
            out.add_term(u.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Immanant) -> Result<Immanant, ImmanantError> {
        self.add(&other.scale_int(-1))
    }

    pub fn scale_int(&self, c: i64) -> Immanant {
        Immanant {
            n: self.n,
            coeffs: if c == 0 {
                BTreeMap::new()
            } else {
                self.coeffs
                    .iter()
                    .map(|(u, &x)| (u.clone(), x * c))
                    .collect()
            },
        }
    }

    /// Multiply by an exact rational; fails if a coefficient would leave the integers.
    pub fn scale(&self, c: &Rational) -> Result<Immanant, ImmanantError> {
        let mut out = Immanant::zero(self.n);
        for (u, x) in self.terms() {
            let v = c * Rational::from_integer(BigInt::from(x));
            if !v.is_integer() {
                return Err(ImmanantError::NonIntegral);
            }
            let v: i64 = v
                .to_integer()
                .try_into()
                .map_err(|_| ImmanantError::NonIntegral)?;
            out.add_term(u.clone(), v);
        }
        Ok(out)
    }

    /// `x_σ -> x_{σ^{-1}}`.
    pub fn s_transform(&self) -> Immanant {
        Immanant {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(u, &c)| (u.inverse(), c)).collect(),
        }
    }

    /// `x_σ -> x_{w0 σ w0}`.
    pub fn t_transform(&self) -> Immanant {
        Immanant {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(u, &c)| (u.conjugate_by_longest(), c))
                .collect(),
        }
    }

    /// `Σ f(σ) x_{1,σ(1)} ... x_{n,σ(n)}`.
    pub fn evaluate(&self, x: &RationalMatrix) -> Result<Rational, ImmanantError> {
        if x.n() != self.n {
            return Err(ImmanantError::SizeMismatch(self.n, x.n()));
        }
        let mut total = Rational::zero();
        for (u, c) in self.terms() {
            let mut prod = Rational::from_integer(BigInt::from(c));
            for i in 1..=self.n {
                let e = x.get(i, u.at(i));
                if e.is_zero() {
                    prod = Rational::zero();
                    break;
                }
                prod *= e;
            }
            total += prod;
        }
        Ok(total)
    }
}

#[derive(Serialize, Deserialize)]
struct ImmanantRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    perm: String,
    coeff: String,
}

impl Serialize for Immanant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ImmanantRepr {
            n: self.n,
            terms: self
                .terms()
                .map(|(u, c)| TermRepr {
                    perm: u.to_string(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Immanant {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = ImmanantRepr::deserialize(d)?;
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in r.terms {
            let u: Permutation = t.perm.parse().map_err(D::Error::custom)?;
            let c: i64 = t.coeff.trim().parse().map_err(D::Error::custom)?;
            terms.push((u, c));
        }
        Immanant::from_terms(r.n, terms).map_err(D::Error::custom)
    }
}

/// Square matrix of exact rationals, 1-based access.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, ImmanantError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(ImmanantError::BadMatrix("matrix must be square".into()));
        }
        Ok(RationalMatrix { rows })
    }

    pub fn zeros(n: usize) -> Self {
        RationalMatrix {
            rows: vec![vec![Rational::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n);
        for i in 1..=n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self, ImmanantError> {
        RationalMatrix::new(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| Rational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i - 1][j - 1]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.rows[i - 1][j - 1] = v;
    }

    /// Parses a JSON array of arrays of `"p/q"` (or integer) strings.
    pub fn from_json(s: &str) -> Result<Self, ImmanantError> {
        let raw: Vec<Vec<serde_json::Value>> =
            serde_json::from_str(s).map_err(|e| ImmanantError::BadMatrix(e.to_string()))?;
        let rows = raw
            .into_iter()
            .map(|r| r.into_iter().map(|v| parse_rational_value(&v)).collect())
            .collect::<Result<Vec<Vec<Rational>>, _>>()?;
        RationalMatrix::new(rows)
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        serde_json::to_string(&rows).expect("strings serialize")
    }
}

fn parse_rational_value(v: &serde_json::Value) -> Result<Rational, ImmanantError> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) if n.is_i64() => {
            Ok(Rational::from_integer(n.as_i64().unwrap().into()))
        }
        other => Err(ImmanantError::BadMatrix(format!("bad entry {other}"))),
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, ImmanantError> {
    let bad = || ImmanantError::BadMatrix(format!("bad rational {s:?}"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Signed indicator of the permutations lying in `shape`.
pub fn percent_immanant(shape: &SkewShape) -> Immanant {
    let n = shape.n;
    let mut f = Immanant::zero(n);
    let mut used = vec![false; n + 1];
    let mut word = Vec::with_capacity(n);
    fn go(shape: &SkewShape, used: &mut [bool], word: &mut Vec<usize>, f: &mut Immanant) {
        let i = word.len();
        if i == shape.n {
            let u = Permutation::new(word.clone()).unwrap();
            let s = u.sign();
            f.coeffs.insert(u, s);
            return;
        }
        for j in shape.mu[i] + 1..=shape.lambda[i] {
            if !used[j] {
                used[j] = true;
                word.push(j);
                go(shape, used, word, f);
                word.pop();
                used[j] = false;
            }
        }
    }
    go(shape, &mut used, &mut word, &mut f);
    f
}

/// `Imm_w = Σ_u f_w(u) x_u`, read off the shared theta table.
pub fn tl_immanant(w: &Permutation) -> Result<Immanant, ImmanantError> {
    let table = tl::theta_table(w.n())?;
    let b = tl::beta(w)?;
    let mut f = Immanant::zero(w.n());
    for (u, t) in table.iter() {
        f.add_term(u.clone(), t.coeff(&b));
    }
    Ok(f)
}

/// `Imm_w` for every 321-avoiding `w ∈ S_n` at once.
pub fn tl_immanants(n: usize) -> Result<HashMap<Permutation, Immanant>, ImmanantError> {
    let table = tl::theta_table(n)?;
    let mut out: HashMap<Permutation, Immanant> = Permutation::all_321_avoiding(n)
        .map(|w| (w, Immanant::zero(n)))
        .collect();
    for (w, terms) in table.coefficients_by_w() {
        let f = out
            .get_mut(&w)
            .expect("beta_inv lands on 321-avoiding permutations");
        for (u, c) in terms {
            f.add_term(u, c);
        }
    }
    Ok(out)
}

fn check_subset(n: usize, s: &BTreeSet<usize>) -> Result<(), ImmanantError> {
    if s.iter().any(|&x| x == 0 || x > n) {
        Err(ImmanantError::BadIndexSet(n))
    } else {
        Ok(())
    }
}

/// `CM_{I,J} = Σ_{u(I) = J} sign(u) x_u`.
pub fn cm_immanant(
    n: usize,
    i: &BTreeSet<usize>,
    j: &BTreeSet<usize>,
) -> Result<Immanant, ImmanantError> {
    check_subset(n, i)?;
    check_subset(n, j)?;
    if i.len() != j.len() {
        return Err(ImmanantError::Unbalanced(i.len(), j.len()));
    }
    let mut f = Immanant::zero(n);
    for u in block_bijections(n, i, j) {
        let s = u.sign();
        f.coeffs.insert(u, s);
    }
    Ok(f)
}

/// `Δ_{I,J} Δ_{Ī,J̄}` expanded as an immanant.
pub fn minor_product(
    n: usize,
    i: &BTreeSet<usize>,
    j: &BTreeSet<usize>,
) -> Result<Immanant, ImmanantError> {
    check_subset(n, i)?;
    check_subset(n, j)?;
    if i.len() != j.len() {
        return Err(ImmanantError::Unbalanced(i.len(), j.len()));
    }
    let ic: Vec<usize> = (1..=n).filter(|x| !i.contains(x)).collect();
    let iv: Vec<usize> = i.iter().copied().collect();
    let mut f = Immanant::zero(n);
    for u in block_bijections(n, i, j) {
        // each minor's sign is that of the induced bijection between sorted index sets
        let s1 = if iv.is_empty() {
            1
        } else {
            u.restriction(&iv).unwrap().sign()
        };
        let s2 = if ic.is_empty() {
            1
        } else {
            u.restriction(&ic).unwrap().sign()
        };
        f.coeffs.insert(u, s1 * s2);
    }
    Ok(f)
}

/// All `u` with `u(I) = J`.
fn block_bijections(n: usize, i: &BTreeSet<usize>, j: &BTreeSet<usize>) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut word = vec![0usize; n];
    let mut used = vec![false; n + 1];
    fn go(
        pos: usize,
        n: usize,
        i: &BTreeSet<usize>,
        j: &BTreeSet<usize>,
        word: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Permutation>,
    ) {
        if pos > n {
            out.push(Permutation::new(word.clone()).unwrap());
            return;
        }
        let inside = i.contains(&pos);
        for v in 1..=n {
            if !used[v] && j.contains(&v) == inside {
                used[v] = true;
                word[pos - 1] = v;
                go(pos + 1, n, i, j, word, used, out);
                used[v] = false;
            }
        }
    }
    go(1, n, i, j, &mut word, &mut used, &mut out);
    out
}

/// `s(I)`: the sum of the elements.
pub fn index_sum(s: &BTreeSet<usize>) -> usize {
    s.iter().sum()
}

/// Visit every 1324-adjacent pair `(w, w')` once, with `w < w'` lexicographically.
fn for_each_adjacent_pair(n: usize, mut visit: impl FnMut(&Permutation, Permutation)) {
    for w in Permutation::all(n) {
        for a in 2..n {
            for b in a + 1..n {
                if w.at(a) < w.at(b) && w.has_1324_witness(a, b) {
                    visit(&w, w.swap_positions(a, b));
                }
            }
        }
    }
}

/// An adjacent pair where `f(w) != -f(w')`, if any.
pub fn sign_alternation_violation(
    f: &Immanant,
) -> Result<Option<(Permutation, Permutation)>, ImmanantError> {
    limits::check(f.n)?;
    let mut bad = None;
    for_each_adjacent_pair(f.n, |w, w2| {
        if bad.is_none() && f.coeff(w) != -f.coeff(&w2) {
            bad = Some((w.clone(), w2));
        }
    });
    Ok(bad)
}

/// `f(w) = -f(w')` for every 1324-adjacent pair; membership in the %-span.
pub fn is_1324_sign_alternating(f: &Immanant) -> Result<bool, ImmanantError> {
    Ok(sign_alternation_violation(f)?.is_none())
}

/// Classes of the transitive closure of 1324-adjacency, each sorted, ordered by least
/// element.
pub fn related_classes(n: usize) -> Result<Vec<Vec<Permutation>>, ImmanantError> {
    limits::check(n)?;
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let index: HashMap<&Permutation, usize> =
        perms.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let mut parent: Vec<usize> = (0..perms.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for_each_adjacent_pair(n, |w, w2| {
        let (a, b) = (index[w], index[&w2]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    });
    let mut groups: BTreeMap<usize, Vec<Permutation>> = BTreeMap::new();
    for (k, w) in perms.iter().enumerate() {
        let r = find(&mut parent, k);
        groups.entry(r).or_default().push(w.clone());
    }
    Ok(groups.into_values().collect())
}

/// `χ_I = Σ_{σ ∈ I} sign(σ) x_σ` for a class `I`.
pub fn class_indicator(n: usize, class: &[Permutation]) -> Immanant {
    let mut f = Immanant::zero(n);
    for s in class {
        f.coeffs.insert(s.clone(), s.sign());
    }
    f
}

/// Coefficients `c_w = f(w) sign(w)` on the class basis, one per class with `c_w != 0`,
/// keyed by the class's least element.
pub fn percent_basis_decompose(
    f: &Immanant,
) -> Result<Vec<(Permutation, Rational)>, ImmanantError> {
    if let Some((w, w2)) = sign_alternation_violation(f)? {
        return Err(ImmanantError::NotInSpan {
            fw: f.coeff(&w),
            fw2: f.coeff(&w2),
            w,
            w2,
        });
    }
    let mut out = Vec::new();
    for class in related_classes(f.n)? {
        let w = &class[0];
        let c = f.coeff(w) * w.sign();
        if c != 0 {
            out.push((w.clone(), Rational::from_integer(c.into())));
        }
    }
    Ok(out)
}

/// Rebuild `Σ c_w χ_{I_w}` from a class decomposition.
pub fn reconstruct(n: usize, parts: &[(Permutation, Rational)]) -> Result<Immanant, ImmanantError> {
    let classes = related_classes(n)?;
    let by_rep: HashMap<&Permutation, &Vec<Permutation>> =
        classes.iter().map(|c| (&c[0], c)).collect();
    let mut f = Immanant::zero(n);
    for (w, c) in parts {
        let class = by_rep
            .get(w)
            .ok_or_else(|| ImmanantError::BadShape(format!("{w} is not a class representative")))?;
        f = f.add(&class_indicator(n, class).scale(c)?)?;
    }
    Ok(f)
}

/// The 0/1 matrix used against a single %-immanant for `w` containing 2143: ones on the
/// anti-diagonal and at `(1, n+1-i)`, `(1, 1)`, `(i, 1)`, `(i, n)`, `(n, n)`, `(n, n+1-i)`
/// with `i = max(w(1), n + 1 - w^{-1}(n))`. Rows 1, `i` and `n` coincide.
pub fn converse_fixture_matrix(w: &Permutation) -> RationalMatrix {
    let n = w.n();
    let ip = w.at(1).max(n + 1 - w.inverse().at(n));
    let mut x = RationalMatrix::zeros(n);
    for i in 1..=n {
        x.set(i, n + 1 - i, Rational::one());
    }
    for (i, j) in [
        (1, n + 1 - ip),
        (1, 1),
        (ip, 1),
        (ip, n),
        (n, n),
        (n, n + 1 - ip),
    ] {
        x.set(i, j, Rational::one());
    }
    x
}

/// Absolute value helper for reports.
pub fn abs_rational(x: &Rational) -> Rational {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::perm;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn hull_examples() {
        assert_eq!(hull(&Permutation::identity(4)), SkewShape::full(4));
        let h = hull(&perm("2143"));
        assert_eq!(h.lambda(), [4, 4, 4, 3]);
        assert_eq!(h.mu(), [1, 0, 0, 0]);
        let h = hull(&perm("2341"));
        assert_eq!(h.lambda(), [4, 4, 4, 1]);
        assert_eq!(h.mu(), [1, 1, 1, 0]);
    }

    #[test]
    fn percent_examples() {
        let det = percent_immanant(&SkewShape::full(4));
        assert_eq!(det.support_len(), 24);
        for u in Permutation::all(4) {
            assert_eq!(det.coeff(&u), u.sign());
        }
        let s = SkewShape::new(5, vec![5, 5, 3, 2, 2], vec![2, 1, 0, 0, 0]).unwrap();
        assert_eq!(percent_immanant(&s).coeff(&perm("34512")), 0);
        assert_eq!(
            percent_immanant(&hull(&perm("2143"))).coeff(&perm("2143")),
            1
        );
    }

    #[test]
    fn lies_in_and_shape_leq() {
        let w = perm("2413");
        assert!(lies_in(&w, &hull(&w)));
        assert!(!lies_in(&perm("1234"), &hull(&perm("2143"))));
        assert!(lies_in(&w, &SkewShape::full(4)));
        assert!(shape_leq(&hull(&w), &SkewShape::full(4)).unwrap());
        assert!(!shape_leq(&hull(&perm("2143")), &hull(&perm("2341"))).unwrap());
        for s in SkewShape::all(4).iter().step_by(7) {
            for w in Permutation::all(4) {
                assert_eq!(lies_in(&w, s), shape_leq(&hull(&w), s).unwrap());
            }
        }
    }

    #[test]
    fn shape_validation() {
        assert!(SkewShape::new(3, vec![3, 3], vec![0, 0]).is_err());
        assert!(SkewShape::new(3, vec![2, 3, 3], vec![0, 0, 0]).is_err());
        assert!(SkewShape::new(3, vec![3, 3, 3], vec![0, 1, 0]).is_err());
        assert!(SkewShape::new(3, vec![2, 2, 2], vec![3, 0, 0]).is_err());
        let json = serde_json::to_string(&hull(&perm("2143"))).unwrap();
        assert_eq!(json, r#"{"lambda":[4,4,4,3],"mu":[1,0,0,0]}"#);
        assert_eq!(
            serde_json::from_str::<SkewShape>(&json).unwrap(),
            hull(&perm("2143"))
        );
        assert!(serde_json::from_str::<SkewShape>(r#"{"n":2,"lambda":[1,2],"mu":[0,0]}"#).is_err());
    }

    #[test]
    fn shape_symmetries_round_trip() {
        for s in SkewShape::all(4) {
            // empty rows make (λ, μ) non-unique, so compare cells
            assert_eq!(s.anti_transpose().anti_transpose().cells(), s.cells());
            assert_eq!(s.transpose().transpose().cells(), s.cells());
            assert_eq!(s.rotate_half_turn().rotate_half_turn().cells(), s.cells());
            assert_eq!(s.anti_transpose().cells().len(), s.cells().len());
        }
    }

    #[test]
    fn tl_immanant_examples() {
        assert_eq!(
            tl_immanant(&Permutation::identity(4)).unwrap(),
            Immanant::determinant(4)
        );
        let f = tl_immanant(&perm("21")).unwrap();
        assert_eq!(f.coeff(&perm("21")), 1);
        // f_21(12) = 0 since 21 is not below 12; the -1 sits in Imm_12 at u = 21
        assert_eq!(f.coeff(&perm("12")), 0);
        assert_eq!(tl_immanant(&perm("12")).unwrap().coeff(&perm("21")), -1);
        assert_eq!(tl_immanant(&perm("2143")).unwrap().coeff(&perm("4321")), 2);
        assert!(tl_immanant(&perm("321")).is_err());
        let all = tl_immanants(5).unwrap();
        assert_eq!(all.len(), 42);
        for (w, f) in &all {
            assert_eq!(f, &tl_immanant(w).unwrap());
        }
    }

    #[test]
    fn cm_examples() {
        assert_eq!(
            cm_immanant(4, &set(&[]), &set(&[])).unwrap(),
            Immanant::determinant(4)
        );
        let f = cm_immanant(4, &set(&[1]), &set(&[4])).unwrap();
        assert_eq!(f.coeff(&perm("4123")), -1);
        assert_eq!(f.coeff(&perm("1423")), 0);
        assert!(cm_immanant(4, &set(&[1]), &set(&[1, 2])).is_err());
    }

    #[test]
    fn cm_sign_law() {
        for n in 1..=4 {
            for mi in 0u32..(1 << n) {
                for mj in 0u32..(1 << n) {
                    if mi.count_ones() != mj.count_ones() {
                        continue;
                    }
                    let i: BTreeSet<usize> = (1..=n).filter(|x| mi >> (x - 1) & 1 == 1).collect();
                    let j: BTreeSet<usize> = (1..=n).filter(|x| mj >> (x - 1) & 1 == 1).collect();
                    let sign = if (index_sum(&i) + index_sum(&j)).is_multiple_of(2) {
                        1
                    } else {
                        -1
                    };
                    assert_eq!(
                        cm_immanant(n, &i, &j).unwrap(),
                        minor_product(n, &i, &j).unwrap().scale_int(sign)
                    );
                }
            }
        }
    }

    #[test]
    fn evaluation() {
        assert_eq!(
            Immanant::determinant(3)
                .evaluate(&RationalMatrix::identity(3))
                .unwrap(),
            Rational::one()
        );
        let x = RationalMatrix::from_integers(&[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(
            Immanant::determinant(2).evaluate(&x).unwrap(),
            Rational::from_integer((-2).into())
        );
        let m = RationalMatrix::from_json(r#"[["1/2", "0"], [3, "-7/3"]]"#).unwrap();
        assert_eq!(m.get(1, 1), &Rational::new(1.into(), 2.into()));
        assert_eq!(RationalMatrix::from_json(&m.to_json()).unwrap(), m);
        assert!(RationalMatrix::from_json(r#"[["1/0"]]"#).is_err());
        assert!(RationalMatrix::from_json(r#"[["1", "2"]]"#).is_err());
    }

    #[test]
    fn three_equal_rows_kill_tl_immanants() {
        for n in 4..=5 {
            let mut rows = vec![vec![0i64; n]; n];
            for (i, row) in rows.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    *x = ((i * 7 + j * 3) % 5) as i64 + 1;
                }
            }
            for k in [1, 2] {
                rows[k] = rows[0].clone();
            }
            let x = RationalMatrix::from_integers(&rows).unwrap();
            for f in tl_immanants(n).unwrap().values() {
                assert!(f.evaluate(&x).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn arithmetic() {
        let f = tl_immanant(&perm("2143")).unwrap();
        assert!(f.add(&f.scale_int(-1)).unwrap().is_zero());
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(f.scale_int(2).scale(&half).unwrap(), f);
        assert!(matches!(f.scale(&half), Err(ImmanantError::NonIntegral)));
        assert!(f.add(&Immanant::zero(3)).is_err());
        assert_eq!(f.s_transform().s_transform(), f);
        assert_eq!(f.t_transform().t_transform(), f);
    }

    #[test]
    fn json_round_trip() {
        let f = tl_immanant(&perm("2143")).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"n":4,"terms":[{"perm":"#));
        assert_eq!(serde_json::from_str::<Immanant>(&s).unwrap(), f);
        assert!(
            serde_json::from_str::<Immanant>(r#"{"n":3,"terms":[{"perm":"21","coeff":"1"}]}"#)
                .is_err()
        );
    }

    #[test]
    fn sign_alternation_examples() {
        for s in SkewShape::all(4) {
            assert!(is_1324_sign_alternating(&percent_immanant(&s)).unwrap());
        }
        assert!(!is_1324_sign_alternating(&tl_immanant(&perm("24153")).unwrap()).unwrap());
        assert!(is_1324_sign_alternating(&Immanant::determinant(5)).unwrap());
    }

    #[test]
    fn class_examples() {
        for class in related_classes(3).unwrap() {
            assert_eq!(class.len(), 1);
        }
        let classes = related_classes(5).unwrap();
        let fixed: Vec<Permutation> = Permutation::all(5)
            .filter(|w| w.at(1) == 1 && w.at(5) == 5)
            .collect();
        assert!(classes.iter().any(|c| fixed.iter().all(|w| c.contains(w))));
    }

    #[test]
    fn basis_decompose_examples() {
        assert!(percent_basis_decompose(&Immanant::zero(4))
            .unwrap()
            .is_empty());
        for w in Permutation::all(4) {
            let f = percent_immanant(&hull(&w));
            let parts = percent_basis_decompose(&f).unwrap();
            assert_eq!(reconstruct(4, &parts).unwrap(), f);
        }
        let f = tl_immanant(&perm("2143")).unwrap();
        let parts = percent_basis_decompose(&f).unwrap();
        assert_eq!(reconstruct(4, &parts).unwrap(), f);
        let g = tl_immanant(&perm("24153")).unwrap();
        assert!(matches!(
            percent_basis_decompose(&g),
            Err(ImmanantError::NotInSpan { .. })
        ));
    }

    #[test]
    fn bigtableau_antidiagonal() {
        for s in SkewShape::all(4) {
            if !percent_immanant(&s).is_zero() {
                assert!((1..=4).all(|i| s.contains(i, 5 - i)), "{s}");
            }
        }
    }
}
