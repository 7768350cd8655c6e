//! Classification of 321- and 1324-avoiding permutations that contain 2143, closed-form
//! coefficients, complementary-minor expansions and %-immanant decompositions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::immanant::{self, hull, percent_immanant, Immanant, ImmanantError, SkewShape};
use crate::perm::{perm, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("{0} contains the pattern 321")]
    Contains321(Permutation),
    #[error("{0} contains the pattern 1324")]
    Contains1324(Permutation),
    #[error("{0} avoids the pattern 2143")]
    Avoids2143(Permutation),
    #[error("{0} contains the pattern 2143")]
    Contains2143(Permutation),
    #[error("{0} is not in normal form (need w(1) = 1 or w(1) = w(n) + 1)")]
    NotNormalForm(Permutation),
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("{w} does not match the block form of its parameters {params}")]
    BlockMismatch { w: Permutation, params: CaseParams },
    #[error("decomposition of {0} failed validation against the oracle")]
    ValidationFailed(Permutation),
    #[error(transparent)]
    Immanant(#[from] ImmanantError),
}

/// Block-length parameters of a 321-, 1324-avoiding, 2143-containing permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum CaseParams {
    /// Block structure `[2][1][3][5][4]` with lengths `a, b, e, c, d`.
    Case1 {
        a: usize,
        b: usize,
        e: usize,
        c: usize,
        d: usize,
    },
    /// Block structure `[3][5][1][6][2][4]` with lengths `a, e, b, c, f, d`.
    Case2 {
        a: usize,
        e: usize,
        b: usize,
        c: usize,
        f: usize,
        d: usize,
    },
}

impl CaseParams {
    pub fn n(&self) -> usize {
        match *self {
            CaseParams::Case1 { a, b, e, c, d } => a + b + e + c + d,
            CaseParams::Case2 { a, e, b, c, f, d } => a + e + b + c + f + d,
        }
    }

    pub fn build(&self) -> Result<Permutation, ClassifyError> {
        match *self {
            CaseParams::Case1 { a, b, e, c, d } => build_case1(a, b, e, c, d),
            CaseParams::Case2 { a, e, b, c, f, d } => build_case2(a, e, b, c, f, d),
        }
    }
}

impl fmt::Display for CaseParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CaseParams::Case1 { a, b, e, c, d } => {
                write!(f, "case1(a={a}, b={b}, e={e}, c={c}, d={d})")
            }
            CaseParams::Case2 {
                a,
                e,
                b,
                c,
                f: ff,
                d,
            } => {
                write!(f, "case2(a={a}, e={e}, b={b}, c={c}, f={ff}, d={d})")
            }
        }
    }
}

fn run(lo: usize, hi: usize) -> impl Iterator<Item = usize> {
    lo..=hi
}

/// `(b+1..b+a : 1..b : b+a+1..b+a+e : n-c+1..n : n-c-d+1..n-c)`.
pub fn build_case1(
    a: usize,
    b: usize,
    e: usize,
    c: usize,
    d: usize,
) -> Result<Permutation, ClassifyError> {
    if a == 0 || b == 0 || c == 0 || d == 0 {
        return Err(ClassifyError::BadParameters(
            "case 1 needs a, b, c, d >= 1".into(),
        ));
    }
    let n = a + b + e + c + d;
    let word: Vec<usize> = run(b + 1, b + a)
        .chain(run(1, b))
        .chain(run(b + a + 1, b + a + e))
        .chain(run(n - c + 1, n))
        .chain(run(n - c - d + 1, n - c))
        .collect();
    Ok(Permutation::new(word).expect("blocks partition [n]"))
}

/// `(b+f+1..b+f+a : n-c-e+1..n-c : 1..b : n-c+1..n : b+1..b+f : n-d-c-e+1..n-c-e)`.
pub fn build_case2(
    a: usize,
    e: usize,
    b: usize,
    c: usize,
    f: usize,
    d: usize,
) -> Result<Permutation, ClassifyError> {
    if a == 0 || b == 0 || c == 0 || d == 0 || e.max(f) == 0 {
        return Err(ClassifyError::BadParameters(
            "case 2 needs a, b, c, d >= 1 and max(e, f) >= 1".into(),
        ));
    }
    let n = a + e + b + c + f + d;
    let word: Vec<usize> = run(b + f + 1, b + f + a)
        .chain(run(n - c - e + 1, n - c))
        .chain(run(1, b))
        .chain(run(n - c + 1, n))
        .chain(run(b + 1, b + f))
        .chain(run(n - d - c - e + 1, n - c - e))
        .collect();
    Ok(Permutation::new(word).expect("blocks partition [n]"))
}

/// `(w^{-1}(1) - 1, w(1) - 1, n - w(n), n - w^{-1}(n))`.
pub fn corner_params(w: &Permutation) -> (usize, usize, usize, usize) {
    let n = w.n();
    let inv = w.inverse();
    (inv.at(1) - 1, w.at(1) - 1, n - w.at(n), n - inv.at(n))
}

/// The patterns whose avoidance (with 321) characterizes membership in the %-span.
pub const MAIN_PATTERNS: [&str; 5] = ["1324", "24153", "31524", "231564", "312645"];

fn contains(w: &Permutation, p: &str) -> bool {
    let p = perm(p);
    p.n() <= w.n() && !w.avoids(&p)
}

/// Avoids 321 and all of [`MAIN_PATTERNS`].
pub fn avoids_main_patterns(w: &Permutation) -> bool {
    w.avoids_321() && MAIN_PATTERNS.iter().all(|p| !contains(w, p))
}

fn require_321_1324(w: &Permutation) -> Result<(), ClassifyError> {
    if !w.avoids_321() {
        return Err(ClassifyError::Contains321(w.clone()));
    }
    if contains(w, "1324") {
        return Err(ClassifyError::Contains1324(w.clone()));
    }
    Ok(())
}

fn require_applicable(w: &Permutation) -> Result<(), ClassifyError> {
    require_321_1324(w)?;
    if !contains(w, "2143") {
        return Err(ClassifyError::Avoids2143(w.clone()));
    }
    Ok(())
}

/// Case parameters of `w`; requires `w` to avoid 321 and 1324 and contain 2143.
pub fn classify_2143(w: &Permutation) -> Result<CaseParams, ClassifyError> {
    require_applicable(w)?;
    let n = w.n();
    let (a1, b1, c1, d1) = corner_params(w);
    let params = if a1 + b1 + c1 + d1 <= n {
        CaseParams::Case1 {
            a: a1,
            b: b1,
            e: n - a1 - b1 - c1 - d1,
            c: c1,
            d: d1,
        }
    } else {
        // e counts the large values among the first a' positions, f the small values
        // among the last d' positions
        let e = (1..=a1).filter(|&i| w.at(i) > n - c1).count();
        let f = (n - d1 + 1..=n).filter(|&i| w.at(i) <= b1).count();
        let bad = || ClassifyError::BlockMismatch {
            w: w.clone(),
            params: CaseParams::Case1 {
                a: a1,
                b: b1,
                e: 0,
                c: c1,
                d: d1,
            },
        };
        CaseParams::Case2 {
            a: a1.checked_sub(e).ok_or_else(bad)?,
            e,
            b: b1.checked_sub(f).ok_or_else(bad)?,
            c: c1.checked_sub(e).ok_or_else(bad)?,
            f,
            d: d1.checked_sub(f).ok_or_else(bad)?,
        }
    };
    match params.build() {
        Ok(v) if &v == w => Ok(params),
        _ => Err(ClassifyError::BlockMismatch {
            w: w.clone(),
            params,
        }),
    }
}

/// `C(A + B, A)`, zero when either argument is negative.
pub fn binomial_ab(a: i64, b: i64) -> i64 {
    if a < 0 || b < 0 {
        return 0;
    }
    let (n, k) = (a + b, a.min(b));
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn count_in(
    u: &Permutation,
    positions: impl Iterator<Item = usize>,
    lo: usize,
    hi: usize,
) -> usize {
    positions.filter(|&i| (lo..=hi).contains(&u.at(i))).count()
}

/// `f_w(u)` from the closed formulas: binomial forms in the two block cases when `w` contains 2143,
/// and `sign(w) sign(u) [u lies in hull(w)]` otherwise.
pub fn closed_form_coeff(w: &Permutation, u: &Permutation) -> Result<i64, ClassifyError> {
    if w.n() != u.n() {
        return Err(ClassifyError::SizeMismatch(w.n(), u.n()));
    }
    require_321_1324(w)?;
    let n = w.n();
    let sgn = w.sign() * u.sign();
    if !contains(w, "2143") {
        return Ok(if immanant::lies_in(u, &hull(w)) {
            sgn
        } else {
            0
        });
    }
    match classify_2143(w)? {
        CaseParams::Case1 { a, b, c, d, .. } => {
            if count_in(u, run(1, a), 1, b) > 0 || count_in(u, run(n + 1 - d, n), n + 1 - c, n) > 0
            {
                return Ok(0);
            }
            let big_a = count_in(u, run(1, a), n + 1 - c, n) as i64;
            // positions in the last d rows sent into [1, b]
            let big_b = count_in(u, run(n + 1 - d, n), 1, b) as i64;
            Ok(sgn * binomial_ab(big_a, big_b))
        }
        CaseParams::Case2 { a, e, b, c, f, d } => {
            if count_in(u, run(1, a + e), 1, b + f) > 0
                || count_in(u, run(a + e + b + c + 1, n), b + f + a + d + 1, n) > 0
            {
                return Ok(0);
            }
            let mid = || run(a + e + 1, a + e + b + c);
            let big_a = c as i64 - count_in(u, mid(), b + f + a + d + 1, n) as i64;
            let big_b = b as i64 - count_in(u, mid(), 1, b + f) as i64;
            Ok(sgn * binomial_ab(big_a, big_b))
        }
    }
}

/// `|f_w(w0)| = C(min(a,c) + min(b,d), min(b,d))`.
pub fn antidiag_coeff(w: &Permutation) -> Result<i64, ClassifyError> {
    let (a, b, c, d) = match classify_2143(w)? {
        CaseParams::Case1 { a, b, c, d, .. } | CaseParams::Case2 { a, b, c, d, .. } => (a, b, c, d),
    };
    Ok(binomial_ab(a.min(c) as i64, b.min(d) as i64))
}

/// One signed complementary minor `sign * CM_{I,J}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmTerm {
    pub sign: i64,
    pub rows: BTreeSet<usize>,
    pub cols: BTreeSet<usize>,
}

impl fmt::Display for CmTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &BTreeSet<usize>| {
            s.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let sign = if self.sign > 0 { '+' } else { '-' };
        write!(
            f,
            "{sign} CM[{{{}}}, {{{}}}]",
            show(&self.rows),
            show(&self.cols)
        )
    }
}

/// Subsets of `[lo, hi]` of size `k`, or of every size when `k` is `None`.
fn subsets(lo: usize, hi: usize, k: Option<usize>) -> Vec<BTreeSet<usize>> {
    let items: Vec<usize> = if lo > hi {
        Vec::new()
    } else {
        (lo..=hi).collect()
    };
    let mut out = Vec::new();
    for mask in 0u64..(1 << items.len()) {
        if k.is_none_or(|k| mask.count_ones() as usize == k) {
            out.push(
                items
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| mask >> t & 1 == 1)
                    .map(|(_, &x)| x)
                    .collect(),
            );
        }
    }
    out
}

fn set_order_key(s: &BTreeSet<usize>) -> (usize, Vec<usize>) {
    (s.len(), s.iter().copied().collect())
}

/// Signed complementary minors whose sum, times `sign(w)`, is `Imm_w`. Ordered by `I` then
/// `J`, each compared by size and then lexicographically.
pub fn cm_expansion(w: &Permutation) -> Result<Vec<CmTerm>, ClassifyError> {
    let n = w.n();
    let mut out = Vec::new();
    match classify_2143(w)? {
        CaseParams::Case1 { a, b, c, d, .. } => {
            for i1 in subsets(1, a, None) {
                for i2 in subsets(1, b, Some(i1.len())) {
                    for i3 in subsets(n - d + 1, n, None) {
                        for i4 in subsets(n - c + 1, n, Some(i3.len())) {
                            let sign = if (i1.len() + i3.len()) % 2 == 0 {
                                1
                            } else {
                                -1
                            };
                            out.push(CmTerm {
                                sign,
                                rows: i1.union(&i3).copied().collect(),
                                cols: i2.union(&i4).copied().collect(),
                            });
                        }
                    }
                }
            }
        }
        CaseParams::Case2 { a, e, b, c, f, d } => {
            for i1 in subsets(a + e + 1, a + e + b + c, Some(c)) {
                for i2 in subsets(b + f + 1, b + f + a + d, Some(a)) {
                    out.push(CmTerm {
                        sign: 1,
                        rows: run(1, a + e).chain(i1.iter().copied()).collect(),
                        cols: i2
                            .iter()
                            .copied()
                            .chain(run(b + f + a + d + 1, n))
                            .collect(),
                    });
                }
            }
        }
    }
    out.sort_by_key(|t| (set_order_key(&t.rows), set_order_key(&t.cols)));
    Ok(out)
}

/// `Σ sign * CM_{I,J}` over the terms.
pub fn sum_cm_terms(n: usize, terms: &[CmTerm]) -> Result<Immanant, ClassifyError> {
    let mut f = Immanant::zero(n);
    for t in terms {
        f = f.add(&immanant::cm_immanant(n, &t.rows, &t.cols)?.scale_int(t.sign))?;
    }
    Ok(f)
}

fn require_csb(w: &Permutation) -> Result<(), ClassifyError> {
    require_321_1324(w)?;
    if contains(w, "2143") {
        return Err(ClassifyError::Contains2143(w.clone()));
    }
    Ok(())
}

/// Row and column index sets `(I, J)`.
pub type IndexSets = (BTreeSet<usize>, BTreeSet<usize>);

/// The sets `I` with `|I| = w(n)` and `[w^{-1}(n)+1, n] ⊆ I ⊆ [w^{-1}(1), n]`, each paired
/// with `J = [1, w(n)]`; their minors sum to the %-immanant of `hull(w)`.
pub fn rect_cm_expansion(w: &Permutation) -> Result<Vec<IndexSets>, ClassifyError> {
    require_csb(w)?;
    let n = w.n();
    if !(w.at(1) == 1 || w.at(1) == w.at(n) + 1) {
        return Err(ClassifyError::NotNormalForm(w.clone()));
    }
    let inv = w.inverse();
    let k = w.at(n);
    let forced: BTreeSet<usize> = run(inv.at(n) + 1, n).collect();
    let cols: BTreeSet<usize> = run(1, k).collect();
    let mut out: Vec<IndexSets> = subsets(inv.at(1), n, Some(k))
        .into_iter()
        .filter(|i| forced.is_subset(i))
        .map(|i| (i, cols.clone()))
        .collect();
    out.sort_by_key(|(i, _)| set_order_key(i));
    Ok(out)
}

/// `S`: inverse; `T`: conjugation by `w0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transform {
    S,
    T,
}

impl Transform {
    pub fn apply(self, w: &Permutation) -> Permutation {
        match self {
            Transform::S => w.inverse(),
            Transform::T => w.conjugate_by_longest(),
        }
    }

    pub fn apply_immanant(self, f: &Immanant) -> Immanant {
        match self {
            Transform::S => f.s_transform(),
            Transform::T => f.t_transform(),
        }
    }
}

/// Transforms taking `w` (avoiding 321, 1324, 2143) to a permutation with `w(1) = 1` or
/// `w(1) = w(n) + 1`.
pub fn reduce_to_special(w: &Permutation) -> Result<(Permutation, Vec<Transform>), ClassifyError> {
    require_csb(w)?;
    let n = w.n();
    let in_form = |v: &Permutation| v.at(1) == 1 || v.at(1) == v.at(n) + 1;
    let candidates: [&[Transform]; 4] = [
        &[],
        &[Transform::T],
        &[Transform::S],
        &[Transform::T, Transform::S],
    ];
    // the order follows the case split: w(1) = 1, then w(n) = n, then w(1) > w(n), then
    // the inverse
    let plan: &[Transform] = if w.at(1) == 1 || w.at(1) > w.at(n) {
        candidates[0]
    } else if w.at(n) == n {
        candidates[1]
    } else {
        candidates[2]
    };
    let mut v = w.clone();
    for t in plan {
        v = t.apply(&v);
    }
    if in_form(&v) {
        return Ok((v, plan.to_vec()));
    }
    // fall back to any short sequence that works
    for plan in candidates {
        let mut v = w.clone();
        for t in plan {
            v = t.apply(&v);
        }
        if in_form(&v) {
            return Ok((v, plan.to_vec()));
        }
    }
    Err(ClassifyError::NotNormalForm(w.clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompositionKind {
    One,
    Two,
    None,
}

/// `sign(w) Imm_w` as a sum of %-immanants, when possible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub kind: DecompositionKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sign: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub shapes: Vec<SkewShape>,
}

impl Decomposition {
    /// `Σ percent_immanant(shape)`.
    pub fn shape_sum(&self, n: usize) -> Result<Immanant, ImmanantError> {
        let mut f = Immanant::zero(n);
        for s in &self.shapes {
            f = f.add(&percent_immanant(s))?;
        }
        Ok(f)
    }
}

/// Oracle validation is on by default up to this size.
pub const VALIDATE_UP_TO: usize = 6;

pub fn decompose(w: &Permutation) -> Result<Decomposition, ClassifyError> {
    decompose_with(w, w.n() <= VALIDATE_UP_TO)
}

fn remove_cells(shape: &SkewShape, cut: impl Fn(usize, usize) -> bool) -> SkewShape {
    let cells = shape
        .cells()
        .into_iter()
        .filter(|&(i, j)| !cut(i, j))
        .collect();
    SkewShape::from_cells(shape.n(), &cells).expect("removing corner rectangles keeps a skew shape")
}

// Second shape when a = 1 (case 1 block form).
fn second_shape_a1(w: &Permutation, b: usize, c: usize, d: usize) -> SkewShape {
    let n = w.n();
    let full = SkewShape::full(n);
    if b == 1 {
        // d x c lower right; column 1 over rows 1..n-d; row 1 over columns 1..n-c
        remove_cells(&full, |i, j| {
            (i > n - d && j > n - c) || (j == 1 && i <= n - d) || (i == 1 && j <= n - c)
        })
    } else {
        // d = 1: row n over columns b+1..n; row 1 over columns 1..n-c
        debug_assert_eq!(d, 1);
        remove_cells(&full, |i, j| (i == n && j > b) || (i == 1 && j <= n - c))
    }
}

/// Like [`decompose`], with oracle validation switched explicitly.
pub fn decompose_with(w: &Permutation, validate: bool) -> Result<Decomposition, ClassifyError> {
    if !w.avoids_321() {
        return Err(ClassifyError::Contains321(w.clone()));
    }
    let sign = w.sign();
    let dec = if !contains(w, "1324") && !contains(w, "2143") {
        Decomposition {
            kind: DecompositionKind::One,
            sign: Some(sign),
            shapes: vec![hull(w)],
        }
    } else if avoids_main_patterns(w) {
        let CaseParams::Case1 { a, b, c, d, .. } = classify_2143(w)? else {
            unreachable!("case 2 contains 24153 or 31524")
        };
        let shapes = if a == 1 {
            vec![hull(w), second_shape_a1(w, b, c, d)]
        } else {
            debug_assert_eq!(c, 1);
            let w2 = w.inverse().conjugate_by_longest();
            let CaseParams::Case1 {
                b: b2,
                c: c2,
                d: d2,
                ..
            } = classify_2143(&w2)?
            else {
                unreachable!("the symmetry preserves case 1")
            };
            [hull(&w2), second_shape_a1(&w2, b2, c2, d2)]
                .iter()
                .map(SkewShape::anti_transpose)
                .collect()
        };
        Decomposition {
            kind: DecompositionKind::Two,
            sign: Some(sign),
            shapes,
        }
    } else {
        Decomposition {
            kind: DecompositionKind::None,
            sign: None,
            shapes: Vec::new(),
        }
    };
    if validate && dec.kind != DecompositionKind::None {
        let target = immanant::tl_immanant(w)?.scale_int(sign);
        if dec.shape_sum(w.n())? != target {
            return Err(ClassifyError::ValidationFailed(w.clone()));
        }
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immanant::tl_immanant;
    use crate::tl::ThetaTable;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn corner_param_examples() {
        assert_eq!(corner_params(&perm("2143")), (1, 1, 1, 1));
        assert_eq!(corner_params(&Permutation::identity(5)), (0, 0, 0, 0));
        assert_eq!(corner_params(&perm("31524")), (1, 2, 1, 2));
    }

    #[test]
    fn main_pattern_examples() {
        assert!(avoids_main_patterns(&perm("2143")));
        assert!(!avoids_main_patterns(&perm("24153")));
        assert!(!avoids_main_patterns(&perm("231564")));
        assert!(!avoids_main_patterns(&perm("321")));
    }

    #[test]
    fn builders() {
        assert_eq!(build_case1(1, 1, 0, 1, 1).unwrap(), perm("2143"));
        assert_eq!(build_case2(1, 1, 1, 1, 0, 1).unwrap(), perm("24153"));
        assert_eq!(build_case2(1, 0, 1, 1, 1, 1).unwrap(), perm("31524"));
        assert!(build_case1(0, 1, 0, 1, 1).is_err());
        assert!(build_case2(1, 0, 1, 1, 0, 1).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_2143(&perm("2143")).unwrap(),
            CaseParams::Case1 {
                a: 1,
                b: 1,
                e: 0,
                c: 1,
                d: 1
            }
        );
        assert_eq!(
            classify_2143(&perm("24153")).unwrap(),
            CaseParams::Case2 {
                a: 1,
                e: 1,
                b: 1,
                c: 1,
                f: 0,
                d: 1
            }
        );
        assert_eq!(
            classify_2143(&perm("231564")).unwrap(),
            CaseParams::Case1 {
                a: 2,
                b: 1,
                e: 0,
                c: 2,
                d: 1
            }
        );
        assert!(matches!(
            classify_2143(&perm("321")),
            Err(ClassifyError::Contains321(_))
        ));
        assert!(matches!(
            classify_2143(&perm("1324")),
            Err(ClassifyError::Contains1324(_))
        ));
        assert!(matches!(
            classify_2143(&perm("2413")),
            Err(ClassifyError::Avoids2143(_))
        ));
    }

    #[test]
    fn params_json_has_variant_tag() {
        let p = CaseParams::Case1 {
            a: 1,
            b: 1,
            e: 0,
            c: 1,
            d: 1,
        };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"variant":"case1","a":1,"b":1,"e":0,"c":1,"d":1}"#);
        assert_eq!(serde_json::from_str::<CaseParams>(&s).unwrap(), p);
    }

    #[test]
    fn round_trip_all_params() {
        for n in 4..=8 {
            for a in 1..=n {
                for b in 1..=n {
                    for c in 1..=n {
                        for d in 1..=n {
                            if a + b + c + d > n {
                                continue;
                            }
                            let p = CaseParams::Case1 {
                                a,
                                b,
                                e: n - a - b - c - d,
                                c,
                                d,
                            };
                            assert_eq!(classify_2143(&p.build().unwrap()).unwrap(), p);
                            for e in 0..=n - a - b - c - d {
                                let f = n - a - b - c - d - e;
                                if e.max(f) == 0 {
                                    continue;
                                }
                                let p = CaseParams::Case2 { a, e, b, c, f, d };
                                assert_eq!(classify_2143(&p.build().unwrap()).unwrap(), p);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_coeff(&perm("2143"), &perm("2143")).unwrap(), 1);
        assert_eq!(closed_form_coeff(&perm("2143"), &perm("2134")).unwrap(), 0);
        assert_eq!(closed_form_coeff(&perm("2143"), &perm("4321")).unwrap(), 2);
        assert_eq!(binomial_ab(-1, 3), 0);
        assert_eq!(binomial_ab(2, 2), 6);
    }

    #[test]
    fn closed_form_matches_oracle_small() {
        for n in 4..=6 {
            let table = ThetaTable::build(n).unwrap();
            for w in Permutation::all_321_avoiding(n).filter(|w| !contains(w, "1324")) {
                for u in Permutation::all(n) {
                    assert_eq!(
                        closed_form_coeff(&w, &u).unwrap(),
                        table.f_coeff(&w, &u).unwrap(),
                        "w={w} u={u}"
                    );
                }
            }
        }
    }

    #[test]
    fn antidiag_examples() {
        assert_eq!(antidiag_coeff(&perm("2143")).unwrap(), 2);
        assert_eq!(antidiag_coeff(&perm("231564")).unwrap(), 3);
    }

    #[test]
    fn cm_expansion_examples() {
        let got = cm_expansion(&perm("2143")).unwrap();
        let want = vec![
            CmTerm {
                sign: 1,
                rows: set(&[]),
                cols: set(&[]),
            },
            CmTerm {
                sign: -1,
                rows: set(&[1]),
                cols: set(&[1]),
            },
            CmTerm {
                sign: -1,
                rows: set(&[4]),
                cols: set(&[4]),
            },
            CmTerm {
                sign: 1,
                rows: set(&[1, 4]),
                cols: set(&[1, 4]),
            },
        ];
        assert_eq!(got, want);
        let sum = sum_cm_terms(4, &got).unwrap();
        assert_eq!(sum.coeff(&perm("4321")), 2);

        let got = cm_expansion(&perm("24153")).unwrap();
        assert_eq!(got.len(), 4);
        for t in &got {
            assert_eq!(t.sign, 1);
            assert!(t.rows == set(&[1, 2, 3]) || t.rows == set(&[1, 2, 4]));
            assert!(t.cols == set(&[2, 4, 5]) || t.cols == set(&[3, 4, 5]));
        }
        // only I = {1,2,4}, J = {2,4,5} carries x_w
        let w = perm("24153");
        let carrying: Vec<&CmTerm> = got
            .iter()
            .filter(|t| t.rows.iter().map(|&i| w.at(i)).collect::<BTreeSet<_>>() == t.cols)
            .collect();
        assert_eq!(carrying.len(), 1);
        assert_eq!(carrying[0].rows, set(&[1, 2, 4]));
        assert_eq!(
            sum_cm_terms(5, &got).unwrap().scale_int(w.sign()),
            tl_immanant(&w).unwrap()
        );
    }

    #[test]
    fn rect_examples() {
        let got = rect_cm_expansion(&perm("3142")).unwrap();
        assert_eq!(
            got,
            vec![(set(&[2, 4]), set(&[1, 2])), (set(&[3, 4]), set(&[1, 2]))]
        );
        let id = rect_cm_expansion(&Permutation::identity(4)).unwrap();
        assert_eq!(id, vec![(set(&[1, 2, 3, 4]), set(&[1, 2, 3, 4]))]);
        assert!(rect_cm_expansion(&perm("2143")).is_err());
        assert!(matches!(
            rect_cm_expansion(&perm("2413")),
            Err(ClassifyError::NotNormalForm(_))
        ));
    }

    #[test]
    fn reduce_examples() {
        let w = perm("1342");
        assert_eq!(reduce_to_special(&w).unwrap(), (w.clone(), vec![]));
        let w = perm("2314");
        assert_eq!(
            reduce_to_special(&w).unwrap(),
            (w.conjugate_by_longest(), vec![Transform::T])
        );
        assert_eq!(
            reduce_to_special(&perm("3142")).unwrap(),
            (perm("3142"), vec![])
        );
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&Permutation::identity(4)).unwrap();
        assert_eq!(d.kind, DecompositionKind::One);
        assert_eq!(d.shapes, vec![SkewShape::full(4)]);
        let d = decompose(&perm("2143")).unwrap();
        assert_eq!(d.kind, DecompositionKind::Two);
        assert_eq!(
            d.shapes,
            vec![
                SkewShape::new(4, vec![4, 4, 4, 3], vec![1, 0, 0, 0]).unwrap(),
                SkewShape::new(4, vec![4, 4, 4, 3], vec![3, 1, 1, 0]).unwrap(),
            ]
        );
        let d = decompose(&perm("24153")).unwrap();
        assert_eq!(d.kind, DecompositionKind::None);
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"kind":"none"}"#);
        assert!(decompose(&perm("321")).is_err());
    }

    #[test]
    fn decompose_validates_for_all_small() {
        for n in 1..=6 {
            for w in Permutation::all_321_avoiding(n) {
                let d = decompose_with(&w, true).unwrap();
                assert_eq!(
                    d.kind != DecompositionKind::None,
                    avoids_main_patterns(&w),
                    "{w}"
                );
            }
        }
    }

    fn applicable(n: usize) -> impl Iterator<Item = Permutation> {
        Permutation::all_321_avoiding(n).filter(|w| !contains(w, "1324") && contains(w, "2143"))
    }

    #[test]
    fn cm_expansion_contract() {
        for n in 4..=6 {
            for w in applicable(n) {
                let sum = sum_cm_terms(n, &cm_expansion(&w).unwrap()).unwrap();
                assert_eq!(sum.scale_int(w.sign()), tl_immanant(&w).unwrap(), "{w}");
            }
        }
    }

    #[test]
    fn case2_iff_contains_24153_or_31524() {
        for n in 4..=7 {
            for w in applicable(n) {
                let case2 = matches!(classify_2143(&w).unwrap(), CaseParams::Case2 { .. });
                assert_eq!(case2, contains(&w, "24153") || contains(&w, "31524"), "{w}");
            }
        }
    }

    #[test]
    fn corner_inequalities() {
        for n in 4..=7 {
            for w in applicable(n) {
                let inv = w.inverse();
                assert!(w.at(1) < w.at(n) && inv.at(1) < inv.at(n), "{w}");
                assert!(inv.at(1) + w.at(1) <= n + 1, "{w}");
                assert!((n + 1 - inv.at(n)) + (n + 1 - w.at(n)) <= n + 1, "{w}");
                assert!(w.at(1) != 1 && w.at(n) != n, "{w}");
            }
        }
    }

    #[test]
    fn forced_matchings_are_canonical() {
        for n in 4..=7 {
            for w in applicable(n) {
                let got = match classify_2143(&w).unwrap() {
                    CaseParams::Case1 { a, b, e, c, d } => {
                        crate::coloring::unique_matching_case1(a, b, c, d, e).unwrap()
                    }
                    CaseParams::Case2 { a, e, b, c, f, d } => {
                        crate::coloring::unique_matching_case2(a, e, b, c, f, d).unwrap()
                    }
                };
                assert_eq!(got.1, crate::tl::beta(&w).unwrap(), "{w}");
            }
        }
    }

    #[test]
    fn rect_expansion_gives_hull() {
        for n in 1..=6 {
            for w in Permutation::all_321_avoiding(n) {
                if contains(&w, "1324") || contains(&w, "2143") {
                    continue;
                }
                let (v, plan) = reduce_to_special(&w).unwrap();
                let mut back = v.clone();
                for t in plan.iter().rev() {
                    back = t.apply(&back);
                }
                assert_eq!(back, w);
                let mut sum = Immanant::zero(n);
                for (i, j) in rect_cm_expansion(&v).unwrap() {
                    sum = sum.add(&immanant::cm_immanant(n, &i, &j).unwrap()).unwrap();
                }
                assert_eq!(sum, percent_immanant(&hull(&v)), "{v}");
                assert_eq!(
                    percent_immanant(&hull(&w)),
                    tl_immanant(&w).unwrap().scale_int(w.sign()),
                    "{w}"
                );
            }
        }
    }
}
