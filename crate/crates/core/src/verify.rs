//! Exhaustive and sampled checks of the acceptance criteria A1-A10.
//!
//! Each suite returns a [`VerificationReport`]. Work is split over permutations with rayon;
//! results are merged in input order so reports do not depend on the thread count.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{self, DecompositionKind};
use crate::coloring::{self, Coloring};
use crate::immanant::{self, hull, percent_immanant, Immanant, Rational, SkewShape};
use crate::limits::{self, LimitExceeded};
use crate::perm::{perm, Permutation};
use crate::tl::{self, beta, beta_inv, NonCrossingMatching, ThetaTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Suite {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    A10,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::A1,
        Suite::A2,
        Suite::A3,
        Suite::A4,
        Suite::A5,
        Suite::A6,
        Suite::A7,
        Suite::A8,
        Suite::A9,
        Suite::A10,
    ];

    /// Largest `n` checked when no override is given.
    pub fn default_max_n(self) -> usize {
        match self {
            Suite::A1 | Suite::A2 | Suite::A7 | Suite::A9 | Suite::A10 => 6,
            Suite::A3 | Suite::A8 => 7,
            Suite::A4 | Suite::A5 => 5,
            Suite::A6 => 8,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::A1 => "single %-immanant iff w avoids 1324 and 2143",
            Suite::A2 => "at most two %-immanants iff w avoids the main patterns",
            Suite::A3 => "closed-form coefficients agree with the theta table",
            Suite::A4 => "complementary minors are sums of compatible TL immanants",
            Suite::A5 => "f_w(u) is invariant under inverse and w0-conjugation",
            Suite::A6 => "321-avoiding permutations biject with non-crossing matchings",
            Suite::A7 => "forced colorings and matchings are unique and match beta",
            Suite::A8 => "anti-diagonal coefficient is a binomial",
            Suite::A9 => "1324-classes are hull fibers; class basis reconstructs %-span",
            Suite::A10 => "complementary-minor expansions and the converse fixture",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown suite {0:?} (expected A1..A10 or all)")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub claim: String,
    pub witness: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub n: usize,
    pub checks: u64,
    pub failures: Vec<Failure>,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
    pub notes: Vec<String>,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `{report}` omits the timing so output is reproducible; `{report:#}` includes it.
impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} (n <= {}) {}: {} checks, {} failures",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.n,
            self.suite.description(),
            self.checks,
            self.failures.len(),
        )?;
        if f.alternate() {
            write!(f, ", {:.2}s", self.elapsed.as_secs_f64())?;
        }
        for note in &self.notes {
            write!(f, "\n  note: {note}")?;
        }
        for x in self.failures.iter().take(10) {
            write!(
                f,
                "\n  {} at {}: expected {}, got {}",
                x.claim, x.witness, x.expected, x.actual
            )?;
        }
        if self.failures.len() > 10 {
            write!(f, "\n  ... {} more", self.failures.len() - 10)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    /// Overrides [`Suite::default_max_n`].
    pub max_n: Option<usize>,
    /// Random pairs for A3 above n = 6.
    pub samples: usize,
    /// Random shape combinations per n for A9.
    pub combos: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_n: None,
            samples: 100_000,
            combos: 200,
            seed: 0x7117,
            jobs: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Limit(#[from] LimitExceeded),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Default)]
struct Tally {
    checks: u64,
    failures: Vec<Failure>,
}

impl Tally {
    fn check(
        &mut self,
        ok: bool,
        claim: &str,
        witness: impl fmt::Display,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure {
                claim: claim.to_string(),
                witness: witness.to_string(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }

    fn eq<T: PartialEq + fmt::Debug>(
        &mut self,
        claim: &str,
        witness: impl fmt::Display,
        expected: T,
        actual: T,
    ) {
        let ok = expected == actual;
        if ok {
            self.checks += 1;
        } else {
            self.check(
                false,
                claim,
                witness,
                format!("{expected:?}"),
                format!("{actual:?}"),
            );
        }
    }

    /// Records an unexpected error as a failure.
    fn ok<T, E: fmt::Display>(
        &mut self,
        claim: &str,
        witness: impl fmt::Display,
        r: Result<T, E>,
    ) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, claim, witness, "no error", e);
                None
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.failures.extend(other.failures);
        self
    }
}

/// Runs `f` over `items` in parallel, merging tallies in item order.
fn par_tally<T: Sync>(items: &[T], f: impl Fn(&T, &mut Tally) + Sync) -> Tally {
    items
        .par_iter()
        .map(|x| {
            let mut t = Tally::default();
            f(x, &mut t);
            t
        })
        .reduce(Tally::default, Tally::merge)
}

fn has(w: &Permutation, p: &str) -> bool {
    !w.avoids(&perm(p))
}

fn avoids_321(n: usize) -> Vec<Permutation> {
    Permutation::all_321_avoiding(n).collect()
}

/// 321-, 1324-avoiding and 2143-containing.
fn applicable(n: usize) -> Vec<Permutation> {
    Permutation::all_321_avoiding(n)
        .filter(|w| !has(w, "1324") && has(w, "2143"))
        .collect()
}

fn tl_all(n: usize, t: &mut Tally) -> Option<HashMap<Permutation, Immanant>> {
    t.ok("theta table", format!("n={n}"), immanant::tl_immanants(n))
}

fn table(n: usize, t: &mut Tally) -> Option<std::sync::Arc<ThetaTable>> {
    t.ok("theta table", format!("n={n}"), tl::theta_table(n))
}

/// Runs one suite.
pub fn run(suite: Suite, cfg: &Config) -> Result<VerificationReport, VerifyError> {
    let max_n = cfg.max_n.unwrap_or(suite.default_max_n());
    limits::check(max_n)?;
    let go = || {
        let start = Instant::now();
        let mut notes = Vec::new();
        let tally = match suite {
            Suite::A1 => a1(max_n),
            Suite::A2 => a2(max_n),
            Suite::A3 => a3(max_n, cfg, &mut notes),
            Suite::A4 => a4(max_n),
            Suite::A5 => a5(max_n),
            Suite::A6 => a6(max_n, &mut notes),
            Suite::A7 => a7(max_n),
            Suite::A8 => a8(max_n),
            Suite::A9 => a9(max_n, cfg, &mut notes),
            Suite::A10 => a10(max_n),
        };
        VerificationReport {
            suite,
            n: max_n,
            checks: tally.checks,
            failures: tally.failures,
            elapsed: start.elapsed(),
            notes,
        }
    };
    match cfg.jobs {
        None => Ok(go()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| VerifyError::Pool(e.to_string()))?;
            Ok(pool.install(go))
        }
    }
}

/// Runs every suite in order.
pub fn run_all(cfg: &Config) -> Result<Vec<VerificationReport>, VerifyError> {
    Suite::ALL.iter().map(|&s| run(s, cfg)).collect()
}

fn a1(max_n: usize) -> Tally {
    let mut t = Tally::default();
    for n in 1..=max_n {
        let Some(imms) = tl_all(n, &mut t) else {
            continue;
        };
        let ws = avoids_321(n);
        t = t.merge(par_tally(&ws, |w, t| {
            let equal = imms[w] == percent_immanant(&hull(w)).scale_int(w.sign());
            let expected = !has(w, "1324") && !has(w, "2143");
            t.check(
                equal == expected,
                "Imm_w = sign(w) Imm%_hull iff avoids 1324, 2143",
                w,
                expected,
                equal,
            );
        }));
    }
    t
}

fn a2(max_n: usize) -> Tally {
    let mut t = Tally::default();
    for n in 1..=max_n {
        let Some(imms) = tl_all(n, &mut t) else {
            continue;
        };
        let ws = avoids_321(n);
        t = t.merge(par_tally(&ws, |w, t| {
            let imm = &imms[w];
            let Some(dec) = t.ok("decompose", w, classify::decompose_with(w, false)) else {
                return;
            };
            let Some(alt) = t.ok(
                "sign alternation",
                w,
                immanant::is_1324_sign_alternating(imm),
            ) else {
                return;
            };
            let main = classify::avoids_main_patterns(w);
            let some = dec.kind != DecompositionKind::None;
            t.eq("decompose != None iff avoids main patterns", w, main, some);
            t.eq(
                "avoids main patterns iff 1324-sign-alternating",
                w,
                main,
                alt,
            );
            if some {
                let want_len = if has(w, "1324") || has(w, "2143") {
                    2
                } else {
                    1
                };
                t.eq("number of shapes", w, want_len, dec.shapes.len());
                if let Some(sum) = t.ok("shape sum", w, dec.shape_sum(n)) {
                    let target = imm.scale_int(w.sign());
                    t.check(
                        sum == target,
                        "shape sum = sign(w) Imm_w",
                        w,
                        "equal",
                        "differs",
                    );
                }
            }
        }));
    }
    t
}

fn a3(max_n: usize, cfg: &Config, notes: &mut Vec<String>) -> Tally {
    let mut t = Tally::default();
    for n in 1..=max_n {
        let ws = applicable(n);
        if ws.is_empty() {
            continue;
        }
        let Some(tab) = table(n, &mut t) else {
            continue;
        };
        if n <= 6 {
            let us: Vec<Permutation> = Permutation::all(n).collect();
            t = t.merge(par_tally(&ws, |w, t| {
                for u in &us {
                    compare_closed_form(&tab, w, u, t);
                }
            }));
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ n as u64);
            let pairs: Vec<(Permutation, Permutation)> = (0..cfg.samples)
                .map(|_| {
                    let w = ws.choose(&mut rng).unwrap().clone();
                    let mut word: Vec<usize> = (1..=n).collect();
                    word.shuffle(&mut rng);
                    (w, Permutation::new(word).unwrap())
                })
                .collect();
            t = t.merge(par_tally(&pairs, |(w, u), t| {
                compare_closed_form(&tab, w, u, t)
            }));
            notes.push(format!(
                "n={n}: {} random pairs over {} applicable w",
                cfg.samples,
                ws.len()
            ));
        }
    }
    t
}

fn compare_closed_form(tab: &ThetaTable, w: &Permutation, u: &Permutation, t: &mut Tally) {
    let witness = format!("w={w} u={u}");
    let Some(oracle) = t.ok("oracle", &witness, tab.f_coeff(w, u)) else {
        return;
    };
    let Some(formula) = t.ok("closed form", &witness, classify::closed_form_coeff(w, u)) else {
        return;
    };
    t.eq("closed form = f_w(u)", witness, oracle, formula);
}

fn subsets(n: usize) -> Vec<BTreeSet<usize>> {
    (0u32..1 << n)
        .map(|m| (1..=n).filter(|&i| m >> (i - 1) & 1 == 1).collect())
        .collect()
}

fn show_set(s: &BTreeSet<usize>) -> String {
    let v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn a4(max_n: usize) -> Tally {
    let mut t = Tally::default();
    for n in 1..=max_n {
        let Some(imms) = tl_all(n, &mut t) else {
            continue;
        };
        let sets = subsets(n);
        let pairs: Vec<(&BTreeSet<usize>, &BTreeSet<usize>)> = sets
            .iter()
            .flat_map(|i| {
                sets.iter()
                    .filter(move |j| j.len() == i.len())
                    .map(move |j| (i, j))
            })
            .collect();
        t = t.merge(par_tally(&pairs, |&(i, j), t| {
            let witness = format!("n={n} I={} J={}", show_set(i), show_set(j));
            let col = Coloring::new(n, i.iter().copied(), j.iter().copied())
                .map_err(|e| e.to_string())
                .and_then(|c| coloring::compatible_permutations(&c).map_err(|e| e.to_string()));
            let Some(ws) = t.ok("compatible permutations", &witness, col) else {
                return;
            };
            let mut sum = Immanant::zero(n);
            for w in &ws {
                sum = sum.add(&imms[w]).unwrap();
            }
            let sign = if (immanant::index_sum(i) + immanant::index_sum(j)).is_multiple_of(2) {
                1
            } else {
                -1
            };
            if let Some(cm) = t.ok("cm immanant", &witness, immanant::cm_immanant(n, i, j)) {
                t.check(
                    cm.scale_int(sign) == sum,
                    "(-1)^(s(I)+s(J)) CM = sum of compatible Imm_w",
                    &witness,
                    "equal",
                    "differs",
                );
            }
            if let Some(mp) = t.ok("minor product", &witness, immanant::minor_product(n, i, j)) {
                t.check(
                    mp == sum,
                    "minor product = sum of compatible Imm_w",
                    &witness,
                    "equal",
                    "differs",
                );
            }
        }));
    }
    t
}

fn a5(max_n: usize) -> Tally {
    let mut t = Tally::default();
    for n in 1..=max_n {
        let Some(tab) = table(n, &mut t) else {
            continue;
        };
        let ws = avoids_321(n);
        let us: Vec<Permutation> = Permutation::all(n).collect();
        t = t.merge(par_tally(&ws, |w, t| {
            let (wi, wc) = (w.inverse(), w.conjugate_by_longest());
            for u in &us {
                let witness = format!("w={w} u={u}");
                let f = tab.f_coeff(w, u).unwrap();
                let fi = tab.f_coeff(&wi, &u.inverse()).unwrap();
                let fc = tab.f_coeff(&wc, &u.conjugate_by_longest()).unwrap();
                t.eq("f_w(u) = f_{w^-1}(u^-1)", &witness, f, fi);
                t.eq("f_w(u) = f_{w0 w w0}(w0 u w0)", &witness, f, fc);
            }
        }));
    }
    t
}

fn catalan(n: usize) -> u64 {
    // C(2n, n) / (n + 1)
    let mut c: u64 = 1;
    for k in 0..n as u64 {
        c = c * (2 * n as u64 - k) / (k + 1);
    }
    c / (n as u64 + 1)
}

const CATALAN: [u64; 8] = [1, 2, 5, 14, 42, 132, 429, 1430];

fn a6(max_n: usize, notes: &mut Vec<String>) -> Tally {
    let mut t = Tally::default();
    for n in 1..=max_n {
        let ws = avoids_321(n);
        let ms = NonCrossingMatching::all(n);
        let cat = catalan(n);
        if n <= CATALAN.len() {
            t.eq("Catalan number", n, CATALAN[n - 1], cat);
        }
        t.eq("#321-avoiding = Catalan", n, cat, ws.len() as u64);
        t.eq("#matchings = Catalan", n, cat, ms.len() as u64);
        let images: Vec<Option<NonCrossingMatching>> =
            ws.par_iter().map(|w| beta(w).ok()).collect();
        let distinct: HashSet<&NonCrossingMatching> = images.iter().flatten().collect();
        t.eq("beta is injective", n, ws.len(), distinct.len());
        for (w, m) in ws.iter().zip(&images) {
            match m {
                Some(m) => t.eq("beta_inv(beta(w)) = w", w, w, &beta_inv(m)),
                None => t.check(
                    false,
                    "beta defined on 321-avoiding",
                    w,
                    "a matching",
                    "error",
                ),
            }
        }
        for m in &ms {
            let w = beta_inv(m);
            t.eq("beta(beta_inv(m)) = m", m, Some(m.clone()), beta(&w).ok());
        }
        notes.push(format!("n={n}: ({}, {})", ws.len(), ms.len()));
    }
    t
}

/// Tuples of `len` nonnegative integers summing to `total`.
fn compositions(total: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|x| {
            compositions(total - x, len - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, x);
                    rest
                })
        })
        .collect()
}

fn a7(max_n: usize) -> Tally {
    let mut t = Tally::default();
    for n in 1..=max_n {
        let simple: Vec<Vec<usize>> = compositions(2 * n, 3)
            .into_iter()
            .filter(|p| p.iter().all(|&x| x <= n))
            .collect();
        t = t.merge(par_tally(&simple, |p, t| {
            let [a, b, c] = [p[0], p[1], p[2]];
            let found =
                coloring::brute_force(n, |col, m| coloring::satisfies_simple([a, b, c], col, m));
            let witness = format!("simple({a},{b},{c})");
            t.eq("unique solution", &witness, 1, found.len());
            if let (Some(sol), Some(got)) = (
                found.first(),
                t.ok(
                    "construction",
                    &witness,
                    coloring::unique_matching_simple(a, b, c),
                ),
            ) {
                t.eq("construction = brute force", &witness, sol, &got);
            }
        }));
        let general = compositions(n, 5);
        t = t.merge(par_tally(&general, |p, t| {
            let q = [p[0], p[1], p[2], p[3], p[4]];
            let found = coloring::brute_force(n, |col, m| coloring::satisfies_general(q, col, m));
            let witness = format!("general{q:?}");
            t.eq("unique solution", &witness, 1, found.len());
            if let (Some(sol), Some(got)) = (
                found.first(),
                t.ok(
                    "construction",
                    &witness,
                    coloring::unique_matching_general(q[0], q[1], q[2], q[3], q[4]),
                ),
            ) {
                t.eq("construction = brute force", &witness, sol, &got);
            }
        }));
        let case1: Vec<Vec<usize>> = compositions(n, 5)
            .into_iter()
            .filter(|p| p[..4].iter().all(|&x| x >= 1))
            .collect();
        t = t.merge(par_tally(&case1, |p, t| {
            // [a, b, c, d, e]
            let (a, b, c, d, e) = (p[0], p[1], p[2], p[3], p[4]);
            let found = coloring::brute_force(n, |col, m| {
                coloring::satisfies_case1([a, b, c, d, e], col, m)
            });
            let witness = format!("case1(a={a},b={b},c={c},d={d},e={e})");
            t.eq("unique solution", &witness, 1, found.len());
            let Some((col, m)) = found.first() else {
                return;
            };
            if let Some(got) = t.ok(
                "construction",
                &witness,
                coloring::unique_matching_case1(a, b, c, d, e),
            ) {
                t.eq(
                    "construction = brute force",
                    &witness,
                    (col.to_coloring(), m.clone()),
                    got,
                );
            }
            let w = classify::build_case1(a, b, e, c, d).unwrap();
            t.eq(
                "matching = beta(w)",
                &witness,
                Some(m.clone()),
                beta(&w).ok(),
            );
        }));
        let case2: Vec<Vec<usize>> = compositions(n, 6)
            .into_iter()
            .filter(|p| [p[0], p[2], p[3], p[5]].iter().all(|&x| x >= 1) && p[1].max(p[4]) >= 1)
            .collect();
        t = t.merge(par_tally(&case2, |p, t| {
            // [a, e, b, c, f, d]
            let q = [p[0], p[1], p[2], p[3], p[4], p[5]];
            let found = coloring::brute_force(n, |col, m| coloring::satisfies_case2(q, col, m));
            let witness = format!(
                "case2(a={},e={},b={},c={},f={},d={})",
                q[0], q[1], q[2], q[3], q[4], q[5]
            );
            t.eq("unique solution", &witness, 1, found.len());
            let Some((col, m)) = found.first() else {
                return;
            };
            if let Some(got) = t.ok(
                "construction",
                &witness,
                coloring::unique_matching_case2(q[0], q[1], q[2], q[3], q[4], q[5]),
            ) {
                t.eq(
                    "construction = brute force",
                    &witness,
                    (col.to_coloring(), m.clone()),
                    got,
                );
            }
            let w = classify::build_case2(q[0], q[1], q[2], q[3], q[4], q[5]).unwrap();
            t.eq(
                "matching = beta(w)",
                &witness,
                Some(m.clone()),
                beta(&w).ok(),
            );
        }));
    }
    t
}

fn a8(max_n: usize) -> Tally {
    let mut t = Tally::default();
    for n in 1..=max_n {
        let ws = applicable(n);
        if ws.is_empty() {
            continue;
        }
        let Some(tab) = table(n, &mut t) else {
            continue;
        };
        let w0 = Permutation::longest_word(n);
        t = t.merge(par_tally(&ws, |w, t| {
            let Some(formula) = t.ok("antidiag", w, classify::antidiag_coeff(w)) else {
                return;
            };
            let oracle = tab.f_coeff(w, &w0).unwrap();
            t.eq("antidiag_coeff = |f_w(w0)|", w, oracle.abs(), formula);
        }));
    }
    for (w, u, want, absolute) in [("2143", "4321", 2, false), ("231564", "654321", 3, true)] {
        let (w, u) = (perm(w), perm(u));
        if let Some(tab) = table(w.n(), &mut t) {
            let f = tab.f_coeff(&w, &u).unwrap();
            let got = if absolute { f.abs() } else { f };
            t.eq("anchor", format!("f_{w}({u})"), want, got);
        }
    }
    t
}

fn a9(max_n: usize, cfg: &Config, notes: &mut Vec<String>) -> Tally {
    let mut t = Tally::default();
    for n in 1..=max_n {
        let Some(classes) = t.ok("related classes", n, immanant::related_classes(n)) else {
            continue;
        };
        let mut fibers: HashMap<SkewShape, Vec<Permutation>> = HashMap::new();
        for w in Permutation::all(n) {
            fibers.entry(hull(&w)).or_default().push(w);
        }
        let mut by_hull: Vec<Vec<Permutation>> = fibers.into_values().collect();
        by_hull.iter_mut().for_each(|c| c.sort());
        by_hull.sort();
        t.eq("classes = hull fibers", n, by_hull, classes.clone());
        notes.push(format!("n={n}: {} classes", classes.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for n in 1..=max_n.min(5) {
        let shapes = SkewShape::all(n);
        let combos: Vec<Vec<(SkewShape, i64)>> = (0..cfg.combos)
            .map(|_| {
                let k = rng.gen_range(1..=3);
                (0..k)
                    .map(|_| {
                        let c = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
                        (shapes.choose(&mut rng).unwrap().clone(), c)
                    })
                    .collect()
            })
            .collect();
        t = t.merge(par_tally(&combos, |combo, t| {
            let mut f = Immanant::zero(n);
            for (s, c) in combo {
                f = f.add(&percent_immanant(s).scale_int(*c)).unwrap();
            }
            let witness = combo
                .iter()
                .map(|(s, c)| format!("{c}*{s}"))
                .collect::<Vec<_>>()
                .join(" + ");
            let Some(parts) = t.ok(
                "basis decomposition",
                &witness,
                immanant::percent_basis_decompose(&f),
            ) else {
                return;
            };
            if let Some(back) = t.ok("reconstruct", &witness, immanant::reconstruct(n, &parts)) {
                t.check(back == f, "reconstruction", &witness, "equal", "differs");
            }
        }));
    }
    t
}

/// Full square without the cells `(1, 1)` and `(n, n)`.
fn cornerless_square(n: usize) -> SkewShape {
    let mut lambda = vec![n; n];
    lambda[n - 1] = n - 1;
    let mut mu = vec![0; n];
    mu[0] = 1;
    SkewShape::new(n, lambda, mu).expect("valid for n >= 2")
}

fn a10(max_n: usize) -> Tally {
    let mut t = Tally::default();
    for n in 1..=max_n {
        let Some(imms) = tl_all(n, &mut t) else {
            continue;
        };
        let ws = applicable(n);
        t = t.merge(par_tally(&ws, |w, t| {
            let Some(terms) = t.ok("cm expansion", w, classify::cm_expansion(w)) else {
                return;
            };
            if let Some(sum) = t.ok("cm sum", w, classify::sum_cm_terms(n, &terms)) {
                t.check(
                    sum.scale_int(w.sign()) == imms[w],
                    "sign(w) sum of CM terms = Imm_w",
                    w,
                    "equal",
                    "differs",
                );
            }
            let x = immanant::converse_fixture_matrix(w);
            let shape = cornerless_square(n);
            let p = percent_immanant(&shape).evaluate(&x).unwrap();
            t.eq(
                "Imm%(X) = +-1",
                w,
                Rational::from_integer(1.into()),
                immanant::abs_rational(&p),
            );
            let q = imms[w].evaluate(&x).unwrap();
            t.eq("Imm_w(X) = 0", w, Rational::from_integer(0.into()), q);
        }));
        let csb: Vec<Permutation> = avoids_321(n)
            .into_iter()
            .filter(|w| !has(w, "1324") && !has(w, "2143"))
            .collect();
        t = t.merge(par_tally(&csb, |w, t| {
            let Some((v, plan)) = t.ok("reduce", w, classify::reduce_to_special(w)) else {
                return;
            };
            let Some(rect) = t.ok("rect expansion", &v, classify::rect_cm_expansion(&v)) else {
                return;
            };
            let mut sum = Immanant::zero(n);
            for (i, j) in &rect {
                sum = sum.add(&immanant::cm_immanant(n, i, j).unwrap()).unwrap();
            }
            t.check(
                sum == percent_immanant(&hull(&v)),
                "rect CM sum = Imm%_hull(v)",
                &v,
                "equal",
                "differs",
            );
            for step in plan.iter().rev() {
                sum = step.apply_immanant(&sum);
            }
            t.check(
                sum == percent_immanant(&hull(w)),
                "transformed back = Imm%_hull(w)",
                w,
                "equal",
                "differs",
            );
        }));
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n: usize) -> Config {
        Config {
            max_n: Some(n),
            samples: 200,
            combos: 20,
            ..Config::default()
        }
    }

    #[test]
    fn suites_pass_at_small_n() {
        for s in Suite::ALL {
            let r = run(s, &small(5)).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.checks > 0, "{s}");
        }
    }

    #[test]
    fn suite_names() {
        assert_eq!("a10".parse::<Suite>().unwrap(), Suite::A10);
        assert!("A11".parse::<Suite>().is_err());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let one = run(
            Suite::A1,
            &Config {
                jobs: Some(1),
                ..small(5)
            },
        )
        .unwrap();
        let four = run(
            Suite::A1,
            &Config {
                jobs: Some(4),
                ..small(5)
            },
        )
        .unwrap();
        assert_eq!(one.checks, four.checks);
        assert_eq!(one.failures, four.failures);
    }

    #[test]
    fn catalan_numbers() {
        let got: Vec<u64> = (1..=8).map(catalan).collect();
        assert_eq!(got, CATALAN);
    }

    #[test]
    fn limit_is_enforced() {
        assert!(matches!(
            run(
                Suite::A1,
                &Config {
                    max_n: Some(40),
                    ..Config::default()
                }
            ),
            Err(VerifyError::Limit(_))
        ));
    }
}
