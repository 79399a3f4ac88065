//! The Möbius function of the cobweb poset in its three published forms,
//! plus a full-matrix driver and a strategy benchmark.
//!
//! The three routes are intentionally independent:
//!
//! * `recurrence` — the defining recursion `mu(x,x) = 1`,
//!   `mu(x,y) = -sum of mu(x,z) over x <= z < y`, memoized per pair;
//! * `levels` — the closed five-case formula on natural labels, with the
//!   signed product of `(F(l) - 1)` over the levels strictly between;
//! * `coords` — the coordinate delta form, whose shift sum fires at most
//!   once, so one entry costs one product over the level gap.
//!
//! All three must agree entrywise; the benchmark checks that before it
//! reports any timing.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num::bigint::BigInt;
use num::One;
use serde::Serialize;

use crate::error::CobwebError;
use crate::fib::{self, Label};
use crate::incidence::IncidenceFunction;
use crate::poset::{le, TruncatedPoset, Vertex};
use crate::scalar::Scalar;

/// Literal memoized evaluation of the defining recurrence; zero when the
/// pair is incomparable.
pub fn mobius_recurrence(
    poset: &TruncatedPoset,
    x: &Vertex,
    y: &Vertex,
) -> Result<BigInt, CobwebError> {
    let a = poset.label_of_vertex(x)?;
    let b = poset.label_of_vertex(y)?;
    if !le(x, y) {
        return Ok(BigInt::ZERO);
    }
    // mu(x, z) for every z in the interval, in linear-extension order; each
    // value is minus the sum of the already-memoized values strictly below z.
    let interval = poset.interval(x, y)?;
    let mut memo: BTreeMap<Label, (u32, BigInt)> = BTreeMap::new();
    memo.insert(a, (x.level(), BigInt::one()));
    for z in interval.iter().skip(1) {
        let zl = poset.label_of_vertex(z).unwrap();
        let mut sum = BigInt::ZERO;
        for (level, value) in memo.values() {
            if *level < z.level() {
                sum += value;
            }
        }
        memo.insert(zl, (z.level(), -sum));
    }
    Ok(memo.remove(&b).map(|(_, v)| v).unwrap_or(BigInt::ZERO))
}

/// The five-case closed formula on natural labels.
///
/// `x > y` is read as natural-number comparison, which also covers the
/// incomparable descending pairs; distinct labels of one level fall to the
/// same-level case at every level, not only where the level holds more than
/// one element.
pub fn mobius_levels(x: Label, y: Label) -> Result<BigInt, CobwebError> {
    if x == 0 || y == 0 {
        return Err(CobwebError::ZeroLabel);
    }
    if x > y {
        return Ok(BigInt::ZERO);
    }
    if x == y {
        return Ok(BigInt::one());
    }
    let k = fib::level_of(x)?;
    let n = fib::level_of(y)?;
    if k == n {
        return Ok(BigInt::ZERO);
    }
    if n == k + 1 {
        return Ok(BigInt::from(-1));
    }
    Ok(signed_gap_product(k, n))
}

/// `(-1)^(v-t)` times the product of `F(l) - 1` over `t < l < v`.
fn signed_gap_product(t: u32, v: u32) -> BigInt {
    let mut product = BigInt::one();
    for l in (t + 1)..v {
        product *= BigInt::from(fib::fib(u64::from(l))) - 1;
    }
    if (v - t) % 2 == 1 {
        product = -product;
    }
    product
}

/// The coordinate delta form: a diagonal term, minus an adjacent-level term,
/// plus one signed product term per level gap of at least two. Only the term
/// matching the actual gap can fire, so an entry costs `O(gap)`
/// multiplications and depends on the rows only through the diagonal.
pub fn mobius_coords(x: &Vertex, y: &Vertex) -> BigInt {
    let (t, v) = (x.level(), y.level());
    if t == v {
        return if x == y { BigInt::one() } else { BigInt::ZERO };
    }
    if v < t {
        return BigInt::ZERO;
    }
    if v == t + 1 {
        return BigInt::from(-1);
    }
    signed_gap_product(t, v)
}

/// How to build the full Möbius matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MobiusStrategy {
    /// Per-entry closed formula; one product over the level gap per entry.
    Explicit,
    /// Defining recursion, one memoized sweep per row.
    Recurrence,
    /// Dense unitriangular back-substitution over the whole linear
    /// extension, blind to the poset structure.
    MatrixInverse,
}

impl MobiusStrategy {
    pub const ALL: [MobiusStrategy; 3] = [
        MobiusStrategy::Explicit,
        MobiusStrategy::Recurrence,
        MobiusStrategy::MatrixInverse,
    ];
}

impl fmt::Display for MobiusStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MobiusStrategy::Explicit => "explicit",
            MobiusStrategy::Recurrence => "recurrence",
            MobiusStrategy::MatrixInverse => "matrix_inverse",
        })
    }
}

impl FromStr for MobiusStrategy {
    type Err = CobwebError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "explicit" => Ok(MobiusStrategy::Explicit),
            "recurrence" => Ok(MobiusStrategy::Recurrence),
            "matrix_inverse" => Ok(MobiusStrategy::MatrixInverse),
            other => Err(CobwebError::UnknownStrategy(other.to_owned())),
        }
    }
}

/// Full Möbius matrix over the truncation.
pub fn mobius_matrix(poset: &TruncatedPoset, strategy: MobiusStrategy) -> IncidenceFunction {
    mobius_matrix_counted(poset, strategy).0
}

/// As [`mobius_matrix`], also reporting the number of scalar multiplications
/// the strategy performed (each accumulated product term counts one).
pub fn mobius_matrix_counted(
    poset: &TruncatedPoset,
    strategy: MobiusStrategy,
) -> (IncidenceFunction, u64) {
    match strategy {
        MobiusStrategy::Explicit => explicit_matrix(poset),
        MobiusStrategy::Recurrence => recurrence_matrix(poset),
        MobiusStrategy::MatrixInverse => dense_inverse_matrix(poset),
    }
}

fn explicit_matrix(poset: &TruncatedPoset) -> (IncidenceFunction, u64) {
    let mut count = 0u64;
    let matrix = IncidenceFunction::from_fn(poset, |x, y| {
        let (t, v) = (x.level(), y.level());
        if t == v {
            return if x == y { Scalar::one() } else { Scalar::zero() };
        }
        if v == t + 1 {
            return Scalar::from(-1i64);
        }
        // Re-derive the product for every entry; the row coordinates never
        // enter, which is exactly what makes this route cheap.
        let mut product = BigInt::one();
        for l in (t + 1)..v {
            product *= BigInt::from(poset.level_size(l).unwrap()) - 1;
            count += 1;
        }
        if (v - t) % 2 == 1 {
            product = -product;
        }
        Scalar::from(product)
    });
    (matrix, count)
}

fn recurrence_matrix(poset: &TruncatedPoset) -> (IncidenceFunction, u64) {
    let mut count = 0u64;
    let mut out = crate::incidence::delta(poset);
    for t in 1..=poset.max_level() {
        for a in poset.level_label_range(t) {
            // One memo per row: mu(x, z) keyed by the label of z.
            let mut memo: BTreeMap<Label, (u32, BigInt)> = BTreeMap::new();
            memo.insert(a, (t, BigInt::one()));
            for v in (t + 1)..=poset.max_level() {
                for b in poset.level_label_range(v) {
                    let mut sum = BigInt::ZERO;
                    for (level, value) in memo.values() {
                        if *level < v {
                            sum += value;
                            count += 1;
                        }
                    }
                    let mu = -sum;
                    if mu != BigInt::ZERO {
                        out.set_label(a, b, Scalar::from(mu.clone()));
                    }
                    memo.insert(b, (v, mu));
                }
            }
        }
    }
    (out, count)
}

#[allow(clippy::needless_range_loop)] // triangular index loops read better here
fn dense_inverse_matrix(poset: &TruncatedPoset) -> (IncidenceFunction, u64) {
    let m = poset.last_label() as usize;
    let indicator = crate::incidence::order_indicator(poset);
    let mut zeta: Vec<Vec<BigInt>> = vec![vec![BigInt::ZERO; m]; m];
    for (a, b, v) in indicator.entries() {
        zeta[(a - 1) as usize][(b - 1) as usize] =
            v.as_integer().expect("indicator is integral").clone();
    }
    // Generic unitriangular back-substitution: every index between the
    // endpoints contributes a multiplication, comparable or not.
    let mut count = 0u64;
    let mut inv: Vec<Vec<BigInt>> = vec![vec![BigInt::ZERO; m]; m];
    for i in 0..m {
        inv[i][i] = BigInt::one();
        for j in (i + 1)..m {
            let mut sum = BigInt::ZERO;
            for k in i..j {
                sum += &inv[i][k] * &zeta[k][j];
                count += 1;
            }
            inv[i][j] = -sum;
        }
    }
    let mut out = crate::incidence::delta(poset);
    for i in 0..m {
        for j in (i + 1)..m {
            if inv[i][j] != BigInt::ZERO {
                let a = (i + 1) as Label;
                let b = (j + 1) as Label;
                let x = poset.vertex_of_label(a).unwrap();
                let y = poset.vertex_of_label(b).unwrap();
                assert!(le(&x, &y), "dense inverse nonzero off the order relation");
                out.set_label(a, b, Scalar::from(inv[i][j].clone()));
            }
        }
    }
    (out, count)
}

/// One benchmark row; `wall_ms` is the best of the requested repetitions,
/// the multiplication count and checksum are rep-independent.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub strategy: String,
    #[serde(rename = "N")]
    pub max_level: u32,
    pub wall_ms: f64,
    pub multiplications: u64,
    pub checksum: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(transparent)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

/// Times all three strategies on the full matrix. Every strategy runs
/// `repetitions` times; the rows are only returned after all checksums are
/// verified identical.
pub fn bench_strategies(
    poset: &TruncatedPoset,
    repetitions: u32,
) -> Result<BenchReport, CobwebError> {
    if repetitions == 0 {
        return Err(CobwebError::ZeroRepetitions);
    }
    let mut rows = Vec::with_capacity(MobiusStrategy::ALL.len());
    for strategy in MobiusStrategy::ALL {
        let mut best_ms = f64::INFINITY;
        let mut multiplications = 0u64;
        let mut checksum = String::new();
        for _ in 0..repetitions {
            let start = Instant::now();
            let (matrix, count) = mobius_matrix_counted(poset, strategy);
            best_ms = best_ms.min(start.elapsed().as_secs_f64() * 1e3);
            multiplications = count;
            checksum = matrix.checksum();
        }
        rows.push(BenchRow {
            strategy: strategy.to_string(),
            max_level: poset.max_level(),
            wall_ms: best_ms,
            multiplications,
            checksum,
        });
    }
    for row in &rows[1..] {
        if row.checksum != rows[0].checksum {
            return Err(CobwebError::StrategyMismatch {
                left: rows[0].strategy.clone(),
                right: row.strategy.clone(),
            });
        }
    }
    Ok(BenchReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{convolve, delta, invert, zeta_coord};

    fn v(row: u64, level: u32) -> Vertex {
        Vertex::new(row, level).unwrap()
    }

    fn poset(n: u32) -> TruncatedPoset {
        TruncatedPoset::new(n).unwrap()
    }

    #[test]
    fn recurrence_examples() {
        let p = poset(6);
        let one = BigInt::one();
        assert_eq!(mobius_recurrence(&p, &v(2, 4), &v(2, 4)).unwrap(), one);
        assert_eq!(
            mobius_recurrence(&p, &v(1, 3), &v(1, 4)).unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            mobius_recurrence(&p, &v(1, 3), &v(1, 5)).unwrap(),
            BigInt::from(2)
        );
        assert_eq!(
            mobius_recurrence(&p, &v(1, 3), &v(2, 3)).unwrap(),
            BigInt::ZERO
        );
        assert!(mobius_recurrence(&p, &v(1, 1), &v(1, 7)).is_err());
    }

    #[test]
    fn level_formula_examples() {
        assert_eq!(mobius_levels(3, 4).unwrap(), BigInt::ZERO);
        assert_eq!(mobius_levels(3, 5).unwrap(), BigInt::from(-1));
        assert_eq!(mobius_levels(1, 6).unwrap(), BigInt::ZERO);
        assert_eq!(mobius_levels(5, 5).unwrap(), BigInt::one());
        assert_eq!(mobius_levels(9, 2).unwrap(), BigInt::ZERO);
        assert!(matches!(mobius_levels(0, 3), Err(CobwebError::ZeroLabel)));
    }

    #[test]
    fn coordinate_formula_examples() {
        assert_eq!(mobius_coords(&v(2, 3), &v(2, 3)), BigInt::one());
        assert_eq!(mobius_coords(&v(1, 3), &v(3, 4)), BigInt::from(-1));
        assert_eq!(mobius_coords(&v(1, 4), &v(1, 7)), BigInt::from(-28));
        assert_eq!(mobius_coords(&v(2, 5), &v(1, 2)), BigInt::ZERO);
    }

    #[test]
    fn rows_never_matter_off_the_diagonal() {
        for t in 1..=8u32 {
            for w in 1..=8u32 {
                if t == w {
                    continue;
                }
                let baseline = mobius_coords(&v(1, t), &v(1, w));
                for s in 1..=fib::fib_u64(t.into()).unwrap() {
                    for u in 1..=fib::fib_u64(w.into()).unwrap() {
                        assert_eq!(mobius_coords(&v(s, t), &v(u, w)), baseline);
                    }
                }
            }
        }
    }

    #[test]
    fn three_strategies_agree() {
        for n in [1, 3, 5, 6] {
            let p = poset(n);
            let explicit = mobius_matrix(&p, MobiusStrategy::Explicit);
            assert_eq!(explicit, mobius_matrix(&p, MobiusStrategy::Recurrence));
            assert_eq!(explicit, mobius_matrix(&p, MobiusStrategy::MatrixInverse));
        }
    }

    #[test]
    fn matrix_examples() {
        let p = poset(3);
        let m = mobius_matrix(&p, MobiusStrategy::Recurrence);
        for a in 1..=4 {
            assert_eq!(m.value(a, a), Scalar::one());
        }
        let p5 = poset(5);
        let m5 = mobius_matrix(&p5, MobiusStrategy::Explicit);
        assert_eq!(m5.value(3, 8), Scalar::from(2i64));
    }

    #[test]
    fn matrix_matches_zeta_inverse() {
        let p = poset(8);
        let mu = mobius_matrix(&p, MobiusStrategy::Explicit);
        let zeta = zeta_coord(&p);
        assert_eq!(invert(&zeta).unwrap(), mu);
        let d = delta(&p);
        assert_eq!(convolve(&zeta, &mu).unwrap(), d);
        assert_eq!(convolve(&mu, &zeta).unwrap(), d);
    }

    #[test]
    fn explicit_matches_zeta_inverse_through_twelve() {
        for n in 9..=12u32 {
            let p = poset(n);
            assert_eq!(
                invert(&zeta_coord(&p)).unwrap(),
                mobius_matrix(&p, MobiusStrategy::Explicit),
                "invert(zeta) vs explicit at N={n}"
            );
        }
    }

    #[test]
    fn strategy_names_parse() {
        for s in MobiusStrategy::ALL {
            assert_eq!(s.to_string().parse::<MobiusStrategy>().unwrap(), s);
        }
        assert!(matches!(
            "gaussian".parse::<MobiusStrategy>(),
            Err(CobwebError::UnknownStrategy(_))
        ));
    }

    #[test]
    fn explicit_beats_recurrence_on_multiplications() {
        let p = poset(10);
        let (_, explicit) = mobius_matrix_counted(&p, MobiusStrategy::Explicit);
        let (_, recurrence) = mobius_matrix_counted(&p, MobiusStrategy::Recurrence);
        assert!(
            explicit < recurrence,
            "expected explicit ({explicit}) < recurrence ({recurrence})"
        );
    }

    #[test]
    fn bench_reports_three_verified_rows() {
        let p = poset(5);
        let report = bench_strategies(&p, 3).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.rows.iter().all(|r| r.checksum == report.rows[0].checksum));
        assert!(report.rows.iter().all(|r| r.max_level == 5));
        assert!(matches!(
            bench_strategies(&p, 0),
            Err(CobwebError::ZeroRepetitions)
        ));
    }

    #[test]
    fn vanishing_and_sign_laws() {
        let p = poset(8);
        for x in p.vertices() {
            for y in p.vertices() {
                let (t, w) = (x.level(), y.level());
                if w < t + 2 {
                    continue;
                }
                let mu = mobius_coords(&x, &y);
                let gap_hits_tiny_level = t < 2;
                if gap_hits_tiny_level {
                    assert_eq!(mu, BigInt::ZERO, "open gap through a singleton level");
                } else {
                    let expected_sign = if (w - t) % 2 == 0 { 1 } else { -1 };
                    assert_eq!(num::Signed::signum(&mu), BigInt::from(expected_sign));
                }
            }
        }
    }
}
