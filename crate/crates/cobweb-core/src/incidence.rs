//! The incidence algebra over a truncated poset: delta, both zeta forms,
//! convolution, inversion and chain counting.
//!
//! An [`IncidenceFunction`] assigns an exact rational to every comparable
//! pair of vertices and is zero elsewhere; viewed as a matrix in
//! linear-extension order it is upper triangular. Values are immutable after
//! construction.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::bigint::BigInt;
use num::One;
use sha2::{Digest, Sha256};

use crate::error::CobwebError;
use crate::fib::Label;
use crate::poset::{le, TruncatedPoset, Vertex};
use crate::scalar::Scalar;

/// Packed dense upper triangle up to this many elements, coordinate-sparse
/// beyond. Tuning knob only; no observable behavior depends on it.
const DENSE_ELEMENT_LIMIT: u64 = 376;

#[derive(Clone, Debug)]
enum Storage {
    Dense { n: usize, cells: Vec<Scalar> },
    Sparse(BTreeMap<(Label, Label), Scalar>),
}

impl Storage {
    fn triangle_index(n: usize, a: Label, b: Label) -> usize {
        let i = (a - 1) as usize;
        let j = (b - 1) as usize;
        debug_assert!(i <= j && j < n);
        // Row i starts after i full rows of shrinking width: i*(2n - i + 1)/2.
        i * (2 * n - i + 1) / 2 + (j - i)
    }
}

/// An exact-rational-valued function on the comparable pairs of a
/// [`TruncatedPoset`].
#[derive(Clone, Debug)]
pub struct IncidenceFunction {
    poset: TruncatedPoset,
    storage: Storage,
}

impl IncidenceFunction {
    fn zero(poset: &TruncatedPoset) -> Self {
        let n = poset.element_count();
        let storage = if n <= DENSE_ELEMENT_LIMIT {
            let n = n as usize;
            Storage::Dense {
                n,
                cells: vec![Scalar::zero(); n * (n + 1) / 2],
            }
        } else {
            Storage::Sparse(BTreeMap::new())
        };
        IncidenceFunction {
            poset: poset.clone(),
            storage,
        }
    }

    pub fn poset(&self) -> &TruncatedPoset {
        &self.poset
    }

    /// Stores a value; callers must pass a comparable pair `a <= b`.
    pub(crate) fn set_label(&mut self, a: Label, b: Label, value: Scalar) {
        debug_assert!(self.comparable(a, b), "set off the order relation");
        match &mut self.storage {
            Storage::Dense { n, cells } => {
                cells[Storage::triangle_index(*n, a, b)] = value;
            }
            Storage::Sparse(map) => {
                if value.is_zero() {
                    map.remove(&(a, b));
                } else {
                    map.insert((a, b), value);
                }
            }
        }
    }

    /// `None` means zero. Callers must pass `a <= b`.
    fn get_ref(&self, a: Label, b: Label) -> Option<&Scalar> {
        match &self.storage {
            Storage::Dense { n, cells } => {
                let v = &cells[Storage::triangle_index(*n, a, b)];
                (!v.is_zero()).then_some(v)
            }
            Storage::Sparse(map) => map.get(&(a, b)),
        }
    }

    fn comparable(&self, a: Label, b: Label) -> bool {
        a == b
            || (a < b
                && self.poset.level_of_label(a).unwrap() < self.poset.level_of_label(b).unwrap())
    }

    /// Value at a pair of labels; zero off the order relation.
    ///
    /// Panics if a label is outside `1..=element_count`.
    pub fn value(&self, a: Label, b: Label) -> Scalar {
        let last = self.poset.last_label();
        assert!(
            a >= 1 && a <= last && b >= 1 && b <= last,
            "label pair ({a},{b}) outside 1..={last}"
        );
        if !self.comparable(a, b) {
            return Scalar::zero();
        }
        self.get_ref(a, b).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Value at a pair of vertices; rejects vertices outside the truncation.
    pub fn value_at(&self, x: &Vertex, y: &Vertex) -> Result<Scalar, CobwebError> {
        let a = self.poset.label_of_vertex(x)?;
        let b = self.poset.label_of_vertex(y)?;
        Ok(self.value(a, b))
    }

    /// Nonzero entries as `(lower label, upper label, value)`, in
    /// lexicographic label order.
    pub fn entries(&self) -> Vec<(Label, Label, Scalar)> {
        let mut out = Vec::new();
        match &self.storage {
            Storage::Dense { n, cells } => {
                for a in 1..=(*n as Label) {
                    for b in a..=(*n as Label) {
                        let v = &cells[Storage::triangle_index(*n, a, b)];
                        if !v.is_zero() {
                            out.push((a, b, v.clone()));
                        }
                    }
                }
            }
            Storage::Sparse(map) => {
                out.extend(map.iter().map(|(&(a, b), v)| (a, b, v.clone())));
            }
        }
        out
    }

    /// Builds a function by evaluating `f` on every comparable pair, in
    /// linear-extension order.
    pub fn from_fn<F>(poset: &TruncatedPoset, mut f: F) -> Self
    where
        F: FnMut(&Vertex, &Vertex) -> Scalar,
    {
        let mut out = Self::zero(poset);
        for x in poset.vertices() {
            let a = poset.label_of_vertex(&x).unwrap();
            out.set_label(a, a, f(&x, &x));
            for level in (x.level() + 1)..=poset.max_level() {
                for b in poset.level_label_range(level) {
                    let y = poset.vertex_of_label(b).unwrap();
                    out.set_label(a, b, f(&x, &y));
                }
            }
        }
        out
    }

    /// Pointwise product with a scalar.
    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.poset);
        for (a, b, v) in self.entries() {
            out.set_label(a, b, &v * c);
        }
        out
    }

    /// Pointwise difference; operands must live on the same truncation.
    pub fn sub(&self, rhs: &Self) -> Result<Self, CobwebError> {
        check_same_poset(self, rhs)?;
        let mut out = self.clone();
        for (a, b, v) in rhs.entries() {
            let cur = out.get_ref(a, b).cloned().unwrap_or_else(Scalar::zero);
            out.set_label(a, b, &cur - &v);
        }
        Ok(out)
    }

    /// SHA-256 over the canonical entry listing; stable across runs and
    /// storage layouts.
    pub fn checksum(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("n={}\n", self.poset.element_count()));
        for (a, b, v) in self.entries() {
            hasher.update(format!("{a},{b},{v}\n"));
        }
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            write!(hex, "{byte:02x}").unwrap();
        }
        hex
    }

    /// CSV rendering: a header row of labels, then one row per label in
    /// linear-extension order, entries as `p` or `p/q`.
    pub fn to_csv(&self) -> String {
        let last = self.poset.last_label();
        let mut out = String::from("label");
        for b in 1..=last {
            write!(out, ",{b}").unwrap();
        }
        out.push('\n');
        for a in 1..=last {
            write!(out, "{a}").unwrap();
            for b in 1..=last {
                write!(out, ",{}", self.value(a, b)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Per-level view `(t, v) -> value`, defined when the function takes a
    /// single value on every pair of levels (diagonal included). All of
    /// delta, zeta, Möbius and the eta powers are of this shape.
    fn level_table(&self) -> Option<Vec<Vec<Scalar>>> {
        let n = self.poset.max_level();
        let mut table: Vec<Vec<Scalar>> = Vec::with_capacity(n as usize);
        for t in 1..=n {
            let mut row = Vec::with_capacity((n - t + 1) as usize);
            for v in t..=n {
                let mut common: Option<Scalar> = None;
                for a in self.poset.level_label_range(t) {
                    let bs = if t == v {
                        a..=a
                    } else {
                        self.poset.level_label_range(v)
                    };
                    for b in bs {
                        let val = self.get_ref(a, b).cloned().unwrap_or_else(Scalar::zero);
                        match &common {
                            None => common = Some(val),
                            Some(c) if *c == val => {}
                            Some(_) => return None,
                        }
                    }
                }
                row.push(common.expect("levels are nonempty"));
            }
            table.push(row);
        }
        Some(table)
    }

    fn from_level_table(poset: &TruncatedPoset, table: &[Vec<Scalar>]) -> Self {
        let mut out = Self::zero(poset);
        for t in 1..=poset.max_level() {
            for v in t..=poset.max_level() {
                let val = &table[(t - 1) as usize][(v - t) as usize];
                if val.is_zero() {
                    continue;
                }
                for a in poset.level_label_range(t) {
                    let bs = if t == v {
                        a..=a
                    } else {
                        poset.level_label_range(v)
                    };
                    for b in bs {
                        out.set_label(a, b, val.clone());
                    }
                }
            }
        }
        out
    }
}

impl PartialEq for IncidenceFunction {
    fn eq(&self, other: &Self) -> bool {
        self.poset == other.poset && self.entries() == other.entries()
    }
}

impl Eq for IncidenceFunction {}

fn check_same_poset(f: &IncidenceFunction, g: &IncidenceFunction) -> Result<(), CobwebError> {
    if f.poset != g.poset {
        return Err(CobwebError::PosetMismatch {
            left: f.poset.max_level(),
            right: g.poset.max_level(),
        });
    }
    Ok(())
}

/// The Kronecker delta, identity of the algebra.
pub fn delta(poset: &TruncatedPoset) -> IncidenceFunction {
    let mut out = IncidenceFunction::zero(poset);
    for a in poset.labels() {
        out.set_label(a, a, Scalar::one());
    }
    out
}

/// The indicator of the order relation, built directly from the level
/// comparison.
pub fn order_indicator(poset: &TruncatedPoset) -> IncidenceFunction {
    IncidenceFunction::from_fn(poset, |x, y| {
        if le(x, y) {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

/// Zeta via the coordinate delta form: a diagonal term plus a sum of level
/// shifts, evaluated literally on every ordered pair with the shift sum
/// truncated where all later terms vanish.
pub fn zeta_coord(poset: &TruncatedPoset) -> IncidenceFunction {
    let n = poset.max_level();
    let mut out = IncidenceFunction::zero(poset);
    for x in poset.vertices() {
        let a = poset.label_of_vertex(&x).unwrap();
        for y in poset.vertices() {
            let (s, t) = (x.row(), x.level());
            let (u, v) = (y.row(), y.level());
            let mut val = 0i64;
            if s == u && t == v {
                val += 1;
            }
            for k in 1..=n.saturating_sub(t) {
                if t + k == v {
                    val += 1;
                }
            }
            if val == 0 {
                continue;
            }
            let b = poset.label_of_vertex(&y).unwrap();
            assert!(
                out.comparable(a, b),
                "delta form produced a nonzero value off the order relation at ({a},{b})"
            );
            out.set_label(a, b, Scalar::from(val));
        }
    }
    out
}

fn zeta_one_literal(poset: &TruncatedPoset, x: Label, y: Label) -> i64 {
    let last = poset.last_label();
    let mut sum = 0;
    for k in 0..=(last - x) {
        if x + k == y {
            sum += 1;
        }
    }
    sum
}

fn zeta_zero_literal(poset: &TruncatedPoset, x: Label, y: Label) -> i64 {
    let last = poset.last_label();
    let mut sum = 0;
    // s indexes levels; s = 0 contributes an empty inner sum since F(0) = 0.
    for s in 0..=poset.max_level() {
        let level_start = if s == 0 { 1 } else { poset.first_label(s).unwrap() };
        let level_size = if s == 0 { 0 } else { poset.level_size(s).unwrap() };
        for k in 0..=(last - level_start) {
            if x != level_start + k {
                continue;
            }
            if level_size < k + 2 {
                continue; // empty range 1..=F(s)-k-1
            }
            for r in 1..=(level_size - k - 1) {
                if level_start + k + r == y {
                    sum += 1;
                }
            }
        }
    }
    sum
}

/// Zeta as the difference of two delta sums over natural labels: an
/// ascending-label indicator minus a same-level strict-right indicator, both
/// evaluated literally with their unbounded sums truncated at the last label
/// of the truncation (every later term is identically zero there).
pub fn zeta_natural(poset: &TruncatedPoset) -> IncidenceFunction {
    let mut out = IncidenceFunction::zero(poset);
    let last = poset.last_label();
    for a in 1..=last {
        for b in a..=last {
            let val = zeta_one_literal(poset, a, b) - zeta_zero_literal(poset, a, b);
            if val == 0 {
                continue;
            }
            assert!(
                out.comparable(a, b),
                "delta sums produced a nonzero value off the order relation at ({a},{b})"
            );
            out.set_label(a, b, Scalar::from(val));
        }
    }
    out
}

/// Convolution product: `h(x,y)` sums `f(x,z) * g(z,y)` over the interval
/// `x <= z <= y`.
///
/// When both operands take a single value per pair of levels, the inner sum
/// collapses to one term per intermediate level; the generic interval loop
/// handles everything else.
pub fn convolve(
    f: &IncidenceFunction,
    g: &IncidenceFunction,
) -> Result<IncidenceFunction, CobwebError> {
    check_same_poset(f, g)?;
    if let (Some(tf), Some(tg)) = (f.level_table(), g.level_table()) {
        return Ok(convolve_level_tables(f.poset(), &tf, &tg));
    }
    convolve_generic(f, g)
}

fn convolve_level_tables(
    poset: &TruncatedPoset,
    tf: &[Vec<Scalar>],
    tg: &[Vec<Scalar>],
) -> IncidenceFunction {
    let n = poset.max_level();
    fn at(t: &[Vec<Scalar>], a: u32, b: u32) -> &Scalar {
        &t[(a - 1) as usize][(b - a) as usize]
    }
    let mut th: Vec<Vec<Scalar>> = Vec::with_capacity(n as usize);
    for t in 1..=n {
        let mut row = Vec::with_capacity((n - t + 1) as usize);
        for v in t..=n {
            if t == v {
                row.push(at(tf, t, t) * at(tg, t, t));
                continue;
            }
            let mut sum = at(tf, t, t) * at(tg, t, v);
            sum += &(at(tf, t, v) * at(tg, v, v));
            for l in (t + 1)..v {
                let width = Scalar::from(poset.level_size(l).unwrap());
                sum += &(&(at(tf, t, l) * at(tg, l, v)) * &width);
            }
            row.push(sum);
        }
        th.push(row);
    }
    IncidenceFunction::from_level_table(poset, &th)
}

fn convolve_generic(
    f: &IncidenceFunction,
    g: &IncidenceFunction,
) -> Result<IncidenceFunction, CobwebError> {
    let poset = f.poset();
    let mut out = IncidenceFunction::zero(poset);
    for t in 1..=poset.max_level() {
        for a in poset.level_label_range(t) {
            // z = a = b
            if let (Some(fa), Some(gb)) = (f.get_ref(a, a), g.get_ref(a, a)) {
                out.set_label(a, a, fa * gb);
            }
            for v in (t + 1)..=poset.max_level() {
                for b in poset.level_label_range(v) {
                    let mut sum = Scalar::zero();
                    if let (Some(fa), Some(gb)) = (f.get_ref(a, a), g.get_ref(a, b)) {
                        sum += &(fa * gb);
                    }
                    for l in (t + 1)..v {
                        for z in poset.level_label_range(l) {
                            if let (Some(fz), Some(gz)) = (f.get_ref(a, z), g.get_ref(z, b)) {
                                sum += &(fz * gz);
                            }
                        }
                    }
                    if let (Some(fb), Some(gb)) = (f.get_ref(a, b), g.get_ref(b, b)) {
                        sum += &(fb * gb);
                    }
                    if !sum.is_zero() {
                        out.set_label(a, b, sum);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Convolution inverse by back-substitution over each interval:
/// `inv(x,x) = 1/f(x,x)` and
/// `inv(x,y) = -(1/f(y,y)) * sum of inv(x,z) f(z,y) over x <= z < y`.
///
/// The result is exact, rational in general and integer whenever `f` is
/// unitriangular. Fails on a zero diagonal entry, naming the vertex.
pub fn invert(f: &IncidenceFunction) -> Result<IncidenceFunction, CobwebError> {
    let poset = f.poset();
    let mut diag_inv: Vec<Scalar> = Vec::with_capacity(poset.last_label() as usize);
    for a in poset.labels() {
        match f.get_ref(a, a).and_then(|d| d.recip()) {
            Some(inv) => diag_inv.push(inv),
            None => {
                return Err(CobwebError::SingularDiagonal {
                    vertex: poset.vertex_of_label(a)?,
                })
            }
        }
    }
    let mut out = IncidenceFunction::zero(poset);
    for t in 1..=poset.max_level() {
        for a in poset.level_label_range(t) {
            out.set_label(a, a, diag_inv[(a - 1) as usize].clone());
            for v in (t + 1)..=poset.max_level() {
                for b in poset.level_label_range(v) {
                    let mut sum = Scalar::zero();
                    if let (Some(ra), Some(fb)) = (out.get_ref(a, a), f.get_ref(a, b)) {
                        sum = ra * fb;
                    }
                    for l in (t + 1)..v {
                        for z in poset.level_label_range(l) {
                            if let (Some(rz), Some(fz)) = (out.get_ref(a, z), f.get_ref(z, b)) {
                                sum += &(rz * fz);
                            }
                        }
                    }
                    if !sum.is_zero() {
                        let val = &(-&sum) * &diag_inv[(b - 1) as usize];
                        out.set_label(a, b, val);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `(zeta - delta)^k`; entry `(x,y)` counts the strict chains
/// `x = z0 < z1 < ... < zk = y`.
pub fn eta_power(poset: &TruncatedPoset, k: u32) -> IncidenceFunction {
    if k == 0 {
        return delta(poset);
    }
    let eta = IncidenceFunction::from_fn(poset, |x, y| {
        if x != y && le(x, y) {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let mut acc = eta.clone();
    for _ in 1..k {
        acc = convolve(&acc, &eta).expect("same poset by construction");
    }
    acc
}

/// Number of saturated chains from `x` to `y`: the product of the level
/// sizes strictly between them, cross-checked against a step-by-step walk
/// that counts strict chains of length `level(y) - level(x)`.
///
/// Incomparable pairs count zero; `x = y` counts one.
pub fn count_maximal_chains(
    poset: &TruncatedPoset,
    x: &Vertex,
    y: &Vertex,
) -> Result<BigInt, CobwebError> {
    for v in [x, y] {
        if !poset.contains(v) {
            return Err(CobwebError::VertexOutsideTruncation {
                vertex: *v,
                max_level: poset.max_level(),
            });
        }
    }
    if !le(x, y) {
        return Ok(BigInt::ZERO);
    }
    if x == y {
        return Ok(BigInt::one());
    }
    let (t, v) = (x.level(), y.level());
    let mut product = BigInt::one();
    for l in (t + 1)..v {
        product *= BigInt::from(poset.level_size(l).unwrap());
    }

    // Walk route: count strict chains of length v - t through the interval.
    // Each pass assigns every vertex the sum over all strictly lower interval
    // vertices; the interval's level-major order lets a running prefix do
    // that in one sweep.
    let interval = poset.interval(x, y)?;
    let levels: Vec<u32> = interval.iter().map(|z| z.level()).collect();
    let mut counts = vec![BigInt::ZERO; interval.len()];
    counts[0] = BigInt::one();
    for _ in 0..(v - t) {
        let mut next = vec![BigInt::ZERO; interval.len()];
        let mut below = BigInt::ZERO;
        let mut current_level_sum = BigInt::ZERO;
        let mut current_level = levels[0];
        for i in 0..interval.len() {
            if levels[i] != current_level {
                below += &current_level_sum;
                current_level_sum = BigInt::ZERO;
                current_level = levels[i];
            }
            next[i] = below.clone();
            current_level_sum += &counts[i];
        }
        counts = next;
    }
    let walked = counts.pop().expect("interval holds y");
    assert_eq!(
        walked, product,
        "chain-count routes disagree for {x} -> {y}"
    );
    Ok(product)
}
