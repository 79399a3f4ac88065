//! Brute-force reference implementations used by the test suites of the
//! cobweb crates.
//!
//! Everything here is written from the raw definitions and shares no code
//! with the production crates: its own Fibonacci sequence, its own vertex
//! enumeration, the order relation spelled out directly on coordinates,
//! Möbius values obtained by inverting the 0/1 order matrix with exact
//! back-substitution, and chain counts obtained by exhaustive DFS. Nothing
//! is memoized or restructured for speed; keep inputs small.

use num::bigint::BigInt;
use num::One;

/// `(row, level)` pairs, both starting at 1.
pub type Vertex = (u64, u32);

/// Fibonacci with `F(1) = F(2) = 1`, recomputed iteratively on every call.
pub fn fib(n: u32) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

/// All vertices of levels `1..=max_level`, level by level, left to right.
pub fn vertices(max_level: u32) -> Vec<Vertex> {
    let mut out = Vec::new();
    for level in 1..=max_level {
        for row in 1..=fib(level) {
            out.push((row, level));
        }
    }
    out
}

/// The order relation on coordinates: lower level, or the same vertex.
pub fn le(a: Vertex, b: Vertex) -> bool {
    a.1 < b.1 || a == b
}

/// The 0/1 matrix of the order relation over `vertices(max_level)`.
pub fn order_matrix(max_level: u32) -> Vec<Vec<BigInt>> {
    let verts = vertices(max_level);
    verts
        .iter()
        .map(|&a| {
            verts
                .iter()
                .map(|&b| if le(a, b) { BigInt::one() } else { BigInt::ZERO })
                .collect()
        })
        .collect()
}

/// Exact inverse of an upper triangular matrix with unit diagonal, by
/// back-substitution. Panics if the input is not unitriangular.
#[allow(clippy::needless_range_loop)]
pub fn invert_unitriangular(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        assert_eq!(row.len(), n, "matrix is not square");
        assert!(row[i].is_one(), "diagonal entry {i} is not 1");
        for j in 0..i {
            assert_eq!(row[j], BigInt::ZERO, "entry below the diagonal at ({i},{j})");
        }
    }
    let mut inv = vec![vec![BigInt::ZERO; n]; n];
    for i in 0..n {
        inv[i][i] = BigInt::one();
        for j in (i + 1)..n {
            let mut sum = BigInt::ZERO;
            for k in i..j {
                sum += &inv[i][k] * &m[k][j];
            }
            inv[i][j] = -sum;
        }
    }
    inv
}

/// Möbius matrix of the truncation: the order matrix inverted exactly.
pub fn mobius_matrix(max_level: u32) -> Vec<Vec<BigInt>> {
    invert_unitriangular(&order_matrix(max_level))
}

/// Number of strict chains `x = z0 < z1 < ... < zk = y`, counted one by one
/// by depth-first enumeration over all vertices of the truncation.
pub fn count_chains(max_level: u32, x: Vertex, y: Vertex, k: u32) -> BigInt {
    fn dfs(verts: &[Vertex], cur: Vertex, y: Vertex, steps_left: u32) -> BigInt {
        if steps_left == 0 {
            return if cur == y { BigInt::one() } else { BigInt::ZERO };
        }
        let mut total = BigInt::ZERO;
        for &w in verts {
            if w != cur && le(cur, w) {
                total += dfs(verts, w, y, steps_left - 1);
            }
        }
        total
    }
    let verts = vertices(max_level);
    dfs(&verts, x, y, k)
}

/// Number of saturated chains from `x` to `y`: depth-first walk over the
/// covering steps (one level up at a time).
pub fn count_saturated_chains(max_level: u32, x: Vertex, y: Vertex) -> BigInt {
    fn dfs(cur: Vertex, y: Vertex) -> BigInt {
        if cur == y {
            return BigInt::one();
        }
        if cur.1 >= y.1 {
            return BigInt::ZERO;
        }
        let mut total = BigInt::ZERO;
        for row in 1..=fib(cur.1 + 1) {
            total += dfs((row, cur.1 + 1), y);
        }
        total
    }
    if !le(x, y) {
        return BigInt::ZERO;
    }
    let _ = max_level; // the walk never leaves the interval
    dfs(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fib_values() {
        assert_eq!(fib(0), 0);
        assert_eq!(fib(1), 1);
        assert_eq!(fib(5), 5);
        assert_eq!(fib(10), 55);
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(vertices(1), vec![(1, 1)]);
        assert_eq!(vertices(5).len(), 12);
        assert_eq!(vertices(12).len(), 376);
    }

    #[test]
    fn single_point_mobius() {
        assert_eq!(mobius_matrix(1), vec![vec![BigInt::one()]]);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn mobius_solves_the_order_matrix() {
        let n = 6;
        let zeta = order_matrix(n);
        let mu = mobius_matrix(n);
        let size = zeta.len();
        for i in 0..size {
            for j in 0..size {
                let mut sum = BigInt::ZERO;
                for k in 0..size {
                    sum += &zeta[i][k] * &mu[k][j];
                }
                let expected = if i == j { BigInt::one() } else { BigInt::ZERO };
                assert_eq!(sum, expected, "zeta * mu at ({i},{j})");
            }
        }
    }

    #[test]
    fn chain_count_examples() {
        assert_eq!(count_chains(4, (1, 1), (1, 3), 1), BigInt::one());
        assert_eq!(count_chains(4, (1, 1), (1, 4), 2), BigInt::from(3));
        assert_eq!(count_chains(4, (1, 1), (1, 4), 3), BigInt::from(2));
        assert_eq!(count_chains(4, (1, 1), (1, 1), 0), BigInt::one());
        assert_eq!(count_chains(4, (1, 3), (2, 3), 1), BigInt::ZERO);
    }

    #[test]
    fn saturated_chain_examples() {
        assert_eq!(count_saturated_chains(4, (1, 1), (1, 4)), BigInt::from(2));
        assert_eq!(count_saturated_chains(6, (1, 3), (1, 6)), BigInt::from(15));
        assert_eq!(count_saturated_chains(4, (2, 3), (2, 3)), BigInt::one());
        assert_eq!(count_saturated_chains(4, (1, 3), (2, 3)), BigInt::ZERO);
    }

    /// The whole point of this crate is independence: it must not pull in
    /// the production implementation, by dependency or by name.
    #[test]
    fn no_production_dependency() {
        let manifest = include_str!("../Cargo.toml");
        let source = include_str!("lib.rs");
        let core_crate = concat!("cobweb-", "core");
        let core_module = concat!("cobweb_", "core");
        assert!(!manifest.contains(core_crate), "manifest links production code");
        assert!(!source.contains(core_module), "source imports production code");
    }
}
