//! Fibonacci numbers and the label/coordinate bijection.
//!
//! Levels are sized by the Fibonacci sequence with `F(1) = F(2) = 1`. The
//! extension `F(0) = 0` is adopted so that delta sums indexed from level 0
//! evaluate to empty sums instead of being undefined.
//!
//! Vertices carry two equivalent addresses: a grid coordinate `(row, level)`
//! and a natural label. Level `k` owns the contiguous label range
//! `F(k+1) ..= F(k+2) - 1`, which holds exactly `F(k)` labels; labels
//! therefore enumerate vertices level by level, left to right.

use std::sync::RwLock;

use num::bigint::BigUint;
use num::{One, Zero};

use crate::error::CobwebError;
use crate::poset::Vertex;

/// Natural label of a vertex; labels start at 1.
pub type Label = u64;

static TABLE: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

fn ensure_table(min_len: usize) {
    {
        let table = TABLE.read().unwrap();
        if table.len() >= min_len {
            return;
        }
    }
    let mut table = TABLE.write().unwrap();
    if table.is_empty() {
        table.push(BigUint::zero());
        table.push(BigUint::one());
    }
    while table.len() < min_len {
        let next = &table[table.len() - 1] + &table[table.len() - 2];
        table.push(next);
    }
}

/// `F(n)` with `F(0) = 0`, `F(1) = F(2) = 1`; exact at any index.
pub fn fib(n: u64) -> BigUint {
    let n = usize::try_from(n).expect("fibonacci index exceeds the address space");
    ensure_table(n + 1);
    TABLE.read().unwrap()[n].clone()
}

/// `F(n)` as a machine word, when it fits.
pub fn fib_u64(n: u64) -> Option<u64> {
    u64::try_from(&fib(n)).ok()
}

/// The unique level `k` with `F(k+1) <= x <= F(k+2) - 1`.
///
/// Binary search over the memoized table; `O(log)` per query.
pub fn level_of(x: Label) -> Result<u32, CobwebError> {
    if x == 0 {
        return Err(CobwebError::ZeroLabel);
    }
    let x = BigUint::from(x);
    {
        // Grow until the last entry exceeds x so the search range is closed.
        let mut len = TABLE.read().unwrap().len();
        loop {
            ensure_table(len.max(4));
            let table = TABLE.read().unwrap();
            if *table.last().unwrap() > x {
                break;
            }
            len = table.len() + 8;
        }
    }
    let table = TABLE.read().unwrap();
    // Strictly increasing from index 2 on; find the largest m with F(m) <= x.
    let m = 1 + table[2..].partition_point(|f| *f <= x);
    Ok(u32::try_from(m - 1).expect("level exceeds u32"))
}

/// Grid coordinates of the vertex labeled `x`.
pub fn coords_of(x: Label) -> Result<Vertex, CobwebError> {
    let level = level_of(x)?;
    let first = fib_u64(u64::from(level) + 1).expect("label fits u64, so does its level start");
    Vertex::new(x - first + 1, level)
}

/// Natural label of a vertex: `F(level + 1) + row - 1`.
///
/// Panics if the label overflows `u64`; that needs levels far beyond any
/// truncation the element limit admits.
pub fn label_of(v: &Vertex) -> Label {
    let first = fib_u64(u64::from(v.level()) + 1).expect("label overflows u64");
    first
        .checked_add(v.row() - 1)
        .expect("label overflows u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fib_convention() {
        assert_eq!(fib(0), BigUint::zero());
        assert_eq!(fib(1), BigUint::one());
        assert_eq!(fib(2), BigUint::one());
        assert_eq!(fib(5), BigUint::from(5u32));
        assert_eq!(fib(10), BigUint::from(55u32));
    }

    #[test]
    fn fib_exact_beyond_machine_words() {
        // F(200) does not fit in u64; check it against the recurrence.
        let f = fib(200);
        assert_eq!(f, fib(199) + fib(198));
        assert!(fib_u64(200).is_none());
        assert_eq!(
            f.to_string(),
            "280571172992510140037611932413038677189525"
        );
    }

    #[test]
    fn level_of_examples() {
        assert_eq!(level_of(1).unwrap(), 1);
        assert_eq!(level_of(6).unwrap(), 4);
        assert_eq!(level_of(13).unwrap(), 6);
        assert!(matches!(level_of(0), Err(CobwebError::ZeroLabel)));
    }

    #[test]
    fn coords_examples() {
        assert_eq!(coords_of(1).unwrap(), Vertex::new(1, 1).unwrap());
        assert_eq!(coords_of(6).unwrap(), Vertex::new(2, 4).unwrap());
        assert_eq!(coords_of(12).unwrap(), Vertex::new(5, 5).unwrap());
    }

    #[test]
    fn label_examples() {
        assert_eq!(label_of(&Vertex::new(1, 1).unwrap()), 1);
        assert_eq!(label_of(&Vertex::new(2, 4).unwrap()), 6);
        assert_eq!(label_of(&Vertex::new(1, 5).unwrap()), 8);
    }

    #[test]
    fn label_coordinate_roundtrip() {
        for x in 1..=10_000u64 {
            assert_eq!(label_of(&coords_of(x).unwrap()), x);
        }
    }

    #[test]
    fn level_ranges_tile_the_labels() {
        // Ranges [F(k+1), F(k+2)-1] for k = 1..=N cover 1..=F(N+2)-1 with no
        // gaps or overlaps, and the range of level k holds exactly F(k) labels.
        let n = 20u64;
        let mut next = 1u64;
        for k in 1..=n {
            let first = fib_u64(k + 1).unwrap();
            let last = fib_u64(k + 2).unwrap() - 1;
            assert_eq!(first, next, "gap or overlap at level {k}");
            assert_eq!(last - first + 1, fib_u64(k).unwrap());
            next = last + 1;
        }
        assert_eq!(next, fib_u64(n + 2).unwrap());
    }

    #[test]
    fn concurrent_reads_grow_safely() {
        let handles: Vec<_> = (0..8)
            .map(|i| std::thread::spawn(move || fib(500 + i * 37)))
            .collect();
        for h in handles {
            h.join().unwrap();
        }
        assert_eq!(fib(500), fib(499) + fib(498));
    }
}
