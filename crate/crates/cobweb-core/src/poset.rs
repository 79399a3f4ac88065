//! The cobweb poset: vertices, order relation, levels, covering edges and
//! finite truncations.
//!
//! Level `s` is an antichain of `F(s)` vertices and every vertex of a level
//! lies below every vertex of each higher level, so the whole poset is the
//! ordinal sum of its levels. A [`TruncatedPoset`] is the finite window onto
//! levels `1..=N`, carrying the linear extension by natural label
//! (level-major, then row) that makes every incidence matrix upper
//! triangular.

use std::fmt;
use std::fmt::Write as _;

use crate::error::CobwebError;
use crate::fib::{self, Label};

/// Default cap on the number of elements a truncation may materialize.
///
/// Level 20 alone has 6765 vertices; the cap keeps casual CLI input from
/// requesting matrices that cannot fit in memory.
pub const DEFAULT_MAX_ELEMENTS: u64 = 20_000;

/// A vertex addressed by position within its level (left to right, from 1)
/// and level number.
///
/// The derived `Ord` is the linear extension (level-major, then row), i.e.
/// natural-label order — not the partial order, which [`le`] decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    level: u32,
    row: u64,
}

impl Vertex {
    /// Validates `1 <= row <= F(level)`.
    pub fn new(row: u64, level: u32) -> Result<Self, CobwebError> {
        if level == 0 {
            return Err(CobwebError::ZeroLevel);
        }
        let size = fib::fib_u64(u64::from(level));
        match size {
            Some(size) if row == 0 || row > size => {
                Err(CobwebError::RowOutOfRange { row, level, size })
            }
            None if row == 0 => Err(CobwebError::RowOutOfRange {
                row,
                level,
                size: u64::MAX,
            }),
            _ => Ok(Vertex { level, row }),
        }
    }

    pub(crate) fn from_parts(row: u64, level: u32) -> Self {
        debug_assert!(level >= 1 && row >= 1);
        Vertex { level, row }
    }

    pub fn row(&self) -> u64 {
        self.row
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Natural label of this vertex.
    pub fn label(&self) -> Label {
        fib::label_of(self)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.level)
    }
}

/// The order relation: `x <= y` iff `x` lies on a strictly lower level, or
/// `x = y`. Distinct vertices of one level are incomparable.
pub fn le(x: &Vertex, y: &Vertex) -> bool {
    x.level < y.level || x == y
}

/// The vertices of level `s`, in row order.
pub fn level_set(s: u32) -> Result<Vec<Vertex>, CobwebError> {
    if s == 0 {
        return Err(CobwebError::ZeroLevel);
    }
    let size = fib::fib_u64(u64::from(s)).expect("level size exceeds u64");
    Ok((1..=size).map(|row| Vertex::from_parts(row, s)).collect())
}

/// The finite sub-poset of levels `1..=max_level`.
///
/// Immutable after construction; shareable across threads without
/// synchronization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPoset {
    max_level: u32,
    element_count: u64,
    /// `level_sizes[k-1] = F(k)`.
    level_sizes: Vec<u64>,
    /// `level_starts[k-1] = F(k+1)`, the first label of level `k`.
    level_starts: Vec<u64>,
}

impl TruncatedPoset {
    /// Truncate to levels `1..=max_level` under [`DEFAULT_MAX_ELEMENTS`].
    pub fn new(max_level: u32) -> Result<Self, CobwebError> {
        Self::with_element_limit(max_level, DEFAULT_MAX_ELEMENTS)
    }

    /// Truncate with an explicit element limit.
    pub fn with_element_limit(max_level: u32, limit: u64) -> Result<Self, CobwebError> {
        if max_level == 0 {
            return Err(CobwebError::ZeroLevel);
        }
        let required = fib::fib_u64(u64::from(max_level) + 2)
            .map(|f| f - 1)
            .unwrap_or(u64::MAX);
        if required > limit {
            return Err(CobwebError::ElementLimit { required, limit });
        }
        let level_sizes: Vec<u64> = (1..=u64::from(max_level))
            .map(|k| fib::fib_u64(k).expect("level size bounded by the element limit"))
            .collect();
        let level_starts: Vec<u64> = (1..=u64::from(max_level))
            .map(|k| fib::fib_u64(k + 1).expect("label bounded by the element limit"))
            .collect();
        Ok(TruncatedPoset {
            max_level,
            element_count: required,
            level_sizes,
            level_starts,
        })
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// `F(max_level + 2) - 1`, the number of vertices.
    pub fn element_count(&self) -> u64 {
        self.element_count
    }

    /// Labels run `1..=element_count`.
    pub fn last_label(&self) -> Label {
        self.element_count
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        v.level <= self.max_level
    }

    pub fn level_size(&self, level: u32) -> Option<u64> {
        self.level_sizes.get(level.checked_sub(1)? as usize).copied()
    }

    pub fn first_label(&self, level: u32) -> Option<Label> {
        self.level_starts.get(level.checked_sub(1)? as usize).copied()
    }

    pub fn last_label_of_level(&self, level: u32) -> Option<Label> {
        Some(self.first_label(level)? + self.level_size(level)? - 1)
    }

    /// Level of the vertex labeled `x`; rejects labels outside the
    /// truncation.
    pub fn level_of_label(&self, x: Label) -> Result<u32, CobwebError> {
        if x == 0 || x > self.element_count {
            return Err(CobwebError::LabelOutsideTruncation {
                label: x,
                last: self.element_count,
            });
        }
        let idx = self.level_starts.partition_point(|&s| s <= x);
        Ok(idx as u32)
    }

    pub fn vertex_of_label(&self, x: Label) -> Result<Vertex, CobwebError> {
        let level = self.level_of_label(x)?;
        let row = x - self.level_starts[(level - 1) as usize] + 1;
        Ok(Vertex::from_parts(row, level))
    }

    pub fn label_of_vertex(&self, v: &Vertex) -> Result<Label, CobwebError> {
        if !self.contains(v) {
            return Err(CobwebError::VertexOutsideTruncation {
                vertex: *v,
                max_level: self.max_level,
            });
        }
        Ok(self.level_starts[(v.level - 1) as usize] + v.row - 1)
    }

    /// Label range of one level, as `first..=last`.
    pub(crate) fn level_label_range(&self, level: u32) -> std::ops::RangeInclusive<Label> {
        let first = self.level_starts[(level - 1) as usize];
        first..=(first + self.level_sizes[(level - 1) as usize] - 1)
    }

    /// All vertices in linear-extension order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (1..=self.max_level).flat_map(move |level| {
            (1..=self.level_sizes[(level - 1) as usize])
                .map(move |row| Vertex::from_parts(row, level))
        })
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        1..=self.element_count
    }

    /// All `z` with `x <= z <= y`, in linear-extension order; empty when
    /// `x <= y` fails.
    pub fn interval(&self, x: &Vertex, y: &Vertex) -> Result<Vec<Vertex>, CobwebError> {
        for v in [x, y] {
            if !self.contains(v) {
                return Err(CobwebError::VertexOutsideTruncation {
                    vertex: *v,
                    max_level: self.max_level,
                });
            }
        }
        if !le(x, y) {
            return Ok(Vec::new());
        }
        if x == y {
            return Ok(vec![*x]);
        }
        let mut out = vec![*x];
        for level in (x.level + 1)..y.level {
            for row in 1..=self.level_sizes[(level - 1) as usize] {
                out.push(Vertex::from_parts(row, level));
            }
        }
        out.push(*y);
        Ok(out)
    }

    /// Covering edges, lazily: the complete bipartite graph between each pair
    /// of consecutive levels, ordered by (level, lower row, upper row).
    pub fn hasse_edges(
        &self,
    ) -> Result<impl Iterator<Item = (Vertex, Vertex)> + '_, CobwebError> {
        if self.max_level < 2 {
            return Err(CobwebError::TooFewLevels(self.max_level));
        }
        Ok((1..self.max_level).flat_map(move |p| {
            let lower = self.level_sizes[(p - 1) as usize];
            let upper = self.level_sizes[p as usize];
            (1..=lower).flat_map(move |j| {
                (1..=upper).map(move |q| {
                    (Vertex::from_parts(j, p), Vertex::from_parts(q, p + 1))
                })
            })
        }))
    }

    /// DOT digraph of the Hasse diagram, edges oriented from lower to higher
    /// level. Node identifiers are `v_row_level`; output ordering is fixed
    /// (nodes by level then row, edges likewise), so the text is
    /// byte-reproducible.
    pub fn export_dot(&self) -> Result<String, CobwebError> {
        let edges = self.hasse_edges()?;
        let mut out = String::from("digraph cobweb {\n  rankdir=BT;\n");
        for v in self.vertices() {
            writeln!(out, "  v_{}_{};", v.row, v.level).unwrap();
        }
        for (a, b) in edges {
            writeln!(out, "  v_{}_{} -> v_{}_{};", a.row, a.level, b.row, b.level).unwrap();
        }
        out.push_str("}\n");
        Ok(out)
    }

    /// Covering edges as CSV with columns `from_label,to_label`.
    pub fn export_edges_csv(&self) -> Result<String, CobwebError> {
        let edges = self.hasse_edges()?;
        let mut out = String::from("from_label,to_label\n");
        for (a, b) in edges {
            writeln!(out, "{},{}", a.label(), b.label()).unwrap();
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(row: u64, level: u32) -> Vertex {
        Vertex::new(row, level).unwrap()
    }

    #[test]
    fn vertex_validation() {
        assert!(Vertex::new(3, 4).is_ok());
        assert!(matches!(
            Vertex::new(4, 3),
            Err(CobwebError::RowOutOfRange { size: 2, .. })
        ));
        assert!(matches!(Vertex::new(0, 3), Err(CobwebError::RowOutOfRange { .. })));
        assert!(matches!(Vertex::new(1, 0), Err(CobwebError::ZeroLevel)));
    }

    #[test]
    fn order_relation() {
        assert!(le(&v(2, 3), &v(3, 4)));
        assert!(!le(&v(1, 3), &v(2, 3)));
        assert!(le(&v(2, 3), &v(2, 3)));
        assert!(!le(&v(1, 4), &v(2, 3)));
    }

    #[test]
    fn level_sets() {
        assert_eq!(level_set(2).unwrap(), vec![v(1, 2)]);
        assert_eq!(level_set(4).unwrap(), vec![v(1, 4), v(2, 4), v(3, 4)]);
        assert_eq!(level_set(6).unwrap().len(), 8);
        assert!(matches!(level_set(0), Err(CobwebError::ZeroLevel)));
    }

    #[test]
    fn truncation_sizes() {
        assert_eq!(TruncatedPoset::new(1).unwrap().element_count(), 1);
        assert_eq!(TruncatedPoset::new(5).unwrap().element_count(), 12);
        assert_eq!(TruncatedPoset::new(12).unwrap().element_count(), 376);
    }

    #[test]
    fn element_limit_guard() {
        let err = TruncatedPoset::with_element_limit(12, 100).unwrap_err();
        assert_eq!(
            err,
            CobwebError::ElementLimit {
                required: 376,
                limit: 100
            }
        );
        // Default limit admits level 20 (17710 elements) but not 21.
        assert!(TruncatedPoset::new(20).is_ok());
        assert!(TruncatedPoset::new(21).is_err());
    }

    #[test]
    fn labels_and_vertices_roundtrip() {
        let p = TruncatedPoset::new(8).unwrap();
        for (idx, vert) in p.vertices().enumerate() {
            let label = idx as u64 + 1;
            assert_eq!(p.vertex_of_label(label).unwrap(), vert);
            assert_eq!(p.label_of_vertex(&vert).unwrap(), label);
            assert_eq!(vert.label(), label);
        }
        assert!(p.vertex_of_label(0).is_err());
        assert!(p.vertex_of_label(p.last_label() + 1).is_err());
        assert!(p.label_of_vertex(&v(1, 9)).is_err());
    }

    #[test]
    fn interval_examples() {
        let p = TruncatedPoset::new(5).unwrap();
        assert_eq!(p.interval(&v(1, 3), &v(1, 3)).unwrap(), vec![v(1, 3)]);
        assert_eq!(
            p.interval(&v(1, 1), &v(1, 4)).unwrap(),
            vec![v(1, 1), v(1, 2), v(1, 3), v(2, 3), v(1, 4)]
        );
        assert!(p.interval(&v(1, 3), &v(2, 3)).unwrap().is_empty());
        assert!(p.interval(&v(1, 3), &v(1, 6)).is_err());
    }

    #[test]
    fn hasse_edge_counts() {
        let count = |n: u32| {
            TruncatedPoset::new(n)
                .unwrap()
                .hasse_edges()
                .map(|it| it.count())
                .unwrap()
        };
        assert_eq!(count(2), 1);
        assert_eq!(count(3), 3);
        assert_eq!(count(5), 24);
        assert!(matches!(
            TruncatedPoset::new(1).unwrap().hasse_edges().err(),
            Some(CobwebError::TooFewLevels(1))
        ));
    }

    #[test]
    fn dot_export_is_fixed() {
        let p = TruncatedPoset::new(2).unwrap();
        assert_eq!(
            p.export_dot().unwrap(),
            "digraph cobweb {\n  rankdir=BT;\n  v_1_1;\n  v_1_2;\n  v_1_1 -> v_1_2;\n}\n"
        );
        let p3 = TruncatedPoset::new(3).unwrap();
        let dot = p3.export_dot().unwrap();
        assert_eq!(dot.matches(" -> ").count(), 3);
        assert_eq!(dot.matches(";\n").count(), 1 + 4 + 3); // rankdir + nodes + edges

        let p5 = TruncatedPoset::new(5).unwrap();
        let dot5 = p5.export_dot().unwrap();
        assert_eq!(dot5.matches(" -> ").count(), 24);
        assert_eq!(dot5.matches(";\n").count(), 1 + 12 + 24);
    }

    #[test]
    fn edge_csv() {
        let p = TruncatedPoset::new(3).unwrap();
        assert_eq!(
            p.export_edges_csv().unwrap(),
            "from_label,to_label\n1,2\n2,3\n2,4\n"
        );
    }
}
