//! The Möbius inversion formula on the cobweb poset: forward accumulation
//! over down-sets and exact reconstruction.
//!
//! For a function `f` on vertices, `accumulate` produces
//! `g(x) = sum of f(y) over y <= x`; since a down-set here is the point plus
//! all strictly lower levels, one pass of level prefix sums evaluates every
//! `g(x)` in constant time. `reconstruct` applies the inverse kernel:
//! `f(x) = sum of g(y) * mu(y, x) over y <= x`. Note the kernel's arguments
//! run from the lower vertex `y` up to `x`; the expansion of the sum is
//! driven by the level gap `level(x) - level(y)`, so the same convention is
//! used throughout.
//!
//! Both transforms are exact, so `reconstruct(accumulate(f)) = f` as values,
//! not approximately.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::CobwebError;
use crate::mobius::mobius_coords;
use crate::poset::{le, TruncatedPoset, Vertex};
use crate::scalar::Scalar;

/// An exact-rational-valued function on the vertices of a truncation,
/// optionally constrained to vanish outside the up-set of a support vertex.
///
/// Equality is pointwise on values; the declared support is metadata and
/// does not participate.
#[derive(Clone, Debug)]
pub struct PosetFunction {
    poset: TruncatedPoset,
    values: BTreeMap<Vertex, Scalar>,
    support: Option<Vertex>,
}

impl PosetFunction {
    /// The zero function.
    pub fn new(poset: &TruncatedPoset) -> Self {
        PosetFunction {
            poset: poset.clone(),
            values: BTreeMap::new(),
            support: None,
        }
    }

    pub fn poset(&self) -> &TruncatedPoset {
        &self.poset
    }

    pub fn support(&self) -> Option<&Vertex> {
        self.support.as_ref()
    }

    /// Declares (or clears) the support vertex: nonzero values are only
    /// allowed at vertices above or equal to it. Existing values are
    /// re-validated.
    pub fn set_support(&mut self, support: Option<Vertex>) -> Result<(), CobwebError> {
        if let Some(p) = &support {
            if !self.poset.contains(p) {
                return Err(CobwebError::VertexOutsideTruncation {
                    vertex: *p,
                    max_level: self.poset.max_level(),
                });
            }
            for v in self.values.keys() {
                if !le(p, v) {
                    return Err(CobwebError::SupportViolation {
                        vertex: *v,
                        support: *p,
                    });
                }
            }
        }
        self.support = support;
        Ok(())
    }

    pub fn set(&mut self, vertex: Vertex, value: Scalar) -> Result<(), CobwebError> {
        if !self.poset.contains(&vertex) {
            return Err(CobwebError::VertexOutsideTruncation {
                vertex,
                max_level: self.poset.max_level(),
            });
        }
        if !value.is_zero() {
            if let Some(p) = &self.support {
                if !le(p, &vertex) {
                    return Err(CobwebError::SupportViolation {
                        vertex,
                        support: *p,
                    });
                }
            }
            self.values.insert(vertex, value);
        } else {
            self.values.remove(&vertex);
        }
        Ok(())
    }

    /// Value at a vertex; vertices never set are zero.
    ///
    /// Panics if the vertex lies outside the truncation.
    pub fn value(&self, vertex: &Vertex) -> Scalar {
        assert!(
            self.poset.contains(vertex),
            "vertex {vertex} outside the truncation"
        );
        self.values
            .get(vertex)
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Nonzero values in linear-extension order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vertex, &Scalar)> {
        self.values.iter()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&FunctionRepr::from(self)).expect("plain data serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(FunctionRepr::from(self)).expect("plain data serializes")
    }

    /// Parses the JSON representation; vertices omitted from `values` are
    /// zero. The declared truncation is built under `element_limit`.
    pub fn from_json_str(text: &str, element_limit: u64) -> Result<Self, CobwebError> {
        let repr: FunctionRepr = serde_json::from_str(text)
            .map_err(|e| CobwebError::MalformedInput(e.to_string()))?;
        let poset = TruncatedPoset::with_element_limit(repr.max_level, element_limit)?;
        let mut out = PosetFunction::new(&poset);
        if let Some(s) = repr.support {
            out.set_support(Some(Vertex::new(s.row, s.level)?))?;
        }
        for entry in repr.values {
            let vertex = Vertex::new(entry.row, entry.level)?;
            if out.values.contains_key(&vertex) {
                return Err(CobwebError::MalformedInput(format!(
                    "duplicate vertex {vertex} in values"
                )));
            }
            out.set(vertex, entry.value.parse()?)?;
        }
        Ok(out)
    }
}

impl PartialEq for PosetFunction {
    fn eq(&self, other: &Self) -> bool {
        self.poset == other.poset && self.values == other.values
    }
}

impl Eq for PosetFunction {}

#[derive(Serialize, Deserialize)]
struct FunctionRepr {
    max_level: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    support: Option<VertexRepr>,
    values: Vec<EntryRepr>,
}

#[derive(Serialize, Deserialize)]
struct VertexRepr {
    row: u64,
    level: u32,
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    row: u64,
    level: u32,
    value: String,
}

impl From<&PosetFunction> for FunctionRepr {
    fn from(f: &PosetFunction) -> Self {
        FunctionRepr {
            max_level: f.poset.max_level(),
            support: f.support.map(|p| VertexRepr {
                row: p.row(),
                level: p.level(),
            }),
            values: f
                .values
                .iter()
                .map(|(v, s)| EntryRepr {
                    row: v.row(),
                    level: v.level(),
                    value: s.to_string(),
                })
                .collect(),
        }
    }
}

/// Sums `f` over down-sets: `g(x)` is `f(x)` plus the sum of `f` over all
/// strictly lower levels, computed with one pass of level prefix sums.
pub fn accumulate(f: &PosetFunction) -> PosetFunction {
    let poset = f.poset();
    let n = poset.max_level() as usize;
    let mut level_sums = vec![Scalar::zero(); n + 1];
    for (v, s) in f.iter() {
        level_sums[v.level() as usize] += s;
    }
    let mut below = vec![Scalar::zero(); n + 2];
    for t in 1..=n {
        below[t + 1] = &below[t] + &level_sums[t];
    }
    let mut g = PosetFunction::new(poset);
    g.support = f.support;
    for x in poset.vertices() {
        let val = &below[x.level() as usize] + &f.value(&x);
        if !val.is_zero() {
            g.values.insert(x, val);
        }
    }
    g
}

/// Inverts [`accumulate`]: `f(x)` is the sum of `g(y) * mu(y, x)` over all
/// `y <= x`, using the coordinate Möbius values.
pub fn reconstruct(g: &PosetFunction) -> PosetFunction {
    let poset = g.poset();
    let mut f = PosetFunction::new(poset);
    f.support = g.support;
    for x in poset.vertices() {
        let mut sum = g.value(&x); // y = x term, mu(x,x) = 1
        for (y, gy) in g.iter() {
            if y.level() < x.level() {
                let mu = Scalar::from(mobius_coords(y, &x));
                if !mu.is_zero() {
                    sum += &(gy * &mu);
                }
            }
        }
        if !sum.is_zero() {
            f.values.insert(x, sum);
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(row: u64, level: u32) -> Vertex {
        Vertex::new(row, level).unwrap()
    }

    fn poset(n: u32) -> TruncatedPoset {
        TruncatedPoset::new(n).unwrap()
    }

    fn constant_one(p: &TruncatedPoset) -> PosetFunction {
        let mut f = PosetFunction::new(p);
        for x in p.vertices() {
            f.set(x, Scalar::one()).unwrap();
        }
        f
    }

    #[test]
    fn accumulate_zero_and_point_mass() {
        let p = poset(5);
        let zero = PosetFunction::new(&p);
        assert_eq!(accumulate(&zero), zero);

        let mut f = PosetFunction::new(&p);
        f.set(v(1, 3), Scalar::one()).unwrap();
        let g = accumulate(&f);
        assert_eq!(g.value(&v(1, 3)), Scalar::one());
        assert_eq!(g.value(&v(2, 3)), Scalar::zero());
        assert_eq!(g.value(&v(1, 2)), Scalar::zero());
        for x in p.vertices().filter(|x| x.level() >= 4) {
            assert_eq!(g.value(&x), Scalar::one(), "down-set of {x} misses (1,3)");
        }
    }

    #[test]
    fn accumulate_constant_one() {
        let p = poset(4);
        let g = accumulate(&constant_one(&p));
        for s in 1..=3 {
            assert_eq!(g.value(&v(s, 4)), Scalar::from(5i64));
        }
        assert_eq!(g.value(&v(1, 1)), Scalar::one());
        assert_eq!(g.value(&v(2, 3)), Scalar::from(3i64));
    }

    #[test]
    fn reconstruct_point_mass_gives_mobius_row() {
        let p = poset(6);
        let mut g = PosetFunction::new(&p);
        g.set(v(1, 1), Scalar::one()).unwrap();
        let f = reconstruct(&g);
        for x in p.vertices() {
            assert_eq!(
                f.value(&x),
                Scalar::from(mobius_coords(&v(1, 1), &x)),
                "at {x}"
            );
        }
    }

    #[test]
    fn roundtrips_are_exact() {
        let p = poset(6);
        let one = constant_one(&p);
        assert_eq!(reconstruct(&accumulate(&one)), one);

        let mut f = PosetFunction::new(&p);
        for (i, x) in p.vertices().enumerate() {
            let num = (i as i64 * 5) % 13 - 6;
            let den = (i % 4) + 1;
            f.set(x, format!("{num}/{den}").parse().unwrap()).unwrap();
        }
        assert_eq!(reconstruct(&accumulate(&f)), f);
        assert_eq!(accumulate(&reconstruct(&f)), f);
    }

    #[test]
    fn accumulated_excess_is_level_homogeneous() {
        let p = poset(5);
        let mut f = PosetFunction::new(&p);
        for (i, x) in p.vertices().enumerate() {
            f.set(x, Scalar::from((i as i64 * 3) % 7)).unwrap();
        }
        let g = accumulate(&f);
        for t in 1..=5 {
            let baseline = &g.value(&v(1, t)) - &f.value(&v(1, t));
            for x in crate::poset::level_set(t).unwrap() {
                assert_eq!(&g.value(&x) - &f.value(&x), baseline);
            }
        }
    }

    #[test]
    fn support_is_validated() {
        let p = poset(5);
        let mut f = PosetFunction::new(&p);
        f.set_support(Some(v(1, 3))).unwrap();
        assert!(f.set(v(1, 4), Scalar::one()).is_ok());
        assert!(matches!(
            f.set(v(2, 3), Scalar::one()),
            Err(CobwebError::SupportViolation { .. })
        ));
        // Declaring a support below existing values fails too.
        let mut h = PosetFunction::new(&p);
        h.set(v(1, 2), Scalar::one()).unwrap();
        assert!(h.set_support(Some(v(1, 3))).is_err());
        // Setting a zero never violates support.
        assert!(f.set(v(2, 3), Scalar::zero()).is_ok());
    }

    #[test]
    fn roundtrip_respects_declared_support() {
        let p = poset(6);
        let mut f = PosetFunction::new(&p);
        f.set_support(Some(v(1, 3))).unwrap();
        f.set(v(1, 3), Scalar::from(4i64)).unwrap();
        f.set(v(2, 5), "7/3".parse().unwrap()).unwrap();
        let g = accumulate(&f);
        assert_eq!(g.support(), Some(&v(1, 3)));
        assert_eq!(reconstruct(&g), f);
    }

    #[test]
    fn json_roundtrip() {
        let p = poset(4);
        let mut f = PosetFunction::new(&p);
        f.set_support(Some(v(1, 2))).unwrap();
        f.set(v(1, 3), "5".parse().unwrap()).unwrap();
        f.set(v(2, 4), "-7/2".parse().unwrap()).unwrap();
        let text = f.to_json_string();
        assert_eq!(
            text,
            "{\"max_level\":4,\"support\":{\"row\":1,\"level\":2},\"values\":[{\"row\":1,\"level\":3,\"value\":\"5\"},{\"row\":2,\"level\":4,\"value\":\"-7/2\"}]}"
        );
        let parsed = PosetFunction::from_json_str(&text, 100).unwrap();
        assert_eq!(parsed, f);
        assert_eq!(parsed.support(), Some(&v(1, 2)));
    }

    #[test]
    fn json_rejects_bad_input() {
        let limit = 20_000;
        assert!(matches!(
            PosetFunction::from_json_str("{not json", limit),
            Err(CobwebError::MalformedInput(_))
        ));
        // Row 4 does not exist on level 3 (it has 2 vertices).
        let bad_vertex =
            r#"{"max_level":4,"values":[{"row":4,"level":3,"value":"1"}]}"#;
        assert!(matches!(
            PosetFunction::from_json_str(bad_vertex, limit),
            Err(CobwebError::RowOutOfRange { .. })
        ));
        let bad_value = r#"{"max_level":4,"values":[{"row":1,"level":3,"value":"x"}]}"#;
        assert!(matches!(
            PosetFunction::from_json_str(bad_value, limit),
            Err(CobwebError::BadScalar(_))
        ));
        let dup = r#"{"max_level":4,"values":[{"row":1,"level":3,"value":"1"},{"row":1,"level":3,"value":"2"}]}"#;
        assert!(matches!(
            PosetFunction::from_json_str(dup, limit),
            Err(CobwebError::MalformedInput(_))
        ));
        // Guard applies to the declared truncation.
        let big = r#"{"max_level":12,"values":[]}"#;
        assert!(matches!(
            PosetFunction::from_json_str(big, 100),
            Err(CobwebError::ElementLimit { .. })
        ));
    }
}
