//! Self-verification suite: re-derives the algebra's defining identities on
//! a truncation and reports the first divergence, if any.
//!
//! The checks deliberately pit independent routes against each other: both
//! zeta forms against the raw order relation, the three Möbius forms against
//! one another, convolution against the identity, reconstruction against
//! accumulation, and the chain-count product against eta powers.

use num::bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::CobwebError;
use crate::incidence::{
    convolve, count_maximal_chains, delta, eta_power, order_indicator, zeta_coord, zeta_natural,
};
use crate::inversion::{accumulate, reconstruct, PosetFunction};
use crate::mobius::{mobius_coords, mobius_levels, mobius_matrix, MobiusStrategy};
use crate::poset::{TruncatedPoset, Vertex};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Human-readable detail: the first mismatch for failures, a short
    /// summary otherwise.
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub max_level: u32,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Runs the whole suite on levels `1..=max_level` under the given element
/// limit. Guard violations are errors; identity violations come back as
/// failed checks in the report.
pub fn verify_suite(max_level: u32, element_limit: u64) -> Result<VerifyReport, CobwebError> {
    let poset = TruncatedPoset::with_element_limit(max_level, element_limit)?;
    let checks = vec![
        check_zeta_forms(&poset),
        check_mobius_forms(&poset),
        check_inverse_identity(&poset),
        check_inversion_roundtrip(&poset),
        check_chain_counts(&poset),
    ];
    Ok(VerifyReport {
        max_level,
        checks,
    })
}

fn outcome(name: &'static str, result: Result<String, String>) -> CheckOutcome {
    match result {
        Ok(detail) => CheckOutcome {
            name,
            passed: true,
            detail,
        },
        Err(detail) => CheckOutcome {
            name,
            passed: false,
            detail,
        },
    }
}

fn check_zeta_forms(poset: &TruncatedPoset) -> CheckOutcome {
    outcome("zeta-forms-agree", (|| {
        let natural = zeta_natural(poset);
        let coord = zeta_coord(poset);
        let order = order_indicator(poset);
        let last = poset.last_label();
        for a in 1..=last {
            for b in 1..=last {
                let n = natural.value(a, b);
                let c = coord.value(a, b);
                let o = order.value(a, b);
                if n != c || c != o {
                    return Err(format!(
                        "zeta forms split at ({a},{b}): delta-sum {n}, coordinate {c}, order {o}"
                    ));
                }
            }
        }
        Ok(format!("{last}x{last} entries agree across both forms"))
    })())
}

fn check_mobius_forms(poset: &TruncatedPoset) -> CheckOutcome {
    outcome("mobius-three-way", (|| {
        let by_recurrence = mobius_matrix(poset, MobiusStrategy::Recurrence);
        let last = poset.last_label();
        for a in 1..=last {
            let x = poset.vertex_of_label(a).map_err(|e| e.to_string())?;
            for b in 1..=last {
                let y = poset.vertex_of_label(b).map_err(|e| e.to_string())?;
                let rec = by_recurrence.value(a, b);
                let lev = Scalar::from(mobius_levels(a, b).map_err(|e| e.to_string())?);
                let coo = Scalar::from(mobius_coords(&x, &y));
                if rec != lev || lev != coo {
                    return Err(format!(
                        "Möbius forms split at ({a},{b}): recurrence {rec}, levels {lev}, coordinates {coo}"
                    ));
                }
            }
        }
        Ok(format!("{last}x{last} entries agree across all three forms"))
    })())
}

fn check_inverse_identity(poset: &TruncatedPoset) -> CheckOutcome {
    outcome("zeta-mobius-inverse", (|| {
        let zeta = zeta_coord(poset);
        let mu = mobius_matrix(poset, MobiusStrategy::Explicit);
        let id = delta(poset);
        let left = convolve(&zeta, &mu).map_err(|e| e.to_string())?;
        if left != id {
            return Err("zeta * mu differs from delta".to_owned());
        }
        let right = convolve(&mu, &zeta).map_err(|e| e.to_string())?;
        if right != id {
            return Err("mu * zeta differs from delta".to_owned());
        }
        Ok("zeta * mu = mu * zeta = delta".to_owned())
    })())
}

fn random_function(poset: &TruncatedPoset, rng: &mut StdRng) -> PosetFunction {
    let mut f = PosetFunction::new(poset);
    for x in poset.vertices() {
        if rng.gen_bool(0.3) {
            continue; // leave some vertices at zero
        }
        let num = rng.gen_range(-9i64..=9);
        let den = rng.gen_range(1i64..=9);
        f.set(x, format!("{num}/{den}").parse().unwrap()).unwrap();
    }
    f
}

fn check_inversion_roundtrip(poset: &TruncatedPoset) -> CheckOutcome {
    outcome("inversion-roundtrip", (|| {
        let mut rng = StdRng::seed_from_u64(0x0b5e55ed);
        let mut samples: Vec<PosetFunction> = (0..20).map(|_| random_function(poset, &mut rng)).collect();
        let mut ones = PosetFunction::new(poset);
        for x in poset.vertices() {
            ones.set(x, Scalar::one()).unwrap();
        }
        samples.push(ones);
        // One sample with a declared support vertex.
        let support = Vertex::new(1, poset.max_level().div_ceil(2)).unwrap();
        let mut supported = PosetFunction::new(poset);
        supported.set_support(Some(support)).map_err(|e| e.to_string())?;
        for x in poset.vertices() {
            if crate::poset::le(&support, &x) {
                supported
                    .set(x, Scalar::from(rng.gen_range(-5i64..=5)))
                    .unwrap();
            }
        }
        samples.push(supported);
        for (i, f) in samples.iter().enumerate() {
            let g = accumulate(f);
            if &reconstruct(&g) != f {
                return Err(format!("reconstruct(accumulate(f)) != f for sample {i}"));
            }
            if accumulate(&reconstruct(f)) != *f {
                return Err(format!("accumulate(reconstruct(g)) != g for sample {i}"));
            }
        }
        Ok(format!("{} random functions round-tripped exactly", samples.len()))
    })())
}

fn check_chain_counts(poset: &TruncatedPoset) -> CheckOutcome {
    outcome("chain-counts", (|| {
        let n = poset.max_level();
        let powers: Vec<_> = (0..=n).map(|k| eta_power(poset, k)).collect();
        // The longest chain has one vertex per level.
        if !powers[n as usize].entries().is_empty() {
            return Err(format!("eta^{n} is not identically zero"));
        }
        for (k, p) in powers.iter().enumerate() {
            for (a, b, v) in p.entries() {
                let int = v.as_integer().ok_or(format!(
                    "eta^{k} has a non-integer entry at ({a},{b})"
                ))?;
                if int < &BigInt::ZERO {
                    return Err(format!("eta^{k} is negative at ({a},{b})"));
                }
            }
        }
        for x in poset.vertices() {
            for y in poset.vertices() {
                if !crate::poset::le(&x, &y) {
                    if count_maximal_chains(poset, &x, &y).map_err(|e| e.to_string())?
                        != BigInt::ZERO
                    {
                        return Err(format!("incomparable pair {x},{y} counts a chain"));
                    }
                    continue;
                }
                let gap = y.level() - x.level();
                let maximal = count_maximal_chains(poset, &x, &y).map_err(|e| e.to_string())?;
                let via_eta = powers[gap as usize]
                    .value_at(&x, &y)
                    .map_err(|e| e.to_string())?;
                if via_eta != Scalar::from(maximal.clone()) {
                    return Err(format!(
                        "saturated-chain routes split at {x} -> {y}: product {maximal}, eta^{gap} {via_eta}"
                    ));
                }
            }
        }
        Ok("chain-count product agrees with eta powers on every pair".to_owned())
    })())
}
