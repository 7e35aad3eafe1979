//! The constructive route from "not Archimedean" to a family of pairwise
//! disjoint cyclic subgroups.
//!
//! Starting from `u₁ > 0`, each step takes `xᵢ = dominate(uᵢ)`, which lies
//! above every multiple of `uᵢ`, then picks `uᵢ₊₁ = xᵢ + u₁ > xᵢ`. The
//! generators form the chain `0 < u₁ ≤ x₁ < u₂ ≤ x₂ < …` and the cyclic
//! subgroups `ℤuᵢ` meet only in the neutral element.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::instance::CyclicIntersection;
use super::{MonoidElement, MonoidError, MonoidInstance};

/// Whether the members are `ℤu` or, on carriers without inverses, `ℕu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CyclicKind {
    Group,
    Semigroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub generator: MonoidElement,
    pub dominator: MonoidElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupFamily {
    pub instance: String,
    pub kind: CyclicKind,
    pub steps: Vec<ChainStep>,
}

impl SubgroupFamily {
    /// A family of cyclic members without chain data.
    pub fn from_generators(inst: &MonoidInstance, generators: Vec<MonoidElement>) -> Self {
        SubgroupFamily {
            instance: inst.name().to_string(),
            kind: if inst.is_group() {
                CyclicKind::Group
            } else {
                CyclicKind::Semigroup
            },
            steps: generators
                .into_iter()
                .map(|g| ChainStep {
                    dominator: g.clone(),
                    generator: g,
                })
                .collect(),
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = &MonoidElement> {
        self.steps.iter().map(|s| &s.generator)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The interleaved chain `u₁, x₁, u₂, x₂, …`.
    pub fn chain(&self) -> Vec<&MonoidElement> {
        self.steps
            .iter()
            .flat_map(|s| [&s.generator, &s.dominator])
            .collect()
    }
}

/// Build `depth` generators of pairwise disjoint cyclic subgroups.
pub fn construct_chain(
    inst: &MonoidInstance,
    u1: &MonoidElement,
    depth: usize,
) -> Result<SubgroupFamily, MonoidError> {
    if inst.is_trivial() {
        return Err(MonoidError::TrivialMonoid(inst.name().to_string()));
    }
    if !inst.is_linear() {
        return Err(MonoidError::NotLinear(inst.name().to_string()));
    }
    if !inst.has_dominator() {
        return Err(MonoidError::OracleMissing(inst.name().to_string()));
    }
    if !inst.is_positive(u1)? {
        return Err(MonoidError::NotPositive(u1.to_string()));
    }
    let mut steps = Vec::with_capacity(depth);
    let mut u = u1.clone();
    for i in 0..depth {
        let x = inst.dominate(&u)?;
        debug_assert!(inst.leq(&u, &x)?);
        if i + 1 < depth {
            let next = inst.op(&x, u1)?;
            debug_assert!(inst.lt(&x, &next)?);
            steps.push(ChainStep {
                generator: u,
                dominator: x,
            });
            u = next;
        } else {
            steps.push(ChainStep {
                generator: u.clone(),
                dominator: x,
            });
        }
    }
    Ok(SubgroupFamily {
        instance: inst.name().to_string(),
        kind: CyclicKind::Group,
        steps,
    })
}

/// Whether the chain `0 < u₁ ≤ x₁ < u₂ ≤ x₂ < …` holds.
pub fn chain_is_increasing(inst: &MonoidInstance, family: &SubgroupFamily) -> Result<bool, MonoidError> {
    let chain = family.chain();
    let Some(first) = chain.first() else {
        return Ok(true);
    };
    if !inst.is_positive(first)? {
        return Ok(false);
    }
    for (k, w) in chain.windows(2).enumerate() {
        // u ≤ x inside a step, x < u across steps
        let ok = if k % 2 == 0 {
            inst.leq(w[0], w[1])?
        } else {
            inst.lt(w[0], w[1])?
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Disjointness {
    /// Proven to share only the neutral element.
    ExactDisjoint { reason: String },
    /// No common non-neutral multiple with `0 < |nᵢ|, |nⱼ| ≤ bound`.
    DisjointBounded { bound: u64 },
    /// `common = n_i·uᵢ = n_j·uⱼ`.
    Overlap {
        common: MonoidElement,
        #[serde(with = "bigint_str")]
        n_i: BigInt,
        #[serde(with = "bigint_str")]
        n_j: BigInt,
    },
}

mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::json::JsonInt;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&JsonInt(v.clone()), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        Ok(JsonInt::deserialize(d)?.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub i: usize,
    pub j: usize,
    #[serde(flatten)]
    pub verdict: Disjointness,
}

/// Decide, for each pair `i < j`, whether the cyclic members meet outside
/// the neutral element. Uses the carrier's exact intersection and falls back
/// to [`bounded_common_multiple`] only where that is unavailable.
pub fn verify_disjoint(family: &SubgroupFamily, bound: u64) -> Result<Vec<PairVerdict>, MonoidError> {
    let inst = MonoidInstance::by_name(&family.instance)?;
    let gens: Vec<&MonoidElement> = family.generators().collect();
    let mut out = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let verdict = match inst.intersect_cyclic(gens[i], gens[j])? {
                Some(CyclicIntersection::Trivial { reason }) => Disjointness::ExactDisjoint { reason },
                Some(CyclicIntersection::Shared { common, n_a, n_b }) => Disjointness::Overlap {
                    common,
                    n_i: n_a,
                    n_j: n_b,
                },
                None => bounded_common_multiple(&inst, gens[i], gens[j], bound)?,
            };
            out.push(PairVerdict { i, j, verdict });
        }
    }
    Ok(out)
}

/// Search `0 < |nₐ|, |n_b| ≤ bound` for `nₐ·a = n_b·b ≠ 0`.
pub fn bounded_common_multiple(
    inst: &MonoidInstance,
    a: &MonoidElement,
    b: &MonoidElement,
    bound: u64,
) -> Result<Disjointness, MonoidError> {
    let signed = |n: u64| -> Vec<BigInt> {
        if inst.is_group() {
            vec![BigInt::from(n), -BigInt::from(n)]
        } else {
            vec![BigInt::from(n)]
        }
    };
    let mut multiples_of_b: HashMap<MonoidElement, BigInt> = HashMap::new();
    for n in 1..=bound {
        for k in signed(n) {
            let m = inst.zfold(b, &k)?;
            if !inst.is_neutral(&m) {
                multiples_of_b.entry(m).or_insert(k);
            }
        }
    }
    for n in 1..=bound {
        for k in signed(n) {
            let m = inst.zfold(a, &k)?;
            if let Some(kb) = multiples_of_b.get(&m) {
                return Ok(Disjointness::Overlap {
                    common: m,
                    n_i: k,
                    n_j: kb.clone(),
                });
            }
        }
    }
    Ok(Disjointness::DisjointBounded { bound })
}
