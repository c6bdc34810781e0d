//! Nilpotent subsemigroups of the variant.
//!
//! Every element `β` is viewed through its lifted graph
//! `{(lift_in(x), lift_out(β(x)))}` on the doubled carrier `M`. Strict orders on
//! `M` then cut out nilpotent subsemigroups (`Mon`), nilpotent subsemigroups
//! generate strict orders (`Λ_S`), and the maximal nilpotent subsemigroups of
//! degree at most `k` are exactly the `T(M_1, ..., M_k)` of the ordered
//! A-partitions into `k` blocks.

mod carrier;
mod order;
mod partition;

use std::collections::BTreeSet;

use serde::Serialize;

pub use carrier::{embed_f, in_image_of_f, lift_in, lift_out, pull_back, Carrier, MPartialMap, MPoint, Tag};
pub use order::{enumerate_orders, in_ord_k, random_order, StrictOrder};
pub use partition::{complete_order, enumerate_partitions, ord_of_partition, OrderedAPartition, TypeVector};

use crate::error::{Error, Result};
use crate::isolated::Subsemigroup;
use crate::limits::Limits;
use crate::pinj::{enumerate_all_with, PartialInjection};
use crate::variant::SandwichContext;

/// Least `k` with every `k`-fold product over `S` equal to the empty map, or
/// `None` if the powers `S ⊇ S² ⊇ ...` stabilise elsewhere.
pub fn nilpotency_degree(s: &Subsemigroup) -> Option<usize> {
    let ctx = s.ctx();
    let zero = PartialInjection::from_table(ctx.n(), [0; crate::pinj::MAX_N]);
    let gens: Vec<PartialInjection> = s.iter().copied().collect();
    let mut power: BTreeSet<PartialInjection> = gens.iter().copied().collect();
    let mut k = 1;
    loop {
        if power.len() == 1 && power.contains(&zero) {
            return Some(k);
        }
        let next: BTreeSet<PartialInjection> = power
            .iter()
            .flat_map(|a| gens.iter().map(move |b| ctx.mul(a, b)))
            .collect();
        if next == power {
            return None;
        }
        power = next;
        k += 1;
    }
}

/// The lifted-graph relation of a set of elements, unchecked.
pub(crate) fn lifted_relation<'a, I>(carrier: &Carrier, elements: I) -> Vec<u32>
where
    I: IntoIterator<Item = &'a PartialInjection>,
{
    let mut succ = vec![0u32; carrier.len()];
    for b in elements {
        for (x, y) in b.pairs() {
            succ[carrier.in_index(x)] |= 1 << carrier.out_index(y);
        }
    }
    succ
}

/// `Λ_S`: all pairs `(lift_in(x), lift_out(β(x)))` over `β ∈ S`.
///
/// Rejects non-nilpotent input. The relation is validated as a strict order.
pub fn lambda_of(s: &Subsemigroup) -> Result<StrictOrder> {
    if nilpotency_degree(s).is_none() {
        return Err(Error::NotNilpotent);
    }
    lambda_unchecked(s)
}

pub(crate) fn lambda_unchecked(s: &Subsemigroup) -> Result<StrictOrder> {
    let ctx = s.ctx();
    let carrier = Carrier::new(ctx);
    let succ = lifted_relation(&carrier, s.iter());
    let order = StrictOrder::from_masks(carrier, succ);
    order
        .validate()
        .map_err(|e| Error::Internal(format!("lifted relation of a nilpotent semigroup: {e}")))?;
    Ok(order)
}

/// Whether every lifted pair of `β` is a pair of the order.
#[inline]
pub(crate) fn respects(carrier: &Carrier, succ: &[u32], b: &PartialInjection) -> bool {
    b.pairs().all(|(x, y)| {
        let i = carrier.in_index(x);
        let j = carrier.out_index(y);
        i != j && succ[i] & (1 << j) != 0
    })
}

/// `Mon(Λ)`: every `β` whose lifted graph lies in `Λ` and avoids the diagonal.
pub fn mon(ctx: &SandwichContext, order: &StrictOrder) -> Result<Subsemigroup> {
    mon_with(ctx, order, &Limits::default())
}

pub fn mon_with(ctx: &SandwichContext, order: &StrictOrder, limits: &Limits) -> Result<Subsemigroup> {
    let all = enumerate_all_with(ctx.n(), limits)?.to_vec();
    mon_over(ctx, order, &all)
}

/// `Mon(Λ)` filtered from a precomputed element list.
pub fn mon_over(ctx: &SandwichContext, order: &StrictOrder, all: &[PartialInjection]) -> Result<Subsemigroup> {
    let carrier = order.carrier();
    if *carrier != Carrier::new(ctx) {
        return Err(Error::InvalidOrder("order lives on another carrier".into()));
    }
    let members = all
        .iter()
        .filter(|b| respects(carrier, order.succ(), b))
        .copied()
        .collect();
    Ok(Subsemigroup::new_unchecked(*ctx, members))
}

/// `T(M_1, ..., M_k)`: every `β` sending each `x` in block `i` into a block
/// strictly after `i`. Cross-checked against `Mon(ord(M_1, ..., M_k))`.
pub fn t_of_partition(ctx: &SandwichContext, p: &OrderedAPartition) -> Result<Subsemigroup> {
    t_of_partition_with(ctx, p, &Limits::default())
}

pub fn t_of_partition_with(ctx: &SandwichContext, p: &OrderedAPartition, limits: &Limits) -> Result<Subsemigroup> {
    let all = enumerate_all_with(ctx.n(), limits)?.to_vec();
    t_of_partition_over(ctx, p, &all)
}

pub fn t_of_partition_over(
    ctx: &SandwichContext,
    p: &OrderedAPartition,
    all: &[PartialInjection],
) -> Result<Subsemigroup> {
    let carrier = p.carrier();
    if *carrier != Carrier::new(ctx) {
        return Err(Error::InvalidPartition("partition lives on another carrier".into()));
    }
    let members: BTreeSet<PartialInjection> = all
        .iter()
        .filter(|b| {
            b.pairs()
                .all(|(x, y)| p.block_index(carrier.in_index(x)) < p.block_index(carrier.out_index(y)))
        })
        .copied()
        .collect();
    let via_mon = mon_over(ctx, &ord_of_partition(p), all)?;
    if via_mon.members().members() != &members {
        return Err(Error::Internal(format!("T{p} differs from Mon(ord{p})")));
    }
    Ok(Subsemigroup::new_unchecked(*ctx, members))
}

/// A maximal nilpotent subsemigroup together with its partition.
#[derive(Clone, Debug, Serialize)]
pub struct MaximalNilpotent {
    pub partition: OrderedAPartition,
    #[serde(rename = "type")]
    pub type_vector: TypeVector,
    pub size: usize,
    pub degree: usize,
    #[serde(skip)]
    pub semigroup: Subsemigroup,
}

/// `T(p)` for every ordered A-partition `p` into `k` blocks.
pub fn maximal_nilpotents(ctx: &SandwichContext, k: usize) -> Result<Vec<MaximalNilpotent>> {
    maximal_nilpotents_with(ctx, k, &Limits::default())
}

pub fn maximal_nilpotents_with(ctx: &SandwichContext, k: usize, limits: &Limits) -> Result<Vec<MaximalNilpotent>> {
    let all = enumerate_all_with(ctx.n(), limits)?.to_vec();
    enumerate_partitions(ctx, k)?
        .into_iter()
        .map(|partition| {
            let semigroup = t_of_partition_over(ctx, &partition, &all)?;
            let degree = nilpotency_degree(&semigroup)
                .ok_or_else(|| Error::Internal(format!("T{partition} is not nilpotent")))?;
            Ok(MaximalNilpotent {
                type_vector: partition.type_vector(),
                size: semigroup.len(),
                degree,
                partition,
                semigroup,
            })
        })
        .collect()
}

/// The type vector of a maximal nilpotent subsemigroup of degree `k`,
/// recovered from its order `Λ_T`.
pub fn type_of(t: &Subsemigroup, k: usize) -> Result<TypeVector> {
    type_of_with(t, k, &Limits::default())
}

pub fn type_of_with(t: &Subsemigroup, k: usize, limits: &Limits) -> Result<TypeVector> {
    let ctx = t.ctx();
    let order = lambda_of(t)?;
    let partition = complete_order(ctx, &order, k).map_err(|_| Error::NotMaximal(k))?;
    let rebuilt = t_of_partition_with(ctx, &partition, limits)?;
    if rebuilt.members() != t.members() {
        return Err(Error::NotMaximal(k));
    }
    Ok(partition.type_vector())
}
