//! Ordered A-partitions of `M`, the orders they induce, and type vectors.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::carrier::{Carrier, MPoint, Tag};
use super::order::{bits, in_ord_k, StrictOrder};
use crate::error::{Error, Result};
use crate::variant::SandwichContext;

/// Disjoint nonempty blocks `(M_1, ..., M_k)` covering `M`, with the input
/// copy inside `M_1` and the output copy inside `M_k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrderedAPartition {
    carrier: Carrier,
    // block index of each carrier point
    block_of: Vec<u8>,
    k: usize,
}

impl OrderedAPartition {
    pub fn new(ctx: &SandwichContext, blocks: &[Vec<MPoint>]) -> Result<Self> {
        let carrier = Carrier::new(ctx);
        let k = blocks.len();
        if k == 0 {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        let mut block_of = vec![u8::MAX; carrier.len()];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {} is empty", b + 1)));
            }
            for p in block {
                let i = carrier
                    .index(p)
                    .ok_or_else(|| Error::InvalidPartition(format!("{p} is not a point of M")))?;
                if block_of[i] != u8::MAX {
                    return Err(Error::InvalidPartition(format!("{p} lies in two blocks")));
                }
                block_of[i] = b as u8;
            }
        }
        if let Some(i) = block_of.iter().position(|&b| b == u8::MAX) {
            return Err(Error::InvalidPartition(format!(
                "{} is not covered",
                carrier.points()[i]
            )));
        }
        let part = OrderedAPartition { carrier, block_of, k };
        part.check_copies()?;
        Ok(part)
    }

    fn check_copies(&self) -> Result<()> {
        for (p, &b) in self.carrier.points().iter().zip(&self.block_of) {
            match p.tag {
                Tag::In if b != 0 => return Err(Error::InvalidPartition(format!("{p} must lie in the first block"))),
                Tag::Out if b as usize != self.k - 1 => {
                    return Err(Error::InvalidPartition(format!("{p} must lie in the last block")))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    #[inline]
    pub(crate) fn block_index(&self, carrier_index: usize) -> usize {
        self.block_of[carrier_index] as usize
    }

    pub fn blocks(&self) -> Vec<BTreeSet<MPoint>> {
        let mut blocks = vec![BTreeSet::new(); self.k];
        for (p, &b) in self.carrier.points().iter().zip(&self.block_of) {
            blocks[b as usize].insert(*p);
        }
        blocks
    }

    pub fn type_vector(&self) -> TypeVector {
        let mut sizes = vec![0; self.k];
        for &b in &self.block_of {
            sizes[b as usize] += 1;
        }
        TypeVector(sizes)
    }
}

impl fmt::Display for OrderedAPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            let names: Vec<_> = block.iter().map(|p| p.to_string()).collect();
            f.write_str(&names.join(" "))?;
        }
        f.write_str(")")
    }
}

impl Serialize for OrderedAPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("OrderedAPartition", 1)?;
        st.serialize_field("blocks", &self.blocks())?;
        st.end()
    }
}

/// Block sizes `(|M_1|, ..., |M_k|)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct TypeVector(pub Vec<usize>);

impl TypeVector {
    /// The reversal `t^#`.
    pub fn reversed(&self) -> TypeVector {
        TypeVector(self.0.iter().rev().copied().collect())
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `ord(M_1, ..., M_k) = ⋃_{i<j} M_i × M_j`.
pub fn ord_of_partition(p: &OrderedAPartition) -> StrictOrder {
    let m = p.carrier.len();
    let succ = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| p.block_of[i] < p.block_of[j])
                .fold(0u32, |acc, j| acc | 1 << j)
        })
        .collect();
    StrictOrder::from_masks(p.carrier.clone(), succ)
}

/// All ordered A-partitions into `k` blocks, in lexicographic order of the
/// block indices assigned to the points of `A`.
pub fn enumerate_partitions(ctx: &SandwichContext, k: usize) -> Result<Vec<OrderedAPartition>> {
    let carrier = Carrier::new(ctx);
    let m = carrier.len();
    if k == 0 || k > m {
        return Err(Error::BlockCountOutOfRange { k, max: m });
    }
    let a_idx: Vec<usize> = bits(carrier.mask_of(Tag::A)).collect();
    let mut base = vec![0u8; m];
    for (i, p) in carrier.points().iter().enumerate() {
        if p.tag == Tag::Out {
            base[i] = (k - 1) as u8;
        }
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; a_idx.len()];
    loop {
        let mut block_of = base.clone();
        for (&i, &d) in a_idx.iter().zip(&digits) {
            block_of[i] = d as u8;
        }
        let mut used = vec![false; k];
        for &b in &block_of {
            used[b as usize] = true;
        }
        if used.iter().all(|&u| u) {
            out.push(OrderedAPartition {
                carrier: carrier.clone(),
                block_of,
                k,
            });
        }
        // odometer, last A point fastest
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < k {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Refines an order in `Ord_k(M)` to an ordered A-partition into `k` blocks
/// whose `ord` contains it.
///
/// The blocks are the antichain layers of the order (minimal points, then the
/// minimal points of the rest, ...), with every output-copy point moved to the
/// last layer. When the order has fewer than `k` layers, layers are split
/// (earliest first) until there are `k` blocks.
pub fn complete_order(ctx: &SandwichContext, order: &StrictOrder, k: usize) -> Result<OrderedAPartition> {
    if !in_ord_k(ctx, order, k) {
        return Err(Error::NotInOrd(k));
    }
    let carrier = order.carrier().clone();
    let pts = carrier.points().to_vec();
    let mut layers: Vec<Vec<usize>> = order.layers().into_iter().map(|mask| bits(mask).collect()).collect();
    let last = layers.len() - 1;
    let mut moved = Vec::new();
    for layer in &mut layers[..last] {
        layer.retain(|&i| {
            let keep = pts[i].tag != Tag::Out;
            if !keep {
                moved.push(i);
            }
            keep
        });
    }
    layers[last].extend(moved);
    for layer in &mut layers {
        layer.sort_unstable();
    }
    if layers.iter().any(|l| l.is_empty()) {
        return Err(Error::Internal("layering left an empty block".into()));
    }

    while layers.len() < k {
        let count = layers.len();
        let split = (0..count).find_map(|b| {
            let block = &layers[b];
            let pinned_front = if b == 0 {
                block.iter().filter(|&&i| pts[i].tag == Tag::In).count()
            } else {
                0
            };
            let pinned_back = if b == count - 1 {
                block.iter().filter(|&&i| pts[i].tag == Tag::Out).count()
            } else {
                0
            };
            let cut = pinned_front.max(1);
            (cut + pinned_back.max(1) <= block.len()).then_some((b, cut))
        });
        let (b, cut) = split.ok_or(Error::NoPartition(k))?;
        let tail = layers[b].split_off(cut);
        layers.insert(b + 1, tail);
    }

    let mut block_of = vec![0u8; pts.len()];
    for (b, layer) in layers.iter().enumerate() {
        for &i in layer {
            block_of[i] = b as u8;
        }
    }
    let part = OrderedAPartition { carrier, block_of, k };
    part.check_copies()?;
    Ok(part)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, a: &[usize]) -> SandwichContext {
        SandwichContext::new(n, a).unwrap()
    }

    fn p(s: &str) -> MPoint {
        s.parse().unwrap()
    }

    #[test]
    fn partition_counts() {
        let c = ctx(2, &[1]);
        let three = enumerate_partitions(&c, 3).unwrap();
        assert_eq!(three.len(), 1);
        assert_eq!(three[0].to_string(), "(IN-2 | A-1 | OUT-2)");
        assert_eq!(enumerate_partitions(&c, 2).unwrap().len(), 2);
        assert_eq!(enumerate_partitions(&c, 1).unwrap().len(), 1);
        assert!(enumerate_partitions(&c, 0).is_err());
        assert!(enumerate_partitions(&c, 4).is_err());
        // n=3, A={1,2}: |M| = 4
        let c3 = ctx(3, &[1, 2]);
        let counts: Vec<_> = (1..=4).map(|k| enumerate_partitions(&c3, k).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 4, 5, 2]);
    }

    // Brute-force count: every assignment of all points to k blocks, filtered by the definition.
    fn count_oracle(ctx: &SandwichContext, k: usize) -> usize {
        let pts = Carrier::new(ctx).points().to_vec();
        let total = k.pow(pts.len() as u32);
        (0..total)
            .filter(|&code| {
                let mut c = code;
                let assign: Vec<usize> = pts
                    .iter()
                    .map(|_| {
                        let d = c % k;
                        c /= k;
                        d
                    })
                    .collect();
                (0..k).all(|b| assign.contains(&b))
                    && pts.iter().zip(&assign).all(|(p, &b)| match p.tag {
                        Tag::In => b == 0,
                        Tag::Out => b == k - 1,
                        Tag::A => true,
                    })
            })
            .count()
    }

    #[test]
    fn partition_counts_match_oracle() {
        for (n, a) in [(3, vec![1]), (3, vec![2, 3]), (4, vec![1, 2]), (4, vec![1, 2, 4])] {
            let c = ctx(n, &a);
            let m = Carrier::new(&c).len();
            for k in 1..=m {
                assert_eq!(enumerate_partitions(&c, k).unwrap().len(), count_oracle(&c, k));
            }
        }
    }

    #[test]
    fn partition_validation() {
        let c = ctx(2, &[1]);
        assert!(OrderedAPartition::new(&c, &[vec![p("IN-2"), p("A-1")], vec![p("OUT-2")]]).is_ok());
        assert!(OrderedAPartition::new(&c, &[vec![p("IN-2")], vec![p("A-1"), p("OUT-2")]]).is_ok());
        assert!(OrderedAPartition::new(&c, &[vec![p("A-1")], vec![p("IN-2"), p("OUT-2")]]).is_err());
        assert!(OrderedAPartition::new(&c, &[vec![p("IN-2"), p("A-1")]]).is_err());
        assert!(OrderedAPartition::new(&c, &[vec![p("IN-2"), p("A-1")], vec![], vec![p("OUT-2")]]).is_err());
        assert!(OrderedAPartition::new(&c, &[vec![p("IN-2"), p("A-1"), p("OUT-2")]]).is_ok());
    }

    #[test]
    fn ord_examples() {
        let c = ctx(2, &[1]);
        let single = OrderedAPartition::new(&c, &[vec![p("IN-2"), p("A-1"), p("OUT-2")]]).unwrap();
        assert!(ord_of_partition(&single).is_empty());
        let three = &enumerate_partitions(&c, 3).unwrap()[0];
        let o = ord_of_partition(three);
        assert_eq!(o.len(), 3);
        assert!(o.contains(&p("IN-2"), &p("OUT-2")));
        assert_eq!(three.type_vector(), TypeVector(vec![1, 1, 1]));
    }

    #[test]
    fn type_reversal() {
        assert_eq!(TypeVector(vec![2, 1, 3]).reversed(), TypeVector(vec![3, 1, 2]));
    }

    #[test]
    fn complete_order_examples() {
        let c = ctx(2, &[1]);
        let whole = complete_order(&c, &StrictOrder::empty(&c), 1).unwrap();
        assert_eq!(whole.k(), 1);
        let three = enumerate_partitions(&c, 3).unwrap().remove(0);
        let o = ord_of_partition(&three);
        assert_eq!(complete_order(&c, &o, 3).unwrap(), three);
        assert_eq!(complete_order(&c, &o, 2), Err(Error::NotInOrd(2)));
        // empty order refined to 3 blocks by splitting
        let split = complete_order(&c, &StrictOrder::empty(&c), 3).unwrap();
        assert_eq!(split, three);
        // a fourth block cannot exist
        assert_eq!(
            complete_order(&c, &StrictOrder::empty(&c), 4),
            Err(Error::NoPartition(4))
        );
    }

    #[test]
    fn ord_of_every_partition_is_in_ord_k_and_completes_back() {
        for (n, a) in [(3, vec![1]), (4, vec![2, 3]), (4, vec![1, 2, 3])] {
            let c = ctx(n, &a);
            for k in 1..=Carrier::new(&c).len() {
                for part in enumerate_partitions(&c, k).unwrap() {
                    let o = ord_of_partition(&part);
                    o.validate().unwrap();
                    assert!(in_ord_k(&c, &o, k));
                    assert_eq!(o.longest_chain(), k);
                    assert_eq!(complete_order(&c, &o, k).unwrap(), part);
                    assert_eq!(part.type_vector().total(), 2 * (n - a.len()) + a.len());
                }
            }
        }
    }
}
