//! Partial injective transformations of `N = {1, ..., n}`.
//!
//! Composition acts left to right: `a.compose(&b)` sends `x` to `b(a(x))`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Largest supported carrier size.
pub const MAX_N: usize = 16;

/// A partial injective self-map of `{1, ..., n}`.
///
/// Points are 1-indexed. The derived ordering compares carrier size, rank,
/// domain and images in that order, which is the canonical element order used
/// by enumeration, export and the isomorphism search.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPartialInjection", into = "RawPartialInjection")]
pub struct PartialInjection {
    n: u8,
    rank: u8,
    dom: u16,
    // 0 marks an undefined point
    img: [u8; MAX_N],
}

#[derive(Serialize, Deserialize)]
struct RawPartialInjection {
    n: usize,
    img: Vec<Option<usize>>,
}

impl TryFrom<RawPartialInjection> for PartialInjection {
    type Error = Error;

    fn try_from(raw: RawPartialInjection) -> Result<Self> {
        if raw.img.len() != raw.n {
            return Err(Error::Parse(format!(
                "img has {} entries but n = {}",
                raw.img.len(),
                raw.n
            )));
        }
        PartialInjection::new(raw.n, &raw.img)
    }
}

impl From<PartialInjection> for RawPartialInjection {
    fn from(p: PartialInjection) -> Self {
        RawPartialInjection {
            n: p.n(),
            img: (1..=p.n()).map(|x| p.get(x)).collect(),
        }
    }
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        Err(Error::CarrierSize(n))
    } else {
        Ok(())
    }
}

impl PartialInjection {
    /// Builds a map from its image table: `img[x - 1]` is the image of `x`.
    pub fn new(n: usize, img: &[Option<usize>]) -> Result<Self> {
        check_n(n)?;
        if img.len() != n {
            return Err(Error::Parse(format!("expected {n} image entries, got {}", img.len())));
        }
        Self::from_pairs(n, img.iter().enumerate().filter_map(|(i, y)| y.map(|y| (i + 1, y))))
    }

    /// Builds a map from its graph `{(x, y)}`.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_n(n)?;
        let mut img = [0u8; MAX_N];
        let mut seen = 0u16;
        for (x, y) in pairs {
            for p in [x, y] {
                if p == 0 || p > n {
                    return Err(Error::PointOutOfRange { point: p, n });
                }
            }
            if img[x - 1] != 0 {
                return Err(Error::DuplicatePoint(x));
            }
            if seen & (1 << (y - 1)) != 0 {
                return Err(Error::NotInjective(y));
            }
            seen |= 1 << (y - 1);
            img[x - 1] = y as u8;
        }
        Ok(Self::from_table(n, img))
    }

    pub(crate) fn from_table(n: usize, img: [u8; MAX_N]) -> Self {
        let mut dom = 0u16;
        for (i, &y) in img.iter().enumerate().take(n) {
            if y != 0 {
                dom |= 1 << i;
            }
        }
        PartialInjection {
            n: n as u8,
            rank: dom.count_ones() as u8,
            dom,
            img,
        }
    }

    /// The nowhere-defined map.
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self::from_table(n, [0; MAX_N]))
    }

    /// The identity of IS_n.
    pub fn identity(n: usize) -> Result<Self> {
        Self::identity_on(n, 1..=n)
    }

    /// The partial identity `id_D`.
    pub fn identity_on<I>(n: usize, domain: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        Self::from_pairs(n, domain.into_iter().map(|x| (x, x)))
    }

    pub(crate) fn identity_on_mask(n: usize, mask: u16) -> Self {
        let mut img = [0u8; MAX_N];
        for (x, slot) in img.iter_mut().enumerate().take(n) {
            if mask & (1 << x) != 0 {
                *slot = x as u8 + 1;
            }
        }
        Self::from_table(n, img)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    /// Image of `x`, or `None` when `x` is outside the domain (or outside `N`).
    #[inline]
    pub fn get(&self, x: usize) -> Option<usize> {
        if x == 0 || x > self.n() {
            return None;
        }
        match self.img[x - 1] {
            0 => None,
            y => Some(y as usize),
        }
    }

    #[inline]
    pub(crate) fn table(&self) -> &[u8; MAX_N] {
        &self.img
    }

    /// Domain as a bitmask, bit `x - 1` set for `x` in the domain.
    pub fn domain_mask(&self) -> u16 {
        self.dom
    }

    pub fn image_mask(&self) -> u16 {
        self.img[..self.n()]
            .iter()
            .filter(|&&y| y != 0)
            .fold(0, |m, &y| m | 1 << (y - 1))
    }

    pub fn domain(&self) -> Vec<usize> {
        mask_points(self.dom)
    }

    pub fn image(&self) -> Vec<usize> {
        mask_points(self.image_mask())
    }

    /// The graph `(x, β(x))` in ascending `x`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.img[..self.n()]
            .iter()
            .enumerate()
            .filter(|(_, &y)| y != 0)
            .map(|(i, &y)| (i + 1, y as usize))
    }

    pub fn is_empty(&self) -> bool {
        self.rank == 0
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.n()
    }

    /// Left-to-right product: `(self ∘ other)(x) = other(self(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::CarrierMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(self.then(other))
    }

    #[inline]
    pub(crate) fn then(&self, other: &Self) -> Self {
        let mut img = [0u8; MAX_N];
        for (slot, &y) in img.iter_mut().zip(&self.img[..self.n()]) {
            if y != 0 {
                *slot = other.img[y as usize - 1];
            }
        }
        Self::from_table(self.n(), img)
    }

    /// The `s`-fold plain product of `self`.
    pub fn power(&self, s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::ZeroExponent);
        }
        let mut acc = *self;
        for _ in 1..s {
            acc = acc.then(self);
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Self {
        let mut img = [0u8; MAX_N];
        for (x, y) in self.pairs() {
            img[y - 1] = x as u8;
        }
        Self::from_table(self.n(), img)
    }

    /// Idempotent in IS_n, i.e. the identity on its own domain.
    pub fn is_idempotent_plain(&self) -> bool {
        self.pairs().all(|(x, y)| x == y)
    }

    /// The full permutation `x_1 -> x_2 -> ... -> x_k -> x_1`, identity elsewhere.
    pub fn cycle(n: usize, points: &[usize]) -> Result<Self> {
        check_n(n)?;
        check_distinct(n, points)?;
        let mut img = [0u8; MAX_N];
        for x in 1..=n {
            img[x - 1] = x as u8;
        }
        for (i, &x) in points.iter().enumerate() {
            img[x - 1] = points[(i + 1) % points.len()] as u8;
        }
        Ok(Self::from_table(n, img))
    }
}

pub(crate) fn check_distinct(n: usize, points: &[usize]) -> Result<()> {
    let mut seen = 0u32;
    for &p in points {
        if p == 0 || p > n {
            return Err(Error::PointOutOfRange { point: p, n });
        }
        if seen & (1 << p) != 0 {
            return Err(Error::DuplicatePoint(p));
        }
        seen |= 1 << p;
    }
    Ok(())
}

pub(crate) fn mask_points(mask: u16) -> Vec<usize> {
    (0..MAX_N).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

impl fmt::Debug for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PartialInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, y)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        write!(f, "}}/{}", self.n)
    }
}

/// A finite set of partial injections over one carrier.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawElementSet")]
pub struct ElementSet {
    n: usize,
    members: BTreeSet<PartialInjection>,
}

#[derive(Deserialize)]
struct RawElementSet {
    n: usize,
    members: Vec<PartialInjection>,
}

impl TryFrom<RawElementSet> for ElementSet {
    type Error = Error;

    fn try_from(raw: RawElementSet) -> Result<Self> {
        ElementSet::from_elements(raw.n, raw.members)
    }
}

impl ElementSet {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(ElementSet {
            n,
            members: BTreeSet::new(),
        })
    }

    pub fn from_elements<I>(n: usize, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = PartialInjection>,
    {
        let mut set = ElementSet::new(n)?;
        for e in elements {
            set.insert(e)?;
        }
        Ok(set)
    }

    /// Callers guarantee every element has carrier `n`.
    pub(crate) fn from_set_unchecked(n: usize, members: BTreeSet<PartialInjection>) -> Self {
        debug_assert!(members.iter().all(|m| m.n() == n));
        ElementSet { n, members }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Returns whether the element was newly added.
    pub fn insert(&mut self, e: PartialInjection) -> Result<bool> {
        if e.n() != self.n {
            return Err(Error::CarrierMismatch {
                left: self.n,
                right: e.n(),
            });
        }
        Ok(self.members.insert(e))
    }

    pub fn contains(&self, e: &PartialInjection) -> bool {
        self.members.contains(e)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PartialInjection> + '_ {
        self.members.iter()
    }

    pub fn members(&self) -> &BTreeSet<PartialInjection> {
        &self.members
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn to_vec(&self) -> Vec<PartialInjection> {
        self.members.iter().copied().collect()
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = &'a PartialInjection;
    type IntoIter = std::collections::btree_set::Iter<'a, PartialInjection>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// All of IS_n under the default refusal bound.
pub fn enumerate_all(n: usize) -> Result<ElementSet> {
    enumerate_all_with(n, &Limits::default())
}

pub fn enumerate_all_with(n: usize, limits: &Limits) -> Result<ElementSet> {
    check_n(n)?;
    if n > limits.max_n {
        return Err(Error::BoundExceeded {
            what: "enumeration of IS_n",
            n,
            bound: limits.max_n,
        });
    }
    let mut out = BTreeSet::new();
    let mut img = [0u8; MAX_N];
    fill(n, 0, 0, &mut img, &mut out);
    Ok(ElementSet::from_set_unchecked(n, out))
}

fn fill(n: usize, x: usize, used: u16, img: &mut [u8; MAX_N], out: &mut BTreeSet<PartialInjection>) {
    if x == n {
        out.insert(PartialInjection::from_table(n, *img));
        return;
    }
    img[x] = 0;
    fill(n, x + 1, used, img, out);
    for y in 0..n {
        if used & (1 << y) == 0 {
            img[x] = y as u8 + 1;
            fill(n, x + 1, used | 1 << y, img, out);
        }
    }
    img[x] = 0;
}

/// `|IS_n| = Σ_k C(n,k)² k!`.
pub fn order_of_is(n: usize) -> u64 {
    let mut total = 0u64;
    for k in 0..=n as u64 {
        let c = binomial(n as u64, k);
        total += c * c * (1..=k).product::<u64>();
    }
    total
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}


#[cfg(test)]
pub(crate) mod strategies {
    use super::PartialInjection;
    use proptest::prelude::*;

    /// A random partial injection on `n` points.
    pub fn pinj(n: usize) -> impl Strategy<Value = PartialInjection> {
        (
            Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(perm, keep)| {
                let img: Vec<Option<usize>> = perm.iter().zip(&keep).map(|(&y, &k)| k.then_some(y)).collect();
                PartialInjection::new(n, &img).unwrap()
            })
    }

    /// `n`, a proper nonempty `A = {1..l}` shuffled onto random points, and
    /// three elements of `IS_n`.
    pub fn context_and_triple(max_n: usize) -> impl Strategy<Value = (usize, Vec<usize>, [PartialInjection; 3])> {
        (2..=max_n).prop_flat_map(|n| {
            (
                Just(n),
                (1..n, Just((1..=n).collect::<Vec<_>>()).prop_shuffle()).prop_map(|(l, pts)| pts[..l].to_vec()),
                [pinj(n), pinj(n), pinj(n)],
            )
        })
    }
}

#[cfg(test)]
mod props {
    use super::strategies::{context_and_triple, pinj};
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn composition_is_associative((_, _, [a, b, c]) in context_and_triple(8)) {
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn rank_never_grows((_, _, [a, b, _]) in context_and_triple(8)) {
            let ab = a.compose(&b).unwrap();
            prop_assert!(ab.rank() <= a.rank().min(b.rank()));
            prop_assert_eq!(ab.domain_mask() & !a.domain_mask(), 0);
            prop_assert_eq!(ab.image_mask() & !b.image_mask(), 0);
        }

        #[test]
        fn inverse_laws(b in (1..=MAX_N).prop_flat_map(pinj)) {
            let inv = b.inverse();
            prop_assert_eq!(b.compose(&inv).unwrap().compose(&b).unwrap(), b);
            prop_assert_eq!(b.compose(&inv).unwrap(), PartialInjection::identity_on(b.n(), b.domain()).unwrap());
            prop_assert_eq!(inv.inverse(), b);
        }

        #[test]
        fn serde_round_trip(b in (1..=MAX_N).prop_flat_map(pinj)) {
            let text = serde_json::to_string(&b).unwrap();
            let back: PartialInjection = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, b);
        }
    }
}
