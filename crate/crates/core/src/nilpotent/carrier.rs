//! The doubled carrier `M = IN ∪ A ∪ OUT`, the lifts of points into it and the
//! embedding of the variant into the symmetric inverse semigroup on `M`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pinj::{PartialInjection, MAX_N};
use crate::variant::SandwichContext;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Tag {
    /// Input copy of `N ∖ A`.
    In,
    A,
    /// Output (primed) copy of `N ∖ A`.
    Out,
}

/// A point of `M`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MPoint {
    pub tag: Tag,
    pub value: u8,
}

impl MPoint {
    pub fn new(ctx: &SandwichContext, tag: Tag, value: usize) -> Result<Self> {
        if value == 0 || value > ctx.n() {
            return Err(Error::PointOutOfRange {
                point: value,
                n: ctx.n(),
            });
        }
        if (tag == Tag::A) != ctx.in_a(value) {
            return Err(Error::InvalidOrder(format!(
                "point {value} cannot carry tag {tag:?} for A = {:?}",
                ctx.a()
            )));
        }
        Ok(MPoint {
            tag,
            value: value as u8,
        })
    }

    pub fn value(&self) -> usize {
        self.value as usize
    }
}

impl fmt::Display for MPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.tag {
            Tag::In => "IN",
            Tag::A => "A",
            Tag::Out => "OUT",
        };
        write!(f, "{tag}-{}", self.value)
    }
}

impl fmt::Debug for MPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tag, value) = s
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("bad point `{s}`")))?;
        let tag = match tag {
            "IN" => Tag::In,
            "A" => Tag::A,
            "OUT" => Tag::Out,
            _ => return Err(Error::Parse(format!("bad tag in `{s}`"))),
        };
        let value: u8 = value.parse().map_err(|_| Error::Parse(format!("bad value in `{s}`")))?;
        Ok(MPoint { tag, value })
    }
}

impl Serialize for MPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `x ∈ A` stays put; `x ∉ A` goes to the input copy.
pub fn lift_in(ctx: &SandwichContext, x: usize) -> MPoint {
    let tag = if ctx.in_a(x) { Tag::A } else { Tag::In };
    MPoint { tag, value: x as u8 }
}

/// `y ∈ A` stays put; `y ∉ A` goes to the output copy.
pub fn lift_out(ctx: &SandwichContext, y: usize) -> MPoint {
    let tag = if ctx.in_a(y) { Tag::A } else { Tag::Out };
    MPoint { tag, value: y as u8 }
}

/// The points of `M` in canonical order, with index tables for both lifts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Carrier {
    points: Vec<MPoint>,
    in_idx: [u8; MAX_N + 1],
    out_idx: [u8; MAX_N + 1],
}

impl Carrier {
    pub fn new(ctx: &SandwichContext) -> Self {
        let outside = ctx.outside();
        let mut points: Vec<MPoint> = outside
            .iter()
            .map(|&x| MPoint {
                tag: Tag::In,
                value: x as u8,
            })
            .collect();
        points.extend(ctx.a().into_iter().map(|x| MPoint {
            tag: Tag::A,
            value: x as u8,
        }));
        points.extend(outside.iter().map(|&x| MPoint {
            tag: Tag::Out,
            value: x as u8,
        }));
        let mut in_idx = [u8::MAX; MAX_N + 1];
        let mut out_idx = [u8::MAX; MAX_N + 1];
        for (i, p) in points.iter().enumerate() {
            match p.tag {
                Tag::In => in_idx[p.value()] = i as u8,
                Tag::Out => out_idx[p.value()] = i as u8,
                Tag::A => {
                    in_idx[p.value()] = i as u8;
                    out_idx[p.value()] = i as u8;
                }
            }
        }
        Carrier {
            points,
            in_idx,
            out_idx,
        }
    }

    pub fn points(&self) -> &[MPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index(&self, p: &MPoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    #[inline]
    pub(crate) fn in_index(&self, x: usize) -> usize {
        self.in_idx[x] as usize
    }

    #[inline]
    pub(crate) fn out_index(&self, y: usize) -> usize {
        self.out_idx[y] as usize
    }

    pub(crate) fn mask_of(&self, tag: Tag) -> u32 {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.tag == tag)
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}

/// A partial injection on `M`, composed left to right like [`PartialInjection`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct MPartialMap(BTreeMap<MPoint, MPoint>);

impl MPartialMap {
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MPoint, MPoint)>,
    {
        let mut map = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (a, b) in pairs {
            if map.insert(a, b).is_some() {
                return Err(Error::Parse(format!("{a} mapped twice")));
            }
            if !seen.insert(b) {
                return Err(Error::Parse(format!("{b} hit twice")));
            }
        }
        Ok(MPartialMap(map))
    }

    pub fn get(&self, p: &MPoint) -> Option<MPoint> {
        self.0.get(p).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (MPoint, MPoint)> + '_ {
        self.0.iter().map(|(a, b)| (*a, *b))
    }

    pub fn compose(&self, other: &MPartialMap) -> MPartialMap {
        MPartialMap(
            self.0
                .iter()
                .filter_map(|(a, b)| other.0.get(b).map(|c| (*a, *c)))
                .collect(),
        )
    }
}

/// `f(β)`: sends `lift_in(x)` to `lift_out(β(x))` for every `x ∈ dom(β)`.
pub fn embed_f(ctx: &SandwichContext, b: &PartialInjection) -> MPartialMap {
    MPartialMap(b.pairs().map(|(x, y)| (lift_in(ctx, x), lift_out(ctx, y))).collect())
}

/// Whether `γ` lies in the image of `f`: domain inside `IN ∪ A`, image inside `A ∪ OUT`.
pub fn in_image_of_f(g: &MPartialMap) -> bool {
    g.pairs().all(|(a, b)| a.tag != Tag::Out && b.tag != Tag::In)
}

/// Inverse of [`embed_f`] on its image.
pub fn pull_back(ctx: &SandwichContext, g: &MPartialMap) -> Result<PartialInjection> {
    if !in_image_of_f(g) {
        return Err(Error::Parse("map is outside the image of f".into()));
    }
    let b = PartialInjection::from_pairs(ctx.n(), g.pairs().map(|(a, b)| (a.value(), b.value())))?;
    if embed_f(ctx, &b) != *g {
        return Err(Error::Parse("map does not use the lifts of its points".into()));
    }
    Ok(b)
}
