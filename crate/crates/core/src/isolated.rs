//! Subsemigroups of the variant, isolation predicates, root sets, and the
//! distinguished subsemigroups `C_A`, its complement, and `G(x)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pinj::{enumerate_all_with, ElementSet, PartialInjection};
use crate::variant::SandwichContext;

/// A nonempty subset of IS_n closed under the sandwich product of its context.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawSubsemigroup")]
pub struct Subsemigroup {
    ctx: SandwichContext,
    members: ElementSet,
}

#[derive(Deserialize)]
struct RawSubsemigroup {
    ctx: SandwichContext,
    members: ElementSet,
}

impl TryFrom<RawSubsemigroup> for Subsemigroup {
    type Error = Error;

    fn try_from(raw: RawSubsemigroup) -> Result<Self> {
        Subsemigroup::new(raw.ctx, raw.members)
    }
}

impl Subsemigroup {
    /// Validates closure and nonemptiness.
    pub fn new(ctx: SandwichContext, members: ElementSet) -> Result<Self> {
        if members.n() != ctx.n() {
            return Err(Error::CarrierMismatch {
                left: ctx.n(),
                right: members.n(),
            });
        }
        if members.is_empty() {
            return Err(Error::EmptySemigroup);
        }
        if !is_closed(&ctx, members.members()) {
            return Err(Error::NotClosed);
        }
        Ok(Subsemigroup { ctx, members })
    }

    pub(crate) fn new_unchecked(ctx: SandwichContext, members: BTreeSet<PartialInjection>) -> Self {
        debug_assert!(!members.is_empty());
        Subsemigroup {
            members: ElementSet::from_set_unchecked(ctx.n(), members),
            ctx,
        }
    }

    pub fn ctx(&self) -> &SandwichContext {
        &self.ctx
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, e: &PartialInjection) -> bool {
        self.members.contains(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &PartialInjection> + '_ {
        self.members.iter()
    }

    pub fn is_subset(&self, other: &Subsemigroup) -> bool {
        self.members.is_subset(&other.members)
    }
}

pub(crate) fn is_closed(ctx: &SandwichContext, set: &BTreeSet<PartialInjection>) -> bool {
    set.iter().all(|a| set.iter().all(|b| set.contains(&ctx.mul(a, b))))
}

/// The subsemigroup generated by `generators`, by worklist saturation.
pub fn closure(ctx: &SandwichContext, generators: &ElementSet) -> Result<Subsemigroup> {
    closure_of(ctx, generators.iter().copied())
}

pub fn closure_of<I>(ctx: &SandwichContext, generators: I) -> Result<Subsemigroup>
where
    I: IntoIterator<Item = PartialInjection>,
{
    let mut members: BTreeSet<PartialInjection> = BTreeSet::new();
    let mut order: Vec<PartialInjection> = Vec::new();
    for g in generators {
        if g.n() != ctx.n() {
            return Err(Error::CarrierMismatch {
                left: ctx.n(),
                right: g.n(),
            });
        }
        if members.insert(g) {
            order.push(g);
        }
    }
    if order.is_empty() {
        return Err(Error::EmptySemigroup);
    }
    // every pair (i, j) with i, j < done has been multiplied both ways
    let mut done = 0;
    while done < order.len() {
        let x = order[done];
        let mut fresh = Vec::new();
        for y in &order[..=done] {
            for p in [ctx.mul(&x, y), ctx.mul(y, &x)] {
                if members.insert(p) {
                    fresh.push(p);
                }
            }
        }
        order.extend(fresh);
        done += 1;
    }
    Ok(Subsemigroup::new_unchecked(*ctx, members))
}

/// First `x` (with the exponent `k`) such that `x^{*k} ∈ T` but `x ∉ T`.
pub fn isolation_violation(ctx: &SandwichContext, t: &Subsemigroup) -> Result<Option<(PartialInjection, usize)>> {
    isolation_violation_with(ctx, t, &Limits::default())
}

pub fn isolation_violation_with(
    ctx: &SandwichContext,
    t: &Subsemigroup,
    limits: &Limits,
) -> Result<Option<(PartialInjection, usize)>> {
    for x in &enumerate_all_with(ctx.n(), limits)? {
        if t.contains(x) {
            continue;
        }
        if let Some(k) = ctx.star_powers(x).iter().position(|p| t.contains(p)) {
            return Ok(Some((*x, k + 1)));
        }
    }
    Ok(None)
}

/// `x^{*k} ∈ T` for some `k ≥ 1` forces `x ∈ T`.
pub fn is_isolated(ctx: &SandwichContext, t: &Subsemigroup) -> Result<bool> {
    Ok(isolation_violation(ctx, t)?.is_none())
}

/// First pair `(β, γ)` with `β * γ ∈ T` while neither factor is in `T`.
pub fn complete_isolation_violation(
    ctx: &SandwichContext,
    t: &Subsemigroup,
) -> Result<Option<(PartialInjection, PartialInjection)>> {
    complete_isolation_violation_with(ctx, t, &Limits::default())
}

pub fn complete_isolation_violation_with(
    ctx: &SandwichContext,
    t: &Subsemigroup,
    limits: &Limits,
) -> Result<Option<(PartialInjection, PartialInjection)>> {
    let outside: Vec<PartialInjection> = enumerate_all_with(ctx.n(), limits)?
        .iter()
        .filter(|b| !t.contains(b))
        .copied()
        .collect();
    for b in &outside {
        for g in &outside {
            if t.contains(&ctx.mul(b, g)) {
                return Ok(Some((*b, *g)));
            }
        }
    }
    Ok(None)
}

/// `β * γ ∈ T` forces `β ∈ T` or `γ ∈ T`.
pub fn is_completely_isolated(ctx: &SandwichContext, t: &Subsemigroup) -> Result<bool> {
    Ok(complete_isolation_violation(ctx, t)?.is_none())
}

/// `√e`: every element some *-power of which equals the idempotent `e`.
pub fn sqrt(ctx: &SandwichContext, e: &PartialInjection) -> Result<ElementSet> {
    sqrt_with(ctx, e, &Limits::default())
}

pub fn sqrt_with(ctx: &SandwichContext, e: &PartialInjection, limits: &Limits) -> Result<ElementSet> {
    if !ctx.is_variant_idempotent(e) {
        return Err(Error::NotIdempotent);
    }
    let roots = enumerate_all_with(ctx.n(), limits)?
        .iter()
        .filter(|b| ctx.star_powers(b).contains(e))
        .copied()
        .collect();
    Ok(ElementSet::from_set_unchecked(ctx.n(), roots))
}

/// Elements that map `A` bijectively onto itself.
pub fn in_c_a(ctx: &SandwichContext, b: &PartialInjection) -> bool {
    ctx.a().into_iter().all(|x| b.get(x).is_some_and(|y| ctx.in_a(y)))
}

fn filtered<F>(ctx: &SandwichContext, limits: &Limits, keep: F) -> Result<BTreeSet<PartialInjection>>
where
    F: Fn(&PartialInjection) -> bool,
{
    Ok(enumerate_all_with(ctx.n(), limits)?
        .iter()
        .filter(|b| keep(b))
        .copied()
        .collect())
}

/// `C_A = {β : β(A) = A}`.
pub fn build_c_a(ctx: &SandwichContext) -> Result<Subsemigroup> {
    build_c_a_with(ctx, &Limits::default())
}

pub fn build_c_a_with(ctx: &SandwichContext, limits: &Limits) -> Result<Subsemigroup> {
    Ok(Subsemigroup::new_unchecked(
        *ctx,
        filtered(ctx, limits, |b| in_c_a(ctx, b))?,
    ))
}

/// `(IS_n, *) ∖ C_A`.
pub fn build_complement(ctx: &SandwichContext, limits: &Limits) -> Result<Subsemigroup> {
    Ok(Subsemigroup::new_unchecked(
        *ctx,
        filtered(ctx, limits, |b| !in_c_a(ctx, b))?,
    ))
}

/// The whole variant.
pub fn build_full(ctx: &SandwichContext, limits: &Limits) -> Result<Subsemigroup> {
    Ok(Subsemigroup::new_unchecked(*ctx, filtered(ctx, limits, |_| true)?))
}

/// Membership in `G(x)`: `x` is undefined or leaves `A`, and every other
/// point of `A` is defined and lands in `A ∖ {x}`.
pub fn in_g(ctx: &SandwichContext, x: usize, b: &PartialInjection) -> bool {
    let x_ok = b.get(x).is_none_or(|y| !ctx.in_a(y));
    x_ok && ctx
        .a()
        .into_iter()
        .filter(|&y| y != x)
        .all(|y| b.get(y).is_some_and(|w| w != x && ctx.in_a(w)))
}

pub fn build_g(ctx: &SandwichContext, x: usize) -> Result<Subsemigroup> {
    build_g_with(ctx, x, &Limits::default())
}

pub fn build_g_with(ctx: &SandwichContext, x: usize, limits: &Limits) -> Result<Subsemigroup> {
    if !ctx.in_a(x) || x > ctx.n() {
        return Err(Error::PointNotInA(x));
    }
    Ok(Subsemigroup::new_unchecked(
        *ctx,
        filtered(ctx, limits, |b| in_g(ctx, x, b))?,
    ))
}

/// Which distinguished subsemigroup a classified set is.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Named {
    Full,
    CA,
    Complement,
    G(usize),
}

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Named::Full => f.write_str("full"),
            Named::CA => f.write_str("C_A"),
            Named::Complement => f.write_str("complement"),
            Named::G(x) => write!(f, "G({x})"),
        }
    }
}

impl Serialize for Named {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NamedSubsemigroup {
    pub name: Named,
    pub semigroup: Subsemigroup,
}

/// `C_A`, its complement and the full semigroup, each checked completely isolated.
pub fn classify_completely_isolated(ctx: &SandwichContext) -> Result<Vec<NamedSubsemigroup>> {
    classify_completely_isolated_with(ctx, &Limits::default())
}

pub fn classify_completely_isolated_with(ctx: &SandwichContext, limits: &Limits) -> Result<Vec<NamedSubsemigroup>> {
    let list = vec![
        NamedSubsemigroup {
            name: Named::CA,
            semigroup: build_c_a_with(ctx, limits)?,
        },
        NamedSubsemigroup {
            name: Named::Complement,
            semigroup: build_complement(ctx, limits)?,
        },
        NamedSubsemigroup {
            name: Named::Full,
            semigroup: build_full(ctx, limits)?,
        },
    ];
    for item in &list {
        if let Some((b, g)) = complete_isolation_violation_with(ctx, &item.semigroup, limits)? {
            return Err(Error::Internal(format!(
                "{} is not completely isolated: {b} * {g}",
                item.name
            )));
        }
    }
    Ok(list)
}

/// The isolated subsemigroups: the three completely isolated ones, plus
/// `G(x)` for every `x ∈ A` when `|A| ≥ 2`. Each is checked isolated.
pub fn classify_isolated(ctx: &SandwichContext) -> Result<Vec<NamedSubsemigroup>> {
    classify_isolated_with(ctx, &Limits::default())
}

pub fn classify_isolated_with(ctx: &SandwichContext, limits: &Limits) -> Result<Vec<NamedSubsemigroup>> {
    let mut list = vec![
        NamedSubsemigroup {
            name: Named::Full,
            semigroup: build_full(ctx, limits)?,
        },
        NamedSubsemigroup {
            name: Named::CA,
            semigroup: build_c_a_with(ctx, limits)?,
        },
        NamedSubsemigroup {
            name: Named::Complement,
            semigroup: build_complement(ctx, limits)?,
        },
    ];
    if ctx.l() >= 2 {
        for x in ctx.a() {
            list.push(NamedSubsemigroup {
                name: Named::G(x),
                semigroup: build_g_with(ctx, x, limits)?,
            });
        }
    }
    for item in &list {
        if let Some((x, k)) = isolation_violation_with(ctx, &item.semigroup, limits)? {
            return Err(Error::Internal(format!(
                "{} is not isolated: {x} has its power {k} inside",
                item.name
            )));
        }
    }
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi(n: usize, pairs: &[(usize, usize)]) -> PartialInjection {
        PartialInjection::from_pairs(n, pairs.iter().copied()).unwrap()
    }

    fn ctx(n: usize, a: &[usize]) -> SandwichContext {
        SandwichContext::new(n, a).unwrap()
    }

    // Naive saturation: multiply everything by everything until nothing changes.
    fn closure_oracle(ctx: &SandwichContext, gens: &[PartialInjection]) -> BTreeSet<PartialInjection> {
        let mut set: BTreeSet<_> = gens.iter().copied().collect();
        loop {
            let before = set.len();
            let snapshot: Vec<_> = set.iter().copied().collect();
            for a in &snapshot {
                for b in &snapshot {
                    set.insert(ctx.mul(a, b));
                }
            }
            if set.len() == before {
                return set;
            }
        }
    }

    #[test]
    fn closure_examples() {
        let c = ctx(3, &[1, 2]);
        let s = closure_of(&c, [c.alpha()]).unwrap();
        assert_eq!(s.to_vec(), vec![c.alpha()]);
        let e = PartialInjection::empty(3).unwrap();
        assert_eq!(closure_of(&c, [e]).unwrap().to_vec(), vec![e]);

        let c2 = ctx(2, &[1]);
        let swap = PartialInjection::cycle(2, &[1, 2]).unwrap();
        let got: BTreeSet<_> = closure_of(&c2, [swap]).unwrap().iter().copied().collect();
        let expected: BTreeSet<_> = [PartialInjection::empty(2).unwrap(), pi(2, &[(2, 2)]), swap]
            .into_iter()
            .collect();
        assert_eq!(closure_oracle(&c2, &[swap]), expected);
        assert_eq!(got, expected);
        assert!(closure_of(&c2, []).is_err());
    }

    impl Subsemigroup {
        fn to_vec(&self) -> Vec<PartialInjection> {
            self.members.to_vec()
        }
    }

    #[test]
    fn closure_agrees_with_oracle_on_pairs() {
        let c = ctx(3, &[1]);
        let all = crate::pinj::enumerate_all(3).unwrap().to_vec();
        for a in all.iter().step_by(3) {
            for b in all.iter().step_by(5) {
                let fast: BTreeSet<_> = closure_of(&c, [*a, *b]).unwrap().iter().copied().collect();
                assert_eq!(fast, closure_oracle(&c, &[*a, *b]));
            }
        }
    }

    #[test]
    fn subsemigroup_validation() {
        let c = ctx(2, &[1]);
        let swap = PartialInjection::cycle(2, &[1, 2]).unwrap();
        let not_closed = ElementSet::from_elements(2, [swap]).unwrap();
        assert_eq!(Subsemigroup::new(c, not_closed), Err(Error::NotClosed));
        assert_eq!(
            Subsemigroup::new(c, ElementSet::new(2).unwrap()),
            Err(Error::EmptySemigroup)
        );
    }

    #[test]
    fn isolation_examples() {
        let c = ctx(3, &[1, 2]);
        let limits = Limits::default();
        assert!(is_isolated(&c, &build_full(&c, &limits).unwrap()).unwrap());
        let alpha_only = closure_of(&c, [c.alpha()]).unwrap();
        let (x, k) = isolation_violation(&c, &alpha_only).unwrap().unwrap();
        assert!(!alpha_only.contains(&x));
        assert_eq!(c.star_power(&x, k).unwrap(), c.alpha());
        assert!(ctx_has_swap_witness(&c, &alpha_only));
        assert!(is_isolated(&c, &build_g(&c, 1).unwrap()).unwrap());
    }

    fn ctx_has_swap_witness(c: &SandwichContext, t: &Subsemigroup) -> bool {
        let swap = PartialInjection::cycle(3, &[1, 2]).unwrap();
        c.star_power(&swap, 2).unwrap() == c.alpha() && !t.contains(&swap)
    }

    #[test]
    fn complete_isolation_examples() {
        let c = ctx(3, &[1, 2]);
        let limits = Limits::default();
        assert!(is_completely_isolated(&c, &build_full(&c, &limits).unwrap()).unwrap());
        assert!(is_completely_isolated(&c, &build_c_a(&c).unwrap()).unwrap());
        let g1 = build_g(&c, 1).unwrap();
        let (b, g) = complete_isolation_violation(&c, &g1).unwrap().unwrap();
        assert!(g1.contains(&c.mul(&b, &g)) && !g1.contains(&b) && !g1.contains(&g));
    }

    #[test]
    fn c_a_and_g_sizes() {
        assert_eq!(build_c_a(&ctx(3, &[1, 2])).unwrap().len(), 4);
        assert_eq!(build_c_a(&ctx(3, &[1])).unwrap().len(), 7);
        let c = ctx(3, &[1, 2]);
        let g1 = build_g(&c, 1).unwrap();
        assert_eq!(g1.len(), 5);
        assert!(g1.contains(&c.epsilon(1).unwrap()));
        assert!(build_c_a(&c).unwrap().contains(&c.alpha()));
        assert_eq!(build_g(&c, 3), Err(Error::PointNotInA(3)));
        for n in 2..=4 {
            let c = ctx(n, &[1]);
            let limits = Limits::default();
            assert_eq!(
                build_g(&c, 1).unwrap().members(),
                build_complement(&c, &limits).unwrap().members()
            );
        }
    }

    #[test]
    fn built_sets_are_closed() {
        let limits = Limits::default();
        for (n, a) in [(3, vec![1]), (3, vec![1, 2]), (4, vec![1, 3])] {
            let c = ctx(n, &a);
            let mut sets = vec![
                build_c_a(&c).unwrap(),
                build_complement(&c, &limits).unwrap(),
                build_full(&c, &limits).unwrap(),
            ];
            for x in c.a() {
                sets.push(build_g(&c, x).unwrap());
            }
            for s in sets {
                assert!(is_closed(&c, s.members().members()));
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let c = ctx(3, &[1, 2]);
        let r = sqrt(&c, &c.alpha()).unwrap();
        assert!(r.contains(&c.alpha()));
        assert_eq!(&r, build_c_a(&c).unwrap().members());
        assert_eq!(
            &sqrt(&c, &c.epsilon(2).unwrap()).unwrap(),
            build_g(&c, 2).unwrap().members()
        );
        assert_eq!(sqrt(&c, &pi(3, &[(1, 2)])), Err(Error::NotIdempotent));
    }

    #[test]
    fn classification_counts() {
        let c = ctx(2, &[1]);
        let sizes: Vec<_> = classify_completely_isolated(&c)
            .unwrap()
            .iter()
            .map(|s| s.semigroup.len())
            .collect();
        assert_eq!(sizes, vec![2, 5, 7]);
        let names: Vec<_> = classify_isolated(&ctx(3, &[1, 2]))
            .unwrap()
            .iter()
            .map(|s| s.name.to_string())
            .collect();
        assert_eq!(names, ["full", "C_A", "complement", "G(1)", "G(2)"]);
        assert_eq!(classify_isolated(&ctx(3, &[2])).unwrap().len(), 3);
    }
}
