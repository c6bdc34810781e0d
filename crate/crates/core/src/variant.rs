//! The sandwich semigroup `(IS_n, *)` with `β * γ = β α γ` for the
//! idempotent sandwich element `α = id_A`.

use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::pinj::{check_distinct, check_n, mask_points, order_of_is, PartialInjection, MAX_N};

/// Carrier size, sandwich domain `A` and the spare point `z ∉ A` used by chains.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawContext", into = "RawContext")]
pub struct SandwichContext {
    n: u8,
    a: u16,
    z: u8,
}

#[derive(Serialize, Deserialize)]
struct RawContext {
    n: usize,
    #[serde(rename = "A")]
    a: Vec<usize>,
    z: usize,
}

impl TryFrom<RawContext> for SandwichContext {
    type Error = Error;

    fn try_from(raw: RawContext) -> Result<Self> {
        SandwichContext::new(raw.n, &raw.a)?.with_z(raw.z)
    }
}

impl From<SandwichContext> for RawContext {
    fn from(ctx: SandwichContext) -> Self {
        RawContext {
            n: ctx.n(),
            a: ctx.a(),
            z: ctx.z(),
        }
    }
}

impl SandwichContext {
    /// Context with `z = min(N ∖ A)`.
    pub fn new(n: usize, a: &[usize]) -> Result<Self> {
        check_n(n)?;
        check_distinct(n, a)?;
        if a.is_empty() {
            return Err(Error::InvalidContext("A must be nonempty".into()));
        }
        if a.len() >= n {
            return Err(Error::InvalidContext(
                "A must be a proper subset of N (the sandwich element is not the identity)".into(),
            ));
        }
        let mask = a.iter().fold(0u16, |m, &x| m | 1 << (x - 1));
        let z = (1..=n).find(|x| mask & (1 << (x - 1)) == 0).expect("A is proper");
        Ok(SandwichContext {
            n: n as u8,
            a: mask,
            z: z as u8,
        })
    }

    /// Context with `A = {1, ..., l}`.
    pub fn standard(n: usize, l: usize) -> Result<Self> {
        Self::new(n, &(1..=l).collect::<Vec<_>>())
    }

    pub fn with_z(mut self, z: usize) -> Result<Self> {
        if z == 0 || z > self.n() {
            return Err(Error::PointOutOfRange { point: z, n: self.n() });
        }
        if self.in_a(z) {
            return Err(Error::InvalidContext(format!("z = {z} lies in A")));
        }
        self.z = z as u8;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// `A` in ascending order.
    pub fn a(&self) -> Vec<usize> {
        mask_points(self.a)
    }

    pub fn a_mask(&self) -> u16 {
        self.a
    }

    /// `l = |A| = rank(α)`.
    pub fn l(&self) -> usize {
        self.a.count_ones() as usize
    }

    pub fn z(&self) -> usize {
        self.z as usize
    }

    /// `N ∖ A` in ascending order.
    pub fn outside(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&x| !self.in_a(x)).collect()
    }

    #[inline]
    pub fn in_a(&self, x: usize) -> bool {
        (1..=MAX_N).contains(&x) && self.a & (1 << (x - 1)) != 0
    }

    /// The sandwich element `α = id_A`.
    pub fn alpha(&self) -> PartialInjection {
        PartialInjection::identity_on_mask(self.n(), self.a)
    }

    fn check(&self, b: &PartialInjection) -> Result<()> {
        if b.n() != self.n() {
            return Err(Error::CarrierMismatch {
                left: self.n(),
                right: b.n(),
            });
        }
        Ok(())
    }

    /// `β * γ`, i.e. `x ↦ γ(α(β(x)))`.
    pub fn sandwich(&self, b: &PartialInjection, g: &PartialInjection) -> Result<PartialInjection> {
        self.check(b)?;
        self.check(g)?;
        Ok(self.mul(b, g))
    }

    #[inline]
    pub(crate) fn mul(&self, b: &PartialInjection, g: &PartialInjection) -> PartialInjection {
        let n = self.n();
        let mut img = [0u8; MAX_N];
        let bt = b.table();
        let gt = g.table();
        for x in 0..n {
            let y = bt[x];
            if y != 0 && self.a & (1 << (y - 1)) != 0 {
                img[x] = gt[y as usize - 1];
            }
        }
        PartialInjection::from_table(n, img)
    }

    /// `β^{*s}`, the `s`-fold sandwich product.
    pub fn star_power(&self, b: &PartialInjection, s: usize) -> Result<PartialInjection> {
        self.check(b)?;
        if s == 0 {
            return Err(Error::ZeroExponent);
        }
        let mut acc = *b;
        for _ in 1..s {
            acc = self.mul(&acc, b);
        }
        Ok(acc)
    }

    /// The distinct *-powers `β, β^{*2}, ...` up to the first repetition.
    pub fn star_powers(&self, b: &PartialInjection) -> Vec<PartialInjection> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut p = *b;
        while seen.insert(p) {
            out.push(p);
            p = self.mul(&p, b);
        }
        out
    }

    /// Idempotent under `*`. Agrees with being a partial identity with domain inside `A`.
    pub fn is_variant_idempotent(&self, e: &PartialInjection) -> bool {
        e.n() == self.n() && self.mul(e, e) == *e
    }

    /// `ε_x = id_{A ∖ {x}}`.
    pub fn epsilon(&self, x: usize) -> Result<PartialInjection> {
        if !self.in_a(x) || x > self.n() {
            return Err(Error::PointNotInA(x));
        }
        Ok(PartialInjection::identity_on_mask(self.n(), self.a & !(1 << (x - 1))))
    }

    /// Writes an idempotent `ε ≠ α` as the list `[ε_x : x ∈ A ∖ dom(ε)]` in ascending `x`.
    ///
    /// Both the plain and the sandwich product of the returned factors equal `ε`;
    /// this is checked before returning.
    pub fn idempotent_factorization(&self, e: &PartialInjection) -> Result<Vec<PartialInjection>> {
        self.check(e)?;
        if !self.is_variant_idempotent(e) {
            return Err(Error::NotIdempotent);
        }
        if *e == self.alpha() {
            return Err(Error::EmptyFactorization);
        }
        let missing = self.a & !e.domain_mask();
        let factors: Vec<_> = mask_points(missing)
            .into_iter()
            .map(|x| self.epsilon(x))
            .collect::<Result<_>>()?;
        let plain = factors[1..].iter().fold(factors[0], |acc, f| acc.then(f));
        let star = factors[1..].iter().fold(factors[0], |acc, f| self.mul(&acc, f));
        if plain != *e || star != *e {
            return Err(Error::Internal(format!("factorization of {e} does not multiply back")));
        }
        Ok(factors)
    }

    /// Smallest `s ≥ 1` with `β^{*s}` idempotent, together with that idempotent.
    pub fn eventual_star_idempotent(&self, b: &PartialInjection) -> Result<(usize, PartialInjection)> {
        self.check(b)?;
        let guard = order_of_is(self.n()) as usize + 1;
        let mut p = *b;
        for s in 1..=guard {
            if self.mul(&p, &p) == p {
                return Ok((s, p));
            }
            p = self.mul(&p, b);
        }
        Err(Error::Internal("no idempotent power found".into()))
    }

    /// The chain `[x_1, ..., x_k]`: `x_i ↦ x_{i+1}`, `x_k ↦ z`, identity on the
    /// rest of `N ∖ {z}`.
    pub fn chain(&self, points: &[usize]) -> Result<PartialInjection> {
        if points.is_empty() {
            return Err(Error::EmptyChain);
        }
        check_distinct(self.n(), points)?;
        if let Some(&p) = points.iter().find(|&&p| !self.in_a(p)) {
            return Err(Error::PointNotInA(p));
        }
        let n = self.n();
        let z = self.z();
        let mut img = [0u8; MAX_N];
        for x in 1..=n {
            if x != z {
                img[x - 1] = x as u8;
            }
        }
        for (i, &x) in points.iter().enumerate() {
            img[x - 1] = points.get(i + 1).copied().unwrap_or(z) as u8;
        }
        Ok(PartialInjection::from_table(n, img))
    }

    /// Shorthand for the transposition `(x, y)` on this carrier.
    pub fn transposition(&self, x: usize, y: usize) -> Result<PartialInjection> {
        PartialInjection::cycle(self.n(), &[x, y])
    }
}

/// Witness `(π, τ)` with `π α₁ = α₂ τ`.
pub type VariantWitness = (PartialInjection, PartialInjection);

/// Decides whether `(IS_n, *_{α₁})` and `(IS_n, *_{α₂})` are isomorphic by
/// searching permutations with `π α₁ = α₂ τ`.
pub fn variants_isomorphic(a1: &PartialInjection, a2: &PartialInjection) -> Result<Option<VariantWitness>> {
    variants_isomorphic_with(a1, a2, &Limits::default())
}

pub fn variants_isomorphic_with(
    a1: &PartialInjection,
    a2: &PartialInjection,
    limits: &Limits,
) -> Result<Option<VariantWitness>> {
    let n = a1.n();
    if a2.n() != n {
        return Err(Error::CarrierMismatch { left: n, right: a2.n() });
    }
    if n > limits.max_perm_n {
        return Err(Error::BoundExceeded {
            what: "variant isomorphism search",
            n,
            bound: limits.max_perm_n,
        });
    }
    if a1.rank() != a2.rank() {
        return Ok(None);
    }
    let perms = permutations(n);
    // right-hand sides α₂ τ, keyed for lookup
    let rhs: std::collections::HashMap<PartialInjection, PartialInjection> =
        perms.iter().rev().map(|t| (a2.then(t), *t)).collect();
    for p in &perms {
        if let Some(t) = rhs.get(&p.then(a1)) {
            return Ok(Some((*p, *t)));
        }
    }
    Ok(None)
}

/// All of `S_n`, identity first.
pub fn permutations(n: usize) -> Vec<PartialInjection> {
    (1..=n)
        .permutations(n)
        .map(|img| {
            PartialInjection::from_pairs(n, img.into_iter().enumerate().map(|(i, y)| (i + 1, y)))
                .expect("a permutation is injective")
        })
        .collect()
}

/// The context `A = {1, ..., rank(α)}` whose variant is isomorphic to the
/// variant over `α`. Permutations are refused.
pub fn canonical_context(alpha: &PartialInjection) -> Result<SandwichContext> {
    canonical_context_with(alpha, &Limits::default())
}

pub fn canonical_context_with(alpha: &PartialInjection, limits: &Limits) -> Result<SandwichContext> {
    if alpha.is_permutation() {
        return Err(Error::PermutationSandwich);
    }
    if alpha.rank() == 0 {
        return Err(Error::InvalidContext(
            "the empty sandwich element gives the null semigroup, not a variant with A nonempty".into(),
        ));
    }
    let ctx = SandwichContext::standard(alpha.n(), alpha.rank())?;
    if alpha.n() <= limits.max_perm_n && variants_isomorphic_with(alpha, &ctx.alpha(), limits)?.is_none() {
        return Err(Error::Internal(format!("no witness for {alpha} ~ id_A")));
    }
    Ok(ctx)
}
