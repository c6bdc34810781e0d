//! Verification harness: each registered check runs an exhaustive (or
//! explicitly bounded) computation for one context and produces a report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::iso::{find_isomorphism, Orientation};
use crate::isolated::{
    build_c_a_with, build_complement, build_g_with, classify_completely_isolated_with, classify_isolated_with,
    closure_of, complete_isolation_violation_with, in_c_a, is_closed, isolation_violation_with, sqrt_with,
    Subsemigroup,
};
use crate::limits::Limits;
use crate::nilpotent::{
    complete_order, embed_f, enumerate_orders, enumerate_partitions, in_image_of_f, in_ord_k, lambda_of,
    maximal_nilpotents_with, mon_over, nilpotency_degree, ord_of_partition, pull_back, t_of_partition_over,
    type_of_with, Carrier, MPartialMap, StrictOrder, Tag,
};
use crate::pinj::{enumerate_all_with, PartialInjection};
use crate::variant::{canonical_context_with, variants_isomorphic_with, SandwichContext};

/// The registry of checks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum TheoremId {
    Prop1,
    RemarkId,
    ThmCisolDirect,
    ThmCisolExhaustive,
    LemmaGx,
    ThmIsol,
    PropMono,
    PropGalois,
    PropDegree,
    ThmMaxnil,
    CorollaryBound,
    PropTypes,
    IsoCriterion,
}

impl TheoremId {
    pub const ALL: [TheoremId; 13] = [
        TheoremId::Prop1,
        TheoremId::RemarkId,
        TheoremId::ThmCisolDirect,
        TheoremId::ThmCisolExhaustive,
        TheoremId::LemmaGx,
        TheoremId::ThmIsol,
        TheoremId::PropMono,
        TheoremId::PropGalois,
        TheoremId::PropDegree,
        TheoremId::ThmMaxnil,
        TheoremId::CorollaryBound,
        TheoremId::PropTypes,
        TheoremId::IsoCriterion,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::Prop1 => "prop1",
            TheoremId::RemarkId => "remark-id",
            TheoremId::ThmCisolDirect => "thm-cisol-direct",
            TheoremId::ThmCisolExhaustive => "thm-cisol-exhaustive",
            TheoremId::LemmaGx => "lemma-Gx",
            TheoremId::ThmIsol => "thm-isol",
            TheoremId::PropMono => "prop-mono",
            TheoremId::PropGalois => "prop-galois",
            TheoremId::PropDegree => "prop-degree",
            TheoremId::ThmMaxnil => "thm-maxnil",
            TheoremId::CorollaryBound => "corollary-bound",
            TheoremId::PropTypes => "prop-types",
            TheoremId::IsoCriterion => "iso-criterion",
        }
    }

    /// One-line statement of what the check establishes.
    pub fn label(&self) -> &'static str {
        match self {
            TheoremId::Prop1 => "variant idempotents are exactly the partial identities id_D with D inside A",
            TheoremId::RemarkId => {
                "every variant idempotent other than alpha is the plain and the sandwich product of its eps_x factors"
            }
            TheoremId::ThmCisolDirect => "C_A, its complement and the whole variant are completely isolated",
            TheoremId::ThmCisolExhaustive => "no other subsemigroup is completely isolated",
            TheoremId::LemmaGx => "G(x) is the root set of eps_x",
            TheoremId::ThmIsol => {
                "the isolated subsemigroups are the three completely isolated ones plus G(x) when rank(alpha) >= 2"
            }
            TheoremId::PropMono => "f embeds the variant into IS(M) with image {dom inside IN+A, im inside A+OUT}",
            TheoremId::PropGalois => {
                "Mon and Lambda are monotone and form a Galois-type correspondence between Ord(M) and Nil"
            }
            TheoremId::PropDegree => "a nilpotent S of degree k has Lambda_S in Ord_k but not Ord_(k-1)",
            TheoremId::ThmMaxnil => {
                "the maximal members of Nil_k are exactly the T(M_1..M_k), one per ordered A-partition"
            }
            TheoremId::CorollaryBound => "nilpotency degree never exceeds rank(alpha)+2 and the bound is attained",
            TheoremId::PropTypes => "maximal nilpotents are (anti-)isomorphic according to their type vectors",
            TheoremId::IsoCriterion => {
                "variants over alpha1, alpha2 are isomorphic iff pi alpha1 = alpha2 tau, iff the ranks agree"
            }
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    BoundedPass,
}

impl Status {
    pub fn is_ok(&self) -> bool {
        !matches!(self, Status::Fail)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::BoundedPass => "bounded-pass",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub theorem_id: TheoremId,
    pub label: &'static str,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    pub status: Status,
    pub detail: String,
    pub bound: Option<String>,
    pub counterexample: Option<String>,
    /// Excluded from exports so that reports are byte-stable.
    #[serde(skip)]
    pub wall_ms: u128,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub limits: Limits,
    pub seed: u64,
    /// Random pairs checked by `prop-mono` above the exhaustive bound.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            limits: Limits::default(),
            seed: 0x5eed,
            samples: 100_000,
        }
    }
}

struct Outcome {
    status: Status,
    detail: String,
    bound: Option<String>,
    counterexample: Option<String>,
}

impl Outcome {
    fn pass(detail: impl Into<String>) -> Self {
        Outcome {
            status: Status::Pass,
            detail: detail.into(),
            bound: None,
            counterexample: None,
        }
    }

    fn bounded(detail: impl Into<String>, bound: impl Into<String>) -> Self {
        Outcome {
            status: Status::BoundedPass,
            detail: detail.into(),
            bound: Some(bound.into()),
            counterexample: None,
        }
    }

    fn fail(detail: impl Into<String>, witness: impl Into<String>) -> Self {
        Outcome {
            status: Status::Fail,
            detail: detail.into(),
            bound: None,
            counterexample: Some(witness.into()),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("witness serializes")
}

macro_rules! ensure {
    ($cond:expr, $detail:expr, $witness:expr) => {
        if !$cond {
            return Ok(Outcome::fail($detail, $witness));
        }
    };
}

fn require(n: usize, bound: usize, what: &'static str) -> Result<()> {
    if n > bound {
        return Err(Error::BoundExceeded { what, n, bound });
    }
    Ok(())
}

/// Runs one registered check for one context.
pub fn run_verify(id: TheoremId, ctx: &SandwichContext, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let outcome = match id {
        TheoremId::Prop1 => check_prop1(ctx, opts),
        TheoremId::RemarkId => check_remark(ctx, opts),
        TheoremId::ThmCisolDirect => check_cisol_direct(ctx, opts),
        TheoremId::ThmCisolExhaustive => check_cisol_exhaustive(ctx, opts),
        TheoremId::LemmaGx => check_lemma_g(ctx, opts),
        TheoremId::ThmIsol => check_isol(ctx, opts),
        TheoremId::PropMono => check_embedding(ctx, opts),
        TheoremId::PropGalois => check_galois(ctx, opts),
        TheoremId::PropDegree => check_degree(ctx, opts),
        TheoremId::ThmMaxnil => check_maxnil(ctx, opts),
        TheoremId::CorollaryBound => check_degree_bound(ctx, opts),
        TheoremId::PropTypes => check_types(ctx, opts),
        TheoremId::IsoCriterion => check_iso_criterion(ctx, opts),
    }?;
    Ok(VerificationReport {
        theorem_id: id,
        label: id.label(),
        n: ctx.n(),
        a: ctx.a(),
        status: outcome.status,
        detail: outcome.detail,
        bound: outcome.bound,
        counterexample: outcome.counterexample,
        wall_ms: start.elapsed().as_millis(),
    })
}

/// Runs every registered check. Checks refused by a bound come back as `Err`.
pub fn run_all(ctx: &SandwichContext, opts: &VerifyOptions) -> Vec<(TheoremId, Result<VerificationReport>)> {
    TheoremId::ALL
        .into_iter()
        .map(|id| (id, run_verify(id, ctx, opts)))
        .collect()
}

fn all_elements(ctx: &SandwichContext, limits: &Limits) -> Result<Vec<PartialInjection>> {
    Ok(enumerate_all_with(ctx.n(), limits)?.to_vec())
}

fn check_prop1(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let all = all_elements(ctx, &opts.limits)?;
    let mut idempotents = BTreeSet::new();
    for b in &all {
        let by_product = ctx.mul(b, b) == *b;
        let by_criterion = b.is_idempotent_plain() && b.domain_mask() & !ctx.a_mask() == 0;
        ensure!(
            by_product == by_criterion,
            "brute force and criterion disagree",
            json(b)
        );
        ensure!(
            by_product == ctx.is_variant_idempotent(b),
            "is_variant_idempotent disagrees",
            json(b)
        );
        if by_product {
            idempotents.insert(*b);
        }
    }
    let expected: BTreeSet<PartialInjection> = (0u16..1 << ctx.n())
        .filter(|d| d & !ctx.a_mask() == 0)
        .map(|d| PartialInjection::identity_on(ctx.n(), crate::pinj::mask_points(d)))
        .collect::<Result<_>>()?;
    ensure!(
        idempotents == expected,
        "idempotents are not the id_D, D inside A",
        json(&idempotents)
    );
    ensure!(
        idempotents.len() == 1 << ctx.l(),
        "idempotent count differs from 2^l",
        idempotents.len().to_string()
    );
    Ok(Outcome::pass(format!(
        "{} elements scanned, {} idempotents = 2^{}",
        all.len(),
        idempotents.len(),
        ctx.l()
    )))
}

fn check_remark(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let all = all_elements(ctx, &opts.limits)?;
    let alpha = ctx.alpha();
    let mut count = 0;
    for e in all.iter().filter(|e| ctx.is_variant_idempotent(e) && **e != alpha) {
        let factors = match ctx.idempotent_factorization(e) {
            Ok(f) => f,
            Err(err) => return Ok(Outcome::fail(format!("factorization failed: {err}"), json(e))),
        };
        let expected_len = (ctx.a_mask() & !e.domain_mask()).count_ones() as usize;
        ensure!(factors.len() == expected_len, "wrong number of factors", json(e));
        let plain = factors[1..].iter().try_fold(factors[0], |acc, f| acc.compose(f))?;
        let star = factors[1..]
            .iter()
            .try_fold(factors[0], |acc, f| ctx.sandwich(&acc, f))?;
        ensure!(plain == *e, "plain product differs", json(&(e, plain)));
        ensure!(star == *e, "sandwich product differs", json(&(e, star)));
        count += 1;
    }
    ensure!(
        matches!(ctx.idempotent_factorization(&alpha), Err(Error::EmptyFactorization)),
        "alpha must be refused",
        json(&alpha)
    );
    Ok(Outcome::pass(format!("{count} idempotents factorized both ways")))
}

fn check_cisol_direct(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let limits = &opts.limits;
    let listed = classify_completely_isolated_with(ctx, limits);
    let listed = match listed {
        Ok(l) => l,
        Err(Error::Internal(msg)) => return Ok(Outcome::fail("listed set not completely isolated", msg)),
        Err(e) => return Err(e),
    };
    for item in &listed {
        ensure!(
            is_closed(ctx, item.semigroup.members().members()),
            "listed set is not closed",
            item.name.to_string()
        );
        if let Some((b, g)) = complete_isolation_violation_with(ctx, &item.semigroup, limits)? {
            return Ok(Outcome::fail(format!("{} violated", item.name), json(&(b, g))));
        }
    }
    // power and conjugation identities behind the classification
    let all = all_elements(ctx, limits)?;
    let alpha = ctx.alpha();
    for b in &all {
        if in_c_a(ctx, b) {
            ensure!(
                ctx.star_powers(b).contains(&alpha),
                "element of C_A without alpha among its powers",
                json(b)
            );
        } else {
            let (_, e) = ctx.eventual_star_idempotent(b)?;
            ensure!(
                e.rank() < ctx.l(),
                "element outside C_A with idempotent power of rank l",
                json(b)
            );
        }
    }
    for x in ctx.a() {
        for y in ctx.a().into_iter().filter(|&y| y != x) {
            let t = ctx.transposition(x, y)?;
            let conj = ctx.mul(&ctx.mul(&t, &ctx.epsilon(y)?), &t);
            ensure!(
                conj == ctx.epsilon(x)?,
                "eps_x != (x,y)*eps_y*(x,y)",
                format!("x={x}, y={y}")
            );
        }
    }
    let sizes: Vec<String> = listed
        .iter()
        .map(|s| format!("{}:{}", s.name, s.semigroup.len()))
        .collect();
    Ok(Outcome::pass(format!("completely isolated: {}", sizes.join(", "))))
}

/// Every `{a}` and `{a, b}` closure, deduplicated.
fn small_closures(ctx: &SandwichContext, all: &[PartialInjection]) -> Result<Vec<Subsemigroup>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i..] {
            let s = closure_of(ctx, [*a, *b])?;
            if seen.insert(s.members().clone()) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Every nonempty `*`-closed subset of IS_n, by powerset scan.
fn all_subsemigroups(ctx: &SandwichContext, all: &[PartialInjection]) -> Vec<BTreeSet<PartialInjection>> {
    let mut out = Vec::new();
    for mask in 1u64..1 << all.len() {
        let set: BTreeSet<PartialInjection> = all
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, e)| *e)
            .collect();
        if is_closed(ctx, &set) {
            out.push(set);
        }
    }
    out
}

fn check_cisol_exhaustive(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let limits = &opts.limits;
    require(
        ctx.n(),
        limits.max_pair_n,
        "search for completely isolated subsemigroups",
    )?;
    let all = all_elements(ctx, limits)?;
    let listed: BTreeSet<_> = classify_completely_isolated_with(ctx, limits)?
        .into_iter()
        .map(|s| s.semigroup.members().members().clone())
        .collect();
    if ctx.n() <= limits.max_powerset_n {
        let mut found = BTreeSet::new();
        let subsemigroups = all_subsemigroups(ctx, &all);
        for set in &subsemigroups {
            let s = Subsemigroup::new_unchecked(*ctx, set.clone());
            if complete_isolation_violation_with(ctx, &s, limits)?.is_none() {
                found.insert(set.clone());
            }
        }
        ensure!(
            found == listed,
            "completely isolated subsemigroups differ from the list",
            json(&found)
        );
        return Ok(Outcome::pass(format!(
            "{} subsets scanned, {} subsemigroups, {} completely isolated",
            1u64 << all.len(),
            subsemigroups.len(),
            found.len()
        )));
    }
    let closures = small_closures(ctx, &all)?;
    let mut hits = 0;
    for s in &closures {
        if complete_isolation_violation_with(ctx, s, limits)?.is_none() {
            ensure!(
                listed.contains(s.members().members()),
                "unlisted completely isolated subsemigroup",
                json(s.members())
            );
            hits += 1;
        }
    }
    Ok(Outcome::bounded(
        format!(
            "{} distinct closures, {hits} completely isolated, all listed",
            closures.len()
        ),
        "subsemigroups generated by at most 2 elements",
    ))
}

fn check_lemma_g(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let limits = &opts.limits;
    let alpha = ctx.alpha();
    let c_a = build_c_a_with(ctx, limits)?;
    let root_alpha = sqrt_with(ctx, &alpha, limits)?;
    ensure!(&root_alpha == c_a.members(), "sqrt(alpha) != C_A", json(&root_alpha));
    let isolated = classify_isolated_with(ctx, limits)?;
    let mut roots = vec![(alpha, root_alpha)];
    for x in ctx.a() {
        let g = build_g_with(ctx, x, limits)?;
        let eps = ctx.epsilon(x)?;
        let root = sqrt_with(ctx, &eps, limits)?;
        ensure!(&root == g.members(), "sqrt(eps_x) != G(x)", format!("x={x}"));
        ensure!(g.contains(&eps), "eps_x not in G(x)", format!("x={x}"));
        ensure!(
            is_closed(ctx, g.members().members()),
            "G(x) not closed",
            format!("x={x}")
        );
        roots.push((eps, root));
    }
    // minimality among isolated subsemigroups containing e
    for (e, root) in &roots {
        for item in isolated.iter().filter(|s| s.semigroup.contains(e)) {
            ensure!(
                root.is_subset(item.semigroup.members()),
                "root set not inside an isolated subsemigroup containing e",
                format!("{e} / {}", item.name)
            );
        }
    }
    Ok(Outcome::pass(format!(
        "sqrt(eps_x) = G(x) for x in {:?}; sqrt(alpha) = C_A",
        ctx.a()
    )))
}

fn check_isol(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let limits = &opts.limits;
    let listed = match classify_isolated_with(ctx, limits) {
        Ok(l) => l,
        Err(Error::Internal(msg)) => return Ok(Outcome::fail("listed set not isolated", msg)),
        Err(e) => return Err(e),
    };
    let expected_len = if ctx.l() >= 2 { 3 + ctx.l() } else { 3 };
    ensure!(
        listed.len() == expected_len,
        "wrong number of listed sets",
        listed.len().to_string()
    );
    let sets: BTreeSet<_> = listed.iter().map(|s| s.semigroup.members().members().clone()).collect();
    ensure!(
        sets.len() == listed.len(),
        "listed sets are not distinct",
        listed.iter().map(|s| s.name.to_string()).collect::<Vec<_>>().join(", ")
    );
    for item in &listed {
        if let Some((x, k)) = isolation_violation_with(ctx, &item.semigroup, limits)? {
            return Ok(Outcome::fail(format!("{} not isolated", item.name), json(&(x, k))));
        }
    }
    if ctx.l() == 1 {
        let x = ctx.a()[0];
        let g = build_g_with(ctx, x, limits)?;
        let comp = build_complement(ctx, limits)?;
        ensure!(
            g.members() == comp.members(),
            "G(x) differs from the complement of C_A",
            json(g.members())
        );
        for item in &listed {
            ensure!(
                complete_isolation_violation_with(ctx, &item.semigroup, limits)?.is_none(),
                "rank-1 isolated set not completely isolated",
                item.name.to_string()
            );
        }
    }

    if ctx.n() > limits.max_pair_n {
        return Ok(Outcome::bounded(
            format!("{} listed sets isolated", listed.len()),
            format!("'only' direction not checked above n = {}", limits.max_pair_n),
        ));
    }
    let all = all_elements(ctx, limits)?;
    if ctx.n() <= limits.max_powerset_n {
        let mut found = BTreeSet::new();
        for set in all_subsemigroups(ctx, &all) {
            let s = Subsemigroup::new_unchecked(*ctx, set.clone());
            if isolation_violation_with(ctx, &s, limits)?.is_none() {
                found.insert(set);
            }
        }
        ensure!(
            found == sets,
            "isolated subsemigroups differ from the list",
            json(&found)
        );
        return Ok(Outcome::pass(format!(
            "{} isolated subsemigroups, exactly the listed ones (all subsets scanned)",
            found.len()
        )));
    }
    let closures = small_closures(ctx, &all)?;
    let mut hits = 0;
    for s in &closures {
        if isolation_violation_with(ctx, s, limits)?.is_none() {
            ensure!(
                sets.contains(s.members().members()),
                "unlisted isolated subsemigroup",
                json(s.members())
            );
            hits += 1;
        }
    }
    Ok(Outcome::bounded(
        format!(
            "{} listed sets isolated; {} distinct closures, {hits} isolated, all listed",
            listed.len(),
            closures.len()
        ),
        "'only' direction over subsemigroups generated by at most 2 elements",
    ))
}

fn check_embedding(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let limits = &opts.limits;
    let all = all_elements(ctx, limits)?;
    // injective, lands in the stated image
    let mut preimage: BTreeMap<MPartialMap, PartialInjection> = BTreeMap::new();
    for b in &all {
        let g = embed_f(ctx, b);
        ensure!(in_image_of_f(&g), "f(b) outside the stated image", json(b));
        if let Some(prev) = preimage.insert(g, *b) {
            return Ok(Outcome::fail("f is not injective", json(&(prev, b))));
        }
    }
    let images: BTreeSet<MPartialMap> = preimage.into_keys().collect();
    // every map IN+A -> A+OUT is hit
    let carrier = Carrier::new(ctx);
    let sources: Vec<_> = carrier.points().iter().filter(|p| p.tag != Tag::Out).copied().collect();
    let targets: Vec<_> = carrier.points().iter().filter(|p| p.tag != Tag::In).copied().collect();
    let mut described = BTreeSet::new();
    for shape in &all {
        let g = MPartialMap::from_pairs(shape.pairs().map(|(i, j)| (sources[i - 1], targets[j - 1])))?;
        let back = pull_back(ctx, &g);
        ensure!(
            back.is_ok(),
            "a map of the stated image has no preimage",
            format!("{g:?}")
        );
        described.insert(g);
    }
    ensure!(
        described == images,
        "Im(f) differs from the stated image",
        format!("{:?}", described.symmetric_difference(&images).next())
    );

    if ctx.n() <= limits.max_pair_n {
        for b in &all {
            for g in &all {
                if embed_f(ctx, &ctx.mul(b, g)) != embed_f(ctx, b).compose(&embed_f(ctx, g)) {
                    return Ok(Outcome::fail("f not multiplicative", json(&(b, g))));
                }
            }
        }
        return Ok(Outcome::pass(format!(
            "{} pairs multiplicative, f injective, image matches",
            all.len() * all.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.samples {
        let b = &all[rng.gen_range(0..all.len())];
        let g = &all[rng.gen_range(0..all.len())];
        if embed_f(ctx, &ctx.mul(b, g)) != embed_f(ctx, b).compose(&embed_f(ctx, g)) {
            return Ok(Outcome::fail("f not multiplicative", json(&(b, g))));
        }
    }
    Ok(Outcome::bounded(
        "sampled pairs multiplicative, f injective, image matches",
        format!("{} random pairs (seed {})", opts.samples, opts.seed),
    ))
}

/// Orders of `Ord(M)` with their `Mon`, and the distinct nilpotent closures of
/// one- and two-element subsets of the `Mon(Λ)`.
struct NilpotentFamily {
    orders: Vec<StrictOrder>,
    mons: Vec<Subsemigroup>,
    closures: Vec<Subsemigroup>,
}

fn nilpotent_family(ctx: &SandwichContext, limits: &Limits) -> Result<NilpotentFamily> {
    require(ctx.n(), limits.max_pair_n, "enumeration of strict orders")?;
    let all = all_elements(ctx, limits)?;
    let orders = enumerate_orders(ctx, limits)?;
    let mons: Vec<Subsemigroup> = orders.iter().map(|o| mon_over(ctx, o, &all)).collect::<Result<_>>()?;
    let mut generators: BTreeSet<(PartialInjection, PartialInjection)> = BTreeSet::new();
    for m in &mons {
        let elems: Vec<_> = m.iter().copied().collect();
        for (i, a) in elems.iter().enumerate() {
            for b in &elems[i..] {
                generators.insert((*a, *b));
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut closures = Vec::new();
    for (a, b) in generators {
        let s = closure_of(ctx, [a, b])?;
        if seen.insert(s.members().clone()) {
            closures.push(s);
        }
    }
    Ok(NilpotentFamily { orders, mons, closures })
}

fn check_galois(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let limits = &opts.limits;
    let fam = nilpotent_family(ctx, limits)?;
    let all = all_elements(ctx, limits)?;
    for (o, m) in fam.orders.iter().zip(&fam.mons) {
        let degree = nilpotency_degree(m);
        ensure!(
            degree.is_some_and(|d| d <= o.longest_chain()),
            "Mon of an order in Ord_k is not in Nil_k",
            json(&o.pairs())
        );
        let back = lambda_of(m)?;
        ensure!(back.is_subset(o), "Lambda_Mon(L) not inside L", json(&o.pairs()));
        let again = mon_over(ctx, &back, &all)?;
        ensure!(
            again.members() == m.members(),
            "Mon(Lambda_Mon(L)) != Mon(L)",
            json(&o.pairs())
        );
    }
    for (o1, m1) in fam.orders.iter().zip(&fam.mons) {
        for (o2, m2) in fam.orders.iter().zip(&fam.mons) {
            if o1.is_subset(o2) {
                ensure!(m1.is_subset(m2), "Mon is not monotone", json(&(o1.pairs(), o2.pairs())));
            }
        }
    }
    let mut lambdas = Vec::with_capacity(fam.closures.len());
    for s in &fam.closures {
        let k = nilpotency_degree(s).ok_or(Error::Internal("closure inside Mon not nilpotent".into()))?;
        let l = lambda_of(s)?;
        ensure!(in_ord_k(ctx, &l, k), "Lambda_S not in Ord_n(S)", json(s.members()));
        ensure!(!in_ord_k(ctx, &l, k - 1), "Lambda_S in Ord_(n(S)-1)", json(s.members()));
        let m = mon_over(ctx, &l, &all)?;
        ensure!(s.is_subset(&m), "S not inside Mon(Lambda_S)", json(s.members()));
        ensure!(
            lambda_of(&m)? == l,
            "Lambda_Mon(Lambda_S) != Lambda_S",
            json(s.members())
        );
        lambdas.push(l);
    }
    for (s1, l1) in fam.closures.iter().zip(&lambdas) {
        for (s2, l2) in fam.closures.iter().zip(&lambdas) {
            if s1.is_subset(s2) {
                ensure!(
                    l1.is_subset(l2),
                    "Lambda is not monotone",
                    json(&(s1.members(), s2.members()))
                );
            }
        }
    }
    Ok(Outcome::pass(format!(
        "{} orders, {} nilpotent closures",
        fam.orders.len(),
        fam.closures.len()
    )))
}

fn check_degree(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let limits = &opts.limits;
    require(ctx.n(), limits.max_pair_n, "degree checks over all small closures")?;
    let all = all_elements(ctx, limits)?;
    let zero = PartialInjection::empty(ctx.n())?;
    let mut nilpotent = 0;
    let closures = small_closures(ctx, &all)?;
    for s in &closures {
        let degree = nilpotency_degree(s);
        let every_element_nilpotent = s.iter().all(|e| ctx.star_powers(e).contains(&zero));
        ensure!(
            degree.is_some() == every_element_nilpotent,
            "set-product degree disagrees with the element-wise criterion",
            json(s.members())
        );
        let Some(k) = degree else { continue };
        nilpotent += 1;
        let l = lambda_of(s)?;
        ensure!(
            l.longest_chain() == k,
            "longest chain of Lambda_S differs from n(S)",
            json(s.members())
        );
        ensure!(
            in_ord_k(ctx, &l, k) && !in_ord_k(ctx, &l, k - 1),
            "Lambda_S not in Ord_k minus Ord_(k-1)",
            json(s.members())
        );
        ensure!(k <= ctx.l() + 2, "degree exceeds rank(alpha)+2", json(s.members()));
    }
    Ok(Outcome::pass(format!(
        "{} closures, {nilpotent} nilpotent, degrees match chain lengths",
        closures.len()
    )))
}

fn check_maxnil(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let limits = &opts.limits;
    let fam = nilpotent_family(ctx, limits)?;
    let all = all_elements(ctx, limits)?;
    let max_k = ctx.l() + 2;
    let mut per_k = Vec::new();
    for k in 1..=max_k {
        let parts = enumerate_partitions(ctx, k)?;
        let mut distinct = BTreeSet::new();
        for p in &parts {
            let t = t_of_partition_over(ctx, p, &all)?;
            ensure!(
                distinct.insert(t.members().clone()),
                "two partitions give the same T",
                p.to_string()
            );
            let degree = nilpotency_degree(&t);
            ensure!(degree == Some(k), "T is not nilpotent of degree k", p.to_string());
            let ord = ord_of_partition(p);
            ensure!(lambda_of(&t)? == ord, "Lambda_T != ord(p)", p.to_string());
            // ord(p) is maximal in Ord_k
            for o in fam.orders.iter().filter(|o| in_ord_k(ctx, o, k)) {
                ensure!(
                    !(ord.is_subset(o) && *o != ord),
                    "ord(p) not maximal in Ord_k",
                    p.to_string()
                );
            }
            // T is maximal in Nil_k
            for b in all.iter().filter(|b| !t.contains(b)) {
                let grown = closure_of(ctx, t.iter().copied().chain([*b]))?;
                ensure!(
                    nilpotency_degree(&grown).is_none_or(|d| d > k),
                    "T extends inside Nil_k",
                    format!("{p} + {b}")
                );
            }
        }
        // maximal elements of Ord_k all come from partitions
        let in_k: Vec<&StrictOrder> = fam.orders.iter().filter(|o| in_ord_k(ctx, o, k)).collect();
        let ords: BTreeSet<Vec<_>> = parts.iter().map(|p| ord_of_partition(p).pairs()).collect();
        for o in &in_k {
            let maximal = !in_k.iter().any(|o2| o.is_subset(o2) && o2 != o);
            if maximal {
                ensure!(
                    ords.contains(&o.pairs()),
                    "maximal order not of the form ord(p)",
                    json(&o.pairs())
                );
            }
        }
        per_k.push(format!("k={k}: {}", parts.len()));
    }
    for s in &fam.closures {
        let k = nilpotency_degree(s).ok_or(Error::Internal("closure inside Mon not nilpotent".into()))?;
        let l = lambda_of(s)?;
        let p = complete_order(ctx, &l, k)?;
        ensure!(
            l.is_subset(&ord_of_partition(&p)),
            "Lambda_S not inside ord(completion)",
            json(s.members())
        );
        let t = t_of_partition_over(ctx, &p, &all)?;
        ensure!(
            s.is_subset(&t),
            "S not inside T(completion of Lambda_S)",
            json(s.members())
        );
    }
    Ok(Outcome::pass(format!(
        "maximal nilpotents per k: {}; {} closures placed",
        per_k.join(", "),
        fam.closures.len()
    )))
}

fn check_degree_bound(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let limits = &opts.limits;
    let m = Carrier::new(ctx).len();
    let mut best = 0;
    let mut witnesses = 0;
    for k in 1..=m {
        let ts = maximal_nilpotents_with(ctx, k, limits)?;
        if k > ctx.l() + 2 {
            ensure!(ts.is_empty(), "partition with more than l+2 blocks", k.to_string());
        }
        for t in ts {
            ensure!(t.degree == k, "degree of T(p) differs from k", t.partition.to_string());
            ensure!(
                t.degree <= ctx.l() + 2,
                "degree exceeds rank(alpha)+2",
                t.partition.to_string()
            );
            best = best.max(t.degree);
            if t.degree == ctx.l() + 2 {
                let l = lambda_of(&t.semigroup)?;
                let carrier = l.carrier().clone();
                let ins: Vec<_> = carrier.points().iter().filter(|p| p.tag == Tag::In).copied().collect();
                let outs: Vec<_> = carrier.points().iter().filter(|p| p.tag == Tag::Out).copied().collect();
                ensure!(
                    l.minimal() == ins,
                    "min(Lambda) differs from the input copy",
                    t.partition.to_string()
                );
                ensure!(
                    l.maximal() == outs,
                    "max(Lambda) differs from the output copy",
                    t.partition.to_string()
                );
                ensure!(
                    l.is_linear_on(Tag::A),
                    "Lambda restricted to A is not linear",
                    t.partition.to_string()
                );
                witnesses += 1;
            }
        }
    }
    ensure!(
        best == ctx.l() + 2,
        "maximum degree differs from rank(alpha)+2",
        best.to_string()
    );
    Ok(Outcome::pass(format!(
        "max degree {best} = l+2, attained by {witnesses} maximal nilpotents"
    )))
}

fn check_types(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let limits = &opts.limits;
    require(
        ctx.n(),
        limits.max_pair_n,
        "isomorphism checks between maximal nilpotents",
    )?;
    let mut compared = 0;
    let mut iso_pairs = 0;
    let mut anti_pairs = 0;
    for k in 2..=ctx.l() + 2 {
        let ts = maximal_nilpotents_with(ctx, k, limits)?;
        for t in &ts {
            let recovered = type_of_with(&t.semigroup, k, limits)?;
            ensure!(
                recovered == t.type_vector,
                "type_of disagrees with the partition",
                t.partition.to_string()
            );
        }
        for t1 in &ts {
            for t2 in &ts {
                let iso = find_isomorphism(&t1.semigroup, &t2.semigroup, Orientation::Iso, limits)?.is_some();
                let anti = find_isomorphism(&t1.semigroup, &t2.semigroup, Orientation::Anti, limits)?.is_some();
                let same = t1.type_vector == t2.type_vector;
                let reversed = t1.type_vector == t2.type_vector.reversed();
                let witness = format!("{} vs {}", t1.partition, t2.partition);
                if k == 2 {
                    ensure!(
                        iso == (same || reversed),
                        "k=2 isomorphism does not follow the types",
                        witness
                    );
                } else {
                    ensure!(iso == same, "isomorphism does not follow the types", witness);
                    ensure!(
                        anti == reversed,
                        "anti-isomorphism does not follow the reversed types",
                        witness
                    );
                }
                compared += 1;
                iso_pairs += iso as usize;
                anti_pairs += anti as usize;
            }
        }
    }
    Ok(Outcome::pass(format!(
        "{compared} ordered pairs compared: {iso_pairs} isomorphic, {anti_pairs} anti-isomorphic"
    )))
}

fn check_iso_criterion(ctx: &SandwichContext, opts: &VerifyOptions) -> Result<Outcome> {
    let limits = &opts.limits;
    let n = ctx.n();
    require(n, limits.max_perm_n, "variant isomorphism search")?;
    let all = all_elements(ctx, limits)?;
    let exhaustive = n <= limits.max_pair_n + 1;
    let partners: Vec<PartialInjection> = if exhaustive {
        all.clone()
    } else {
        (0..=n)
            .map(|r| PartialInjection::identity_on(n, 1..=r))
            .collect::<Result<_>>()?
    };
    let mut canonical: BTreeMap<PartialInjection, Option<Vec<usize>>> = BTreeMap::new();
    for a in all.iter().chain(&partners) {
        if !canonical.contains_key(a) {
            let c = match canonical_context_with(a, limits) {
                Ok(c) => Some(c.a()),
                Err(Error::PermutationSandwich) => None,
                Err(Error::InvalidContext(_)) if a.rank() == 0 => Some(Vec::new()),
                Err(e) => return Err(e),
            };
            canonical.insert(*a, c);
        }
    }
    let mut pairs = 0usize;
    for a1 in &all {
        for a2 in &partners {
            let witness = variants_isomorphic_with(a1, a2, limits)?;
            let same_rank = a1.rank() == a2.rank();
            ensure!(
                witness.is_some() == same_rank,
                "isomorphism does not follow rank",
                json(&(a1, a2))
            );
            if let Some((p, t)) = witness {
                ensure!(p.then(a1) == a2.then(&t), "invalid witness", json(&(a1, a2, p, t)));
            }
            let canon_equal = canonical[a1] == canonical[a2];
            ensure!(
                canon_equal == same_rank,
                "canonical contexts disagree with rank",
                json(&(a1, a2))
            );
            pairs += 1;
        }
    }
    let detail = format!("{pairs} pairs (alpha1, alpha2) decided by witness search and canonical contexts");
    if exhaustive {
        Ok(Outcome::pass(detail))
    } else {
        Ok(Outcome::bounded(
            detail,
            "second element restricted to the partial identities id_{1..r}",
        ))
    }
}
