//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p isvariant --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use isvariant::nilpotent::{maximal_nilpotents, TypeVector};
use isvariant::verify::{run_verify, Status, TheoremId, VerifyOptions};
use isvariant::SandwichContext;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

/// Contexts `A = {1..l}` with `1 <= l < n`.
fn contexts(ns: std::ops::RangeInclusive<usize>) -> Vec<SandwichContext> {
    ns.flat_map(|n| (1..n).map(move |l| SandwichContext::standard(n, l).unwrap()))
        .collect()
}

fn ctx(n: usize, a: &[usize]) -> SandwichContext {
    SandwichContext::new(n, a).unwrap()
}

/// Runs `id` on `c`, demanding one of `allowed` and at most `limit` wall time.
fn expect(id: TheoremId, c: &SandwichContext, allowed: &[Status], limit: Duration) -> Check {
    let start = Instant::now();
    let report =
        run_verify(id, c, &VerifyOptions::default()).map_err(|e| format!("{id} n={} A={:?}: {e}", c.n(), c.a()))?;
    let took = start.elapsed();
    if !allowed.contains(&report.status) {
        return Err(format!(
            "{id} n={} A={:?}: {} ({}; counterexample {:?})",
            c.n(),
            c.a(),
            report.status.as_str(),
            report.detail,
            report.counterexample
        ));
    }
    if took > limit {
        return Err(format!(
            "{id} n={} A={:?}: took {took:?}, limit {limit:?}",
            c.n(),
            c.a()
        ));
    }
    Ok(report.detail)
}

fn over(id: TheoremId, cs: &[SandwichContext], allowed: &[Status], limit: Duration) -> Check {
    for c in cs {
        expect(id, c, allowed, limit)?;
    }
    Ok(format!("{} contexts", cs.len()))
}

const PASS: &[Status] = &[Status::Pass];
const BOUNDED: &[Status] = &[Status::BoundedPass];
const MIN: Duration = Duration::from_secs(60);

fn criterion_1() -> Check {
    over(TheoremId::Prop1, &contexts(2..=4), PASS, MIN)?;
    let start = Instant::now();
    over(TheoremId::Prop1, &contexts(5..=5), PASS, MIN)?;
    let took = start.elapsed();
    if took > Duration::from_secs(10) {
        return Err(format!("n=5 took {took:?}"));
    }
    Ok(format!("n<=5 all contexts, n=5 in {took:?}"))
}

fn criterion_2() -> Check {
    over(TheoremId::RemarkId, &contexts(2..=5), PASS, MIN)
}

fn criterion_3() -> Check {
    over(TheoremId::ThmCisolDirect, &contexts(2..=5), PASS, MIN)
}

fn criterion_4() -> Check {
    let detail = expect(TheoremId::ThmCisolExhaustive, &ctx(2, &[1]), PASS, MIN)?;
    if !detail.starts_with("128 subsets") || !detail.ends_with("3 completely isolated") {
        return Err(detail);
    }
    Ok(detail)
}

fn criterion_5() -> Check {
    over(TheoremId::LemmaGx, &contexts(2..=5), PASS, MIN)
}

fn criterion_6() -> Check {
    expect(TheoremId::ThmIsol, &ctx(2, &[1]), PASS, MIN)?;
    over(TheoremId::ThmIsol, &contexts(3..=3), BOUNDED, Duration::from_secs(120))?;
    over(TheoremId::ThmIsol, &contexts(4..=5), BOUNDED, MIN)?;
    Ok("listed sets isolated for n<=5; only-direction exhaustive at n=2, bounded at n=3".into())
}

fn criterion_7() -> Check {
    over(TheoremId::PropMono, &contexts(2..=3), PASS, MIN)?;
    for c in contexts(4..=4) {
        let detail = expect(TheoremId::PropMono, &c, BOUNDED, MIN)?;
        let report = run_verify(TheoremId::PropMono, &c, &VerifyOptions::default()).unwrap();
        let bound = report.bound.unwrap_or_default();
        if !bound.starts_with("100000 random pairs") {
            return Err(format!("{detail}: bound {bound}"));
        }
    }
    Ok("exhaustive at n<=3, 100000 sampled pairs at n=4".into())
}

fn criterion_8() -> Check {
    let limit = Duration::from_secs(300);
    over(TheoremId::PropGalois, &contexts(2..=3), PASS, limit)?;
    over(TheoremId::PropDegree, &contexts(2..=3), PASS, limit)
}

fn criterion_9() -> Check {
    over(TheoremId::ThmMaxnil, &contexts(2..=3), PASS, MIN)?;
    let detail = expect(TheoremId::ThmMaxnil, &ctx(2, &[1]), PASS, MIN)?;
    if !detail.contains("k=3: 1;") {
        return Err(detail);
    }
    Ok(detail)
}

fn criterion_10() -> Check {
    over(TheoremId::CorollaryBound, &contexts(2..=4), PASS, MIN)?;
    let c = ctx(2, &[1]);
    let all: Vec<_> = (1..=3)
        .flat_map(|k| maximal_nilpotents(&c, k).unwrap())
        .filter(|t| t.degree == 3)
        .collect();
    match all.as_slice() {
        [t] if t.size == 5 && t.type_vector == TypeVector(vec![1, 1, 1]) => Ok(format!(
            "n<=4; n=2 witness {} of size 5, type {}",
            t.partition, t.type_vector
        )),
        other => Err(format!("{} degree-3 semigroups at n=2", other.len())),
    }
}

fn criterion_11() -> Check {
    let limit = Duration::from_secs(300);
    let main = expect(TheoremId::PropTypes, &ctx(3, &[1]), PASS, limit)?;
    expect(TheoremId::PropTypes, &ctx(3, &[1, 2]), PASS, limit)?;
    Ok(main)
}

fn criterion_12() -> Check {
    for n in 2..=4 {
        expect(TheoremId::IsoCriterion, &ctx(n, &[1]), PASS, MIN)?;
    }
    Ok("all pairs for n<=4".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("variant idempotents are the id_D, D inside A", criterion_1),
        ("idempotent factorization, plain and sandwich", criterion_2),
        ("C_A, complement, full completely isolated", criterion_3),
        ("completely isolated, exhaustive at n=2", criterion_4),
        ("root set of eps_x is G(x)", criterion_5),
        ("isolated classification", criterion_6),
        ("embedding into IS(M)", criterion_7),
        ("Mon and Lambda correspondence, degrees", criterion_8),
        ("maximal nilpotents from ordered A-partitions", criterion_9),
        ("nilpotency degree bound rank+2", criterion_10),
        ("isomorphism types of maximal nilpotents", criterion_11),
        ("variant isomorphism iff equal rank", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS ({took:.2}s) {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL ({took:.2}s) {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
