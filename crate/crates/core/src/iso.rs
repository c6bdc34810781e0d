//! Backtracking search for isomorphisms and anti-isomorphisms between small
//! subsemigroups of variants.
//!
//! Elements are taken in canonical order (rank, domain, images). Candidate
//! images are restricted to elements with the same invariant profile, and
//! every assignment is propagated through the multiplication tables before
//! branching further.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::isolated::Subsemigroup;
use crate::limits::Limits;
use crate::pinj::PartialInjection;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    /// `φ(ab) = φ(a)φ(b)`
    Iso,
    /// `φ(ab) = φ(b)φ(a)`
    Anti,
}

/// A bijection as `(source, image)` pairs in canonical source order.
pub type Bijection = Vec<(PartialInjection, PartialInjection)>;

struct Table {
    elems: Vec<PartialInjection>,
    mul: Vec<u16>,
    m: usize,
}

impl Table {
    fn new(s: &Subsemigroup) -> Self {
        let ctx = s.ctx();
        let elems: Vec<PartialInjection> = s.iter().copied().collect();
        let index: HashMap<PartialInjection, u16> = elems.iter().enumerate().map(|(i, e)| (*e, i as u16)).collect();
        let m = elems.len();
        let mut mul = Vec::with_capacity(m * m);
        for a in &elems {
            for b in &elems {
                mul.push(index[&ctx.mul(a, b)]);
            }
        }
        Table { elems, mul, m }
    }

    #[inline]
    fn at(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.m + b] as usize
    }

    /// Invariants shared by isomorphic and anti-isomorphic images.
    fn profiles(&self) -> Vec<Profile> {
        let m = self.m;
        let mut sqrt_count = vec![0usize; m];
        let mut factor_count = vec![0usize; m];
        for a in 0..m {
            sqrt_count[self.at(a, a)] += 1;
            for b in 0..m {
                factor_count[self.at(a, b)] += 1;
            }
        }
        (0..m)
            .map(|a| {
                // monogenic index and period
                let mut seen = vec![usize::MAX; m];
                let mut p = a;
                let mut step = 1;
                while seen[p] == usize::MAX {
                    seen[p] = step;
                    p = self.at(p, a);
                    step += 1;
                }
                let index = seen[p];
                let period = step - seen[p];
                let left: std::collections::BTreeSet<_> = (0..m).map(|x| self.at(a, x)).collect();
                let right: std::collections::BTreeSet<_> = (0..m).map(|x| self.at(x, a)).collect();
                let sides = (left.len().min(right.len()), left.len().max(right.len()));
                Profile {
                    idempotent: self.at(a, a) == a,
                    index,
                    period,
                    sqrt_count: sqrt_count[a],
                    factor_count: factor_count[a],
                    sides,
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
struct Profile {
    idempotent: bool,
    index: usize,
    period: usize,
    sqrt_count: usize,
    factor_count: usize,
    sides: (usize, usize),
}

#[derive(Clone)]
struct State {
    fwd: Vec<Option<usize>>,
    back: Vec<Option<usize>>,
    assigned: Vec<usize>,
}

struct Search<'a> {
    t1: &'a Table,
    t2: &'a Table,
    p1: Vec<Profile>,
    p2: Vec<Profile>,
    orientation: Orientation,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn image_of_product(&self, fa: usize, fb: usize) -> usize {
        match self.orientation {
            Orientation::Iso => self.t2.at(fa, fb),
            Orientation::Anti => self.t2.at(fb, fa),
        }
    }

    fn assign(&self, st: &mut State, u: usize, v: usize) -> bool {
        if self.p1[u] != self.p2[v] || st.back[v].is_some() {
            return false;
        }
        st.fwd[u] = Some(v);
        st.back[v] = Some(u);
        st.assigned.push(u);
        let mut cursor = st.assigned.len() - 1;
        while cursor < st.assigned.len() {
            let a = st.assigned[cursor];
            cursor += 1;
            let fa = st.fwd[a].expect("assigned");
            let mut idx = 0;
            while idx < st.assigned.len() {
                let b = st.assigned[idx];
                idx += 1;
                let fb = st.fwd[b].expect("assigned");
                for (x, y, fx, fy) in [(a, b, fa, fb), (b, a, fb, fa)] {
                    let prod = self.t1.at(x, y);
                    let want = self.image_of_product(fx, fy);
                    match st.fwd[prod] {
                        Some(have) if have != want => return false,
                        Some(_) => {}
                        None => {
                            if st.back[want].is_some() || self.p1[prod] != self.p2[want] {
                                return false;
                            }
                            st.fwd[prod] = Some(want);
                            st.back[want] = Some(prod);
                            st.assigned.push(prod);
                        }
                    }
                }
            }
        }
        true
    }

    fn run(&self, st: State) -> Option<State> {
        let Some(&u) = self.order.iter().find(|&&u| st.fwd[u].is_none()) else {
            return Some(st);
        };
        for &v in &self.candidates[u] {
            if st.back[v].is_some() {
                continue;
            }
            let mut next = st.clone();
            if self.assign(&mut next, u, v) {
                if let Some(done) = self.run(next) {
                    return Some(done);
                }
            }
        }
        None
    }
}

/// Searches for a bijection `S₁ → S₂` preserving (or reversing) products.
pub fn find_isomorphism(
    s1: &Subsemigroup,
    s2: &Subsemigroup,
    orientation: Orientation,
    limits: &Limits,
) -> Result<Option<Bijection>> {
    for s in [s1, s2] {
        if s.len() > limits.max_iso_size {
            return Err(Error::SearchTooLarge {
                size: s.len(),
                bound: limits.max_iso_size,
            });
        }
    }
    if s1.len() != s2.len() {
        return Ok(None);
    }
    let t1 = Table::new(s1);
    let t2 = Table::new(s2);
    let p1 = t1.profiles();
    let p2 = t2.profiles();
    let mut sorted1 = p1.clone();
    let mut sorted2 = p2.clone();
    sorted1.sort();
    sorted2.sort();
    if sorted1 != sorted2 {
        return Ok(None);
    }
    let candidates: Vec<Vec<usize>> = p1
        .iter()
        .map(|p| (0..t2.m).filter(|&v| p2[v] == *p).collect())
        .collect();
    let mut order: Vec<usize> = (0..t1.m).collect();
    order.sort_by_key(|&u| (candidates[u].len(), u));
    let search = Search {
        t1: &t1,
        t2: &t2,
        p1,
        p2,
        orientation,
        order,
        candidates,
    };
    let start = State {
        fwd: vec![None; t1.m],
        back: vec![None; t2.m],
        assigned: Vec::new(),
    };
    Ok(search.run(start).map(|st| {
        st.fwd
            .iter()
            .enumerate()
            .map(|(u, v)| (t1.elems[u], t2.elems[v.expect("complete")]))
            .collect()
    }))
}

pub fn semigroups_isomorphic(s1: &Subsemigroup, s2: &Subsemigroup) -> Result<bool> {
    Ok(find_isomorphism(s1, s2, Orientation::Iso, &Limits::default())?.is_some())
}

pub fn semigroups_anti_isomorphic(s1: &Subsemigroup, s2: &Subsemigroup) -> Result<bool> {
    Ok(find_isomorphism(s1, s2, Orientation::Anti, &Limits::default())?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isolated::{build_c_a, build_g, closure_of};
    use crate::variant::SandwichContext;

    fn check_bijection(s1: &Subsemigroup, s2: &Subsemigroup, map: &Bijection, orientation: Orientation) {
        let f: HashMap<_, _> = map.iter().copied().collect();
        assert_eq!(f.len(), s1.len());
        let images: std::collections::BTreeSet<_> = f.values().copied().collect();
        assert_eq!(images.len(), s2.len());
        let (c1, c2) = (s1.ctx(), s2.ctx());
        for a in s1.iter() {
            for b in s1.iter() {
                let lhs = f[&c1.mul(a, b)];
                let rhs = match orientation {
                    Orientation::Iso => c2.mul(&f[a], &f[b]),
                    Orientation::Anti => c2.mul(&f[b], &f[a]),
                };
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn self_isomorphism() {
        let c = SandwichContext::new(3, &[1, 2]).unwrap();
        let s = build_g(&c, 1).unwrap();
        let map = find_isomorphism(&s, &s, Orientation::Iso, &Limits::default())
            .unwrap()
            .unwrap();
        check_bijection(&s, &s, &map, Orientation::Iso);
    }

    #[test]
    fn g_sets_are_isomorphic() {
        let c = SandwichContext::new(3, &[1, 2]).unwrap();
        let g1 = build_g(&c, 1).unwrap();
        let g2 = build_g(&c, 2).unwrap();
        let map = find_isomorphism(&g1, &g2, Orientation::Iso, &Limits::default())
            .unwrap()
            .unwrap();
        check_bijection(&g1, &g2, &map, Orientation::Iso);
    }

    #[test]
    fn different_structures_are_not_isomorphic() {
        // both of size 4: C_A at n=3, A={1,2} contains a group; a 4-element null-ish semigroup does not
        let c = SandwichContext::new(3, &[1, 2]).unwrap();
        let ca = build_c_a(&c).unwrap();
        assert_eq!(ca.len(), 4);
        let c1 = SandwichContext::new(3, &[1]).unwrap();
        let gens = [
            PartialInjection::from_pairs(3, [(2, 1)]).unwrap(),
            PartialInjection::from_pairs(3, [(1, 3)]).unwrap(),
        ];
        let nil = closure_of(&c1, gens).unwrap();
        assert_eq!(nil.len(), 4);
        assert!(!semigroups_isomorphic(&ca, &nil).unwrap());
        assert!(!semigroups_anti_isomorphic(&ca, &nil).unwrap());
    }

    #[test]
    fn anti_isomorphism_of_a_noncommutative_semigroup() {
        // {x, y, xy, 0} with yx = 0: not commutative, but x <-> y reverses products
        let c = SandwichContext::new(3, &[1]).unwrap();
        let x = PartialInjection::from_pairs(3, [(2, 1)]).unwrap();
        let y = PartialInjection::from_pairs(3, [(1, 3)]).unwrap();
        let s = closure_of(&c, [x, y]).unwrap();
        assert_ne!(c.mul(&x, &y), c.mul(&y, &x));
        let map = find_isomorphism(&s, &s, Orientation::Anti, &Limits::default())
            .unwrap()
            .unwrap();
        check_bijection(&s, &s, &map, Orientation::Anti);
        let f: HashMap<_, _> = map.into_iter().collect();
        assert_eq!(f[&x], y);
    }

    #[test]
    fn size_bound_is_enforced() {
        let c = SandwichContext::new(4, &[1]).unwrap();
        let ca = build_c_a(&c).unwrap();
        let limits = Limits {
            max_iso_size: 10,
            ..Limits::default()
        };
        assert!(matches!(
            find_isomorphism(&ca, &ca, Orientation::Iso, &limits),
            Err(Error::SearchTooLarge { .. })
        ));
    }
}
