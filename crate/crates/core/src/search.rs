//! Subgroup searches over stabiliser chains.
//!
//! All searches walk the chain tree level by level; a node at depth `k`
//! fixes the images of the first `k` base points. Pruning hooks inspect those
//! images only. Results are assembled incrementally, keeping just the
//! elements that enlarge the subgroup found so far.

use crate::chain::{Level, StabChain};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::guards::guards;
use crate::perm::Permutation;

struct Found {
    chain: StabChain,
    gens: Vec<Permutation>,
    leaves: u64,
    cap: u64,
}

impl Found {
    fn new(degree: usize) -> Self {
        Found {
            chain: StabChain::empty(degree),
            gens: Vec::new(),
            leaves: 0,
            cap: guards().backtrack_leaves,
        }
    }

    fn offer(&mut self, g: &Permutation) {
        if self.chain.extend(g) {
            self.gens.push(g.clone());
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.leaves += 1;
        if self.leaves > self.cap {
            return Err(Error::guard("backtrack leaves", self.leaves, self.cap));
        }
        Ok(())
    }
}

/// Generic backtrack: `prune(base, images)` sees the base points decided so
/// far and their images and returns `false` to cut the subtree.
fn backtrack(
    chain: &StabChain,
    prune: &mut dyn FnMut(&[usize], &[usize]) -> bool,
    accept: &mut dyn FnMut(&Permutation) -> bool,
) -> Result<PermGroup> {
    fn go(
        levels: &[Level],
        base: &[usize],
        k: usize,
        suffix: &Permutation,
        images: &mut Vec<usize>,
        prune: &mut dyn FnMut(&[usize], &[usize]) -> bool,
        accept: &mut dyn FnMut(&Permutation) -> bool,
        found: &mut Found,
    ) -> Result<()> {
        if k == levels.len() {
            found.tick()?;
            if !found.chain.contains(suffix) && accept(suffix) {
                found.offer(suffix);
            }
            return Ok(());
        }
        for (p, rep) in levels[k].orbit.iter().zip(&levels[k].reps) {
            images.push(suffix.image(*p));
            if prune(&base[..=k], images) {
                go(levels, base, k + 1, &rep.then(suffix), images, prune, accept, found)?;
            }
            images.pop();
        }
        Ok(())
    }
    let mut found = Found::new(chain.degree);
    let base = chain.base();
    let mut images = Vec::with_capacity(base.len());
    go(
        &chain.levels,
        &base,
        0,
        &Permutation::identity(chain.degree),
        &mut images,
        prune,
        accept,
        &mut found,
    )?;
    PermGroup::new(chain.degree, found.gens)
}

impl PermGroup {
    /// `A ∩ B` by a simultaneous walk of both chains over a common base.
    pub fn intersection(&self, other: &PermGroup) -> Result<PermGroup> {
        if other.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        if self.is_subgroup_of(other) {
            return Ok(self.clone());
        }
        if other.is_subgroup_of(self) {
            return Ok(other.clone());
        }
        let degree = self.degree();
        let mut moved = vec![false; degree];
        for g in self.generators().iter().chain(other.generators()) {
            for x in g.moved_points() {
                moved[x] = true;
            }
        }
        let base: Vec<usize> = (0..degree).filter(|&x| moved[x]).collect();
        let ca = StabChain::build(degree, self.generators(), &base);
        let cb = StabChain::build(degree, other.generators(), &base);
        debug_assert_eq!(ca.base(), cb.base());

        fn go(
            la: &[Level],
            lb: &[Level],
            k: usize,
            sa: &Permutation,
            sb: &Permutation,
            found: &mut Found,
        ) -> Result<()> {
            if k == la.len() {
                found.tick()?;
                debug_assert_eq!(sa, sb);
                if !found.chain.contains(sa) {
                    found.offer(sa);
                }
                return Ok(());
            }
            let sb_inv = sb.inverse();
            for (p, rep) in la[k].orbit.iter().zip(&la[k].reps) {
                let c = sa.image(*p);
                if let Some(j) = lb[k].rep_index(sb_inv.image(c)) {
                    go(la, lb, k + 1, &rep.then(sa), &lb[k].reps[j].then(sb), found)?;
                }
            }
            Ok(())
        }
        let mut found = Found::new(degree);
        let id = Permutation::identity(degree);
        go(&ca.levels, &cb.levels, 0, &id, &id, &mut found)?;
        PermGroup::new(degree, found.gens)
    }

    /// Setwise stabiliser of `set` by backtracking with `set` leading the base.
    pub fn setwise_stabilizer(&self, set: &[usize]) -> Result<PermGroup> {
        let degree = self.degree();
        let cap = guards().setwise_degree;
        if degree > cap {
            return Err(Error::guard("setwise stabiliser degree", degree, cap));
        }
        let mut member = vec![false; degree];
        for &x in set {
            if x >= degree {
                return Err(Error::PointOutOfRange { point: x, degree });
            }
            member[x] = true;
        }
        let mut prefix: Vec<usize> = set.to_vec();
        prefix.sort_unstable();
        prefix.dedup();
        let chain = StabChain::build(degree, self.generators(), &prefix);
        let mut prune = |base: &[usize], images: &[usize]| {
            let k = base.len() - 1;
            member[base[k]] == member[images[k]]
        };
        let mut accept = |g: &Permutation| prefix.iter().all(|&x| member[g.image(x)]);
        backtrack(&chain, &mut prune, &mut accept)
    }

    /// `C_self(h)`.
    pub fn centralizer(&self, h: &PermGroup) -> Result<PermGroup> {
        if h.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: h.degree(),
            });
        }
        let commutes = |g: &Permutation| h.generators().iter().all(|x| x.then(g) == g.then(x));
        if self.order_u64() <= guards().elements {
            let elems = self.elements()?;
            return PermGroup::from_candidates(self.degree(), elems.iter().filter(|g| commutes(g)));
        }
        let chain = StabChain::build(self.degree(), self.generators(), &[]);
        let hgens = h.generators().to_vec();
        let degree = self.degree();
        let mut prune = move |base: &[usize], images: &[usize]| {
            let mut img = vec![usize::MAX; degree];
            for (b, i) in base.iter().zip(images) {
                img[*b] = *i;
            }
            base.iter().all(|&x| {
                hgens.iter().all(|s| {
                    let y = s.image(x);
                    img[y] == usize::MAX || img[y] == s.image(img[x])
                })
            })
        };
        let mut accept = |g: &Permutation| commutes(g);
        backtrack(&chain, &mut prune, &mut accept)
    }

    /// `N_self(h)`.
    pub fn normalizer(&self, h: &PermGroup) -> Result<PermGroup> {
        if h.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: h.degree(),
            });
        }
        if self.order_u64() <= guards().elements {
            let elems = self.elements()?;
            return PermGroup::from_candidates(
                self.degree(),
                elems.iter().filter(|g| h.is_normalized_by(g)),
            );
        }
        let degree = self.degree();
        let mut orbit_of = vec![0usize; degree];
        let mut orbit_len = vec![0usize; degree];
        for (i, orb) in h.orbits().iter().enumerate() {
            for &x in orb {
                orbit_of[x] = i;
                orbit_len[x] = orb.len();
            }
        }
        let chain = StabChain::build(degree, self.generators(), &[]);
        let mut prune = |base: &[usize], images: &[usize]| {
            let k = base.len() - 1;
            if orbit_len[base[k]] != orbit_len[images[k]] {
                return false;
            }
            (0..k).all(|j| {
                (orbit_of[base[j]] == orbit_of[base[k]])
                    == (orbit_of[images[j]] == orbit_of[images[k]])
            })
        };
        let mut accept = |g: &Permutation| h.is_normalized_by(g);
        backtrack(&chain, &mut prune, &mut accept)
    }

    pub fn center(&self) -> Result<PermGroup> {
        self.centralizer(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guards::{with_guards, Guards};

    fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn intersection_of_point_stabilizers() {
        let s4 = PermGroup::symmetric(4);
        let a = s4.stabilizer(0).unwrap();
        let b = s4.stabilizer(1).unwrap();
        let i = a.intersection(&b).unwrap();
        // element filter oracle
        let expected = s4
            .elements()
            .unwrap()
            .iter()
            .filter(|g| g.fixes(0) && g.fixes(1))
            .count();
        assert_eq!(expected, 2);
        assert_eq!(i.order_u64(), 2);
    }

    #[test]
    fn setwise_stabilizer_basics() {
        let s4 = PermGroup::symmetric(4);
        assert!(s4.setwise_stabilizer(&[]).unwrap().same_group(&s4));
        assert_eq!(s4.setwise_stabilizer(&[0, 1]).unwrap().order_u64(), 4);
        let pointwise = s4.pointwise_stabilizer(&[0, 1]).unwrap();
        assert!(pointwise.is_subgroup_of(&s4.setwise_stabilizer(&[0, 1]).unwrap()));
    }

    #[test]
    fn centralizer_normalizer_center() {
        let s3 = PermGroup::symmetric(3);
        let t = PermGroup::trivial(3);
        assert!(s3.centralizer(&t).unwrap().same_group(&s3));
        assert!(s3.normalizer(&t).unwrap().same_group(&s3));
        assert!(s3.center().unwrap().is_trivial());
        let s4 = PermGroup::symmetric(4);
        let v = PermGroup::new(4, vec![perm(4, &[&[0, 1], &[2, 3]])]).unwrap();
        assert_eq!(s4.centralizer(&v).unwrap().order_u64(), 8);
        assert_eq!(s4.normalizer(&v).unwrap().order_u64(), 8);
    }

    #[test]
    fn backtracking_paths_agree_with_scans() {
        let s5 = PermGroup::symmetric(5);
        let h = PermGroup::new(5, vec![perm(5, &[&[0, 1, 2]])]).unwrap();
        let scan_c = s5.centralizer(&h).unwrap();
        let scan_n = s5.normalizer(&h).unwrap();
        let tight = Guards {
            elements: 50,
            ..Guards::default()
        };
        let (bt_c, bt_n) = with_guards(tight, || (s5.centralizer(&h).unwrap(), s5.normalizer(&h).unwrap()));
        assert!(bt_c.same_group(&scan_c));
        assert!(bt_n.same_group(&scan_n));
        assert_eq!(scan_c.order_u64(), 6);
        assert_eq!(scan_n.order_u64(), 12);
    }
}
