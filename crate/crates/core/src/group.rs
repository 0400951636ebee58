//! Finitely generated permutation groups.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::guards::guards;
use crate::perm::Permutation;

/// A permutation group given by generators, with a complete stabiliser chain.
///
/// The generator list is kept verbatim (homomorphisms are defined on it);
/// the chain is derived from it deterministically.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabChain,
    order: BigUint,
    elements: OnceLock<Vec<Permutation>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupRelation {
    pub is_subgroup: bool,
    pub equal: bool,
    /// `|B : A|` when `A ≤ B`.
    pub index: Option<BigUint>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Precondition("degree must be positive".into()));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let chain = StabChain::build(degree, &generators, &[]);
        let order = chain.order();
        let cap = guards().order;
        if order > BigUint::from(cap) {
            return Err(Error::guard("group order", &order, cap));
        }
        Ok(PermGroup {
            degree,
            generators,
            chain,
            order,
            elements: OnceLock::new(),
        })
    }

    /// `⟨gens⟩` keeping only generators that enlarge the group built so far.
    pub fn from_candidates<'a>(
        degree: usize,
        candidates: impl IntoIterator<Item = &'a Permutation>,
    ) -> Result<Self> {
        let mut chain = StabChain::empty(degree);
        let mut kept = Vec::new();
        for g in candidates {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
            if chain.extend(g) {
                kept.push(g.clone());
            }
        }
        PermGroup::new(degree, kept)
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).expect("trivial group")
    }

    /// `Sym(n)` on `{0, …, n−1}`, generated by `(0 1)` and `(0 1 … n−1)`.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[&[0, 1]]).unwrap());
            let cycle: Vec<usize> = (0..n).collect();
            gens.push(Permutation::from_cycles(n, &[&cycle]).unwrap());
        }
        PermGroup::new(n, gens).expect("symmetric group")
    }

    /// `Alt(n)`, generated by the 3-cycles `(0 1 k)`.
    pub fn alternating(n: usize) -> Self {
        let gens = (2..n)
            .map(|k| Permutation::from_cycles(n, &[&[0, 1, k]]).unwrap())
            .collect();
        PermGroup::new(n, gens).expect("alternating group")
    }

    /// Regular cyclic group generated by `(0 1 … n−1)`.
    pub fn cyclic(n: usize) -> Self {
        let cycle: Vec<usize> = (0..n).collect();
        let gens = if n >= 2 {
            vec![Permutation::from_cycles(n, &[&cycle]).unwrap()]
        } else {
            vec![]
        };
        PermGroup::new(n, gens).expect("cyclic group")
    }

    pub(crate) fn chain(&self) -> &StabChain {
        &self.chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// The order as a machine integer; always available under the default
    /// order guard.
    pub fn order_u64(&self) -> u64 {
        self.order.to_u64().expect("order within the u64 range")
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.base()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain.contains(g)
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    /// All elements in chain order, guarded by the element guard.
    pub fn elements(&self) -> Result<&[Permutation]> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let cap = guards().elements;
        if self.order > BigUint::from(cap) {
            return Err(Error::guard("element enumeration", &self.order, cap));
        }
        let mut out = Vec::with_capacity(self.order_u64() as usize);
        self.chain.for_each_element(|g| out.push(g.clone()));
        Ok(self.elements.get_or_init(|| out))
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x >= self.degree {
            return Err(Error::PointOutOfRange {
                point: x,
                degree: self.degree,
            });
        }
        Ok(())
    }

    fn check_degree(&self, other: &PermGroup) -> Result<()> {
        if other.degree != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    /// Orbit of `x`, sorted.
    pub fn orbit(&self, x: usize) -> Result<Vec<usize>> {
        self.check_point(x)?;
        let mut seen = vec![false; self.degree];
        seen[x] = true;
        let mut queue = VecDeque::from([x]);
        let mut out = vec![x];
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q = g.image(p);
                if !seen[q] {
                    seen[q] = true;
                    out.push(q);
                    queue.push_back(q);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// All orbits, sorted internally and by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !seen[x] {
                let orb = self.orbit(x).expect("in range");
                for &y in &orb {
                    seen[y] = true;
                }
                out.push(orb);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    pub fn orbit_and_stabilizer(&self, x: usize) -> Result<(Vec<usize>, PermGroup)> {
        Ok((self.orbit(x)?, self.stabilizer(x)?))
    }

    pub fn stabilizer(&self, x: usize) -> Result<PermGroup> {
        self.pointwise_stabilizer(&[x])
    }

    /// Pointwise stabiliser of `points`: the chain rebuilt with `points` as
    /// base prefix, cut below the prefix.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup> {
        for &x in points {
            self.check_point(x)?;
        }
        if points.is_empty() {
            return Ok(self.clone());
        }
        let mut prefix = points.to_vec();
        prefix.sort_unstable();
        prefix.dedup();
        let chain = StabChain::build(self.degree, &self.generators, &prefix);
        PermGroup::from_candidates(self.degree, chain.stabilizer_gens(prefix.len()))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn relation_to(&self, other: &PermGroup) -> Result<SubgroupRelation> {
        self.check_degree(other)?;
        let is_subgroup = self.is_subgroup_of(other);
        let equal = is_subgroup && self.order == other.order;
        let index = is_subgroup.then(|| &other.order / &self.order);
        Ok(SubgroupRelation {
            is_subgroup,
            equal,
            index,
        })
    }

    /// Equality as subsets of `Sym(degree)`.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.order == other.order && self.is_subgroup_of(other)
    }

    /// `|self : sub|`, requiring `sub ≤ self`.
    pub fn index_of(&self, sub: &PermGroup) -> Result<u64> {
        if !sub.is_subgroup_of(self) {
            return Err(Error::NotSubgroup("index of a non-subgroup".into()));
        }
        Ok(self.order_u64() / sub.order_u64())
    }

    /// `A^g = g⁻¹ A g`.
    pub fn conjugate(&self, g: &Permutation) -> Result<PermGroup> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: g.degree(),
            });
        }
        let gens = self.generators.iter().map(|h| h.conjugate_by(g)).collect();
        PermGroup::new(self.degree, gens)
    }

    /// `⟨self, other⟩`.
    pub fn join(&self, other: &PermGroup) -> Result<PermGroup> {
        self.check_degree(other)?;
        PermGroup::from_candidates(
            self.degree,
            self.generators.iter().chain(other.generators.iter()),
        )
    }

    pub fn is_normalized_by(&self, g: &Permutation) -> bool {
        self.generators.iter().all(|h| self.contains(&h.conjugate_by(g)))
    }

    /// `self ⊴ g`: contained and invariant under conjugation by g's generators.
    pub fn is_normal_in(&self, g: &PermGroup) -> bool {
        self.is_subgroup_of(g) && g.generators.iter().all(|x| self.is_normalized_by(x))
    }

    /// Smallest subgroup normalised by `self` that contains `seeds`.
    pub fn normal_closure_of(&self, seeds: &[Permutation]) -> Result<PermGroup> {
        let mut chain = StabChain::empty(self.degree);
        let mut gens: Vec<Permutation> = Vec::new();
        for s in seeds {
            if s.degree() != self.degree {
                return Err(Error::DegreeMismatch {
                    expected: self.degree,
                    found: s.degree(),
                });
            }
            if chain.extend(s) {
                gens.push(s.clone());
            }
        }
        let mut i = 0;
        while i < gens.len() {
            for x in &self.generators {
                let c = gens[i].conjugate_by(x);
                if chain.extend(&c) {
                    gens.push(c);
                }
            }
            i += 1;
        }
        PermGroup::new(self.degree, gens)
    }

    /// Normal closure of a subgroup in `self`.
    pub fn normal_closure(&self, sub: &PermGroup) -> Result<PermGroup> {
        self.check_degree(sub)?;
        self.normal_closure_of(sub.generators())
    }

    /// `[A, B]`: the normal closure in `⟨A, B⟩` of the generator commutators.
    pub fn commutator(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
        a.check_degree(b)?;
        let joined = a.join(b)?;
        let seeds: Vec<Permutation> = a
            .generators
            .iter()
            .flat_map(|x| b.generators.iter().map(move |y| Permutation::commutator(x, y)))
            .collect();
        joined.normal_closure_of(&seeds)
    }

    pub fn derived_subgroup(&self) -> Result<PermGroup> {
        PermGroup::commutator(self, self)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| a.then(b) == b.then(a))
        })
    }

    /// `core_self(sub)`: the largest normal subgroup of `self` inside `sub`,
    /// by repeated intersection with generator conjugates.
    pub fn core(&self, sub: &PermGroup) -> Result<PermGroup> {
        if !sub.is_subgroup_of(self) {
            return Err(Error::NotSubgroup("core of a non-subgroup".into()));
        }
        let mut c = sub.clone();
        loop {
            let mut changed = false;
            for g in &self.generators {
                if !c.is_normalized_by(g) {
                    let conj = c.conjugate(g)?;
                    c = c.intersection(&conj)?;
                    changed = true;
                }
            }
            if !changed {
                return Ok(c);
            }
        }
    }

    /// Restriction of every generator to the invariant set `points`
    /// (relabelled `0..points.len()` in the given order).
    pub(crate) fn restricted_images(&self, points: &[usize]) -> Result<Vec<Permutation>> {
        let mut pos = vec![usize::MAX; self.degree];
        for (i, &p) in points.iter().enumerate() {
            self.check_point(p)?;
            pos[p] = i;
        }
        self.generators
            .iter()
            .map(|g| {
                let imgs: Vec<usize> = points.iter().map(|&p| pos[g.image(p)]).collect();
                if imgs.contains(&usize::MAX) {
                    return Err(Error::Precondition("point set is not invariant".into()));
                }
                Permutation::from_images(imgs)
            })
            .collect()
    }

    /// Group file text: `degree N`, then one generator per line.
    pub fn to_group_file(&self) -> String {
        let mut s = format!("degree {}\n", self.degree);
        for g in &self.generators {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    pub fn parse_group_file(text: &str) -> Result<PermGroup> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty group file"))?;
        let degree = header
            .strip_prefix("degree")
            .and_then(|r| r.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::parse(ln, "expected `degree N`"))?;
        let gens = lines
            .map(|(ln, l)| {
                Permutation::parse(l, Some(degree)).map_err(|e| match e {
                    Error::Parse { message, .. } => Error::parse(ln, message),
                    other => Error::parse(ln, other.to_string()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(degree, gens)
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(degree {}, order {}, gens [", self.degree, self.order)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn generated_orders() {
        let s4 = PermGroup::new(4, vec![perm(4, &[&[0, 1, 2, 3]]), perm(4, &[&[0, 1]])]).unwrap();
        assert_eq!(s4.order_u64(), 24);
        assert_eq!(PermGroup::new(3, vec![perm(3, &[&[0, 1, 2]])]).unwrap().order_u64(), 3);
        let klein = PermGroup::new(
            4,
            vec![perm(4, &[&[0, 1], &[2, 3]]), perm(4, &[&[0, 2], &[1, 3]])],
        )
        .unwrap();
        assert_eq!(klein.order_u64(), 4);
        // exhaustive: every non-identity element is fixed-point-free
        let elems = klein.elements().unwrap();
        assert_eq!(elems.len(), 4);
        for g in elems.iter().filter(|g| !g.is_identity()) {
            assert_eq!(g.moved_points().count(), 4);
        }
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let t = PermGroup::new(5, vec![]).unwrap();
        assert!(t.is_trivial());
        let (orb, stab) = t.orbit_and_stabilizer(3).unwrap();
        assert_eq!(orb, vec![3]);
        assert!(stab.is_trivial());
    }

    #[test]
    fn degree_mismatch_rejected() {
        assert!(matches!(
            PermGroup::new(4, vec![Permutation::identity(3)]),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn order_guard() {
        let g = crate::guards::Guards {
            order: 100,
            ..Default::default()
        };
        let gens = PermGroup::symmetric(5).generators().to_vec();
        crate::guards::with_guards(g, || {
            assert!(matches!(
                PermGroup::new(5, gens),
                Err(Error::GuardExceeded { .. })
            ));
        });
    }

    #[test]
    fn stabilizers_of_symmetric_group() {
        let s4 = PermGroup::symmetric(4);
        let (orb, stab) = s4.orbit_and_stabilizer(0).unwrap();
        assert_eq!(orb.len(), 4);
        assert_eq!(stab.order_u64(), 6);
        assert_eq!(s4.pointwise_stabilizer(&[0, 1]).unwrap().order_u64(), 2);
        assert!(s4.pointwise_stabilizer(&[]).unwrap().same_group(&s4));
        assert!(s4.stabilizer(7).is_err());
    }

    #[test]
    fn subgroup_relations() {
        let s4 = PermGroup::symmetric(4);
        let a4 = PermGroup::alternating(4);
        let rel = a4.relation_to(&s4).unwrap();
        assert!(rel.is_subgroup && !rel.equal);
        assert_eq!(rel.index, Some(BigUint::from(2u32)));
        let same = s4.relation_to(&s4).unwrap();
        assert!(same.equal);
        assert_eq!(same.index, Some(BigUint::from(1u32)));
        let g = perm(4, &[&[0, 3]]);
        assert_eq!(a4.conjugate(&g).unwrap().order(), a4.order());
    }

    #[test]
    fn closures_and_commutators() {
        let s4 = PermGroup::symmetric(4);
        let a4 = PermGroup::alternating(4);
        assert!(s4.normal_closure(&a4).unwrap().same_group(&a4));
        assert_eq!(s4.derived_subgroup().unwrap().order_u64(), 12);
        let t = PermGroup::new(4, vec![perm(4, &[&[0, 1]])]).unwrap();
        assert_eq!(s4.normal_closure(&t).unwrap().order_u64(), 24);
    }

    #[test]
    fn core_of_point_stabilizer_is_trivial() {
        let s4 = PermGroup::symmetric(4);
        let h = s4.stabilizer(0).unwrap();
        assert!(s4.core(&h).unwrap().is_trivial());
        let a4 = PermGroup::alternating(4);
        assert!(s4.core(&a4).unwrap().same_group(&a4));
    }

    #[test]
    fn group_file_round_trip() {
        let s4 = PermGroup::symmetric(4);
        let text = s4.to_group_file();
        assert_eq!(text, "degree 4\n(0 1)\n(0 1 2 3)\n");
        let back = PermGroup::parse_group_file(&text).unwrap();
        assert_eq!(back.generators(), s4.generators());
        assert!(matches!(
            PermGroup::parse_group_file("degree 3\n(0 5)\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(PermGroup::parse_group_file("deg 3").is_err());
    }
}
