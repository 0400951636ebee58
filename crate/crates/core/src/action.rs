//! Orbit structure and the transitive-action hierarchy: semiregular,
//! regular, semiprimitive, quasiprimitive and primitive groups, block
//! systems, plinths and permutation isomorphism.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::guards::guards;
use crate::hom::ActionHom;
use crate::perm::Permutation;
use crate::structure::normal_subgroups;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionProfile {
    pub orbits: Vec<Vec<usize>>,
    pub transitive: bool,
    pub semiregular: bool,
    pub regular: bool,
}

pub fn action_profile(g: &PermGroup) -> Result<ActionProfile> {
    let orbits = g.orbits();
    let transitive = orbits.len() == 1;
    // stabilisers along an orbit are conjugate, so one point per orbit suffices
    let mut semiregular = true;
    for orbit in &orbits {
        if !g.stabilizer(orbit[0])?.is_trivial() {
            semiregular = false;
            break;
        }
    }
    Ok(ActionProfile {
        regular: transitive && semiregular,
        orbits,
        transitive,
        semiregular,
    })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Finest block system in which `a` and `b` share a block.
fn block_system_joining(g: &PermGroup, a: usize, b: usize) -> Vec<Vec<usize>> {
    let n = g.degree();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut pending = vec![(a, b)];
    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
    parent[rb] = ra;
    while let Some((x, y)) = pending.pop() {
        for s in g.generators() {
            let (u, v) = (s.image(x), s.image(y));
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[rv] = ru;
                pending.push((u, v));
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(x);
    }
    blocks
}

/// The distinct non-trivial block systems generated by the pairs `(0, x)`,
/// ordered by block size then by first appearance.
pub fn block_systems(g: &PermGroup) -> Result<Vec<Vec<Vec<usize>>>> {
    if !g.is_transitive() {
        return Err(Error::Precondition("block systems need a transitive group".into()));
    }
    let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
    for x in 1..g.degree() {
        let system = block_system_joining(g, 0, x);
        if system.len() > 1 && !out.contains(&system) {
            out.push(system);
        }
    }
    out.sort_by_key(|s| s[0].len());
    Ok(out)
}

pub fn is_primitive(g: &PermGroup) -> Result<bool> {
    Ok(block_systems(g)?.is_empty())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionLevel {
    Intransitive,
    TransitiveOnly,
    Semiprimitive,
    Quasiprimitive,
    Primitive,
}

impl ActionLevel {
    pub fn name(self) -> &'static str {
        match self {
            ActionLevel::Intransitive => "intransitive",
            ActionLevel::TransitiveOnly => "transitive-only",
            ActionLevel::Semiprimitive => "semiprimitive",
            ActionLevel::Quasiprimitive => "quasiprimitive",
            ActionLevel::Primitive => "primitive",
        }
    }
}

/// Why a group misses `fails`: a normal subgroup or a block system.
#[derive(Debug, Clone)]
pub struct LevelWitness {
    pub fails: ActionLevel,
    pub normal_subgroup: Option<PermGroup>,
    pub block_system: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlinthType {
    Several,
    UniqueRegular,
    UniqueNonRegular,
}

#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub level: ActionLevel,
    pub witnesses: Vec<LevelWitness>,
    /// Minimal transitive normal subgroups.
    pub plinths: Vec<PermGroup>,
}

impl ClassificationReport {
    pub fn is_semiprimitive(&self) -> bool {
        self.level >= ActionLevel::Semiprimitive
    }

    pub fn is_quasiprimitive(&self) -> bool {
        self.level >= ActionLevel::Quasiprimitive
    }

    pub fn is_primitive(&self) -> bool {
        self.level == ActionLevel::Primitive
    }

    pub fn plinth_type(&self) -> Option<PlinthType> {
        match self.plinths.as_slice() {
            [] => None,
            [p] if p.order() == &num_bigint::BigUint::from(p.degree()) => {
                Some(PlinthType::UniqueRegular)
            }
            [_] => Some(PlinthType::UniqueNonRegular),
            _ => Some(PlinthType::Several),
        }
    }
}

/// Places `g` in the hierarchy by testing every normal subgroup.
pub fn classify_action(g: &PermGroup) -> Result<ClassificationReport> {
    if !g.is_transitive() {
        return Ok(ClassificationReport {
            level: ActionLevel::Intransitive,
            witnesses: vec![LevelWitness {
                fails: ActionLevel::TransitiveOnly,
                normal_subgroup: Some(g.clone()),
                block_system: None,
            }],
            plinths: Vec::new(),
        });
    }
    let normals = normal_subgroups(g)?;
    let mut semi_witness = None;
    let mut quasi_witness = None;
    let mut transitive_normals = Vec::new();
    for n in &normals {
        let profile = action_profile(n)?;
        if profile.transitive {
            transitive_normals.push(n);
            continue;
        }
        if n.is_trivial() {
            continue;
        }
        if quasi_witness.is_none() {
            quasi_witness = Some(n.clone());
        }
        if !profile.semiregular && semi_witness.is_none() {
            semi_witness = Some(n.clone());
        }
    }
    let plinths: Vec<PermGroup> = transitive_normals
        .iter()
        .filter(|n| {
            !transitive_normals
                .iter()
                .any(|m| m.order() < n.order() && m.is_subgroup_of(n))
        })
        .map(|n| (*n).clone())
        .collect();

    let mut witnesses = Vec::new();
    let level = if let Some(w) = semi_witness {
        witnesses.push(LevelWitness {
            fails: ActionLevel::Semiprimitive,
            normal_subgroup: Some(w),
            block_system: None,
        });
        ActionLevel::TransitiveOnly
    } else if let Some(w) = quasi_witness {
        witnesses.push(LevelWitness {
            fails: ActionLevel::Quasiprimitive,
            normal_subgroup: Some(w),
            block_system: None,
        });
        ActionLevel::Semiprimitive
    } else {
        ActionLevel::Quasiprimitive
    };
    if level < ActionLevel::Quasiprimitive {
        // orbits of an intransitive normal subgroup form a block system
        let n = witnesses[0].normal_subgroup.as_ref().expect("set above");
        witnesses.push(LevelWitness {
            fails: ActionLevel::Primitive,
            normal_subgroup: None,
            block_system: Some(n.orbits()),
        });
        return Ok(ClassificationReport {
            level,
            witnesses,
            plinths,
        });
    }
    let systems = block_systems(g)?;
    if let Some(system) = systems.into_iter().next() {
        witnesses.push(LevelWitness {
            fails: ActionLevel::Primitive,
            normal_subgroup: None,
            block_system: Some(system),
        });
        return Ok(ClassificationReport {
            level,
            witnesses,
            plinths,
        });
    }
    Ok(ClassificationReport {
        level: ActionLevel::Primitive,
        witnesses,
        plinths,
    })
}

/// A bijection `b` (as a permutation of the common domain) with
/// `g1.conjugate(b) == g2`, i.e. `σ ↦ b⁻¹σb` maps `g1` onto `g2`.
///
/// Searches images `h_i ∈ g2` for a reduced generating set `g_i` of `g1`
/// (matching cycle types), propagating `b(g_i(x)) = h_i(b(x))` from one
/// chosen image per orbit. The first witness in search order is returned.
pub fn permutation_isomorphism(g1: &PermGroup, g2: &PermGroup) -> Result<Option<Permutation>> {
    let cap = guards().iso_degree;
    for d in [g1.degree(), g2.degree()] {
        if d > cap {
            return Err(Error::guard("permutation isomorphism degree", d, cap));
        }
    }
    if g1.degree() != g2.degree() || g1.order() != g2.order() {
        return Ok(None);
    }
    let sizes = |g: &PermGroup| {
        let mut s: Vec<usize> = g.orbits().iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    };
    if sizes(g1) != sizes(g2) {
        return Ok(None);
    }
    let gens: Vec<Permutation> = PermGroup::from_candidates(g1.degree(), g1.generators())?
        .generators()
        .to_vec();
    let elems = g2.elements()?;
    let candidates: Vec<Vec<&Permutation>> = gens
        .iter()
        .map(|g| {
            let ct = g.cycle_type();
            elems.iter().filter(|h| h.cycle_type() == ct).collect()
        })
        .collect();
    let mut search = IsoSearch {
        n: g1.degree(),
        gens: &gens,
        orbits1: g1.orbits(),
        orbit2_of: {
            let mut of = vec![(0, 0); g2.degree()];
            for orb in g2.orbits() {
                for &x in &orb {
                    of[x] = (orb[0], orb.len());
                }
            }
            of
        },
        images: Vec::new(),
    };
    let b = vec![usize::MAX; search.n];
    Ok(search.choose_images(&candidates, b).map(|map| {
        Permutation::from_images(map).expect("search yields a bijection")
    }))
}

struct IsoSearch<'a> {
    n: usize,
    gens: &'a [Permutation],
    orbits1: Vec<Vec<usize>>,
    /// (least point, size) of the orbit of each point of the second group
    orbit2_of: Vec<(usize, usize)>,
    images: Vec<Permutation>,
}

impl IsoSearch<'_> {
    /// Extends `b` along the generators chosen so far; `None` on conflict.
    fn propagate(&self, mut b: Vec<usize>, seeds: Vec<usize>) -> Option<Vec<usize>> {
        let mut used = vec![false; self.n];
        for &y in b.iter().filter(|&&y| y != usize::MAX) {
            used[y] = true;
        }
        let mut stack = seeds;
        while let Some(x) = stack.pop() {
            let bx = b[x];
            for (g, h) in self.gens.iter().zip(&self.images) {
                let (from, to) = (g.image(x), h.image(bx));
                if b[from] == usize::MAX {
                    if used[to] {
                        return None;
                    }
                    b[from] = to;
                    used[to] = true;
                    stack.push(from);
                } else if b[from] != to {
                    return None;
                }
            }
        }
        Some(b)
    }

    fn assigned(b: &[usize]) -> Vec<usize> {
        (0..b.len()).filter(|&x| b[x] != usize::MAX).collect()
    }

    fn choose_images(&mut self, candidates: &[Vec<&Permutation>], b: Vec<usize>) -> Option<Vec<usize>> {
        let i = self.images.len();
        if i == 0 {
            // any image of the first orbit's least point can be moved onto
            // the least point of its orbit by an element of the second group
            let x = self.orbits1[0][0];
            let size = self.orbits1[0].len();
            let mut starts: Vec<usize> = (0..self.n)
                .filter(|&y| self.orbit2_of[y] == (y, size))
                .collect();
            starts.dedup();
            for y in starts {
                let mut b0 = b.clone();
                b0[x] = y;
                if let Some(found) = self.choose_gen(candidates, b0) {
                    return Some(found);
                }
            }
            return None;
        }
        self.choose_gen(candidates, b)
    }

    fn choose_gen(&mut self, candidates: &[Vec<&Permutation>], b: Vec<usize>) -> Option<Vec<usize>> {
        let i = self.images.len();
        if i == self.gens.len() {
            return self.complete_orbits(b, 1);
        }
        for h in &candidates[i] {
            self.images.push((*h).clone());
            let seeds = Self::assigned(&b);
            if let Some(next) = self.propagate(b.clone(), seeds) {
                if let Some(found) = self.choose_gen(candidates, next) {
                    return Some(found);
                }
            }
            self.images.pop();
        }
        None
    }

    fn complete_orbits(&self, b: Vec<usize>, k: usize) -> Option<Vec<usize>> {
        if k == self.orbits1.len() {
            return Some(b);
        }
        let x = self.orbits1[k][0];
        if b[x] != usize::MAX {
            return self.complete_orbits(b, k + 1);
        }
        let size = self.orbits1[k].len();
        let mut used = vec![false; self.n];
        for &y in b.iter().filter(|&&y| y != usize::MAX) {
            used[y] = true;
        }
        for y in 0..self.n {
            if used[y] || self.orbit2_of[y].1 != size {
                continue;
            }
            let mut next = b.clone();
            next[x] = y;
            if let Some(next) = self.propagate(next, vec![x]) {
                if let Some(found) = self.complete_orbits(next, k + 1) {
                    return Some(found);
                }
            }
        }
        None
    }
}

/// Domain for [`induced_action`].
#[derive(Debug, Clone)]
pub enum InducedDomain {
    /// An invariant point set, relabelled in the given order.
    Set(Vec<usize>),
    /// An invariant partition; block `i` becomes point `i`.
    Blocks(Vec<Vec<usize>>),
}

pub fn induced_action(g: &PermGroup, domain: &InducedDomain) -> Result<ActionHom> {
    match domain {
        InducedDomain::Set(points) => ActionHom::restriction(g, points),
        InducedDomain::Blocks(blocks) => ActionHom::on_blocks(g, blocks),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn group(n: usize, gens: &[&[&[usize]]]) -> PermGroup {
        PermGroup::new(n, gens.iter().map(|c| perm(n, c)).collect()).unwrap()
    }

    #[test]
    fn profiles() {
        let t = action_profile(&PermGroup::trivial(3)).unwrap();
        assert!(!t.transitive && t.semiregular && !t.regular);
        assert_eq!(t.orbits.len(), 3);
        let c4 = action_profile(&PermGroup::cyclic(4)).unwrap();
        assert!(c4.regular);
        let s3 = action_profile(&PermGroup::symmetric(3)).unwrap();
        assert!(s3.transitive && !s3.semiregular);
    }

    #[test]
    fn blocks_and_primitivity() {
        assert!(is_primitive(&PermGroup::symmetric(5)).unwrap());
        let c4 = PermGroup::cyclic(4);
        let systems = block_systems(&c4).unwrap();
        assert_eq!(systems, vec![vec![vec![0, 2], vec![1, 3]]]);
        let c6 = PermGroup::cyclic(6);
        assert_eq!(block_systems(&c6).unwrap().len(), 2);
        assert!(block_systems(&PermGroup::trivial(2)).is_err());
    }

    #[test]
    fn hierarchy_of_small_groups() {
        let s5 = classify_action(&PermGroup::symmetric(5)).unwrap();
        assert_eq!(s5.level, ActionLevel::Primitive);
        assert!(s5.witnesses.is_empty());
        // A5 is the unique minimal transitive normal subgroup
        assert_eq!(s5.plinths.len(), 1);
        assert_eq!(s5.plinths[0].order_u64(), 60);
        assert_eq!(s5.plinth_type(), Some(PlinthType::UniqueNonRegular));

        // C4 regular: the order-2 subgroup is intransitive but semiregular
        let c4 = classify_action(&PermGroup::cyclic(4)).unwrap();
        assert_eq!(c4.level, ActionLevel::Semiprimitive);
        assert_eq!(c4.plinth_type(), Some(PlinthType::UniqueRegular));

        // D8 on 4 points: the index-2 subgroup ⟨(0 2), (1 3)⟩ is normal,
        // intransitive and not semiregular
        let d8 = group(4, &[&[&[0, 1, 2, 3]], &[&[0, 2]]]);
        let r = classify_action(&d8).unwrap();
        assert_eq!(r.level, ActionLevel::TransitiveOnly);
        let w = r.witnesses[0].normal_subgroup.as_ref().unwrap();
        assert!(w.is_normal_in(&d8) && !w.is_transitive());

        let intrans = classify_action(&group(4, &[&[&[0, 1]]])).unwrap();
        assert_eq!(intrans.level, ActionLevel::Intransitive);
    }

    #[test]
    fn isomorphism_search() {
        let s4 = PermGroup::symmetric(4);
        assert_eq!(
            permutation_isomorphism(&s4, &s4).unwrap(),
            Some(Permutation::identity(4))
        );
        let c4 = PermGroup::cyclic(4);
        let v4 = group(4, &[&[&[0, 1], &[2, 3]], &[&[0, 2], &[1, 3]]]);
        assert_eq!(permutation_isomorphism(&c4, &v4).unwrap(), None);

        let c4b = group(4, &[&[&[0, 2, 1, 3]]]);
        let b = permutation_isomorphism(&c4, &c4b).unwrap().unwrap();
        assert!(c4.conjugate(&b).unwrap().same_group(&c4b));

        // intransitive groups with several orbits
        let a = group(5, &[&[&[0, 1]], &[&[2, 3, 4]]]);
        let c = group(5, &[&[&[0, 1, 2]], &[&[3, 4]]]);
        let b = permutation_isomorphism(&a, &c).unwrap().unwrap();
        assert!(a.conjugate(&b).unwrap().same_group(&c));
    }

    #[test]
    fn induced_actions() {
        let s4 = PermGroup::symmetric(4);
        let all = induced_action(&s4, &InducedDomain::Set(vec![0, 1, 2, 3])).unwrap();
        assert!(all.kernel().is_trivial());
        let blocks = InducedDomain::Blocks(vec![vec![0, 1], vec![2, 3]]);
        let d8 = group(4, &[&[&[0, 2, 1, 3]], &[&[0, 1]]]);
        let hom = induced_action(&d8, &blocks).unwrap();
        assert_eq!(hom.image().order_u64(), 2);
        assert_eq!(hom.kernel().order_u64(), 4);
        assert!(induced_action(&s4, &InducedDomain::Set(vec![0, 1])).is_err());
    }
}
