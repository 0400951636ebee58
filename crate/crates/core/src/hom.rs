//! Homomorphisms between permutation groups, given by generator images.
//!
//! A map `g ↦ t(g)` on the generators of `G` is realised through the diagonal
//! group `D = ⟨(t(g), g)⟩` acting on `target ⊔ source` (target points first).
//! The map extends to a homomorphism exactly when `|D| = |G|`; the kernel is
//! the pointwise stabiliser in `D` of the target points, read off the chain.
//! Images and preimages of single elements come from sifting through `D`.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::guards::guards;
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct ActionHom {
    source: PermGroup,
    target_degree: usize,
    generator_images: Vec<Permutation>,
    kernel: PermGroup,
    image: PermGroup,
    target_first: StabChain,
    source_first: OnceLock<StabChain>,
}

fn diagonal(t: &Permutation, g: &Permutation) -> Permutation {
    let m = t.degree();
    let images: Vec<usize> = t.images().chain(g.images().map(|x| x + m)).collect();
    Permutation::from_images_unchecked(images)
}

fn split(d: &Permutation, m: usize) -> (Permutation, Permutation) {
    let all: Vec<usize> = d.images().collect();
    let t = Permutation::from_images_unchecked(all[..m].to_vec());
    let g = Permutation::from_images_unchecked(all[m..].iter().map(|x| x - m).collect());
    (t, g)
}

impl ActionHom {
    pub fn new(
        source: PermGroup,
        target_degree: usize,
        generator_images: Vec<Permutation>,
    ) -> Result<Self> {
        if generator_images.len() != source.generators().len() {
            return Err(Error::NotHomomorphism(format!(
                "{} images for {} generators",
                generator_images.len(),
                source.generators().len()
            )));
        }
        for t in &generator_images {
            if t.degree() != target_degree {
                return Err(Error::DegreeMismatch {
                    expected: target_degree,
                    found: t.degree(),
                });
            }
        }
        let m = target_degree;
        let dgens: Vec<Permutation> = generator_images
            .iter()
            .zip(source.generators())
            .map(|(t, g)| diagonal(t, g))
            .collect();
        let chain = StabChain::build(m + source.degree(), &dgens, &[]);
        if &chain.order() != source.order() {
            return Err(Error::NotHomomorphism(
                "generator images do not satisfy the source relations".into(),
            ));
        }
        let k0 = chain.levels.iter().take_while(|l| l.base < m).count();
        let kernel_gens: Vec<Permutation> = chain
            .stabilizer_gens(k0)
            .iter()
            .map(|d| split(d, m).1)
            .collect();
        let kernel = PermGroup::from_candidates(source.degree(), &kernel_gens)?;
        let image = PermGroup::new(m, generator_images.clone())?;
        Ok(ActionHom {
            source,
            target_degree,
            generator_images,
            kernel,
            image,
            target_first: chain,
            source_first: OnceLock::new(),
        })
    }

    /// Action of `g` on the invariant point set `points`, relabelled in order.
    pub fn restriction(g: &PermGroup, points: &[usize]) -> Result<Self> {
        let imgs = g.restricted_images(points)?;
        ActionHom::new(g.clone(), points.len(), imgs)
    }

    /// Action on the blocks of an invariant partition (block `i` = `blocks[i]`).
    pub fn on_blocks(g: &PermGroup, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut block_of = vec![usize::MAX; g.degree()];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                if x >= g.degree() {
                    return Err(Error::PointOutOfRange {
                        point: x,
                        degree: g.degree(),
                    });
                }
                block_of[x] = i;
            }
        }
        if block_of.contains(&usize::MAX) || blocks.iter().any(Vec::is_empty) {
            return Err(Error::Precondition("not a partition of the domain".into()));
        }
        let imgs = g
            .generators()
            .iter()
            .map(|s| {
                let images: Vec<usize> = blocks
                    .iter()
                    .map(|b| {
                        let target = block_of[s.image(b[0])];
                        if b.iter().all(|&x| block_of[s.image(x)] == target) {
                            Ok(target)
                        } else {
                            Err(Error::Precondition("partition is not invariant".into()))
                        }
                    })
                    .collect::<Result<_>>()?;
                Permutation::from_images(images)
            })
            .collect::<Result<Vec<_>>>()?;
        ActionHom::new(g.clone(), blocks.len(), imgs)
    }

    pub fn source(&self) -> &PermGroup {
        &self.source
    }

    pub fn target_degree(&self) -> usize {
        self.target_degree
    }

    pub fn generator_images(&self) -> &[Permutation] {
        &self.generator_images
    }

    pub fn kernel(&self) -> &PermGroup {
        &self.kernel
    }

    pub fn image(&self) -> &PermGroup {
        &self.image
    }

    pub fn is_injective(&self) -> bool {
        self.kernel.is_trivial()
    }

    /// Image of an arbitrary element of the source group.
    pub fn image_of(&self, g: &Permutation) -> Result<Permutation> {
        let m = self.target_degree;
        let n = self.source.degree();
        if g.degree() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: g.degree(),
            });
        }
        let chain = self.source_first.get_or_init(|| {
            let dgens: Vec<Permutation> = self
                .generator_images
                .iter()
                .zip(self.source.generators())
                .map(|(t, g)| diagonal(t, g))
                .collect();
            let prefix: Vec<usize> = (m..m + n).collect();
            StabChain::build(m + n, &dgens, &prefix)
        });
        let mut r = diagonal(&Permutation::identity(m), g);
        for level in chain.levels.iter().take_while(|l| l.base >= m) {
            match level.rep_index(r.image(level.base)) {
                Some(i) => r = r.then(&level.reps_inv[i]),
                None => break,
            }
        }
        let (t, rest) = split(&r, m);
        if !rest.is_identity() {
            return Err(Error::NotSubgroup("element is not in the source group".into()));
        }
        Ok(t.inverse())
    }

    /// Some preimage of `t`, which must lie in the image.
    pub fn lift(&self, t: &Permutation) -> Result<Permutation> {
        let m = self.target_degree;
        if t.degree() != m {
            return Err(Error::DegreeMismatch {
                expected: m,
                found: t.degree(),
            });
        }
        let mut r = diagonal(t, &Permutation::identity(self.source.degree()));
        for level in self.target_first.levels.iter().take_while(|l| l.base < m) {
            match level.rep_index(r.image(level.base)) {
                Some(i) => r = r.then(&level.reps_inv[i]),
                None => break,
            }
        }
        let (rt, rg) = split(&r, m);
        if !rt.is_identity() {
            return Err(Error::NotSubgroup("element is not in the image".into()));
        }
        Ok(rg.inverse())
    }

    pub fn image_of_subgroup(&self, h: &PermGroup) -> Result<PermGroup> {
        if !h.is_subgroup_of(&self.source) {
            return Err(Error::NotSubgroup("image of a non-subgroup".into()));
        }
        let imgs = h
            .generators()
            .iter()
            .map(|g| self.image_of(g))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::from_candidates(self.target_degree, &imgs)
    }

    /// Full preimage of a subgroup of the image.
    pub fn preimage(&self, k: &PermGroup) -> Result<PermGroup> {
        if !k.is_subgroup_of(&self.image) {
            return Err(Error::NotSubgroup("preimage of a non-subgroup of the image".into()));
        }
        let lifts = k
            .generators()
            .iter()
            .map(|t| self.lift(t))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::from_candidates(
            self.source.degree(),
            self.kernel.generators().iter().chain(lifts.iter()),
        )
    }
}

/// `G` acting on the right cosets of `H` by right multiplication.
#[derive(Clone, Debug)]
pub struct CosetAction {
    pub hom: ActionHom,
    pub subgroup: PermGroup,
    /// `representatives[i]` represents coset `i`; coset 0 is `H` itself.
    pub representatives: Vec<Permutation>,
    index_of: HashMap<Permutation, usize>,
}

/// The lexicographically least element of `Hg` on the base of `H`; unique
/// in its coset.
fn canonical_in_coset(h: &PermGroup, g: &Permutation) -> Permutation {
    let mut c = g.clone();
    for level in &h.chain().levels {
        let best = level
            .orbit
            .iter()
            .enumerate()
            .min_by_key(|(_, &p)| c.image(p))
            .map(|(i, _)| i)
            .expect("orbit is never empty");
        c = level.reps[best].then(&c);
    }
    c
}

impl CosetAction {
    pub fn coset_of(&self, g: &Permutation) -> Option<usize> {
        self.index_of
            .get(&canonical_in_coset(&self.subgroup, g))
            .copied()
    }

    pub fn degree(&self) -> usize {
        self.representatives.len()
    }
}

/// Right-coset action of `g` on `h`; cosets are numbered in breadth-first
/// discovery order over the generators of `g`, starting from `h` itself.
pub fn coset_action(g: &PermGroup, h: &PermGroup) -> Result<CosetAction> {
    if !h.is_subgroup_of(g) {
        return Err(Error::NotSubgroup("coset action needs H ≤ G".into()));
    }
    let index = g.order() / h.order();
    let cap = guards().coset_degree;
    if index > cap.into() {
        return Err(Error::guard("coset action degree", index, cap));
    }
    let id = g.identity();
    let mut reps = vec![id.clone()];
    let mut index_of = HashMap::new();
    index_of.insert(canonical_in_coset(h, &id), 0usize);
    let mut images: Vec<Vec<usize>> = vec![Vec::new(); g.generators().len()];
    let mut i = 0;
    while i < reps.len() {
        for (gi, s) in g.generators().iter().enumerate() {
            let r = reps[i].then(s);
            let key = canonical_in_coset(h, &r);
            let next = reps.len();
            let j = *index_of.entry(key).or_insert(next);
            if j == next {
                reps.push(r);
            }
            images[gi].push(j);
        }
        i += 1;
    }
    let gen_images = images
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<Vec<_>>>()?;
    let hom = ActionHom::new(g.clone(), reps.len(), gen_images)?;
    Ok(CosetAction {
        hom,
        subgroup: h.clone(),
        representatives: reps,
        index_of,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn sign_homomorphism() {
        let s4 = PermGroup::symmetric(4);
        // (0 1) ↦ swap, (0 1 2 3) ↦ swap
        let swap = perm(2, &[&[0, 1]]);
        let hom = ActionHom::new(s4.clone(), 2, vec![swap.clone(), swap.clone()]).unwrap();
        assert_eq!(hom.kernel().order_u64(), 12);
        assert!(hom.kernel().same_group(&PermGroup::alternating(4)));
        let g = perm(4, &[&[0, 1, 2]]);
        assert!(hom.image_of(&g).unwrap().is_identity());
        assert_eq!(hom.image_of(&perm(4, &[&[2, 3]])).unwrap(), swap);
        let l = hom.lift(&swap).unwrap();
        assert_eq!(hom.image_of(&l).unwrap(), swap);
        assert_eq!(hom.preimage(hom.image()).unwrap().order_u64(), 24);
    }

    #[test]
    fn bad_images_rejected() {
        let c3 = PermGroup::cyclic(3);
        let swap = perm(2, &[&[0, 1]]);
        assert!(matches!(
            ActionHom::new(c3, 2, vec![swap]),
            Err(Error::NotHomomorphism(_))
        ));
    }

    #[test]
    fn coset_action_trivial_cases() {
        let s4 = PermGroup::symmetric(4);
        let whole = coset_action(&s4, &s4).unwrap();
        assert_eq!(whole.degree(), 1);
        assert!(whole.hom.kernel().same_group(&s4));

        let stab = s4.stabilizer(0).unwrap();
        let nat = coset_action(&s4, &stab).unwrap();
        assert_eq!(nat.degree(), 4);
        assert!(nat.hom.kernel().is_trivial());
        assert!(nat.hom.image().is_transitive());

        let t = PermGroup::new(4, vec![perm(4, &[&[0, 1]])]).unwrap();
        let twelve = coset_action(&s4, &t).unwrap();
        assert_eq!(twelve.degree(), 12);
        assert!(twelve.hom.kernel().is_trivial());
        assert_eq!(twelve.coset_of(&s4.identity()), Some(0));
        assert_eq!(twelve.coset_of(&perm(4, &[&[0, 1]])), Some(0));
    }

    #[test]
    fn coset_action_needs_subgroup() {
        let s3 = PermGroup::symmetric(3);
        let other = PermGroup::new(3, vec![perm(3, &[&[0, 1, 2]])]).unwrap();
        let s4 = PermGroup::symmetric(4);
        assert!(coset_action(&s3, &other).is_ok());
        assert!(coset_action(&PermGroup::alternating(3), &PermGroup::new(3, vec![perm(3, &[&[0, 1]])]).unwrap()).is_err());
        let _ = s4;
    }

    #[test]
    fn restriction_and_blocks() {
        let s4 = PermGroup::symmetric(4);
        let stab = s4.stabilizer(3).unwrap();
        let r = ActionHom::restriction(&stab, &[0, 1, 2]).unwrap();
        assert_eq!(r.image().order_u64(), 6);
        assert!(r.kernel().is_trivial());
        assert!(ActionHom::restriction(&s4, &[0, 1]).is_err());

        let d4 = PermGroup::new(4, vec![perm(4, &[&[0, 1, 2, 3]]), perm(4, &[&[0, 2]])]).unwrap();
        let blocks = ActionHom::on_blocks(&d4, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(blocks.image().order_u64(), 2);
        assert_eq!(blocks.kernel().order_u64(), 4);
        assert!(ActionHom::on_blocks(&d4, &[vec![0, 1], vec![2, 3]]).is_err());
    }
}
