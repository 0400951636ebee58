//! Deterministic Schreier–Sims stabiliser chains.
//!
//! The base is a caller-supplied prefix followed by the remaining moved
//! points in increasing order. Strong generators are gathered with Knuth's
//! incremental scheme; once the chain is complete every transversal is
//! rebuilt breadth-first over the level's generators in list order, so the
//! stored coset representatives depend only on the generator list.

use num_bigint::BigUint;

use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub base: usize,
    /// Generators of the stabiliser of all earlier base points.
    pub gens: Vec<Permutation>,
    /// Orbit of `base`, in discovery order.
    pub orbit: Vec<usize>,
    /// `slot[p]` indexes `reps`/`reps_inv` for orbit points.
    slot: Vec<Option<u32>>,
    /// `reps[i]` maps `base` to `orbit[i]`.
    pub reps: Vec<Permutation>,
    pub reps_inv: Vec<Permutation>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut slot = vec![None; degree];
        slot[base] = Some(0);
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            slot,
            reps: vec![Permutation::identity(degree)],
            reps_inv: vec![Permutation::identity(degree)],
        }
    }

    #[inline]
    pub fn rep_index(&self, p: usize) -> Option<usize> {
        self.slot[p].map(|i| i as usize)
    }

    fn insert(&mut self, p: usize, rep: Permutation) {
        self.slot[p] = Some(self.orbit.len() as u32);
        self.orbit.push(p);
        self.reps_inv.push(rep.inverse());
        self.reps.push(rep);
    }

    fn rebuild_bfs(&mut self, degree: usize) {
        let base = self.base;
        let gens = std::mem::take(&mut self.gens);
        *self = Level::new(degree, base);
        let mut i = 0;
        while i < self.orbit.len() {
            let p = self.orbit[i];
            for s in &gens {
                let q = s.image(p);
                if self.slot[q].is_none() {
                    let rep = self.reps[i].then(s);
                    self.insert(q, rep);
                }
            }
            i += 1;
        }
        self.gens = gens;
    }
}

#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    pub degree: usize,
    pub levels: Vec<Level>,
}

impl StabChain {
    pub fn empty(degree: usize) -> Self {
        StabChain {
            degree,
            levels: Vec::new(),
        }
    }

    /// Complete chain for `⟨gens⟩` with base starting at `prefix`.
    pub fn build(degree: usize, gens: &[Permutation], prefix: &[usize]) -> Self {
        let mut moved = vec![false; degree];
        for g in gens {
            for x in g.moved_points() {
                moved[x] = true;
            }
        }
        let mut in_base = vec![false; degree];
        let mut base = Vec::new();
        for &b in prefix {
            if !in_base[b] {
                in_base[b] = true;
                base.push(b);
            }
        }
        base.extend((0..degree).filter(|&x| moved[x] && !in_base[x]));
        let mut chain = StabChain {
            degree,
            levels: base.into_iter().map(|b| Level::new(degree, b)).collect(),
        };
        for g in gens {
            chain.add_gen(0, g.clone());
        }
        chain.normalize();
        chain
    }

    /// Adds `g` to the top level; returns whether the group grew. The chain
    /// stays complete but transversals are no longer breadth-first.
    pub fn extend(&mut self, g: &Permutation) -> bool {
        if self.contains(g) {
            return false;
        }
        self.add_gen(0, g.clone());
        true
    }

    pub fn normalize(&mut self) {
        let degree = self.degree;
        for level in &mut self.levels {
            level.rebuild_bfs(degree);
        }
    }

    fn add_gen(&mut self, k: usize, g: Permutation) {
        if g.is_identity() || self.contains_from(k, &g) {
            return;
        }
        if k == self.levels.len() {
            let b = g.moved_points().next().expect("non-identity");
            self.levels.push(Level::new(self.degree, b));
        }
        self.levels[k].gens.push(g.clone());
        let snapshot: Vec<Permutation> = self.levels[k].reps.clone();
        let mut pending: Vec<Permutation> = snapshot.iter().map(|s| s.then(&g)).collect();
        pending.reverse();
        self.drain(k, pending);
    }

    fn drain(&mut self, k: usize, mut pending: Vec<Permutation>) {
        while let Some(tau) = pending.pop() {
            let level = &self.levels[k];
            let j = tau.image(level.base);
            match level.rep_index(j) {
                Some(i) => {
                    let schreier = tau.then(&level.reps_inv[i]);
                    self.add_gen(k + 1, schreier);
                }
                None => {
                    let gens = self.levels[k].gens.clone();
                    self.levels[k].insert(j, tau.clone());
                    for s in gens.iter().rev() {
                        pending.push(tau.then(s));
                    }
                }
            }
        }
    }

    /// Sifts `g` from level `k`; returns the residue and the level at which
    /// sifting stopped (`levels.len()` when every level was passed).
    pub fn sift_from(&self, k: usize, g: &Permutation) -> (Permutation, usize) {
        let mut h = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(k) {
            match level.rep_index(h.image(level.base)) {
                Some(i) => h = h.then(&level.reps_inv[i]),
                None => return (h, l),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains_from(&self, k: usize, g: &Permutation) -> bool {
        let (h, stop) = self.sift_from(k, g);
        stop == self.levels.len() && h.is_identity()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.contains_from(0, g)
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Generators of the pointwise stabiliser of the first `k` base points.
    pub fn stabilizer_gens(&self, k: usize) -> &[Permutation] {
        self.levels.get(k).map_or(&[], |l| l.gens.as_slice())
    }

    /// Calls `f` on every group element, in chain order.
    pub fn for_each_element(&self, mut f: impl FnMut(&Permutation)) {
        fn go(levels: &[Level], k: usize, suffix: &Permutation, f: &mut dyn FnMut(&Permutation)) {
            if k == levels.len() {
                f(suffix);
                return;
            }
            for rep in &levels[k].reps {
                go(levels, k + 1, &rep.then(suffix), f);
            }
        }
        go(&self.levels, 0, &Permutation::identity(self.degree), &mut f);
    }
}
