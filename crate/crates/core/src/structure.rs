//! Subgroup functors: Sylow subgroups, `O_p`, `O^p`, `Ω₁(Z(X))`, the
//! Thompson subgroup, Frattini subgroups of p-groups, conjugacy classes and
//! the lattice of normal subgroups.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::guards::guards;
use crate::perm::Permutation;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut part = 1;
    while n.is_multiple_of(p) {
        n /= p;
        part *= p;
    }
    part
}

pub fn is_power_of(n: u64, p: u64) -> bool {
    p_part(n, p) == n
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{p} is not prime")))
    }
}

/// A group together with the prime it is claimed to be a p-group for.
#[derive(Debug, Clone)]
pub struct PGroupWitness {
    pub group: PermGroup,
    pub prime: u64,
    /// `|group|` is a power of `prime` (the trivial group counts).
    pub certificate: bool,
}

impl PGroupWitness {
    pub fn certify(group: PermGroup, prime: u64) -> Self {
        let certificate = is_prime(prime) && is_power_of(group.order_u64(), prime);
        PGroupWitness {
            group,
            prime,
            certificate,
        }
    }
}

pub fn is_p_group(g: &PermGroup, p: u64) -> bool {
    is_power_of(g.order_u64(), p)
}

/// The prime of a non-trivial p-group, if it is one.
pub fn p_group_prime(g: &PermGroup) -> Option<u64> {
    match factorize(g.order_u64()).as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}

fn require_p_group(x: &PermGroup, p: u64) -> Result<()> {
    check_prime(p)?;
    if !is_p_group(x, p) {
        return Err(Error::Precondition(format!(
            "group of order {} is not a {p}-group",
            x.order()
        )));
    }
    Ok(())
}

/// A Sylow `p`-subgroup, grown from the first non-trivial p-element in
/// enumeration order by adjoining, at each step, the first element that
/// normalises the current subgroup and has its `p`-th power inside it.
pub fn sylow(g: &PermGroup, p: u64) -> Result<PermGroup> {
    check_prime(p)?;
    let target = p_part(g.order_u64(), p);
    if target == 1 {
        return Ok(PermGroup::trivial(g.degree()));
    }
    let elems = g.elements()?;
    let seed = elems
        .iter()
        .find(|x| !x.is_identity() && is_power_of(x.order(), p))
        .expect("Cauchy: a p-element exists");
    let mut sub = PermGroup::new(g.degree(), vec![seed.clone()])?;
    while sub.order_u64() < target {
        let next = elems
            .iter()
            .find(|x| !sub.contains(x) && sub.contains(&x.pow(p)) && sub.is_normalized_by(x))
            .expect("a non-Sylow p-subgroup has a larger normaliser p-part");
        let mut gens = sub.generators().to_vec();
        gens.push(next.clone());
        sub = PermGroup::new(g.degree(), gens)?;
    }
    Ok(sub)
}

/// `O_p(G)`, the largest normal p-subgroup: the core of a Sylow subgroup.
pub fn o_p(g: &PermGroup, p: u64) -> Result<PermGroup> {
    let s = sylow(g, p)?;
    g.core(&s)
}

/// `O^p(G)`, generated by the p′-parts of all elements.
pub fn o_upper_p(g: &PermGroup, p: u64) -> Result<PermGroup> {
    check_prime(p)?;
    let parts: Vec<Permutation> = g
        .elements()?
        .iter()
        .filter_map(|x| {
            let part = x.pow(p_part(x.order(), p));
            (!part.is_identity()).then_some(part)
        })
        .collect();
    PermGroup::from_candidates(g.degree(), &parts)
}

/// `Ω₁(Z(X))` for a p-group `X`.
pub fn omega1_center(x: &PermGroup, p: u64) -> Result<PermGroup> {
    require_p_group(x, p)?;
    let z = x.center()?;
    let elems = z.elements()?;
    PermGroup::from_candidates(x.degree(), elems.iter().filter(|e| e.order() == p))
}

/// `Φ(X) = [X, X]·X^p` for a p-group `X`.
pub fn frattini_p(x: &PermGroup, p: u64) -> Result<PermGroup> {
    require_p_group(x, p)?;
    let gens = x.generators();
    let mut seeds: Vec<Permutation> = gens.iter().map(|g| g.pow(p)).collect();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            seeds.push(Permutation::commutator(a, b));
        }
    }
    x.normal_closure_of(&seeds)
}

/// Thompson subgroup `J(X)`: generated by the elementary abelian subgroups
/// of `X` of largest order.
pub fn thompson_subgroup(x: &PermGroup, p: u64) -> Result<PermGroup> {
    require_p_group(x, p)?;
    let cap = guards().thompson_order;
    if x.order_u64() > cap {
        return Err(Error::guard("Thompson subgroup order", x.order_u64(), cap));
    }
    let elems = x.elements()?;
    if x.is_abelian() {
        // the unique largest elementary abelian subgroup is Ω₁(X)
        return PermGroup::from_candidates(x.degree(), elems.iter().filter(|e| e.order() == p));
    }
    let max = max_elementary_abelian(elems, p);
    PermGroup::from_candidates(x.degree(), max.iter().map(|&i| &elems[i]))
}

/// Union (as element indices) of all elementary abelian subgroups of maximal
/// order, found by extending commuting sets of order-p elements.
fn max_elementary_abelian(elems: &[Permutation], p: u64) -> Vec<usize> {
    let index: HashMap<&Permutation, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let id = index[&Permutation::identity(elems[0].degree())];
    let order_p: Vec<usize> = (0..elems.len()).filter(|&i| elems[i].order() == p).collect();
    let n = elems.len();
    let words = n.div_ceil(64);
    let mut commute = vec![vec![0u64; words]; n];
    for &a in &order_p {
        for &b in &order_p {
            if elems[a].then(&elems[b]) == elems[b].then(&elems[a]) {
                commute[a][b / 64] |= 1 << (b % 64);
            }
        }
    }
    let mul = |a: usize, b: usize| index[&elems[a].then(&elems[b])];

    struct Search<'a> {
        p: u64,
        commute: &'a [Vec<u64>],
        seen: HashSet<Vec<usize>>,
        best: usize,
        union: HashSet<usize>,
    }

    fn bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
        set.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }

    fn largest_power_at_most(n: usize, p: usize) -> usize {
        let mut q = 1;
        while q * p <= n {
            q *= p;
        }
        q
    }

    fn go(
        s: &mut Search,
        mul: &dyn Fn(usize, usize) -> usize,
        group: Vec<usize>,
        candidates: Vec<u64>,
    ) {
        let free = bits(&candidates).count();
        if largest_power_at_most(group.len() + free, s.p as usize) < s.best {
            return;
        }
        if free == 0 {
            if group.len() > s.best {
                s.best = group.len();
                s.union.clear();
            }
            if group.len() == s.best {
                s.union.extend(group.iter().copied());
            }
            return;
        }
        for c in bits(&candidates).collect::<Vec<_>>() {
            let mut next = group.clone();
            let mut power = c;
            for _ in 1..s.p {
                next.extend(group.iter().map(|&e| mul(e, power)));
                power = mul(power, c);
            }
            next.sort_unstable();
            next.dedup();
            if !s.seen.insert(next.clone()) {
                continue;
            }
            let mut cand: Vec<u64> = candidates
                .iter()
                .zip(&s.commute[c])
                .map(|(a, b)| a & b)
                .collect();
            for &e in &next {
                cand[e / 64] &= !(1 << (e % 64));
            }
            go(s, mul, next, cand);
        }
    }

    let mut start = vec![0u64; words];
    for &i in &order_p {
        start[i / 64] |= 1 << (i % 64);
    }
    let mut s = Search {
        p,
        commute: &commute,
        seen: HashSet::new(),
        best: 1,
        union: HashSet::new(),
    };
    go(&mut s, &mul, vec![id], start);
    let mut out: Vec<usize> = s.union.into_iter().collect();
    out.sort_unstable();
    out
}

#[derive(Debug, Clone)]
pub struct ConjugacyClass {
    pub representative: Permutation,
    pub size: u64,
}

/// Conjugacy classes as element-index sets, in order of first element.
fn class_partition(g: &PermGroup) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
    let elems = g.elements()?;
    let index: HashMap<&Permutation, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut class_of = vec![usize::MAX; elems.len()];
    let mut classes = Vec::new();
    for start in 0..elems.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[start] = id;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for s in g.generators() {
                let j = index[&elems[i].conjugate_by(s)];
                if class_of[j] == usize::MAX {
                    class_of[j] = id;
                    members.push(j);
                    queue.push_back(j);
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    Ok((classes, class_of))
}

pub fn conjugacy_classes(g: &PermGroup) -> Result<Vec<ConjugacyClass>> {
    let (classes, _) = class_partition(g)?;
    let elems = g.elements()?;
    Ok(classes
        .iter()
        .map(|c| ConjugacyClass {
            representative: elems[c[0]].clone(),
            size: c.len() as u64,
        })
        .collect())
}

/// All normal subgroups, as joins of normal closures of classes, sorted by
/// order (ties keep discovery order).
pub fn normal_subgroups(g: &PermGroup) -> Result<Vec<PermGroup>> {
    let classes = conjugacy_classes(g)?;
    let closures = classes
        .iter()
        .map(|c| g.normal_closure_of(std::slice::from_ref(&c.representative)))
        .collect::<Result<Vec<_>>>()?;
    let key = |n: &PermGroup| -> Vec<bool> {
        classes.iter().map(|c| n.contains(&c.representative)).collect()
    };
    let trivial = PermGroup::trivial(g.degree());
    let mut seen: HashSet<Vec<bool>> = HashSet::from([key(&trivial)]);
    let mut found = vec![trivial];
    let mut i = 0;
    while i < found.len() {
        for (c, closure) in classes.iter().zip(&closures) {
            if found[i].contains(&c.representative) {
                continue;
            }
            let joined = found[i].join(closure)?;
            if seen.insert(key(&joined)) {
                found.push(joined);
            }
        }
        i += 1;
    }
    found.sort_by(|a, b| a.order().cmp(b.order()));
    Ok(found)
}

/// Minimal non-trivial normal subgroups.
pub fn minimal_normal(g: &PermGroup) -> Result<Vec<PermGroup>> {
    let all = normal_subgroups(g)?;
    let nontrivial: Vec<&PermGroup> = all.iter().filter(|n| !n.is_trivial()).collect();
    Ok(nontrivial
        .iter()
        .filter(|n| {
            !nontrivial
                .iter()
                .any(|m| m.order() < n.order() && m.is_subgroup_of(n))
        })
        .map(|n| (*n).clone())
        .collect())
}
