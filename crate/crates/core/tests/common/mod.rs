//! Shared strategies, brute-force oracles and property bodies for the
//! integration suites.
#![allow(dead_code)]

use std::sync::OnceLock;

use amalgamlab::amalgam::{amalgam_from_pair, core_sequence};
use amalgamlab::graph::Graph;
use amalgamlab::hom::coset_action;
use amalgamlab::local::{ball_series, ball_stabilizer, catalog_graph, PairInstance, CATALOG};
use amalgamlab::structure::{
    factorize, is_p_group, normal_subgroups, o_p, o_upper_p, sylow, thompson_subgroup,
};
use amalgamlab::{PermGroup, Permutation};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
    Permutation::from_cycles(n, cycles).unwrap()
}

/// Ambient groups of order at most 2000 that random subgroups are cut from.
pub fn ambients() -> &'static [PermGroup] {
    static AMBIENTS: OnceLock<Vec<PermGroup>> = OnceLock::new();
    AMBIENTS.get_or_init(|| {
        let g = |n: usize, gens: &[&[&[usize]]]| {
            PermGroup::new(n, gens.iter().map(|c| perm(n, c)).collect()).unwrap()
        };
        vec![
            PermGroup::symmetric(4),
            PermGroup::symmetric(5),
            PermGroup::symmetric(6),
            // Sym(3) ≀ C2, order 72
            g(6, &[&[&[0, 1]], &[&[0, 1, 2]], &[&[0, 3], &[1, 4], &[2, 5]]]),
            // Sym(4) ≀ C2, order 1152
            g(8, &[&[&[0, 1]], &[&[0, 1, 2, 3]], &[&[0, 4], &[1, 5], &[2, 6], &[3, 7]]]),
            // AGL(1, 7), order 42
            g(7, &[&[&[0, 1, 2, 3, 4, 5, 6]], &[&[1, 3, 2, 6, 4, 5]]]),
            // dihedral of order 16
            g(8, &[&[&[0, 1, 2, 3, 4, 5, 6, 7]], &[&[1, 7], &[2, 6], &[3, 5]]]),
            // C2 ≀ C3 on 6 points, order 48
            g(6, &[&[&[0, 1]], &[&[0, 2, 4], &[1, 3, 5]]]),
        ]
    })
}

/// A subgroup of a random ambient group generated by 1–3 random elements.
pub fn small_group() -> impl Strategy<Value = PermGroup> {
    (0..ambients().len(), prop::collection::vec(any::<prop::sample::Index>(), 1..=3)).prop_map(
        |(a, picks)| {
            let ambient = &ambients()[a];
            let elems = ambient.elements().unwrap();
            let gens = picks.iter().map(|i| elems[i.index(elems.len())].clone()).collect();
            PermGroup::new(ambient.degree(), gens).unwrap()
        },
    )
}

/// An ambient group together with a subgroup generated by random elements.
pub fn group_and_subgroup() -> impl Strategy<Value = (PermGroup, PermGroup)> {
    (0..ambients().len(), prop::collection::vec(any::<prop::sample::Index>(), 0..=2)).prop_map(
        |(a, picks)| {
            let ambient = ambients()[a].clone();
            let elems = ambient.elements().unwrap();
            let gens = picks.iter().map(|i| elems[i.index(elems.len())].clone()).collect();
            let sub = PermGroup::new(ambient.degree(), gens).unwrap();
            (ambient, sub)
        },
    )
}

pub fn catalog() -> &'static [PairInstance] {
    static CAT: OnceLock<Vec<PairInstance>> = OnceLock::new();
    CAT.get_or_init(|| CATALOG.iter().map(|n| catalog_graph(n).unwrap()).collect())
}

/// Every automorphism of `g`, by depth-first assignment in vertex order with
/// an adjacency check against all earlier vertices.
pub fn brute_force_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    fn go(g: &Graph, image: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let v = image.len();
        if v == g.vertex_count() {
            out.push(image.clone());
            return;
        }
        for w in 0..g.vertex_count() {
            if used[w] || g.degree(v) != g.degree(w) {
                continue;
            }
            if (0..v).all(|u| g.is_adjacent(u, v) == g.is_adjacent(image[u], w)) {
                used[w] = true;
                image.push(w);
                go(g, image, used, out);
                image.pop();
                used[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(g, &mut Vec::new(), &mut vec![false; g.vertex_count()], &mut out);
    out
}

/// `[|G_x^[0]|, …, |G_x^[r_max]|]` by filtering a full automorphism list.
pub fn brute_force_ball_series(g: &Graph, autos: &[Vec<usize>], x: usize, r_max: usize) -> Vec<u64> {
    let dist = g.distances_from(x);
    (0..=r_max)
        .map(|r| {
            autos
                .iter()
                .filter(|a| (0..g.vertex_count()).all(|v| dist[v] > r || a[v] == v))
                .count() as u64
        })
        .collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

pub fn orbit_stabilizer(g: &PermGroup, point: prop::sample::Index) -> Result<(), TestCaseError> {
    let x = point.index(g.degree());
    let (orbit, stab) = g.orbit_and_stabilizer(x).unwrap();
    check(
        orbit.len() as u64 * stab.order_u64() == g.order_u64(),
        || format!("|{x}^G| · |G_{x}| ≠ |G| for {g:?}"),
    )
}

pub fn core_is_coset_kernel(g: &PermGroup, h: &PermGroup) -> Result<(), TestCaseError> {
    let core = g.core(h).unwrap();
    let kernel = coset_action(g, h).unwrap().hom.kernel().clone();
    check(core.same_group(&kernel), || format!("core ≠ kernel for {h:?} in {g:?}"))?;
    check(core.is_normal_in(g) && core.is_subgroup_of(h), || "core not normal in G".into())
}

pub fn o_p_contains_normal_p_subgroups(g: &PermGroup) -> Result<(), TestCaseError> {
    let normals = normal_subgroups(g).unwrap();
    for (p, _) in factorize(g.order_u64()) {
        let op = o_p(g, p).unwrap();
        check(is_p_group(&op, p) && op.is_normal_in(g), || format!("O_{p} malformed"))?;
        for n in normals.iter().filter(|n| is_p_group(n, p)) {
            check(n.is_subgroup_of(&op), || format!("normal {p}-subgroup outside O_{p}"))?;
        }
    }
    Ok(())
}

/// `J(Y) = J(X)` whenever `J(X) ≤ Y ≤ X`, on a Sylow subgroup `X`.
pub fn thompson_hereditary(
    g: &PermGroup,
    pick_prime: prop::sample::Index,
    extra: &[prop::sample::Index],
) -> Result<(), TestCaseError> {
    let primes = factorize(g.order_u64());
    if primes.is_empty() {
        return Ok(());
    }
    let p = primes[pick_prime.index(primes.len())].0;
    let x = sylow(g, p).unwrap();
    let j = thompson_subgroup(&x, p).unwrap();
    let elems = x.elements().unwrap();
    let mut gens = j.generators().to_vec();
    gens.extend(extra.iter().map(|i| elems[i.index(elems.len())].clone()));
    let y = PermGroup::new(x.degree(), gens).unwrap();
    let jy = thompson_subgroup(&y, p).unwrap();
    check(jy.same_group(&j), || format!("J(Y) ≠ J(X) for p = {p}"))
}

/// `[X,S] = [X,S,S]` for a q-subgroup `S`, and
/// `[X,O^p(R),O^p(R)] = [X,O^p(R)]`, with `R` acting on `X = O_p(R)`.
pub fn coprime_action(r: &PermGroup, pick: prop::sample::Index) -> Result<(), TestCaseError> {
    let primes = factorize(r.order_u64());
    if primes.is_empty() {
        return Ok(());
    }
    let p = primes[pick.index(primes.len())].0;
    let x = o_p(r, p).unwrap();
    for &(q, _) in primes.iter().filter(|(q, _)| *q != p) {
        let s = sylow(r, q).unwrap();
        let xs = PermGroup::commutator(&x, &s).unwrap();
        let xss = PermGroup::commutator(&xs, &s).unwrap();
        check(xs.same_group(&xss), || format!("[X,S] ≠ [X,S,S] for p = {p}, q = {q}"))?;
    }
    let opr = o_upper_p(r, p).unwrap();
    let once = PermGroup::commutator(&x, &opr).unwrap();
    let twice = PermGroup::commutator(&once, &opr).unwrap();
    check(once.same_group(&twice), || format!("[X,O^p(R)] not stable for p = {p}"))
}

pub fn ball_nesting(
    inst: prop::sample::Index,
    vertex: prop::sample::Index,
    r: usize,
) -> Result<(), TestCaseError> {
    let inst = &catalog()[inst.index(catalog().len())];
    let x = vertex.index(inst.graph.vertex_count());
    let outer = ball_stabilizer(inst, x, r).unwrap();
    let inner = ball_stabilizer(inst, x, r + 1).unwrap();
    check(inner.is_subgroup_of(&outer), || format!("G_x^[{}] ⊄ G_x^[{r}]", r + 1))
}

pub fn cores_match_balls(inst: prop::sample::Index, edge: prop::sample::Index) -> Result<(), TestCaseError> {
    let inst = &catalog()[inst.index(catalog().len())];
    let edges = inst.graph.edges();
    let (x, y) = edges[edge.index(edges.len())];
    let am = amalgam_from_pair(inst, x, y).unwrap();
    let cores = core_sequence(&am, 3).unwrap().vertex_orders();
    let balls = ball_series(inst, x, 3).unwrap();
    check(cores == balls[1..], || format!("cores {cores:?} vs balls {balls:?} at {{{x}, {y}}}"))
}
