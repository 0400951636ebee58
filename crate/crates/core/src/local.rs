//! Graphs with a group of automorphisms: local actions, pointwise ball
//! stabilisers `G_x^[r]`, coset graphs and the cubic catalog.

use std::collections::BTreeSet;

use crate::action::permutation_isomorphism;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::PermGroup;
use crate::hom::{coset_action, ActionHom};
use crate::pairs::OrderedPairsAction;
use crate::perm::Permutation;

#[derive(Debug, Clone)]
pub struct PairInstance {
    pub graph: Graph,
    pub group: PermGroup,
    pub vertex_transitive: bool,
    pub local_action_reference: Option<OrderedPairsAction>,
}

impl PairInstance {
    /// Checks that `group` acts on the vertices by automorphisms.
    pub fn new(graph: Graph, group: PermGroup) -> Result<Self> {
        if group.degree() != graph.vertex_count() {
            return Err(Error::DegreeMismatch {
                expected: graph.vertex_count(),
                found: group.degree(),
            });
        }
        if let Some(bad) = group.generators().iter().find(|g| !graph.preserves_adjacency(g)) {
            return Err(Error::Graph(format!("{bad} is not an automorphism")));
        }
        let vertex_transitive = group.is_transitive();
        Ok(PairInstance {
            graph,
            group,
            vertex_transitive,
            local_action_reference: None,
        })
    }

    pub fn with_reference(mut self, reference: OrderedPairsAction) -> Self {
        self.local_action_reference = Some(reference);
        self
    }

    pub fn valency(&self) -> usize {
        self.graph.degree(0)
    }
}

/// `G_x` acting on the sorted neighbours of `x`; the kernel is `G_x^[1]`.
pub fn local_action(inst: &PairInstance, x: usize) -> Result<ActionHom> {
    inst.graph.check_vertex(x)?;
    let gx = inst.group.stabilizer(x)?;
    ActionHom::restriction(&gx, inst.graph.neighbors(x))
}

/// `G_x^[r]`, the pointwise stabiliser of the ball of radius `r` about `x`.
pub fn ball_stabilizer(inst: &PairInstance, x: usize, r: usize) -> Result<PermGroup> {
    inst.graph.check_vertex(x)?;
    inst.group.pointwise_stabilizer(&inst.graph.ball(x, r))
}

/// `G_xy^[r] = G_x^[r] ∩ G_y^[r]`.
pub fn edge_ball_stabilizer(inst: &PairInstance, x: usize, y: usize, r: usize) -> Result<PermGroup> {
    inst.graph.check_vertex(x)?;
    inst.graph.check_vertex(y)?;
    let mut points = inst.graph.ball(x, r);
    points.extend(inst.graph.ball(y, r));
    points.sort_unstable();
    points.dedup();
    inst.group.pointwise_stabilizer(&points)
}

/// Orders `|G_x^[r]|` for `r = 0..=r_max`.
pub fn ball_series(inst: &PairInstance, x: usize, r_max: usize) -> Result<Vec<u64>> {
    (0..=r_max)
        .map(|r| ball_stabilizer(inst, x, r).map(|g| g.order_u64()))
        .collect()
}

/// Graph on the right cosets of `x`, with `Xg ~ Xh` when a right coset of
/// `e` meets both. Vertex 0 is `X`; the group is the image of `g` acting on
/// cosets. Degenerate incidence is refused.
pub fn coset_graph(g: &PermGroup, x: &PermGroup, e: &PermGroup) -> Result<PairInstance> {
    if !x.is_subgroup_of(g) || !e.is_subgroup_of(g) {
        return Err(Error::NotSubgroup("coset graph needs X, E ≤ G".into()));
    }
    let xe = x.intersection(e)?;
    let index = e.index_of(&xe)?;
    if index != 2 {
        return Err(Error::Precondition(format!("|E : X ∩ E| = {index}, expected 2")));
    }
    if !x.join(e)?.same_group(g) {
        return Err(Error::Precondition("⟨X, E⟩ ≠ G, coset graph would be disconnected".into()));
    }
    let cosets = coset_action(g, x)?;
    let swap = e
        .generators()
        .iter()
        .find(|s| !x.contains(s))
        .expect("index 2 forces a generator outside X");
    let neighbor = cosets.coset_of(swap).expect("every element lies in a coset");
    let images = cosets.hom.generator_images();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::from([(0, neighbor)]);
    let mut stack = vec![(0, neighbor)];
    while let Some((u, v)) = stack.pop() {
        for s in images {
            let (a, b) = (s.image(u), s.image(v));
            if edges.insert((a.min(b), a.max(b))) {
                stack.push((a.min(b), a.max(b)));
            }
        }
    }
    let expected = g.index_of(e)?;
    if edges.len() as u64 != expected {
        return Err(Error::Graph(format!(
            "degenerate incidence: {} edges for {expected} cosets of E",
            edges.len()
        )));
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    let graph = Graph::new(cosets.degree(), &edges)?;
    PairInstance::new(graph, cosets.hom.image().clone())
}

#[derive(Debug, Clone)]
pub struct LocallyWitness {
    pub holds: bool,
    pub vertex_transitive: bool,
    pub local_order: u64,
    /// Maps neighbour positions of vertex 0 onto the points of `L`.
    pub bijection: Option<Permutation>,
}

/// Whether `(Γ, G)` is locally `l`, checked at vertex 0.
pub fn is_locally(inst: &PairInstance, l: &PermGroup) -> Result<LocallyWitness> {
    if inst.valency() != l.degree() {
        return Err(Error::DegreeMismatch {
            expected: inst.valency(),
            found: l.degree(),
        });
    }
    let local = local_action(inst, 0)?;
    let bijection = if inst.vertex_transitive {
        permutation_isomorphism(local.image(), l)?
    } else {
        None
    };
    Ok(LocallyWitness {
        holds: bijection.is_some(),
        vertex_transitive: inst.vertex_transitive,
        local_order: local.image().order_u64(),
        bijection,
    })
}

pub const CATALOG: [&str; 5] = ["k4", "k33", "petersen", "heawood", "tutte-coxeter"];

fn lcf(n: usize, jumps: &[i64]) -> Vec<(usize, usize)> {
    let mut edges = BTreeSet::new();
    for i in 0..n {
        edges.insert((i.min((i + 1) % n), i.max((i + 1) % n)));
        let j = (i as i64 + jumps[i % jumps.len()]).rem_euclid(n as i64) as usize;
        edges.insert((i.min(j), i.max(j)));
    }
    edges.into_iter().collect()
}

/// Edge list of a catalog graph.
pub fn catalog_edges(name: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    Ok(match name {
        "k4" => (4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        "k33" => (
            6,
            (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect(),
        ),
        "petersen" => {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((i + 5, (i + 2) % 5 + 5));
            }
            (10, edges)
        }
        "heawood" => (14, lcf(14, &[5, -5])),
        "tutte-coxeter" => (30, lcf(30, &[-13, -9, 7, -7, 9, 13])),
        _ => {
            return Err(Error::Precondition(format!(
                "unknown catalog graph {name:?} (known: {})",
                CATALOG.join(", ")
            )))
        }
    })
}

/// A catalog graph with its full automorphism group.
pub fn catalog_graph(name: &str) -> Result<PairInstance> {
    let (n, edges) = catalog_edges(name)?;
    let graph = Graph::new(n, &edges)?;
    let group = graph.automorphisms()?;
    PairInstance::new(graph, group)
}

/// A locally regular-`Sym(3)` pair on 12 vertices of valency 6: the coset
/// graph of `Sym(3) ≀ C2` with vertex group `Sym(3) × 1` and edge group
/// generated by the coordinate swap. `Sym(3)` acting on ordered pairs of
/// three symbols is regular, so this is a locally `L` pair for `n = 3`.
pub fn regular_sym3_instance() -> Result<PairInstance> {
    let p = |c: &[&[usize]]| Permutation::from_cycles(6, c);
    let wreath = PermGroup::new(6, vec![p(&[&[0, 1]])?, p(&[&[0, 1, 2]])?, p(&[&[0, 3], &[1, 4], &[2, 5]])?])?;
    let x = PermGroup::new(6, vec![p(&[&[0, 1]])?, p(&[&[0, 1, 2]])?])?;
    let e = PermGroup::new(6, vec![p(&[&[0, 3], &[1, 4], &[2, 5]])?])?;
    let inst = coset_graph(&wreath, &x, &e)?;
    Ok(inst.with_reference(crate::pairs::build_ordered_pairs(3)?))
}
