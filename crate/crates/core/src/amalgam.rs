//! Amalgams `(A, B, C)` with `C` embedded in both sides through an explicit
//! isomorphism, faithfulness, and the vertex-edge core recursion.

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::hom::ActionHom;
use crate::local::PairInstance;
use crate::perm::Permutation;

#[derive(Debug, Clone)]
pub struct Amalgam {
    pub a: PermGroup,
    pub b: PermGroup,
    pub c_in_a: PermGroup,
    pub c_in_b: PermGroup,
    /// `C_A → C_B`, given by images of the generators of `c_in_a`.
    pub phi: ActionHom,
}

impl Amalgam {
    /// Validates `C_A ≤ A`, `C_B ≤ B` and that the generator images define
    /// an isomorphism `C_A → C_B`.
    pub fn new(
        a: PermGroup,
        b: PermGroup,
        c_in_a: PermGroup,
        c_in_b: PermGroup,
        phi_images: Vec<Permutation>,
    ) -> Result<Self> {
        if !c_in_a.is_subgroup_of(&a) {
            return Err(Error::NotSubgroup("C is not inside A".into()));
        }
        if !c_in_b.is_subgroup_of(&b) {
            return Err(Error::NotSubgroup("C is not inside B".into()));
        }
        let phi = ActionHom::new(c_in_a.clone(), b.degree(), phi_images)?;
        if !phi.is_injective() || !phi.image().same_group(&c_in_b) {
            return Err(Error::NotHomomorphism(
                "identification of C is not an isomorphism onto C_B".into(),
            ));
        }
        Ok(Amalgam {
            a,
            b,
            c_in_a,
            c_in_b,
            phi,
        })
    }

    pub fn index_in_a(&self) -> u64 {
        self.a.index_of(&self.c_in_a).expect("C_A ≤ A")
    }

    pub fn index_in_b(&self) -> u64 {
        self.b.index_of(&self.c_in_b).expect("C_B ≤ B")
    }

    /// `phi(K)` for `K ≤ C_A`.
    pub fn to_b(&self, k: &PermGroup) -> Result<PermGroup> {
        self.phi.image_of_subgroup(k)
    }

    /// `phi⁻¹(K)` for `K ≤ C_B`.
    pub fn to_a(&self, k: &PermGroup) -> Result<PermGroup> {
        self.phi.preimage(k)
    }

    /// `phi⁻¹(core_B(phi(K)))` for `K ≤ C_A`.
    pub fn core_in_b(&self, k: &PermGroup) -> Result<PermGroup> {
        let core = self.b.core(&self.to_b(k)?)?;
        self.to_a(&core)
    }

    fn require_vertex_edge(&self) -> Result<()> {
        let index = self.index_in_b();
        if index != 2 {
            return Err(Error::Precondition(format!(
                "vertex-edge amalgam needs |B : C| = 2, got {index}"
            )));
        }
        Ok(())
    }
}

/// `(G_x, G_{x,y}, G_xy)` for the edge `{x, y}`, with the identity as
/// identification.
pub fn amalgam_from_pair(inst: &PairInstance, x: usize, y: usize) -> Result<Amalgam> {
    inst.graph.check_vertex(x)?;
    inst.graph.check_vertex(y)?;
    if !inst.graph.is_adjacent(x, y) {
        return Err(Error::Graph(format!("{{{x}, {y}}} is not an edge")));
    }
    if !inst.vertex_transitive {
        return Err(Error::Precondition("group is not vertex-transitive".into()));
    }
    let gx = inst.group.stabilizer(x)?;
    let (orbit, gxy) = gx.orbit_and_stabilizer(y)?;
    if orbit.len() != inst.graph.degree(x) {
        return Err(Error::Precondition("local action is not transitive".into()));
    }
    let ge = inst.group.setwise_stabilizer(&[x, y])?;
    let images = gxy.generators().to_vec();
    let am = Amalgam::new(gx, ge, gxy.clone(), gxy, images)?;
    if am.index_in_b() != 2 {
        return Err(Error::Precondition("no element reverses the edge".into()));
    }
    Ok(am)
}

/// Largest subgroup of `C` normal in `A` and, through `phi`, in `B`.
pub fn faithful_kernel(am: &Amalgam) -> Result<PermGroup> {
    let mut n = am.c_in_a.clone();
    loop {
        let next = am.core_in_b(&am.a.core(&n)?)?;
        if next.order() == n.order() {
            return Ok(n);
        }
        n = next;
    }
}

pub fn is_faithful(am: &Amalgam) -> Result<bool> {
    Ok(faithful_kernel(am)?.is_trivial())
}

#[derive(Debug, Clone)]
pub struct CoreSequence {
    /// `G_x^[1], …, G_x^[depth]`.
    pub vertex: Vec<PermGroup>,
    /// `G_xy^[1], …, G_xy^[depth]`, inside `C_A`.
    pub edge: Vec<PermGroup>,
}

impl CoreSequence {
    pub fn vertex_orders(&self) -> Vec<u64> {
        self.vertex.iter().map(PermGroup::order_u64).collect()
    }

    pub fn edge_orders(&self) -> Vec<u64> {
        self.edge.iter().map(PermGroup::order_u64).collect()
    }
}

/// `G_x^[1] = core_A(C)`, `G_xy^[i] = core_B(G_x^[i])`,
/// `G_x^[i+1] = core_A(G_xy^[i])`.
pub fn core_sequence(am: &Amalgam, depth: usize) -> Result<CoreSequence> {
    am.require_vertex_edge()?;
    let mut vertex = Vec::with_capacity(depth);
    let mut edge = Vec::with_capacity(depth);
    let mut current = am.c_in_a.clone();
    for _ in 0..depth {
        let gx = am.a.core(&current)?;
        let gxy = am.core_in_b(&gx)?;
        current = gxy.clone();
        vertex.push(gx);
        edge.push(gxy);
    }
    Ok(CoreSequence { vertex, edge })
}
