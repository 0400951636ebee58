//! Building a locally `L` vertex-edge amalgam from a locally `M` one, where
//! `M = L/S` is the action of `L` on the orbits of an intransitive
//! semiregular normal subgroup `S`.
//!
//! The vertex group is the fiber product of `L → M` and `H_x → M` inside
//! `L × H_x`; the edge group is `H_e`, glued along a copy of `H_xy` that
//! fixes a point `ω` of the distinguished block.

use serde_json::json;

use crate::action::{action_profile, permutation_isomorphism};
use crate::amalgam::{core_sequence, faithful_kernel, Amalgam};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::hom::{coset_action, ActionHom};
use crate::local::catalog_graph;
use crate::pairs::build_ordered_pairs;
use crate::perm::Permutation;
use crate::report::Report;
use crate::structure::normal_subgroups;

#[derive(Debug, Clone)]
pub struct FiberProductCertificate {
    pub l: PermGroup,
    pub s: PermGroup,
    /// Orbits of `S`, ordered by least point; block `i` is point `i` of `M`.
    pub blocks: Vec<Vec<usize>>,
    pub m: PermGroup,
    pub h: Amalgam,
    /// `L × H_x` on `L`-points followed by `H_x`-points.
    pub product: PermGroup,
    /// `S × H_x^[1]`.
    pub x: PermGroup,
    /// Maps the cosets of `H_xy` in `H_x` onto the blocks, conjugating the
    /// local action of `H_x` onto `M`.
    pub phi_iso: Permutation,
    pub delta: usize,
    pub omega: usize,
    pub output: Amalgam,
}

/// `(l, h) ↦ l ⊔ h` on the disjoint union of the two domains.
fn pair(l: &Permutation, h: &Permutation) -> Permutation {
    let m = l.degree();
    let images: Vec<usize> = l.images().chain(h.images().map(|x| x + m)).collect();
    Permutation::from_images(images).expect("disjoint union of permutations")
}

fn embed_left(l: &Permutation, h_degree: usize) -> Permutation {
    pair(l, &Permutation::identity(h_degree))
}

fn embed_right(l_degree: usize, h: &Permutation) -> Permutation {
    pair(&Permutation::identity(l_degree), h)
}

/// Copy of a subgroup of `H_x` acting on the second factor only.
pub fn right_copy(l_degree: usize, k: &PermGroup) -> Result<PermGroup> {
    PermGroup::new(
        l_degree + k.degree(),
        k.generators().iter().map(|h| embed_right(l_degree, h)).collect(),
    )
}

pub fn fiber_product_construct(l: &PermGroup, s: &PermGroup, h: &Amalgam) -> Result<FiberProductCertificate> {
    if !s.is_subgroup_of(l) || !s.is_normal_in(l) {
        return Err(Error::Precondition("S is not a normal subgroup of L".into()));
    }
    let profile = action_profile(s)?;
    if !profile.semiregular {
        return Err(Error::Precondition("S is not semiregular".into()));
    }
    if profile.transitive || s.is_trivial() {
        return Err(Error::Precondition("S must be non-trivial and intransitive".into()));
    }
    let blocks = profile.orbits;
    let on_blocks = ActionHom::on_blocks(l, &blocks)?;
    if !on_blocks.kernel().same_group(s) {
        return Err(Error::Precondition("kernel of L on the S-orbits is not S".into()));
    }
    let m = on_blocks.image().clone();

    let (hx, hxy) = (&h.a, &h.c_in_a);
    let local = coset_action(hx, hxy)?;
    let phi_iso = permutation_isomorphism(local.hom.image(), &m)?.ok_or_else(|| {
        Error::Precondition("local action of H is not permutationally isomorphic to L/S".into())
    })?;
    // φ(h) = ρ(h) transported to the blocks, λ(h) a lift to L
    let phi = |g: &Permutation| -> Result<Permutation> {
        Ok(local.hom.image_of(g)?.conjugate_by(&phi_iso))
    };
    let lambda = |g: &Permutation| -> Result<Permutation> { on_blocks.lift(&phi(g)?) };

    let (ld, hd) = (l.degree(), hx.degree());
    let hx1 = local.hom.kernel().clone();
    let product = PermGroup::new(
        ld + hd,
        l.generators()
            .iter()
            .map(|g| embed_left(g, hd))
            .chain(hx.generators().iter().map(|g| embed_right(ld, g)))
            .collect(),
    )?;
    let x_group = PermGroup::new(
        ld + hd,
        s.generators()
            .iter()
            .map(|g| embed_left(g, hd))
            .chain(hx1.generators().iter().map(|g| embed_right(ld, g)))
            .collect(),
    )?;
    let mut gx_gens = x_group.generators().to_vec();
    for g in hx.generators() {
        gx_gens.push(pair(&lambda(g)?, g));
    }
    let gx = PermGroup::new(ld + hd, gx_gens)?;

    let delta = phi_iso.image(0);
    let omega = blocks[delta][0];
    let s_elems = s.elements()?;
    let lambda_omega = |g: &Permutation| -> Result<Permutation> {
        let lg = lambda(g)?;
        let moved = lg.image(omega);
        let fix = s_elems
            .iter()
            .find(|t| t.image(moved) == omega)
            .ok_or_else(|| Error::Precondition("edge group does not fix the block of ω".into()))?;
        Ok(lg.then(fix))
    };
    let gxy_gens = hxy
        .generators()
        .iter()
        .map(|g| Ok(pair(&lambda_omega(g)?, g)))
        .collect::<Result<Vec<_>>>()?;
    let gxy = PermGroup::new(ld + hd, gxy_gens)?;
    let phi_images = hxy
        .generators()
        .iter()
        .map(|g| h.phi.image_of(g))
        .collect::<Result<Vec<_>>>()?;
    let output = Amalgam::new(gx, h.b.clone(), gxy, h.c_in_b.clone(), phi_images)?;
    let index = output.index_in_a();
    if index != ld as u64 {
        return Err(Error::Precondition(format!(
            "|G_x : G_xy| = {index}, expected the degree {ld} of L"
        )));
    }
    Ok(FiberProductCertificate {
        l: l.clone(),
        s: s.clone(),
        blocks,
        m,
        h: h.clone(),
        product,
        x: x_group,
        phi_iso,
        delta,
        omega,
        output,
    })
}

/// The first non-trivial intransitive semiregular normal subgroup of `l`,
/// in increasing order.
pub fn semiregular_normal_subgroup(l: &PermGroup) -> Result<PermGroup> {
    for n in normal_subgroups(l)? {
        if n.is_trivial() {
            continue;
        }
        let p = action_profile(&n)?;
        if p.semiregular && !p.transitive {
            return Ok(n);
        }
    }
    Err(Error::Precondition(
        "no non-trivial intransitive semiregular normal subgroup".into(),
    ))
}

/// Vertex-edge amalgam of a catalog graph at the edge from 0 to its least
/// neighbour.
pub fn catalog_amalgam(name: &str) -> Result<Amalgam> {
    let inst = catalog_graph(name)?;
    let y = inst.graph.neighbors(0)[0];
    crate::amalgam::amalgam_from_pair(&inst, 0, y)
}

/// The construction for `L = Sym(n)` on ordered pairs with `S` found by
/// [`semiregular_normal_subgroup`] and `H` from the catalog.
pub fn construct_from_catalog(n: usize, h_name: &str) -> Result<FiberProductCertificate> {
    let l = build_ordered_pairs(n)?.group;
    let s = semiregular_normal_subgroup(&l)?;
    let h = catalog_amalgam(h_name)?;
    fiber_product_construct(&l, &s, &h)
}

const ANCHOR: &str = "fiber-product amalgam";

/// Checks the output amalgam against `H` and `L`: equal core sequences
/// (as subgroups of `1 × H_x`), faithfulness, local action `L`, and
/// `G_xy ∩ (S × 1) = 1`.
pub fn verify_fiber_product(cert: &FiberProductCertificate, depth: usize) -> Result<Report> {
    let out = &cert.output;
    let ld = cert.l.degree();
    let mut report = Report::new(
        "construct fiber-product",
        json!({
            "l_degree": ld,
            "l_order": cert.l.order_u64(),
            "s_order": cert.s.order_u64(),
            "h_orders": [cert.h.a.order_u64(), cert.h.b.order_u64(), cert.h.c_in_a.order_u64()],
            "delta": cert.delta,
            "omega": cert.omega,
            "depth": depth,
        }),
    );
    let orders = [out.a.order_u64(), out.b.order_u64(), out.c_in_a.order_u64()];
    report.assert(
        "index |G_x : G_xy| equals the degree of L",
        out.index_in_a() == ld as u64,
        &format!("{ANCHOR}: index"),
        json!({ "orders": orders, "index": out.index_in_a() }),
    );
    report.assert(
        "G_xy ≅ H_xy",
        out.c_in_a.order() == cert.h.c_in_a.order(),
        &format!("{ANCHOR}: edge group projection"),
        json!({ "g_xy": out.c_in_a.order_u64(), "h_xy": cert.h.c_in_a.order_u64() }),
    );

    let ours = core_sequence(out, depth)?;
    let theirs = core_sequence(&cert.h, depth)?;
    let mut same = ours.vertex_orders() == theirs.vertex_orders();
    for (g, h) in ours.vertex.iter().zip(&theirs.vertex) {
        same &= g.same_group(&right_copy(ld, h)?);
    }
    report.assert(
        "G_x^[i] = 1 × H_x^[i]",
        same,
        &format!("{ANCHOR}: core sequence"),
        json!({ "orders": ours.vertex_orders(), "h_orders": theirs.vertex_orders() }),
    );

    let kernel = faithful_kernel(out)?;
    report.assert(
        "output amalgam is faithful",
        kernel.is_trivial(),
        &format!("{ANCHOR}: faithfulness"),
        json!({ "kernel_order": kernel.order_u64() }),
    );

    let local = coset_action(&out.a, &out.c_in_a)?;
    let iso = permutation_isomorphism(local.hom.image(), &cert.l)?;
    report.assert(
        "G_x on cosets of G_xy is permutationally isomorphic to L",
        iso.is_some(),
        &format!("{ANCHOR}: local action"),
        json!({ "bijection": iso.map(|b| b.to_string()) }),
    );

    let s_left = PermGroup::new(
        out.a.degree(),
        cert.s.generators().iter().map(|g| embed_left(g, cert.h.a.degree())).collect(),
    )?;
    let meet = out.c_in_a.intersection(&s_left)?;
    report.assert(
        "G_xy ∩ (S × 1) = 1",
        meet.is_trivial(),
        &format!("{ANCHOR}: edge group meets S trivially"),
        json!({ "order": meet.order_u64() }),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tutte_coxeter_orders() {
        let cert = construct_from_catalog(4, "tutte-coxeter").unwrap();
        assert_eq!(cert.s.order_u64(), 4);
        assert_eq!(cert.x.order_u64(), 32);
        let out = &cert.output;
        assert_eq!(
            [out.a.order_u64(), out.b.order_u64(), out.c_in_a.order_u64()],
            [192, 32, 16]
        );
        assert!(out.a.is_subgroup_of(&cert.product));
        assert!(cert.blocks[cert.delta].contains(&cert.omega));
        let report = verify_fiber_product(&cert, 3).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn small_inputs() {
        for (name, gx, gxy) in [("k4", 24, 2), ("petersen", 48, 4), ("heawood", 96, 8)] {
            let cert = construct_from_catalog(4, name).unwrap();
            assert_eq!(cert.output.a.order_u64(), gx, "{name}");
            assert_eq!(cert.output.c_in_a.order_u64(), gxy, "{name}");
            assert!(verify_fiber_product(&cert, 3).unwrap().passed(), "{name}");
        }
    }

    #[test]
    fn rejects_bad_s() {
        let l = build_ordered_pairs(4).unwrap().group;
        let h = catalog_amalgam("k4").unwrap();
        // A4 is transitive
        let a4 = l.derived_subgroup().unwrap();
        assert!(fiber_product_construct(&l, &a4, &h).is_err());
        // a point stabiliser is not normal
        let stab = l.stabilizer(0).unwrap();
        assert!(fiber_product_construct(&l, &stab, &h).is_err());
        // Sym(5) on pairs has no semiregular intransitive normal subgroup
        assert!(construct_from_catalog(5, "k4").is_err());
    }
}
