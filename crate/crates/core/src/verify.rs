//! Instance-level verifiers for locally `L` pairs, `L = Sym(n)` on ordered
//! pairs: the fixity bound, the structural trace through the subgroups
//! `S_xy`, `Q_x`, `R_i`, `R_i°`, and the Hauptlemma.

use serde_json::{json, Value};

use crate::action::{action_profile, permutation_isomorphism};
use crate::amalgam::{amalgam_from_pair, core_sequence, Amalgam};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::hom::{coset_action, CosetAction};
use crate::local::{ball_stabilizer, edge_ball_stabilizer, is_locally, PairInstance};
use crate::pairs::{build_ordered_pairs, OrderedPairsAction};
use crate::perm::Permutation;
use crate::report::{Report, Status};
use crate::structure::{
    frattini_p, o_p, o_upper_p, omega1_center, p_group_prime, p_part, thompson_subgroup,
};

/// A locally `L` pair, given as a graph with an edge or as a vertex-edge
/// amalgam `(G_x, G_e, G_xy)`.
#[derive(Debug, Clone)]
pub enum LocalInput {
    Graph {
        instance: PairInstance,
        x: usize,
        y: usize,
    },
    Amalgam(Amalgam),
}

impl LocalInput {
    /// Graph input at vertex 0 and its least neighbour.
    pub fn graph(instance: PairInstance) -> Self {
        let y = instance.graph.neighbors(0)[0];
        LocalInput::Graph { instance, x: 0, y }
    }

    fn describe(&self) -> Value {
        match self {
            LocalInput::Graph { instance, x, y } => json!({
                "kind": "graph",
                "vertices": instance.graph.vertex_count(),
                "group_order": instance.group.order_u64(),
                "edge": [x, y],
            }),
            LocalInput::Amalgam(am) => json!({
                "kind": "amalgam",
                "orders": [am.a.order_u64(), am.b.order_u64(), am.c_in_a.order_u64()],
            }),
        }
    }
}

/// `G_x`, `G_e`, `G_xy` in amalgam form with the local action and the
/// pointwise stabilisers the verifiers need.
struct Setting {
    am: Amalgam,
    /// `G_x` on the cosets of `G_xy`; coset 0 stands for `y`.
    local: CosetAction,
    /// `G_x^[1..=3]`
    vertex_cores: Vec<PermGroup>,
    /// `G_xy^[1..=2]`, inside `G_xy`
    edge_cores: Vec<PermGroup>,
    /// `G_y^[1]`, inside `G_xy`
    gy1: PermGroup,
    /// Conjugates the local action onto `L`.
    witness: Permutation,
}

/// Locally-`L` certification; `Err(reason)` when it fails.
fn certify(input: &LocalInput, l: &PermGroup) -> Result<std::result::Result<Permutation, String>> {
    if let LocalInput::Graph { instance, .. } = input {
        if instance.valency() != l.degree() {
            return Ok(Err(format!(
                "valency {} differs from the degree {} of L",
                instance.valency(),
                l.degree()
            )));
        }
        let w = is_locally(instance, l)?;
        if !w.vertex_transitive {
            return Ok(Err("group is not vertex-transitive".into()));
        }
        if !w.holds {
            return Ok(Err(format!(
                "local action of order {} is not permutationally isomorphic to L",
                w.local_order
            )));
        }
    }
    certify_amalgam(&graph_amalgam(input)?, l)
}

fn certify_amalgam(am: &Amalgam, l: &PermGroup) -> Result<std::result::Result<Permutation, String>> {
    if am.index_in_b() != 2 {
        return Ok(Err("not a vertex-edge amalgam: |G_e : G_xy| ≠ 2".into()));
    }
    if am.index_in_a() != l.degree() as u64 {
        return Ok(Err(format!(
            "|G_x : G_xy| = {} differs from the degree {} of L",
            am.index_in_a(),
            l.degree()
        )));
    }
    let local = coset_action(&am.a, &am.c_in_a)?;
    Ok(permutation_isomorphism(local.hom.image(), l)?
        .ok_or_else(|| "local action is not permutationally isomorphic to L".to_string()))
}

fn graph_amalgam(input: &LocalInput) -> Result<Amalgam> {
    match input {
        LocalInput::Graph { instance, x, y } => amalgam_from_pair(instance, *x, *y),
        LocalInput::Amalgam(am) => Ok(am.clone()),
    }
}

impl Setting {
    fn new(input: &LocalInput, witness: Permutation) -> Result<Self> {
        let am = graph_amalgam(input)?;
        let local = coset_action(&am.a, &am.c_in_a)?;
        let (vertex_cores, edge_cores, gy1) = match input {
            LocalInput::Graph { instance, x, y } => {
                let vertex = (1..=3)
                    .map(|r| ball_stabilizer(instance, *x, r))
                    .collect::<Result<Vec<_>>>()?;
                let edge = (1..=2)
                    .map(|r| edge_ball_stabilizer(instance, *x, *y, r))
                    .collect::<Result<Vec<_>>>()?;
                (vertex, edge, ball_stabilizer(instance, *y, 1)?)
            }
            LocalInput::Amalgam(am) => {
                let seq = core_sequence(am, 3)?;
                let gy1 = swap_side(am, &seq.vertex[0])?;
                (seq.vertex, seq.edge[..2].to_vec(), gy1)
            }
        };
        Ok(Setting {
            am,
            local,
            vertex_cores,
            edge_cores,
            gy1,
            witness,
        })
    }

    /// Image of `K ≤ G_x` in the local action.
    fn on_neighbors(&self, k: &PermGroup) -> Result<PermGroup> {
        self.local.hom.image_of_subgroup(k)
    }
}

/// `K^τ` for `K ≤ G_xy` and `τ ∈ G_e ∖ G_xy`, pulled back into `G_xy`.
fn swap_side(am: &Amalgam, k: &PermGroup) -> Result<PermGroup> {
    let tau = am
        .b
        .generators()
        .iter()
        .find(|t| !am.c_in_b.contains(t))
        .ok_or_else(|| Error::Precondition("G_e = G_xy".into()))?;
    am.to_a(&am.to_b(k)?.conjugate(tau)?)
}

/// Radius `r` with `G_x^[r] = 1` guaranteed for locally `L` pairs.
pub fn required_radius(n: usize) -> usize {
    match n {
        3 => 1,
        4 | 6 => 3,
        _ => 2,
    }
}

fn reference(n: usize) -> Result<OrderedPairsAction> {
    build_ordered_pairs(n)
}

const BOUND: &str = "fixity bound for Sym(n) on ordered pairs";

pub fn verify_theorem(input: &LocalInput, n: usize) -> Result<Report> {
    let l = reference(n)?;
    let mut report = Report::new(
        "verify theorem",
        json!({ "n": n, "instance": input.describe() }),
    );
    let witness = match certify(input, &l.group)? {
        Ok(w) => w,
        Err(reason) => {
            report.push(
                "locally L certification",
                Status::Violated,
                "locally L pair",
                json!({ "reason": reason }),
            );
            return Ok(report);
        }
    };
    report.assert(
        "locally L certification",
        true,
        "locally L pair",
        json!({ "bijection": witness.to_string() }),
    );
    let r = required_radius(n);
    let orders: Vec<u64> = match input {
        LocalInput::Graph { instance, x, .. } => (1..=3)
            .map(|i| ball_stabilizer(instance, *x, i).map(|g| g.order_u64()))
            .collect::<Result<_>>()?,
        LocalInput::Amalgam(am) => core_sequence(am, 3)?.vertex_orders(),
    };
    let mut details = json!({ "radius": r, "orders": orders });
    if n == 4 {
        details["sharpness"] = json!(orders[1] != 1);
    }
    report.assert(
        &format!("G_x^[{r}] = 1"),
        orders[r - 1] == 1,
        &format!("{BOUND}: n = {n}"),
        details,
    );
    Ok(report)
}

#[derive(Debug, Clone, Default)]
pub struct ProofTrace {
    pub prime: Option<u64>,
    pub s_xy: Option<PermGroup>,
    pub z_xy: Option<PermGroup>,
    pub q_x: Option<PermGroup>,
    pub q_y: Option<PermGroup>,
    pub z_x: Option<PermGroup>,
    pub z_y: Option<PermGroup>,
    pub r: Vec<PermGroup>,
    pub r_circ: Vec<PermGroup>,
}

const TRACE_CHECKS: [&str; 7] = [
    "centralisers of Q_x and Z_x on Γ(x)",
    "(n, p) in the case table",
    "S_xy = Q_xQ_y",
    "structure of R_i°",
    "characteristic subgroups of Q_xQ_y",
    "G_xy^[2] = 1",
    "[G_x^[2], O^p(R_i°)] ≤ Z(R_i°)",
];

fn anchor(what: &str) -> String {
    format!("fixity bound proof: {what}")
}

fn orders_of(groups: &[PermGroup]) -> Vec<u64> {
    groups.iter().map(PermGroup::order_u64).collect()
}

/// Recomputes the subgroups used in the proof of the fixity bound on one
/// instance and checks the intermediate claims.
pub fn proof_trace(input: &LocalInput, n: usize) -> Result<(ProofTrace, Report)> {
    if !(4..=6).contains(&n) {
        return Err(Error::Precondition(format!("proof trace covers n = 4, 5, 6; got {n}")));
    }
    let l = reference(n)?;
    let mut trace = ProofTrace::default();
    let mut report = Report::new("trace claims", json!({ "n": n, "instance": input.describe() }));
    let witness = match certify(input, &l.group)? {
        Ok(w) => w,
        Err(reason) => {
            report.push(
                "locally L certification",
                Status::Violated,
                "locally L pair",
                json!({ "reason": reason }),
            );
            return Ok((trace, report));
        }
    };
    report.assert("locally L certification", true, "locally L pair", Value::Null);
    let st = Setting::new(input, witness)?;
    let gxy1 = &st.edge_cores[0];
    if gxy1.is_trivial() {
        for name in TRACE_CHECKS {
            report.push(name, Status::Vacuous, &anchor(name), json!({ "reason": "G_xy^[1] = 1" }));
        }
        return Ok((trace, report));
    }
    let Some(p) = p_group_prime(gxy1) else {
        report.assert(
            "G_xy^[1] is a p-group",
            false,
            "p-group structure of G_xy^[1]",
            json!({ "order": gxy1.order_u64() }),
        );
        return Ok((trace, report));
    };
    report.assert(
        "G_xy^[1] is a p-group",
        true,
        "p-group structure of G_xy^[1]",
        json!({ "p": p, "order": gxy1.order_u64() }),
    );
    trace.prime = Some(p);

    let gx = &st.am.a;
    let gxy = &st.am.c_in_a;
    let s_xy = o_p(gxy, p)?;
    let z_xy = omega1_center(&s_xy, p)?;
    let q_x = o_p(&st.vertex_cores[0], p)?;
    let z_x = omega1_center(&q_x, p)?;
    let q_y = o_p(&st.gy1, p)?;
    let z_y = omega1_center(&q_y, p)?;

    let mut claim1 = true;
    let mut claim1_details = Vec::new();
    for (label, sub) in [("C(Q_x)", &q_x), ("C(Z_x)", &z_x)] {
        let c = gx.centralizer(sub)?;
        let profile = action_profile(&st.on_neighbors(&c)?)?;
        claim1 &= !profile.transitive && profile.semiregular;
        claim1_details.push(json!({
            "subgroup": label,
            "order": c.order_u64(),
            "transitive": profile.transitive,
            "semiregular": profile.semiregular,
        }));
    }
    report.assert(TRACE_CHECKS[0], claim1, &anchor("centraliser claim"), json!(claim1_details));

    let in_table = matches!((n, p), (4, 2) | (5, 3) | (6, 2));
    report.assert(TRACE_CHECKS[1], in_table, &anchor("case table"), json!({ "n": n, "p": p }));

    let qq = q_x.join(&q_y)?;
    report.assert(
        TRACE_CHECKS[2],
        qq.same_group(&s_xy),
        &anchor("S_xy = Q_xQ_y"),
        json!({ "s_xy": s_xy.order_u64(), "q_x": q_x.order_u64(), "q_xq_y": qq.order_u64() }),
    );

    // R_i: preimages of the symbol stabilisers T_i ≥ L_ω', ω' the image of y
    let b = &st.witness;
    let (sym_a, sym_b) = l.pair(b.image(0));
    let b_inv = b.inverse();
    let mut r = Vec::new();
    for symbol in [sym_a, sym_b] {
        let t = l.group.setwise_stabilizer(&l.with_coordinate(0, symbol))?;
        r.push(st.local.hom.preimage(&t.conjugate(&b_inv)?)?);
    }
    let r_circ = r
        .iter()
        .map(|ri| ri.normal_closure(&qq))
        .collect::<Result<Vec<_>>>()?;

    let expected_quotient = match n {
        4 => Some(6),
        6 => Some(60),
        _ => None,
    };
    match expected_quotient {
        None => report.push(
            TRACE_CHECKS[3],
            Status::Skipped,
            &anchor("structure of R_i°"),
            json!({ "reason": "no quotient is predicted for n = 5" }),
        ),
        Some(quotient) => {
            let mut ok = true;
            let mut details = Vec::new();
            for rc in &r_circ {
                let op = o_p(rc, p)?;
                let cent = rc.centralizer(&q_x)?;
                let q = rc.order_u64() / q_x.order_u64();
                let sylow = qq.is_subgroup_of(rc) && p_part(rc.order_u64(), p) == qq.order_u64();
                let these = op.same_group(&q_x)
                    && cent.is_subgroup_of(&q_x)
                    && q_x.is_subgroup_of(rc)
                    && q == quotient
                    && sylow;
                ok &= these;
                details.push(json!({
                    "order": rc.order_u64(),
                    "o_p": op.order_u64(),
                    "centralizer_of_q_x": cent.order_u64(),
                    "quotient_order": q,
                    "q_xq_y_sylow": sylow,
                }));
            }
            report.assert(TRACE_CHECKS[3], ok, &anchor("structure of R_i°"), json!(details));
        }
    }

    let family = [
        ("Z", qq.center()?),
        ("Ω₁(Z)", omega1_center(&qq, p)?),
        ("derived", qq.derived_subgroup()?),
        ("Frattini", frattini_p(&qq, p)?),
        ("Thompson", thompson_subgroup(&qq, p)?),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for (label, c) in &family {
        let normal_in: Vec<bool> = r_circ.iter().map(|rc| c.is_normal_in(rc)).collect();
        if !c.is_trivial() {
            ok &= !normal_in.iter().any(|&x| x);
        }
        details.push(json!({ "subgroup": label, "order": c.order_u64(), "normal_in_r_circ": normal_in }));
    }
    report.assert(TRACE_CHECKS[4], ok, &anchor("characteristic subgroups"), json!(details));

    let gxy2 = &st.edge_cores[1];
    report.assert(
        TRACE_CHECKS[5],
        gxy2.is_trivial(),
        &anchor("G_xy^[2] = 1"),
        json!({ "order": gxy2.order_u64(), "generators": gxy2.generators().iter().map(ToString::to_string).collect::<Vec<_>>() }),
    );
    let gx2 = &st.vertex_cores[1];
    let mut ok = true;
    let mut details = Vec::new();
    for rc in &r_circ {
        let comm = PermGroup::commutator(gx2, &o_upper_p(rc, p)?)?;
        let z = rc.center()?;
        ok &= comm.is_subgroup_of(&z);
        details.push(json!({ "commutator": comm.order_u64(), "center": z.order_u64() }));
    }
    report.assert(TRACE_CHECKS[6], ok, &anchor("commutator with G_x^[2]"), json!(details));

    trace.s_xy = Some(s_xy);
    trace.z_xy = Some(z_xy);
    trace.q_x = Some(q_x);
    trace.q_y = Some(q_y);
    trace.z_x = Some(z_x);
    trace.z_y = Some(z_y);
    trace.r = r;
    trace.r_circ = r_circ;
    report.inputs["vertex_core_orders"] = json!(orders_of(&st.vertex_cores));
    report.inputs["edge_core_orders"] = json!(orders_of(&st.edge_cores));
    Ok((trace, report))
}

/// Evaluates the Hauptlemma hypotheses for `K ≤ G_xy`: `K ⊴ G_e` and
/// `N_{G_x}(K)` transitive on `Γ(x)`. All three together with `K ≠ 1`
/// would be a counterexample and are reported as a violation.
pub fn hauptlemma_check(input: &LocalInput, k: &PermGroup) -> Result<Report> {
    let am = graph_amalgam(input)?;
    if !k.is_subgroup_of(&am.c_in_a) {
        return Err(Error::NotSubgroup("K is not inside G_xy".into()));
    }
    let local = coset_action(&am.a, &am.c_in_a)?;
    let normal_in_edge = am.to_b(k)?.is_normal_in(&am.b);
    let normalizer = am.a.normalizer(k)?;
    let transitive = local.hom.image_of_subgroup(&normalizer)?.is_transitive();
    let violation = normal_in_edge && transitive && !k.is_trivial();
    let mut report = Report::new(
        "check hauptlemma",
        json!({ "instance": input.describe(), "k_order": k.order_u64() }),
    );
    report.assert(
        "K = 1 whenever K ⊴ G_e and N_{G_x}(K) is transitive on Γ(x)",
        !violation,
        "Hauptlemma",
        json!({
            "k_in_g_xy": true,
            "k_normal_in_g_e": normal_in_edge,
            "normalizer_transitive": transitive,
            "normalizer_order": normalizer.order_u64(),
            "k_trivial": k.is_trivial(),
            "verdict": if violation { "violation" } else { "consistent" },
        }),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber_product::construct_from_catalog;
    use crate::local::{catalog_graph, regular_sym3_instance};

    #[test]
    fn radii() {
        assert_eq!(
            (3..=8).map(required_radius).collect::<Vec<_>>(),
            vec![1, 3, 2, 3, 2, 2]
        );
    }

    #[test]
    fn theorem_on_constructed_amalgams() {
        let cert = construct_from_catalog(4, "tutte-coxeter").unwrap();
        let report = verify_theorem(&LocalInput::Amalgam(cert.output), 4).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.checks[1].details["sharpness"], true);
        let k4 = construct_from_catalog(4, "k4").unwrap();
        let report = verify_theorem(&LocalInput::Amalgam(k4.output), 4).unwrap();
        assert_eq!(report.checks[1].details["sharpness"], false);
    }

    #[test]
    fn theorem_regular_case() {
        let input = LocalInput::graph(regular_sym3_instance().unwrap());
        let report = verify_theorem(&input, 3).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.checks[1].name, "G_x^[1] = 1");
    }

    #[test]
    fn wrong_local_action_is_reported() {
        let input = LocalInput::graph(catalog_graph("petersen").unwrap());
        let report = verify_theorem(&input, 4).unwrap();
        assert!(!report.passed());
        assert_eq!(report.checks[0].status, Status::Violated);
    }

    #[test]
    fn trace_on_tutte_coxeter_construction() {
        let cert = construct_from_catalog(4, "tutte-coxeter").unwrap();
        let (trace, report) = proof_trace(&LocalInput::Amalgam(cert.output), 4).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(trace.prime, Some(2));
        assert!(report.checks.iter().all(|c| c.status == Status::Pass), "{report}");
    }

    #[test]
    fn trace_is_vacuous_without_fixers() {
        let cert = construct_from_catalog(4, "k4").unwrap();
        let (trace, report) = proof_trace(&LocalInput::Amalgam(cert.output), 4).unwrap();
        assert!(report.passed());
        assert_eq!(trace.prime, None);
        assert!(report.checks[1..].iter().all(|c| c.status == Status::Vacuous));
    }

    #[test]
    fn hauptlemma_cases() {
        let cert = construct_from_catalog(4, "tutte-coxeter").unwrap();
        let am = cert.output.clone();
        let input = LocalInput::Amalgam(cert.output);
        let trivial = PermGroup::trivial(am.a.degree());
        assert!(hauptlemma_check(&input, &trivial).unwrap().passed());
        let gxy1 = core_sequence(&am, 1).unwrap().edge.remove(0);
        let report = hauptlemma_check(&input, &gxy1).unwrap();
        assert!(report.passed());
        assert_eq!(report.checks[0].details["normalizer_transitive"], false);
        assert!(hauptlemma_check(&input, &am.a).is_err());
    }
}
