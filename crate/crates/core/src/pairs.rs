//! `Sym(n)` acting on ordered pairs of distinct symbols, and a checker for
//! the structure of its two-point stabilisers used by the fixity bounds.

use serde_json::json;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::hom::ActionHom;
use crate::perm::Permutation;
use crate::report::{Report, Status};
use crate::structure::{factorize, o_p, o_upper_p, p_part};

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[derive(Debug, Clone)]
pub struct OrderedPairsAction {
    pub n: usize,
    pub group: PermGroup,
}

impl OrderedPairsAction {
    pub fn degree(&self) -> usize {
        self.n * (self.n - 1)
    }

    /// Index of `(a, b)`: `a·(n−1) + (b if b < a else b−1)`.
    pub fn index(&self, a: usize, b: usize) -> usize {
        assert!(a != b && a < self.n && b < self.n, "not a pair of distinct symbols");
        a * (self.n - 1) + if b < a { b } else { b - 1 }
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        let a = i / (self.n - 1);
        let r = i % (self.n - 1);
        (a, if r < a { r } else { r + 1 })
    }

    /// Image of a permutation of the symbols acting coordinatewise.
    pub fn lift(&self, sigma: &Permutation) -> Permutation {
        let images = (0..self.degree())
            .map(|i| {
                let (a, b) = self.pair(i);
                self.index(sigma.image(a), sigma.image(b))
            })
            .collect();
        Permutation::from_images(images).expect("coordinatewise action is a bijection")
    }

    /// Pairs whose `coord`-th entry (0 or 1) equals `symbol`.
    pub fn with_coordinate(&self, coord: usize, symbol: usize) -> Vec<usize> {
        (0..self.degree())
            .filter(|&i| {
                let (a, b) = self.pair(i);
                [a, b][coord] == symbol
            })
            .collect()
    }
}

pub fn build_ordered_pairs(n: usize) -> Result<OrderedPairsAction> {
    if n < 3 {
        return Err(Error::Precondition(format!("ordered-pairs action needs n ≥ 3, got {n}")));
    }
    let mut action = OrderedPairsAction {
        n,
        group: PermGroup::trivial(n * (n - 1)),
    };
    let gens = PermGroup::symmetric(n)
        .generators()
        .iter()
        .map(|s| action.lift(s))
        .collect();
    action.group = PermGroup::new(n * (n - 1), gens)?;
    Ok(action)
}

/// Outcome of the extra clause for one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeClause {
    pub prime: u64,
    pub generated_order: u64,
    pub transitive: bool,
    /// `"alternating"`, `"symmetric"` or `"other"`.
    pub generated_type: &'static str,
}

#[derive(Debug, Clone)]
pub struct LemmaVerification {
    pub report: Report,
    pub clauses: Vec<PrimeClause>,
}

const ANCHOR: &str = "two-point stabiliser lemma";

fn anchor(part: &str) -> String {
    format!("{ANCHOR}: {part}")
}

/// Checks, with `ω = (0, 1)` and `T₁`, `T₂` the stabilisers of the symbols
/// 0 and 1: `L_ω ≤ T_i`; `T_i ≅ Sym(n−1)` through its faithful action on
/// the pairs starting with its fixed symbol; `⟨N_L(L_ω), T_i⟩ = L`;
/// `⟨T₁, T₂⟩ = L`; `T₁`, `T₂` conjugate in `N_L(L_ω)`; and, for each prime
/// `p` with `O_p(L_ω) ≠ 1`, Sylow containment and transitivity of
/// `⟨O^p(T₁), O^p(T₂)⟩`.
pub fn verify_lemma_approx(n: usize) -> Result<LemmaVerification> {
    if n < 4 {
        return Err(Error::Precondition(format!("lemma verifier needs n ≥ 4, got {n}")));
    }
    let act = build_ordered_pairs(n)?;
    let l = &act.group;
    let omega = act.index(0, 1);
    let mut report = Report::new("lemma verify", json!({ "n": n, "omega": [0, 1] }));

    let l_omega = l.stabilizer(omega)?;
    report.assert(
        "point stabiliser order",
        l_omega.order_u64() == factorial(n - 2),
        &anchor("L_ω ≅ Sym(n−2)"),
        json!({ "order": l_omega.order_u64(), "expected": factorial(n - 2) }),
    );

    let t: Vec<PermGroup> = (0..2)
        .map(|symbol| l.setwise_stabilizer(&act.with_coordinate(0, symbol)))
        .collect::<Result<_>>()?;
    for (i, ti) in t.iter().enumerate() {
        let name = format!("T{}", i + 1);
        report.assert(
            &format!("L_ω ≤ {name}"),
            l_omega.is_subgroup_of(ti),
            &anchor("item (1)"),
            json!({ "order": ti.order_u64() }),
        );
        let natural = ActionHom::restriction(ti, &act.with_coordinate(0, i))?;
        let target = factorial(n - 1);
        let ok = ti.order_u64() == target
            && natural.kernel().is_trivial()
            && natural.image().order_u64() == target;
        report.assert(
            &format!("{name} ≅ Sym(n−1)"),
            ok,
            &anchor("item (2)"),
            json!({
                "order": ti.order_u64(),
                "faithful_on": n - 1,
                "image_order": natural.image().order_u64(),
            }),
        );
    }

    let normalizer = l.normalizer(&l_omega)?;
    let edge = l.setwise_stabilizer(&[omega, act.index(1, 0)])?;
    report.assert(
        "N_L(L_ω) = L_{a,b}",
        normalizer.same_group(&edge) && normalizer.index_of(&l_omega)? == 2,
        &anchor("normaliser of L_ω"),
        json!({ "order": normalizer.order_u64(), "index": normalizer.index_of(&l_omega)? }),
    );
    for (i, ti) in t.iter().enumerate() {
        report.assert(
            &format!("⟨N_L(L_ω), T{}⟩ = L", i + 1),
            normalizer.join(ti)?.same_group(l),
            &anchor("item (3)"),
            serde_json::Value::Null,
        );
    }
    report.assert(
        "⟨T1, T2⟩ = L",
        t[0].join(&t[1])?.same_group(l),
        &anchor("item (4)"),
        serde_json::Value::Null,
    );
    let conjugator = normalizer
        .elements()?
        .iter()
        .find(|g| t[0].conjugate(g).map(|c| c.same_group(&t[1])).unwrap_or(false))
        .cloned();
    report.assert(
        "T1, T2 conjugate under N_L(L_ω)",
        conjugator.is_some(),
        &anchor("conjugacy class {T1, T2}"),
        json!({ "conjugator": conjugator.map(|g| g.to_string()) }),
    );

    let derived = l.derived_subgroup()?;
    let mut clauses = Vec::new();
    let mut primes = Vec::new();
    for (p, _) in factorize(l_omega.order_u64()) {
        if !o_p(&l_omega, p)?.is_trivial() {
            primes.push(p);
        }
    }
    if primes.is_empty() {
        report.push(
            "furthermore clause",
            Status::Vacuous,
            &anchor("furthermore clause"),
            json!({ "reason": "O_p(L_ω) = 1 for every prime p" }),
        );
    }
    for p in primes {
        let sylow_ok = t
            .iter()
            .all(|ti| p_part(ti.order_u64(), p) == p_part(l_omega.order_u64(), p));
        report.assert(
            &format!("p = {p}: L_ω contains a Sylow {p}-subgroup of T_i"),
            sylow_ok,
            &anchor("furthermore clause"),
            json!({ "p": p, "sylow_order": p_part(t[0].order_u64(), p) }),
        );
        let generated = o_upper_p(&t[0], p)?.join(&o_upper_p(&t[1], p)?)?;
        let transitive = generated.is_transitive();
        let generated_type = if generated.same_group(l) {
            "symmetric"
        } else if generated.same_group(&derived) {
            "alternating"
        } else {
            "other"
        };
        report.assert(
            &format!("p = {p}: ⟨O^p(T1), O^p(T2)⟩ transitive"),
            transitive,
            &anchor("furthermore clause"),
            json!({ "p": p, "order": generated.order_u64() }),
        );
        report.assert(
            &format!("p = {p}: ⟨O^p(T1), O^p(T2)⟩ ∈ {{Alt(n), Sym(n)}}"),
            generated_type != "other",
            &anchor("furthermore clause"),
            json!({ "p": p, "type": generated_type }),
        );
        clauses.push(PrimeClause {
            prime: p,
            generated_order: generated.order_u64(),
            transitive,
            generated_type,
        });
    }
    Ok(LemmaVerification { report, clauses })
}
