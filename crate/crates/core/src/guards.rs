//! Resource guards for the exhaustive algorithms.
//!
//! Every search that could blow up is bounded by one of these values; going
//! over a bound is reported as [`Error::GuardExceeded`](crate::Error), never
//! approximated. Defaults can be overridden process-wide through the
//! `AMALGAMLAB_GUARD_ELEMENTS` and `AMALGAMLAB_GUARD_DEGREE` environment
//! variables, or for a single thread with [`with_guards`].

use std::cell::RefCell;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Largest group that may be enumerated element by element.
    pub elements: u64,
    /// Largest coset-action degree.
    pub coset_degree: u64,
    /// Largest group order accepted by `PermGroup` construction.
    pub order: u128,
    /// Largest degree for setwise-stabiliser backtracking.
    pub setwise_degree: usize,
    /// Largest vertex count for automorphism search.
    pub graph_vertices: usize,
    /// Largest degree for permutation-isomorphism search.
    pub iso_degree: usize,
    /// Largest p-group handed to the Thompson-subgroup search.
    pub thompson_order: u64,
    /// Largest number of leaves a chain backtrack may visit.
    pub backtrack_leaves: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            elements: 200_000,
            coset_degree: 100_000,
            order: 1_000_000_000_000,
            setwise_degree: 512,
            graph_vertices: 200,
            iso_degree: 64,
            thompson_order: 4096,
            backtrack_leaves: 20_000_000,
        }
    }
}

impl Guards {
    pub fn from_env() -> Self {
        let mut g = Guards::default();
        if let Some(v) = env_u64("AMALGAMLAB_GUARD_ELEMENTS") {
            g.elements = v;
        }
        if let Some(v) = env_u64("AMALGAMLAB_GUARD_DEGREE") {
            g.coset_degree = v;
        }
        g
    }
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok()?.trim().parse().ok()
}

static GLOBAL: OnceLock<Guards> = OnceLock::new();

thread_local! {
    static OVERRIDE: RefCell<Option<Guards>> = const { RefCell::new(None) };
}

/// The guards in effect on the current thread.
pub fn guards() -> Guards {
    OVERRIDE
        .with(|o| *o.borrow())
        .unwrap_or_else(|| *GLOBAL.get_or_init(Guards::from_env))
}

/// Runs `f` with `g` as the current thread's guards.
pub fn with_guards<T>(g: Guards, f: impl FnOnce() -> T) -> T {
    struct Restore(Option<Guards>);
    impl Drop for Restore {
        fn drop(&mut self) {
            OVERRIDE.with(|o| *o.borrow_mut() = self.0);
        }
    }
    let prev = OVERRIDE.with(|o| o.borrow_mut().replace(g));
    let _restore = Restore(prev);
    f()
}
