//! Seeded random formula generation for the property suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::TruthValue;
use crate::syntax::{desugar_value, AgentId, Formula};

/// Vocabulary and shape options for [`FormulaGen`].
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub atoms: Vec<String>,
    pub agents: Vec<AgentId>,
    /// Values used for truth-constant leaves (0 and 1 become `bot` and `top`).
    pub constants: Vec<TruthValue>,
    /// Values used as value-formula thresholds.
    pub thresholds: Vec<TruthValue>,
    /// Expand value formulas inside announcement bodies as they are generated.
    /// Depth bounds then apply to the bodies before expansion.
    pub desugar_bodies: bool,
}

impl GenConfig {
    /// Atoms `p`, `q`, agent `a`, constants {1/3, 1/2}, thresholds {0, 1/3, 1/2, 1}.
    pub fn standard() -> Self {
        let v = |n, d| TruthValue::new(n, d).expect("valid");
        GenConfig {
            atoms: vec!["p".into(), "q".into()],
            agents: vec![AgentId::new("a").expect("valid")],
            constants: vec![v(1, 3), v(1, 2)],
            thresholds: vec![TruthValue::ZERO, v(1, 3), v(1, 2), TruthValue::ONE],
            desugar_bodies: false,
        }
    }
}

/// Random formulas of bounded depth. Depth is counted as in
/// [`Formula::depth`], so every generated formula has depth at most the
/// requested bound (and at least 1).
pub struct FormulaGen {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

impl FormulaGen {
    pub fn new(cfg: GenConfig, seed: u64) -> Self {
        FormulaGen {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    fn leaf(&mut self, constants: bool) -> Formula {
        let k = self.rng.gen_range(0..if constants { 10 } else { 8 });
        match k {
            0 => Formula::Bottom,
            1..=7 => Formula::atom(self.cfg.atoms.choose(&mut self.rng).expect("atoms").clone()),
            _ => Formula::constant(
                self.cfg
                    .constants
                    .choose(&mut self.rng)
                    .expect("constants")
                    .clone(),
            ),
        }
    }

    fn agent(&mut self) -> AgentId {
        self.cfg
            .agents
            .choose(&mut self.rng)
            .expect("agents")
            .clone()
    }

    fn threshold(&mut self) -> TruthValue {
        self.cfg
            .thresholds
            .choose(&mut self.rng)
            .expect("thresholds")
            .clone()
    }

    /// A formula of the announcement language with delta and constants.
    pub fn formula(&mut self, depth: usize) -> Formula {
        if depth <= 1 || self.rng.gen_bool(0.2) {
            return self.leaf(true);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..8) {
            0 | 1 => Formula::implies(self.formula(d), self.formula(d)),
            2 => Formula::and(self.formula(d), self.formula(d)),
            3 => Formula::delta(self.formula(d)),
            4 => {
                let a = self.agent();
                Formula::know(a, self.formula(d))
            }
            _ if d < 2 => Formula::implies(self.formula(d), self.formula(d)),
            5 => self.value_atom(depth, true),
            _ => {
                let l = self.body(d);
                Formula::announce(l, self.formula(d))
            }
        }
    }

    /// A formula of the delta-free announcement language.
    pub fn fpa_formula(&mut self, depth: usize) -> Formula {
        if depth <= 1 || self.rng.gen_bool(0.2) {
            return self.leaf(false);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..6) {
            0 | 1 => Formula::implies(self.fpa_formula(d), self.fpa_formula(d)),
            2 => Formula::and(self.fpa_formula(d), self.fpa_formula(d)),
            3 => {
                let a = self.agent();
                Formula::know(a, self.fpa_formula(d))
            }
            _ if d < 2 => Formula::and(self.fpa_formula(d), self.fpa_formula(d)),
            _ => {
                let l = self.value_formula(d);
                Formula::announce(l, self.fpa_formula(d))
            }
        }
    }

    fn value_atom(&mut self, depth: usize, delta: bool) -> Formula {
        let c = self.threshold();
        let s = if delta {
            self.formula(depth - 1)
        } else {
            self.fpa_formula(depth - 1)
        };
        if self.rng.gen_bool(0.5) {
            Formula::val_eq(s, c)
        } else {
            Formula::val_gt(s, c)
        }
    }

    /// A value formula over delta-free subjects, composed with `&`, `->`,
    /// `K` and announcements. Depth must be at least 2.
    pub fn value_formula(&mut self, depth: usize) -> Formula {
        let depth = depth.max(2);
        if depth == 2 || self.rng.gen_bool(0.3) {
            return self.value_atom(depth, false);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..5) {
            0 => Formula::and(self.value_formula(d), self.value_formula(d)),
            1 => Formula::implies(self.value_formula(d), self.value_formula(d)),
            2 => Formula::not(self.value_formula(d)),
            3 => {
                let a = self.agent();
                Formula::know(a, self.value_formula(d))
            }
            _ => Formula::announce(self.value_formula(d), self.value_formula(d)),
        }
    }

    /// An announcement body: value formulas over arbitrary subjects, `D`
    /// formulas and `bot`, closed under `&`, `->`, `K` and announcements.
    /// Depth must be at least 2.
    pub fn body(&mut self, depth: usize) -> Formula {
        let b = self.raw_body(depth.max(2));
        if self.cfg.desugar_bodies {
            desugar_value(&b)
        } else {
            b
        }
    }

    fn raw_body(&mut self, depth: usize) -> Formula {
        if depth <= 2 || self.rng.gen_bool(0.35) {
            return match self.rng.gen_range(0..10) {
                0 => Formula::delta(self.formula(depth - 1)),
                _ => self.value_atom(depth, true),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..5) {
            0 => Formula::and(self.raw_body(d), self.raw_body(d)),
            1 => Formula::implies(self.raw_body(d), self.raw_body(d)),
            2 => Formula::not(self.raw_body(d)),
            3 => {
                let a = self.agent();
                Formula::know(a, self.raw_body(d))
            }
            _ => Formula::announce(self.raw_body(d), self.raw_body(d)),
        }
    }
}
