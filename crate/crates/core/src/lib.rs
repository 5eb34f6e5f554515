//! Fuzzy public announcement logic over Gödel-Dummett modal logic.
//!
//! * [`algebra`]: exact rational truth values and the Gödel operations.
//! * [`syntax`]: formulas, parsing, printing and language classification.
//! * [`model`]: finite Gödel-Kripke models, evaluation and restriction.
//! * [`reduction`]: announcement elimination and its complexity measure.
//! * [`calculus`]: the axiom schemas and a Hilbert-style proof checker.
//! * [`checker`]: validity and equivalence search over finite model spaces.
//! * [`suite`]: the built-in verification suite.

pub mod algebra;
pub mod calculus;
pub mod checker;
pub mod model;
pub mod reduction;
pub mod suite;
pub mod syntax;

pub use algebra::{delta, join, residuum, tnorm, TruthValue, ValueError};
pub use calculus::{check_proof, parse_proof, Proof, ProofVerdict, Schema, SchemaDb};
pub use checker::{
    check_consequence, check_equivalence, check_validity, CheckError, Mode, ModelSpace,
    ModelSpaceParams, Verdict, Witness,
};
pub use model::{EvalError, KripkeModel, ModelError, ModelFileError, RestrictedModel};
pub use reduction::{complexity, translate, translate_trace, ReductionStep, Rule};
pub use syntax::{
    classify, desugar_value, parse, print, subformulas, AgentId, Formula, LanguageTag, ParseError,
};
