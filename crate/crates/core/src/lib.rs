//! Disjunctive datalog with strong and default negation: parsing,
//! intelligent grounding, answer-set enumeration and checking, and
//! brave/cautious query answering.

pub mod checker;
pub mod frontends;
pub mod ground;
pub mod grounder;
pub mod model;
pub mod parser;
pub mod print;
pub mod solver;

pub use ground::{GroundProgram, GroundProgramBuilder, GroundRule};
pub use grounder::{ground_program, ground_program_with, GroundError, GroundOptions, Grounding};
pub use model::{GroundLiteral, Interpretation, LitId, Program, SymbolTable, Value};
pub use solver::{enumerate_answer_sets, AnswerSets, EnumerationLimit};
pub use parser::{parse_program, Input, LoadError, Query};
