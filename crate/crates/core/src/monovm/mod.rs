//! The MONO monotone-machine VM and resource-bounded algorithmic
//! probability.
//!
//! Everything here is relative to one fully specified machine at an
//! explicit resource bound; reports downstream label the results
//! accordingly. The [`machine`] submodule holds the bit-exact VM, the
//! [`enumerate`] submodule the program enumeration, description sets,
//! probability tables, and the induced predictors.

pub mod enumerate;
pub mod machine;

pub use enumerate::{
    algprob_mixture_form, mixture_form_table, reference_minimal_descriptions, AlgProbEngine,
    AlgProbTable, DescriptionSet, MachineRun, SolomonoffMode, SolomonoffPrediction,
    SolomonoffPredictor, TableRow,
};
pub use machine::{
    bracket_targets, execute, run_machine, run_machine_traced, InstructionParse, MonotoneProgram,
    Opcode, ResourceBound, RunResult, RunStatus, TraceStep, DEFAULT_TABLE_DEPTH, OPCODE_BITS,
};
