//! The MONO machine: a bit-exact monotone stream transformer.
//!
//! A program is a plain bit string. The machine reads it as consecutive
//! 3-bit opcodes up to and including the first `RUN`, then executes the
//! instruction list against a binary work tape (unbounded both ways,
//! zero-initialized, head at cell 0) and a write-only output tape:
//!
//! ```text
//! 000 LEFT   move head left         100 JZ    jump past matching JNZ when cell is 0
//! 001 RIGHT  move head right        101 JNZ   jump back to matching JZ when cell is 1
//! 010 FLIP   toggle current cell    110 LOOP  jump to the first instruction
//! 011 OUT    append cell to output  111 RUN   end of instruction list; begin execution
//! ```
//!
//! One step is one instruction dispatch. Execution ends by running past
//! the last instruction (`halted`) or when the step budget runs out.
//! Programs whose brackets do not match hang without producing output.
//! Bits after `RUN` are never read, and a missing or incomplete `RUN`
//! group means the machine is still waiting for input. Longer input can
//! therefore only extend the output, and more steps only append to it;
//! both monotonicity properties are load-bearing for everything built on
//! top of the enumeration.

use std::fmt;
use std::str::FromStr;

use crate::bits::{Bit, FiniteString, ParseBitsError};

/// Bits per opcode.
pub const OPCODE_BITS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Opcode {
    Left,
    Right,
    Flip,
    Out,
    JumpZero,
    JumpBack,
    Loop,
    Run,
}

impl Opcode {
    /// All opcodes in encoding order.
    pub const ALL: [Opcode; 8] = [
        Opcode::Left,
        Opcode::Right,
        Opcode::Flip,
        Opcode::Out,
        Opcode::JumpZero,
        Opcode::JumpBack,
        Opcode::Loop,
        Opcode::Run,
    ];

    /// The seven opcodes that may appear inside an instruction list.
    pub const INSTRUCTIONS: [Opcode; 7] = [
        Opcode::Left,
        Opcode::Right,
        Opcode::Flip,
        Opcode::Out,
        Opcode::JumpZero,
        Opcode::JumpBack,
        Opcode::Loop,
    ];

    pub fn code(self) -> usize {
        match self {
            Opcode::Left => 0,
            Opcode::Right => 1,
            Opcode::Flip => 2,
            Opcode::Out => 3,
            Opcode::JumpZero => 4,
            Opcode::JumpBack => 5,
            Opcode::Loop => 6,
            Opcode::Run => 7,
        }
    }

    pub fn from_code(code: usize) -> Opcode {
        Opcode::ALL[code]
    }

    pub fn from_bits(bits: &[Bit]) -> Opcode {
        debug_assert_eq!(bits.len(), OPCODE_BITS);
        Opcode::from_code(bits.iter().fold(0, |acc, b| acc << 1 | b.as_usize()))
    }

    pub fn to_bits(self) -> [Bit; OPCODE_BITS] {
        let c = self.code();
        [Bit::from(c & 4 != 0), Bit::from(c & 2 != 0), Bit::from(c & 1 != 0)]
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Opcode::Left => "LEFT",
            Opcode::Right => "RIGHT",
            Opcode::Flip => "FLIP",
            Opcode::Out => "OUT",
            Opcode::JumpZero => "JZ",
            Opcode::JumpBack => "JNZ",
            Opcode::Loop => "LOOP",
            Opcode::Run => "RUN",
        }
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// A program for the MONO machine: the machine's input stream prefix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonotoneProgram {
    bits: FiniteString,
}

impl MonotoneProgram {
    pub fn new(bits: FiniteString) -> MonotoneProgram {
        MonotoneProgram { bits }
    }

    /// Encodes an instruction list, appending the `RUN` marker.
    pub fn from_instructions(ops: &[Opcode]) -> MonotoneProgram {
        let mut bits = FiniteString::empty();
        for op in ops.iter().chain([Opcode::Run].iter()) {
            for b in op.to_bits() {
                bits.push(b);
            }
        }
        MonotoneProgram { bits }
    }

    pub fn bits(&self) -> &FiniteString {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Reads complete opcode groups up to the first `RUN`.
    pub fn parse(&self) -> InstructionParse {
        let bits = self.bits.bits();
        let mut ops = Vec::new();
        let mut i = 0;
        while i + OPCODE_BITS <= bits.len() {
            let op = Opcode::from_bits(&bits[i..i + OPCODE_BITS]);
            i += OPCODE_BITS;
            if op == Opcode::Run {
                return InstructionParse::Complete { ops, consumed_bits: i };
            }
            ops.push(op);
        }
        // a residual partial opcode also leaves the machine waiting
        InstructionParse::AwaitingInput
    }
}

impl FromStr for MonotoneProgram {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<MonotoneProgram, ParseBitsError> {
        Ok(MonotoneProgram { bits: s.parse()? })
    }
}

impl fmt::Display for MonotoneProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstructionParse {
    /// Instruction list (without the marker) and bits consumed through it.
    Complete { ops: Vec<Opcode>, consumed_bits: usize },
    /// No complete `RUN` group yet: the machine wants more input.
    AwaitingInput,
}

/// Program-length and step limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ResourceBound {
    pub max_program_len: usize,
    pub max_steps: u64,
}

impl ResourceBound {
    pub fn new(max_program_len: usize, max_steps: u64) -> ResourceBound {
        ResourceBound { max_program_len, max_steps }
    }

    /// Desk-scale default: every run in seconds, tables still interesting.
    pub fn desk_default() -> ResourceBound {
        ResourceBound { max_program_len: 18, max_steps: 500 }
    }
}

impl fmt::Display for ResourceBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(max_len {}, max_steps {})", self.max_program_len, self.max_steps)
    }
}

/// Default depth for tabulating algorithmic probability.
pub const DEFAULT_TABLE_DEPTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Halted,
    OutOfSteps,
    InputExhausted,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Halted => "halted",
            RunStatus::OutOfSteps => "out-of-steps",
            RunStatus::InputExhausted => "input-exhausted",
        })
    }
}

/// A step-bounded execution outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub output: FiniteString,
    pub input_bits_consumed: usize,
    pub status: RunStatus,
}

/// One dispatched instruction, for step-by-step traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: u64,
    pub pc: usize,
    pub op: Opcode,
    pub head: i64,
    pub cell_before: bool,
    pub output_len: usize,
}

#[derive(Debug, Default)]
struct Tape {
    nonneg: Vec<bool>,
    neg: Vec<bool>,
    head: i64,
}

impl Tape {
    fn get(&self) -> bool {
        if self.head >= 0 {
            self.nonneg.get(self.head as usize).copied().unwrap_or(false)
        } else {
            self.neg.get((-self.head - 1) as usize).copied().unwrap_or(false)
        }
    }

    fn flip(&mut self) {
        let (vec, idx) = if self.head >= 0 {
            (&mut self.nonneg, self.head as usize)
        } else {
            (&mut self.neg, (-self.head - 1) as usize)
        };
        if idx >= vec.len() {
            vec.resize(idx + 1, false);
        }
        vec[idx] = !vec[idx];
    }
}

/// Matches `JZ`/`JNZ` pairs; `None` on unmatched brackets.
pub fn bracket_targets(ops: &[Opcode]) -> Option<Vec<usize>> {
    let mut targets = vec![0usize; ops.len()];
    let mut stack = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        match op {
            Opcode::JumpZero => stack.push(i),
            Opcode::JumpBack => {
                let open = stack.pop()?;
                targets[open] = i;
                targets[i] = open;
            }
            _ => {}
        }
    }
    stack.is_empty().then_some(targets)
}

/// Executes an instruction list, optionally recording every dispatch.
pub fn execute(
    ops: &[Opcode],
    max_steps: u64,
    mut trace: Option<&mut Vec<TraceStep>>,
) -> (FiniteString, RunStatus) {
    let Some(targets) = bracket_targets(ops) else {
        // unmatched brackets: hangs producing no further output
        return (FiniteString::empty(), RunStatus::OutOfSteps);
    };
    let mut tape = Tape::default();
    let mut output = FiniteString::empty();
    let mut pc = 0usize;
    let mut step = 0u64;
    loop {
        if pc >= ops.len() {
            return (output, RunStatus::Halted);
        }
        if step == max_steps {
            return (output, RunStatus::OutOfSteps);
        }
        step += 1;
        let op = ops[pc];
        if let Some(record) = trace.as_deref_mut() {
            record.push(TraceStep {
                step,
                pc,
                op,
                head: tape.head,
                cell_before: tape.get(),
                output_len: output.len(),
            });
        }
        match op {
            Opcode::Left => {
                tape.head -= 1;
                pc += 1;
            }
            Opcode::Right => {
                tape.head += 1;
                pc += 1;
            }
            Opcode::Flip => {
                tape.flip();
                pc += 1;
            }
            Opcode::Out => {
                output.push(Bit::from(tape.get()));
                pc += 1;
            }
            Opcode::JumpZero => {
                if tape.get() {
                    pc += 1;
                } else {
                    pc = targets[pc] + 1;
                }
            }
            Opcode::JumpBack => {
                if tape.get() {
                    pc = targets[pc];
                } else {
                    pc += 1;
                }
            }
            Opcode::Loop => {
                pc = 0;
            }
            Opcode::Run => unreachable!("RUN terminates the instruction list"),
        }
    }
}

/// Deterministic step-bounded execution of a program.
pub fn run_machine(program: &MonotoneProgram, max_steps: u64) -> RunResult {
    match program.parse() {
        InstructionParse::AwaitingInput => RunResult {
            output: FiniteString::empty(),
            input_bits_consumed: program.len(),
            status: RunStatus::InputExhausted,
        },
        InstructionParse::Complete { ops, consumed_bits } => {
            let (output, status) = execute(&ops, max_steps, None);
            RunResult { output, input_bits_consumed: consumed_bits, status }
        }
    }
}

/// Like [`run_machine`] but also returns the per-step trace.
pub fn run_machine_traced(
    program: &MonotoneProgram,
    max_steps: u64,
) -> (RunResult, Vec<TraceStep>) {
    match program.parse() {
        InstructionParse::AwaitingInput => (
            RunResult {
                output: FiniteString::empty(),
                input_bits_consumed: program.len(),
                status: RunStatus::InputExhausted,
            },
            Vec::new(),
        ),
        InstructionParse::Complete { ops, consumed_bits } => {
            let mut steps = Vec::new();
            let (output, status) = execute(&ops, max_steps, Some(&mut steps));
            (RunResult { output, input_bits_consumed: consumed_bits, status }, steps)
        }
    }
}
