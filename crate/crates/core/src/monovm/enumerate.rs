//! Program enumeration, minimal descriptions, and resource-bounded
//! algorithmic probability.
//!
//! A program is a description of `y` when its step-bounded output extends
//! `y`; it is a minimal description when no proper prefix is one. Under
//! MONO's semantics the minimal descriptions of a nonempty `y` are
//! exactly the complete instruction lists (through their `RUN` marker,
//! no dead tail) whose output extends `y`: shorter prefixes are still
//! reading input and emit nothing, and anything past `RUN` is never read.
//! The engine therefore enumerates the prefix-free set of complete
//! instruction lists once per bound and answers every query from it; a
//! brute-force enumeration over all bit strings
//! ([`reference_minimal_descriptions`]) is kept as the oracle the fast
//! path is tested against.
//!
//! Resource-bounded algorithmic probability is the uniform mass of the
//! description set,
//!
//! ```text
//! algprob(y) = sum over minimal descriptions x of y of 2^-|x|,
//! ```
//!
//! a semi-measure for every bound, pointwise nondecreasing in both the
//! program-length and step budgets. [`algprob_mixture_form`] computes the
//! same values by the alternative route: treat every instruction list as
//! a machine index weighted by its encoding length, let each contribute
//! the point semi-measure of its output, and give the weight of the
//! lists still unterminated at the length bound to the empty string
//! (which makes the index set a maximal prefix-free code, so the weights
//! sum to exactly 1). The two routes must agree exactly, which the
//! acceptance suite checks string by string.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num::rational::BigRational;
use num::{BigInt, Zero};

use crate::bits::{Bit, FiniteString};
use crate::measure::{conditional, SemiMeasure};
use crate::predictor::SemiPredictor;
use crate::prob::Prob;

use super::machine::{
    execute, run_machine, MonotoneProgram, Opcode, ResourceBound, RunStatus,
};

/// One enumerated machine: a complete instruction list and its
/// step-bounded output.
#[derive(Debug, Clone)]
pub struct MachineRun {
    pub program: FiniteString,
    pub output: FiniteString,
    pub status: RunStatus,
}

/// The minimal descriptions of a target string at a bound. Members are
/// pairwise prefix-incomparable and sorted shortest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptionSet {
    pub target: FiniteString,
    pub bound: ResourceBound,
    pub members: Vec<FiniteString>,
}

impl DescriptionSet {
    fn sorted(target: FiniteString, bound: ResourceBound, mut members: Vec<FiniteString>) -> Self {
        members.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        DescriptionSet { target, bound, members }
    }

    /// Total uniform mass `sum 2^-|x|` of the members.
    pub fn total_mass(&self) -> Prob {
        let sum = self
            .members
            .iter()
            .map(|m| Prob::pow2_neg(m.len()).into_ratio())
            .fold(BigRational::zero(), |a, b| a + b);
        Prob::from_ratio(sum).expect("prefix-free mass is at most 1")
    }

    pub fn shortest_len(&self) -> Option<usize> {
        self.members.first().map(|m| m.len())
    }

    pub fn is_prefix_free(&self) -> bool {
        self.members.iter().enumerate().all(|(i, a)| {
            self.members
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !(a.is_prefix_of(b) || b.is_prefix_of(a)))
        })
    }
}

/// Enumeration of all machines at a bound, shared by every query.
pub struct AlgProbEngine {
    bound: ResourceBound,
    machines: Vec<MachineRun>,
}

impl AlgProbEngine {
    /// Walks the bit trie of program prefixes, descending only through
    /// incomplete instruction lists (extending a completed one can never
    /// yield a minimal description) and running each machine once.
    pub fn new(bound: ResourceBound) -> AlgProbEngine {
        let mut machines = Vec::new();
        let mut bits = FiniteString::empty();
        Self::expand(&mut bits, bound, &mut machines);
        AlgProbEngine { bound, machines }
    }

    fn expand(bits: &mut FiniteString, bound: ResourceBound, out: &mut Vec<MachineRun>) {
        let len = bits.len();
        if len > 0 && len.is_multiple_of(3) {
            let last = Opcode::from_bits(&bits.bits()[len - 3..]);
            if last == Opcode::Run {
                let program = MonotoneProgram::new(bits.clone());
                let run = run_machine(&program, bound.max_steps);
                out.push(MachineRun {
                    program: bits.clone(),
                    output: run.output,
                    status: run.status,
                });
                return;
            }
        }
        if len == bound.max_program_len {
            return;
        }
        for b in Bit::BOTH {
            bits.push(b);
            Self::expand(bits, bound, out);
            bits.pop();
        }
    }

    pub fn bound(&self) -> ResourceBound {
        self.bound
    }

    pub fn machines(&self) -> &[MachineRun] {
        &self.machines
    }

    /// `sum 2^-|x|` over the minimal descriptions of `y`, exact.
    pub fn algprob(&self, y: &FiniteString) -> Prob {
        if y.is_empty() {
            // the empty program is the unique minimal description
            return Prob::one();
        }
        let sum = self
            .machines
            .iter()
            .filter(|m| y.is_prefix_of(&m.output))
            .map(|m| Prob::pow2_neg(m.program.len()).into_ratio())
            .fold(BigRational::zero(), |a, b| a + b);
        Prob::from_ratio(sum).expect("description mass is at most 1")
    }

    pub fn minimal_descriptions(&self, y: &FiniteString) -> DescriptionSet {
        if y.is_empty() {
            return DescriptionSet::sorted(y.clone(), self.bound, vec![FiniteString::empty()]);
        }
        let members = self
            .machines
            .iter()
            .filter(|m| y.is_prefix_of(&m.output))
            .map(|m| m.program.clone())
            .collect();
        DescriptionSet::sorted(y.clone(), self.bound, members)
    }

    /// Length of the single shortest description; `None` when the
    /// description set is empty at this bound.
    pub fn km(&self, y: &FiniteString) -> Option<usize> {
        if y.is_empty() {
            return Some(0);
        }
        self.machines
            .iter()
            .filter(|m| y.is_prefix_of(&m.output))
            .map(|m| m.program.len())
            .min()
    }

    /// Raw and normalized next-bit predictions at once.
    pub fn solomonoff_predict(&self, x: &FiniteString, b: Bit) -> SolomonoffPrediction {
        let raw = conditional(self, x, b);
        let zero = self.algprob(&x.extended(Bit::Zero));
        let one = self.algprob(&x.extended(Bit::One));
        let denom = zero.ratio() + one.ratio();
        let normalized = if denom.is_zero() {
            None
        } else {
            let chosen = if b == Bit::Zero { &zero } else { &one };
            Some(
                Prob::from_ratio(chosen.ratio() / &denom)
                    .expect("normalized conditional within [0,1]"),
            )
        };
        SolomonoffPrediction { raw, normalized }
    }

    pub fn predictor(self: &Arc<Self>, mode: SolomonoffMode) -> SolomonoffPredictor {
        SolomonoffPredictor { engine: Arc::clone(self), mode }
    }

    /// Tabulates mass, shortest-description length, and description count
    /// for every string up to `depth`.
    pub fn table(&self, depth: usize) -> AlgProbTable {
        assert!(depth < 30, "table depth {depth} too deep to enumerate");
        let size = (1usize << (depth + 1)) - 1;
        let mut mass = vec![BigRational::zero(); size];
        let mut km: Vec<Option<usize>> = vec![None; size];
        let mut count = vec![0usize; size];
        for m in &self.machines {
            let weight = Prob::pow2_neg(m.program.len()).into_ratio();
            let mut index = 0usize;
            for (j, bit) in m.output.iter().enumerate().take(depth) {
                index = (index << 1) | bit.as_usize();
                let slot = (1usize << (j + 1)) - 1 + index;
                mass[slot] += &weight;
                count[slot] += 1;
                let len = m.program.len();
                km[slot] = Some(km[slot].map_or(len, |k: usize| k.min(len)));
            }
        }
        let mut rows = Vec::with_capacity(size);
        rows.push(TableRow {
            string: FiniteString::empty(),
            mass: Prob::one(),
            km: Some(0),
            descriptions: 1,
        });
        for len in 1..=depth {
            for idx in 0..1u64 << len {
                let slot = (1usize << len) - 1 + idx as usize;
                rows.push(TableRow {
                    string: FiniteString::from_index(len, idx),
                    mass: Prob::from_ratio(mass[slot].clone()).expect("mass within [0,1]"),
                    km: km[slot],
                    descriptions: count[slot],
                });
            }
        }
        AlgProbTable { bound: self.bound, depth, rows }
    }
}

impl SemiMeasure for AlgProbEngine {
    fn mass(&self, x: &FiniteString) -> Prob {
        self.algprob(x)
    }
}

impl fmt::Debug for AlgProbEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgProbEngine")
            .field("bound", &self.bound)
            .field("machines", &self.machines.len())
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolomonoffPrediction {
    /// `algprob(xb) / algprob(x)`; undefined when `algprob(x) = 0`.
    pub raw: Option<Prob>,
    /// `algprob(xb) / (algprob(x0) + algprob(x1))`; undefined when both
    /// extensions carry no mass. Defined values sum to 1 over the bits.
    pub normalized: Option<Prob>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolomonoffMode {
    Raw,
    Normalized,
}

/// The resource-bounded algorithmic-probability predictor, relative to
/// MONO at a fixed bound.
#[derive(Debug, Clone)]
pub struct SolomonoffPredictor {
    engine: Arc<AlgProbEngine>,
    mode: SolomonoffMode,
}

impl SolomonoffPredictor {
    pub fn engine(&self) -> &Arc<AlgProbEngine> {
        &self.engine
    }
}

impl SemiPredictor for SolomonoffPredictor {
    fn predict(&self, x: &FiniteString, b: Bit) -> Option<Prob> {
        let prediction = self.engine.solomonoff_predict(x, b);
        match self.mode {
            SolomonoffMode::Raw => prediction.raw,
            SolomonoffMode::Normalized => prediction.normalized,
        }
    }
}

/// One row of an [`AlgProbTable`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub string: FiniteString,
    pub mass: Prob,
    pub km: Option<usize>,
    pub descriptions: usize,
}

/// Algorithmic-probability values for every string up to a depth, in
/// shortlex order.
#[derive(Debug, Clone)]
pub struct AlgProbTable {
    pub bound: ResourceBound,
    pub depth: usize,
    rows: Vec<TableRow>,
}

impl AlgProbTable {
    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    pub fn get(&self, y: &FiniteString) -> Option<&TableRow> {
        if y.len() > self.depth {
            return None;
        }
        let slot = (1usize << y.len()) - 1 + y.to_index() as usize;
        self.rows.get(slot)
    }
}

/// Route-B computation of algorithmic probability: enumerate instruction
/// lists as machine indices. See the module docs for why the weight of
/// length-saturated, still-reading programs goes to the empty string.
pub fn algprob_mixture_form(y: &FiniteString, bound: ResourceBound) -> Prob {
    let mut total = BigRational::zero();
    walk_instruction_lists(bound, &mut |_ops, enc_bits, output| {
        if y.is_prefix_of(output) {
            total += Prob::pow2_neg(enc_bits).into_ratio();
        }
    });
    if y.is_empty() {
        total += unterminated_mass(bound);
    }
    Prob::from_ratio(total).expect("mixture mass within [0,1]")
}

/// Route-B table over all strings up to `depth`, from one enumeration.
pub fn mixture_form_table(bound: ResourceBound, depth: usize) -> Vec<(FiniteString, Prob)> {
    let size = (1usize << (depth + 1)) - 1;
    let mut mass = vec![BigRational::zero(); size];
    mass[0] = unterminated_mass(bound);
    walk_instruction_lists(bound, &mut |_ops, enc_bits, output| {
        let weight = Prob::pow2_neg(enc_bits).into_ratio();
        mass[0] += &weight;
        let mut index = 0usize;
        for (j, bit) in output.iter().enumerate().take(depth) {
            index = (index << 1) | bit.as_usize();
            mass[(1usize << (j + 1)) - 1 + index] += &weight;
        }
    });
    let mut rows = Vec::with_capacity(size);
    for len in 0..=depth {
        for idx in 0..1u64 << len {
            let slot = (1usize << len) - 1 + idx as usize;
            rows.push((
                FiniteString::from_index(len, idx),
                Prob::from_ratio(mass[slot].clone()).expect("mass within [0,1]"),
            ));
        }
    }
    rows
}

/// Mass `(7/8)^slots` of the maximal-length programs that never reached a
/// `RUN` marker: machines still being described when the bound cuts the
/// enumeration, contributing only to the empty string.
fn unterminated_mass(bound: ResourceBound) -> BigRational {
    let slots = bound.max_program_len / 3;
    BigRational::new(BigInt::from(7).pow(slots as u32), BigInt::from(8).pow(slots as u32))
}

fn walk_instruction_lists(
    bound: ResourceBound,
    visit: &mut impl FnMut(&[Opcode], usize, &FiniteString),
) {
    let slots = bound.max_program_len / 3;
    if slots == 0 {
        return;
    }
    let mut ops = Vec::new();
    walk_rec(&mut ops, slots, bound.max_steps, visit);
}

fn walk_rec(
    ops: &mut Vec<Opcode>,
    slots: usize,
    max_steps: u64,
    visit: &mut impl FnMut(&[Opcode], usize, &FiniteString),
) {
    let enc_bits = 3 * (ops.len() + 1);
    let (output, _) = execute(ops, max_steps, None);
    visit(ops, enc_bits, &output);
    if ops.len() + 2 <= slots {
        for op in Opcode::INSTRUCTIONS {
            ops.push(op);
            walk_rec(ops, slots, max_steps, visit);
            ops.pop();
        }
    }
}

/// Brute-force reference: enumerates every bit string up to the length
/// bound and applies the description-set definition literally. Only for
/// small bounds; the engine must match it bit for bit.
pub fn reference_minimal_descriptions(y: &FiniteString, bound: ResourceBound) -> DescriptionSet {
    assert!(bound.max_program_len <= 14, "reference enumeration is exponential");
    let mut qualifying: HashSet<FiniteString> = HashSet::new();
    let mut members = Vec::new();
    for x in crate::bits::strings_up_to(bound.max_program_len) {
        let result = run_machine(&MonotoneProgram::new(x.clone()), bound.max_steps);
        if y.is_prefix_of(&result.output) {
            let minimal = (0..x.len()).all(|k| !qualifying.contains(&x.prefix(k)));
            if minimal {
                members.push(x.clone());
            }
            qualifying.insert(x);
        }
    }
    DescriptionSet::sorted(y.clone(), bound, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::strings_up_to;
    use crate::measure::check_semimeasure;

    fn s(t: &str) -> FiniteString {
        t.parse().unwrap()
    }

    fn engine(l: usize, steps: u64) -> AlgProbEngine {
        AlgProbEngine::new(ResourceBound::new(l, steps))
    }

    #[test]
    fn machine_counts_follow_the_geometric_series() {
        // complete lists with k instructions: 7^k, for 3(k+1) <= l
        assert_eq!(engine(3, 10).machines().len(), 1);
        assert_eq!(engine(5, 10).machines().len(), 1);
        assert_eq!(engine(6, 10).machines().len(), 8);
        assert_eq!(engine(12, 10).machines().len(), 400);
    }

    #[test]
    fn empty_string_has_the_empty_description() {
        let e = engine(6, 10);
        let d = e.minimal_descriptions(&FiniteString::empty());
        assert_eq!(d.members, vec![FiniteString::empty()]);
        assert_eq!(e.algprob(&FiniteString::empty()), Prob::one());
        assert_eq!(e.km(&FiniteString::empty()), Some(0));
    }

    #[test]
    fn single_zero_description_at_the_smallest_bound() {
        let e = engine(6, 10);
        let d = e.minimal_descriptions(&s("0"));
        assert_eq!(d.members, vec![s("011111")]);
        assert_eq!(e.algprob(&s("0")), Prob::pow2_neg(6));
        assert_eq!(e.km(&s("0")), Some(6));
        assert_eq!(e.km(&s("1")), None);
    }

    #[test]
    fn km_of_one_needs_nine_bits() {
        let e = engine(9, 10);
        assert_eq!(e.km(&s("1")), Some(9));
        assert!(e.minimal_descriptions(&s("1")).members.contains(&s("010011111")));
    }

    #[test]
    fn ones_emitter_is_found() {
        let e = engine(15, 50);
        let d = e.minimal_descriptions(&s("11"));
        assert!(d.members.contains(&s("010100011101111")));
        assert!(d.is_prefix_free());
        assert_eq!(e.km(&s("1111")), Some(15));
    }

    #[test]
    fn engine_matches_the_reference_enumeration() {
        let bound = ResourceBound::new(10, 60);
        let e = AlgProbEngine::new(bound);
        for y in strings_up_to(3) {
            let fast = e.minimal_descriptions(&y);
            let slow = reference_minimal_descriptions(&y, bound);
            assert_eq!(fast, slow, "descriptions of {y}");
        }
    }

    #[test]
    fn algprob_is_monotone_in_both_resources() {
        let small = engine(10, 40);
        let more_steps = engine(10, 80);
        let longer = engine(12, 80);
        for y in strings_up_to(4) {
            let a = small.algprob(&y);
            let b = more_steps.algprob(&y);
            let c = longer.algprob(&y);
            assert!(a <= b, "steps at {y}");
            assert!(b <= c, "length at {y}");
        }
    }

    #[test]
    fn km_is_nonincreasing_in_resources_and_bounds_mass() {
        let small = engine(9, 40);
        let big = engine(12, 80);
        for y in strings_up_to(3) {
            if let Some(k_small) = small.km(&y) {
                let k_big = big.km(&y).expect("resources only grow the description set");
                assert!(k_big <= k_small);
            }
            if let Some(k) = big.km(&y) {
                assert!(Prob::pow2_neg(k) <= big.algprob(&y), "shortest is one summand at {y}");
            }
        }
    }

    #[test]
    fn engine_is_a_semimeasure() {
        let e = engine(12, 100);
        assert!(check_semimeasure(&e, 5).is_clean());
    }

    #[test]
    fn table_agrees_with_queries() {
        let e = engine(12, 100);
        let table = e.table(5);
        assert_eq!(table.rows().len(), 63);
        for row in table.rows() {
            assert_eq!(row.mass, e.algprob(&row.string), "at {}", row.string);
            assert_eq!(row.km, e.km(&row.string), "km at {}", row.string);
            assert_eq!(
                row.descriptions,
                e.minimal_descriptions(&row.string).members.len(),
                "count at {}",
                row.string
            );
            assert_eq!(table.get(&row.string), Some(row));
        }
    }

    #[test]
    fn mixture_form_agrees_with_the_engine() {
        let bound = ResourceBound::new(12, 100);
        let e = AlgProbEngine::new(bound);
        assert_eq!(algprob_mixture_form(&FiniteString::empty(), bound), Prob::one());
        for y in strings_up_to(4) {
            assert_eq!(algprob_mixture_form(&y, bound), e.algprob(&y), "at {y}");
        }
        for (y, mass) in mixture_form_table(bound, 4) {
            assert_eq!(mass, e.algprob(&y), "table at {y}");
        }
    }

    #[test]
    fn raw_predictions_are_deficient_and_normalized_sum_to_one() {
        let e = Arc::new(engine(12, 100));
        let p = e.solomonoff_predict(&FiniteString::empty(), Bit::Zero);
        let q = e.solomonoff_predict(&FiniteString::empty(), Bit::One);
        let raw_sum = p.raw.clone().unwrap().checked_add(&q.raw.clone().unwrap());
        assert!(raw_sum.is_some(), "raw predictions sum within 1");
        assert!(raw_sum.unwrap() < Prob::one());
        assert_eq!(
            &p.normalized.clone().unwrap() + &q.normalized.clone().unwrap(),
            Prob::one()
        );

        // raw defined but zero vs normalized undefined, on a dead branch
        let tiny = Arc::new(engine(6, 10));
        let pred = tiny.solomonoff_predict(&s("0"), Bit::Zero);
        assert_eq!(pred.raw, Some(Prob::zero()));
        assert_eq!(pred.normalized, None);

        let raw = tiny.predictor(SolomonoffMode::Raw);
        assert_eq!(raw.predict(&s("0"), Bit::Zero), Some(Prob::zero()));
        let norm = tiny.predictor(SolomonoffMode::Normalized);
        assert_eq!(norm.predict(&s("0"), Bit::Zero), None);
    }
}
