//! Generic chaotic iteration over a product of component lattices.
//!
//! A [`ReductionFunction`] reads and writes the components named by its
//! scheme. [`run`] drives a set of them to a common fixpoint using one of
//! four loops:
//!
//! * `CI`   pending set, the chosen function is removed before it is applied;
//! * `CII`  pending set, removed after the wake-up (idempotent functions only);
//! * `CIQ`  FIFO queue, dequeued before it is applied;
//! * `CIIQ` FIFO queue, dequeued after the wake-up (idempotent functions only).
//!
//! After a function changes some components, every function whose scheme
//! mentions one of them is made pending again. Enqueueing skips functions
//! that are already pending, so in the `II` variants the function just
//! applied is never rescheduled by its own change.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csp::Scheme;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, ProductValue, Sample};

/// Default cap on function applications per run.
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

type ApplyFn<V> = dyn Fn(&[V]) -> Result<Vec<V>> + Send + Sync;

/// A function on the components of its scheme. It must be inflationary and
/// monotonic; `idempotent` is a declaration the `II` loops rely on.
pub struct ReductionFunction<V> {
    id: String,
    scheme: Scheme,
    idempotent: bool,
    group: Option<usize>,
    apply: Arc<ApplyFn<V>>,
}

impl<V> Clone for ReductionFunction<V> {
    fn clone(&self) -> Self {
        ReductionFunction {
            id: self.id.clone(),
            scheme: self.scheme.clone(),
            idempotent: self.idempotent,
            group: self.group,
            apply: Arc::clone(&self.apply),
        }
    }
}

impl<V> fmt::Debug for ReductionFunction<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReductionFunction")
            .field("id", &self.id)
            .field("scheme", &self.scheme)
            .field("idempotent", &self.idempotent)
            .finish()
    }
}

impl<V: Lattice> ReductionFunction<V> {
    pub fn new(
        id: impl Into<String>,
        scheme: Scheme,
        idempotent: bool,
        apply: impl Fn(&[V]) -> Result<Vec<V>> + Send + Sync + 'static,
    ) -> Self {
        ReductionFunction { id: id.into(), scheme, idempotent, group: None, apply: Arc::new(apply) }
    }

    pub fn identity(id: impl Into<String>, scheme: Scheme) -> Self {
        ReductionFunction::new(id, scheme, true, |xs: &[V]| Ok(xs.to_vec()))
    }

    /// Tags the function with a block (usually its constraint) for block scheduling.
    pub fn with_group(mut self, group: usize) -> Self {
        self.group = Some(group);
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn is_idempotent(&self) -> bool {
        self.idempotent
    }

    pub fn group(&self) -> Option<usize> {
        self.group
    }

    /// The same function reading and writing the components `map(i)` instead of `i`.
    pub fn relocated(&self, map: impl Fn(usize) -> usize) -> Result<Self> {
        let scheme = Scheme::new(self.scheme.indices().iter().map(|&i| map(i)).collect())?;
        Ok(ReductionFunction { scheme, ..self.clone() })
    }

    /// Applies the function to the values of its scheme components.
    pub fn apply(&self, args: &[V]) -> Result<Vec<V>> {
        if args.len() != self.scheme.len() {
            return Err(Error::config(format!(
                "`{}` takes {} components, got {}",
                self.id,
                self.scheme.len(),
                args.len()
            )));
        }
        let out = (self.apply)(args)?;
        if out.len() != args.len() {
            return Err(Error::Invariant(format!("`{}` returned {} components", self.id, out.len())));
        }
        Ok(out)
    }

    /// `f⁺` applied to a full state.
    pub fn apply_extended(&self, d: &ProductValue<V>) -> Result<ProductValue<V>> {
        extend(self, d.arity())?.apply(d)
    }

    fn check_arity(&self, arity: usize) -> Result<()> {
        match self.scheme.indices().iter().find(|&&i| i >= arity) {
            Some(i) => Err(Error::config(format!(
                "`{}` mentions component {} of a {}-component state",
                self.id,
                i + 1,
                arity
            ))),
            None => Ok(()),
        }
    }
}

/// The canonical extension `f⁺` of a function to an `arity`-component state.
pub struct Extended<'a, V> {
    f: &'a ReductionFunction<V>,
    arity: usize,
}

pub fn extend<V: Lattice>(f: &ReductionFunction<V>, arity: usize) -> Result<Extended<'_, V>> {
    f.check_arity(arity)?;
    Ok(Extended { f, arity })
}

impl<V: Lattice> Extended<'_, V> {
    pub fn apply(&self, d: &ProductValue<V>) -> Result<ProductValue<V>> {
        if d.arity() != self.arity {
            return Err(Error::config("state arity does not match the extension"));
        }
        let idx = self.f.scheme.indices();
        let args: Vec<V> = idx.iter().map(|&i| d[i].clone()).collect();
        let out = self.f.apply(&args)?;
        let mut e = d.clone();
        for (&i, v) in idx.iter().zip(out) {
            e.0[i] = v;
        }
        Ok(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Ci,
    Cii,
    Ciq,
    Ciiq,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Ci, Mode::Cii, Mode::Ciq, Mode::Ciiq];

    fn queued(self) -> bool {
        matches!(self, Mode::Ciq | Mode::Ciiq)
    }

    /// Whether the chosen function leaves the pending set only after the wake-up.
    fn late_removal(self) -> bool {
        matches!(self, Mode::Cii | Mode::Ciiq)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ci => "ci",
            Mode::Cii => "cii",
            Mode::Ciq => "ciq",
            Mode::Ciiq => "ciiq",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ci" => Ok(Mode::Ci),
            "cii" => Ok(Mode::Cii),
            "ciq" => Ok(Mode::Ciq),
            "ciiq" => Ok(Mode::Ciiq),
            _ => Err(Error::Argument(format!("unknown mode `{s}`"))),
        }
    }
}

/// What a strategy may look at.
pub struct Schedule<'a> {
    /// Block of every function, by function index.
    pub groups: &'a [usize],
    /// The function applied most recently.
    pub last: Option<usize>,
}

/// Resolves the nondeterminism of the loops: `choose` picks from the pending
/// set of `CI`/`CII`; `arrange` orders a batch before it is enqueued.
pub trait Strategy {
    /// `pending` holds function indices in insertion order; returns a position in it.
    fn choose(&mut self, pending: &[usize], ctx: &Schedule<'_>) -> usize;

    fn arrange(&mut self, batch: &mut Vec<usize>, ctx: &Schedule<'_>);
}

/// Lowest function index first.
#[derive(Debug, Default, Clone, Copy)]
pub struct Deterministic;

impl Strategy for Deterministic {
    fn choose(&mut self, pending: &[usize], _: &Schedule<'_>) -> usize {
        position_of_min(pending.iter().copied())
    }

    fn arrange(&mut self, batch: &mut Vec<usize>, _: &Schedule<'_>) {
        batch.sort_unstable();
    }
}

fn position_of_min(it: impl Iterator<Item = usize>) -> usize {
    it.enumerate().min_by_key(|&(_, f)| f).map(|(p, _)| p).unwrap_or(0)
}

/// Uniformly random choices from a seeded generator.
#[derive(Debug, Clone)]
pub struct Seeded(ChaCha8Rng);

impl Seeded {
    pub fn new(seed: u64) -> Self {
        Seeded(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl Strategy for Seeded {
    fn choose(&mut self, pending: &[usize], _: &Schedule<'_>) -> usize {
        self.0.gen_range(0..pending.len())
    }

    fn arrange(&mut self, batch: &mut Vec<usize>, _: &Schedule<'_>) {
        batch.shuffle(&mut self.0);
    }
}

/// Most recently scheduled first; batches are enqueued in descending order.
#[derive(Debug, Default, Clone, Copy)]
pub struct Lifo;

impl Strategy for Lifo {
    fn choose(&mut self, pending: &[usize], _: &Schedule<'_>) -> usize {
        pending.len() - 1
    }

    fn arrange(&mut self, batch: &mut Vec<usize>, _: &Schedule<'_>) {
        batch.sort_unstable_by(|a, b| b.cmp(a));
    }
}

/// Cycles through function indices, continuing after the last one applied.
#[derive(Debug, Default, Clone, Copy)]
pub struct RoundRobin;

impl RoundRobin {
    fn key(f: usize, ctx: &Schedule<'_>) -> (bool, usize) {
        match ctx.last {
            Some(l) => (f <= l, f),
            None => (false, f),
        }
    }
}

impl Strategy for RoundRobin {
    fn choose(&mut self, pending: &[usize], ctx: &Schedule<'_>) -> usize {
        pending.iter().enumerate().min_by_key(|(_, &f)| Self::key(f, ctx)).map(|(p, _)| p).unwrap_or(0)
    }

    fn arrange(&mut self, batch: &mut Vec<usize>, ctx: &Schedule<'_>) {
        batch.sort_unstable_by_key(|&f| Self::key(f, ctx));
    }
}

/// Keeps the functions of one block together: batches are grouped by block,
/// and choices stay within the block of the last function while possible.
#[derive(Debug, Default, Clone, Copy)]
pub struct Block;

impl Strategy for Block {
    fn choose(&mut self, pending: &[usize], ctx: &Schedule<'_>) -> usize {
        let current = ctx.last.map(|l| ctx.groups[l]);
        pending
            .iter()
            .enumerate()
            .min_by_key(|(_, &f)| (Some(ctx.groups[f]) != current, ctx.groups[f], f))
            .map(|(p, _)| p)
            .unwrap_or(0)
    }

    fn arrange(&mut self, batch: &mut Vec<usize>, ctx: &Schedule<'_>) {
        batch.sort_unstable_by_key(|&f| (ctx.groups[f], f));
    }
}

/// The built-in strategies by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyKind {
    Deterministic,
    Seeded(u64),
    Lifo,
    RoundRobin,
    Block,
}

impl StrategyKind {
    pub fn build(self) -> Box<dyn Strategy> {
        match self {
            StrategyKind::Deterministic => Box::new(Deterministic),
            StrategyKind::Seeded(s) => Box::new(Seeded::new(s)),
            StrategyKind::Lifo => Box::new(Lifo),
            StrategyKind::RoundRobin => Box::new(RoundRobin),
            StrategyKind::Block => Box::new(Block),
        }
    }

    /// Parses `det`, `seeded`, `lifo`, `roundrobin` or `block`; `seed` feeds `seeded`.
    pub fn parse(name: &str, seed: u64) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "det" | "deterministic" => Ok(StrategyKind::Deterministic),
            "seeded" | "random" => Ok(StrategyKind::Seeded(seed)),
            "lifo" => Ok(StrategyKind::Lifo),
            "roundrobin" | "round-robin" | "rr" => Ok(StrategyKind::RoundRobin),
            "block" => Ok(StrategyKind::Block),
            _ => Err(Error::Argument(format!("unknown strategy `{name}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub max_steps: usize,
    /// Stop as soon as a component reaches the top element (an empty set).
    pub early_exit: bool,
    /// Keep the new values of changed components in the trace.
    pub record_values: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { mode: Mode::Ci, max_steps: DEFAULT_MAX_STEPS, early_exit: false, record_values: false }
    }
}

impl RunConfig {
    pub fn with_mode(mode: Mode) -> Self {
        RunConfig { mode, ..RunConfig::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    StepLimitExceeded,
    /// Early exit: the given component became empty.
    EmptyComponent(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunStep<V> {
    /// 1-based position in the run.
    pub step: usize,
    pub function: usize,
    pub id: String,
    pub changed: bool,
    /// Components whose value strictly decreased (as sets), ascending.
    pub components: Vec<usize>,
    pub values: Option<Vec<V>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace<V> {
    pub steps: Vec<RunStep<V>>,
    pub outcome: Outcome,
}

impl<V> RunTrace<V> {
    pub fn applications(&self) -> usize {
        self.steps.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixpointResult<V> {
    pub value: ProductValue<V>,
    pub trace: RunTrace<V>,
}

impl<V> FixpointResult<V> {
    pub fn converged(&self) -> bool {
        self.trace.outcome == Outcome::Converged
    }
}

/// A registered function set over states of a fixed arity.
pub struct Propagator<V> {
    arity: usize,
    functions: Vec<ReductionFunction<V>>,
    watchers: Vec<Vec<usize>>,
}

impl<V: Lattice> Propagator<V> {
    pub fn new(arity: usize) -> Self {
        Propagator { arity, functions: Vec::new(), watchers: vec![Vec::new(); arity] }
    }

    pub fn with_functions(arity: usize, fs: impl IntoIterator<Item = ReductionFunction<V>>) -> Result<Self> {
        let mut p = Propagator::new(arity);
        for f in fs {
            p.register(f)?;
        }
        Ok(p)
    }

    pub fn register(&mut self, f: ReductionFunction<V>) -> Result<usize> {
        f.check_arity(self.arity)?;
        let k = self.functions.len();
        for &i in f.scheme.indices() {
            self.watchers[i].push(k);
        }
        self.functions.push(f);
        Ok(k)
    }

    pub fn functions(&self) -> &[ReductionFunction<V>] {
        &self.functions
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Functions that depend on some component in `changed`, ascending.
    fn dependents(&self, changed: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = changed.iter().flat_map(|&i| self.watchers[i].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn run(
        &self,
        start: ProductValue<V>,
        cfg: &RunConfig,
        strategy: &mut dyn Strategy,
    ) -> Result<FixpointResult<V>> {
        if start.arity() != self.arity {
            return Err(Error::config(format!(
                "start state has {} components, expected {}",
                start.arity(),
                self.arity
            )));
        }
        if cfg.mode.late_removal() {
            if let Some(f) = self.functions.iter().find(|f| !f.idempotent) {
                return Err(Error::config(format!(
                    "mode {} requires idempotent functions, `{}` is not",
                    cfg.mode, f.id
                )));
            }
        }
        let groups: Vec<usize> =
            self.functions.iter().enumerate().map(|(k, f)| f.group.unwrap_or(k)).collect();
        let mut d = start;
        let mut steps = Vec::new();
        let mut last = None;

        if cfg.early_exit {
            if let Some(i) = d.0.iter().position(Lattice::is_top) {
                let trace = RunTrace { steps, outcome: Outcome::EmptyComponent(i) };
                return Ok(FixpointResult { value: d, trace });
            }
        }

        let mut pending: VecDeque<usize> = VecDeque::new();
        let mut is_pending = vec![false; self.functions.len()];
        let mut batch: Vec<usize> = (0..self.functions.len()).collect();
        strategy.arrange(&mut batch, &Schedule { groups: &groups, last });
        for f in batch {
            is_pending[f] = true;
            pending.push_back(f);
        }

        let outcome = loop {
            if pending.is_empty() {
                break Outcome::Converged;
            }
            if steps.len() >= cfg.max_steps {
                break Outcome::StepLimitExceeded;
            }
            let pos = if cfg.mode.queued() {
                0
            } else {
                let ctx = Schedule { groups: &groups, last };
                let p = strategy.choose(pending.make_contiguous(), &ctx);
                if p >= pending.len() {
                    return Err(Error::Invariant(format!("strategy chose position {p} of {}", pending.len())));
                }
                p
            };
            let g = pending[pos];
            if !cfg.mode.late_removal() {
                pending.remove(pos);
                is_pending[g] = false;
            }

            let f = &self.functions[g];
            let idx = f.scheme.indices();
            let args: Vec<V> = idx.iter().map(|&i| d[i].clone()).collect();
            let out = f.apply(&args)?;
            let mut changed = Vec::new();
            for ((&i, before), after) in idx.iter().zip(&args).zip(&out) {
                if before != after {
                    if !before.try_leq(after)? {
                        return Err(Error::NotInflationary {
                            function: f.id.clone(),
                            detail: format!("component {} went from {before:?} to {after:?}", i + 1),
                        });
                    }
                    changed.push(i);
                }
            }
            changed.sort_unstable();
            last = Some(g);

            if !changed.is_empty() {
                let mut wake: Vec<usize> =
                    self.dependents(&changed).into_iter().filter(|&h| !is_pending[h]).collect();
                strategy.arrange(&mut wake, &Schedule { groups: &groups, last });
                for h in wake {
                    is_pending[h] = true;
                    pending.push_back(h);
                }
                for (&i, v) in idx.iter().zip(&out) {
                    if d[i] != *v {
                        d.0[i] = v.clone();
                    }
                }
            }
            if cfg.mode.late_removal() {
                // the wake-up skipped g because it was still pending
                let p = pending.iter().position(|&h| h == g).expect("chosen function still pending");
                pending.remove(p);
                is_pending[g] = false;
            }

            let values = cfg.record_values.then(|| changed.iter().map(|&i| d[i].clone()).collect());
            let emptied = changed.iter().copied().find(|&i| d[i].is_top());
            steps.push(RunStep {
                step: steps.len() + 1,
                function: g,
                id: f.id.clone(),
                changed: !changed.is_empty(),
                components: changed,
                values,
            });
            if cfg.early_exit {
                if let Some(i) = emptied {
                    break Outcome::EmptyComponent(i);
                }
            }
        };
        Ok(FixpointResult { value: d, trace: RunTrace { steps, outcome } })
    }
}

impl<V: Sample> Propagator<V> {
    /// Registers `f` after checking inflation and monotonicity on random
    /// states above `start`.
    pub fn register_probed(
        &mut self,
        f: ReductionFunction<V>,
        start: &ProductValue<V>,
        probe: &ProbeConfig,
    ) -> Result<usize> {
        f.check_arity(self.arity)?;
        probe_function(&f, start, probe)?;
        self.register(f)
    }
}

/// Runs `fs` from `start`.
pub fn run<V: Lattice>(
    fs: &[ReductionFunction<V>],
    start: ProductValue<V>,
    cfg: &RunConfig,
    strategy: &mut dyn Strategy,
) -> Result<FixpointResult<V>> {
    Propagator::with_functions(start.arity(), fs.iter().cloned())?.run(start, cfg, strategy)
}

/// Applies every function once, in the given order, with no wake-ups: the
/// for-loop form of a queue run whose re-enqueues are all redundant. The
/// outcome is `Converged` once the pass completes; `mode` is ignored.
pub fn run_sequence<V: Lattice>(
    fs: &[ReductionFunction<V>],
    start: ProductValue<V>,
    cfg: &RunConfig,
) -> Result<FixpointResult<V>> {
    let mut d = start;
    let mut steps = Vec::new();
    for (g, f) in fs.iter().enumerate() {
        if steps.len() >= cfg.max_steps {
            return Ok(FixpointResult { value: d, trace: RunTrace { steps, outcome: Outcome::StepLimitExceeded } });
        }
        let e = f.apply_extended(&d)?;
        if !d.try_leq(&e)? {
            return Err(Error::NotInflationary { function: f.id.clone(), detail: format!("{d:?} to {e:?}") });
        }
        let mut changed: Vec<usize> = f.scheme.indices().iter().copied().filter(|&i| d[i] != e[i]).collect();
        changed.sort_unstable();
        d = e;
        let values = cfg.record_values.then(|| changed.iter().map(|&i| d[i].clone()).collect());
        let emptied = changed.iter().copied().find(|&i| d[i].is_top());
        steps.push(RunStep {
            step: steps.len() + 1,
            function: g,
            id: f.id.clone(),
            changed: !changed.is_empty(),
            components: changed,
            values,
        });
        if let (true, Some(i)) = (cfg.early_exit, emptied) {
            return Ok(FixpointResult { value: d, trace: RunTrace { steps, outcome: Outcome::EmptyComponent(i) } });
        }
    }
    Ok(FixpointResult { value: d, trace: RunTrace { steps, outcome: Outcome::Converged } })
}

#[derive(Clone, Copy, Debug)]
pub struct ProbeConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { samples: 64, seed: 0x5eed }
    }
}

/// Randomized inflation and monotonicity check of `f` on states above `start`.
pub fn probe_function<V: Sample>(
    f: &ReductionFunction<V>,
    start: &ProductValue<V>,
    probe: &ProbeConfig,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(probe.seed);
    let base = ProductValue(f.scheme.indices().iter().map(|&i| start[i].clone()).collect::<Vec<V>>());
    for k in 0..probe.samples {
        // include the start itself, then random states above it
        let x = if k == 0 { base.clone() } else { base.sample_above(&mut rng) };
        let fx = ProductValue(f.apply(x.components())?);
        if !x.try_leq(&fx)? {
            return Err(Error::NotInflationary {
                function: f.id.clone(),
                detail: format!("f({x:?}) = {fx:?}"),
            });
        }
        let y = x.sample_above(&mut rng);
        let fy = ProductValue(f.apply(y.components())?);
        if !fx.try_leq(&fy)? {
            return Err(Error::NotMonotonic {
                function: f.id.clone(),
                detail: format!("{x:?} ⊑ {y:?} but f gives {fx:?} and {fy:?}"),
            });
        }
    }
    Ok(())
}

/// `f*`: iterates `f` on its own components until they stop changing.
/// The result is idempotent whenever the iteration terminates.
pub fn closure_star<V: Lattice + 'static>(f: &ReductionFunction<V>, cap: usize) -> ReductionFunction<V> {
    let inner = f.clone();
    let id = format!("{}*", f.id);
    let name = f.id.clone();
    let mut star = ReductionFunction::new(id, f.scheme.clone(), true, move |xs: &[V]| {
        let mut cur = xs.to_vec();
        for _ in 0..cap {
            let next = inner.apply(&cur)?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
        Err(Error::ClosureCap { function: name.clone(), cap })
    });
    star.group = f.group;
    star
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitOrder {
    /// The first limit is strictly below the second (the second set reduces more).
    Less,
    Equal,
    Greater,
    Incomparable,
    /// A run did not converge within the step cap.
    Inconclusive,
}

/// Compares the limits of two function sets from the same start.
pub fn compare_limits<V: Lattice>(
    first: &[ReductionFunction<V>],
    second: &[ReductionFunction<V>],
    start: &ProductValue<V>,
    cfg: &RunConfig,
) -> Result<LimitOrder> {
    let a = run(first, start.clone(), cfg, &mut Deterministic)?;
    let b = run(second, start.clone(), cfg, &mut Deterministic)?;
    if !a.converged() || !b.converged() {
        return Ok(LimitOrder::Inconclusive);
    }
    let (a, b) = (a.value, b.value);
    Ok(if a == b {
        LimitOrder::Equal
    } else if a.try_leq(&b)? {
        LimitOrder::Less
    } else if b.try_leq(&a)? {
        LimitOrder::Greater
    } else {
        LimitOrder::Incomparable
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Atom, PowersetValue, Value};

    fn set(xs: &[i64]) -> Value {
        Value::int_set(xs.iter().copied())
    }

    fn sch(ix: &[usize]) -> Scheme {
        Scheme::new(ix.to_vec()).unwrap()
    }

    /// X ↦ X ∩ keep on one component.
    fn keep(id: &str, comp: usize, keep: &[i64]) -> ReductionFunction<Value> {
        let k: PowersetValue<Atom> = keep.iter().map(|&x| Atom::Int(x)).collect();
        ReductionFunction::new(id, sch(&[comp]), true, move |xs: &[Value]| {
            Ok(vec![Value::Set(xs[0].as_set()?.intersect(&k))])
        })
    }

    #[test]
    fn extend_copies_other_components() {
        let f = keep("f", 1, &[1]);
        let d = ProductValue(vec![set(&[0]), set(&[0, 1]), set(&[2])]);
        let e = extend(&f, 3).unwrap().apply(&d).unwrap();
        assert_eq!(e, ProductValue(vec![set(&[0]), set(&[1]), set(&[2])]));

        let id = ReductionFunction::<Value>::identity("id", sch(&[0, 2]));
        assert_eq!(extend(&id, 3).unwrap().apply(&d).unwrap(), d);
        assert!(matches!(extend(&f, 1), Err(Error::Config(_))));
    }

    #[test]
    fn empty_function_set_returns_start() {
        let start = ProductValue(vec![set(&[1, 2])]);
        for mode in Mode::ALL {
            let r = run::<Value>(&[], start.clone(), &RunConfig::with_mode(mode), &mut Deterministic).unwrap();
            assert_eq!(r.value, start);
            assert_eq!(r.trace.applications(), 0);
            assert!(r.converged());
        }
    }

    #[test]
    fn ci_reapplies_the_chosen_function_but_cii_does_not() {
        let fs = vec![keep("a", 0, &[1, 2])];
        let start = ProductValue(vec![set(&[1, 2, 3])]);
        let ci = run(&fs, start.clone(), &RunConfig::with_mode(Mode::Ci), &mut Deterministic).unwrap();
        let cii = run(&fs, start.clone(), &RunConfig::with_mode(Mode::Cii), &mut Deterministic).unwrap();
        assert_eq!(ci.trace.applications(), 2);
        assert_eq!(cii.trace.applications(), 1);
        let ciq = run(&fs, start.clone(), &RunConfig::with_mode(Mode::Ciq), &mut Deterministic).unwrap();
        let ciiq = run(&fs, start, &RunConfig::with_mode(Mode::Ciiq), &mut Deterministic).unwrap();
        assert_eq!(ciq.trace.applications(), 2);
        assert_eq!(ciiq.trace.applications(), 1);
        assert_eq!(ci.value, ciiq.value);
    }

    #[test]
    fn late_removal_modes_reject_non_idempotent_functions() {
        let f = ReductionFunction::<Value>::new("nid", sch(&[0]), false, |xs| Ok(xs.to_vec()));
        let start = ProductValue(vec![set(&[1])]);
        for mode in [Mode::Cii, Mode::Ciiq] {
            let r = run(&[f.clone()], start.clone(), &RunConfig::with_mode(mode), &mut Deterministic);
            assert!(matches!(r, Err(Error::Config(_))));
        }
    }

    #[test]
    fn non_inflationary_step_is_reported() {
        let grow = ReductionFunction::<Value>::new("grow", sch(&[0]), true, |_| Ok(vec![set(&[1, 2, 3])]));
        let r = run(&[grow], ProductValue(vec![set(&[1])]), &RunConfig::default(), &mut Deterministic);
        assert!(matches!(r, Err(Error::NotInflationary { .. })));
    }

    #[test]
    fn probes_reject_bad_functions() {
        let start = ProductValue(vec![set(&[1, 2, 3, 4])]);
        // shrinks the full set hard but leaves its subsets alone: not monotonic
        let flip = ReductionFunction::<Value>::new("flip", sch(&[0]), false, |xs: &[Value]| {
            let s = xs[0].as_set()?;
            Ok(vec![if s.len() == 4 { set(&[1]) } else { xs[0].clone() }])
        });
        let mut p = Propagator::new(1);
        let err = p.register_probed(flip, &start, &ProbeConfig::default()).unwrap_err();
        assert!(matches!(err, Error::NotMonotonic { .. }), "{err}");

        let grow = ReductionFunction::<Value>::new("grow", sch(&[0]), true, |_| Ok(vec![set(&[1, 2, 3, 4, 5])]));
        let err = p.register_probed(grow, &start, &ProbeConfig::default()).unwrap_err();
        assert!(matches!(err, Error::NotInflationary { .. }));

        assert!(p.register_probed(keep("ok", 0, &[2, 3]), &start, &ProbeConfig::default()).is_ok());
    }

    #[test]
    fn step_cap_stops_the_run() {
        // shrinks an interval by one from the top on every application
        use crate::lattice::GridInterval;
        let shave = ReductionFunction::<Value>::new("shave", sch(&[0]), false, |xs: &[Value]| {
            let i = xs[0].as_interval()?;
            Ok(vec![Value::Interval(match i.span() {
                Some((l, h)) => i.with_bounds(l, h - 1)?,
                None => i.clone(),
            })])
        });
        let start = ProductValue(vec![Value::Interval(GridInterval::integer(0, 100).unwrap())]);
        let cfg = RunConfig { max_steps: 10, ..RunConfig::default() };
        let r = run(&[shave.clone()], start.clone(), &cfg, &mut Deterministic).unwrap();
        assert_eq!(r.trace.outcome, Outcome::StepLimitExceeded);
        assert_eq!(r.trace.applications(), 10);

        let cfg = RunConfig { early_exit: true, ..RunConfig::default() };
        let r = run(&[shave], start, &cfg, &mut Deterministic).unwrap();
        assert_eq!(r.trace.outcome, Outcome::EmptyComponent(0));
        assert_eq!(r.trace.applications(), 101);
    }

    #[test]
    fn closure_star_of_idempotent_and_identity() {
        let f = keep("f", 0, &[1, 2]);
        let star = closure_star(&f, 10);
        assert!(star.is_idempotent());
        for xs in [&[1, 2, 3][..], &[3], &[]] {
            let x = vec![set(xs)];
            assert_eq!(star.apply(&x).unwrap(), f.apply(&x).unwrap());
        }
        let id = ReductionFunction::<Value>::identity("id", sch(&[0]));
        assert_eq!(closure_star(&id, 1).apply(&[set(&[4])]).unwrap(), vec![set(&[4])]);
    }

    #[test]
    fn closure_star_reports_cap() {
        use crate::lattice::GridInterval;
        let shave = ReductionFunction::<Value>::new("shave", sch(&[0]), false, |xs: &[Value]| {
            let i = xs[0].as_interval()?;
            Ok(vec![Value::Interval(match i.span() {
                Some((l, h)) => i.with_bounds(l, h - 1)?,
                None => i.clone(),
            })])
        });
        let star = closure_star(&shave, 5);
        let x = vec![Value::Interval(GridInterval::integer(0, 100).unwrap())];
        assert!(matches!(star.apply(&x), Err(Error::ClosureCap { function, cap: 5 }) if function == "shave"));
    }

    #[test]
    fn compare_limits_orders() {
        let start = ProductValue(vec![set(&[1, 2, 3]), set(&[1, 2, 3])]);
        let a = keep("a", 0, &[1, 2]);
        let b = keep("b", 1, &[1]);
        let noop = ReductionFunction::<Value>::identity("noop", sch(&[0, 1]));
        let cfg = RunConfig::default();
        assert_eq!(compare_limits(&[a.clone()], &[a.clone(), noop], &start, &cfg).unwrap(), LimitOrder::Equal);
        assert_eq!(compare_limits(&[a.clone()], &[a.clone(), b.clone()], &start, &cfg).unwrap(), LimitOrder::Less);
        assert_eq!(compare_limits(&[a.clone(), b.clone()], &[a.clone()], &start, &cfg).unwrap(), LimitOrder::Greater);
        assert_eq!(compare_limits(&[a], &[b], &start, &cfg).unwrap(), LimitOrder::Incomparable);
    }

    #[test]
    fn wake_up_is_exactly_the_dependents() {
        // f0 changes component 0; only functions mentioning 0 are rescheduled
        let fs = vec![keep("f0", 0, &[1]), keep("f1", 1, &[1, 2]), keep("f2", 0, &[1, 2])];
        let start = ProductValue(vec![set(&[1, 2]), set(&[1, 2])]);
        let r = run(&fs, start, &RunConfig::with_mode(Mode::Ciq), &mut Deterministic).unwrap();
        let order: Vec<&str> = r.trace.steps.iter().map(|s| s.id.as_str()).collect();
        // queue [f0 f1 f2]; f0 changes comp 0 and wakes f0 (f2 still queued)
        assert_eq!(order, ["f0", "f1", "f2", "f0"]);
        assert_eq!(r.trace.steps[0].components, vec![0]);
        assert!(!r.trace.steps[1].changed);
    }

    #[test]
    fn strategies_parse() {
        assert_eq!(StrategyKind::parse("det", 0).unwrap(), StrategyKind::Deterministic);
        assert_eq!(StrategyKind::parse("seeded", 7).unwrap(), StrategyKind::Seeded(7));
        assert!(StrategyKind::parse("nope", 0).is_err());
        assert_eq!("CIIQ".parse::<Mode>().unwrap(), Mode::Ciiq);
    }
}
