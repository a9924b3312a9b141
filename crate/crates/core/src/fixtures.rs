//! A small lattice with an infinite ascending chain, `ℕ ∪ {ω}` ordered as
//! `0 < 1 < 2 < … < ω`, and three functions on it. Alternating `f1`/`f2`
//! climbs forever; `f3` jumps straight to `ω`. Useful to show that the
//! choice of schedule matters when chains are not finite.

use std::fmt;

use rand::Rng;

use crate::csp::Scheme;
use crate::engine::ReductionFunction;
use crate::error::Result;
use crate::lattice::{Lattice, Sample};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Omega {
    Nat(u64),
    Top,
}

impl fmt::Debug for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Omega::Nat(n) => write!(f, "{n}"),
            Omega::Top => f.write_str("ω"),
        }
    }
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Lattice for Omega {
    fn try_leq(&self, other: &Self) -> Result<bool> {
        Ok(match (self, other) {
            (_, Omega::Top) => true,
            (Omega::Top, Omega::Nat(_)) => false,
            (Omega::Nat(a), Omega::Nat(b)) => a <= b,
        })
    }

    fn try_join(&self, other: &Self) -> Result<Self> {
        Ok(if self.leq(other) { *other } else { *self })
    }

    fn is_top(&self) -> bool {
        *self == Omega::Top
    }

    fn finite_chains(&self) -> bool {
        false
    }
}

impl Sample for Omega {
    fn sample_above<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        match self {
            Omega::Nat(n) if !rng.gen_bool(0.1) => Omega::Nat(n + rng.gen_range(0..4)),
            _ => Omega::Top,
        }
    }
}

fn unary(id: &str, step: fn(Omega) -> Omega) -> ReductionFunction<Omega> {
    let scheme = Scheme::new(vec![0]).expect("single index");
    ReductionFunction::new(id, scheme, true, move |xs: &[Omega]| Ok(vec![step(xs[0])]))
}

/// Even `n` goes to `n + 1`; everything else is fixed.
pub fn f1() -> ReductionFunction<Omega> {
    unary("f1", |x| match x {
        Omega::Nat(n) if n % 2 == 0 => Omega::Nat(n + 1),
        x => x,
    })
}

/// Odd `n` goes to `n + 1`; everything else is fixed.
pub fn f2() -> ReductionFunction<Omega> {
    unary("f2", |x| match x {
        Omega::Nat(n) if n % 2 == 1 => Omega::Nat(n + 1),
        x => x,
    })
}

/// Constant `ω`.
pub fn f3() -> ReductionFunction<Omega> {
    unary("f3", |_| Omega::Top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, Deterministic, Mode, Outcome, RunConfig, Seeded, Lifo};
    use crate::lattice::ProductValue;

    fn start() -> ProductValue<Omega> {
        ProductValue(vec![Omega::Nat(0)])
    }

    #[test]
    fn functions_are_idempotent_and_inflationary() {
        for f in [f1(), f2(), f3()] {
            for x in [Omega::Nat(0), Omega::Nat(1), Omega::Nat(7), Omega::Top] {
                let y = f.apply(&[x]).unwrap();
                assert!(x.leq(&y[0]));
                assert_eq!(f.apply(&y).unwrap(), y);
            }
        }
    }

    #[test]
    fn alternating_f1_f2_never_stabilizes() {
        let cfg = RunConfig { max_steps: 1000, ..RunConfig::with_mode(Mode::Ci) };
        let r = run(&[f1(), f2()], start(), &cfg, &mut Deterministic).unwrap();
        assert_eq!(r.trace.outcome, Outcome::StepLimitExceeded);
        // every other round CI re-applies the function that just fired, a no-op
        assert_eq!(r.value[0], Omega::Nat(667));
    }

    #[test]
    fn with_f3_every_mode_reaches_omega() {
        for mode in Mode::ALL {
            let r = run(&[f3(), f1(), f2()], start(), &RunConfig::with_mode(mode), &mut Deterministic).unwrap();
            assert!(r.converged());
            assert_eq!(r.value[0], Omega::Top);
        }
        // any fair schedule: the value only reaches ω through f3
        let r = run(&[f1(), f2(), f3()], start(), &RunConfig::default(), &mut Seeded::new(3)).unwrap();
        assert_eq!(r.value[0], Omega::Top);
    }

    #[test]
    fn step_counts_with_f3_first() {
        let fs = [f3(), f1(), f2()];
        let n = |mode| run(&fs, start(), &RunConfig::with_mode(mode), &mut Deterministic).unwrap().trace.applications();
        // f3 changes the value; CI reschedules f3 itself, CII does not
        assert_eq!(n(Mode::Cii), 3);
        assert_eq!(n(Mode::Ci), 4);
        assert_eq!(n(Mode::Ciiq), 3);
        assert_eq!(n(Mode::Ciq), 4);
    }

    #[test]
    fn lifo_can_starve_f3() {
        // the most recent pending function always wins; f1 and f2 keep waking each other
        let cfg = RunConfig { max_steps: 500, ..RunConfig::with_mode(Mode::Ci) };
        let r = run(&[f1(), f2(), f3()], start(), &cfg, &mut Lifo).unwrap();
        assert!(r.trace.steps.iter().all(|s| s.id != "f3"));
        assert_eq!(r.trace.outcome, Outcome::StepLimitExceeded);
    }
}
