//! The constants that drive a run: τ, ε, the block count p and the mass
//! thresholds κ_0 > κ_1 > ... > κ_p with κ_{i-1} = 2κ_i + (τ+2)ε.
//!
//! With p = 2^{τ²} and ε^{-1} = p·2^p·(τ+3), κ_i = 2^{-i}/p − (τ+2)ε and
//! κ_p = ε exactly. For τ = 4 the denominator already has 65 552 bits, so the
//! schedule is kept symbolic and each κ_i is produced on demand.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::ratio::{format_rational, Rational};

/// Largest τ whose guaranteed ε is materialized (its denominator has about
/// 2^{τ²} bits).
pub const PAPER_EPSILON_MAX_TAU: usize = 4;

/// Longest schedule [`kappa_schedule`] will expand into a vector.
pub const MAX_MATERIALIZED_SCHEDULE: usize = 1 << 17;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("tau must be at least 3 (got {0})")]
    TauTooSmall(usize),
    #[error("block count p must be at least 2 (got {0})")]
    TooFewBlocks(usize),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("epsilon {epsilon} too large for p = {p}, tau = {tau}: kappa_p < epsilon; largest feasible epsilon is {max_feasible}")]
    Infeasible { epsilon: String, p: usize, tau: usize, max_feasible: String },
    #[error("guaranteed epsilon for tau = {0} is not materialized (denominator has 2^{1} bits)")]
    TooLarge(usize, usize),
    #[error("schedule of length {0} is too long to expand")]
    TooLong(usize),
}

/// p = 2^{τ²}.
pub fn paper_p(tau: usize) -> BigUint {
    BigUint::one() << (tau * tau)
}

/// ε = 1 / (p·2^p·(τ+3)) with p = 2^{τ²}, for 3 ≤ τ ≤ 4.
pub fn paper_epsilon(tau: usize) -> Result<Rational, ScheduleError> {
    if tau < 3 {
        return Err(ScheduleError::TauTooSmall(tau));
    }
    if tau > PAPER_EPSILON_MAX_TAU {
        return Err(ScheduleError::TooLarge(tau, tau * tau));
    }
    let p = 1usize << (tau * tau);
    Ok(max_feasible_epsilon(p, tau))
}

/// 1 / (p·2^p·(τ+3)): the largest ε whose schedule has κ_p ≥ ε.
pub fn max_feasible_epsilon(p: usize, tau: usize) -> Rational {
    let den = (BigInt::from(p) << p) * BigInt::from(tau + 3);
    Rational::new(BigInt::one(), den)
}

/// True iff ε ≤ paper_epsilon(τ) and p ≥ 2^{τ²}, decided without
/// materializing astronomically large constants.
pub fn within_guarantee(tau: usize, epsilon: &Rational, p: usize) -> bool {
    if tau < 3 || tau * tau >= usize::BITS as usize - 1 || p < 1usize << (tau * tau) {
        return false;
    }
    let pp = 1usize << (tau * tau);
    // ε = a/b ≤ 1/(pp·2^pp·(τ+3))  ⇔  a·pp·(τ+3)·2^pp ≤ b
    let (a, b) = (epsilon.numer(), epsilon.denom());
    if b.bits() < pp as u64 {
        return false;
    }
    let lhs = (a * BigInt::from(pp) * BigInt::from(tau + 3)) << pp;
    &lhs <= b
}

/// κ_i = 2^{-i}/p − (τ+2)ε, held over the common denominator p·2^p·b where
/// ε = a/b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaSchedule {
    tau: usize,
    p: usize,
    epsilon: Rational,
    scale: BigInt,
    /// denominator of ε
    eps_den: BigInt,
    /// (τ+2)·ε·scale
    offset: BigInt,
}

impl KappaSchedule {
    pub fn new(p: usize, epsilon: &Rational, tau: usize) -> Result<Self, ScheduleError> {
        if tau < 3 {
            return Err(ScheduleError::TauTooSmall(tau));
        }
        if p < 2 {
            return Err(ScheduleError::TooFewBlocks(p));
        }
        if !epsilon.is_positive() {
            return Err(ScheduleError::NonPositiveEpsilon);
        }
        let (a, b) = (epsilon.numer().clone(), epsilon.denom().clone());
        let scale = (BigInt::from(p) << p) * &b;
        let offset = (BigInt::from(tau + 2) * a * BigInt::from(p)) << p;
        let s = KappaSchedule { tau, p, epsilon: epsilon.clone(), scale, eps_den: b, offset };
        // κ_i decreases in i, so κ_p ≥ ε > 0 covers every index; κ_0 ≤ 1/p ≤ 1
        if s.kappa(p) < *epsilon {
            return Err(ScheduleError::Infeasible {
                epsilon: format_rational(epsilon),
                p,
                tau,
                max_feasible: format_rational(&max_feasible_epsilon(p, tau)),
            });
        }
        Ok(s)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    /// Common denominator of the schedule.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// κ_i · scale, an integer.
    pub fn scaled(&self, i: usize) -> BigInt {
        assert!(i <= self.p, "kappa index {i} beyond p = {}", self.p);
        (&self.eps_den << (self.p - i)) - &self.offset
    }

    /// (τ+2)·ε·scale, the additive term of the recurrence in scaled form.
    pub fn scaled_step(&self) -> &BigInt {
        &self.offset
    }

    pub fn kappa(&self, i: usize) -> Rational {
        Rational::new(self.scaled(i), self.scale.clone())
    }
}

/// κ_0..κ_p as exact rationals.
pub fn kappa_schedule(p: usize, epsilon: &Rational, tau: usize) -> Result<Vec<Rational>, ScheduleError> {
    let s = KappaSchedule::new(p, epsilon, tau)?;
    if p > MAX_MATERIALIZED_SCHEDULE {
        return Err(ScheduleError::TooLong(p));
    }
    Ok((0..=p).map(|i| s.kappa(i)).collect())
}

/// Parameters of one engine run.
#[derive(Clone, Debug)]
pub struct EngineParams {
    pub tau: usize,
    pub epsilon: Rational,
    pub p: usize,
    /// True iff ε ≤ paper_epsilon(τ) and p ≥ 2^{τ²}.
    pub guarantee: bool,
    /// When set, the first spire vertex is drawn from the big piece with a
    /// generator seeded by this value instead of taking the least one.
    pub spire_seed: Option<u64>,
    schedule: Result<KappaSchedule, ScheduleError>,
}

impl EngineParams {
    /// Strict constructor: the κ schedule must be feasible.
    pub fn new(tau: usize, epsilon: Rational, p: usize) -> Result<Self, ScheduleError> {
        let params = Self::exploratory(tau, epsilon, p)?;
        params.schedule.clone()?;
        Ok(params)
    }

    /// Accepts an infeasible schedule; the engine then only runs the checks
    /// that need ε alone and reports `Stuck` afterwards.
    pub fn exploratory(tau: usize, epsilon: Rational, p: usize) -> Result<Self, ScheduleError> {
        if tau < 3 {
            return Err(ScheduleError::TauTooSmall(tau));
        }
        if p < 2 {
            return Err(ScheduleError::TooFewBlocks(p));
        }
        if !epsilon.is_positive() {
            return Err(ScheduleError::NonPositiveEpsilon);
        }
        let schedule = KappaSchedule::new(p, &epsilon, tau);
        let guarantee = within_guarantee(tau, &epsilon, p);
        Ok(EngineParams { tau, epsilon, p, guarantee, spire_seed: None, schedule })
    }

    /// p = 2^{τ²} and the guaranteed ε.
    pub fn paper(tau: usize) -> Result<Self, ScheduleError> {
        let eps = paper_epsilon(tau)?;
        let p = paper_p(tau).to_usize().ok_or(ScheduleError::TooLarge(tau, tau * tau))?;
        Self::new(tau, eps, p)
    }

    /// Largest p in `2..=cap` whose schedule is feasible for (τ, ε).
    pub fn largest_feasible_p(tau: usize, epsilon: &Rational, cap: usize) -> Option<usize> {
        (2..=cap).rev().find(|&p| KappaSchedule::new(p, epsilon, tau).is_ok())
    }

    pub fn with_spire_seed(mut self, seed: Option<u64>) -> Self {
        self.spire_seed = seed;
        self
    }

    pub fn schedule(&self) -> Result<&KappaSchedule, &ScheduleError> {
        self.schedule.as_ref()
    }

    pub fn kappa(&self, i: usize) -> Option<Rational> {
        self.schedule.as_ref().ok().map(|s| s.kappa(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;

    #[test]
    fn guaranteed_epsilon_tau3() {
        let eps = paper_epsilon(3).unwrap();
        let expected = Rational::new(BigInt::one(), (BigInt::from(512) << 512) * BigInt::from(6));
        assert_eq!(eps, expected);
        assert_eq!(paper_p(3), BigUint::from(512u32));
        assert_eq!(paper_p(4), BigUint::from(65536u32));
        assert!(matches!(paper_epsilon(5), Err(ScheduleError::TooLarge(5, 25))));
        assert!(matches!(paper_epsilon(2), Err(ScheduleError::TauTooSmall(2))));
    }

    #[test]
    fn small_schedule_values() {
        let ks = kappa_schedule(8, &ratio(1, 12288), 3).unwrap();
        assert_eq!(ks[0], ratio(1531, 12288));
        assert_eq!(ks[8], ratio(1, 12288));
        for i in 1..=8 {
            assert_eq!(ks[i - 1], &ks[i] * ratio(2, 1) + ratio(5, 12288));
        }
        let err = kappa_schedule(8, &ratio(1, 100), 3).unwrap_err();
        match err {
            ScheduleError::Infeasible { max_feasible, .. } => assert_eq!(max_feasible, "1/12288"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn guaranteed_schedule_ends_at_epsilon() {
        let params = EngineParams::paper(3).unwrap();
        assert!(params.guarantee);
        assert_eq!(params.p, 512);
        assert_eq!(params.kappa(512).unwrap(), params.epsilon);
    }

    #[test]
    fn guarantee_flag() {
        let eps = paper_epsilon(3).unwrap();
        assert!(within_guarantee(3, &eps, 512));
        assert!(!within_guarantee(3, &eps, 511));
        assert!(!within_guarantee(3, &(&eps * ratio(2, 1)), 512));
        assert!(within_guarantee(3, &(&eps * ratio(1, 2)), 600));
        assert!(!within_guarantee(3, &ratio(1, 12288), 8));
        assert!(!within_guarantee(9, &ratio(1, 12288), 8));
        let off = EngineParams::exploratory(3, ratio(1, 10), 4).unwrap();
        assert!(!off.guarantee);
        assert!(off.schedule().is_err());
        assert!(EngineParams::new(3, ratio(1, 10), 4).is_err());
    }

    #[test]
    fn feasible_p_search() {
        assert_eq!(EngineParams::largest_feasible_p(3, &ratio(1, 12288), 8), Some(8));
        assert_eq!(EngineParams::largest_feasible_p(3, &ratio(1, 1000), 8), Some(5));
        assert_eq!(EngineParams::largest_feasible_p(3, &ratio(1, 10), 8), None);
    }
}
