//! Seeded random-point sampling and the exact-equality verification loop.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::{Instance, SampleRecord, Status, VerificationReport};
use crate::scalar::{q_int, q_is_unit_modulus, q_to_string, Q};

pub const DEFAULT_RANGE: i64 = 1_000_000;
pub const DEFAULT_COUNT: usize = 5;
const DEFAULT_RETRIES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlotKind {
    /// Spectral parameter or inhomogeneity: nonzero, distinct from every other spectral slot.
    Spectral,
    /// Deformation parameter q: ratio of two nonzero integers with |q| ≠ 1.
    Deformation,
    /// Rational deformation scale h: nonzero.
    Scale,
    /// Nonzero value with no distinctness requirement.
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub name: String,
    pub kind: SlotKind,
}

/// An ordered list of named slots.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Slots(Vec<Slot>);

impl Slots {
    pub fn new() -> Self {
        Slots(Vec::new())
    }

    pub fn with(mut self, name: impl Into<String>, kind: SlotKind) -> Self {
        self.0.push(Slot { name: name.into(), kind });
        self
    }

    /// Spectral slots `{prefix}1 .. {prefix}{len}`.
    pub fn family(mut self, prefix: &str, len: usize) -> Self {
        for k in 1..=len {
            self.0.push(Slot { name: format!("{prefix}{k}"), kind: SlotKind::Spectral });
        }
        self
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Slot> {
        self.0.iter()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, Q>);

impl Assignment {
    pub fn get(&self, name: &str) -> &Q {
        self.0.get(name).unwrap_or_else(|| panic!("slot `{name}` was not sampled"))
    }

    pub fn family(&self, prefix: &str, len: usize) -> Vec<Q> {
        (1..=len).map(|k| self.get(&format!("{prefix}{k}")).clone()).collect()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: Q) {
        self.0.insert(name.into(), value);
    }

    pub fn to_strings(&self) -> BTreeMap<String, String> {
        self.0.iter().map(|(k, v)| (k.clone(), q_to_string(v))).collect()
    }

    pub fn values(&self) -> impl Iterator<Item = (&String, &Q)> {
        self.0.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exclusions {
    pub distinct_spectral: bool,
    pub max_retries: usize,
}

impl Default for Exclusions {
    fn default() -> Self {
        Exclusions { distinct_spectral: true, max_retries: DEFAULT_RETRIES }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePlan {
    pub seed: u64,
    pub count: usize,
    pub range: i64,
    pub exclusions: Exclusions,
}

impl SamplePlan {
    pub fn new(seed: u64, count: usize) -> Self {
        SamplePlan { seed, count, range: DEFAULT_RANGE, exclusions: Exclusions::default() }
    }

    /// A plan with its own independent seed stream, for sub-checks of a suite.
    pub fn derive(&self, tag: &str) -> Self {
        let mut h = self.seed ^ 0x9e37_79b9_7f4a_7c15;
        for b in tag.bytes() {
            h = splitmix(h ^ u64::from(b));
        }
        SamplePlan { seed: h, ..self.clone() }
    }

    pub fn with_count(&self, count: usize) -> Self {
        SamplePlan { count, ..self.clone() }
    }

    /// The assignment for sample `index` on replacement attempt `attempt`.
    pub fn assignment(&self, slots: &Slots, index: usize, attempt: usize) -> Result<Assignment> {
        if slots.is_empty() {
            return Err(Error::Config("no slots to sample".into()));
        }
        if self.range < 2 {
            return Err(Error::Config("sample range must be at least 2".into()));
        }
        let stream = splitmix(splitmix(self.seed ^ splitmix(index as u64)) ^ attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(stream);
        for _ in 0..self.exclusions.max_retries {
            if let Some(a) = self.draw(slots, &mut rng) {
                return Ok(a);
            }
        }
        Err(Error::Exhausted(self.exclusions.max_retries))
    }

    fn draw(&self, slots: &Slots, rng: &mut ChaCha8Rng) -> Option<Assignment> {
        let mut out = Assignment::default();
        let mut seen = BTreeSet::new();
        for slot in slots.iter() {
            let value = match slot.kind {
                SlotKind::Spectral => {
                    let v = q_int(self.nonzero(rng));
                    if self.exclusions.distinct_spectral && !seen.insert(v.clone()) {
                        return None;
                    }
                    v
                }
                SlotKind::Deformation => {
                    let v = Q::new(self.nonzero(rng).into(), self.nonzero(rng).into());
                    if q_is_unit_modulus(&v) {
                        return None;
                    }
                    v
                }
                SlotKind::Scale | SlotKind::Free => q_int(self.nonzero(rng)),
            };
            out.insert(slot.name.clone(), value);
        }
        Some(out)
    }

    fn nonzero(&self, rng: &mut ChaCha8Rng) -> i64 {
        loop {
            let x = rng.random_range(-self.range..=self.range);
            if x != 0 {
                return x;
            }
        }
    }
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn sample_assignment(plan: &SamplePlan, slots: &Slots) -> Result<Assignment> {
    plan.assignment(slots, 0, 0)
}

/// Labels a report; the sampling outcome fills in the rest.
#[derive(Clone, Debug, Default)]
pub struct Check {
    pub identity: String,
    pub anchor: String,
    pub flavor: Option<String>,
    pub instance: Instance,
}

impl Check {
    pub fn new(identity: impl Into<String>, anchor: impl Into<String>) -> Self {
        Check { identity: identity.into(), anchor: anchor.into(), ..Default::default() }
    }

    pub fn flavor(mut self, flavor: impl ToString) -> Self {
        self.flavor = Some(flavor.to_string());
        self
    }

    pub fn instance(mut self, instance: Instance) -> Self {
        self.instance = instance;
        self
    }

    /// Runs `holds` at `plan.count` sampled assignments. Domain errors (a
    /// denominator vanishing at the sampled point) replace the sample.
    pub fn run<F>(self, plan: &SamplePlan, slots: &Slots, holds: F) -> VerificationReport
    where
        F: Fn(&Assignment) -> Result<bool> + Sync,
    {
        let start = Instant::now();
        let outcomes: Vec<std::result::Result<(SampleRecord, Assignment), String>> = (0..plan.count)
            .into_par_iter()
            .map(|index| {
                let mut attempt = 0;
                loop {
                    let a = plan.assignment(slots, index, attempt).map_err(|e| e.to_string())?;
                    match holds(&a) {
                        Ok(equal) => return Ok((SampleRecord { index, equal, replaced: attempt }, a)),
                        Err(Error::Domain(_)) if attempt < plan.exclusions.max_retries => attempt += 1,
                        Err(e) => return Err(e.to_string()),
                    }
                }
            })
            .collect();
        let mut records = Vec::new();
        let mut counterexample = None;
        let mut note = None;
        for outcome in outcomes {
            match outcome {
                Ok((rec, a)) => {
                    if !rec.equal && counterexample.is_none() {
                        counterexample = Some(a.to_strings());
                    }
                    records.push(rec);
                }
                Err(e) => {
                    note.get_or_insert(e);
                }
            }
        }
        let status = if note.is_none() && records.iter().all(|r| r.equal) { Status::Pass } else { Status::Fail };
        self.finish(plan, status, records, counterexample, note, start)
    }

    /// A report for a check that does not sample (exact integer identities, preconditions).
    pub fn outcome(self, plan: &SamplePlan, holds: bool, note: Option<String>) -> VerificationReport {
        let records = vec![SampleRecord { index: 0, equal: holds, replaced: 0 }];
        let status = if holds { Status::Pass } else { Status::Fail };
        self.finish(plan, status, records, None, note, Instant::now())
    }

    pub fn skipped(self, plan: &SamplePlan, reason: impl Into<String>) -> VerificationReport {
        self.finish(plan, Status::Skipped, Vec::new(), None, Some(reason.into()), Instant::now())
    }

    fn finish(
        self,
        plan: &SamplePlan,
        status: Status,
        records: Vec<SampleRecord>,
        counterexample: Option<BTreeMap<String, String>>,
        note: Option<String>,
        start: Instant,
    ) -> VerificationReport {
        VerificationReport {
            identity: self.identity,
            anchor: self.anchor,
            flavor: self.flavor,
            instance: self.instance,
            seed: plan.seed,
            samples: records.len(),
            status,
            records,
            counterexample,
            note,
            duration_ms: start.elapsed().as_millis() as u64,
        }
    }
}

/// Exact comparison of two evaluators over the plan's sample points.
pub fn verify_equal_at_samples<V, L, R>(
    check: Check,
    plan: &SamplePlan,
    slots: &Slots,
    lhs: L,
    rhs: R,
) -> VerificationReport
where
    V: PartialEq,
    L: Fn(&Assignment) -> Result<V> + Sync,
    R: Fn(&Assignment) -> Result<V> + Sync,
{
    check.run(plan, slots, |a| Ok(lhs(a)? == rhs(a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn slots() -> Slots {
        Slots::new().with("q", SlotKind::Deformation).family("u", 2)
    }

    #[test]
    fn assignments_are_valid_and_reproducible() {
        let plan = SamplePlan::new(1, 5);
        let a = sample_assignment(&plan, &slots()).unwrap();
        let b = sample_assignment(&plan, &slots()).unwrap();
        assert_eq!(a, b);
        let q = a.get("q");
        assert!(!q.is_zero() && !q_is_unit_modulus(q));
        assert_ne!(a.get("u1"), a.get("u2"));
        let other = sample_assignment(&SamplePlan::new(2, 5), &slots()).unwrap();
        assert!(!other.get("u1").is_zero());
    }

    #[test]
    fn empty_slots_rejected() {
        assert!(sample_assignment(&SamplePlan::new(0, 1), &Slots::new()).is_err());
    }

    #[test]
    fn tiny_range_exhausts() {
        let mut plan = SamplePlan::new(0, 1);
        plan.range = 2;
        let err = sample_assignment(&plan, &Slots::new().family("u", 5)).unwrap_err();
        assert_eq!(err, Error::Exhausted(DEFAULT_RETRIES));
    }

    #[test]
    fn equality_verdicts() {
        let plan = SamplePlan::new(3, 5);
        let s = Slots::new().family("u", 2);
        let one = verify_equal_at_samples(Check::new("one", "t"), &plan, &s, |_| Ok(Q::one()), |_| Ok(Q::one()));
        assert_eq!(one.status, Status::Pass);
        let comm = verify_equal_at_samples(
            Check::new("comm", "t"),
            &plan,
            &s,
            |a| Ok(a.get("u1") + a.get("u2")),
            |a| Ok(a.get("u2") + a.get("u1")),
        );
        assert_eq!(comm.status, Status::Pass);
        let bad = verify_equal_at_samples(
            Check::new("bad", "t"),
            &plan,
            &s,
            |a| Ok(a.get("u1").clone()),
            |a| Ok(a.get("u2").clone()),
        );
        assert_eq!(bad.status, Status::Fail);
        assert!(bad.counterexample.is_some());
    }

    #[test]
    fn domain_errors_replace_samples() {
        let plan = SamplePlan::new(4, 3);
        let s = Slots::new().family("u", 1);
        let r = Check::new("flaky", "t").run(&plan, &s, |a| {
            if a.get("u1") > &Q::zero() {
                Err(crate::error::domain("pole"))
            } else {
                Ok(true)
            }
        });
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.records.len(), 3);
    }
}
