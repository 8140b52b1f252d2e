//! Named verification suites and their configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bethe::{verify_b_equals_bhat, verify_psi_closed_forms};
use crate::commutation::{
    rank_one_ik_form, verify_coefficient_routes, verify_grid_coefficients, verify_multiple_commutation, CommutationInstance,
};
use crate::degeneration::{check_degenerate_r, exponent_identity, exponent_identity_random};
use crate::error::{Error, Result};
use crate::grid::{
    check_colored_grid, check_domain_wall, check_enlarged_grid, check_grid_f, check_grid_weight_form, check_psi_equals_w,
};
use crate::gt::{
    verify_golden, verify_gt_independence, verify_minor_commutativity, verify_qdet_diagonalization, verify_relation_gz,
    verify_show_relation_gz, verify_singular_ladder,
};
use crate::monodromy::{check_exchange, check_rtt};
use crate::report::VerificationReport;
use crate::rmatrix::{check_flavor_duality, check_unitarity, check_yang_baxter, RFlavor};
use crate::sample::{Check, SamplePlan, DEFAULT_COUNT};
use crate::special::{check_ik_determinant, check_ik_left_right, check_weight_degeneration, check_weight_symmetry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Rmatrix,
    Weightfn,
    Grid,
    Commutation,
    BetheGt,
    Degeneration,
    Golden,
    All,
}

impl Suite {
    pub const NAMED: [Suite; 7] =
        [Suite::Rmatrix, Suite::Weightfn, Suite::Grid, Suite::Commutation, Suite::BetheGt, Suite::Degeneration, Suite::Golden];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Rmatrix => "rmatrix",
            Suite::Weightfn => "weightfn",
            Suite::Grid => "grid",
            Suite::Commutation => "commutation",
            Suite::BetheGt => "bethe-gt",
            Suite::Degeneration => "degeneration",
            Suite::Golden => "golden",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::NAMED
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

/// Size limits for the enumerations inside the suites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest weight-function layer.
    pub layer: usize,
    /// Longest colour word L.
    pub length: usize,
    /// Largest Izergin–Korepin / domain-wall size.
    pub ik: usize,
    /// Largest |t̄^k| in the Bethe-vector comparison.
    pub nested: usize,
    /// Largest GT part in the relation check.
    pub part: usize,
    /// Random states for the quantum-minor check.
    pub states: usize,
    /// Random size vectors for the exponent identity.
    pub exponents: usize,
    /// Largest N for the R-matrix jets.
    pub jet_rank: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { layer: 2, length: 4, ik: 4, nested: 2, part: 2, states: 20, exponents: 200, jet_rank: 4 }
    }
}

impl Caps {
    pub const KEYS: [&'static str; 8] = ["layer", "length", "ik", "nested", "part", "states", "exponents", "jet_rank"];

    fn slot(&mut self, key: &str) -> Option<&mut usize> {
        Some(match key {
            "layer" => &mut self.layer,
            "length" => &mut self.length,
            "ik" => &mut self.ik,
            "nested" => &mut self.nested,
            "part" => &mut self.part,
            "states" => &mut self.states,
            "exponents" => &mut self.exponents,
            "jet_rank" => &mut self.jet_rank,
            _ => return None,
        })
    }
}

impl FromStr for Caps {
    type Err = Error;

    /// `key=value,key=value`, starting from the defaults.
    fn from_str(s: &str) -> Result<Self> {
        let mut caps = Caps::default();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| Error::Config(format!("cap {item:?} is not key=value")))?;
            let value: usize = v.trim().parse().map_err(|_| Error::Config(format!("cap {k} needs a non-negative integer")))?;
            let slot = caps.slot(k.trim()).ok_or_else(|| {
                Error::Config(format!("unknown cap {k:?}; expected one of {}", Caps::KEYS.join(", ")))
            })?;
            *slot = value;
        }
        if caps.nested > crate::bethe::NESTED_CAP {
            return Err(Error::Config(format!("nested cap above {}", crate::bethe::NESTED_CAP)));
        }
        Ok(caps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct SuiteConfig {
    pub flavor: Option<RFlavor>,
    pub rank: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    pub n: Option<usize>,
    pub seed: u64,
    /// Overrides every suite's own sample count.
    pub samples: Option<usize>,
    pub caps: Caps,
    pub jobs: Option<usize>,
}


type Job = Box<dyn Fn() -> VerificationReport + Send + Sync>;

struct Builder<'a> {
    config: &'a SuiteConfig,
    suite: Suite,
    jobs: Vec<Job>,
}

impl<'a> Builder<'a> {
    fn plan(&self, tag: &str, default_count: usize) -> SamplePlan {
        let base = SamplePlan::new(self.config.seed, self.config.samples.unwrap_or(default_count));
        base.derive(&format!("{}/{tag}", self.suite))
    }

    fn push(&mut self, tag: String, default_count: usize, f: impl Fn(&SamplePlan) -> VerificationReport + Send + Sync + 'static) {
        let plan = self.plan(&tag, default_count);
        self.jobs.push(Box::new(move || f(&plan)));
    }

    fn flavors(&self, allowed: &[RFlavor]) -> Vec<RFlavor> {
        allowed.iter().copied().filter(|f| self.config.flavor.is_none_or(|x| x == *f)).collect()
    }

    fn ranks(&self, allowed: &[usize]) -> Vec<usize> {
        match self.config.rank {
            Some(r) => vec![r],
            None => allowed.to_vec(),
        }
    }

    fn lengths(&self, allowed: &[usize]) -> Vec<usize> {
        match self.config.n {
            Some(n) => vec![n],
            None => allowed.to_vec(),
        }
    }
}

fn rmatrix(b: &mut Builder<'_>) {
    for n_rank in b.ranks(&[2, 3, 4]) {
        for flavor in b.flavors(&RFlavor::ALL) {
            b.push(format!("ybe/{flavor}/{n_rank}"), DEFAULT_COUNT, move |p| check_yang_baxter(flavor, n_rank, p));
            b.push(format!("unitarity/{flavor}/{n_rank}"), DEFAULT_COUNT, move |p| check_unitarity(flavor, n_rank, p));
        }
        if b.config.flavor.is_none() {
            b.push(format!("duality/{n_rank}"), 100, move |p| check_flavor_duality(n_rank, p));
        }
    }
    for n_rank in b.ranks(&[2, 3]) {
        for flavor in b.flavors(&RFlavor::ALL) {
            b.push(format!("rtt/{flavor}/{n_rank}"), DEFAULT_COUNT, move |p| check_rtt(flavor, n_rank, 2, p));
        }
        for flavor in b.flavors(&[RFlavor::TrigA, RFlavor::Rational]) {
            b.push(format!("exchange/{flavor}/{n_rank}"), DEFAULT_COUNT, move |p| check_exchange(flavor, n_rank, 2, p));
        }
    }
}

const WEIGHT_FLAVORS: [RFlavor; 2] = [RFlavor::TrigA, RFlavor::Rational];

fn weightfn(b: &mut Builder<'_>) {
    let (layer, length) = (b.config.caps.layer, b.config.caps.length);
    for flavor in b.flavors(&WEIGHT_FLAVORS) {
        for rank in b.ranks(&[2, 3]) {
            for len in b.lengths(&(1..=length.min(3)).collect::<Vec<_>>()) {
                b.push(format!("symmetry/{flavor}/{rank}/{len}"), DEFAULT_COUNT, move |p| {
                    check_weight_symmetry(flavor, rank, len, layer, p)
                });
            }
        }
        for n in 1..=b.config.caps.ik {
            b.push(format!("ik/{flavor}/{n}"), DEFAULT_COUNT, move |p| check_ik_determinant(flavor, n, p));
        }
    }
    if b.config.flavor.is_none_or(|f| f == RFlavor::TrigA) {
        for n in 1..=b.config.caps.ik {
            b.push(format!("ik-left-right/{n}"), DEFAULT_COUNT, move |p| check_ik_left_right(n, p));
        }
    }
    for rank in b.ranks(&[2, 3]) {
        for len in b.lengths(&[1, 2, 3]) {
            b.push(format!("degeneration/{rank}/{len}"), 2, move |p| check_weight_degeneration(rank, len, layer.min(2), p));
        }
    }
}

fn grid(b: &mut Builder<'_>) {
    let (layer, length) = (b.config.caps.layer, b.config.caps.length);
    for flavor in b.flavors(&WEIGHT_FLAVORS) {
        for rank in b.ranks(&[2, 3]) {
            for len in b.lengths(&(1..=length).collect::<Vec<_>>()) {
                b.push(format!("psi-w/{flavor}/{rank}/{len}"), DEFAULT_COUNT, move |p| {
                    check_psi_equals_w(flavor, rank, len, layer, p)
                });
            }
        }
        for n in 1..=b.config.caps.ik {
            b.push(format!("domain-wall/{flavor}/{n}"), DEFAULT_COUNT, move |p| check_domain_wall(flavor, n, p));
        }
        let sizes: Vec<Vec<usize>> = match &b.config.sizes {
            Some(s) => vec![s.clone()],
            None => vec![vec![1, 1], vec![2, 1], vec![1, 1, 1], vec![2, 1, 1], vec![1, 2, 1]],
        };
        for s in sizes.into_iter().filter(|s| s.len() >= 2) {
            let key = sizes_key(&s);
            let (s1, s2, s3) = (s.clone(), s.clone(), s.clone());
            b.push(format!("enlarged/{flavor}/{key}"), DEFAULT_COUNT, move |p| check_enlarged_grid(flavor, &s1, p));
            b.push(format!("weight-form/{flavor}/{key}"), DEFAULT_COUNT, move |p| check_grid_weight_form(flavor, &s2, p));
            b.push(format!("frozen-row/{flavor}/{key}"), DEFAULT_COUNT, move |p| check_grid_f(flavor, &s3, p));
        }
        for rank in b.ranks(&[2, 3]) {
            for n in b.lengths(&[2, 3]) {
                b.push(format!("coloured/{flavor}/{rank}/{n}"), 3, move |p| check_colored_grid(flavor, rank, n, p));
            }
        }
    }
}

fn sizes_key(s: &[usize]) -> String {
    s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

// Largest N^n for the default independent-inhomogeneity instance.
const EXTRA_STATE_CAP: usize = 128;

fn commutation(b: &mut Builder<'_>) {
    let instances: Vec<Vec<usize>> = match &b.config.sizes {
        Some(s) => vec![s.clone()],
        None => vec![vec![1, 1], vec![2, 1], vec![2, 2], vec![1, 1, 1], vec![2, 1, 1]],
    };
    let instances: Vec<Vec<usize>> =
        instances.into_iter().filter(|s| b.config.rank.is_none_or(|r| r == s.len())).collect();
    for flavor in b.flavors(&[RFlavor::TrigA, RFlavor::Rational]) {
        for s in &instances {
            let key = sizes_key(s);
            let total: usize = s.iter().sum();
            let n_extra = b.config.n.unwrap_or_else(|| {
                if s.len().pow(total as u32 + 1) <= EXTRA_STATE_CAP { total + 1 } else { total }
            });
            let (sa, sb, sc) = (s.clone(), s.clone(), s.clone());
            b.push(format!("relation/{flavor}/{key}/union"), 3, move |p| match CommutationInstance::on_union(flavor, &sa) {
                Ok(i) => verify_multiple_commutation(&i, p),
                Err(e) => config_failure("multiple-commutation", p, e),
            });
            b.push(format!("relation/{flavor}/{key}/{n_extra}"), 3, move |p| {
                match CommutationInstance::new(flavor, &sb, n_extra) {
                    Ok(i) => verify_multiple_commutation(&i, p),
                    Err(e) => config_failure("multiple-commutation", p, e),
                }
            });
            b.push(format!("grid-coefficients/{flavor}/{key}"), 3, move |p| {
                match CommutationInstance::on_union(flavor, &sc) {
                    Ok(i) => verify_grid_coefficients(&i, p),
                    Err(e) => config_failure("multiple-commutation-grid-coefficients", p, e),
                }
            });
            if s.len() == 3 {
                let sd = s.clone();
                b.push(format!("routes/{flavor}/{key}"), DEFAULT_COUNT, move |p| {
                    match CommutationInstance::new(flavor, &sd, 0) {
                        Ok(i) => verify_coefficient_routes(&i, p),
                        Err(e) => config_failure("coefficient-routes", p, e),
                    }
                });
            }
            if let [m1, m2] = s[..] {
                b.push(format!("rank-one/{flavor}/{key}"), 3, move |p| rank_one_ik_form(flavor, [m1, m2], m1 + m2, p));
            }
        }
    }
}

fn config_failure(identity: &str, plan: &SamplePlan, e: Error) -> VerificationReport {
    Check::new(identity, "configuration").outcome(plan, false, Some(e.to_string()))
}

fn bethe_gt(b: &mut Builder<'_>) {
    let trig_b = b.config.flavor.is_none_or(|f| f == RFlavor::TrigB);
    if trig_b {
        let nested = b.config.caps.nested;
        for n in b.lengths(&[2, 3]) {
            b.push(format!("b-equals-bhat/{n}"), 3, move |p| verify_b_equals_bhat(3, n, nested, p));
            b.push(format!("psi/{n}"), 3, move |p| verify_psi_closed_forms(3, n, p));
        }
    }
    let part = b.config.caps.part;
    for flavor in b.flavors(&[RFlavor::TrigA, RFlavor::Rational]) {
        for n in b.lengths(&[3, 4]) {
            b.push(format!("relation/{flavor}/{n}"), 3, move |p| verify_relation_gz(flavor, 3, n, part, p));
        }
        for rank in b.ranks(&[2, 3]) {
            for n in b.lengths(&[1, 2, 3]) {
                b.push(format!("qdet/{flavor}/{rank}/{n}"), 3, move |p| verify_qdet_diagonalization(flavor, rank, n, p));
                b.push(format!("ladder/{flavor}/{rank}/{n}"), 3, move |p| verify_singular_ladder(flavor, rank, n, p));
                b.push(format!("independence/{flavor}/{rank}/{n}"), 3, move |p| verify_gt_independence(flavor, rank, n, p));
            }
        }
        let states = b.config.caps.states;
        for rank in b.ranks(&[2, 3]) {
            b.push(format!("minor/{flavor}/{rank}"), 1, move |p| verify_minor_commutativity(flavor, rank, 2, states, p));
        }
    }
    for flavor in b.flavors(&[RFlavor::TrigB, RFlavor::Rational]) {
        for n in b.lengths(&[3]) {
            b.push(format!("flipped-relation/{flavor}/{n}"), 3, move |p| verify_show_relation_gz(flavor, 3, n, p));
        }
    }
}

fn degeneration(b: &mut Builder<'_>) {
    let jet_rank = b.config.caps.jet_rank;
    for rank in b.ranks(&(2..=jet_rank.max(2)).collect::<Vec<_>>()) {
        b.push(format!("r-jet/{rank}"), DEFAULT_COUNT, move |p| check_degenerate_r(rank, 2, p));
    }
    b.push("exponents/worked".into(), 1, |p| exponent_identity(&[1, 1, 1], p));
    let count = b.config.caps.exponents;
    b.push("exponents/random".into(), 1, move |p| exponent_identity_random(count, 6, p));
}

fn golden(b: &mut Builder<'_>) {
    b.push("worked-example".into(), 6, verify_golden);
}

/// The checks of `suite` in their fixed order, run on up to `config.jobs` threads.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::NAMED.to_vec() } else { vec![suite] };
    let mut jobs: Vec<Job> = Vec::new();
    for s in suites {
        let mut b = Builder { config, suite: s, jobs: Vec::new() };
        match s {
            Suite::Rmatrix => rmatrix(&mut b),
            Suite::Weightfn => weightfn(&mut b),
            Suite::Grid => grid(&mut b),
            Suite::Commutation => commutation(&mut b),
            Suite::BetheGt => bethe_gt(&mut b),
            Suite::Degeneration => degeneration(&mut b),
            Suite::Golden => golden(&mut b),
            Suite::All => unreachable!("expanded above"),
        }
        jobs.extend(b.jobs);
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = config.jobs {
        if j == 0 {
            return Err(Error::Config("--jobs must be positive".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| Error::Config(e.to_string()))?;
    Ok(pool.install(|| jobs.par_iter().map(|job| job()).collect()))
}

/// Count of reports per status, for summaries.
pub fn tally(reports: &[VerificationReport]) -> BTreeMap<String, usize> {
    let mut t = BTreeMap::new();
    for r in reports {
        *t.entry(r.status.to_string()).or_insert(0) += 1;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_parse() {
        let c: Caps = "layer=3, states=4".parse().unwrap();
        assert_eq!((c.layer, c.states, c.ik), (3, 4, 4));
        assert!("bogus=1".parse::<Caps>().is_err());
        assert!("layer".parse::<Caps>().is_err());
        assert!("layer=-1".parse::<Caps>().is_err());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::NAMED {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn golden_suite_passes() {
        let reports = run_suite(Suite::Golden, &SuiteConfig::default()).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].passed());
        assert_eq!(reports[0].samples, 6);
    }
}
