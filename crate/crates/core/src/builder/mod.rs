//! Stage-by-stage construction of a set `A` with `r_{A,h} = f`.
//!
//! The builder consumes the enumeration `U` of [`crate::useq`]. Stage `A_1`
//! is `{-c_1, (h-1)c_1 + u_1}`. At stage `k`, if `u_k` is already
//! represented as often as it has occurred in `u_1..u_k`, nothing changes;
//! otherwise the pair `{-c_k, (h-1)c_k + u_k}` is adjoined, with `c_k`
//! carrying the sign of `u_k` (positive for `u_k = 0`) and
//!
//! ```text
//! |c_k| > 2h · d_{k-1},   d_{k-1} = max{|a| : a ∈ A_{k-1} ∪ {u_k}},
//! |c_k| >= w_k,           w_k = min{x : φ(x) >= 2k}.
//! ```
//!
//! The first bound makes the new pair create exactly one new representation
//! of `u_k` and keep every other count at 0 or 1 outside `hA_{k-1}`; the
//! second keeps `A_k(-x, x) <= φ(x)` for every `x`.
//!
//! The skip test only looks at `n = u_k`: the stage invariants already cover
//! every other `n`, and the multiplicity count only changes at `u_k`.
//!
//! Every stage is checked against the brute-force counts of
//! [`crate::repcount`] as it is built; [`verify`] replays the same checks
//! from a finished history without touching builder state.

mod text;
mod verify;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::repcount::{self, histogram, FiniteSet, RepHistogram};
use crate::targetfn::{
    config_lines, sparsity_threshold, ConfigLine, SparsityBound, TargetConfig, TargetError,
    TargetFunction,
};
use crate::useq::UStream;

pub use text::{parse_certificate, CertificateFile};
pub use verify::{sparsity_probes, verify};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("stage {k}: invariant `{check}` violated: {witness}")]
    InvariantViolation {
        k: usize,
        check: &'static str,
        witness: String,
    },
    #[error("malformed certificate, line {line}: {msg}")]
    Certificate { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectionMode {
    Minimal,
    SeededRandom,
}

impl SelectionMode {
    pub fn name(self) -> &'static str {
        match self {
            SelectionMode::Minimal => "minimal",
            SelectionMode::SeededRandom => "seeded-random",
        }
    }
}

impl FromStr for SelectionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minimal" => Ok(SelectionMode::Minimal),
            "seeded-random" | "random" => Ok(SelectionMode::SeededRandom),
            _ => Err(format!("unknown policy `{s}`")),
        }
    }
}

/// How `|c_k|` is chosen above its least admissible value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSelectionPolicy {
    pub mode: SelectionMode,
    pub seed: u64,
    /// Largest surplus added in seeded-random mode.
    pub slack_bound: u64,
}

impl CSelectionPolicy {
    pub fn minimal() -> Self {
        CSelectionPolicy {
            mode: SelectionMode::Minimal,
            seed: 0,
            slack_bound: 0,
        }
    }

    pub fn seeded(seed: u64, slack_bound: u64) -> Self {
        CSelectionPolicy {
            mode: SelectionMode::SeededRandom,
            seed,
            slack_bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuilderConfig {
    pub f: TargetFunction,
    pub h: usize,
    pub phi: SparsityBound,
    pub policy: CSelectionPolicy,
    pub max_steps: usize,
}

impl BuilderConfig {
    pub fn new(
        f: TargetFunction,
        h: usize,
        phi: SparsityBound,
        policy: CSelectionPolicy,
        max_steps: usize,
    ) -> Result<Self, BuildError> {
        let config = BuilderConfig {
            f,
            h,
            phi,
            policy,
            max_steps,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        if self.h < 2 {
            return Err(BuildError::InvalidConfig("h must be ≥ 2".into()));
        }
        if self.max_steps == 0 {
            return Err(BuildError::InvalidConfig("steps must be ≥ 1".into()));
        }
        if self.policy.mode == SelectionMode::SeededRandom && self.policy.slack_bound == 0 {
            return Err(BuildError::InvalidConfig(
                "seeded-random policy needs slack ≥ 1".into(),
            ));
        }
        Ok(())
    }

    pub(crate) fn from_lines(lines: Vec<ConfigLine>) -> Result<Self, BuildError> {
        let (target, rest) = TargetConfig::from_lines(lines)?;
        let mut h = None;
        let mut steps = None;
        let mut mode = SelectionMode::Minimal;
        let mut seed = 0;
        let mut slack = None;
        for line in rest {
            match line.key.as_str() {
                "h" => h = Some(line.parse_value::<usize>()?),
                "steps" => steps = Some(line.parse_value::<usize>()?),
                "policy" => mode = line.value()?.parse().map_err(|e: String| line.error(e))?,
                "seed" => seed = line.parse_value()?,
                "slack" => slack = Some(line.parse_value()?),
                other => return Err(line.error(format!("unknown key `{other}`")).into()),
            }
        }
        let h = h.ok_or_else(|| BuildError::InvalidConfig("missing `h`".into()))?;
        let max_steps = steps.ok_or_else(|| BuildError::InvalidConfig("missing `steps`".into()))?;
        let policy = match mode {
            SelectionMode::Minimal => CSelectionPolicy::minimal(),
            SelectionMode::SeededRandom => CSelectionPolicy::seeded(seed, slack.unwrap_or(1000)),
        };
        Self::new(target.f, h, target.phi, policy, max_steps)
    }

    /// Reads the `key = value` config format: the target-function keys plus
    /// `h`, `steps`, `policy`, `seed` and `slack`.
    pub fn parse(text: &str) -> Result<Self, BuildError> {
        Self::from_lines(config_lines(text))
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "h={}\nsteps={}\npolicy={}\n",
            self.h,
            self.max_steps,
            self.policy.mode.name()
        );
        if self.policy.mode == SelectionMode::SeededRandom {
            out.push_str(&format!(
                "seed={}\nslack={}\n",
                self.policy.seed, self.policy.slack_bound
            ));
        }
        let target = TargetConfig {
            f: self.f.clone(),
            phi: self.phi.clone(),
        };
        out.push_str(&target.render());
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Seed,
    Skip,
    Extend,
}

impl Decision {
    pub fn name(self) -> &'static str {
        match self {
            Decision::Seed => "seed",
            Decision::Skip => "skip",
            Decision::Extend => "extend",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Decision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seed" => Ok(Decision::Seed),
            "skip" => Ok(Decision::Skip),
            "extend" => Ok(Decision::Extend),
            _ => Err(format!("unknown decision `{s}`")),
        }
    }
}

/// What happened at stage `k`.
///
/// `d_used` is `d_0` for the seed and `d_{k-1}` for an extension; both
/// are `None` on a skip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub k: usize,
    pub u: i64,
    pub decision: Decision,
    pub c: Option<BigInt>,
    pub d_used: Option<BigInt>,
    pub w: BigInt,
}

impl StepRecord {
    /// The elements adjoined at this stage: `[-c_k, (h-1)c_k + u_k]`, or
    /// nothing on a skip.
    pub fn added(&self, h: usize) -> Vec<BigInt> {
        match &self.c {
            Some(c) => vec![-c, c * (h - 1) + self.u],
            None => Vec::new(),
        }
    }
}

/// The least admissible `c`: sign of `u` (positive for `u >= 0`) and
/// magnitude `max(2h·d + 1, w, 1)`.
pub fn minimal_c(h: usize, u: i64, d: &BigInt, w: &BigInt) -> BigInt {
    let growth: BigInt = d * (2 * h) + 1;
    let magnitude = growth.max(w.clone()).max(BigInt::from(1));
    if u >= 0 {
        magnitude
    } else {
        -magnitude
    }
}

fn select_c(
    config: &BuilderConfig,
    rng: &mut ChaCha8Rng,
    u: i64,
    d: &BigInt,
    w: &BigInt,
) -> BigInt {
    let c = minimal_c(config.h, u, d, w);
    match config.policy.mode {
        SelectionMode::Minimal => c,
        SelectionMode::SeededRandom => {
            let surplus = rng.gen_range(0..=config.policy.slack_bound);
            if c.is_negative() {
                c - surplus
            } else {
                c + surplus
            }
        }
    }
}

/// `A(y, x) = card{a ∈ A : y <= a <= x}`.
pub fn counting_fn(a: &FiniteSet, y: &BigInt, x: &BigInt) -> usize {
    a.count_between(y, x)
}

/// The mutable state of a construction in progress.
#[derive(Clone, Debug)]
pub struct BuilderState {
    config: BuilderConfig,
    k: usize,
    set: FiniteSet,
    hist: RepHistogram,
    d_prev: Option<BigInt>,
    history: Vec<StepRecord>,
    stream: UStream,
    occurrences: HashMap<i64, u64>,
    rng: ChaCha8Rng,
}

impl BuilderState {
    /// Builds `A_1` from `u_1`.
    pub fn seed(config: BuilderConfig) -> Result<Self, BuildError> {
        config.validate()?;
        let h = config.h;
        let mut stream = UStream::new(config.f.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(config.policy.seed);
        let u = stream.next_term().value;
        let d0 = BigInt::from(config.f.d0());
        let w = sparsity_threshold(&config.phi, 1);
        let c = select_c(&config, &mut rng, u, &d0, &w);
        let record = StepRecord {
            k: 1,
            u,
            decision: Decision::Seed,
            c: Some(c),
            d_used: Some(d0),
            w,
        };
        let set = FiniteSet::new(record.added(h));
        let hist = histogram(&set, h).expect("seed set is nonempty");
        let state = BuilderState {
            config,
            k: 1,
            set,
            hist,
            d_prev: None,
            history: vec![record],
            stream,
            occurrences: HashMap::from([(u, 1)]),
            rng,
        };
        if let Some((n, count)) = state.hist.iter().find(|(_, c)| *c != 1) {
            return Err(state.violation("seed-sidon", format!("r({n}) = {count}")));
        }
        state.check_stage()?;
        Ok(state)
    }

    pub fn config(&self) -> &BuilderConfig {
        &self.config
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn set(&self) -> &FiniteSet {
        &self.set
    }

    /// `r_{A_k,h}` of the current stage.
    pub fn histogram(&self) -> &RepHistogram {
        &self.hist
    }

    pub fn d_prev(&self) -> Option<&BigInt> {
        self.d_prev.as_ref()
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }

    pub fn is_done(&self) -> bool {
        self.k >= self.config.max_steps
    }

    /// Picks `c` for value `u` given the growth bound `d` and sparsity
    /// threshold `w`, adding a random surplus in seeded-random mode.
    pub fn choose_c(&mut self, u: i64, d: &BigInt, w: &BigInt) -> BigInt {
        select_c(&self.config, &mut self.rng, u, d, w)
    }

    /// Advances to stage `k + 1`.
    pub fn step(&mut self) -> Result<&StepRecord, BuildError> {
        let h = self.config.h;
        let k = self.k + 1;
        let u = self.stream.next_term().value;
        let need = {
            let seen = self.occurrences.entry(u).or_insert(0);
            *seen += 1;
            *seen
        };
        let u_big = BigInt::from(u);
        let have = repcount::count_unordered(&self.set, h, &u_big);
        let w = sparsity_threshold(&self.config.phi, k as u64);
        self.k = k;

        if have >= need {
            self.history.push(StepRecord {
                k,
                u,
                decision: Decision::Skip,
                c: None,
                d_used: None,
                w,
            });
            return Ok(self.history.last().unwrap());
        }
        if have + 1 != need {
            return Err(self.violation("cond_ii", format!("r({u}) = {have} but need {need}")));
        }

        let d = self.set.max_abs().unwrap_or_default().max(u_big.abs());
        let c = self.choose_c(u, &d, &w);
        let record = StepRecord {
            k,
            u,
            decision: Decision::Extend,
            c: Some(c),
            d_used: Some(d.clone()),
            w,
        };
        let previous = self.hist.clone();
        for a in record.added(h) {
            if !self.set.insert(a.clone()) {
                return Err(self.violation("separation", format!("{a} already in A")));
            }
        }
        self.hist = histogram(&self.set, h).expect("nonempty");
        self.d_prev = Some(d);
        self.history.push(record);
        self.check_increment(&previous, &u_big)?;
        self.check_stage()?;
        Ok(self.history.last().unwrap())
    }

    /// Runs steps until `max_steps` stages exist.
    pub fn run(&mut self) -> Result<(), BuildError> {
        while !self.is_done() {
            self.step()?;
        }
        Ok(())
    }

    fn violation(&self, check: &'static str, witness: String) -> BuildError {
        BuildError::InvariantViolation {
            k: self.k,
            check,
            witness,
        }
    }

    /// The new histogram differs from the old one by exactly one extra
    /// representation of `u` plus new sums of count 1.
    fn check_increment(&self, previous: &RepHistogram, u: &BigInt) -> Result<(), BuildError> {
        for (n, before) in previous.iter() {
            let after = self.hist.get(n);
            let expected = if n == u { before + 1 } else { before };
            if after != expected {
                return Err(self.violation(
                    "increments",
                    format!("r({n}) went from {before} to {after}"),
                ));
            }
        }
        for (n, after) in self.hist.iter() {
            if previous.get(n) == 0 && after != 1 {
                return Err(self.violation("increments", format!("new sum {n} has r = {after}")));
            }
        }
        Ok(())
    }

    /// Conditions (i)–(iv) on the current stage.
    fn check_stage(&self) -> Result<(), BuildError> {
        let h = self.config.h;
        for (n, count) in self.hist.iter() {
            if !self.config.f.eval(n).covers(count) {
                return Err(self.violation(
                    "cond_i",
                    format!("r({n}) = {count} > f({n}) = {}", self.config.f.eval(n)),
                ));
            }
        }
        for (&n, &times) in &self.occurrences {
            let count = self.hist.get(&BigInt::from(n));
            if count < times {
                return Err(self.violation("cond_ii", format!("r({n}) = {count} < {times}")));
            }
        }
        if self.set.len() > 2 * self.k {
            return Err(self.violation("cond_iii", format!("|A| = {}", self.set.len())));
        }
        if let Some((n, count)) = repcount::sidon_witness(&self.set, h - 1) {
            return Err(self.violation("cond_iv", format!("r_{{h-1}}({n}) = {count}")));
        }
        Ok(())
    }

    pub fn into_parts(self) -> (FiniteSet, Vec<StepRecord>) {
        (self.set, self.history)
    }
}

/// Result of one named check in a [`Certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

/// A finished stage together with the replayed checks that vouch for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub config: BuilderConfig,
    pub set: FiniteSet,
    pub history: Vec<StepRecord>,
    pub checks: Vec<CheckResult>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Seeds and runs the construction for `config.max_steps` stages, then
/// verifies the result.
pub fn build(config: &BuilderConfig) -> Result<(FiniteSet, Certificate), BuildError> {
    let mut state = BuilderState::seed(config.clone())?;
    state.run()?;
    let (set, history) = state.into_parts();
    let certificate = verify(&set, &history, config);
    Ok((set, certificate))
}

/// Every intermediate stage `A_1, ..., A_K` of a history.
pub fn stages(history: &[StepRecord], h: usize) -> Vec<FiniteSet> {
    let mut current = FiniteSet::default();
    history
        .iter()
        .map(|record| {
            for a in record.added(h) {
                current.insert(a);
            }
            current.clone()
        })
        .collect()
}
