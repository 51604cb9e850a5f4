//! The check registry and the machinery behind it: an independent subplane
//! oracle, quadric systems, the two-subplane construction and the splash
//! census.
//!
//! Every check is a pure function of `(id, tower, seed, budget)`. A report
//! carries counters for every assertion tested, and at most a handful of
//! witnesses per failing assertion.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::bruckbose::BruckBoseContext;
use crate::error::GeomError;
use crate::gfq::FieldTower;
use crate::splash::{self, Cover, CoverRoles, FixedFrame, Splash, Subplane};

pub mod census;
pub mod construction;
pub mod cubics;
pub mod oracle;
pub mod quadrics;

mod checks2;
mod checks3;
mod checks4;
mod checks5;

pub use census::{enumerate_splashes, splash_intersection_census, Census, SplashRecord};
pub use construction::{construct_two_subplanes, ConstructionTrace};
pub use quadrics::{check_line_in_quadric, quadric_system_of, surface_quadric_system, QuadricSystem};

/// Default cap on the size of any single enumeration.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

/// Identifiers of the fixed check registry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    C2_3,
    C2_5a,
    C2_5b,
    C3_2,
    C3_3,
    C3_4,
    C3_5,
    C3_6,
    C3_7,
    C3_8,
    C3_9,
    C3_10,
    C3_11,
    C3_11x,
    C3_12,
    C3_12b,
    C4_1,
    C4_2,
    C4_3,
    C4_4,
    C4_5,
    C5_1,
    C5_2,
    C5_3,
    C5_4,
}

impl CheckId {
    pub const ALL: [CheckId; 25] = [
        CheckId::C2_3,
        CheckId::C2_5a,
        CheckId::C2_5b,
        CheckId::C3_2,
        CheckId::C3_3,
        CheckId::C3_4,
        CheckId::C3_5,
        CheckId::C3_6,
        CheckId::C3_7,
        CheckId::C3_8,
        CheckId::C3_9,
        CheckId::C3_10,
        CheckId::C3_11,
        CheckId::C3_11x,
        CheckId::C3_12,
        CheckId::C3_12b,
        CheckId::C4_1,
        CheckId::C4_2,
        CheckId::C4_3,
        CheckId::C4_4,
        CheckId::C4_5,
        CheckId::C5_1,
        CheckId::C5_2,
        CheckId::C5_3,
        CheckId::C5_4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::C2_3 => "C-2.3",
            CheckId::C2_5a => "C-2.5a",
            CheckId::C2_5b => "C-2.5b",
            CheckId::C3_2 => "C-3.2",
            CheckId::C3_3 => "C-3.3",
            CheckId::C3_4 => "C-3.4",
            CheckId::C3_5 => "C-3.5",
            CheckId::C3_6 => "C-3.6",
            CheckId::C3_7 => "C-3.7",
            CheckId::C3_8 => "C-3.8",
            CheckId::C3_9 => "C-3.9",
            CheckId::C3_10 => "C-3.10",
            CheckId::C3_11 => "C-3.11",
            CheckId::C3_11x => "C-3.11x",
            CheckId::C3_12 => "C-3.12",
            CheckId::C3_12b => "C-3.12b",
            CheckId::C4_1 => "C-4.1",
            CheckId::C4_2 => "C-4.2",
            CheckId::C4_3 => "C-4.3",
            CheckId::C4_4 => "C-4.4",
            CheckId::C4_5 => "C-4.5",
            CheckId::C5_1 => "C-5.1",
            CheckId::C5_2 => "C-5.2",
            CheckId::C5_3 => "C-5.3",
            CheckId::C5_4 => "C-5.4",
        }
    }

    pub fn parse(s: &str) -> Result<CheckId, CheckError> {
        let s = s.trim();
        CheckId::ALL
            .iter()
            .copied()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| CheckError::UnknownCheck(s.to_string()))
    }

    /// Conjecture checks report evidence and never fail a run.
    pub fn is_conjecture(self) -> bool {
        self == CheckId::C3_11x
    }

    pub fn title(self) -> &'static str {
        match self {
            CheckId::C2_3 => "two exterior subplanes per splash and exterior subline",
            CheckId::C2_5a => "sublines of the line at infinity are 2-reguli of the spread",
            CheckId::C2_5b => "exterior sublines are spread-special twisted cubics",
            CheckId::C3_2 => "nuclei of special conics and nucleus lines (q even)",
            CheckId::C3_3 => "special conics are twisted cubics about conic-cover planes",
            CheckId::C3_4 => "special conics hit each conic-cover plane once",
            CheckId::C3_5 => "images of special conics are conic-cover special",
            CheckId::C3_6 => "converse and the count of subplanes with a given splash",
            CheckId::C3_7 => "conic images have order 3 or 6 and no point at infinity",
            CheckId::C3_8 => "order 3 exactly for special conics",
            CheckId::C3_9 => "tangent-cover special cubics and their subplanes",
            CheckId::C3_10 => "tangent of a line image equals tangent of a special conic image",
            CheckId::C3_11 => "quadrics through the subplane image contain two transversal triples",
            CheckId::C3_11x => "quadrics through the subplane image and the tangent-cover transversals",
            CheckId::C3_12 => "the subplane in the spread of the conic cover",
            CheckId::C3_12b => "the point set in the spread of the tangent cover",
            CheckId::C4_1 => "subline families swap between the two subplanes",
            CheckId::C4_2 => "conic and tangent covers swap between the two subplanes",
            CheckId::C4_3 => "conics meeting both subplanes in special conics",
            CheckId::C4_4 => "construction of the two subplanes in PG(6,q)",
            CheckId::C4_5 => "chord labels in conic-cover planes",
            CheckId::C5_1 => "ruling lines of reguli in a splash and cover planes",
            CheckId::C5_2 => "two sublines of one family determine the splash",
            CheckId::C5_3 => "maximal splash intersections are two disjoint sublines",
            CheckId::C5_4 => "cover planes meet a maximal intersection in a line and a conic",
        }
    }

    /// Registry precondition on q.
    pub fn precondition(self, q: u32) -> Result<(), CheckError> {
        let fail = |reason: &str| {
            Err(CheckError::PreconditionUnmet { check: self, q, reason: reason.to_string() })
        };
        match self {
            CheckId::C3_2 if q % 2 == 1 => fail("needs q even"),
            CheckId::C4_4 if q < 3 => fail("needs q >= 3"),
            _ => Ok(()),
        }
    }

    /// Coverage of the check at `q`, printed in every report.
    pub fn scope(self, q: u32) -> &'static str {
        let small = q <= 3;
        match self {
            CheckId::C2_3 => match q {
                2 => "exhaustive over all exterior sublines of one line through each splash point; every (splash, subline) pair is equivalent to one of these under maps fixing the line at infinity pointwise",
                3 => "one seeded exterior subline on a line through each splash point; all (splash, subline) pairs are equivalent under maps fixing the line at infinity pointwise",
                _ => "one seeded exterior subline",
            },
            CheckId::C2_5a => {
                if small {
                    "exhaustive over all sublines and all triples of spread planes"
                } else {
                    "all sublines; seeded sample of triples of spread planes"
                }
            }
            CheckId::C2_5b => {
                if small {
                    "all lines of both subplanes plus seeded random sublines; converse exhaustive in one 3-space about a spread plane"
                } else {
                    "all lines of both subplanes plus seeded random sublines; converse in one 3-space about a spread plane"
                }
            }
            CheckId::C3_2 => "exhaustive over the canonical pencil and all points of the canonical subplane",
            CheckId::C3_3 | CheckId::C3_4 | CheckId::C3_5 => "exhaustive over the special conics of the canonical subplane",
            CheckId::C3_6 => match q {
                2 => "exhaustive: oracle subplane list, every 3-space through a cover plane, brute force over all twisted cubics of one 3-space",
                3 => "cubic count exhaustive over all 3-spaces through cover planes; subplane count from the affine orbit of the canonical subplane; seeded orbit members and converse cubics",
                _ => "cubic count in one seeded 3-space per cover; seeded converse cubics",
            },
            CheckId::C3_7 | CheckId::C3_8 => {
                if small {
                    "exhaustive over all conics of the canonical subplane"
                } else {
                    "seeded sample of conics of the canonical subplane plus all special conics"
                }
            }
            CheckId::C3_9 => {
                if small {
                    "all tangent-cover special cubics in one seeded 3-space per tangent-cover plane"
                } else {
                    "two tangent-cover planes, seeded sample of tangent-cover special cubics"
                }
            }
            CheckId::C3_10 => "exhaustive over the canonical pencil at (0,0,1) and all point-line flags of the canonical subplane",
            CheckId::C3_11 | CheckId::C3_11x => "the quadric system of the canonical subplane image",
            CheckId::C3_12 | CheckId::C3_12b => "exhaustive over the lines and special conics of the canonical subplane",
            CheckId::C4_1 | CheckId::C4_2 => "the canonical subplane and its companion",
            CheckId::C4_3 => "exhaustive over the points of the common subline and over special-conic pairs",
            CheckId::C4_4 => match q {
                3 => "common subline of the canonical pair plus one seeded subline; oracle comparison",
                _ => "common subline of the canonical pair plus one seeded subline",
            },
            CheckId::C4_5 => "all conic-cover, spread and tangent-cover planes of the canonical subplane; tangent-cover label counts recorded",
            CheckId::C5_1 => "all sublines and cover planes of the canonical splash",
            CheckId::C5_2 | CheckId::C5_3 => match q {
                2 | 3 => "exhaustive census of all exterior splashes, all pairs",
                _ => "exhaustive census of all exterior splashes, pairs containing the canonical splash; all exterior splashes are equivalent",
            },
            CheckId::C5_4 => "every maximal partner of the canonical splash in the census",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckError {
    UnknownCheck(String),
    PreconditionUnmet { check: CheckId, q: u32, reason: String },
    BudgetExceeded { check: CheckId, needed: u64, budget: u64 },
    Setup(GeomError),
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::UnknownCheck(s) => write!(f, "unknown check {:?}", s),
            CheckError::PreconditionUnmet { check, q, reason } => write!(f, "{} at q={}: precondition unmet ({})", check, q, reason),
            CheckError::BudgetExceeded { check, needed, budget } => {
                write!(f, "{}: enumeration of {} objects exceeds budget {}", check, needed, budget)
            }
            CheckError::Setup(e) => write!(f, "setup failed: {}", e),
        }
    }
}

impl core::error::Error for CheckError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub assertion: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub check: CheckId,
    pub q: u32,
    pub field: String,
    pub verdict: Verdict,
    pub conjecture: bool,
    pub scope: String,
    /// Counters in the order they were first touched.
    pub counts: Vec<(String, u64)>,
    pub witnesses: Vec<Witness>,
    pub seed: u64,
    pub budget: u64,
}

impl CheckReport {
    pub fn count(&self, key: &str) -> Option<u64> {
        self.counts.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub budget: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: 0, budget: DEFAULT_BUDGET }
    }
}

const MAX_WITNESSES: usize = 5;

/// Accumulates counters and witnesses for one check.
pub(crate) struct Rec {
    counts: Vec<(String, u64)>,
    witnesses: Vec<Witness>,
    failed: bool,
    budget: u64,
}

impl Rec {
    fn new(budget: u64) -> Rec {
        Rec { counts: Vec::new(), witnesses: Vec::new(), failed: false, budget }
    }

    fn slot(&mut self, key: &str) -> &mut u64 {
        if let Some(i) = self.counts.iter().position(|(k, _)| k == key) {
            &mut self.counts[i].1
        } else {
            self.counts.push((key.to_string(), 0));
            &mut self.counts.last_mut().expect("just pushed").1
        }
    }

    /// Add to a plain counter.
    pub fn add(&mut self, key: &str, n: u64) {
        *self.slot(key) += n;
    }

    /// Set a plain counter.
    pub fn set(&mut self, key: &str, n: u64) {
        *self.slot(key) = n;
    }

    /// Record one instance of an assertion.
    pub fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) -> bool {
        let pass = format!("{}.pass", name);
        let fail = format!("{}.fail", name);
        *self.slot(&pass) += u64::from(ok);
        *self.slot(&fail) += u64::from(!ok);
        if !ok {
            self.failed = true;
            let n = self.witnesses.iter().filter(|w| w.assertion == name).count();
            if n < MAX_WITNESSES {
                self.witnesses.push(Witness { assertion: name.to_string(), detail: witness() });
            }
        }
        ok
    }

    /// An exact equality between two counts.
    pub fn check_eq(&mut self, name: &str, got: u64, want: u64) -> bool {
        self.check(name, got == want, || format!("got {}, want {}", got, want))
    }

    /// Refuse an enumeration larger than the budget.
    pub fn budget(&self, needed: u64) -> Result<(), GeomError> {
        if needed > self.budget {
            Err(GeomError::BudgetExceeded { needed, budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// The enumeration cap.
    pub fn limit(&self) -> u64 {
        self.budget
    }

    /// Record a failure from an internal error.
    fn error(&mut self, e: &GeomError) {
        self.check("no_internal_error", false, || e.to_string());
    }
}

/// The canonical configuration every check starts from.
pub(crate) struct Setup {
    pub ctx: BruckBoseContext,
    pub b: Subplane,
    pub splash: Splash,
    pub frame: FixedFrame,
    pub covers: [Cover; 2],
    pub roles: CoverRoles,
}

impl Setup {
    pub fn new(tower: Arc<FieldTower>) -> Result<Setup, GeomError> {
        let ctx = BruckBoseContext::new(tower);
        let (b, splash, frame) = splash::canonical_subplane(&ctx);
        let covers = splash::covers_of(&ctx, &splash)?;
        let roles = splash::classify_covers(&ctx, &b, &frame, &covers)?;
        Ok(Setup { ctx, b, splash, frame, covers, roles })
    }

    pub fn tower(&self) -> &FieldTower {
        self.ctx.tower()
    }

    pub fn conic_cover(&self) -> &Cover {
        &self.covers[self.roles.conic]
    }

    pub fn tangent_cover(&self) -> &Cover {
        &self.covers[self.roles.tangent]
    }
}

/// Seeded generator for sampling, distinct per check.
pub(crate) fn rng_for(id: CheckId, seed: u64) -> ChaCha8Rng {
    let k = CheckId::ALL.iter().position(|c| *c == id).unwrap_or(0) as u64;
    ChaCha8Rng::seed_from_u64(seed ^ (k.wrapping_add(1)).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub(crate) fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// `k` distinct indices below `n`, sorted; all of them when `k >= n`.
pub(crate) fn sample_indices(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    if k < n {
        for i in 0..k {
            let j = i + below(rng, n - i);
            idx.swap(i, j);
        }
        idx.truncate(k);
        idx.sort_unstable();
    }
    idx
}

/// Which checks `all` selects at `q`: every check whose precondition holds.
pub fn applicable_checks(q: u32) -> Vec<CheckId> {
    CheckId::ALL.iter().copied().filter(|c| c.precondition(q).is_ok()).collect()
}

/// The default selection: applicable checks without the conjecture checks.
pub fn default_checks(q: u32) -> Vec<CheckId> {
    applicable_checks(q).into_iter().filter(|c| !c.is_conjecture()).collect()
}

/// Run one check against a tower.
pub fn run_check(id: CheckId, tower: Arc<FieldTower>, opts: RunOptions) -> Result<CheckReport, CheckError> {
    let q = tower.q();
    id.precondition(q)?;
    let field = tower.spec().to_text().unwrap_or_default();
    let setup = Setup::new(tower).map_err(CheckError::Setup)?;
    let mut rec = Rec::new(opts.budget);
    let mut rng = rng_for(id, opts.seed);
    let res = match id {
        CheckId::C2_3 => checks2::c2_3(&setup, &mut rec, &mut rng),
        CheckId::C2_5a => checks2::c2_5a(&setup, &mut rec, &mut rng),
        CheckId::C2_5b => checks2::c2_5b(&setup, &mut rec, &mut rng),
        CheckId::C3_2 => checks3::c3_2(&setup, &mut rec),
        CheckId::C3_3 => checks3::c3_3(&setup, &mut rec),
        CheckId::C3_4 => checks3::c3_4(&setup, &mut rec),
        CheckId::C3_5 => checks3::c3_5(&setup, &mut rec),
        CheckId::C3_6 => checks3::c3_6(&setup, &mut rec, &mut rng),
        CheckId::C3_7 => checks3::c3_7(&setup, &mut rec, &mut rng),
        CheckId::C3_8 => checks3::c3_8(&setup, &mut rec, &mut rng),
        CheckId::C3_9 => checks3::c3_9(&setup, &mut rec, &mut rng),
        CheckId::C3_10 => checks3::c3_10(&setup, &mut rec),
        CheckId::C3_11 => checks3::c3_11(&setup, &mut rec),
        CheckId::C3_11x => checks3::c3_11x(&setup, &mut rec),
        CheckId::C3_12 => checks3::c3_12(&setup, &mut rec),
        CheckId::C3_12b => checks3::c3_12b(&setup, &mut rec, &mut rng),
        CheckId::C4_1 => checks4::c4_1(&setup, &mut rec),
        CheckId::C4_2 => checks4::c4_2(&setup, &mut rec),
        CheckId::C4_3 => checks4::c4_3(&setup, &mut rec),
        CheckId::C4_4 => checks4::c4_4(&setup, &mut rec, &mut rng),
        CheckId::C4_5 => checks4::c4_5(&setup, &mut rec),
        CheckId::C5_1 => checks5::c5_1(&setup, &mut rec),
        CheckId::C5_2 => checks5::c5_2(&setup, &mut rec, &mut rng),
        CheckId::C5_3 => checks5::c5_3(&setup, &mut rec, &mut rng),
        CheckId::C5_4 => checks5::c5_4(&setup, &mut rec, &mut rng),
    };
    match res {
        Ok(()) => {}
        Err(GeomError::BudgetExceeded { needed, budget }) => {
            return Err(CheckError::BudgetExceeded { check: id, needed, budget });
        }
        Err(e) => rec.error(&e),
    }
    let verdict = if rec.failed { Verdict::Fail } else { Verdict::Pass };
    Ok(CheckReport {
        check: id,
        q,
        field,
        verdict,
        conjecture: id.is_conjecture(),
        scope: id.scope(q).to_string(),
        counts: rec.counts,
        witnesses: rec.witnesses,
        seed: opts.seed,
        budget: opts.budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_round_trips() {
        for c in CheckId::ALL {
            assert_eq!(CheckId::parse(c.as_str()), Ok(c));
        }
        assert!(matches!(CheckId::parse("C-9.9"), Err(CheckError::UnknownCheck(_))));
        assert_eq!(applicable_checks(2).len(), 24);
        assert_eq!(applicable_checks(3).len(), 24);
        assert_eq!(default_checks(4).len(), 24);
    }

    #[test]
    fn preconditions() {
        assert!(CheckId::C3_2.precondition(3).is_err());
        assert!(CheckId::C3_2.precondition(4).is_ok());
        assert!(CheckId::C4_4.precondition(2).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_indices(&mut rng_for(CheckId::C2_3, 7), 100, 5);
        let b = sample_indices(&mut rng_for(CheckId::C2_3, 7), 100, 5);
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
    }
}
