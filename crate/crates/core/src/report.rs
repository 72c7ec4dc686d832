//! Machine-readable outcomes of the seeded law suites.

use std::fmt;

use serde::Serialize;

/// One failed law instance, with everything needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawFailure {
    pub law: String,
    pub case: usize,
    /// Seed of this case alone; see [`crate::gen::case_seed`].
    pub case_seed: u64,
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<LawFailure>,
    pub notes: Vec<String>,
}

impl LawReport {
    pub fn new(suite: impl Into<String>, seed: u64, cases: usize) -> Self {
        LawReport {
            suite: suite.into(),
            seed,
            cases,
            checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records one comparison `lhs == rhs`; `inputs` is only rendered on
    /// failure.
    pub fn check<T, I>(&mut self, law: &str, case: usize, case_seed: u64, inputs: I, lhs: &T, rhs: &T)
    where
        T: PartialEq + fmt::Display,
        I: FnOnce() -> Vec<String>,
    {
        self.checks += 1;
        if lhs != rhs {
            self.failures.push(LawFailure {
                law: law.to_string(),
                case,
                case_seed,
                inputs: inputs(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    /// Records a boolean property.
    pub fn check_that<I>(&mut self, law: &str, case: usize, case_seed: u64, inputs: I, holds: bool, detail: &str)
    where
        I: FnOnce() -> Vec<String>,
    {
        self.checks += 1;
        if !holds {
            self.failures.push(LawFailure {
                law: law.to_string(),
                case,
                case_seed,
                inputs: inputs(),
                lhs: detail.to_string(),
                rhs: "holds".to_string(),
            });
        }
    }

    /// Records a case that errored before its two sides could be compared.
    pub fn error(&mut self, law: &str, case: usize, case_seed: u64, err: impl fmt::Display) {
        self.checks += 1;
        self.failures.push(LawFailure {
            law: law.to_string(),
            case,
            case_seed,
            inputs: Vec::new(),
            lhs: format!("error: {err}"),
            rhs: String::new(),
        });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Folds another suite's results into this one.
    pub fn absorb(&mut self, other: LawReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures.into_iter().map(|mut f| {
            f.law = format!("{}/{}", other.suite, f.law);
            f
        }));
        self.notes.extend(other.notes);
    }

    pub fn failures_for(&self, law: &str) -> impl Iterator<Item = &LawFailure> + '_ {
        let law = law.to_string();
        self.failures.iter().filter(move |f| f.law == law)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} ({} cases, {} checks, {} failures, seed {})",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.checks,
            self.failures.len(),
            self.seed
        )?;
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        for fail in self.failures.iter().take(10) {
            writeln!(
                f,
                "  {} case {} (seed {}): {} != {}",
                fail.law, fail.case, fail.case_seed, fail.lhs, fail.rhs
            )?;
            for i in &fail.inputs {
                writeln!(f, "    input {i}")?;
            }
        }
        if self.failures.len() > 10 {
            writeln!(f, "  ... {} more", self.failures.len() - 10)?;
        }
        Ok(())
    }
}
