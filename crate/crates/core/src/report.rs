//! Result types of the randomized property checkers.
//!
//! Checker failures are data, not errors: a report always comes back and
//! carries pass/fail counts plus the first recorded counterexample.

use std::fmt;

/// The six axioms every valuation algebra must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// A1: combination is associative and commutative.
    Semigroup,
    /// A2: the label of a combination is the join of the labels.
    Labeling,
    /// A3: projecting to `x` yields label `x`.
    Projection,
    /// A4: consecutive projections collapse.
    Transitivity,
    /// A5: projection distributes over combination on covering domains.
    Combination,
    /// A6: projecting to the own label is the identity.
    Stability,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Semigroup,
        Axiom::Labeling,
        Axiom::Projection,
        Axiom::Transitivity,
        Axiom::Combination,
        Axiom::Stability,
    ];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // A1..A6 is the numbering of Pouly & Kohlas, Generic Inference (2011).
        let s = match self {
            Axiom::Semigroup => "A1 (commutative semigroup)",
            Axiom::Labeling => "A2 (labeling)",
            Axiom::Projection => "A3 (projection)",
            Axiom::Transitivity => "A4 (transitivity)",
            Axiom::Combination => "A5 (combination)",
            Axiom::Stability => "A6 (domain)",
        };
        f.write_str(s)
    }
}

/// Per-axiom tally of a [`check_axioms`](crate::valuation::check_axioms) run.
#[derive(Debug, Clone)]
pub struct AxiomStat {
    pub axiom: Axiom,
    pub passes: usize,
    pub failures: usize,
    /// Rendering of the first failing operand tuple, if any.
    pub first_counterexample: Option<String>,
}

/// Report of an axiom suite run.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub trials: usize,
    pub stats: Vec<AxiomStat>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.stats.iter().all(|s| s.failures == 0)
    }

    pub fn stat(&self, axiom: Axiom) -> &AxiomStat {
        self.stats
            .iter()
            .find(|s| s.axiom == axiom)
            .expect("report covers all axioms")
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stats {
            write!(f, "{}: ", s.axiom)?;
            if s.failures == 0 {
                writeln!(f, "pass ({}/{})", s.passes, s.passes)?;
            } else {
                writeln!(f, "FAIL ({} of {} trials)", s.failures, s.passes + s.failures)?;
                if let Some(ce) = &s.first_counterexample {
                    writeln!(f, "  first counterexample: {ce}")?;
                }
            }
        }
        Ok(())
    }
}

/// Outcome of a randomized property check (merge-friendliness, extension
/// family conditions, extensibility, ...).
#[derive(Debug, Clone)]
pub struct PropertyReport {
    /// Name of the property that was checked.
    pub property: String,
    /// Number of sampled trials.
    pub trials: usize,
    /// Number of individual assertions evaluated across all trials.
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl PropertyReport {
    pub fn new(property: impl Into<String>) -> Self {
        PropertyReport {
            property: property.into(),
            trials: 0,
            checked: 0,
            violations: 0,
            first_violation: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn record_violation(&mut self, witness: impl fmt::Display) {
        self.violations += 1;
        if self.first_violation.is_none() {
            self.first_violation = Some(witness.to_string());
        }
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} trials, {} checks, {} violations)",
            self.property,
            if self.passed() { "pass" } else { "FAIL" },
            self.trials,
            self.checked,
            self.violations
        )?;
        if let Some(w) = &self.first_violation {
            write!(f, "\n  first violation: {w}")?;
        }
        Ok(())
    }
}
