//! Search limits and the analytic cut window.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use super::system::SystemSpec;
use crate::error::{Error, Result};
use crate::syntax::{subformulas_of_sequents, ClosureMode, ClosureSpec, LFormula, Sequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Deepest backward-search derivation attempted.
    pub max_depth: usize,
    /// Goals the search may expand in one call.
    pub max_goals: usize,
    /// Cut formulas are the problem's subformulas plus the members of their
    /// closure with at most this many connectives.
    pub cut_size: usize,
    pub time_cap: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: 30,
            max_goals: 20_000,
            cut_size: 0,
            time_cap: Duration::from_secs(5),
        }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth == 0 || self.max_goals == 0 || self.time_cap.is_zero() {
            return Err(Error::Budget(
                "depth, goals and time cap must be positive".into(),
            ));
        }
        Ok(())
    }

    /// The cut window for a problem: the subformulas `T` of the goal and
    /// assumptions (with `⊤`, `⊥` in bounded systems), closed under `∧`, `∨`
    /// and, with negation, `¬`.
    pub fn cut_candidates(&self, sys: &SystemSpec, goal: &Sequent, phi: &[Sequent]) -> ClosureSpec {
        let mut base: BTreeSet<LFormula> =
            subformulas_of_sequents(std::iter::once(goal).chain(phi));
        if sys.bounded {
            base.insert(LFormula::top());
            base.insert(LFormula::bot());
        }
        let mode = if sys.negation {
            ClosureMode::AndOrNot
        } else {
            ClosureMode::AndOr
        };
        ClosureSpec::new(base, mode, self.cut_size)
    }
}

impl FromStr for SearchBudget {
    type Err = Error;

    /// `depth:N,goals:N,cutsize:N,ms:N`, any subset in any order.
    fn from_str(s: &str) -> Result<Self> {
        let mut b = SearchBudget::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once(':')
                .ok_or_else(|| Error::Budget(format!("expected key:value, found `{part}`")))?;
            let n: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Budget(format!("`{value}` is not a natural number")))?;
            match key.trim() {
                "depth" => b.max_depth = n as usize,
                "goals" => b.max_goals = n as usize,
                "cutsize" => b.cut_size = n as usize,
                "ms" => b.time_cap = Duration::from_millis(n),
                other => return Err(Error::Budget(format!("unknown budget key `{other}`"))),
            }
        }
        b.validate()?;
        Ok(b)
    }
}

impl fmt::Display for SearchBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "depth:{},goals:{},cutsize:{},ms:{}",
            self.max_depth,
            self.max_goals,
            self.cut_size,
            self.time_cap.as_millis()
        )
    }
}
