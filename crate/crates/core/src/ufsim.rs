//! A lazily decided nonprincipal ultrafilter on the naturals, restricted to
//! eventually periodic sets.
//!
//! The state keeps the meet of every decision so far: accepted sets, and the
//! complements of rejected sets. A query is accepted whenever its
//! intersection with the meet is infinite. Otherwise `S ∩ meet` is finite,
//! hence `complement(S) ∩ meet` is infinite, so rejecting keeps the meet
//! infinite and the decisions always have the finite intersection property.
//! Cofinite queries are always accepted and finite ones always rejected.

use std::fmt;
use std::str::FromStr;

use crate::indexset::IndexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accepted,
    Rejected,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accepted => "Accepted",
            Verdict::Rejected => "Rejected",
        })
    }
}

impl FromStr for Verdict {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "Accepted" => Ok(Verdict::Accepted),
            "Rejected" => Ok(Verdict::Rejected),
            _ => Err(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    ForcedIn,
    ForcedOut,
    Undecided,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::ForcedIn => "ForcedIn",
            Membership::ForcedOut => "ForcedOut",
            Membership::Undecided => "Undecided",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("line {line}: bad {field}: {detail}")]
    Malformed {
        line: usize,
        field: &'static str,
        detail: String,
    },
    #[error("line {line}: decision '{verdict} {set}' makes the meet finite")]
    Inconsistent {
        line: usize,
        verdict: Verdict,
        set: IndexSet,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterState {
    log: Vec<(IndexSet, Verdict)>,
    meet: IndexSet,
}

impl Default for FilterState {
    fn default() -> Self {
        Self::new()
    }
}

impl FilterState {
    pub fn new() -> Self {
        FilterState {
            log: Vec::new(),
            meet: IndexSet::all(),
        }
    }

    pub fn log(&self) -> &[(IndexSet, Verdict)] {
        &self.log
    }

    pub fn meet(&self) -> &IndexSet {
        &self.meet
    }

    /// Decides `set` (accept-first) and records the decision. Repeating a
    /// query returns the recorded verdict without a new log entry.
    pub fn query(&mut self, set: &IndexSet) -> Verdict {
        if let Some((_, v)) = self.log.iter().find(|(s, _)| s == set) {
            return *v;
        }
        let with = set.intersect(&self.meet);
        let verdict = if with.is_infinite() {
            self.meet = with;
            Verdict::Accepted
        } else {
            self.meet = set.complement().intersect(&self.meet);
            Verdict::Rejected
        };
        debug_assert!(self.meet.is_infinite());
        self.log.push((set.clone(), verdict));
        verdict
    }

    /// Read-only: whether the decisions so far already force `set` in or out.
    pub fn contains(&self, set: &IndexSet) -> Membership {
        if set.complement().intersect(&self.meet).is_finite() {
            Membership::ForcedIn
        } else if set.intersect(&self.meet).is_finite() {
            Membership::ForcedOut
        } else {
            Membership::Undecided
        }
    }

    /// Rebuilds a state from recorded decisions. Verdicts are taken as given,
    /// so any consistent log is accepted, not only logs produced by
    /// [`FilterState::query`]; a decision that makes the meet finite is
    /// rejected.
    pub fn replay(log: &[(IndexSet, Verdict)]) -> Result<Self, TraceError> {
        let mut state = FilterState::new();
        for (i, (set, verdict)) in log.iter().enumerate() {
            state.apply(i + 1, set, *verdict)?;
        }
        Ok(state)
    }

    fn apply(&mut self, line: usize, set: &IndexSet, verdict: Verdict) -> Result<(), TraceError> {
        let side = match verdict {
            Verdict::Accepted => set.clone(),
            Verdict::Rejected => set.complement(),
        };
        let meet = side.intersect(&self.meet);
        if meet.is_finite() {
            return Err(TraceError::Inconsistent {
                line,
                verdict,
                set: set.clone(),
            });
        }
        self.meet = meet;
        self.log.push((set.clone(), verdict));
        Ok(())
    }

    /// One `<verdict> <set spec>` line per decision, each newline-terminated.
    pub fn export(&self) -> String {
        self.log
            .iter()
            .map(|(s, v)| format!("{v} {s}\n"))
            .collect()
    }

    /// Parses a trace; blank lines and `#` comments are skipped.
    pub fn import(trace: &str) -> Result<Self, TraceError> {
        let mut state = FilterState::new();
        for (i, raw) in trace.lines().enumerate() {
            let line = i + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let (verdict, spec) = text.split_once(' ').ok_or_else(|| TraceError::Malformed {
                line,
                field: "line",
                detail: "expected '<verdict> <set spec>'".into(),
            })?;
            let verdict: Verdict = verdict.parse().map_err(|_| TraceError::Malformed {
                line,
                field: "verdict",
                detail: format!("'{verdict}' is neither Accepted nor Rejected"),
            })?;
            let set = spec.trim().parse::<IndexSet>().map_err(|e| TraceError::Malformed {
                line,
                field: "set",
                detail: e.to_string(),
            })?;
            state.apply(line, &set, verdict)?;
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> IndexSet {
        s.parse().unwrap()
    }

    fn session() -> (FilterState, Vec<Verdict>) {
        let mut st = FilterState::new();
        let v = vec![
            st.query(&set("pre:;per:10")),
            st.query(&set("pre:;per:01")),
            st.query(&set("pre:;per:1000")),
        ];
        (st, v)
    }

    #[test]
    fn accept_first_session() {
        let (st, v) = session();
        assert_eq!(v, [Verdict::Accepted, Verdict::Rejected, Verdict::Accepted]);
        assert_eq!(st.meet(), &set("pre:;per:1000"));
    }

    #[test]
    fn repeated_queries_are_idempotent() {
        let (mut st, _) = session();
        let before = st.clone();
        assert_eq!(st.query(&set("pre:;per:01")), Verdict::Rejected);
        assert_eq!(st.query(&set("pre:;per:10")), Verdict::Accepted);
        assert_eq!(st, before);
    }

    #[test]
    fn contains_examples() {
        let mut st = FilterState::new();
        let evens = set("pre:;per:10");
        assert_eq!(st.contains(&evens), Membership::Undecided);
        st.query(&evens);
        let evens_and_three = evens.union(&IndexSet::from_finite(&[3]));
        assert_eq!(st.contains(&evens_and_three), Membership::ForcedIn);
        assert_eq!(st.contains(&set("pre:;per:01")), Membership::ForcedOut);
        // evens without 0
        assert_eq!(st.contains(&set("pre:0;per:01")), Membership::ForcedIn);
        // the odds, written with a one-bit preperiod
        assert_eq!(st.contains(&set("pre:0;per:10")), Membership::ForcedOut);
    }

    #[test]
    fn non_principal() {
        let mut st = FilterState::new();
        for n in [0usize, 5, 17] {
            assert_eq!(st.query(&IndexSet::from_finite(&[n])), Verdict::Rejected);
        }
        assert_eq!(st.query(&IndexSet::tail(1000)), Verdict::Accepted);
    }

    #[test]
    fn trace_round_trip() {
        let (st, _) = session();
        let text = st.export();
        assert_eq!(text, "Accepted pre:;per:10\nRejected pre:;per:01\nAccepted pre:;per:1000\n");
        let back = FilterState::import(&text).unwrap();
        assert_eq!(back, st);
        assert_eq!(FilterState::replay(st.log()).unwrap(), st);
        assert_eq!(FilterState::replay(&[]).unwrap().meet(), &IndexSet::all());
    }

    #[test]
    fn tampered_traces() {
        let bad = "Accepted pre:;per:10\nAccepted pre:;per:01\n";
        assert!(matches!(
            FilterState::import(bad),
            Err(TraceError::Inconsistent { line: 2, .. })
        ));
        assert!(matches!(
            FilterState::import("Accepted pre:101;per:0\n"),
            Err(TraceError::Inconsistent { line: 1, .. })
        ));
        assert!(matches!(
            FilterState::import("Maybe pre:;per:1\n"),
            Err(TraceError::Malformed { line: 1, field: "verdict", .. })
        ));
        assert!(matches!(
            FilterState::import("# header\n\nAccepted pre:;per:\n"),
            Err(TraceError::Malformed { line: 3, field: "set", .. })
        ));
        assert!(matches!(
            FilterState::import("Accepted\n"),
            Err(TraceError::Malformed { line: 1, field: "line", .. })
        ));
    }
}
