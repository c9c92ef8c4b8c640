//! Run reports: structured results plus per-check pass/fail lines, rendered
//! either as human-readable text or as a canonical machine-readable JSON
//! document that parses back to the same value.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Text,
    Machine,
}

/// `(index label, block id, block set expression)` — one thread entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreadEntry {
    pub index: String,
    pub block: usize,
    pub set: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreadItem {
    pub entries: Vec<ThreadEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChosenBlock {
    pub index: String,
    pub block: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportItem {
    VisitSet {
        index: String,
        point: u64,
        block_ids: Vec<usize>,
        blocks: Vec<String>,
        count: usize,
    },
    Threads {
        point: u64,
        count: usize,
        threads: Vec<ThreadItem>,
    },
    BuiltThread {
        point: u64,
        thread: ThreadItem,
        /// Depth of the truncated total order the thread was built on, when
        /// the chain is such a truncation.
        truncation_depth: Option<usize>,
        /// Whether restricted surjectivity was verified, certifying that the
        /// thread extends past the truncation depth.
        surjectivity_verified: Option<bool>,
    },
    ExtendedThread {
        point: u64,
        cofinal_chain: Vec<String>,
        thread: ThreadItem,
    },
    Intersection {
        point: u64,
        chosen: Vec<ChosenBlock>,
        minima: Vec<Option<u64>>,
        final_set: String,
        verdict: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub items: Vec<ReportItem>,
    pub checks: Vec<CheckResult>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            items: Vec::new(),
            checks: Vec::new(),
            exit_code: 0,
        }
    }

    pub fn push_check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
        if !passed {
            self.exit_code = 1;
        }
    }

    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Machine => serde_json::to_string_pretty(self).expect("report serializes"),
            OutputFormat::Text => self.render_text(),
        }
    }

    /// Parses the machine rendering back into a report.
    pub fn from_machine(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("command: {}", self.command));
        for item in &self.items {
            match item {
                ReportItem::VisitSet {
                    index,
                    point,
                    block_ids,
                    blocks,
                    count,
                } => {
                    line(format!(
                        "visit-set index={index} point={point}: {count} block(s) {block_ids:?}"
                    ));
                    for (id, set) in block_ids.iter().zip(blocks) {
                        line(format!("  block {id}: {set}"));
                    }
                }
                ReportItem::Threads {
                    point,
                    count,
                    threads,
                } => {
                    line(format!("threads point={point}: {count} thread(s)"));
                    for (i, t) in threads.iter().enumerate() {
                        line(format!("  thread {i}:"));
                        for e in &t.entries {
                            line(format!(
                                "    index {} -> block {} = {}",
                                e.index, e.block, e.set
                            ));
                        }
                    }
                }
                ReportItem::BuiltThread {
                    point,
                    thread,
                    truncation_depth,
                    surjectivity_verified,
                } => {
                    line(format!("built-thread point={point}:"));
                    for e in &thread.entries {
                        line(format!(
                            "  index {} -> block {} = {}",
                            e.index, e.block, e.set
                        ));
                    }
                    if let Some(depth) = truncation_depth {
                        let verified = surjectivity_verified.unwrap_or(false);
                        line(format!(
                            "  extendable past depth {depth}: surjectivity verified = {verified}"
                        ));
                    }
                }
                ReportItem::ExtendedThread {
                    point,
                    cofinal_chain,
                    thread,
                } => {
                    line(format!(
                        "extended-thread point={point} via cofinal chain [{}]:",
                        cofinal_chain.join(", ")
                    ));
                    for e in &thread.entries {
                        line(format!(
                            "  index {} -> block {} = {}",
                            e.index, e.block, e.set
                        ));
                    }
                }
                ReportItem::Intersection {
                    point,
                    chosen,
                    minima,
                    final_set,
                    verdict,
                } => {
                    line(format!("intersection point={point}: {verdict}"));
                    let picks: Vec<String> = chosen
                        .iter()
                        .map(|c| format!("{}:{}", c.index, c.block))
                        .collect();
                    line(format!("  chosen blocks: [{}]", picks.join(", ")));
                    let mins: Vec<String> = minima
                        .iter()
                        .map(|m| m.map_or("-".to_string(), |v| v.to_string()))
                        .collect();
                    line(format!("  prefix minima: [{}]", mins.join(", ")));
                    line(format!("  final set: {final_set}"));
                }
            }
        }
        for check in &self.checks {
            let status = if check.passed { "PASS" } else { "FAIL" };
            line(format!("check {}: {status} — {}", check.name, check.detail));
        }
        line(format!("exit: {}", self.exit_code));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        let mut report = Report::new("delta");
        report.items.push(ReportItem::VisitSet {
            index: "3".into(),
            point: 0,
            block_ids: vec![3],
            blocks: vec!["ap(3, 1)".into()],
            count: 1,
        });
        report.items.push(ReportItem::Intersection {
            point: 0,
            chosen: vec![ChosenBlock {
                index: "0".into(),
                block: 0,
            }],
            minima: vec![Some(0), None],
            final_set: "finite{}".into(),
            verdict: "empty at finite depth 1".into(),
        });
        let thread = ThreadItem {
            entries: vec![ThreadEntry {
                index: "0".into(),
                block: 1,
                set: "ap(1, 1)".into(),
            }],
        };
        report.items.push(ReportItem::Threads {
            point: 0,
            count: 1,
            threads: vec![thread.clone()],
        });
        report.items.push(ReportItem::BuiltThread {
            point: 0,
            thread: thread.clone(),
            truncation_depth: Some(4),
            surjectivity_verified: Some(true),
        });
        report.items.push(ReportItem::ExtendedThread {
            point: 0,
            cofinal_chain: vec!["3".into()],
            thread,
        });
        report.push_check("monotone", true, "checked 5 pairs");
        report
    }

    #[test]
    fn machine_format_round_trips() {
        let report = sample_report();
        let rendered = report.render(OutputFormat::Machine);
        let parsed = Report::from_machine(&rendered).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn machine_format_is_stable() {
        let report = sample_report();
        assert_eq!(
            report.render(OutputFormat::Machine),
            report.render(OutputFormat::Machine)
        );
    }

    #[test]
    fn failing_check_sets_exit_code() {
        let mut report = Report::new("verify");
        report.push_check("laws", false, "witness: x");
        assert_eq!(report.exit_code, 1);
        assert!(!report.all_checks_passed());
    }

    #[test]
    fn text_format_mentions_every_check() {
        let report = sample_report();
        let text = report.render(OutputFormat::Text);
        assert!(text.contains("command: delta"));
        assert!(text.contains("check monotone: PASS"));
        assert!(text.contains("exit: 0"));
    }
}
