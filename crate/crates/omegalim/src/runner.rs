//! Command dispatch: turns a parsed config plus a command into a report.
//! This is the CLI's engine and the surface the C ABI drives.

use thiserror::Error;

use crate::chains::{check_monotone, extract_cofinal_chain, ChainError, RefinementChain};
use crate::config::Config;
use crate::inverse_limit::{build_system, InverseLimitError, Thread};
use crate::report::{ChosenBlock, OutputFormat, Report, ReportItem, ThreadEntry, ThreadItem};
use crate::scenarios;
use crate::state_space::MapDescriptor;
use crate::visit_analysis::{chain_block_intersection, delta, Selection, VisitError};
use crate::State;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Validate,
    Delta,
    Intersect,
    Threads,
    BuildThread,
    Verify,
    Examples,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Validate => "validate",
            CommandKind::Delta => "delta",
            CommandKind::Intersect => "intersect",
            CommandKind::Threads => "threads",
            CommandKind::BuildThread => "build-thread",
            CommandKind::Verify => "verify",
            CommandKind::Examples => "examples",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "validate" => Some(CommandKind::Validate),
            "delta" => Some(CommandKind::Delta),
            "intersect" => Some(CommandKind::Intersect),
            "threads" => Some(CommandKind::Threads),
            "build-thread" => Some(CommandKind::BuildThread),
            "verify" => Some(CommandKind::Verify),
            "examples" => Some(CommandKind::Examples),
            _ => None,
        }
    }
}

/// Command-line overrides layered over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub points: Vec<State>,
    pub depth: Option<usize>,
    pub format: Option<OutputFormat>,
}

/// A command/config mismatch or a failure materializing the configured
/// objects. All of these map to the semantic-error exit code.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Visit(#[from] VisitError),
    #[error(transparent)]
    Limit(#[from] InverseLimitError),
}

pub fn effective_format(config: &Config, overrides: &Overrides) -> OutputFormat {
    overrides
        .format
        .or(config.format)
        .unwrap_or(OutputFormat::Text)
}

fn require_map(config: &Config) -> Result<&MapDescriptor, RunError> {
    config
        .map
        .as_ref()
        .ok_or_else(|| RunError::Usage("this command needs a `map` statement".into()))
}

fn require_chain(config: &Config) -> Result<RefinementChain, RunError> {
    let spec = config
        .chain
        .as_ref()
        .ok_or_else(|| RunError::Usage("this command needs a `chain` statement".into()))?;
    Ok(spec.materialize()?)
}

fn resolve_points(config: &Config, overrides: &Overrides) -> Result<Vec<State>, RunError> {
    let points = if overrides.points.is_empty() {
        config.points.clone()
    } else {
        overrides.points.clone()
    };
    if points.is_empty() {
        return Err(RunError::Usage(
            "no query points: add a `points` statement or pass --point".into(),
        ));
    }
    Ok(points)
}

fn thread_item(chain: &RefinementChain, thread: &Thread) -> ThreadItem {
    ThreadItem {
        entries: (0..chain.len())
            .map(|i| ThreadEntry {
                index: chain.index().label(i),
                block: thread.choice(i),
                set: chain.partition(i).block(thread.choice(i)).to_string(),
            })
            .collect(),
    }
}

/// Runs one command against a config; the report carries its own exit code.
pub fn run(
    config: &Config,
    command: CommandKind,
    overrides: &Overrides,
) -> Result<Report, RunError> {
    let mut report = Report::new(command.name());
    match command {
        CommandKind::Validate => {
            report.push_check("config_parsed", true, "configuration is well-formed");
            if let Some(p) = &config.partition {
                report.push_check(
                    "partition_valid",
                    true,
                    format!("{} disjoint covering block(s) over {}", p.len(), p.space()),
                );
            }
            if let Some(spec) = &config.chain {
                let (index, partitions) = spec.parts();
                let monotone = check_monotone(index, partitions)?;
                match &monotone.violation {
                    None => report.push_check(
                        "chain_monotone",
                        true,
                        format!(
                            "checked {} comparable pair(s); poset directed: {}, total: {}",
                            monotone.checked_pairs,
                            index.is_directed(),
                            index.is_total()
                        ),
                    ),
                    Some(v) => report.push_check(
                        "chain_monotone",
                        false,
                        format!(
                            "partition at index {} is not coarsened by index {}: fine block {} \
                             fits in no coarse block",
                            v.hi, v.lo, v.fine_block
                        ),
                    ),
                }
            }
        }

        CommandKind::Delta => {
            let map = require_map(config)?;
            let points = resolve_points(config, overrides)?;
            if let Some(spec) = &config.chain {
                let chain = spec.materialize().map_err(RunError::Chain)?;
                for &x in &points {
                    for i in 0..chain.len() {
                        let visits = delta(chain.partition(i), map, x)?;
                        report.items.push(ReportItem::VisitSet {
                            index: chain.index().label(i),
                            point: x,
                            block_ids: visits.block_ids().to_vec(),
                            blocks: visits
                                .block_ids()
                                .iter()
                                .map(|&b| chain.partition(i).block(b).to_string())
                                .collect(),
                            count: visits.count(),
                        });
                    }
                }
            } else if let Some(p) = &config.partition {
                for &x in &points {
                    let visits = delta(p, map, x)?;
                    report.items.push(ReportItem::VisitSet {
                        index: "partition".into(),
                        point: x,
                        block_ids: visits.block_ids().to_vec(),
                        blocks: visits
                            .block_ids()
                            .iter()
                            .map(|&b| p.block(b).to_string())
                            .collect(),
                        count: visits.count(),
                    });
                }
            } else {
                return Err(RunError::Usage(
                    "`delta` needs a `partition` or `chain` statement".into(),
                ));
            }
        }

        CommandKind::Intersect => {
            let map = require_map(config)?;
            let chain = require_chain(config)?;
            let points = resolve_points(config, overrides)?;
            let depth = overrides.depth.or(config.depth).unwrap_or(chain.len() - 1);
            for &x in &points {
                let result =
                    chain_block_intersection(&chain, map, x, &Selection::LeastBlock, depth)?;
                report.items.push(ReportItem::Intersection {
                    point: x,
                    chosen: result
                        .chosen
                        .iter()
                        .map(|(index, block)| ChosenBlock {
                            index: index.clone(),
                            block: *block,
                        })
                        .collect(),
                    minima: result.minima.clone(),
                    final_set: result.final_set.to_string(),
                    verdict: result.verdict.to_string(),
                });
            }
        }

        CommandKind::Threads => {
            let map = require_map(config)?;
            let chain = require_chain(config)?;
            let points = resolve_points(config, overrides)?;
            for &x in &points {
                let system = build_system(&chain, map, x)?;
                let threads = system.enumerate_threads();
                report.items.push(ReportItem::Threads {
                    point: x,
                    count: threads.len(),
                    threads: threads.iter().map(|t| thread_item(&chain, t)).collect(),
                });
            }
        }

        CommandKind::BuildThread => {
            let map = require_map(config)?;
            let chain = require_chain(config)?;
            let points = resolve_points(config, overrides)?;
            for &x in &points {
                let system = build_system(&chain, map, x)?;
                if chain.index().is_total() {
                    let built = system.build_thread_along_chain()?;
                    report.items.push(ReportItem::BuiltThread {
                        point: x,
                        thread: thread_item(&chain, &built.thread),
                        truncation_depth: built.certificate.as_ref().map(|c| c.depth),
                        surjectivity_verified: built
                            .certificate
                            .as_ref()
                            .map(|c| c.surjectivity_verified),
                    });
                } else if chain.index().is_directed() {
                    let cofinal_seed = chain.index().maximal_elements();
                    let cofinal = extract_cofinal_chain(chain.index(), &cofinal_seed)?;
                    let on_chain = system.thread_on_chain(&cofinal)?;
                    let extended = system.extend_thread_to_directed(&cofinal, &on_chain)?;
                    report.items.push(ReportItem::ExtendedThread {
                        point: x,
                        cofinal_chain: cofinal.iter().map(|&e| chain.index().label(e)).collect(),
                        thread: thread_item(&chain, &extended),
                    });
                } else {
                    return Err(RunError::Usage(
                        "`build-thread` needs a total or directed index poset".into(),
                    ));
                }
            }
        }

        CommandKind::Verify => {
            let map = require_map(config)?;
            let chain = require_chain(config)?;
            let points = resolve_points(config, overrides)?;
            let monotone = chain.check_monotone();
            report.push_check(
                "chain_monotone",
                monotone.passed(),
                format!("checked {} comparable pair(s)", monotone.checked_pairs),
            );
            for &x in &points {
                let tag = |name: &str| format!("{name}[x={x}]");
                let system = build_system(&chain, map, x)?;
                let empty_levels: Vec<usize> = (0..system.len())
                    .filter(|&i| system.visit_set(i).count() == 0)
                    .collect();
                report.push_check(
                    tag("levels_nonempty"),
                    empty_levels.is_empty(),
                    format!("{} level(s)", system.len()),
                );
                let laws = system.check();
                report.push_check(
                    tag("projection_identity"),
                    laws.identity.passed(),
                    laws.identity
                        .witness
                        .clone()
                        .unwrap_or_else(|| format!("checked {} level(s)", laws.identity.checked)),
                );
                report.push_check(
                    tag("projection_composition"),
                    laws.composition.passed(),
                    laws.composition.witness.clone().unwrap_or_else(|| {
                        format!("checked {} triple(s)", laws.composition.checked)
                    }),
                );
                report.push_check(
                    tag("restricted_surjectivity"),
                    laws.surjectivity.passed(),
                    laws.surjectivity.witness.clone().unwrap_or_else(|| {
                        format!("checked {} pair(s)", laws.surjectivity.checked)
                    }),
                );
                let threads = system.enumerate_threads();
                report.push_check(
                    tag("threads_nonempty"),
                    !threads.is_empty(),
                    format!("{} thread(s)", threads.len()),
                );
                if chain.index().is_total() {
                    let built = system.build_thread_along_chain()?;
                    report.push_check(
                        tag("constructed_thread_enumerated"),
                        threads.contains(&built.thread),
                        "top-down construction",
                    );
                } else if chain.index().is_directed() {
                    let cofinal_seed = chain.index().maximal_elements();
                    let cofinal = extract_cofinal_chain(chain.index(), &cofinal_seed)?;
                    let on_chain = system.thread_on_chain(&cofinal)?;
                    let extended = system.extend_thread_to_directed(&cofinal, &on_chain)?;
                    report.push_check(
                        tag("constructed_thread_enumerated"),
                        threads.contains(&extended),
                        format!("extended through cofinal chain of length {}", cofinal.len()),
                    );
                }
            }
        }

        CommandKind::Examples => {
            for outcome in scenarios::run_all() {
                report.push_check(outcome.name, outcome.passed, outcome.detail);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::report::OutputFormat;

    fn run_text(config_text: &str, command: CommandKind) -> Report {
        let config = parse_config(config_text).unwrap();
        run(&config, command, &Overrides::default()).unwrap()
    }

    #[test]
    fn examples_command_passes_cleanly() {
        let report = run(
            &Config::default(),
            CommandKind::Examples,
            &Overrides::default(),
        )
        .unwrap();
        assert_eq!(report.exit_code, 0);
        assert_eq!(report.checks.len(), 10);
        assert!(report.checks.iter().all(|c| c.passed));
    }

    #[test]
    fn delta_reports_segments() {
        let report = run_text(
            "space nat\nmap identity\npartition { finite{0,1}, ap(2,1) }\npoints 5",
            CommandKind::Delta,
        );
        assert_eq!(report.exit_code, 0);
        match &report.items[0] {
            ReportItem::VisitSet {
                block_ids, count, ..
            } => {
                assert_eq!(block_ids, &vec![1]);
                assert_eq!(*count, 1);
            }
            other => panic!("unexpected item {other:?}"),
        }
    }

    #[test]
    fn threads_on_segment_chain() {
        let report = run_text(
            "space nat\nmap shift(1)\nchain builtin initial_segments depth 4\npoints 0",
            CommandKind::Threads,
        );
        match &report.items[0] {
            ReportItem::Threads { count, threads, .. } => {
                assert_eq!(*count, 1);
                let blocks: Vec<usize> = threads[0].entries.iter().map(|e| e.block).collect();
                assert_eq!(blocks, vec![0, 1, 2, 3, 4]);
            }
            other => panic!("unexpected item {other:?}"),
        }
    }

    #[test]
    fn build_thread_emits_certificate_on_truncated_chain() {
        let report = run_text(
            "space nat\nmap shift(1)\nchain builtin initial_segments depth 4\npoints 0",
            CommandKind::BuildThread,
        );
        match &report.items[0] {
            ReportItem::BuiltThread {
                truncation_depth,
                surjectivity_verified,
                ..
            } => {
                assert_eq!(*truncation_depth, Some(4));
                assert_eq!(*surjectivity_verified, Some(true));
            }
            other => panic!("unexpected item {other:?}"),
        }
    }

    #[test]
    fn verify_reports_all_invariants() {
        let report = run_text(
            "space nat\nmap shift(1)\nchain builtin initial_segments depth 3\npoints 0 2",
            CommandKind::Verify,
        );
        assert_eq!(report.exit_code, 0);
        assert!(report
            .checks
            .iter()
            .any(|c| c.name.starts_with("restricted_surjectivity")));
        assert!(report
            .checks
            .iter()
            .any(|c| c.name.starts_with("constructed_thread_enumerated")));
    }

    #[test]
    fn threads_without_chain_is_a_usage_error() {
        let config = parse_config("space nat\nmap shift(1)\npoints 0").unwrap();
        let err = run(&config, CommandKind::Threads, &Overrides::default()).unwrap_err();
        assert!(matches!(err, RunError::Usage(_)));
    }

    #[test]
    fn missing_points_is_a_usage_error() {
        let config =
            parse_config("space nat\nmap shift(1)\nchain builtin initial_segments depth 3")
                .unwrap();
        let err = run(&config, CommandKind::Threads, &Overrides::default()).unwrap_err();
        assert!(matches!(err, RunError::Usage(_)));
    }

    #[test]
    fn point_override_replaces_config_points() {
        let config =
            parse_config("space nat\nmap identity\npartition { finite{0}, ap(1,1) }\npoints 0")
                .unwrap();
        let overrides = Overrides {
            points: vec![7],
            ..Default::default()
        };
        let report = run(&config, CommandKind::Delta, &overrides).unwrap();
        match &report.items[0] {
            ReportItem::VisitSet { point, .. } => assert_eq!(*point, 7),
            other => panic!("unexpected item {other:?}"),
        }
    }

    #[test]
    fn validate_flags_non_monotone_chain() {
        let config = parse_config(
            "space nat\nchain explicit { partition { ap(0,2), ap(1,2) }; partition { all } }",
        )
        .unwrap();
        let report = run(&config, CommandKind::Validate, &Overrides::default()).unwrap();
        assert_eq!(report.exit_code, 1);
        let check = report
            .checks
            .iter()
            .find(|c| c.name == "chain_monotone")
            .unwrap();
        assert!(!check.passed);
    }

    #[test]
    fn machine_report_round_trips_through_render() {
        let report = run_text(
            "space nat\nmap shift(1)\nchain builtin initial_segments depth 3\npoints 0",
            CommandKind::Intersect,
        );
        let rendered = report.render(OutputFormat::Machine);
        assert_eq!(Report::from_machine(&rendered).unwrap(), report);
    }

    #[test]
    fn runs_are_deterministic() {
        let text =
            "space nat\nmap shift(1)\nchain builtin filter_family u ap(0,2) depth 2\npoints 0";
        let first = run_text(text, CommandKind::Verify).render(OutputFormat::Machine);
        let second = run_text(text, CommandKind::Verify).render(OutputFormat::Machine);
        assert_eq!(first, second);
    }
}
