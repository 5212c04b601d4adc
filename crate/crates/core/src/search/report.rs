//! Serializable search and experiment reports.
//!
//! The JSON shape is part of the tool's scripting contract: fields are
//! emitted in declaration order, optional fields are omitted when absent,
//! and a report deserializes back to an equal value. `elapsed_ms` exists
//! for callers that want to attach timing; the bundled binary leaves it
//! out so that identical inputs produce identical bytes.

use serde::{Deserialize, Serialize};

use crate::logics::LogicId;
use crate::model::RawModel;
use crate::search::{ExperimentReport, SearchConfig, SearchMode, SearchOutcome};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub query: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logic: Option<String>,
    pub class: String,
    pub bound: usize,
    pub mode: String,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<RawModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub stats: ReportStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportStats {
    pub models_checked: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

fn mode_label(mode: &SearchMode) -> String {
    match mode {
        SearchMode::Exhaustive => "exhaustive".to_string(),
        SearchMode::Sampled { seed, count } => format!("sampled seed={seed} count={count}"),
    }
}

/// Package a search outcome for output.
pub fn search_report(
    query: &str,
    logic: Option<LogicId>,
    cfg: &SearchConfig,
    outcome: &SearchOutcome,
) -> Report {
    let (outcome_label, model, witness) = match outcome {
        SearchOutcome::ValidAtBound { .. } => ("valid at bound".to_string(), None, None),
        SearchOutcome::Countermodel { model, witness, .. } => (
            "countermodel found".to_string(),
            Some(model.to_raw()),
            Some(model.world_name(*witness).to_string()),
        ),
    };
    Report {
        query: query.to_string(),
        logic: logic.map(|id| id.name().to_string()),
        class: cfg.frame_class.to_string(),
        bound: cfg.max_worlds,
        mode: mode_label(&cfg.mode),
        outcome: outcome_label,
        model,
        witness,
        stats: ReportStats {
            models_checked: outcome.models_checked(),
            elapsed_ms: None,
        },
    }
}

/// JSON mirror of an [`ExperimentReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentJson {
    pub experiment: String,
    pub bound: usize,
    pub class: String,
    pub verdict: String,
    pub ok: bool,
    pub lines: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<RawModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_formula: Option<String>,
}

impl ExperimentJson {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

pub fn experiment_json(report: &ExperimentReport) -> ExperimentJson {
    ExperimentJson {
        experiment: report.name.clone(),
        bound: report.bound,
        class: report.class.to_string(),
        verdict: report.verdict.clone(),
        ok: report.ok,
        lines: report.lines.clone(),
        model: report.model.as_ref().map(|m| m.to_raw()),
        witness_formula: report.witness_formula.as_ref().map(|f| f.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::{CondFlag, FrameClass};
    use crate::parse::parse;
    use crate::search::find_countermodel;

    #[test]
    fn valid_outcome_report_shape() {
        let f = parse("p -> p").unwrap();
        let cfg = SearchConfig::exhaustive(1);
        let outcome = find_countermodel(&f, &cfg).unwrap();
        let report = search_report("p -> p", Some(LogicId::W), &cfg, &outcome);
        let text = report.to_json();
        assert!(text.contains("\"outcome\": \"valid at bound\""), "{text}");
        assert!(text.contains("\"logic\": \"W\""), "{text}");
        assert!(!text.contains("elapsed_ms"), "omitted when unset: {text}");
        assert!(!text.contains("\"model\""), "no model on valid: {text}");
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn countermodel_report_round_trips_with_model() {
        let f = parse("box p -> dia p").unwrap();
        let cfg = SearchConfig::exhaustive(1)
            .with_class(FrameClass::of(&[CondFlag::CBox, CondFlag::CDia]));
        let outcome = find_countermodel(&f, &cfg).unwrap();
        let report = search_report("box p -> dia p", None, &cfg, &outcome);
        assert_eq!(report.outcome, "countermodel found");
        assert_eq!(report.witness.as_deref(), Some("w0"));
        assert_eq!(report.class, "CBOX,CDIA");
        let back: Report = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
        let raw = back.model.expect("countermodel present");
        assert_eq!(raw.worlds, vec!["w0".to_string()]);
    }

    #[test]
    fn sampled_mode_label_carries_seed_and_count() {
        let cfg = SearchConfig::sampled(4, 42, 10);
        let f = parse("p -> p").unwrap();
        let outcome = find_countermodel(&f, &cfg).unwrap();
        let report = search_report("p -> p", None, &cfg, &outcome);
        assert_eq!(report.mode, "sampled seed=42 count=10");
        assert_eq!(report.stats.models_checked, 10);
    }

    #[test]
    fn experiment_json_round_trips() {
        let report = crate::search::run_experiment(
            "classical_w_persistence",
            &SearchConfig::exhaustive(2),
        )
        .unwrap();
        let json = experiment_json(&report);
        assert_eq!(json.verdict, "witness found");
        assert!(json.model.is_some());
        assert_eq!(json.witness_formula.as_deref(), Some("p"));
        let back: ExperimentJson = serde_json::from_str(&json.to_json()).unwrap();
        assert_eq!(back, json);
    }
}
