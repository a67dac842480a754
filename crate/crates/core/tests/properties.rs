//! Property tests for the numeric and structural invariants the library
//! documents: attribution adds back up to the span, the model functions
//! invert each other, discovery marginals stay consistent, and the small
//! parsers round-trip.

mod common;

use std::collections::BTreeMap;

use chrono::{TimeZone, Utc};
use proptest::prelude::*;

use common::trace as complete_trace;
use prodmine::discovery::{attributed_seconds, build_dfg, extract_terminal_paths, path_name};
use prodmine::eventlog::{Event, Lifecycle, Trace};
use prodmine::labour::{
    displacement, ActivityClassification, ClassMatcher, ClassRule, LabourClass, LabourComposition,
};
use prodmine::model::{delta_p_full, psi_from_delta_p, tau_a_from_psi, ProductionInputs};
use prodmine::queue::{analytic_mm1, simulate, QueueNetwork, QueueSystem, StationKind};

const ACTIVITIES: [&str; 6] = ["RECEIVE", "TRIAGE", "CHECK", "REVIEW", "RESPOND", "CLOSE"];

fn name_chars() -> impl Strategy<Value = String> {
    // includes regex metacharacters on purpose; the glob translator must
    // treat them literally
    let alphabet = prop::sample::select(
        "abXY01 ._()+?^$|[]{}-".chars().collect::<Vec<char>>(),
    );
    prop::collection::vec(alphabet, 0..12).prop_map(|chars| chars.into_iter().collect())
}

fn paired_event(activity: &str, at: i64, lifecycle: Lifecycle, index: usize) -> Event {
    Event {
        case_id: "case".to_string(),
        activity: activity.to_string(),
        timestamp: Utc.timestamp_opt(at, 0).unwrap(),
        resource: None,
        lifecycle,
        source_index: index,
        extra: BTreeMap::new(),
    }
}

proptest! {
    // attribution: every trace's attributed seconds add back up to its span

    #[test]
    fn attribution_adds_up_for_complete_only_traces(
        gaps in prop::collection::vec((0u8..6, 0i64..3_600), 1..40)
    ) {
        let mut at = 0;
        let steps: Vec<(&str, i64)> = gaps
            .iter()
            .map(|&(activity, gap)| {
                at += gap;
                (ACTIVITIES[activity as usize], at)
            })
            .collect();
        let trace = complete_trace("case", &steps);
        let total: f64 = attributed_seconds(&trace).iter().sum();
        prop_assert_eq!(total, trace.span_seconds());
    }

    #[test]
    fn attribution_adds_up_for_sequential_pairs(
        pairs in prop::collection::vec((0u8..6, 0i64..3_600, 0i64..7_200), 1..20)
    ) {
        let mut at = 0;
        let mut events = Vec::new();
        for (i, &(activity, idle, service)) in pairs.iter().enumerate() {
            at += idle;
            events.push(paired_event(ACTIVITIES[activity as usize], at, Lifecycle::Start, 2 * i));
            at += service;
            events.push(paired_event(
                ACTIVITIES[activity as usize],
                at,
                Lifecycle::Complete,
                2 * i + 1,
            ));
        }
        let trace = Trace::new("case".to_string(), events);
        let total: f64 = attributed_seconds(&trace).iter().sum();
        prop_assert_eq!(total, trace.span_seconds());
    }

    // model: the two directions of the time-ratio mapping invert each other,
    // and the production form collapses under exact substitution

    #[test]
    fn psi_inverts_back_to_the_after_time(
        tau_before in 60.0..86_400.0f64,
        tau_after in 60.0..86_400.0f64,
    ) {
        let (psi, regime) = psi_from_delta_p(tau_before / tau_after).unwrap();
        // bounded by 1 only when times improved; growth has no ceiling
        prop_assert!(psi >= 0.0, "psi {} negative", psi);
        let rebuilt = tau_a_from_psi(tau_before, psi, regime).unwrap();
        prop_assert!(
            (rebuilt - tau_after).abs() <= 1e-12 * tau_after,
            "rebuilt {} vs {}",
            rebuilt,
            tau_after
        );
    }

    #[test]
    fn production_form_collapses_under_exact_substitution(
        tau_before in 300.0..30_000.0f64,
        tau_after in 300.0..30_000.0f64,
        low_before in 1_000.0..500_000.0f64,
        kept in 0.05..0.95f64,
        high in 1_000.0..500_000.0f64,
        automated in 100.0..300_000.0f64,
        alpha in 0.01..0.99f64,
    ) {
        let low_after = low_before * kept;
        let inputs = ProductionInputs {
            low_skilled_before: low_before,
            low_skilled_after: low_after,
            high_skilled_before: high,
            high_skilled_after: high,
            automated_after: automated,
            substitution_rate: (low_before - low_after) / automated,
            alpha,
        };
        let full = delta_p_full(tau_before, tau_after, &inputs).unwrap();
        prop_assert!(
            (full - tau_before / tau_after).abs() <= 1e-12,
            "{} vs {}",
            full,
            tau_before / tau_after
        );
    }

    // discovery: marginal counts of the graph agree with the trace count

    #[test]
    fn dfg_marginals_match_the_trace_count(
        shapes in prop::collection::vec(prop::collection::vec(0u8..6, 1..12), 1..25)
    ) {
        let traces: Vec<Trace> = shapes
            .iter()
            .enumerate()
            .map(|(i, shape)| {
                let steps: Vec<(&str, i64)> = shape
                    .iter()
                    .enumerate()
                    .map(|(j, &a)| (ACTIVITIES[a as usize], j as i64 * 60))
                    .collect();
                complete_trace(&format!("case-{i}"), &steps)
            })
            .collect();
        let expected_edges: u64 = shapes.iter().map(|s| s.len() as u64 - 1).sum();
        let log = common::log("era", traces);
        let dfg = build_dfg(&log).unwrap();

        prop_assert_eq!(dfg.trace_count, shapes.len() as u64);
        prop_assert_eq!(dfg.start_activities.values().sum::<u64>(), dfg.trace_count);
        prop_assert_eq!(dfg.end_activities.values().sum::<u64>(), dfg.trace_count);
        prop_assert_eq!(dfg.terminal_pairs.values().sum::<u64>(), dfg.trace_count);
        prop_assert_eq!(dfg.edges.values().sum::<u64>(), expected_edges);

        // shares of extracted paths can never exceed the whole
        let specs = extract_terminal_paths(&dfg, 0.0);
        let share: f64 = specs.iter().map(|s| s.trace_share).sum();
        prop_assert!(share <= 1.0 + 1e-9, "total share {}", share);
        prop_assert_eq!(specs.iter().map(|s| &s.name).collect::<std::collections::BTreeSet<_>>().len(), specs.len());
    }

    // labour: glob rules are literal except `*`, and first match wins

    #[test]
    fn globs_match_themselves_literally(name in name_chars(), extra in "[a-z]") {
        let classification = ActivityClassification {
            version: 1,
            default_class: LabourClass::LowSkilled,
            rules: vec![ClassRule {
                pattern: name.clone(),
                class: LabourClass::HighSkilled,
            }],
        };
        let matcher = ClassMatcher::new(&classification);
        prop_assert_eq!(matcher.classify(&name), LabourClass::HighSkilled);
        prop_assert_eq!(
            matcher.classify(&format!("{name}{extra}")),
            LabourClass::LowSkilled
        );
    }

    #[test]
    fn star_spans_any_infix(
        prefix in name_chars(),
        infix in name_chars(),
        suffix in name_chars(),
    ) {
        let classification = ActivityClassification {
            version: 1,
            default_class: LabourClass::LowSkilled,
            rules: vec![
                ClassRule {
                    pattern: format!("{prefix}*{suffix}"),
                    class: LabourClass::Automated,
                },
                ClassRule {
                    pattern: "*".to_string(),
                    class: LabourClass::Customer,
                },
            ],
        };
        let matcher = ClassMatcher::new(&classification);
        prop_assert_eq!(
            matcher.classify(&format!("{prefix}{infix}{suffix}")),
            LabourClass::Automated
        );
        // the catch-all only sees names the first rule passed over
        let outsider = format!("{prefix}{infix}@{suffix}@");
        let expected = if outsider.starts_with(&prefix) && outsider.ends_with(&suffix) {
            LabourClass::Automated
        } else {
            LabourClass::Customer
        };
        prop_assert_eq!(matcher.classify(&outsider), expected);
    }

    // eventlog: lifecycle strings survive parsing

    #[test]
    fn lifecycle_parse_keeps_every_string(raw in "[A-Za-z+_-]{0,12}") {
        let parsed = Lifecycle::parse(&raw);
        let keywords = ["schedule", "start", "complete"];
        if keywords.contains(&raw.to_ascii_lowercase().as_str()) {
            prop_assert_eq!(parsed.as_str(), raw.to_ascii_lowercase());
            prop_assert!(!matches!(parsed, Lifecycle::Other(_)));
        } else {
            prop_assert_eq!(parsed.as_str(), raw.as_str());
            prop_assert!(matches!(parsed, Lifecycle::Other(_)));
        }
    }

    // labour: no change between eras means exactly zero displacement

    #[test]
    fn identical_compositions_displace_nothing(
        low in 1.0..1e6f64,
        high in 0.0..1e6f64,
        automated in 1.0..1e6f64,
    ) {
        let composition = |era: &str| LabourComposition {
            path: "A".to_string(),
            era: era.to_string(),
            high_skilled_seconds: high,
            low_skilled_seconds: low,
            automated_seconds: Some(automated),
            substitution_rate: None,
            redundancy_share: None,
        };
        let (substitution, redundancy) =
            displacement(&composition("before"), &composition("after")).unwrap();
        prop_assert_eq!(substitution, 0.0);
        prop_assert_eq!(redundancy, 0.0);
    }

    // queue: closed form decomposes into wait plus service, and the
    // simulator is a pure function of its seed

    #[test]
    fn analytic_sojourn_is_wait_plus_service(
        mu in 0.001..10.0f64,
        load in 0.01..0.99f64,
    ) {
        let lambda = mu * load;
        let (wait, sojourn) = analytic_mm1(lambda, mu).unwrap();
        prop_assert!(wait >= 0.0);
        prop_assert!(
            (sojourn - (wait + 1.0 / mu)).abs() <= 1e-9 * sojourn,
            "sojourn {} wait {} mu {}",
            sojourn,
            wait,
            mu
        );
    }
}

#[test]
fn same_seed_same_simulation() {
    let network = QueueNetwork {
        label: "pair".to_string(),
        stations: vec![
            QueueSystem::new("first", StationKind::LowSkilled, 0.4, 1.0),
            QueueSystem::new("second", StationKind::HighSkilled, 0.4, 0.9),
        ],
    };
    let a = simulate(&network, 5_000, 7).unwrap();
    let b = simulate(&network, 5_000, 7).unwrap();
    assert_eq!(a, b);
    let c = simulate(&network, 5_000, 8).unwrap();
    assert_ne!(
        a.per_station[0].mean_sojourn_seconds,
        c.per_station[0].mean_sojourn_seconds
    );
}

#[test]
fn path_names_run_like_spreadsheet_columns() {
    assert_eq!(path_name(0), "A");
    assert_eq!(path_name(25), "Z");
    assert_eq!(path_name(26), "AA");
    assert_eq!(path_name(27), "AB");
    assert_eq!(path_name(51), "AZ");
    assert_eq!(path_name(52), "BA");
    assert_eq!(path_name(701), "ZZ");
    assert_eq!(path_name(702), "AAA");

    let names: std::collections::BTreeSet<String> = (0..1000).map(path_name).collect();
    assert_eq!(names.len(), 1000);
}
