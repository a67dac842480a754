//! Streaming IEEE XES reader.
//!
//! Memory stays bounded by the largest single trace: the reader walks the
//! XML token stream and flushes each `<trace>` as soon as it closes. Only
//! the four attributes the model consumes are interpreted; every other
//! event attribute is preserved verbatim in `Event::extra`.

use std::collections::BTreeMap;
use std::io::BufRead;

use chrono::{DateTime, Utc};
use quick_xml::events::{BytesStart, Event as XmlEvent};
use quick_xml::Reader;

use super::{
    parse_timestamp, Event, EventLog, IngestError, IngestOptions, Lifecycle, SourcePosition, Trace,
};

/// Attribute element names defined by XES. Anything else at attribute
/// position is skipped wholesale.
const ATTRIBUTE_TAGS: [&[u8]; 7] = [
    b"string", b"date", b"int", b"float", b"boolean", b"id", b"list",
];

#[derive(Default)]
struct PendingEvent {
    activity: Option<String>,
    raw_timestamp: Option<String>,
    resource: Option<String>,
    lifecycle: Option<String>,
    extra: BTreeMap<String, String>,
}

#[derive(Default)]
struct PendingTrace {
    case_id: Option<String>,
    events: Vec<Event>,
    seen_events: usize,
}

/// Parses an XES document into an [`EventLog`].
///
/// Events missing `concept:name` or `time:timestamp` are hard errors, or
/// skipped with a count in `source_meta` when `opts.lenient` is set. The
/// same applies to traces without a `concept:name` case id.
pub fn parse_xes<R: BufRead>(reader: R, opts: &IngestOptions) -> Result<EventLog, IngestError> {
    let mut xml = Reader::from_reader(reader);
    xml.config_mut().trim_text(true);

    let mut buf = Vec::new();
    let mut skip_buf = Vec::new();

    let mut source_meta = BTreeMap::new();
    let mut traces = Vec::new();
    let mut in_log = false;
    let mut log_closed = false;
    let mut trace_index = 0usize;
    let mut cur_trace: Option<PendingTrace> = None;
    let mut cur_event: Option<PendingEvent> = None;
    let mut skipped_events = 0u64;
    let mut skipped_traces = 0u64;

    loop {
        let position = xml.buffer_position();
        match xml.read_event_into(&mut buf) {
            Err(err) => {
                return Err(IngestError::MalformedXml {
                    position,
                    detail: err.to_string(),
                })
            }
            Ok(XmlEvent::Eof) => {
                if !log_closed {
                    return Err(IngestError::MalformedXml {
                        position,
                        detail: "unexpected end of file".to_string(),
                    });
                }
                break;
            }
            Ok(XmlEvent::Start(ref e)) => {
                let name = e.name().as_ref().to_vec();
                match name.as_slice() {
                    b"log" => {
                        in_log = true;
                        capture_log_attrs(e, &mut source_meta)?;
                    }
                    b"trace" if in_log => {
                        cur_trace = Some(PendingTrace::default());
                    }
                    b"event" if cur_trace.is_some() => {
                        cur_event = Some(PendingEvent::default());
                    }
                    tag if ATTRIBUTE_TAGS.contains(&tag) => {
                        // nested attribute: take its own key/value, drop children
                        handle_attribute(
                            e,
                            &mut cur_event,
                            &mut cur_trace,
                            in_log,
                            &mut source_meta,
                        )?;
                        skip_element(&mut xml, e, &mut skip_buf)?;
                    }
                    _ => {
                        skip_element(&mut xml, e, &mut skip_buf)?;
                    }
                }
            }
            Ok(XmlEvent::Empty(ref e)) => {
                let name = e.name().as_ref().to_vec();
                if ATTRIBUTE_TAGS.contains(&name.as_slice()) {
                    handle_attribute(e, &mut cur_event, &mut cur_trace, in_log, &mut source_meta)?;
                }
            }
            Ok(XmlEvent::End(ref e)) => match e.name().as_ref() {
                b"event" => {
                    let trace = cur_trace.as_mut().expect("event end outside trace");
                    let pending = cur_event.take().expect("event end without start");
                    let event_index = trace.seen_events;
                    trace.seen_events += 1;
                    match finish_event(pending, trace_index, event_index) {
                        Ok(event) => trace.events.push(event),
                        Err(err) if opts.lenient => {
                            let _ = err;
                            skipped_events += 1;
                        }
                        Err(err) => return Err(err),
                    }
                }
                b"trace" => {
                    let pending = cur_trace.take().expect("trace end without start");
                    match flush_trace(pending, trace_index) {
                        Ok(Some(trace)) => traces.push(trace),
                        Ok(None) => {}
                        Err(err) if opts.lenient => {
                            let _ = err;
                            skipped_traces += 1;
                        }
                        Err(err) => return Err(err),
                    }
                    trace_index += 1;
                }
                b"log" => {
                    in_log = false;
                    log_closed = true;
                }
                _ => {}
            },
            // declarations, comments, character data between elements
            Ok(_) => {}
        }
        buf.clear();
    }

    if skipped_events > 0 {
        source_meta.insert("skipped_events".to_string(), skipped_events.to_string());
    }
    if skipped_traces > 0 {
        source_meta.insert("skipped_traces".to_string(), skipped_traces.to_string());
    }

    Ok(EventLog {
        era_label: opts.era_label.clone(),
        traces,
        source_meta,
    })
}

fn capture_log_attrs(
    e: &BytesStart<'_>,
    source_meta: &mut BTreeMap<String, String>,
) -> Result<(), IngestError> {
    for attr in e.attributes().with_checks(false).flatten() {
        let key = String::from_utf8_lossy(attr.key.as_ref()).to_string();
        if key == "xes.version" || key == "xes.features" {
            let value = attr.unescape_value().unwrap_or_default().to_string();
            source_meta.insert(key, value);
        }
    }
    Ok(())
}

/// Pulls the `key`/`value` attribute pair off an XES attribute element.
fn key_value(e: &BytesStart<'_>) -> (Option<String>, Option<String>) {
    let mut key = None;
    let mut value = None;
    for attr in e.attributes().with_checks(false).flatten() {
        match attr.key.as_ref() {
            b"key" => key = Some(attr.unescape_value().unwrap_or_default().to_string()),
            b"value" => value = Some(attr.unescape_value().unwrap_or_default().to_string()),
            _ => {}
        }
    }
    (key, value)
}

fn handle_attribute(
    e: &BytesStart<'_>,
    cur_event: &mut Option<PendingEvent>,
    cur_trace: &mut Option<PendingTrace>,
    in_log: bool,
    source_meta: &mut BTreeMap<String, String>,
) -> Result<(), IngestError> {
    let (key, value) = key_value(e);
    let (Some(key), Some(value)) = (key, value) else {
        return Ok(());
    };
    if let Some(event) = cur_event.as_mut() {
        match key.as_str() {
            "concept:name" => event.activity = Some(value),
            "time:timestamp" => event.raw_timestamp = Some(value),
            "org:resource" => event.resource = Some(value),
            "lifecycle:transition" => event.lifecycle = Some(value),
            _ => {
                event.extra.insert(key, value);
            }
        }
    } else if let Some(trace) = cur_trace.as_mut() {
        if key == "concept:name" {
            trace.case_id = Some(value);
        }
    } else if in_log && key == "concept:name" {
        source_meta.insert("log_name".to_string(), value);
    }
    Ok(())
}

fn finish_event(
    pending: PendingEvent,
    trace_index: usize,
    event_index: usize,
) -> Result<Event, IngestError> {
    let position = SourcePosition::Event {
        trace_index,
        event_index,
    };
    let activity = pending
        .activity
        .ok_or_else(|| IngestError::MissingRequiredAttribute {
            position: position.clone(),
            attribute: "concept:name",
        })?;
    let raw_ts = pending
        .raw_timestamp
        .ok_or_else(|| IngestError::MissingRequiredAttribute {
            position: position.clone(),
            attribute: "time:timestamp",
        })?;
    let timestamp: DateTime<Utc> =
        parse_timestamp(&raw_ts).ok_or_else(|| IngestError::UnparseableTimestamp {
            position: position.clone(),
            value: raw_ts.clone(),
        })?;
    Ok(Event {
        // filled in when the trace flushes
        case_id: String::new(),
        activity,
        timestamp,
        resource: pending.resource,
        lifecycle: pending
            .lifecycle
            .as_deref()
            .map(Lifecycle::parse)
            .unwrap_or(Lifecycle::Complete),
        source_index: event_index,
        extra: pending.extra,
    })
}

fn flush_trace(pending: PendingTrace, trace_index: usize) -> Result<Option<Trace>, IngestError> {
    if pending.events.is_empty() && pending.case_id.is_none() {
        return Ok(None);
    }
    let case_id = pending
        .case_id
        .ok_or(IngestError::MissingCaseId { trace_index })?;
    if pending.events.is_empty() {
        return Ok(None);
    }
    let mut events = pending.events;
    for event in &mut events {
        event.case_id = case_id.clone();
    }
    Ok(Some(Trace::new(case_id, events)))
}

fn skip_element<R: BufRead>(
    xml: &mut Reader<R>,
    start: &BytesStart<'_>,
    skip_buf: &mut Vec<u8>,
) -> Result<(), IngestError> {
    skip_buf.clear();
    let position = xml.buffer_position();
    xml.read_to_end_into(start.to_end().name(), skip_buf)
        .map(|_| ())
        .map_err(|err| IngestError::MalformedXml {
            position,
            detail: err.to_string(),
        })
}
