//! Discrete-event simulation of a tandem queue network.
//!
//! One event calendar drives the run: external arrivals enter station 0,
//! each departure hands the customer to the next station at the same
//! instant. Service times are drawn when service starts, so a fixed seed
//! replays the identical event sequence. The generator is ChaCha12,
//! recorded by name in the result.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use super::{QueueError, QueueNetwork, StationKind};

const RNG_ALGORITHM: &str = "chacha12";

#[derive(Debug, Clone)]
pub struct SimulationOptions {
    /// Fraction of customers (by arrival order) excluded from statistics.
    pub warmup_fraction: f64,
    /// Keep each customer's end-to-end sojourn for export.
    pub record_sojourns: bool,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions {
            warmup_fraction: 0.1,
            record_sojourns: false,
        }
    }
}

/// Post-warm-up means for one station, plus the whole-run occupancy
/// figures used for sanity checks against Little's law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationStats {
    pub task_name: String,
    pub kind: StationKind,
    pub lambda: f64,
    pub mu: f64,
    pub mean_wait_seconds: f64,
    pub mean_service_seconds: f64,
    pub mean_sojourn_seconds: f64,
    /// Time-averaged number of customers present, whole run.
    pub mean_in_system: f64,
    /// Arrivals per second actually observed at this station, whole run.
    pub observed_arrival_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub network_label: String,
    pub seed: u64,
    /// Name of the generator algorithm, for replay documentation.
    pub rng_algorithm: String,
    pub completed_customers: u64,
    /// Customers excluded from the means as warm-up.
    pub warmup_customers: u64,
    pub per_station: Vec<StationStats>,
    /// Mean end-to-end seconds across counted customers.
    pub total_mean_sojourn_seconds: f64,
    pub warnings: Vec<String>,
    /// End-to-end seconds per customer in arrival order, when recorded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_customer_sojourns: Option<Vec<f64>>,
}

/// Runs with default options (10% warm-up, no sojourn series).
pub fn simulate(
    network: &QueueNetwork,
    customers: u64,
    seed: u64,
) -> Result<SimulationResult, QueueError> {
    simulate_with(network, customers, seed, &SimulationOptions::default())
}

#[derive(Debug, PartialEq)]
enum EventKind {
    ExternalArrival,
    Departure { station: usize },
}

struct CalendarEntry {
    time: f64,
    seq: u64,
    kind: EventKind,
}

// min-heap on (time, seq); seq makes simultaneous events deterministic
impl Ord for CalendarEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .partial_cmp(&self.time)
            .expect("event times are finite")
            .then(other.seq.cmp(&self.seq))
    }
}
impl PartialOrd for CalendarEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl PartialEq for CalendarEntry {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.seq == other.seq
    }
}
impl Eq for CalendarEntry {}

struct Station {
    service: Exp<f64>,
    queue: VecDeque<(u64, f64)>,
    /// (customer, service start, arrival at this station)
    in_service: Option<(u64, f64, f64)>,
    wait_sum: f64,
    service_sum: f64,
    sojourn_sum: f64,
    counted: u64,
    occupancy: u64,
    occupancy_area: f64,
    last_change: f64,
    first_arrival: Option<f64>,
    arrivals: u64,
}

impl Station {
    fn advance_clock(&mut self, now: f64) {
        if self.first_arrival.is_some() {
            self.occupancy_area += self.occupancy as f64 * (now - self.last_change);
        }
        self.last_change = now;
    }
}

/// Simulates `customers` arrivals through the network.
///
/// Unstable stations are run as requested and reported in `warnings`;
/// their means describe the simulated horizon, not a steady state.
pub fn simulate_with(
    network: &QueueNetwork,
    customers: u64,
    seed: u64,
    options: &SimulationOptions,
) -> Result<SimulationResult, QueueError> {
    if network.stations.is_empty() {
        return Err(QueueError::Config("network has no stations".to_string()));
    }
    if customers == 0 {
        return Err(QueueError::Config("need at least one customer".to_string()));
    }
    if !(0.0..1.0).contains(&options.warmup_fraction) {
        return Err(QueueError::Config(format!(
            "warmup_fraction {} outside [0, 1)",
            options.warmup_fraction
        )));
    }
    for station in &network.stations {
        if !(station.lambda > 0.0 && station.mu > 0.0) {
            return Err(QueueError::NonPositiveRate {
                task_name: station.task_name.clone(),
                lambda: station.lambda,
                mu: station.mu,
            });
        }
    }

    let warnings: Vec<String> = network
        .stations
        .iter()
        .filter(|s| !s.is_stable())
        .map(|s| {
            format!(
                "station {:?} is unstable (lambda {} >= mu {}); reported means describe the simulated horizon only",
                s.task_name, s.lambda, s.mu
            )
        })
        .collect();

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let interarrival =
        Exp::new(network.stations[0].lambda).expect("validated above: lambda > 0");
    let mut stations: Vec<Station> = network
        .stations
        .iter()
        .map(|s| Station {
            service: Exp::new(s.mu).expect("validated above: mu > 0"),
            queue: VecDeque::new(),
            in_service: None,
            wait_sum: 0.0,
            service_sum: 0.0,
            sojourn_sum: 0.0,
            counted: 0,
            occupancy: 0,
            occupancy_area: 0.0,
            last_change: 0.0,
            first_arrival: None,
            arrivals: 0,
        })
        .collect();

    let warmup = (customers as f64 * options.warmup_fraction).floor() as u64;
    let mut entry_time = vec![0.0f64; customers as usize];
    let mut sojourns = options
        .record_sojourns
        .then(|| Vec::with_capacity(customers as usize));
    let mut total_sojourn_sum = 0.0;
    let mut total_counted = 0u64;
    let mut completed = 0u64;

    let mut calendar: BinaryHeap<CalendarEntry> = BinaryHeap::new();
    let mut seq = 0u64;
    let mut spawned = 0u64;
    let mut clock = 0.0f64;

    let mut schedule = |calendar: &mut BinaryHeap<CalendarEntry>, time: f64, kind: EventKind| {
        calendar.push(CalendarEntry { time, seq, kind });
        seq += 1;
    };

    schedule(
        &mut calendar,
        interarrival.sample(&mut rng),
        EventKind::ExternalArrival,
    );

    while let Some(entry) = calendar.pop() {
        debug_assert!(entry.time >= clock, "event calendar went backwards");
        clock = entry.time;

        match entry.kind {
            EventKind::ExternalArrival => {
                let customer = spawned;
                spawned += 1;
                entry_time[customer as usize] = clock;
                if spawned < customers {
                    schedule(
                        &mut calendar,
                        clock + interarrival.sample(&mut rng),
                        EventKind::ExternalArrival,
                    );
                }
                arrive(
                    &mut stations[0],
                    0,
                    customer,
                    clock,
                    &mut rng,
                    &mut calendar,
                    &mut schedule,
                );
            }
            EventKind::Departure { station: index } => {
                let (customer, service_start, arrived) = {
                    let station = &mut stations[index];
                    station.advance_clock(clock);
                    station.occupancy -= 1;
                    station
                        .in_service
                        .take()
                        .expect("departure from an idle station")
                };

                if customer >= warmup {
                    let station = &mut stations[index];
                    station.wait_sum += service_start - arrived;
                    station.service_sum += clock - service_start;
                    station.sojourn_sum += clock - arrived;
                    station.counted += 1;
                }

                if index + 1 < stations.len() {
                    arrive(
                        &mut stations[index + 1],
                        index + 1,
                        customer,
                        clock,
                        &mut rng,
                        &mut calendar,
                        &mut schedule,
                    );
                } else {
                    completed += 1;
                    let total = clock - entry_time[customer as usize];
                    if customer >= warmup {
                        total_sojourn_sum += total;
                        total_counted += 1;
                    }
                    if let Some(series) = sojourns.as_mut() {
                        series.push(total);
                    }
                }

                // pull the next customer into service
                let station = &mut stations[index];
                if station.in_service.is_none() {
                    if let Some((next, arrived)) = station.queue.pop_front() {
                        station.in_service = Some((next, clock, arrived));
                        schedule(
                            &mut calendar,
                            clock + station.service.sample(&mut rng),
                            EventKind::Departure { station: index },
                        );
                    }
                }
            }
        }
    }

    let end = clock;
    let per_station = network
        .stations
        .iter()
        .zip(stations.iter_mut())
        .map(|(spec, station)| {
            station.advance_clock(end);
            let window = station.first_arrival.map(|t0| end - t0).unwrap_or(0.0);
            let n = station.counted.max(1) as f64;
            StationStats {
                task_name: spec.task_name.clone(),
                kind: spec.kind,
                lambda: spec.lambda,
                mu: spec.mu,
                mean_wait_seconds: station.wait_sum / n,
                mean_service_seconds: station.service_sum / n,
                mean_sojourn_seconds: station.sojourn_sum / n,
                mean_in_system: if window > 0.0 {
                    station.occupancy_area / window
                } else {
                    0.0
                },
                observed_arrival_rate: if window > 0.0 {
                    station.arrivals as f64 / window
                } else {
                    0.0
                },
            }
        })
        .collect();

    Ok(SimulationResult {
        network_label: network.label.clone(),
        seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        completed_customers: completed,
        warmup_customers: warmup,
        per_station,
        total_mean_sojourn_seconds: total_sojourn_sum / total_counted.max(1) as f64,
        warnings,
        per_customer_sojourns: sojourns,
    })
}

#[allow(clippy::too_many_arguments)]
fn arrive(
    station: &mut Station,
    index: usize,
    customer: u64,
    now: f64,
    rng: &mut ChaCha12Rng,
    calendar: &mut BinaryHeap<CalendarEntry>,
    schedule: &mut impl FnMut(&mut BinaryHeap<CalendarEntry>, f64, EventKind),
) {
    if station.first_arrival.is_none() {
        station.first_arrival = Some(now);
        station.last_change = now;
    }
    station.advance_clock(now);
    station.occupancy += 1;
    station.arrivals += 1;
    if station.in_service.is_none() {
        station.in_service = Some((customer, now, now));
        schedule(
            calendar,
            now + station.service.sample(rng),
            EventKind::Departure { station: index },
        );
    } else {
        station.queue.push_back((customer, now));
    }
}
