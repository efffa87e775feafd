use std::io::{self, BufRead, Write};

use super::{CrnError, NetworkSpec, SpeciesId};

/// Integer molecule counts at a point in simulated time.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub counts: Vec<u64>,
    pub time: f64,
}

impl SimState {
    pub fn initial(network: &NetworkSpec) -> Self {
        Self {
            counts: network.initial_counts().to_vec(),
            time: 0.0,
        }
    }

    /// Injects `event.count` copies of `event.species` and moves the clock to
    /// `event.time`.
    pub fn apply_bolus(&mut self, event: &BolusEvent) -> Result<(), CrnError> {
        if event.time < self.time {
            return Err(CrnError::BolusInPast {
                event: event.time,
                now: self.time,
            });
        }
        self.counts[event.species.0] += event.count;
        self.time = event.time;
        Ok(())
    }
}

/// A timed injection of molecules into the network.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BolusEvent {
    pub time: f64,
    pub species: SpeciesId,
    pub count: u64,
}

/// Bolus events sorted by time. Events sharing a time keep insertion order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BolusSchedule {
    events: Vec<BolusEvent>,
}

impl BolusSchedule {
    pub fn new(mut events: Vec<BolusEvent>) -> Result<Self, CrnError> {
        for e in &events {
            if !(e.time.is_finite() && e.time >= 0.0) || e.count == 0 {
                return Err(CrnError::InvalidBolus {
                    time: e.time,
                    count: e.count,
                });
            }
        }
        events.sort_by(|a, b| a.time.total_cmp(&b.time));
        Ok(Self { events })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn events(&self) -> &[BolusEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Merges two schedules; ties keep `self` before `other`.
    pub fn merge(&self, other: &BolusSchedule) -> BolusSchedule {
        let mut events = self.events.clone();
        events.extend_from_slice(&other.events);
        events.sort_by(|a, b| a.time.total_cmp(&b.time));
        BolusSchedule { events }
    }

    /// Total molecules injected into `species` at times `<= until`.
    pub fn injected(&self, species: SpeciesId, until: f64) -> u64 {
        self.events
            .iter()
            .filter(|e| e.species == species && e.time <= until)
            .map(|e| e.count)
            .sum()
    }

    /// Writes `time,channel,count` rows; `channel` is the receiving species name.
    pub fn write_csv<W: Write>(&self, network: &NetworkSpec, mut out: W) -> io::Result<()> {
        writeln!(out, "time,channel,count")?;
        for e in &self.events {
            writeln!(
                out,
                "{},{},{}",
                super::format_time(e.time),
                network.name(e.species),
                e.count
            )?;
        }
        Ok(())
    }

    /// Reads the format written by [`write_csv`](Self::write_csv).
    pub fn read_csv<R: BufRead>(network: &NetworkSpec, input: R) -> Result<Self, ScheduleParseError> {
        let mut events = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| ScheduleParseError::new(lineno, e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || (lineno == 1 && line.starts_with("time")) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let [time, channel, count] = fields.as_slice() else {
                return Err(ScheduleParseError::new(lineno, "expected 3 fields: time,channel,count"));
            };
            let time: f64 = time
                .parse()
                .map_err(|_| ScheduleParseError::new(lineno, format!("bad time `{time}`")))?;
            let count: u64 = count
                .parse()
                .map_err(|_| ScheduleParseError::new(lineno, format!("bad count `{count}`")))?;
            let species = network
                .lookup(channel)
                .ok_or_else(|| ScheduleParseError::new(lineno, format!("unknown species `{channel}`")))?;
            events.push(BolusEvent {
                time,
                species,
                count,
            });
        }
        BolusSchedule::new(events).map_err(|e| ScheduleParseError::new(0, e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("schedule line {line}: {message}")]
pub struct ScheduleParseError {
    pub line: usize,
    pub message: String,
}

impl ScheduleParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net() -> NetworkSpec {
        let mut b = NetworkSpec::builder();
        b.add_species("I1", 0).unwrap();
        b.add_species("I2", 0).unwrap();
        b.build()
    }

    #[test]
    fn bolus_is_additive_and_moves_clock() {
        let mut s = SimState {
            counts: vec![0, 0],
            time: 0.0,
        };
        s.apply_bolus(&BolusEvent {
            time: 0.015,
            species: SpeciesId(0),
            count: 200,
        })
        .unwrap();
        assert_eq!(s.counts[0], 200);
        assert_eq!(s.time, 0.015);
        s.apply_bolus(&BolusEvent {
            time: 0.015,
            species: SpeciesId(0),
            count: 5,
        })
        .unwrap();
        assert_eq!(s.counts[0], 205);
    }

    #[test]
    fn past_bolus_is_rejected() {
        let mut s = SimState {
            counts: vec![0],
            time: 1.0,
        };
        let err = s
            .apply_bolus(&BolusEvent {
                time: 0.5,
                species: SpeciesId(0),
                count: 1,
            })
            .unwrap_err();
        assert!(matches!(err, CrnError::BolusInPast { .. }));
        assert_eq!(s.counts[0], 0);
    }

    #[test]
    fn schedule_sorts_stably_and_validates() {
        let ev = |t, s, c| BolusEvent {
            time: t,
            species: SpeciesId(s),
            count: c,
        };
        let sched = BolusSchedule::new(vec![ev(2.0, 0, 1), ev(1.0, 1, 2), ev(1.0, 0, 3)]).unwrap();
        let order: Vec<_> = sched.events().iter().map(|e| e.count).collect();
        assert_eq!(order, vec![2, 3, 1]);
        assert!(BolusSchedule::new(vec![ev(1.0, 0, 0)]).is_err());
        assert!(BolusSchedule::new(vec![ev(-1.0, 0, 1)]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let network = net();
        let sched = BolusSchedule::new(vec![
            BolusEvent {
                time: 0.0047,
                species: SpeciesId(1),
                count: 30,
            },
            BolusEvent {
                time: 0.0,
                species: SpeciesId(0),
                count: 30,
            },
        ])
        .unwrap();
        let mut buf = Vec::new();
        sched.write_csv(&network, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("time,channel,count\n0,I1,30\n"));
        let back = BolusSchedule::read_csv(&network, buf.as_slice()).unwrap();
        assert_eq!(back, sched);
    }

    #[test]
    fn csv_reports_line_numbers() {
        let network = net();
        let err = BolusSchedule::read_csv(&network, "time,channel,count\n0.1,I9,3\n".as_bytes())
            .unwrap_err();
        assert_eq!(err.line, 2);
    }
}
