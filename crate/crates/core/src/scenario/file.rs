//! Line-oriented scenario format.
//!
//! ```text
//! # comments run to end of line
//! name     = my_junction
//! start    = 06:00          # optional, default 06:00
//! end      = 22:00          # optional, default 22:00
//! period_s = 900            # optional, default 900
//! seed     = 42             # optional, default 0
//! turns.1  = 20, 10         # left %, right %; optional, default 0, 0
//! flows.1  = 120, 135, ...  # vehicles per period; repeat the key to continue
//! ```
//!
//! Streets are numbered 1 to 4. Every street needs one flow per period
//! between `start` and `end`.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::NUM_STREETS;
use crate::error::{Error, Result};
use crate::sim::TurnFractions;

/// Scenarios shipped with the crate, by name.
pub const BUNDLED: &[(&str, &str)] = &[("abshar_synthetic", include_str!("../../data/abshar_synthetic.scn"))];

/// Time of day in minutes after midnight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClockTime(pub u32);

impl ClockTime {
    pub fn seconds(self) -> u32 {
        self.0 * 60
    }
}

impl fmt::Display for ClockTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}:{:02}", self.0 / 60, self.0 % 60)
    }
}

impl FromStr for ClockTime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (h, m) = s.split_once(':').ok_or_else(|| format!("expected HH:MM, found `{s}`"))?;
        let h: u32 = h.trim().parse().map_err(|_| format!("bad hour in `{s}`"))?;
        let m: u32 = m.trim().parse().map_err(|_| format!("bad minute in `{s}`"))?;
        if h > 24 || m > 59 || (h == 24 && m > 0) {
            return Err(format!("time `{s}` out of range"));
        }
        Ok(ClockTime(h * 60 + m))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub start: ClockTime,
    pub end: ClockTime,
    pub period_s: u32,
    /// Vehicles entering each street per period.
    pub flows: [Vec<u32>; NUM_STREETS],
    pub turns: [TurnFractions; NUM_STREETS],
    pub master_seed: u64,
}

impl Scenario {
    pub fn num_periods(&self) -> usize {
        self.flows[0].len()
    }

    fn expected_periods(start: ClockTime, end: ClockTime, period_s: u32) -> std::result::Result<usize, String> {
        if end <= start {
            return Err(format!("end {end} is not after start {start}"));
        }
        if period_s == 0 {
            return Err("period_s must be positive".into());
        }
        let span = end.seconds() - start.seconds();
        if !span.is_multiple_of(period_s) {
            return Err(format!("{start}-{end} is not a whole number of {period_s} s periods"));
        }
        Ok((span / period_s) as usize)
    }

    pub fn validate(&self) -> Result<()> {
        let n = Self::expected_periods(self.start, self.end, self.period_s).map_err(Error::Scenario)?;
        for (s, f) in self.flows.iter().enumerate() {
            if f.len() != n {
                return Err(Error::Scenario(format!("street {} has {} flow entries, expected {n}", s + 1, f.len())));
            }
        }
        for (s, t) in self.turns.iter().enumerate() {
            t.validate().map_err(|e| Error::Scenario(format!("street {}: {e}", s + 1)))?;
        }
        Ok(())
    }

    /// Mean flow per street over periods `range`.
    pub fn mean_flows(&self, range: std::ops::Range<usize>) -> [f64; NUM_STREETS] {
        let n = range.len().max(1) as f64;
        std::array::from_fn(|s| self.flows[s][range.clone()].iter().map(|&x| f64::from(x)).sum::<f64>() / n)
    }

    pub fn bundled(name: &str) -> Option<Result<Self>> {
        BUNDLED.iter().find(|(n, _)| *n == name).map(|(n, text)| Self::parse(text, &format!("<bundled {n}>"), n))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
        Self::parse(&text, &path.display().to_string(), stem)
    }

    /// Parses scenario text. `origin` labels diagnostics; `default_name`
    /// applies when the file has no `name` key.
    pub fn parse(text: &str, origin: &str, default_name: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse { path: origin.to_owned(), line, msg };
        let mut name = None;
        let mut start = ClockTime(6 * 60);
        let mut end = ClockTime(22 * 60);
        let mut period_s = 900;
        let mut seed = 0;
        let mut flows: [Vec<u32>; NUM_STREETS] = Default::default();
        let mut flow_line = [0usize; NUM_STREETS];
        let mut turns = [TurnFractions::STRAIGHT; NUM_STREETS];

        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| err(ln, format!("expected `key = value`, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let street = |prefix: &str| -> Result<Option<usize>> {
                let Some(n) = key.strip_prefix(prefix) else { return Ok(None) };
                match n.parse::<usize>() {
                    Ok(s @ 1..=NUM_STREETS) => Ok(Some(s - 1)),
                    _ => Err(err(ln, format!("street number in `{key}` must be 1 to {NUM_STREETS}"))),
                }
            };
            match key {
                "name" => name = Some(value.to_owned()),
                "start" => start = value.parse().map_err(|m| err(ln, m))?,
                "end" => end = value.parse().map_err(|m| err(ln, m))?,
                "period_s" => period_s = value.parse().map_err(|_| err(ln, format!("bad period_s `{value}`")))?,
                "seed" => seed = value.parse().map_err(|_| err(ln, format!("bad seed `{value}`")))?,
                _ => {
                    if let Some(s) = street("flows.")? {
                        for tok in value.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                            let v: i64 =
                                tok.parse().map_err(|_| err(ln, format!("street {}: bad flow `{tok}`", s + 1)))?;
                            if v < 0 {
                                return Err(err(ln, format!("street {}: negative flow {v}", s + 1)));
                            }
                            let v = u32::try_from(v)
                                .map_err(|_| err(ln, format!("street {}: flow {v} too large", s + 1)))?;
                            flows[s].push(v);
                        }
                        flow_line[s] = ln;
                    } else if let Some(s) = street("turns.")? {
                        let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                        let [l, r] = parts[..] else {
                            return Err(err(ln, format!("street {}: expected `left%, right%`", s + 1)));
                        };
                        let pct = |t: &str| {
                            t.parse::<f64>().map_err(|_| err(ln, format!("street {}: bad percentage `{t}`", s + 1)))
                        };
                        turns[s] = TurnFractions::new(pct(l)?, pct(r)?)
                            .map_err(|e| err(ln, format!("street {}: {e}", s + 1)))?;
                    } else {
                        return Err(err(ln, format!("unknown key `{key}`")));
                    }
                }
            }
        }

        let n = Self::expected_periods(start, end, period_s).map_err(|m| err(0, m))?;
        for s in 0..NUM_STREETS {
            if flows[s].len() != n {
                return Err(err(
                    flow_line[s],
                    format!("street {} has {} flow entries, expected {n}", s + 1, flows[s].len()),
                ));
            }
        }
        let sc = Scenario {
            name: name.unwrap_or_else(|| default_name.to_owned()),
            start,
            end,
            period_s,
            flows,
            turns,
            master_seed: seed,
        };
        sc.validate()?;
        Ok(sc)
    }

    /// Canonical text form; parses back to an equal scenario.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "name = {}", self.name).unwrap();
        writeln!(out, "start = {}", self.start).unwrap();
        writeln!(out, "end = {}", self.end).unwrap();
        writeln!(out, "period_s = {}", self.period_s).unwrap();
        writeln!(out, "seed = {}", self.master_seed).unwrap();
        for (s, t) in self.turns.iter().enumerate() {
            writeln!(out, "turns.{} = {}, {}", s + 1, t.left_pct, t.right_pct).unwrap();
        }
        for (s, f) in self.flows.iter().enumerate() {
            if f.is_empty() {
                writeln!(out, "flows.{} =", s + 1).unwrap();
            }
            for chunk in f.chunks(8) {
                let row: Vec<String> = chunk.iter().map(u32::to_string).collect();
                writeln!(out, "flows.{} = {}", s + 1, row.join(", ")).unwrap();
            }
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}
