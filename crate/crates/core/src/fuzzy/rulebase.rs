use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{IntersectionConfig, NUM_STREETS};
use crate::error::{Error, Result};

use super::membership::{DensityLevel, NUM_LEVELS};

/// `5^4` level combinations.
pub const NUM_RULES: usize = NUM_LEVELS.pow(NUM_STREETS as u32);

pub type LevelTuple = [DensityLevel; NUM_STREETS];

const HEADER: &str = "d1,d2,d3,d4,green";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildMeta {
    pub base_seed: u64,
    pub repetitions: u32,
    pub builder_version: String,
}

/// Phase-1 green for each combination of street density levels.
///
/// A complete base holds all 625 rules. Partial bases (such as small test
/// fixtures) are allowed but only fire the rules they contain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleBase {
    greens: Vec<Option<u32>>,
    pub meta: Option<BuildMeta>,
}

impl Default for RuleBase {
    fn default() -> Self {
        Self { greens: vec![None; NUM_RULES], meta: None }
    }
}

impl RuleBase {
    /// Lexicographic position of a tuple, street 1 most significant.
    pub fn index_of(levels: LevelTuple) -> usize {
        levels.iter().fold(0, |acc, l| acc * NUM_LEVELS + l.index())
    }

    pub fn tuple_at(mut index: usize) -> LevelTuple {
        let mut t = [DensityLevel::ALL[0]; NUM_STREETS];
        for slot in t.iter_mut().rev() {
            *slot = DensityLevel::ALL[index % NUM_LEVELS];
            index /= NUM_LEVELS;
        }
        t
    }

    /// All tuples in lexicographic order.
    pub fn tuples() -> impl Iterator<Item = LevelTuple> {
        (0..NUM_RULES).map(Self::tuple_at)
    }

    pub fn get(&self, levels: LevelTuple) -> Option<u32> {
        self.greens[Self::index_of(levels)]
    }

    pub fn insert(&mut self, levels: LevelTuple, green: u32) -> Option<u32> {
        self.greens[Self::index_of(levels)].replace(green)
    }

    pub fn len(&self) -> usize {
        self.greens.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_complete(&self) -> bool {
        self.len() == NUM_RULES
    }

    pub fn iter(&self) -> impl Iterator<Item = (LevelTuple, u32)> + '_ {
        self.greens.iter().enumerate().filter_map(|(i, g)| g.map(|g| (Self::tuple_at(i), g)))
    }

    /// Checks completeness and that every green is a feasible phase-1 green.
    pub fn validate(&self, config: &IntersectionConfig) -> Result<()> {
        if !self.is_complete() {
            return Err(Error::RuleBase(format!("{} of {NUM_RULES} rules present", self.len())));
        }
        if let Some((t, g)) = self.iter().find(|&(_, g)| g < config.min_green_s || g > config.max_green_s) {
            return Err(Error::RuleBase(format!(
                "rule {:?} has green {g} outside [{}, {}]",
                t.map(|l| l.value()),
                config.min_green_s,
                config.max_green_s
            )));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(24 * (self.len() + 1));
        out.push_str(HEADER);
        out.push('\n');
        for (t, g) in self.iter() {
            let [a, b, c, d] = t.map(|l| l.value());
            writeln!(out, "{a:.1},{b:.1},{c:.1},{d:.1},{g}").unwrap();
        }
        out
    }

    /// Parses rule rows; `origin` names the source in diagnostics.
    pub fn parse_csv(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse { path: origin.to_owned(), line, msg };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == HEADER => {}
            Some((i, h)) => return Err(err(i + 1, format!("expected header `{HEADER}`, found `{h}`"))),
            None => return Err(err(1, "empty rule base".into())),
        }
        let mut rb = RuleBase::default();
        for (i, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != NUM_STREETS + 1 {
                return Err(err(i + 1, format!("expected 5 fields, found {}", fields.len())));
            }
            let mut t = [DensityLevel::ALL[0]; NUM_STREETS];
            for s in 0..NUM_STREETS {
                let v: f64 = fields[s].parse().map_err(|_| err(i + 1, format!("bad density `{}`", fields[s])))?;
                t[s] = DensityLevel::from_value(v)
                    .ok_or_else(|| err(i + 1, format!("density {v} is not a level midpoint")))?;
            }
            let g: u32 = fields[4].parse().map_err(|_| err(i + 1, format!("bad green `{}`", fields[4])))?;
            if rb.insert(t, g).is_some() {
                return Err(err(i + 1, "duplicate rule".into()));
            }
        }
        Ok(rb)
    }

    /// Loads a complete rule base.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let rb = Self::load_partial(&path)?;
        if !rb.is_complete() {
            return Err(Error::RuleBase(format!(
                "{}: {} of {NUM_RULES} rules present",
                path.as_ref().display(),
                rb.len()
            )));
        }
        Ok(rb)
    }

    /// Loads a rule file without requiring full coverage.
    pub fn load_partial(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_csv(&text, &path.display().to_string())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}
