use std::cmp::Ordering;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::exactnum::QuadSurd;

/// Interval with exact endpoints and explicit closure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: QuadSurd,
    pub hi: QuadSurd,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: QuadSurd, hi: QuadSurd) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn point(x: QuadSurd) -> Self {
        Interval::closed(x.clone(), x)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.partial_cmp(&self.hi) {
            Some(Ordering::Less) => false,
            Some(Ordering::Equal) => !(self.lo_closed && self.hi_closed),
            _ => true,
        }
    }

    pub fn length(&self) -> QuadSurd {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &QuadSurd) -> bool {
        let above = match self.lo.partial_cmp(x) {
            Some(Ordering::Less) => true,
            Some(Ordering::Equal) => self.lo_closed,
            _ => false,
        };
        let below = match x.partial_cmp(&self.hi) {
            Some(Ordering::Less) => true,
            Some(Ordering::Equal) => self.hi_closed,
            _ => false,
        };
        above && below
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let lo_ok = match other.lo.partial_cmp(&self.lo) {
            Some(Ordering::Less) => true,
            Some(Ordering::Equal) => other.lo_closed || !self.lo_closed,
            _ => false,
        };
        let hi_ok = match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Less) => true,
            Some(Ordering::Equal) => other.hi_closed || !self.hi_closed,
            _ => false,
        };
        lo_ok && hi_ok
    }

    /// Image under `x ↦ c − x`.
    pub fn reflect(&self, c: &QuadSurd) -> Interval {
        Interval {
            lo: c - &self.hi,
            hi: c - &self.lo,
            lo_closed: self.hi_closed,
            hi_closed: self.lo_closed,
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "lo": self.lo.to_string(),
            "hi": self.hi.to_string(),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
            "lo_float": self.lo.to_f64(),
            "hi_float": self.hi.to_f64(),
        })
    }
}

/// Sorted union of pairwise disjoint intervals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    /// Normalize: drop empty pieces, sort, and merge pieces that overlap or
    /// touch at a point belonging to either.
    pub fn new(pieces: Vec<Interval>) -> Self {
        let mut pieces: Vec<Interval> = pieces.into_iter().filter(|i| !i.is_empty()).collect();
        pieces.sort_by(|a, b| {
            a.lo.partial_cmp(&b.lo)
                .unwrap_or(Ordering::Equal)
                .then_with(|| b.lo_closed.cmp(&a.lo_closed))
        });
        let mut out: Vec<Interval> = Vec::with_capacity(pieces.len());
        for piece in pieces {
            if let Some(last) = out.last_mut() {
                let joins = match piece.lo.partial_cmp(&last.hi) {
                    Some(Ordering::Less) => true,
                    Some(Ordering::Equal) => piece.lo_closed || last.hi_closed,
                    _ => false,
                };
                if joins {
                    match piece.hi.partial_cmp(&last.hi) {
                        Some(Ordering::Greater) => {
                            last.hi = piece.hi;
                            last.hi_closed = piece.hi_closed;
                        }
                        Some(Ordering::Equal) => last.hi_closed |= piece.hi_closed,
                        _ => {}
                    }
                    continue;
                }
            }
            out.push(piece);
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: &QuadSurd) -> bool {
        let idx = self
            .intervals
            .partition_point(|i| i.lo.partial_cmp(x) != Some(Ordering::Greater));
        idx > 0 && self.intervals[idx - 1].contains(x)
    }

    pub fn total_length(&self) -> QuadSurd {
        self.intervals
            .iter()
            .fold(QuadSurd::zero(), |acc, i| &acc + &i.length())
    }

    /// `self ⊆ other`, exactly.
    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.intervals
            .iter()
            .all(|i| other.intervals.iter().any(|o| i.is_subset_of(o)))
    }

    /// Image under `x ↦ c − x`.
    pub fn reflect(&self, c: &QuadSurd) -> IntervalSet {
        IntervalSet::new(self.intervals.iter().map(|i| i.reflect(c)).collect())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.intervals.iter().map(Interval::to_json).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lo,hi,lo_closed,hi_closed,lo_float,hi_float\n");
        for i in &self.intervals {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.17e},{:.17e}",
                i.lo,
                i.hi,
                i.lo_closed,
                i.hi_closed,
                i.lo.to_f64(),
                i.hi.to_f64()
            );
        }
        out
    }
}

impl std::fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|i| {
                if i.is_point() && i.lo_closed {
                    format!("{{{}}}", i.lo)
                } else {
                    format!(
                        "{}{}, {}{}",
                        if i.lo_closed { '[' } else { '(' },
                        i.lo,
                        i.hi,
                        if i.hi_closed { ']' } else { ')' }
                    )
                }
            })
            .collect();
        f.write_str(&parts.join(" ∪ "))
    }
}
