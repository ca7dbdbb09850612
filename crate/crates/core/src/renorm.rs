//! Renormalization: decompose the heavy problem for `α` into islands, each
//! an affine copy (possibly flipped or clipped) of the heavy problem for an
//! induced rotation `α'`, and iterate.
//!
//! Local coordinates: every island carries the half-interval `[0, 1/2]` of
//! its own rotation, restricted to a window `[w_lo, w_hi]`. A point `τ` of the
//! window sits at `offset + orientation·scale·τ` globally.

use std::fmt;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::contfrac::{CFExpansion, Rotation};
use crate::error::{Error, Result};
use crate::exactnum::QuadSurd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseKind {
    /// `a_1 = 1`: reflect, rotate by `1 − α`.
    A1One,
    /// `a_1` even, `a_3 ≥ 2`.
    EvenA3Ge2,
    /// `a_1` even, `a_3 = 1`: one extra broken island.
    EvenA3Eq1,
    /// `a_1 ≥ 3` odd.
    Odd,
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseKind::A1One => "A1_ONE",
            CaseKind::EvenA3Ge2 => "EVEN_A3GE2",
            CaseKind::EvenA3Eq1 => "EVEN_A3EQ1",
            CaseKind::Odd => "ODD",
        };
        f.write_str(s)
    }
}

fn entry(cf: &CFExpansion, i: usize) -> Result<u64> {
    cf.get(i).ok_or(Error::TooFewEntries {
        needed: i + 1,
        available: cf.available().unwrap_or(usize::MAX),
    })
}

pub fn classify(cf: &CFExpansion) -> Result<CaseKind> {
    let a1 = entry(cf, 0)?;
    if a1 == 1 {
        return Ok(CaseKind::A1One);
    }
    if a1 % 2 == 1 {
        return Ok(CaseKind::Odd);
    }
    Ok(if entry(cf, 2)? == 1 {
        CaseKind::EvenA3Eq1
    } else {
        CaseKind::EvenA3Ge2
    })
}

fn half() -> QuadSurd {
    QuadSurd::ratio(1, 2)
}

/// Placement of an island, either globally or relative to its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IslandPlacement {
    pub offset: QuadSurd,
    pub scale: QuadSurd,
    pub orientation: i8,
    pub w_lo: QuadSurd,
    pub w_hi: QuadSurd,
    /// Descends from complete islands only (counted in the history).
    pub complete: bool,
}

impl IslandPlacement {
    /// The whole of `A = [0, 1/2]`.
    pub fn root() -> Self {
        IslandPlacement {
            offset: QuadSurd::zero(),
            scale: QuadSurd::one(),
            orientation: 1,
            w_lo: QuadSurd::zero(),
            w_hi: half(),
            complete: true,
        }
    }

    /// Image of the local coordinate `τ`.
    pub fn map(&self, tau: &QuadSurd) -> QuadSurd {
        let d = &self.scale * tau;
        if self.orientation > 0 {
            &self.offset + &d
        } else {
            &self.offset - &d
        }
    }

    /// Local coordinate of the image point `x`.
    pub fn unmap(&self, x: &QuadSurd) -> QuadSurd {
        let d = (x - &self.offset) / self.scale.clone();
        if self.orientation > 0 {
            d
        } else {
            -d
        }
    }

    /// Closed extent `[lo, hi]` of the window's image.
    pub fn extent(&self) -> (QuadSurd, QuadSurd) {
        let a = self.map(&self.w_lo);
        let b = self.map(&self.w_hi);
        if self.orientation > 0 {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn length(&self) -> QuadSurd {
        &self.scale * &(&self.w_hi - &self.w_lo)
    }

    pub fn window_is_full(&self) -> bool {
        self.w_lo.is_zero() && self.w_hi == half()
    }

    /// Place `child` (given relative to this island) into this island's
    /// frame, clipping its window against this one. `None` if disjoint.
    pub fn compose(&self, child: &IslandPlacement) -> Option<IslandPlacement> {
        let (lo, hi) = if child.orientation > 0 {
            (
                (&self.w_lo - &child.offset) / child.scale.clone(),
                (&self.w_hi - &child.offset) / child.scale.clone(),
            )
        } else {
            (
                (&child.offset - &self.w_hi) / child.scale.clone(),
                (&child.offset - &self.w_lo) / child.scale.clone(),
            )
        };
        let lo = if lo > child.w_lo {
            lo
        } else {
            child.w_lo.clone()
        };
        let hi = if hi < child.w_hi {
            hi
        } else {
            child.w_hi.clone()
        };
        if lo > hi {
            return None;
        }
        let step = &self.scale * &child.offset;
        Some(IslandPlacement {
            offset: if self.orientation > 0 {
                &self.offset + &step
            } else {
                &self.offset - &step
            },
            scale: &self.scale * &child.scale,
            orientation: self.orientation * child.orientation,
            w_lo: lo,
            w_hi: hi,
            complete: self.complete && child.complete,
        })
    }

    pub fn to_json(&self) -> Value {
        let (lo, hi) = self.extent();
        json!({
            "offset": self.offset.to_string(),
            "scale": self.scale.to_string(),
            "orientation": self.orientation,
            "window": [self.w_lo.to_string(), self.w_hi.to_string()],
            "complete": self.complete,
            "float_extent": [lo.to_f64(), hi.to_f64()],
        })
    }
}

/// One recorded step: `m` complete children, each scaled by `δ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HistoryEntry {
    pub m: u64,
    pub delta: QuadSurd,
}

/// The rotation currently being renormalized, without any islands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub cf_tail: CFExpansion,
    pub alpha: QuadSurd,
    pub depth: usize,
    pub history: Vec<HistoryEntry>,
    pub broken_seen: bool,
}

/// Result of advancing a frame by one case.
#[derive(Clone, Debug)]
pub struct Transition {
    pub case: CaseKind,
    pub next: Frame,
    /// Cutoff `1/2 − (n−1)α` for the even/odd cases.
    pub cutoff: Option<QuadSurd>,
    /// `δ = 1 − 2nα` for the even/odd cases.
    pub delta: Option<QuadSurd>,
}

impl Frame {
    pub fn new(rotation: &Rotation) -> Result<Self> {
        Ok(Frame {
            cf_tail: rotation.cf().clone(),
            alpha: rotation.exact_value()?.clone(),
            depth: 0,
            history: Vec::new(),
            broken_seen: false,
        })
    }

    /// Enough entries to take a step (finite expansions run out).
    pub fn can_step(&self) -> bool {
        self.cf_tail.has_at_least(3)
    }

    pub fn transition(&self) -> Result<Transition> {
        let cf = &self.cf_tail;
        let case = classify(cf)?;
        let alpha = &self.alpha;
        let mut next = self.clone();
        if case == CaseKind::A1One {
            let a2 = entry(cf, 1)?;
            next.cf_tail = cf.replace_front(2, &[a2 + 1])?;
            next.alpha = &QuadSurd::one() - alpha;
            return Ok(Transition {
                case,
                next,
                cutoff: None,
                delta: None,
            });
        }
        let a1 = entry(cf, 0)?;
        let n = QuadSurd::from_integer(a1 / 2);
        let two_n_alpha = &(&n * alpha) * &QuadSurd::from_integer(2);
        let delta = &QuadSurd::one() - &two_n_alpha;
        let cutoff = &half() - &(&(&n - &QuadSurd::one()) * alpha);
        let quotient = alpha / &delta;
        match case {
            CaseKind::Odd => {
                next.cf_tail = cf.replace_front(1, &[1])?;
                next.alpha = quotient;
                next.history.push(HistoryEntry {
                    m: 1,
                    delta: delta.clone(),
                });
                next.broken_seen = true;
            }
            _ => {
                let a2 = entry(cf, 1)?;
                next.cf_tail = cf.drop_front(2)?;
                next.alpha = quotient.fract();
                next.history.push(HistoryEntry {
                    m: a2 + 1,
                    delta: delta.clone(),
                });
                next.broken_seen |= case == CaseKind::EvenA3Eq1;
            }
        }
        next.depth += 1;
        Ok(Transition {
            case,
            next,
            cutoff: Some(cutoff),
            delta: Some(delta),
        })
    }

    /// Islands of one step relative to the parent frame.
    pub fn children(&self, t: &Transition) -> Result<Vec<IslandPlacement>> {
        let cf = &self.cf_tail;
        let piece =
            |offset: QuadSurd, scale: &QuadSurd, w_hi: QuadSurd, complete: bool| IslandPlacement {
                offset,
                scale: scale.clone(),
                orientation: 1,
                w_lo: QuadSurd::zero(),
                w_hi,
                complete,
            };
        let (delta, cutoff) = match (&t.delta, &t.cutoff) {
            (Some(d), Some(c)) => (d, c),
            _ => {
                return Ok(vec![IslandPlacement {
                    offset: half(),
                    scale: QuadSurd::one(),
                    orientation: -1,
                    w_lo: QuadSurd::zero(),
                    w_hi: half(),
                    complete: true,
                }])
            }
        };
        let mut out = Vec::new();
        match t.case {
            CaseKind::Odd => {
                out.push(piece(QuadSurd::zero(), delta, half(), true));
                let z = (cutoff - delta) / delta.clone();
                if !z.is_negative() {
                    out.push(piece(delta.clone(), delta, z, false));
                }
            }
            _ => {
                let a2 = entry(cf, 1)?;
                for k in 0..=a2 {
                    out.push(piece(
                        &QuadSurd::from_integer(k) * delta,
                        delta,
                        half(),
                        true,
                    ));
                }
                if t.case == CaseKind::EvenA3Eq1 {
                    let start = &QuadSurd::from_integer(a2 + 1) * delta;
                    let z = (cutoff - &start) / delta.clone();
                    if !z.is_negative() {
                        out.push(piece(start, delta, z, false));
                    }
                }
            }
        }
        Ok(out)
    }

    /// The child whose window holds the local coordinate `τ`, found without
    /// enumerating all children.
    pub fn child_containing(
        &self,
        t: &Transition,
        tau: &QuadSurd,
    ) -> Result<Option<IslandPlacement>> {
        if tau.is_negative() || *tau > half() {
            return Ok(None);
        }
        let Some(delta) = &t.delta else {
            return Ok(self.children(t)?.pop());
        };
        let k = (tau / delta).floor();
        let k = match k.to_u64() {
            Some(k) => k,
            None => return Ok(None),
        };
        let kids = match t.case {
            CaseKind::Odd => self.children(t)?,
            _ => {
                let a2 = entry(&self.cf_tail, 1)?;
                if k > a2 + 1 {
                    return Ok(None);
                }
                let all = self.children(t)?;
                let start = k.saturating_sub(1) as usize;
                all.into_iter().skip(start).take(3).collect()
            }
        };
        Ok(kids.into_iter().find(|c| {
            let local = c.unmap(tau);
            local >= c.w_lo && local <= c.w_hi
        }))
    }
}

/// Islands at a given depth, with the frame they live in.
#[derive(Clone, Debug)]
pub struct RenormState {
    pub frame: Frame,
    pub islands: Vec<IslandPlacement>,
    /// The expansion ran out before the requested depth.
    pub exhausted: bool,
}

impl RenormState {
    pub fn initial(rotation: &Rotation) -> Result<Self> {
        Ok(RenormState {
            frame: Frame::new(rotation)?,
            islands: vec![IslandPlacement::root()],
            exhausted: false,
        })
    }

    pub fn depth(&self) -> usize {
        self.frame.depth
    }

    pub fn complete_count(&self) -> usize {
        self.islands.iter().filter(|i| i.complete).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "depth": self.frame.depth,
            "cf_tail": self.frame.cf_tail.to_string(),
            "alpha": self.frame.alpha.to_string(),
            "exhausted": self.exhausted,
            "history": self.frame.history.iter().map(|h| json!({
                "m": h.m,
                "delta": h.delta.to_string(),
                "delta_float": h.delta.to_f64(),
            })).collect::<Vec<_>>(),
            "islands": self.islands.iter().map(IslandPlacement::to_json).collect::<Vec<_>>(),
        })
    }
}

/// One case application. Reflections (`a_1 = 1`) leave the depth unchanged.
pub fn refine_step(state: &RenormState) -> Result<RenormState> {
    let t = state.frame.transition()?;
    let kids = state.frame.children(&t)?;
    let mut islands = Vec::with_capacity(state.islands.len() * kids.len());
    for parent in &state.islands {
        islands.extend(kids.iter().filter_map(|c| parent.compose(c)));
    }
    if islands.iter().any(|i| i.w_lo > i.w_hi) {
        return Err(Error::DegenerateWindow);
    }
    Ok(RenormState {
        frame: t.next,
        islands,
        exhausted: false,
    })
}

/// Islands after `depth` non-reflecting steps, or fewer if a finite
/// expansion drops below three entries.
pub fn run(rotation: &Rotation, depth: usize) -> Result<RenormState> {
    let mut state = RenormState::initial(rotation)?;
    while state.frame.depth < depth {
        if !state.frame.can_step() {
            state.exhausted = true;
            break;
        }
        state = refine_step(&state)?;
    }
    Ok(state)
}

/// Frame after `depth` steps, tracking only the history.
pub fn run_frame(rotation: &Rotation, depth: usize) -> Result<Frame> {
    let mut frame = Frame::new(rotation)?;
    while frame.depth < depth && frame.can_step() {
        frame = frame.transition()?.next;
    }
    Ok(frame)
}
