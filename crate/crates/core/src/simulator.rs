//! Face-to-face evacuation: who finds the exit, how the news travels, and
//! when the last robot gets out.

use serde::Serialize;

use crate::error::{EvacError, Result};
use crate::geometry::{dist, BoundaryCoord, Point};
use crate::numeric::bisect;
use crate::protocols::{Policy, Protocol};
use crate::trajectory::Trajectory;

/// Simultaneity tolerance for discovery times.
const TIME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interception {
    pub time: f64,
    pub point: Point,
}

/// Earliest `t >= free_from` at which a unit-speed chaser leaving `chaser_at`
/// at `free_from` can stand where `target` is scheduled to be.
///
/// The gap `|pos(t) − c| − (t − free_from)` never increases because the target
/// moves at speed at most 1, so the answer is the first root, found segment by
/// segment from the quadratic `|w + τv|² = (τ − s₀)²`. After its schedule the
/// target stands still, so an answer always exists; `None` is returned only
/// for non-finite input.
pub fn earliest_interception(
    chaser_at: Point,
    free_from: f64,
    target: &Trajectory,
) -> Option<Interception> {
    if !chaser_at.is_finite() || !free_from.is_finite() {
        return None;
    }
    let gap = |t: f64| dist(target.position_at(t), chaser_at) - (t - free_from);
    let start = target.start();
    if free_from < start.time {
        let reach = free_from + dist(start.point, chaser_at);
        if reach <= start.time {
            return Some(Interception {
                time: reach,
                point: start.point,
            });
        }
    }
    for (a, b) in target.segments() {
        if b.time < free_from {
            continue;
        }
        let lo = a.time.max(free_from);
        if gap(lo) <= TIME_TOL {
            return Some(Interception {
                time: lo,
                point: target.position_at(lo),
            });
        }
        if gap(b.time) > 0.0 {
            continue;
        }
        let dt = b.time - a.time;
        let v = (b.point - a.point) * (1.0 / dt);
        let w = a.point - chaser_at;
        let s0 = free_from - a.time;
        let qa = v.dot(v) - 1.0;
        let qb = 2.0 * (w.dot(v) + s0);
        let qc = w.dot(w) - s0 * s0;
        let (tau_lo, tau_hi) = (lo - a.time, dt);
        let slack = 1e-12;
        let roots = quadratic_roots(qa, qb, qc);
        let tau = roots
            .into_iter()
            .flatten()
            .filter(|r| *r >= tau_lo - slack && *r <= tau_hi + slack)
            .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.min(r))))
            .map(|r| r.clamp(tau_lo, tau_hi))
            .or_else(|| bisect(|tau| gap(a.time + tau), tau_lo, tau_hi, 1e-15));
        if let Some(tau) = tau {
            let t = a.time + tau;
            return Some(Interception {
                time: t,
                point: target.position_at(t),
            });
        }
    }
    let end = target.end();
    Some(Interception {
        time: end.time.max(free_from + dist(end.point, chaser_at)),
        point: end.point,
    })
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> [Option<f64>; 2] {
    if a.abs() < 1e-14 {
        return if b.abs() < 1e-300 {
            [None, None]
        } else {
            [Some(-c / b), None]
        };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // tangency lost to rounding
        return if disc > -1e-14 {
            [Some(-b / (2.0 * a)), None]
        } else {
            [None, None]
        };
    }
    let sq = disc.sqrt();
    let qq = -0.5 * (b + b.signum() * sq);
    if qq == 0.0 {
        return [Some(0.0), None];
    }
    [Some(qq / a), Some(c / qq)]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Discovery {
    Robot {
        time: f64,
        robot: usize,
    },
    /// Found by the group while sweeping the common section.
    Phase2 {
        time: f64,
    },
}

impl Discovery {
    pub fn time(&self) -> f64 {
        match *self {
            Discovery::Robot { time, .. } | Discovery::Phase2 { time } => time,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    Discover {
        robot: usize,
        time: f64,
    },
    /// `robot` is caught and informed at `at`.
    Intercept {
        robot: usize,
        at: Point,
        time: f64,
    },
    Rendezvous {
        time: f64,
    },
    Phase2Start {
        time: f64,
    },
}

impl Event {
    pub fn time(&self) -> f64 {
        match *self {
            Event::Discover { time, .. }
            | Event::Intercept { time, .. }
            | Event::Rendezvous { time }
            | Event::Phase2Start { time } => time,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvacuationResult {
    pub exit: BoundaryCoord,
    pub exit_point: Point,
    pub discovery: Discovery,
    pub events: Vec<Event>,
    pub arrivals: Vec<f64>,
    pub evac_time: f64,
}

/// Runs the protocol against an exit at arc coordinate `exit`.
pub fn evacuate(protocol: &Protocol, exit: BoundaryCoord) -> Result<EvacuationResult> {
    let shape = &protocol.shape;
    let exit = shape.wrap(exit.0);
    let e = shape.boundary_point(exit);
    let k = protocol.k();
    let first = protocol.first_visit(exit.0);
    let (discovery, events, arrivals) = match (protocol.policy, first) {
        (Policy::Intercept, Some((t_d, finder))) => {
            let other = 1 - finder;
            let own = protocol.profile().first_visit_by(other, exit.0);
            let mut events = vec![Event::Discover {
                robot: finder,
                time: t_d,
            }];
            let mut arrivals = vec![0.0; 2];
            match own {
                Some(t_o) if t_o <= t_d + TIME_TOL => {
                    events.push(Event::Discover {
                        robot: other,
                        time: t_o,
                    });
                    arrivals[finder] = t_d;
                    arrivals[other] = t_o;
                }
                _ => {
                    let ic = earliest_interception(e, t_d, &protocol.trajectories[other])
                        .ok_or_else(|| {
                            EvacError::ProtocolInvariant("interception failed".into())
                        })?;
                    let via = ic.time + dist(ic.point, e);
                    match own {
                        Some(t_o) if t_o <= via => {
                            events.push(Event::Discover {
                                robot: other,
                                time: t_o,
                            });
                            arrivals[finder] = t_d;
                            arrivals[other] = t_o;
                        }
                        _ => {
                            events.push(Event::Intercept {
                                robot: other,
                                at: ic.point,
                                time: ic.time,
                            });
                            arrivals[finder] = via;
                            arrivals[other] = via;
                        }
                    }
                }
            }
            (
                Discovery::Robot {
                    time: t_d,
                    robot: finder,
                },
                events,
                arrivals,
            )
        }
        (
            Policy::Rendezvous {
                meeting_point,
                meeting_time,
            },
            Some((t_d, finder)),
        ) => {
            if t_d > meeting_time + 1e-9 {
                return Err(EvacError::ProtocolInvariant(format!(
                    "exit at {exit} is found at {t_d}, after the rendezvous at {meeting_time}"
                )));
            }
            let out = meeting_time + dist(meeting_point, e);
            (
                Discovery::Robot {
                    time: t_d,
                    robot: finder,
                },
                vec![
                    Event::Discover {
                        robot: finder,
                        time: t_d,
                    },
                    Event::Rendezvous { time: meeting_time },
                ],
                vec![out; k],
            )
        }
        (
            Policy::Rendezvous {
                meeting_point,
                meeting_time,
            },
            None,
        ) => {
            let section = protocol.common_section.ok_or_else(|| {
                EvacError::ProtocolInvariant(format!("exit at {exit} is never explored"))
            })?;
            let off = section.offset_of(exit.0, shape.perimeter).ok_or_else(|| {
                EvacError::ProtocolInvariant(format!("exit at {exit} is never explored"))
            })?;
            let enter = meeting_time + dist(meeting_point, section.entry);
            let out = enter + off;
            (
                Discovery::Phase2 { time: out },
                vec![
                    Event::Rendezvous { time: meeting_time },
                    Event::Phase2Start { time: enter },
                ],
                vec![out; k],
            )
        }
        (Policy::Intercept, None) => {
            return Err(EvacError::ProtocolInvariant(format!(
                "exit at {exit} is never explored"
            )))
        }
    };
    let mut events = events;
    events.sort_by(|a, b| a.time().total_cmp(&b.time()));
    let evac_time = arrivals.iter().cloned().fold(0.0, f64::max);
    Ok(EvacuationResult {
        exit,
        exit_point: e,
        discovery,
        events,
        arrivals,
        evac_time,
    })
}

/// Evacuation time only; panics if the exit is unreachable, which validated
/// protocols rule out.
pub fn evac_time(protocol: &Protocol, s: f64) -> f64 {
    evacuate(protocol, BoundaryCoord(s))
        .expect("validated protocol covers every exit")
        .evac_time
}
