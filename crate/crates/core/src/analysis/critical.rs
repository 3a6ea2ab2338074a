//! Closed-form evacuation times at the exits where each protocol peaks.

use serde::Serialize;

use crate::error::{EvacError, Result};
use crate::protocols::{Layout, Protocol};

/// Intermediate quantities of the square detour, from `p = |AE|` and
/// `q = |CJ|` alone (no geometry construction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SquareDetourScalars {
    pub p: f64,
    pub q: f64,
    /// Angle between `EC` and the vertical through `E`.
    pub alpha: f64,
    pub ec: f64,
    pub eg: f64,
    pub hg: f64,
    /// `|EH|`, the drop of `G` below side `AB`.
    pub eh: f64,
    pub gc: f64,
    pub gj: f64,
    pub ij: f64,
    pub gi: f64,
    pub cos_beta: f64,
    pub ic: f64,
    pub ei: f64,
    pub detour: f64,
    /// `1 + detour − q`.
    pub a: f64,
    /// Abscissa of `K` on `AB`.
    pub r: f64,
    pub kj: f64,
    pub time_c: f64,
    pub time_j: f64,
    pub time_j_above: f64,
    pub time_b: f64,
    pub max_time: f64,
}

impl SquareDetourScalars {
    /// Validated computation; see [`SquareDetourScalars::compute_unchecked`].
    pub fn compute(p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && p < 0.25) {
            return Err(EvacError::param(
                "p",
                p,
                "0 < p < 0.25 (G must lie beyond E)",
            ));
        }
        if q.is_nan() || q <= 0.0 {
            return Err(EvacError::param("q", q, "q > 0"));
        }
        let s = Self::compute_unchecked(p, q);
        if q.is_nan() || q >= 1.0 - s.eh {
            return Err(EvacError::param(
                "q",
                q,
                format!("q < 1 - |EH| = {}", 1.0 - s.eh),
            ));
        }
        if !s.max_time.is_finite() {
            return Err(EvacError::param("q", q, "detour geometry degenerates"));
        }
        Ok(s)
    }

    /// Evaluates the chain in a fixed operation order so that grid replays are
    /// reproducible to the last bit.
    pub fn compute_unchecked(p: f64, q: f64) -> Self {
        let alpha = ((1.0 - p) / (1.0 + (1.0 - p) * (1.0 - p)).sqrt()).asin();
        let ec = (1.0 + (1.0 - p) * (1.0 - p)).sqrt();
        let x = (ec - 1.0 - p) / 2.0;
        let eg = x;
        let hg = x * alpha.sin();
        let gc = ec - eg;
        let jc = q;
        let gj = (gc * gc + jc * jc - 2.0 * gc * jc * alpha.cos()).sqrt();
        let f = 1.0 + p + x;
        let ij = (f - q + gj) / 2.0;
        let gi = gj - ij;
        let cos_beta = (gc * gc - gj * gj - jc * jc) / (-2.0 * gj * jc);
        let beta = cos_beta.acos();
        let ic = (ij * ij + jc * jc - 2.0 * ij * jc * cos_beta).sqrt();
        let ei = (eg * eg + gi * gi - 2.0 * eg * gi * (alpha + beta).cos()).sqrt();
        let detour = eg + gi + ei;
        let a = 1.0 + detour - q;
        let r = (2.0 + q * q - 2.0 * q - a * a) / (2.0 * a + 2.0);
        let kj = ((1.0 - r) * (1.0 - r) + (1.0 - q) * (1.0 - q)).sqrt();
        let time_c = 1.0 + 2.0 * gc;
        let time_j = 1.0 + q + 2.0 * ij;
        let time_j_above = 1.0 + q + 2.0 * kj;
        let time_b = 3.0 + detour;
        let m1 = f64::max(time_c, time_j);
        let m2 = f64::max(time_j_above, time_b);
        SquareDetourScalars {
            p,
            q,
            alpha,
            ec,
            eg,
            hg,
            eh: eg * alpha.cos(),
            gc,
            gj,
            ij,
            gi,
            cos_beta,
            ic,
            ei,
            detour,
            a,
            r,
            kj,
            time_c,
            time_j,
            time_j_above,
            time_b,
            max_time: f64::max(m1, m2),
        }
    }
}

/// Where a closed form applies: at an exit, or as the limit approaching it
/// from smaller (`Left`) or larger (`Right`) arc coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Approach {
    At,
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalTime {
    pub name: String,
    pub time: f64,
    pub exit: f64,
    pub approach: Approach,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalFormulas {
    pub entries: Vec<CriticalTime>,
}

impl CriticalFormulas {
    pub fn max_time(&self) -> f64 {
        self.entries.iter().map(|e| e.time).fold(f64::MIN, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<&CriticalTime> {
        self.entries.iter().find(|e| e.name == name)
    }

    fn push(&mut self, name: &str, time: f64, exit: f64, approach: Approach) {
        self.entries.push(CriticalTime {
            name: name.to_string(),
            time,
            exit,
            approach,
        });
    }
}

/// The four candidate times of the square detour: exit at `C`, at `J`, just
/// above `J`, and at `B`.
pub fn critical_times_square(p: f64, q: f64) -> Result<CriticalFormulas> {
    let s = SquareDetourScalars::compute(p, q)?;
    Ok(square_entries(&s))
}

fn square_entries(s: &SquareDetourScalars) -> CriticalFormulas {
    let mut c = CriticalFormulas { entries: vec![] };
    c.push("C", s.time_c, 1.0, Approach::At);
    c.push("J", s.time_j, 1.0 + s.q, Approach::At);
    c.push("J'", s.time_j_above, 1.0 + s.q, Approach::Right);
    c.push("B", s.time_b, 2.0, Approach::At);
    c
}

/// Closed-form times for a built protocol, if its family has them.
pub fn critical_times(protocol: &Protocol) -> Option<CriticalFormulas> {
    let mut c = CriticalFormulas { entries: vec![] };
    match &protocol.layout {
        Layout::TriangleDetour1(d) => {
            c.push("t1@B", d.t1, 0.0, Approach::At);
            c.push("t1@C", d.t1, 1.0, Approach::At);
            c.push("t2@q1+", d.t2, 3.0 - d.z, Approach::Left);
            c.push("t2@q2+", d.t2, 1.0 + d.z, Approach::Right);
        }
        Layout::TriangleDetour2(d) => {
            c.push("t1@B", d.t1, 0.0, Approach::At);
            c.push("t1@C", d.t1, 1.0, Approach::At);
            c.push("t2@q1+", d.t2, 3.0 - d.b1, Approach::Left);
            c.push("t2@q2+", d.t2, 1.0 + d.b1, Approach::Right);
            c.push("t3@q1'+", d.t3, 3.0 - d.b2, Approach::Left);
            c.push("t3@q2'+", d.t3, 1.0 + d.b2, Approach::Right);
        }
        Layout::EarlyMeeting(d) => {
            for i in 0..protocol.shape.sides() {
                let v = protocol.shape.vertices[i].0.to_string();
                c.push(&v, d.worst_time, i as f64, Approach::At);
            }
            c.push("p2-", d.worst_time, d.p2, Approach::Left);
        }
        Layout::EqualTravel(d) => {
            let t = d.travel_times.iter().cloned().fold(0.0, f64::max)
                + protocol.shape.centroid_to_vertex();
            for i in 0..protocol.shape.sides() {
                let v = protocol.shape.vertices[i].0.to_string();
                c.push(&v, t, i as f64, Approach::At);
            }
        }
        Layout::SquareDetour(d) => return Some(square_entries(&d.scalars)),
        Layout::Custom => return None,
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_optimum() {
        let s = SquareDetourScalars::compute(0.1556, 0.501).unwrap();
        assert!((s.max_time - 3.46442).abs() < 1e-5);
        assert!((s.ec - 1.30882).abs() < 1e-5);
        assert!((s.gc - 1.23221).abs() < 1e-5);
        assert!((s.ij - 0.82003).abs() < 1e-5);
    }

    #[test]
    fn diagonal_limit() {
        let s = SquareDetourScalars::compute_unchecked(0.0, 0.5);
        assert_eq!(s.ec, 2f64.sqrt());
        assert!((s.alpha - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn rejects_infeasible() {
        assert!(SquareDetourScalars::compute(0.25, 0.5).is_err());
        assert!(SquareDetourScalars::compute(0.15, -0.1).is_err());
        let s = SquareDetourScalars::compute_unchecked(0.15, 0.5);
        assert!(SquareDetourScalars::compute(0.15, 1.0 - s.eh).is_err());
        assert!(critical_times_square(0.15, 0.5).unwrap().entries.len() == 4);
    }
}
