//! Resolving the `2 pi m` ambiguity of exponentiated line-integral data.
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

// float methods: inherent under std, libm-backed under no_std
#[allow(unused_imports)]
use num_traits::Float;

use super::line::{XRayData, XRayValues};
use crate::angular::wrap_phase;
use crate::error::{Error, Result};
use crate::geom::{dot, sub};

/// Distance of `limit / 2 pi` from a half-integer below which the branch is
/// declared ambiguous.
pub const HALF_INTEGER_GUARD: f64 = 1e-3;

/// Recovers the integer `m` such that the phase family, continued along
/// increasing `|x0|`, tends to `2 pi m` (its short-range remainder tending to 0).
///
/// The lines must be parallel. Real values are taken as a phase branch
/// already (their first value anchors the continuation); unimodular values
/// are anchored at the principal branch of the innermost line.
pub fn resolve_winding(data: &XRayData) -> Result<i64> {
    if data.len() < 2 {
        return Err(Error::InsufficientCoverage { reason: "need at least two parallel lines".into() });
    }
    let w = data.lines[0].omega();
    if data.lines.iter().any(|l| crate::geom::norm(&sub(&l.omega(), &w)) > 1e-12) {
        return Err(crate::error::invalid("winding resolution needs a family of parallel lines"));
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_by(|&a, &b| data.lines[a].distance_to_origin().total_cmp(&data.lines[b].distance_to_origin()));
    if order.windows(2).any(|p| data.lines[p[0]].distance_to_origin() == data.lines[p[1]].distance_to_origin()) {
        return Err(crate::error::invalid("winding resolution needs distinct distances"));
    }
    // all lines on one side of the origin, otherwise the family crosses the flux
    let n0 = data.lines[order[0]].x0();
    if data.lines.iter().any(|l| dot(&l.x0(), &n0) < 0.0) {
        return Err(crate::error::invalid("lines must lie on one side of the origin"));
    }
    let unwrapped: Vec<f64> = match &data.values {
        XRayValues::Real(v) => {
            let phases: Vec<f64> = order.iter().map(|&i| v[i]).collect();
            for (k, pair) in phases.windows(2).enumerate() {
                let jump = pair[1] - pair[0];
                if jump.abs() >= PI {
                    return Err(Error::BranchAmbiguous { index: k + 1, jump });
                }
            }
            phases
        }
        XRayValues::Unimodular(v) => {
            let mut out = Vec::with_capacity(order.len());
            let mut current = v[order[0]].arg();
            out.push(current);
            for (k, pair) in order.windows(2).enumerate() {
                let jump = wrap_phase(v[pair[1]].arg() - v[pair[0]].arg());
                if jump.abs() >= PI * (1.0 - 1e-9) {
                    return Err(Error::BranchAmbiguous { index: k + 1, jump });
                }
                current += jump;
                out.push(current);
            }
            out
        }
    };
    let limit = *unwrapped.last().expect("non-empty") / TAU;
    let m = limit.round();
    if (limit - m).abs() > 0.5 - HALF_INTEGER_GUARD {
        return Err(Error::BranchAmbiguous { index: unwrapped.len() - 1, jump: limit * TAU });
    }
    Ok(m as i64)
}
