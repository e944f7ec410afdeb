//! Bessel functions of the first kind by Miller's downward recurrence.
//!
//! The recurrence `J_{k-1}(x) = (2k/x) J_k(x) - J_{k+1}(x)` is stable when
//! run towards lower orders. Starting from an arbitrary seed far above the
//! wanted order and normalizing with `J_0 + 2 Σ J_{2k} = 1` gives every
//! order at once.

use crate::error::{ensure_finite, Error, Result};

pub const MAX_ORDER: u32 = 64;
pub const MAX_ARGUMENT: f64 = 64.0;

const RESCALE_ABOVE: f64 = 1e250;

/// `J_n(x)` for `0 ≤ n ≤ 64`, `0 ≤ x ≤ 64`.
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    Ok(bessel_j_sequence(n, x)?[n as usize])
}

/// `[J_0(x), J_1(x), ..., J_{n_max}(x)]` from a single recurrence.
pub fn bessel_j_sequence(n_max: u32, x: f64) -> Result<Vec<f64>> {
    ensure_finite("Bessel argument", x)?;
    if n_max > MAX_ORDER {
        return Err(Error::invalid(format!(
            "Bessel order {n_max} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    if !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::invalid(format!(
            "Bessel argument {x} outside the supported range [0, {MAX_ARGUMENT}]"
        )));
    }
    let n_max = n_max as usize;
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return Ok(out);
    }

    let mut start = 2 * n_max.max(x.ceil() as usize) + 20;
    if start % 2 == 1 {
        start += 1;
    }
    let mut above = 0.0; // J_{k+1}
    let mut here = 1e-300; // J_k, arbitrary seed
    let mut even_sum = 0.0;
    for k in (1..=start).rev() {
        let below = (2.0 * k as f64 / x) * here - above;
        above = here;
        here = below;
        let order = k - 1;
        if order <= n_max {
            out[order] = here;
        }
        if order % 2 == 0 && order > 0 {
            even_sum += here;
        }
        if here.abs() > RESCALE_ABOVE {
            let s = 1.0 / RESCALE_ABOVE;
            here *= s;
            above *= s;
            even_sum *= s;
            out.iter_mut().for_each(|v| *v *= s);
        }
    }
    let norm = here + 2.0 * even_sum;
    out.iter_mut().for_each(|v| *v /= norm);
    Ok(out)
}
