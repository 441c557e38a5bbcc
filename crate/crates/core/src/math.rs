//! Shared numerical primitives: binary entropy, dB conversions and a
//! bracketed bisection used by the root and distance finders.

use crate::error::{ensure, ensure_in, Error, Result};

/// Error probability of a background (dark) count. A dark count carries no
/// information about the sent bit, so it is wrong half of the time.
pub const BACKGROUND_ERROR_RATE: f64 = 0.5;

/// Binary Shannon entropy `H2(x)` in bits, with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    ensure_in("x", x, 0.0, 1.0, "a probability in [0, 1]")?;
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Fiber transmittance `10^(-alpha * length / 10)` for attenuation in dB/km
/// and length in km.
pub fn channel_transmittance(alpha_db_per_km: f64, length_km: f64) -> Result<f64> {
    ensure(
        alpha_db_per_km >= 0.0,
        "alpha",
        alpha_db_per_km,
        "a non-negative attenuation in dB/km",
    )?;
    ensure(
        length_km >= 0.0,
        "length",
        length_km,
        "a non-negative length in km",
    )?;
    Ok(10f64.powf(-alpha_db_per_km * length_km / 10.0))
}

/// Converts an insertion loss in dB to a transmittance multiplier.
pub fn db_to_transmittance(loss_db: f64) -> Result<f64> {
    ensure(loss_db >= 0.0, "loss", loss_db, "a non-negative loss in dB")?;
    Ok(10f64.powf(-loss_db / 10.0))
}

/// Outcome of [`bisect`]: the final bracket, oriented so that `f(positive) > 0`
/// and `f(non_positive) <= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub positive: f64,
    pub non_positive: f64,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.positive + self.non_positive)
    }

    pub fn width(&self) -> f64 {
        (self.positive - self.non_positive).abs()
    }
}

/// Bisection on a sign change. `f(positive)` must be `> 0` and
/// `f(non_positive)` must be `<= 0`; the bracket is halved until its width
/// drops to `tol`.
pub fn bisect<F>(mut f: F, positive: f64, non_positive: f64, tol: f64) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    let fp = f(positive)?;
    let fn_ = f(non_positive)?;
    if !(fp > 0.0 && fn_ <= 0.0) {
        return Err(Error::NoRoot(format!(
            "no sign change between {positive} (f = {fp}) and {non_positive} (f = {fn_})"
        )));
    }
    let mut b = Bracket {
        positive,
        non_positive,
    };
    // 200 halvings exhaust any f64 interval
    for _ in 0..200 {
        if b.width() <= tol {
            break;
        }
        let mid = b.midpoint();
        if mid == b.positive || mid == b.non_positive {
            break;
        }
        if f(mid)? > 0.0 {
            b.positive = mid;
        } else {
            b.non_positive = mid;
        }
    }
    Ok(b)
}
