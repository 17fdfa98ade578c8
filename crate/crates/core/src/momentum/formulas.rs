use super::{ModelConfig, ModelError, MomentumState, PlayerProfile, DEFAULT_R};
use crate::scoring::PlayerId;
use crate::Scalar;

/// Pooled serve-point win rate of a profile.
pub fn historical_prob<T: Scalar>(profile: &PlayerProfile) -> Result<T, ModelError> {
    if profile.serve_attempts == 0 {
        return Err(ModelError::NoHistory(profile.label.clone()));
    }
    Ok(T::of_count(profile.points_won_on_serve) / T::of_count(profile.serve_attempts))
}

/// Probability that `player` wins a point served by `server`, given the
/// server's serve-point win probability.
pub fn scoring_prob_for<T: Scalar>(player: PlayerId, server: PlayerId, p_server: T) -> T {
    if player == server {
        p_server
    } else {
        T::one() - p_server
    }
}

/// Posterior-mean estimate of `player`'s in-match serve win rate under a Beta
/// prior with mean `p_hist` and `config.prior_strength` pseudo-attempts.
///
/// With no prior and no attempts yet the historical rate is returned.
pub fn instant_prob<T: Scalar>(
    state: &MomentumState<T>,
    player: PlayerId,
    p_hist: T,
    config: &ModelConfig<T>,
) -> T {
    let tally = state.tallies[player.index()];
    let won = T::of_count(tally.won);
    let attempts = T::of_count(tally.attempts);
    let m = config.prior_strength;
    let denominator = m + attempts;
    if denominator == T::zero() {
        return p_hist;
    }
    if m == T::zero() {
        return won / attempts;
    }
    (m * p_hist + won) / denominator
}

/// Efficiency of a point with `k` rallies after the serve:
/// `2 - sum_{n=0..=k} r^-n`, summed directly.
pub fn efficiency<T: Scalar>(k: u32, r: T) -> Result<T, ModelError> {
    if !r.is_finite() || r <= T::one() {
        return Err(ModelError::InvalidR(r.to_f64().unwrap_or(f64::NAN)));
    }
    let mut sum = T::zero();
    let mut term = T::one();
    for _ in 0..=k {
        let next = sum + term;
        if next == sum {
            break;
        }
        sum = next;
        term = term / r;
    }
    Ok(T::of(2.0) - sum)
}

/// Mean efficiency over a set of rally counts.
pub fn mean_efficiency<T: Scalar>(rally_counts: &[u32], r: T) -> Result<T, ModelError> {
    if rally_counts.is_empty() {
        return Err(ModelError::EmptyInput);
    }
    let mut total = T::zero();
    for &k in rally_counts {
        total = total + efficiency(k, r)?;
    }
    Ok(total / T::of_count(rally_counts.len() as u64))
}

const FIT_R_MAX: f64 = 1e6;

/// Finds `r` such that the mean efficiency over `rally_counts` equals
/// `target`, by bisection on `(1, 1e6]`.
///
/// Mean efficiency is strictly increasing in `r` once any count is non-zero.
/// When every count is zero the mean is 1 for all `r`; a target of exactly 1
/// then yields [`DEFAULT_R`].
pub fn fit_r<T: Scalar>(rally_counts: &[u32], target: T) -> Result<T, ModelError> {
    if rally_counts.is_empty() {
        return Err(ModelError::EmptyInput);
    }
    if rally_counts.iter().all(|&k| k == 0) {
        return if target == T::one() {
            Ok(T::of(DEFAULT_R))
        } else {
            Err(ModelError::DegenerateInput)
        };
    }

    // At r -> 1+ every term of the sum is 1, so the efficiency is 1 - k.
    let k_sum: u64 = rally_counts.iter().map(|&k| u64::from(k)).sum();
    let low_limit = T::one() - T::of_count(k_sum) / T::of_count(rally_counts.len() as u64);
    let mut hi = T::of(FIT_R_MAX);
    let high_limit = mean_efficiency(rally_counts, hi)?;
    if !(target > low_limit && target <= high_limit) {
        return Err(ModelError::Unachievable {
            target: target.to_f64().unwrap_or(f64::NAN),
            low: low_limit.to_f64().unwrap_or(f64::NAN),
            high: high_limit.to_f64().unwrap_or(f64::NAN),
        });
    }

    let tolerance = T::of(1e-9).max(T::epsilon() * T::of(8.0));
    let mut lo = T::one();
    let mut best = hi;
    let mut best_residual = (high_limit - target).abs();
    for _ in 0..256 {
        let mid = (lo + hi) / T::of(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let value = mean_efficiency(rally_counts, mid)?;
        let residual = (value - target).abs();
        if residual < best_residual {
            best = mid;
            best_residual = residual;
        }
        if residual <= tolerance {
            return Ok(mid);
        }
        if value < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best)
}

/// Blend of historical and in-match probability weighted by match progress.
pub fn long_term_prob<T: Scalar>(
    p_hist: T,
    p_inst: T,
    t_points: u32,
    e_points: T,
    clamp: bool,
) -> Result<T, ModelError> {
    if !e_points.is_finite() || e_points <= T::zero() {
        return Err(ModelError::InvalidEPoints(
            e_points.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let mut w = T::of_count(u64::from(t_points)) / e_points;
    if clamp {
        w = w.max(T::zero()).min(T::one());
    }
    Ok((T::one() - w) * p_hist + w * p_inst)
}

/// Expected length of the match in points: the sum of both players'
/// historical per-match averages.
pub fn expected_match_points<T: Scalar>(
    a: &PlayerProfile,
    b: &PlayerProfile,
) -> Result<T, ModelError> {
    let sum = a.expected_points_per_match + b.expected_points_per_match;
    if !sum.is_finite()
        || sum <= 0.0
        || a.expected_points_per_match < 0.0
        || b.expected_points_per_match < 0.0
    {
        return Err(ModelError::InvalidEPoints(sum));
    }
    Ok(T::of(sum))
}

/// Short-term momentum `p_hist * f(e)`.
pub fn short_term_momentum<T: Scalar>(p_hist: T, e: T, config: &ModelConfig<T>) -> T {
    p_hist * config.stm_transform.apply(e)
}

pub fn tmm<T: Scalar>(p_ltm: T, e_smoothed: T) -> T {
    p_ltm * e_smoothed
}
