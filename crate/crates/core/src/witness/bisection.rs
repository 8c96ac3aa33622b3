use super::WitnessError;

/// Smallest `p ∈ [lo, hi]` (to absolute width `tol`) for which a monotone
/// predicate holds. The predicate must hold at `hi`.
pub fn minimal_feasible<F>(mut lo: f64, mut hi: f64, tol: f64, feasible: F) -> Result<f64, WitnessError>
where
    F: Fn(f64) -> bool,
{
    if !feasible(hi) {
        return Err(WitnessError::BracketFailure { p: hi });
    }
    if feasible(lo) {
        return Ok(lo);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
