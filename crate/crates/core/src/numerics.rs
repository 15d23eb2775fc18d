//! Small numeric helpers shared by the norm and integration code.

/// Pairwise (cascade) summation in a fixed order.
///
/// The recursion splits at `len / 2`, so the result depends only on the
/// slice contents and never on how the values were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if values.len() <= BLOCK {
        return values.iter().fold(0.0, |acc, v| acc + v);
    }
    let (lo, hi) = values.split_at(values.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// `|v|^p` for `v >= 0`, with `0^p = 0`.
pub fn abs_pow(v: f64, p: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else if p == 2.0 {
        v * v
    } else {
        v.powf(p)
    }
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
