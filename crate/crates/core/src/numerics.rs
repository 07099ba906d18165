//! Small numeric helpers shared by the grid and diagnostics code.

/// `i`-th of `n` equally spaced points on `[lo, hi]`.
///
/// The fraction `i / (n - 1)` is formed first so that refining a grid
/// (`2n - 1` points) reproduces every old coordinate bit for bit.
#[inline]
pub fn grid_point(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    debug_assert!(n >= 2 && i < n);
    if i == n - 1 {
        return hi;
    }
    lo + (hi - lo) * (i as f64 / (n - 1) as f64)
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| grid_point(lo, hi, i, n)).collect()
}

/// Pearson correlation coefficient. `None` when either series is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        None
    } else {
        Some(sab / (saa * sbb).sqrt())
    }
}

/// Indices of strict interior local maxima (plateaus count once, at their left edge).
pub fn local_maxima(v: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < v.len() {
        if v[i] > v[i - 1] {
            let mut j = i;
            while j + 1 < v.len() && v[j + 1] == v[i] {
                j += 1;
            }
            if j + 1 < v.len() && v[j + 1] < v[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refined_grid_keeps_old_points() {
        for &(lo, hi, n) in &[
            (-1.3e-7, 2.2e-7, 17usize),
            (1e-9, 1e-6, 1024),
            (0.1, 0.7, 3),
        ] {
            let coarse = linspace(lo, hi, n);
            let fine = linspace(lo, hi, 2 * n - 1);
            for (i, c) in coarse.iter().enumerate() {
                assert_eq!(c.to_bits(), fine[2 * i].to_bits());
            }
        }
    }

    #[test]
    fn pearson_basics() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson(&a, &[2.0, 4.0, 6.0, 8.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&a, &[-1.0, -2.0, -3.0, -4.0]).unwrap() + 1.0).abs() < 1e-15);
        assert!(pearson(&a, &[1.0; 4]).is_none());
    }

    #[test]
    fn maxima() {
        assert_eq!(
            local_maxima(&[0.0, 1.0, 0.0, 2.0, 2.0, 1.0, 3.0]),
            vec![1, 3]
        );
        assert!(local_maxima(&[1.0, 2.0, 3.0]).is_empty());
    }
}
