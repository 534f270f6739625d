//! Small shared numeric helpers: compensated summation order and multi-index
//! combinatorics.

/// Pairwise (cascade) summation. Splitting recursively keeps the worst-case
/// rounding error growth at O(log n) instead of O(n) for a left-to-right loop,
/// while staying fully deterministic for a given input order.
pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        acc
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// Visits every integer vector in the box `lo[i] ..= hi[i]`, last axis fastest,
/// reusing one buffer. Does nothing if the box is empty.
pub(crate) fn for_each_lattice(lo: &[i64], hi: &[i64], mut visit: impl FnMut(&[i64])) {
    debug_assert_eq!(lo.len(), hi.len());
    if lo.is_empty() || lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut cur: Vec<i64> = lo.to_vec();
    'next: loop {
        visit(&cur);
        for axis in (0..cur.len()).rev() {
            if cur[axis] < hi[axis] {
                cur[axis] += 1;
                for later in cur[axis + 1..].iter_mut().zip(&lo[axis + 1..]) {
                    *later.0 = *later.1;
                }
                continue 'next;
            }
        }
        return;
    }
}

/// Sum over the integer box implied by `lo` and the per-axis weight tables:
///
/// ```text
/// sum over index vectors j of  prod_a weights[a][j_a] * coeff(k),
/// k_a = lo[a] + j_a
/// ```
///
/// evaluated as a nested per-axis sum. Each axis accumulates its terms in
/// symmetric end pairs, first + last, then second + second-to-last, …, with
/// the middle term added after the pairs. Because IEEE addition is
/// commutative, reversing the order of any axis's terms gives a bit-identical
/// result, and the rounding error grows with the per-axis window length (tens
/// of terms) rather than with the full box cardinality.
pub(crate) fn tensor_window_sum(
    weights: &[Vec<f64>],
    lo: &[i64],
    coeff: &mut dyn FnMut(&[i64]) -> f64,
) -> f64 {
    debug_assert_eq!(weights.len(), lo.len());
    debug_assert!(!weights.is_empty());
    let mut k = vec![0i64; lo.len()];
    tensor_level(weights, lo, coeff, &mut k, 0)
}

fn tensor_level(
    weights: &[Vec<f64>],
    lo: &[i64],
    coeff: &mut dyn FnMut(&[i64]) -> f64,
    k: &mut Vec<i64>,
    axis: usize,
) -> f64 {
    let len = weights[axis].len();
    debug_assert!(len > 0, "empty weight table on axis {axis}");
    let mut term = |j: usize, k: &mut Vec<i64>| -> f64 {
        k[axis] = lo[axis] + j as i64;
        let inner = if axis + 1 == weights.len() {
            coeff(k)
        } else {
            tensor_level(weights, lo, coeff, k, axis + 1)
        };
        weights[axis][j] * inner
    };
    let mut acc = 0.0;
    let mut i = 0;
    let mut j = len - 1;
    while i < j {
        acc += term(i, k) + term(j, k);
        i += 1;
        j -= 1;
    }
    if i == j {
        acc += term(i, k);
    }
    acc
}

/// All multi-indices over `dims` axes with total order exactly `order`,
/// in lexicographic order.
pub(crate) fn compositions(dims: usize, order: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; dims];
    fill(&mut out, &mut cur, 0, order);
    out
}

fn fill(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, axis: usize, remaining: usize) {
    if axis + 1 == cur.len() {
        cur[axis] = remaining;
        out.push(cur.clone());
        return;
    }
    for take in (0..=remaining).rev() {
        cur[axis] = take;
        fill(out, cur, axis + 1, remaining - take);
    }
}

/// alpha! = prod_i alpha_i! as a float; exact for the small orders used here.
pub(crate) fn multi_factorial(alpha: &[usize]) -> f64 {
    alpha
        .iter()
        .map(|&a| (1..=a).map(|k| k as f64).product::<f64>())
        .product()
}
