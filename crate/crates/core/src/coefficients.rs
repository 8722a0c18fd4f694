//! Coefficient sequences of the pentagonal-type recurrences.
//!
//! Three sequences appear throughout: the Euler coefficients `e`, their prefix
//! sums `f`, and the coefficients `c` of `-prod_{j>=2} (1 - x^j)`. Each one is
//! available from at least two independent routes so they can be cross-checked.

use num_integer::Roots;
use serde::Serialize;

use crate::error::{Error, Result};

/// Which sequence a [`CoeffSeq`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffKind {
    /// Euler coefficients.
    E,
    /// Prefix sums of the Euler coefficients.
    F,
    /// Coefficients of `-prod_{j>=2}(1 - x^j)`.
    C,
    /// Coefficients of `prod_{j>=1}(1 - x^j)`; equal to `-e`.
    EulerProduct,
}

/// Exact integer sequence indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoeffSeq {
    pub kind: CoeffKind,
    pub values: Vec<i64>,
}

impl CoeffSeq {
    pub fn new(kind: CoeffKind, values: Vec<i64>) -> Self {
        CoeffSeq { kind, values }
    }

    pub fn get(&self, n: usize) -> Option<i64> {
        self.values.get(n).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when every value lies in `{-1, 0, 1}`.
    pub fn is_unit_valued(&self) -> bool {
        self.values.iter().all(|v| (-1..=1).contains(v))
    }
}

impl std::ops::Index<usize> for CoeffSeq {
    type Output = i64;

    fn index(&self, n: usize) -> &i64 {
        &self.values[n]
    }
}

/// Signed index `k` with `n = (3k^2 - k) / 2`.
///
/// Positive `k` comes from the `(3k^2 - k)/2` branch, negative `k` from
/// `(3k^2 + k)/2`. Only `|k|` matters for signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PentagonalIndex(pub i64);

impl PentagonalIndex {
    pub fn k(self) -> i64 {
        self.0
    }

    /// The pentagonal number this index names.
    pub fn value(self) -> u64 {
        let k = self.0;
        ((3 * k * k - k) / 2) as u64
    }
}

/// Classifies `n` as a generalized pentagonal number.
pub fn pentagonal_index(n: u64) -> Option<PentagonalIndex> {
    let d = 1 + 24 * n;
    let s = d.sqrt();
    if s * s != d {
        return None;
    }
    // s = 6k - 1 on the (3k^2-k)/2 branch, s = 6k + 1 on the (3k^2+k)/2 branch.
    match s % 6 {
        5 => Some(PentagonalIndex(((s + 1) / 6) as i64)),
        1 => Some(PentagonalIndex(-(((s - 1) / 6) as i64))),
        _ => None,
    }
}

/// Generalized pentagonal numbers `1, 2, 5, 7, 12, ...` up to `limit`, paired
/// with the sign `(-1)^(k+1)` they carry.
pub fn signed_pentagonals(limit: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    let mut k: u64 = 1;
    loop {
        let lo = k * (3 * k - 1) / 2;
        if lo > limit {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out.push((lo, sign));
        let hi = k * (3 * k + 1) / 2;
        if hi <= limit {
            out.push((hi, sign));
        }
        k += 1;
    }
    out
}

/// Euler coefficient `e_n`: `(-1)^(|k|+1)` at pentagonal `n`, zero elsewhere.
pub fn euler_e(n: u64) -> i64 {
    match pentagonal_index(n) {
        Some(PentagonalIndex(k)) if k.unsigned_abs() % 2 == 1 => 1,
        Some(_) => -1,
        None => 0,
    }
}

/// `e_0 ..= e_upto` from the closed form.
pub fn euler_seq(upto: usize) -> CoeffSeq {
    CoeffSeq::new(CoeffKind::E, (0..=upto as u64).map(euler_e).collect())
}

/// `f_n = sum_{0 <= k <= n} e_k` for `0 <= n <= upto`.
pub fn integrated_f(upto: usize) -> CoeffSeq {
    let values = (0..=upto as u64)
        .scan(0i64, |acc, n| {
            *acc += euler_e(n);
            Some(*acc)
        })
        .collect();
    CoeffSeq::new(CoeffKind::F, values)
}

/// Sum of the positive divisors of `k`, by trial division.
pub fn sigma(k: u64) -> u64 {
    assert!(k >= 1, "sigma is defined for positive integers");
    let mut total = 0;
    let mut d = 1;
    while d * d <= k {
        if k.is_multiple_of(d) {
            total += d;
            if d * d != k {
                total += k / d;
            }
        }
        d += 1;
    }
    total
}

/// `sigma(0..=upto)` by a divisor sieve; index 0 holds 0.
pub fn sigma_table(upto: usize) -> Vec<u64> {
    let mut table = vec![0u64; upto + 1];
    for d in 1..=upto {
        for m in (d..=upto).step_by(d) {
            table[m] += d as u64;
        }
    }
    table
}

/// Dense truncated power series over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<i64>,
}

impl TruncatedSeries {
    /// The constant series `value`, truncated to degree `degree`.
    pub fn constant(value: i64, degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[0] = value;
        TruncatedSeries { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Multiplies in place by `1 - x^j`.
    pub fn mul_one_minus_x_pow(&mut self, j: usize) {
        if j == 0 {
            self.coeffs.iter_mut().for_each(|c| *c = 0);
            return;
        }
        for n in (j..self.coeffs.len()).rev() {
            self.coeffs[n] -= self.coeffs[n - j];
        }
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }
}

/// Coefficients of `-prod_{2 <= j <= upto}(1 - x^j)` up to degree `upto`.
pub fn c_from_product(upto: usize) -> CoeffSeq {
    let mut s = TruncatedSeries::constant(-1, upto);
    for j in 2..=upto {
        s.mul_one_minus_x_pow(j);
    }
    CoeffSeq::new(CoeffKind::C, s.into_coeffs())
}

/// Coefficients of `prod_{1 <= j <= upto}(1 - x^j)` up to degree `upto`.
pub fn euler_product(upto: usize) -> CoeffSeq {
    let mut s = TruncatedSeries::constant(1, upto);
    for j in 1..=upto {
        s.mul_one_minus_x_pow(j);
    }
    CoeffSeq::new(CoeffKind::EulerProduct, s.into_coeffs())
}

fn exact_div(context: &'static str, numerator: i64, n: usize) -> Result<i64> {
    if numerator % n as i64 != 0 {
        return Err(Error::NonIntegralDivision {
            context,
            numerator: numerator.to_string(),
            denominator: n as u64,
        });
    }
    Ok(numerator / n as i64)
}

/// `c_n = -(1/n) sum_{0 <= i <= n-2} (sigma(n-i) - 1) c_i` with `c_0 = -1`.
pub fn c_from_recurrence(upto: usize) -> Result<CoeffSeq> {
    let sig = sigma_table(upto);
    let mut c = vec![-1i64];
    for n in 1..=upto {
        let sum: i64 = (0..n.saturating_sub(1))
            .map(|i| (sig[n - i] as i64 - 1) * c[i])
            .sum();
        c.push(-exact_div("c recurrence", sum, n)?);
    }
    Ok(CoeffSeq::new(CoeffKind::C, c))
}

/// `e_n = -(1/n) sum_{0 <= i <= n-1} sigma(n-i) e_i` with `e_0 = -1`.
pub fn e_from_recurrence(upto: usize) -> Result<CoeffSeq> {
    let sig = sigma_table(upto);
    let mut e = vec![-1i64];
    for n in 1..=upto {
        let sum: i64 = (0..n).map(|i| sig[n - i] as i64 * e[i]).sum();
        e.push(-exact_div("e recurrence", sum, n)?);
    }
    Ok(CoeffSeq::new(CoeffKind::E, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::for_each_strict_partition;

    #[test]
    fn pentagonal_indices() {
        assert_eq!(pentagonal_index(0), Some(PentagonalIndex(0)));
        assert_eq!(pentagonal_index(1), Some(PentagonalIndex(1)));
        assert_eq!(pentagonal_index(2), Some(PentagonalIndex(-1)));
        assert_eq!(pentagonal_index(5), Some(PentagonalIndex(2)));
        assert_eq!(pentagonal_index(7), Some(PentagonalIndex(-2)));
        assert_eq!(pentagonal_index(6), None);
        for n in 0..2000 {
            if let Some(k) = pentagonal_index(n) {
                assert_eq!(k.value(), n);
            }
        }
    }

    #[test]
    fn pentagonal_scan_matches_generator() {
        let listed: Vec<u64> = signed_pentagonals(500)
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        let scanned: Vec<u64> = (1..=500)
            .filter(|&n| pentagonal_index(n).is_some())
            .collect();
        assert_eq!(listed, scanned);
        assert_eq!(&listed[..6], &[1, 2, 5, 7, 12, 15]);
    }

    #[test]
    fn euler_values() {
        let got: Vec<i64> = (0..=7).map(euler_e).collect();
        assert_eq!(got, vec![-1, 1, 1, 0, 0, -1, 0, -1]);
        for (p, s) in signed_pentagonals(1000) {
            assert_eq!(euler_e(p), s);
        }
    }

    #[test]
    fn integrated_values() {
        let f = integrated_f(7);
        assert_eq!(f.values, vec![-1, 0, 1, 1, 1, 0, 0, -1]);
    }

    #[test]
    fn f_equals_e_exactly_on_the_pentagonal_intervals() {
        let f = integrated_f(600);
        for n in 0..=600u64 {
            let in_interval =
                n == 0 || (1..=20u64).any(|m| (3 * m * m - m) / 2 < n && n <= (3 * m * m + m) / 2);
            assert_eq!(f[n as usize] == euler_e(n), in_interval, "n={n}");
        }
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(1), 1);
        assert_eq!(sigma(6), 12);
        assert_eq!(sigma(12), 28);
        let t = sigma_table(500);
        for (k, &v) in t.iter().enumerate().skip(1) {
            assert_eq!(v, sigma(k as u64));
        }
    }

    #[test]
    fn product_values() {
        let c = c_from_product(5);
        assert_eq!(c.values, vec![-1, 0, 1, 1, 1, 0]);
        let ep = euler_product(5);
        assert_eq!(ep.values, vec![1, -1, -1, 0, 0, 1]);
    }

    #[test]
    fn c_matches_signed_strict_partition_count() {
        // c_n = #odd - #even strict partitions of n with parts >= 2
        let c = c_from_product(60);
        for n in 2..=60u64 {
            let mut signed = 0i64;
            for_each_strict_partition(n, 2, &mut |p| {
                signed += if p.len() % 2 == 1 { 1 } else { -1 };
            });
            assert_eq!(c[n as usize], signed, "n={n}");
        }
    }

    #[test]
    fn recurrence_basis_values() {
        let c = c_from_recurrence(3).unwrap();
        assert_eq!(c.values, vec![-1, 0, 1, 1]);
        let e = e_from_recurrence(3).unwrap();
        assert_eq!(e.values, vec![-1, 1, 1, 0]);
    }

    #[test]
    fn four_routes_agree() {
        let n = 200;
        let f = integrated_f(n);
        let cp = c_from_product(n);
        let cr = c_from_recurrence(n).unwrap();
        let er = e_from_recurrence(n).unwrap();
        let ep = euler_product(n);
        assert_eq!(cp.values, cr.values);
        assert_eq!(f.values, cp.values);
        for i in 0..=n {
            assert_eq!(er[i], euler_e(i as u64));
            assert_eq!(ep[i], -euler_e(i as u64));
        }
        for i in 1..=n {
            assert_eq!(cp[i] - cp[i - 1], euler_e(i as u64));
        }
        assert!(f.is_unit_valued() && cp.is_unit_valued() && er.is_unit_valued());
    }

    #[test]
    fn truncation_ignores_high_factors() {
        let mut s = TruncatedSeries::constant(1, 4);
        s.mul_one_minus_x_pow(9);
        assert_eq!(s.into_coeffs(), vec![1, 0, 0, 0, 0]);
    }
}
