//! Exact rational combinatorics of the L_p Steiner expansion.
//!
//! Everything here is computed over arbitrary precision rationals so that the
//! identity between the composition double sum `C(n, p, k)` and the single
//! binomial `binom(n(n-p)/(n+p), k)` can be checked with zero tolerance.
//!
//! The weighted compositions `i(m) = (i_1, ..., i_{n-1})` with
//! `i_1 + 2 i_2 + ... + (n-1) i_{n-1} = m` index the curvature monomials
//! `H_1^{i_1} ... H_{n-1}^{i_{n-1}}` appearing in the coefficient integrals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

/// Exact fraction used for every combinatorial quantity.
pub type Rational = BigRational;

/// `num / den` as a reduced rational. Panics if `den == 0`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn integer(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"a/b"`, `"a"` or a finite decimal such as `"-0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Serializes a rational as `"num/den"` (integers as `"num/1"`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 only fails on overflow of both parts; fall back to a
        // scaled division.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// A weighted composition `i(m)`: non-negative parts with `sum_j j * i_j = m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WeightedComposition {
    /// `(i_1, ..., i_parts)`, part `j` carrying weight `j`.
    pub parts: Vec<u32>,
    /// The weight `m`.
    pub weight: u32,
}

impl WeightedComposition {
    /// Number of factors `i_1 + ... + i_parts`.
    pub fn order(&self) -> u32 {
        self.parts.iter().sum()
    }
}

impl fmt::Display for WeightedComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Sign of an exact quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignClass {
    Positive,
    Negative,
    Zero,
}

impl SignClass {
    pub fn of(r: &Rational) -> Self {
        if r.is_zero() {
            SignClass::Zero
        } else if r.is_positive() {
            SignClass::Positive
        } else {
            SignClass::Negative
        }
    }

    fn alternating(exponent: i64) -> Self {
        if exponent.rem_euclid(2) == 0 {
            SignClass::Positive
        } else {
            SignClass::Negative
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignClass::Positive => "positive",
            SignClass::Negative => "negative",
            SignClass::Zero => "zero",
        })
    }
}

/// Generalized binomial coefficient `binom(alpha, k)`.
///
/// `1` for `k = 0`, `0` for `k < 0` or `alpha = 0`, otherwise the falling
/// factorial `alpha (alpha - 1) ... (alpha - k + 1) / k!`.
pub fn gen_binom(alpha: &Rational, k: i64) -> Rational {
    if k == 0 {
        return Rational::one();
    }
    if k < 0 || alpha.is_zero() {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for j in 0..k {
        acc *= alpha - integer(j);
        acc /= integer(j + 1);
    }
    acc
}

/// Floating-point generalized binomial, same conventions as [`gen_binom`].
pub fn gen_binom_f64(alpha: f64, k: i64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k < 0 || alpha == 0.0 {
        return 0.0;
    }
    let mut acc = 1.0;
    for j in 0..k {
        acc *= (alpha - j as f64) / (j + 1) as f64;
    }
    acc
}

/// Ordinary binomial `binom(n, k)` for non-negative integers.
pub fn binom_int(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= BigInt::from(n - j);
        acc /= BigInt::from(j + 1);
    }
    acc
}

/// Multinomial `q! / (i_1! ... i_l!)` with `q = sum i_j`; zero if any part is negative.
pub fn multinomial(parts: &[i64]) -> Rational {
    if parts.iter().any(|&i| i < 0) {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    let mut total: u64 = 0;
    for &i in parts {
        total += i as u64;
        acc *= binom_int(total, i as u64);
    }
    Rational::from_integer(acc)
}

/// Iterator over all weighted compositions of `m` into `parts` parts.
///
/// Order is lexicographically descending in `(i_1, ..., i_parts)`; e.g. for
/// `m = 2, parts = 2` it yields `(2,0)` then `(0,1)`.
#[derive(Debug, Clone)]
pub struct WeightedCompositions {
    m: u32,
    current: Vec<u32>,
    // feasible[w][r]: weight r is reachable using part weights w..=parts.
    feasible: Vec<Vec<bool>>,
    started: bool,
    done: bool,
}

/// Enumerates the weighted compositions `sum_j j * i_j = m` with `parts` parts.
pub fn weighted_compositions(m: u32, parts: usize) -> WeightedCompositions {
    assert!(parts >= 1, "compositions need at least one part");
    let mm = m as usize;
    let mut feasible = vec![vec![false; mm + 1]; parts + 2];
    feasible[parts + 1][0] = true;
    for w in (1..=parts).rev() {
        for r in 0..=mm {
            feasible[w][r] = (0..=r / w).any(|x| feasible[w + 1][r - x * w]);
        }
    }
    WeightedCompositions {
        m,
        current: vec![0; parts],
        feasible,
        started: false,
        done: false,
    }
}

impl WeightedCompositions {
    /// Greedy lexicographically largest completion of positions `from..` with weight `rem`.
    fn fill(&mut self, from: usize, mut rem: usize) {
        let parts = self.current.len();
        for pos in from..parts {
            let w = pos + 1;
            let mut x = rem / w;
            while !self.feasible[w + 1][rem - x * w] {
                x -= 1;
            }
            self.current[pos] = x as u32;
            rem -= x * w;
        }
        debug_assert_eq!(rem, 0);
    }
}

impl Iterator for WeightedCompositions {
    type Item = WeightedComposition;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill(0, self.m as usize);
        } else {
            let parts = self.current.len();
            let mut advanced = false;
            'outer: for pos in (0..parts.saturating_sub(1)).rev() {
                let tail: usize = (pos..parts)
                    .map(|i| (i + 1) * self.current[i] as usize)
                    .sum();
                let w = pos + 1;
                for d in 1..=self.current[pos] as usize {
                    let x = self.current[pos] as usize - d;
                    let rem = tail - x * w;
                    if self.feasible[w + 1][rem] {
                        self.current[pos] = x as u32;
                        self.fill(pos + 1, rem);
                        advanced = true;
                        break 'outer;
                    }
                }
            }
            if !advanced {
                self.done = true;
                return None;
            }
        }
        Some(WeightedComposition {
            parts: self.current.clone(),
            weight: self.m,
        })
    }
}

fn check_pole(n: u32, p: &Rational) -> Result<()> {
    if *p == -integer(n as i64) {
        return Err(Error::PoleAtMinusN { n });
    }
    Ok(())
}

/// `n / (n + p)`.
pub fn beta(n: u32, p: &Rational) -> Result<Rational> {
    check_pole(n, p)?;
    let n = integer(n as i64);
    Ok(&n / (&n + p))
}

/// `n (1 - p) / (n + p)`, the exponent carried by the support function.
pub fn gamma(n: u32, p: &Rational) -> Result<Rational> {
    check_pole(n, p)?;
    let nn = integer(n as i64);
    Ok(&nn * (Rational::one() - p) / (&nn + p))
}

/// `n (n - p) / (n + p)`, the homogeneity degree of `as_p`.
pub fn alpha(n: u32, p: &Rational) -> Result<Rational> {
    check_pole(n, p)?;
    let nn = integer(n as i64);
    Ok(&nn * (&nn - p) / (&nn + p))
}

/// `c(n, p, i(m)) = binom(n/(n+p), |i|) * multinomial(i)`.
pub fn c_npi(n: u32, p: &Rational, comp: &WeightedComposition) -> Result<Rational> {
    let b = beta(n, p)?;
    let parts: Vec<i64> = comp.parts.iter().map(|&i| i as i64).collect();
    Ok(gen_binom(&b, comp.order() as i64) * multinomial(&parts))
}

/// `prod_j binom(n-1, j)^{i_j}`.
pub fn esf_weight(n: u32, comp: &WeightedComposition) -> Rational {
    let mut acc = BigInt::one();
    for (idx, &i) in comp.parts.iter().enumerate() {
        let b = binom_int((n - 1) as u64, idx as u64 + 1);
        acc *= num_traits::pow(b, i as usize);
    }
    Rational::from_integer(acc)
}

/// `F_m(p) = sum_{i(m)} c(n, p, i(m)) prod_j binom(n-1, j)^{i_j}`.
pub fn f_m(n: u32, p: &Rational, m: u32) -> Result<Rational> {
    check_pole(n, p)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension n = {n} < 2")));
    }
    let mut acc = Rational::zero();
    for comp in weighted_compositions(m, (n - 1) as usize) {
        acc += c_npi(n, p, &comp)? * esf_weight(n, &comp);
    }
    Ok(acc)
}

/// Closed forms of `F_1`, `F_2`, `F_3`. Returns `None` for other `m`.
pub fn f_m_closed(n: u32, p: &Rational, m: u32) -> Result<Option<Rational>> {
    let b = beta(n, p)?;
    let a = integer(n as i64 - 1);
    let one = Rational::one();
    Ok(match m {
        1 => Some(&a * &b),
        2 => Some(&a / integer(2) * &b * (&a * &b - &one)),
        3 => Some(
            &a / integer(6) * &b * (&a * &a * &b * &b - integer(3) * &a * &b + integer(2)),
        ),
        _ => None,
    })
}

/// `C(n, p, k)` by its defining double sum over `m` and weighted compositions.
pub fn c_npk(n: u32, p: &Rational, k: u32) -> Result<Rational> {
    let g = gamma(n, p)?;
    let mut acc = Rational::zero();
    for m in 0..=k {
        acc += gen_binom(&g, (k - m) as i64) * f_m(n, p, m)?;
    }
    Ok(acc)
}

/// `C(n, p, k)` in closed form, `binom(n(n-p)/(n+p), k)`.
pub fn c_npk_closed(n: u32, p: &Rational, k: u32) -> Result<Rational> {
    Ok(gen_binom(&alpha(n, p)?, k as i64))
}

/// Predicts the sign of `C(n, p, k)` from the case analysis in `p`, without
/// evaluating the coefficient.
///
/// With `alpha = n(n-p)/(n+p)` and `theta = n(n-1)/(n+1)`:
/// * `p < -n` or `p > n`: `(-1)^k C > 0`;
/// * `p = n`: `C = 0` for `k >= 1`;
/// * `alpha` a positive integer `l` (that is `p = n(n-l)/(n+l)`): positive for
///   `k <= l`, zero beyond;
/// * `-n < p < theta`: positive up to `floor(n - 2p + 2p^2/(n+p)) + 1`,
///   then alternating starting with a negative term;
/// * `theta <= p < n`: `(-1)^{k-1} C > 0`.
///
/// `k = 0` is always positive.
pub fn sign_prediction(n: u32, p: &Rational, k: u32) -> Result<SignClass> {
    check_pole(n, p)?;
    if k == 0 {
        return Ok(SignClass::Positive);
    }
    let k = k as i64;
    let nn = integer(n as i64);
    if *p < -&nn || *p > nn {
        return Ok(SignClass::alternating(k));
    }
    if *p == nn {
        return Ok(SignClass::Zero);
    }
    let a = alpha(n, p)?;
    if a.is_integer() {
        let l = a.to_integer().to_i64().unwrap_or(i64::MAX);
        return Ok(if k <= l { SignClass::Positive } else { SignClass::Zero });
    }
    let theta = &nn * (&nn - Rational::one()) / (&nn + Rational::one());
    if *p < theta {
        // n - 2p + 2p^2/(n+p)
        let two = integer(2);
        let expr = &nn - &two * p + &two * p * p / (&nn + p);
        let threshold = expr.floor().to_integer().to_i64().unwrap_or(i64::MAX) + 1;
        if k <= threshold {
            Ok(SignClass::Positive)
        } else {
            Ok(SignClass::alternating(k - threshold))
        }
    } else {
        Ok(SignClass::alternating(k - 1))
    }
}

/// Tests whether `n / (n + p)` is a positive integer `l`, the case in which the
/// L_p Steiner series is a polynomial of degree `n (2l - 1)`.
pub fn finite_sum_index(n: u32, p: &Rational) -> Option<u32> {
    let b = beta(n, p).ok()?;
    if b.is_integer() && b.is_positive() {
        b.to_integer().to_u32()
    } else {
        None
    }
}

/// Largest `k` such that `binom(alpha, k)` may be non-zero given integrality of alpha;
/// `None` if unbounded. Used by reporting helpers.
pub fn binom_support_bound(alpha: &Rational) -> Option<u64> {
    if alpha.is_integer() && !alpha.is_negative() {
        alpha.to_integer().to_u64()
    } else {
        None
    }
}

/// Greatest common divisor helper exposed for invariant tests.
pub fn is_reduced(r: &Rational) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: every tuple with i_j <= m, filtered by weight, in
    /// descending lexicographic order.
    fn brute_force_compositions(m: u32, parts: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; parts];
        loop {
            let w: u32 = cur.iter().enumerate().map(|(j, &i)| (j as u32 + 1) * i).sum();
            if w == m {
                out.push(cur.clone());
            }
            // odometer increment
            let mut pos = parts;
            loop {
                if pos == 0 {
                    out.sort();
                    out.reverse();
                    return out;
                }
                pos -= 1;
                if cur[pos] < m {
                    cur[pos] += 1;
                    break;
                }
                cur[pos] = 0;
            }
        }
    }

    fn hand_binom(alpha: &Rational, k: i64) -> Rational {
        // falling factorial written out independently of gen_binom
        let num = (0..k).fold(Rational::one(), |acc, j| acc * (alpha - integer(j)));
        let den = (1..=k).fold(Rational::one(), |acc, j| acc * integer(j));
        num / den
    }

    #[test]
    fn gen_binom_examples() {
        assert_eq!(gen_binom(&rational(5, 3), 0), integer(1));
        assert_eq!(gen_binom(&rational(5, 3), -2), integer(0));
        assert_eq!(gen_binom(&rational(2, 3), 2), rational(-1, 9));
        assert_eq!(gen_binom(&integer(0), 3), integer(0));
        assert_eq!(gen_binom(&integer(0), 0), integer(1));
        assert_eq!(gen_binom(&integer(5), 7), integer(0));
        assert_eq!(gen_binom(&integer(-2), 3), integer(-4));
    }

    #[test]
    fn gen_binom_f64_matches_exact() {
        for k in 0..10 {
            let exact = to_f64(&gen_binom(&rational(-7, 4), k));
            let approx = gen_binom_f64(-1.75, k);
            assert!((exact - approx).abs() <= 1e-14 * exact.abs().max(1.0));
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(&[2, 1]), integer(3));
        assert_eq!(multinomial(&[0, 0, 0]), integer(1));
        assert_eq!(multinomial(&[-1, 2]), integer(0));
        assert_eq!(multinomial(&[1, 1, 2]), integer(12));
    }

    #[test]
    fn composition_examples() {
        let list = |m, parts| -> Vec<Vec<u32>> {
            weighted_compositions(m, parts).map(|c| c.parts).collect()
        };
        assert_eq!(list(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(list(2, 2), vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(list(3, 2), vec![vec![3, 0], vec![1, 1]]);
        assert_eq!(list(1, 1), vec![vec![1]]);
        assert_eq!(list(4, 3), brute_force_compositions(4, 3));
    }

    #[test]
    fn compositions_match_brute_force() {
        for parts in 1..=5 {
            for m in 0..=9 {
                let fast: Vec<Vec<u32>> =
                    weighted_compositions(m, parts).map(|c| c.parts).collect();
                assert_eq!(fast, brute_force_compositions(m, parts), "m={m} parts={parts}");
                for c in weighted_compositions(m, parts) {
                    let w: u32 = c.parts.iter().enumerate().map(|(j, &i)| (j as u32 + 1) * i).sum();
                    assert_eq!(w, m);
                }
            }
        }
    }

    #[test]
    fn c_npi_examples() {
        let comp = |parts: Vec<u32>| {
            let weight = parts.iter().enumerate().map(|(j, &i)| (j as u32 + 1) * i).sum();
            WeightedComposition { parts, weight }
        };
        assert_eq!(c_npi(2, &integer(1), &comp(vec![1])).unwrap(), rational(2, 3));
        assert_eq!(c_npi(4, &rational(3, 2), &comp(vec![0, 0, 0])).unwrap(), integer(1));
        // binom(1, 2) * binom(2; 1, 1) = 0
        assert_eq!(c_npi(3, &integer(0), &comp(vec![1, 1])).unwrap(), integer(0));
        assert!(matches!(
            c_npi(3, &integer(-3), &comp(vec![1, 0])),
            Err(Error::PoleAtMinusN { n: 3 })
        ));
    }

    #[test]
    fn c_npk_examples() {
        for n in 2..=5u32 {
            let p = integer(n as i64);
            assert_eq!(c_npk(n, &p, 0).unwrap(), integer(1));
            for k in 1..=6 {
                assert_eq!(c_npk(n, &p, k).unwrap(), integer(0));
            }
            assert_eq!(c_npk(n, &rational(1, 3), 0).unwrap(), integer(1));
        }
        assert_eq!(c_npk(2, &integer(1), 2).unwrap(), rational(-1, 9));
        assert_eq!(c_npk(2, &integer(1), 2).unwrap(), gen_binom(&rational(2, 3), 2));
        assert!(c_npk(2, &integer(-2), 1).is_err());
    }

    #[test]
    fn c_npk_closed_examples() {
        for k in 0..8 {
            assert_eq!(
                c_npk_closed(2, &integer(1), k).unwrap(),
                gen_binom(&rational(2, 3), k as i64)
            );
        }
        for n in 2..=5u32 {
            for k in 0..=n + 3 {
                let v = c_npk_closed(n, &integer(0), k).unwrap();
                if k > n {
                    assert_eq!(v, integer(0));
                } else {
                    assert_eq!(v, Rational::from_integer(binom_int(n as u64, k as u64)));
                }
            }
        }
        assert_eq!(c_npk_closed(3, &integer(-6), 1).unwrap(), integer(-9));
        assert!(c_npk_closed(3, &integer(-3), 1).is_err());
    }

    #[test]
    fn f_m_examples() {
        for n in 2..=6u32 {
            for p in [integer(0), integer(1), rational(-7, 2), rational(5, 2)] {
                if p == -integer(n as i64) {
                    continue;
                }
                let b = beta(n, &p).unwrap();
                assert_eq!(f_m(n, &p, 0).unwrap(), integer(1));
                assert_eq!(f_m(n, &p, 1).unwrap(), integer(n as i64 - 1) * &b);
            }
        }
        // hand sum for n = 3, p = 1, m = 2: (2,0) -> binom(3/4,2)*4 = -3/8, (0,1) -> 3/4
        let by_hand = hand_binom(&rational(3, 4), 2) * integer(4) + rational(3, 4);
        assert_eq!(by_hand, rational(3, 8));
        assert_eq!(f_m(3, &integer(1), 2).unwrap(), by_hand);
        assert_eq!(f_m_closed(3, &integer(1), 2).unwrap().unwrap(), by_hand);
        assert_eq!(f_m_closed(3, &integer(1), 4).unwrap(), None);
    }

    #[test]
    fn sign_prediction_examples() {
        assert_eq!(sign_prediction(3, &integer(1), 2).unwrap(), SignClass::Positive);
        assert_eq!(sign_prediction(4, &integer(4), 3).unwrap(), SignClass::Zero);
        assert_eq!(sign_prediction(2, &integer(-5), 3).unwrap(), SignClass::Negative);
        assert_eq!(sign_prediction(2, &integer(-5), 2).unwrap(), SignClass::Positive);
        // p = n(n-l)/(n+l) with n = 3, l = 3 -> p = 0, alpha = 3
        assert_eq!(sign_prediction(3, &integer(0), 3).unwrap(), SignClass::Positive);
        assert_eq!(sign_prediction(3, &integer(0), 4).unwrap(), SignClass::Zero);
        // the boundary p = n(n-1)/(n+1): alpha = 1, zero from k = 2 on
        assert_eq!(sign_prediction(2, &rational(2, 3), 1).unwrap(), SignClass::Positive);
        assert_eq!(sign_prediction(2, &rational(2, 3), 2).unwrap(), SignClass::Zero);
    }

    #[test]
    fn finite_sum_index_detects_integer_beta() {
        assert_eq!(finite_sum_index(2, &integer(-1)), Some(2));
        assert_eq!(finite_sum_index(3, &integer(0)), Some(1));
        assert_eq!(finite_sum_index(3, &integer(-2)), Some(3));
        assert_eq!(finite_sum_index(2, &integer(1)), None);
    }

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(parse_rational("7/2").unwrap(), rational(7, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rational(-1, 4));
        assert_eq!(parse_rational("3").unwrap(), integer(3));
        assert_eq!(parse_rational("1.5e2").unwrap(), integer(150));
        assert_eq!(parse_rational("4/-6").unwrap(), rational(-2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&rational(-2, 4)), "-1/2");
        assert_eq!(format_rational(&integer(5)), "5/1");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-12i64..=12, 1i64..=6).prop_map(|(a, b)| rational(a, b))
    }

    proptest! {
        #[test]
        fn pascal_recurrence(alpha in small_rational(), k in 1i64..=12) {
            let lhs = gen_binom(&alpha, k);
            let a1 = &alpha - integer(1);
            let rhs = gen_binom(&a1, k) + gen_binom(&a1, k - 1);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn gen_binom_matches_falling_factorial(alpha in small_rational(), k in 0i64..=10) {
            prop_assert_eq!(gen_binom(&alpha, k), hand_binom(&alpha, k));
        }

        #[test]
        fn results_stay_reduced(alpha in small_rational(), k in 0i64..=10) {
            prop_assert!(is_reduced(&gen_binom(&alpha, k)));
        }

        #[test]
        fn double_sum_equals_closed_form(n in 2u32..=8, p in small_rational(), k in 0u32..=12) {
            prop_assume!(p != -integer(n as i64));
            prop_assert_eq!(c_npk(n, &p, k).unwrap(), c_npk_closed(n, &p, k).unwrap());
        }

        #[test]
        fn predicted_sign_matches(n in 2u32..=8, p in small_rational(), k in 0u32..=12) {
            prop_assume!(p != -integer(n as i64));
            let c = c_npk_closed(n, &p, k).unwrap();
            prop_assert_eq!(sign_prediction(n, &p, k).unwrap(), SignClass::of(&c));
        }
    }
}
