//! Words over `{1, 2}`, their densities, and exact counts of the
//! uncontrolled part of the word partition.
//!
//! Blocks of length `N0` with a density of `1`s at least `α` are *controlled*.
//! Words of length `8·N0` split into `X` (no controlled block) and `Y` (some
//! controlled block), and the size of `X` is compared against the bound
//! `h^{-4√α}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

/// Largest `N0` accepted for brute-force enumeration of `{1,2}^N0`.
pub const EXHAUSTIVE_MAX_N0: u32 = 26;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|&&l| l != 1 && l != 2) {
            return Err(Error::invalid("word", format!("letter {bad} is not in {{1,2}}")));
        }
        Ok(Word { letters })
    }

    /// Word of length `n` whose letter `j` is `1` exactly when bit `j` of `mask` is set.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        let letters = (0..n).map(|j| if mask >> j & 1 == 1 { 1 } else { 2 }).collect();
        Word { letters }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.letters.iter().filter(|&&l| l == 1).count()
    }

    /// Swaps the letters `1` and `2`.
    pub fn flip(&self) -> Word {
        Word {
            letters: self.letters.iter().map(|&l| 3 - l).collect(),
        }
    }

    pub fn concat(parts: &[Word]) -> Word {
        Word {
            letters: parts.iter().flat_map(|w| w.letters.iter().copied()).collect(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses digits `1`/`2`; whitespace, `_` and `,` are ignored as separators.
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '1' => letters.push(1),
                '2' => letters.push(2),
                c if c.is_whitespace() || c == '_' || c == ',' => {}
                c => return Err(Error::invalid("word", format!("unexpected character {c:?}"))),
            }
        }
        Ok(Word { letters })
    }
}

impl TryFrom<String> for Word {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Word> for String {
    fn from(w: Word) -> Self {
        w.to_string()
    }
}

/// Fraction of letters equal to `1`, as an exact reduced fraction.
pub fn density(w: &Word) -> Result<Ratio<u64>> {
    if w.is_empty() {
        return Err(Error::invalid("density", "empty word"));
    }
    Ok(Ratio::new(w.ones() as u64, w.len() as u64))
}

/// True when `j/n < alpha`, the uncontrolled side of the density threshold.
fn below(j: u64, n: u64, alpha: f64) -> bool {
    (j as f64) / (n as f64) < alpha
}

fn check_count_args(op: &'static str, n0: u32, alpha: f64) -> Result<()> {
    if n0 == 0 {
        return Err(Error::invalid(op, "N0 must be at least 1"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(op, format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(())
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of length-`N0` words with density strictly below `alpha`.
pub fn controlled_set_size(n0: u32, alpha: f64) -> Result<BigUint> {
    check_count_args("controlled_set_size", n0, alpha)?;
    let n = u64::from(n0);
    Ok((0..=n)
        .filter(|&j| below(j, n, alpha))
        .map(|j| binomial(n, j))
        .sum())
}

/// Brute-force count of the same set by enumerating all `2^N0` words.
pub fn enumerate_uncontrolled(n0: u32, alpha: f64) -> Result<BigUint> {
    const OP: &str = "enumerate_uncontrolled";
    check_count_args(OP, n0, alpha)?;
    if n0 > EXHAUSTIVE_MAX_N0 {
        return Err(Error::Resource {
            op: OP,
            msg: format!("exhaustive enumeration limited to N0 <= {EXHAUSTIVE_MAX_N0}, got {n0}"),
        });
    }
    let n = u64::from(n0);
    // Split the word space by its top `prefix_bits` letters.
    let prefix_bits = n0.min(6);
    let low_bits = n0 - prefix_bits;
    let prefixes: Vec<u64> = (0..1u64 << prefix_bits).collect();
    let counts = par::map_indexed(&prefixes, |_, &prefix| {
        let base = prefix << low_bits;
        (0..1u64 << low_bits)
            .filter(|&low| below(u64::from((base | low).count_ones()), n, alpha))
            .count() as u64
    });
    Ok(counts.into_iter().map(BigUint::from).sum())
}

/// `-(α log α + (1-α) log(1-α))` in nats, with `0 log 0 = 0`.
pub fn binary_entropy(alpha: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.ln() };
    term(alpha) + term(1.0 - alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionParams {
    pub h: Option<f64>,
    pub rho: Option<f64>,
    pub n0: u32,
    pub n1: u32,
    pub alpha: f64,
    pub beta: Option<f64>,
}

impl PartitionParams {
    /// Parameters given directly by block length and threshold.
    pub fn from_n0(n0: u32, alpha: f64) -> Result<Self> {
        check_count_args("partition_params", n0, alpha)?;
        Ok(PartitionParams {
            h: None,
            rho: None,
            n0,
            n1: 4 * n0,
            alpha,
            beta: None,
        })
    }

    pub fn with_h(mut self, h: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::invalid("partition_params", format!("h must lie in (0,1), got {h}")));
        }
        self.h = Some(h);
        Ok(self)
    }
}

/// `N0 = ⌈(ρ/4) log(1/h)⌉`, `N1 = 4 N0`, `α = β²/64`.
pub fn derive_params(h: f64, rho: f64, beta: f64) -> Result<PartitionParams> {
    const OP: &str = "derive_params";
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::invalid(OP, format!("h must lie in (0,1), got {h}")));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid(OP, format!("rho must lie in (0,1), got {rho}")));
    }
    if !(beta > 0.0 && beta <= 0.125) {
        return Err(Error::invalid(OP, format!("beta must lie in (0, 1/8], got {beta}")));
    }
    let raw = rho / 4.0 * (1.0 / h).ln();
    // Guard against ln rounding pushing an exact integer just above itself.
    let n0 = ((raw - 1e-9).ceil() as u32).max(1);
    Ok(PartitionParams {
        h: Some(h),
        rho: Some(rho),
        n0,
        n1: 4 * n0,
        alpha: beta * beta / 64.0,
        beta: Some(beta),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub n0: u32,
    pub alpha: f64,
    /// Words of length `N0` outside the controlled set.
    #[serde(with = "big")]
    pub n_uncontrolled: BigUint,
    /// `n_uncontrolled^8`.
    #[serde(rename = "n_X", with = "big")]
    pub n_x: BigUint,
    /// `C(N0, ⌊αN0⌋) · 2^⌊αN0⌋`, the per-block bound.
    #[serde(with = "big")]
    pub block_bound: BigUint,
    /// `block_bound^8`.
    #[serde(with = "big")]
    pub stirling_bound: BigUint,
    pub block_bound_holds: bool,
    /// `h^{-4√α}` when `h` is known.
    pub asymptotic_bound: Option<f64>,
    /// `n_X / asymptotic_bound`, the constant needed for the asymptotic bound.
    pub measured_ratio: Option<f64>,
    /// Result of comparing against brute-force enumeration, when requested.
    pub exhaustive_agrees: Option<bool>,
}

pub fn count_x(params: &PartitionParams, verify_exhaustive: bool) -> Result<CountReport> {
    let n0 = params.n0;
    let alpha = params.alpha;
    let n_uncontrolled = controlled_set_size(n0, alpha)?;
    let n_x = n_uncontrolled.pow(8);
    let m = (alpha * f64::from(n0)).floor() as u64;
    let block_bound = binomial(u64::from(n0), m) << m;
    let stirling_bound = block_bound.pow(8);
    let asymptotic_bound = params.h.map(|h| h.powf(-4.0 * alpha.sqrt()));
    let measured_ratio = asymptotic_bound.and_then(|b| n_x.to_f64().map(|x| x / b));
    let exhaustive_agrees = if verify_exhaustive {
        Some(enumerate_uncontrolled(n0, alpha)? == n_uncontrolled)
    } else {
        None
    };
    Ok(CountReport {
        n0,
        alpha,
        block_bound_holds: n_uncontrolled <= block_bound,
        n_uncontrolled,
        n_x,
        block_bound,
        stirling_bound,
        asymptotic_bound,
        measured_ratio,
        exhaustive_agrees,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum XyClass {
    X,
    /// Contains a controlled block; `block` is the first one, counted from 1.
    Y { block: usize },
}

/// Classifies a word of length `8·N0` into `X` or `Y`.
pub fn xy_membership(w: &Word, alpha: f64) -> Result<XyClass> {
    const OP: &str = "xy_membership";
    if w.is_empty() || !w.len().is_multiple_of(8) {
        return Err(Error::invalid(OP, format!("length {} is not a positive multiple of 8", w.len())));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(OP, format!("alpha must lie in (0,1), got {alpha}")));
    }
    let n0 = w.len() / 8;
    for (ell, block) in w.letters.chunks(n0).enumerate() {
        let ones = block.iter().filter(|&&l| l == 1).count() as u64;
        if !below(ones, n0 as u64, alpha) {
            return Ok(XyClass::Y { block: ell + 1 });
        }
    }
    Ok(XyClass::X)
}

/// Big integers as JSON numbers when they fit in `u64`, as decimal strings otherwise.
pub(crate) mod big {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match v.to_u64() {
            Some(x) => s.serialize_u64(x),
            None => s.serialize_str(&v.to_str_radix(10)),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(u64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(BigUint::from(x)),
            Repr::Text(s) => s.parse().map_err(de::Error::custom),
        }
    }
}
