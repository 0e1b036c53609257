//! Exact integer sequences used as reference values.
//!
//! Indexing: Catalan and Motzkin numbers start at index 0 with value 1. Fine
//! numbers follow the generating function `(1 - sqrt(1-4x)) / (3 - sqrt(1-4x))`,
//! so `F_0 = 0, F_1 = 1, F_2 = 0, F_3 = 1, ...`.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn catalan(n: u64) -> BigUint {
    binomial(2 * n, n) / (n + 1)
}

/// Motzkin numbers `M_0..=M_upto` by the convolution recurrence.
pub fn motzkin_upto(upto: usize) -> Vec<BigUint> {
    let mut m: Vec<BigUint> = Vec::with_capacity(upto + 1);
    for n in 0..=upto {
        let v = if n < 2 {
            BigUint::one()
        } else {
            let conv: BigUint = (0..=n - 2).map(|i| &m[i] * &m[n - 2 - i]).sum();
            &m[n - 1] + conv
        };
        m.push(v);
    }
    m
}

pub fn motzkin(n: usize) -> BigUint {
    motzkin_upto(n).pop().unwrap()
}

/// `M_{k-1,n} = 1/(n+1) * sum_j (-1)^j C(n+1, j) C(2n - jk, n)`, the count of
/// `Av_n(132, 12...k consecutive)`. Takes `k - 1 >= 2`.
pub fn generalized_motzkin(k_minus_1: u64, n: u64) -> Result<BigUint> {
    if k_minus_1 < 2 {
        return Err(invalid(format!("generalized Motzkin needs k - 1 >= 2, got {k_minus_1}")));
    }
    let k = k_minus_1 + 1;
    let mut sum = BigInt::zero();
    for j in 0..=n / k {
        let term = BigInt::from(binomial(n + 1, j) * binomial(2 * n - j * k, n));
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (q, r) = sum.div_rem(&BigInt::from(n + 1));
    if !r.is_zero() || q.is_negative() {
        return Err(Error::Internal(format!(
            "generalized Motzkin sum for k={k}, n={n} is not a nonnegative multiple of n+1"
        )));
    }
    Ok(q.to_biguint().expect("checked nonnegative"))
}

/// Power series coefficients `F_0..F_{len-1}` of the Fine generating function.
///
/// With `c = x + c^2` (so `c = (1 - sqrt(1-4x)) / 2`) the generating
/// function equals `c / (1 + c)`; both steps are exact truncated series
/// operations.
pub fn fine_series(len: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    // Each fixed-point pass fixes at least one more coefficient.
    for _ in 0..len {
        let sq = mul_trunc(&c, &c, len);
        let mut next = sq;
        if len > 1 {
            next[1] += 1;
        }
        if next == c {
            break;
        }
        c = next;
    }
    let mut denom = c.clone();
    if len > 0 {
        denom[0] += 1;
    }
    div_trunc(&c, &denom, len)
}

pub fn fine(k: usize) -> BigInt {
    fine_series(k + 1).pop().unwrap()
}

fn mul_trunc(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

// Requires den[0] == 1.
fn div_trunc(num: &[BigInt], den: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut q = vec![BigInt::zero(); len];
    for i in 0..len {
        let mut acc = num.get(i).cloned().unwrap_or_default();
        for j in 1..=i {
            acc -= &den[j] * &q[i - j];
        }
        q[i] = acc;
    }
    q
}

/// `b_n = sum_k C(n, k) a_k`.
pub fn binomial_transform(seq: &[BigInt]) -> Vec<BigInt> {
    (0..seq.len())
        .map(|n| {
            (0..=n)
                .map(|k| BigInt::from(binomial(n as u64, k as u64)) * &seq[k])
                .sum()
        })
        .collect()
}

/// `sum_{k=0}^{n} C(n, k) F_{k+1}` for `n = 0..=upto`.
pub fn fine_transform(upto: usize) -> Vec<BigInt> {
    let f = fine_series(upto + 2);
    binomial_transform(&f[1..])
}

pub fn first_differences(seq: &[BigInt]) -> Vec<BigInt> {
    seq.windows(2).map(|w| &w[1] - &w[0]).collect()
}

/// `C(n-1, floor((n-1)/2))` for `n >= 1`.
pub fn central_binomial_row(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(invalid("central binomial row needs n >= 1"));
    }
    Ok(binomial(n - 1, (n - 1) / 2))
}

/// A named sequence with the index of its first value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceTable {
    pub name: String,
    pub offset: usize,
    #[serde(serialize_with = "ser_bigints")]
    pub values: Vec<BigInt>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

impl SequenceTable {
    pub fn new(name: impl Into<String>, offset: usize, values: Vec<BigInt>) -> Self {
        SequenceTable {
            name: name.into(),
            offset,
            values,
        }
    }

    /// OEIS b-file body: one `n a(n)` line per value.
    pub fn to_bfile(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{} {}", self.offset + i, v).unwrap();
        }
        out
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        n.checked_sub(self.offset).and_then(|i| self.values.get(i))
    }
}

/// Named sequences reachable from the command line, computed for
/// indices up to `upto`.
pub fn by_name(name: &str, upto: usize) -> Result<SequenceTable> {
    let big = |v: Vec<BigUint>| v.into_iter().map(BigInt::from).collect::<Vec<_>>();
    let table = match name {
        "catalan" => SequenceTable::new(name, 0, big((0..=upto as u64).map(catalan).collect())),
        "motzkin" => SequenceTable::new(name, 0, big(motzkin_upto(upto))),
        "fine" => SequenceTable::new(name, 0, fine_series(upto + 1)),
        "fine-transform" => SequenceTable::new(name, 0, fine_transform(upto)),
        "motzkin-diff" => {
            SequenceTable::new(name, 0, first_differences(&big(motzkin_upto(upto + 1))))
        }
        "central-binomial" => SequenceTable::new(
            name,
            1,
            big((1..=upto.max(1) as u64).map(|n| central_binomial_row(n).unwrap()).collect()),
        ),
        _ => match name.strip_prefix("genmotzkin:") {
            Some(k) => {
                let k: u64 = k
                    .parse()
                    .map_err(|_| invalid(format!("bad pattern length in {name:?}")))?;
                if k < 3 {
                    return Err(invalid("genmotzkin:<k> needs k >= 3"));
                }
                let vals = (0..=upto as u64)
                    .map(|n| generalized_motzkin(k - 1, n).map(BigInt::from))
                    .collect::<Result<_>>()?;
                SequenceTable::new(name, 0, vals)
            }
            None => return Err(invalid(format!("unknown sequence {name:?}"))),
        },
    };
    Ok(table)
}
