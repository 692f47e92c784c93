use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::SignedLog2;
use crate::qcore::{names, Provenance};
use crate::{Error, Result};

/// Subsystem sets whose Haar-averaged purity has a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PurityTag {
    #[serde(rename = "ref")]
    Ref,
    #[serde(rename = "ext")]
    Ext,
    #[serde(rename = "ref,ext")]
    RefExt,
    #[serde(rename = "R")]
    R,
    #[serde(rename = "B")]
    B,
    #[serde(rename = "R,ext")]
    RExt,
    #[serde(rename = "B,ext")]
    BExt,
    #[serde(rename = "ref,R")]
    RefR,
    #[serde(rename = "ref,B")]
    RefB,
}

impl PurityTag {
    pub const ALL: [PurityTag; 9] = [
        PurityTag::Ref,
        PurityTag::Ext,
        PurityTag::RefExt,
        PurityTag::R,
        PurityTag::B,
        PurityTag::RExt,
        PurityTag::BExt,
        PurityTag::RefR,
        PurityTag::RefB,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PurityTag::Ref => "ref",
            PurityTag::Ext => "ext",
            PurityTag::RefExt => "ref,ext",
            PurityTag::R => "R",
            PurityTag::B => "B",
            PurityTag::RExt => "R,ext",
            PurityTag::BExt => "B,ext",
            PurityTag::RefR => "ref,R",
            PurityTag::RefB => "ref,B",
        }
    }

    /// Member labels, in `ref, B, R, ext` order.
    pub fn subsystems(&self) -> &'static [&'static str] {
        use names::*;
        match self {
            PurityTag::Ref => &[REF],
            PurityTag::Ext => &[EXT],
            PurityTag::RefExt => &[REF, EXT],
            PurityTag::R => &[R],
            PurityTag::B => &[B],
            PurityTag::RExt => &[R, EXT],
            PurityTag::BExt => &[B, EXT],
            PurityTag::RefR => &[REF, R],
            PurityTag::RefB => &[REF, B],
        }
    }

    /// The tag of the complementary set within `ref, B, R, ext`, when it has one.
    pub fn complement(&self) -> Option<PurityTag> {
        match self {
            PurityTag::RExt => Some(PurityTag::RefB),
            PurityTag::RefB => Some(PurityTag::RExt),
            PurityTag::BExt => Some(PurityTag::RefR),
            PurityTag::RefR => Some(PurityTag::BExt),
            _ => None,
        }
    }

    /// Looks up the tag for a set of labels (order-insensitive).
    pub fn for_set(set: &[&str]) -> Option<PurityTag> {
        let mut wanted: Vec<&str> = set.to_vec();
        wanted.sort_unstable();
        PurityTag::ALL.into_iter().find(|t| {
            let mut have = t.subsystems().to_vec();
            have.sort_unstable();
            have == wanted
        })
    }
}

impl fmt::Display for PurityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PurityTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        PurityTag::for_set(&parts).ok_or_else(|| Error::UnknownTag(s.to_string()))
    }
}

/// Exact integer dimensions `K, N, R, B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDims {
    pub k: BigInt,
    pub n: BigInt,
    pub r: BigInt,
    pub b: BigInt,
}

/// Dimensions `K` (ref), `N` (ext), `R` (radiation), `B` (remaining
/// interior) as base-two exponents, with exact integers when available.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionProfile {
    pub log2_k: f64,
    pub log2_n: f64,
    pub log2_r: f64,
    pub log2_b: f64,
    exact: Option<ExactDims>,
}

fn check_exponent(name: &'static str, v: f64) -> Result<()> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::param(
            name,
            format!("exponent {v} must be finite and >= 0"),
        ));
    }
    Ok(())
}

impl DimensionProfile {
    /// From base-two exponents. Integral exponents also get exact integer forms.
    pub fn from_log2(log2_k: f64, log2_n: f64, log2_r: f64, log2_b: f64) -> Result<Self> {
        check_exponent("log2_k", log2_k)?;
        check_exponent("log2_n", log2_n)?;
        check_exponent("log2_r", log2_r)?;
        check_exponent("log2_b", log2_b)?;
        let all = [log2_k, log2_n, log2_r, log2_b];
        let exact = all
            .iter()
            .all(|e| e.fract() == 0.0 && *e <= 4096.0)
            .then(|| {
                let p = |e: f64| BigInt::one() << (e as usize);
                ExactDims {
                    k: p(log2_k),
                    n: p(log2_n),
                    r: p(log2_r),
                    b: p(log2_b),
                }
            });
        Ok(Self {
            log2_k,
            log2_n,
            log2_r,
            log2_b,
            exact,
        })
    }

    /// From integer dimensions (not necessarily powers of two).
    pub fn from_dims(k: u64, n: u64, r: u64, b: u64) -> Result<Self> {
        if [k, n, r, b].contains(&0) {
            return Err(Error::InvalidDimension(
                "profile dimensions must be >= 1".into(),
            ));
        }
        let l = |d: u64| (d as f64).log2();
        Ok(Self {
            log2_k: l(k),
            log2_n: l(n),
            log2_r: l(r),
            log2_b: l(b),
            exact: Some(ExactDims {
                k: k.into(),
                n: n.into(),
                r: r.into(),
                b: b.into(),
            }),
        })
    }

    /// Profile after `r` of `n` interior qubits have radiated, with `k`
    /// matter qubits and an exterior of `log2_ext` (effective) qubits.
    pub fn evaporation(k: f64, log2_ext: f64, n: f64, r: f64) -> Result<Self> {
        if r > n {
            return Err(Error::param(
                "r",
                format!("{r} exceeds the interior size {n}"),
            ));
        }
        Self::from_log2(k, log2_ext, r, n - r)
    }

    pub fn exact(&self) -> Option<&ExactDims> {
        self.exact.as_ref()
    }

    /// `log₂(RB)`, the interior size in qubits.
    pub fn interior_qubits(&self) -> f64 {
        self.log2_r + self.log2_b
    }

    /// The profile with `R ↔ B`.
    pub fn swap_rb(&self) -> Self {
        Self {
            log2_r: self.log2_b,
            log2_b: self.log2_r,
            exact: self.exact.as_ref().map(|e| ExactDims {
                r: e.b.clone(),
                b: e.r.clone(),
                ..e.clone()
            }),
            ..self.clone()
        }
    }

    /// The profile with `K ↔ N`.
    pub fn swap_kn(&self) -> Self {
        Self {
            log2_k: self.log2_n,
            log2_n: self.log2_k,
            exact: self.exact.as_ref().map(|e| ExactDims {
                k: e.n.clone(),
                n: e.k.clone(),
                ..e.clone()
            }),
            ..self.clone()
        }
    }
}

/// A purity `tr ρ²`, stored as `log₂` so that 2^-100 and smaller survive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Purity {
    pub log2: f64,
}

impl Purity {
    pub fn value(&self) -> f64 {
        self.log2.exp2()
    }

    /// `−log₂ p`, the purity-based entropy estimate in bits.
    pub fn bits(&self) -> f64 {
        -self.log2
    }
}

// (t1 + t2) / ((RB)² − 1) with t1 = R(B²−1)·w1 and t2 = B(R²−1)·w2, where the
// weights are given as base-two exponents.
fn two_term(p: &DimensionProfile, log2_w1: f64, log2_w2: f64) -> SignedLog2 {
    let (lr, lb) = (p.log2_r, p.log2_b);
    let t1 = SignedLog2::pow2(lr + log2_w1).mul(SignedLog2::pow2_minus_one(2.0 * lb));
    let t2 = SignedLog2::pow2(lb + log2_w2).mul(SignedLog2::pow2_minus_one(2.0 * lr));
    let denom = SignedLog2::pow2_minus_one(2.0 * (lr + lb));
    t1.add(t2).div(denom).expect("caller handles RB = 1")
}

/// Haar-averaged purity of `tag`, evaluated in the log domain.
///
/// `p(ref) = 1/K`, `p(ext) = 1/N`, `p(ref,ext) = 1/(KN)`,
/// `p(R) = [R(B²−1) + B(R²−1)/(KN)] / ((RB)²−1)`,
/// `p(R,ext) = [R(B²−1)/N + B(R²−1)/K] / ((RB)²−1)`; `B` tags follow by
/// `R ↔ B` and `ref` tags by `K ↔ N`. A one-dimensional interior (`R = B = 1`)
/// bypasses the formula.
pub fn average_purity(tag: PurityTag, dims: &DimensionProfile) -> Result<Purity> {
    let (lk, ln) = (dims.log2_k, dims.log2_n);
    let degenerate = dims.interior_qubits() == 0.0;
    let log2 = match tag {
        PurityTag::Ref => -lk,
        PurityTag::Ext => -ln,
        PurityTag::RefExt => -(lk + ln),
        PurityTag::R | PurityTag::B if degenerate => 0.0,
        PurityTag::RExt | PurityTag::BExt if degenerate => -ln,
        PurityTag::RefR | PurityTag::RefB if degenerate => -lk,
        PurityTag::R => two_term(dims, 0.0, -(lk + ln)).log2_abs(),
        PurityTag::B => return average_purity(PurityTag::R, &dims.swap_rb()),
        PurityTag::RExt => two_term(dims, -ln, -lk).log2_abs(),
        PurityTag::BExt => return average_purity(PurityTag::RExt, &dims.swap_rb()),
        PurityTag::RefR => return average_purity(PurityTag::RExt, &dims.swap_kn()),
        PurityTag::RefB => return average_purity(PurityTag::RefR, &dims.swap_rb()),
    };
    Ok(Purity { log2 })
}

/// Exact rational evaluation of the same closed forms; needs integer dimensions.
pub fn average_purity_exact(tag: PurityTag, dims: &DimensionProfile) -> Result<BigRational> {
    let e = dims
        .exact()
        .ok_or_else(|| Error::param("dims", "exact path needs integral dimensions"))?;
    let q = |n: &BigInt, d: &BigInt| BigRational::new(n.clone(), d.clone());
    let one = BigInt::one();
    let (k, n, r, b) = (&e.k, &e.n, &e.r, &e.b);
    let rb = r * b;
    let denom = &rb * &rb - &one;
    let r_term = r * (b * b - &one);
    let b_term = b * (r * r - &one);
    let rt = |w: &BigInt| q(&r_term, w);
    let bt = |w: &BigInt| q(&b_term, w);
    // B-tags: same expressions with R and B exchanged.
    let r_term_x = b * (r * r - &one);
    let b_term_x = r * (b * b - &one);
    let value = match tag {
        PurityTag::Ref => q(&one, k),
        PurityTag::Ext => q(&one, n),
        PurityTag::RefExt => q(&one, &(k * n)),
        _ if denom.is_zero() => match tag {
            PurityTag::R | PurityTag::B => BigRational::one(),
            PurityTag::RExt | PurityTag::BExt => q(&one, n),
            _ => q(&one, k),
        },
        PurityTag::R => (rt(&one) + bt(&(k * n))) / BigRational::from_integer(denom),
        PurityTag::RExt => (rt(n) + bt(k)) / BigRational::from_integer(denom),
        PurityTag::RefR => (rt(k) + bt(n)) / BigRational::from_integer(denom),
        PurityTag::B => {
            (q(&r_term_x, &one) + q(&b_term_x, &(k * n))) / BigRational::from_integer(denom)
        }
        PurityTag::BExt => (q(&r_term_x, n) + q(&b_term_x, k)) / BigRational::from_integer(denom),
        PurityTag::RefB => (q(&r_term_x, k) + q(&b_term_x, n)) / BigRational::from_integer(denom),
    };
    Ok(value)
}

/// Entropy estimated from a purity: `−log₂ p`, a lower-bound-style proxy
/// for the Haar-mean von Neumann entropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub bits: f64,
    pub provenance: Provenance,
}

pub fn entropy_estimate(purity: f64) -> Result<EntropyEstimate> {
    if !(purity > 0.0 && purity <= 1.0) {
        return Err(Error::param(
            "purity",
            format!("{purity} is outside (0, 1]"),
        ));
    }
    Ok(EntropyEstimate {
        bits: -purity.log2(),
        provenance: Provenance::PurityEstimate,
    })
}
