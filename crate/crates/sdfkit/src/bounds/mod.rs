//! Rigorous evaluation of every upper bound and proof inequality.
//!
//! Half-integer powers are kept exact as [`Surd`] values; general quarter
//! powers go through directed interval arithmetic ([`Interval`]) so that a
//! reported "pass" certifies the inequality: left sides are rounded up,
//! right sides down.

pub mod interval;
pub mod surd;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use interval::Interval;
pub use surd::Surd;

use crate::modarith::Modulus;
use crate::{Error, Result};

/// `G_d = (3n)^{1.5(n-d)}`, exactly (an integer power of `√(3n)`).
pub fn g_d(n: usize, d: usize) -> Result<Surd> {
    if d < 1 || d > n {
        return Err(Error::DomainError(format!("need 1 <= d <= n, got d={d} n={n}")));
    }
    Ok(Surd::pow_half(3 * n as u64, 3 * (n - d) as u64))
}

/// Main upper bound `√m · (3n)^{1.5n}`, exactly.
pub fn theorem_bound(m: &Modulus) -> Surd {
    Surd::sqrt_of(m.value()).mul(&Surd::pow_half(3 * m.n() as u64, 3 * m.n() as u64))
}

/// The strict `|A| < √m` bound; applicable only when every prime divisor is
/// `1 (mod 4)`.
pub fn matolcsi_ruzsa_bound(m: &Modulus) -> Option<Surd> {
    if m.all_primes_are(1) {
        Some(Surd::sqrt_of(m.value()))
    } else {
        None
    }
}

/// Tournament-product bound `∏ (p_i + 1)/2`; applicable only when every
/// prime divisor is `3 (mod 4)`.
pub fn alon_tournament_bound(m: &Modulus) -> Option<BigUint> {
    if m.all_primes_are(3) {
        let mut prod = BigUint::one();
        for &p in m.primes() {
            prod *= BigUint::from((p + 1) / 2);
        }
        Some(prod)
    } else {
        None
    }
}

/// The combined bound `m · min(2^{-cn}, m^{-1/2}(3n)^{1.5n})` together with
/// the labeled branches of the three-way reduction that motivates it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CombinedBound {
    pub m: u64,
    pub n: usize,
    /// The exponent parameter `c` as a fraction (numerator, denominator).
    pub c: (u64, u64),
    /// `m · 2^{-cn}` (upper edge of its enclosure).
    pub tournament_branch: f64,
    /// `m · m^{-1/2}(3n)^{1.5n} = √m (3n)^{1.5n}` (upper edge).
    pub character_branch: f64,
    pub chosen_branch: String,
    pub value: f64,
    /// Product of the prime divisors `≡ 3 (mod 4)`.
    pub m_prime: u64,
    /// `m' (m/m')^{1/2}`, the mixed bound used when `m' < √m`.
    pub mixed_branch: String,
    pub mixed_branch_value: f64,
    /// `m^{3/4}`, what the mixed bound is in turn at most.
    pub three_quarter_branch: f64,
    /// Whether the reduction to `m' ≥ √m` is vacuous (`m' ≥ √m` already).
    pub reduction_vacuous: bool,
    #[serde(skip)]
    pub value_interval: Option<Interval>,
}

pub fn combined_bound(m: &Modulus, c: (u64, u64)) -> Result<CombinedBound> {
    let (c_num, c_den) = c;
    if c_num == 0 || c_den == 0 {
        return Err(Error::DomainError("c must be positive".into()));
    }
    let n = m.n();
    let mv = m.value();
    let exponent = (c_num as i64)
        .checked_mul(n as i64)
        .ok_or_else(|| Error::DomainError("c numerator too large".into()))?;
    let two_pow = Interval::from_u64(2).pow_ratio(-exponent, c_den as u32);
    let tournament = Interval::from_u64(mv).mul(&two_pow);
    let character = theorem_bound(m).to_interval();

    let (value, chosen) = if tournament.lt_certain(&character) {
        (tournament.clone(), "tournament")
    } else if character.lt_certain(&tournament) {
        (character.clone(), "character")
    } else {
        (tournament.clone(), "tie")
    };

    let m_prime: u64 = m.primes().iter().filter(|&&p| p % 4 == 3).product();
    // m' >= sqrt(m)  <=>  m'^2 >= m
    let reduction_vacuous = (m_prime as u128) * (m_prime as u128) >= mv as u128;
    let mixed = Surd::integer(m_prime).mul(&Surd::sqrt_of(mv / m_prime));
    let three_quarter = Interval::from_u64(mv).pow_ratio(3, 4);

    Ok(CombinedBound {
        m: mv,
        n,
        c,
        tournament_branch: tournament.hi_f64(),
        character_branch: character.hi_f64(),
        chosen_branch: chosen.to_string(),
        value: value.hi_f64(),
        m_prime,
        mixed_branch: mixed.to_string(),
        mixed_branch_value: mixed.to_f64(),
        three_quarter_branch: three_quarter.hi_f64(),
        reduction_vacuous,
        value_interval: Some(value),
    })
}

/// One certified inequality: `lhs` is an upper bound on the exact left side,
/// `rhs` a lower bound on the right side, so `pass` implies the true
/// inequality strictly.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProofReport {
    pub n: usize,
    pub primes: Vec<u64>,
    pub checks: Vec<InequalityCheck>,
    pub pass: bool,
}

fn is_small_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Evaluate the exact left sides of the intermediate inequalities of the
/// upper-bound proof for the given primes and certify each against its
/// constant right side:
///
/// * `Σ p_j^{-1/4} < 1.13 n^{3/4}`;
/// * `T_1 = Σ_d G_d^{1/2} Σ_{|D|=d} p_D^{-1/4} < 0.65 (3n)^{0.75n}`;
/// * per `l`, the geometric inner sum `Σ_{D ⊋ D', |D'|=l} G_{|D|}^{1/2}
///   G_{|D|-|D'|}^{1/2} < 0.16 (3n)^{1.5n - 0.75l}`;
/// * `T_2 = Σ_D G_{|D|}^{1/2} Σ_{D'⊊D} G_{|D|-|D'|}^{1/2} p_{D'}^{-1/4}
///   < 0.27 (3n)^{1.5n}`.
///
/// Subset sums are evaluated exactly; `n` is capped at 14.
pub fn proof_inequality_report(primes: &[u64]) -> Result<ProofReport> {
    let n = primes.len();
    if n == 0 {
        return Err(Error::DomainError("need at least one prime".into()));
    }
    if n > 14 {
        return Err(Error::SubsetBlowup(n));
    }
    for (i, &p) in primes.iter().enumerate() {
        if p < 3 || p % 2 == 0 || !is_small_prime(p) {
            return Err(Error::DomainError(format!("{p} is not an odd prime >= 3")));
        }
        if i > 0 && primes[i - 1] >= p {
            return Err(Error::DomainError("primes must be sorted and distinct".into()));
        }
    }

    // Σ_{|D'|=l} p_{D'}^{-1/4} for every size l, by enumerating all subsets.
    let mut sums_by_size: Vec<Interval> = vec![Interval::zero(); n + 1];
    for mask in 0u32..(1 << n) {
        let mut prod = BigUint::one();
        for (j, &p) in primes.iter().enumerate() {
            if mask >> j & 1 == 1 {
                prod *= BigUint::from(p);
            }
        }
        let quarter = Interval::from_biguint(&prod).pow_ratio(-1, 4);
        let l = mask.count_ones() as usize;
        sums_by_size[l] = sums_by_size[l].add(&quarter);
    }

    let three_n = 3 * n as u64;
    // G_d^{1/2} = (3n)^{0.75(n-d)}
    let root_g: Vec<Interval> = (0..=n)
        .map(|d| Interval::from_u64(three_n).pow_ratio(3 * (n - d) as i64, 4))
        .collect();

    let mut checks = Vec::new();
    let mut push = |name: String, lhs: &Interval, rhs: &Interval| {
        checks.push(InequalityCheck {
            name,
            lhs: lhs.hi_f64(),
            rhs: rhs.lo_f64(),
            pass: lhs.lt_certain(rhs),
        });
    };

    let rhs_prime_sum = Interval::from_ratio(113, 100).mul(&Interval::from_u64(n as u64).pow_ratio(3, 4));
    push("prime_quarter_sum".into(), &sums_by_size[1], &rhs_prime_sum);

    let mut t1 = Interval::zero();
    for d in 1..=n {
        t1 = t1.add(&root_g[d].mul(&sums_by_size[d]));
    }
    let rhs_t1 =
        Interval::from_ratio(65, 100).mul(&Interval::from_u64(three_n).pow_ratio(3 * n as i64, 4));
    push("t1".into(), &t1, &rhs_t1);

    // Inner geometric sums W(l) = Σ_{r=l+1}^{n} C(n-l, r-l) G_r^{1/2} G_{r-l}^{1/2};
    // the count of supersets of a size-l set having size r is C(n-l, r-l),
    // so Σ_{D ⊋ D'} G_{|D|}^{1/2} G_{|D|-|D'|}^{1/2} = W(|D'|) exactly.
    let mut w: Vec<Interval> = Vec::with_capacity(n);
    for l in 0..n {
        let mut acc = Interval::zero();
        for r in (l + 1)..=n {
            let count = Interval::from_u64(binomial(n - l, r - l));
            acc = acc.add(&count.mul(&root_g[r].mul(&root_g[r - l])));
        }
        // The per-size tail constant needs at least two primes: for n = 1
        // the inner sum is exactly 1. The aggregate bounds below still hold.
        if n >= 2 {
            let rhs = Interval::from_ratio(16, 100)
                .mul(&Interval::from_u64(three_n).pow_ratio(6 * n as i64 - 3 * l as i64, 4));
            push(format!("geometric_tail_l{l}"), &acc, &rhs);
        }
        w.push(acc);
    }

    let mut t2 = Interval::zero();
    for l in 0..n {
        t2 = t2.add(&sums_by_size[l].mul(&w[l]));
    }
    let rhs_t2 =
        Interval::from_ratio(27, 100).mul(&Interval::from_u64(three_n).pow_ratio(3 * n as i64, 2));
    push("t2".into(), &t2, &rhs_t2);

    let pass = checks.iter().all(|c| c.pass);
    Ok(ProofReport {
        n,
        primes: primes.to_vec(),
        checks,
        pass,
    })
}

/// The closing contradiction of the upper-bound proof, evaluated for a
/// concrete `m` and an assumed set size just above the bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContradictionReport {
    pub m: u64,
    pub n: usize,
    pub assumed_size: u64,
    /// Lower edge of the enclosure of `σ = 1 - 1/|A|`.
    pub sigma: f64,
    pub sigma_at_least_099: bool,
    /// Lower edge of `L = |A|^{1/2}(|A|^{1/2} σ - 0.65 m^{1/4}(3n)^{0.75n})`.
    pub l_lower: f64,
    /// Upper edge of `R = 0.27 m^{1/2}(3n)^{1.5n}`.
    pub r_upper: f64,
    /// `L > R`, certified with directed rounding.
    pub holds: bool,
}

pub fn check_final_contradiction(m: &Modulus, assumed_size: u64) -> Result<ContradictionReport> {
    let n = m.n();
    if n < 2 {
        return Err(Error::DomainError(format!("need n >= 2 prime divisors, got {n}")));
    }
    let bound = theorem_bound(m);
    if !bound.lt_integer(&BigUint::from(assumed_size)) {
        return Err(Error::DomainError(format!(
            "assumed size {assumed_size} does not exceed the bound {bound}"
        )));
    }
    let three_n = 3 * n as u64;
    let sigma = Interval::from_ratio(assumed_size as i64 - 1, assumed_size);
    let sqrt_a = Interval::from_u64(assumed_size).sqrt();
    let t1_term = Interval::from_ratio(65, 100)
        .mul(&Interval::from_u64(m.value()).pow_ratio(1, 4))
        .mul(&Interval::from_u64(three_n).pow_ratio(3 * n as i64, 4));
    let l = sqrt_a.mul(&sqrt_a.mul(&sigma).sub(&t1_term));
    let r = Interval::from_ratio(27, 100)
        .mul(&Interval::from_u64(m.value()).sqrt())
        .mul(&Interval::from_u64(three_n).pow_ratio(3 * n as i64, 2));
    Ok(ContradictionReport {
        m: m.value(),
        n,
        assumed_size,
        sigma: sigma.lo_f64(),
        sigma_at_least_099: assumed_size >= 100,
        l_lower: l.lo_f64(),
        r_upper: r.hi_f64(),
        holds: r.lt_certain(&l),
    })
}

/// One evaluated bound in a [`BoundReport`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    /// Exact rendering where available (`216*sqrt(15)`), decimal otherwise.
    pub display: String,
    pub value: f64,
    /// Ceiling of the value when it fits in a `u64`.
    pub ceil: Option<u64>,
    pub applicable: bool,
    /// Strict bounds exclude equality (`|A| < value`).
    pub strict: bool,
    pub source: String,
}

/// Every applicable upper bound for a modulus, with the minimum taken with
/// ceiling rounding.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub m: u64,
    pub n: usize,
    #[serde(rename = "F")]
    pub f_known: Option<usize>,
    pub f_exact: Option<bool>,
    pub entries: Vec<BoundEntry>,
    pub min_applicable: u64,
}

pub fn bound_report(m: &Modulus, c: (u64, u64), f_known: Option<(usize, bool)>) -> Result<BoundReport> {
    let mut entries = Vec::new();

    let thm = theorem_bound(m);
    entries.push(BoundEntry {
        name: "main".into(),
        display: thm.to_string(),
        value: thm.to_f64(),
        ceil: thm.ceil().to_u64(),
        applicable: true,
        strict: false,
        source: "character-sum induction".into(),
    });

    let sqrt_entry = matolcsi_ruzsa_bound(m);
    let sqrt_repr = Surd::sqrt_of(m.value());
    entries.push(BoundEntry {
        name: "sqrt_m".into(),
        display: sqrt_repr.to_string(),
        value: sqrt_repr.to_f64(),
        ceil: sqrt_repr.ceil().to_u64(),
        applicable: sqrt_entry.is_some(),
        strict: true,
        source: "quadratic residues 1 mod 4 only".into(),
    });

    let alon = alon_tournament_bound(m);
    entries.push(BoundEntry {
        name: "tournament".into(),
        display: alon
            .as_ref()
            .map(|b| b.to_string())
            .unwrap_or_else(|| "n/a".into()),
        value: alon.as_ref().and_then(|b| b.to_f64()).unwrap_or(f64::NAN),
        ceil: alon.as_ref().and_then(|b| b.to_u64()),
        applicable: alon.is_some(),
        strict: false,
        source: "tournament product / polynomial method".into(),
    });

    let combined = combined_bound(m, c)?;
    let combined_ceil = combined
        .value_interval
        .as_ref()
        .and_then(|v| v.ceil_upper().to_u64());
    entries.push(BoundEntry {
        name: "combined".into(),
        display: format!("{:.4}", combined.value),
        value: combined.value,
        ceil: combined_ceil,
        applicable: true,
        strict: false,
        source: format!("min(tournament 2^-cn, character), c={}/{}", c.0, c.1),
    });

    let min_applicable = entries
        .iter()
        .filter(|e| e.applicable)
        .filter_map(|e| e.ceil)
        .min()
        .unwrap_or(m.value());

    Ok(BoundReport {
        m: m.value(),
        n: m.n(),
        f_known: f_known.map(|(f, _)| f),
        f_exact: f_known.map(|(_, e)| e),
        entries,
        min_applicable,
    })
}
