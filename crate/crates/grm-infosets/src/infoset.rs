//! The check-position engine.
//!
//! `gamma_general` computes check positions for any cyclic code from its
//! defining set through the M/f/g profile; `gamma_first_order` and
//! `gamma_second_order` are the closed forms for the duals of first- and
//! second-order generalized Reed-Muller codes. `to_information_sets`
//! translates a check-position grid back into information sets for the code
//! pair, and `find_decompositions` enumerates the admissible (r1, r2) splits
//! of n = q^m - 1.

use std::collections::BTreeSet;

use crate::cosets::{
    cyclotomic_coset, gcd, multiplicative_order, suitable_representatives, CrtIso, DefiningSetZ,
};
use crate::error::{Error, Result};

/// A set of grid positions in Z_{r1} x Z_{r2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaSet {
    r1: u64,
    r2: u64,
    cells: BTreeSet<(u64, u64)>,
}

impl GammaSet {
    pub fn new(r1: u64, r2: u64, cells: BTreeSet<(u64, u64)>) -> Result<Self> {
        if cells.iter().any(|&(i1, i2)| i1 >= r1 || i2 >= r2) {
            return Err(Error::BadParameter(format!(
                "cell outside [0, {r1}) x [0, {r2})"
            )));
        }
        Ok(Self { r1, r2, cells })
    }

    pub fn r1(&self) -> u64 {
        self.r1
    }

    pub fn r2(&self) -> u64 {
        self.r2
    }

    pub fn len(&self) -> u64 {
        self.cells.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: (u64, u64)) -> bool {
        self.cells.contains(&cell)
    }

    pub fn cells(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.cells.iter().copied()
    }

    /// T^{-1}(Gamma), sorted: the check exponents on the cyclic side.
    pub fn preimage(&self, iso: &CrtIso) -> Result<Vec<u64>> {
        if iso.r1() != self.r1 || iso.r2() != self.r2 {
            return Err(Error::BadParameter(
                "isomorphism grid does not match Gamma grid".into(),
            ));
        }
        let mut v: Vec<u64> = self.cells.iter().map(|&c| iso.inv(c)).collect();
        v.sort_unstable();
        Ok(v)
    }
}

/// The M/f/g profile behind a general check-position computation.
///
/// `m_values` maps each u in U to M(u); `f` holds the distinct M values in
/// strictly decreasing order (the sentinel 0 is implicit); `g[k]` accumulates
/// |C_{r1}(u)| over the u with M(u) >= f[k].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MfgProfile {
    pub m_values: Vec<(u64, u64)>,
    pub f: Vec<u64>,
    pub g: Vec<u64>,
}

/// Check positions for the cyclic code with punctured defining set `dstar`,
/// viewed on the (r1, r2) grid through `iso`.
///
/// M(u) is computed as an exact quotient and rejected if the division leaves
/// a remainder; the band construction is then
/// Gamma = union over j of [0, g_j) x [f_{j+1}, f_j).
pub fn gamma_general(dstar: &DefiningSetZ, iso: &CrtIso) -> Result<(MfgProfile, GammaSet)> {
    if dstar.is_empty() {
        return Err(Error::BadParameter("defining set is empty".into()));
    }
    if dstar.includes_zero() {
        return Err(Error::BadParameter(
            "gamma_general expects the punctured defining set".into(),
        ));
    }
    let q = dstar.q();
    let n = dstar.n();
    let r1 = iso.r1();
    let reps = suitable_representatives(dstar, iso)?;

    let mut m_values = Vec::new();
    for u in &reps.u_set {
        let den = cyclotomic_coset(iso.project1(*u), r1, q)?.len() as u64;
        let num: u64 = reps.orbits[u]
            .iter()
            .map(|&v| cyclotomic_coset(v, n, q).expect("gcd holds").len() as u64)
            .sum();
        if num % den != 0 {
            return Err(Error::NonIntegralM { u: *u, num, den });
        }
        m_values.push((*u, num / den));
    }

    let mut f: Vec<u64> = m_values.iter().map(|&(_, m)| m).collect();
    f.sort_unstable_by(|a, b| b.cmp(a));
    f.dedup();

    let mut g = Vec::with_capacity(f.len());
    for &fk in &f {
        let sum: u64 = m_values
            .iter()
            .filter(|&&(_, m)| m >= fk)
            .map(|&(u, _)| cyclotomic_coset(iso.project1(u), r1, q).expect("gcd holds").len() as u64)
            .sum();
        g.push(sum);
    }

    let mut cells = BTreeSet::new();
    for j in 0..f.len() {
        let hi = f[j];
        let lo = if j + 1 < f.len() { f[j + 1] } else { 0 };
        for i1 in 0..g[j] {
            for i2 in lo..hi {
                cells.insert((i1, i2));
            }
        }
    }
    let gamma = GammaSet::new(iso.r1(), iso.r2(), cells)?;
    if gamma.len() != dstar.len() {
        return Err(Error::SizeMismatch {
            gamma: gamma.len(),
            dstar: dstar.len(),
        });
    }
    Ok((MfgProfile { m_values, f, g }, gamma))
}

/// Closed form for the dual of a first-order code: the rectangle
/// [0, a) x [0, m/a) with a the order of q mod r1.
pub fn gamma_first_order(q: u64, m: u64, r1: u64, r2: u64) -> Result<GammaSet> {
    let n = q
        .checked_pow(m as u32)
        .and_then(|x| x.checked_sub(1))
        .ok_or_else(|| Error::BadParameter("q^m overflows".into()))?;
    if r1 < 2 || r2 < 2 || r1 * r2 != n {
        return Err(Error::BadDecomposition {
            reason: format!("need r1, r2 > 1 with r1*r2 = {n}, got ({r1}, {r2})"),
        });
    }
    if gcd(r1, r2) != 1 {
        return Err(Error::BadDecomposition {
            reason: format!("gcd({r1}, {r2}) != 1"),
        });
    }
    let a = multiplicative_order(q, r1)?;
    if m % a != 0 {
        return Err(Error::BadDecomposition {
            reason: format!("order {a} of {q} mod {r1} does not divide m = {m}"),
        });
    }
    let cells = (0..a)
        .flat_map(|i1| (0..m / a).map(move |i2| (i1, i2)))
        .collect();
    GammaSet::new(r1, r2, cells)
}

/// Closed form for the dual of a second-order code under the restrictions
/// q > 2 and r1 = q^a - 1: three bands
///   gamma1 = [0, a(a-1)/2)          x [0, b^2)
///   gamma2 = [a(a-1)/2, a(a+1)/2)   x [0, b(b+1)/2)
///   gamma3 = [a(a+1)/2, a(a+3)/2)   x [0, b)
/// with b = m/a.
///
/// ```
/// use grm_infosets::infoset::gamma_second_order;
///
/// // q = 5, m = 3, a = 1: gamma1 is empty, gamma2 = {0} x [0,6),
/// // gamma3 = {1} x [0,3)
/// let gamma = gamma_second_order(5, 3, 1)?;
/// assert_eq!(gamma.len(), 9);
/// assert!(gamma.contains((0, 5)) && gamma.contains((1, 2)));
/// assert!(!gamma.contains((1, 3)));
/// # Ok::<(), grm_infosets::Error>(())
/// ```
pub fn gamma_second_order(q: u64, m: u64, a: u64) -> Result<GammaSet> {
    if q <= 2 {
        return Err(Error::NotApplicable {
            reason: "second-order construction requires q > 2".into(),
        });
    }
    if a == 0 || m % a != 0 {
        return Err(Error::NotApplicable {
            reason: format!("a = {a} must divide m = {m}"),
        });
    }
    let n = q
        .checked_pow(m as u32)
        .and_then(|x| x.checked_sub(1))
        .ok_or_else(|| Error::BadParameter("q^m overflows".into()))?;
    let r1 = q.pow(a as u32) - 1;
    let r2 = n / r1;
    if r1 * r2 != n {
        return Err(Error::NotApplicable {
            reason: format!("r1 = {q}^{a} - 1 = {r1} does not divide n = {n}"),
        });
    }
    if r2 < 2 {
        return Err(Error::NotApplicable {
            reason: "r2 = n / r1 must exceed 1".into(),
        });
    }
    if gcd(r1, r2) != 1 {
        return Err(Error::NotApplicable {
            reason: format!("gcd({r1}, {r2}) != 1"),
        });
    }
    if multiplicative_order(q, r1)? != a {
        return Err(Error::InternalContradiction {
            reason: format!("order of {q} mod {q}^{a} - 1 is not {a}"),
        });
    }
    let b = m / a;
    let bands = [
        (0, a * (a - 1) / 2, b * b),
        (a * (a - 1) / 2, a * (a + 1) / 2, b * (b + 1) / 2),
        (a * (a + 1) / 2, a * (a + 3) / 2, b),
    ];
    let mut cells = BTreeSet::new();
    for &(lo, hi, height) in &bands {
        for i1 in lo..hi {
            for i2 in 0..height {
                cells.insert((i1, i2));
            }
        }
    }
    let gamma = GammaSet::new(r1, r2, cells)?;
    let expect = 2 * m + m * (m - 1) / 2;
    if gamma.len() != expect {
        return Err(Error::SizeMismatch {
            gamma: gamma.len(),
            dstar: expect,
        });
    }
    Ok(gamma)
}

// ---------------------------------------------------------------------------
// decompositions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeOrder {
    First,
    Second,
}

impl CodeOrder {
    pub fn rho(self) -> u64 {
        match self {
            CodeOrder::First => 1,
            CodeOrder::Second => 2,
        }
    }
}

/// An admissible factorization n = r1 * r2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    pub q: u64,
    pub m: u64,
    pub r1: u64,
    pub r2: u64,
    /// order of q modulo r1
    pub a: u64,
    /// whether r1 = q^a - 1, the extra condition the second-order closed
    /// form needs
    pub second_order_valid: bool,
}

/// All factorizations n = r1 * r2 with r1, r2 > 1 and gcd(r1, r2) = 1,
/// sorted by r1. For second order only the splits with r1 = q^a - 1 (and
/// q > 2) are kept. Returns an empty list when none exist.
pub fn find_decompositions(q: u64, m: u64, order: CodeOrder) -> Result<Vec<Decomposition>> {
    if m < 2 {
        return Err(Error::BadParameter("m must be at least 2".into()));
    }
    let n = q
        .checked_pow(m as u32)
        .and_then(|x| x.checked_sub(1))
        .ok_or_else(|| Error::BadParameter("q^m overflows".into()))?;
    let mut divisors = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            divisors.push(d);
            if d != n / d {
                divisors.push(n / d);
            }
        }
        d += 1;
    }
    divisors.sort_unstable();

    let mut out = Vec::new();
    for r1 in divisors {
        let r2 = n / r1;
        if r2 < 2 || gcd(r1, r2) != 1 {
            continue;
        }
        let a = multiplicative_order(q, r1)?;
        debug_assert_eq!(m % a, 0);
        let second_order_valid = q > 2 && q.pow(a as u32) - 1 == r1;
        if matches!(order, CodeOrder::Second) && !second_order_valid {
            continue;
        }
        out.push(Decomposition {
            q,
            m,
            r1,
            r2,
            a,
            second_order_valid,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// information sets
// ---------------------------------------------------------------------------

/// Parameters (q, m, rho) of a generalized Reed-Muller code R_q(rho, m).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrmParams {
    pub q: u64,
    pub m: u64,
    pub rho: u64,
}

impl GrmParams {
    /// The code length q^m.
    pub fn length(&self) -> u64 {
        self.q.pow(self.m as u32)
    }

    /// dim R_q(rho, m) = q^m - |D|, with |D| enumerated by digit sums.
    pub fn dimension(&self) -> Result<u64> {
        Ok(self.length() - DefiningSetZ::grm(self.q, self.m, self.rho)?.len())
    }

    /// The dual code R_q(m(q-1) - rho - 1, m).
    pub fn dual(&self) -> GrmParams {
        GrmParams {
            q: self.q,
            m: self.m,
            rho: self.m * (self.q - 1) - self.rho - 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfoSetRole {
    /// information set for the low-order code R_q(rho, m)
    LowOrder,
    /// information set for the dual R_q(m(q-1) - rho - 1, m)
    Dual,
}

/// An information set, as positions into the length-q^m coordinate order
/// (position 0 = field element 0, position 1 + i = alpha^i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InformationSetSpec {
    pub code: GrmParams,
    pub positions: Vec<usize>,
    pub role: InfoSetRole,
}

/// Turns a check-position grid for the dual's punctured code into the two
/// information sets: {0} union T^{-1}(Gamma) for R_q(rho, m), and the
/// complement of T^{-1}(Gamma) among alpha-exponents for the dual.
pub fn to_information_sets(
    gamma: &GammaSet,
    iso: &CrtIso,
    code: GrmParams,
) -> Result<(InformationSetSpec, InformationSetSpec)> {
    let n = code.length() - 1;
    if iso.n() != n {
        return Err(Error::BadParameter(format!(
            "isomorphism modulus {} does not match n = {n}",
            iso.n()
        )));
    }
    let check_exponents = gamma.preimage(iso)?;
    let in_gamma: BTreeSet<u64> = check_exponents.iter().copied().collect();

    let mut low_positions: Vec<usize> = vec![0];
    low_positions.extend(check_exponents.iter().map(|&e| 1 + e as usize));
    let mut dual_positions: Vec<usize> = Vec::new();
    for e in 0..n {
        if !in_gamma.contains(&e) {
            dual_positions.push(1 + e as usize);
        }
    }

    let low_dim = code.dimension()? as usize;
    if low_positions.len() != low_dim {
        return Err(Error::DimensionMismatch {
            found: low_positions.len(),
            expected: low_dim,
        });
    }
    let dual = code.dual();
    let dual_dim = dual.dimension()? as usize;
    if dual_positions.len() != dual_dim {
        return Err(Error::DimensionMismatch {
            found: dual_positions.len(),
            expected: dual_dim,
        });
    }
    Ok((
        InformationSetSpec {
            code,
            positions: low_positions,
            role: InfoSetRole::LowOrder,
        },
        InformationSetSpec {
            code: dual,
            positions: dual_positions,
            role: InfoSetRole::Dual,
        },
    ))
}
