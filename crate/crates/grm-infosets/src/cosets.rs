//! Integer-side combinatorics: q-ary weights, cyclotomic cosets, q-orbits,
//! the index isomorphism Z_n -> Z_{r1} x Z_{r2}, defining sets of generalized
//! Reed-Muller codes, and the selection of suitable representative systems.
//!
//! Ties are always broken by "smallest integer wins" so every run, on every
//! machine, produces the same sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Modular inverse via extended Euclid; `a` must be a unit mod `m`.
pub fn inverse_mod(a: u64, m: u64) -> Result<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NotCoprime { a: a % m, b: m });
    }
    Ok(t0.rem_euclid(m as i128) as u64)
}

/// Multiplicative order of q modulo r; requires gcd(r, q) = 1.
pub fn multiplicative_order(q: u64, r: u64) -> Result<u64> {
    if r == 1 {
        return Ok(1);
    }
    if gcd(r, q) != 1 {
        return Err(Error::NotCoprime { a: q, b: r });
    }
    let mut x = q % r;
    let mut k = 1;
    while x != 1 {
        x = x * (q % r) % r;
        k += 1;
    }
    Ok(k)
}

/// Sum of the base-q digits of k.
pub fn q_weight(k: u64, q: u64) -> u64 {
    debug_assert!(q >= 2);
    let mut k = k;
    let mut w = 0;
    while k > 0 {
        w += k % q;
        k /= q;
    }
    w
}

/// The q-cyclotomic coset of a modulo r: {a q^i mod r}, sorted.
pub fn cyclotomic_coset(a: u64, r: u64, q: u64) -> Result<Vec<u64>> {
    if gcd(r, q) != 1 {
        return Err(Error::NotCoprime { a: q, b: r });
    }
    let start = a % r;
    let mut set = BTreeSet::new();
    let mut x = start;
    loop {
        if !set.insert(x) {
            break;
        }
        x = x * (q % r) % r;
    }
    Ok(set.into_iter().collect())
}

/// The q-orbit of (a1, a2) modulo (r1, r2): componentwise multiplication by q
/// until the pair repeats. Sorted.
pub fn q_orbit(a1: u64, a2: u64, r1: u64, r2: u64, q: u64) -> Result<Vec<(u64, u64)>> {
    if gcd(r1, q) != 1 {
        return Err(Error::NotCoprime { a: q, b: r1 });
    }
    if gcd(r2, q) != 1 {
        return Err(Error::NotCoprime { a: q, b: r2 });
    }
    let mut set = BTreeSet::new();
    let mut x = (a1 % r1, a2 % r2);
    loop {
        if !set.insert(x) {
            break;
        }
        x = (x.0 * (q % r1) % r1, x.1 * (q % r2) % r2);
    }
    Ok(set.into_iter().collect())
}

// ---------------------------------------------------------------------------
// the index isomorphism T
// ---------------------------------------------------------------------------

/// The isomorphism T: Z_n -> Z_{r1} x Z_{r2} with
/// T(e) = (delta1 e mod r1, delta2 e mod r2). T(1) = (delta1, delta2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtIso {
    n: u64,
    r1: u64,
    r2: u64,
    delta1: u64,
    delta2: u64,
    inv1: u64,
    inv2: u64,
    // Bezout lift: crt = (c1, c2) with c1 = 1 mod r1, 0 mod r2 and vice versa
    c1: u64,
    c2: u64,
}

impl CrtIso {
    pub fn new(r1: u64, r2: u64, delta1: u64, delta2: u64) -> Result<Self> {
        if r1 < 2 || r2 < 2 {
            return Err(Error::BadDecomposition {
                reason: format!("both factors must exceed 1, got ({r1}, {r2})"),
            });
        }
        if gcd(r1, r2) != 1 {
            return Err(Error::NotCoprime { a: r1, b: r2 });
        }
        let delta1 = delta1 % r1;
        let delta2 = delta2 % r2;
        let inv1 = inverse_mod(delta1, r1)?;
        let inv2 = inverse_mod(delta2, r2)?;
        let n = r1 * r2;
        let r2_inv_mod_r1 = inverse_mod(r2 % r1, r1)?;
        let r1_inv_mod_r2 = inverse_mod(r1 % r2, r2)?;
        let c1 = r2 % n * r2_inv_mod_r1 % n;
        let c2 = r1 % n * r1_inv_mod_r2 % n;
        Ok(Self {
            n,
            r1,
            r2,
            delta1,
            delta2,
            inv1,
            inv2,
            c1,
            c2,
        })
    }

    /// The canonical choice T(1) = (1, 1).
    pub fn canonical(r1: u64, r2: u64) -> Result<Self> {
        Self::new(r1, r2, 1, 1)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn r1(&self) -> u64 {
        self.r1
    }

    pub fn r2(&self) -> u64 {
        self.r2
    }

    pub fn delta(&self) -> (u64, u64) {
        (self.delta1, self.delta2)
    }

    pub fn map(&self, e: u64) -> (u64, u64) {
        let e = e % self.n;
        (
            self.delta1 * (e % self.r1) % self.r1,
            self.delta2 * (e % self.r2) % self.r2,
        )
    }

    /// First projection T_1(e).
    pub fn project1(&self, e: u64) -> u64 {
        self.map(e).0
    }

    pub fn inv(&self, pair: (u64, u64)) -> u64 {
        let a = self.inv1 * (pair.0 % self.r1) % self.r1;
        let b = self.inv2 * (pair.1 % self.r2) % self.r2;
        (a as u128 * self.c1 as u128 % self.n as u128
            + b as u128 * self.c2 as u128 % self.n as u128) as u64
            % self.n
    }
}

// ---------------------------------------------------------------------------
// defining sets
// ---------------------------------------------------------------------------

/// A union of q-cyclotomic cosets in Z_n. The nonzero exponents live in
/// `exponents`; the exponent 0 (the extension parity) is tracked by the
/// `includes_zero` flag since puncturing removes exactly that constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningSetZ {
    n: u64,
    q: u64,
    exponents: BTreeSet<u64>,
    includes_zero: bool,
}

impl DefiningSetZ {
    pub fn new(n: u64, q: u64, exponents: BTreeSet<u64>, includes_zero: bool) -> Result<Self> {
        if gcd(n, q) != 1 {
            return Err(Error::NotCoprime { a: q, b: n });
        }
        for &e in &exponents {
            if e == 0 || e >= n {
                return Err(Error::BadParameter(format!(
                    "exponent {e} outside (0, {n})"
                )));
            }
            if !exponents.contains(&(e * (q % n) % n)) {
                return Err(Error::BadParameter(format!(
                    "exponent set is not closed under multiplication by {q} mod {n}"
                )));
            }
        }
        Ok(Self {
            n,
            q,
            exponents,
            includes_zero,
        })
    }

    /// Defining set of the generalized Reed-Muller code R_q(rho, m):
    /// all i in [0, q^m - 1) with wt_q(i) < m(q - 1) - rho.
    ///
    /// ```
    /// use grm_infosets::cosets::DefiningSetZ;
    ///
    /// // R_3(1, 3) has dimension 27 - |D| = 4
    /// let d = DefiningSetZ::grm(3, 3, 1)?;
    /// assert_eq!(d.len(), 23);
    ///
    /// // its dual R_3(4, 3) leaves only the q-power exponents
    /// let dual = DefiningSetZ::grm(3, 3, 4)?;
    /// let dstar = dual.punctured();
    /// assert_eq!(dstar.full_set(), vec![1, 3, 9]);
    /// # Ok::<(), grm_infosets::Error>(())
    /// ```
    pub fn grm(q: u64, m: u64, rho: u64) -> Result<Self> {
        let max = m * (q - 1);
        if rho == 0 || rho > max {
            return Err(Error::BadOrder { rho, max });
        }
        let n = q.pow(m as u32) - 1;
        let bound = max - rho;
        let exponents: BTreeSet<u64> = (1..n).filter(|&i| q_weight(i, q) < bound).collect();
        // 0 has weight 0, so it is in iff the bound is positive
        let includes_zero = bound > 0;
        Self::new(n, q, exponents, includes_zero)
    }

    /// The punctured defining set D* = D \ {0}.
    pub fn punctured(&self) -> Self {
        Self {
            includes_zero: false,
            ..self.clone()
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn includes_zero(&self) -> bool {
        self.includes_zero
    }

    pub fn nonzero_exponents(&self) -> &BTreeSet<u64> {
        &self.exponents
    }

    /// |D|, counting the exponent 0 if present.
    pub fn len(&self) -> u64 {
        self.exponents.len() as u64 + u64::from(self.includes_zero)
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty() && !self.includes_zero
    }

    pub fn contains(&self, e: u64) -> bool {
        if e == 0 {
            self.includes_zero
        } else {
            self.exponents.contains(&e)
        }
    }

    /// All exponents including 0 when present, sorted.
    pub fn full_set(&self) -> Vec<u64> {
        let mut v: Vec<u64> = if self.includes_zero { vec![0] } else { vec![] };
        v.extend(self.exponents.iter().copied());
        v
    }

    /// Partition of the nonzero exponents into q-cyclotomic cosets mod n,
    /// each sorted, ordered by smallest member.
    pub fn cosets(&self) -> Vec<Vec<u64>> {
        let mut remaining = self.exponents.clone();
        let mut out = Vec::new();
        while let Some(&a) = remaining.iter().next() {
            let coset = cyclotomic_coset(a, self.n, self.q).expect("gcd checked at construction");
            for e in &coset {
                remaining.remove(e);
            }
            out.push(coset);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// suitable representatives
// ---------------------------------------------------------------------------

/// A suitable system of representatives for the cosets of a punctured
/// defining set: one representative per n-coset, chosen so representatives
/// whose first projections share an r1-cyclotomic coset carry the exact same
/// residue, plus the induced classes U and Or(u).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepSystem {
    /// one element per q-cyclotomic coset of D* mod n, sorted
    pub reps: Vec<u64>,
    /// one representative per residue class mod r1 among `reps`, sorted
    pub u_set: Vec<u64>,
    /// u -> Or(u) = all reps congruent to u mod r1
    pub orbits: BTreeMap<u64, Vec<u64>>,
}

/// Deterministic selection of a suitable set of representatives.
///
/// Cosets of D* are grouped by the r1-cyclotomic coset of their first
/// projection; inside a group every coset contributes its smallest element
/// whose projection equals the group's target residue (the smallest
/// projection occurring in that r1-coset). The projections of a coset sweep
/// its whole r1-coset, so a candidate always exists.
pub fn suitable_representatives(dstar: &DefiningSetZ, iso: &CrtIso) -> Result<RepSystem> {
    if iso.n() != dstar.n() {
        return Err(Error::BadParameter(format!(
            "isomorphism modulus {} differs from defining-set modulus {}",
            iso.n(),
            dstar.n()
        )));
    }
    let q = dstar.q();
    let r1 = iso.r1();

    // group cosets by the r1-coset of their projection, keyed by its minimum
    let mut groups: BTreeMap<u64, Vec<Vec<u64>>> = BTreeMap::new();
    for coset in dstar.cosets() {
        let t1 = iso.project1(coset[0]);
        let r1_coset = cyclotomic_coset(t1, r1, q)?;
        groups.entry(r1_coset[0]).or_default().push(coset);
    }

    let mut reps = Vec::new();
    let mut u_set = Vec::new();
    let mut orbits = BTreeMap::new();
    for (_, cosets) in groups {
        // target residue: smallest element of the r1-coset that occurs as a
        // projection of this group (the sweep makes that the coset minimum)
        let u_residue = cosets
            .iter()
            .flat_map(|c| c.iter().map(|&e| iso.project1(e)))
            .min()
            .expect("groups are nonempty");
        let mut group_reps = Vec::new();
        for coset in &cosets {
            let rep = coset
                .iter()
                .copied()
                .filter(|&e| iso.project1(e) == u_residue)
                .min()
                .ok_or_else(|| Error::InternalContradiction {
                    reason: format!(
                        "no element of coset of {} projects onto residue {u_residue} mod {r1}",
                        coset[0]
                    ),
                })?;
            group_reps.push(rep);
        }
        group_reps.sort_unstable();
        let u = group_reps[0];
        u_set.push(u);
        orbits.insert(u, group_reps.clone());
        reps.extend(group_reps);
    }
    reps.sort_unstable();
    u_set.sort_unstable();
    Ok(RepSystem {
        reps,
        u_set,
        orbits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_weight_examples() {
        assert_eq!(q_weight(0, 3), 0);
        for i in 0..10 {
            assert_eq!(q_weight(3u64.pow(i), 3), 1);
        }
        // 26 = 2 + 2*3 + 2*9
        assert_eq!(q_weight(26, 3), 6);
    }

    #[test]
    fn coset_examples() {
        assert_eq!(cyclotomic_coset(0, 13, 3).unwrap(), vec![0]);
        assert_eq!(cyclotomic_coset(1, 13, 3).unwrap(), vec![1, 3, 9]);
        assert_eq!(cyclotomic_coset(2, 8, 3).unwrap(), vec![2, 6]);
        assert!(matches!(
            cyclotomic_coset(1, 9, 3),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(q_orbit(0, 0, 13, 2, 3).unwrap(), vec![(0, 0)]);
        assert_eq!(
            q_orbit(1, 1, 13, 2, 3).unwrap(),
            vec![(1, 1), (3, 1), (9, 1)]
        );
    }

    #[test]
    fn orbit_matches_coset_image() {
        // |q_orbit(T(e))| = |C_n(e)| and the image matches, for a sample of n
        for (r1, r2, q) in [(13u64, 2u64, 3u64), (5, 16, 3), (4, 31, 5), (7, 104, 3)] {
            let iso = CrtIso::canonical(r1, r2).unwrap();
            let n = r1 * r2;
            for e in 0..n {
                let coset = cyclotomic_coset(e, n, q).unwrap();
                let (a1, a2) = iso.map(e);
                let orbit = q_orbit(a1, a2, r1, r2, q).unwrap();
                assert_eq!(orbit.len(), coset.len());
                let image: BTreeSet<(u64, u64)> = coset.iter().map(|&v| iso.map(v)).collect();
                assert_eq!(image.into_iter().collect::<Vec<_>>(), orbit);
            }
        }
    }

    #[test]
    fn crt_map_round_trip() {
        let iso = CrtIso::new(13, 2, 1, 1).unwrap();
        assert_eq!(iso.map(0), (0, 0));
        assert_eq!(iso.inv((1, 1)), 1);
        for e in 0..26 {
            assert_eq!(iso.inv(iso.map(e)), e);
        }
        // a non-trivial delta is also a bijection
        let iso = CrtIso::new(4, 31, 3, 7).unwrap();
        let mut seen = BTreeSet::new();
        for e in 0..124 {
            let p = iso.map(e);
            assert!(seen.insert(p));
            assert_eq!(iso.inv(p), e);
        }
    }

    #[test]
    fn crt_rejects_bad_parameters() {
        assert!(CrtIso::new(6, 4, 1, 1).is_err());
        assert!(CrtIso::new(13, 1, 1, 1).is_err());
        assert!(CrtIso::new(4, 31, 2, 1).is_err()); // 2 not a unit mod 4
    }

    #[test]
    fn grm_defining_sets() {
        // q=3, m=3, rho = m(q-1)-2 = 4: weights < 2, so {0} and C(1)
        let d = DefiningSetZ::grm(3, 3, 4).unwrap();
        assert!(d.includes_zero());
        assert_eq!(
            d.nonzero_exponents().iter().copied().collect::<Vec<_>>(),
            vec![1, 3, 9]
        );

        // rho = 3: all i with wt_3(i) < 3
        let d = DefiningSetZ::grm(3, 3, 3).unwrap();
        let expect: BTreeSet<u64> = (1..26).filter(|&i| q_weight(i, 3) < 3).collect();
        assert_eq!(*d.nonzero_exponents(), expect);

        // maximal order: empty defining set
        let d = DefiningSetZ::grm(3, 3, 6).unwrap();
        assert!(d.is_empty());

        assert!(matches!(
            DefiningSetZ::grm(3, 3, 7),
            Err(Error::BadOrder { .. })
        ));
    }

    #[test]
    fn second_order_dstar_structure() {
        // D* for the dual of a second-order code equals
        // Omega(1) union B1 union B2
        for (q, m) in [(3u64, 3u64), (5, 3), (3, 6)] {
            let n = q.pow(m as u32) - 1;
            let d = DefiningSetZ::grm(q, m, m * (q - 1) - 3).unwrap().punctured();
            let mut expect: BTreeSet<u64> = BTreeSet::new();
            for i in 0..m {
                expect.insert(q.pow(i as u32) % n);
                expect.insert(2 * q.pow(i as u32) % n);
                for j in i + 1..m {
                    expect.insert((q.pow(i as u32) + q.pow(j as u32)) % n);
                }
            }
            assert_eq!(*d.nonzero_exponents(), expect);
        }
    }

    #[test]
    fn single_coset_rep_system() {
        // D* = C_26(1): reps = U = {1}, Or(1) = {1}
        let d = DefiningSetZ::grm(3, 3, 4).unwrap().punctured();
        let iso = CrtIso::canonical(13, 2).unwrap();
        let rs = suitable_representatives(&d, &iso).unwrap();
        assert_eq!(rs.reps, vec![1]);
        assert_eq!(rs.u_set, vec![1]);
        assert_eq!(rs.orbits[&1], vec![1]);
    }

    #[test]
    fn second_order_rep_system_q5_m3() {
        // q=5, m=3, r1=4 (a=1): U contains 1 and 2; the class of 2 also
        // absorbs the pair-sum coset of 6 = 1 + 5, since 6 = 2 mod 4 and a
        // restricted system leaves it no other residue to take
        let d = DefiningSetZ::grm(5, 3, 9).unwrap().punctured();
        let iso = CrtIso::canonical(4, 31).unwrap();
        let rs = suitable_representatives(&d, &iso).unwrap();
        assert!(rs.u_set.contains(&1));
        assert!(rs.u_set.contains(&2));
        assert_eq!(rs.orbits[&1], vec![1]);
        assert_eq!(rs.orbits[&2], vec![2, 6]);
        // |U| = 2 + floor(a/2) with a = 1
        assert_eq!(rs.u_set.len(), 2);
    }

    #[test]
    fn rep_system_invariants() {
        for (q, m, r1, r2) in [(3u64, 6u64, 8u64, 91u64), (5, 3, 4, 31), (3, 3, 13, 2)] {
            let d = DefiningSetZ::grm(q, m, m * (q - 1) - 3).unwrap().punctured();
            let iso = CrtIso::canonical(r1, r2).unwrap();
            let rs = suitable_representatives(&d, &iso).unwrap();
            // one rep per coset
            let cosets = d.cosets();
            assert_eq!(rs.reps.len(), cosets.len());
            for coset in &cosets {
                assert_eq!(rs.reps.iter().filter(|r| coset.contains(r)).count(), 1);
            }
            // orbits partition reps
            let mut all: Vec<u64> = rs.orbits.values().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, rs.reps);
            // restricted-representatives condition: same r1-coset of
            // projections implies the same residue
            for a in &rs.reps {
                for b in &rs.reps {
                    let ca = cyclotomic_coset(iso.project1(*a), r1, q).unwrap();
                    if ca.contains(&iso.project1(*b)) {
                        assert_eq!(iso.project1(*a), iso.project1(*b));
                    }
                }
            }
        }
    }
}
