//! Exact arithmetic in GF(p^s) and in the extension GF(q^m).
//!
//! Elements are dense coefficient vectors in the power basis of the modulus
//! root. The extension GF(q^m) for q = p^s is realized as a single flat
//! GF(p^{s·m}) field; the copy of GF(q) inside it is located by mapping the
//! base generator to a root of the base modulus in the top field.
//!
//! Everything here is immutable after construction and every operation is a
//! pure function.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Trial-division primality check; inputs stay far below 2^32 in practice.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, as (prime, multiplicity) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Writes q as p^s with p prime.
pub fn prime_power(q: u64) -> Result<(u64, usize)> {
    let f = factorize(q);
    if q < 2 || f.len() != 1 {
        return Err(Error::NotPrimePower { q });
    }
    Ok((f[0].0, f[0].1 as usize))
}

// ---------------------------------------------------------------------------
// polynomial helpers over GF(p), coefficients low degree first
// ---------------------------------------------------------------------------

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    debug_assert!(*b.last().unwrap() != 0);
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] * lead_inv) % p;
        for i in 0..=db {
            let t = (c * b[i]) % p;
            r[dr - db + i] = (r[dr - db + i] + p - t) % p;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p is a small prime, Fermat is plenty
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Brute-force irreducibility test over GF(p): trial division by every monic
/// polynomial of degree 1..=deg/2. Degrees in scope are small.
fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // enumerate monic divisor candidates of degree d
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0u64; d + 1];
            let mut t = idx;
            for c in g.iter_mut().take(d) {
                *c = t % p;
                t /= p;
            }
            g[d] = 1;
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The default modulus for GF(p^s): the first monic irreducible polynomial of
/// degree s in the deterministic enumeration (constant term least significant,
/// counting upward). A fixed canonical choice keeps every run reproducible.
pub fn default_modulus(p: u64, s: usize) -> Vec<u64> {
    if s == 1 {
        return vec![0, 1];
    }
    let count = p.pow(s as u32);
    for idx in 0..count {
        let mut f = vec![0u64; s + 1];
        let mut t = idx;
        for c in f.iter_mut().take(s) {
            *c = t % p;
            t /= p;
        }
        f[s] = 1;
        if poly_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// Modulus choices per (p, s), with user overrides on top of the canonical
/// defaults. Overrides come from the config file.
#[derive(Debug, Clone, Default)]
pub struct ModulusTable {
    overrides: BTreeMap<(u64, usize), Vec<u64>>,
}

impl ModulusTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: u64, s: usize, modulus: Vec<u64>) {
        self.overrides.insert((p, s), modulus);
    }

    pub fn spec(&self, p: u64, s: usize) -> Result<FieldSpec> {
        match self.overrides.get(&(p, s)) {
            Some(m) => FieldSpec::new(p, m.clone()),
            None => FieldSpec::new(p, default_modulus(p, s)),
        }
    }
}

// ---------------------------------------------------------------------------
// field elements
// ---------------------------------------------------------------------------

/// An element of GF(p^s): a length-s vector of residues mod p in the power
/// basis of the modulus root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// GF(p^s) given by a monic irreducible modulus of degree s over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    modulus: Vec<u64>, // monic, degree s, low degree first
}

impl FieldSpec {
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime { n: p });
        }
        if modulus.len() < 2 {
            return Err(Error::BadModulus {
                reason: "degree must be at least 1".into(),
            });
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus {
                reason: format!("coefficients must lie in [0, {p})"),
            });
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::BadModulus {
                reason: "modulus must be monic".into(),
            });
        }
        if !poly_is_irreducible(&modulus, p) {
            return Err(Error::BadModulus {
                reason: format!("polynomial is reducible over GF({p})"),
            });
        }
        Ok(Self { p, modulus })
    }

    /// GF(p) itself, with modulus x.
    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(p, vec![0, 1])
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// p^s, the number of elements.
    pub fn order(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut coeffs = vec![0; self.degree()];
        coeffs[0] = 1;
        FieldElement { coeffs }
    }

    /// The element whose coefficient vector is the base-p expansion of `index`
    /// (constant term = least significant digit). This is the enumeration
    /// order used everywhere a deterministic scan is required.
    pub fn element(&self, index: u64) -> FieldElement {
        debug_assert!(index < self.order());
        let mut coeffs = vec![0; self.degree()];
        let mut t = index;
        for c in coeffs.iter_mut() {
            *c = t % self.p;
            t /= self.p;
        }
        FieldElement { coeffs }
    }

    pub fn index_of(&self, x: &FieldElement) -> u64 {
        let mut idx = 0u64;
        for &c in x.coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    pub fn element_from_coeffs(&self, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.degree() {
            return Err(Error::FieldMismatch {
                a: coeffs.len(),
                b: self.degree(),
            });
        }
        if coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::BadParameter(format!(
                "coefficient out of range [0, {})",
                self.p
            )));
        }
        Ok(FieldElement { coeffs })
    }

    /// All p^s elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    fn check(&self, x: &FieldElement) -> Result<()> {
        if x.coeffs.len() != self.degree() {
            return Err(Error::FieldMismatch {
                a: x.coeffs.len(),
                b: self.degree(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        })
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        })
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement> {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        let prod = poly_mul(&a.coeffs, &b.coeffs, self.p);
        let mut rem = poly_rem(&prod, &self.modulus, self.p);
        rem.resize(self.degree(), 0);
        Ok(FieldElement { coeffs: rem })
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, a: &FieldElement, mut e: u64) -> Result<FieldElement> {
        self.check(a)?;
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            base = self.mul(&base, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero { q: self.order() });
        }
        self.pow(a, self.order() - 2)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        let bi = self.inv(b)?;
        self.mul(a, &bi)
    }

    /// Multiplicative order, by brute force. Zero has no order.
    pub fn element_order(&self, a: &FieldElement) -> Result<u64> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero { q: self.order() });
        }
        let one = self.one();
        let mut x = a.clone();
        let mut k = 1;
        while x != one {
            x = self.mul(&x, a)?;
            k += 1;
        }
        Ok(k)
    }
}

/// First element of multiplicative order p^s - 1 in enumeration order.
///
/// The order test factors p^s - 1 and checks a^((p^s-1)/l) != 1 for each prime
/// divisor l, so the scan is cheap even without discrete logs.
pub fn find_primitive(field: &FieldSpec) -> FieldElement {
    let n = field.order() - 1;
    let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
    let one = field.one();
    for idx in 1..field.order() {
        let cand = field.element(idx);
        let full = field.pow(&cand, n).expect("same field");
        if full != one {
            continue;
        }
        let mut ok = true;
        for &l in &primes {
            if field.pow(&cand, n / l).expect("same field") == one {
                ok = false;
                break;
            }
        }
        if ok {
            return cand;
        }
    }
    unreachable!("every finite field has a primitive element")
}

// ---------------------------------------------------------------------------
// GF(p) linear algebra for the basis-change system (tiny, at most 12x12)
// ---------------------------------------------------------------------------

fn invert_mod_p(mat: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = mat.len();
    let mut a: Vec<Vec<u64>> = mat.to_vec();
    let mut inv: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let c = mod_inv(a[col][col], p);
        for j in 0..n {
            a[col][j] = a[col][j] * c % p;
            inv[col][j] = inv[col][j] * c % p;
        }
        for r in 0..n {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let f = a[r][col];
            for j in 0..n {
                a[r][j] = (a[r][j] + (p - f) * a[col][j]) % p;
                inv[r][j] = (inv[r][j] + (p - f) * inv[col][j]) % p;
            }
        }
    }
    Some(inv)
}

// ---------------------------------------------------------------------------
// the extension GF(q^m)
// ---------------------------------------------------------------------------

/// Discrete-log tables are kept only up to this field size.
const DLOG_BOUND: u64 = 1 << 16;

/// GF(q^m) over GF(q) = GF(p^s), realized as the flat field GF(p^{s·m}).
///
/// Carries a primitive element alpha with ord(alpha) = q^m - 1, the embedding
/// of GF(q), and the cached linear system that expresses top-field elements in
/// the basis {1, alpha, ..., alpha^{m-1}} over the embedded GF(q).
#[derive(Debug, Clone)]
pub struct ExtField {
    base: FieldSpec,
    top: FieldSpec,
    alpha: FieldElement,
    m: usize,
    /// z^j for j < s, the embedded images of the base power basis.
    embed_pows: Vec<FieldElement>,
    /// inverse of the (sm)x(sm) GF(p) matrix whose columns are z^j * alpha^i
    expand_inv: Vec<Vec<u64>>,
    /// alpha^0 .. alpha^{n-1} when the field is small enough
    alpha_pows: Option<Vec<FieldElement>>,
}

impl ExtField {
    /// Builds GF(q^m) for a prime power q with the canonical (or overridden)
    /// moduli from `table`.
    ///
    /// ```
    /// use grm_infosets::field::{ExtField, ModulusTable};
    ///
    /// let ext = ExtField::new(3, 3, &ModulusTable::new())?;
    /// assert_eq!(ext.n(), 26); // alpha generates the 26 nonzero elements
    ///
    /// // coordinates of alpha^4 in the basis {1, alpha, alpha^2} over GF(3)
    /// let coords = ext.expand_over_base(&ext.alpha_pow(4))?;
    /// assert_eq!(coords.len(), 3);
    /// # Ok::<(), grm_infosets::Error>(())
    /// ```
    pub fn new(q: u64, m: usize, table: &ModulusTable) -> Result<Self> {
        let (p, s) = prime_power(q)?;
        if m < 1 {
            return Err(Error::BadParameter("m must be at least 1".into()));
        }
        let base = table.spec(p, s)?;
        let top = table.spec(p, s * m)?;
        Self::from_specs(base, top, m)
    }

    pub fn from_specs(base: FieldSpec, top: FieldSpec, m: usize) -> Result<Self> {
        let p = base.characteristic();
        let s = base.degree();
        if top.characteristic() != p || top.degree() != s * m {
            return Err(Error::BadParameter(
                "top field must be a degree s*m extension of GF(p)".into(),
            ));
        }
        let alpha = find_primitive(&top);

        // Embed GF(q): send the base generator to the first root of the base
        // modulus found in the top field. For s = 1 the embedding is the
        // prime-subfield inclusion and needs no root.
        let z = if s == 1 {
            top.one()
        } else {
            let mut found = None;
            for cand in top.elements() {
                if eval_poly(&top, base.modulus(), &cand)?.is_zero() {
                    found = Some(cand);
                    break;
                }
            }
            found.ok_or(Error::BasisSingular)?
        };
        let mut embed_pows = Vec::with_capacity(s);
        let mut zp = top.one();
        for _ in 0..s {
            embed_pows.push(zp.clone());
            zp = top.mul(&zp, &z)?;
        }

        // Basis-change matrix: column (i*s + j) holds the GF(p) coordinates of
        // z^j * alpha^i. Its inverse turns top elements into GF(q)-coordinates
        // with respect to {1, alpha, ..., alpha^{m-1}}.
        let dim = s * m;
        let mut cols = Vec::with_capacity(dim);
        let mut apow = top.one();
        for _ in 0..m {
            for zj in &embed_pows {
                let v = top.mul(&apow, zj)?;
                cols.push(v.coeffs().to_vec());
            }
            apow = top.mul(&apow, &alpha)?;
        }
        let mut mat = vec![vec![0u64; dim]; dim];
        for (c, col) in cols.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                mat[r][c] = v;
            }
        }
        let expand_inv = invert_mod_p(&mat, p).ok_or(Error::BasisSingular)?;

        let n = top.order() - 1;
        let alpha_pows = if top.order() <= DLOG_BOUND {
            let mut pows = Vec::with_capacity(n as usize);
            let mut x = top.one();
            for _ in 0..n {
                pows.push(x.clone());
                x = top.mul(&x, &alpha)?;
            }
            Some(pows)
        } else {
            None
        };

        Ok(Self {
            base,
            top,
            alpha,
            m,
            embed_pows,
            expand_inv,
            alpha_pows,
        })
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn top(&self) -> &FieldSpec {
        &self.top
    }

    pub fn alpha(&self) -> &FieldElement {
        &self.alpha
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// q^m, the number of elements (and the code length).
    pub fn order(&self) -> u64 {
        self.top.order()
    }

    /// n = q^m - 1.
    pub fn n(&self) -> u64 {
        self.top.order() - 1
    }

    /// alpha^e for e taken mod n.
    pub fn alpha_pow(&self, e: u64) -> FieldElement {
        let e = e % self.n();
        match &self.alpha_pows {
            Some(t) => t[e as usize].clone(),
            None => self.top.pow(&self.alpha, e).expect("same field"),
        }
    }

    /// The image of a base-field element inside the top field.
    pub fn embed(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.coeffs().len() != self.base.degree() {
            return Err(Error::FieldMismatch {
                a: x.coeffs().len(),
                b: self.base.degree(),
            });
        }
        let mut acc = self.top.zero();
        for (c, zj) in x.coeffs().iter().zip(&self.embed_pows) {
            if *c == 0 {
                continue;
            }
            let scaled = scale(&self.top, zj, *c);
            acc = self.top.add(&acc, &scaled)?;
        }
        Ok(acc)
    }

    /// Coordinates (c_0, ..., c_{m-1}) over GF(q) with
    /// x = sum c_i alpha^i, solved through the cached GF(p) system.
    pub fn expand_over_base(&self, x: &FieldElement) -> Result<Vec<FieldElement>> {
        if x.coeffs().len() != self.top.degree() {
            return Err(Error::FieldMismatch {
                a: x.coeffs().len(),
                b: self.top.degree(),
            });
        }
        let p = self.base.characteristic();
        let s = self.base.degree();
        let dim = s * self.m;
        let mut t = vec![0u64; dim];
        for (r, row) in self.expand_inv.iter().enumerate() {
            let mut acc = 0u64;
            for (j, &v) in row.iter().enumerate() {
                acc = (acc + v * x.coeffs()[j]) % p;
            }
            t[r] = acc;
        }
        let mut out = Vec::with_capacity(self.m);
        for i in 0..self.m {
            out.push(
                self.base
                    .element_from_coeffs(t[i * s..(i + 1) * s].to_vec())?,
            );
        }
        Ok(out)
    }
}

/// Multiply by a prime-subfield scalar, coefficient-wise.
fn scale(field: &FieldSpec, x: &FieldElement, c: u64) -> FieldElement {
    let p = field.characteristic();
    field
        .element_from_coeffs(x.coeffs().iter().map(|&v| v * c % p).collect())
        .expect("same length")
}

fn eval_poly(field: &FieldSpec, poly: &[u64], at: &FieldElement) -> Result<FieldElement> {
    let mut acc = field.zero();
    for &c in poly.iter().rev() {
        acc = field.mul(&acc, at)?;
        let term = scale(field, &field.one(), c % field.characteristic());
        acc = field.add(&acc, &term)?;
    }
    Ok(acc)
}
