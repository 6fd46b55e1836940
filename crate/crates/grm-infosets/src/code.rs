//! The verification oracle: realizes an affine-invariant code from its
//! defining set as the kernel of the expanded parity system, and certifies
//! information sets by exact Gaussian elimination over GF(q).
//!
//! No floating point anywhere; entries are element indices into GF(q) and all
//! eliminations are exact. Positions are ordered (0, alpha^0, ..., alpha^{n-1}):
//! position 0 is the field element 0, position 1 + i is alpha^i.

use crate::cosets::DefiningSetZ;
use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement, FieldSpec};

/// Default ceiling on q^m for matrix verification. Dense kernels stay well
/// under a second at this scale. Raise via config or GRMIS_MAX_VERIFY_N.
pub const DEFAULT_VERIFY_BOUND: u64 = 3200;

/// Addition/multiplication tables for GF(q), indexed by element index.
/// Prime fields take an arithmetic fast path in the elimination inner loop.
#[derive(Debug, Clone)]
pub struct FieldTables {
    q: usize,
    prime: bool,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl FieldTables {
    pub fn new(spec: &FieldSpec) -> Result<Self> {
        let q = spec.order();
        if q > 255 {
            return Err(Error::TooLarge { size: q, bound: 255 });
        }
        let q = q as usize;
        let prime = spec.degree() == 1;
        let elems: Vec<FieldElement> = spec.elements().collect();
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for i in 0..q {
            neg[i] = spec.index_of(&spec.neg(&elems[i])?) as u8;
            if i > 0 {
                inv[i] = spec.index_of(&spec.inv(&elems[i])?) as u8;
            }
            for j in 0..q {
                add[i * q + j] = spec.index_of(&spec.add(&elems[i], &elems[j])?) as u8;
                mul[i * q + j] = spec.index_of(&spec.mul(&elems[i], &elems[j])?) as u8;
            }
        }
        Ok(Self {
            q,
            prime,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// dst += f * src, elementwise.
    fn row_axpy(&self, dst: &mut [u8], src: &[u8], f: u8) {
        if f == 0 {
            return;
        }
        if self.prime {
            let q = self.q as u16;
            let f = f as u16;
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = ((*d as u16 + f * s as u16) % q) as u8;
            }
        } else {
            let mrow = &self.mul[f as usize * self.q..(f as usize + 1) * self.q];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = self.add[*d as usize * self.q + mrow[s as usize] as usize];
            }
        }
    }

    fn row_scale(&self, row: &mut [u8], f: u8) {
        if f == 1 {
            return;
        }
        let mrow = &self.mul[f as usize * self.q..(f as usize + 1) * self.q];
        for x in row.iter_mut() {
            *x = mrow[*x as usize];
        }
    }
}

/// Reduced row echelon form in place. Pivots are the first nonzero entry in
/// each column, scanning columns left to right. Returns the pivot columns.
pub fn rref(rows: &mut [Vec<u8>], t: &FieldTables) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..ncols {
        if next_row == rows.len() {
            break;
        }
        let Some(p) = (next_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next_row, p);
        let inv = t.inv(rows[next_row][col]);
        t.row_scale(&mut rows[next_row], inv);
        let piv_row = std::mem::take(&mut rows[next_row]);
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next_row || row[col] == 0 {
                continue;
            }
            let f = t.neg(row[col]);
            t.row_axpy(row, &piv_row, f);
        }
        rows[next_row] = piv_row;
        pivots.push(col);
        next_row += 1;
    }
    pivots
}

/// Rank by forward elimination with first-nonzero pivoting.
pub fn rank(mut rows: Vec<Vec<u8>>, t: &FieldTables) -> usize {
    rref(&mut rows, t).len()
}

/// Rank by an independent route: columns processed right to left, pivot rows
/// taken from the bottom. Used to re-confirm certificates.
pub fn rank_independent(mut rows: Vec<Vec<u8>>, t: &FieldTables) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let nrows = rows.len();
    let mut r = 0;
    for col in (0..ncols).rev() {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).rev().find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = t.inv(rows[r][col]);
        t.row_scale(&mut rows[r], inv);
        let piv_row = std::mem::take(&mut rows[r]);
        for (i, row) in rows.iter_mut().enumerate().skip(r + 1) {
            debug_assert!(i > r);
            if row[col] == 0 {
                continue;
            }
            let f = t.neg(row[col]);
            t.row_axpy(row, &piv_row, f);
        }
        rows[r] = piv_row;
        r += 1;
    }
    r
}

/// A k x q^m generator matrix over GF(q) in the fixed position order.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    pub q: u64,
    pub m: u64,
    /// dimension of the code
    pub k: usize,
    /// q^m, the code length
    pub length: usize,
    /// rows as GF(q) element indices
    pub rows: Vec<Vec<u8>>,
}

impl GeneratorMatrix {
    /// The submatrix on the given column positions.
    pub fn columns(&self, positions: &[usize]) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|row| positions.iter().map(|&p| row[p]).collect())
            .collect()
    }
}

/// Builds a generator matrix for the affine-invariant code with defining set
/// `d`: one parity row per coset representative s (entry 0^s at position 0
/// and alpha^{is} at position 1 + i), expanded into m rows over GF(q), then
/// the kernel of the stacked system by exact elimination.
///
/// One representative per coset suffices: the rows for qs are Frobenius
/// images of the rows for s and impose no further GF(q)-constraints beyond
/// the m-fold expansion.
pub fn build_generator_matrix(
    ext: &ExtField,
    d: &DefiningSetZ,
    bound: u64,
) -> Result<GeneratorMatrix> {
    let qm = ext.order();
    if qm > bound {
        return Err(Error::TooLarge { size: qm, bound });
    }
    if d.n() != qm - 1 {
        return Err(Error::BadParameter(format!(
            "defining set modulus {} does not match q^m - 1 = {}",
            d.n(),
            qm - 1
        )));
    }
    let n = qm - 1;
    let m = ext.m();
    let base = ext.base();
    let tables = FieldTables::new(base)?;

    // expansion cache keyed by top-element index
    let mut cache: Vec<Option<Vec<u8>>> = vec![None; qm as usize];
    let mut expand = |ext: &ExtField, x: &FieldElement| -> Result<Vec<u8>> {
        let idx = ext.top().index_of(x) as usize;
        if let Some(v) = &cache[idx] {
            return Ok(v.clone());
        }
        let coords = ext.expand_over_base(x)?;
        let v: Vec<u8> = coords.iter().map(|c| base.index_of(c) as u8).collect();
        cache[idx] = Some(v.clone());
        Ok(v)
    };

    let mut reps: Vec<u64> = if d.includes_zero() { vec![0] } else { vec![] };
    reps.extend(d.cosets().into_iter().map(|c| c[0]));

    let mut parity_rows: Vec<Vec<u8>> = Vec::with_capacity(reps.len() * m);
    let zero_exp = expand(ext, &ext.top().zero())?;
    let one_exp = expand(ext, &ext.top().one())?;
    for &s in &reps {
        let mut block: Vec<Vec<u8>> = vec![vec![0u8; qm as usize]; m];
        // position 0 carries 0^s, with 0^0 = 1
        let head = if s == 0 { &one_exp } else { &zero_exp };
        for (j, row) in block.iter_mut().enumerate() {
            row[0] = head[j];
        }
        for i in 0..n {
            let coords = expand(ext, &ext.alpha_pow(i * s))?;
            for (j, row) in block.iter_mut().enumerate() {
                row[1 + i as usize] = coords[j];
            }
        }
        parity_rows.extend(block);
    }

    let expected_rank = d.len() as usize;
    let k = (qm - d.len()) as usize;
    let (rank_found, kernel) = kernel_basis(parity_rows, qm as usize, &tables);
    if rank_found != expected_rank || kernel.len() != k {
        return Err(Error::RankAnomaly {
            found: rank_found,
            expected: expected_rank,
        });
    }
    Ok(GeneratorMatrix {
        q: base.order(),
        m: m as u64,
        k,
        length: qm as usize,
        rows: kernel,
    })
}

/// Kernel basis of the row system: rref, then one basis vector per free
/// column. Returns (rank, basis).
fn kernel_basis(mut rows: Vec<Vec<u8>>, ncols: usize, t: &FieldTables) -> (usize, Vec<Vec<u8>>) {
    let pivots = rref(&mut rows, t);
    let rank = pivots.len();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::with_capacity(ncols - rank);
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![0u8; ncols];
        v[free] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = t.neg(rows[i][free]);
        }
        basis.push(v);
    }
    (rank, basis)
}

/// phi_s of a codeword: b * 0^s + sum a_i alpha^{is}, evaluated exactly in
/// the extension field (0^0 = 1).
pub fn phi_check(c: &[u8], s: u64, ext: &ExtField) -> Result<FieldElement> {
    let qm = ext.order() as usize;
    if c.len() != qm {
        return Err(Error::BadParameter(format!(
            "codeword length {} != q^m = {qm}",
            c.len()
        )));
    }
    let top = ext.top();
    let base = ext.base();
    let mut acc = top.zero();
    if s == 0 && c[0] != 0 {
        acc = ext.embed(&base.element(c[0] as u64))?;
    }
    for (i, &a) in c[1..].iter().enumerate() {
        if a == 0 {
            continue;
        }
        let coeff = ext.embed(&base.element(a as u64))?;
        let term = top.mul(&coeff, &ext.alpha_pow(i as u64 * s))?;
        acc = top.add(&acc, &term)?;
    }
    Ok(acc)
}

/// Outcome of an information-set check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankCertificate {
    pub ok: bool,
    /// rank of the submatrix on the candidate positions
    pub rank: usize,
    /// the code dimension k the rank must reach
    pub expected: usize,
}

/// True iff the positions number k and the k x k submatrix of G on those
/// columns has rank k over GF(q). False is a valid answer; the certificate
/// records the rank found.
///
/// ```
/// use grm_infosets::code::{build_generator_matrix, is_information_set, FieldTables};
/// use grm_infosets::cosets::DefiningSetZ;
/// use grm_infosets::field::{ExtField, ModulusTable};
///
/// let table = ModulusTable::new();
/// let ext = ExtField::new(3, 3, &table)?;
/// let tables = FieldTables::new(ext.base())?;
/// let g = build_generator_matrix(&ext, &DefiningSetZ::grm(3, 3, 1)?, 3200)?;
/// assert_eq!(g.k, 4);
///
/// let cert = is_information_set(&g, &[0, 1, 3, 15], &tables);
/// assert!(cert.ok && cert.rank == 4);
/// // the points 0, 1 and 2 = -1 lie on a line, so the positions carrying
/// // them (0, 1 and 14) can never be extended to an information set
/// let cert = is_information_set(&g, &[0, 1, 14, 4], &tables);
/// assert!(!cert.ok);
/// # Ok::<(), grm_infosets::Error>(())
/// ```
pub fn is_information_set(
    g: &GeneratorMatrix,
    positions: &[usize],
    t: &FieldTables,
) -> RankCertificate {
    let sub = g.columns(positions);
    let r = rank(sub, t);
    RankCertificate {
        ok: positions.len() == g.k && r == g.k,
        rank: r,
        expected: g.k,
    }
}

/// dim = q^m - |D| for a coset-closed defining set; no matrix needed.
pub fn code_dimension(d: &DefiningSetZ) -> u64 {
    d.n() + 1 - d.len()
}
