//! Exact linear algebra over the fraction field of the Laurent ring.
//!
//! Rows are eliminated fraction-free: a row is combined with a pivot row
//! using cofactors `p/g` and `a/g` (`g` the gcd of the two leading entries)
//! and then divided by the gcd of its entries, which keeps entries small
//! without ever forming fractions. Unit pivots skip the gcd work entirely.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Coeff, QFraction, QScalar};

/// Sparse row: `(column, entry)` pairs, strictly increasing columns, no zeros.
pub type SparseRow = Vec<(usize, QScalar)>;

/// Row echelon form built incrementally.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Reduces `row` against the current pivots; returns the residue.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        while let Some((lead, a)) = row.first().cloned() {
            let Some(piv) = self.rows.get(&lead) else { break };
            let p = &piv[0].1;
            row = if let Some(pinv) = p.unit_inverse() {
                axpy(&row, &(&a * &pinv), piv)
            } else {
                let g = p.gcd(&a);
                let pg = p.divide_exact(&g).unwrap();
                let ag = a.divide_exact(&g).unwrap();
                let scaled: SparseRow = row.iter().map(|(c, x)| (*c, &pg * x)).collect();
                primitive(axpy(&scaled, &ag, piv))
            };
        }
        row
    }

    /// Inserts a row; returns true if the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let r = self.reduce(row);
        if r.is_empty() {
            return false;
        }
        let r = primitive(r);
        self.rows.insert(r[0].0, r);
        true
    }

    /// Vectors of the right kernel, one per free column, with Laurent
    /// entries cleared of common factors.
    pub fn kernel(&self) -> Vec<Vec<QScalar>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.rows.contains_key(c)).collect();
        let mut out = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v: Vec<QFraction> = vec![QFraction::zero(); self.ncols];
            v[f] = QFraction::one();
            for (&c, row) in self.rows.iter().rev() {
                if c > f {
                    continue;
                }
                let mut acc = QFraction::zero();
                for (j, x) in row.iter().skip(1) {
                    if !v[*j].is_zero() {
                        acc = acc.add(&QFraction::from_scalar(x.clone()).mul(&v[*j]));
                    }
                }
                if !acc.is_zero() {
                    let p = QFraction::from_scalar(row[0].1.clone());
                    v[c] = acc.neg().div(&p).expect("pivot is nonzero");
                }
            }
            out.push(clear_denominators(&v));
        }
        out
    }

    /// Reduced row echelon form over the fraction field.
    pub fn rref(&self) -> Vec<(usize, Vec<QFraction>)> {
        let mut out: Vec<(usize, Vec<QFraction>)> = Vec::new();
        for (&c, row) in self.rows.iter().rev() {
            let p = QFraction::from_scalar(row[0].1.clone());
            let mut dense = vec![QFraction::zero(); self.ncols];
            for (j, x) in row {
                dense[*j] = QFraction::from_scalar(x.clone()).div(&p).unwrap();
            }
            // clear entries in already-normalised pivot columns
            for (pc, prow) in &out {
                let f = dense[*pc].clone();
                if !f.is_zero() {
                    for j in 0..self.ncols {
                        if !prow[j].is_zero() {
                            dense[j] = dense[j].sub(&f.mul(&prow[j]));
                        }
                    }
                }
            }
            out.push((c, dense));
        }
        out.reverse();
        out
    }
}

/// `row - a * piv`.
fn axpy(row: &SparseRow, a: &QScalar, piv: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let ci = row.get(i).map(|t| t.0).unwrap_or(usize::MAX);
        let cj = piv.get(j).map(|t| t.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(a * &piv[j].1)));
            j += 1;
        } else {
            let x = &row[i].1 - &(a * &piv[j].1);
            if !x.is_zero() {
                out.push((ci, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Divides a row by the gcd of its entries and by the unit part of its
/// leading entry.
pub fn primitive(row: SparseRow) -> SparseRow {
    if row.is_empty() {
        return row;
    }
    let mut g = QScalar::zero();
    for (_, x) in &row {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    let row: SparseRow =
        if g.is_one() { row } else { row.into_iter().map(|(c, x)| (c, x.divide_exact(&g).unwrap())).collect() };
    let uinv = row[0].1.unit_part().unit_inverse().unwrap();
    row.into_iter().map(|(c, x)| (c, &x * &uinv)).collect()
}

/// Scales a fraction vector to a primitive Laurent vector whose first
/// nonzero entry has lowest exponent zero and leading coefficient one.
pub fn clear_denominators(v: &[QFraction]) -> Vec<QScalar> {
    let mut l = QScalar::one();
    for x in v {
        if !x.is_zero() && !x.denom().is_one() {
            let g = l.gcd(x.denom());
            l = &l * &x.denom().divide_exact(&g).unwrap();
        }
    }
    let scaled: Vec<QScalar> = v
        .iter()
        .map(|x| if x.is_zero() { QScalar::zero() } else { &x.numer().clone() * &l.divide_exact(x.denom()).unwrap() })
        .collect();
    let sparse: SparseRow =
        scaled.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
    let prim = primitive(sparse);
    let mut out = vec![QScalar::zero(); v.len()];
    for (i, x) in prim {
        out[i] = x;
    }
    out
}

/// Kernel of a sparse matrix given by rows.
pub fn kernel_basis<I: IntoIterator<Item = SparseRow>>(rows: I, ncols: usize) -> Vec<Vec<QScalar>> {
    let mut ech = Echelon::new(ncols);
    for r in rows {
        if ech.is_full() {
            break;
        }
        ech.insert(r);
    }
    ech.kernel()
}

/// Evaluation of Laurent rows at a point of `F_p`, `p = 2^61 - 1`.
///
/// Used only to choose which exact rows to eliminate: rows independent
/// after specialisation are independent over the fraction field.
#[derive(Clone, Debug)]
pub struct ModEval {
    s: u64,
    s_inv: u64,
    // s^e for |e| <= POW_RANGE, index e + POW_RANGE
    powers: Vec<u64>,
}

const MOD_P: u64 = (1 << 61) - 1;
const POW_RANGE: i32 = 512;

fn mul_mod(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let r = (x as u64 & MOD_P) + (x >> 61) as u64;
    if r >= MOD_P {
        r - MOD_P
    } else {
        r
    }
}

fn add_mod(a: u64, b: u64) -> u64 {
    let r = a + b;
    if r >= MOD_P {
        r - MOD_P
    } else {
        r
    }
}

fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MOD_P - b
    }
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, MOD_P - 2)
}

fn coeff_mod(c: &Coeff) -> Option<u64> {
    let p = BigInt::from(MOD_P);
    let reduce = |x: &BigInt| -> u64 { (((x % &p) + &p) % &p).to_u64().unwrap() };
    match c {
        Coeff::Small(v) => Some(v.rem_euclid(MOD_P as i64) as u64),
        Coeff::Big(_) => {
            let d = reduce(&c.denom());
            (d != 0).then(|| mul_mod(reduce(&c.numer()), inv_mod(d)))
        }
    }
}

impl ModEval {
    pub fn new(seed: u64) -> Self {
        let s = 2 + seed % (MOD_P - 3);
        let s_inv = inv_mod(s);
        let mut powers = vec![0; 2 * POW_RANGE as usize + 1];
        let mid = POW_RANGE as usize;
        powers[mid] = 1;
        for k in 1..=mid {
            powers[mid + k] = mul_mod(powers[mid + k - 1], s);
            powers[mid - k] = mul_mod(powers[mid - k + 1], s_inv);
        }
        ModEval { s, s_inv, powers }
    }

    fn s_pow(&self, e: i32) -> u64 {
        if e.abs() <= POW_RANGE {
            self.powers[(e + POW_RANGE) as usize]
        } else if e > 0 {
            pow_mod(self.s, e as u64)
        } else {
            pow_mod(self.s_inv, e.unsigned_abs() as u64)
        }
    }

    /// `None` when a coefficient denominator vanishes mod `p`.
    pub fn eval(&self, x: &QScalar) -> Option<u64> {
        let mut acc = 0;
        for (e, c) in x.terms() {
            acc = add_mod(acc, mul_mod(coeff_mod(c)?, self.s_pow(*e)));
        }
        Some(acc)
    }
}

/// Greedily picks rows that are linearly independent after evaluation,
/// stopping at full rank. Rows that cannot be evaluated are always picked.
pub fn independent_rows<'a, I>(rows: I, ncols: usize, ev: &ModEval) -> Vec<usize>
where
    I: IntoIterator<Item = &'a SparseRow>,
{
    // pivot rows are kept fully reduced, so they are supported on their own
    // pivot column and the free columns only
    let mut pivots: Vec<Option<Vec<u64>>> = vec![None; ncols];
    let mut free: Vec<usize> = (0..ncols).collect();
    let mut picked = Vec::new();
    let mut dense = vec![0u64; ncols];
    for (idx, row) in rows.into_iter().enumerate() {
        if free.is_empty() {
            break;
        }
        let mut evals = Vec::with_capacity(row.len());
        for (c, x) in row {
            match ev.eval(x) {
                Some(v) => evals.push((*c, v)),
                None => break,
            }
        }
        if evals.len() < row.len() {
            picked.push(idx);
            continue;
        }
        for &j in &free {
            dense[j] = 0;
        }
        for &(c, v) in &evals {
            match &pivots[c] {
                Some(prow) => {
                    for &j in &free {
                        dense[j] = sub_mod(dense[j], mul_mod(v, prow[j]));
                    }
                }
                None => dense[c] = add_mod(dense[c], v),
            }
        }
        let Some(pos) = free.iter().position(|&j| dense[j] != 0) else { continue };
        let lead = free.remove(pos);
        let inv = inv_mod(dense[lead]);
        let mut new_row = vec![0u64; ncols];
        new_row[lead] = 1;
        for &j in &free {
            new_row[j] = mul_mod(dense[j], inv);
        }
        for prow in pivots.iter_mut().flatten() {
            let f = prow[lead];
            if f != 0 {
                prow[lead] = 0;
                for &j in &free {
                    prow[j] = sub_mod(prow[j], mul_mod(f, new_row[j]));
                }
            }
        }
        pivots[lead] = Some(new_row);
        picked.push(idx);
    }
    picked
}

/// Result of [`fraction_solve`].
#[derive(Clone, Debug)]
pub struct FractionSolution {
    /// Reduced row echelon form of the coefficient matrix, as
    /// `(pivot column, row)` pairs.
    pub rref: Vec<(usize, Vec<QFraction>)>,
    /// One solution of `M x = rhs`, if the system is consistent.
    pub particular: Option<Vec<QFraction>>,
    /// Basis of `{ v | M v = 0 }`.
    pub kernel: Vec<Vec<QFraction>>,
}

/// Solves `M x = rhs` exactly over the fraction field.
pub fn fraction_solve(matrix: &[Vec<QFraction>], rhs: &[QFraction]) -> FractionSolution {
    let ncols = matrix.first().map(|r| r.len()).unwrap_or(0);
    // augmented system: last column carries -rhs so that (x, 1) is in the kernel
    let mut ech_aug = Echelon::new(ncols + 1);
    let mut ech = Echelon::new(ncols);
    for (r, row) in matrix.iter().enumerate() {
        let mut fr: Vec<QFraction> = row.clone();
        fr.push(rhs.get(r).cloned().unwrap_or_else(QFraction::zero).neg());
        let cleared = clear_row(&fr);
        ech_aug.insert(cleared.clone());
        ech.insert(cleared.into_iter().filter(|(c, _)| *c < ncols).collect());
    }
    let kernel: Vec<Vec<QFraction>> =
        ech.kernel().into_iter().map(|v| v.into_iter().map(QFraction::from_scalar).collect()).collect();
    let particular = if ech_aug.rows.contains_key(&ncols) {
        None
    } else {
        let rref = ech_aug.rref();
        let mut x = vec![QFraction::zero(); ncols];
        for (c, row) in &rref {
            x[*c] = row[ncols].neg();
        }
        Some(x)
    };
    FractionSolution { rref: ech.rref(), particular, kernel }
}

fn clear_row(row: &[QFraction]) -> SparseRow {
    let mut l = QScalar::one();
    for x in row {
        if !x.is_zero() && !x.denom().is_one() {
            let g = l.gcd(x.denom());
            l = &l * &x.denom().divide_exact(&g).unwrap();
        }
    }
    row.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.numer() * &l.divide_exact(x.denom()).unwrap()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(k: i32) -> QScalar {
        QScalar::q_pow(1, k)
    }

    fn fr(x: QScalar) -> QFraction {
        QFraction::from_scalar(x)
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let m = vec![vec![QFraction::one(), QFraction::zero()], vec![QFraction::zero(), QFraction::one()]];
        let sol = fraction_solve(&m, &[QFraction::zero(), QFraction::zero()]);
        assert!(sol.kernel.is_empty());
        assert_eq!(sol.particular.unwrap(), vec![QFraction::zero(), QFraction::zero()]);
    }

    #[test]
    fn single_relation_kernel() {
        let m = vec![vec![fr(q(1)), fr(-QScalar::one())]];
        let sol = fraction_solve(&m, &[QFraction::zero()]);
        assert_eq!(sol.kernel.len(), 1);
        assert_eq!(sol.kernel[0], vec![QFraction::one(), fr(q(1))]);
    }

    #[test]
    fn inconsistent_system() {
        let m = vec![vec![QFraction::one()], vec![QFraction::one()]];
        let sol = fraction_solve(&m, &[QFraction::one(), QFraction::zero()]);
        assert!(sol.particular.is_none());
    }

    fn random_scalar(rng: &mut ChaCha8Rng) -> QScalar {
        QScalar::from_terms(
            (0..rng.gen_range(0..3)).map(|_| {
                (rng.gen_range(-2..3), num_rational::BigRational::from_integer(rng.gen_range(-3i64..4).into()))
            }),
        )
    }

    #[test]
    fn random_kernels_satisfy_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            // rank-deficient 4x4: last row is a combination of the first two
            let mut m: Vec<Vec<QScalar>> = (0..3).map(|_| (0..4).map(|_| random_scalar(&mut rng)).collect()).collect();
            let c1 = random_scalar(&mut rng);
            let c2 = random_scalar(&mut rng);
            let last: Vec<QScalar> = (0..4).map(|j| &(&c1 * &m[0][j]) + &(&c2 * &m[1][j])).collect();
            m.push(last);
            let fm: Vec<Vec<QFraction>> = m.iter().map(|r| r.iter().cloned().map(fr).collect()).collect();
            let sol = fraction_solve(&fm, &vec![QFraction::zero(); 4]);
            assert!(!sol.kernel.is_empty());
            for v in &sol.kernel {
                for row in &m {
                    let mut acc = QFraction::zero();
                    for j in 0..4 {
                        acc = acc.add(&fr(row[j].clone()).mul(&v[j]));
                    }
                    assert!(acc.is_zero());
                }
            }
            // rank + nullity = columns
            assert_eq!(sol.rref.len() + sol.kernel.len(), 4);
        }
    }

    #[test]
    fn rref_has_unit_pivots() {
        let m = vec![
            vec![fr(q(1)), fr(q(2)), QFraction::one()],
            vec![fr(&q(1) + &QScalar::one()), QFraction::zero(), fr(q(-1))],
        ];
        let sol = fraction_solve(&m, &[QFraction::zero(), QFraction::zero()]);
        for (i, (c, row)) in sol.rref.iter().enumerate() {
            assert_eq!(row[*c], QFraction::one());
            for (j, (c2, _)) in sol.rref.iter().enumerate() {
                if i != j {
                    assert!(sol.rref[j].1[*c].is_zero() || *c2 == *c);
                }
            }
        }
    }

    #[test]
    fn mersenne_arithmetic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let (a, b) = (rng.gen_range(0..MOD_P), rng.gen_range(0..MOD_P));
            assert_eq!(mul_mod(a, b) as u128, a as u128 * b as u128 % MOD_P as u128);
            assert_eq!(add_mod(a, b) as u128, (a as u128 + b as u128) % MOD_P as u128);
            assert_eq!(add_mod(sub_mod(a, b), b), a);
        }
        assert_eq!(mul_mod(inv_mod(12345), 12345), 1);
    }

    #[test]
    fn evaluation_is_a_ring_map() {
        let ev = ModEval::new(99);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let (a, b) = (random_scalar(&mut rng), random_scalar(&mut rng));
            let (x, y) = (ev.eval(&a).unwrap(), ev.eval(&b).unwrap());
            assert_eq!(ev.eval(&(&a * &b)).unwrap(), mul_mod(x, y));
            assert_eq!(ev.eval(&(&a + &b)).unwrap(), add_mod(x, y));
        }
        let half = QScalar::from_rational(num_rational::BigRational::new(1.into(), 2.into()));
        assert_eq!(mul_mod(ev.eval(&half).unwrap(), 2), 1);
        assert_eq!(ev.eval(&QScalar::s_pow(700)).unwrap(), pow_mod(ev.s, 700));
    }

    #[test]
    fn selected_rows_have_full_exact_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ev = ModEval::new(1);
        for _ in 0..20 {
            let ncols = 5;
            let mut rows: Vec<SparseRow> = (0..3)
                .map(|_| (0..ncols).map(|c| (c, random_scalar(&mut rng))).filter(|(_, x)| !x.is_zero()).collect())
                .collect();
            // two dependent rows
            for _ in 0..2 {
                let (c1, c2) = (random_scalar(&mut rng), random_scalar(&mut rng));
                let mut comb = Vec::new();
                for c in 0..ncols {
                    let at =
                        |r: &SparseRow| r.iter().find(|(j, _)| *j == c).map(|(_, x)| x.clone()).unwrap_or_default();
                    let x = &(&c1 * &at(&rows[0])) + &(&c2 * &at(&rows[1]));
                    if !x.is_zero() {
                        comb.push((c, x));
                    }
                }
                rows.push(comb);
            }
            let mut exact = Echelon::new(ncols);
            for r in &rows {
                exact.insert(r.clone());
            }
            let picked = independent_rows(&rows, ncols, &ev);
            assert_eq!(picked.len(), exact.rank());
            let mut sel = Echelon::new(ncols);
            assert!(picked.iter().all(|&i| sel.insert(rows[i].clone())));
        }
    }
}
