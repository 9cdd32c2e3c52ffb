//! Graded coinvariants of the coactions on `A = O_q(M_N)`.
//!
//! In degree `d` the coinvariants are the kernel of `v -> gamma(v) - v (x) 1`
//! on `A_d`. The unknowns are restricted to words whose torus weight is
//! compatible with invariance (projecting the second leg to the diagonal
//! torus shows every coinvariant lives there):
//!
//! - `alpha`, `beta`: the multiset of row indices equals that of column indices;
//! - `rho`: every column index occurs equally often (`GL`: only `d = 0`);
//! - `lambda`: every row index occurs equally often (`GL`: only `d = 0`).
//!
//! Tensor coordinates are made comparable by lifting each leg to a common
//! det power (`GL` legs) or a common degree in its residue class mod `N`
//! (`SL` legs). Which equations to eliminate is decided by a rank computation
//! after evaluating `s` at a random point mod a prime; the exact kernel of
//! those equations is then checked against every equation, and any violated
//! one is eliminated too, so the answer is always exact.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coact::{coact_word, is_coinvariant, CoactionKind, Kind};
use crate::error::{Error, Result};
use crate::hopf::{self, det_pow, GLElem, Slot, TensorElem};
use crate::qmatrix::{pbw_basis, AlgElem, Monomial};
use crate::scalar::linalg::{independent_rows, primitive, Echelon, ModEval, SparseRow};
use crate::scalar::QScalar;

const SEED: u64 = 0x5eed_c017;

/// Basis of the coinvariants of one degree.
#[derive(Clone, Debug)]
pub struct CoinvBasis {
    pub degree: usize,
    pub kind: CoactionKind,
    pub basis: Vec<AlgElem>,
}

impl CoinvBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Words of degree `d` that can occur in a coinvariant.
pub fn candidate_monomials(ck: CoactionKind, n: usize, d: usize) -> Vec<Monomial> {
    let all_equal = |v: Vec<usize>| v.windows(2).all(|w| w[0] == w[1]);
    pbw_basis(n, d)
        .into_iter()
        .filter(|m| match ck.kind {
            Kind::Alpha | Kind::Beta | Kind::AlphaBar | Kind::BetaBar => m.row_counts(n) == m.col_counts(n),
            Kind::Rho => match ck.target {
                Slot::Gl => d == 0,
                Slot::Sl => all_equal(m.col_counts(n)),
            },
            Kind::Lambda => match ck.target {
                Slot::Gl => d == 0,
                Slot::Sl => all_equal(m.row_counts(n)),
            },
        })
        .collect()
}

type Coord = Vec<Monomial>;

/// Rewrites tensors over a shared coordinate system; see the module docs.
pub fn flatten(ts: &[TensorElem]) -> Vec<HashMap<Coord, QScalar>> {
    let Some(first) = ts.first() else { return Vec::new() };
    let n = first.n();
    let slots = first.slots().to_vec();
    let arity = slots.len();
    let class_key = |legs: &[hopf::Leg]| -> Vec<usize> {
        legs.iter().zip(&slots).filter(|(_, s)| **s == Slot::Sl).map(|(l, _)| l.0.degree() % n).collect()
    };
    let mut targets: HashMap<Vec<usize>, Vec<usize>> = HashMap::default();
    for t in ts {
        for legs in t.terms().keys() {
            let e = targets.entry(class_key(legs)).or_insert_with(|| vec![0; arity]);
            for s in 0..arity {
                let v = match slots[s] {
                    Slot::Gl => legs[s].1 as usize,
                    Slot::Sl => legs[s].0.degree(),
                };
                e[s] = e[s].max(v);
            }
        }
    }
    let mut lifts: HashMap<(Monomial, usize), Vec<(Monomial, QScalar)>> = HashMap::default();
    let mut out = Vec::with_capacity(ts.len());
    for t in ts {
        let mut acc: HashMap<Coord, QScalar> = HashMap::default();
        for (legs, c) in t.terms() {
            let target = &targets[&class_key(legs)];
            let mut parts: Vec<(Coord, QScalar)> = vec![(Vec::with_capacity(arity), c.clone())];
            for s in 0..arity {
                let e = match slots[s] {
                    Slot::Gl => target[s] - legs[s].1 as usize,
                    Slot::Sl => (target[s] - legs[s].0.degree()) / n,
                };
                let lifted = lifts.entry((legs[s].0.clone(), e)).or_insert_with(|| {
                    if e == 0 {
                        vec![(legs[s].0.clone(), QScalar::one())]
                    } else {
                        AlgElem::monomial(n, legs[s].0.clone(), QScalar::one())
                            .mul(&det_pow(n, e as u32))
                            .into_terms()
                            .into_iter()
                            .collect()
                    }
                });
                let mut next = Vec::with_capacity(parts.len() * lifted.len());
                for (p, pc) in &parts {
                    for (m, mc) in lifted.iter() {
                        let mut p = p.clone();
                        p.push(m.clone());
                        next.push((p, pc * mc));
                    }
                }
                parts = next;
            }
            for (k, v) in parts {
                *acc.entry(k).or_default() += &v;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        out.push(acc);
    }
    out
}

/// Kernel of the linear map sending unknown `i` to `images[i]`, each image
/// a sparse vector over arbitrary coordinates.
///
/// Rows independent after evaluation mod a prime are eliminated exactly;
/// every remaining equation is then checked against the kernel and any
/// violated one is eliminated as well, so the result is exact.
pub fn exact_kernel(images: &[HashMap<Coord, QScalar>], seed: u64) -> Vec<Vec<QScalar>> {
    let nu = images.len();
    if nu == 0 {
        return Vec::new();
    }
    let mut eqs: HashMap<&Coord, SparseRow> = HashMap::default();
    for (i, img) in images.iter().enumerate() {
        for (k, v) in img {
            eqs.entry(k).or_default().push((i, v.clone()));
        }
    }
    // sparse rows with short entries first: they make cheap exact pivots
    let weight = |r: &SparseRow| (r.len(), r.iter().map(|(_, x)| x.len()).sum::<usize>());
    let mut keys: Vec<&Coord> = eqs.keys().copied().collect();
    keys.sort_by(|a, b| weight(&eqs[*a]).cmp(&weight(&eqs[*b])).then_with(|| a.cmp(b)));
    let rows: Vec<&SparseRow> = keys.iter().map(|k| &eqs[*k]).collect();
    let ev = ModEval::new(ChaCha8Rng::seed_from_u64(seed).gen());
    let mut ech = Echelon::new(nu);
    for i in independent_rows(rows.iter().copied(), nu, &ev) {
        ech.insert(rows[i].clone());
    }
    let mut ker = ech.kernel();
    for row in rows {
        if ker.is_empty() {
            break;
        }
        let violated = ker.iter().any(|v| {
            let mut acc = QScalar::zero();
            for (i, x) in row {
                if !v[*i].is_zero() {
                    acc += &(x * &v[*i]);
                }
            }
            !acc.is_zero()
        });
        if violated && ech.insert(row.clone()) {
            ker = ech.kernel();
        }
    }
    ker
}

fn vectors_to_elems(n: usize, monos: &[Monomial], vecs: Vec<Vec<QScalar>>) -> Vec<AlgElem> {
    vecs.into_iter()
        .map(|v| AlgElem::from_terms(n, monos.iter().cloned().zip(v).filter(|(_, c)| !c.is_zero())))
        .collect()
}

/// Brings a spanning set of one graded piece to reduced echelon form with
/// respect to graded lexicographic word order, scaled to primitive Laurent rows.
pub fn echelon_basis(n: usize, elems: &[AlgElem]) -> Vec<AlgElem> {
    let mut monos: Vec<Monomial> = elems.iter().flat_map(|e| e.terms().keys().cloned()).collect();
    monos.sort();
    monos.dedup();
    let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut ech = Echelon::new(monos.len());
    for e in elems {
        let row: SparseRow = e.terms().iter().map(|(m, c)| (index[m], c.clone())).collect();
        ech.insert(row);
    }
    ech.rref()
        .into_iter()
        .rev()
        .map(|(_, dense)| {
            let v = crate::scalar::linalg::clear_denominators(&dense);
            let row: SparseRow = v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
            let row = primitive(row);
            AlgElem::from_terms(n, row.into_iter().map(|(i, c)| (monos[i].clone(), c)))
        })
        .collect()
}

type BasisCache = Mutex<HashMap<(CoactionKind, usize, usize), CoinvBasis>>;

fn basis_cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::default()))
}

/// Order-preserving map, across threads with the `parallel` feature.
#[cfg(feature = "parallel")]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Coinvariants of degree `d` for a coaction on `A`. Results are cached
/// for the lifetime of the process.
pub fn coinvariant_basis(ck: CoactionKind, n: usize, d: usize) -> CoinvBasis {
    if let Some(b) = basis_cache().lock().unwrap().get(&(ck, n, d)) {
        return b.clone();
    }
    let b = compute_coinvariant_basis(ck, n, d);
    basis_cache().lock().unwrap().insert((ck, n, d), b.clone());
    b
}

fn compute_coinvariant_basis(ck: CoactionKind, n: usize, d: usize) -> CoinvBasis {
    let monos = candidate_monomials(ck, n, d);
    let images: Vec<TensorElem> = par_map(&monos, |m| {
        let a = GLElem::from_alg(AlgElem::monomial(n, m.clone(), QScalar::one()));
        coact_word(ck, n, m).sub(&crate::coact::trivial_image(ck, &a))
    });
    let flat = flatten(&images);
    let ker = exact_kernel(&flat, SEED ^ d as u64);
    let basis = echelon_basis(n, &vectors_to_elems(n, &monos, ker));
    CoinvBasis { degree: d, kind: ck, basis }
}

/// Elements `v` of degree `d` with `gamma(v) = v (x) det_q^j` over `GL`.
pub fn relative_invariant_basis(kind: Kind, n: usize, d: usize, j: i64) -> Vec<AlgElem> {
    let ck = CoactionKind::new(kind, Slot::Gl);
    // the torus weight of a relative invariant is j times that of det_q
    let monos: Vec<Monomial> = pbw_basis(n, d)
        .into_iter()
        .filter(|m| match kind {
            Kind::Rho => m.col_counts(n).iter().all(|&c| c as i64 == j),
            Kind::Lambda => m.row_counts(n).iter().all(|&c| c as i64 == j),
            _ => j == 0 && m.row_counts(n) == m.col_counts(n),
        })
        .collect();
    let detj = crate::coact::det_power_elem(n, j);
    let images: Vec<TensorElem> = monos
        .iter()
        .map(|m| {
            let a = GLElem::from_alg(AlgElem::monomial(n, m.clone(), QScalar::one()));
            let rhs = if kind == Kind::Lambda {
                TensorElem::pure(&ck.slots(), &[&detj, &a], &QScalar::one())
            } else {
                TensorElem::pure(&ck.slots(), &[&a, &detj], &QScalar::one())
            };
            coact_word(ck, n, m).sub(&rhs)
        })
        .collect();
    let ker = exact_kernel(&flatten(&images), SEED);
    echelon_basis(n, &vectors_to_elems(n, &monos, ker))
}

/// Dimensions of the coinvariant pieces of degrees `0..=max_degree`.
pub fn hilbert_prefix(ck: CoactionKind, n: usize, max_degree: usize) -> Vec<usize> {
    let degrees: Vec<usize> = (0..=max_degree).collect();
    par_map(&degrees, |&d| coinvariant_basis(ck, n, d).dim())
}

/// Number of partitions of `d` into parts of size at most `k`.
pub fn partition_count(d: usize, k: usize) -> usize {
    let mut p = vec![0usize; d + 1];
    p[0] = 1;
    for part in 1..=k {
        for s in part..=d {
            p[s] += p[s - part];
        }
    }
    p[d]
}

/// Rank of a family of elements of `A`.
pub fn rank(elems: &[AlgElem]) -> usize {
    let mut index: HashMap<Monomial, usize> = HashMap::default();
    for e in elems {
        for m in e.terms().keys() {
            let k = index.len();
            index.entry(m.clone()).or_insert(k);
        }
    }
    let mut ech = Echelon::new(index.len());
    for e in elems {
        let mut row: SparseRow = e.terms().iter().map(|(m, c)| (index[m], c.clone())).collect();
        row.sort_by_key(|(i, _)| *i);
        ech.insert(row);
    }
    ech.rank()
}

/// Whether two families span the same subspace.
pub fn same_span(a: &[AlgElem], b: &[AlgElem]) -> bool {
    let ra = rank(a);
    let rb = rank(b);
    let both: Vec<AlgElem> = a.iter().chain(b).cloned().collect();
    ra == rb && rank(&both) == ra
}

/// Products `g_{i1} ... g_{ik}` with `i1 <= ... <= ik` of total degree `d`.
pub fn ordered_products(n: usize, gens: &[AlgElem], d: usize) -> Vec<AlgElem> {
    let degs: Vec<usize> = gens.iter().map(|g| g.homogeneous_degree().unwrap_or(0)).collect();
    let mut out = Vec::new();
    fn rec(gens: &[AlgElem], degs: &[usize], start: usize, left: usize, cur: AlgElem, out: &mut Vec<AlgElem>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for i in start..gens.len() {
            if degs[i] == 0 || degs[i] > left {
                continue;
            }
            rec(gens, degs, i, left - degs[i], cur.mul(&gens[i]), out);
        }
    }
    rec(gens, &degs, 0, d, AlgElem::one(n), &mut out);
    out
}

/// A minimal homogeneous generating set of the coinvariants up to degree `max_degree`.
pub fn generators_up_to(ck: CoactionKind, n: usize, max_degree: usize) -> Vec<AlgElem> {
    let degrees: Vec<usize> = (1..=max_degree).collect();
    let bases = par_map(&degrees, |&d| coinvariant_basis(ck, n, d));
    let mut gens: Vec<AlgElem> = Vec::new();
    for b in bases {
        let mut span = ordered_products(n, &gens, b.degree);
        let mut r = rank(&span);
        for v in b.basis {
            span.push(v.clone());
            let r2 = rank(&span);
            if r2 > r {
                gens.push(v);
                r = r2;
            } else {
                span.pop();
            }
        }
    }
    gens
}

/// Whether ordered products of `gens` form a basis of the coinvariants in
/// every degree up to `max_degree`.
pub fn spanning_check(ck: CoactionKind, n: usize, gens: &[AlgElem], max_degree: usize) -> Result<bool> {
    for g in gens {
        if g.n() != n {
            return Err(Error::SizeMismatch(format!("generator for N = {} in a check for N = {}", g.n(), n)));
        }
        if g.homogeneous_degree().is_none() || !is_coinvariant(ck, &GLElem::from_alg(g.clone())) {
            return Err(Error::NotCoinvariant);
        }
    }
    for d in 0..=max_degree {
        let basis = coinvariant_basis(ck, n, d).basis;
        let prods = ordered_products(n, gens, d);
        if prods.len() != basis.len() || rank(&prods) != prods.len() || !same_span(&prods, &basis) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that the `SL` coinvariants of degree `d` are exactly the `GL`
/// relative invariants `gamma(v) = v (x) det_q^j` of that degree. For
/// `alpha` and `beta` only `j = 0` can occur, since both coactions preserve
/// the `Z`-degree; for `rho` the weight is `j = d / N`.
pub fn relative_invariant_check(kind: Kind, n: usize, d: usize) -> bool {
    let sl = coinvariant_basis(CoactionKind::new(kind, Slot::Sl), n, d).basis;
    let j = match kind {
        Kind::Rho | Kind::Lambda => {
            if !d.is_multiple_of(n) {
                return sl.is_empty();
            }
            (d / n) as i64
        }
        _ => 0,
    };
    let rel = relative_invariant_basis(kind, n, d, j);
    same_span(&sl, &rel)
}

/// Degrees of a generator list.
pub fn degrees(gens: &[AlgElem]) -> Vec<usize> {
    let set: HashSet<usize> = gens.iter().filter_map(|g| g.homogeneous_degree()).collect();
    let mut v: Vec<usize> = set.into_iter().collect();
    v.sort();
    v
}

/// Coinvariant bases for several degrees at once, keyed by degree.
pub fn bases_up_to(ck: CoactionKind, n: usize, max_degree: usize) -> BTreeMap<usize, CoinvBasis> {
    let degrees: Vec<usize> = (0..=max_degree).collect();
    degrees.iter().copied().zip(par_map(&degrees, |&d| coinvariant_basis(ck, n, d))).collect()
}
