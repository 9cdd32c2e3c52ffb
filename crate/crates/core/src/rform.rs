//! Universal r-form on `O_q(M_N)`, extended to `GL` and `SL`.
//!
//! The values `r(x_im, x_kn)` on pairs of generators are obtained by solving
//! the braiding condition
//!
//! ```text
//! sum r(a1, b1) a2 b2 = sum r(a2, b2) b1 a1
//! ```
//!
//! on all generator pairs, pinned by `r(x11, x11) = q` and `r(x11, x22) = 1`.
//! The inverse form `rbar` on generators is the matrix inverse of the table.
//! Both forms extend to words by the product laws
//!
//! ```text
//! r(ab, c)    = sum r(a, c1) r(b, c2)       r(a, bc)    = sum r(a1, c) r(a2, b)
//! rbar(ab, c) = sum rbar(a, c2) rbar(b, c1) rbar(a, bc) = sum rbar(a2, c) rbar(a1, b)
//! ```
//!
//! and to `det_q^{-1}` through the characters `r(det_q, .)` and `r(., det_q)`.
//! The `SL` normalization multiplies `r(a, b)` by `q^{-deg(a) deg(b)/N}`.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap as HashMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::hopf::{self, GLElem};
use crate::qmatrix::{AlgElem, Gen, Monomial};
use crate::scalar::linalg::{Echelon, SparseRow};
use crate::scalar::QScalar;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Which {
    R,
    RBar,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    Gl,
    Sl,
}

type MemoKey = (Which, Vec<Gen>, Vec<Gen>);

/// One-based generator pair indices and the value: `((a, b), (c, d), value)`.
pub type TableEntry = ((usize, usize), (usize, usize), QScalar);

/// Solved generator tables with lazily evaluated extensions.
pub struct RForm {
    n: usize,
    r: Vec<QScalar>,
    rbar: Vec<QScalar>,
    // character values: form(det, x11), form(x11, det), form(det, det)
    det_consts: [[QScalar; 3]; 2],
    memo: RwLock<HashMap<MemoKey, QScalar>>,
}

fn idx(n: usize, a: Gen, b: Gen) -> usize {
    let (a0, a1, b0, b1) = (a.row as usize, a.col as usize, b.row as usize, b.col as usize);
    ((a0 * n + a1) * n + b0) * n + b1
}

fn gen(i: usize, j: usize) -> Gen {
    Gen { row: i as u8, col: j as u8 }
}

fn nf2(n: usize, a: Gen, b: Gen) -> Vec<(Monomial, QScalar)> {
    AlgElem::normal_form_gens(n, &[a, b]).into_terms().into_iter().collect()
}

/// Solves the braiding condition on generator pairs for the table of `r`.
pub fn solve_generator_table(n: usize) -> Result<Vec<QScalar>> {
    let nu = n * n * n * n;
    let mut eqs: BTreeMap<(usize, usize, usize, usize, Monomial), SparseRow> = BTreeMap::new();
    let mut push = |key: (usize, usize, usize, usize), terms: Vec<(Monomial, QScalar)>, u: usize, sign: bool| {
        for (m, c) in terms {
            let row = eqs.entry((key.0, key.1, key.2, key.3, m)).or_default();
            row.push((u, if sign { c } else { -c }));
        }
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        for p in 0..n {
                            // lhs: r(x_im, x_kp) x_mj x_pl
                            push((i, j, k, l), nf2(n, gen(m, j), gen(p, l)), idx(n, gen(i, m), gen(k, p)), true);
                            // rhs: r(x_mj, x_pl) x_kp x_im
                            push((i, j, k, l), nf2(n, gen(k, p), gen(i, m)), idx(n, gen(m, j), gen(p, l)), false);
                        }
                    }
                }
            }
        }
    }
    // extra column nu carries the constant of the pins
    let mut ech = Echelon::new(nu + 1);
    for (_, row) in eqs {
        let mut acc: BTreeMap<usize, QScalar> = BTreeMap::new();
        for (c, v) in row {
            *acc.entry(c).or_default() += &v;
        }
        let row: SparseRow = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if !row.is_empty() {
            ech.insert(row);
        }
    }
    let homogeneous_dim = nu - ech.rank();
    ech.insert(vec![(idx(n, gen(0, 0), gen(0, 0)), QScalar::one()), (nu, -QScalar::q_pow(n, 1))]);
    if n >= 2 {
        ech.insert(vec![(idx(n, gen(0, 0), gen(1, 1)), QScalar::one()), (nu, -QScalar::one())]);
    }
    let ker = ech.kernel();
    if ker.len() != 1 {
        return Err(Error::InconsistentConvention(format!(
            "solution space of dimension {} after pinning (unpinned kernel dimension {})",
            ker.len(),
            homogeneous_dim
        )));
    }
    let v = &ker[0];
    let t = &v[nu];
    if t.is_zero() {
        return Err(Error::InconsistentConvention("pins are incompatible with the braiding condition".into()));
    }
    v[..nu]
        .iter()
        .map(|x| {
            x.divide_exact(t)
                .map_err(|_| Error::InconsistentConvention("table entries are not Laurent polynomials".into()))
        })
        .collect()
}

/// Dimension of the unpinned solution space of the braiding condition.
pub fn braiding_solution_dim(n: usize) -> usize {
    let nu = n * n * n * n;
    let mut ech = Echelon::new(nu);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut rows: BTreeMap<Monomial, BTreeMap<usize, QScalar>> = BTreeMap::new();
                    for m in 0..n {
                        for p in 0..n {
                            for (mono, c) in nf2(n, gen(m, j), gen(p, l)) {
                                *rows.entry(mono).or_default().entry(idx(n, gen(i, m), gen(k, p))).or_default() += &c;
                            }
                            for (mono, c) in nf2(n, gen(k, p), gen(i, m)) {
                                *rows.entry(mono).or_default().entry(idx(n, gen(m, j), gen(p, l))).or_default() -= &c;
                            }
                        }
                    }
                    for (_, r) in rows {
                        let r: SparseRow = r.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                        if !r.is_empty() {
                            ech.insert(r);
                        }
                    }
                }
            }
        }
    }
    nu - ech.rank()
}

/// Inverse of the `N^2 x N^2` matrix `M[(i,k),(m,p)] = r(x_im, x_kp)`,
/// returned as the table of `rbar(x_mj, x_pl)`.
fn invert_table(n: usize, r: &[QScalar]) -> Result<Vec<QScalar>> {
    let nn = n * n;
    let mut rbar = vec![QScalar::zero(); nn * nn];
    for (j, l) in (0..n).flat_map(|j| (0..n).map(move |l| (j, l))) {
        // solve M v = e_(j,l); columns of v indexed by (m,p), extra column is the rhs
        let mut ech = Echelon::new(nn + 1);
        for i in 0..n {
            for k in 0..n {
                let mut row: SparseRow = Vec::new();
                for m in 0..n {
                    for p in 0..n {
                        let v = &r[idx(n, gen(i, m), gen(k, p))];
                        if !v.is_zero() {
                            row.push((m * n + p, v.clone()));
                        }
                    }
                }
                if (i, k) == (j, l) {
                    row.push((nn, -QScalar::one()));
                }
                ech.insert(row);
            }
        }
        let ker = ech.kernel();
        if ker.len() != 1 || ker[0][nn].is_zero() {
            return Err(Error::InconsistentConvention("generator table is not invertible".into()));
        }
        let t = &ker[0][nn];
        for m in 0..n {
            for p in 0..n {
                let v = ker[0][m * n + p]
                    .divide_exact(t)
                    .map_err(|_| Error::InconsistentConvention("inverse table is not Laurent".into()))?;
                rbar[idx(n, gen(m, j), gen(p, l))] = v;
            }
        }
    }
    Ok(rbar)
}

impl RForm {
    pub fn solve(n: usize) -> Result<RForm> {
        let r = solve_generator_table(n)?;
        let rbar = invert_table(n, &r)?;
        let mut form = RForm { n, r, rbar, det_consts: Default::default(), memo: RwLock::new(HashMap::default()) };
        let det = hopf::det_pow(n, 1);
        let x11 = Monomial::from_sorted(vec![gen(0, 0)]);
        for (wi, w) in [Which::R, Which::RBar].into_iter().enumerate() {
            let mut c = [QScalar::zero(), QScalar::zero(), QScalar::zero()];
            for (m, mc) in det.terms() {
                c[0] += &(mc * &form.eval_words(w, m.gens(), x11.gens()));
                c[1] += &(mc * &form.eval_words(w, x11.gens(), m.gens()));
                for (m2, mc2) in det.terms() {
                    c[2] += &(&(mc * mc2) * &form.eval_words(w, m.gens(), m2.gens()));
                }
            }
            for v in &c {
                if !v.is_unit() {
                    return Err(Error::InconsistentConvention("det pairing is not a unit".into()));
                }
            }
            form.det_consts[wi] = c;
        }
        Ok(form)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `form(x_ab, x_cd)` with one-based indices.
    pub fn table_entry(&self, which: Which, a: (usize, usize), b: (usize, usize)) -> QScalar {
        let t = match which {
            Which::R => &self.r,
            Which::RBar => &self.rbar,
        };
        t[idx(self.n, gen(a.0 - 1, a.1 - 1), gen(b.0 - 1, b.1 - 1))].clone()
    }

    /// Nonzero table entries, one-based: `((a, b), (c, d), value)`.
    pub fn table(&self, which: Which) -> Vec<TableEntry> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = self.table_entry(which, (a + 1, b + 1), (c + 1, d + 1));
                        if !v.is_zero() {
                            out.push(((a + 1, b + 1), (c + 1, d + 1), v));
                        }
                    }
                }
            }
        }
        out
    }

    /// Evaluates on raw words (not necessarily normal ordered).
    pub fn eval_words(&self, which: Which, u: &[Gen], w: &[Gen]) -> QScalar {
        if u.is_empty() || w.is_empty() {
            let diag = u.iter().chain(w).all(|g| g.row == g.col);
            return QScalar::from_int(diag as i64);
        }
        let key = (which, u.to_vec(), w.to_vec());
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return v.clone();
        }
        let v = if u.len() == 1 && w.len() == 1 {
            let t = match which {
                Which::R => &self.r,
                Which::RBar => &self.rbar,
            };
            t[idx(self.n, u[0], w[0])].clone()
        } else if u.len() == 1 {
            self.eval_gen_word(which, u[0], w)
        } else {
            self.split_first(which, u, w)
        };
        self.memo.write().unwrap().insert(key, v.clone());
        v
    }

    // r(h u', w) = sum_p r(h, w_(p)) r(u', w^(p)) with Delta(w) = sum_p w_(p) (x) w^(p) on raw words;
    // rbar swaps the two coproduct legs
    fn split_first(&self, which: Which, u: &[Gen], w: &[Gen]) -> QScalar {
        let n = self.n;
        let e = w.len();
        let mut acc = QScalar::zero();
        let mut p = vec![0u8; e];
        loop {
            let left: Vec<Gen> = w.iter().zip(&p).map(|(g, &k)| Gen { row: g.row, col: k }).collect();
            let right: Vec<Gen> = w.iter().zip(&p).map(|(g, &k)| Gen { row: k, col: g.col }).collect();
            let (first, rest) = match which {
                Which::R => (&left, &right),
                Which::RBar => (&right, &left),
            };
            let a = self.eval_gen_word(which, u[0], first);
            if !a.is_zero() {
                let b = self.eval_words(which, &u[1..], rest);
                if !b.is_zero() {
                    acc += &(&a * &b);
                }
            }
            // next index tuple
            let mut t = 0;
            loop {
                if t == e {
                    return acc;
                }
                p[t] += 1;
                if (p[t] as usize) < n {
                    break;
                }
                p[t] = 0;
                t += 1;
            }
        }
    }

    // r(x_ij, g1 rest) = sum_m r(x_im, rest) r(x_mj, g1)
    // rbar(x_ij, g1 rest) = sum_m rbar(x_mj, rest) rbar(x_im, g1)
    fn eval_gen_word(&self, which: Which, h: Gen, w: &[Gen]) -> QScalar {
        if w.len() == 1 {
            return self.eval_words(which, &[h], w);
        }
        let key = (which, vec![h], w.to_vec());
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return v.clone();
        }
        let mut acc = QScalar::zero();
        for m in 0..self.n as u8 {
            let (a, b) = match which {
                Which::R => (Gen { row: h.row, col: m }, Gen { row: m, col: h.col }),
                Which::RBar => (Gen { row: m, col: h.col }, Gen { row: h.row, col: m }),
            };
            let x = self.eval_gen_word(which, a, &w[1..]);
            if x.is_zero() {
                continue;
            }
            let y = self.eval_words(which, &[b], &w[..1]);
            acc += &(&x * &y);
        }
        self.memo.write().unwrap().insert(key, acc.clone());
        acc
    }

    /// `form(a, b)` on `O_q(GL_N)` or `O_q(SL_N)`.
    pub fn eval(&self, which: Which, norm: Norm, a: &GLElem, b: &GLElem) -> QScalar {
        let n = self.n as i64;
        let wi = match which {
            Which::R => 0,
            Which::RBar => 1,
        };
        let [cl, cr, cdd] = &self.det_consts[wi];
        let (k, l) = (a.det_power() as i64, b.det_power() as i64);
        let mut acc = QScalar::zero();
        for (m1, c1) in a.num().terms() {
            for (m2, c2) in b.num().terms() {
                let v = self.eval_words(which, m1.gens(), m2.gens());
                if v.is_zero() {
                    continue;
                }
                let (d1, d2) = (m1.degree() as i64, m2.degree() as i64);
                let twist = &(&cl.powi(-k * d2).unwrap() * &cr.powi(-l * d1).unwrap()) * &cdd.powi(k * l).unwrap();
                let mut t = &(&(c1 * c2) * &v) * &twist;
                if norm == Norm::Sl {
                    let (za, zb) = (d1 - n * k, d2 - n * l);
                    let e = za * zb;
                    t = t.shift(match which {
                        Which::R => -e as i32,
                        Which::RBar => e as i32,
                    });
                }
                acc += &t;
            }
        }
        acc
    }

    /// `(r * rbar)(a, b) = eps(a) eps(b) = (rbar * r)(a, b)`.
    pub fn convolution_identity(&self, norm: Norm, a: &GLElem, b: &GLElem) -> bool {
        let (da, db) = (hopf::coproduct(a), hopf::coproduct(b));
        let expected = &hopf::counit(a) * &hopf::counit(b);
        [(Which::R, Which::RBar), (Which::RBar, Which::R)].into_iter().all(|(w1, w2)| {
            let mut acc = QScalar::zero();
            for (la, ca) in da.terms() {
                for (lb, cb) in db.terms() {
                    let x = self.eval(w1, norm, &da.leg_elem(la, 0), &db.leg_elem(lb, 0));
                    if x.is_zero() {
                        continue;
                    }
                    let y = self.eval(w2, norm, &da.leg_elem(la, 1), &db.leg_elem(lb, 1));
                    acc += &(&(ca * cb) * &(&x * &y));
                }
            }
            acc == expected
        })
    }

    /// `sum r(a1, b1) a2 b2 rbar(a3, b3) = b a`.
    pub fn braiding_identity(&self, norm: Norm, a: &GLElem, b: &GLElem) -> bool {
        let (da, db) = (hopf::double_coproduct(a), hopf::double_coproduct(b));
        let mut acc = GLElem::zero(self.n);
        for (la, ca) in da.terms() {
            for (lb, cb) in db.terms() {
                let x = self.eval(Which::R, norm, &da.leg_elem(la, 0), &db.leg_elem(lb, 0));
                if x.is_zero() {
                    continue;
                }
                let y = self.eval(Which::RBar, norm, &da.leg_elem(la, 2), &db.leg_elem(lb, 2));
                if y.is_zero() {
                    continue;
                }
                let mid = da.leg_elem(la, 1).mul(&db.leg_elem(lb, 1));
                acc = acc.add(&mid.scale(&(&(ca * cb) * &(&x * &y))));
            }
        }
        acc.sub(&b.mul(a)).is_zero()
    }

    /// Both product laws for `which` on the triple `(a, b, c)`.
    pub fn product_laws(&self, which: Which, norm: Norm, a: &GLElem, b: &GLElem, c: &GLElem) -> bool {
        // rbar takes the legs of the split argument in the opposite order
        let (first, second) = match which {
            Which::R => (0, 1),
            Which::RBar => (1, 0),
        };
        let dc = hopf::coproduct(c);
        let mut left = QScalar::zero();
        for (l, k) in dc.terms() {
            let x = self.eval(which, norm, a, &dc.leg_elem(l, first));
            if !x.is_zero() {
                left += &(k * &(&x * &self.eval(which, norm, b, &dc.leg_elem(l, second))));
            }
        }
        let da = hopf::coproduct(a);
        let mut right = QScalar::zero();
        for (l, k) in da.terms() {
            let x = self.eval(which, norm, &da.leg_elem(l, first), c);
            if !x.is_zero() {
                right += &(k * &(&x * &self.eval(which, norm, &da.leg_elem(l, second), b)));
            }
        }
        left == self.eval(which, norm, &a.mul(b), c) && right == self.eval(which, norm, a, &b.mul(c))
    }

    /// `psi(v) = sum r(S(pi v1), pi v3) v2` (`phi` uses `rbar`).
    pub fn psi(&self, v: &GLElem, which: Which, norm: Norm) -> GLElem {
        let n = self.n;
        let d3 = hopf::double_coproduct(v);
        let mut acc = GLElem::zero(n);
        let mut memo: HashMap<(Monomial, Monomial, u32), QScalar> = HashMap::default();
        for (legs, c) in d3.terms() {
            let key = (legs[0].0.clone(), legs[2].0.clone(), legs[0].1);
            let f = memo
                .entry(key)
                .or_insert_with(|| {
                    let s1 = hopf::antipode(&d3.leg_elem(legs, 0));
                    self.eval(which, norm, &s1, &d3.leg_elem(legs, 2))
                })
                .clone();
            if f.is_zero() {
                continue;
            }
            acc = acc.add(&d3.leg_elem(legs, 1).scale(&(c * &f)));
        }
        acc
    }
}
