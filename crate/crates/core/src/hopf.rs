//! Hopf structure on `O_q(M_N)` and its localization `O_q(GL_N)`.
//!
//! A [`GLElem`] is a pair `(num, k)` standing for `num * det_q^{-k}`, kept
//! with `k` minimal. Divisibility by `det_q` is decided by long division on
//! leading monomials, which is exact because the algebra is a domain and the
//! leading monomial of a product is the product of leading monomials.
//!
//! `O_q(SL_N)` has no normal form of its own. An element of `SL` is handled
//! through a `GL` representative: two homogeneous representatives whose
//! degrees agree mod `N` are compared after multiplying the lower one by a
//! power of `det_q`, which is injective on each graded piece.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap as HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::qmatrix::{self, lex_exponent_cmp, mul_monomials, AlgElem, Gen, Monomial, MAX_N};
use crate::scalar::{Notation, QScalar};

/// Element `num * det_q^{-det_power}` of `O_q(GL_N)` with minimal `det_power`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GLElem {
    num: AlgElem,
    det_power: u32,
}

/// Terms `(left, right, coefficient)` of the coproduct of one PBW word.
pub type CoproductTerms = Vec<(Monomial, Monomial, QScalar)>;

struct Caches {
    det_pows: RwLock<Vec<Arc<AlgElem>>>,
    coproducts: RwLock<HashMap<Monomial, Arc<CoproductTerms>>>,
    cofactors: RwLock<HashMap<Monomial, Arc<AlgElem>>>,
}

fn caches(n: usize) -> &'static Caches {
    static TABLE: OnceLock<Vec<Caches>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        (0..=MAX_N)
            .map(|_| Caches {
                det_pows: RwLock::new(Vec::new()),
                coproducts: RwLock::new(HashMap::default()),
                cofactors: RwLock::new(HashMap::default()),
            })
            .collect()
    });
    &t[n]
}

/// `det_q^e` in `O_q(M_N)`.
pub fn det_pow(n: usize, e: u32) -> Arc<AlgElem> {
    let c = caches(n);
    if let Some(p) = c.det_pows.read().unwrap().get(e as usize) {
        return p.clone();
    }
    let mut w = c.det_pows.write().unwrap();
    if w.is_empty() {
        w.push(Arc::new(AlgElem::one(n)));
    }
    let det = qmatrix::quantum_det(n);
    while w.len() <= e as usize {
        let next = w.last().unwrap().mul(&det);
        w.push(Arc::new(next));
    }
    w[e as usize].clone()
}

/// Exact quotient `a / det_q` in `O_q(M_N)`, or `None` if `det_q` does not divide `a`.
pub fn divide_by_det(a: &AlgElem) -> Option<AlgElem> {
    let n = a.n();
    let det = det_pow(n, 1);
    let (det_lm, _) = det.leading().expect("det is nonzero");
    let det_lm = det_lm.clone();
    let mut rem = a.clone();
    let mut quot = AlgElem::zero(n);
    while let Some((m, c)) = rem.leading() {
        let t = monomial_quotient(m, &det_lm)?;
        let c = c.clone();
        let prod = AlgElem::monomial(n, t.clone(), QScalar::one()).mul(&det);
        let (pm, pc) = prod.leading().expect("product of nonzero elements");
        debug_assert_eq!(lex_exponent_cmp(pm, m), std::cmp::Ordering::Equal);
        let f = c.divide_exact(pc).ok()?;
        rem = rem.sub(&prod.scale(&f));
        quot = quot.add(&AlgElem::monomial(n, t, f));
    }
    Some(quot)
}

/// Multiset difference `m - d` of normal words, if `d` divides `m`.
fn monomial_quotient(m: &Monomial, d: &Monomial) -> Option<Monomial> {
    let mut out = Vec::with_capacity(m.degree().saturating_sub(d.degree()));
    let dg = d.gens();
    let mut j = 0;
    for &g in m.gens() {
        if j < dg.len() && dg[j] == g {
            j += 1;
        } else if j < dg.len() && dg[j] < g {
            return None;
        } else {
            out.push(g);
        }
    }
    (j == dg.len()).then(|| Monomial::from_sorted(out))
}

impl GLElem {
    /// `num * det_q^{-det_power}`, reduced to the minimal det power.
    pub fn new(mut num: AlgElem, mut det_power: u32) -> Self {
        if num.is_zero() {
            return GLElem { num, det_power: 0 };
        }
        while det_power > 0 {
            match divide_by_det(&num) {
                Some(qt) => {
                    num = qt;
                    det_power -= 1;
                }
                None => break,
            }
        }
        GLElem { num, det_power }
    }

    pub fn from_alg(num: AlgElem) -> Self {
        GLElem { num, det_power: 0 }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_alg(AlgElem::zero(n))
    }

    pub fn one(n: usize) -> Self {
        Self::from_alg(AlgElem::one(n))
    }

    pub fn scalar(n: usize, c: QScalar) -> Self {
        Self::from_alg(AlgElem::scalar(n, c))
    }

    /// `det_q^{-k}`.
    pub fn det_inverse(n: usize, k: u32) -> Self {
        GLElem { num: AlgElem::one(n), det_power: k }
    }

    pub fn det(n: usize) -> Self {
        Self::from_alg(qmatrix::quantum_det(n))
    }

    pub fn generator(n: usize, i: usize, j: usize) -> Result<Self> {
        Ok(Self::from_alg(AlgElem::generator(n, i, j)?))
    }

    pub fn n(&self) -> usize {
        self.num.n()
    }

    pub fn num(&self) -> &AlgElem {
        &self.num
    }

    pub fn det_power(&self) -> u32 {
        self.det_power
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Numerator over `det_q^k` for some `k >= det_power`.
    pub fn num_at(&self, k: u32) -> AlgElem {
        assert!(k >= self.det_power);
        if k == self.det_power {
            self.num.clone()
        } else {
            self.num.mul(&det_pow(self.n(), k - self.det_power))
        }
    }

    fn check(&self, o: &GLElem) -> Result<()> {
        if self.n() != o.n() {
            return Err(Error::SizeMismatch(format!("{} vs {}", self.n(), o.n())));
        }
        Ok(())
    }

    pub fn add(&self, o: &GLElem) -> GLElem {
        let k = self.det_power.max(o.det_power);
        GLElem::new(self.num_at(k).add(&o.num_at(k)), k)
    }

    pub fn sub(&self, o: &GLElem) -> GLElem {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> GLElem {
        GLElem { num: self.num.neg(), det_power: self.det_power }
    }

    pub fn scale(&self, c: &QScalar) -> GLElem {
        GLElem::new(self.num.scale(c), self.det_power)
    }

    pub fn mul(&self, o: &GLElem) -> GLElem {
        GLElem::new(self.num.mul(&o.num), self.det_power + o.det_power)
    }

    pub fn try_add(&self, o: &GLElem) -> Result<GLElem> {
        self.check(o)?;
        Ok(self.add(o))
    }

    pub fn try_sub(&self, o: &GLElem) -> Result<GLElem> {
        self.check(o)?;
        Ok(self.sub(o))
    }

    pub fn try_mul(&self, o: &GLElem) -> Result<GLElem> {
        self.check(o)?;
        Ok(self.mul(o))
    }

    pub fn pow(&self, k: u32) -> GLElem {
        let mut acc = GLElem::one(self.n());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Degree in the `Z`-grading when homogeneous.
    pub fn z_degree(&self) -> Option<i64> {
        self.num.homogeneous_degree().map(|d| d as i64 - self.n() as i64 * self.det_power as i64)
    }

    pub fn to_expr(&self) -> String {
        self.to_expr_in(Notation::Q)
    }

    pub fn to_expr_in(&self, notation: Notation) -> String {
        let body = self.num.to_expr_in(notation);
        match self.det_power {
            0 => body,
            k if self.num.len() == 1 && body == "1" => format!("detq^-{}", k),
            k => format!("({})*detq^-{}", body, k),
        }
    }
}

impl fmt::Debug for GLElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl fmt::Display for GLElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

/// Cross-multiplied equality in `O_q(GL_N)`.
pub fn gl_equal(a: &GLElem, b: &GLElem) -> Result<bool> {
    a.check(b)?;
    let lhs = a.num.mul(&det_pow(a.n(), b.det_power));
    let rhs = b.num.mul(&det_pow(a.n(), a.det_power));
    Ok(lhs == rhs)
}

/// `Delta` of a normal word, as `(left, right, coeff)` triples.
pub fn coproduct_monomial(n: usize, m: &Monomial) -> Arc<CoproductTerms> {
    let c = caches(n);
    if let Some(hit) = c.coproducts.read().unwrap().get(m) {
        return hit.clone();
    }
    let out = if m.degree() <= 1 {
        match m.gens().first() {
            None => vec![(Monomial::one(), Monomial::one(), QScalar::one())],
            Some(g) => (0..n as u8)
                .map(|k| {
                    (
                        Monomial::from_sorted(vec![Gen { row: g.row, col: k }]),
                        Monomial::from_sorted(vec![Gen { row: k, col: g.col }]),
                        QScalar::one(),
                    )
                })
                .collect(),
        }
    } else {
        // Delta(m) = Delta(prefix) * Delta(last letter)
        let gens = m.gens();
        let prefix = Monomial::from_sorted(gens[..gens.len() - 1].to_vec());
        let last = Monomial::from_sorted(vec![gens[gens.len() - 1]]);
        let dp = coproduct_monomial(n, &prefix);
        let dl = coproduct_monomial(n, &last);
        let mut acc: HashMap<(Monomial, Monomial), QScalar> = HashMap::default();
        for (a, b, c1) in dp.iter() {
            for (x, y, _) in dl.iter() {
                let left = mul_monomials(n, a, x);
                let right = mul_monomials(n, b, y);
                for (lm, lc) in &left {
                    let lc = c1 * lc;
                    for (rm, rc) in &right {
                        *acc.entry((lm.clone(), rm.clone())).or_default() += &(&lc * rc);
                    }
                }
            }
        }
        let mut v: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (a, b, c)).collect();
        v.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
        v
    };
    let out = Arc::new(out);
    c.coproducts.write().unwrap().insert(m.clone(), out.clone());
    out
}

/// `S(x_ij) * det_q`, the signed complementary minor.
pub fn cofactor(n: usize, g: Gen) -> AlgElem {
    if n == 1 {
        return AlgElem::one(1);
    }
    let (i, j) = g.indices();
    let rows: Vec<usize> = (1..=n).filter(|&r| r != j).collect();
    let cols: Vec<usize> = (1..=n).filter(|&c| c != i).collect();
    let sign = -QScalar::q_pow(n, 1);
    let e = i as i32 - j as i32;
    let c = if e >= 0 { sign.pow(e as u32) } else { sign.unit_inverse().expect("unit").pow((-e) as u32) };
    qmatrix::quantum_minor(n, &rows, &cols).expect("valid complement").scale(&c)
}

/// `S(m) * det_q^{|m|}` for a normal word `m`; the antipode reverses products.
pub fn cofactor_monomial(n: usize, m: &Monomial) -> Arc<AlgElem> {
    let c = caches(n);
    if let Some(hit) = c.cofactors.read().unwrap().get(m) {
        return hit.clone();
    }
    let out = match m.gens().split_first() {
        None => AlgElem::one(n),
        Some((&first, rest)) => {
            let rest = cofactor_monomial(n, &Monomial::from_sorted(rest.to_vec()));
            rest.mul(&cofactor(n, first))
        }
    };
    let out = Arc::new(out);
    c.cofactors.write().unwrap().insert(m.clone(), out.clone());
    out
}

/// `S(a) * det_q^{D}` where every word of `a` has length at most `D`.
pub fn cofactor_alg(a: &AlgElem, d: usize) -> AlgElem {
    let n = a.n();
    let mut acc = AlgElem::zero(n);
    for (m, c) in a.terms() {
        let mut t = cofactor_monomial(n, m).scale(c);
        if m.degree() < d {
            t = t.mul(&det_pow(n, (d - m.degree()) as u32));
        }
        acc = acc.add(&t);
    }
    acc
}

/// The antipode. `S(num * det^{-k}) = det^k * S(num)`.
pub fn antipode(a: &GLElem) -> GLElem {
    let n = a.n();
    let d = a.num.max_degree().unwrap_or(0);
    let num = cofactor_alg(&a.num, d);
    let k = a.det_power as i64 - d as i64;
    if k >= 0 {
        GLElem::new(num.mul(&det_pow(n, k as u32)), 0)
    } else {
        GLElem::new(num, (-k) as u32)
    }
}

pub fn counit(a: &GLElem) -> QScalar {
    a.num.counit()
}

/// Target space of one tensor leg.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// `O_q(M_N)` or `O_q(GL_N)`.
    Gl,
    /// `O_q(SL_N)`, through `GL` representatives.
    Sl,
}

/// One leg: a normal word over `det_q^k`.
pub type Leg = (Monomial, u32);

/// Element of a tensor product of two or three copies of `O_q(GL_N)` or `O_q(SL_N)`.
#[derive(Clone)]
pub struct TensorElem {
    n: usize,
    slots: Vec<Slot>,
    terms: BTreeMap<Vec<Leg>, QScalar>,
}

/// Hash-based accumulator for building large tensors term by term.
pub struct TensorBuilder {
    n: usize,
    slots: Vec<Slot>,
    acc: HashMap<Vec<Leg>, QScalar>,
}

impl TensorBuilder {
    pub fn new(n: usize, slots: &[Slot]) -> Self {
        TensorBuilder { n, slots: slots.to_vec(), acc: HashMap::default() }
    }

    pub fn add_term(&mut self, legs: Vec<Leg>, c: QScalar) {
        if !c.is_zero() {
            *self.acc.entry(legs).or_default() += &c;
        }
    }

    pub fn finish(self) -> TensorElem {
        let terms = self.acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        TensorElem { n: self.n, slots: self.slots, terms }
    }
}

impl TensorElem {
    pub fn zero(n: usize, slots: &[Slot]) -> Self {
        TensorElem { n, slots: slots.to_vec(), terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Leg>, QScalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_slots(mut self, slots: &[Slot]) -> Self {
        assert_eq!(slots.len(), self.slots.len());
        self.slots = slots.to_vec();
        self
    }

    pub fn add_term(&mut self, legs: Vec<Leg>, c: &QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&legs) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&legs);
                }
            }
            None => {
                self.terms.insert(legs, c.clone());
            }
        }
    }

    /// `c * a_1 (x) ... (x) a_r`.
    pub fn pure(slots: &[Slot], legs: &[&GLElem], c: &QScalar) -> Self {
        assert_eq!(slots.len(), legs.len());
        let n = legs[0].n();
        let mut out = TensorElem::zero(n, slots);
        let mut acc: Vec<(Vec<Leg>, QScalar)> = vec![(Vec::new(), c.clone())];
        for l in legs {
            let mut next = Vec::new();
            for (prefix, pc) in &acc {
                for (m, mc) in l.num.terms() {
                    let mut p = prefix.clone();
                    p.push((m.clone(), l.det_power));
                    next.push((p, pc * mc));
                }
            }
            acc = next;
        }
        for (legs, c) in acc {
            out.add_term(legs, &c);
        }
        out
    }

    fn check(&self, o: &TensorElem) -> Result<()> {
        if self.n != o.n || self.slots != o.slots {
            return Err(Error::SizeMismatch(format!(
                "tensor shapes differ: n {} vs {}, slots {:?} vs {:?}",
                self.n, o.n, self.slots, o.slots
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &TensorElem) -> TensorElem {
        debug_assert!(self.check(o).is_ok());
        let mut out = self.clone();
        for (l, c) in &o.terms {
            out.add_term(l.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> TensorElem {
        TensorElem {
            n: self.n,
            slots: self.slots.clone(),
            terms: self.terms.iter().map(|(l, c)| (l.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &TensorElem) -> TensorElem {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &QScalar) -> TensorElem {
        let mut out = TensorElem::zero(self.n, &self.slots);
        for (l, x) in &self.terms {
            out.add_term(l.clone(), &(x * c));
        }
        out
    }

    /// Slotwise product.
    pub fn mul(&self, o: &TensorElem) -> TensorElem {
        debug_assert!(self.check(o).is_ok());
        let n = self.n;
        let mut out = TensorElem::zero(n, &self.slots);
        for (l1, c1) in &self.terms {
            for (l2, c2) in &o.terms {
                let mut acc: Vec<(Vec<Leg>, QScalar)> = vec![(Vec::new(), c1 * c2)];
                for s in 0..l1.len() {
                    let prod = mul_monomials(n, &l1[s].0, &l2[s].0);
                    let k = l1[s].1 + l2[s].1;
                    let mut next = Vec::with_capacity(acc.len() * prod.len());
                    for (p, pc) in &acc {
                        for (m, mc) in &prod {
                            let mut p = p.clone();
                            p.push((m.clone(), k));
                            next.push((p, pc * mc));
                        }
                    }
                    acc = next;
                }
                for (legs, c) in acc {
                    out.add_term(legs, &c);
                }
            }
        }
        out
    }

    /// Applies a linear map to one leg.
    pub fn map_leg<F: FnMut(&GLElem) -> GLElem>(&self, idx: usize, slot: Slot, mut f: F) -> TensorElem {
        let n = self.n;
        let mut slots = self.slots.clone();
        slots[idx] = slot;
        let mut out = TensorElem::zero(n, &slots);
        let mut memo: HashMap<Leg, GLElem> = HashMap::default();
        for (legs, c) in &self.terms {
            let img = memo
                .entry(legs[idx].clone())
                .or_insert_with(|| {
                    let (m, k) = &legs[idx];
                    f(&GLElem { num: AlgElem::monomial(n, m.clone(), QScalar::one()), det_power: *k })
                })
                .clone();
            for (m, mc) in img.num.terms() {
                let mut l = legs.clone();
                l[idx] = (m.clone(), img.det_power);
                out.add_term(l, &(c * mc));
            }
        }
        out
    }

    /// Swaps the legs of an arity-two tensor.
    pub fn flip(&self) -> TensorElem {
        assert_eq!(self.arity(), 2);
        let mut out = TensorElem::zero(self.n, &[self.slots[1], self.slots[0]]);
        for (l, c) in &self.terms {
            out.add_term(vec![l[1].clone(), l[0].clone()], c);
        }
        out
    }

    /// Exact zero test in the product of the slot spaces.
    pub fn is_zero(&self) -> bool {
        let n = self.n;
        // group by the residues of the SL legs' word lengths
        let mut groups: BTreeMap<Vec<usize>, Vec<(&Vec<Leg>, &QScalar)>> = BTreeMap::new();
        for (legs, c) in &self.terms {
            let key: Vec<usize> =
                legs.iter().zip(&self.slots).filter(|(_, s)| **s == Slot::Sl).map(|(l, _)| l.0.degree() % n).collect();
            groups.entry(key).or_default().push((legs, c));
        }
        for terms in groups.values() {
            let arity = self.slots.len();
            let mut target = vec![0usize; arity];
            for (legs, _) in terms {
                for s in 0..arity {
                    let v = match self.slots[s] {
                        Slot::Gl => legs[s].1 as usize,
                        Slot::Sl => legs[s].0.degree(),
                    };
                    target[s] = target[s].max(v);
                }
            }
            let first = terms[0].0;
            let uniform = terms.iter().all(|(legs, _)| {
                (0..arity).all(|s| match self.slots[s] {
                    Slot::Gl => legs[s].1 as usize == target[s],
                    Slot::Sl => legs[s].0.degree() == target[s] && legs[s].1 == first[s].1,
                })
            });
            if uniform {
                // distinct keys already, nothing can cancel
                if terms.iter().any(|(_, c)| !c.is_zero()) {
                    return false;
                }
                continue;
            }
            let mut acc: HashMap<Vec<Monomial>, QScalar> = HashMap::default();
            for (legs, c) in terms {
                let mut parts: Vec<(Vec<Monomial>, QScalar)> = vec![(Vec::new(), (*c).clone())];
                for s in 0..arity {
                    let e = match self.slots[s] {
                        Slot::Gl => target[s] - legs[s].1 as usize,
                        Slot::Sl => (target[s] - legs[s].0.degree()) / n,
                    };
                    let lifted: Vec<(Monomial, QScalar)> = if e == 0 {
                        vec![(legs[s].0.clone(), QScalar::one())]
                    } else {
                        AlgElem::monomial(n, legs[s].0.clone(), QScalar::one())
                            .mul(&det_pow(n, e as u32))
                            .into_terms()
                            .into_iter()
                            .collect()
                    };
                    let mut next = Vec::with_capacity(parts.len() * lifted.len());
                    for (p, pc) in &parts {
                        for (m, mc) in &lifted {
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
            if acc.values().any(|c| !c.is_zero()) {
                return false;
            }
        }
        true
    }

    pub fn equals(&self, o: &TensorElem) -> Result<bool> {
        self.check(o)?;
        Ok(self.sub(o).is_zero())
    }

    /// The GL element in leg positions, for arity-one style access in tests.
    pub fn leg_elem(&self, legs: &[Leg], idx: usize) -> GLElem {
        GLElem { num: AlgElem::monomial(self.n, legs[idx].0.clone(), QScalar::one()), det_power: legs[idx].1 }
    }

    pub fn to_expr(&self) -> String {
        self.to_expr_in(Notation::Q)
    }

    pub fn to_expr_in(&self, notation: Notation) -> String {
        let n = self.n;
        let items = self.terms.iter().map(|(legs, c)| {
            let parts: Vec<String> = legs
                .iter()
                .map(|(m, k)| {
                    let g = GLElem { num: AlgElem::monomial(n, m.clone(), QScalar::one()), det_power: *k };
                    g.to_expr_in(notation)
                })
                .collect();
            (parts.join(" (x) "), c)
        });
        qmatrix::render_terms(n, notation, items)
    }
}

impl fmt::Debug for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

/// `Delta(a)` in `O (x) O`.
pub fn coproduct(a: &GLElem) -> TensorElem {
    let n = a.n();
    let k = a.det_power;
    let mut out = TensorElem::zero(n, &[Slot::Gl, Slot::Gl]);
    for (m, c) in a.num.terms() {
        for (l, r, x) in coproduct_monomial(n, m).iter() {
            out.add_term(vec![(l.clone(), k), (r.clone(), k)], &(c * x));
        }
    }
    out
}

/// `(Delta (x) id) Delta(a)` in `O (x) O (x) O`.
pub fn double_coproduct(a: &GLElem) -> TensorElem {
    let n = a.n();
    let k = a.det_power;
    let mut out = TensorElem::zero(n, &[Slot::Gl, Slot::Gl, Slot::Gl]);
    for (m, c) in a.num.terms() {
        for (l, r, x) in coproduct_monomial(n, m).iter() {
            let cx = c * x;
            for (l1, l2, y) in coproduct_monomial(n, l).iter() {
                out.add_term(vec![(l1.clone(), k), (l2.clone(), k), (r.clone(), k)], &(&cx * y));
            }
        }
    }
    out
}

/// Product map `O (x) O -> O` on an arity-two tensor.
pub fn multiply_legs(t: &TensorElem) -> GLElem {
    assert_eq!(t.arity(), 2);
    let n = t.n();
    let mut by_power: BTreeMap<u32, AlgElem> = BTreeMap::new();
    for (legs, c) in t.terms() {
        let k = legs[0].1 + legs[1].1;
        let p = AlgElem::from_terms(n, mul_monomials(n, &legs[0].0, &legs[1].0)).scale(c);
        let e = by_power.entry(k).or_insert_with(|| AlgElem::zero(n));
        *e = e.add(&p);
    }
    let kmax = by_power.keys().copied().max().unwrap_or(0);
    let mut num = AlgElem::zero(n);
    for (k, a) in by_power {
        num = num.add(&a.mul(&det_pow(n, kmax - k)));
    }
    GLElem::new(num, kmax)
}

/// Components of the `Z`-grading, `deg(x_ij) = 1`, `deg(det_q^{-1}) = -N`.
pub fn pi_z_grade(a: &GLElem) -> BTreeMap<i64, GLElem> {
    let n = a.n();
    let mut out = BTreeMap::new();
    for (d, comp) in a.num.homogeneous_components() {
        let z = d as i64 - n as i64 * a.det_power as i64;
        out.insert(z, GLElem::new(comp, a.det_power));
    }
    out
}

/// `pi_Z` into Laurent polynomials: only words of diagonal letters survive.
pub fn pi_z(a: &GLElem) -> BTreeMap<i64, QScalar> {
    let n = a.n() as i64;
    let mut out: BTreeMap<i64, QScalar> = BTreeMap::new();
    for (m, c) in a.num.terms() {
        if m.counit() {
            *out.entry(m.degree() as i64 - n * a.det_power as i64).or_default() += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Lifts an `SL` class represented by homogeneous pieces to one `GL`
/// numerator per residue class of the degree mod `N`.
fn sl_classes(a: &GLElem) -> BTreeMap<usize, (usize, AlgElem)> {
    let n = a.n();
    let comps = a.num.homogeneous_components();
    let mut out: BTreeMap<usize, (usize, AlgElem)> = BTreeMap::new();
    let mut tops: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in comps.keys() {
        let t = tops.entry(d % n).or_insert(d);
        *t = (*t).max(d);
    }
    for (d, c) in comps {
        let top = tops[&(d % n)];
        let lifted = c.mul(&det_pow(n, ((top - d) / n) as u32));
        let e = out.entry(d % n).or_insert_with(|| (top, AlgElem::zero(n)));
        e.1 = e.1.add(&lifted);
    }
    out
}

/// Whether `a` maps to zero in `O_q(SL_N)`.
pub fn sl_is_zero(a: &GLElem) -> bool {
    sl_classes(a).values().all(|(_, x)| x.is_zero())
}

pub fn sl_equal(a: &GLElem, b: &GLElem) -> Result<bool> {
    a.check(b)?;
    Ok(sl_is_zero(&a.sub(b)))
}

/// Strips every factor of `det_q` from a numerator.
pub fn strip_det(mut a: AlgElem) -> AlgElem {
    if a.is_zero() {
        return a;
    }
    while let Some(q) = divide_by_det(&a) {
        a = q;
    }
    a
}

/// The representative of `pi(a)` in `O_q(SL_N)` not divisible by `det_q`,
/// for `a` homogeneous in the `Z`-grading.
pub fn sl_canonical(a: &GLElem) -> AlgElem {
    let n = a.n();
    let classes = sl_classes(a);
    let mut out = AlgElem::zero(n);
    for (_, (_, x)) in classes {
        out = out.add(&strip_det(x));
    }
    out
}

/// `iota = pi (x) pi_Z`: degree `d` maps to the `SL` class of the degree-`d` component.
pub fn iota_embed(a: &GLElem) -> BTreeMap<i64, AlgElem> {
    let mut out = BTreeMap::new();
    for (d, comp) in pi_z_grade(a) {
        let rep = strip_det(comp.num().clone());
        if !rep.is_zero() {
            out.insert(d, rep);
        }
    }
    out
}

/// Product in `O_q(SL_N) (x) k[z, z^-1]` on graded families of canonical representatives.
pub fn iota_mul(a: &BTreeMap<i64, AlgElem>, b: &BTreeMap<i64, AlgElem>, n: usize) -> BTreeMap<i64, AlgElem> {
    let mut acc: BTreeMap<i64, AlgElem> = BTreeMap::new();
    for (d1, x) in a {
        for (d2, y) in b {
            let e = acc.entry(d1 + d2).or_insert_with(|| AlgElem::zero(n));
            *e = e.add(&x.mul(y));
        }
    }
    acc.into_iter().map(|(d, x)| (d, sl_canonical(&GLElem::from_alg(x)))).filter(|(_, x)| !x.is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatrix::{quantum_det, sigma};

    fn x(n: usize, i: usize, j: usize) -> GLElem {
        GLElem::generator(n, i, j).unwrap()
    }

    fn gens(n: usize) -> Vec<GLElem> {
        let mut v = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                v.push(x(n, i, j));
            }
        }
        v
    }

    #[test]
    fn coproduct_examples() {
        let d = coproduct(&x(2, 1, 1));
        let expect = TensorElem::pure(&[Slot::Gl, Slot::Gl], &[&x(2, 1, 1), &x(2, 1, 1)], &QScalar::one())
            .add(&TensorElem::pure(&[Slot::Gl, Slot::Gl], &[&x(2, 1, 2), &x(2, 2, 1)], &QScalar::one()));
        assert!(d.equals(&expect).unwrap());
        let one = GLElem::one(2);
        assert!(coproduct(&one)
            .equals(&TensorElem::pure(&[Slot::Gl, Slot::Gl], &[&one, &one], &QScalar::one()))
            .unwrap());
        for n in 2..=3 {
            let det = GLElem::det(n);
            let dd = TensorElem::pure(&[Slot::Gl, Slot::Gl], &[&det, &det], &QScalar::one());
            assert!(coproduct(&det).equals(&dd).unwrap());
        }
    }

    #[test]
    fn counit_examples() {
        assert!(counit(&x(2, 1, 2)).is_zero());
        assert!(counit(&GLElem::det(2)).is_one());
        assert_eq!(counit(&GLElem::from_alg(sigma(3, 1).unwrap())), QScalar::from_int(3));
        assert!(counit(&GLElem::det_inverse(3, 2)).is_one());
    }

    #[test]
    fn antipode_examples() {
        let di = GLElem::det_inverse(2, 1);
        assert_eq!(antipode(&x(2, 1, 1)), x(2, 2, 2).mul(&di));
        let s12 = x(2, 1, 2).mul(&di).scale(&-QScalar::q_pow(2, -1));
        assert_eq!(antipode(&x(2, 1, 2)), s12);
        assert_eq!(antipode(&GLElem::one(2)), GLElem::one(2));
        assert_eq!(antipode(&di), GLElem::det(2));
    }

    #[test]
    fn antipode_axioms() {
        for n in 2..=3 {
            let mut elems = gens(n);
            elems.push(GLElem::det_inverse(n, 1));
            for a in elems {
                let eps = GLElem::scalar(n, counit(&a));
                let d = coproduct(&a);
                let left = multiply_legs(&d.map_leg(0, Slot::Gl, antipode));
                let right = multiply_legs(&d.map_leg(1, Slot::Gl, antipode));
                assert_eq!(left, eps, "S*id on {}", a);
                assert_eq!(right, eps, "id*S on {}", a);
            }
        }
    }

    #[test]
    fn antipode_is_antimultiplicative() {
        let a = x(2, 1, 2);
        let b = x(2, 2, 1).add(&x(2, 1, 1));
        assert_eq!(antipode(&a.mul(&b)), antipode(&b).mul(&antipode(&a)));
    }

    #[test]
    fn coassociativity() {
        for n in 2..=3 {
            let mut elems = gens(n);
            elems.push(GLElem::det_inverse(n, 1));
            for a in elems {
                let d = coproduct(&a);
                let mut left = TensorElem::zero(n, &[Slot::Gl; 3]);
                let mut right = TensorElem::zero(n, &[Slot::Gl; 3]);
                for (legs, c) in d.terms() {
                    let l = coproduct(&d.leg_elem(legs, 0));
                    for (ll, lc) in l.terms() {
                        left.add_term(vec![ll[0].clone(), ll[1].clone(), legs[1].clone()], &(c * lc));
                    }
                    let r = coproduct(&d.leg_elem(legs, 1));
                    for (rl, rc) in r.terms() {
                        right.add_term(vec![legs[0].clone(), rl[0].clone(), rl[1].clone()], &(c * rc));
                    }
                }
                assert!(left.equals(&right).unwrap());
                assert!(left.equals(&double_coproduct(&a)).unwrap());
            }
        }
    }

    #[test]
    fn canonical_det_power() {
        let det = GLElem::det(2);
        let a = GLElem::new(x(2, 1, 1).mul(&det).num().clone(), 1);
        assert_eq!(a, x(2, 1, 1));
        assert_eq!(a.det_power(), 0);
        assert!(divide_by_det(&x(2, 1, 1).num().clone()).is_none());
        assert!(gl_equal(&GLElem::new(x(2, 1, 1).mul(&det).num().clone(), 1), &x(2, 1, 1)).unwrap());
        assert!(!gl_equal(&det, &GLElem::one(2)).unwrap());
        let q = x(3, 1, 2).add(&x(3, 3, 1).mul(&x(3, 2, 2)));
        let prod = q.mul(&GLElem::det(3)).mul(&GLElem::det(3));
        assert_eq!(divide_by_det(prod.num()).and_then(|p| divide_by_det(&p)).unwrap(), *q.num());
    }

    #[test]
    fn grading() {
        let a = x(2, 1, 1).add(&GLElem::det_inverse(2, 1));
        let g = pi_z_grade(&a);
        assert_eq!(g.keys().copied().collect::<Vec<_>>(), vec![-2, 1]);
        assert_eq!(g[&-2], GLElem::det_inverse(2, 1));
        assert_eq!(pi_z_grade(&GLElem::det(3)).keys().copied().collect::<Vec<_>>(), vec![3]);
        let s = GLElem::from_alg(sigma(2, 1).unwrap()).mul(&GLElem::det_inverse(2, 1));
        assert_eq!(pi_z_grade(&s).keys().copied().collect::<Vec<_>>(), vec![-1]);
    }

    #[test]
    fn sl_zero_examples() {
        let det = GLElem::det(2);
        let one = GLElem::one(2);
        assert!(sl_is_zero(&det.sub(&one)));
        assert!(!sl_is_zero(&x(2, 1, 2)));
        let s1 = GLElem::from_alg(sigma(2, 1).unwrap());
        assert!(sl_is_zero(&det.sub(&one).mul(&s1)));
        assert!(sl_is_zero(&GLElem::det_inverse(3, 1).sub(&GLElem::one(3))));
        assert!(sl_equal(&GLElem::det(3), &GLElem::one(3)).unwrap());
    }

    #[test]
    fn iota_examples() {
        let e = iota_embed(&x(2, 1, 2));
        assert_eq!(e.len(), 1);
        assert_eq!(GLElem::from_alg(e[&1].clone()), x(2, 1, 2));
        let e = iota_embed(&GLElem::det_inverse(2, 1));
        assert_eq!(e[&-2], AlgElem::one(2));
        let e = iota_embed(&x(2, 1, 1).add(&GLElem::det(2)));
        assert_eq!(e[&1], *x(2, 1, 1).num());
        assert_eq!(e[&2], AlgElem::one(2));
    }

    #[test]
    fn tensor_sl_equality_shifts_by_det() {
        let n = 2;
        let one = GLElem::one(n);
        let det = GLElem::from_alg(quantum_det(n));
        let a = TensorElem::pure(&[Slot::Gl, Slot::Sl], &[&x(n, 1, 1), &det], &QScalar::one());
        let b = TensorElem::pure(&[Slot::Gl, Slot::Sl], &[&x(n, 1, 1), &one], &QScalar::one());
        assert!(a.equals(&b).unwrap());
        let a = a.with_slots(&[Slot::Gl, Slot::Gl]);
        let b = b.with_slots(&[Slot::Gl, Slot::Gl]);
        assert!(!a.equals(&b).unwrap());
    }
}
