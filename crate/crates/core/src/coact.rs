//! Coactions of `O = O_q(GL_N)` or `O_q(SL_N)` on `A = O_q(M_N)`.
//!
//! With `Delta^2(a) = sum a1 (x) a2 (x) a3`:
//!
//! ```text
//! lambda(a) = sum pi(a1) (x) a2          rho(a)  = sum a1 (x) pi(a2)
//! alpha(a)  = sum a2 (x) a3 S(a1)        beta(a) = sum a2 (x) S(a1) a3
//! ```
//!
//! The adjoint versions use the same formulas on `O` itself. Since
//! `S(a1) = cof(a1) det_q^{-|a1|}`, the second legs of `alpha` and `beta` on a
//! word of length `d` are numerators of length `dN` over `det_q^d`.

use rustc_hash::FxHashMap as HashMap;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::hopf::{self, antipode, coproduct, det_pow, GLElem, Leg, Slot, TensorBuilder, TensorElem};
use crate::qmatrix::{mul_monomials, AlgElem, Gen, Monomial};
use crate::scalar::QScalar;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Lambda,
    Rho,
    Alpha,
    Beta,
    AlphaBar,
    BetaBar,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Lambda => "lambda",
            Kind::Rho => "rho",
            Kind::Alpha => "alpha",
            Kind::Beta => "beta",
            Kind::AlphaBar => "alpha-bar",
            Kind::BetaBar => "beta-bar",
        }
    }
}

/// A coaction together with the group that coacts.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoactionKind {
    pub kind: Kind,
    pub target: Slot,
}

impl CoactionKind {
    pub fn new(kind: Kind, target: Slot) -> Self {
        CoactionKind { kind, target }
    }

    /// Slot spaces of the image.
    pub fn slots(self) -> [Slot; 2] {
        match self.kind {
            Kind::Lambda => [self.target, Slot::Gl],
            Kind::AlphaBar | Kind::BetaBar => [self.target, self.target],
            _ => [Slot::Gl, self.target],
        }
    }

    pub fn is_left(self) -> bool {
        self.kind == Kind::Lambda
    }
}

impl fmt::Display for CoactionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = match self.target {
            Slot::Gl => "GL",
            Slot::Sl => "SL",
        };
        write!(f, "{}-{}", self.kind.name(), g)
    }
}

/// For a word `m` of length `d`: the map `a2 -> numerator of the second leg
/// over det_q^d`, where the second leg is `sum a3 S(a1)` (`antipode_left = false`)
/// or `sum S(a1) a3` (`antipode_left = true`) over the `Delta^2` terms with
/// middle `a2`.
///
/// Pairs `(a2, second leg)`, shared with the cache in [`adjoint_legs`].
pub type Legs = Arc<Vec<(Monomial, AlgElem)>>;

/// Built one letter at a time from `Delta^2(x_ij) = sum x_ik (x) x_kl (x) x_lj`:
/// with `m = x_ij m'` the right version is `sum (x_kl a2') (x) x_lj L' cof(x_ik)`,
/// and the left version peels the last letter symmetrically.
pub fn adjoint_legs(n: usize, m: &Monomial, antipode_left: bool) -> Legs {
    type Key = (usize, bool, Monomial);
    static CACHE: OnceLock<Mutex<HashMap<Key, Legs>>> = OnceLock::new();
    // larger words are rarely shared and their images are big
    let cacheable = m.degree() <= 2;
    let key = (n, antipode_left, m.clone());
    if cacheable {
        if let Some(hit) = CACHE.get_or_init(Default::default).lock().unwrap().get(&key) {
            return hit.clone();
        }
    }
    let gens = m.gens();
    let out = if gens.is_empty() {
        vec![(Monomial::one(), AlgElem::one(n))]
    } else {
        let (g, rest) = if antipode_left {
            (gens[gens.len() - 1], Monomial::from_sorted(gens[..gens.len() - 1].to_vec()))
        } else {
            (gens[0], Monomial::from_sorted(gens[1..].to_vec()))
        };
        let inner = adjoint_legs(n, &rest, antipode_left);
        let mut out: HashMap<Monomial, AlgElem> = HashMap::default();
        for k in 0..n as u8 {
            let cof = hopf::cofactor(n, Gen { row: g.row, col: k });
            for l in 0..n as u8 {
                let mid = Monomial::from_sorted(vec![Gen { row: k, col: l }]);
                let outer =
                    AlgElem::monomial(n, Monomial::from_sorted(vec![Gen { row: l, col: g.col }]), QScalar::one());
                // collect the second legs by first leg before multiplying
                let mut grouped: HashMap<Monomial, AlgElem> = HashMap::default();
                for (a2, sec) in inner.iter() {
                    let firsts = if antipode_left { mul_monomials(n, a2, &mid) } else { mul_monomials(n, &mid, a2) };
                    for (b, c) in firsts {
                        grouped.entry(b).or_insert_with(|| AlgElem::zero(n)).add_scaled(sec, &c);
                    }
                }
                for (b, sec) in grouped {
                    let p = if antipode_left { cof.mul(&sec).mul(&outer) } else { outer.mul(&sec).mul(&cof) };
                    out.entry(b).or_insert_with(|| AlgElem::zero(n)).add_scaled(&p, &QScalar::one());
                }
            }
        }
        let mut v: Vec<(Monomial, AlgElem)> = out.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    };
    let out = Arc::new(out);
    if cacheable {
        CACHE.get_or_init(Default::default).lock().unwrap().insert(key, out.clone());
    }
    out
}

fn second_leg(a: AlgElem, k: u32, target: Slot) -> GLElem {
    match target {
        Slot::Gl => GLElem::new(a, k),
        Slot::Sl => GLElem::from_alg(hopf::sl_canonical(&GLElem::from_alg(a))),
    }
}

/// The coaction applied to `a`, as an arity-two tensor.
pub fn coact(ck: CoactionKind, a: &GLElem) -> TensorElem {
    let n = a.n();
    let slots = ck.slots();
    match ck.kind {
        Kind::Lambda | Kind::Rho => coproduct(a).with_slots(&slots),
        Kind::Alpha | Kind::Beta | Kind::AlphaBar | Kind::BetaBar => {
            let left = matches!(ck.kind, Kind::Beta | Kind::BetaBar);
            let k = a.det_power();
            let mut out = TensorElem::zero(n, &slots);
            for (d, comp) in a.num().homogeneous_components() {
                let mut acc: HashMap<Monomial, AlgElem> = HashMap::default();
                for (m, c) in comp.terms() {
                    for (a2, sec) in adjoint_legs(n, m, left).iter() {
                        acc.entry(a2.clone()).or_insert_with(|| AlgElem::zero(n)).add_scaled(sec, c);
                    }
                }
                for (a2, sec) in acc {
                    let g = second_leg(sec, d as u32, ck.target);
                    for (s, c) in g.num().terms() {
                        out.add_term(vec![(a2.clone(), k), (s.clone(), g.det_power())], c);
                    }
                }
            }
            out
        }
    }
}

/// The coaction on a single word of `A`, with second legs left as raw
/// numerators over `det_q^d`. Equal to [`coact`] as a tensor, without the
/// cost of reducing each leg.
pub fn coact_word(ck: CoactionKind, n: usize, m: &Monomial) -> TensorElem {
    let slots = ck.slots();
    let mut out = TensorElem::zero(n, &slots);
    match ck.kind {
        Kind::Lambda | Kind::Rho => {
            for (l, r, c) in hopf::coproduct_monomial(n, m).iter() {
                out.add_term(vec![(l.clone(), 0), (r.clone(), 0)], c);
            }
        }
        _ => {
            let left = matches!(ck.kind, Kind::Beta | Kind::BetaBar);
            let d = m.degree() as u32;
            for (a2, sec) in adjoint_legs(n, m, left).iter() {
                for (s, c) in sec.terms() {
                    out.add_term(vec![(a2.clone(), 0), (s.clone(), d)], c);
                }
            }
        }
    }
    out
}

/// The trivial image `a (x) 1`, or `1 (x) a` for the left coaction.
pub fn trivial_image(ck: CoactionKind, a: &GLElem) -> TensorElem {
    let one = GLElem::one(a.n());
    if ck.is_left() {
        TensorElem::pure(&ck.slots(), &[&one, a], &QScalar::one())
    } else {
        TensorElem::pure(&ck.slots(), &[a, &one], &QScalar::one())
    }
}

pub fn is_coinvariant(ck: CoactionKind, a: &GLElem) -> bool {
    coact(ck, a).sub(&trivial_image(ck, a)).is_zero()
}

/// Weak multiplicativity: `alpha(a c) = alpha(a) (c (x) 1)` and
/// `beta(c a) = (c (x) 1) beta(a)` for a coinvariant `c`.
pub fn check_weak_mult(ck: CoactionKind, a: &GLElem, c: &GLElem) -> Result<bool> {
    if !is_coinvariant(ck, c) {
        return Err(Error::NotCoinvariant);
    }
    let c1 = trivial_image(ck, c);
    match ck.kind {
        Kind::Alpha | Kind::AlphaBar => {
            let lhs = coact(ck, &a.mul(c));
            let rhs = coact(ck, a).mul(&c1);
            lhs.equals(&rhs)
        }
        Kind::Beta | Kind::BetaBar => {
            let lhs = coact(ck, &c.mul(a));
            let rhs = c1.mul(&coact(ck, a));
            lhs.equals(&rhs)
        }
        _ => {
            Err(Error::Invalid(format!("weak multiplicativity is defined for alpha and beta, not {}", ck.kind.name())))
        }
    }
}

/// Coassociativity and counit law of the coaction on `a`.
pub fn check_coaction_axioms(ck: CoactionKind, a: &GLElem) -> bool {
    let n = a.n();
    let g = coact(ck, a);
    let t = ck.target;
    // Delta of one leg, straight from the cached word coproducts
    let split = |leg: &Leg| hopf::coproduct_monomial(n, &leg.0);
    let mut images: HashMap<&Leg, TensorElem> = HashMap::default();
    // `act` is the comodule leg, `keep` the leg in the coacting algebra
    let (act, keep) = if ck.is_left() { (1, 0) } else { (0, 1) };
    let slots = if ck.is_left() { [t, t, Slot::Gl] } else { [ck.slots()[0], t, t] };
    // both sides accumulate into one difference
    let mut diff = TensorBuilder::new(n, &slots);
    for (legs, c) in g.terms() {
        let mc = -c;
        let img = images.entry(&legs[act]).or_insert_with(|| coact(ck, &g.leg_elem(legs, act)));
        let k = legs[keep].1;
        if ck.is_left() {
            // (id (x) lambda) lambda = (Delta (x) id) lambda
            for (l2, c2) in img.terms() {
                diff.add_term(vec![legs[0].clone(), l2[0].clone(), l2[1].clone()], c * c2);
            }
            for (l, r, c1) in split(&legs[0]).iter() {
                diff.add_term(vec![(l.clone(), k), (r.clone(), k), legs[1].clone()], &mc * c1);
            }
        } else {
            // (id (x) Delta) gamma = (gamma (x) id) gamma
            for (l, r, c2) in split(&legs[1]).iter() {
                diff.add_term(vec![legs[0].clone(), (l.clone(), k), (r.clone(), k)], c * c2);
            }
            for (l1, c1) in img.terms() {
                diff.add_term(vec![l1[0].clone(), l1[1].clone(), legs[1].clone()], &mc * c1);
            }
        }
    }
    // counit on the algebra leg gives back `a`
    let mut back: BTreeMap<u32, AlgElem> = BTreeMap::new();
    for (legs, c) in g.terms() {
        let e = legs[keep].0.counit();
        if e {
            let (m, k) = &legs[act];
            back.entry(*k)
                .or_insert_with(|| AlgElem::zero(n))
                .add_scaled(&AlgElem::monomial(n, m.clone(), c.clone()), &QScalar::one());
        }
    }
    let back = back.into_iter().fold(GLElem::zero(n), |acc, (k, num)| acc.add(&GLElem::new(num, k)));
    let back_ok = match slots[act] {
        Slot::Gl => back == *a,
        Slot::Sl => hopf::sl_is_zero(&back.sub(a)),
    };
    diff.finish().is_zero() && back_ok
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Cocommutativity {
    /// `sum f1 (x) pi(f2) = sum f2 (x) pi(f1)`
    Plain,
    /// `sum f1 (x) pi(f2) = sum f2 (x) S^2(pi(f1))`
    S2,
}

pub fn is_cocommutative(x: &GLElem, variant: Cocommutativity, target: Slot) -> bool {
    let slots = [Slot::Gl, target];
    let d = coproduct(x).with_slots(&slots);
    let flipped = d.flip().with_slots(&slots);
    let rhs = match variant {
        Cocommutativity::Plain => flipped,
        Cocommutativity::S2 => flipped.map_leg(1, target, |g| antipode(&antipode(g))),
    };
    d.sub(&rhs).is_zero()
}

/// `det_q^j` as a GL element, `j` possibly negative.
pub fn det_power_elem(n: usize, j: i64) -> GLElem {
    if j >= 0 {
        GLElem::from_alg((*det_pow(n, j as u32)).clone())
    } else {
        GLElem::det_inverse(n, (-j) as u32)
    }
}

/// Whether `gamma(v) = v (x) det_q^j` over `GL`.
pub fn is_relative_invariant(kind: Kind, v: &GLElem, j: i64) -> bool {
    let ck = CoactionKind::new(kind, Slot::Gl);
    let n = v.n();
    let rhs = TensorElem::pure(&ck.slots(), &[v, &det_power_elem(n, j)], &QScalar::one());
    coact(ck, v).sub(&rhs).is_zero()
}
