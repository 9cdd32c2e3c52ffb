//! JSON encodings of domain values.
//!
//! Coefficients are lists of `[s_exponent, "a/b"]` pairs; words are lists of
//! one-based `[row, col]` pairs. Field order is fixed by the structs below.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{GLElem, Slot, TensorElem};
use crate::qmatrix::{AlgElem, Gen, Monomial, MAX_N};
use crate::scalar::{parse_rational, Coeff, QScalar};

pub type CoeffJson = Vec<(i32, String)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: CoeffJson,
    pub word: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemJson {
    pub n: usize,
    pub det_power: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegJson {
    pub word: Vec<[usize; 2]>,
    pub det_power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorTermJson {
    pub coeff: CoeffJson,
    pub left: LegJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub middle: Option<LegJson>,
    pub right: LegJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorJson {
    pub n: usize,
    pub arity: usize,
    pub slots: Vec<String>,
    pub terms: Vec<TensorTermJson>,
}

/// Graded pieces keyed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedJson {
    pub components: BTreeMap<String, ElemJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinvJson {
    pub degree: usize,
    pub dim: usize,
    pub basis: Vec<ElemJson>,
}

pub fn coeff_to_json(c: &QScalar) -> CoeffJson {
    c.terms().iter().map(|(e, x)| (*e, x.to_string())).collect()
}

pub fn coeff_from_json(c: &CoeffJson) -> Result<QScalar> {
    let terms = c.iter().map(|(e, x)| parse_rational(x).map(|r| (*e, Coeff::from(r)))).collect::<Result<Vec<_>>>()?;
    Ok(QScalar::from_terms(terms))
}

fn word_to_json(m: &Monomial) -> Vec<[usize; 2]> {
    m.gens().iter().map(|g| [g.row as usize + 1, g.col as usize + 1]).collect()
}

fn word_from_json(n: usize, w: &[[usize; 2]]) -> Result<Vec<Gen>> {
    w.iter().map(|[i, j]| Gen::new(n, *i, *j)).collect()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::Invalid(format!("matrix size {} outside 1..={}", n, MAX_N)));
    }
    Ok(())
}

pub fn alg_terms_to_json(a: &AlgElem) -> Vec<TermJson> {
    a.terms().iter().map(|(m, c)| TermJson { coeff: coeff_to_json(c), word: word_to_json(m) }).collect()
}

pub fn elem_to_json(a: &GLElem) -> ElemJson {
    ElemJson { n: a.n(), det_power: a.det_power(), terms: alg_terms_to_json(a.num()) }
}

/// Words need not be in normal order; the result is canonical.
pub fn elem_from_json(j: &ElemJson) -> Result<GLElem> {
    check_n(j.n)?;
    let mut num = AlgElem::zero(j.n);
    for t in &j.terms {
        let word = word_from_json(j.n, &t.word)?;
        num = num.add(&AlgElem::normal_form_gens(j.n, &word).scale(&coeff_from_json(&t.coeff)?));
    }
    Ok(GLElem::new(num, j.det_power))
}

fn slot_name(s: Slot) -> String {
    match s {
        Slot::Gl => "gl".into(),
        Slot::Sl => "sl".into(),
    }
}

fn slot_from_name(s: &str) -> Result<Slot> {
    match s {
        "gl" => Ok(Slot::Gl),
        "sl" => Ok(Slot::Sl),
        _ => Err(Error::Invalid(format!("unknown slot {:?}", s))),
    }
}

pub fn tensor_to_json(t: &TensorElem) -> TensorJson {
    let leg = |l: &(Monomial, u32)| LegJson { word: word_to_json(&l.0), det_power: l.1 };
    let terms = t
        .terms()
        .iter()
        .map(|(legs, c)| TensorTermJson {
            coeff: coeff_to_json(c),
            left: leg(&legs[0]),
            middle: (legs.len() == 3).then(|| leg(&legs[1])),
            right: leg(legs.last().unwrap()),
        })
        .collect();
    TensorJson { n: t.n(), arity: t.arity(), slots: t.slots().iter().map(|s| slot_name(*s)).collect(), terms }
}

pub fn tensor_from_json(j: &TensorJson) -> Result<TensorElem> {
    check_n(j.n)?;
    if !(2..=3).contains(&j.arity) || j.slots.len() != j.arity {
        return Err(Error::Invalid("tensor arity must be 2 or 3 with one slot per leg".into()));
    }
    let slots = j.slots.iter().map(|s| slot_from_name(s)).collect::<Result<Vec<_>>>()?;
    let mut out = TensorElem::zero(j.n, &slots);
    for t in &j.terms {
        let mut legs = vec![&t.left];
        match (&t.middle, j.arity) {
            (Some(m), 3) => legs.push(m),
            (None, 2) => {}
            _ => return Err(Error::Invalid("middle leg present exactly for arity 3".into())),
        }
        legs.push(&t.right);
        let elems = legs
            .iter()
            .map(|l| {
                let num = AlgElem::normal_form_gens(j.n, &word_from_json(j.n, &l.word)?);
                Ok(GLElem::new(num, l.det_power))
            })
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&GLElem> = elems.iter().collect();
        out = out.add(&TensorElem::pure(&slots, &refs, &coeff_from_json(&t.coeff)?));
    }
    Ok(out)
}

pub fn graded_to_json(n: usize, parts: &BTreeMap<i64, AlgElem>) -> GradedJson {
    GradedJson {
        components: parts
            .iter()
            .map(|(d, a)| (d.to_string(), ElemJson { n, det_power: 0, terms: alg_terms_to_json(a) }))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse::parse_expr;

    #[test]
    fn det_encoding() {
        let j = elem_to_json(&GLElem::det(2));
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(
            text,
            r#"{"n":2,"det_power":0,"terms":[{"coeff":[[0,"1"]],"word":[[1,1],[2,2]]},{"coeff":[[2,"-1"]],"word":[[1,2],[2,1]]}]}"#
        );
    }

    #[test]
    fn zero_encoding() {
        let text = serde_json::to_string(&elem_to_json(&GLElem::zero(2))).unwrap();
        assert_eq!(text, r#"{"n":2,"det_power":0,"terms":[]}"#);
    }

    #[test]
    fn elem_round_trip() {
        let e = parse_expr("(1/2*q - 3)*x[2,1]*x[1,2] + q^(1/2)*detq^-1", 2).unwrap();
        assert_eq!(elem_from_json(&elem_to_json(&e)).unwrap(), e);
    }

    #[test]
    fn unsorted_words_are_normalized() {
        let j = ElemJson {
            n: 2,
            det_power: 0,
            terms: vec![TermJson { coeff: vec![(0, "1".into())], word: vec![[1, 2], [1, 1]] }],
        };
        let e = elem_from_json(&j).unwrap();
        assert_eq!(e, parse_expr("q^-1*x[1,1]*x[1,2]", 2).unwrap());
    }

    #[test]
    fn tensor_round_trip() {
        let a = parse_expr("x[1,2]*detq^-1 + 2", 2).unwrap();
        let t = crate::hopf::coproduct(&a);
        let back = tensor_from_json(&tensor_to_json(&t)).unwrap();
        assert!(back.equals(&t).unwrap());
        let t3 = crate::hopf::double_coproduct(&a);
        let j = tensor_to_json(&t3);
        assert!(j.terms.iter().all(|t| t.middle.is_some()));
        assert!(tensor_from_json(&j).unwrap().equals(&t3).unwrap());
    }

    #[test]
    fn bad_input() {
        let j = ElemJson { n: 2, det_power: 0, terms: vec![TermJson { coeff: vec![(0, "x".into())], word: vec![] }] };
        assert!(elem_from_json(&j).is_err());
        let j =
            ElemJson { n: 2, det_power: 0, terms: vec![TermJson { coeff: vec![(0, "1".into())], word: vec![[3, 1]] }] };
        assert_eq!(elem_from_json(&j), Err(Error::IndexOutOfRange(3, 1, 2)));
    }
}
