use serde::{Deserialize, Serialize};

use super::poly::{Coeff, NcLaurentPoly};
use super::word::ReducedWord;
use crate::error::{Error, Result};

/// Wire form of a polynomial: `{"vars":["x","y"],"terms":[...]}` with the
/// terms in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: String,
    pub coeff: String,
}

impl<C: Coeff> NcLaurentPoly<C> {
    pub fn to_json_value(&self) -> PolyJson {
        PolyJson {
            vars: vec!["x".into(), "y".into()],
            terms: self
                .canonical_terms()
                .into_iter()
                .map(|(w, c)| TermJson { word: w.to_string(), coeff: c.to_string() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("plain structs serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: PolyJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.vars != ["x", "y"] {
            return Err(Error::Parse(format!("unexpected vars {:?}", doc.vars)));
        }
        let mut p = Self::zero();
        for t in doc.terms {
            let w: ReducedWord = t.word.parse()?;
            let c: C = t
                .coeff
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {:?}", t.coeff)))?;
            p.add_term(w, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn json_layout() {
        let p = NcLaurentPoly::<BigInt>::from_terms([
            ("y^2 x^-1".parse().unwrap(), BigInt::from(-3)),
            ("1".parse().unwrap(), BigInt::from(1)),
            ("x^-1".parse().unwrap(), BigInt::from(12345678901234567890u64)),
        ]);
        assert_eq!(
            p.to_json(),
            r#"{"vars":["x","y"],"terms":[{"word":"1","coeff":"1"},{"word":"x^-1","coeff":"12345678901234567890"},{"word":"y^2 x^-1","coeff":"-3"}]}"#
        );
        assert_eq!(NcLaurentPoly::<BigInt>::from_json(&p.to_json()).unwrap(), p);
        assert_eq!(p.to_latex(), "1 + 12345678901234567890x^{-1} - 3y^{2}x^{-1}");
    }

    #[test]
    fn json_rejects_garbage() {
        assert!(NcLaurentPoly::<BigInt>::from_json("{}").is_err());
        assert!(NcLaurentPoly::<BigInt>::from_json(
            r#"{"vars":["x","y"],"terms":[{"word":"z","coeff":"1"}]}"#
        )
        .is_err());
        assert!(NcLaurentPoly::<BigInt>::from_json(
            r#"{"vars":["a"],"terms":[]}"#
        )
        .is_err());
    }
}
