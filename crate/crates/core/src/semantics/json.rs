use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::frame::{Frame, Model, Valuation};
use super::relation::Relation;
use crate::error::{Error, Result};
use crate::syntax::{parse_index, Signature};

/// Wire form of frames and models. Keys and pairs come out sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub worlds: usize,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<BTreeMap<String, Vec<usize>>>,
}

impl ModelDoc {
    pub fn from_frame(frame: &Frame) -> Self {
        ModelDoc {
            worlds: frame.world_count(),
            relations: frame
                .relations()
                .iter()
                .map(|(t, r)| (t.to_string(), r.pairs().map(|(x, y)| [x, y]).collect()))
                .collect(),
            valuation: None,
        }
    }

    pub fn from_model(model: &Model) -> Self {
        let mut doc = ModelDoc::from_frame(&model.frame);
        doc.valuation = Some(
            model
                .valuation()
                .iter()
                .map(|(v, s)| (v.clone(), s.iter().collect()))
                .collect(),
        );
        doc
    }

    pub fn to_frame(&self) -> Result<Frame> {
        let mut frame = Frame::new(self.worlds)?;
        for (key, pairs) in &self.relations {
            let term = parse_index(key, &Signature::open())?;
            let rel = Relation::from_pairs(self.worlds, pairs.iter().map(|[x, y]| (*x, *y)))?;
            frame.set_relation(term, rel)?;
        }
        Ok(frame)
    }

    pub fn to_model(&self) -> Result<Model> {
        let frame = self.to_frame()?;
        let mut valuation = Valuation::new();
        for (v, worlds) in self.valuation.iter().flatten() {
            if let Some(&x) = worlds.iter().find(|&&x| x >= self.worlds) {
                return Err(Error::InvalidFrame(format!(
                    "valuation of `{v}` mentions world {x} outside 0..{}",
                    self.worlds
                )));
            }
            valuation.insert(v.clone(), worlds.iter().copied().collect());
        }
        Model::new(frame, valuation)
    }
}

pub fn frame_to_json(frame: &Frame) -> Value {
    serde_json::to_value(ModelDoc::from_frame(frame)).expect("plain data")
}

pub fn model_to_json(model: &Model) -> Value {
    serde_json::to_value(ModelDoc::from_model(model)).expect("plain data")
}

pub fn model_from_json(value: &Value) -> Result<Model> {
    let doc: ModelDoc =
        serde_json::from_value(value.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
    doc.to_model()
}

pub fn frame_from_json(value: &Value) -> Result<Frame> {
    model_from_json(value).map(|m| m.frame)
}

pub fn parse_model(text: &str) -> Result<Model> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    model_from_json(&value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::IndexTerm;

    #[test]
    fn round_trip_with_composite_keys() {
        let text = r#"{"worlds":3,"relations":{"r":[[1,2],[0,1]],"r+":[[0,1],[0,2],[1,2]]},"valuation":{"p":[2]}}"#;
        let m = parse_model(text).unwrap();
        assert!(m.frame.explicit(&IndexTerm::plus(IndexTerm::atom("r"))).is_some());
        let out = model_to_json(&m).to_string();
        assert_eq!(
            out,
            r#"{"relations":{"r":[[0,1],[1,2]],"r+":[[0,1],[0,2],[1,2]]},"valuation":{"p":[2]},"worlds":3}"#
        );
        assert_eq!(parse_model(&out).unwrap(), m);
    }

    #[test]
    fn out_of_range_inputs_are_rejected() {
        assert!(parse_model(r#"{"worlds":2,"relations":{"r":[[0,2]]}}"#).is_err());
        assert!(parse_model(r#"{"worlds":2,"valuation":{"p":[5]}}"#).is_err());
        assert!(parse_model(r#"{"worlds":0}"#).is_err());
        assert!(parse_model("not json").is_err());
    }
}
