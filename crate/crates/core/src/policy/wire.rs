//! Newline-delimited JSON messages exchanged with a scoring service.
//!
//! ```text
//! SCORE_REQ  {id, d, topVertices, bottomVertices, planes: [{normal, offset, deck}]}
//! SCORE_RESP {id, likelihoods: [float]}
//! TRAIN      {samples: [HopSample]}
//! ACK        {count}
//! ERROR      {id?, message}
//! ```
//!
//! Every message is one JSON object on one line with a `type` field.
//! Vertex matrices are row-major arrays of floats. Outside prismatoid
//! scenarios all vertices go in `topVertices` and `deck` is null.

use serde::{Deserialize, Serialize};

use crate::analysis::prismatoid::Deck;
use crate::error::{Error, Result};
use crate::sample::HopSample;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WirePlane {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub deck: Option<Deck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScoreRequest {
    pub id: u64,
    pub d: usize,
    pub top_vertices: Vec<Vec<f64>>,
    pub bottom_vertices: Vec<Vec<f64>>,
    pub planes: Vec<WirePlane>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub id: u64,
    pub likelihoods: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Train {
    pub samples: Vec<HopSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ack {
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorFrame {
    #[serde(default)]
    pub id: Option<u64>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Message {
    #[serde(rename = "SCORE_REQ")]
    ScoreReq(ScoreRequest),
    #[serde(rename = "SCORE_RESP")]
    ScoreResp(ScoreResponse),
    #[serde(rename = "TRAIN")]
    Train(Train),
    #[serde(rename = "ACK")]
    Ack(Ack),
    #[serde(rename = "ERROR")]
    Error(ErrorFrame),
}

impl Message {
    /// One line, without the trailing newline.
    pub fn encode(&self) -> String {
        serde_json::to_string(self).expect("wire messages always serialize")
    }

    pub fn decode(line: &str) -> Result<Message> {
        serde_json::from_str(line.trim_end()).map_err(|e| Error::Parse(format!("wire message: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_request_shape() {
        let m = Message::ScoreReq(ScoreRequest {
            id: 7,
            d: 2,
            top_vertices: vec![vec![0.0, 1.0]],
            bottom_vertices: vec![],
            planes: vec![WirePlane { normal: vec![1.0, 0.0], offset: 0.5, deck: Some(Deck::Top) }],
        });
        let line = m.encode();
        assert!(!line.contains('\n'));
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["type"], "SCORE_REQ");
        assert_eq!(v["topVertices"][0][1], 1.0);
        assert_eq!(v["planes"][0]["deck"], "top");
        assert_eq!(Message::decode(&line).unwrap(), m);
    }

    #[test]
    fn decodes_service_frames() {
        let r = Message::decode(r#"{"type":"SCORE_RESP","id":3,"likelihoods":[0.5,0.25]}"#).unwrap();
        assert_eq!(r, Message::ScoreResp(ScoreResponse { id: 3, likelihoods: vec![0.5, 0.25] }));
        let a = Message::decode("{\"type\":\"ACK\",\"count\":4}\n").unwrap();
        assert_eq!(a, Message::Ack(Ack { count: 4 }));
        let e = Message::decode(r#"{"type":"ERROR","message":"bad"}"#).unwrap();
        assert!(matches!(e, Message::Error(ErrorFrame { id: None, .. })));
        assert!(Message::decode(r#"{"type":"NOPE"}"#).is_err());
    }
}
