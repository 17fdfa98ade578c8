//! Live protocol: one JSON object per WebSocket text frame, discriminated by
//! its `type` field.
//!
//! Client to server:
//!
//! ```json
//! {"type": "start_session",
//!  "profiles": {"player1": {"label": "A", "points_won_on_serve": 410, "serve_attempts": 620,
//!                           "expected_points_per_match": 105.0},
//!               "player2": {...}},
//!  "format": {"sets_to_win": 3},          // optional, best of 5 by default
//!  "model_config": {"prior_strength": 10}, // optional
//!  "first_server": 1}                      // optional, else the first point decides
//! {"type": "record_point",
//!  "point": {"server": 1, "winner": 2, "rally_count": 5, "ace": false, "double_fault": false}}
//! {"type": "undo"}
//! {"type": "what_if", "points": [<point>, ...]}
//! {"type": "end_session"}
//! ```
//!
//! `rally_count` counts the serve, as in point logs; `ace` and
//! `double_fault` default to false.
//!
//! Server to client: `session_ack`, `sample_update`, `projection` and
//! `error`, see [`ServerMessage`].

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use tmm_core::ingest::{point_from_row, RawPointRow};
use tmm_core::momentum::ModelError;
use tmm_core::{
    MatchFormat, ModelConfig64, MomentumSample64, PlayerId, PlayerProfile, PointRecord, ScoreState,
};

use crate::session::{Session, SessionError};

#[derive(Debug, Clone, PartialEq)]
pub enum ClientMessage {
    StartSession {
        profiles: [PlayerProfile; 2],
        format: MatchFormat,
        model_config: ModelConfig64,
        first_server: Option<PlayerId>,
    },
    RecordPoint(PointRecord),
    Undo,
    WhatIf(Vec<PointRecord>),
    EndSession,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AckEvent {
    Started,
    Undone,
    Ended,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    SessionAck {
        session_id: String,
        event: AckEvent,
        score: ScoreState,
        points_played: u32,
    },
    SampleUpdate {
        sample: MomentumSample64,
        score: ScoreState,
    },
    /// Hypothetical samples; the session is unchanged.
    Projection {
        samples: Vec<MomentumSample64>,
        score: ScoreState,
    },
    Error {
        /// Offending field, as a path like `point.rally_count`.
        field: Option<String>,
        message: String,
    },
}

impl ServerMessage {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("messages serialize")
    }

    fn error(field: impl Into<String>, message: impl Into<String>) -> Self {
        ServerMessage::Error {
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolError {
    pub field: Option<String>,
    pub message: String,
}

impl ProtocolError {
    fn at(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

impl From<ProtocolError> for ServerMessage {
    fn from(e: ProtocolError) -> Self {
        ServerMessage::Error {
            field: e.field,
            message: e.message,
        }
    }
}

fn object<'a>(value: &'a Value, path: &str) -> Result<&'a Map<String, Value>, ProtocolError> {
    value
        .as_object()
        .ok_or_else(|| ProtocolError::at(path, "expected an object"))
}

fn required<'a>(
    obj: &'a Map<String, Value>,
    path: &str,
    key: &str,
) -> Result<&'a Value, ProtocolError> {
    obj.get(key)
        .filter(|v| !v.is_null())
        .ok_or_else(|| ProtocolError::at(join(path, key), "missing"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn player(value: &Value, path: &str) -> Result<PlayerId, ProtocolError> {
    value
        .as_u64()
        .and_then(PlayerId::from_number)
        .ok_or_else(|| ProtocolError::at(path, format!("expected 1 or 2, got {value}")))
}

fn flag(obj: &Map<String, Value>, path: &str, key: &str) -> Result<bool, ProtocolError> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(false),
        Some(Value::Bool(b)) => Ok(*b),
        Some(other) => Err(ProtocolError::at(
            join(path, key),
            format!("expected a boolean, got {other}"),
        )),
    }
}

fn typed<T: for<'de> Deserialize<'de>>(value: &Value, path: &str) -> Result<T, ProtocolError> {
    serde_json::from_value(value.clone()).map_err(|e| ProtocolError::at(path, e.to_string()))
}

/// Decodes a point entry, applying the same checks and rally mapping as
/// point-log ingestion.
fn point(value: &Value, path: &str) -> Result<PointRecord, ProtocolError> {
    let obj = object(value, path)?;
    let server = player(required(obj, path, "server")?, &join(path, "server"))?;
    let winner = player(required(obj, path, "winner")?, &join(path, "winner"))?;
    let rally = required(obj, path, "rally_count")?;
    let rally_count = rally
        .as_u64()
        .filter(|&n| n >= 1)
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| {
            ProtocolError::at(
                join(path, "rally_count"),
                format!("expected a positive integer counting the serve, got {rally}"),
            )
        })?;
    let ace = flag(obj, path, "ace")?;
    let double_fault = flag(obj, path, "double_fault")?;
    if ace && winner != server {
        return Err(ProtocolError::at(
            join(path, "ace"),
            "an ace must be won by the server",
        ));
    }
    if double_fault && winner == server {
        return Err(ProtocolError::at(
            join(path, "double_fault"),
            "a double fault must be lost by the server",
        ));
    }
    if ace && double_fault {
        return Err(ProtocolError::at(
            join(path, "double_fault"),
            "a point cannot be both an ace and a double fault",
        ));
    }
    Ok(point_from_row(&RawPointRow {
        match_id: String::new(),
        set_no: 0,
        game_no: 0,
        point_no: 0,
        server: server.number(),
        point_victor: winner.number(),
        rally_count,
        ace,
        double_fault,
        player1: None,
        player2: None,
    }))
}

fn profile(value: &Value, path: &str) -> Result<PlayerProfile, ProtocolError> {
    let profile: PlayerProfile = typed(value, path)?;
    profile
        .validate()
        .map_err(|e| ProtocolError::at(path, e.to_string()))?;
    Ok(profile)
}

pub fn decode(text: &str) -> Result<ClientMessage, ProtocolError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ProtocolError {
        field: None,
        message: format!("invalid JSON: {e}"),
    })?;
    let obj = object(&value, "message")?;
    let kind = required(obj, "", "type")?
        .as_str()
        .ok_or_else(|| ProtocolError::at("type", "expected a string"))?;
    match kind {
        "start_session" => {
            let profiles = object(required(obj, "", "profiles")?, "profiles")?;
            let p1 = profile(
                required(profiles, "profiles", "player1")?,
                "profiles.player1",
            )?;
            let p2 = profile(
                required(profiles, "profiles", "player2")?,
                "profiles.player2",
            )?;
            let format: MatchFormat = match obj.get("format") {
                None | Some(Value::Null) => MatchFormat::default(),
                Some(v) => typed(v, "format")?,
            };
            format
                .validate()
                .map_err(|e| ProtocolError::at("format", e.to_string()))?;
            let model_config: ModelConfig64 = match obj.get("model_config") {
                None | Some(Value::Null) => ModelConfig64::default(),
                Some(v) => typed(v, "model_config")?,
            };
            model_config
                .validate()
                .map_err(|e| ProtocolError::at("model_config", e.to_string()))?;
            let first_server = match obj.get("first_server") {
                None | Some(Value::Null) => None,
                Some(v) => Some(player(v, "first_server")?),
            };
            Ok(ClientMessage::StartSession {
                profiles: [p1, p2],
                format,
                model_config,
                first_server,
            })
        }
        "record_point" => Ok(ClientMessage::RecordPoint(point(
            required(obj, "", "point")?,
            "point",
        )?)),
        "undo" => Ok(ClientMessage::Undo),
        "what_if" => {
            let list = required(obj, "", "points")?
                .as_array()
                .ok_or_else(|| ProtocolError::at("points", "expected an array"))?;
            let points = list
                .iter()
                .enumerate()
                .map(|(i, v)| point(v, &format!("points[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ClientMessage::WhatIf(points))
        }
        "end_session" => Ok(ClientMessage::EndSession),
        other => Err(ProtocolError::at(
            "type",
            format!("unknown message type `{other}`"),
        )),
    }
}

fn model_error_field(error: &ModelError, path: &str) -> String {
    match error {
        ModelError::ServerMismatch { .. } => join(path, "server"),
        ModelError::InvalidPoint(_) => path.to_string(),
        _ => path.to_string(),
    }
}

/// Protocol state of one connection: at most one session at a time.
#[derive(Debug, Default)]
pub struct Connection {
    session: Option<Session>,
}

impl Connection {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn session(&self) -> Option<&Session> {
        self.session.as_ref()
    }

    /// Handles one incoming frame. Every frame gets exactly one reply;
    /// errors never end the session.
    pub fn handle_text(&mut self, text: &str) -> ServerMessage {
        match decode(text) {
            Ok(message) => self.handle(message),
            Err(e) => e.into(),
        }
    }

    pub fn handle(&mut self, message: ClientMessage) -> ServerMessage {
        if let ClientMessage::StartSession {
            profiles,
            format,
            model_config,
            first_server,
        } = message
        {
            if self.session.is_some() {
                return ServerMessage::error("type", "a session is already active; end it first");
            }
            let id = uuid::Uuid::new_v4().to_string();
            return match Session::new(id, profiles, format, model_config, first_server) {
                Ok(session) => {
                    let ack = ack(&session, AckEvent::Started);
                    self.session = Some(session);
                    ack
                }
                Err(e) => ServerMessage::error("profiles", e.to_string()),
            };
        }
        let Some(session) = self.session.as_mut() else {
            return ServerMessage::error("type", "no active session; send start_session first");
        };
        match message {
            ClientMessage::StartSession { .. } => unreachable!("handled above"),
            ClientMessage::RecordPoint(point) => match session.record(point) {
                Ok(sample) => ServerMessage::SampleUpdate {
                    sample,
                    score: *session.score(),
                },
                Err(SessionError::Model(e)) => {
                    ServerMessage::error(model_error_field(&e, "point"), e.to_string())
                }
                Err(e) => ServerMessage::error("point", e.to_string()),
            },
            ClientMessage::Undo => match session.undo() {
                Ok(_) => ack(session, AckEvent::Undone),
                Err(e) => ServerMessage::error("type", e.to_string()),
            },
            ClientMessage::WhatIf(points) => match session.what_if(&points) {
                Ok((samples, score)) => ServerMessage::Projection { samples, score },
                Err((i, e)) => ServerMessage::error(
                    model_error_field(&e, &format!("points[{i}]")),
                    e.to_string(),
                ),
            },
            ClientMessage::EndSession => {
                let reply = ack(session, AckEvent::Ended);
                self.session = None;
                reply
            }
        }
    }
}

fn ack(session: &Session, event: AckEvent) -> ServerMessage {
    ServerMessage::SessionAck {
        session_id: session.id().to_string(),
        event,
        score: *session.score(),
        points_played: session.score().total_points_played,
    }
}
