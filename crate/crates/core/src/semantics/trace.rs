//! Traces: the observable record of one program run.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// One observable event: a value read from the console or a line written to
/// it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    In(i64),
    Out(String),
}

/// A finite sequence of I/O events. A complete run ends with the `stop`
/// marker (`terminated` is true).
///
/// The display form is bit-exact: events space-separated, inputs as
/// `?<int>`, outputs as `!<text>`, terminated traces ending in the literal
/// token `stop`. Example: `?2 ?-3 ?-2 !-5 stop`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    events: Vec<Event>,
    terminated: bool,
}

impl Trace {
    pub fn new(events: Vec<Event>, terminated: bool) -> Trace {
        Trace { events, terminated }
    }

    /// The empty complete trace, displayed as just `stop`.
    pub fn stopped() -> Trace {
        Trace {
            events: vec![],
            terminated: true,
        }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// The input values in order.
    pub fn inputs(&self) -> Vec<i64> {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::In(v) => Some(*v),
                Event::Out(_) => None,
            })
            .collect()
    }

    /// The output line texts in order.
    pub fn outputs(&self) -> Vec<String> {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::Out(t) => Some(t.clone()),
                Event::In(_) => None,
            })
            .collect()
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in &self.events {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            match e {
                Event::In(v) => write!(f, "?{v}")?,
                Event::Out(t) => write!(f, "!{t}")?,
            }
        }
        if self.terminated {
            if !first {
                f.write_str(" ")?;
            }
            f.write_str("stop")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceParseError {
    #[error("input token {0:?} is not ?<integer>")]
    BadInput(String),
    #[error("unexpected token {0:?} (expected ?<int>, !<text> or stop)")]
    BadToken(String),
    #[error("tokens after the stop marker")]
    TokensAfterStop,
}

impl FromStr for Trace {
    type Err = TraceParseError;

    /// Parses the display form. Output text extends greedily over following
    /// whitespace-separated words that do not themselves start an event and
    /// are not a final `stop` token, so `!no luck` round-trips.
    fn from_str(s: &str) -> Result<Trace, TraceParseError> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let mut events = Vec::new();
        let mut terminated = false;
        let mut i = 0;
        while i < tokens.len() {
            let tok = tokens[i];
            if terminated {
                return Err(TraceParseError::TokensAfterStop);
            }
            if tok == "stop" {
                terminated = true;
                i += 1;
            } else if let Some(num) = tok.strip_prefix('?') {
                let v: i64 = num
                    .parse()
                    .map_err(|_| TraceParseError::BadInput(tok.to_string()))?;
                events.push(Event::In(v));
                i += 1;
            } else if let Some(text) = tok.strip_prefix('!') {
                let mut text = text.to_string();
                i += 1;
                while i < tokens.len()
                    && !tokens[i].starts_with('?')
                    && !tokens[i].starts_with('!')
                    && !(tokens[i] == "stop" && i == tokens.len() - 1)
                {
                    text.push(' ');
                    text.push_str(tokens[i]);
                    i += 1;
                }
                events.push(Event::Out(text));
            } else {
                return Err(TraceParseError::BadToken(tok.to_string()));
            }
        }
        Ok(Trace { events, terminated })
    }
}

impl Serialize for Trace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Trace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Trace, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_wire_format() {
        let t = Trace::new(
            vec![
                Event::In(2),
                Event::In(-3),
                Event::In(-2),
                Event::Out("-5".into()),
            ],
            true,
        );
        assert_eq!(t.to_string(), "?2 ?-3 ?-2 !-5 stop");
        assert_eq!(Trace::stopped().to_string(), "stop");
    }

    #[test]
    fn parse_round_trips() {
        for s in ["stop", "?2 ?1 ?5 !6 stop", "?-3 !-3 stop", "?1 ?9 !9"] {
            let t: Trace = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
    }

    #[test]
    fn inputs_projection() {
        let t: Trace = "?2 ?1 ?5 !6 stop".parse().unwrap();
        assert_eq!(t.inputs(), vec![2, 1, 5]);
        let t: Trace = "stop".parse().unwrap();
        assert_eq!(t.inputs(), Vec::<i64>::new());
        let t: Trace = "?-3 !-3 stop".parse().unwrap();
        assert_eq!(t.inputs(), vec![-3]);
    }

    #[test]
    fn output_text_with_spaces() {
        let t: Trace = "!no luck stop".parse().unwrap();
        assert_eq!(t.outputs(), vec!["no luck".to_string()]);
        assert!(t.is_terminated());
        assert_eq!(t.to_string(), "!no luck stop");
    }

    #[test]
    fn bad_tokens_are_rejected() {
        assert!("?x stop".parse::<Trace>().is_err());
        assert!("hello".parse::<Trace>().is_err());
        assert!("stop ?1".parse::<Trace>().is_err());
    }
}
