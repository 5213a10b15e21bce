//! Reading an L/R choice out of a free-text response.

use rpd_core::Action;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParsedAction {
    L,
    R,
    Unparseable,
    /// The agent never produced a response (transport failure after retries).
    Failed,
}

impl ParsedAction {
    pub fn action(self) -> Option<Action> {
        match self {
            ParsedAction::L => Some(Action::L),
            ParsedAction::R => Some(Action::R),
            _ => None,
        }
    }
}

impl From<Action> for ParsedAction {
    fn from(a: Action) -> Self {
        match a {
            Action::L => ParsedAction::L,
            Action::R => ParsedAction::R,
        }
    }
}

fn is_trim(c: char) -> bool {
    c.is_whitespace() || c.is_ascii_punctuation() || matches!(c, '“' | '”' | '‘' | '’')
}

/// The response is exactly `L` or `R`, ignoring case and surrounding whitespace or punctuation.
pub fn parse_strict(text: &str) -> Option<Action> {
    match text.trim_matches(is_trim) {
        "L" | "l" => Some(Action::L),
        "R" | "r" => Some(Action::R),
        _ => None,
    }
}

/// The first standalone capital `L` or `R` token.
pub fn parse_lenient(text: &str) -> Option<Action> {
    text.split(|c: char| !c.is_alphanumeric()).find_map(|tok| match tok {
        "L" => Some(Action::L),
        "R" => Some(Action::R),
        _ => None,
    })
}

/// Strict match first, then the lenient token scan when `lenient` is set.
pub fn parse_response(text: &str, lenient: bool) -> ParsedAction {
    parse_strict(text)
        .or_else(|| if lenient { parse_lenient(text) } else { None })
        .map_or(ParsedAction::Unparseable, ParsedAction::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_forms() {
        for s in ["L", " l\n", "\"L\".", "**L**", "“L”"] {
            assert_eq!(parse_strict(s), Some(Action::L), "{s:?}");
        }
        assert_eq!(parse_strict("R!"), Some(Action::R));
        assert_eq!(parse_strict("LR"), None);
        assert_eq!(parse_strict(""), None);
    }

    #[test]
    fn lenient_forms() {
        assert_eq!(parse_response("I choose R.", true), ParsedAction::R);
        assert_eq!(parse_response("I choose R.", false), ParsedAction::Unparseable);
        assert_eq!(parse_response("Answer: L (cooperate)", true), ParsedAction::L);
        assert_eq!(parse_response("Left or right", true), ParsedAction::Unparseable);
        assert_eq!(parse_response("I'd rather not", true), ParsedAction::Unparseable);
    }
}
