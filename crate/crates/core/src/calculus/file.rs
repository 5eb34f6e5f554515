//! Proof files.
//!
//! ```text
//! // comments run to the end of the line
//! premises:
//! p
//! p -> q
//! 1. p ; premise 1
//! 2. p -> q ; premise 2
//! 3. q ; mp 1 2
//! 4. bot -> p ; axiom BL5 {phi := p}
//! 5. K{a} (bot -> p) ; knec 4 a
//! ```

use thiserror::Error;

use super::{Binding, Justification, Proof, ProofLine, Substitution};
use crate::syntax::{parse, AgentId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ProofParseError {
    /// 1-based line of the proof file.
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ProofParseError> {
    Err(ProofParseError {
        line,
        message: message.into(),
    })
}

pub fn parse_proof(text: &str) -> Result<Proof, ProofParseError> {
    let mut proof = Proof::default();
    let mut in_premises = false;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let content = raw.split("//").next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content == "premises:" {
            if in_premises || !proof.premises.is_empty() || !proof.lines.is_empty() {
                return err(ln, "`premises:` must come first and only once");
            }
            in_premises = true;
            continue;
        }
        if let Some((num, rest)) = numbered(content) {
            in_premises = false;
            let expected = proof.lines.len() + 1;
            if num != expected {
                return err(ln, format!("expected line number {expected}, found {num}"));
            }
            let Some((formula, just)) = rest.split_once(';') else {
                return err(ln, "expected `<formula> ; <justification>`");
            };
            let formula = parse(formula.trim()).map_err(|e| ProofParseError {
                line: ln,
                message: e.to_string(),
            })?;
            let justification = justification(just.trim(), ln)?;
            proof.lines.push(ProofLine {
                formula,
                justification,
            });
        } else if in_premises {
            let p = parse(content).map_err(|e| ProofParseError {
                line: ln,
                message: e.to_string(),
            })?;
            proof.premises.push(p);
        } else {
            return err(ln, "expected a numbered proof line");
        }
    }
    Ok(proof)
}

fn numbered(s: &str) -> Option<(usize, &str)> {
    let (num, rest) = s.split_once('.')?;
    Some((num.trim().parse().ok()?, rest))
}

fn index(tok: Option<&str>, ln: usize) -> Result<usize, ProofParseError> {
    match tok.map(str::parse::<usize>) {
        Some(Ok(n)) => Ok(n),
        _ => err(ln, "expected a line or premise number"),
    }
}

fn justification(s: &str, ln: usize) -> Result<Justification, ProofParseError> {
    let mut words = s.split_whitespace();
    let rule = words.next().unwrap_or("");
    let j = match rule {
        "premise" => Justification::Premise(index(words.next(), ln)?),
        "mp" => {
            let i = index(words.next(), ln)?;
            Justification::ModusPonens(i, index(words.next(), ln)?)
        }
        "dnec" => Justification::DeltaNecessitation(index(words.next(), ln)?),
        "knec" => {
            let i = index(words.next(), ln)?;
            let Some(a) = words.next().and_then(AgentId::new) else {
                return err(ln, "expected an agent name");
            };
            Justification::KNecessitation(i, a)
        }
        "axiom" => {
            let rest = s["axiom".len()..].trim();
            let (name, subst) = match rest.find('{') {
                Some(k) => (rest[..k].trim(), Some(substitution(&rest[k..], ln)?)),
                None => (rest, None),
            };
            if name.is_empty() || name.contains(char::is_whitespace) {
                return err(ln, "expected a schema name");
            }
            return Ok(Justification::Axiom {
                schema: name.to_string(),
                substitution: subst,
            });
        }
        _ => return err(ln, format!("unknown rule `{rule}`")),
    };
    if words.next().is_some() {
        return err(ln, "trailing input after justification");
    }
    Ok(j)
}

/// `{name := value, ...}`; commas inside braces or parentheses do not split.
fn substitution(s: &str, ln: usize) -> Result<Substitution, ProofParseError> {
    let Some(inner) = s.strip_prefix('{').and_then(|t| t.strip_suffix('}')) else {
        return err(ln, "substitution must be enclosed in `{ }`");
    };
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (k, ch) in inner.char_indices() {
        match ch {
            '{' | '(' | '[' => depth += 1,
            '}' | ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&inner[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    parts.push(&inner[start..]);
    let mut out = Substitution::new();
    for part in parts.into_iter().filter(|p| !p.trim().is_empty()) {
        let Some((name, value)) = part.split_once(":=") else {
            return err(
                ln,
                format!("expected `name := value`, found `{}`", part.trim()),
            );
        };
        let (name, value) = (name.trim(), value.trim());
        if out.insert(name.to_string(), binding(value, ln)?).is_some() {
            return err(ln, format!("`{name}` is assigned twice"));
        }
    }
    Ok(out)
}

// Rationals first, then formulas, then agent names. The schema decides the
// final interpretation.
fn binding(value: &str, ln: usize) -> Result<Binding, ProofParseError> {
    if let Ok(v) = value.parse() {
        return Ok(Binding::Value(v));
    }
    match parse(value) {
        Ok(f) => Ok(Binding::Formula(f)),
        Err(e) => match AgentId::new(value) {
            Some(a) => Ok(Binding::Agent(a)),
            None => err(ln, format!("cannot read `{value}`: {e}")),
        },
    }
}
