//! Line-oriented scenario format.
//!
//! ```text
//! # comment
//! REGISTER 1 EXCLUSIVE 512 0x10000-0x20000
//! REGISTER 2 MAINSTREAM -
//! SWITCH 0 1
//! ACCESS 0 1 R 0x1f40
//! ALLOC 3 64
//! RESIZE 1 2048
//! DEALLOC 3
//! BARRIER phase-2
//! TEARDOWN 2
//! ```
//!
//! Core, domain and set counts are decimal; addresses are hex with a `0x`
//! prefix. Shared regions are half-open `start-end` pairs.

use std::fmt;

use crate::domain::{DomainConfig, Region};
use crate::error::ParseError;
use crate::types::{AccessKind, DomainId, IsolationMode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioEvent {
    Access { core: usize, did: DomainId, kind: AccessKind, addr: u64 },
    Alloc { did: DomainId, sets: usize },
    Dealloc { did: DomainId },
    Resize { did: DomainId, sets: usize },
    Register(DomainConfig),
    Switch { core: usize, did: DomainId },
    Barrier { label: String },
    Teardown { did: DomainId },
}

impl ScenarioEvent {
    pub fn access(core: usize, did: u16, kind: AccessKind, addr: u64) -> Self {
        ScenarioEvent::Access { core, did: DomainId(did), kind, addr }
    }

    pub fn barrier(label: impl Into<String>) -> Self {
        ScenarioEvent::Barrier { label: label.into() }
    }

    /// Domain that issues the event, for accesses only.
    pub fn access_did(&self) -> Option<DomainId> {
        match self {
            ScenarioEvent::Access { did, .. } => Some(*did),
            _ => None,
        }
    }
}

impl fmt::Display for ScenarioEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioEvent::Access { core, did, kind, addr } => {
                write!(f, "ACCESS {core} {} {} {addr:#x}", did.0, kind.mnemonic())
            }
            ScenarioEvent::Alloc { did, sets } => write!(f, "ALLOC {} {sets}", did.0),
            ScenarioEvent::Dealloc { did } => write!(f, "DEALLOC {}", did.0),
            ScenarioEvent::Resize { did, sets } => write!(f, "RESIZE {} {sets}", did.0),
            ScenarioEvent::Register(cfg) => {
                write!(f, "REGISTER {} {} ", cfg.did.0, cfg.mode.as_str())?;
                match cfg.requested_sets {
                    Some(n) => write!(f, "{n}")?,
                    None => f.write_str("-")?,
                }
                for r in &cfg.shared_regions {
                    write!(f, " {:#x}-{:#x}", r.start, r.end)?;
                }
                Ok(())
            }
            ScenarioEvent::Switch { core, did } => write!(f, "SWITCH {core} {}", did.0),
            ScenarioEvent::Barrier { label } => write!(f, "BARRIER {label}"),
            ScenarioEvent::Teardown { did } => write!(f, "TEARDOWN {}", did.0),
        }
    }
}

/// Whitespace-separated token with its 1-based column.
struct Tok<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok { text: &line[s..i], column: s + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Tok { text: &line[s..], column: s + 1 });
    }
    out
}

struct LineParser<'a> {
    line: usize,
    end_column: usize,
    toks: std::vec::IntoIter<Tok<'a>>,
}

impl<'a> LineParser<'a> {
    fn syntax(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, column, message: message.into() }
    }

    fn next(&mut self, what: &str) -> Result<Tok<'a>, ParseError> {
        let column = self.end_column;
        self.toks.next().ok_or_else(|| self.syntax(column, format!("missing {what}")))
    }

    fn decimal(&mut self, what: &str) -> Result<u64, ParseError> {
        let tok = self.next(what)?;
        if tok.text.is_empty() || !tok.text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.syntax(tok.column, format!("expected decimal {what}, found `{}`", tok.text)));
        }
        tok.text
            .parse()
            .map_err(|_| ParseError::Range { line: self.line, message: format!("{what} `{}` is too large", tok.text) })
    }

    fn usize(&mut self, what: &str) -> Result<usize, ParseError> {
        let v = self.decimal(what)?;
        usize::try_from(v)
            .map_err(|_| ParseError::Range { line: self.line, message: format!("{what} {v} is too large") })
    }

    fn did(&mut self) -> Result<DomainId, ParseError> {
        let v = self.decimal("domain id")?;
        u16::try_from(v)
            .map(DomainId)
            .map_err(|_| ParseError::Range { line: self.line, message: format!("domain id {v} exceeds 65535") })
    }

    fn hex_at(&self, text: &str, column: usize) -> Result<u64, ParseError> {
        let digits = text
            .strip_prefix("0x")
            .or_else(|| text.strip_prefix("0X"))
            .ok_or_else(|| self.syntax(column, format!("expected hex address with 0x prefix, found `{text}`")))?;
        if digits.is_empty() {
            return Err(self.syntax(column + 2, "empty hex number"));
        }
        if let Some(pos) = digits.find(|c: char| !c.is_ascii_hexdigit()) {
            return Err(self.syntax(column + 2 + pos, format!("invalid hex digit in `{text}`")));
        }
        u64::from_str_radix(digits, 16)
            .map_err(|_| ParseError::Range { line: self.line, message: format!("address `{text}` exceeds 64 bits") })
    }

    fn address(&mut self) -> Result<u64, ParseError> {
        let tok = self.next("address")?;
        self.hex_at(tok.text, tok.column)
    }

    fn region(&self, tok: &Tok<'_>) -> Result<Region, ParseError> {
        let Some((a, b)) = tok.text.split_once('-') else {
            return Err(self.syntax(tok.column, format!("expected region `0xSTART-0xEND`, found `{}`", tok.text)));
        };
        let start = self.hex_at(a, tok.column)?;
        let end = self.hex_at(b, tok.column + a.len() + 1)?;
        if start >= end {
            return Err(ParseError::Range { line: self.line, message: format!("region `{}` is empty", tok.text) });
        }
        Ok(Region::new(start, end))
    }

    fn finish(mut self) -> Result<(), ParseError> {
        match self.toks.next() {
            Some(tok) => Err(self.syntax(tok.column, format!("unexpected trailing `{}`", tok.text))),
            None => Ok(()),
        }
    }
}

fn parse_line(line_no: usize, raw: &str) -> Result<Option<ScenarioEvent>, ParseError> {
    let content = raw.split('#').next().unwrap_or("");
    let toks = tokenize(content);
    if toks.is_empty() {
        return Ok(None);
    }
    let end_column = content.trim_end().len() + 1;
    let mut p = LineParser { line: line_no, end_column, toks: toks.into_iter() };
    let head = p.next("directive")?;

    let event = match head.text {
        "ACCESS" => {
            let core = p.usize("core")?;
            let did = p.did()?;
            let kind_tok = p.next("operation")?;
            let kind = kind_tok
                .text
                .parse::<AccessKind>()
                .map_err(|_| p.syntax(kind_tok.column, format!("expected R, W or IF, found `{}`", kind_tok.text)))?;
            let addr = p.address()?;
            ScenarioEvent::Access { core, did, kind, addr }
        }
        "ALLOC" => ScenarioEvent::Alloc { did: p.did()?, sets: p.usize("set count")? },
        "DEALLOC" => ScenarioEvent::Dealloc { did: p.did()? },
        "RESIZE" => ScenarioEvent::Resize { did: p.did()?, sets: p.usize("set count")? },
        "TEARDOWN" => ScenarioEvent::Teardown { did: p.did()? },
        "SWITCH" => ScenarioEvent::Switch { core: p.usize("core")?, did: p.did()? },
        "BARRIER" => ScenarioEvent::Barrier { label: p.next("label")?.text.to_string() },
        "REGISTER" => {
            let did = p.did()?;
            let mode_tok = p.next("isolation mode")?;
            let mode = mode_tok.text.parse::<IsolationMode>().map_err(|_| {
                p.syntax(mode_tok.column, format!("expected EXCLUSIVE or MAINSTREAM, found `{}`", mode_tok.text))
            })?;
            let sets_tok = p.next("set count or `-`")?;
            let requested_sets = if sets_tok.text == "-" {
                None
            } else if sets_tok.text.bytes().all(|b| b.is_ascii_digit()) {
                Some(sets_tok.text.parse::<usize>().map_err(|_| ParseError::Range {
                    line: line_no,
                    message: format!("set count `{}` is too large", sets_tok.text),
                })?)
            } else {
                return Err(p.syntax(sets_tok.column, format!("expected set count or `-`, found `{}`", sets_tok.text)));
            };
            let mut shared_regions = Vec::new();
            for tok in p.toks.by_ref().collect::<Vec<_>>() {
                shared_regions.push(p.region(&tok)?);
            }
            ScenarioEvent::Register(DomainConfig { did, mode, requested_sets, shared_regions })
        }
        other => return Err(ParseError::UnknownDirective { line: line_no, directive: other.to_string() }),
    };
    p.finish()?;
    Ok(Some(event))
}

/// Parses a whole scenario; events come back in file order.
pub fn parse_scenario(text: &str) -> Result<Vec<ScenarioEvent>, ParseError> {
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(ev) = parse_line(i + 1, line)? {
            events.push(ev);
        }
    }
    Ok(events)
}

/// One directive per line, newline terminated.
pub fn serialize_scenario(events: &[ScenarioEvent]) -> String {
    let mut out = String::new();
    for ev in events {
        out.push_str(&ev.to_string());
        out.push('\n');
    }
    out
}
