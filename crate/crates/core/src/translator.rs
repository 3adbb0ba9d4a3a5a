//! Turning problem text into formulas.
//!
//! Three routes: text already in the formula grammar goes straight to the
//! parser, templated English from the synthetic datasets is matched against a
//! per-dialect template inventory, and anything else can be sent to a remote
//! translation service that answers in the formula grammar.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Duration;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ast::Formula;
use crate::parser::{parse_formula, split_gloss, ParseError};

pub const TRANSLATOR_URL_ENV: &str = "DUALPROOF_TRANSLATOR_URL";
pub const TRANSLATOR_TOKEN_ENV: &str = "DUALPROOF_TRANSLATOR_TOKEN";
pub const REMOTE_SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Prontoqa,
    Proofwriter,
    Logicnli,
}

impl Dialect {
    pub const ALL: [Dialect; 3] = [Dialect::Prontoqa, Dialect::Proofwriter, Dialect::Logicnli];

    pub fn name(self) -> &'static str {
        match self {
            Dialect::Prontoqa => "prontoqa",
            Dialect::Proofwriter => "proofwriter",
            Dialect::Logicnli => "logicnli",
        }
    }

    fn source(self) -> &'static str {
        match self {
            Dialect::Prontoqa => include_str!("../templates/prontoqa.toml"),
            Dialect::Proofwriter => include_str!("../templates/proofwriter.toml"),
            Dialect::Logicnli => include_str!("../templates/logicnli.toml"),
        }
    }

    /// Compiled template inventory, built once per process.
    pub fn inventory(self) -> &'static Inventory {
        static CACHE: [OnceLock<Inventory>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
        CACHE[self as usize].get_or_init(|| {
            Inventory::from_toml(self.source()).unwrap_or_else(|e| panic!("bundled {} templates: {e}", self.name()))
        })
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dialect::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown dialect `{s}` (expected prontoqa, proofwriter or logicnli)"))
    }
}

#[derive(Debug, Error)]
pub enum InventoryError {
    #[error("invalid template file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("template `{pattern}`: {message}")]
    Template { pattern: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SlotKind {
    Name,
    Adj,
    Padj,
    Adjs,
    Cat,
    Pl,
    Pron,
}

impl SlotKind {
    fn parse(slot: &str) -> Option<SlotKind> {
        Some(match slot.trim_end_matches(|c: char| c.is_ascii_digit()) {
            "name" => SlotKind::Name,
            "adj" => SlotKind::Adj,
            "padj" => SlotKind::Padj,
            "adjs" => SlotKind::Adjs,
            "cat" => SlotKind::Cat,
            "pl" => SlotKind::Pl,
            "pron" => SlotKind::Pron,
            _ => return None,
        })
    }

    fn default_regex(self) -> &'static str {
        match self {
            SlotKind::Name => "[A-Z][a-z]+",
            SlotKind::Adj | SlotKind::Cat | SlotKind::Pl => "[A-Za-z]+",
            SlotKind::Padj => "(?:not\\s+)?[A-Za-z]+",
            SlotKind::Adjs => "(?:not\\s+)?[A-Za-z]+(?:(?:,\\s*and\\s+|,\\s*|\\s+and\\s+)(?:not\\s+)?[A-Za-z]+)*",
            SlotKind::Pron => "he|she|they|it",
        }
    }

    fn key(self) -> &'static str {
        match self {
            SlotKind::Name => "name",
            SlotKind::Adj => "adj",
            SlotKind::Padj => "padj",
            SlotKind::Adjs => "adjs",
            SlotKind::Cat => "cat",
            SlotKind::Pl => "pl",
            SlotKind::Pron => "pron",
        }
    }
}

#[derive(Debug, Deserialize)]
struct InventoryFile {
    #[serde(default)]
    query_prefixes: Vec<String>,
    #[serde(default)]
    slots: std::collections::BTreeMap<String, String>,
    #[serde(rename = "template")]
    templates: Vec<TemplateFile>,
}

#[derive(Debug, Deserialize)]
struct TemplateFile {
    pattern: String,
    output: String,
}

/// One sentence pattern and the formula skeleton it produces.
/// Slot name, its kind, and the text it captured.
type Binding = (String, SlotKind, String);

#[derive(Debug, Clone)]
pub struct TranslationRule {
    pub pattern: String,
    pub output: String,
    regex: Regex,
    slots: Vec<(String, SlotKind)>,
    literal_len: usize,
}

/// Templates of one dialect, in file order.
#[derive(Debug, Clone)]
pub struct Inventory {
    pub query_prefixes: Vec<String>,
    pub rules: Vec<TranslationRule>,
}

fn slot_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\{([a-z]+[0-9]*)\}").unwrap())
}

impl Inventory {
    pub fn from_toml(text: &str) -> Result<Inventory, InventoryError> {
        let file: InventoryFile = toml::from_str(text)?;
        let rules = file
            .templates
            .into_iter()
            .map(|t| compile_rule(t, &file.slots))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Inventory { query_prefixes: file.query_prefixes, rules })
    }

    /// Best rule for `sentence`: most literal characters, then file order.
    fn best_match(&self, sentence: &str) -> Option<(&TranslationRule, Vec<Binding>)> {
        let mut best: Option<(&TranslationRule, Vec<Binding>)> = None;
        for rule in &self.rules {
            let Some(caps) = rule.regex.captures(sentence) else { continue };
            let mut bound: Vec<Binding> = Vec::new();
            let mut consistent = true;
            for (i, (slot, kind)) in rule.slots.iter().enumerate() {
                let value = caps[i + 1].to_string();
                if let Some((_, _, prev)) = bound.iter().find(|(s, _, _)| s == slot) {
                    consistent &= *prev == value;
                } else {
                    bound.push((slot.clone(), *kind, value));
                }
            }
            if !consistent {
                continue;
            }
            if best.as_ref().is_none_or(|(b, _)| rule.literal_len > b.literal_len) {
                best = Some((rule, bound));
            }
        }
        best
    }
}

fn compile_rule(t: TemplateFile, overrides: &std::collections::BTreeMap<String, String>) -> Result<TranslationRule, InventoryError> {
    let err = |message: String| InventoryError::Template { pattern: t.pattern.clone(), message };
    let mut regex = String::from("^");
    let mut slots = Vec::new();
    let mut literal_len = 0;
    let mut last = 0;
    for m in slot_pattern().captures_iter(&t.pattern) {
        let whole = m.get(0).unwrap();
        let literal = &t.pattern[last..whole.start()];
        literal_len += literal.len();
        regex.push_str(&literal_regex(literal));
        let slot = m[1].to_string();
        let kind = SlotKind::parse(&slot).ok_or_else(|| err(format!("unknown slot `{slot}`")))?;
        let body = overrides.get(kind.key()).map(String::as_str).unwrap_or(kind.default_regex());
        regex.push_str(&format!("({body})"));
        slots.push((slot, kind));
        last = whole.end();
    }
    let tail = &t.pattern[last..];
    literal_len += tail.len();
    regex.push_str(&literal_regex(tail));
    regex.push('$');
    for m in slot_pattern().captures_iter(&t.output) {
        if !slots.iter().any(|(s, _)| *s == m[1]) {
            return Err(err(format!("output uses unbound slot `{}`", &m[1])));
        }
    }
    let regex = Regex::new(&regex).map_err(|e| err(e.to_string()))?;
    Ok(TranslationRule { pattern: t.pattern, output: t.output, regex, slots, literal_len })
}

/// Escapes template text; whitespace runs match any whitespace and commas are optional.
fn literal_regex(text: &str) -> String {
    let mut out = String::new();
    let mut words = text.split(' ').peekable();
    while let Some(word) = words.next() {
        if let Some(stem) = word.strip_suffix(',') {
            out.push_str(&regex::escape(stem));
            out.push_str(",?");
        } else {
            out.push_str(&regex::escape(word));
        }
        if words.peek().is_some() {
            out.push_str("\\s+");
        }
    }
    out
}

fn capitalize(word: &str) -> String {
    let lower = word.to_lowercase();
    let mut chars = lower.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn singular(word: &str) -> String {
    let w = word.to_lowercase();
    if let Some(stem) = w.strip_suffix("ies") {
        format!("{stem}y")
    } else if ["uses", "sses", "xes", "ches", "shes"].iter().any(|s| w.ends_with(s)) {
        w[..w.len() - 2].to_string()
    } else if let Some(stem) = w.strip_suffix('s') {
        stem.to_string()
    } else {
        w
    }
}

/// `[not] word` as a signed predicate prefix, e.g. `¬Bitter`.
fn signed_predicate(phrase: &str) -> String {
    let mut words = phrase.split_whitespace();
    let first = words.next().unwrap_or_default();
    match words.next() {
        Some(adj) if first.eq_ignore_ascii_case("not") => format!("¬{}", capitalize(adj)),
        _ => capitalize(first),
    }
}

fn list_items(phrase: &str) -> Vec<String> {
    static SEP: OnceLock<Regex> = OnceLock::new();
    SEP.get_or_init(|| Regex::new(r",\s*and\s+|,\s*|\s+and\s+").unwrap())
        .split(phrase)
        .map(signed_predicate)
        .collect()
}

fn render_slot(kind: SlotKind, value: &str, args: Option<&str>) -> String {
    let apply = |pred: String| match args {
        Some(a) => format!("{pred}({a})"),
        None => pred,
    };
    match kind {
        SlotKind::Name => apply(value.to_string()),
        SlotKind::Adj | SlotKind::Cat => apply(capitalize(value)),
        SlotKind::Pl => apply(capitalize(&singular(value))),
        SlotKind::Padj => apply(signed_predicate(value)),
        SlotKind::Adjs => {
            let items: Vec<String> = list_items(value).into_iter().map(apply).collect();
            if items.len() == 1 {
                items.into_iter().next().unwrap()
            } else {
                format!("({})", items.join(" ∧ "))
            }
        }
        SlotKind::Pron => String::new(),
    }
}

fn fill(output: &str, bound: &[Binding]) -> String {
    static APPLIED: OnceLock<Regex> = OnceLock::new();
    let re = APPLIED.get_or_init(|| Regex::new(r"\{([a-z]+[0-9]*)\}(?:\(([^()]*)\))?").unwrap());
    re.replace_all(output, |c: &regex::Captures| {
        let (_, kind, value) = bound.iter().find(|(s, _, _)| *s == c[1]).expect("slots checked at load time");
        let args = c.get(2).map(|m| fill(m.as_str(), bound));
        render_slot(*kind, value, args.as_deref())
    })
    .into_owned()
}

/// Splits running text into sentences on `.`, `!` or `?` followed by whitespace or end.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut start = 0;
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    for (i, &(pos, c)) in chars.iter().enumerate() {
        let at_break = matches!(c, '.' | '!' | '?') && chars.get(i + 1).is_none_or(|&(_, n)| n.is_whitespace());
        if at_break {
            let s = text[start..pos].trim();
            if !s.is_empty() {
                out.push(s.to_string());
            }
            start = pos + c.len_utf8();
        }
    }
    let rest = text[start..].trim();
    if !rest.is_empty() {
        out.push(rest.to_string());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    /// Index counts premise sentences first, then the query sentence.
    #[error("sentence {index} matches no {dialect} template: {sentence:?}")]
    UntranslatableSentence { index: usize, sentence: String, dialect: Dialect },
    #[error("template output for sentence {index} does not parse: {error}")]
    BadTemplateOutput { index: usize, error: ParseError },
    #[error("query must be a single sentence, got {0}")]
    QueryShape(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub premises: Vec<Formula>,
    pub query: Formula,
}

fn translate_sentence(inv: &Inventory, dialect: Dialect, index: usize, sentence: &str) -> Result<Formula, TranslateError> {
    let untranslatable = || TranslateError::UntranslatableSentence { index, sentence: sentence.to_string(), dialect };
    let (rule, bound) = inv.best_match(sentence).ok_or_else(untranslatable)?;
    parse_formula(&fill(&rule.output, &bound)).map_err(|error| TranslateError::BadTemplateOutput { index, error })
}

/// Strips a dialect question prefix such as "True or false:".
pub fn strip_query_prefix(dialect: Dialect, query: &str) -> &str {
    let q = query.trim();
    dialect
        .inventory()
        .query_prefixes
        .iter()
        .find_map(|p| q.strip_prefix(p.as_str()))
        .map(str::trim)
        .unwrap_or(q)
}

/// Translates templated English premises and a query statement.
pub fn translate_templated(premises: &[String], query: &str, dialect: Dialect) -> Result<Translation, TranslateError> {
    let inv = dialect.inventory();
    let sentences: Vec<String> = premises.iter().flat_map(|p| split_sentences(p)).collect();
    let formulas = sentences
        .iter()
        .enumerate()
        .map(|(i, s)| translate_sentence(inv, dialect, i, s))
        .collect::<Result<Vec<_>, _>>()?;
    let query_sentences = split_sentences(strip_query_prefix(dialect, query));
    let [q] = query_sentences.as_slice() else {
        return Err(TranslateError::QueryShape(query_sentences.len()));
    };
    let query = translate_sentence(inv, dialect, sentences.len(), q)?;
    Ok(Translation { premises: formulas, query })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemoteTranslatorEndpoint {
    pub url: String,
    pub timeout: Duration,
    /// Extra attempts after the first failure.
    pub retries: u32,
    pub schema_version: String,
    /// Sent as `Authorization: Bearer <token>` when present.
    pub bearer_token: Option<String>,
}

impl RemoteTranslatorEndpoint {
    pub fn new(url: impl Into<String>) -> Self {
        RemoteTranslatorEndpoint {
            url: url.into(),
            timeout: Duration::from_secs(30),
            retries: 2,
            schema_version: REMOTE_SCHEMA_VERSION.to_string(),
            bearer_token: std::env::var(TRANSLATOR_TOKEN_ENV).ok().filter(|t| !t.is_empty()),
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn with_retries(mut self, retries: u32) -> Self {
        self.retries = retries;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RemoteError {
    #[error("translator transport error: {0}")]
    TransportError(String),
    #[error("translator response violates schema: {0}")]
    SchemaError(String),
    #[error("translator returned unparsable `{text}`: {error}")]
    ParseError { text: String, error: ParseError },
}

#[derive(Debug, Serialize)]
struct RemoteRequest<'a> {
    premises: &'a [String],
    statement: &'a str,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RemoteResponse {
    facts: Vec<String>,
    rules: Vec<String>,
    query: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemoteTranslation {
    pub translation: Translation,
    /// Requests made, 1 when the first one succeeded.
    pub attempts: u32,
}

fn parse_remote(text: &str) -> Result<Formula, RemoteError> {
    let (body, _) = split_gloss(text);
    parse_formula(body).map_err(|error| RemoteError::ParseError { text: text.to_string(), error })
}

fn attempt(ep: &RemoteTranslatorEndpoint, premises: &[String], statement: &str) -> Result<Translation, RemoteError> {
    let agent = ureq::AgentBuilder::new().timeout(ep.timeout).build();
    let mut req = agent
        .post(&ep.url)
        .set("Content-Type", "application/json")
        .set("X-Schema-Version", &ep.schema_version);
    if let Some(token) = &ep.bearer_token {
        req = req.set("Authorization", &format!("Bearer {token}"));
    }
    let body = serde_json::to_value(RemoteRequest { premises, statement }).expect("request serializes");
    let resp = req.send_json(body).map_err(|e| RemoteError::TransportError(e.to_string()))?;
    let value: serde_json::Value =
        resp.into_json().map_err(|e| RemoteError::SchemaError(format!("body is not JSON: {e}")))?;
    let resp: RemoteResponse = serde_json::from_value(value).map_err(|e| RemoteError::SchemaError(e.to_string()))?;
    let premises = resp
        .facts
        .iter()
        .chain(&resp.rules)
        .map(|t| parse_remote(t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Translation { premises, query: parse_remote(&resp.query)? })
}

/// Asks a remote service to translate; every failure is retried up to `ep.retries` times.
pub fn translate_remote(
    premises: &[String],
    statement: &str,
    ep: &RemoteTranslatorEndpoint,
) -> Result<RemoteTranslation, RemoteError> {
    let mut attempts = 0;
    loop {
        attempts += 1;
        match attempt(ep, premises, statement) {
            Ok(translation) => return Ok(RemoteTranslation { translation, attempts }),
            Err(e) if attempts > ep.retries => return Err(e),
            Err(_) => continue,
        }
    }
}
