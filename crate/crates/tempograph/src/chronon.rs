//! Time expression recognition and normalization.
//!
//! Recognizes a closed grammar of English time expressions and normalizes
//! each one to a closed calendar interval at day granularity. The grammar
//! covers the forms found in time-sensitive question templates plus the
//! ISO-style value strings emitted by external timex normalizers:
//!
//! - bare year: `1789`
//! - `the year 2022`
//! - month-name year: `Apr 1956`, `December 1992`
//! - full date: `June 14, 1775` (comma optional)
//! - ISO forms: `1992-12-25`, `1992-12`
//! - bare year range: `1928-1965`
//! - ranges: `from 1789 to 1797`, `between 1776 and 1780`, `between 1776 - 1780`
//! - modifiers over any of the above: `before`, `after`, `since`, `as of`, `in`
//! - explicit intervals: `[1789-01-01, 1797-12-31]` (annotation values only)
//!
//! Month names must be capitalized (`May 2020`, never `may 2020`); keyword
//! modifiers are matched case-insensitively. Sub-day granularity, durations,
//! fuzzy seasons, and relative arithmetic ("a year later") are out of scope.

use std::fmt;

use chrono::{Datelike, NaiveDate};
use once_cell::sync::Lazy;
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors produced while normalizing time expressions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChrononError {
    /// A pattern matched syntactically but names an impossible calendar
    /// date or an inverted range (e.g. "Feb 30, 1990").
    #[error("malformed date in {surface:?}: {reason}")]
    MalformedDate { surface: String, reason: String },
    /// The surface form matches none of the supported pattern classes.
    #[error("unsupported time expression {surface:?}")]
    UnsupportedPattern { surface: String },
}

// ---------------------------------------------------------------------------
// Calendar types
// ---------------------------------------------------------------------------

/// A proleptic-Gregorian calendar date at day granularity.
///
/// Ordered lexicographically on (year, month, day).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CalendarDate(NaiveDate);

impl CalendarDate {
    /// Builds a date, rejecting combinations that do not exist in the
    /// proleptic Gregorian calendar (1775-02-30, Feb 29 in non-leap years).
    pub fn new(year: i32, month: u32, day: u32) -> Result<Self, ChrononError> {
        NaiveDate::from_ymd_opt(year, month, day)
            .map(CalendarDate)
            .ok_or_else(|| ChrononError::MalformedDate {
                surface: format!("{year:04}-{month:02}-{day:02}"),
                reason: "no such day in the proleptic Gregorian calendar".into(),
            })
    }

    pub fn year(&self) -> i32 {
        self.0.year()
    }

    pub fn month(&self) -> u32 {
        self.0.month()
    }

    pub fn day(&self) -> u32 {
        self.0.day()
    }

    /// The preceding day.
    pub fn pred(&self) -> Result<Self, ChrononError> {
        self.0
            .pred_opt()
            .map(CalendarDate)
            .ok_or_else(|| ChrononError::MalformedDate {
                surface: self.to_string(),
                reason: "no preceding day representable".into(),
            })
    }

    /// The following day.
    pub fn succ(&self) -> Result<Self, ChrononError> {
        self.0
            .succ_opt()
            .map(CalendarDate)
            .ok_or_else(|| ChrononError::MalformedDate {
                surface: self.to_string(),
                reason: "no following day representable".into(),
            })
    }

    fn month_start(year: i32, month: u32) -> Result<Self, ChrononError> {
        CalendarDate::new(year, month, 1)
    }

    fn month_end(year: i32, month: u32) -> Result<Self, ChrononError> {
        let (ny, nm) = if month == 12 { (year + 1, 1) } else { (year, month + 1) };
        CalendarDate::new(ny, nm, 1)?.pred()
    }
}

impl fmt::Display for CalendarDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format("%Y-%m-%d"))
    }
}

/// One endpoint of a time interval: a calendar day or an unbounded side.
///
/// The variant order gives the intended total order via `derive(Ord)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TimePoint {
    NegInfinity,
    Date(CalendarDate),
    PosInfinity,
}

impl TimePoint {
    pub fn as_date(&self) -> Option<CalendarDate> {
        match self {
            TimePoint::Date(d) => Some(*d),
            _ => None,
        }
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimePoint::NegInfinity => write!(f, "-inf"),
            TimePoint::Date(d) => write!(f, "{d}"),
            TimePoint::PosInfinity => write!(f, "+inf"),
        }
    }
}

impl std::str::FromStr for TimePoint {
    type Err = ChrononError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "-inf" => Ok(TimePoint::NegInfinity),
            "+inf" => Ok(TimePoint::PosInfinity),
            other => NaiveDate::parse_from_str(other, "%Y-%m-%d")
                .map(|d| TimePoint::Date(CalendarDate(d)))
                .map_err(|_| ChrononError::MalformedDate {
                    surface: other.to_string(),
                    reason: "expected YYYY-MM-DD, -inf, or +inf".into(),
                }),
        }
    }
}

impl Serialize for TimePoint {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TimePoint {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A closed calendar interval, optionally unbounded on either side.
///
/// Both bounded endpoints are inclusive: the interval for "1992" contains
/// both 1992-01-01 and 1992-12-31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TimeInterval {
    start: TimePoint,
    end: TimePoint,
}

impl<'de> Deserialize<'de> for TimeInterval {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            start: TimePoint,
            end: TimePoint,
        }
        let raw = Raw::deserialize(de)?;
        TimeInterval::new(raw.start, raw.end).map_err(serde::de::Error::custom)
    }
}

impl TimeInterval {
    /// Builds an interval, enforcing `start <= end` and rejecting the
    /// degenerate bounds `start = +inf` / `end = -inf`.
    pub fn new(start: TimePoint, end: TimePoint) -> Result<Self, ChrononError> {
        let ill_formed = start > end
            || matches!(start, TimePoint::PosInfinity)
            || matches!(end, TimePoint::NegInfinity);
        if ill_formed {
            return Err(ChrononError::MalformedDate {
                surface: format!("[{start}, {end}]"),
                reason: "interval start exceeds its end".into(),
            });
        }
        Ok(TimeInterval { start, end })
    }

    pub fn bounded(start: CalendarDate, end: CalendarDate) -> Result<Self, ChrononError> {
        TimeInterval::new(TimePoint::Date(start), TimePoint::Date(end))
    }

    /// The degenerate single-day interval [d, d].
    pub fn single_day(d: CalendarDate) -> Self {
        TimeInterval {
            start: TimePoint::Date(d),
            end: TimePoint::Date(d),
        }
    }

    /// (-inf, end]
    pub fn unbounded_start(end: CalendarDate) -> Self {
        TimeInterval {
            start: TimePoint::NegInfinity,
            end: TimePoint::Date(end),
        }
    }

    /// [start, +inf)
    pub fn unbounded_end(start: CalendarDate) -> Self {
        TimeInterval {
            start: TimePoint::Date(start),
            end: TimePoint::PosInfinity,
        }
    }

    pub fn start(&self) -> TimePoint {
        self.start
    }

    pub fn end(&self) -> TimePoint {
        self.end
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// A byte-offset span into a UTF-8 text, end exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// True when the two spans share at least one byte.
    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    /// True when `self` lies entirely inside `other`.
    pub fn within(&self, other: &Span) -> bool {
        other.start <= self.start && self.end <= other.end
    }
}

/// The time expression extracted from a question, with its location and
/// normalized interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionTimeSpan {
    pub surface: String,
    pub span: Span,
    pub interval: TimeInterval,
}

/// A time expression located while scanning running text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimexHit {
    pub surface: String,
    pub span: Span,
    pub interval: TimeInterval,
}

// ---------------------------------------------------------------------------
// Pattern grammar
// ---------------------------------------------------------------------------

const MONTHS: &[(&str, u32)] = &[
    ("january", 1),
    ("february", 2),
    ("march", 3),
    ("april", 4),
    ("may", 5),
    ("june", 6),
    ("july", 7),
    ("august", 8),
    ("september", 9),
    ("october", 10),
    ("november", 11),
    ("december", 12),
    ("jan", 1),
    ("feb", 2),
    ("mar", 3),
    ("apr", 4),
    ("jun", 6),
    ("jul", 7),
    ("aug", 8),
    ("sep", 9),
    ("oct", 10),
    ("nov", 11),
    ("dec", 12),
];

fn month_number(name: &str) -> Option<u32> {
    let lower = name.to_ascii_lowercase();
    MONTHS.iter().find(|(n, _)| *n == lower).map(|(_, m)| *m)
}

// Capitalized month alternation: "May" matches, the modal verb "may" does not.
const MONTH_PAT: &str = "(?:January|February|March|April|May|June|July|August|September|October|\
                         November|December|Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sep|Oct|Nov|Dec)";

const YEAR_PAT: &str = r"\d{4}";

struct PatternSet {
    modified: Regex,
    from_to: Regex,
    between: Regex,
    year_range: Regex,
    the_year: Regex,
    full_date: Regex,
    month_year: Regex,
    iso_date: Regex,
    iso_month: Regex,
    bare_year: Regex,
    explicit_interval: Regex,
    simple: Regex,
}

static PATTERNS: Lazy<PatternSet> = Lazy::new(|| {
    let full_date = format!(r"{MONTH_PAT}\s+\d{{1,2}},?\s+{YEAR_PAT}");
    let month_year = format!(r"{MONTH_PAT}\s+{YEAR_PAT}");
    let iso_date = format!(r"{YEAR_PAT}-\d{{2}}-\d{{2}}");
    let iso_month = format!(r"{YEAR_PAT}-\d{{2}}");
    let year_range = format!(r"{YEAR_PAT}\s*-\s*{YEAR_PAT}");
    let the_year = format!(r"(?i:the\s+year)\s+{YEAR_PAT}");
    // Longest alternative first so same-start matches prefer the fuller form.
    let simple = format!(
        r"(?:{full_date}|{the_year}|{month_year}|{iso_date}|{year_range}|{iso_month}|{YEAR_PAT})"
    );
    let from_to = format!(r"(?i:from)\s+({simple})\s+(?i:to)\s+({simple})");
    let between = format!(r"(?i:between)\s+({simple})(?:\s+(?i:and)\s+|\s*-\s*)({simple})");
    let range_or_simple = format!(r"(?:{from_to}|{between}|{simple})");
    let modified = format!(r"(?i:before|after|since|as\s+of|in)\s+({range_or_simple})");
    let bound = format!(r"(?:{iso_date}|-inf(?:inity)?|\+inf(?:inity)?)");
    let explicit_interval = format!(r"\[\s*({bound})\s*,\s*({bound})\s*\]");

    let anchored = |body: &str| Regex::new(&format!(r"\b{body}\b")).expect("valid pattern");
    PatternSet {
        modified: anchored(&modified),
        from_to: anchored(&from_to),
        between: anchored(&between),
        year_range: anchored(&year_range),
        the_year: anchored(&the_year),
        full_date: anchored(&full_date),
        month_year: anchored(&month_year),
        iso_date: anchored(&iso_date),
        iso_month: anchored(&iso_month),
        bare_year: anchored(YEAR_PAT),
        // Brackets are not word characters, so this one anchors itself.
        explicit_interval: Regex::new(&explicit_interval).expect("valid pattern"),
        simple: Regex::new(&format!(r"^\b{simple}\b$")).expect("valid pattern"),
    }
});

/// Normalizes a "simple" sub-expression: full date, "the year Y",
/// month-year, ISO date, year range, ISO month, or bare year.
fn normalize_simple(surface: &str) -> Result<TimeInterval, ChrononError> {
    let pats = &*PATTERNS;
    let trimmed = surface.trim();
    if !pats.simple.is_match(trimmed) {
        return Err(ChrononError::UnsupportedPattern {
            surface: trimmed.to_string(),
        });
    }
    let malformed = |reason: &str| ChrononError::MalformedDate {
        surface: trimmed.to_string(),
        reason: reason.to_string(),
    };

    // Digits only: ISO date, year range, ISO month, or bare year.
    if trimmed.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        let digits: Vec<i64> = trimmed
            .split(|c: char| !c.is_ascii_digit())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<i64>().expect("digit run"))
            .collect();
        return match digits.as_slice() {
            [y] => year_interval(*y as i32),
            [y, m, d] => Ok(TimeInterval::single_day(CalendarDate::new(
                *y as i32, *m as u32, *d as u32,
            )?)),
            [y, x] if trimmed.len() >= 9 => {
                // Two 4-digit runs: a bare year range.
                let (start, end) = (year_interval(*y as i32)?, year_interval(*x as i32)?);
                TimeInterval::new(start.start(), end.end())
                    .map_err(|_| malformed("range end precedes its start"))
            }
            [y, m] => month_interval(*y as i32, *m as u32),
            _ => Err(ChrononError::UnsupportedPattern {
                surface: trimmed.to_string(),
            }),
        };
    }

    // "the year Y"
    if trimmed.to_ascii_lowercase().starts_with("the") {
        let year: i32 = trimmed
            .rsplit(|c: char| c.is_whitespace())
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| malformed("missing year"))?;
        return year_interval(year);
    }

    // Month-name forms.
    let mut words = trimmed.split_whitespace();
    let month = words
        .next()
        .and_then(month_number)
        .ok_or_else(|| malformed("unknown month name"))?;
    let rest: Vec<&str> = words.collect();
    match rest.as_slice() {
        [year] => month_interval(year.parse().map_err(|_| malformed("bad year"))?, month),
        [day, year] => {
            let day: u32 = day
                .trim_end_matches(',')
                .parse()
                .map_err(|_| malformed("bad day"))?;
            let year: i32 = year.parse().map_err(|_| malformed("bad year"))?;
            Ok(TimeInterval::single_day(CalendarDate::new(year, month, day)?))
        }
        _ => Err(ChrononError::UnsupportedPattern {
            surface: trimmed.to_string(),
        }),
    }
}

fn year_interval(year: i32) -> Result<TimeInterval, ChrononError> {
    TimeInterval::bounded(CalendarDate::new(year, 1, 1)?, CalendarDate::new(year, 12, 31)?)
}

fn month_interval(year: i32, month: u32) -> Result<TimeInterval, ChrononError> {
    TimeInterval::bounded(
        CalendarDate::month_start(year, month)?,
        CalendarDate::month_end(year, month)?,
    )
}

fn parse_bound(token: &str, low_side: bool) -> Result<TimePoint, ChrononError> {
    let lower = token.to_ascii_lowercase();
    if lower.starts_with("-inf") {
        return Ok(TimePoint::NegInfinity);
    }
    if lower.starts_with("+inf") {
        return Ok(TimePoint::PosInfinity);
    }
    let iv = normalize_simple(token)?;
    Ok(if low_side { iv.start() } else { iv.end() })
}

/// One syntactic match of the grammar in a piece of text.
#[derive(Debug, Clone)]
struct Candidate {
    span: Span,
    kind: CandidateKind,
}

#[derive(Debug, Clone)]
enum CandidateKind {
    Simple,
    Range { first: String, second: String },
    Modified { keyword: String, inner: String },
    Explicit { low: String, high: String },
}

fn scan_candidates(text: &str) -> Vec<Candidate> {
    let pats = &*PATTERNS;
    let mut out = Vec::new();

    for m in pats.modified.find_iter(text) {
        let caps = pats.modified.captures(&text[m.start()..m.end()]).expect("re-match");
        let inner = caps.get(1).expect("inner").as_str().to_string();
        let keyword = m.as_str()[..m.as_str().len() - inner.len()]
            .trim_end()
            .to_ascii_lowercase();
        out.push(Candidate {
            span: Span::new(m.start(), m.end()),
            kind: CandidateKind::Modified { keyword, inner },
        });
    }
    for (re, is_from_to) in [(&pats.from_to, true), (&pats.between, false)] {
        let _ = is_from_to;
        for m in re.find_iter(text) {
            let caps = re.captures(&text[m.start()..m.end()]).expect("re-match");
            out.push(Candidate {
                span: Span::new(m.start(), m.end()),
                kind: CandidateKind::Range {
                    first: caps.get(1).expect("lhs").as_str().to_string(),
                    second: caps.get(2).expect("rhs").as_str().to_string(),
                },
            });
        }
    }
    for re in [
        &pats.full_date,
        &pats.the_year,
        &pats.month_year,
        &pats.iso_date,
        &pats.year_range,
        &pats.iso_month,
        &pats.bare_year,
    ] {
        for m in re.find_iter(text) {
            out.push(Candidate {
                span: Span::new(m.start(), m.end()),
                kind: CandidateKind::Simple,
            });
        }
    }
    for m in pats.explicit_interval.find_iter(text) {
        let caps = pats
            .explicit_interval
            .captures(&text[m.start()..m.end()])
            .expect("re-match");
        out.push(Candidate {
            span: Span::new(m.start(), m.end()),
            kind: CandidateKind::Explicit {
                low: caps.get(1).expect("low").as_str().to_string(),
                high: caps.get(2).expect("high").as_str().to_string(),
            },
        });
    }
    out
}

fn normalize_candidate(text: &str, cand: &Candidate) -> Result<TimeInterval, ChrononError> {
    let surface = &text[cand.span.start..cand.span.end];
    match &cand.kind {
        CandidateKind::Simple => normalize_simple(surface),
        CandidateKind::Range { first, second } => {
            let a = normalize_whole(first)?;
            let b = normalize_whole(second)?;
            TimeInterval::new(a.start(), b.end()).map_err(|_| ChrononError::MalformedDate {
                surface: surface.to_string(),
                reason: "range end precedes its start".into(),
            })
        }
        CandidateKind::Modified { keyword, inner } => {
            let base = normalize_whole(inner)?;
            apply_modifier(keyword, base, surface)
        }
        CandidateKind::Explicit { low, high } => {
            let start = parse_bound(low, true)?;
            let end = parse_bound(high, false)?;
            TimeInterval::new(start, end).map_err(|_| ChrononError::MalformedDate {
                surface: surface.to_string(),
                reason: "interval start exceeds its end".into(),
            })
        }
    }
}

/// Normalizes an inner expression that may itself be a range or simple form.
fn normalize_whole(surface: &str) -> Result<TimeInterval, ChrononError> {
    let trimmed = surface.trim();
    let cands = scan_candidates(trimmed);
    let full = cands
        .iter()
        .filter(|c| c.span.start == 0 && c.span.end == trimmed.len())
        .max_by_key(|c| c.span.len());
    match full {
        Some(c) => normalize_candidate(trimmed, c),
        None => Err(ChrononError::UnsupportedPattern {
            surface: trimmed.to_string(),
        }),
    }
}

fn apply_modifier(
    keyword: &str,
    base: TimeInterval,
    surface: &str,
) -> Result<TimeInterval, ChrononError> {
    let need_date = |p: TimePoint| {
        p.as_date().ok_or_else(|| ChrononError::MalformedDate {
            surface: surface.to_string(),
            reason: "modifier applied to an unbounded interval".into(),
        })
    };
    match keyword {
        "before" => Ok(TimeInterval::unbounded_start(need_date(base.start())?.pred()?)),
        "after" => Ok(TimeInterval::unbounded_end(need_date(base.end())?.succ()?)),
        "since" => Ok(TimeInterval::unbounded_end(need_date(base.start())?)),
        // "as of X" and "in X" denote the interval of X itself.
        "as of" | "in" => Ok(base),
        other => {
            // "as  of" with odd spacing collapses here.
            if other.split_whitespace().collect::<Vec<_>>() == ["as", "of"] {
                Ok(base)
            } else {
                Err(ChrononError::UnsupportedPattern {
                    surface: surface.to_string(),
                })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Normalizes a complete time expression to its calendar interval.
///
/// `anchor` is reserved for relative expressions ("a year later"), which the
/// grammar does not currently cover; it is accepted and ignored.
pub fn normalize_timex(
    surface: &str,
    _anchor: Option<CalendarDate>,
) -> Result<TimeInterval, ChrononError> {
    normalize_whole(surface)
}

/// Finds the time expression in a question, if any.
///
/// Selects the longest grammar match, breaking ties toward the leftmost
/// occurrence, and returns its offsets and normalized interval. A match
/// that names an impossible date is an error rather than a silent miss.
pub fn extract_question_time(
    question_text: &str,
) -> Result<Option<QuestionTimeSpan>, ChrononError> {
    let cands = scan_candidates(question_text);
    let best = cands
        .iter()
        .max_by(|a, b| {
            a.span
                .len()
                .cmp(&b.span.len())
                .then(b.span.start.cmp(&a.span.start))
        })
        .cloned();
    match best {
        None => Ok(None),
        Some(c) => {
            let interval = normalize_candidate(question_text, &c)?;
            Ok(Some(QuestionTimeSpan {
                surface: question_text[c.span.start..c.span.end].to_string(),
                span: c.span,
                interval,
            }))
        }
    }
}

/// Scans running text for every non-overlapping time expression.
///
/// Prefers longer matches at each position and silently skips matches that
/// fail to normalize (documents contain arbitrary noise). Used by the
/// fallback annotator when no external timex annotations are available.
pub fn scan_timexes(text: &str) -> Vec<TimexHit> {
    let mut cands = scan_candidates(text);
    // Longest-first at each start offset, then sweep left to right.
    cands.sort_by(|a, b| {
        a.span
            .start
            .cmp(&b.span.start)
            .then(b.span.len().cmp(&a.span.len()))
    });
    let mut hits: Vec<TimexHit> = Vec::new();
    let mut cursor = 0usize;
    for c in cands {
        if c.span.start < cursor {
            continue;
        }
        match normalize_candidate(text, &c) {
            Ok(interval) => {
                cursor = c.span.end;
                hits.push(TimexHit {
                    surface: text[c.span.start..c.span.end].to_string(),
                    span: c.span,
                    interval,
                });
            }
            Err(_) => continue,
        }
    }
    hits
}
