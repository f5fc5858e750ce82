//! Source spans and diagnostics shared by every pass.
//!
//! Spans are byte offsets into the original text. Diagnostic codes are drawn
//! from the closed set in [`codes`]; tools and tests match on the code, never
//! on the message.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Half-open byte range `[start, end)` into a source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub const DUMMY: SourceSpan = SourceSpan { start: 0, end: 0 };

    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }

    /// Smallest span covering both.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        SourceSpan {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(code: &'static str, span: SourceSpan, message: impl Into<String>) -> Self {
        debug_assert!(codes::ALL.contains(&code), "undocumented diagnostic code {code}");
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            span,
        }
    }

    pub fn warning(code: &'static str, span: SourceSpan, message: impl Into<String>) -> Self {
        debug_assert!(codes::ALL.contains(&code), "undocumented diagnostic code {code}");
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// `code span message`, the line format used by the `check` command.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.code, self.span, self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

/// The closed set of diagnostic codes.
pub mod codes {
    pub const WORLD_DUP_COUNTRY: &str = "world.dup-country";
    pub const WORLD_DUP_INDICATOR: &str = "world.dup-indicator";
    pub const WORLD_DANGLING_KEY: &str = "world.dangling-key";
    pub const WORLD_DUP_VALUE: &str = "world.dup-value";

    pub const PARSE_UNEXPECTED: &str = "parse.unexpected-token";
    pub const PARSE_UNTERMINATED_STRING: &str = "parse.unterminated-string";
    pub const PARSE_INVALID_CHAR: &str = "parse.invalid-char";
    pub const PARSE_INVALID_NUMBER: &str = "parse.invalid-number";
    pub const PARSE_LETBANG_OUTSIDE_ASYNC: &str = "parse.letbang-outside-async";
    pub const PARSE_RETURN_OUTSIDE_ASYNC: &str = "parse.return-outside-async";
    pub const PARSE_STATIC_PARAMS: &str = "parse.static-params";
    pub const PARSE_DUPLICATE_ALIAS: &str = "parse.duplicate-alias";
    pub const PARSE_NAMED_ARG_ORDER: &str = "parse.named-arg-order";
    pub const PARSE_BACKTICK_BINDING: &str = "parse.backtick-binding";
    pub const PARSE_DUPLICATE_ENTRY: &str = "parse.duplicate-entry";
    pub const PARSE_INVALID_ASSIGN: &str = "parse.invalid-assignment";

    pub const PROVIDER_FAILURE: &str = "provider.failure";

    pub const DTS_UNSUPPORTED: &str = "dts.unsupported";
    pub const DTS_SYNTAX: &str = "dts.syntax";
    pub const DTS_DANGLING_REF: &str = "dts.dangling-ref";
    pub const DTS_CONSTANT_OVERLOAD: &str = "dts.constant-overload";
    pub const DTS_DUPLICATE_OVERLOAD: &str = "dts.duplicate-overload";
    pub const DTS_OPTIONAL_ORDER: &str = "dts.optional-order";

    pub const TYPE_MISMATCH: &str = "type.mismatch";
    pub const TYPE_OCCURS: &str = "type.occurs-check";
    pub const TYPE_UNBOUND: &str = "type.unbound";
    pub const TYPE_MEMBER_NOT_FOUND: &str = "type.member-not-found";
    pub const TYPE_UNKNOWN_RECEIVER: &str = "type.unknown-receiver";
    pub const TYPE_NO_OVERLOAD: &str = "type.no-overload";
    pub const TYPE_OVERLOAD_AMBIGUOUS: &str = "type.overload-ambiguous";
    pub const TYPE_REDUNDANT_UNBOX: &str = "type.redundant-unbox";
    pub const TYPE_OBJECT_NEEDS_UNBOX: &str = "type.object-needs-unbox";
    pub const TYPE_NOT_SETTABLE: &str = "type.not-settable";
    pub const TYPE_NOT_CALLABLE: &str = "type.not-callable";
    pub const TYPE_UNKNOWN_TYPE: &str = "type.unknown-type";
    pub const TYPE_PROVIDER_FAILURE: &str = "type.provider-failure";
    pub const TYPE_BAD_ENTRY: &str = "type.bad-entry";

    pub const ASYNC_UNSUPPORTED_START: &str = "async.unsupported-start";
    pub const ASYNC_LETBANG_OUTSIDE: &str = "async.letbang-outside";

    pub const EMIT_UNRESOLVED_SHIM: &str = "emit.unresolved-shim";
    pub const EMIT_RESIDUAL: &str = "emit.residual-node";

    pub const ALL: &[&str] = &[
        WORLD_DUP_COUNTRY,
        WORLD_DUP_INDICATOR,
        WORLD_DANGLING_KEY,
        WORLD_DUP_VALUE,
        PARSE_UNEXPECTED,
        PARSE_UNTERMINATED_STRING,
        PARSE_INVALID_CHAR,
        PARSE_INVALID_NUMBER,
        PARSE_LETBANG_OUTSIDE_ASYNC,
        PARSE_RETURN_OUTSIDE_ASYNC,
        PARSE_STATIC_PARAMS,
        PARSE_DUPLICATE_ALIAS,
        PARSE_NAMED_ARG_ORDER,
        PARSE_BACKTICK_BINDING,
        PARSE_DUPLICATE_ENTRY,
        PARSE_INVALID_ASSIGN,
        PROVIDER_FAILURE,
        DTS_UNSUPPORTED,
        DTS_SYNTAX,
        DTS_DANGLING_REF,
        DTS_CONSTANT_OVERLOAD,
        DTS_DUPLICATE_OVERLOAD,
        DTS_OPTIONAL_ORDER,
        TYPE_MISMATCH,
        TYPE_OCCURS,
        TYPE_UNBOUND,
        TYPE_MEMBER_NOT_FOUND,
        TYPE_UNKNOWN_RECEIVER,
        TYPE_NO_OVERLOAD,
        TYPE_OVERLOAD_AMBIGUOUS,
        TYPE_REDUNDANT_UNBOX,
        TYPE_OBJECT_NEEDS_UNBOX,
        TYPE_NOT_SETTABLE,
        TYPE_NOT_CALLABLE,
        TYPE_UNKNOWN_TYPE,
        TYPE_PROVIDER_FAILURE,
        TYPE_BAD_ENTRY,
        ASYNC_UNSUPPORTED_START,
        ASYNC_LETBANG_OUTSIDE,
        EMIT_UNRESOLVED_SHIM,
        EMIT_RESIDUAL,
    ];
}
