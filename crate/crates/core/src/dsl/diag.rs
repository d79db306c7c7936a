use std::fmt;

/// A 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(file: &str, line: usize, column: usize) -> Self {
        SourceSpan {
            file: file.to_string(),
            line,
            column,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl ParseDiagnostic {
    pub fn error(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
        }
    }

    pub fn warning(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            severity: Severity::Warning,
            message: message.into(),
            span,
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {}: {}", self.span, sev, self.message)
    }
}

/// The diagnostics of a failed parse. Contains at least one error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<ParseDiagnostic>);

impl Diagnostics {
    pub fn errors(&self) -> impl Iterator<Item = &ParseDiagnostic> {
        self.0.iter().filter(|d| d.severity == Severity::Error)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ParseDiagnostic> {
        self.0.iter()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", d)?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

/// A successful parse together with any warnings it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<ParseDiagnostic>,
}

/// Collects diagnostics while parsing; errors and warnings share one list.
#[derive(Debug, Default)]
pub(crate) struct Sink {
    pub(crate) diags: Vec<ParseDiagnostic>,
}

impl Sink {
    pub(crate) fn error(&mut self, span: SourceSpan, message: impl Into<String>) {
        self.diags.push(ParseDiagnostic::error(span, message));
    }

    pub(crate) fn warning(&mut self, span: SourceSpan, message: impl Into<String>) {
        self.diags.push(ParseDiagnostic::warning(span, message));
    }

    pub(crate) fn has_errors(&self) -> bool {
        self.diags.iter().any(|d| d.severity == Severity::Error)
    }

    pub(crate) fn finish<T>(self, value: T) -> Result<Parsed<T>, Diagnostics> {
        if self.has_errors() {
            Err(Diagnostics(self.diags))
        } else {
            Ok(Parsed {
                value,
                warnings: self.diags,
            })
        }
    }
}
