//! Recursive-descent parser for MTheory files.
//!
//! Syntax errors abort the parse. Reference errors (unknown types, states and functors) and
//! duplicate declarations are collected so one run reports all of them.

use std::collections::{BTreeMap, HashSet};

use super::diag::{Diagnostics, ParseDiagnostic, Parsed, Sink, SourceSpan};
use super::lexer::{lex, Tok, Token};
use crate::model::{
    Condition, ContextNode, InputNode, LocalDistribution, MFrag, MTheory, NodeRef, OrdinaryVariable, Range,
    ResidentNode, Rule, RuleList, Signature, StateSpace, Table, TableRow,
};

type PResult<T> = Result<T, ParseDiagnostic>;

/// A functor application: name, arguments with their spans, and the span of the name.
pub(crate) type Call = (String, Vec<(String, SourceSpan)>, SourceSpan);

pub(crate) struct Cursor<'a> {
    pub(crate) file: &'a str,
    pub(crate) toks: Vec<Token>,
    pub(crate) pos: usize,
    pub(crate) end: (usize, usize),
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(file: &'a str, toks: Vec<Token>, end: (usize, usize)) -> Self {
        Cursor { file, toks, pos: 0, end }
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub(crate) fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|t| &t.tok)
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn span(&self) -> SourceSpan {
        match self.toks.get(self.pos) {
            Some(t) => SourceSpan::new(self.file, t.line, t.column),
            None => SourceSpan::new(self.file, self.end.0, self.end.1),
        }
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseDiagnostic::error(self.span(), message))
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".to_string(),
        }
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok, self.found()))
        }
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    pub(crate) fn keyword(&mut self, kw: &str) -> PResult<()> {
        if self.is_keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected '{}', found {}", kw, self.found()))
        }
    }

    pub(crate) fn ident(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        let span = self.span();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, span))
            }
            _ => self.error(format!("expected {}, found {}", what, self.found())),
        }
    }

    fn number(&mut self) -> PResult<(f64, SourceSpan)> {
        let span = self.span();
        match self.peek() {
            Some(&Tok::Number(n)) => {
                self.pos += 1;
                Ok((n, span))
            }
            _ => self.error(format!("expected a number, found {}", self.found())),
        }
    }

    /// `ID "(" ID { "," ID } ")"`
    pub(crate) fn call(&mut self) -> PResult<Call> {
        let (functor, span) = self.ident("a functor")?;
        self.expect(Tok::LParen)?;
        let mut args = vec![self.ident("an argument")?];
        while self.eat(&Tok::Comma) {
            args.push(self.ident("an argument")?);
        }
        self.expect(Tok::RParen)?;
        Ok((functor, args, span))
    }
}

pub(crate) fn end_of(text: &str) -> (usize, usize) {
    let line = text.matches('\n').count() + 1;
    let col = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// Parses a model file. Equivalent to [`parse_model_named`] with the name `<model>`.
pub fn parse_model(text: &str) -> Result<Parsed<MTheory>, Diagnostics> {
    parse_model_named("<model>", text)
}

/// Parses a model file; `file` is used in diagnostic spans.
pub fn parse_model_named(file: &str, text: &str) -> Result<Parsed<MTheory>, Diagnostics> {
    let toks = lex(file, text, 1).map_err(|d| Diagnostics(vec![d]))?;
    let mut p = ModelParser {
        cur: Cursor::new(file, toks, end_of(text)),
        sink: Sink::default(),
        theory: MTheory::default(),
        space_spans: BTreeMap::new(),
    };
    match p.model() {
        Ok(()) => {}
        Err(d) => {
            p.sink.diags.push(d);
            return Err(Diagnostics(p.sink.diags));
        }
    }
    let used: HashSet<&str> = p
        .theory
        .signatures
        .iter()
        .filter_map(|s| match &s.range {
            Range::States(n) => Some(n.as_str()),
            Range::Entity(_) => None,
        })
        .collect();
    let unused: Vec<(String, SourceSpan)> = p
        .space_spans
        .iter()
        .filter(|(name, _)| !used.contains(name.as_str()))
        .map(|(n, s)| (n.clone(), s.clone()))
        .collect();
    for (name, span) in unused {
        p.sink.warning(span, format!("state space '{}' is never used", name));
    }
    p.sink.finish(p.theory)
}

struct ModelParser<'a> {
    cur: Cursor<'a>,
    sink: Sink,
    theory: MTheory,
    space_spans: BTreeMap<String, SourceSpan>,
}

/// A context-equality operand before normalization.
enum Operand {
    Call(NodeRef),
    Bare(String),
}

impl<'a> ModelParser<'a> {
    fn model(&mut self) -> PResult<()> {
        let mut seen_mfrag = false;
        while let Some(tok) = self.cur.peek() {
            let kw = match tok {
                Tok::Ident(s) => s.clone(),
                _ => return self.cur.error(format!("expected a declaration or 'mfrag', found {}", tok)),
            };
            match kw.as_str() {
                "entity" | "states" | "random" if seen_mfrag => {
                    return self.cur.error("declarations must precede MFrags");
                }
                "entity" => self.entity()?,
                "states" => self.states()?,
                "random" => self.random()?,
                "mfrag" => {
                    seen_mfrag = true;
                    self.mfrag()?
                }
                other => {
                    return self
                        .cur
                        .error(format!("expected 'entity', 'states', 'random' or 'mfrag', found '{}'", other))
                }
            }
        }
        Ok(())
    }

    fn entity(&mut self) -> PResult<()> {
        self.cur.keyword("entity")?;
        let (name, span) = self.cur.ident("an entity type name")?;
        if self.theory.has_entity_type(&name) {
            self.sink.error(span, format!("duplicate entity type '{}'", name));
        } else {
            self.theory.entity_types.push(name);
        }
        Ok(())
    }

    fn states(&mut self) -> PResult<()> {
        self.cur.keyword("states")?;
        let (name, span) = self.cur.ident("a state space name")?;
        self.cur.expect(Tok::LBrace)?;
        let mut states: Vec<String> = Vec::new();
        loop {
            let (s, sspan) = self.cur.ident("a state name")?;
            if states.contains(&s) {
                self.sink.error(sspan, format!("duplicate state '{}'", s));
            } else {
                states.push(s);
            }
            if !self.cur.eat(&Tok::Comma) {
                break;
            }
        }
        self.cur.expect(Tok::RBrace)?;
        if states.len() < 2 {
            self.sink
                .error(span.clone(), format!("state space '{}' needs at least 2 states", name));
        }
        if self.theory.state_space(&name).is_some() {
            self.sink.error(span, format!("duplicate state space '{}'", name));
        } else {
            self.space_spans.insert(name.clone(), span);
            self.theory.state_spaces.push(StateSpace { name, states });
        }
        Ok(())
    }

    fn random(&mut self) -> PResult<()> {
        self.cur.keyword("random")?;
        let (functor, args, span) = self.cur.call()?;
        self.cur.expect(Tok::Arrow)?;
        let range = if self.cur.is_keyword("entity") {
            self.cur.pos += 1;
            let (ty, tspan) = self.cur.ident("an entity type")?;
            if !self.theory.has_entity_type(&ty) {
                self.sink.error(tspan, format!("unknown entity type '{}'", ty));
            }
            Range::Entity(ty)
        } else {
            let (space, sspan) = self.cur.ident("a state space")?;
            if self.theory.state_space(&space).is_none() {
                self.sink.error(sspan, format!("unknown state space '{}'", space));
            }
            Range::States(space)
        };
        for (ty, tspan) in &args {
            if !self.theory.has_entity_type(ty) {
                self.sink.error(tspan.clone(), format!("unknown entity type '{}'", ty));
            }
        }
        if functor == "isA" {
            self.sink.error(span, "'isA' is reserved");
        } else if self.theory.signature(&functor).is_some() {
            self.sink.error(span, format!("duplicate random variable '{}'", functor));
        } else {
            self.theory.signatures.push(Signature {
                functor,
                arg_types: args.into_iter().map(|(t, _)| t).collect(),
                range,
            });
        }
        Ok(())
    }

    fn check_functor(&mut self, functor: &str, span: &SourceSpan) {
        if self.theory.signature(functor).is_none() {
            self.sink.error(span.clone(), format!("unknown functor '{}'", functor));
        }
    }

    fn node_ref(&mut self) -> PResult<NodeRef> {
        let (functor, args, span) = self.cur.call()?;
        self.check_functor(&functor, &span);
        Ok(NodeRef {
            functor,
            args: args.into_iter().map(|(a, _)| a).collect(),
        })
    }

    fn mfrag(&mut self) -> PResult<()> {
        self.cur.keyword("mfrag")?;
        let (name, span) = self.cur.ident("an MFrag name")?;
        if self.theory.mfrag(&name).is_some() {
            self.sink.error(span, format!("duplicate MFrag '{}'", name));
        }
        self.cur.expect(Tok::LBrace)?;
        let mut mfrag = MFrag::new(name);
        // Rule lists without an explicit parent list take the MFrag's inputs.
        let mut implicit_parents = Vec::new();
        loop {
            let kw = match self.cur.peek() {
                Some(Tok::RBrace) => {
                    self.cur.pos += 1;
                    break;
                }
                Some(Tok::Ident(s)) => s.clone(),
                _ => return self.cur.error("expected 'ovar', 'context', 'input', 'resident' or '}'"),
            };
            self.cur.pos += 1;
            match kw.as_str() {
                "ovar" => {
                    let (var, vspan) = self.cur.ident("an ordinary variable")?;
                    self.cur.expect(Tok::Colon)?;
                    let (ty, tspan) = self.cur.ident("an entity type")?;
                    if !self.theory.has_entity_type(&ty) {
                        self.sink.error(tspan, format!("unknown entity type '{}'", ty));
                    }
                    if mfrag.ovar(&var).is_some() {
                        self.sink.error(vspan, format!("duplicate ordinary variable '{}'", var));
                    } else {
                        mfrag.ovars.push(OrdinaryVariable { name: var, ty });
                    }
                }
                "context" => {
                    let ctx = self.context()?;
                    mfrag.context.push(ctx);
                }
                "input" => {
                    let node = self.node_ref()?;
                    mfrag.inputs.push(InputNode { node });
                }
                "resident" => {
                    let (node, implicit) = self.resident()?;
                    if implicit {
                        implicit_parents.push(mfrag.residents.len());
                    }
                    mfrag.residents.push(node);
                }
                other => {
                    return self.cur.error(format!(
                        "expected 'ovar', 'context', 'input', 'resident' or '}}', found '{}'",
                        other
                    ))
                }
            }
        }
        for i in implicit_parents {
            let inputs: Vec<NodeRef> = mfrag.inputs.iter().map(|i| i.node.clone()).collect();
            if let LocalDistribution::Rules(r) = &mut mfrag.residents[i].distribution {
                r.parents = inputs;
            }
        }
        self.theory.mfrags.push(mfrag);
        Ok(())
    }

    fn operand(&mut self) -> PResult<Operand> {
        if matches!(self.cur.peek_at(1), Some(Tok::LParen)) {
            Ok(Operand::Call(self.node_ref()?))
        } else {
            Ok(Operand::Bare(self.cur.ident("a term")?.0))
        }
    }

    fn context(&mut self) -> PResult<ContextNode> {
        if self.cur.is_keyword("isA") && matches!(self.cur.peek_at(1), Some(Tok::LParen)) {
            self.cur.pos += 2;
            let (var, _) = self.cur.ident("an ordinary variable")?;
            self.cur.expect(Tok::Comma)?;
            let (ty, tspan) = self.cur.ident("an entity type")?;
            self.cur.expect(Tok::RParen)?;
            if !self.theory.has_entity_type(&ty) {
                self.sink.error(tspan, format!("unknown entity type '{}'", ty));
            }
            return Ok(ContextNode::IsA { var, ty });
        }
        let span = self.cur.span();
        let lhs = self.operand()?;
        self.cur.expect(Tok::Eq)?;
        let rhs = self.operand()?;
        match (lhs, rhs) {
            (Operand::Call(node), Operand::Bare(value)) | (Operand::Bare(value), Operand::Call(node)) => {
                Ok(ContextNode::Equals { node, value })
            }
            _ => Err(ParseDiagnostic::error(
                span,
                "context equality needs one functor term and one variable, entity or state",
            )),
        }
    }

    fn probvec(&mut self) -> PResult<Vec<f64>> {
        self.cur.expect(Tok::LBracket)?;
        let mut v = vec![self.cur.number()?.0];
        while self.cur.eat(&Tok::Comma) {
            v.push(self.cur.number()?.0);
        }
        self.cur.expect(Tok::RBracket)?;
        Ok(v)
    }

    fn node_list(&mut self) -> PResult<Vec<NodeRef>> {
        self.cur.expect(Tok::LBracket)?;
        let mut v = vec![self.node_ref()?];
        while self.cur.eat(&Tok::Comma) {
            v.push(self.node_ref()?);
        }
        self.cur.expect(Tok::RBracket)?;
        Ok(v)
    }

    /// Returns the node and whether its parents are implicit.
    fn resident(&mut self) -> PResult<(ResidentNode, bool)> {
        let node = self.node_ref()?;
        self.cur.expect(Tok::LBrace)?;
        let mut implicit = false;
        let distribution = if self.cur.eat(&Tok::RBrace) {
            return Ok((
                ResidentNode {
                    node,
                    distribution: LocalDistribution::Relation,
                },
                false,
            ));
        } else if self.cur.is_keyword("prior") {
            self.cur.pos += 1;
            LocalDistribution::Table(Table::prior(self.probvec()?))
        } else if self.cur.is_keyword("table") {
            self.cur.pos += 1;
            LocalDistribution::Table(self.table()?)
        } else if self.cur.is_keyword("rules") {
            self.cur.pos += 1;
            let parents = if matches!(self.cur.peek(), Some(Tok::LBracket)) {
                self.node_list()?
            } else {
                implicit = true;
                Vec::new()
            };
            LocalDistribution::Rules(self.rules(parents)?)
        } else {
            return self.cur.error("expected 'table', 'prior', 'rules' or '}'");
        };
        self.cur.expect(Tok::RBrace)?;
        Ok((ResidentNode { node, distribution }, implicit))
    }

    fn table(&mut self) -> PResult<Table> {
        let parents = self.node_list()?;
        let domains: Vec<Option<StateSpace>> = parents
            .iter()
            .map(|p| self.theory.states_of(&p.functor).cloned())
            .collect();
        self.cur.expect(Tok::LBrace)?;
        let mut rows = Vec::new();
        while !self.cur.eat(&Tok::RBrace) {
            self.cur.expect(Tok::LParen)?;
            let mut config = Vec::new();
            loop {
                let (state, span) = self.cur.ident("a parent state")?;
                if let Some(Some(space)) = domains.get(config.len()) {
                    if space.index_of(&state).is_none() {
                        self.sink.error(span, format!("unknown state '{}'", state));
                    }
                }
                config.push(state);
                if !self.cur.eat(&Tok::Comma) {
                    break;
                }
            }
            self.cur.expect(Tok::RParen)?;
            self.cur.expect(Tok::Colon)?;
            let probs = self.probvec()?;
            rows.push(TableRow { config, probs });
        }
        Ok(Table { parents, rows })
    }

    fn rules(&mut self, parents: Vec<NodeRef>) -> PResult<RuleList> {
        self.cur.expect(Tok::LBrace)?;
        let mut rules = Vec::new();
        while self.cur.is_keyword("if") {
            self.cur.pos += 1;
            let condition = self.disjunction()?;
            self.cur.expect(Tok::Colon)?;
            let probs = self.probvec()?;
            rules.push(Rule { condition, probs });
        }
        if !self.cur.is_keyword("else") {
            return self.cur.error("expected 'if' or 'else'");
        }
        self.cur.pos += 1;
        self.cur.expect(Tok::Colon)?;
        let default = Some(self.probvec()?);
        self.cur.expect(Tok::RBrace)?;
        Ok(RuleList {
            parents,
            rules,
            default,
        })
    }

    fn disjunction(&mut self) -> PResult<Condition> {
        let mut parts = vec![self.conjunction()?];
        while self.cur.is_keyword("OR") {
            self.cur.pos += 1;
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Condition::Or(parts)
        })
    }

    fn conjunction(&mut self) -> PResult<Condition> {
        let mut parts = vec![self.atom()?];
        while self.cur.is_keyword("AND") {
            self.cur.pos += 1;
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Condition::And(parts)
        })
    }

    fn atom(&mut self) -> PResult<Condition> {
        if self.cur.eat(&Tok::LParen) {
            let c = self.disjunction()?;
            self.cur.expect(Tok::RParen)?;
            return Ok(c);
        }
        let (kw, _) = self.cur.ident("ANY, ALL, COUNT or '('")?;
        if !matches!(kw.as_str(), "ANY" | "ALL" | "COUNT") {
            self.cur.pos -= 1;
            return self.cur.error(format!("expected ANY, ALL, COUNT or '(', found '{}'", kw));
        }
        self.cur.expect(Tok::LParen)?;
        let (functor, fspan) = self.cur.ident("a parent functor")?;
        self.cur.expect(Tok::Comma)?;
        let (state, sspan) = self.cur.ident("a state")?;
        self.cur.expect(Tok::RParen)?;
        match self.theory.signature(&functor).map(|s| s.range.clone()) {
            None => self.sink.error(fspan, format!("unknown functor '{}'", functor)),
            Some(Range::States(_)) => {
                let known = self
                    .theory
                    .states_of(&functor)
                    .is_none_or(|s| s.index_of(&state).is_some());
                if !known {
                    self.sink
                        .error(sspan, format!("unknown state '{}' for '{}'", state, functor));
                }
            }
            Some(Range::Entity(_)) => self.sink.error(
                fspan,
                format!("'{}' is a finding-resolved relation and cannot be quantified", functor),
            ),
        }
        Ok(match kw.as_str() {
            "ANY" => Condition::Any { functor, state },
            "ALL" => Condition::All { functor, state },
            _ => {
                self.cur.expect(Tok::Ge)?;
                let (k, kspan) = self.cur.number()?;
                if k < 0.0 || k.fract() != 0.0 || k > u32::MAX as f64 {
                    return Err(ParseDiagnostic::error(kspan, "COUNT bound must be a non-negative integer"));
                }
                Condition::CountAtLeast {
                    functor,
                    state,
                    min: k as u32,
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "
entity Thing
states TF { t, f }
random A(Thing) -> TF
mfrag A {
  ovar x : Thing
  resident A(x) { prior [0.3, 0.7] }
}
";

    #[test]
    fn minimal_model() {
        let t = parse_model(MINIMAL).unwrap().value;
        assert_eq!(t.mfrags.len(), 1);
        assert_eq!(t.mfrags[0].residents.len(), 1);
        assert_eq!(t.mfrags[0].residents[0].distribution, LocalDistribution::Table(Table::prior(vec![0.3, 0.7])));
    }

    #[test]
    fn unknown_state_in_table_row() {
        let text = "
entity Thing
states Size { Large, Small }
random A(Thing) -> Size
random B(Thing) -> Size
mfrag A { ovar x : Thing  resident A(x) { prior [0.5, 0.5] } }
mfrag B {
  ovar x : Thing
  input A(x)
  resident B(x) {
    table [A(x)] {
      (Large): [0.5, 0.5]
      (Huge): [0.5, 0.5]
    }
  }
}
";
        let err = parse_model(text).unwrap_err();
        let d: Vec<_> = err.errors().collect();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].message, "unknown state 'Huge'");
        assert_eq!((d[0].span.line, d[0].span.column), (13, 8));
    }

    #[test]
    fn syntax_error_has_span() {
        let err = parse_model("entity Thing\nstates TF { t f }").unwrap_err();
        let d = &err.0[0];
        assert_eq!(d.span.line, 2);
        assert!(d.span.column > 0);
    }

    #[test]
    fn duplicate_declarations_collected() {
        let err = parse_model("entity A\nentity A\nstates S { x, y }\nstates S { x, y }").unwrap_err();
        assert_eq!(err.errors().count(), 2);
    }

    #[test]
    fn rules_default_to_inputs() {
        let text = "
entity Thing
states TF { t, f }
random A(Thing) -> TF
random B(Thing) -> TF
mfrag A { ovar x : Thing  resident A(x) { prior [0.5, 0.5] } }
mfrag B {
  ovar x : Thing
  ovar y : Thing
  input A(y)
  resident B(x) {
    rules {
      if ANY(A, t) OR (ALL(A, f) AND COUNT(A, f) >= 2): [0.9, 0.1]
      else: [0.1, 0.9]
    }
  }
}
";
        let t = parse_model(text).unwrap().value;
        let r = &t.mfrags[1].residents[0];
        assert_eq!(r.parents(), &[NodeRef::new("A", ["y"])]);
        let LocalDistribution::Rules(rules) = &r.distribution else { panic!() };
        assert!(matches!(rules.rules[0].condition, Condition::Or(ref v) if v.len() == 2));
    }

    #[test]
    fn missing_else_is_syntax_error() {
        let text = "entity T\nstates S { a, b }\nrandom A(T) -> S\nmfrag A { ovar x : T resident A(x) { rules [A(x)] { if ANY(A, a): [1, 0] } } }";
        let err = parse_model(text).unwrap_err();
        assert!(err.0[0].message.contains("'else'"));
    }

    #[test]
    fn unused_state_space_warns() {
        let text = format!("{}\nstates Extra {{ p, q }}", "entity Thing");
        let parsed = parse_model(&text).unwrap();
        assert_eq!(parsed.warnings.len(), 1);
    }
}
