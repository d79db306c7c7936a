//! Findings files (one `Functor(args)=Value` per line) and queries (`Functor(args)?`).

use std::collections::BTreeSet;

use super::diag::{Diagnostics, ParseDiagnostic, Parsed, Sink, SourceSpan};
use super::lexer::{lex, Tok};
use super::model::{end_of, Cursor};
use crate::model::{EntityPool, Finding, FindingSet, MTheory, Query, Range, RvInstance};

pub fn parse_findings(text: &str, theory: &MTheory) -> Result<Parsed<FindingSet>, Diagnostics> {
    parse_findings_named("<findings>", text, theory)
}

/// Parses a findings file against `theory`. An optional `Findings:` header line is skipped.
pub fn parse_findings_named(file: &str, text: &str, theory: &MTheory) -> Result<Parsed<FindingSet>, Diagnostics> {
    let mut sink = Sink::default();
    let mut pool = EntityPool::new();
    let mut seen_vars: BTreeSet<RvInstance> = BTreeSet::new();
    let mut findings = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks = match lex(file, line, lineno) {
            Ok(t) => t,
            Err(d) => {
                sink.diags.push(d);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        let header = toks.len() == 2
            && toks[0].tok == Tok::Ident("Findings".into())
            && toks[1].tok == Tok::Colon;
        if header {
            continue;
        }
        let mut cur = Cursor::new(file, toks, (lineno, line.chars().count() + 1));
        let parsed = (|| {
            let (functor, args, span) = cur.call()?;
            cur.expect(Tok::Eq)?;
            let (value, vspan) = cur.ident("a value")?;
            if !cur.at_end() {
                return cur.error("unexpected input after finding");
            }
            Ok((functor, args, span, value, vspan))
        })();
        let (functor, args, span, value, vspan) = match parsed {
            Ok(p) => p,
            Err(d) => {
                sink.diags.push(d);
                continue;
            }
        };

        if functor == "isA" {
            if args.len() != 2 {
                sink.error(span, format!("arity mismatch: 'isA' takes 2 arguments, found {}", args.len()));
                continue;
            }
            let (instance, ty) = (&args[0].0, &args[1].0);
            if value != "True" {
                sink.error(vspan, "isA findings must have the value True");
                continue;
            }
            if !theory.has_entity_type(ty) {
                sink.error(args[1].1.clone(), format!("unknown entity type '{}'", ty));
                continue;
            }
            if pool.type_of(instance) == Some(ty.as_str()) {
                sink.error(span, format!("duplicate finding isA({}, {})", instance, ty));
                continue;
            }
            if let Err(e) = pool.insert(instance, ty) {
                sink.error(span, e.to_string());
                continue;
            }
            findings.push(Finding::IsA {
                instance: instance.clone(),
                ty: ty.clone(),
            });
            continue;
        }

        let Some(sig) = theory.signature(&functor) else {
            sink.error(span, format!("unknown functor '{}'", functor));
            continue;
        };
        if sig.arg_types.len() != args.len() {
            sink.error(
                span,
                format!(
                    "arity mismatch: '{}' takes {} argument(s), found {}",
                    functor,
                    sig.arg_types.len(),
                    args.len()
                ),
            );
            continue;
        }
        let mut ok = true;
        for ((arg, aspan), expected) in args.iter().zip(&sig.arg_types) {
            ok &= check_instance(&mut sink, &pool, arg, aspan, expected);
        }
        match &sig.range {
            Range::States(_) => {
                let known = theory
                    .states_of(&functor)
                    .is_some_and(|s| s.index_of(&value).is_some());
                if !known {
                    sink.error(vspan, format!("unknown state '{}' for '{}'", value, functor));
                    ok = false;
                }
            }
            Range::Entity(ty) => ok &= check_instance(&mut sink, &pool, &value, &vspan, ty),
        }
        if !ok {
            continue;
        }
        let variable = RvInstance::new(functor, args.into_iter().map(|(a, _)| a));
        if !seen_vars.insert(variable.clone()) {
            sink.error(span, format!("duplicate finding for {}", variable));
            continue;
        }
        findings.push(Finding::Value { variable, value });
    }

    if sink.has_errors() {
        return Err(Diagnostics(sink.diags));
    }
    let set = FindingSet::new(findings).map_err(|e| Diagnostics(vec![ParseDiagnostic::error(SourceSpan::new(file, 1, 1), e.to_string())]))?;
    sink.finish(set)
}

fn check_instance(sink: &mut Sink, pool: &EntityPool, name: &str, span: &SourceSpan, expected: &str) -> bool {
    match pool.type_of(name) {
        None => {
            sink.error(span.clone(), format!("'{}' is used before its isA declaration", name));
            false
        }
        Some(ty) if ty != expected => {
            sink.error(span.clone(), format!("'{}' is a {}, expected {}", name, ty, expected));
            false
        }
        Some(_) => true,
    }
}

/// Parses a query and resolves its arguments against `pool`.
pub fn parse_query(text: &str, theory: &MTheory, pool: &EntityPool) -> Result<Query, Diagnostics> {
    let (query, spans) = parse_query_spans(text, theory)?;
    let sig = theory.signature(&query.0.functor).expect("checked while parsing");
    let mut sink = Sink::default();
    for ((arg, span), ty) in query.0.args.iter().zip(&spans).zip(&sig.arg_types) {
        match pool.type_of(arg) {
            None => sink.error(span.clone(), format!("unknown entity instance '{}'", arg)),
            Some(t) if t != ty => sink.error(span.clone(), format!("'{}' is a {}, expected {}", arg, t, ty)),
            Some(_) => {}
        }
    }
    sink.finish(query).map(|p| p.value)
}

/// Parses a query without checking its arguments against an entity pool.
pub fn parse_query_unresolved(text: &str, theory: &MTheory) -> Result<Query, Diagnostics> {
    parse_query_spans(text, theory).map(|(q, _)| q)
}

fn parse_query_spans(text: &str, theory: &MTheory) -> Result<(Query, Vec<SourceSpan>), Diagnostics> {
    let file = "<query>";
    let toks = lex(file, text, 1).map_err(|d| Diagnostics(vec![d]))?;
    let mut cur = Cursor::new(file, toks, end_of(text));
    let one = |e: ParseDiagnostic| Diagnostics(vec![e]);
    if cur.is_keyword("Query") && cur.peek_at(1) == Some(&Tok::Colon) {
        cur.pos += 2;
    }
    let (functor, args, span) = cur.call().map_err(one)?;
    cur.eat(&Tok::Question);
    if !cur.at_end() {
        return Err(one(cur.error::<()>("unexpected input after query").unwrap_err()));
    }
    let Some(sig) = theory.signature(&functor) else {
        return Err(one(ParseDiagnostic::error(span, format!("unknown functor '{}'", functor))));
    };
    if matches!(sig.range, Range::Entity(_)) {
        return Err(one(ParseDiagnostic::error(
            span,
            format!("'{}' is a finding-resolved relation and cannot be queried", functor),
        )));
    }
    if sig.arg_types.len() != args.len() {
        return Err(one(ParseDiagnostic::error(
            span,
            format!(
                "arity mismatch: '{}' takes {} argument(s), found {}",
                functor,
                sig.arg_types.len(),
                args.len()
            ),
        )));
    }
    let spans = args.iter().map(|(_, s)| s.clone()).collect();
    Ok((Query(RvInstance::new(functor, args.into_iter().map(|(a, _)| a))), spans))
}
