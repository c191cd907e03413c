//! Recursive-descent parser for the agent language. See `docs/asl-grammar.md`.

use crate::ast::{AgentProgram, BodyStep, Condition, Plan, RelOp, Trigger, TriggerKind, TriggerOp, INTERNAL_ACTIONS};
use crate::error::ParseError;
use crate::lexer::{tokenize, Spanned, Tok};
use crate::term::{Literal, Term};

const MAX_DEPTH: usize = 128;

pub fn parse_program(src: &str) -> Result<AgentProgram, ParseError> {
    let mut p = Parser::new(src)?;
    let program = p.program()?;
    Ok(program)
}

/// Parses a single term, e.g. `gold(1,2)` or `[a,B]`.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.expect(&Tok::Eof)?;
    Ok(t)
}

/// Parses a single literal, e.g. `~at(X,3)`.
pub fn parse_literal(src: &str) -> Result<Literal, ParseError> {
    let mut p = Parser::new(src)?;
    let l = p.literal()?;
    p.expect(&Tok::Eof)?;
    Ok(l)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    depth: usize,
    fresh: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0, depth: 0, fresh: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error_here(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        let t = &self.toks[self.pos];
        let mut e = ParseError::new(t.line, t.col, message);
        e.expected = expected.iter().map(|s| s.to_string()).collect();
        e
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error_here(format!("unexpected {}", self.peek()), expected)
    }

    fn expect(&mut self, tok: &Tok) -> Result<Spanned, ParseError> {
        if self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[tok.symbol()]))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error_here("nesting too deep", &[]));
        }
        Ok(())
    }

    fn program(&mut self) -> Result<AgentProgram, ParseError> {
        let mut prog = AgentProgram::default();
        loop {
            match self.peek() {
                Tok::Eof => return Ok(prog),
                Tok::Bang => {
                    self.bump();
                    let goal = self.literal()?;
                    self.expect(&Tok::Dot)?;
                    prog.goals.push(goal);
                }
                Tok::Plus | Tok::Minus | Tok::At => prog.plans.push(self.plan()?),
                Tok::Atom(_) | Tok::Tilde => {
                    let start = self.toks[self.pos].clone();
                    let belief = self.literal()?;
                    if !belief.is_ground() {
                        return Err(ParseError::new(
                            start.line,
                            start.col,
                            format!("initial belief `{belief}` is not ground"),
                        ));
                    }
                    self.expect(&Tok::Dot)?;
                    prog.beliefs.push(belief);
                }
                _ => return Err(self.unexpected(&["belief", "!goal", "plan"])),
            }
        }
    }

    fn plan(&mut self) -> Result<Plan, ParseError> {
        self.fresh = 0;
        let label = if self.eat(&Tok::At) {
            match self.bump().tok {
                Tok::Atom(a) => Some(a),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected(&["atom"]));
                }
            }
        } else {
            None
        };
        let trigger = self.trigger()?;
        let context = if self.eat(&Tok::Colon) { self.context()? } else { Vec::new() };
        let body = if self.eat(&Tok::Arrow) { self.body()? } else { Vec::new() };
        self.expect(&Tok::Dot)?;
        Ok(Plan { label, trigger, context, body })
    }

    fn trigger(&mut self) -> Result<Trigger, ParseError> {
        let op = match self.peek() {
            Tok::Plus => TriggerOp::Add,
            Tok::Minus => TriggerOp::Delete,
            _ => return Err(self.unexpected(&["+", "-"])),
        };
        self.bump();
        let kind = if self.eat(&Tok::Bang) {
            TriggerKind::Achieve
        } else if self.eat(&Tok::Question) {
            TriggerKind::Test
        } else {
            TriggerKind::Belief
        };
        Ok(Trigger { op, kind, literal: self.literal()? })
    }

    fn context(&mut self) -> Result<Vec<Condition>, ParseError> {
        let mut conds = Vec::new();
        loop {
            if let Some(c) = self.condition()? {
                conds.push(c);
            }
            if !self.eat(&Tok::Amp) {
                return Ok(conds);
            }
        }
    }

    /// `None` for the neutral `true` conjunct.
    fn condition(&mut self) -> Result<Option<Condition>, ParseError> {
        match self.peek() {
            Tok::Atom(a) if a == "true" && !matches!(self.peek_at(1), Tok::LParen) => {
                self.bump();
                return Ok(None);
            }
            Tok::Atom(a)
                if a == "not" && !matches!(self.peek_at(1), Tok::LParen | Tok::Dot | Tok::Amp | Tok::Arrow) =>
            {
                self.bump();
                return Ok(Some(Condition::Not(self.literal()?)));
            }
            Tok::Atom(_) | Tok::Var(_) | Tok::Int(_) | Tok::Minus | Tok::LBracket | Tok::Tilde => {}
            _ => return Err(self.unexpected(&["context condition", "true"])),
        }
        if self.eat(&Tok::Tilde) {
            return Ok(Some(Condition::Holds(self.literal_after_tilde()?)));
        }
        let at = self.pos;
        let lhs = self.term()?;
        let op = match self.peek() {
            Tok::EqEq => Some(RelOp::Eq),
            Tok::NotEq => Some(RelOp::Ne),
            Tok::Lt => Some(RelOp::Lt),
            Tok::Le => Some(RelOp::Le),
            Tok::Gt => Some(RelOp::Gt),
            Tok::Ge => Some(RelOp::Ge),
            _ => None,
        };
        match op {
            Some(op) => {
                self.bump();
                let rhs = self.term()?;
                Ok(Some(Condition::Rel(op, lhs, rhs)))
            }
            None => match Literal::try_new(false, lhs) {
                Some(l) => Ok(Some(Condition::Holds(l))),
                None => {
                    self.pos = at;
                    Err(self.error_here("expected a literal or a comparison", &["literal", "comparison"]))
                }
            },
        }
    }

    fn body(&mut self) -> Result<Vec<BodyStep>, ParseError> {
        if matches!(self.peek(), Tok::Atom(a) if a == "true") && matches!(self.peek_at(1), Tok::Dot) {
            self.bump();
            return Ok(Vec::new());
        }
        let mut steps = vec![self.step()?];
        while self.eat(&Tok::Semi) {
            steps.push(self.step()?);
        }
        Ok(steps)
    }

    fn step(&mut self) -> Result<BodyStep, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(BodyStep::Achieve(self.literal()?))
            }
            Tok::Question => {
                self.bump();
                Ok(BodyStep::Test(self.literal()?))
            }
            Tok::Plus => {
                self.bump();
                Ok(BodyStep::AddBelief(self.literal()?))
            }
            Tok::Minus => {
                self.bump();
                Ok(BodyStep::DelBelief(self.literal()?))
            }
            Tok::Dot => {
                let dot = self.bump();
                let name_tok = self.toks[self.pos].clone();
                let name = match &name_tok.tok {
                    Tok::Atom(a) if name_tok.offset == dot.offset + 1 => a.clone(),
                    _ => return Err(self.unexpected(&["internal action name"])),
                };
                if !INTERNAL_ACTIONS.contains(&name.as_str()) {
                    return Err(ParseError::new(
                        name_tok.line,
                        name_tok.col,
                        format!("unknown internal action `.{name}`"),
                    ));
                }
                self.bump();
                let args = if self.peek() == &Tok::LParen { self.args()? } else { Vec::new() };
                Ok(BodyStep::Internal { name, args })
            }
            Tok::Atom(_) | Tok::Tilde => Ok(BodyStep::Action(self.literal()?)),
            _ => Err(self.unexpected(&["action", "!goal", "?goal", "+belief", "-belief", ".internal"])),
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        if self.eat(&Tok::Tilde) {
            return self.literal_after_tilde();
        }
        self.atomic(false)
    }

    fn literal_after_tilde(&mut self) -> Result<Literal, ParseError> {
        self.atomic(true)
    }

    fn atomic(&mut self, negated: bool) -> Result<Literal, ParseError> {
        match self.peek() {
            Tok::Atom(_) => {
                let t = self.term()?;
                Ok(Literal::try_new(negated, t).expect("atom-headed term"))
            }
            _ => Err(self.unexpected(&["literal"])),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(&Tok::LParen)?;
        self.enter()?;
        let mut args = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        self.expect(&Tok::RParen)?;
        self.depth -= 1;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                if v == "_" {
                    self.fresh += 1;
                    Ok(Term::Var(format!("__{}", self.fresh)))
                } else {
                    Ok(Term::Var(v))
                }
            }
            Tok::Int(i) => {
                self.bump();
                Ok(Term::Int(i))
            }
            Tok::Minus => {
                self.bump();
                match self.peek().clone() {
                    Tok::Int(i) => {
                        self.bump();
                        Ok(Term::Int(-i))
                    }
                    _ => Err(self.unexpected(&["integer"])),
                }
            }
            Tok::Atom(a) => {
                self.bump();
                if self.peek() == &Tok::LParen {
                    let args = self.args()?;
                    Ok(Term::Compound { functor: a, args })
                } else {
                    Ok(Term::Atom(a))
                }
            }
            Tok::LBracket => {
                self.bump();
                self.enter()?;
                let mut items = Vec::new();
                if !self.eat(&Tok::RBracket) {
                    items.push(self.term()?);
                    while self.eat(&Tok::Comma) {
                        items.push(self.term()?);
                    }
                    self.expect(&Tok::RBracket)?;
                }
                self.depth -= 1;
                Ok(Term::List(items))
            }
            _ => Err(self.unexpected(&["term"])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_fact() {
        let p = parse_program("gold(2,3).").unwrap();
        assert_eq!(p.beliefs, vec![parse_literal("gold(2,3)").unwrap()]);
        assert!(p.plans.is_empty() && p.goals.is_empty());
    }

    #[test]
    fn plan_with_negated_context() {
        let p = parse_program("+gold(X,Y) : not carrying <- !fetch(X,Y).").unwrap();
        let expected = Plan {
            label: None,
            trigger: Trigger::add_belief(Literal::new(Term::compound("gold", vec![Term::var("X"), Term::var("Y")]))),
            context: vec![Condition::Not(Literal::new(Term::atom("carrying")))],
            body: vec![BodyStep::Achieve(Literal::new(Term::compound("fetch", vec![Term::var("X"), Term::var("Y")])))],
        };
        assert_eq!(p.plans, vec![expected]);
        let reparsed = parse_program(&p.to_string()).unwrap();
        assert_eq!(reparsed, p);
    }

    #[test]
    fn empty_context_is_a_syntax_error() {
        let err = parse_program("+!g : <- a.").unwrap_err();
        assert_eq!((err.line, err.col), (1, 7));
        assert!(err.expected.iter().any(|e| e == "context condition"));
    }

    #[test]
    fn unknown_internal_action() {
        let err = parse_program("+!g <- .frobnicate(1).").unwrap_err();
        assert!(err.message.contains("unknown internal action"), "{err}");
        assert_eq!((err.line, err.col), (1, 9));
    }

    #[test]
    fn non_ground_belief_rejected() {
        let err = parse_program("ok.\ngold(X,1).").unwrap_err();
        assert_eq!((err.line, err.col), (2, 1));
        assert!(err.message.contains("not ground"));
    }

    #[test]
    fn all_trigger_and_step_forms() {
        let src = "@p1 -?q(X) : a & ~b(1) & X >= -2 & X \\== 3 <- act(X); !g; ?h(Y); +m(Y); -m(Y); .print(Y, [1,2]).\n!start.\n";
        let p = parse_program(src).unwrap();
        assert_eq!(p.goals.len(), 1);
        let plan = &p.plans[0];
        assert_eq!(plan.label.as_deref(), Some("p1"));
        assert_eq!(plan.trigger.op, TriggerOp::Delete);
        assert_eq!(plan.trigger.kind, TriggerKind::Test);
        assert_eq!(plan.context.len(), 4);
        assert_eq!(plan.body.len(), 6);
        assert_eq!(parse_program(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn true_context_and_body_are_empty() {
        let a = parse_program("+!g : true <- true.").unwrap();
        let b = parse_program("+!g.").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "+!g.\n");
    }

    #[test]
    fn anonymous_variables_are_distinct() {
        let p = parse_program("+!g : p(_, _) <- true.").unwrap();
        match &p.plans[0].context[0] {
            Condition::Holds(l) => assert_ne!(l.args()[0], l.args()[1]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_dot_reports_position() {
        let err = parse_program("a.\nb").unwrap_err();
        assert_eq!((err.line, err.col), (2, 2));
        assert_eq!(err.expected, vec!["."]);
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowed() {
        let src = format!("a({}1{}).", "f(".repeat(500), ")".repeat(500));
        assert!(parse_program(&src).is_err());
    }
}
