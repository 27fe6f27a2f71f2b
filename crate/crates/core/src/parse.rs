//! Lexer and recursive-descent parser for `.lbox` programs.
//!
//! ```text
//! program  := ("ret" type ";")? command
//! command  := "<" term "|" term ">" | "if" term "then" command "else" command
//! term     := app ("::" term)?
//! app      := prefix prefix*
//! prefix   := ("box"|"inl"|"inr"|"fst"|"snd"|"up"|"down") prefix
//!           | "mu" ... | "mu~" ... | "fun" binder "=>" term | atom
//! atom     := ident | "()" | "(" term ")" | "(" term "," term ")"
//!           | "(" term ":" type ")" | "[" term "]" | "true" | "false"
//! ```
//!
//! Cut polarities are not written; they are read off the binder types in
//! scope. Sugar is elaborated while parsing. `#` starts a line comment.

use std::fmt;

use thiserror::Error;

use crate::hint::{hint_term, Scope};
use crate::name::{Name, TOPLEVEL};
use crate::sugar;
use crate::term::{Binder, Class, Command, Side, Term};
use crate::types::{Polarity, Type};

/// Byte range in the source.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn to(self, other: Span) -> Span {
        Span { start: self.start, end: other.end }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("lexical error: unexpected character `{0}`")]
    Lexical(char),
    #[error("syntax error: expected {expected}, found {found}")]
    Syntax { expected: String, found: String },
    #[error("unknown identifier class: `{0}` is bound as neither a variable nor a covariable")]
    UnknownIdentifier(String),
    #[error("malformed stratification: expected a {expected}, found `{found}`")]
    Malformed { expected: Class, found: String },
    #[error("cannot infer the polarity of `{0}`; add a type ascription `(t : T)`")]
    Polarity(String),
    #[error("`tp` is reserved and cannot be bound")]
    ReservedName,
    #[error("{0}")]
    Sugar(String),
}

/// A diagnostic with its source position (1-based line and column).
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
    pub line: usize,
    pub col: usize,
}

/// A parsed program: the return type declaration and the command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceProgram {
    pub ret: Option<Type>,
    pub command: Command,
}

impl SourceProgram {
    /// The declared return type, `1` when absent.
    pub fn return_type(&self) -> Type {
        self.ret.clone().unwrap_or(Type::Unit)
    }
}

impl fmt::Display for SourceProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = &self.ret {
            writeln!(f, "ret {r};")?;
        }
        write!(f, "{}", self.command)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(Name),
    One,
    Sym(&'static str),
    Kw(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(n) => write!(f, "identifier `{n}`"),
            Tok::One => f.write_str("`1`"),
            Tok::Sym(s) | Tok::Kw(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "ret", "mu", "mu~", "box", "inl", "inr", "fst", "snd", "fun", "up", "down", "true", "false", "bool", "if",
    "then", "else",
];

// Longest first so that `->` wins over `-`.
const SYMBOLS: &[&str] = &[
    "->", "=>", "::", "<", ">", "|", "(", ")", "[", "]", "{", "}", ",", ".", ":", ";", "*", "+", "&", "@", "~",
];

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, (ParseErrorKind, Span)> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &src[start..i];
            if word == "mu" && bytes.get(i) == Some(&b'~') {
                i += 1;
                out.push((Tok::Kw("mu~"), Span { start, end: i }));
                continue;
            }
            if let Some(kw) = KEYWORDS.iter().find(|k| **k == word) {
                out.push((Tok::Kw(kw), Span { start, end: i }));
                continue;
            }
            let mut name = Name::new(word);
            if bytes.get(i) == Some(&b'\'') && bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
                let ds = i + 1;
                let mut j = ds;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let stamp = src[ds..j].parse().map_err(|_| (ParseErrorKind::Lexical('\''), Span { start: i, end: j }))?;
                name = Name::with_stamp(word, stamp);
                i = j;
            }
            out.push((Tok::Ident(name), Span { start, end: i }));
            continue;
        }
        if c == b'1' && !bytes.get(i + 1).is_some_and(u8::is_ascii_alphanumeric) {
            out.push((Tok::One, Span { start, end: i + 1 }));
            i += 1;
            continue;
        }
        for s in SYMBOLS {
            if src[i..].starts_with(s) {
                i += s.len();
                out.push((Tok::Sym(s), Span { start, end: i }));
                continue 'outer;
            }
        }
        let ch = src[i..].chars().next().unwrap_or('?');
        return Err((ParseErrorKind::Lexical(ch), Span { start, end: i + ch.len_utf8() }));
    }
    out.push((Tok::Eof, Span { start: src.len(), end: src.len() }));
    Ok(out)
}

/// A parsed term with its evident type, if any.
struct Parsed {
    term: Term,
    ty: Option<Type>,
    span: Span,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ns {
    Var,
    CoVar,
}

struct Parser<'s> {
    src: &'s str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
    scope: Scope,
    // Binding order across both namespaces, innermost last.
    order: Vec<(Name, Ns)>,
}

type PResult<T> = Result<T, (ParseErrorKind, Span)>;

impl<'s> Parser<'s> {
    fn new(src: &'s str, ret: Type) -> PResult<Self> {
        Ok(Parser {
            src,
            toks: lex(src)?,
            pos: 0,
            scope: Scope::toplevel(ret),
            order: vec![(Name::toplevel(), Ns::CoVar)],
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) | Tok::Kw(x) if *x == s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.at(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, expected: &str) -> PResult<T> {
        Err((
            ParseErrorKind::Syntax { expected: expected.to_string(), found: self.peek().to_string() },
            self.span(),
        ))
    }

    fn expect(&mut self, s: &str) -> PResult<Span> {
        if self.at(s) {
            Ok(self.bump().1)
        } else {
            self.fail(&format!("`{s}`"))
        }
    }

    fn ident(&mut self) -> PResult<(Name, Span)> {
        match self.peek().clone() {
            Tok::Ident(n) => {
                let sp = self.bump().1;
                Ok((n, sp))
            }
            _ => self.fail("an identifier"),
        }
    }

    // ---- types ----

    fn ty(&mut self) -> PResult<Type> {
        let a = self.ty_par()?;
        if self.eat("->") {
            let b = self.ty()?;
            return Ok(sugar::arrow(a, b));
        }
        Ok(a)
    }

    fn ty_par(&mut self) -> PResult<Type> {
        let mut a = self.ty_sum()?;
        while self.eat("@") {
            a = Type::par(a, self.ty_sum()?);
        }
        Ok(a)
    }

    fn ty_sum(&mut self) -> PResult<Type> {
        let mut a = self.ty_with()?;
        while self.eat("+") {
            a = Type::sum(a, self.ty_with()?);
        }
        Ok(a)
    }

    fn ty_with(&mut self) -> PResult<Type> {
        let mut a = self.ty_tensor()?;
        while self.eat("&") {
            a = Type::with(a, self.ty_tensor()?);
        }
        Ok(a)
    }

    fn ty_tensor(&mut self) -> PResult<Type> {
        let mut a = self.ty_prefix()?;
        while self.eat("*") {
            a = Type::tensor(a, self.ty_prefix()?);
        }
        Ok(a)
    }

    fn ty_prefix(&mut self) -> PResult<Type> {
        if self.eat("box") {
            return Ok(Type::boxed(self.ty_prefix()?));
        }
        if self.eat("~") {
            return Ok(Type::not(self.ty_prefix()?));
        }
        if self.eat("up") {
            return Ok(sugar::shift_up(self.ty_prefix()?));
        }
        if self.eat("down") {
            return Ok(sugar::shift_down(self.ty_prefix()?));
        }
        if self.eat("bool") {
            return Ok(sugar::bool_type());
        }
        if *self.peek() == Tok::One {
            self.bump();
            return Ok(Type::Unit);
        }
        if self.eat("(") {
            let t = self.ty()?;
            self.expect(")")?;
            return Ok(t);
        }
        self.fail("a type")
    }

    // ---- scope ----

    /// `x:T`; the type stops before `->` so it can sit in match arms.
    fn binder(&mut self) -> PResult<Binder> {
        let (name, sp) = self.ident()?;
        if name.is_toplevel() {
            return Err((ParseErrorKind::ReservedName, sp));
        }
        self.expect(":")?;
        let ty = self.ty_par()?;
        Ok(Binder::new(name, ty))
    }

    fn mark(&self) -> (usize, usize, usize) {
        (self.scope.var_len(), self.scope.covar_len(), self.order.len())
    }

    fn reset(&mut self, m: (usize, usize, usize)) {
        self.scope.truncate(m.0, m.1);
        self.order.truncate(m.2);
    }

    fn bind_var(&mut self, b: &Binder) {
        self.scope.push_var(b.name.clone(), b.ty.clone());
        self.order.push((b.name.clone(), Ns::Var));
    }

    fn bind_covar(&mut self, b: &Binder) {
        self.scope.push_covar(b.name.clone(), b.ty.clone());
        self.order.push((b.name.clone(), Ns::CoVar));
    }

    /// Parses a command under extra variable and covariable bindings.
    fn command_under(&mut self, vars: &[&Binder], covars: &[&Binder]) -> PResult<Command> {
        let m = self.mark();
        for b in vars {
            self.bind_var(b);
        }
        for b in covars {
            self.bind_covar(b);
        }
        let c = self.command();
        self.reset(m);
        c
    }

    // ---- commands ----

    fn command(&mut self) -> PResult<Command> {
        let start = self.span();
        if self.eat("if") {
            let v = self.term()?;
            require(&v, Class::Value)?;
            self.expect("then")?;
            let c1 = self.command()?;
            self.expect("else")?;
            let c2 = self.command()?;
            return Ok(sugar::if_then_else(v.term, c1, c2));
        }
        self.expect("<")?;
        let left = self.term()?;
        self.expect("|")?;
        let right = self.term()?;
        let end = self.expect(">")?;
        let span = start.to(end);
        let ty = right.ty.clone().or_else(|| left.ty.clone());
        let Some(ty) = ty else {
            return Err((ParseErrorKind::Polarity(self.src[span.start..span.end].to_string()), span));
        };
        let c = Command::new(ty.polarity(), left.term, right.term);
        if let Some((class, found)) = c.stratification_error() {
            let sp = if std::ptr::eq(found, &c.left) { left.span } else { right.span };
            return Err((ParseErrorKind::Malformed { expected: class, found: found.to_string() }, sp));
        }
        Ok(c)
    }

    // ---- terms ----

    fn term(&mut self) -> PResult<Parsed> {
        let head = self.app()?;
        if self.eat("::") {
            let tail = self.term()?;
            require(&head, Class::Value)?;
            require(&tail, Class::CoValue)?;
            let ty = match (&head.ty, &tail.ty) {
                (Some(a), Some(b)) => Some(Type::par(Type::not(a.clone()), b.clone())),
                _ => None,
            };
            let span = head.span.to(tail.span);
            return Ok(Parsed { term: sugar::cons(head.term, tail.term), ty, span });
        }
        Ok(head)
    }

    fn starts_prefix(&self) -> bool {
        match self.peek() {
            Tok::Ident(_) => true,
            Tok::Sym(s) => matches!(*s, "(" | "["),
            Tok::Kw(k) => matches!(
                *k,
                "box" | "inl" | "inr" | "fst" | "snd" | "up" | "down" | "mu" | "mu~" | "fun" | "true" | "false"
            ),
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<Parsed> {
        let mut f = self.prefix()?;
        while self.starts_prefix() {
            let arg = self.prefix()?;
            require(&f, Class::Value)?;
            require(&arg, Class::Value)?;
            let ret = match &f.ty {
                Some(Type::Par(a, b)) if matches!(**a, Type::Not(_)) => (**b).clone(),
                Some(t) => {
                    return Err((ParseErrorKind::Sugar(format!("cannot apply a term of type {t}")), f.span));
                }
                None => {
                    return Err((
                        ParseErrorKind::Sugar("cannot determine the type of the applied term".into()),
                        f.span,
                    ))
                }
            };
            let span = f.span.to(arg.span);
            let term = sugar::apply(f.term, arg.term, ret.clone());
            f = Parsed { term, ty: Some(ret), span };
        }
        Ok(f)
    }

    fn prefix(&mut self) -> PResult<Parsed> {
        let start = self.span();
        let kw = match self.peek() {
            Tok::Kw(k) => *k,
            _ => return self.atom(),
        };
        match kw {
            "box" | "inl" | "inr" | "up" => {
                self.bump();
                let v = self.prefix()?;
                require(&v, Class::Value)?;
                let span = start.to(v.span);
                let (term, ty) = match kw {
                    "box" => (Term::boxed(v.term), v.ty.map(Type::boxed)),
                    "inl" => (Term::inj(Side::First, v.term), None),
                    "inr" => (Term::inj(Side::Second, v.term), None),
                    _ => (sugar::up_value(v.term), v.ty.map(sugar::shift_up)),
                };
                Ok(Parsed { term, ty, span })
            }
            "fst" | "snd" | "down" => {
                self.bump();
                let s = self.prefix()?;
                require(&s, Class::CoValue)?;
                let span = start.to(s.span);
                let (term, ty) = match kw {
                    "fst" => (Term::proj(Side::First, s.term), None),
                    "snd" => (Term::proj(Side::Second, s.term), None),
                    _ => (sugar::down_covalue(s.term), s.ty.map(sugar::shift_down)),
                };
                Ok(Parsed { term, ty, span })
            }
            "mu" => self.mu(),
            "mu~" => self.mu_tilde(),
            "fun" => {
                self.bump();
                let x = self.binder()?;
                self.expect("=>")?;
                let m = self.mark();
                self.bind_var(&x);
                let body = self.term();
                self.reset(m);
                let body = body?;
                let Some(ret) = body.ty.clone() else {
                    return Err((
                        ParseErrorKind::Sugar("cannot determine the result type; ascribe the body".into()),
                        body.span,
                    ));
                };
                let expected = if ret.polarity() == Polarity::Neg { Class::Value } else { Class::Expression };
                require(&body, expected)?;
                let ty = sugar::arrow(x.ty.clone(), ret.clone());
                let span = start.to(body.span);
                Ok(Parsed { term: sugar::lambda(x, body.term, ret), ty: Some(ty), span })
            }
            "true" | "false" => {
                self.bump();
                let term = if kw == "true" { sugar::true_value() } else { sugar::false_value() };
                Ok(Parsed { term, ty: Some(sugar::bool_type()), span: start })
            }
            _ => self.fail("a term"),
        }
    }

    fn finish(&self, start: Span, term: Term) -> Parsed {
        let ty = hint_term(&self.scope, &term);
        Parsed { term, ty, span: start.to(self.prev_span()) }
    }

    fn mu(&mut self) -> PResult<Parsed> {
        let start = self.bump().1;
        if self.eat("[") {
            let x = self.binder()?;
            self.expect("]")?;
            self.expect(".")?;
            let c = self.command_under(&[&x], &[])?;
            return Ok(self.finish(start, Term::mu_not(x, c)));
        }
        if self.eat("(") {
            let a = self.binder()?;
            self.expect(",")?;
            let b = self.binder()?;
            self.expect(")")?;
            self.expect(".")?;
            let c = self.command_under(&[], &[&a, &b])?;
            return Ok(self.finish(start, Term::mu_par(a, b, c)));
        }
        if self.eat("{") {
            self.expect("fst")?;
            let a = self.binder()?;
            self.expect("->")?;
            let c1 = self.command_under(&[], &[&a])?;
            self.expect("|")?;
            self.expect("snd")?;
            let b = self.binder()?;
            self.expect("->")?;
            let c2 = self.command_under(&[], &[&b])?;
            self.expect("}")?;
            return Ok(self.finish(start, Term::mu_with(a, c1, b, c2)));
        }
        if self.eat("down") {
            let a = self.binder()?;
            self.expect(".")?;
            let c = self.command_under(&[], &[&a])?;
            let term = sugar::down_mu(a.clone(), c);
            let span = start.to(self.prev_span());
            return Ok(Parsed { term, ty: Some(sugar::shift_down(a.ty)), span });
        }
        let a = self.binder()?;
        self.expect(".")?;
        let c = self.command_under(&[], &[&a])?;
        Ok(self.finish(start, Term::mu(a, c)))
    }

    fn mu_tilde(&mut self) -> PResult<Parsed> {
        let start = self.bump().1;
        if self.eat("box") {
            let x = self.binder()?;
            self.expect(".")?;
            let c = self.command_under(&[&x], &[])?;
            return Ok(self.finish(start, Term::mu_tilde_box(x, c)));
        }
        if self.eat("up") {
            let x = self.binder()?;
            self.expect(".")?;
            let c = self.command_under(&[&x], &[])?;
            return Ok(self.finish(start, sugar::up_match(x, c)));
        }
        if self.at("(") && matches!(self.peek_at(1), Tok::Sym(")")) {
            self.bump();
            self.bump();
            self.expect(".")?;
            let c = self.command_under(&[], &[])?;
            return Ok(self.finish(start, Term::mu_tilde_unit(c)));
        }
        if self.eat("(") {
            let x = self.binder()?;
            self.expect(",")?;
            let y = self.binder()?;
            self.expect(")")?;
            self.expect(".")?;
            let c = self.command_under(&[&x, &y], &[])?;
            return Ok(self.finish(start, Term::mu_tilde_pair(x, y, c)));
        }
        if self.eat("{") {
            self.expect("inl")?;
            let x = self.binder()?;
            self.expect("->")?;
            let c1 = self.command_under(&[&x], &[])?;
            self.expect("|")?;
            self.expect("inr")?;
            let y = self.binder()?;
            self.expect("->")?;
            let c2 = self.command_under(&[&y], &[])?;
            self.expect("}")?;
            return Ok(self.finish(start, Term::mu_tilde_match(x, c1, y, c2)));
        }
        let x = self.binder()?;
        self.expect(".")?;
        let c = self.command_under(&[&x], &[])?;
        Ok(self.finish(start, Term::mu_tilde(x, c)))
    }

    fn resolve(&self, name: &Name) -> Option<Ns> {
        self.order.iter().rev().find(|(n, _)| n == name).map(|(_, ns)| *ns)
    }

    fn atom(&mut self) -> PResult<Parsed> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                let term = match self.resolve(&name) {
                    Some(Ns::Var) => Term::Var(name),
                    Some(Ns::CoVar) => Term::CoVar(name),
                    None => return Err((ParseErrorKind::UnknownIdentifier(name.to_string()), start)),
                };
                Ok(self.finish(start, term))
            }
            Tok::Sym("[") => {
                self.bump();
                let v = self.term()?;
                require(&v, Class::Value)?;
                self.expect("]")?;
                let ty = v.ty.map(Type::not);
                Ok(Parsed { term: Term::neg(v.term), ty, span: start.to(self.prev_span()) })
            }
            Tok::Sym("(") => {
                self.bump();
                if self.eat(")") {
                    return Ok(Parsed { term: Term::Unit, ty: Some(Type::Unit), span: start.to(self.prev_span()) });
                }
                let a = self.term()?;
                if self.eat(":") {
                    let ty = self.ty()?;
                    self.expect(")")?;
                    return Ok(Parsed { term: a.term, ty: Some(ty), span: start.to(self.prev_span()) });
                }
                if self.eat(",") {
                    let b = self.term()?;
                    self.expect(")")?;
                    let span = start.to(self.prev_span());
                    let both = a.ty.clone().zip(b.ty.clone());
                    let consumer = !a.term.is_producer_form() && !b.term.is_producer_form();
                    return if consumer {
                        require(&a, Class::CoValue)?;
                        require(&b, Class::CoValue)?;
                        let ty = both.map(|(x, y)| Type::par(x, y));
                        Ok(Parsed { term: Term::copair(a.term, b.term), ty, span })
                    } else {
                        require(&a, Class::Value)?;
                        require(&b, Class::Value)?;
                        let ty = both.map(|(x, y)| Type::tensor(x, y));
                        Ok(Parsed { term: Term::pair(a.term, b.term), ty, span })
                    };
                }
                self.expect(")")?;
                Ok(Parsed { span: start.to(self.prev_span()), ..a })
            }
            _ => self.fail("a term"),
        }
    }

    fn program(&mut self) -> PResult<SourceProgram> {
        let mut ret = None;
        if self.eat("ret") {
            let r = self.ty()?;
            self.expect(";")?;
            self.scope = Scope::toplevel(r.clone());
            ret = Some(r);
        }
        let command = self.command()?;
        if *self.peek() != Tok::Eof {
            return self.fail("end of input");
        }
        Ok(SourceProgram { ret, command })
    }
}

fn require(p: &Parsed, class: Class) -> PResult<()> {
    if p.term.has_class(class) {
        Ok(())
    } else {
        Err((ParseErrorKind::Malformed { expected: class, found: p.term.to_string() }, p.span))
    }
}

fn locate(src: &str, (kind, span): (ParseErrorKind, Span)) -> ParseError {
    let upto = &src[..span.start.min(src.len())];
    let line = upto.matches('\n').count() + 1;
    let col = upto.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError { kind, span, line, col }
}

/// Parses a whole program.
pub fn parse_program(src: &str) -> Result<SourceProgram, ParseError> {
    parse_program_with(src, None)
}

/// Parses a program, with `ret` overriding any declaration in the source.
pub fn parse_program_with(src: &str, ret: Option<Type>) -> Result<SourceProgram, ParseError> {
    let run = || {
        let mut p = Parser::new(src, ret.clone().unwrap_or(Type::Unit))?;
        let mut prog = p.program()?;
        if let Some(r) = &ret {
            if prog.ret.is_some() && prog.ret.as_ref() != Some(r) {
                // Re-parse with the overriding type in scope for `tp`.
                let mut q = Parser::new(src, r.clone())?;
                q.eat("ret");
                q.ty()?;
                q.expect(";")?;
                let command = q.command()?;
                prog = SourceProgram { ret: Some(r.clone()), command };
            } else {
                prog.ret = Some(r.clone());
            }
        }
        Ok(prog)
    };
    run().map_err(|e| locate(src, e))
}

/// Parses a single type.
pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let run = || {
        let mut p = Parser::new(src, Type::Unit)?;
        let t = p.ty()?;
        if *p.peek() != Tok::Eof {
            return p.fail("end of input");
        }
        Ok(t)
    };
    run().map_err(|e| locate(src, e))
}

/// Parses a command whose free names are given by `scope`, with `tp` at
/// the bottom.
pub fn parse_command_in(src: &str, scope: &[(Name, Type, bool)], ret: Type) -> Result<Command, ParseError> {
    let run = || {
        let mut p = Parser::new(src, ret)?;
        for (n, t, covar) in scope {
            let b = Binder::new(n.clone(), t.clone());
            if *covar {
                p.bind_covar(&b);
            } else {
                p.bind_var(&b);
            }
        }
        let c = p.command()?;
        if *p.peek() != Tok::Eof {
            return p.fail("end of input");
        }
        Ok(c)
    };
    run().map_err(|e| locate(src, e))
}

/// `true` when `s` is a reserved word of the surface syntax.
pub fn is_keyword(s: &str) -> bool {
    s == TOPLEVEL || KEYWORDS.contains(&s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subst::alpha_eq_command;

    fn tp() -> Term {
        Term::covar("tp")
    }

    #[test]
    fn smallest_program() {
        let p = parse_program("ret 1; < () | mu~(). <() | tp> >").unwrap();
        assert_eq!(p.ret, Some(Type::Unit));
        let inner = Command::new(Polarity::Modal, Term::Unit, tp());
        assert_eq!(p.command, Command::new(Polarity::Modal, Term::Unit, Term::mu_tilde_unit(inner)));
    }

    #[test]
    fn box_program() {
        let p = parse_program("< box () | mu~box x:1. <x | tp> >").unwrap();
        let body = Command::new(Polarity::Modal, Term::var("x"), tp());
        let expected = Command::new(
            Polarity::Modal,
            Term::boxed(Term::Unit),
            Term::mu_tilde_box(Binder::new("x", Type::Unit), body),
        );
        assert_eq!(p.command, expected);
    }

    #[test]
    fn tensor_redex_round_trips() {
        let src = "ret 1+1; < (inl (), ()) | mu~(x:1+1, y:1). <x | tp> >";
        let p = parse_program(src).unwrap();
        assert_eq!(p.command.polarity, Polarity::Modal);
        assert!(matches!(p.command.right, Term::MuTildePair(..)));
        let again = parse_program(&p.to_string()).unwrap();
        assert!(alpha_eq_command(&p.command, &again.command));
        assert_eq!(p.to_string(), again.to_string());
    }

    #[test]
    fn type_precedence() {
        assert_eq!(parse_type("~1 @ 1").unwrap(), Type::par(Type::not(Type::Unit), Type::Unit));
        assert_eq!(
            parse_type("1 * 1 & 1").unwrap(),
            Type::with(Type::tensor(Type::Unit, Type::Unit), Type::Unit)
        );
        assert_eq!(
            parse_type("1 + 1 + 1").unwrap(),
            Type::sum(Type::sum(Type::Unit, Type::Unit), Type::Unit)
        );
        assert_eq!(parse_type("box 1 * 1").unwrap(), Type::tensor(Type::boxed(Type::Unit), Type::Unit));
        assert_eq!(
            parse_type("1 -> 1 -> 1").unwrap(),
            sugar::arrow(Type::Unit, sugar::arrow(Type::Unit, Type::Unit))
        );
        for s in ["~1 @ 1", "1 * (1 & 1)", "box (1 + 1)", "1 + (1 + 1)", "~~1"] {
            assert_eq!(parse_type(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn unknown_identifier() {
        let e = parse_program("< x | tp >").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnknownIdentifier(_)));
        assert_eq!((e.line, e.col), (1, 3));
    }

    #[test]
    fn positive_mu_is_not_a_value() {
        // mu a:1 is expression-only, so it cannot sit inside a pair.
        let e = parse_program("ret 1 * 1; < (mu a:1. <() | a>, ()) | tp >").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Malformed { expected: Class::Value, .. }), "{e}");
    }

    #[test]
    fn negative_cut_needs_value_left() {
        let e = parse_program("< mu a:1. <() | a> | mu~x:~1. <() | tp> >").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Malformed { .. }), "{e}");
    }

    #[test]
    fn reserved_tp() {
        let e = parse_program("< () | mu~tp:1. <() | tp> >").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ReservedName);
    }

    #[test]
    fn lexical_error_position() {
        let e = parse_program("ret 1;\n< () | $ >").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Lexical('$'));
        assert_eq!((e.line, e.col), (2, 8));
    }

    #[test]
    fn comments_and_stamps() {
        let p = parse_program("# hello\n< () | mu~x'2:1. < x'2 | tp > > # bye").unwrap();
        assert!(matches!(&p.command.right, Term::MuTilde(b, _) if b.name == Name::with_stamp("x", 2)));
    }

    #[test]
    fn innermost_binding_wins() {
        // `a` is first a covariable, then shadowed by a variable.
        let p = parse_program("< mu a:1. < () | mu~a:1. < a | tp > > | tp >").unwrap();
        let Term::Mu(_, c) = &p.command.left else { panic!() };
        let Term::MuTilde(_, inner) = &c.right else { panic!() };
        assert_eq!(inner.left, Term::var("a"));
    }

    #[test]
    fn copair_and_cons() {
        let src = "< mu(a:~1, b:1). <() | b> | ([()], tp) >";
        let p = parse_program(src).unwrap();
        assert!(matches!(p.command.right, Term::CoPair(..)));
        assert_eq!(p.command.polarity, Polarity::Neg);
        let q = parse_program("< mu(a:~1, b:1). <() | b> | () :: tp >").unwrap();
        assert_eq!(p.command, q.command);
    }

    #[test]
    fn sugar_identity_application() {
        let p = parse_program("ret 1; < (fun x:1 => x) () | tp >").unwrap();
        let out = crate::opsem::run(&p.command, 100).unwrap();
        assert_eq!(out.result, crate::opsem::StepResult::Terminal(Term::Unit));
    }

    #[test]
    fn ascription_guides_polarity() {
        let e = parse_program("ret bool; < (fun x:1 => inl ()) () | tp >").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Sugar(_)));
        parse_program("ret bool; < (fun x:1 => (inl () : bool)) () | tp >").unwrap();
    }

    #[test]
    fn if_and_booleans() {
        let p = parse_program("ret bool; if true then < false | tp > else < true | tp >").unwrap();
        let out = crate::opsem::run(&p.command, 100).unwrap();
        assert_eq!(out.result, crate::opsem::StepResult::Terminal(sugar::false_value()));
    }

    #[test]
    fn return_type_override() {
        let p = parse_program_with("ret 1; < inl () | tp >", Some(sugar::bool_type())).unwrap();
        assert_eq!(p.return_type(), sugar::bool_type());
        assert_eq!(p.command.polarity, Polarity::Modal);
    }
}
