//! The divisor expression language.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := '-' term | [rational ['*']] primary
//! primary := '(' expr ')' | generator | aggregate | named | transport
//! generator := psi(i) | bd({i,...}) | coinc(i,j) | nodal({i,...})
//! aggregate := Psi | Dnodal | Ds | Dr(r) | Delta | kappa | lambda
//! named     := A(w) | B(w) | C(i,w) | Ctot(w) | K | Lup(w) | git(x)
//! transport := pull[w](expr) | push[w](expr) | chi*[split](expr)
//! ```
//!
//! A parse failure is a [`Diagnostic`] with the byte offset and the set of
//! tokens that would have been accepted. Evaluation resolves names against a
//! declared ambient space; sub-expressions under a transport wrapper resolve
//! in the wrapper's source space.

use std::fmt;
use wstab::divisors;
use wstab::markings::{MarkedSubset, WeightVector};
use wstab::morphisms::{self, ReductionMap, ReplacementData};
use wstab::picard::{expand_aggregate, Aggregate, DivisorClass, Generator, GitWeights, SpaceTag};
use wstab::{rat_int, Rat};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Sum(Box<Expr>, Box<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Scale(Rat, Box<Expr>),
    Psi(usize),
    Bd(Vec<usize>),
    Coinc(usize, usize),
    Nodal(Vec<usize>),
    Aggregate(Aggregate),
    K,
    A(WeightVector),
    B(WeightVector),
    C(usize, WeightVector),
    Ctot(WeightVector),
    Lup(WeightVector),
    Git(Vec<Rat>),
    Pull(WeightVector, Box<Expr>),
    Push(WeightVector, Box<Expr>),
    Chi(Vec<Rat>, Box<Expr>),
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Sum(..) | Expr::Diff(..) => 0,
        Expr::Neg(..) | Expr::Scale(..) => 1,
        _ => 2,
    }
}

fn fmt_child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if precedence(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Sum(a, b) => {
                fmt_child(f, a, 0)?;
                write!(f, " + ")?;
                fmt_child(f, b, 1)
            }
            Expr::Diff(a, b) => {
                fmt_child(f, a, 0)?;
                write!(f, " - ")?;
                fmt_child(f, b, 1)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                fmt_child(f, a, 1)
            }
            Expr::Scale(r, a) => {
                write!(f, "{r}*")?;
                fmt_child(f, a, 2)
            }
            Expr::Psi(i) => write!(f, "psi({i})"),
            Expr::Bd(m) => write!(f, "bd({{{}}})", join(m.iter())),
            Expr::Coinc(i, j) => write!(f, "coinc({i},{j})"),
            Expr::Nodal(m) => write!(f, "nodal({{{}}})", join(m.iter())),
            Expr::Aggregate(a) => write!(f, "{a}"),
            Expr::K => write!(f, "K"),
            Expr::A(w) => write!(f, "A({w})"),
            Expr::B(w) => write!(f, "B({w})"),
            Expr::C(i, w) => write!(f, "C({i},{w})"),
            Expr::Ctot(w) => write!(f, "Ctot({w})"),
            Expr::Lup(w) => write!(f, "Lup({w})"),
            Expr::Git(x) => write!(f, "git({})", join(x.iter())),
            Expr::Pull(w, e) => write!(f, "pull[{w}]({e})"),
            Expr::Push(w, e) => write!(f, "push[{w}]({e})"),
            Expr::Chi(split, e) => write!(f, "chi*[{}]({e})", join(split.iter())),
        }
    }
}

/// Parse failure with byte offset and the accepted-token set.
#[derive(Clone, Debug)]
pub struct Diagnostic {
    pub offset: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

fn diag(offset: usize, message: impl Into<String>, expected: &[&str]) -> Diagnostic {
    Diagnostic {
        offset,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("integer {v}"),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Comma => "','".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, Diagnostic> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b'[' => {
                out.push((Tok::LBracket, i));
                i += 1;
            }
            b']' => {
                out.push((Tok::RBracket, i));
                i += 1;
            }
            b'{' => {
                out.push((Tok::LBrace, i));
                i += 1;
            }
            b'}' => {
                out.push((Tok::RBrace, i));
                i += 1;
            }
            b',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &input[start..i];
                let value: u64 = text.parse().map_err(|_| {
                    diag(start, format!("integer {text} is too large"), &[])
                })?;
                out.push((Tok::Int(value), start));
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(input[start..i].to_string()), start));
            }
            other => {
                return Err(diag(
                    i,
                    format!("unexpected character {:?}", other as char),
                    &[],
                ))
            }
        }
    }
    out.push((Tok::Eof, input.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, expected: &[&str]) -> Result<(), Diagnostic> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(diag(
                self.offset(),
                format!("found {}", self.peek().describe()),
                expected,
            ))
        }
    }

    fn int(&mut self, what: &str) -> Result<u64, Diagnostic> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(v)
            }
            other => Err(diag(
                self.offset(),
                format!("found {}", other.describe()),
                &[what],
            )),
        }
    }

    /// A 1-based marking index.
    fn index(&mut self) -> Result<usize, Diagnostic> {
        let off = self.offset();
        let v = self.int("index")?;
        if v == 0 {
            return Err(diag(off, "index 0 out of range: indices are 1-based", &["index >= 1"]));
        }
        Ok(v as usize)
    }

    fn rational(&mut self) -> Result<Rat, Diagnostic> {
        let num = self.int("rational")? as i64;
        if *self.peek() == Tok::Slash {
            self.bump();
            let off = self.offset();
            let den = self.int("denominator")? as i64;
            if den == 0 {
                return Err(diag(off, "zero denominator", &[]));
            }
            Ok(wstab::rat(num, den))
        } else {
            Ok(rat_int(num))
        }
    }

    fn rational_list(&mut self) -> Result<Vec<Rat>, Diagnostic> {
        let mut out = vec![self.rational()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.rational()?);
        }
        Ok(out)
    }

    fn weight_vector(&mut self) -> Result<WeightVector, Diagnostic> {
        let off = self.offset();
        let entries = self.rational_list()?;
        WeightVector::new(entries).map_err(|e| diag(off, e.to_string(), &[]))
    }

    fn subset(&mut self) -> Result<Vec<usize>, Diagnostic> {
        self.expect(Tok::LBrace, &["'{'"])?;
        let mut members = vec![self.index()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            members.push(self.index()?);
        }
        self.expect(Tok::RBrace, &["'}'", "','"])?;
        Ok(members)
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sum(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Diff(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, Diagnostic> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.term()?)))
            }
            Tok::Int(_) => {
                let scalar = self.rational()?;
                if *self.peek() == Tok::Star {
                    self.bump();
                }
                let inner = self.primary()?;
                Ok(Expr::Scale(scalar, Box::new(inner)))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Expr, Diagnostic> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, &["')'"])?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                self.named(&name)
            }
            other => Err(diag(
                self.offset(),
                format!("found {}", other.describe()),
                &["'('", "generator", "aggregate", "named divisor"],
            )),
        }
    }

    fn named(&mut self, name: &str) -> Result<Expr, Diagnostic> {
        match name {
            "psi" => {
                self.expect(Tok::LParen, &["'('"])?;
                let i = self.index()?;
                self.expect(Tok::RParen, &["')'"])?;
                Ok(Expr::Psi(i))
            }
            "bd" => {
                self.expect(Tok::LParen, &["'('"])?;
                let members = self.subset()?;
                self.expect(Tok::RParen, &["')'"])?;
                Ok(Expr::Bd(members))
            }
            "coinc" => {
                self.expect(Tok::LParen, &["'('"])?;
                let i = self.index()?;
                self.expect(Tok::Comma, &["','"])?;
                let j = self.index()?;
                self.expect(Tok::RParen, &["')'"])?;
                Ok(Expr::Coinc(i, j))
            }
            "nodal" => {
                self.expect(Tok::LParen, &["'('"])?;
                let members = self.subset()?;
                self.expect(Tok::RParen, &["')'"])?;
                Ok(Expr::Nodal(members))
            }
            "Psi" => Ok(Expr::Aggregate(Aggregate::PsiTotal)),
            "Dnodal" => Ok(Expr::Aggregate(Aggregate::DeltaNodal)),
            "Ds" => Ok(Expr::Aggregate(Aggregate::DeltaS)),
            "Delta" => Ok(Expr::Aggregate(Aggregate::DeltaTotal)),
            "kappa" => Ok(Expr::Aggregate(Aggregate::Kappa)),
            "lambda" => Ok(Expr::Aggregate(Aggregate::Lambda)),
            "Dr" => {
                self.expect(Tok::LParen, &["'('"])?;
                let r = self.int("block size")? as usize;
                self.expect(Tok::RParen, &["')'"])?;
                Ok(Expr::Aggregate(Aggregate::DeltaR(r)))
            }
            "K" => Ok(Expr::K),
            "A" | "B" | "Ctot" | "Lup" => {
                self.expect(Tok::LParen, &["'('"])?;
                let w = self.weight_vector()?;
                self.expect(Tok::RParen, &["')'", "','"])?;
                Ok(match name {
                    "A" => Expr::A(w),
                    "B" => Expr::B(w),
                    "Ctot" => Expr::Ctot(w),
                    _ => Expr::Lup(w),
                })
            }
            "C" => {
                self.expect(Tok::LParen, &["'('"])?;
                let i = self.index()?;
                self.expect(Tok::Comma, &["','"])?;
                let w = self.weight_vector()?;
                self.expect(Tok::RParen, &["')'"])?;
                Ok(Expr::C(i, w))
            }
            "git" => {
                self.expect(Tok::LParen, &["'('"])?;
                let x = self.rational_list()?;
                self.expect(Tok::RParen, &["')'", "','"])?;
                Ok(Expr::Git(x))
            }
            "pull" | "push" => {
                self.expect(Tok::LBracket, &["'['"])?;
                let w = self.weight_vector()?;
                self.expect(Tok::RBracket, &["']'", "','"])?;
                self.expect(Tok::LParen, &["'('"])?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, &["')'"])?;
                Ok(if name == "pull" {
                    Expr::Pull(w, Box::new(inner))
                } else {
                    Expr::Push(w, Box::new(inner))
                })
            }
            "chi" => {
                self.expect(Tok::Star, &["'*'"])?;
                self.expect(Tok::LBracket, &["'['"])?;
                let split = self.rational_list()?;
                self.expect(Tok::RBracket, &["']'", "','"])?;
                self.expect(Tok::LParen, &["'('"])?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, &["')'"])?;
                Ok(Expr::Chi(split, Box::new(inner)))
            }
            other => Err(diag(
                self.offset(),
                format!("unknown name {other:?}"),
                &[
                    "psi", "bd", "coinc", "nodal", "Psi", "Dnodal", "Ds", "Dr", "Delta",
                    "kappa", "lambda", "A", "B", "C", "Ctot", "K", "Lup", "git", "pull",
                    "push", "chi",
                ],
            )),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, Diagnostic> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0 };
    let expr = parser.expr()?;
    if *parser.peek() != Tok::Eof {
        return Err(diag(
            parser.offset(),
            format!("trailing input: found {}", parser.peek().describe()),
            &["'+'", "'-'", "end of input"],
        ));
    }
    Ok(expr)
}

/// Evaluation failure: a name that does not resolve on the ambient space, a
/// space mismatch under a transport wrapper, or a core-level error.
#[derive(Clone, Debug)]
pub struct EvalError(pub String);

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<wstab::Error> for EvalError {
    fn from(e: wstab::Error) -> Self {
        EvalError(e.to_string())
    }
}

fn expect_moduli_bar(ambient: &SpaceTag, what: &str) -> Result<usize, EvalError> {
    match ambient {
        SpaceTag::ModuliBar { n } => Ok(*n),
        other => Err(EvalError(format!(
            "{what} produces a class on M0bar(n); the ambient space is {other}"
        ))),
    }
}

/// Evaluates an expression on the ambient space, collecting the structured
/// warnings emitted by aggregate-style constructors.
pub fn eval(
    expr: &Expr,
    ambient: &SpaceTag,
) -> Result<(DivisorClass, Vec<String>), EvalError> {
    let n = ambient.n();
    match expr {
        Expr::Sum(a, b) => {
            let (ca, mut wa) = eval(a, ambient)?;
            let (cb, wb) = eval(b, ambient)?;
            wa.extend(wb);
            Ok((ca.add(&cb)?, wa))
        }
        Expr::Diff(a, b) => {
            let (ca, mut wa) = eval(a, ambient)?;
            let (cb, wb) = eval(b, ambient)?;
            wa.extend(wb);
            Ok((ca.sub(&cb)?, wa))
        }
        Expr::Neg(a) => {
            let (c, w) = eval(a, ambient)?;
            Ok((c.neg(), w))
        }
        Expr::Scale(r, a) => {
            let (c, w) = eval(a, ambient)?;
            Ok((c.scale(r), w))
        }
        Expr::Psi(i) => {
            if *i > n {
                return Err(EvalError(format!(
                    "index {i} out of range 1..={n} for psi on {ambient}"
                )));
            }
            Ok((
                DivisorClass::from_terms(ambient.clone(), [(Generator::Psi(*i), rat_int(1))])?,
                vec![],
            ))
        }
        Expr::Bd(members) => {
            expect_moduli_bar(ambient, "bd(..)")?;
            let s = MarkedSubset::new(n, members)?;
            Ok((
                DivisorClass::from_terms(
                    ambient.clone(),
                    [(Generator::Boundary(s), rat_int(1))],
                )?,
                vec![],
            ))
        }
        Expr::Coinc(i, j) => {
            let gen = Generator::coincidence(*i, *j)?;
            Ok((
                DivisorClass::from_terms(ambient.clone(), [(gen, rat_int(1))])?,
                vec![],
            ))
        }
        Expr::Nodal(members) => {
            let s = MarkedSubset::new(n, members)?;
            Ok((
                DivisorClass::from_terms(ambient.clone(), [(Generator::Nodal(s), rat_int(1))])?,
                vec![],
            ))
        }
        Expr::Aggregate(agg) => Ok((expand_aggregate(ambient, *agg)?, vec![])),
        Expr::K => Ok((divisors::class_k(ambient)?, vec![])),
        Expr::A(w) => wrap_named(divisors::class_a(ambient, w)?),
        Expr::B(w) => wrap_named(divisors::class_b(ambient, w)?),
        Expr::C(i, w) => wrap_named(divisors::class_c(ambient, w, *i)?),
        Expr::Ctot(w) => wrap_named(divisors::class_c_total(ambient, w)?),
        Expr::Lup(w) => {
            let n = expect_moduli_bar(ambient, "Lup(w)")?;
            Ok((divisors::log_canonical_upstairs(n, w)?, vec![]))
        }
        Expr::Git(x) => {
            let n = expect_moduli_bar(ambient, "git(x)")?;
            let gw = GitWeights::new(x.clone())?;
            if gw.n() != n {
                return Err(EvalError(format!(
                    "git weights have {} entries, ambient space is M0bar({n})",
                    gw.n()
                )));
            }
            Ok((divisors::git_polarization_pullback(&gw)?, vec![]))
        }
        Expr::Pull(w, inner) => {
            let n = expect_moduli_bar(ambient, "pull[w](..)")?;
            if w.n() != n {
                return Err(EvalError(format!(
                    "pull weights have {} entries, ambient space is M0bar({n})",
                    w.n()
                )));
            }
            let f = ReductionMap::new(n, w.clone())?;
            let (c, warnings) = eval(inner, &f.target_space())?;
            Ok((morphisms::pullback(&f, &c)?, warnings))
        }
        Expr::Push(w, inner) => {
            match ambient {
                SpaceTag::Hassett { weights } if weights == w => {}
                other => {
                    return Err(EvalError(format!(
                        "push[{w}](..) produces a class on Hassett({w}); the ambient space is {other}"
                    )))
                }
            }
            let f = ReductionMap::new(w.n(), w.clone())?;
            let (c, warnings) = eval(inner, &f.source_space())?;
            Ok((morphisms::pushforward(&f, &c)?, warnings))
        }
        Expr::Chi(split, inner) => {
            let source = match ambient {
                SpaceTag::Hassett { weights } => weights.clone(),
                other => {
                    return Err(EvalError(format!(
                        "chi*[split](..) needs a weighted ambient space, got {other}"
                    )))
                }
            };
            let r = ReplacementData::new(source, split.clone())?;
            let (c, warnings) = eval(inner, &r.target_space())?;
            Ok((morphisms::replacement_pullback(&r, &c)?, warnings))
        }
    }
}

fn wrap_named(
    (class, warnings): (DivisorClass, Vec<divisors::Warning>),
) -> Result<(DivisorClass, Vec<String>), EvalError> {
    Ok((class, warnings.iter().map(|w| w.to_string()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use wstab::rat;

    #[test]
    fn parses_scalar_juxtaposition() {
        let e = parse("2Dnodal - Psi").unwrap();
        assert_eq!(
            e,
            Expr::Diff(
                Box::new(Expr::Scale(
                    rat_int(2),
                    Box::new(Expr::Aggregate(Aggregate::DeltaNodal))
                )),
                Box::new(Expr::Aggregate(Aggregate::PsiTotal))
            )
        );
    }

    #[test]
    fn parse_print_round_trip() {
        for text in [
            "2*Dnodal - Psi",
            "psi(3) + bd({1,2}) - 1/2*coinc(3,4)",
            "A(1/2,1/2,1/2,1/2,1/2,1/2)",
            "C(2,1/3,1/3,1/3,1/3,1/3,1/3)",
            "pull[1,1,1/2,1/2](Psi + Ds)",
            "chi*[1/4,1/4](A(1/4,1/4,1/2,1/2,1/2,1/2,1/2))",
            "-(Psi - Delta) + 3/2*K",
            "git(2/5,2/5,2/5,2/5,2/5)",
            "Dr(2) + lambda - kappa",
            "push[1,1,1/10,1/10,1/10](Delta)",
        ] {
            let ast = parse(text).unwrap();
            let printed = ast.to_string();
            let reparsed = parse(&printed).unwrap();
            assert_eq!(ast, reparsed, "{text} -> {printed}");
        }
    }

    #[test]
    fn zero_index_is_rejected_with_offset() {
        let err = parse("psi(0)").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.message.contains("1-based"));
    }

    #[test]
    fn unknown_name_reports_expected_set() {
        let err = parse("Q + Psi").unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(err.expected.contains(&"Psi".to_string()));
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        let err = parse("Psi Psi").unwrap_err();
        assert!(err.message.contains("trailing"));
    }

    #[test]
    fn eval_index_out_of_range() {
        let ambient = SpaceTag::moduli_bar(5).unwrap();
        let e = parse("psi(6)").unwrap();
        let err = eval(&e, &ambient).unwrap_err();
        assert!(err.0.contains("out of range"));
    }

    #[test]
    fn eval_simple_class() {
        let ambient = SpaceTag::moduli_bar(5).unwrap();
        let (c, warnings) = eval(&parse("2Dnodal - Psi").unwrap(), &ambient).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(c.coeff(&Generator::Psi(1)), rat_int(-1));
        let s = MarkedSubset::new(5, &[1, 2]).unwrap();
        assert_eq!(c.coeff(&Generator::Boundary(s)), rat_int(2));
    }

    #[test]
    fn eval_collects_warnings() {
        let ambient = SpaceTag::hassett(
            WeightVector::new(vec![
                rat(1, 1),
                rat(1, 1),
                rat(1, 1),
                rat(3, 4),
                rat(3, 4),
            ])
            .unwrap(),
        )
        .unwrap();
        let formal = "A(1/2,1/2,1,1,1)";
        let (_, warnings) = eval(&parse(formal).unwrap(), &ambient).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("coinc(1,2)"));
    }

    #[test]
    fn eval_transport_wrappers() {
        let ambient = SpaceTag::moduli_bar(4).unwrap();
        let (c, _) = eval(
            &parse("pull[1,1,1/2,1/2](psi(3))").unwrap(),
            &ambient,
        )
        .unwrap();
        assert_eq!(c.coeff(&Generator::Psi(3)), rat_int(1));
        let s = MarkedSubset::new(4, &[3, 4]).unwrap();
        assert_eq!(c.coeff(&Generator::Boundary(s)), rat_int(-1));

        // push needs the matching weighted ambient.
        let err = eval(&parse("push[1,1,1/2,1/2](Psi)").unwrap(), &ambient).unwrap_err();
        assert!(err.0.contains("ambient"));
    }

    #[test]
    fn eval_rejects_generators_foreign_to_the_space() {
        let ambient = SpaceTag::moduli_bar(5).unwrap();
        assert!(eval(&parse("coinc(1,2)").unwrap(), &ambient).is_err());
        let weighted = SpaceTag::hassett(
            WeightVector::new(vec![rat(1, 2); 6]).unwrap(),
        )
        .unwrap();
        assert!(eval(&parse("bd({1,2})").unwrap(), &weighted).is_err());
    }
}
