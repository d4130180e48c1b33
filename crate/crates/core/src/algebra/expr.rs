use super::element::{Element, LeavittAlgebra};
use super::scalar::parse_rational;
use super::AlgebraError;
use crate::quiver::{EdgeId, Quiver, VertexId};
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Parse tree for algebra expressions.
///
/// Grammar (spaces separate juxtaposed factors; star binds tightest, then
/// products, then unary minus, then sums):
///
/// ```text
/// expr   := '-'? term (('+' | '-') term)*
/// term   := scalar? factor+
/// factor := atom '*'*
/// atom   := IDENT | '(' expr ')'
/// scalar := INT ('/' INT)?
/// ```
///
/// Identifiers resolve to edges first, then vertices.
#[derive(Debug, Clone, PartialEq)]
pub enum LpaExpr {
    Vertex(VertexId),
    Edge(EdgeId),
    Ghost(EdgeId),
    Scalar(BigRational),
    Add(Box<LpaExpr>, Box<LpaExpr>),
    Sub(Box<LpaExpr>, Box<LpaExpr>),
    Mul(Box<LpaExpr>, Box<LpaExpr>),
    Star(Box<LpaExpr>),
}

impl LpaExpr {
    /// Star with the involution normalised away: starring twice is the
    /// identity, vertices are self-adjoint, and starred edges flip between
    /// the real and ghost literals.
    pub fn star(self) -> LpaExpr {
        match self {
            LpaExpr::Star(inner) => *inner,
            LpaExpr::Vertex(v) => LpaExpr::Vertex(v),
            LpaExpr::Edge(e) => LpaExpr::Ghost(e),
            LpaExpr::Ghost(e) => LpaExpr::Edge(e),
            LpaExpr::Scalar(s) => LpaExpr::Scalar(s),
            other => LpaExpr::Star(Box::new(other)),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at byte {position}")]
    UnexpectedChar { position: usize, ch: char },
    #[error("expected {expected} at byte {position}, found `{found}`")]
    UnexpectedToken {
        position: usize,
        expected: &'static str,
        found: String,
    },
    #[error("unexpected end of input; expected {expected}")]
    UnexpectedEnd { expected: &'static str },
    #[error("unknown identifier `{name}` at byte {position}: not an edge or vertex of the quiver")]
    UnknownIdentifier { position: usize, name: String },
    #[error("zero denominator in scalar at byte {position}")]
    ZeroDenominator { position: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push((Tok::Plus, pos));
            }
            '-' => {
                chars.next();
                out.push((Tok::Minus, pos));
            }
            '*' => {
                chars.next();
                out.push((Tok::Star, pos));
            }
            '/' => {
                chars.next();
                out.push((Tok::Slash, pos));
            }
            '(' => {
                chars.next();
                out.push((Tok::LParen, pos));
            }
            ')' => {
                chars.next();
                out.push((Tok::RParen, pos));
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Int(s), pos));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), pos));
            }
            c => return Err(ParseError::UnexpectedChar { position: pos, ch: c }),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    quiver: &'a Quiver,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<(), ParseError> {
        match self.bump() {
            Some((t, _)) if t == want => Ok(()),
            Some((t, position)) => Err(ParseError::UnexpectedToken {
                position,
                expected,
                found: t.describe(),
            }),
            None => Err(ParseError::UnexpectedEnd { expected }),
        }
    }

    fn expr(&mut self) -> Result<LpaExpr, ParseError> {
        let negated = matches!(self.peek(), Some((Tok::Minus, _)));
        if negated {
            self.bump();
        }
        let mut acc = self.term()?;
        if negated {
            acc = LpaExpr::Mul(
                Box::new(LpaExpr::Scalar(-BigRational::from(BigInt::from(1)))),
                Box::new(acc),
            );
        }
        loop {
            match self.peek() {
                Some((Tok::Plus, _)) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = LpaExpr::Add(Box::new(acc), Box::new(rhs));
                }
                Some((Tok::Minus, _)) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = LpaExpr::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LpaExpr, ParseError> {
        let scalar = self.scalar_opt()?;
        let mut factors = Vec::new();
        while matches!(self.peek(), Some((Tok::Ident(_), _)) | Some((Tok::LParen, _))) {
            factors.push(self.factor()?);
        }
        if factors.is_empty() {
            return match self.bump() {
                Some((t, position)) => Err(ParseError::UnexpectedToken {
                    position,
                    expected: "an identifier or `(`",
                    found: t.describe(),
                }),
                None => Err(ParseError::UnexpectedEnd {
                    expected: "an identifier or `(`",
                }),
            };
        }
        let mut acc = factors.remove(0);
        for f in factors {
            acc = LpaExpr::Mul(Box::new(acc), Box::new(f));
        }
        Ok(match scalar {
            Some(s) => LpaExpr::Mul(Box::new(LpaExpr::Scalar(s)), Box::new(acc)),
            None => acc,
        })
    }

    fn scalar_opt(&mut self) -> Result<Option<BigRational>, ParseError> {
        let Some((Tok::Int(_), _)) = self.peek() else {
            return Ok(None);
        };
        let Some((Tok::Int(num), position)) = self.bump() else {
            unreachable!()
        };
        let mut text = num;
        if let Some((Tok::Slash, _)) = self.peek() {
            self.bump();
            match self.bump() {
                Some((Tok::Int(den), _)) => {
                    text.push('/');
                    text.push_str(&den);
                }
                Some((t, position)) => {
                    return Err(ParseError::UnexpectedToken {
                        position,
                        expected: "a denominator",
                        found: t.describe(),
                    })
                }
                None => {
                    return Err(ParseError::UnexpectedEnd {
                        expected: "a denominator",
                    })
                }
            }
        }
        parse_rational(&text)
            .map(Some)
            .ok_or(ParseError::ZeroDenominator { position })
    }

    fn factor(&mut self) -> Result<LpaExpr, ParseError> {
        let mut atom = self.atom()?;
        while matches!(self.peek(), Some((Tok::Star, _))) {
            self.bump();
            atom = atom.star();
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<LpaExpr, ParseError> {
        match self.bump() {
            Some((Tok::Ident(name), position)) => {
                let id = EdgeId::new(name.clone());
                if self.quiver.edge(&id).is_ok() {
                    Ok(LpaExpr::Edge(id))
                } else if self.quiver.has_vertex(&VertexId::new(name.clone())) {
                    Ok(LpaExpr::Vertex(VertexId::new(name)))
                } else {
                    Err(ParseError::UnknownIdentifier { position, name })
                }
            }
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some((t, position)) => Err(ParseError::UnexpectedToken {
                position,
                expected: "an identifier or `(`",
                found: t.describe(),
            }),
            None => Err(ParseError::UnexpectedEnd {
                expected: "an identifier or `(`",
            }),
        }
    }
}

/// Parse an expression against a quiver's vertex and edge names.
pub fn parse(q: &Quiver, text: &str) -> Result<LpaExpr, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        quiver: q,
    };
    let expr = parser.expr()?;
    match parser.bump() {
        None => Ok(expr),
        Some((t, position)) => Err(ParseError::UnexpectedToken {
            position,
            expected: "end of input",
            found: t.describe(),
        }),
    }
}

enum Value {
    Scalar(BigRational),
    Elem(Element),
}

impl LeavittAlgebra {
    pub fn parse(&self, text: &str) -> Result<LpaExpr, AlgebraError> {
        Ok(parse(self.quiver(), text)?)
    }

    /// Evaluate a parse tree to an element over this algebra's field.
    pub fn eval(&self, expr: &LpaExpr) -> Result<Element, AlgebraError> {
        match self.eval_value(expr)? {
            Value::Elem(e) => Ok(e),
            Value::Scalar(_) => Err(AlgebraError::BareScalar),
        }
    }

    /// Parse and evaluate in one step.
    pub fn eval_str(&self, text: &str) -> Result<Element, AlgebraError> {
        let expr = self.parse(text)?;
        self.eval(&expr)
    }

    fn eval_value(&self, expr: &LpaExpr) -> Result<Value, AlgebraError> {
        Ok(match expr {
            LpaExpr::Vertex(v) => Value::Elem(self.vertex(v.clone())?),
            LpaExpr::Edge(e) => Value::Elem(self.edge(e.clone())?),
            LpaExpr::Ghost(e) => Value::Elem(self.ghost(e.clone())?),
            LpaExpr::Scalar(s) => Value::Scalar(s.clone()),
            LpaExpr::Add(a, b) => match (self.eval_value(a)?, self.eval_value(b)?) {
                (Value::Elem(x), Value::Elem(y)) => Value::Elem(x.add(&y)?),
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + y),
                _ => return Err(AlgebraError::ScalarElementSum),
            },
            LpaExpr::Sub(a, b) => match (self.eval_value(a)?, self.eval_value(b)?) {
                (Value::Elem(x), Value::Elem(y)) => Value::Elem(x.sub(&y)?),
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x - y),
                _ => return Err(AlgebraError::ScalarElementSum),
            },
            LpaExpr::Mul(a, b) => match (self.eval_value(a)?, self.eval_value(b)?) {
                (Value::Elem(x), Value::Elem(y)) => Value::Elem(x.mul(&y)?),
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
                (Value::Scalar(s), Value::Elem(e)) | (Value::Elem(e), Value::Scalar(s)) => {
                    Value::Elem(e.scale(&s)?)
                }
            },
            LpaExpr::Star(inner) => match self.eval_value(inner)? {
                Value::Elem(e) => Value::Elem(e.star()),
                Value::Scalar(s) => Value::Scalar(s),
            },
        })
    }
}
