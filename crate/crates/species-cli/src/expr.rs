//! The species expression language: lexing, parsing, canonical printing,
//! and evaluation to a carrier species with whatever structure the shape
//! of the expression supports.
//!
//! Grammar, loosest to tightest binding (every operator left-associative):
//!
//! ```text
//! sum      := cauchy ('+' cauchy)*
//! cauchy   := hadamard ('.' hadamard)*
//! hadamard := subst ('*' subst)*
//! subst    := primary ('o' primary)*
//! primary  := atom
//!           | 'T' '[' sum ']' '(' sum ')'
//!           | 'R' '{' int '}' '[' sum ',' sum ']' '(' sum ',' sum ')'
//!           | 'trunc' '(' sum ',' cmp ',' int ')'
//!           | '(' sum ')'
//! atom     := 'One' | 'E' | 'E+' | 'L' | 'L+' | 'G' | 'G+' | 'cyc'
//!           | 'Pos' | 'Pos+' | 'Pi'
//! cmp      := 'eq' | 'below' | 'atleast'
//! ```
//!
//! A `+` forms a positive-part atom only when it touches the name
//! (`E+`); separated by whitespace it is the sum operator, so `E + G`
//! is a sum while `E+G` is a parse error.

use std::fmt;

use hopf_species::structures::DEFAULT_CERT_BOUND;
use hopf_species::zoo::{ZooKind, ZooMap};
use hopf_species::{
    Bimonoid, BimonoidOps, Comonoid, ComonoidOps, Error as LibError, LinComb, Morphism, RTee,
    Species, Term, Trunc,
};

/// A parse failure, anchored to the byte where the input stopped making
/// sense.
#[derive(Debug)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)
    }
}

/// An evaluation failure. `Hypothesis` means a construction refused
/// because a certificate it names could not be established; everything
/// else is a usage error.
#[derive(Debug)]
pub enum EvalError {
    Hypothesis { offset: usize, message: String },
    Usage { offset: usize, message: String },
}

impl EvalError {
    fn from_lib(e: LibError, offset: usize) -> EvalError {
        match e {
            e @ LibError::MissingHypothesis { .. } => EvalError::Hypothesis {
                offset,
                message: e.to_string(),
            },
            e => EvalError::Usage {
                offset,
                message: e.to_string(),
            },
        }
    }

    /// 1 for a refused construction, 2 for a usage error.
    pub fn exit_code(&self) -> u8 {
        match self {
            EvalError::Hypothesis { .. } => 1,
            EvalError::Usage { .. } => 2,
        }
    }
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Hypothesis { offset, message } => {
                write!(f, "construction refused at byte {offset}: {message}")
            }
            EvalError::Usage { offset, message } => {
                write!(f, "error at byte {offset}: {message}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    One,
    E,
    EPlus,
    L,
    LPlus,
    G,
    GPlus,
    Cyc,
    Pos,
    PosPlus,
    Pi,
}

impl Atom {
    pub fn name(&self) -> &'static str {
        match self {
            Atom::One => "One",
            Atom::E => "E",
            Atom::EPlus => "E+",
            Atom::L => "L",
            Atom::LPlus => "L+",
            Atom::G => "G",
            Atom::GPlus => "G+",
            Atom::Cyc => "cyc",
            Atom::Pos => "Pos",
            Atom::PosPlus => "Pos+",
            Atom::Pi => "Pi",
        }
    }

    fn from_name(name: &str) -> Option<Atom> {
        Some(match name {
            "One" => Atom::One,
            "E" => Atom::E,
            "E+" => Atom::EPlus,
            "L" => Atom::L,
            "L+" => Atom::LPlus,
            "G" => Atom::G,
            "G+" => Atom::GPlus,
            "cyc" => Atom::Cyc,
            "Pos" => Atom::Pos,
            "Pos+" => Atom::PosPlus,
            "Pi" => Atom::Pi,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Below,
    AtLeast,
}

impl Cmp {
    pub fn name(&self) -> &'static str {
        match self {
            Cmp::Eq => "eq",
            Cmp::Below => "below",
            Cmp::AtLeast => "atleast",
        }
    }
}

#[derive(Debug)]
pub enum ExprKind {
    Atom(Atom),
    Sum(Box<Expr>, Box<Expr>),
    Cauchy(Box<Expr>, Box<Expr>),
    Hadamard(Box<Expr>, Box<Expr>),
    Subst(Box<Expr>, Box<Expr>),
    Tee(Box<Expr>, Box<Expr>),
    Interp {
        r: usize,
        b: Box<Expr>,
        d: Box<Expr>,
        p: Box<Expr>,
        q: Box<Expr>,
    },
    Trunc(Box<Expr>, Cmp, usize),
}

/// A parsed expression node and the byte offset where it starts.
#[derive(Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub offset: usize,
}

impl Expr {
    /// Binding strength; higher binds tighter. Primaries are 4.
    fn prec(&self) -> u8 {
        match self.kind {
            ExprKind::Sum(..) => 0,
            ExprKind::Cauchy(..) => 1,
            ExprKind::Hadamard(..) => 2,
            ExprKind::Subst(..) => 3,
            _ => 4,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parent: u8, right: bool) -> fmt::Result {
        let needs = self.prec() < parent || (right && self.prec() == parent);
        if needs {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Atom(a) => f.write_str(a.name()),
            ExprKind::Sum(l, r)
            | ExprKind::Cauchy(l, r)
            | ExprKind::Hadamard(l, r)
            | ExprKind::Subst(l, r) => {
                let op = match self.kind {
                    ExprKind::Sum(..) => '+',
                    ExprKind::Cauchy(..) => '.',
                    ExprKind::Hadamard(..) => '*',
                    _ => 'o',
                };
                l.fmt_child(f, self.prec(), false)?;
                write!(f, " {op} ")?;
                r.fmt_child(f, self.prec(), true)
            }
            ExprKind::Tee(b, p) => write!(f, "T[{b}]({p})"),
            ExprKind::Interp { r, b, d, p, q } => write!(f, "R{{{r}}}[{b},{d}]({p},{q})"),
            ExprKind::Trunc(e, cmp, n) => write!(f, "trunc({e}, {}, {n})", cmp.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    Plus,
    Star,
    Dot,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(n) => format!("number {n}"),
            Tok::Plus => "'+'".into(),
            Tok::Star => "'*'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Comma => "','".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    offset: usize,
}

/// Names whose positive part is written with an attached '+'.
const PLUSSABLE: [&str; 4] = ["E", "L", "G", "Pos"];

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let offset = i;
        let tok = match bytes[i] {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => {
                i += 1;
                Tok::Plus
            }
            b'*' => {
                i += 1;
                Tok::Star
            }
            b'.' => {
                i += 1;
                Tok::Dot
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'[' => {
                i += 1;
                Tok::LBracket
            }
            b']' => {
                i += 1;
                Tok::RBracket
            }
            b'{' => {
                i += 1;
                Tok::LBrace
            }
            b'}' => {
                i += 1;
                Tok::RBrace
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = src[offset..i].parse::<usize>().map_err(|_| ParseError {
                    offset,
                    message: format!("number {} is out of range", &src[offset..i]),
                })?;
                Tok::Int(n)
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let mut name = src[offset..i].to_string();
                // an attached '+' belongs to the atom, never to a sum
                if i < bytes.len() && bytes[i] == b'+' && PLUSSABLE.contains(&name.as_str()) {
                    name.push('+');
                    i += 1;
                }
                Tok::Ident(name)
            }
            _ => {
                let c = src[i..].chars().next().unwrap();
                return Err(ParseError {
                    offset,
                    message: format!("unexpected character {c:?}"),
                });
            }
        };
        out.push(Spanned { tok, offset });
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Spanned>,
    pos: usize,
}

/// Parses an expression, requiring the whole input to be consumed.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let e = p.sum()?;
    if let Some(s) = p.peek() {
        let mut message = format!("expected an operator, found {}", s.tok.describe());
        // "E+G": the positive atom swallowed the '+', leaving G dangling
        if p.pos > 0 {
            if let Tok::Ident(prev) = &p.toks[p.pos - 1].tok {
                if prev.ends_with('+') {
                    let base = &prev[..prev.len() - 1];
                    message.push_str(&format!(
                        " ('{prev}' is the positive part of '{base}'; write '{base} + ...' with spaces for a sum)"
                    ));
                }
            }
        }
        return Err(ParseError {
            offset: s.offset,
            message,
        });
    }
    Ok(e)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn eof_offset(&self) -> usize {
        self.src.len()
    }

    fn expect(&mut self, want: Tok, context: &str) -> Result<usize, ParseError> {
        match self.peek() {
            Some(s) if s.tok == want => {
                let offset = s.offset;
                self.pos += 1;
                Ok(offset)
            }
            Some(s) => Err(ParseError {
                offset: s.offset,
                message: format!(
                    "expected {} {context}, found {}",
                    want.describe(),
                    s.tok.describe()
                ),
            }),
            None => Err(ParseError {
                offset: self.eof_offset(),
                message: format!("expected {} {context}, found end of input", want.describe()),
            }),
        }
    }

    fn expect_int(&mut self, context: &str) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Spanned {
                tok: Tok::Int(n),
                ..
            }) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            Some(s) => Err(ParseError {
                offset: s.offset,
                message: format!("expected a number {context}, found {}", s.tok.describe()),
            }),
            None => Err(ParseError {
                offset: self.eof_offset(),
                message: format!("expected a number {context}, found end of input"),
            }),
        }
    }

    fn binary<F>(&mut self, op: Tok, next: F, build: fn(Box<Expr>, Box<Expr>) -> ExprKind) -> Result<Expr, ParseError>
    where
        F: Fn(&mut Self) -> Result<Expr, ParseError>,
    {
        let mut lhs = next(self)?;
        while self.peek().is_some_and(|s| s.tok == op) {
            self.pos += 1;
            let rhs = next(self)?;
            let offset = lhs.offset;
            lhs = Expr {
                kind: build(Box::new(lhs), Box::new(rhs)),
                offset,
            };
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        self.binary(Tok::Plus, |p| p.cauchy(), ExprKind::Sum)
    }

    fn cauchy(&mut self) -> Result<Expr, ParseError> {
        self.binary(Tok::Dot, |p| p.hadamard(), ExprKind::Cauchy)
    }

    fn hadamard(&mut self) -> Result<Expr, ParseError> {
        self.binary(Tok::Star, |p| p.subst(), ExprKind::Hadamard)
    }

    fn subst(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.primary()?;
        while self
            .peek()
            .is_some_and(|s| matches!(&s.tok, Tok::Ident(name) if name == "o"))
        {
            self.pos += 1;
            let rhs = self.primary()?;
            let offset = lhs.offset;
            lhs = Expr {
                kind: ExprKind::Subst(Box::new(lhs), Box::new(rhs)),
                offset,
            };
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let Some(s) = self.peek() else {
            return Err(ParseError {
                offset: self.eof_offset(),
                message: "expected an expression, found end of input".into(),
            });
        };
        let offset = s.offset;
        match &s.tok {
            Tok::LParen => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(Tok::RParen, "to close the parenthesis")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let name = name.clone();
                self.pos += 1;
                match name.as_str() {
                    "T" => {
                        self.expect(Tok::LBracket, "after 'T'")?;
                        let b = self.sum()?;
                        self.expect(Tok::RBracket, "after the outer bimonoid")?;
                        self.expect(Tok::LParen, "before the inner comonoid")?;
                        let p = self.sum()?;
                        self.expect(Tok::RParen, "to close 'T[...](...)'")?;
                        Ok(Expr {
                            kind: ExprKind::Tee(Box::new(b), Box::new(p)),
                            offset,
                        })
                    }
                    "R" => {
                        self.expect(Tok::LBrace, "after 'R'")?;
                        let r = self.expect_int("as the threshold")?;
                        self.expect(Tok::RBrace, "after the threshold")?;
                        self.expect(Tok::LBracket, "before the outer pair")?;
                        let b = self.sum()?;
                        self.expect(Tok::Comma, "between the outer bimonoids")?;
                        let d = self.sum()?;
                        self.expect(Tok::RBracket, "after the outer pair")?;
                        self.expect(Tok::LParen, "before the inner pair")?;
                        let p = self.sum()?;
                        self.expect(Tok::Comma, "between the inner comonoids")?;
                        let q = self.sum()?;
                        self.expect(Tok::RParen, "to close 'R{...}[...](...)'")?;
                        Ok(Expr {
                            kind: ExprKind::Interp {
                                r,
                                b: Box::new(b),
                                d: Box::new(d),
                                p: Box::new(p),
                                q: Box::new(q),
                            },
                            offset,
                        })
                    }
                    "trunc" => {
                        self.expect(Tok::LParen, "after 'trunc'")?;
                        let e = self.sum()?;
                        self.expect(Tok::Comma, "after the truncated expression")?;
                        let cmp = self.cmp_word()?;
                        self.expect(Tok::Comma, "after the comparison")?;
                        let n = self.expect_int("as the degree bound")?;
                        self.expect(Tok::RParen, "to close 'trunc(...)'")?;
                        Ok(Expr {
                            kind: ExprKind::Trunc(Box::new(e), cmp, n),
                            offset,
                        })
                    }
                    _ => match Atom::from_name(&name) {
                        Some(a) => Ok(Expr {
                            kind: ExprKind::Atom(a),
                            offset,
                        }),
                        None => Err(ParseError {
                            offset,
                            message: format!(
                                "unknown name '{name}' (atoms: One, E, E+, L, L+, G, G+, cyc, Pos, Pos+, Pi)"
                            ),
                        }),
                    },
                }
            }
            tok => Err(ParseError {
                offset,
                message: format!("expected an expression, found {}", tok.describe()),
            }),
        }
    }

    fn cmp_word(&mut self) -> Result<Cmp, ParseError> {
        match self.peek() {
            Some(Spanned {
                tok: Tok::Ident(w),
                offset,
            }) => {
                let cmp = match w.as_str() {
                    "eq" => Cmp::Eq,
                    "below" => Cmp::Below,
                    "atleast" => Cmp::AtLeast,
                    _ => {
                        return Err(ParseError {
                            offset: *offset,
                            message: format!(
                                "unknown comparison '{w}' (one of: eq, below, atleast)"
                            ),
                        })
                    }
                };
                self.pos += 1;
                Ok(cmp)
            }
            Some(s) => Err(ParseError {
                offset: s.offset,
                message: format!(
                    "expected a comparison (eq, below, atleast), found {}",
                    s.tok.describe()
                ),
            }),
            None => Err(ParseError {
                offset: self.eof_offset(),
                message: "expected a comparison (eq, below, atleast), found end of input".into(),
            }),
        }
    }
}

/// The structure an expression carries on top of its species, determined
/// by its shape.
pub enum Structured {
    Plain,
    Co(Comonoid),
    Bi(Bimonoid),
    Quotient(Box<RTee>),
}

/// A fully evaluated expression: the carrier species plus structure.
pub struct Evaluated {
    pub species: Species,
    pub structure: Structured,
}

impl Evaluated {
    pub fn comonoid_ops(&self) -> Option<&dyn ComonoidOps> {
        match &self.structure {
            Structured::Co(c) => Some(c),
            Structured::Bi(b) => Some(b),
            Structured::Quotient(q) => Some(&**q),
            Structured::Plain => None,
        }
    }

    pub fn bimonoid_ops(&self) -> Option<&dyn BimonoidOps> {
        match &self.structure {
            Structured::Bi(b) => Some(b),
            Structured::Quotient(q) => Some(&**q),
            _ => None,
        }
    }
}

fn bi(b: Bimonoid) -> Evaluated {
    Evaluated {
        species: b.carrier(),
        structure: Structured::Bi(b),
    }
}

fn co(c: Comonoid) -> Evaluated {
    Evaluated {
        species: c.carrier(),
        structure: Structured::Co(c),
    }
}

fn positive(kind: ZooKind) -> Comonoid {
    Comonoid::positive(Bimonoid::zoo(kind))
}

/// G₊ → E₊: wipe the edges, keep the vertex set.
fn forget_edges() -> Morphism {
    Morphism::from_fn(
        "forget_edges",
        Species::G.positive(),
        Species::E.positive(),
        |t| {
            let Term::Graph(g) = t else {
                return Err(LibError::Domain(format!(
                    "forget_edges expects a graph, got {t}"
                )));
            };
            Ok(LinComb::unit(Term::Star(g.vertices.clone())))
        },
    )
}

/// The structure-shrinking pairs (τ, θ) registered for `R{r}[b,d](p,q)`.
fn interp_maps(b: Atom, d: Atom, p: Atom, q: Atom) -> Option<(Morphism, Morphism)> {
    match (b, d, p, q) {
        (Atom::G, Atom::E, Atom::LPlus, Atom::Cyc) => Some((
            Morphism::zoo(ZooMap::TauGE),
            Morphism::zoo(ZooMap::ThetaLCyc),
        )),
        (Atom::L, Atom::E, Atom::GPlus, Atom::EPlus) => {
            Some((Morphism::zoo(ZooMap::TauLE), forget_edges()))
        }
        _ => None,
    }
}

const INTERP_HINT: &str =
    "the registered pairs are R{r}[G,E](L+,cyc) and R{r}[L,E](G+,E+)";

impl Expr {
    /// Evaluates to a species and the strongest structure the expression's
    /// shape supports. Certificates are checked up to the library default
    /// bound.
    pub fn eval(&self) -> Result<Evaluated, EvalError> {
        match &self.kind {
            ExprKind::Atom(a) => Ok(match a {
                Atom::One => Evaluated {
                    species: Species::One,
                    structure: Structured::Plain,
                },
                Atom::E => bi(Bimonoid::zoo(ZooKind::E)),
                Atom::L => bi(Bimonoid::zoo(ZooKind::L)),
                Atom::G => bi(Bimonoid::zoo(ZooKind::G)),
                Atom::Pos => bi(Bimonoid::zoo(ZooKind::Poset)),
                Atom::EPlus => co(positive(ZooKind::E)),
                Atom::LPlus => co(positive(ZooKind::L)),
                Atom::GPlus => co(positive(ZooKind::G)),
                Atom::PosPlus => co(positive(ZooKind::Poset)),
                Atom::Cyc => co(Comonoid::cyc()),
                Atom::Pi => {
                    let t = Bimonoid::tee(
                        Bimonoid::zoo(ZooKind::E),
                        positive(ZooKind::E),
                        DEFAULT_CERT_BOUND,
                    )
                    .map_err(|e| EvalError::from_lib(e, self.offset))?;
                    bi(t)
                }
            }),
            ExprKind::Sum(l, r) => {
                let (le, re) = (l.eval()?, r.eval()?);
                Ok(Evaluated {
                    species: Species::Sum(Box::new(le.species), Box::new(re.species)),
                    structure: Structured::Plain,
                })
            }
            ExprKind::Hadamard(l, r) => {
                let (le, re) = (l.eval()?, r.eval()?);
                Ok(Evaluated {
                    species: Species::Hadamard(Box::new(le.species), Box::new(re.species)),
                    structure: Structured::Plain,
                })
            }
            ExprKind::Cauchy(l, r) => {
                let (le, re) = (l.eval()?, r.eval()?);
                let structure = match (le.structure, re.structure) {
                    (Structured::Bi(a), Structured::Bi(b)) => {
                        Structured::Bi(Bimonoid::cauchy(a, b))
                    }
                    _ => Structured::Plain,
                };
                Ok(Evaluated {
                    species: Species::Cauchy(Box::new(le.species), Box::new(re.species)),
                    structure,
                })
            }
            ExprKind::Subst(l, r) => {
                let (le, re) = (l.eval()?, r.eval()?);
                let species = Species::substitute(le.species, re.species).map_err(|e| {
                    EvalError::Usage {
                        offset: r.offset,
                        message: format!("the inner operand of 'o' at byte {}: {e}", r.offset),
                    }
                })?;
                let structure = match (le.structure, re.structure) {
                    (Structured::Bi(b), Structured::Co(p)) => Structured::Bi(
                        Bimonoid::tee(b, p, DEFAULT_CERT_BOUND)
                            .map_err(|e| EvalError::from_lib(e, self.offset))?,
                    ),
                    (Structured::Co(outer), Structured::Co(inner)) => Structured::Co(
                        Comonoid::compose(outer, inner, DEFAULT_CERT_BOUND)
                            .map_err(|e| EvalError::from_lib(e, self.offset))?,
                    ),
                    _ => Structured::Plain,
                };
                Ok(Evaluated { species, structure })
            }
            ExprKind::Tee(b, p) => {
                let (be, pe) = (b.eval()?, p.eval()?);
                let Structured::Bi(bb) = be.structure else {
                    return Err(EvalError::Usage {
                        offset: b.offset,
                        message: "T[b](p) needs a bimonoid in the brackets \
                                  (E, L, G, Pos, Pi, a Cauchy product of bimonoids, or another T)"
                            .into(),
                    });
                };
                let Structured::Co(pp) = pe.structure else {
                    return Err(EvalError::Usage {
                        offset: p.offset,
                        message: "T[b](p) needs a positive comonoid argument \
                                  (E+, L+, G+, Pos+, cyc, or trunc(c, below, n))"
                            .into(),
                    });
                };
                let t = Bimonoid::tee(bb, pp, DEFAULT_CERT_BOUND)
                    .map_err(|e| EvalError::from_lib(e, self.offset))?;
                Ok(bi(t))
            }
            ExprKind::Interp { r, b, d, p, q } => {
                let atoms = match (&b.kind, &d.kind, &p.kind, &q.kind) {
                    (
                        ExprKind::Atom(ab),
                        ExprKind::Atom(ad),
                        ExprKind::Atom(ap),
                        ExprKind::Atom(aq),
                    ) => Some((*ab, *ad, *ap, *aq)),
                    _ => None,
                };
                let Some((ab, ad, ap, aq)) = atoms else {
                    return Err(EvalError::Usage {
                        offset: self.offset,
                        message: format!("R{{r}}[b,d](p,q) takes species atoms; {INTERP_HINT}"),
                    });
                };
                let Some((tau, theta)) = interp_maps(ab, ad, ap, aq) else {
                    return Err(EvalError::Usage {
                        offset: self.offset,
                        message: format!(
                            "no structure-shrinking pair (τ, θ) is registered for \
                             [{},{}]({},{}); {INTERP_HINT}",
                            ab.name(),
                            ad.name(),
                            ap.name(),
                            aq.name()
                        ),
                    });
                };
                let (be, de, pe, qe) = (b.eval()?, d.eval()?, p.eval()?, q.eval()?);
                let (Structured::Bi(bb), Structured::Bi(dd)) = (be.structure, de.structure)
                else {
                    unreachable!("registered outer atoms are bimonoids");
                };
                let (Structured::Co(pp), Structured::Co(qq)) = (pe.structure, qe.structure)
                else {
                    unreachable!("registered inner atoms are comonoids");
                };
                let rt = RTee::new(*r, bb, dd, pp, qq, tau, theta, DEFAULT_CERT_BOUND)
                    .map_err(|e| EvalError::from_lib(e, self.offset))?;
                Ok(Evaluated {
                    species: rt.carrier(),
                    structure: Structured::Quotient(Box::new(rt)),
                })
            }
            ExprKind::Trunc(e, cmp, n) => {
                let ee = e.eval()?;
                let tr = match cmp {
                    Cmp::Eq => Trunc::Eq(*n),
                    Cmp::Below => Trunc::Below(*n),
                    Cmp::AtLeast => Trunc::AtLeast(*n),
                };
                let structure = match (cmp, ee.structure) {
                    (Cmp::Below, Structured::Co(c)) => {
                        Structured::Co(Comonoid::trunc_below(c, *n))
                    }
                    _ => Structured::Plain,
                };
                Ok(Evaluated {
                    species: Species::Truncate(Box::new(ee.species), tr),
                    structure,
                })
            }
        }
    }
}
