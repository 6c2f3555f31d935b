//! Reader for defining functions, candidate integrals and points.
//!
//! Grammar:
//!
//! ```text
//! file    := ["dim" UINT] expr ["=" expr]
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := ("-" | "+") unary | power
//! power   := atom ["^" UINT]
//! atom    := NUMBER ["i"] | "i" | VAR | "(" expr ")"
//! VAR     := "z" K | "~z" K | "~w" K | "x" K | "y" K      (K >= 1)
//! ```
//!
//! `#` starts a comment. Numbers are integers or decimals and are read
//! exactly; `x_k` and `y_k` expand to `(z_k + ~z_k)/2` and `(z_k - ~z_k)/(2i)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ParseError;
use crate::poly::{BiPoly, GaussianRational, RationalFn, Slot};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Z,
    Conj,
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    ImagNum(BigRational),
    I,
    Var(VarKind, usize),
    Dim,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column: col, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    macro_rules! push {
        ($t:expr, $len:expr, $c:expr) => {{
            out.push(Token { tok: $t, line, col: $c });
            i += $len;
            col += $len;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let start_col = col;
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '+' => push!(Tok::Plus, 1, start_col),
            '-' => push!(Tok::Minus, 1, start_col),
            '*' => push!(Tok::Star, 1, start_col),
            '/' => push!(Tok::Slash, 1, start_col),
            '^' => push!(Tok::Caret, 1, start_col),
            '(' => push!(Tok::LParen, 1, start_col),
            ')' => push!(Tok::RParen, 1, start_col),
            '=' => push!(Tok::Eq, 1, start_col),
            c if c.is_ascii_digit() || c == '.' => {
                let s = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let lit: String = chars[s..i].iter().collect();
                let value = parse_decimal(&lit).ok_or_else(|| err(line, start_col, format!("bad number `{lit}`")))?;
                col += i - s;
                let imag = i < chars.len()
                    && chars[i] == 'i'
                    && !chars.get(i + 1).is_some_and(|c| c.is_ascii_alphanumeric());
                if imag {
                    i += 1;
                    col += 1;
                    out.push(Token { tok: Tok::ImagNum(value), line, col: start_col });
                } else {
                    out.push(Token { tok: Tok::Num(value), line, col: start_col });
                }
            }
            '~' | 'a'..='z' | 'A'..='Z' | '_' => {
                let s = i;
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[s..i].iter().collect();
                col += i - s;
                let tok = word_token(&word).ok_or_else(|| err(line, start_col, format!("unknown identifier `{word}`")))?;
                out.push(Token { tok, line, col: start_col });
            }
            other => return Err(err(line, start_col, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

fn parse_decimal(lit: &str) -> Option<BigRational> {
    let mut parts = lit.split('.');
    let int = parts.next()?;
    let frac = parts.next().unwrap_or("");
    if parts.next().is_some() || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    Some(BigRational::new(num, den))
}

fn word_token(word: &str) -> Option<Tok> {
    match word {
        "i" => return Some(Tok::I),
        "dim" => return Some(Tok::Dim),
        _ => {}
    }
    let (kind, rest) = if let Some(r) = word.strip_prefix("~z").or_else(|| word.strip_prefix("~w")) {
        (VarKind::Conj, r)
    } else if let Some(r) = word.strip_prefix('z') {
        (VarKind::Z, r)
    } else if let Some(r) = word.strip_prefix('x') {
        (VarKind::X, r)
    } else if let Some(r) = word.strip_prefix('y') {
        (VarKind::Y, r)
    } else {
        return None;
    };
    let k: usize = rest.parse().ok()?;
    (k >= 1).then_some(Tok::Var(kind, k))
}

#[derive(Clone, Debug)]
enum Node {
    Const(GaussianRational),
    Var(VarKind, usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>, usize, usize),
    Pow(Box<Node>, u32),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == want {
            Ok(())
        } else {
            Err(err(t.line, t.col, format!("expected {what}, found {}", describe(&t.tok))))
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    let t = self.next();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?), t.line, t.col);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        match self.peek().tok {
            Tok::Minus => {
                self.next();
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        match t.tok {
            Tok::Num(q) if q.is_integer() && q >= BigRational::zero() => {
                let e: u32 = q
                    .to_integer()
                    .try_into()
                    .map_err(|_| err(t.line, t.col, "exponent too large"))?;
                Ok(Node::Pow(Box::new(base), e))
            }
            _ => Err(err(t.line, t.col, "exponent must be a nonnegative integer literal")),
        }
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Num(q) => Ok(Node::Const(GaussianRational::from_real(q))),
            Tok::ImagNum(q) => Ok(Node::Const(GaussianRational::new(BigRational::zero(), q))),
            Tok::I => Ok(Node::Const(GaussianRational::i())),
            Tok::Var(kind, k) => Ok(Node::Var(kind, k)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            other => Err(err(t.line, t.col, format!("expected a term, found {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Eof => "end of input".into(),
        Tok::Num(q) => format!("number {q}"),
        Tok::ImagNum(q) => format!("number {q}i"),
        Tok::I => "`i`".into(),
        Tok::Var(..) => "a variable".into(),
        Tok::Dim => "`dim`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Eq => "`=`".into(),
    }
}

fn max_index(node: &Node) -> usize {
    match node {
        Node::Const(_) => 0,
        Node::Var(_, k) => *k,
        Node::Neg(a) | Node::Pow(a, _) => max_index(a),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b, ..) => max_index(a).max(max_index(b)),
    }
}

fn uses_real_coordinates(node: &Node) -> bool {
    match node {
        Node::Const(_) => false,
        Node::Var(kind, _) => matches!(kind, VarKind::X | VarKind::Y),
        Node::Neg(a) | Node::Pow(a, _) => uses_real_coordinates(a),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b, ..) => {
            uses_real_coordinates(a) || uses_real_coordinates(b)
        }
    }
}

fn eval(node: &Node, n: usize) -> Result<RationalFn, ParseError> {
    let half = GaussianRational::from_ratio(1, 2);
    Ok(match node {
        Node::Const(c) => RationalFn::polynomial(BiPoly::constant(n, c.clone())),
        Node::Var(kind, k) => {
            let z = BiPoly::slot(n, Slot::Z(k - 1));
            let zb = BiPoly::slot(n, Slot::Conj(k - 1));
            let p = match kind {
                VarKind::Z => z,
                VarKind::Conj => zb,
                VarKind::X => (&z + &zb).scale(&half),
                // (z - z̄)/(2i) = -i/2 (z - z̄)
                VarKind::Y => (&z - &zb).scale(&GaussianRational::from_parts((0, 1), (-1, 2))),
            };
            RationalFn::polynomial(p)
        }
        Node::Neg(a) => eval(a, n)?.neg(),
        Node::Add(a, b) => eval(a, n)?.add(&eval(b, n)?),
        Node::Sub(a, b) => eval(a, n)?.sub(&eval(b, n)?),
        Node::Mul(a, b) => eval(a, n)?.mul(&eval(b, n)?),
        Node::Div(a, b, line, col) => eval(a, n)?
            .div(&eval(b, n)?)
            .map_err(|_| err(*line, *col, "division by zero"))?,
        Node::Pow(a, e) => eval(a, n)?.pow(*e),
    })
}

/// A parsed expression whose dimension is fixed at evaluation time.
#[derive(Clone, Debug)]
pub struct Expression {
    root: Node,
    declared_dim: Option<usize>,
    max_index: usize,
    real_coordinates: bool,
}

impl Expression {
    /// Smallest dimension containing every variable, or the declared one.
    pub fn dim(&self) -> usize {
        self.declared_dim.unwrap_or(self.max_index).max(self.max_index).max(1)
    }

    pub fn uses_real_coordinates(&self) -> bool {
        self.real_coordinates
    }

    pub fn to_rational(&self, n: usize) -> Result<RationalFn, ParseError> {
        if n < self.max_index {
            return Err(err(1, 1, format!("expression uses z{} but dimension is {n}", self.max_index)));
        }
        eval(&self.root, n)
    }
}

/// Parse a file or flag value. A header `dim N` fixes the dimension; an
/// equation `lhs = rhs` is read as `lhs - rhs`.
pub fn parse_expression(text: &str) -> Result<Expression, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let mut declared_dim = None;
    if p.peek().tok == Tok::Dim {
        p.next();
        let t = p.next();
        match t.tok {
            Tok::Num(q) if q.is_integer() && q >= BigRational::one() => {
                declared_dim = Some(q.to_integer().try_into().map_err(|_| err(t.line, t.col, "dimension too large"))?);
            }
            _ => return Err(err(t.line, t.col, "`dim` expects a positive integer")),
        }
    }
    let mut root = p.expr()?;
    if p.peek().tok == Tok::Eq {
        p.next();
        let rhs = p.expr()?;
        root = Node::Sub(Box::new(root), Box::new(rhs));
    }
    let t = p.peek().clone();
    if t.tok != Tok::Eof {
        return Err(err(t.line, t.col, format!("unexpected {}", describe(&t.tok))));
    }
    Ok(Expression {
        max_index: max_index(&root),
        real_coordinates: uses_real_coordinates(&root),
        declared_dim,
        root,
    })
}

/// Parse a rational function of dimension `n` (or the inferred one).
pub fn parse_function(text: &str, n: Option<usize>) -> Result<RationalFn, ParseError> {
    let e = parse_expression(text)?;
    e.to_rational(n.unwrap_or_else(|| e.dim()))
}

/// Parse a comma-separated point such as `1+0.5i,-2`. Each coordinate must
/// be a constant expression.
pub fn parse_point(text: &str) -> Result<Vec<GaussianRational>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0usize;
    for part in text.split(',') {
        let e = parse_expression(part).map_err(|mut e| {
            e.column += offset;
            e
        })?;
        if e.max_index > 0 {
            return Err(err(1, offset + 1, "point coordinates must be constants"));
        }
        let v = e.to_rational(1)?;
        out.push(v.num.poly().constant_value().expect("constant"));
        offset += part.chars().count() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_and_real_coordinates() {
        let cone = parse_function("z1*~z1 - z2*~z2", None).unwrap();
        assert_eq!(cone.num.to_conj_string(), "z1*~z1 - z2*~z2");
        let same = parse_function("x1^2 + y1^2 - x2^2 - y2^2", None).unwrap();
        assert_eq!(same, cone);
    }

    #[test]
    fn positions_are_reported() {
        let e = parse_expression("z1 +\n  * z2").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_expression("z1 ^ z2").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        let e = parse_expression("q1").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
    }

    #[test]
    fn literals_and_comments() {
        let f = parse_function("# comment\n 0.25*z1 + 3i - 1/2 # trailing", Some(1)).unwrap();
        assert_eq!(f.num.to_conj_string(), "1/4*z1 - (1/2-3*i)");
        let p = parse_point("1+0.5i,-2").unwrap();
        assert_eq!(p, vec![GaussianRational::from_parts((1, 1), (1, 2)), GaussianRational::from_integer(-2)]);
        assert!(parse_point("z1,0").is_err());
    }

    #[test]
    fn dim_header_and_equations() {
        let e = parse_expression("dim 2\nz1*~z1 = 1").unwrap();
        assert_eq!(e.dim(), 2);
        assert_eq!(e.to_rational(2).unwrap().num.to_conj_string(), "z1*~z1 - 1");
    }

    #[test]
    fn division() {
        let f = parse_function("z1^3/z2 + z2^3/z1", None).unwrap();
        assert!(!f.is_polynomial());
        let g = parse_function("(z1^2 - z2^2)/(z1 - z2)", None).unwrap();
        assert_eq!(g.num.to_conj_string(), "z1 + z2");
        assert!(parse_function("z1/0", None).is_err());
    }
}
