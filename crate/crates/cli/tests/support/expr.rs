//! A small formula language evaluated on signed log-magnitude numbers, so
//! that quantities like `e^{40000}` stay finite.
//!
//! A script is a list of definitions, one per line:
//!
//! ```text
//! a_bar = if(r, a/2, a_tilde)
//! M_1(p) = 4*p*binom(p, floor(p/2)+1)*(1+2*b_bar+2*K^2)^p/min(1, a_bar)
//! ```
//!
//! Builtins: `sqrt exp ln floor min max binom fact if sum expsqint`.
//! `if(c, x, y)` and `sum(k, lo, hi, body)` evaluate lazily.

use std::collections::HashMap;
use std::rc::Rc;

/// `sign · e^{ln}`; zero has `ln = -∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num {
    pub negative: bool,
    pub ln: f64,
}

impl Num {
    pub const ZERO: Num = Num {
        negative: false,
        ln: f64::NEG_INFINITY,
    };

    pub fn of(x: f64) -> Num {
        assert!(!x.is_nan(), "NaN literal");
        Num {
            negative: x < 0.0,
            ln: x.abs().ln(),
        }
    }

    pub fn from_ln(ln: f64) -> Num {
        Num {
            negative: false,
            ln,
        }
    }

    pub fn is_zero(self) -> bool {
        self.ln == f64::NEG_INFINITY
    }

    pub fn value(self) -> f64 {
        let m = self.ln.exp();
        if self.negative {
            -m
        } else {
            m
        }
    }

    fn neg(self) -> Num {
        if self.is_zero() {
            self
        } else {
            Num {
                negative: !self.negative,
                ln: self.ln,
            }
        }
    }

    fn add(self, o: Num) -> Num {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.ln >= o.ln {
            (self, o)
        } else {
            (o, self)
        };
        if big.ln == f64::INFINITY {
            assert!(
                !(small.ln == f64::INFINITY && small.negative != big.negative),
                "inf - inf"
            );
            return big;
        }
        let t = (small.ln - big.ln).exp();
        if big.negative == small.negative {
            Num {
                negative: big.negative,
                ln: big.ln + t.ln_1p(),
            }
        } else if t == 1.0 {
            Num::ZERO
        } else {
            Num {
                negative: big.negative,
                ln: big.ln + (-t).ln_1p(),
            }
        }
    }

    fn mul(self, o: Num) -> Num {
        if self.is_zero() || o.is_zero() {
            assert!(self.ln != f64::INFINITY && o.ln != f64::INFINITY, "0 * inf");
            return Num::ZERO;
        }
        Num {
            negative: self.negative != o.negative,
            ln: self.ln + o.ln,
        }
    }

    fn recip(self) -> Num {
        Num {
            negative: self.negative,
            ln: -self.ln,
        }
    }

    fn pow(self, e: f64) -> Num {
        if e == 0.0 {
            return Num::of(1.0);
        }
        if self.is_zero() {
            return if e > 0.0 {
                Num::ZERO
            } else {
                Num::from_ln(f64::INFINITY)
            };
        }
        let odd_integer = e.fract() == 0.0 && (e.abs() % 2.0) == 1.0;
        if self.negative {
            assert!(e.fract() == 0.0, "negative base to a fractional power");
        }
        Num {
            negative: self.negative && odd_integer,
            ln: self.ln * e,
        }
    }

    fn cmp_value(self, o: Num) -> std::cmp::Ordering {
        let key = |n: Num| if n.negative { -n.ln.exp() } else { n.ln.exp() };
        match (self.negative, o.negative) {
            (false, false) => self.ln.total_cmp(&o.ln),
            (true, true) => o.ln.total_cmp(&self.ln),
            _ => key(self).total_cmp(&key(o)),
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Lit(f64),
    Var(String),
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(String, Vec<Node>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Id(String),
    Op(char),
}

fn lex(s: &str) -> Vec<Tok> {
    let c: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < c.len() {
        let ch = c[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < c.len()
                && (c[i].is_ascii_digit()
                    || c[i] == '.'
                    || c[i] == 'e'
                    || ((c[i] == '-' || c[i] == '+') && c[i - 1] == 'e'))
            {
                i += 1;
            }
            let text: String = c[start..i].iter().collect();
            out.push(Tok::Num(
                text.parse()
                    .unwrap_or_else(|_| panic!("bad number `{text}`")),
            ));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < c.len() && (c[i].is_alphanumeric() || c[i] == '_') {
                i += 1;
            }
            out.push(Tok::Id(c[start..i].iter().collect()));
        } else {
            assert!("+-*/^(),=".contains(ch), "unexpected `{ch}` in `{s}`");
            out.push(Tok::Op(ch));
            i += 1;
        }
    }
    out
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) {
        assert!(
            self.eat(op),
            "expected `{op}` at token {} of {:?}",
            self.pos,
            self.toks
        );
    }

    fn expr(&mut self) -> Node {
        let mut lhs = self.term();
        loop {
            if self.eat('+') {
                lhs = Node::Bin('+', Box::new(lhs), Box::new(self.term()));
            } else if self.eat('-') {
                lhs = Node::Bin('-', Box::new(lhs), Box::new(self.term()));
            } else {
                return lhs;
            }
        }
    }

    fn term(&mut self) -> Node {
        let mut lhs = self.unary();
        loop {
            if self.eat('*') {
                lhs = Node::Bin('*', Box::new(lhs), Box::new(self.unary()));
            } else if self.eat('/') {
                lhs = Node::Bin('/', Box::new(lhs), Box::new(self.unary()));
            } else {
                return lhs;
            }
        }
    }

    fn unary(&mut self) -> Node {
        if self.eat('-') {
            Node::Neg(Box::new(self.unary()))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Node {
        let base = self.atom();
        if self.eat('^') {
            Node::Bin('^', Box::new(base), Box::new(self.unary()))
        } else {
            base
        }
    }

    fn atom(&mut self) -> Node {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(x)) => {
                self.pos += 1;
                Node::Lit(x)
            }
            Some(Tok::Id(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let mut args = vec![self.expr()];
                    while self.eat(',') {
                        args.push(self.expr());
                    }
                    self.expect(')');
                    Node::Call(name, args)
                } else {
                    Node::Var(name)
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr();
                self.expect(')');
                e
            }
            other => panic!("unexpected token {other:?}"),
        }
    }
}

fn parse(s: &str) -> Node {
    let mut p = Parser {
        toks: lex(s),
        pos: 0,
    };
    let e = p.expr();
    assert!(p.pos == p.toks.len(), "trailing input in `{s}`");
    e
}

#[derive(Debug, Clone)]
struct Function {
    params: Vec<String>,
    body: Node,
}

/// Definitions plus numeric inputs.
#[derive(Debug, Clone, Default)]
pub struct Script {
    inputs: HashMap<String, Num>,
    defs: HashMap<String, Rc<Function>>,
}

impl Script {
    pub fn new(source: &str) -> Self {
        let mut defs = HashMap::new();
        for line in source
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (head, body) = line
                .split_once('=')
                .unwrap_or_else(|| panic!("no `=` in `{line}`"));
            let head = head.trim();
            let (name, params) = match head.split_once('(') {
                Some((n, rest)) => (
                    n.trim().to_string(),
                    rest.trim_end_matches(')')
                        .split(',')
                        .map(|p| p.trim().to_string())
                        .collect(),
                ),
                None => (head.to_string(), Vec::new()),
            };
            defs.insert(
                name,
                Rc::new(Function {
                    params,
                    body: parse(body),
                }),
            );
        }
        Self {
            inputs: HashMap::new(),
            defs,
        }
    }

    pub fn set(&mut self, name: &str, value: f64) -> &mut Self {
        self.inputs.insert(name.to_string(), Num::of(value));
        self
    }

    pub fn eval(&self, expression: &str) -> Num {
        let mut cache = HashMap::new();
        self.node(&parse(expression), &HashMap::new(), &mut cache)
    }

    fn node(
        &self,
        n: &Node,
        locals: &HashMap<String, Num>,
        cache: &mut HashMap<String, Num>,
    ) -> Num {
        match n {
            Node::Lit(x) => Num::of(*x),
            Node::Var(name) => {
                if let Some(v) = locals.get(name).or_else(|| self.inputs.get(name)) {
                    return *v;
                }
                if name == "pi" {
                    return Num::of(std::f64::consts::PI);
                }
                self.call(name, &[], cache)
            }
            Node::Neg(x) => self.node(x, locals, cache).neg(),
            Node::Bin(op, a, b) => {
                let x = self.node(a, locals, cache);
                let y = self.node(b, locals, cache);
                match op {
                    '+' => x.add(y),
                    '-' => x.add(y.neg()),
                    '*' => x.mul(y),
                    '/' => x.mul(y.recip()),
                    '^' => x.pow(y.value()),
                    _ => unreachable!(),
                }
            }
            Node::Call(name, args) => match name.as_str() {
                "if" => {
                    let c = self.node(&args[0], locals, cache);
                    self.node(if c.is_zero() { &args[2] } else { &args[1] }, locals, cache)
                }
                "sum" => {
                    let Node::Var(k) = &args[0] else {
                        panic!("sum needs a variable")
                    };
                    let lo = self.node(&args[1], locals, cache).value().round() as i64;
                    let hi = self.node(&args[2], locals, cache).value().round() as i64;
                    let mut inner = locals.clone();
                    let mut total = Num::ZERO;
                    for i in lo..=hi {
                        inner.insert(k.clone(), Num::of(i as f64));
                        total = total.add(self.node(&args[3], &inner, cache));
                    }
                    total
                }
                _ => {
                    let vals: Vec<Num> = args.iter().map(|a| self.node(a, locals, cache)).collect();
                    self.builtin(name, &vals)
                        .unwrap_or_else(|| self.call(name, &vals, cache))
                }
            },
        }
    }

    fn call(&self, name: &str, args: &[Num], cache: &mut HashMap<String, Num>) -> Num {
        let key = format!(
            "{name}{:?}",
            args.iter()
                .map(|a| (a.negative, a.ln.to_bits()))
                .collect::<Vec<_>>()
        );
        if let Some(v) = cache.get(&key) {
            return *v;
        }
        let f = self
            .defs
            .get(name)
            .unwrap_or_else(|| panic!("undefined `{name}`"))
            .clone();
        assert_eq!(f.params.len(), args.len(), "arity of `{name}`");
        let locals: HashMap<String, Num> =
            f.params.iter().cloned().zip(args.iter().copied()).collect();
        let v = self.node(&f.body, &locals, cache);
        cache.insert(key, v);
        v
    }

    fn builtin(&self, name: &str, a: &[Num]) -> Option<Num> {
        Some(match name {
            "sqrt" => a[0].pow(0.5),
            "exp" => Num::from_ln(a[0].value()),
            "ln" => {
                assert!(!a[0].negative);
                Num::of(a[0].ln)
            }
            // Log storage leaves integers a few ulps short.
            "floor" => {
                let v = a[0].value();
                Num::of((v + 1e-9 * v.abs().max(1.0)).floor())
            }
            "min" => *a.iter().min_by(|x, y| x.cmp_value(**y)).unwrap(),
            "max" => *a.iter().max_by(|x, y| x.cmp_value(**y)).unwrap(),
            "fact" => {
                let n = a[0].value().round() as u64;
                (1..=n).fold(Num::of(1.0), |acc, j| acc.mul(Num::of(j as f64)))
            }
            // C(n, k) for real n and integer k: ∏_{j<k} (n - j)/(k - j).
            "binom" => {
                let n = a[0].value();
                let k = a[1].value().round() as i64;
                (0..k).fold(Num::of(1.0), |acc, j| {
                    acc.mul(Num::of((n - j as f64) / (k - j) as f64))
                })
            }
            "expsqint" => Num::from_ln(ln_exp_square_integral(
                a[0].value(),
                a[1].value(),
                a[2].value(),
            )),
            _ => return None,
        })
    }
}

/// `ln F(x)` with `F(x) = ∫₀^x e^{u²} du`, `x > 0`.
///
/// Power series (all terms positive) up to `x = 6`; beyond, the asymptotic
/// expansion `F(x) = e^{x²}/(2x) Σ (2n-1)!!/(2x²)^n`, summed to its smallest
/// term, which is below `e^{-x²}` relative.
pub fn ln_dawson_integral(x: f64) -> f64 {
    assert!(x > 0.0);
    if x <= 6.0 {
        let x2 = x * x;
        let mut power = x; // x^{2n+1}/n!
        let mut total = 0.0;
        let mut n = 0.0;
        loop {
            let term = power / (2.0 * n + 1.0);
            total += term;
            if term < 1e-18 * total {
                return total.ln();
            }
            n += 1.0;
            power *= x2 / n;
        }
    }
    let q = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut total = 0.0;
    let mut n = 0.0;
    loop {
        total += term;
        let next = term * (2.0 * n + 1.0) * q;
        if next >= term || next < 1e-18 * total {
            break;
        }
        term = next;
        n += 1.0;
    }
    x * x - (2.0 * x).ln() + total.ln()
}

/// `ln ∫₀^U exp{(αs + γ)²} ds = ln[(F(αU + γ) - F(γ))/α]`.
pub fn ln_exp_square_integral(alpha: f64, gamma: f64, upper: f64) -> f64 {
    let hi = ln_dawson_integral(alpha * upper + gamma);
    let lo = ln_dawson_integral(gamma);
    hi + (-(lo - hi).exp()).ln_1p() - alpha.ln()
}
