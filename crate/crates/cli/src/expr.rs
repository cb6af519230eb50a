//! Arithmetic expressions over W_n(F_q): `+ - *`, `F(x)`, `V(x)`, `[a]` (Teichmüller), integers
//! and coordinate tuples `(x0,x1,...)`.

use hwinv::witt::{WittRing, WittVector};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            out.push(Tok::Num(chars[start..k].iter().collect()));
        } else if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '^') {
                k += 1;
            }
            out.push(Tok::Ident(chars[start..k].iter().collect()));
        } else if "+-*(),[]".contains(c) {
            out.push(Tok::Sym(c));
            k += 1;
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a WittRing,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<WittVector, String> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?).map_err(|e| e.to_string())?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?).map_err(|e| e.to_string())?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<WittVector, String> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?).map_err(|e| e.to_string())?;
        }
        Ok(acc)
    }

    /// Raw text up to the next ',' or closing bracket at depth zero.
    fn coordinate_text(&mut self) -> String {
        let mut s = String::new();
        while let Some(t) = self.peek() {
            match t {
                Tok::Sym(',') | Tok::Sym(')') | Tok::Sym(']') => break,
                Tok::Num(x) | Tok::Ident(x) => s.push_str(x),
                Tok::Sym(c) => s.push(*c),
            }
            self.pos += 1;
        }
        s
    }

    fn tuple_ahead(&self) -> bool {
        let mut depth = 0;
        for t in &self.toks[self.pos..] {
            match t {
                Tok::Sym('(') | Tok::Sym('[') => depth += 1,
                Tok::Sym(')') | Tok::Sym(']') => {
                    if depth == 0 {
                        return false;
                    }
                    depth -= 1;
                }
                Tok::Sym(',') if depth == 0 => return true,
                _ => {}
            }
        }
        false
    }

    fn factor(&mut self) -> Result<WittVector, String> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let k: i64 = n.parse().map_err(|_| format!("integer {n} out of range"))?;
                Ok(self.ring.from_int(k))
            }
            Some(Tok::Ident(name)) if name == "F" || name == "V" => {
                self.pos += 1;
                self.expect('(')?;
                let x = self.expr()?;
                self.expect(')')?;
                Ok(if name == "F" { x.frobenius() } else { x.verschiebung() })
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let text = self.coordinate_text();
                self.expect(']')?;
                let a = self.ring.field().parse(&text).map_err(|e| e.to_string())?;
                Ok(self.ring.teichmuller(a))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                if self.tuple_ahead() {
                    let mut coords = vec![self.coordinate_text()];
                    while self.eat(',') {
                        coords.push(self.coordinate_text());
                    }
                    self.expect(')')?;
                    let refs: Vec<&str> = coords.iter().map(|s| s.as_str()).collect();
                    self.ring.parse(&refs).map_err(|e| e.to_string())
                } else {
                    let x = self.expr()?;
                    self.expect(')')?;
                    Ok(x)
                }
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

pub fn eval(ring: &WittRing, text: &str) -> Result<WittVector, String> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0, ring };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input at token {}", p.pos + 1));
    }
    Ok(v)
}
