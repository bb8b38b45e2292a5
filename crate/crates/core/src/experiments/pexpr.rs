//! Arithmetic in `n` and `c` for probabilities such as `c*n^-2.5` or
//! `10*log(n)/n`.
//!
//! Grammar: `expr = term (('*' | '/') term)*`, `term = atom ('^' signed)?`,
//! `atom = '-'? (number | n | c | log(expr) | ln(expr) | sqrt(expr) | exp(expr) | (expr))`,
//! `signed = '-'? (number | (expr))`. All arithmetic is in `f64`; `log` is natural.

use crate::{Error, Result};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    n: f64,
    c: Option<f64>,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Expr {
            expr: self.src.to_string(),
            message: format!("{} at offset {}", message.into(), self.pos),
        })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        if self.eat(ch) {
            Ok(())
        } else {
            self.err(format!("expected '{ch}'"))
        }
    }

    fn expr(&mut self) -> Result<f64> {
        let mut acc = self.term()?;
        loop {
            if self.eat('*') {
                acc *= self.term()?;
            } else if self.eat('/') {
                acc /= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<f64> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let exp = if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            e
        } else {
            self.number()?
        };
        Ok(base.powf(if neg { -exp } else { exp }))
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let mut len = rest
            .find(|ch: char| !(ch.is_ascii_digit() || ch == '.'))
            .unwrap_or(rest.len());
        // optional exponent suffix such as 1e-4
        if rest[len..].starts_with(['e', 'E']) {
            let tail = &rest[len + 1..];
            let sign = usize::from(tail.starts_with(['+', '-']));
            let digits = tail[sign..]
                .find(|ch: char| !ch.is_ascii_digit())
                .unwrap_or(tail.len() - sign);
            if digits > 0 {
                len += 1 + sign + digits;
            }
        }
        match rest[..len].parse::<f64>() {
            Ok(v) if len > 0 => {
                self.pos += len;
                Ok(v)
            }
            _ => self.err("expected a number"),
        }
    }

    fn atom(&mut self) -> Result<f64> {
        if self.eat('-') {
            return Ok(-self.atom()?);
        }
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(ch) if ch.is_ascii_digit() || ch == '.' => self.number(),
            Some(ch) if ch.is_ascii_alphabetic() => {
                let rest = &self.src[self.pos..];
                let len = rest
                    .find(|ch: char| !ch.is_ascii_alphanumeric())
                    .unwrap_or(rest.len());
                let name = &rest[..len];
                self.pos += len;
                match name {
                    "n" => Ok(self.n),
                    "c" => match self.c {
                        Some(c) => Ok(c),
                        None => self.err("expression uses c but no value was given"),
                    },
                    "log" | "ln" | "sqrt" | "exp" => {
                        self.expect('(')?;
                        let v = self.expr()?;
                        self.expect(')')?;
                        Ok(match name {
                            "sqrt" => v.sqrt(),
                            "exp" => v.exp(),
                            _ => v.ln(),
                        })
                    }
                    other => self.err(format!("unknown name '{other}'")),
                }
            }
            Some(ch) => self.err(format!("unexpected '{ch}'")),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Evaluates `expr` at the given `n` and optional constant `c`.
pub fn eval_p_expr(expr: &str, n: f64, c: Option<f64>) -> Result<f64> {
    let mut p = Parser { src: expr, pos: 0, n, c };
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}
