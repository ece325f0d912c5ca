use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::terms::{ParseError, Parser, Tok, Var};

use super::TypeError;

/// Simple types: atoms and implications.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Arc<str>),
    Imp(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Self {
        Formula::Atom(Arc::from(name))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn atoms(&self) -> Vec<Arc<str>> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Arc<str>>) {
        match self {
            Formula::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone())
                }
            }
            Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Replaces atoms according to `map`; unmapped atoms stay.
    pub fn instantiate(&self, map: &BTreeMap<Arc<str>, Formula>) -> Formula {
        match self {
            Formula::Atom(a) => map.get(a).cloned().unwrap_or_else(|| self.clone()),
            Formula::Imp(a, b) => Formula::imp(a.instantiate(map), b.instantiate(map)),
        }
    }

    pub fn parse(src: &str) -> Result<Formula, ParseError> {
        let mut p = Parser::new(src)?;
        let f = parse_formula(&mut p)?;
        p.finish()?;
        Ok(f)
    }
}

pub(crate) fn parse_formula(p: &mut Parser) -> Result<Formula, ParseError> {
    let left = match p.peek().clone() {
        Tok::Ident(name) => {
            if !name.starts_with(|c: char| c.is_uppercase()) {
                return Err(p.error(format!("atom `{name}` must be capitalized")));
            }
            p.bump();
            Formula::atom(&name)
        }
        Tok::LParen => {
            p.bump();
            let f = parse_formula(p)?;
            p.expect(Tok::RParen)?;
            f
        }
        other => return Err(p.error(format!("expected a formula, found {other}"))),
    };
    if *p.peek() == Tok::Arrow {
        p.bump();
        let right = parse_formula(p)?;
        return Ok(Formula::imp(left, right));
    }
    Ok(left)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => f.write_str(a),
            Formula::Imp(a, b) => match **a {
                Formula::Imp(..) => write!(f, "({a}) -> {b}"),
                Formula::Atom(_) => write!(f, "{a} -> {b}"),
            },
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finite map from variables to formulas. Extending with a variable that is
/// already bound at a different formula is refused.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct TypeCtx(BTreeMap<Var, Formula>);

impl TypeCtx {
    pub fn new() -> Self {
        TypeCtx(BTreeMap::new())
    }

    pub fn get(&self, x: &Var) -> Option<&Formula> {
        self.0.get(x)
    }

    pub fn contains(&self, x: &Var) -> bool {
        self.0.contains_key(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Formula)> {
        self.0.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    /// `Γ, x:A`, or `Γ` itself when `x:A` is already present.
    pub fn extend(&self, x: &Var, a: Formula) -> Result<TypeCtx, TypeError> {
        match self.0.get(x) {
            Some(b) if *b != a => Err(TypeError::Rebind {
                var: x.clone(),
                bound: b.to_string(),
                new: a.to_string(),
            }),
            Some(_) => Ok(self.clone()),
            None => {
                let mut m = self.0.clone();
                m.insert(x.clone(), a);
                Ok(TypeCtx(m))
            }
        }
    }

    pub(crate) fn insert(&mut self, x: Var, a: Formula) {
        self.0.insert(x, a);
    }

    pub fn parse(src: &str) -> Result<TypeCtx, ParseError> {
        let mut out = TypeCtx::new();
        for (x, f) in parse_ctx_entries(src)? {
            match f {
                Some(f) => {
                    if out.get(&x).is_some_and(|g| *g != f) {
                        return Err(ParseError {
                            line: 1,
                            col: 1,
                            msg: format!("`{x}` bound twice at different formulas"),
                        });
                    }
                    out.insert(x, f);
                }
                None => {
                    return Err(ParseError {
                        line: 1,
                        col: 1,
                        msg: format!("placeholder for `{x}` is only allowed when inferring"),
                    })
                }
            }
        }
        Ok(out)
    }
}

/// Context entries as written: `x:A, y:?`. `?` is a placeholder.
pub fn parse_ctx_entries(src: &str) -> Result<Vec<(Var, Option<Formula>)>, ParseError> {
    let mut p = Parser::new(src)?;
    let mut out = Vec::new();
    if *p.peek() == Tok::Eof {
        return Ok(out);
    }
    loop {
        let x = Var::parse(&p.ident()?);
        p.expect(Tok::Colon)?;
        let f = if *p.peek() == Tok::Question {
            p.bump();
            None
        } else {
            Some(parse_formula(&mut p)?)
        };
        out.push((x, f));
        match p.peek() {
            Tok::Comma => {
                p.bump();
            }
            Tok::Eof => break,
            other => return Err(p.error(format!("expected `,`, found {other}"))),
        }
    }
    Ok(out)
}

impl fmt::Display for TypeCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, a)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}:{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TypeCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl Serialize for TypeCtx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<String, String> = self
            .0
            .iter()
            .map(|(x, a)| (x.to_string(), a.to_string()))
            .collect();
        m.serialize(s)
    }
}

impl FromIterator<(Var, Formula)> for TypeCtx {
    fn from_iter<I: IntoIterator<Item = (Var, Formula)>>(iter: I) -> Self {
        TypeCtx(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrow_is_right_associative() {
        let f = Formula::parse("X -> Y -> X").unwrap();
        assert_eq!(
            f,
            Formula::imp(
                Formula::atom("X"),
                Formula::imp(Formula::atom("Y"), Formula::atom("X"))
            )
        );
        assert_eq!(f.to_string(), "X -> Y -> X");
        let g = Formula::parse("(X -> Y) -> X").unwrap();
        assert_eq!(g.to_string(), "(X -> Y) -> X");
    }

    #[test]
    fn atoms_must_be_capitalized() {
        assert!(Formula::parse("x").is_err());
    }

    #[test]
    fn ctx_parsing() {
        let g = TypeCtx::parse("y:X->X, z:X").unwrap();
        assert_eq!(g.get(&Var::parse("z")), Some(&Formula::atom("X")));
        assert_eq!(g.to_string(), "y:X -> X, z:X");
        assert!(TypeCtx::parse("y:?").is_err());
        assert!(TypeCtx::parse("").unwrap().is_empty());
        let e = parse_ctx_entries("y:?, z:X").unwrap();
        assert_eq!(e[0].1, None);
    }

    #[test]
    fn rebinding_at_another_formula_is_refused() {
        let g = TypeCtx::parse("x:X").unwrap();
        assert!(g.extend(&Var::parse("x"), Formula::atom("Y")).is_err());
        assert_eq!(g.extend(&Var::parse("x"), Formula::atom("X")).unwrap(), g);
    }
}
