use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A variable: a user-facing name plus a numeric tag used for freshening.
///
/// User-written names carry tag 0. Freshening keeps the name and bumps the
/// tag, so `y` becomes `y1`, `y2`, ... when it has to be renamed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    name: Arc<str>,
    tag: u32,
}

impl Var {
    pub fn new(name: impl AsRef<str>, tag: u32) -> Self {
        Var {
            name: Arc::from(name.as_ref()),
            tag,
        }
    }

    /// Reads an identifier as written in concrete syntax.
    ///
    /// A trailing run of digits without a leading zero is read back as the
    /// tag, so that printing and parsing agree: `y1` is `Var::new("y", 1)`.
    pub fn parse(ident: &str) -> Self {
        let digits = ident.bytes().rev().take_while(u8::is_ascii_digit).count();
        let split = ident.len() - digits;
        if digits > 0 && split > 0 && !ident[split..].starts_with('0') {
            if let Ok(tag) = ident[split..].parse::<u32>() {
                return Var::new(&ident[..split], tag);
            }
        }
        Var::new(ident, 0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tag(&self) -> u32 {
        self.tag
    }

    /// Returns `self` if it is not in `avoid`, otherwise a variable with the
    /// same name and tag one above the largest tag of that name in `avoid`.
    pub fn fresh(&self, avoid: &BTreeSet<Var>) -> Var {
        if !avoid.contains(self) {
            return self.clone();
        }
        self.renamed(avoid)
    }

    /// Always produces a variable distinct from `self` and from `avoid`.
    pub fn renamed(&self, avoid: &BTreeSet<Var>) -> Var {
        let max = avoid
            .iter()
            .filter(|v| v.name == self.name)
            .map(|v| v.tag)
            .chain(std::iter::once(self.tag))
            .max()
            .unwrap_or(0);
        Var {
            name: self.name.clone(),
            tag: max + 1,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tag == 0 {
            f.write_str(&self.name)
        } else if self.name.ends_with(|c: char| c.is_ascii_digit()) {
            write!(f, "{}_{}", self.name, self.tag)
        } else {
            write!(f, "{}{}", self.name, self.tag)
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_splits_tag() {
        assert_eq!(Var::parse("y1"), Var::new("y", 1));
        assert_eq!(Var::parse("y"), Var::new("y", 0));
        assert_eq!(Var::parse("y01"), Var::new("y01", 0));
        assert_eq!(Var::parse("12"), Var::new("12", 0));
        assert_eq!(Var::new("y", 3).to_string(), "y3");
        assert_eq!(Var::new("y", 0).to_string(), "y");
    }

    #[test]
    fn fresh_bumps_max_tag() {
        let avoid: BTreeSet<Var> = [Var::new("y", 0), Var::new("y", 4), Var::new("w", 9)]
            .into_iter()
            .collect();
        assert_eq!(Var::new("y", 0).fresh(&avoid), Var::new("y", 5));
        assert_eq!(Var::new("z", 0).fresh(&avoid), Var::new("z", 0));
    }

    #[test]
    fn display_parse_round_trip_for_digit_names() {
        let v = Var::new("a0", 0).renamed(&BTreeSet::new());
        let back = Var::parse(&v.to_string());
        assert_eq!(back.to_string(), v.to_string());
    }
}
