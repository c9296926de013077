use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The logical symbols a fragment may use: quantifiers, binary connectives,
/// and the extras `=`, `!=` and negation of relational atoms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct FragmentKey {
    pub exists: bool,
    pub forall: bool,
    pub and: bool,
    pub or: bool,
    pub eq: bool,
    pub neq: bool,
    pub neg: bool,
}

const NAMED: &[(&str, &str)] = &[
    ("disj", "exists,or"),
    ("disj-eq", "exists,or,eq"),
    ("disj-neq", "exists,or,neq"),
    ("pp", "exists,and"),
    ("pp-eq", "exists,and,eq"),
    ("pp-neq", "exists,and,neq"),
    ("pp-disj", "exists,and,or"),
    ("pp-disj-eq", "exists,and,or,eq"),
    ("pp-disj-neq", "exists,and,or,neq"),
    ("qcsp", "exists,forall,and"),
    ("qcsp-eq", "exists,forall,and,eq"),
    ("qcsp-neq", "exists,forall,and,neq"),
    ("pos-eqfree", "exists,forall,and,or"),
    ("pos-fo-eq", "exists,forall,and,or,eq"),
    ("pos-fo-neq", "exists,forall,and,or,neq"),
    ("eqfree-neg", "exists,forall,and,or,neg"),
    ("fo", "exists,forall,and,or,eq,neq,neg"),
];

impl FragmentKey {
    pub const PP: FragmentKey = FragmentKey::of(true, false, true, false, false, false, false);
    pub const POS_EQFREE: FragmentKey = FragmentKey::of(true, true, true, true, false, false, false);
    pub const FO: FragmentKey = FragmentKey::of(true, true, true, true, true, true, true);

    pub const fn of(exists: bool, forall: bool, and: bool, or: bool, eq: bool, neq: bool, neg: bool) -> Self {
        FragmentKey {
            exists,
            forall,
            and,
            or,
            eq,
            neq,
            neg,
        }
    }

    /// Swaps the quantifiers, the connectives and `=` with `!=`.
    pub fn dual(self) -> FragmentKey {
        FragmentKey {
            exists: self.forall,
            forall: self.exists,
            and: self.or,
            or: self.and,
            eq: self.neq,
            neq: self.eq,
            neg: self.neg,
        }
    }

    /// Union of the symbols of both keys.
    pub fn join(self, o: FragmentKey) -> FragmentKey {
        FragmentKey {
            exists: self.exists || o.exists,
            forall: self.forall || o.forall,
            and: self.and || o.and,
            or: self.or || o.or,
            eq: self.eq || o.eq,
            neq: self.neq || o.neq,
            neg: self.neg || o.neg,
        }
    }

    /// Whether every symbol of `self` is allowed in `o`.
    pub fn is_within(self, o: FragmentKey) -> bool {
        self.join(o) == o
    }

    pub fn name(self) -> Option<&'static str> {
        NAMED
            .iter()
            .find(|(_, set)| parse_set(set).ok() == Some(self))
            .map(|(n, _)| *n)
    }

    fn members(self) -> Vec<&'static str> {
        let mut v = Vec::new();
        for (on, name) in [
            (self.exists, "exists"),
            (self.forall, "forall"),
            (self.and, "and"),
            (self.or, "or"),
            (self.eq, "eq"),
            (self.neq, "neq"),
            (self.neg, "neg"),
        ] {
            if on {
                v.push(name);
            }
        }
        v
    }
}

fn parse_set(body: &str) -> Result<FragmentKey> {
    let mut k = FragmentKey::default();
    for part in body.split(',') {
        match part.trim() {
            "" => {}
            "exists" => k.exists = true,
            "forall" => k.forall = true,
            "and" => k.and = true,
            "or" => k.or = true,
            "eq" => k.eq = true,
            "neq" => k.neq = true,
            "neg" => k.neg = true,
            other => {
                return Err(Error::UnsupportedFragment(format!("unknown fragment symbol `{other}`")))
            }
        }
    }
    Ok(k)
}

impl FromStr for FragmentKey {
    type Err = Error;

    /// Accepts a named key, `dual:<key>`, or a set such as `{exists,and,eq}`.
    fn from_str(s: &str) -> Result<FragmentKey> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("dual:") {
            return rest.parse::<FragmentKey>().map(FragmentKey::dual);
        }
        if let Some(body) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            return parse_set(body);
        }
        NAMED
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, set)| parse_set(set).unwrap())
            .ok_or_else(|| Error::UnsupportedFragment(format!("unknown fragment key `{s}`")))
    }
}

impl fmt::Display for FragmentKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(n) => f.write_str(n),
            None => match self.dual().name() {
                Some(n) => write!(f, "dual:{n}"),
                None => write!(f, "{{{}}}", self.members().join(",")),
            },
        }
    }
}

impl From<FragmentKey> for String {
    fn from(k: FragmentKey) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for FragmentKey {
    type Error = Error;
    fn try_from(s: String) -> Result<FragmentKey> {
        s.parse()
    }
}
