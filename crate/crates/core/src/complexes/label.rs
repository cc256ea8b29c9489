use std::fmt;

/// Structured basis labels. Constructions compose labels rather than
/// formatting strings, so bases are deterministic and comparable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Unit,
    Name(String),
    Index(usize),
    /// A bar word `[a1|...|an]`.
    Word(Vec<Label>),
    Tensor(Box<Label>, Box<Label>),
    /// Component `k` of a direct sum or cone.
    Summand(u8, Box<Label>),
    /// The `i`-th basis cycle introduced by a truncation.
    Cycle(usize),
    Weighted(i64, Box<Label>),
}

impl Label {
    pub fn name(s: impl Into<String>) -> Label {
        Label::Name(s.into())
    }

    pub fn tensor(a: Label, b: Label) -> Label {
        Label::Tensor(Box::new(a), Box::new(b))
    }

    pub fn summand(k: u8, l: Label) -> Label {
        Label::Summand(k, Box::new(l))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Unit => write!(f, "1"),
            Label::Name(s) => write!(f, "{s}"),
            Label::Index(i) => write!(f, "#{i}"),
            Label::Word(ls) => {
                write!(f, "[")?;
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, "]")
            }
            Label::Tensor(a, b) => write!(f, "{a}(x){b}"),
            Label::Summand(k, l) => write!(f, "s{k}:{l}"),
            Label::Cycle(i) => write!(f, "z{i}"),
            Label::Weighted(w, l) => write!(f, "w{w}:{l}"),
        }
    }
}
