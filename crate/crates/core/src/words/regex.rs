use std::collections::BTreeSet;
use std::fmt;

use super::{Alphabet, WordsError};

/// Regular expression over symbol indices of an [`Alphabet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    /// `#0`
    Empty,
    /// `#e`
    Epsilon,
    Symbol(usize),
    Concat(Box<Regex>, Box<Regex>),
    Alt(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    /// Whether `word` is in the language, by direct evaluation on the tree.
    ///
    /// Shares nothing with the automaton pipeline.
    pub fn matches(&self, word: &[usize]) -> bool {
        self.ends(word, &BTreeSet::from([0])).contains(&word.len())
    }

    // positions reachable after matching `self` from any of `starts`
    fn ends(&self, word: &[usize], starts: &BTreeSet<usize>) -> BTreeSet<usize> {
        match self {
            Regex::Empty => BTreeSet::new(),
            Regex::Epsilon => starts.clone(),
            Regex::Symbol(a) => starts
                .iter()
                .filter(|&&i| word.get(i) == Some(a))
                .map(|&i| i + 1)
                .collect(),
            Regex::Concat(l, r) => r.ends(word, &l.ends(word, starts)),
            Regex::Alt(l, r) => {
                let mut out = l.ends(word, starts);
                out.extend(r.ends(word, starts));
                out
            }
            Regex::Star(inner) => {
                let mut reached = starts.clone();
                let mut frontier = starts.clone();
                while !frontier.is_empty() {
                    let next: BTreeSet<usize> = inner
                        .ends(word, &frontier)
                        .into_iter()
                        .filter(|i| !reached.contains(i))
                        .collect();
                    reached.extend(&next);
                    frontier = next;
                }
                reached
            }
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Regex, &'a Alphabet, u8);
        impl fmt::Display for D<'_> {
            // precedence: 0 alternation, 1 concatenation, 2 star operand
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let (r, a, prec) = (self.0, self.1, self.2);
                match r {
                    Regex::Empty => write!(f, "#0"),
                    Regex::Epsilon => write!(f, "#e"),
                    Regex::Symbol(s) => write!(f, "{}", a.symbol(*s)),
                    Regex::Concat(l, rr) => {
                        let body = format!("{}{}", D(l, a, 1), D(rr, a, 1));
                        if prec > 1 {
                            write!(f, "({body})")
                        } else {
                            write!(f, "{body}")
                        }
                    }
                    Regex::Alt(l, rr) => {
                        let body = format!("{}|{}", D(l, a, 0), D(rr, a, 0));
                        if prec > 0 {
                            write!(f, "({body})")
                        } else {
                            write!(f, "{body}")
                        }
                    }
                    Regex::Star(inner) => write!(f, "{}*", D(inner, a, 2)),
                }
            }
        }
        D(self, alphabet, 0)
    }
}

/// Parses `src`: symbols of `alphabet`, juxtaposition, `|`, `*`, parentheses,
/// `#e` (empty word) and `#0` (empty language).
pub fn parse_regex(src: &str, alphabet: &Alphabet) -> Result<Regex, WordsError> {
    let chars: Vec<char> = src.chars().collect();
    let mut p = Parser {
        chars: &chars,
        pos: 0,
        alphabet,
    };
    let r = p.alternation()?;
    if p.pos < chars.len() {
        return Err(p.error(p.pos, "unexpected `)`"));
    }
    Ok(r)
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn error(&self, position: usize, message: &str) -> WordsError {
        WordsError::Syntax {
            position,
            message: message.to_owned(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn alternation(&mut self) -> Result<Regex, WordsError> {
        let mut r = self.concatenation()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let rhs = self.concatenation()?;
            r = Regex::Alt(Box::new(r), Box::new(rhs));
        }
        Ok(r)
    }

    fn concatenation(&mut self) -> Result<Regex, WordsError> {
        let mut r: Option<Regex> = None;
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            let item = self.starred()?;
            r = Some(match r {
                None => item,
                Some(l) => Regex::Concat(Box::new(l), Box::new(item)),
            });
        }
        r.ok_or_else(|| match self.peek() {
            None => self.error(self.pos, "expected an expression, found end of input"),
            Some(c) => self.error(self.pos, &format!("expected an expression, found `{c}`")),
        })
    }

    fn starred(&mut self) -> Result<Regex, WordsError> {
        let mut r = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            r = Regex::Star(Box::new(r));
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex, WordsError> {
        let start = self.pos;
        let c = self.peek().expect("caller checked");
        self.pos += 1;
        match c {
            '(' => {
                if self.pos == self.chars.len() {
                    return Err(self.error(start, "unclosed group"));
                }
                let r = self.alternation()?;
                match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        Ok(r)
                    }
                    None => Err(self.error(start, "unclosed group")),
                    Some(c) => Err(self.error(self.pos, &format!("unexpected `{c}`"))),
                }
            }
            '*' => Err(self.error(start, "`*` without operand")),
            '#' => match self.peek() {
                Some('e') => {
                    self.pos += 1;
                    Ok(Regex::Epsilon)
                }
                Some('0') => {
                    self.pos += 1;
                    Ok(Regex::Empty)
                }
                _ => Err(self.error(start, "`#` must be followed by `e` or `0`")),
            },
            c => self
                .alphabet
                .index(c)
                .map(Regex::Symbol)
                .ok_or(WordsError::SymbolOutsideAlphabet { symbol: c, position: start }),
        }
    }
}
