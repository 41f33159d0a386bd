use std::fmt;

/// The two letters of the free algebra: `E` commutes with β, `O` anticommutes with it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    E,
    O,
}

impl Generator {
    pub fn is_odd(self) -> bool {
        matches!(self, Generator::O)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Generator::E => "E",
            Generator::O => "O",
        }
    }
}

/// Largest word the packed representation can hold.
pub const MAX_WORD_LEN: usize = 64;

/// An ordered product of generators.
///
/// Letters are packed into a `u64`, first letter in the most significant
/// occupied bit, with `O` encoded as 1. Deriving `Ord` on `(len, bits)` gives
/// shortlex order with `E < O`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn letter(g: Generator) -> Word {
        Word {
            len: 1,
            bits: g.is_odd() as u64,
        }
    }

    pub fn from_letters<I: IntoIterator<Item = Generator>>(letters: I) -> Word {
        letters
            .into_iter()
            .fold(Word::EMPTY, |w, g| w.concat(Word::letter(g)))
    }

    /// Parses a string of `E`/`O` characters; any other character yields `None`.
    pub fn parse(s: &str) -> Option<Word> {
        let mut w = Word::EMPTY;
        for c in s.chars().filter(|c| !c.is_whitespace()) {
            let g = match c {
                'E' => Generator::E,
                'O' => Generator::O,
                _ => return None,
            };
            w = w.concat(Word::letter(g));
        }
        Some(w)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn o_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn e_count(&self) -> usize {
        self.len() - self.o_count()
    }

    /// β-parity: `true` when the word is odd.
    pub fn is_odd(&self) -> bool {
        self.o_count() % 2 == 1
    }

    /// `(E-count, O-count)`.
    pub fn class(&self) -> (usize, usize) {
        (self.e_count(), self.o_count())
    }

    pub fn letter_at(&self, i: usize) -> Generator {
        assert!(i < self.len());
        if (self.bits >> (self.len() - 1 - i)) & 1 == 1 {
            Generator::O
        } else {
            Generator::E
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Generator> + '_ {
        (0..self.len()).map(move |i| self.letter_at(i))
    }

    /// Concatenation `self · other`.
    ///
    /// Panics if the result would exceed [`MAX_WORD_LEN`] letters.
    pub fn concat(self, other: Word) -> Word {
        let len = self.len() + other.len();
        assert!(
            len <= MAX_WORD_LEN,
            "word length {len} exceeds the packed limit of {MAX_WORD_LEN}"
        );
        let bits = if other.len == 0 {
            self.bits
        } else if other.len() == 64 {
            other.bits
        } else {
            (self.bits << other.len) | other.bits
        };
        Word {
            len: len as u8,
            bits,
        }
    }

    pub fn reversed(&self) -> Word {
        Word::from_letters((0..self.len()).rev().map(|i| self.letter_at(i)))
    }

    pub fn power(g: Generator, n: usize) -> Word {
        Word::from_letters(std::iter::repeat_n(g, n))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.letters().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(g.symbol())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concat_and_counts() {
        let a = Word::parse("OE").unwrap();
        let b = Word::parse("EOO").unwrap();
        let ab = a.concat(b);
        assert_eq!(ab, Word::parse("OEEOO").unwrap());
        assert_eq!(ab.class(), (2, 3));
        assert!(ab.is_odd());
        assert_eq!(ab.concat(Word::EMPTY), ab);
        assert_eq!(Word::EMPTY.concat(ab), ab);
    }

    #[test]
    fn shortlex_order() {
        let mut ws: Vec<Word> = ["OO", "E", "EO", "", "OE", "O"]
            .iter()
            .map(|s| Word::parse(s).unwrap())
            .collect();
        ws.sort();
        let shown: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["", "E", "O", "E O", "O E", "O O"]);
    }

    #[test]
    fn reverse_is_involution() {
        let w = Word::parse("OEEOE").unwrap();
        assert_eq!(w.reversed(), Word::parse("EOEEO").unwrap());
        assert_eq!(w.reversed().reversed(), w);
    }

    #[test]
    fn full_width_words() {
        let w = Word::power(Generator::O, 32);
        let ww = w.concat(w);
        assert_eq!(ww.len(), 64);
        assert_eq!(ww.o_count(), 64);
    }
}
