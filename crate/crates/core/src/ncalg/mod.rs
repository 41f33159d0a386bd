//! Free algebra over the even and odd generators, with β and mass powers.

mod bracket;
mod expr;
mod parse;
mod word;

pub use bracket::{BracketExpr, ExpandError, Grade, Parity, DEFAULT_TERM_CAP};
pub use expr::{int, rat, AbstractExpr, AbstractTerm, Budget, Monomial};
pub use parse::{parse_expr, ParseError};
pub use word::{Generator, Word, MAX_WORD_LEN};
