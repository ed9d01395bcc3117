//! The symbol alphabet shared by the parser, the automata and the transducers.
//!
//! Program text and string values range over printable ASCII minus the apex
//! `'`, which only delimits string literals.

/// String delimiter. Not a member of the value alphabet.
pub const APEX: char = '\'';

/// Symbols that end a statement fragment: `;`, `{`, `}` and the terminator `$`.
pub const STATEMENT_PUNCTUATION: [char; 4] = [';', '{', '}', '$'];

/// Whether `c` may occur inside a string value.
pub fn in_sigma(c: char) -> bool {
    (' '..='~').contains(&c) && c != APEX
}

/// All value symbols in ascending order.
pub fn sigma() -> impl Iterator<Item = char> + Clone {
    (' '..='~').filter(|&c| c != APEX)
}

pub fn is_statement_punctuation(c: char) -> bool {
    STATEMENT_PUNCTUATION.contains(&c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_is_printable_ascii_without_apex() {
        assert_eq!(sigma().count(), 94);
        assert!(!in_sigma('\''));
        assert!(in_sigma(' ') && in_sigma('$') && in_sigma('~'));
        assert!(!in_sigma('\n'));
    }
}
