use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

/// Deletes every non-ASCII character.
pub fn strip_non_ascii(text: &str) -> String {
    text.chars().filter(char::is_ascii).collect()
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

/// Length of the `[A-Za-z0-9_]+` run starting at `start`.
fn word_run(bytes: &[u8], start: usize) -> usize {
    bytes[start..].iter().take_while(|&&b| is_word_byte(b)).count()
}

/// Pulls hashtags (`#[A-Za-z0-9_]+`) and mentions (`@[A-Za-z0-9_]+`) out of
/// `text`.
///
/// Returns the remaining text, with runs of whitespace collapsed to a single
/// space, and the lowercased hashtags without their `#`.
pub fn extract_hashtags(text: &str) -> (String, BTreeSet<String>) {
    let bytes = text.as_bytes();
    let mut hashtags = BTreeSet::new();
    let mut kept = String::with_capacity(text.len());
    let mut copied_from = 0;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'#' || b == b'@' {
            let run = word_run(bytes, i + 1);
            if run > 0 {
                if b == b'#' {
                    hashtags.insert(text[i + 1..i + 1 + run].to_ascii_lowercase());
                }
                kept.push_str(&text[copied_from..i]);
                i += 1 + run;
                copied_from = i;
                continue;
            }
        }
        i += 1;
    }
    kept.push_str(&text[copied_from..]);
    (collapse_whitespace(&kept), hashtags)
}

fn collapse_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_space = false;
    for c in text.chars() {
        if c.is_whitespace() {
            if !in_space {
                out.push(' ');
            }
            in_space = true;
        } else {
            out.push(c);
            in_space = false;
        }
    }
    out
}

/// Splits on whitespace and trims ASCII punctuation from both ends of each
/// token. Tokens that are pure punctuation disappear.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| t.trim_matches(|c: char| c.is_ascii_punctuation()))
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;
    use regex::Regex;

    fn tags(list: &[&str]) -> BTreeSet<String> {
        list.iter().map(|s| String::from(*s)).collect()
    }

    #[test]
    fn case_folded_duplicates_collapse() {
        assert_eq!(extract_hashtags("go #Team #team!"), ("go !".into(), tags(&["team"])));
    }

    #[test]
    fn no_hashtags() {
        assert_eq!(extract_hashtags("no tags here"), ("no tags here".into(), tags(&[])));
    }

    #[test]
    fn underscore_and_digits_are_word_chars() {
        assert_eq!(extract_hashtags("#a1_b c #a1_b"), (" c ".into(), tags(&["a1_b"])));
    }

    #[test]
    fn mentions_are_removed_but_not_collected() {
        let (text, found) = extract_hashtags("hi @Bob_1, see #X.");
        assert_eq!(text, "hi , see .");
        assert_eq!(found, tags(&["x"]));
    }

    #[test]
    fn bare_symbols_stay_in_text() {
        let (text, found) = extract_hashtags("# @ #! a#b");
        assert_eq!(text, "# @ #! a");
        assert_eq!(found, tags(&["b"]));
    }

    #[test]
    fn tokenize_trims_punctuation() {
        assert_eq!(tokenize("  Hello, world!  ... u.s. "), vec!["Hello", "world", "u.s"]);
        assert!(tokenize("# @ !!").is_empty());
    }

    #[test]
    fn strip_non_ascii_deletes_characters() {
        assert_eq!(strip_non_ascii("café ☕ ok"), "caf  ok");
    }

    /// Reference behaviour spelled with the regex crate.
    fn regex_oracle(text: &str) -> (String, BTreeSet<String>) {
        let tag = Regex::new(r"#[A-Za-z0-9_]+").unwrap();
        let any = Regex::new(r"[#@][A-Za-z0-9_]+").unwrap();
        let ws = Regex::new(r"\s+").unwrap();
        let found = tag
            .find_iter(text)
            .map(|m| m.as_str()[1..].to_ascii_lowercase())
            .collect();
        let stripped = any.replace_all(text, "");
        (ws.replace_all(&stripped, " ").into_owned(), found)
    }

    proptest! {
        #[test]
        fn matches_regex_oracle(text in r"[ a-zA-Z0-9_#@!.,é\t]{0,40}") {
            prop_assert_eq!(extract_hashtags(&text), regex_oracle(&text));
        }
    }
}
