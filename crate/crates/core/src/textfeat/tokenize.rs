use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

/// Lowercased word tokens plus surface counts gathered while scanning.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TokenStream {
    pub tokens: Vec<String>,
    pub punctuation_counts: BTreeMap<char, u32>,
    pub link_count: u32,
    pub number_count: u32,
    pub question_count: u32,
    pub exclamation_count: u32,
    pub quote_count: u32,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn punctuation_total(&self) -> u32 {
        self.punctuation_counts.values().sum()
    }

    /// Append `other`, as if its text followed this one after a space.
    pub fn extend(&mut self, other: &TokenStream) {
        self.tokens.extend(other.tokens.iter().cloned());
        for (&c, &n) in &other.punctuation_counts {
            *self.punctuation_counts.entry(c).or_insert(0) += n;
        }
        self.link_count += other.link_count;
        self.number_count += other.number_count;
        self.question_count += other.question_count;
        self.exclamation_count += other.exclamation_count;
        self.quote_count += other.quote_count;
    }
}

fn is_link(chunk: &str) -> bool {
    let lower = chunk.trim_start_matches(['(', '[', '<', '"', '\'']);
    let starts = |p: &str| {
        lower.len() >= p.len() && lower.as_bytes()[..p.len()].eq_ignore_ascii_case(p.as_bytes())
    };
    starts("http://") || starts("https://") || starts("www.")
}

fn is_quote(c: char) -> bool {
    matches!(c, '"' | '\u{201c}' | '\u{201d}' | '\u{00ab}' | '\u{00bb}')
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}')
}

/// Segment text into lowercase word tokens.
///
/// Words are maximal alphanumeric runs; an apostrophe between two letters stays
/// inside the word. Numbers may carry internal `.` or `,` between digits and are
/// counted in `number_count`. Whitespace-delimited chunks starting with a URL
/// scheme or `www.` are counted as links and dropped.
pub fn tokenize(text: &str) -> TokenStream {
    let mut out = TokenStream::default();
    for chunk in text.split_whitespace() {
        if is_link(chunk) {
            out.link_count += 1;
            continue;
        }
        scan_chunk(chunk, &mut out);
    }
    out
}

fn scan_chunk(chunk: &str, out: &mut TokenStream) {
    let chars: Vec<char> = chunk.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_alphanumeric() {
            let start = i;
            let mut numeric = c.is_numeric();
            i += 1;
            while i < chars.len() {
                let c = chars[i];
                let next_alnum = chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
                if c.is_alphanumeric() {
                    numeric &= c.is_numeric();
                    i += 1;
                } else if (is_apostrophe(c) && next_alnum && !numeric)
                    || (matches!(c, '.' | ',') && numeric && chars.get(i + 1).is_some_and(|n| n.is_numeric()))
                {
                    i += 1;
                } else {
                    break;
                }
            }
            let word: String = chars[start..i].iter().collect();
            if numeric {
                out.number_count += 1;
            }
            out.tokens.push(word.to_lowercase());
        } else {
            *out.punctuation_counts.entry(c).or_insert(0) += 1;
            match c {
                '?' => out.question_count += 1,
                '!' => out.exclamation_count += 1,
                c if is_quote(c) => out.quote_count += 1,
                _ => {}
            }
            i += 1;
        }
    }
}

/// Sentences are delimited by `.`, `!` or `?` followed by whitespace or the end
/// of the text; only segments holding at least one word count.
pub fn count_sentences(text: &str) -> usize {
    let chars: Vec<char> = text.chars().collect();
    let mut count = 0;
    let mut has_word = false;
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            has_word = true;
        }
        if matches!(c, '.' | '!' | '?') {
            let boundary = chars.get(i + 1).is_none_or(|n| n.is_whitespace());
            if boundary && has_word {
                count += 1;
                has_word = false;
            }
        }
    }
    if has_word {
        count += 1;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &TokenStream) -> Vec<&str> {
        s.tokens.iter().map(String::as_str).collect()
    }

    #[test]
    fn thank_you() {
        let s = tokenize("Thank you!");
        assert_eq!(words(&s), ["thank", "you"]);
        assert_eq!(s.exclamation_count, 1);
        assert_eq!(s.punctuation_total(), 1);
    }

    #[test]
    fn empty_text() {
        assert_eq!(tokenize(""), TokenStream::default());
    }

    #[test]
    fn links_removed() {
        let s = tokenize("see http://x.y");
        assert_eq!(words(&s), ["see"]);
        assert_eq!(s.link_count, 1);
        let s = tokenize("(https://example.org/a?b=c) and www.foo.com");
        assert_eq!(words(&s), ["and"]);
        assert_eq!(s.link_count, 2);
    }

    #[test]
    fn numbers_and_apostrophes() {
        let s = tokenize("In 2019, 3.5% of people didn't vote; 1,000 did.");
        assert_eq!(
            words(&s),
            ["in", "2019", "3.5", "of", "people", "didn't", "vote", "1,000", "did"]
        );
        assert_eq!(s.number_count, 3);
        assert_eq!(s.punctuation_counts[&'%'], 1);
    }

    #[test]
    fn unicode_words_and_quotes() {
        let s = tokenize("\u{201c}Élan vital\u{201d} isn\u{2019}t Über?");
        assert_eq!(words(&s), ["élan", "vital", "isn\u{2019}t", "über"]);
        assert_eq!(s.quote_count, 2);
        assert_eq!(s.question_count, 1);
    }

    #[test]
    fn sentences() {
        assert_eq!(count_sentences("One. Two! Three?"), 3);
        assert_eq!(count_sentences("No terminator"), 1);
        assert_eq!(count_sentences("3.5 is a number."), 1);
        assert_eq!(count_sentences("..."), 0);
        assert_eq!(count_sentences(""), 0);
    }
}
