use super::tokenize::{count_sentences, tokenize};
use crate::error::TextError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Readability {
    pub flesch: f64,
    pub coleman_liau: f64,
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Vowel-group syllable estimate with a silent final `e`; never below 1.
pub fn syllables(word: &str) -> usize {
    let chars: alloc::vec::Vec<char> = word.chars().filter(|c| c.is_alphabetic()).collect();
    let mut groups = 0;
    let mut prev = false;
    for &c in &chars {
        let v = is_vowel(c);
        if v && !prev {
            groups += 1;
        }
        prev = v;
    }
    let n = chars.len();
    if groups > 1
        && n >= 2
        && chars[n - 1] == 'e'
        && !is_vowel(chars[n - 2])
        && !(n >= 3 && chars[n - 2] == 'l' && !is_vowel(chars[n - 3]))
    {
        groups -= 1;
    }
    groups.max(1)
}

/// Flesch reading ease and Coleman-Liau index of `text`.
pub fn readability(text: &str) -> Result<Readability, TextError> {
    let stream = tokenize(text);
    if stream.is_empty() {
        return Err(TextError::NoWords);
    }
    let words = stream.len() as f64;
    let sentences = count_sentences(text).max(1) as f64;
    let syl: usize = stream.tokens.iter().map(|t| syllables(t)).sum();
    let letters: usize = stream
        .tokens
        .iter()
        .map(|t| t.chars().filter(|c| c.is_alphabetic()).count())
        .sum();
    let flesch = 206.835 - 1.015 * (words / sentences) - 84.6 * (syl as f64 / words);
    let l = letters as f64 / words * 100.0;
    let s = sentences / words * 100.0;
    Ok(Readability {
        flesch,
        coleman_liau: 0.0588 * l - 0.296 * s - 15.8,
    })
}
