#ifndef WORDREC_LEXICON_HPP
#define WORDREC_LEXICON_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wordrec {

// Pronunciation dictionary: lowercase word -> ARPAbet phoneme symbols.
struct Lexicon {
    std::map<std::string, std::vector<std::string>> entries;

    // Covers the default vocabulary (digit names plus "plus"/"minus").
    static Lexicon builtin();
};

struct OutOfVocabulary : std::runtime_error {
    std::vector<std::string> words;
    explicit OutOfVocabulary(std::vector<std::string> unknown);
};

// Parse the plain-text lexicon format: one entry per line,
// "word<TAB>PH PH PH". Blank lines and lines starting with '#' are skipped.
Lexicon parse_lexicon(const std::string& text);

// Tokenize on whitespace, lowercase, alias single digits to their word names
// ("7" -> "seven"), and look every token up. One phoneme list per word keeps
// the word boundaries explicit.
std::vector<std::vector<std::string>> text_to_phonemes(const std::string& text,
                                                       const Lexicon& lex = Lexicon::builtin());

}  // namespace wordrec

#endif
