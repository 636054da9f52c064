#include "wordrec/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace wordrec {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

const char* kDigitNames[10] = {"zero", "one", "two",   "three", "four",
                               "five", "six", "seven", "eight", "nine"};

}  // namespace

Lexicon Lexicon::builtin() {
    Lexicon lex;
    lex.entries = {
        {"zero", {"Z", "IH", "R", "OW"}},
        {"one", {"W", "AH", "N"}},
        {"two", {"T", "UW"}},
        {"three", {"TH", "R", "IY"}},
        {"four", {"F", "AO", "R"}},
        {"five", {"F", "AY", "V"}},
        {"six", {"S", "IH", "K", "S"}},
        {"seven", {"S", "EH", "V", "AH", "N"}},
        {"eight", {"EY", "T"}},
        {"nine", {"N", "AY", "N"}},
        {"plus", {"P", "L", "AH", "S"}},
        {"minus", {"M", "AY", "N", "AH", "S"}},
    };
    return lex;
}

OutOfVocabulary::OutOfVocabulary(std::vector<std::string> unknown)
    : std::runtime_error([&unknown] {
          std::string msg = "OutOfVocabulary:";
          for (const auto& w : unknown) msg += " " + w;
          return msg;
      }()),
      words(std::move(unknown)) {}

Lexicon parse_lexicon(const std::string& text) {
    Lexicon lex;
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw std::invalid_argument("lexicon line " + std::to_string(line_no) +
                                        ": expected \"word<TAB>phonemes\"");
        const std::string word = to_lower(line.substr(0, tab));
        std::istringstream phones(line.substr(tab + 1));
        std::vector<std::string> sequence;
        std::string ph;
        while (phones >> ph) sequence.push_back(ph);
        if (sequence.empty())
            throw std::invalid_argument("lexicon line " + std::to_string(line_no) +
                                        ": no phonemes for \"" + word + "\"");
        lex.entries[word] = std::move(sequence);
    }
    return lex;
}

std::vector<std::vector<std::string>> text_to_phonemes(const std::string& text,
                                                       const Lexicon& lex) {
    std::istringstream words(text);
    std::vector<std::string> tokens;
    std::string token;
    while (words >> token) tokens.push_back(to_lower(token));
    if (tokens.empty()) throw std::invalid_argument("text is empty");

    std::vector<std::vector<std::string>> result;
    std::vector<std::string> unknown;
    for (auto& t : tokens) {
        if (t.size() == 1 && std::isdigit(static_cast<unsigned char>(t[0])))
            t = kDigitNames[t[0] - '0'];
        const auto it = lex.entries.find(t);
        if (it == lex.entries.end()) {
            unknown.push_back(t);
            continue;
        }
        result.push_back(it->second);
    }
    if (!unknown.empty()) throw OutOfVocabulary(std::move(unknown));
    return result;
}

}  // namespace wordrec
