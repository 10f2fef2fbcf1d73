#ifndef DEPDYN_TEXTPREP_HPP
#define DEPDYN_TEXTPREP_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "depdyn/corpus.hpp"

namespace depdyn::textprep {

// Normalized, stopword-filtered, stemmed view of one tweet.  emotion_tokens
// carries the preserved emoji/emoticon glyphs that normalization keeps for
// the emotion extractor; they are not part of `tokens`.
struct TokenDoc {
    std::string record_ref;                   // source TweetRecord id
    std::vector<std::string> tokens;          // stemmed lowercase word tokens
    std::size_t raw_token_count = 0;          // whitespace tokens after mention/URL removal
    std::vector<std::string> emotion_tokens;  // preserved glyph tokens, verbatim
};

struct PreprocessConfig {
    std::string language = "en";
    std::size_t min_words = 5;  // on raw tokens, before stopword removal
};

// Lowercases, strips @mentions, URLs (http/https/www/t.co forms) and
// punctuation, and collapses whitespace.  Standalone emoji and emoticon
// glyphs survive untouched so the emotion extractor can see them.
// Idempotent.
std::string normalize(const std::string& raw);

// Whitespace split with stopword removal; order and duplicates preserved.
std::vector<std::string> tokenize_and_filter(const std::string& normalized,
                                             const std::set<std::string>& stopwords);

// Full pipeline: language filter, normalize, length filter, glyph capture,
// stopword removal, stemming.  Empty optional when the record is filtered
// out (wrong language or fewer than min_words raw tokens).
std::optional<TokenDoc> preprocess(const corpus::TweetRecord& record,
                                   const std::set<std::string>& stopwords,
                                   const PreprocessConfig& config = {});

// True for tokens made of [a-z0-9'] only; everything else is treated as an
// emoji/emoticon glyph.
bool is_wordlike(const std::string& token);

// Stopword file: one token per line, '#' comments, blank lines ignored.
std::set<std::string> load_stopwords(const std::string& path);

}  // namespace depdyn::textprep

#endif
