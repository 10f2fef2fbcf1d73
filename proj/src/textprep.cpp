#include "depdyn/textprep.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "depdyn/errors.hpp"
#include "depdyn/porter.hpp"

namespace depdyn::textprep {

namespace {

// ASCII emoticons preserved verbatim (checked before lowercasing).
const std::array<const char*, 22> kEmoticons = {
    ":)", ":-)", ":(", ":-(", ":D", ":-D", ":P", ":-P", ";)", ";-)", ":'(",
    ":/", ":-/", ":|", "=)", "=(", "<3", "</3", "xD", "XD", "D:", ";(",
};

bool is_emoticon(const std::string& tok) {
    for (const char* e : kEmoticons) {
        if (tok == e) return true;
    }
    return false;
}

// Any byte outside ASCII counts as part of an emoji/symbol glyph.
bool has_non_ascii(const std::string& tok) {
    for (unsigned char c : tok) {
        if (c >= 0x80) return true;
    }
    return false;
}

bool is_mention(const std::string& tok) {
    return !tok.empty() && tok[0] == '@' && tok.size() > 1;
}

bool is_url(const std::string& tok) {
    auto starts = [&](const char* p) { return tok.rfind(p, 0) == 0; };
    return starts("http://") || starts("https://") || starts("www.") || starts("t.co/") ||
           tok == "t.co";
}

std::vector<std::string> whitespace_split(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            if (!cur.empty()) {
                out.push_back(std::move(cur));
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// Lowercase, keep [a-z0-9'], trim outer apostrophes.
std::string word_core(const std::string& tok) {
    std::string out;
    out.reserve(tok.size());
    for (unsigned char c : tok) {
        const unsigned char lc = static_cast<unsigned char>(std::tolower(c));
        if ((lc >= 'a' && lc <= 'z') || (lc >= '0' && lc <= '9') || lc == '\'') {
            out.push_back(static_cast<char>(lc));
        }
    }
    std::size_t begin = 0, end = out.size();
    while (begin < end && out[begin] == '\'') ++begin;
    while (end > begin && out[end - 1] == '\'') --end;
    return out.substr(begin, end - begin);
}

}  // namespace

bool is_wordlike(const std::string& token) {
    if (token.empty()) return false;
    for (unsigned char c : token) {
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'')) return false;
    }
    return true;
}

std::string normalize(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (const std::string& tok : whitespace_split(raw)) {
        if (is_mention(tok) || is_url(tok)) continue;
        std::string kept;
        if (is_emoticon(tok) || has_non_ascii(tok)) {
            kept = tok;  // glyph, preserved verbatim
        } else {
            kept = word_core(tok);
        }
        if (kept.empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += kept;
    }
    return out;
}

std::vector<std::string> tokenize_and_filter(const std::string& normalized,
                                             const std::set<std::string>& stopwords) {
    std::vector<std::string> out;
    for (std::string& tok : whitespace_split(normalized)) {
        if (stopwords.count(tok)) continue;
        out.push_back(std::move(tok));
    }
    return out;
}

std::optional<TokenDoc> preprocess(const corpus::TweetRecord& record,
                                   const std::set<std::string>& stopwords,
                                   const PreprocessConfig& config) {
    if (record.lang != config.language) return std::nullopt;

    const std::string norm = normalize(record.text);
    const std::vector<std::string> raw_tokens = whitespace_split(norm);
    if (raw_tokens.size() < config.min_words) return std::nullopt;

    TokenDoc doc;
    doc.record_ref = record.id;
    doc.raw_token_count = raw_tokens.size();
    std::vector<std::string> words;
    for (const std::string& tok : raw_tokens) {
        if (is_wordlike(tok)) {
            words.push_back(tok);
        } else {
            doc.emotion_tokens.push_back(tok);
        }
    }
    for (std::string& tok : words) {
        if (stopwords.count(tok)) continue;
        doc.tokens.push_back(porter_stem(tok));
    }
    if (doc.tokens.empty()) return std::nullopt;
    return doc;
}

std::set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stopword list: " + path);
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) words.insert(tok);
    }
    return words;
}

}  // namespace depdyn::textprep
