#include "depdyn/lexicons.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "depdyn/errors.hpp"
#include "depdyn/porter.hpp"

namespace depdyn::lexicons {

namespace {

std::string lowercase_ascii(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void insert_entry(TermSet& set, const std::string& raw_entry) {
    const std::string lowered = lowercase_ascii(raw_entry);
    if (textprep::is_wordlike(lowered)) {
        set.word_stems.insert(textprep::porter_stem(lowered));
    } else {
        set.glyphs.insert(raw_entry);
    }
}

struct RawSections {
    RawLexiconSections sections;
};

RawSections read_sections(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon file: " + path);
    RawSections raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw FormatError(path + ":" + std::to_string(lineno) + ": unterminated header");
            }
            raw.sections.emplace_back(lowercase_ascii(line.substr(1, line.size() - 2)),
                                      std::vector<std::string>{});
        } else {
            if (raw.sections.empty()) {
                throw FormatError(path + ":" + std::to_string(lineno) +
                                  ": entry before any section header");
            }
            raw.sections.back().second.push_back(line);
        }
    }
    return raw;
}

bool overlapping(const TermSet& a, const TermSet& b, std::string& witness) {
    for (const auto& w : a.word_stems) {
        if (b.word_stems.count(w)) {
            witness = w;
            return true;
        }
    }
    for (const auto& g : a.glyphs) {
        if (b.glyphs.count(g)) {
            witness = g;
            return true;
        }
    }
    return false;
}

int symptom_index(const std::string& header) {
    if (header.rfind("symptom:", 0) != 0) return -1;
    const std::string num = header.substr(8);
    if (num.empty() || num.size() > 1 || num[0] < '1' || num[0] > '9') return -1;
    return num[0] - '1';
}

EmotionLexicon build_emotion(const RawSections& raw, const std::string& path) {
    EmotionLexicon lex;
    for (const auto& [header, entries] : raw.sections) {
        TermSet* target = nullptr;
        if (header == "positive") target = &lex.positive;
        else if (header == "negative") target = &lex.negative;
        else throw FormatError(path + ": unknown section [" + header + "] in emotion lexicon");
        for (const auto& e : entries) insert_entry(*target, e);
    }
    std::string witness;
    if (overlapping(lex.positive, lex.negative, witness)) {
        throw FormatError(path + ": entry in both polarities: " + witness);
    }
    return lex;
}

SymptomLexicons build_symptoms(const RawSections& raw, const std::string& path) {
    SymptomLexicons lex;
    std::array<bool, kSymptomCategories> seen{};
    bool seen_antidep = false;
    for (const auto& [header, entries] : raw.sections) {
        TermSet* target = nullptr;
        if (header == "antidepressant") {
            target = &lex.antidepressants;
            seen_antidep = true;
        } else {
            const int idx = symptom_index(header);
            if (idx < 0) {
                throw FormatError(path + ": unknown section [" + header + "] in symptom lexicon");
            }
            target = &lex.categories[static_cast<std::size_t>(idx)];
            seen[static_cast<std::size_t>(idx)] = true;
        }
        for (const auto& e : entries) insert_entry(*target, e);
    }
    for (std::size_t i = 0; i < kSymptomCategories; ++i) {
        if (!seen[i]) {
            throw FormatError(path + ": missing section [symptom:" + std::to_string(i + 1) + "]");
        }
    }
    if (!seen_antidep) throw FormatError(path + ": missing section [antidepressant]");
    return lex;
}

std::size_t count_matches(const std::vector<std::string>& stems,
                          const std::vector<std::string>& glyphs, const TermSet& set) {
    std::size_t n = 0;
    for (const auto& t : stems) n += set.contains_word(t) ? 1 : 0;
    for (const auto& g : glyphs) n += set.contains_glyph(g) ? 1 : 0;
    return n;
}

}  // namespace

RawLexiconSections read_lexicon_sections(const std::string& path) {
    return read_sections(path).sections;
}

const std::array<std::string, kSymptomCategories>& symptom_category_names() {
    static const std::array<std::string, kSymptomCategories> names = {
        "depressed_mood",       "loss_of_interest",    "weight_appetite_change",
        "sleep_disturbance",    "psychomotor_changes", "fatigue",
        "worthlessness",        "reduced_concentration", "suicidal_ideation",
    };
    return names;
}

LoadedLexicon load_lexicon(const std::string& path) {
    const RawSections raw = read_sections(path);
    bool emotionish = false, symptomish = false;
    for (const auto& [header, _] : raw.sections) {
        if (header == "positive" || header == "negative") emotionish = true;
        else symptomish = true;
    }
    if (emotionish && symptomish) {
        throw FormatError(path + ": mixes emotion and symptom sections");
    }
    if (emotionish) return build_emotion(raw, path);
    return build_symptoms(raw, path);
}

EmotionLexicon load_emotion_lexicon(const std::string& path) {
    return build_emotion(read_sections(path), path);
}

SymptomLexicons load_symptom_lexicons(const std::string& path) {
    return build_symptoms(read_sections(path), path);
}

EmbeddingTable EmbeddingTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open embedding file: " + path);
    EmbeddingTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        std::vector<double> vec;
        double v = 0.0;
        while (ls >> v) {
            if (!std::isfinite(v)) {
                throw FormatError(path + ":" + std::to_string(lineno) + ": non-finite component");
            }
            vec.push_back(v);
        }
        if (vec.empty()) {
            throw FormatError(path + ":" + std::to_string(lineno) + ": no vector components");
        }
        if (table.dim_ == 0) table.dim_ = vec.size();
        if (vec.size() != table.dim_) {
            throw FormatError(path + ":" + std::to_string(lineno) + ": dimension mismatch (" +
                              std::to_string(vec.size()) + " vs " + std::to_string(table.dim_) +
                              ")");
        }
        table.index_[lowercase_ascii(word)] = std::move(vec);
    }
    return table;
}

const std::vector<double>* EmbeddingTable::vector_of(const std::string& word) const {
    const auto it = index_.find(word);
    return it == index_.end() ? nullptr : &it->second;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

ExpandResult expand_keywords(const std::set<std::string>& seeds, const EmbeddingTable& table,
                             std::size_t k, double min_sim) {
    ExpandResult result;
    result.terms = seeds;
    if (k == 0) return result;
    if (table.empty()) {
        result.warnings.push_back("embedding table is empty; returning seeds unchanged");
        return result;
    }
    for (const auto& seed : seeds) {
        const std::vector<double>* sv = table.vector_of(seed);
        if (!sv) continue;
        std::vector<std::pair<double, std::string>> ranked;
        for (const auto& [word, vec] : table.entries()) {
            if (word == seed) continue;
            const double sim = cosine_similarity(*sv, vec);
            if (sim >= min_sim) ranked.emplace_back(sim, word);
        }
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        if (ranked.size() > k) ranked.resize(k);
        for (auto& [sim, word] : ranked) result.terms.insert(word);
    }
    return result;
}

std::array<double, kEmotionDims> emotion_features(const textprep::TokenDoc& doc,
                                                  const EmotionLexicon& lex) {
    std::array<double, kEmotionDims> out{0.0, 0.0};
    if (doc.raw_token_count == 0) return out;
    const double denom = static_cast<double>(doc.raw_token_count);
    out[0] = static_cast<double>(count_matches(doc.tokens, doc.emotion_tokens, lex.positive)) /
             denom;
    out[1] = static_cast<double>(count_matches(doc.tokens, doc.emotion_tokens, lex.negative)) /
             denom;
    return out;
}

std::array<double, kDomainDims> domain_features(const textprep::TokenDoc& doc,
                                                const SymptomLexicons& lex) {
    std::array<double, kDomainDims> out{};
    if (doc.raw_token_count == 0) return out;
    const double denom = static_cast<double>(doc.raw_token_count);
    for (std::size_t i = 0; i < kSymptomCategories; ++i) {
        out[i] = static_cast<double>(
                     count_matches(doc.tokens, doc.emotion_tokens, lex.categories[i])) /
                 denom;
    }
    out[kSymptomCategories] =
        static_cast<double>(count_matches(doc.tokens, doc.emotion_tokens, lex.antidepressants)) /
        denom;
    return out;
}

}  // namespace depdyn::lexicons
