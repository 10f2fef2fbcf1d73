#ifndef DEPDYN_LEXICONS_HPP
#define DEPDYN_LEXICONS_HPP

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "depdyn/textprep.hpp"

namespace depdyn::lexicons {

inline constexpr std::size_t kSymptomCategories = 9;
inline constexpr std::size_t kDomainDims = kSymptomCategories + 1;  // + antidepressants
inline constexpr std::size_t kEmotionDims = 2;

// Fixed category order (index = paper's list position - 1).
const std::array<std::string, kSymptomCategories>& symptom_category_names();

// Word entries are stored as Porter stems; emoji/emoticon glyphs verbatim.
struct TermSet {
    std::set<std::string> word_stems;
    std::set<std::string> glyphs;

    bool contains_word(const std::string& stem) const { return word_stems.count(stem) > 0; }
    bool contains_glyph(const std::string& glyph) const { return glyphs.count(glyph) > 0; }
    std::size_t size() const { return word_stems.size() + glyphs.size(); }
};

struct EmotionLexicon {
    TermSet positive;
    TermSet negative;
};

struct SymptomLexicons {
    std::array<TermSet, kSymptomCategories> categories;
    TermSet antidepressants;
};

// Static word-embedding table: vocab -> fixed-dimension vector.
class EmbeddingTable {
public:
    static EmbeddingTable load(const std::string& path);

    bool empty() const { return index_.empty(); }
    std::size_t size() const { return index_.size(); }
    std::size_t dimension() const { return dim_; }
    const std::vector<double>* vector_of(const std::string& word) const;
    const std::map<std::string, std::vector<double>>& entries() const { return index_; }

private:
    std::map<std::string, std::vector<double>> index_;
    std::size_t dim_ = 0;
};

// Section-header lexicon files: [positive]/[negative] make an EmotionLexicon,
// [symptom:1..9]/[antidepressant] make SymptomLexicons.  A file must contain
// exactly one of the two shapes.
using LoadedLexicon = std::variant<EmotionLexicon, SymptomLexicons>;
LoadedLexicon load_lexicon(const std::string& path);
EmotionLexicon load_emotion_lexicon(const std::string& path);
SymptomLexicons load_symptom_lexicons(const std::string& path);

// Raw sections in file order, before stemming; used by keyword expansion to
// rewrite lexicon files on their surface forms.
using RawLexiconSections = std::vector<std::pair<std::string, std::vector<std::string>>>;
RawLexiconSections read_lexicon_sections(const std::string& path);

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

struct ExpandResult {
    std::set<std::string> terms;
    std::vector<std::string> warnings;
};

// seeds united with the top-k cosine neighbors (similarity >= min_sim) of
// each seed found in the table.  Ties break on higher similarity first, then
// lexicographic term order.  Seeds absent from the table contribute nothing.
ExpandResult expand_keywords(const std::set<std::string>& seeds, const EmbeddingTable& table,
                             std::size_t k, double min_sim);

// (positive_score, negative_score): matched occurrences / raw_token_count.
std::array<double, kEmotionDims> emotion_features(const textprep::TokenDoc& doc,
                                                  const EmotionLexicon& lex);

// Nine symptom dims in category order, then antidepressants; normalized by
// raw_token_count.
std::array<double, kDomainDims> domain_features(const textprep::TokenDoc& doc,
                                                const SymptomLexicons& lex);

}  // namespace depdyn::lexicons

#endif
