#ifndef DEPDYN_VECTORIZE_HPP
#define DEPDYN_VECTORIZE_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depdyn/textprep.hpp"

namespace depdyn::vectorize {

enum class FeatureMode { MM, TFIDF, MM_TFIDF };

std::string to_string(FeatureMode mode);
std::optional<FeatureMode> feature_mode_from_string(const std::string& s);

struct TfidfModel {
    std::map<std::string, std::uint32_t> vocab;  // term -> column
    std::vector<std::string> terms;              // column -> term
    std::vector<std::uint32_t> df;               // column -> document frequency
    std::size_t n_docs = 0;
    std::size_t min_df = 1;
    std::size_t max_features = 0;

    std::size_t vocab_size() const { return terms.size(); }

    void save(const std::string& path) const;
    static TfidfModel load(const std::string& path);
};

// Vocabulary = terms with df >= min_df, truncated to max_features by
// descending corpus term frequency (ties lexicographic ascending); columns
// are assigned in lexicographic term order.
TfidfModel fit_tfidf(const std::vector<textprep::TokenDoc>& docs, std::size_t min_df,
                     std::size_t max_features);

// ltf = 1 + log10(1 + tf); idf = log10(N / df); weight = ltf * idf.
// Out-of-vocabulary terms and df == N terms (weight exactly 0) emit nothing.
// Entries come back sorted by column.
std::vector<std::pair<std::uint32_t, double>> tfidf_transform(const TfidfModel& model,
                                                              const textprep::TokenDoc& doc);

// Sparse TF-IDF block plus dense multi-modal block.  In MM_TFIDF mode the
// dense block is addressed as columns vocab_size .. vocab_size+dense-1; in
// MM mode it starts at column 0.
struct FeatureVector {
    FeatureMode mode = FeatureMode::TFIDF;
    std::vector<std::pair<std::uint32_t, double>> sparse;  // strictly increasing columns
    std::vector<double> dense;
    std::size_t dense_offset = 0;
    std::size_t dimension = 0;

    // Applies fn(column, value) over every stored entry in column order.
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (const auto& [col, val] : sparse) fn(static_cast<std::size_t>(col), val);
        for (std::size_t i = 0; i < dense.size(); ++i) fn(dense_offset + i, dense[i]);
    }
};

// Dense layout: [pos, neg, theta_1..theta_K, s_1..s_9, antidep]; 37 wide at
// the default K=25.
std::vector<double> pack_dense_block(std::span<const double> emotion,
                                     std::span<const double> theta,
                                     std::span<const double> domain);

FeatureVector assemble_features(std::vector<std::pair<std::uint32_t, double>> tfidf_sparse,
                                std::vector<double> dense_block, FeatureMode mode,
                                std::size_t vocab_size);

// Text export: header "rows cols nnz", then "row col value" triplets
// (0-based, row-major order).
void export_sparse_matrix(const std::vector<FeatureVector>& rows, std::ostream& out);

}  // namespace depdyn::vectorize

#endif
