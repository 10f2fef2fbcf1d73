#include "depdyn/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "depdyn/errors.hpp"

namespace depdyn::vectorize {

std::string to_string(FeatureMode mode) {
    switch (mode) {
        case FeatureMode::MM: return "MM";
        case FeatureMode::TFIDF: return "TFIDF";
        case FeatureMode::MM_TFIDF: return "MM_TFIDF";
    }
    return "?";
}

std::optional<FeatureMode> feature_mode_from_string(const std::string& s) {
    if (s == "MM" || s == "mm") return FeatureMode::MM;
    if (s == "TFIDF" || s == "tfidf") return FeatureMode::TFIDF;
    if (s == "MM_TFIDF" || s == "mm_tfidf") return FeatureMode::MM_TFIDF;
    return std::nullopt;
}

TfidfModel fit_tfidf(const std::vector<textprep::TokenDoc>& docs, std::size_t min_df,
                     std::size_t max_features) {
    if (docs.empty()) throw TrainError("cannot fit TF-IDF on an empty corpus");
    if (min_df < 1) throw TrainError("min_df must be >= 1");
    if (max_features < 1) throw TrainError("max_features must be >= 1");

    std::map<std::string, std::uint32_t> doc_freq;
    std::map<std::string, std::uint64_t> corpus_freq;
    for (const auto& doc : docs) {
        std::map<std::string, std::uint32_t> counts;
        for (const auto& tok : doc.tokens) ++counts[tok];
        for (const auto& [term, c] : counts) {
            ++doc_freq[term];
            corpus_freq[term] += c;
        }
    }

    std::vector<std::string> retained;
    for (const auto& [term, df] : doc_freq) {
        if (df >= min_df) retained.push_back(term);
    }
    if (retained.empty()) {
        throw TrainError("TF-IDF vocabulary is empty after min_df=" + std::to_string(min_df) +
                         " filtering");
    }
    if (retained.size() > max_features) {
        std::sort(retained.begin(), retained.end(), [&](const auto& a, const auto& b) {
            const auto fa = corpus_freq[a], fb = corpus_freq[b];
            return fa != fb ? fa > fb : a < b;
        });
        retained.resize(max_features);
        std::sort(retained.begin(), retained.end());
    }

    TfidfModel model;
    model.n_docs = docs.size();
    model.min_df = min_df;
    model.max_features = max_features;
    model.terms = std::move(retained);
    model.df.reserve(model.terms.size());
    for (std::uint32_t col = 0; col < model.terms.size(); ++col) {
        model.vocab[model.terms[col]] = col;
        model.df.push_back(doc_freq[model.terms[col]]);
    }
    return model;
}

std::vector<std::pair<std::uint32_t, double>> tfidf_transform(const TfidfModel& model,
                                                              const textprep::TokenDoc& doc) {
    if (model.n_docs == 0 || model.terms.empty()) {
        throw TrainError("TF-IDF model is not fitted");
    }
    std::map<std::uint32_t, std::uint32_t> tf;
    for (const auto& tok : doc.tokens) {
        const auto it = model.vocab.find(tok);
        if (it != model.vocab.end()) ++tf[it->second];
    }
    std::vector<std::pair<std::uint32_t, double>> out;
    out.reserve(tf.size());
    const double n = static_cast<double>(model.n_docs);
    for (const auto& [col, count] : tf) {
        const double df = static_cast<double>(model.df[col]);
        const double idf = std::log10(n / df);
        if (idf == 0.0) continue;  // df == N carries no information
        const double ltf = 1.0 + std::log10(1.0 + static_cast<double>(count));
        out.emplace_back(col, ltf * idf);
    }
    return out;  // std::map iteration is already column-sorted
}

std::vector<double> pack_dense_block(std::span<const double> emotion,
                                     std::span<const double> theta,
                                     std::span<const double> domain) {
    std::vector<double> dense;
    dense.reserve(emotion.size() + theta.size() + domain.size());
    dense.insert(dense.end(), emotion.begin(), emotion.end());
    dense.insert(dense.end(), theta.begin(), theta.end());
    dense.insert(dense.end(), domain.begin(), domain.end());
    return dense;
}

FeatureVector assemble_features(std::vector<std::pair<std::uint32_t, double>> tfidf_sparse,
                                std::vector<double> dense_block, FeatureMode mode,
                                std::size_t vocab_size) {
    FeatureVector fv;
    fv.mode = mode;
    switch (mode) {
        case FeatureMode::MM:
            if (dense_block.empty()) throw DimensionError("MM mode requires a dense block");
            fv.dense = std::move(dense_block);
            fv.dense_offset = 0;
            fv.dimension = fv.dense.size();
            break;
        case FeatureMode::TFIDF:
            if (vocab_size == 0) throw DimensionError("TFIDF mode requires a vocabulary");
            fv.sparse = std::move(tfidf_sparse);
            fv.dimension = vocab_size;
            break;
        case FeatureMode::MM_TFIDF:
            if (dense_block.empty()) throw DimensionError("MM_TFIDF mode requires a dense block");
            if (vocab_size == 0) throw DimensionError("MM_TFIDF mode requires a vocabulary");
            fv.sparse = std::move(tfidf_sparse);
            fv.dense = std::move(dense_block);
            fv.dense_offset = vocab_size;
            fv.dimension = vocab_size + fv.dense.size();
            break;
    }
    for (std::size_t i = 0; i < fv.sparse.size(); ++i) {
        if (fv.sparse[i].first >= vocab_size) {
            throw DimensionError("sparse column beyond vocabulary size");
        }
        if (i > 0 && fv.sparse[i].first <= fv.sparse[i - 1].first) {
            throw DimensionError("sparse columns must be strictly increasing");
        }
    }
    for (const double v : fv.dense) {
        if (!std::isfinite(v)) throw DimensionError("non-finite dense feature");
    }
    return fv;
}

void export_sparse_matrix(const std::vector<FeatureVector>& rows, std::ostream& out) {
    std::size_t cols = 0, nnz = 0;
    for (const auto& r : rows) {
        cols = std::max(cols, r.dimension);
        nnz += r.sparse.size() + r.dense.size();
    }
    out << rows.size() << ' ' << cols << ' ' << nnz << '\n';
    char buf[64];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].for_each([&](std::size_t col, double val) {
            std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i, col, val);
            out << buf;
        });
    }
}

void TfidfModel::save(const std::string& path) const {
    nlohmann::json j;
    j["format_version"] = 1;
    j["artifact"] = "tfidf_model";
    j["terms"] = terms;
    j["df"] = df;
    j["n_docs"] = n_docs;
    j["min_df"] = min_df;
    j["max_features"] = max_features;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write TF-IDF model: " + path);
    out << j.dump(2) << '\n';
}

TfidfModel TfidfModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open TF-IDF model: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || j.value("artifact", "") != "tfidf_model") {
        throw FormatError("not a TF-IDF model artifact: " + path);
    }
    TfidfModel m;
    try {
        m.terms = j.at("terms").get<std::vector<std::string>>();
        m.df = j.at("df").get<std::vector<std::uint32_t>>();
        m.n_docs = j.at("n_docs").get<std::size_t>();
        m.min_df = j.at("min_df").get<std::size_t>();
        m.max_features = j.at("max_features").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed TF-IDF model: ") + e.what());
    }
    if (m.df.size() != m.terms.size()) throw FormatError("TF-IDF df/terms size mismatch");
    for (const auto df : m.df) {
        if (df < 1 || df > m.n_docs) throw FormatError("TF-IDF df out of [1, N]");
    }
    for (std::uint32_t col = 0; col < m.terms.size(); ++col) m.vocab[m.terms[col]] = col;
    return m;
}

}  // namespace depdyn::vectorize
