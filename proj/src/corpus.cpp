#include "depdyn/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "depdyn/errors.hpp"
#include "depdyn/rng.hpp"

namespace depdyn::corpus {

namespace {

bool parse_record(const std::string& line, TweetRecord& out) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return false;
    const auto* id = j.contains("id") && j["id"].is_string() ? &j["id"] : nullptr;
    if (!id || id->get_ref<const std::string&>().empty()) return false;
    if (!j.contains("created_at") || !j["created_at"].is_string()) return false;
    const auto ts = UtcTime::parse_iso8601(j["created_at"].get_ref<const std::string&>());
    if (!ts) return false;
    if (!j.contains("region_id") || !j["region_id"].is_string()) return false;
    if (!j.contains("lang") || !j["lang"].is_string()) return false;
    if (!j.contains("text") || !j["text"].is_string()) return false;
    out.id = id->get<std::string>();
    out.created_at = *ts;
    out.region_id = j["region_id"].get<std::string>();
    out.lang = j["lang"].get<std::string>();
    out.text = j["text"].get<std::string>();
    return true;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

// Sorted-by-id index lists per class; ties on id broken by position so the
// result is well-defined even with duplicate ids.
std::array<std::vector<std::size_t>, 2> class_indices_sorted(
    const std::vector<LabeledExample>& examples) {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const int label = examples[i].label;
        if (label != 0 && label != 1) {
            throw FormatError("label must be 0 or 1, got " + std::to_string(label));
        }
        by_class[static_cast<std::size_t>(label)].push_back(i);
    }
    for (auto& idx : by_class) {
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            const auto& ia = examples[a].record.id;
            const auto& ib = examples[b].record.id;
            return ia != ib ? ia < ib : a < b;
        });
    }
    return by_class;
}

}  // namespace

IngestResult ingest_jsonl(std::istream& source) {
    if (!source) throw IoError("unreadable corpus source");
    IngestResult result;
    std::string line;
    std::size_t considered = 0;
    while (std::getline(source, line)) {
        if (blank(line)) continue;
        ++considered;
        TweetRecord rec;
        if (parse_record(line, rec)) {
            result.records.push_back(std::move(rec));
        } else {
            ++result.skipped;
        }
    }
    if (source.bad()) throw IoError("I/O failure while reading corpus");
    if (considered > 0 && result.skipped * 2 > considered) {
        throw FormatError("corpus format mismatch: " + std::to_string(result.skipped) + " of " +
                          std::to_string(considered) + " lines malformed");
    }
    return result;
}

IngestResult ingest_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file: " + path);
    return ingest_jsonl(in);
}

void serialize_jsonl(const std::vector<TweetRecord>& records, std::ostream& out) {
    for (const auto& r : records) {
        nlohmann::json j;
        j["id"] = r.id;
        j["created_at"] = r.created_at.to_iso8601();
        j["region_id"] = r.region_id;
        j["lang"] = r.lang;
        j["text"] = r.text;
        out << j.dump() << '\n';
    }
}

LabeledLoad load_labeled(std::istream& pos_source, std::istream& neg_source) {
    IngestResult pos = ingest_jsonl(pos_source);
    IngestResult neg = ingest_jsonl(neg_source);
    if (pos.records.empty() || neg.records.empty()) {
        throw FormatError("labeled corpus needs both classes: positives=" +
                          std::to_string(pos.records.size()) +
                          " negatives=" + std::to_string(neg.records.size()));
    }
    LabeledLoad load;
    load.positives = pos.records.size();
    load.negatives = neg.records.size();
    load.skipped = pos.skipped + neg.skipped;
    load.examples.reserve(load.positives + load.negatives);
    for (auto& r : pos.records) load.examples.push_back({std::move(r), 1});
    for (auto& r : neg.records) load.examples.push_back({std::move(r), 0});
    return load;
}

LabeledLoad load_labeled_files(const std::string& pos_path, const std::string& neg_path) {
    std::ifstream pos(pos_path);
    if (!pos) throw IoError("cannot open positive corpus: " + pos_path);
    std::ifstream neg(neg_path);
    if (!neg) throw IoError("cannot open negative corpus: " + neg_path);
    return load_labeled(pos, neg);
}

SplitResult split(const std::vector<LabeledExample>& examples, double train_fraction,
                  std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw TrainError("train_fraction must be in (0,1)");
    }
    if (examples.size() < 2) throw TrainError("need at least 2 examples to split");

    auto by_class = class_indices_sorted(examples);
    for (const auto& idx : by_class) {
        if (idx.size() < 2) throw TrainError("stratified split needs >=2 examples per class");
    }

    // Total train count is round(f*n); per-class quotas start at floor(f*n_c)
    // and the remainder goes to classes by descending fractional part.
    const double n = static_cast<double>(examples.size());
    std::size_t train_total =
        static_cast<std::size_t>(std::llround(train_fraction * n));
    train_total = std::min(std::max<std::size_t>(train_total, 1), examples.size() - 1);

    std::array<std::size_t, 2> quota{};
    std::array<double, 2> frac{};
    std::size_t assigned = 0;
    for (int c = 0; c < 2; ++c) {
        const double want = train_fraction * static_cast<double>(by_class[c].size());
        quota[c] = static_cast<std::size_t>(want);
        frac[c] = want - static_cast<double>(quota[c]);
        assigned += quota[c];
    }
    while (assigned < train_total) {
        const int c = (frac[0] >= frac[1]) ? 0 : 1;
        if (quota[c] < by_class[c].size()) {
            ++quota[c];
            frac[c] = -1.0;
        } else {
            ++quota[1 - c];
        }
        ++assigned;
    }
    // Keep both sides of each class non-empty where possible.
    for (int c = 0; c < 2; ++c) {
        quota[c] = std::min(quota[c], by_class[c].size() - 1);
        quota[c] = std::max<std::size_t>(quota[c], 1);
    }

    SplitResult out;
    for (int c = 0; c < 2; ++c) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        rng.shuffle(by_class[c]);
        for (std::size_t i = 0; i < by_class[c].size(); ++i) {
            (i < quota[c] ? out.train : out.test).push_back(by_class[c][i]);
        }
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

std::vector<std::vector<std::size_t>> FoldPlan::fold_indices() const {
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        folds[assignments[i]].push_back(i);
    }
    return folds;
}

FoldPlan kfold(const std::vector<LabeledExample>& examples, std::size_t k,
               std::uint64_t seed) {
    const std::size_t n = examples.size();
    if (k < 2 || k > n) {
        throw TrainError("fold count must satisfy 2 <= k <= n (k=" + std::to_string(k) +
                         ", n=" + std::to_string(n) + ")");
    }
    auto by_class = class_indices_sorted(examples);
    for (const auto& idx : by_class) {
        if (idx.size() < k) {
            throw TrainError("stratified " + std::to_string(k) + "-fold needs >=" +
                             std::to_string(k) + " examples per class, got " +
                             std::to_string(idx.size()));
        }
    }

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(n, 0);
    // Deal shuffled examples round-robin; the cursor continues across classes
    // so overall fold sizes also differ by at most one.
    std::size_t cursor = 0;
    for (int c = 0; c < 2; ++c) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        rng.shuffle(by_class[c]);
        for (std::size_t idx : by_class[c]) {
            plan.assignments[idx] = cursor % k;
            ++cursor;
        }
    }
    return plan;
}

}  // namespace depdyn::corpus
