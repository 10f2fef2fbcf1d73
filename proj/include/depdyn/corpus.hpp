#ifndef DEPDYN_CORPUS_HPP
#define DEPDYN_CORPUS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "depdyn/timeutil.hpp"

namespace depdyn::corpus {

struct TweetRecord {
    std::string id;
    UtcTime created_at;
    std::string region_id;  // LGA key, opaque
    std::string lang;       // BCP-47-style tag, trusted
    std::string text;       // raw UTF-8, may be empty
};

struct LabeledExample {
    TweetRecord record;
    int label = 0;  // 1 = depressed, 0 = non-depressed
};

struct IngestResult {
    std::vector<TweetRecord> records;
    std::size_t skipped = 0;  // malformed lines
};

// One JSON object per line: {"id","created_at","region_id","lang","text"}.
// Malformed lines are counted and skipped; more than half malformed is a
// schema mismatch and raises FormatError.  Blank lines are ignored.
IngestResult ingest_jsonl(std::istream& source);
IngestResult ingest_jsonl_file(const std::string& path);

// Inverse of ingest_jsonl for valid records.
void serialize_jsonl(const std::vector<TweetRecord>& records, std::ostream& out);

struct LabeledLoad {
    std::vector<LabeledExample> examples;  // positives first, then negatives
    std::size_t positives = 0;
    std::size_t negatives = 0;
    std::size_t skipped = 0;
};

LabeledLoad load_labeled(std::istream& pos_source, std::istream& neg_source);
LabeledLoad load_labeled_files(const std::string& pos_path, const std::string& neg_path);

struct SplitResult {
    std::vector<std::size_t> train;  // indices into the input sequence
    std::vector<std::size_t> test;
};

// Stratified split.  Records are ordered by id before the seeded shuffle, so
// the partition does not depend on input file order.  The train total is
// round(train_fraction * n), allocated per class by largest remainder.
SplitResult split(const std::vector<LabeledExample>& examples, double train_fraction,
                  std::uint64_t seed);

struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;  // example index -> fold index
    std::uint64_t seed = 0;

    std::vector<std::vector<std::size_t>> fold_indices() const;
};

// Stratified k-fold assignment; fold sizes differ by at most one overall and
// within each class.
FoldPlan kfold(const std::vector<LabeledExample>& examples, std::size_t k,
               std::uint64_t seed);

}  // namespace depdyn::corpus

#endif
