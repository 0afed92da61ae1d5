// curate.hpp
//
// Deduplication, per-label stratified sampling and holdout extraction.

#ifndef KDDIDS_CURATE_HPP
#define KDDIDS_CURATE_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kddids/ingest.hpp"
#include "kddids/schema.hpp"

namespace kddids {

/// Incremental exact-duplicate filter.  Keeps the first occurrence of every
/// distinct (41 values, label) tuple, in arrival order.
class Deduplicator {
public:
    Deduplicator() = default;
    Deduplicator(const Deduplicator &) = delete;
    Deduplicator &operator=(const Deduplicator &) = delete;

    /// returns false if an identical record was already accepted
    bool insert(KddRecord record);

    const std::vector<KddRecord> &records() const { return records_; }
    std::vector<KddRecord> take() &&;
    std::uint64_t duplicates() const { return duplicates_; }

private:
    struct IndexHash {
        const std::vector<KddRecord> *records;
        std::size_t operator()(std::size_t i) const { return KddRecordHash{}((*records)[i]); }
    };
    struct IndexEq {
        const std::vector<KddRecord> *records;
        bool operator()(std::size_t a, std::size_t b) const { return (*records)[a] == (*records)[b]; }
    };

    std::vector<KddRecord> records_;
    std::unordered_set<std::size_t, IndexHash, IndexEq> index_{0, IndexHash{&records_}, IndexEq{&records_}};
    std::uint64_t duplicates_ = 0;
};

std::vector<KddRecord> deduplicate(std::span<const KddRecord> records);

enum class ShortfallPolicy : std::uint8_t { take_all, error };

struct CurationPlan {
    /// labels absent from this table are not sampled
    std::map<std::string, std::uint64_t> per_label_targets;
    std::uint64_t holdout_size = 0;
    std::uint64_t seed = 0;
    ShortfallPolicy shortfall_policy = ShortfallPolicy::take_all;

    /// the published post-organization counts (148,753 records) with a
    /// 60,000-record holdout
    static CurationPlan table2();

    std::uint64_t target_total() const;

    static CurationPlan from_json(const std::string &text);
    static CurationPlan load(const std::string &path);
    std::string to_json() const;
};

struct Shortfall {
    std::uint64_t target;
    std::uint64_t available;
};

struct CuratedDataset {
    std::vector<KddRecord> records;
    /// position of each selected record in the sampled input, parallel to records
    std::vector<std::size_t> source_indices;
    CurationPlan plan;
    std::uint64_t seed = 0;
    std::map<std::string, Shortfall> shortfalls;
    /// labels present in the input with no target; never sampled
    std::map<std::string, std::uint64_t> unplanned;
    DatasetSummary summary;
};

/// Draws min(target, available) records per label uniformly without
/// replacement, then shuffles the union.  Pure function of (records, plan,
/// seed).  Throws Error(shortfall) under ShortfallPolicy::error.
CuratedDataset stratified_sample(std::span<const KddRecord> records, const CurationPlan &plan,
                                 std::uint64_t seed, const UnknownLabelPolicy &policy);

struct HoldoutSplit {
    std::vector<std::size_t> train;  // pool positions, ascending
    std::vector<std::size_t> test;   // pool positions, in draw order
};

/// picks n pool positions for testing; the rest stay for training
HoldoutSplit split_holdout_indices(std::size_t pool_size, std::size_t n, std::uint64_t seed);

/// record-level form of split_holdout_indices: (train, test)
std::pair<std::vector<KddRecord>, std::vector<KddRecord>> split_holdout(std::span<const KddRecord> pool,
                                                                         std::size_t n, std::uint64_t seed);

}  // namespace kddids

#endif
