// ingest.hpp
//
// Streaming reader for KDD Cup 99 record files (plain or gzip).

#ifndef KDDIDS_INGEST_HPP
#define KDDIDS_INGEST_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kddids/schema.hpp"

namespace kddids {

/// parses one comma-separated 42-field line
KddRecord parse_record(std::string_view line, const FeatureSchema &schema);

/// inverse of parse_record; numbers use the shortest exact decimal form
std::string serialize_record(const KddRecord &record);

struct DatasetSummary {
    std::map<std::string, std::uint64_t> per_label;
    std::array<std::uint64_t, kCategoryCount> per_category{};
    std::uint64_t total = 0;

    std::uint64_t label_count(std::string_view label) const;
    std::uint64_t category_count(AttackCategory c) const { return per_category[static_cast<std::size_t>(c)]; }

    /// counts one record whose category has already been resolved
    void add(AttackLabel label, std::optional<AttackCategory> category);

    /// commutative; summaries of disjoint streams merge to the summary of their union
    void merge(const DatasetSummary &other);

    friend bool operator==(const DatasetSummary &, const DatasetSummary &) = default;
};

/// counts records, resolving categories with the given policy
DatasetSummary summarize(std::span<const KddRecord> records,
                         const UnknownLabelPolicy &policy = UnknownLabelPolicy::error());

/// Newline-delimited line reader.  Gzip input is detected from the stream
/// itself, so compressed and plain files are read through the same path.
class LineSource {
public:
    /// "-" reads standard input
    static LineSource open(const std::string &path);
    static LineSource from_string(std::string text);

    LineSource(LineSource &&) noexcept;
    LineSource &operator=(LineSource &&) noexcept;
    ~LineSource();

    /// false at end of input; the returned view is valid until the next call
    bool next(std::string_view &line);

    std::uint64_t line_number() const { return line_no_; }

private:
    struct Impl;
    explicit LineSource(std::unique_ptr<Impl> impl);
    std::unique_ptr<Impl> impl_;
    std::uint64_t line_no_ = 0;
};

enum class MalformedPolicy : std::uint8_t { abort, skip };

struct LoadOptions {
    MalformedPolicy on_malformed = MalformedPolicy::abort;
    UnknownLabelPolicy unknown_label = UnknownLabelPolicy::error();
};

struct SkippedLine {
    std::uint64_t line;
    std::string reason;
};

struct LoadResult {
    DatasetSummary summary;
    std::uint64_t lines_read = 0;          // non-blank lines
    std::uint64_t skipped_malformed = 0;
    std::uint64_t skipped_unknown_label = 0;
    std::vector<SkippedLine> first_skips;  // at most kMaxSkipsKept
    static constexpr std::size_t kMaxSkipsKept = 16;
};

using RecordSink = std::function<void(KddRecord &&record, AttackCategory category)>;

/// Streams every accepted record into sink in file order.  Memory use is
/// independent of the stream length.  Parse errors carry line numbers and
/// either abort the load or are counted, per options.
LoadResult load_dataset(LineSource &source, const FeatureSchema &schema, const LoadOptions &options,
                        const RecordSink &sink);

/// convenience: loads a whole file into memory
std::vector<KddRecord> read_records(const std::string &path, const FeatureSchema &schema,
                                    const LoadOptions &options, LoadResult *result = nullptr);

/// writes records in the 42-field text format, one per line
void write_records(const std::string &path, std::span<const KddRecord> records);

}  // namespace kddids

#endif
