#include "kddids/ingest.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <zlib.h>

#include "kddids/error.hpp"

namespace kddids {

namespace {

std::string_view strip_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

bool is_blank(std::string_view s) {
    for (char c : s) {
        if (c != ' ' && c != '\t') return false;
    }
    return true;
}

}  // namespace

KddRecord parse_record(std::string_view line, const FeatureSchema &schema) {
    line = strip_cr(line);
    std::array<std::string_view, kFieldCount> fields;
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        if (count < kFieldCount) fields[count] = field;
        ++count;
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (count != kFieldCount) {
        throw Error{Errc::wrong_field_count, "expected 42 fields, found " + std::to_string(count)};
    }

    KddRecord record;
    for (std::size_t i = 0; i < kFieldCount; ++i) {
        std::string_view f = fields[i];
        if (f.empty()) {
            throw Error{Errc::empty_field, "field " + std::to_string(i + 1) + " is empty"};
        }
        if (i == kFeatureCount) {
            record.label = AttackLabel::parse(f);
        } else if (schema[i].kind == FeatureKind::symbolic) {
            record.symbols[i - kSymbolicPositions.front()] = Symbol::intern(f);
        } else {
            double v = 0.0;
            auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || end != f.data() + f.size() || !std::isfinite(v)) {
                throw Error{Errc::non_numeric_continuous, "field " + std::to_string(i + 1) + " ('" +
                                                              schema[i].name + "') is not a finite number: '" +
                                                              std::string{f} + "'"};
            }
            record.values[i] = v + 0.0;  // folds -0 into +0
        }
    }
    return record;
}

std::string serialize_record(const KddRecord &record) {
    std::string out;
    out.reserve(160);
    char buf[32];
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (is_symbolic_position(i)) {
            out.append(record.symbol_at(i).str());
        } else {
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, record.values[i]);
            out.append(buf, end);
        }
        out.push_back(',');
    }
    out.append(record.label.name());
    out.push_back('.');
    return out;
}

std::uint64_t DatasetSummary::label_count(std::string_view label) const {
    auto it = per_label.find(std::string{label});
    return it == per_label.end() ? 0 : it->second;
}

void DatasetSummary::add(AttackLabel label, std::optional<AttackCategory> category) {
    ++per_label[std::string{label.name()}];
    if (category) ++per_category[static_cast<std::size_t>(*category)];
    ++total;
}

void DatasetSummary::merge(const DatasetSummary &other) {
    for (const auto &[label, n] : other.per_label) per_label[label] += n;
    for (std::size_t i = 0; i < kCategoryCount; ++i) per_category[i] += other.per_category[i];
    total += other.total;
}

DatasetSummary summarize(std::span<const KddRecord> records, const UnknownLabelPolicy &policy) {
    DatasetSummary summary;
    for (const auto &r : records) {
        auto category = label_to_category(r.label, policy);
        summary.add(r.label, category);
    }
    return summary;
}

struct LineSource::Impl {
    gzFile gz = nullptr;
    std::string text;          // in-memory source
    std::size_t text_pos = 0;
    bool in_memory = false;

    std::vector<char> buf = std::vector<char>(1 << 16);
    std::size_t begin = 0;
    std::size_t end = 0;
    bool eof = false;
    std::string carry;

    ~Impl() {
        if (gz) gzclose(gz);
    }

    // refills buf; returns false when no more bytes
    bool fill() {
        if (eof) return false;
        if (in_memory) {
            std::size_t n = std::min(buf.size(), text.size() - text_pos);
            std::memcpy(buf.data(), text.data() + text_pos, n);
            text_pos += n;
            begin = 0;
            end = n;
            if (n == 0) eof = true;
            return n > 0;
        }
        int n = gzread(gz, buf.data(), static_cast<unsigned>(buf.size()));
        if (n < 0) {
            int errnum = 0;
            const char *msg = gzerror(gz, &errnum);
            throw Error{Errc::io_error, std::string{"read failed: "} + (msg ? msg : "unknown error")};
        }
        begin = 0;
        end = static_cast<std::size_t>(n);
        if (n == 0) eof = true;
        return n > 0;
    }

    bool next(std::string_view &line) {
        carry.clear();
        while (true) {
            if (begin == end && !fill()) {
                if (carry.empty()) return false;
                line = carry;
                return true;
            }
            const char *start = buf.data() + begin;
            const void *nl = std::memchr(start, '\n', end - begin);
            if (nl) {
                auto len = static_cast<std::size_t>(static_cast<const char *>(nl) - start);
                begin += len + 1;
                if (carry.empty()) {
                    line = std::string_view{start, len};
                } else {
                    carry.append(start, len);
                    line = carry;
                }
                return true;
            }
            carry.append(start, end - begin);
            begin = end;
        }
    }
};

LineSource::LineSource(std::unique_ptr<Impl> impl) : impl_{std::move(impl)} {}
LineSource::LineSource(LineSource &&) noexcept = default;
LineSource &LineSource::operator=(LineSource &&) noexcept = default;
LineSource::~LineSource() = default;

LineSource LineSource::open(const std::string &path) {
    auto impl = std::make_unique<Impl>();
    impl->gz = path == "-" ? gzdopen(fileno(stdin), "rb") : gzopen(path.c_str(), "rb");
    if (!impl->gz) {
        throw Error{Errc::io_error, "cannot open '" + path + "'"};
    }
    gzbuffer(impl->gz, 1 << 17);
    return LineSource{std::move(impl)};
}

LineSource LineSource::from_string(std::string text) {
    auto impl = std::make_unique<Impl>();
    impl->in_memory = true;
    impl->text = std::move(text);
    return LineSource{std::move(impl)};
}

bool LineSource::next(std::string_view &line) {
    if (!impl_->next(line)) return false;
    ++line_no_;
    return true;
}

LoadResult load_dataset(LineSource &source, const FeatureSchema &schema, const LoadOptions &options,
                        const RecordSink &sink) {
    LoadResult result;
    std::string_view line;
    auto note_skip = [&result](std::uint64_t line_no, const std::string &reason) {
        if (result.first_skips.size() < LoadResult::kMaxSkipsKept) {
            result.first_skips.push_back({line_no, reason});
        }
    };
    while (source.next(line)) {
        line = strip_cr(line);
        if (is_blank(line)) continue;
        ++result.lines_read;
        const std::uint64_t line_no = source.line_number();
        KddRecord record;
        try {
            record = parse_record(line, schema);
        } catch (const Error &e) {
            if (options.on_malformed == MalformedPolicy::abort) {
                throw ParseError{e.code(), e.what(), line_no};
            }
            ++result.skipped_malformed;
            note_skip(line_no, e.what());
            continue;
        }
        std::optional<AttackCategory> category;
        try {
            category = label_to_category(record.label, options.unknown_label);
        } catch (const Error &e) {
            throw ParseError{e.code(), e.what(), line_no};
        }
        if (!category) {
            ++result.skipped_unknown_label;
            note_skip(line_no, "unknown label '" + std::string{record.label.name()} + "' skipped");
            continue;
        }
        result.summary.add(record.label, category);
        if (sink) sink(std::move(record), *category);
    }
    return result;
}

std::vector<KddRecord> read_records(const std::string &path, const FeatureSchema &schema,
                                    const LoadOptions &options, LoadResult *result) {
    auto source = LineSource::open(path);
    std::vector<KddRecord> records;
    auto r = load_dataset(source, schema, options,
                          [&records](KddRecord &&rec, AttackCategory) { records.push_back(std::move(rec)); });
    if (result) *result = std::move(r);
    return records;
}

void write_records(const std::string &path, std::span<const KddRecord> records) {
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out) {
        throw Error{Errc::io_error, "cannot create '" + path + "'"};
    }
    for (const auto &r : records) {
        out << serialize_record(r) << '\n';
    }
    out.flush();
    if (!out) {
        throw Error{Errc::io_error, "write failed for '" + path + "'"};
    }
}

}  // namespace kddids
