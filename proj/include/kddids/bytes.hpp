// bytes.hpp
//
// Little-endian binary encoding used by the model store.

#ifndef KDDIDS_BYTES_HPP
#define KDDIDS_BYTES_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kddids/error.hpp"

namespace kddids {

class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v) { put_le(v, 4); }
    void u64(std::uint64_t v) { put_le(v, 8); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

    void str(std::string_view s) {
        u64(s.size());
        out_.insert(out_.end(), s.begin(), s.end());
    }

    void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

    void f64s(std::span<const double> v) {
        u64(v.size());
        for (double x : v) f64(x);
    }

    const std::vector<std::uint8_t> &data() const { return out_; }
    std::vector<std::uint8_t> take() && { return std::move(out_); }

private:
    void put_le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> out_;
};

/// bounds-checked reader; truncation raises Error(integrity_error)
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> in) : in_{in} {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
    std::uint64_t u64() { return get_le(8); }
    double f64() { return std::bit_cast<double>(u64()); }

    std::string str() {
        auto n = length(1);
        std::string s(reinterpret_cast<const char *>(in_.data() + pos_), n);
        pos_ += n;
        return s;
    }

    std::span<const std::uint8_t> bytes(std::size_t n) {
        need(n);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::vector<double> f64s() {
        auto n = length(8);
        std::vector<double> v(n);
        for (auto &x : v) x = f64();
        return v;
    }

    /// reads a u64 element count and checks the remaining input can hold it
    std::size_t length(std::size_t element_size) {
        auto n = u64();
        if (element_size != 0 && n > (in_.size() - pos_) / element_size) {
            throw Error{Errc::integrity_error, "model payload truncated"};
        }
        return static_cast<std::size_t>(n);
    }

    bool done() const { return pos_ == in_.size(); }
    std::size_t position() const { return pos_; }

private:
    void need(std::size_t n) const {
        if (n > in_.size() - pos_) throw Error{Errc::integrity_error, "model payload truncated"};
    }
    std::uint64_t get_le(int n) {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= std::uint64_t{in_[pos_ + static_cast<std::size_t>(i)]} << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

}  // namespace kddids

#endif
