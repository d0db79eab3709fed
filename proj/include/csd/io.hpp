#ifndef CSD_IO_HPP
#define CSD_IO_HPP

// io.hpp - serialization primitives shared by all dictionary structures.
// All multi-byte integers are little-endian; floating point fields are
// serialized as the raw bits of an IEEE-754 double.

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csd {

class build_error : public std::runtime_error {
public:
    explicit build_error(const std::string& what) : std::runtime_error(what) {}
};

class coding_error : public std::runtime_error {
public:
    explicit coding_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed container data. Carries the byte offset of the problem.
class format_error : public std::runtime_error {
public:
    format_error(const std::string& what, std::uint64_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)),
          offset_(offset) {}
    std::uint64_t offset() const { return offset_; }

private:
    std::uint64_t offset_;
};

std::uint32_t crc32(std::span<const std::uint8_t> data, std::uint32_t seed = 0);

class byte_writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) { put_le(v, 2); }
    void u32(std::uint32_t v) { put_le(v, 4); }
    void u64(std::uint64_t v) { put_le(v, 8); }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
    void bytes(std::span<const std::uint8_t> data) {
        buf_.insert(buf_.end(), data.begin(), data.end());
    }
    void words(std::span<const std::uint64_t> ws) {
        for (std::uint64_t w : ws) u64(w);
    }
    void u32s(std::span<const std::uint32_t> vs) {
        for (std::uint32_t v : vs) u32(v);
    }

    std::uint64_t position() const { return buf_.size(); }
    const std::vector<std::uint8_t>& data() const { return buf_; }
    std::vector<std::uint8_t> take() { return std::move(buf_); }

private:
    void put_le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> buf_;
};

class byte_reader {
public:
    explicit byte_reader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
    std::uint64_t u64() { return get_le(8); }
    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::vector<std::uint8_t> bytes(std::uint64_t n) {
        need(n);
        std::vector<std::uint8_t> out(data_.begin() + pos_, data_.begin() + pos_ + n);
        pos_ += n;
        return out;
    }
    std::vector<std::uint64_t> words(std::uint64_t n) {
        std::vector<std::uint64_t> out(n);
        for (auto& w : out) w = u64();
        return out;
    }
    std::vector<std::uint32_t> u32s(std::uint64_t n) {
        std::vector<std::uint32_t> out(n);
        for (auto& v : out) v = u32();
        return out;
    }

    std::uint64_t position() const { return pos_; }
    std::uint64_t remaining() const { return data_.size() - pos_; }
    bool at_end() const { return pos_ == data_.size(); }

private:
    void need(std::uint64_t n) {
        if (data_.size() - pos_ < n)
            throw format_error("truncated input", pos_);
    }
    std::uint64_t get_le(int n) {
        need(static_cast<std::uint64_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += static_cast<std::uint64_t>(n);
        return v;
    }
    std::span<const std::uint8_t> data_;
    std::uint64_t pos_ = 0;
};

}  // namespace csd

#endif
