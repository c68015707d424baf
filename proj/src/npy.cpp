#include "npy.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <vector>

#include "error.hpp"

namespace idprof::npy {

namespace {

constexpr std::string_view kMagic{"\x93NUMPY", 6};
constexpr std::size_t kPreambleSize = 10;  // magic + 2 version bytes + uint16 length

[[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorCode::Format, "npy: " + what);
}

/// Minimal reader for the Python dict literal NumPy writes into the header.
class DictParser {
public:
    explicit DictParser(std::string_view text) : text_(text) {}

    Header parse() {
        std::optional<std::string> descr;
        std::optional<bool> fortran;
        std::optional<std::vector<std::size_t>> shape;

        skip_ws();
        expect('{');
        skip_ws();
        while (peek() != '}') {
            const std::string key = string_literal();
            skip_ws();
            expect(':');
            skip_ws();
            if (key == "descr") {
                if (descr) fail("duplicate key 'descr'");
                descr = string_literal();
            } else if (key == "fortran_order") {
                if (fortran) fail("duplicate key 'fortran_order'");
                fortran = boolean();
            } else if (key == "shape") {
                if (shape) fail("duplicate key 'shape'");
                shape = tuple();
            } else {
                fail("unexpected header key '" + key + "'");
            }
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                skip_ws();
            } else if (peek() != '}') {
                fail("expected ',' or '}' in header dict");
            }
        }
        ++pos_;
        while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
        if (pos_ + 1 != text_.size() || text_[pos_] != '\n') {
            fail("header must end with spaces and a single newline");
        }

        if (!descr || !fortran || !shape) fail("header missing descr, fortran_order or shape");

        Header h;
        if (*descr == "<f4") {
            h.dtype = Precision::Single;
        } else if (*descr == "<f8") {
            h.dtype = Precision::Double;
        } else {
            fail("unsupported dtype '" + *descr + "' (need '<f4' or '<f8')");
        }
        if (*fortran) fail("fortran_order arrays are not supported");
        if (shape->size() != 2) {
            fail("expected a 2-D array, got rank " + std::to_string(shape->size()));
        }
        h.rows = (*shape)[0];
        h.cols = (*shape)[1];
        return h;
    }

private:
    char peek() const {
        if (pos_ >= text_.size()) fail("truncated header dict");
        return text_[pos_];
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "' in header dict");
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
    }

    std::string string_literal() {
        const char quote = peek();
        if (quote != '\'' && quote != '"') fail("expected a quoted string in header dict");
        ++pos_;
        const std::size_t end = text_.find(quote, pos_);
        if (end == std::string_view::npos) fail("unterminated string in header dict");
        std::string out(text_.substr(pos_, end - pos_));
        pos_ = end + 1;
        return out;
    }

    bool boolean() {
        if (text_.substr(pos_, 4) == "True") {
            pos_ += 4;
            return true;
        }
        if (text_.substr(pos_, 5) == "False") {
            pos_ += 5;
            return false;
        }
        fail("fortran_order must be True or False");
    }

    std::vector<std::size_t> tuple() {
        std::vector<std::size_t> dims;
        expect('(');
        skip_ws();
        while (peek() != ')') {
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("bad shape entry");
            std::size_t value = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                const std::size_t digit = static_cast<std::size_t>(peek() - '0');
                if (value > (std::numeric_limits<std::size_t>::max() - digit) / 10) {
                    fail("shape entry overflows");
                }
                value = value * 10 + digit;
                ++pos_;
            }
            dims.push_back(value);
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                skip_ws();
            } else if (peek() != ')') {
                fail("expected ',' or ')' in shape");
            }
        }
        ++pos_;
        return dims;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::size_t item_size(Precision p) { return p == Precision::Single ? 4 : 8; }

template <typename T>
void to_little_endian(std::vector<T>& values) {
    if constexpr (std::endian::native == std::endian::big) {
        for (auto& v : values) {
            unsigned char bytes[sizeof(T)];
            std::memcpy(bytes, &v, sizeof(T));
            std::reverse(bytes, bytes + sizeof(T));
            std::memcpy(&v, bytes, sizeof(T));
        }
    }
}

template <typename T>
std::vector<T> read_values(std::ifstream& in, std::size_t count, const std::filesystem::path& path) {
    std::vector<T> values(count);
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(count * sizeof(T)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(T)) {
        fail("truncated data in " + path.string());
    }
    to_little_endian(values);
    return values;
}

}  // namespace

Header parse_header(std::string_view bytes) {
    if (bytes.size() < kPreambleSize || bytes.substr(0, 6) != kMagic) {
        fail("bad magic string");
    }
    const auto major = static_cast<unsigned char>(bytes[6]);
    const auto minor = static_cast<unsigned char>(bytes[7]);
    if (major != 1 || minor != 0) {
        fail("unsupported format version " + std::to_string(major) + "." + std::to_string(minor));
    }
    const std::size_t header_len = static_cast<unsigned char>(bytes[8]) |
                                   (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
    if (bytes.size() < kPreambleSize + header_len) fail("truncated header");

    Header h = DictParser(bytes.substr(kPreambleSize, header_len)).parse();
    h.data_offset = kPreambleSize + header_len;
    return h;
}

Header read_header(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::string preamble(kPreambleSize, '\0');
    in.read(preamble.data(), kPreambleSize);
    if (static_cast<std::size_t>(in.gcount()) != kPreambleSize) fail("file too short: " + path.string());
    if (std::string_view(preamble).substr(0, 6) != kMagic) fail("bad magic string in " + path.string());
    const std::size_t header_len = static_cast<unsigned char>(preamble[8]) |
                                   (static_cast<std::size_t>(static_cast<unsigned char>(preamble[9])) << 8);
    std::string bytes = preamble;
    bytes.resize(kPreambleSize + header_len);
    in.read(bytes.data() + kPreambleSize, static_cast<std::streamsize>(header_len));
    if (static_cast<std::size_t>(in.gcount()) != header_len) fail("truncated header in " + path.string());
    return parse_header(bytes);
}

PointCloud load(const std::filesystem::path& path) {
    const Header h = read_header(path);
    std::error_code ec;
    const auto file_size = std::filesystem::file_size(path, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot stat " + path.string());
    if (h.cols != 0 && h.rows > std::numeric_limits<std::size_t>::max() / h.cols / item_size(h.dtype)) {
        fail("shape too large in " + path.string());
    }
    const std::size_t count = h.rows * h.cols;
    if (file_size != h.data_offset + count * item_size(h.dtype)) {
        fail("data size does not match shape in " + path.string());
    }

    std::ifstream in(path, std::ios::binary);
    in.seekg(static_cast<std::streamoff>(h.data_offset));
    if (h.dtype == Precision::Single) {
        return PointCloud(h.rows, h.cols, read_values<float>(in, count, path));
    }
    return PointCloud(h.rows, h.cols, read_values<double>(in, count, path));
}

std::string encode(const PointCloud& cloud, Precision dtype) {
    std::string dict = "{'descr': '";
    dict += dtype == Precision::Single ? "<f4" : "<f8";
    dict += "', 'fortran_order': False, 'shape': (" + std::to_string(cloud.rows()) + ", " +
            std::to_string(cloud.cols()) + "), }";
    std::size_t total = kPreambleSize + dict.size() + 1;
    const std::size_t padded = (total + 63) / 64 * 64;
    dict.append(padded - total, ' ');
    dict += '\n';
    if (dict.size() > 0xFFFF) fail("header too long for version 1.0");

    std::string out(kMagic);
    out += '\x01';
    out += '\x00';
    out += static_cast<char>(dict.size() & 0xFF);
    out += static_cast<char>((dict.size() >> 8) & 0xFF);
    out += dict;

    auto append = [&](auto values) {
        to_little_endian(values);
        out.append(reinterpret_cast<const char*>(values.data()),
                   values.size() * sizeof(typename decltype(values)::value_type));
    };
    const std::vector<double> data = cloud.to_double();
    if (dtype == Precision::Single) {
        append(std::vector<float>(data.begin(), data.end()));
    } else {
        append(data);
    }
    return out;
}

void save(const std::filesystem::path& path, const PointCloud& cloud, Precision dtype) {
    const std::string bytes = encode(cloud, dtype);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace idprof::npy
