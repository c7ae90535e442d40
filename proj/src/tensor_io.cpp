#include "tenscomp/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace tenscomp {

namespace {

constexpr std::array<char, 4> kMagic = {'T', 'L', 'T', '1'};

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

void put_u64(std::ostream &os, std::uint64_t x) {
    unsigned char buf[8];
    for (int k = 0; k < 8; ++k)
        buf[k] = static_cast<unsigned char>(x >> (8 * k));
    os.write(reinterpret_cast<const char *>(buf), 8);
}

std::uint64_t get_u64(std::istream &is) {
    unsigned char buf[8];
    if (!is.read(reinterpret_cast<char *>(buf), 8))
        throw IoError("binary tensor: truncated file");
    std::uint64_t x = 0;
    for (int k = 7; k >= 0; --k)
        x = (x << 8) | buf[k];
    return x;
}

// Reads the next non-empty line; `line_no` tracks the 1-based line number.
bool next_line(std::istream &is, std::string &line, long &line_no) {
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            return true;
    }
    return false;
}

[[noreturn]] void parse_error(long line_no, const std::string &what) {
    throw IoError("tensor text line " + std::to_string(line_no) + ": " + what);
}

} // namespace

void write_tensor_text(std::ostream &os, const DenseTensor &t) {
    const auto &dims = t.shape().dims();
    os << dims.size() << '\n';
    for (std::size_t k = 0; k < dims.size(); ++k)
        os << (k ? " " : "") << dims[k];
    os << '\n';
    os.precision(std::numeric_limits<double>::max_digits10);
    for (Index i = 0; i < t.size(); ++i)
        os << t[i] << '\n';
    if (!os)
        throw IoError("tensor text: write failed");
}

DenseTensor read_tensor_text(std::istream &is) {
    std::string line;
    long line_no = 0;
    if (!next_line(is, line, line_no))
        parse_error(line_no, "missing order");
    long order = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> order) || order < 1)
            parse_error(line_no, "invalid order '" + line + "'");
    }
    if (!next_line(is, line, line_no))
        parse_error(line_no, "missing dimensions");
    std::vector<Index> dims;
    {
        std::istringstream ss(line);
        Index p;
        while (ss >> p)
            dims.push_back(p);
        if (static_cast<long>(dims.size()) != order)
            parse_error(line_no, "expected " + std::to_string(order) +
                                     " dimensions");
    }
    Shape shape = [&] {
        try {
            return Shape(dims);
        } catch (const InvalidArgument &e) {
            parse_error(line_no, e.what());
        }
    }();
    DenseTensor t(shape);
    for (Index i = 0; i < t.size(); ++i) {
        if (!next_line(is, line, line_no))
            parse_error(line_no, "expected " + std::to_string(t.size()) +
                                     " values, got " + std::to_string(i));
        std::istringstream ss(line);
        if (!(ss >> t[i]))
            parse_error(line_no, "invalid value '" + line + "'");
    }
    return t;
}

void write_tensor_binary(std::ostream &os, const DenseTensor &t) {
    os.write(kMagic.data(), kMagic.size());
    const auto &dims = t.shape().dims();
    put_u64(os, dims.size());
    for (Index p : dims)
        put_u64(os, static_cast<std::uint64_t>(p));
    for (Index i = 0; i < t.size(); ++i)
        put_u64(os, std::bit_cast<std::uint64_t>(t[i]));
    if (!os)
        throw IoError("binary tensor: write failed");
}

DenseTensor read_tensor_binary(std::istream &is) {
    std::array<char, 4> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kMagic)
        throw IoError("binary tensor: bad magic");
    const std::uint64_t order = get_u64(is);
    if (order < 1 || order > 64)
        throw IoError("binary tensor: implausible order " +
                      std::to_string(order));
    std::vector<Index> dims(order);
    for (auto &p : dims)
        p = static_cast<Index>(get_u64(is));
    DenseTensor t = [&] {
        try {
            return DenseTensor(Shape(dims));
        } catch (const InvalidArgument &e) {
            throw IoError(std::string("binary tensor: ") + e.what());
        }
    }();
    for (Index i = 0; i < t.size(); ++i)
        t[i] = std::bit_cast<double>(get_u64(is));
    return t;
}

void save_tensor(const std::filesystem::path &path, const DenseTensor &t) {
    const bool binary = path.extension() == ".bin";
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os)
        throw IoError("cannot open '" + path.string() + "' for writing");
    if (binary)
        write_tensor_binary(os, t);
    else
        write_tensor_text(os, t);
}

DenseTensor load_tensor(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open '" + path.string() + "'");
    std::array<char, 4> magic{};
    is.read(magic.data(), magic.size());
    const bool binary = is.gcount() == 4 && magic == kMagic;
    is.clear();
    is.seekg(0);
    try {
        return binary ? read_tensor_binary(is) : read_tensor_text(is);
    } catch (const IoError &e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

} // namespace tenscomp
