#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "somqe/error.hpp"
#include "somqe/image.hpp"  // read_file / write_file
#include "somqe/som.hpp"

namespace somqe {

// SOMQE1 wire format: ASCII line "SOMQE1", ASCII line "<rows> <cols> <dim>",
// then rows*cols*dim IEEE-754 binary64 little-endian weights in row-major
// node order, components contiguous per node.

inline constexpr const char* kMapMagic = "SOMQE1";

inline std::vector<std::uint8_t> serialize_map(const SomMap<double>& map) {
    std::string header = std::string(kMapMagic) + "\n" + std::to_string(map.grid_rows) + " " +
                         std::to_string(map.grid_cols) + " " + std::to_string(map.dim()) + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + static_cast<std::size_t>(map.weights.size()) * 8);
    for (Eigen::Index i = 0; i < map.weights.size(); ++i) {
        const auto bits = std::bit_cast<std::uint64_t>(*(map.weights.data() + i));
        for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
    }
    return out;
}

inline SomMap<double> deserialize_map(std::span<const std::uint8_t> bytes) {
    const std::string magic_line = std::string(kMapMagic) + "\n";
    if (bytes.size() < magic_line.size() ||
        std::memcmp(bytes.data(), magic_line.data(), magic_line.size()) != 0)
        throw io_error(std::string("bad map magic: expected \"") + kMapMagic + "\"");
    std::size_t pos = magic_line.size();

    const auto parse_int = [&](const char* field) {
        long v = 0;
        const std::size_t start = pos;
        while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') v = v * 10 + (bytes[pos++] - '0');
        if (pos == start || v < 1) throw io_error(std::string("bad map header: ") + field);
        return v;
    };
    const long rows = parse_int("rows");
    if (pos >= bytes.size() || bytes[pos++] != ' ') throw io_error("bad map header: expected space after rows");
    const long cols = parse_int("cols");
    if (pos >= bytes.size() || bytes[pos++] != ' ') throw io_error("bad map header: expected space after cols");
    const long dim = parse_int("dim");
    if (pos >= bytes.size() || bytes[pos++] != '\n') throw io_error("bad map header: expected newline after dim");

    const std::size_t n_values = static_cast<std::size_t>(rows) * cols * dim;
    const std::size_t want = n_values * 8;
    const std::size_t have = bytes.size() - pos;
    if (have < want)
        throw io_error("truncated map payload: expected " + std::to_string(want) + " weight bytes, got " +
                       std::to_string(have));

    SomMap<double> map;
    map.grid_rows = rows;
    map.grid_cols = cols;
    map.weights.resize(rows * cols, dim);
    for (std::size_t i = 0; i < n_values; ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[pos + 8 * i + b]) << (8 * b);
        *(map.weights.data() + i) = std::bit_cast<double>(bits);
    }
    return map;
}

inline void save_map(const SomMap<double>& map, const std::string& path) {
    write_file(path, serialize_map(map));
}

inline SomMap<double> load_map(const std::string& path) {
    const auto bytes = read_file(path);
    try {
        return deserialize_map(bytes);
    } catch (const io_error& e) {
        throw io_error(path + ": " + e.what());
    }
}

}  // namespace somqe
