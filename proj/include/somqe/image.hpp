#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "somqe/error.hpp"
#include "somqe/som.hpp"

namespace somqe {

enum class ImageFormat { pgm, ppm, png };

/// Decoded raster. Grayscale (1 channel) or RGB (3), 8- or 16-bit samples,
/// stored row-major with channels interleaved. Values always fit the
/// declared bit depth.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 1;
    int bit_depth = 8;
    std::vector<std::uint16_t> pixels;

    int max_value() const { return (1 << bit_depth) - 1; }
    std::size_t sample_count() const {
        return static_cast<std::size_t>(width) * height * channels;
    }
    std::uint16_t at(int x, int y, int c = 0) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint16_t& at(int x, int y, int c = 0) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;
};

/// How pixels become SOM samples. pixel: one sample per pixel with
/// dim = channels. patch: one sample per pixel covering the odd-sided
/// square around it, edges clamped, dim = channels * patch_side^2.
struct FeatureMode {
    enum class Kind { pixel, patch };
    enum class Normalize { none, unit_range };
    Kind kind = Kind::pixel;
    int patch_side = 1;
    Normalize normalize = Normalize::none;
};

namespace detail {

[[noreturn]] inline void bad_format(const std::string& what, std::size_t offset) {
    throw io_error(what + " (at byte " + std::to_string(offset) + ")");
}

// ---- PNM (P5/P6 binary) ----

struct PnmCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    int get() { return pos < bytes.size() ? bytes[pos++] : -1; }
    void skip_space_and_comments() {
        for (;;) {
            if (pos >= bytes.size()) return;
            const std::uint8_t c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos;
            } else {
                return;
            }
        }
    }
    long parse_uint(const char* field) {
        skip_space_and_comments();
        const std::size_t start = pos;
        long v = 0;
        while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1 << 30) bad_format(std::string("PNM header: ") + field + " out of range", start);
            ++pos;
        }
        if (pos == start) bad_format(std::string("PNM header: expected ") + field, start);
        return v;
    }
};

inline ImageBuffer decode_pnm(std::span<const std::uint8_t> bytes, int channels) {
    PnmCursor cur{bytes};
    const char magic1 = channels == 1 ? '5' : '6';
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != magic1)
        bad_format(std::string("not a P") + magic1 + " file: bad magic", 0);
    cur.pos = 2;
    ImageBuffer img;
    img.channels = channels;
    img.width = static_cast<int>(cur.parse_uint("width"));
    img.height = static_cast<int>(cur.parse_uint("height"));
    const long maxval = cur.parse_uint("maxval");
    if (img.width < 1 || img.height < 1) bad_format("PNM header: zero dimension", cur.pos);
    if (maxval < 1 || maxval > 65535) bad_format("PNM header: maxval out of [1,65535]", cur.pos);
    img.bit_depth = maxval > 255 ? 16 : 8;
    const int c = cur.get();
    if (c != ' ' && c != '\t' && c != '\r' && c != '\n')
        bad_format("PNM header: expected single whitespace before payload", cur.pos - 1);

    const std::size_t n = img.sample_count();
    const std::size_t bytes_per = img.bit_depth == 16 ? 2 : 1;
    if (bytes.size() - cur.pos < n * bytes_per)
        throw io_error("PNM payload truncated: expected " + std::to_string(n * bytes_per) +
                       " bytes, got " + std::to_string(bytes.size() - cur.pos) +
                       " (at byte " + std::to_string(cur.pos) + ")");
    img.pixels.resize(n);
    const std::uint8_t* p = bytes.data() + cur.pos;
    if (bytes_per == 1) {
        for (std::size_t i = 0; i < n; ++i) img.pixels[i] = p[i];
    } else {
        // 16-bit PNM samples are big-endian
        for (std::size_t i = 0; i < n; ++i) img.pixels[i] = static_cast<std::uint16_t>(p[2 * i] << 8 | p[2 * i + 1]);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (img.pixels[i] > maxval)
            bad_format("PNM sample exceeds maxval", cur.pos + i * bytes_per);
    return img;
}

inline std::vector<std::uint8_t> encode_pnm(const ImageBuffer& img, int channels) {
    if (img.channels != channels)
        throw io_error(std::string("cannot encode ") + std::to_string(img.channels) + "-channel image as P" +
                       (channels == 1 ? "5" : "6"));
    // Canonical header: magic, newline, "<w> <h>", newline, maxval, newline.
    std::string header = std::string(channels == 1 ? "P5" : "P6") + "\n" + std::to_string(img.width) + " " +
                         std::to_string(img.height) + "\n" + std::to_string(img.max_value()) + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    if (img.bit_depth == 8) {
        for (const std::uint16_t v : img.pixels) out.push_back(static_cast<std::uint8_t>(v));
    } else {
        for (const std::uint16_t v : img.pixels) {
            out.push_back(static_cast<std::uint8_t>(v >> 8));
            out.push_back(static_cast<std::uint8_t>(v & 0xff));
        }
    }
    return out;
}

// ---- PNG, 8-bit grayscale / RGB, non-interlaced ----

inline std::uint32_t read_be32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) << 24 | static_cast<std::uint32_t>(p[1]) << 16 |
           static_cast<std::uint32_t>(p[2]) << 8 | static_cast<std::uint32_t>(p[3]);
}

inline void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

constexpr std::uint8_t kPngSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

inline ImageBuffer decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSignature, 8) != 0)
        bad_format("not a PNG file: bad signature", 0);

    ImageBuffer img;
    std::vector<std::uint8_t> idat;
    bool have_ihdr = false, have_iend = false;
    std::size_t pos = 8;
    while (!have_iend) {
        if (bytes.size() - pos < 12) bad_format("PNG truncated inside chunk header", pos);
        const std::uint32_t len = read_be32(bytes.data() + pos);
        const char* type = reinterpret_cast<const char*>(bytes.data() + pos + 4);
        if (bytes.size() - pos - 12 < len) bad_format("PNG chunk payload truncated", pos + 8);
        const std::uint8_t* data = bytes.data() + pos + 8;
        const std::uint32_t want_crc = read_be32(data + len);
        const std::uint32_t got_crc =
            static_cast<std::uint32_t>(crc32(crc32(0, bytes.data() + pos + 4, 4), data, len));
        if (want_crc != got_crc) bad_format("PNG chunk CRC mismatch", pos + 8 + len);

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) bad_format("PNG IHDR has wrong length", pos + 8);
            img.width = static_cast<int>(read_be32(data));
            img.height = static_cast<int>(read_be32(data + 4));
            const int depth = data[8], color = data[9];
            if (depth != 8) bad_format("unsupported PNG variant: only 8-bit supported", pos + 16);
            if (color != 0 && color != 2) bad_format("unsupported PNG variant: only grayscale/RGB supported", pos + 17);
            if (data[10] != 0 || data[11] != 0) bad_format("unsupported PNG compression/filter method", pos + 18);
            if (data[12] != 0) bad_format("unsupported PNG variant: interlacing not supported", pos + 20);
            img.channels = color == 0 ? 1 : 3;
            img.bit_depth = 8;
            have_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            if (!have_ihdr) bad_format("PNG IDAT before IHDR", pos + 4);
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            have_iend = true;
        } else if (std::memcmp(type, "PLTE", 4) == 0) {
            bad_format("unsupported PNG variant: palette images not supported", pos + 4);
        }
        pos += 12 + len;
    }
    if (!have_ihdr) bad_format("PNG missing IHDR", pos);
    if (img.width < 1 || img.height < 1) throw io_error("PNG has zero dimension");

    const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
    const std::size_t raw_size = (stride + 1) * img.height;
    std::vector<std::uint8_t> raw(raw_size);
    uLongf out_len = raw_size;
    const int zrc = uncompress(raw.data(), &out_len, idat.data(), static_cast<uLong>(idat.size()));
    if (zrc != Z_OK || out_len != raw_size)
        throw io_error("PNG IDAT inflate failed: expected " + std::to_string(raw_size) +
                       " raw bytes, got " + std::to_string(out_len));

    img.pixels.resize(img.sample_count());
    std::vector<std::uint8_t> prev(stride, 0);
    std::vector<std::uint8_t> line(stride);
    const int bpp = img.channels;
    for (int y = 0; y < img.height; ++y) {
        const std::uint8_t* src = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        const int filter = src[0];
        for (std::size_t i = 0; i < stride; ++i) {
            const int x = src[1 + i];
            const int a = i >= static_cast<std::size_t>(bpp) ? line[i - bpp] : 0;
            const int b = prev[i];
            const int c = i >= static_cast<std::size_t>(bpp) ? prev[i - bpp] : 0;
            int v;
            switch (filter) {
                case 0: v = x; break;
                case 1: v = x + a; break;
                case 2: v = x + b; break;
                case 3: v = x + (a + b) / 2; break;
                case 4: v = x + paeth(a, b, c); break;
                default: bad_format("PNG scanline has invalid filter type", static_cast<std::size_t>(y) * (stride + 1));
            }
            line[i] = static_cast<std::uint8_t>(v);
        }
        for (std::size_t i = 0; i < stride; ++i)
            img.pixels[static_cast<std::size_t>(y) * stride + i] = line[i];
        std::swap(prev, line);
    }
    return img;
}

inline void put_png_chunk(std::vector<std::uint8_t>& out, const char* type, const std::uint8_t* data, std::size_t len) {
    put_be32(out, static_cast<std::uint32_t>(len));
    const std::size_t type_pos = out.size();
    out.insert(out.end(), type, type + 4);
    if (len > 0) out.insert(out.end(), data, data + len);
    // zlib's crc32 resets on a null buffer, so feed data only when present
    std::uint32_t crc = static_cast<std::uint32_t>(crc32(0, out.data() + type_pos, 4));
    if (len > 0) crc = static_cast<std::uint32_t>(crc32(crc, data, static_cast<uInt>(len)));
    put_be32(out, crc);
}

inline std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
    if (img.bit_depth != 8) throw io_error("cannot encode " + std::to_string(img.bit_depth) + "-bit image as PNG (8-bit only)");
    if (img.channels != 1 && img.channels != 3) throw io_error("PNG encoder supports 1 or 3 channels");

    std::vector<std::uint8_t> out(kPngSignature, kPngSignature + 8);
    std::uint8_t ihdr[13];
    ihdr[0] = static_cast<std::uint8_t>(img.width >> 24);
    ihdr[1] = static_cast<std::uint8_t>(img.width >> 16);
    ihdr[2] = static_cast<std::uint8_t>(img.width >> 8);
    ihdr[3] = static_cast<std::uint8_t>(img.width);
    ihdr[4] = static_cast<std::uint8_t>(img.height >> 24);
    ihdr[5] = static_cast<std::uint8_t>(img.height >> 16);
    ihdr[6] = static_cast<std::uint8_t>(img.height >> 8);
    ihdr[7] = static_cast<std::uint8_t>(img.height);
    ihdr[8] = 8;
    ihdr[9] = img.channels == 1 ? 0 : 2;
    ihdr[10] = ihdr[11] = ihdr[12] = 0;
    put_png_chunk(out, "IHDR", ihdr, 13);

    const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * img.height);
    for (int y = 0; y < img.height; ++y) {
        raw.push_back(0);  // filter: None
        for (std::size_t i = 0; i < stride; ++i)
            raw.push_back(static_cast<std::uint8_t>(img.pixels[static_cast<std::size_t>(y) * stride + i]));
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> z(bound);
    if (compress2(z.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK)
        throw io_error("PNG deflate failed");
    put_png_chunk(out, "IDAT", z.data(), bound);
    put_png_chunk(out, "IEND", nullptr, 0);
    return out;
}

}  // namespace detail

/// Lossless decode of one image file. PGM is binary P5, PPM binary P6
/// (8- or 16-bit, big-endian); PNG must be 8-bit gray or RGB,
/// non-interlaced.
inline ImageBuffer decode_image(std::span<const std::uint8_t> bytes, ImageFormat format) {
    switch (format) {
        case ImageFormat::pgm: return detail::decode_pnm(bytes, 1);
        case ImageFormat::ppm: return detail::decode_pnm(bytes, 3);
        case ImageFormat::png: return detail::decode_png(bytes);
    }
    throw io_error("decode_image: unknown format");
}

/// Canonical byte stream for img. PNM headers are single-space separated
/// with a newline before the payload, so identical buffers always encode to
/// identical bytes.
inline std::vector<std::uint8_t> encode_image(const ImageBuffer& img, ImageFormat format) {
    if (img.width < 1 || img.height < 1 || img.pixels.size() != img.sample_count())
        throw io_error("encode_image: malformed buffer");
    switch (format) {
        case ImageFormat::pgm: return detail::encode_pnm(img, 1);
        case ImageFormat::ppm: return detail::encode_pnm(img, 3);
        case ImageFormat::png: return detail::encode_png(img);
    }
    throw io_error("encode_image: unknown format");
}

inline std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

inline void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("short write to " + path);
}

/// Load an image file, picking the decoder from the leading magic bytes.
inline ImageBuffer load_image(const std::string& path) {
    const auto bytes = read_file(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_image(bytes, ImageFormat::pgm);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return decode_image(bytes, ImageFormat::ppm);
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), detail::kPngSignature, 8) == 0)
        return decode_image(bytes, ImageFormat::png);
    throw io_error(path + ": unrecognized image format (expected P5/P6 PNM or PNG)");
}

/// Save an image, picking the format from the file extension
/// (.pgm / .ppm / .png).
inline void save_image(const ImageBuffer& img, const std::string& path) {
    ImageFormat fmt;
    if (path.ends_with(".pgm")) fmt = ImageFormat::pgm;
    else if (path.ends_with(".ppm")) fmt = ImageFormat::ppm;
    else if (path.ends_with(".png")) fmt = ImageFormat::png;
    else throw io_error(path + ": cannot infer image format from extension");
    const auto bytes = encode_image(img, fmt);
    write_file(path, bytes);
}

/// Turn a raster into SOM samples, one sample per pixel (N = width*height
/// in both modes). Patch components run over patch rows, then columns,
/// then channels, with out-of-image positions clamped to the nearest edge
/// pixel. unit_range divides by the image's max representable value.
inline SampleMatrix<double> extract_samples(const ImageBuffer& img, const FeatureMode& mode = {}) {
    if (img.width < 1 || img.height < 1 || img.pixels.size() != img.sample_count())
        throw std::invalid_argument("extract_samples: malformed buffer");
    if (mode.kind == FeatureMode::Kind::patch && (mode.patch_side < 1 || mode.patch_side % 2 == 0))
        throw std::invalid_argument("extract_samples: patch_side must be odd and positive");

    const double scale = mode.normalize == FeatureMode::Normalize::unit_range
                             ? 1.0 / static_cast<double>(img.max_value())
                             : 1.0;
    const Eigen::Index n = static_cast<Eigen::Index>(img.width) * img.height;
    const int side = mode.kind == FeatureMode::Kind::pixel ? 1 : mode.patch_side;
    const int k = side / 2;
    const Eigen::Index dim = static_cast<Eigen::Index>(img.channels) * side * side;

    SampleMatrix<double> out(n, dim);
    Eigen::Index row = 0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x, ++row) {
            Eigen::Index d = 0;
            for (int dy = -k; dy <= k; ++dy) {
                const int yy = std::clamp(y + dy, 0, img.height - 1);
                for (int dx = -k; dx <= k; ++dx) {
                    const int xx = std::clamp(x + dx, 0, img.width - 1);
                    for (int c = 0; c < img.channels; ++c)
                        out(row, d++) = static_cast<double>(img.at(xx, yy, c)) * scale;
                }
            }
        }
    }
    return out;
}

}  // namespace somqe
