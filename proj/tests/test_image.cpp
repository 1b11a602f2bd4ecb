#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

#include "somqe/image.hpp"

using namespace somqe;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

ImageBuffer random_image(std::mt19937_64& rng, int channels, int bit_depth) {
    ImageBuffer img;
    img.width = 1 + static_cast<int>(rng() % 24);
    img.height = 1 + static_cast<int>(rng() % 24);
    img.channels = channels;
    img.bit_depth = bit_depth;
    img.pixels.resize(img.sample_count());
    for (auto& v : img.pixels) v = static_cast<std::uint16_t>(rng() % (1u << bit_depth));
    return img;
}

}  // namespace

TEST_CASE("decode P5 8-bit") {
    auto data = bytes_of("P5 2 2 255 ");
    data.insert(data.end(), {0, 64, 128, 255});
    const auto img = decode_image(data, ImageFormat::pgm);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.channels == 1);
    CHECK(img.bit_depth == 8);
    CHECK(img.pixels == std::vector<std::uint16_t>{0, 64, 128, 255});
}

TEST_CASE("decode P5 16-bit honors big-endian sample order") {
    auto data = bytes_of("P5\n2 2\n65535\n");
    data.insert(data.end(), {0x01, 0x00, 0x00, 0xff, 0xff, 0x00, 0xab, 0xcd});
    const auto img = decode_image(data, ImageFormat::pgm);
    CHECK(img.bit_depth == 16);
    CHECK(img.pixels == std::vector<std::uint16_t>{0x0100, 0x00ff, 0xff00, 0xabcd});
}

TEST_CASE("decode P5 accepts comments in the header") {
    auto data = bytes_of("P5\n# a comment\n1 1\n255\n");
    data.push_back(7);
    CHECK(decode_image(data, ImageFormat::pgm).pixels[0] == 7);
}

TEST_CASE("encode 1x1 zero pixel produces the canonical bytes") {
    ImageBuffer img;
    img.width = img.height = 1;
    img.pixels = {0};
    const auto got = encode_image(img, ImageFormat::pgm);
    const std::string expect = std::string("P5\n1 1\n255\n") + '\0';
    CHECK(std::string(got.begin(), got.end()) == expect);
}

TEST_CASE("encoding is deterministic") {
    std::mt19937_64 rng(5);
    const auto img = random_image(rng, 3, 8);
    CHECK(encode_image(img, ImageFormat::ppm) == encode_image(img, ImageFormat::ppm));
    CHECK(encode_image(img, ImageFormat::png) == encode_image(img, ImageFormat::png));
}

TEST_CASE("decode(encode(img)) round-trips for random images") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
        const int pick = static_cast<int>(rng() % 5);
        ImageBuffer img;
        ImageFormat fmt;
        switch (pick) {
            case 0: img = random_image(rng, 1, 8); fmt = ImageFormat::pgm; break;
            case 1: img = random_image(rng, 1, 16); fmt = ImageFormat::pgm; break;
            case 2: img = random_image(rng, 3, 8); fmt = ImageFormat::ppm; break;
            case 3: img = random_image(rng, 3, 16); fmt = ImageFormat::ppm; break;
            default: img = random_image(rng, rng() % 2 ? 3 : 1, 8); fmt = ImageFormat::png; break;
        }
        CHECK(decode_image(encode_image(img, fmt), fmt) == img);
    }
}

TEST_CASE("PNG decoder handles Sub and Up filter types") {
    // Hand-build a 3x2 grayscale PNG whose scanlines use filters 1 and 2.
    std::vector<std::uint8_t> raw = {
        1, 10, 5, 5,  // Sub: 10, 15, 20
        2, 1, 2, 3,   // Up:  11, 17, 23
    };
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> z(bound);
    REQUIRE(compress2(z.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 9) == Z_OK);

    std::vector<std::uint8_t> png(detail::kPngSignature, detail::kPngSignature + 8);
    const std::uint8_t ihdr[13] = {0, 0, 0, 3, 0, 0, 0, 2, 8, 0, 0, 0, 0};
    detail::put_png_chunk(png, "IHDR", ihdr, 13);
    detail::put_png_chunk(png, "IDAT", z.data(), bound);
    detail::put_png_chunk(png, "IEND", nullptr, 0);

    const auto img = decode_image(png, ImageFormat::png);
    CHECK(img.pixels == std::vector<std::uint16_t>{10, 15, 20, 11, 17, 23});
}

TEST_CASE("malformed inputs are rejected with a byte offset") {
    CHECK_THROWS_WITH_AS(decode_image(bytes_of("P6 1 1 255 x"), ImageFormat::pgm),
                         doctest::Contains("bad magic"), io_error);
    CHECK_THROWS_WITH_AS(decode_image(bytes_of("P5 2 2 255 ab"), ImageFormat::pgm),
                         doctest::Contains("truncated"), io_error);
    CHECK_THROWS_WITH_AS(decode_image(bytes_of("P5 0 2 255 "), ImageFormat::pgm),
                         doctest::Contains("at byte"), io_error);
    CHECK_THROWS_WITH_AS(decode_image(bytes_of("P5 1 1 99999 "), ImageFormat::pgm),
                         doctest::Contains("maxval"), io_error);
    CHECK_THROWS_AS(decode_image(bytes_of("not a png"), ImageFormat::png), io_error);
}

TEST_CASE("PNG chunk corruption is detected") {
    std::mt19937_64 rng(3);
    auto png = encode_image(random_image(rng, 1, 8), ImageFormat::png);
    png[12] ^= 0xff;  // inside IHDR payload: CRC must catch it
    CHECK_THROWS_WITH_AS(decode_image(png, ImageFormat::png), doctest::Contains("CRC"), io_error);
}

TEST_CASE("unrepresentable encode combinations are rejected") {
    ImageBuffer img;
    img.width = img.height = 1;
    img.channels = 1;
    img.bit_depth = 16;
    img.pixels = {512};
    CHECK_THROWS_AS(encode_image(img, ImageFormat::png), io_error);  // PNG path is 8-bit only
    img.channels = 3;
    img.pixels = {1, 2, 3};
    CHECK_THROWS_AS(encode_image(img, ImageFormat::pgm), io_error);
}

TEST_CASE("extract_samples pixel mode lists intensities in raster order") {
    ImageBuffer img;
    img.width = img.height = 2;
    img.pixels = {0, 64, 128, 255};
    const auto s = extract_samples(img, {});
    REQUIRE(s.rows() == 4);
    REQUIRE(s.cols() == 1);
    CHECK(s(0, 0) == 0.0);
    CHECK(s(1, 0) == 64.0);
    CHECK(s(2, 0) == 128.0);
    CHECK(s(3, 0) == 255.0);
}

TEST_CASE("extract_samples unit_range divides by the max representable value") {
    ImageBuffer img;
    img.width = img.height = 2;
    img.pixels = {0, 64, 128, 255};
    FeatureMode mode;
    mode.normalize = FeatureMode::Normalize::unit_range;
    const auto s = extract_samples(img, mode);
    CHECK(s(0, 0) == 0.0);
    CHECK(s(1, 0) == 64.0 / 255.0);
    CHECK(s(2, 0) == 128.0 / 255.0);
    CHECK(s(3, 0) == 1.0);
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        CHECK(s(i, 0) >= 0.0);
        CHECK(s(i, 0) <= 1.0);
    }
}

TEST_CASE("patch mode at the center of a 3x3 image is the whole image") {
    ImageBuffer img;
    img.width = img.height = 3;
    img.pixels = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    FeatureMode mode;
    mode.kind = FeatureMode::Kind::patch;
    mode.patch_side = 3;
    const auto s = extract_samples(img, mode);
    REQUIRE(s.rows() == 9);
    REQUIRE(s.cols() == 9);
    for (int k = 0; k < 9; ++k) CHECK(s(4, k) == static_cast<double>(k + 1));  // center pixel = row 4
}

TEST_CASE("patch mode clamps at the edges") {
    ImageBuffer img;
    img.width = 2;
    img.height = 1;
    img.pixels = {10, 20};
    FeatureMode mode;
    mode.kind = FeatureMode::Kind::patch;
    mode.patch_side = 3;
    const auto s = extract_samples(img, mode);
    REQUIRE(s.rows() == 2);
    // top-left patch: rows clamp to row 0, left column clamps to x=0
    CHECK(s(0, 0) == 10.0);
    CHECK(s(0, 1) == 10.0);
    CHECK(s(0, 2) == 20.0);
}

TEST_CASE("sample count equals width*height in both modes") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
        const auto img = random_image(rng, 1, 8);
        CHECK(extract_samples(img, {}).rows() == static_cast<Eigen::Index>(img.width) * img.height);
        FeatureMode mode;
        mode.kind = FeatureMode::Kind::patch;
        mode.patch_side = 5;
        CHECK(extract_samples(img, mode).rows() == static_cast<Eigen::Index>(img.width) * img.height);
    }
}

TEST_CASE("extract_samples is pure") {
    std::mt19937_64 rng(23);
    const auto img = random_image(rng, 3, 8);
    FeatureMode mode;
    mode.kind = FeatureMode::Kind::patch;
    mode.patch_side = 3;
    CHECK(extract_samples(img, mode) == extract_samples(img, mode));
}

TEST_CASE("even patch sides are rejected") {
    ImageBuffer img;
    img.width = img.height = 2;
    img.pixels = {1, 2, 3, 4};
    FeatureMode mode;
    mode.kind = FeatureMode::Kind::patch;
    mode.patch_side = 2;
    CHECK_THROWS_AS(extract_samples(img, mode), std::invalid_argument);
}

TEST_CASE("load_image sniffs the format from the magic bytes") {
    std::mt19937_64 rng(29);
    const auto img = random_image(rng, 1, 8);
    const std::string dir = "/tmp/somqe_test_image";
    std::filesystem::create_directories(dir);
    save_image(img, dir + "/a.pgm");
    save_image(img, dir + "/a.png");
    CHECK(load_image(dir + "/a.pgm") == img);
    CHECK(load_image(dir + "/a.png") == img);
    CHECK_THROWS_AS(load_image(dir + "/missing.pgm"), io_error);
}
