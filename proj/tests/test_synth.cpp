#include <doctest.h>

#include <cmath>

#include "somqe/synth.hpp"

using namespace somqe;

namespace {

ImageBuffer flat_image(int w, int h, std::uint16_t value) {
    ImageBuffer img;
    img.width = w;
    img.height = h;
    img.pixels.assign(img.sample_count(), value);
    return img;
}

bool inside_ellipse(int x, int y, const LesionSpec& s) {
    const double ex = (x - s.center_x) / static_cast<double>(s.semi_axis_a);
    const double ey = (y - s.center_y) / static_cast<double>(s.semi_axis_b);
    return ex * ex + ey * ey <= 1.0;
}

}  // namespace

TEST_CASE("lesion overwrites the center and leaves the outside untouched") {
    const auto img = flat_image(128, 128, 200);
    LesionSpec spec;
    spec.center_x = 64;
    spec.center_y = 64;
    const auto out = inject_lesion(img, spec);
    CHECK(out.at(64, 64) != 200);
    // corner of the bounding box is outside the ellipse
    CHECK(out.at(64 - 22, 64 - 13) == 200);
    // anything beyond the bounding box is untouched
    CHECK(out.at(64 + 23, 64) == 200);
    CHECK(out.at(0, 0) == 200);
}

TEST_CASE("lesion modifies exactly the ellipse-interior lattice points") {
    const auto img = flat_image(128, 100, 7);
    LesionSpec spec;
    spec.center_x = 60;
    spec.center_y = 50;
    const auto out = inject_lesion(img, spec);
    int modified = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const bool inside = inside_ellipse(x, y, spec);
            const bool changed = out.at(x, y) != img.at(x, y);
            CHECK(changed == inside);  // pattern grays never equal 7
            if (changed) ++modified;
        }
    // brute-force lattice count of the default 22/13 ellipse
    CHECK(modified == 891);
}

TEST_CASE("lesion pattern uses both gray levels") {
    const auto img = flat_image(128, 128, 0);
    LesionSpec spec;
    spec.center_x = 64;
    spec.center_y = 64;
    int a = 0, b = 0;
    const auto out = inject_lesion(img, spec);
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 128; ++x) {
            if (out.at(x, y) == 96) ++a;
            if (out.at(x, y) == 160) ++b;
        }
    CHECK(a > 0);
    CHECK(b > 0);
    CHECK(a + b == 891);
}

TEST_CASE("repeated injection with the same spec is idempotent") {
    const auto img = flat_image(100, 100, 50);
    LesionSpec spec;
    spec.center_x = 50;
    spec.center_y = 50;
    const auto once = inject_lesion(img, spec);
    CHECK(inject_lesion(once, spec) == once);
}

TEST_CASE("solid pattern fills with the first gray level") {
    const auto img = flat_image(100, 100, 50);
    LesionSpec spec;
    spec.center_x = 50;
    spec.center_y = 50;
    spec.pattern = LesionSpec::Pattern::solid;
    const auto out = inject_lesion(img, spec);
    CHECK(out.at(50, 50) == 96);
    CHECK(out.at(50 + 21, 50) == 96);
}

TEST_CASE("lesion validation") {
    LesionSpec spec;
    spec.center_x = 10;  // bounding box sticks out on the left
    spec.center_y = 50;
    CHECK_THROWS_AS(inject_lesion(flat_image(100, 100, 0), spec), std::invalid_argument);

    ImageBuffer rgb;
    rgb.width = rgb.height = 100;
    rgb.channels = 3;
    rgb.pixels.assign(rgb.sample_count(), 0);
    spec.center_x = 50;
    CHECK_THROWS_AS(inject_lesion(rgb, spec), std::invalid_argument);

    LesionSpec deep;
    deep.center_x = deep.center_y = 50;
    deep.gray_a = 300;  // exceeds 8-bit depth
    CHECK_THROWS_AS(inject_lesion(flat_image(100, 100, 0), deep), std::invalid_argument);
}

TEST_CASE("poisson draw at lambda 0 is always 0") {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) CHECK(poisson_draw(rng, 0.0) == 0);
}

TEST_CASE("poisson sampler has the right mean and variance at lambda 100") {
    Rng rng(12345);
    const int n = 100000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const double k = static_cast<double>(poisson_draw(rng, 100.0));
        sum += k;
        sq += k * k;
    }
    const double m = sum / n;
    const double var = sq / n - m * m;
    CHECK(m >= 99.7);
    CHECK(m <= 100.3);
    CHECK(var >= 97.0);
    CHECK(var <= 103.0);
}

TEST_CASE("poisson sampler is sane in the Knuth regime too") {
    Rng rng(777);
    const int n = 100000;
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(poisson_draw(rng, 4.0));
    CHECK(sum / n == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("poisson noise preserves shape, clamps to depth, and is seeded") {
    auto img = flat_image(64, 64, 250);
    img.at(0, 0) = 0;
    const auto a = add_poisson_noise(img, 9);
    const auto b = add_poisson_noise(img, 9);
    const auto c = add_poisson_noise(img, 10);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a.width == 64);
    CHECK(a.height == 64);
    CHECK(a.at(0, 0) == 0);
    for (const auto v : a.pixels) CHECK(v <= 255);
}

TEST_CASE("dot intensity solves the Michelson equation") {
    CHECK(dot_intensity(255, 0.7) == 45);
    // closed form: d = bg (1-m)/(1+m), rounded to the nearest intensity
    for (const double m : {0.1, 0.3, 0.5, 0.9}) {
        const int d = dot_intensity(200, m);
        CHECK(std::abs(d - 200.0 * (1.0 - m) / (1.0 + m)) <= 0.5);
    }
}

TEST_CASE("dot field generation is deterministic per seed") {
    DotFieldSpec spec;
    spec.width = spec.height = 128;
    spec.n_dots = 8;
    const auto a = generate_dot_field(spec, 3);
    const auto b = generate_dot_field(spec, 3);
    CHECK(a == b);
}

TEST_CASE("dot field uses background and Michelson dot level") {
    DotFieldSpec spec;
    spec.width = spec.height = 128;
    spec.n_dots = 8;
    const auto img = generate_dot_field(spec, 3);
    for (const auto v : img.pixels) CHECK((v == 255 || v == 45));
}

TEST_CASE("scales differ only inside the target's maximal disc") {
    DotFieldSpec spec;
    spec.width = spec.height = 160;
    spec.n_dots = 10;
    std::vector<ImageBuffer> fields;
    for (const double s : {1.0, 1.05, 1.10, 1.30}) {
        DotFieldSpec sp = spec;
        sp.scale = s;
        fields.push_back(generate_dot_field(sp, 77));
    }
    int min_x = 1 << 30, max_x = -1, min_y = 1 << 30, max_y = -1;
    for (std::size_t f = 1; f < fields.size(); ++f)
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x)
                if (fields[f].at(x, y) != fields[0].at(x, y)) {
                    min_x = std::min(min_x, x);
                    max_x = std::max(max_x, x);
                    min_y = std::min(min_y, y);
                    max_y = std::max(max_y, y);
                }
    REQUIRE(max_x >= 0);  // something did change
    const int limit = 2 * static_cast<int>(std::ceil(spec.base_radius * kMaxDotScale)) + 1;
    CHECK(max_x - min_x + 1 <= limit);
    CHECK(max_y - min_y + 1 <= limit);
}

TEST_CASE("target pixel count grows as the square of the scale") {
    DotFieldSpec spec;
    spec.width = spec.height = 64;
    spec.n_dots = 1;  // the only dot is the target
    const auto count_dark = [](const ImageBuffer& img) {
        int n = 0;
        for (const auto v : img.pixels)
            if (v != 255) ++n;
        return n;
    };
    const int n100 = count_dark(generate_dot_field(spec, 5));
    DotFieldSpec big = spec;
    big.scale = 1.30;
    const int n130 = count_dark(generate_dot_field(big, 5));
    const double ratio = static_cast<double>(n130) / n100;
    CHECK(ratio > 1.69 * 0.9);
    CHECK(ratio < 1.69 * 1.1);
}

TEST_CASE("impossible dot specs are rejected") {
    DotFieldSpec spec;
    spec.width = spec.height = 64;
    spec.n_dots = 200;  // cannot place 200 non-overlapping r=5 dots in 64x64
    CHECK_THROWS_AS(generate_dot_field(spec, 1), std::runtime_error);

    DotFieldSpec bad;
    bad.michelson = 1.5;
    CHECK_THROWS_AS(generate_dot_field(bad, 1), std::invalid_argument);
    bad = DotFieldSpec{};
    bad.scale = 2.0;
    CHECK_THROWS_AS(generate_dot_field(bad, 1), std::invalid_argument);
}

TEST_CASE("manifests carry the full spec as key=value lines") {
    LesionSpec lesion;
    lesion.center_x = 12;
    const std::string m1 = manifest(lesion);
    CHECK(m1.find("kind=lesion\n") != std::string::npos);
    CHECK(m1.find("center_x=12\n") != std::string::npos);
    CHECK(m1.find("gray_b=160\n") != std::string::npos);

    DotFieldSpec dots;
    const std::string m2 = manifest(dots, 42);
    CHECK(m2.find("kind=dot_field\n") != std::string::npos);
    CHECK(m2.find("seed=42\n") != std::string::npos);
    CHECK(m2.find("michelson=0.7000\n") != std::string::npos);
}
