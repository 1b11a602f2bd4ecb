#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "somqe/image.hpp"
#include "somqe/prng.hpp"

namespace somqe {

/// Elliptical test lesion. Defaults are the 44x26-pixel bounding box
/// (semi-axes 22 and 13) filled with a 2-px checkerboard of two mid-grays.
struct LesionSpec {
    enum class Pattern { checker2, solid };
    int center_x = 0;
    int center_y = 0;
    int semi_axis_a = 22;
    int semi_axis_b = 13;
    Pattern pattern = Pattern::checker2;
    int gray_a = 96;
    int gray_b = 160;
};

/// Overwrite the ellipse interior with the lesion pattern; every pixel
/// outside the ellipse stays byte-identical. checker2 keys the checkerboard
/// off absolute image coordinates, so re-injecting the same spec is a
/// no-op.
inline ImageBuffer inject_lesion(const ImageBuffer& img, const LesionSpec& spec) {
    if (img.channels != 1) throw std::invalid_argument("inject_lesion: grayscale input required");
    if (spec.semi_axis_a < 1 || spec.semi_axis_b < 1)
        throw std::invalid_argument("inject_lesion: semi-axes must be positive");
    if (spec.center_x - spec.semi_axis_a < 0 || spec.center_x + spec.semi_axis_a >= img.width ||
        spec.center_y - spec.semi_axis_b < 0 || spec.center_y + spec.semi_axis_b >= img.height)
        throw std::invalid_argument("inject_lesion: lesion bounding box does not fit inside the image");
    if (spec.gray_a < 0 || spec.gray_a > img.max_value() || spec.gray_b < 0 || spec.gray_b > img.max_value())
        throw std::invalid_argument("inject_lesion: gray levels exceed the image bit depth");

    ImageBuffer out = img;
    const double a = spec.semi_axis_a, b = spec.semi_axis_b;
    for (int y = spec.center_y - spec.semi_axis_b; y <= spec.center_y + spec.semi_axis_b; ++y) {
        for (int x = spec.center_x - spec.semi_axis_a; x <= spec.center_x + spec.semi_axis_a; ++x) {
            const double ex = (x - spec.center_x) / a;
            const double ey = (y - spec.center_y) / b;
            if (ex * ex + ey * ey > 1.0) continue;
            const bool even_cell = ((x / 2) + (y / 2)) % 2 == 0;
            const int v = spec.pattern == LesionSpec::Pattern::solid ? spec.gray_a
                                                                     : (even_cell ? spec.gray_a : spec.gray_b);
            out.at(x, y) = static_cast<std::uint16_t>(v);
        }
    }
    return out;
}

/// One Poisson deviate with the given mean. Knuth's product method below
/// lambda 30; above that, a rounded normal approximation clamped at zero.
/// The split is part of the format: stored noise images depend on it.
inline std::int64_t poisson_draw(Rng& rng, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("poisson_draw: lambda must be >= 0");
    if (lambda < 30.0) {
        const double limit = std::exp(-lambda);
        double p = 1.0;
        std::int64_t k = 0;
        do {
            ++k;
            p *= draw_unit(rng);
        } while (p > limit);
        return k - 1;
    }
    const double z = draw_normal(rng);
    const double v = std::llround(lambda + std::sqrt(lambda) * z);
    return v < 0.0 ? 0 : static_cast<std::int64_t>(v);
}

/// Replace every sample by a Poisson draw whose mean is the sample's
/// intensity, clamped to the representable range. Pixels are visited in
/// storage order, so the result is a pure function of (image, seed).
inline ImageBuffer add_poisson_noise(const ImageBuffer& img, std::uint64_t seed) {
    ImageBuffer out = img;
    Rng rng(seed);
    const std::int64_t max = img.max_value();
    for (auto& v : out.pixels) {
        const std::int64_t draw = poisson_draw(rng, static_cast<double>(v));
        v = static_cast<std::uint16_t>(draw > max ? max : draw);
    }
    return out;
}

/// Random-dot stimulus: n_dots dark filled circles on a light background,
/// dot level set by the Michelson contrast against the background. One
/// designated dot (target_index) is drawn at base_radius * scale.
struct DotFieldSpec {
    int width = 512;
    int height = 512;
    int n_dots = 50;
    double base_radius = 5.0;
    int background = 255;
    double michelson = 0.7;
    int target_index = 0;
    double scale = 1.0;
};

/// Largest permitted target scale. Placement always reserves this
/// footprint for the target, so fields generated from one seed differ only
/// inside the target's maximal disc as scale varies.
inline constexpr double kMaxDotScale = 1.3;

/// Intensity d solving (background - d) / (background + d) = michelson.
inline int dot_intensity(int background, double michelson) {
    return static_cast<int>(std::lround(background * (1.0 - michelson) / (1.0 + michelson)));
}

inline ImageBuffer generate_dot_field(const DotFieldSpec& spec, std::uint64_t seed) {
    if (spec.width < 1 || spec.height < 1) throw std::invalid_argument("generate_dot_field: bad dimensions");
    if (spec.n_dots < 1) throw std::invalid_argument("generate_dot_field: n_dots must be positive");
    if (spec.base_radius <= 0.0) throw std::invalid_argument("generate_dot_field: base_radius must be positive");
    if (spec.michelson <= 0.0 || spec.michelson >= 1.0)
        throw std::invalid_argument("generate_dot_field: michelson contrast must be in (0,1)");
    if (spec.background < 1 || spec.background > 255)
        throw std::invalid_argument("generate_dot_field: background must be an 8-bit intensity");
    if (spec.target_index < 0 || spec.target_index >= spec.n_dots)
        throw std::invalid_argument("generate_dot_field: target_index out of range");
    if (spec.scale < 1.0 || spec.scale > kMaxDotScale)
        throw std::invalid_argument("generate_dot_field: scale must be in [1, " + std::to_string(kMaxDotScale) + "]");

    // Placement radius: the target reserves its maximal footprint no matter
    // which scale is requested, keeping center placement scale-invariant.
    const auto place_radius = [&](int i) {
        return i == spec.target_index ? spec.base_radius * kMaxDotScale : spec.base_radius;
    };

    Rng rng(seed);
    std::vector<std::pair<int, int>> centers(spec.n_dots);
    const long budget = 1000L * spec.n_dots;
    long attempts = 0;
    for (int i = 0; i < spec.n_dots; ++i) {
        const int margin = static_cast<int>(std::ceil(place_radius(i)));
        const int span_x = spec.width - 2 * margin;
        const int span_y = spec.height - 2 * margin;
        if (span_x < 1 || span_y < 1)
            throw std::invalid_argument("generate_dot_field: dots do not fit inside the image");
        for (;;) {
            if (++attempts > budget)
                throw std::runtime_error("generate_dot_field: placement budget exhausted, spec too dense");
            const int cx = margin + static_cast<int>(draw_index(rng, static_cast<std::uint64_t>(span_x)));
            const int cy = margin + static_cast<int>(draw_index(rng, static_cast<std::uint64_t>(span_y)));
            bool clear = true;
            for (int j = 0; j < i; ++j) {
                const double dx = cx - centers[j].first;
                const double dy = cy - centers[j].second;
                const double min_sep = place_radius(i) + place_radius(j) + 1.0;
                if (dx * dx + dy * dy < min_sep * min_sep) {
                    clear = false;
                    break;
                }
            }
            if (clear) {
                centers[i] = {cx, cy};
                break;
            }
        }
    }

    ImageBuffer img;
    img.width = spec.width;
    img.height = spec.height;
    img.channels = 1;
    img.bit_depth = 8;
    img.pixels.assign(img.sample_count(), static_cast<std::uint16_t>(spec.background));
    const auto level = static_cast<std::uint16_t>(dot_intensity(spec.background, spec.michelson));
    for (int i = 0; i < spec.n_dots; ++i) {
        const double r = i == spec.target_index ? spec.base_radius * spec.scale : spec.base_radius;
        const double r2 = r * r;
        const int ri = static_cast<int>(std::ceil(r));
        const auto [cx, cy] = centers[i];
        for (int y = cy - ri; y <= cy + ri; ++y)
            for (int x = cx - ri; x <= cx + ri; ++x) {
                const double dx = x - cx, dy = y - cy;
                if (dx * dx + dy * dy <= r2) img.at(x, y) = level;
            }
    }
    return img;
}

/// key=value provenance lines for the sidecar manifests the CLI writes next
/// to generated images.
inline std::string manifest(const LesionSpec& s) {
    return "kind=lesion\ncenter_x=" + std::to_string(s.center_x) + "\ncenter_y=" + std::to_string(s.center_y) +
           "\nsemi_axis_a=" + std::to_string(s.semi_axis_a) + "\nsemi_axis_b=" + std::to_string(s.semi_axis_b) +
           "\npattern=" + (s.pattern == LesionSpec::Pattern::checker2 ? "checker2" : "solid") +
           "\ngray_a=" + std::to_string(s.gray_a) + "\ngray_b=" + std::to_string(s.gray_b) + "\n";
}

inline std::string manifest(const DotFieldSpec& s, std::uint64_t seed) {
    char scale[32];
    std::snprintf(scale, sizeof scale, "%.4f", s.scale);
    char michelson[32];
    std::snprintf(michelson, sizeof michelson, "%.4f", s.michelson);
    char radius[32];
    std::snprintf(radius, sizeof radius, "%.4f", s.base_radius);
    return "kind=dot_field\nwidth=" + std::to_string(s.width) + "\nheight=" + std::to_string(s.height) +
           "\nn_dots=" + std::to_string(s.n_dots) + "\nbase_radius=" + radius +
           "\nbackground=" + std::to_string(s.background) + "\nmichelson=" + michelson +
           "\ntarget_index=" + std::to_string(s.target_index) + "\nscale=" + scale +
           "\nseed=" + std::to_string(seed) + "\n";
}

}  // namespace somqe
