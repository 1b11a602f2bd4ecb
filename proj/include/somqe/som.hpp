#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "somqe/prng.hpp"

namespace somqe {

/// Sample matrix: one row per sample, one column per feature component.
/// Row-major so each sample is contiguous in memory.
template <typename Scalar>
using SampleMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Neighborhood { gaussian, bubble };
enum class Topology { rectangular, hexagonal };

struct TrainConfig {
    int grid_rows = 16;
    int grid_cols = 16;
    int dim = 1;
    double radius0 = 5.0;
    double radius_final = 1.0;
    double alpha0 = 0.2;
    double alpha_final = 0.01;
    int iterations = 10000;
    Neighborhood neighborhood = Neighborhood::gaussian;
    Topology topology = Topology::rectangular;
    std::uint64_t seed = 0;

    void validate() const {
        if (grid_rows < 1 || grid_cols < 1) throw std::invalid_argument("TrainConfig: grid dims must be positive");
        if (dim < 1) throw std::invalid_argument("TrainConfig: dim must be positive");
        if (radius0 <= 0.0 || radius_final <= 0.0) throw std::invalid_argument("TrainConfig: radii must be positive");
        if (radius_final > radius0) throw std::invalid_argument("TrainConfig: radius_final must not exceed radius0");
        if (alpha0 <= 0.0 || alpha0 > 1.0 || alpha_final <= 0.0 || alpha_final > 1.0)
            throw std::invalid_argument("TrainConfig: learning rates must be in (0,1]");
        if (alpha_final > alpha0) throw std::invalid_argument("TrainConfig: alpha_final must not exceed alpha0");
        if (iterations < 1) throw std::invalid_argument("TrainConfig: iterations must be >= 1");
    }
};

/// Grid location of a map node.
struct GridIndex {
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

/// A trained (or freshly seeded) map: grid_rows x grid_cols nodes, each
/// owning one weight vector. Node i lives at grid (i / grid_cols, i % grid_cols);
/// weights.row(i) is its vector.
template <typename Scalar = double>
struct SomMap {
    Eigen::Index grid_rows = 0;
    Eigen::Index grid_cols = 0;
    SampleMatrix<Scalar> weights;

    Eigen::Index node_count() const { return grid_rows * grid_cols; }
    Eigen::Index dim() const { return weights.cols(); }
    Eigen::Index linear(GridIndex g) const { return g.row * grid_cols + g.col; }
};

/// Squared distance between two grid locations. Rectangular grids use the
/// integer lattice; hexagonal grids use the standard offset layout with odd
/// rows shifted half a cell and row pitch sqrt(3)/2.
inline double grid_distance_sq(Topology topo, Eigen::Index r1, Eigen::Index c1,
                               Eigen::Index r2, Eigen::Index c2) {
    if (topo == Topology::rectangular) {
        const double dr = static_cast<double>(r1 - r2);
        const double dc = static_cast<double>(c1 - c2);
        return dr * dr + dc * dc;
    }
    const double x1 = static_cast<double>(c1) + 0.5 * static_cast<double>(r1 & 1);
    const double x2 = static_cast<double>(c2) + 0.5 * static_cast<double>(r2 & 1);
    const double row_pitch = 0.8660254037844386;  // sqrt(3)/2
    const double dx = x1 - x2;
    const double dy = (static_cast<double>(r1) - static_cast<double>(r2)) * row_pitch;
    return dx * dx + dy * dy;
}

/// Linear schedule between start and end over T steps, evaluated at step t.
inline double decay(std::int64_t t, std::int64_t total, double start, double end) {
    if (total < 1) throw std::invalid_argument("decay: total must be >= 1");
    if (t < 0 || t > total) throw std::out_of_range("decay: t out of [0, total]");
    return start + (end - start) * (static_cast<double>(t) / static_cast<double>(total));
}

/// Influence of a winner on a node at squared grid distance d2,
/// for the current radius sigma. Gaussian: exp(-d2 / (2 sigma^2));
/// bubble: 1 inside the radius, 0 outside.
inline double neighborhood_weight(double d2, double sigma, Neighborhood kind) {
    if (sigma <= 0.0) throw std::invalid_argument("neighborhood_weight: sigma must be positive");
    if (d2 < 0.0) throw std::invalid_argument("neighborhood_weight: squared distance must be >= 0");
    if (kind == Neighborhood::gaussian) return std::exp(-d2 / (2.0 * sigma * sigma));
    return d2 <= sigma * sigma ? 1.0 : 0.0;
}

namespace detail {

// Squared Euclidean distance with a fixed component order: summation runs
// d = 0..dim-1, one multiply-add per component, no fused contraction. The
// exhaustive-scan oracles and golden trainings depend on these exact bits.
template <typename Scalar>
Scalar squared_distance(const Scalar* a, const Scalar* b, Eigen::Index dim) {
    Scalar acc = Scalar(0);
    for (Eigen::Index d = 0; d < dim; ++d) {
        const Scalar diff = a[d] - b[d];
        acc += diff * diff;
    }
    return acc;
}

// Winner search over contiguous row-major weights. Strict less-than keeps
// the lowest linear index on ties.
template <typename Scalar>
Eigen::Index best_matching_row(const SampleMatrix<Scalar>& weights, const Scalar* x) {
    const Eigen::Index dim = weights.cols();
    Eigen::Index best = 0;
    Scalar best_d = squared_distance(weights.data(), x, dim);
    for (Eigen::Index i = 1; i < weights.rows(); ++i) {
        const Scalar d = squared_distance(weights.data() + i * dim, x, dim);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

template <typename Scalar>
void check_data(const SampleMatrix<Scalar>& data, Eigen::Index dim, const char* who) {
    if (data.rows() < 1) throw std::invalid_argument(std::string(who) + ": sample set is empty");
    if (data.cols() != dim)
        throw std::invalid_argument(std::string(who) + ": dimension mismatch (samples are " +
                                    std::to_string(data.cols()) + "-d, expected " + std::to_string(dim) + ")");
}

// Node weights start as copies of samples drawn with replacement; consumes
// node_count draws from the caller's stream in row-major node order.
template <typename Scalar>
SomMap<Scalar> init_map_from(Rng& rng, const TrainConfig& cfg, const SampleMatrix<Scalar>& data) {
    cfg.validate();
    check_data(data, cfg.dim, "init_map");
    SomMap<Scalar> map;
    map.grid_rows = cfg.grid_rows;
    map.grid_cols = cfg.grid_cols;
    map.weights.resize(map.node_count(), cfg.dim);
    const auto n = static_cast<std::uint64_t>(data.rows());
    for (Eigen::Index i = 0; i < map.node_count(); ++i)
        map.weights.row(i) = data.row(static_cast<Eigen::Index>(draw_index(rng, n)));
    return map;
}

}  // namespace detail

/// Seed the map with samples picked at random (with replacement) from data.
template <typename Scalar>
SomMap<Scalar> init_map(const TrainConfig& cfg, const SampleMatrix<Scalar>& data) {
    Rng rng(cfg.seed);
    return detail::init_map_from(rng, cfg, data);
}

/// Best matching unit: the node whose weight vector is closest to x in
/// Euclidean distance; ties resolve to the lowest row-major linear index.
template <typename Scalar, typename Derived>
GridIndex bmu(const SomMap<Scalar>& map, const Eigen::MatrixBase<Derived>& x) {
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> xv = x;
    if (xv.size() != map.dim())
        throw std::invalid_argument("bmu: dimension mismatch (sample is " + std::to_string(xv.size()) +
                                    "-d, map is " + std::to_string(map.dim()) + "-d)");
    const Eigen::Index i = detail::best_matching_row(map.weights, xv.data());
    return GridIndex{i / map.grid_cols, i % map.grid_cols};
}

/// Online Kohonen training. Every iteration draws one sample, finds its
/// winner and pulls every node toward the sample, scaled by the decayed
/// learning rate and the neighborhood weight of its grid distance to the
/// winner. Nodes update in row-major order; the whole run is a pure
/// function of (config, data).
template <typename Scalar>
SomMap<Scalar> train(const TrainConfig& cfg, const SampleMatrix<Scalar>& data) {
    Rng rng(cfg.seed);
    SomMap<Scalar> map = detail::init_map_from(rng, cfg, data);
    const auto n = static_cast<std::uint64_t>(data.rows());
    const Eigen::Index nodes = map.node_count();
    const Eigen::Index dim = map.dim();
    for (int t = 0; t < cfg.iterations; ++t) {
        const double sigma = decay(t, cfg.iterations, cfg.radius0, cfg.radius_final);
        const double alpha = decay(t, cfg.iterations, cfg.alpha0, cfg.alpha_final);
        const Eigen::Index xi = static_cast<Eigen::Index>(draw_index(rng, n));
        const Scalar* x = data.data() + xi * dim;
        const Eigen::Index winner = detail::best_matching_row(map.weights, x);
        const Eigen::Index wr = winner / map.grid_cols;
        const Eigen::Index wc = winner % map.grid_cols;
        for (Eigen::Index i = 0; i < nodes; ++i) {
            const double d2 = grid_distance_sq(cfg.topology, i / map.grid_cols, i % map.grid_cols, wr, wc);
            const Scalar g = static_cast<Scalar>(alpha * neighborhood_weight(d2, sigma, cfg.neighborhood));
            Scalar* w = map.weights.data() + i * dim;
            for (Eigen::Index d = 0; d < dim; ++d) w[d] += g * (x[d] - w[d]);
        }
    }
    return map;
}

/// Mean Euclidean distance between each sample and its BMU weight.
/// Summation runs in sample order with Neumaier compensation, so the result
/// does not depend on how callers partition the data across threads.
template <typename Scalar>
Scalar quantization_error(const SomMap<Scalar>& map, const SampleMatrix<Scalar>& data) {
    detail::check_data(data, map.dim(), "quantization_error");
    const Eigen::Index dim = map.dim();
    Scalar sum = Scalar(0);
    Scalar comp = Scalar(0);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        const Scalar* x = data.data() + i * dim;
        const Eigen::Index b = detail::best_matching_row(map.weights, x);
        const Scalar dist = std::sqrt(detail::squared_distance(map.weights.data() + b * dim, x, dim));
        const Scalar t = sum + dist;
        if (std::abs(sum) >= std::abs(dist))
            comp += (sum - t) + dist;
        else
            comp += (dist - t) + sum;
        sum = t;
    }
    return (sum + comp) / static_cast<Scalar>(data.rows());
}

}  // namespace somqe
