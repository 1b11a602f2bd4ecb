#pragma once

#include <atomic>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "somqe/image.hpp"
#include "somqe/som.hpp"
#include "somqe/stats.hpp"

namespace somqe {

enum class TrainMode { per_image, reference };

/// A whole-series run: images, feature extraction, train/evaluate policy.
/// per_image retrains a fresh map on every image with the identical config
/// and seed; reference trains once on the first image and scores the rest
/// against that map.
struct SeriesConfig {
    TrainMode mode = TrainMode::per_image;
    TrainConfig train;
    FeatureMode feature;
    std::vector<std::string> inputs;
    int repeats = 1;   // independent runs averaged per image (seed, seed+1, ...)
    int threads = 1;

    void validate() const {
        train.validate();
        if (repeats < 1) throw std::invalid_argument("SeriesConfig: repeats must be >= 1");
        if (threads < 1) throw std::invalid_argument("SeriesConfig: threads must be >= 1");
    }
};

struct QeSeriesReport {
    struct Entry {
        std::string image;
        double qe = 0.0;
        double qe_sd = 0.0;  // spread across repeats; 0 when repeats == 1
    };
    std::vector<Entry> entries;
    double mean = 0.0;
    double sd = 0.0;
    double sem = 0.0;
    SeriesConfig config;

    std::vector<double> qe_column() const {
        std::vector<double> v;
        for (const auto& e : entries) v.push_back(e.qe);
        return v;
    }
};

namespace detail {

inline const char* name(TrainMode m) { return m == TrainMode::per_image ? "per_image" : "reference"; }
inline const char* name(Neighborhood n) { return n == Neighborhood::gaussian ? "gaussian" : "bubble"; }
inline const char* name(Topology t) { return t == Topology::rectangular ? "rectangular" : "hexagonal"; }
inline std::string name(const FeatureMode& f) {
    std::string s = f.kind == FeatureMode::Kind::pixel ? "pixel" : "patch:" + std::to_string(f.patch_side);
    s += f.normalize == FeatureMode::Normalize::unit_range ? ",unit_range" : ",none";
    return s;
}

// Run fn(i) for i in [0, n) on the requested number of workers. Work items
// are claimed through a shared counter; each item writes only its own slot,
// so results are identical for any worker count.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    const int workers = std::min(threads, n);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Run a series over decoded images. Deterministic for a fixed config: the
/// same seed retrains identically per image (per_image) or reuses one map
/// (reference), and repeats r uses seed + r. out_map receives the map the
/// run would persist: the reference map, or the first image's map.
inline QeSeriesReport run_series(const SeriesConfig& cfg, const std::vector<ImageBuffer>& images,
                                 const std::vector<std::string>& names,
                                 SomMap<double>* out_map = nullptr) {
    cfg.validate();
    if (images.empty()) throw std::invalid_argument("run_series: no input images");
    if (names.size() != images.size()) throw std::invalid_argument("run_series: names/images size mismatch");
    for (std::size_t i = 1; i < images.size(); ++i)
        if (images[i].width != images[0].width || images[i].height != images[0].height ||
            images[i].channels != images[0].channels)
            throw io_error("run_series: " + names[i] + " does not match the dimensions of " + names[0]);

    std::vector<SampleMatrix<double>> samples(images.size());
    detail::parallel_for(static_cast<int>(images.size()), cfg.threads,
                         [&](int i) { samples[i] = extract_samples(images[i], cfg.feature); });

    TrainConfig tc = cfg.train;
    tc.dim = static_cast<int>(samples[0].cols());

    QeSeriesReport report;
    report.config = cfg;
    report.config.train = tc;
    report.entries.resize(images.size());

    const auto summarize = [&](std::vector<double>& runs, QeSeriesReport::Entry& e) {
        e.qe = mean(runs);
        e.qe_sd = runs.size() > 1 ? sample_sd(runs) : 0.0;
    };

    if (cfg.mode == TrainMode::per_image) {
        detail::parallel_for(static_cast<int>(images.size()), cfg.threads, [&](int i) {
            std::vector<double> runs;
            for (int r = 0; r < cfg.repeats; ++r) {
                TrainConfig rc = tc;
                rc.seed = tc.seed + static_cast<std::uint64_t>(r);
                const SomMap<double> map = train(rc, samples[i]);
                runs.push_back(quantization_error(map, samples[i]));
                if (out_map && i == 0 && r == 0) *out_map = map;
            }
            report.entries[i].image = names[i];
            summarize(runs, report.entries[i]);
        });
    } else {
        std::vector<SomMap<double>> maps(cfg.repeats);
        detail::parallel_for(cfg.repeats, cfg.threads, [&](int r) {
            TrainConfig rc = tc;
            rc.seed = tc.seed + static_cast<std::uint64_t>(r);
            maps[r] = train(rc, samples[0]);
        });
        if (out_map) *out_map = maps[0];
        detail::parallel_for(static_cast<int>(images.size()), cfg.threads, [&](int i) {
            std::vector<double> runs;
            for (const auto& map : maps) runs.push_back(quantization_error(map, samples[i]));
            report.entries[i].image = names[i];
            summarize(runs, report.entries[i]);
        });
    }

    const std::vector<double> qe = report.qe_column();
    report.mean = mean(qe);
    report.sd = qe.size() > 1 ? sample_sd(qe) : 0.0;
    report.sem = report.sd / std::sqrt(static_cast<double>(qe.size()));
    return report;
}

/// File-based entry point: decode the configured inputs, then run.
inline QeSeriesReport run_series(const SeriesConfig& cfg, SomMap<double>* out_map = nullptr) {
    if (cfg.inputs.empty()) throw std::invalid_argument("run_series: no input images");
    std::vector<ImageBuffer> images(cfg.inputs.size());
    for (std::size_t i = 0; i < cfg.inputs.size(); ++i) {
        try {
            images[i] = load_image(cfg.inputs[i]);
        } catch (const io_error& e) {
            throw io_error(cfg.inputs[i] + ": " + e.what());
        }
    }
    return run_series(cfg, images, cfg.inputs, out_map);
}

/// Student t between the QE columns of two reports.
inline StatResult compare_series(const QeSeriesReport& a, const QeSeriesReport& b) {
    const auto qa = a.qe_column();
    const auto qb = b.qe_column();
    return two_sample_t(qa, qb);
}

/// Machine-readable report: exactly index,image,qe with QE at 4 decimals.
inline std::string to_csv(const QeSeriesReport& report) {
    std::string out = "index,image,qe\n";
    char buf[64];
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%s,%.4f\n", i, report.entries[i].image.c_str(), report.entries[i].qe);
        out += buf;
    }
    return out;
}

/// Full configuration echo as key=value lines; running the echoed config
/// again reproduces the report bit-exactly.
inline std::string to_manifest(const SeriesConfig& cfg) {
    char buf[256];
    std::string out;
    out += std::string("train_mode=") + detail::name(cfg.mode) + "\n";
    std::snprintf(buf, sizeof buf, "map=%dx%d\n", cfg.train.grid_rows, cfg.train.grid_cols);
    out += buf;
    std::snprintf(buf, sizeof buf, "radius0=%.17g\nradius_final=%.17g\nalpha0=%.17g\nalpha_final=%.17g\n",
                  cfg.train.radius0, cfg.train.radius_final, cfg.train.alpha0, cfg.train.alpha_final);
    out += buf;
    out += "iterations=" + std::to_string(cfg.train.iterations) + "\n";
    out += std::string("neighborhood=") + detail::name(cfg.train.neighborhood) + "\n";
    out += std::string("topology=") + detail::name(cfg.train.topology) + "\n";
    out += "seed=" + std::to_string(cfg.train.seed) + "\n";
    out += "feature=" + detail::name(cfg.feature) + "\n";
    out += "repeats=" + std::to_string(cfg.repeats) + "\n";
    return out;
}

/// Human-readable report: config echo, one line per image, summary.
inline std::string to_text(const QeSeriesReport& report) {
    std::string out = "# series configuration\n" + to_manifest(report.config) + "\n# quantization errors\n";
    char buf[512];
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const auto& e = report.entries[i];
        if (report.config.repeats > 1)
            std::snprintf(buf, sizeof buf, "%4zu  %-40s  %12.4f  (sd %.4f over %d runs)\n", i, e.image.c_str(),
                          e.qe, e.qe_sd, report.config.repeats);
        else
            std::snprintf(buf, sizeof buf, "%4zu  %-40s  %12.4f\n", i, e.image.c_str(), e.qe);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "\nmean=%.4f sd=%.4f sem=%.4f n=%zu\n", report.mean, report.sd, report.sem,
                  report.entries.size());
    out += buf;
    return out;
}

}  // namespace somqe
