#include "covertlink/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "covertlink/fading.hpp"
#include "covertlink/numerics.hpp"

namespace covertlink::mc {

namespace {

// Fixed block count: the partition (and with it every estimate) depends only
// on (samples, seed), never on the worker count.
constexpr int kBlocks = 1024;

long block_begin(long samples, int b) {
    return static_cast<long>((static_cast<long long>(samples) * b) / kBlocks);
}

void validate(const McConfig& cfg) {
    if (cfg.samples < 1) throw std::invalid_argument("McConfig: samples must be positive");
    if (cfg.workers < 1) throw std::invalid_argument("McConfig: workers must be positive");
}

// Runs `body(block, engine, count)` over all blocks, spread across workers.
// Each block owns a child stream of the seed; bodies write only block-local
// state, so no synchronization is needed.
template <typename Body>
void run_blocks(const McConfig& cfg, const Body& body) {
    auto worker = [&](int tid) {
        for (int b = tid; b < kBlocks; b += cfg.workers) {
            const long count = block_begin(cfg.samples, b + 1) - block_begin(cfg.samples, b);
            if (count == 0) continue;
            auto rng = num::seeded_engine(cfg.seed, static_cast<std::uint64_t>(b));
            body(b, rng, count);
        }
    };
    if (cfg.workers == 1) {
        worker(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(cfg.workers);
    for (int t = 0; t < cfg.workers; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
}

double binomial_se(double p, double n) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / n); }

}  // namespace

SinrCdfEstimate estimate_sinr_cdf(const sinr::UserChannel& ch,
                                  const std::vector<double>& gamma_grid, const McConfig& cfg) {
    validate(cfg);
    if (gamma_grid.empty())
        throw std::invalid_argument("estimate_sinr_cdf: gamma grid must be nonempty");
    for (const double g : gamma_grid)
        if (!std::isfinite(g))
            throw std::invalid_argument("estimate_sinr_cdf: gamma grid must be finite");

    const size_t m = gamma_grid.size();
    std::vector<std::vector<long>> counts(kBlocks, std::vector<long>(m, 0));
    run_blocks(cfg, [&](int b, std::mt19937_64& rng, long count) {
        auto& mine = counts[b];
        for (long i = 0; i < count; ++i) {
            const double x = fading::sample_ftr(ch.ftr, rng);
            const double z = fading::sample_f(ch.fisher, rng);
            const double ratio = ch.link.c1 * x / (ch.link.kappa2 + ch.link.c2 * z);
            for (size_t j = 0; j < m; ++j)
                if (ratio <= gamma_grid[j]) ++mine[j];
        }
    });

    SinrCdfEstimate out;
    out.cdf.resize(m);
    out.se.resize(m);
    const double n = static_cast<double>(cfg.samples);
    for (size_t j = 0; j < m; ++j) {
        long total = 0;
        for (int b = 0; b < kBlocks; ++b) total += counts[b][j];
        out.cdf[j] = total / n;
        out.se[j] = binomial_se(out.cdf[j], n);
    }
    return out;
}

DepEstimate estimate_dep(const covert::WardenChannel& w, double epsilon, const McConfig& cfg) {
    validate(cfg);
    if (!std::isfinite(epsilon))
        throw std::invalid_argument("estimate_dep: epsilon must be finite");

    struct Cell {
        long fa = 0;
        long md = 0;
    };
    std::vector<Cell> cells(kBlocks);
    run_blocks(cfg, [&](int b, std::mt19937_64& rng, long count) {
        auto& mine = cells[b];
        for (long i = 0; i < count; ++i) {
            const double x = fading::sample_ftr(w.ftr, rng);
            const double z = fading::sample_f(w.fisher, rng);
            const double silent = w.link.kappa2 + w.link.c2 * z;
            if (silent > epsilon)
                ++mine.fa;
            else if (silent + w.link.c1 * x <= epsilon)
                ++mine.md;
        }
    });

    long fa = 0, md = 0;
    for (const auto& c : cells) {
        fa += c.fa;
        md += c.md;
    }
    const double n = static_cast<double>(cfg.samples);
    DepEstimate out;
    out.p_fa = fa / n;
    out.p_md = md / n;
    out.xi = (fa + md) / n;
    out.se_fa = binomial_se(out.p_fa, n);
    out.se_md = binomial_se(out.p_md, n);
    out.se_xi = binomial_se(out.xi, n);
    return out;
}

RateEstimate estimate_rate(const sinr::UserChannel& ch, const McConfig& cfg) {
    validate(cfg);

    struct Sums {
        double r = 0.0;
        double r2 = 0.0;
    };
    std::vector<Sums> sums(kBlocks);
    run_blocks(cfg, [&](int b, std::mt19937_64& rng, long count) {
        num::Kahan acc, acc2;
        for (long i = 0; i < count; ++i) {
            const double x = fading::sample_ftr(ch.ftr, rng);
            const double z = fading::sample_f(ch.fisher, rng);
            const double r =
                std::log2(1.0 + ch.link.c1 * x / (ch.link.kappa2 + ch.link.c2 * z));
            acc.add(r);
            acc2.add(r * r);
        }
        sums[b] = {acc.sum, acc2.sum};
    });

    num::Kahan acc, acc2;
    for (const auto& s : sums) {
        acc.add(s.r);
        acc2.add(s.r2);
    }
    const double n = static_cast<double>(cfg.samples);
    RateEstimate out;
    out.mean = acc.sum / n;
    const double var = std::max(acc2.sum / n - out.mean * out.mean, 0.0);
    out.se = std::sqrt(var / n);
    return out;
}

double ks_distance(std::vector<double> draws,
                   const std::function<double(double)>& analytic_cdf) {
    if (draws.empty()) throw std::invalid_argument("ks_distance: draws must be nonempty");
    if (!analytic_cdf) throw std::invalid_argument("ks_distance: cdf must be callable");
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    double d = 0.0;
    for (size_t i = 0; i < draws.size(); ++i) {
        const double f = analytic_cdf(draws[i]);
        d = std::max(d, std::max(f - i / n, (i + 1.0) / n - f));
    }
    return d;
}

}  // namespace covertlink::mc
