#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "covertlink/covert.hpp"
#include "covertlink/sinr.hpp"

namespace covertlink::mc {

/// Sampling plan shared by every estimator.  Draws are partitioned into a
/// fixed number of blocks, each with its own child stream of `seed`, and
/// workers pick up whole blocks; estimates are therefore identical for any
/// worker count.  Acceptance-grade runs use samples >= 1e4.
struct McConfig {
    long samples = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
};

struct SinrCdfEstimate {
    std::vector<double> cdf;  // per grid point, fraction of draws at or below
    std::vector<double> se;   // binomial standard errors
};

struct DepEstimate {
    double p_fa = 0.0;  // silent reading above the threshold
    double p_md = 0.0;  // active reading at or below it
    double xi = 0.0;    // their sum (the two events are exclusive per draw)
    double se_fa = 0.0;
    double se_md = 0.0;
    double se_xi = 0.0;
};

struct RateEstimate {
    double mean = 0.0;  // sample mean of log2(1 + drawn ratio)
    double se = 0.0;
};

/// Empirical distribution of c1 X / (kappa2 + c2 Z) on a grid of ratio
/// values.  Grid entries must be finite; the grid need not be sorted.
SinrCdfEstimate estimate_sinr_cdf(const sinr::UserChannel& ch,
                                  const std::vector<double>& gamma_grid,
                                  const McConfig& cfg);

/// Empirical error probabilities of the threshold test at `epsilon`.  The
/// silent reading is kappa2 + c2 Z; the active one adds c1 X to the same
/// draw, so the false-alarm and missed-detection indicators never fire
/// together and xi carries a plain binomial error.
DepEstimate estimate_dep(const covert::WardenChannel& w, double epsilon,
                         const McConfig& cfg);

/// Sample mean of the instantaneous rate log2(1 + c1 X / (kappa2 + c2 Z)).
RateEstimate estimate_rate(const sinr::UserChannel& ch, const McConfig& cfg);

/// Kolmogorov-Smirnov statistic between a sample and a distribution
/// function: sup over the sorted draws of |empirical step - analytic_cdf|.
double ks_distance(std::vector<double> draws,
                   const std::function<double(double)>& analytic_cdf);

}  // namespace covertlink::mc
