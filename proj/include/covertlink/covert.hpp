#pragma once

#include <optional>
#include <vector>

#include "covertlink/fading.hpp"
#include "covertlink/numerics.hpp"
#include "covertlink/sinr.hpp"

namespace covertlink::covert {

/// The warden's view of one user: FTR fading on the transmitter->warden link,
/// F-distributed fading on the jammer->warden link, and the received-power
/// coefficients.  Unlike a user link, c1 may be zero: a silent transmitter is
/// a meaningful detection target whose error probability is identically one.
struct WardenChannel {
    fading::FtrParams ftr;
    fading::FisherFParams fisher;
    sinr::LinkCoefficients link;
    int truncation;

    WardenChannel(const fading::FtrParams& ftr_in, const fading::FisherFParams& fisher_in,
                  double c1, double c2, double kappa2, double mass_tol = 1e-8);
};

/// P(kappa2 + c2 Z > epsilon): a silent-hypothesis radiometer reading
/// exceeds the threshold.  One for epsilon <= kappa2; nonincreasing in
/// epsilon.
double false_alarm_prob(const WardenChannel& w, double epsilon);

/// P(c1 X + kappa2 + c2 Z <= epsilon): an active transmission stays below
/// the threshold.  Zero for epsilon <= kappa2; nondecreasing in epsilon.
double missed_detection_prob(const WardenChannel& w, double epsilon);

/// Sum of the two error probabilities, the quantity the warden minimizes
/// over epsilon.  Exactly 1 for epsilon <= kappa2 and in the large-epsilon
/// limit; the interior dip below 1 is what a power allocation defends.
double detection_error_probability(const WardenChannel& w, double epsilon);

/// Ergodic rate E[log2(1 + gamma)] of a user channel, bits/s/Hz.  Evaluated
/// through the contour-series form and cross-checked against a direct
/// quadrature of the defining integral; on disagreement beyond 1% the
/// quadrature value wins and a diagnostic goes to stderr.
double covert_rate(const sinr::UserChannel& ch);

/// One member of the weighted-exponential integral family
///   integral over (t1, t2) of t^a (b - t)^c exp(-d t) dt,
/// where for t > b the factor is continued as exp(i*pi*c) (t - b)^c and the
/// real part is returned.  Only four ranges exist: (0, T) with T = t2,
/// (T, inf) with T = t1, (0, inf), and (0, b) with t2 == b exactly.
struct LemmaIntegralCase {
    double t1 = 0.0;
    double t2 = 0.0;  // may be +infinity
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

/// Evaluates one LemmaIntegralCase.  Throws std::domain_error when the
/// range pattern is not one of the four supported ones or a case condition
/// fails: d > 0 on unbounded-weight ranges, t < b or b <= 0 on (0, T)
/// (with c not a nonpositive integer there), b > 0 elsewhere, and the
/// integrability guards a > -1 at a left endpoint 0 and c > -1 whenever the
/// range touches b.  The (0, inf) case switches to its large-argument form
/// for |b*d| > 50 and its small-argument form for |b*d| < 0.02.
double lemma_integral(const LemmaIntegralCase& cs);

/// Second-difference scan of the detection error probability over a uniform
/// threshold grid.
struct ConvexityReport {
    double min_second_difference;  // smallest central second difference
    double argmin_epsilon;         // grid point where it occurs
    double xi_min;                 // smallest error probability on the grid
    double xi_argmin_epsilon;
    bool single_valley;  // first differences change sign exactly once, - to +
};

/// Probes convexity of the error probability in the threshold.  Requires an
/// ascending uniformly spaced grid of at least three points.
ConvexityReport dep_threshold_convexity_probe(const WardenChannel& w,
                                              const std::vector<double>& epsilon_grid);

/// Finite-difference curvature of the warden's optimized error probability
/// at one received-power point.  epsilon_opt is the minimizing threshold
/// found for the center point; the second derivatives differentiate the
/// map (c1, c2) -> min over epsilon of xi, each evaluation re-optimized.
struct HessianProbePoint {
    double c1w = 0.0;
    double c2w = 0.0;
    double epsilon_opt = 0.0;
    double xi_opt = 0.0;
    double d2_c1c1 = 0.0;
    double d2_c1c2 = 0.0;
    double d2_c2c2 = 0.0;
    double determinant = 0.0;
};

/// Evaluates the curvature probe on the cartesian product of the two grids,
/// replacing the channel's own power coefficients point by point.  Steps are
/// relative (1e-3) with one Richardson halving.  Grid values must be
/// strictly positive: the zero-power corner has no curvature to report.
std::vector<HessianProbePoint> dep_hessian_probe(const WardenChannel& w,
                                                 const std::vector<double>& c1w_grid,
                                                 const std::vector<double>& c2w_grid);

namespace detail {

/// Contour-series route of missed_detection_prob.  Empty when the engine's
/// error estimate disqualifies its own refinement or the series is longer
/// than the engine accepts; callers then integrate the conditional law.
std::optional<double> missed_detection_mellin(const WardenChannel& w, double epsilon);

/// Contour-series route of the rate.  Empty off the interference regime the
/// contour argument supports or on a disqualified refinement.
std::optional<double> covert_rate_mellin(const sinr::UserChannel& ch);

/// Deterministic composite-rule quadrature of the defining rate integral.
/// tight trades roughly 4x the work for ~1e-8 relative accuracy; the fast
/// setting stays within ~1e-4, enough for line searches.
double covert_rate_quadrature(const sinr::UserChannel& ch, bool tight = true);

/// Threshold-side evaluator with the mixture expansion, suffix sums, and
/// quadrature rules precomputed, so threshold sweeps cost one composite rule
/// pass per point.  rebind() reuses those caches for new power coefficients,
/// which is what makes nested best-response loops affordable.
class DepEvaluator {
  public:
    explicit DepEvaluator(const WardenChannel& w);

    DepEvaluator rebind(double c1w, double c2w) const;

    double false_alarm(double epsilon) const;
    double missed_detection(double epsilon) const;  // conditional-law route
    double dep(double epsilon) const;

    /// Golden-section minimum of dep over (kappa2, search_hi()); relies on
    /// the single-valley shape of the curve, not on convexity (the curve is
    /// concave on both shoulders of the valley).
    double min_dep(double* epsilon_opt = nullptr) const;

    /// Upper end of the threshold bracket: past every plausible crossing of
    /// the two hypotheses' densities.
    double search_hi() const;

    double c1() const { return c1_; }
    double c2() const { return c2_; }

  private:
    fading::FisherFParams fisher_;
    double c1_, c2_, kappa2_;
    double sigma2_;                // FTR diffuse variance
    double ftr_mean_;
    std::vector<double> suffix_;   // suffix sums of the mixture masses
    double mass_;                  // total retained mixture mass
    double m_f_;                   // interference multipath severity
    num::QuadNodes gl_, jac_;      // interior pieces / left-endpoint piece

    double ftr_cdf_fast(double x) const;
};

/// Rate-side analog of DepEvaluator: eval(c1, c2) integrates the defining
/// rate integral with frozen rules, so allocation sweeps reuse every cache.
class RateEvaluator {
  public:
    explicit RateEvaluator(const sinr::UserChannel& ch, bool tight = false);

    double eval(double c1, double c2) const;

  private:
    fading::FisherFParams fisher_;
    double kappa2_;
    double sigma2_;
    double ftr_mean_;
    std::vector<double> weights_;  // mixture masses
    double tail_tol_;              // relative mass allowed past the far cutoff
    num::QuadNodes glg_, jacg_;    // rate-variable pieces / tail
    num::QuadNodes glz_, jacz0_, jaczt_;  // interference pieces / endpoint / tail

    double cond_pdf(double c1, double c2, double gamma) const;
};

}  // namespace detail

}  // namespace covertlink::covert
