#ifndef COVERTLINK_FOXH_HPP
#define COVERTLINK_FOXH_HPP

#include <array>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace covertlink::foxh {

using cplx = std::complex<double>;

/// One gamma factor Gamma(offset + c[0]*s1 + c[1]*s2) of a Mellin-Barnes
/// kernel.  Per-variable factors set the other coefficient to zero.
struct GammaFactor {
    double offset = 0.0;
    std::array<double, 2> c{0.0, 0.0};
};

/// Mellin-Barnes kernel of a (bi)variate Fox H evaluation:
///
///   (1/2·pi·i)^arity  Int ... Int  [prod num / prod den]
///        x1^(sign1*s1) x2^(sign2*s2) ds1 ds2
///
/// num_var / den_var hold the per-variable factor lists, num_joint /
/// den_joint the factors coupling both variables, arg_sign the kernel's
/// argument sign conventions.
struct FoxHSpec {
    int arity = 2;
    std::array<std::vector<GammaFactor>, 2> num_var;
    std::array<std::vector<GammaFactor>, 2> den_var;
    std::vector<GammaFactor> num_joint;
    std::vector<GammaFactor> den_joint;
    std::array<int, 2> arg_sign{1, 1};
};

/// Optional weighted family folded into one axis: the factor
/// Gamma(offset0 + j + coeff*s_var) summed over j with weights[j].
/// var == -1 means no series factor.
struct AxisSeries {
    int var = -1;
    double offset0 = 1.0;
    double coeff = 1.0;
    std::vector<double> weights;
};

/// Contour policy.  NaN abscissa means auto-placement at the midpoint of the
/// gap between the left and right pole families; auto placement fails fast
/// when the gap is narrower than 2*pole_margin.
struct ContourPolicy {
    std::array<double, 2> abscissa{std::numeric_limits<double>::quiet_NaN(),
                                   std::numeric_limits<double>::quiet_NaN()};
    double pole_margin = 0.05;
    double rel_tol = 1e-6;
    long max_evals = 1L << 20;
    int initial_nodes = 129;
    double residue_threshold = 1e-3;
};

struct FoxHResult {
    double value = 0.0;
    double err = 0.0;   // estimated truncation error (last refinement delta)
    long evals = 0;     // kernel evaluations consumed
};

/// Straight-line pole separation between the left and right families is
/// impossible (or an explicit abscissa sits too close to a pole).
struct PoleSeparationError : std::runtime_error {
    explicit PoleSeparationError(const std::string& m) : std::runtime_error(m) {}
};

/// Kernel does not decay on the contour (argument outside the convergence
/// sector, e.g. a negative argument on the sector boundary).
struct DivergentKernelError : std::runtime_error {
    explicit DivergentKernelError(const std::string& m)
        : std::runtime_error(m) {}
};

/// One-shot bivariate evaluation.
FoxHResult fox_h_bivariate(const FoxHSpec& spec, double x1, double x2,
                           const ContourPolicy& policy = {});

/// One-shot bivariate evaluation of sum_j weights[j] * H_j, where H_j carries
/// the extra axis factor described by `series`.
FoxHResult fox_h_bivariate_series(const FoxHSpec& spec, const AxisSeries& series,
                                  double x1, double x2,
                                  const ContourPolicy& policy = {});

/// One-shot univariate evaluation (spec.arity == 1; only variable 0 used).
FoxHResult fox_h_univariate(const FoxHSpec& spec, double x,
                            const ContourPolicy& policy = {});

/// Precomputed contour table for repeated evaluations of the same kernel at
/// varying arguments.  The contour is sized for the argument ranges given at
/// build time and then frozen, so eval() is a plain rank-one contraction.
class FoxHTable {
  public:
    FoxHTable(const FoxHSpec& spec, const AxisSeries& series,
              std::array<double, 2> x1_range, std::array<double, 2> x2_range,
              const ContourPolicy& policy = {});

    double eval(double x1, double x2) const;
    long build_evals() const { return build_evals_; }

  private:
    std::vector<cplx> s1_, s2_;   // contour points
    std::vector<cplx> table_;     // row-major [i*n2+l], includes h1 h2/(4 pi^2)
    std::array<int, 2> sign_;
    long build_evals_ = 0;
};

}  // namespace covertlink::foxh

#endif
