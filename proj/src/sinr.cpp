#include "covertlink/sinr.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "covertlink/foxh.hpp"
#include "covertlink/numerics.hpp"

namespace covertlink::sinr {
namespace {

using fading::FtrParams;

// The contour engine folds the mixture series through unscaled rising
// factorials of the order; beyond this length they overflow long before the
// weights stop mattering.  Channels needing more terms take the conditional
// route, which has no series length limit.
constexpr int kSeriesLengthCap = 140;

constexpr double kCrossoverRel = 1e-9;  // |pivot - omega| detection band
constexpr double kPerturbRel = 1e-6;    // relative nudge applied inside it

double ln_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

std::vector<double> mixture_weights(const UserChannel& ch) {
    return fading::ftr_weights(ch.ftr, fading::ftr_coefficients(ch.ftr, ch.truncation));
}

struct Route {
    double omega;  // possibly nudged off the crossover
    bool mellin;   // contour-series route applies
};

// omega == m_f*kappa2 collapses the second contour argument.  The crossover
// is measure-zero in parameters, so nudge omega just below it.  The contour
// argument omega/(pivot - omega) blows up on approach, and its oscillation
// cancels catastrophically on the line well before the crossover itself, so
// the series route stops at 0.9*pivot; from there the conditional integral
// takes over (it is smooth through and beyond the crossover).
Route pick_route(const UserChannel& ch) {
    const double pivot = ch.fisher.m_f * ch.link.kappa2;
    double omega = ch.link.omega();
    if (std::abs(pivot - omega) < kCrossoverRel * pivot) omega = pivot * (1.0 - kPerturbRel);
    return {omega, omega <= 0.9 * pivot && ch.truncation + 1 <= kSeriesLengthCap};
}

// Series-of-contour-integrals form shared by the distribution and the
// density; the distribution divides the kernel by s1 (one more integration)
// and the density carries the 1/gamma Jacobian instead.  Empty when the
// engine's own error estimate says its refinement fell short; callers then
// integrate the conditional law instead of trusting a degraded value.
std::optional<double> mellin_value(const UserChannel& ch, double gamma, double omega,
                                   bool cdf) {
    const double mf = ch.fisher.m_f;
    const double ms = ch.fisher.m_s;
    const double pivot = mf * ch.link.kappa2;

    foxh::FoxHSpec spec;
    spec.num_var[0].push_back({ms, {-1.0, 0.0}});
    if (cdf) {
        spec.num_var[0].push_back({0.0, {1.0, 0.0}});
        spec.den_var[0].push_back({1.0, {1.0, 0.0}});
    }
    spec.num_var[1].push_back({mf, {0.0, -1.0}});
    spec.num_var[1].push_back({mf + ms, {0.0, -1.0}});
    spec.num_var[1].push_back({0.0, {0.0, 1.0}});
    spec.den_joint.push_back({mf + ms, {-1.0, -1.0}});

    foxh::AxisSeries series;
    series.var = 0;
    series.offset0 = 1.0;
    series.coeff = -1.0;
    series.weights = detail::series_weights(ch.ftr, ch.truncation);

    foxh::ContourPolicy pol;
    pol.rel_tol = 1e-7;
    pol.max_evals = 1L << 22;

    const double x1 = gamma * ch.link.kappa2 / (2.0 * ch.ftr.sigma2 * ch.link.c1);
    const double x2 = omega / (pivot - omega);
    const foxh::FoxHResult res = foxh::fox_h_bivariate_series(spec, series, x1, x2, pol);
    if (res.err > 1e-6 * std::max(std::abs(res.value), 1e-300)) return std::nullopt;
    const double lnpref = mf * std::log(pivot / omega) - std::lgamma(mf) - std::lgamma(ms);
    double value = std::exp(lnpref) * res.value;
    if (!cdf) value /= gamma;
    return value;
}

// Conditioned on the interference draw z, gamma <= g exactly when the direct
// gain falls below g*(kappa2 + c2 z)/c1.
double conditional_cdf(const UserChannel& ch, double gamma) {
    const auto w = mixture_weights(ch);
    const LinkCoefficients& L = ch.link;
    return num::adaptive_quad_0inf(
        [&](double z) {
            const double bound = gamma * (L.kappa2 + L.c2 * z) / L.c1;
            return fading::f_pdf(ch.fisher, z) *
                   fading::ftr_cdf_from_weights(ch.ftr.sigma2, w, bound);
        },
        1e-10);
}

double conditional_pdf(const UserChannel& ch, double gamma) {
    const auto w = mixture_weights(ch);
    const LinkCoefficients& L = ch.link;
    return num::adaptive_quad_0inf(
        [&](double z) {
            const double jac = (L.kappa2 + L.c2 * z) / L.c1;
            return fading::f_pdf(ch.fisher, z) * jac *
                   fading::ftr_pdf_from_weights(ch.ftr.sigma2, w, gamma * jac);
        },
        1e-10);
}

// 2F1(a, -n; c, x) summed exactly; n+1 terms.
double terminating_2f1(double a, int n, double c, double x) {
    num::Kahan acc;
    double term = 1.0;
    acc.add(term);
    for (int i = 1; i <= n; ++i) {
        term *= (a + i - 1.0) * (double(i - 1) - n) / ((c + i - 1.0) * i) * x;
        acc.add(term);
    }
    return acc.sum;
}

int validated_truncation(const FtrParams& p, double c1, double c2, double kappa2, double tol) {
    if (!(c1 > 0.0)) throw std::invalid_argument("UserChannel: c1 must be positive");
    if (!(c2 >= 0.0)) throw std::invalid_argument("UserChannel: c2 must be nonnegative");
    if (!(kappa2 > 0.0)) throw std::invalid_argument("UserChannel: kappa2 must be positive");
    return detail::mass_truncation(p, tol);
}

}  // namespace

UserChannel::UserChannel(const fading::FtrParams& ftr_in, const fading::FisherFParams& fisher_in,
                         double c1, double c2, double kappa2, double mass_tol)
    : ftr(ftr_in),
      fisher(fisher_in),
      link{c1, c2, kappa2, fisher_in.m_s, fisher_in.z_bar},
      truncation(validated_truncation(ftr_in, c1, c2, kappa2, mass_tol)) {}

double sinr_pdf(const UserChannel& ch, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("sinr_pdf: gamma must be positive");
    if (ch.link.c2 == 0.0) {
        const double scale = ch.link.kappa2 / ch.link.c1;
        return scale * fading::ftr_pdf(ch.ftr, gamma * scale, ch.truncation);
    }
    const Route r = pick_route(ch);
    std::optional<double> m;
    if (r.mellin) m = mellin_value(ch, gamma, r.omega, false);
    const double value = m ? *m : conditional_pdf(ch, gamma);
    // contour noise may graze zero where the density vanishes
    return std::max(value, 0.0);
}

double sinr_cdf(const UserChannel& ch, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("sinr_cdf: gamma must be nonnegative");
    if (gamma == 0.0) return 0.0;
    if (ch.link.c2 == 0.0)
        return fading::ftr_cdf(ch.ftr, gamma * ch.link.kappa2 / ch.link.c1, ch.truncation);
    const Route r = pick_route(ch);
    std::optional<double> m;
    if (r.mellin) m = mellin_value(ch, gamma, r.omega, true);
    const double raw = m ? *m : conditional_cdf(ch, gamma);
    if (raw < -1e-6 || raw > 1.0 + 1e-6)
        throw std::runtime_error("sinr_cdf: raw value escapes [0,1] beyond tolerance");
    return std::clamp(raw, 0.0, 1.0);
}

double sinr_cdf_low_jamming(const UserChannel& ch, double gamma, RegimeEstimate* regime) {
    if (!(gamma >= 0.0))
        throw std::invalid_argument("sinr_cdf_low_jamming: gamma must be nonnegative");
    const double mf = ch.fisher.m_f;
    const double pivot = mf * ch.link.kappa2;
    const double omega = ch.link.omega();
    const double y = gamma * ch.link.kappa2 / (2.0 * ch.ftr.sigma2 * ch.link.c1);
    if (regime) *regime = {omega / pivot, y};
    if (!(omega < pivot))
        throw std::domain_error("sinr_cdf_low_jamming: needs omega < m_f * kappa2");
    if (gamma == 0.0) return 0.0;
    const auto w = mixture_weights(ch);
    num::Kahan acc;
    // Each term is a regularized lower incomplete gamma, the closed form of
    // the confluent series y^{j+1} M(j+1; j+2; -y) / (j+1)!.
    for (int j = 0; j < int(w.size()); ++j)
        if (w[j] != 0.0) acc.add(w[j] * num::gamma_p(j + 1.0, y));
    return std::pow(1.0 - omega / pivot, -mf) * acc.sum;
}

double sinr_cdf_high_power(const UserChannel& ch, double gamma, RegimeEstimate* regime) {
    if (!(gamma >= 0.0))
        throw std::invalid_argument("sinr_cdf_high_power: gamma must be nonnegative");
    const double mf = ch.fisher.m_f;
    const double ms = ch.fisher.m_s;
    const double pivot = mf * ch.link.kappa2;
    const double omega = ch.link.omega();
    const double y = gamma * ch.link.kappa2 / (2.0 * ch.ftr.sigma2 * ch.link.c1);
    if (regime) *regime = {omega / pivot, y};
    if (gamma == 0.0) return 0.0;

    const bool integral_ms = std::abs(ms - std::round(ms)) < 1e-9;
    const int js = integral_ms ? int(std::lround(ms)) - 1 : int(std::floor(ms)) - 1;
    const auto w = mixture_weights(ch);
    const int top = int(w.size()) - 1;

    // Orders at and above the shadowing severity collapse onto a single
    // y^{m_s} leading power.
    double above = 0.0;
    if (omega > 0.0 && js + 1 <= top) {
        num::Kahan acc;
        for (int j = js + 1; j <= top; ++j)
            if (w[j] > 0.0)
                acc.add(w[j] * std::exp(std::lgamma(1.0 + j - ms) - std::lgamma(j + 1.0)));
        const double lnlead =
            ms * std::log(omega * gamma / (2.0 * ch.ftr.sigma2 * ch.link.c1 * mf));
        above = std::exp(lnlead - std::log(ms) - ln_beta(ms, mf)) * acc.sum;
    }

    // Lower orders contribute one power of y each.  The Gauss factor is
    // taken through the (1-z)^{-a} map, which terminates its series and
    // keeps the weak-interference limit finite.
    num::Kahan below;
    const double warg = 1.0 - omega / pivot;
    for (int j = 0; j <= std::min(js, top); ++j) {
        if (w[j] == 0.0) continue;
        const double c = mf + ms - j - 1.0;
        const double g =
            (integral_ms && j == js) ? 1.0 : std::exp(std::lgamma(ms - 1.0 - j));
        const double poly = terminating_2f1(mf, j + 1, c, warg);
        const double lnt = std::log(w[j]) + std::lgamma(j + 1.0) + (j + 1.0) * std::log(y) -
                           ln_beta(c, j + 1.0) - std::lgamma(j + 2.0) - std::lgamma(ms);
        below.add(g * poly * std::exp(lnt));
    }
    return above + below.sum;
}

double sinr_cdf_high_power_low_jamming(const UserChannel& ch, double gamma,
                                       RegimeEstimate* regime) {
    if (!(gamma >= 0.0))
        throw std::invalid_argument(
            "sinr_cdf_high_power_low_jamming: gamma must be nonnegative");
    const double mf = ch.fisher.m_f;
    const double pivot = mf * ch.link.kappa2;
    const double omega = ch.link.omega();
    const double y = gamma * ch.link.kappa2 / (2.0 * ch.ftr.sigma2 * ch.link.c1);
    if (regime) *regime = {omega / pivot, y};
    if (!(omega < pivot))
        throw std::domain_error("sinr_cdf_high_power_low_jamming: needs omega < m_f * kappa2");
    if (gamma == 0.0) return 0.0;
    const auto w = mixture_weights(ch);
    const double lny = std::log(y);
    num::Kahan acc;
    for (int j = 0; j < int(w.size()); ++j)
        if (w[j] != 0.0) acc.add(w[j] * std::exp((j + 1.0) * lny - std::lgamma(j + 2.0)));
    return std::pow(1.0 - omega / pivot, -mf) * acc.sum;
}

double outage_probability(const UserChannel& ch, double gamma_th) {
    return sinr_cdf(ch, gamma_th);
}

namespace detail {

std::vector<double> series_weights(const fading::FtrParams& p, int truncation) {
    const auto w = fading::ftr_weights(p, fading::ftr_coefficients(p, truncation));
    std::vector<double> out(w.size());
    for (std::size_t j = 0; j < w.size(); ++j)
        out[j] = (w[j] > 0.0) ? std::exp(std::log(w[j]) - std::lgamma(double(j) + 1.0)) : 0.0;
    return out;
}

int mass_truncation(const fading::FtrParams& p, double tol) {
    if (!(tol > 0.0) || !(tol < 1.0))
        throw std::invalid_argument("mass_truncation: tol must be in (0,1)");
    for (int cap = 8; cap <= 1024; cap *= 2) {
        const auto w = fading::ftr_weights(p, fading::ftr_coefficients(p, cap));
        num::Kahan acc;
        for (int j = 0; j < int(w.size()); ++j) {
            acc.add(w[j]);
            if (1.0 - acc.sum < tol) return j;
        }
    }
    throw std::runtime_error("mass_truncation: mixture mass does not reach 1 - tol");
}

}  // namespace detail

}  // namespace covertlink::sinr
