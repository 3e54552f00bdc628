#include "covertlink/covert.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "covertlink/foxh.hpp"
#include "covertlink/special.hpp"

namespace covertlink::covert {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Longest mixture the contour engine accepts before the summed kernel's own
// rounding noise exceeds the refinement tolerance.
constexpr int kSeriesLengthCap = 140;

std::vector<double> mixture_masses(const fading::FtrParams& p, int truncation) {
    return fading::ftr_weights(p, fading::ftr_coefficients(p, truncation));
}

// Geometric breakpoints {0, anchor, 4*anchor, ...} clipped to (0, hi).
std::vector<double> geometric_breaks(double anchor, double hi) {
    std::vector<double> br{0.0};
    double t = std::min(anchor, hi);
    int guard = 0;
    while (t < hi && ++guard < 48) {
        br.push_back(t);
        t *= 4.0;
    }
    br.push_back(hi);
    return br;
}

// sum_n (1-b)_n x^n / ((a+n) n!), the regularized lower-beta kernel
// B_x(a,b) / x^a.  Entire in a off the pole grid a = -n; converges for
// |x| < 1 and, when Re(b) > 0, at x = 1.
cplx beta_ratio_series(cplx a, cplx b, double x) {
    cplx acc = 0.0;
    cplx p = 1.0;
    int small_streak = 0;
    for (int n = 0; n < 20000; ++n) {
        if (n > 0) p *= (1.0 - b + double(n - 1)) * x / double(n);
        const cplx term = p / (a + double(n));
        acc += term;
        if (std::abs(term) < 1e-17 * (std::abs(acc) + 1e-280)) {
            if (++small_streak >= 2) break;
        } else {
            small_streak = 0;
        }
    }
    return acc;
}

}  // namespace

WardenChannel::WardenChannel(const fading::FtrParams& ftr_in,
                             const fading::FisherFParams& fisher_in, double c1,
                             double c2, double kappa2, double mass_tol)
    : ftr(ftr_in),
      fisher(fisher_in),
      link{c1, c2, kappa2, fisher_in.m_s, fisher_in.z_bar},
      truncation(0) {
    if (!(c1 >= 0.0)) throw std::invalid_argument("WardenChannel: c1 must be nonnegative");
    if (!(c2 >= 0.0)) throw std::invalid_argument("WardenChannel: c2 must be nonnegative");
    if (!(kappa2 > 0.0)) throw std::invalid_argument("WardenChannel: kappa2 must be positive");
    truncation = sinr::detail::mass_truncation(ftr_in, mass_tol);
}

double false_alarm_prob(const WardenChannel& w, double epsilon) {
    const double u = epsilon - w.link.kappa2;
    if (u <= 0.0) return 1.0;
    if (w.link.c2 == 0.0) return 0.0;
    return 1.0 - fading::f_cdf(w.fisher, u / w.link.c2);
}

namespace detail {

std::optional<double> missed_detection_mellin(const WardenChannel& w, double epsilon) {
    const double u = epsilon - w.link.kappa2;
    if (u <= 0.0) return 0.0;
    if (w.link.c1 == 0.0 || w.link.c2 == 0.0) return std::nullopt;
    if (w.truncation + 1 > kSeriesLengthCap) return std::nullopt;

    const double mfw = w.fisher.m_f;
    const double msw = w.fisher.m_s;

    foxh::FoxHSpec spec;
    spec.num_var[0] = {{mfw, {1.0, 0.0}}, {msw, {-1.0, 0.0}}, {0.0, {-1.0, 0.0}}};
    spec.num_var[1] = {{0.0, {0.0, -1.0}}};
    spec.den_joint = {{1.0, {-1.0, -1.0}}};

    foxh::AxisSeries ser;
    ser.var = 1;
    ser.offset0 = 1.0;
    ser.coeff = 1.0;
    ser.weights = sinr::detail::series_weights(w.ftr, w.truncation);

    foxh::ContourPolicy pol;
    pol.rel_tol = 1e-7;
    pol.max_evals = 1L << 22;

    const double x1 = w.link.omega() / (mfw * u);
    const double x2 = 2.0 * w.link.c1 * w.ftr.sigma2 / u;
    const auto res = foxh::fox_h_bivariate_series(spec, ser, x1, x2, pol);
    if (res.err > 1e-6 * std::max(std::abs(res.value), 1e-300)) return std::nullopt;

    const double v = std::exp(-std::lgamma(mfw) - std::lgamma(msw)) * res.value;
    if (v < -1e-6 || v > 1.0 + 1e-6) return std::nullopt;
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace detail

double missed_detection_prob(const WardenChannel& w, double epsilon) {
    const double u = epsilon - w.link.kappa2;
    if (u <= 0.0) return 0.0;
    if (w.link.c1 == 0.0)
        return w.link.c2 == 0.0 ? 1.0 : fading::f_cdf(w.fisher, u / w.link.c2);
    if (w.link.c2 == 0.0) return fading::ftr_cdf(w.ftr, u / w.link.c1, w.truncation);
    if (const auto m = detail::missed_detection_mellin(w, epsilon)) return *m;
    return detail::DepEvaluator(w).missed_detection(epsilon);
}

double detection_error_probability(const WardenChannel& w, double epsilon) {
    if (epsilon <= w.link.kappa2) return 1.0;
    return false_alarm_prob(w, epsilon) + missed_detection_prob(w, epsilon);
}

namespace detail {

DepEvaluator::DepEvaluator(const WardenChannel& w)
    : fisher_(w.fisher),
      c1_(w.link.c1),
      c2_(w.link.c2),
      kappa2_(w.link.kappa2),
      sigma2_(w.ftr.sigma2),
      ftr_mean_(w.ftr.mean()),
      m_f_(w.fisher.m_f),
      gl_(num::gauss_legendre(20)),
      jac_(num::gauss_jacobi(20, 0.0, w.fisher.m_f - 1.0)) {
    const auto masses = mixture_masses(w.ftr, w.truncation);
    suffix_.assign(masses.size(), 0.0);
    double run = 0.0;
    for (int i = int(masses.size()) - 1; i >= 0; --i) {
        run += masses[size_t(i)];
        suffix_[size_t(i)] = run;
    }
    mass_ = run;
}

DepEvaluator DepEvaluator::rebind(double c1w, double c2w) const {
    if (!(c1w >= 0.0) || !(c2w >= 0.0))
        throw std::invalid_argument("DepEvaluator: rebind coefficients must be nonnegative");
    DepEvaluator out = *this;
    out.c1_ = c1w;
    out.c2_ = c2w;
    return out;
}

// Mixture CDF through suffix sums: sum_j w_j P(j+1, y) with y = x/(2 sigma2)
// collapses to mass - e^{-y} sum_i S_i y^i / i!, one pass over the masses.
double DepEvaluator::ftr_cdf_fast(double x) const {
    if (x <= 0.0) return 0.0;
    const double y = x / (2.0 * sigma2_);
    const int top = int(suffix_.size()) - 1;
    // Past the polynomial window the deficit is below e^-45; returning the
    // retained mass also keeps y^i/i! out of overflow territory.
    if (y > double(top) &&
        double(top) * std::log(y) - y - std::lgamma(double(top) + 1.0) < -45.0)
        return mass_;
    num::Kahan acc;
    double t = 1.0;
    acc.add(suffix_[0]);
    for (int i = 1; i <= top; ++i) {
        t *= y / double(i);
        acc.add(suffix_[size_t(i)] * t);
    }
    const double v = mass_ - std::exp(-y) * acc.sum;
    return std::clamp(v, 0.0, 1.0);
}

double DepEvaluator::false_alarm(double epsilon) const {
    const double u = epsilon - kappa2_;
    if (u <= 0.0) return 1.0;
    if (c2_ == 0.0) return 0.0;
    return 1.0 - fading::f_cdf(fisher_, u / c2_);
}

double DepEvaluator::missed_detection(double epsilon) const {
    const double u = epsilon - kappa2_;
    if (u <= 0.0) return 0.0;
    if (c1_ == 0.0) return c2_ == 0.0 ? 1.0 : fading::f_cdf(fisher_, u / c2_);
    if (c2_ == 0.0) return ftr_cdf_fast(u / c1_);

    const double zmax = u / c2_;
    const auto br = geometric_breaks(fisher_.z_bar, zmax);
    const auto f = [&](double z) {
        return fading::f_pdf(fisher_, z) * ftr_cdf_fast((u - c2_ * z) / c1_);
    };
    num::Kahan acc;
    {
        // Left piece carries the z^(m_f - 1) vanishing of the interference law.
        const double b1 = br[1];
        const double beta = m_f_ - 1.0;
        const double scale = std::pow(0.5 * b1, beta + 1.0);
        for (size_t i = 0; i < jac_.x.size(); ++i) {
            const double z = 0.5 * b1 * (1.0 + jac_.x[i]);
            acc.add(scale * jac_.w[i] * f(z) * std::pow(z, -beta));
        }
    }
    for (size_t k = 1; k + 1 < br.size(); ++k) {
        const double mid = 0.5 * (br[k] + br[k + 1]);
        const double half = 0.5 * (br[k + 1] - br[k]);
        for (size_t i = 0; i < gl_.x.size(); ++i)
            acc.add(half * gl_.w[i] * f(mid + half * gl_.x[i]));
    }
    return std::clamp(acc.sum, 0.0, 1.0);
}

double DepEvaluator::dep(double epsilon) const {
    if (epsilon <= kappa2_) return 1.0;
    return false_alarm(epsilon) + missed_detection(epsilon);
}

double DepEvaluator::search_hi() const {
    return 2.0 * kappa2_ + 10.0 * (c1_ * ftr_mean_ + c2_ * fisher_.z_bar);
}

double DepEvaluator::min_dep(double* epsilon_opt) const {
    double lo = kappa2_;
    double hi = search_hi();
    lo += 1e-9 * (hi - lo);
    const double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = dep(x1);
    double f2 = dep(x2);
    // Fixed iteration count keeps the minimum a smooth function of the
    // coefficients, which the curvature probe differentiates.
    for (int it = 0; it < 60; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = dep(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = dep(x2);
        }
    }
    if (epsilon_opt != nullptr) *epsilon_opt = f1 <= f2 ? x1 : x2;
    return std::min(f1, f2);
}

std::optional<double> covert_rate_mellin(const sinr::UserChannel& ch) {
    const double mf = ch.fisher.m_f;
    const double ms = ch.fisher.m_s;
    const double pivot = mf * ch.link.kappa2;
    const double omega = ch.link.omega();
    if (ch.link.c2 == 0.0 || omega > 0.9 * pivot) return std::nullopt;
    if (ch.truncation + 1 > kSeriesLengthCap) return std::nullopt;

    foxh::FoxHSpec spec;
    spec.num_var[0] = {{ms, {-1.0, 0.0}}, {0.0, {1.0, 0.0}}, {0.0, {-1.0, 0.0}}};
    spec.num_var[1] = {{mf, {0.0, -1.0}}, {mf + ms, {0.0, -1.0}}, {0.0, {0.0, 1.0}}};
    spec.den_joint = {{mf + ms, {-1.0, -1.0}}};

    foxh::AxisSeries ser;
    ser.var = 0;
    ser.offset0 = 1.0;
    ser.coeff = -1.0;
    ser.weights = sinr::detail::series_weights(ch.ftr, ch.truncation);

    foxh::ContourPolicy pol;
    pol.rel_tol = 1e-7;
    pol.max_evals = 1L << 22;
    // Gamma(s1) against Gamma(-s1) leaves no gap for auto placement; -1/2 is
    // the midpoint of the pole-free strip (-1, 0).
    pol.abscissa = {-0.5, std::numeric_limits<double>::quiet_NaN()};

    const double x1 = ch.link.kappa2 / (2.0 * ch.ftr.sigma2 * ch.link.c1);
    const double x2 = omega / (pivot - omega);
    const auto res = foxh::fox_h_bivariate_series(spec, ser, x1, x2, pol);
    if (res.err > 1e-6 * std::max(std::abs(res.value), 1e-300)) return std::nullopt;

    const double lnpref =
        mf * std::log(pivot / omega) - std::lgamma(mf) - std::lgamma(ms);
    return -std::exp(lnpref) * res.value / std::log(2.0);
}

RateEvaluator::RateEvaluator(const sinr::UserChannel& ch, bool tight)
    : fisher_(ch.fisher),
      kappa2_(ch.link.kappa2),
      sigma2_(ch.ftr.sigma2),
      ftr_mean_(ch.ftr.mean()),
      weights_(mixture_masses(ch.ftr, ch.truncation)),
      tail_tol_(tight ? 1e-9 : 3e-5),
      glg_(num::gauss_legendre(tight ? 32 : 16)),
      jacg_(num::gauss_jacobi(tight ? 32 : 16, 0.0, ch.fisher.m_s - 1.0)),
      glz_(num::gauss_legendre(tight ? 24 : 12)),
      jacz0_(num::gauss_jacobi(tight ? 24 : 12, 0.0, ch.fisher.m_f - 1.0)),
      jaczt_(num::gauss_jacobi(tight ? 24 : 12, 0.0, ch.fisher.m_s - 2.0)) {}

// Density of gamma = c1 X / (kappa2 + c2 Z) at one point: the X-mixture
// density swept over the interference law.
double RateEvaluator::cond_pdf(double c1, double c2, double gamma) const {
    if (c2 == 0.0) {
        const double jac = kappa2_ / c1;
        return jac * fading::ftr_pdf_from_weights(sigma2_, weights_, gamma * jac);
    }
    const double zb = fisher_.z_bar;
    const auto h = [&](double z) {
        const double jac = (kappa2_ + c2 * z) / c1;
        return fading::f_pdf(fisher_, z) * jac *
               fading::ftr_pdf_from_weights(sigma2_, weights_, gamma * jac);
    };
    num::Kahan acc;
    {
        const double beta = fisher_.m_f - 1.0;
        const double scale = std::pow(0.5 * zb, beta + 1.0);
        for (size_t i = 0; i < jacz0_.x.size(); ++i) {
            const double z = 0.5 * zb * (1.0 + jacz0_.x[i]);
            acc.add(scale * jacz0_.w[i] * h(z) * std::pow(z, -beta));
        }
    }
    for (const auto& [a, b] : {std::pair{zb, 4.0 * zb}, std::pair{4.0 * zb, 16.0 * zb}}) {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (size_t i = 0; i < glz_.x.size(); ++i)
            acc.add(half * glz_.w[i] * h(mid + half * glz_.x[i]));
    }
    {
        // Algebraic far tail: z = zt/v turns the z^-(m_s+1) envelope times the
        // linear interference growth into a v^(m_s-2)-weighted smooth factor.
        const double zt = 16.0 * zb;
        const double beta = fisher_.m_s - 2.0;
        const double scale = std::pow(0.5, beta + 1.0);
        for (size_t i = 0; i < jaczt_.x.size(); ++i) {
            const double v = 0.5 * (1.0 + jaczt_.x[i]);
            acc.add(scale * jaczt_.w[i] * zt * std::pow(v, -fisher_.m_s) * h(zt / v));
        }
    }
    return std::max(acc.sum, 0.0);
}

double RateEvaluator::eval(double c1, double c2) const {
    if (!(c1 > 0.0)) return 0.0;
    const double ms = fisher_.m_s;
    const double s = c1 * ftr_mean_ / (kappa2_ + c2 * fisher_.z_bar);
    // Far cutoff: past R*s the remaining rate mass, ~ R^-m_s log R, is below
    // the rule's own accuracy.
    double R = 64.0;
    while (std::pow(R, -ms) * std::log(R + 3.0) > tail_tol_ && R < 1e12) R *= 4.0;

    std::vector<double> br{0.0, 0.25 * s, s};
    for (double t = 4.0 * s; t < R * s; t *= 4.0) br.push_back(t);
    br.push_back(R * s);

    num::Kahan acc;
    for (size_t k = 0; k + 1 < br.size(); ++k) {
        const double mid = 0.5 * (br[k] + br[k + 1]);
        const double half = 0.5 * (br[k + 1] - br[k]);
        for (size_t i = 0; i < glg_.x.size(); ++i) {
            const double g = mid + half * glg_.x[i];
            acc.add(half * glg_.w[i] * std::log1p(g) * cond_pdf(c1, c2, g));
        }
    }
    {
        const double gt = R * s;
        const double beta = ms - 1.0;
        const double scale = std::pow(0.5, beta + 1.0);
        for (size_t i = 0; i < jacg_.x.size(); ++i) {
            const double v = 0.5 * (1.0 + jacg_.x[i]);
            const double g = gt / v;
            acc.add(scale * jacg_.w[i] * (g / v) * std::log1p(g) * cond_pdf(c1, c2, g));
        }
    }
    return std::max(acc.sum, 0.0) / std::log(2.0);
}

double covert_rate_quadrature(const sinr::UserChannel& ch, bool tight) {
    return RateEvaluator(ch, tight).eval(ch.link.c1, ch.link.c2);
}

}  // namespace detail

double covert_rate(const sinr::UserChannel& ch) {
    const double q = detail::covert_rate_quadrature(ch, true);
    double value = q;
    if (const auto h = detail::covert_rate_mellin(ch); h && std::isfinite(*h)) {
        if (std::abs(*h - q) <= 0.01 * std::max(std::abs(q), 1e-12)) {
            value = *h;
        } else {
            std::fprintf(stderr,
                         "covert_rate: contour value %.9g disagrees with quadrature "
                         "%.9g beyond 1%%; keeping quadrature\n",
                         *h, q);
        }
    }
    if (!std::isfinite(value) || value < 0.0)
        throw std::runtime_error("covert_rate: value must be finite and nonnegative");
    return value;
}

namespace {

// ---- weighted-exponential integral family -------------------------------
//
// All four ranges reduce to Mellin-Barnes lines or confluent closed forms.
// Branch convention throughout: (b - t)^c for t > b is exp(i pi c)(t - b)^c,
// and only the real part is returned.

// Truncated Watson expansion of the large-(b*d) limit: the leading term is
// Gamma(1+a) b^c d^-(1+a); successive terms divide by (b*d).  Truncation at
// the first non-decreasing term keeps the asymptotic honest.
double lemma_watson_large(double A, double B, double C, double D) {
    const double z = B * D;
    double sum = 1.0;
    double term = 1.0;
    for (int n = 1; n <= 60; ++n) {
        const double next = term * (double(n) - 1.0 - C) * (A + double(n)) / (double(n) * z);
        if (std::abs(next) >= std::abs(term) && n > 1) break;
        term = next;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return std::exp(std::lgamma(1.0 + A) + C * std::log(B) - (1.0 + A) * std::log(D)) * sum;
}

bool near_nonpositive_integer(double x, double tol) {
    return x <= 0.5 && std::abs(x - std::round(x)) < tol;
}

double lemma_l4(double A, double B, double C, double D) {
    // Exact on (0, b); for b*d beyond the confluent kernel's overflow range
    // the (b, inf) remainder is below e^-300 and the full-axis expansion is
    // the same value to all digits.
    if (B * D > 300.0) return lemma_watson_large(A, B, C, D);
    return std::exp((1.0 + A + C) * std::log(B) + std::lgamma(1.0 + A) +
                    std::lgamma(1.0 + C) - std::lgamma(2.0 + A + C)) *
           special::kummer_1f1(1.0 + A, 2.0 + A + C, -B * D);
}

double lemma_l3(double A, double B, double C, double D) {
    const double bd = B * D;
    if (bd > 50.0) return lemma_watson_large(A, B, C, D);
    if (bd < 0.02) {
        // Two-limit form; each term is the real part of the continued
        // prefactor times one leading term of the confluent kernel.
        const double a1 = -1.0 - A - C;
        if (!near_nonpositive_integer(a1, 1e-6) && !near_nonpositive_integer(-C, 1e-6)) {
            int s1 = 1, s2 = 1;
            const double g1 = special::lgamma_signed(a1, &s1);
            const double g2 = special::lgamma_signed(-C, &s2);
            const double term1 = double(s1 * s2) * std::cos(kPi * (1.0 + A)) *
                                 std::exp(std::lgamma(1.0 + A) +
                                          (1.0 + A + C) * std::log(B) + g1 - g2);
            const double term2 = std::cos(kPi * C) *
                                 std::exp(std::lgamma(1.0 + A + C) -
                                          (1.0 + A + C) * std::log(D));
            return term1 + term2;
        }
        // Pole-struck exponent combination: fall through to the exact form.
    }
    return lemma_l4(A, B, C, D) +
           std::cos(kPi * C) *
               std::exp(-bd + (1.0 + A + C) * std::log(B) + std::lgamma(1.0 + C)) *
               special::tricomi_u(1.0 + C, 2.0 + A + C, bd);
}

// Inner factor of the (0, T) line: 2F1(-c, 1+a-s; 2+a-s; T/b) / (1+a-s).
cplx lemma_l1_inner(cplx a, double C, double x) {
    if (x > -0.6) return beta_ratio_series(a, cplx(1.0 + C), x);
    return special::hyp2f1_complex(cplx(-C), a, a + 1.0, x) / a;
}

double lemma_l1(double A, double B, double C, double D, double T) {
    const double sig = 0.5 * std::min(1.0, 1.0 + A);
    const double x = T / B;
    const cplx bc = B > 0.0 ? cplx(std::pow(B, C), 0.0)
                            : std::exp(cplx(C * std::log(-B), kPi * C));
    const double lnDT = std::log(D * T);
    const auto kernel = [&](double t) {
        const cplx s(sig, t);
        return std::exp(special::ln_gamma_complex(s) - s * lnDT) *
               lemma_l1_inner(1.0 + A - s, C, x);
    };
    const cplx line = num::adaptive_quad_complex(kernel, -24.0, 24.0, 1e-11);
    return (bc * std::pow(T, 1.0 + A) * line / (2.0 * kPi)).real();
}

double lemma_l2(double A, double B, double C, double D, double T) {
    // The kernel scales like (D T)^-s, so for large D*T the line must pass
    // near the saddle s ~ D*T or the e^-DT scale drowns in cancellation.
    const double sig = std::max(0.0, 1.0 + A + C) + 0.618 + std::max(0.0, D * T - 2.0);
    const double th = std::max(26.0, 9.0 * std::sqrt(sig));
    const cplx rot = std::exp(cplx(0.0, kPi * C));
    const double lnD = std::log(D);
    const double lnB = std::log(B);
    const double lnT = std::log(T);
    const auto kernel = [&](double t) -> cplx {
        const cplx s(sig, t);
        cplx K;
        if (T >= B) {
            // Below-b weight already exhausted: one lower-beta kernel in
            // w = b/t around the lower endpoint.
            K = rot * std::exp((1.0 + A + C - s) * lnT) *
                beta_ratio_series(s - A - C - 1.0, cplx(1.0 + C), B / T);
        } else {
            // (T, b) as a lower-beta kernel around t = b (stable for any s),
            // plus the fully continued (b, inf) remainder.
            const double y = 1.0 - T / B;
            const cplx mid = std::pow(y, 1.0 + C) *
                             beta_ratio_series(cplx(1.0 + C), A + 1.0 - s, y);
            const cplx upper = rot * std::exp(special::ln_gamma_complex(s - A - C - 1.0) +
                                              std::lgamma(1.0 + C) -
                                              special::ln_gamma_complex(s - A));
            K = std::exp((1.0 + A + C - s) * lnB) * (mid + upper);
        }
        return std::exp(special::ln_gamma_complex(s) - s * lnD) * K;
    };
    const cplx line = num::adaptive_quad_complex(kernel, -th, th, 1e-11);
    return (line / (2.0 * kPi)).real();
}

void require_case(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

}  // namespace

double lemma_integral(const LemmaIntegralCase& cs) {
    const double A = cs.a, B = cs.b, C = cs.c, D = cs.d;
    require_case(std::isfinite(A) && std::isfinite(B) && std::isfinite(C) && std::isfinite(D),
                 "lemma_integral: parameters must be finite");
    require_case(std::isfinite(cs.t1) && cs.t1 >= 0.0,
                 "lemma_integral: t1 must be finite and nonnegative");
    require_case(cs.t2 > cs.t1, "lemma_integral: t2 must exceed t1");

    if (cs.t1 == 0.0 && std::isinf(cs.t2)) {
        require_case(A > -1.0, "lemma_integral (0,inf): needs a > -1");
        require_case(C > -1.0, "lemma_integral (0,inf): needs c > -1");
        require_case(B > 0.0, "lemma_integral (0,inf): needs b > 0");
        require_case(D > 0.0, "lemma_integral (0,inf): needs d > 0");
        return lemma_l3(A, B, C, D);
    }
    if (cs.t1 == 0.0 && cs.t2 == B) {
        require_case(B > 0.0, "lemma_integral (0,b): needs b > 0");
        require_case(A > -1.0, "lemma_integral (0,b): needs a > -1");
        require_case(C > -1.0, "lemma_integral (0,b): needs c > -1");
        return lemma_l4(A, B, C, D);
    }
    if (cs.t1 == 0.0 && std::isfinite(cs.t2)) {
        const double T = cs.t2;
        require_case(A > -1.0, "lemma_integral (0,T): needs a > -1");
        require_case(D > 0.0, "lemma_integral (0,T): needs d > 0");
        require_case(B != 0.0, "lemma_integral (0,T): needs b != 0");
        require_case(B < 0.0 || T < B, "lemma_integral (0,T): needs T < b or b < 0");
        require_case(!near_nonpositive_integer(C, 1e-12),
                     "lemma_integral (0,T): c must not be a nonpositive integer");
        return lemma_l1(A, B, C, D, T);
    }
    if (cs.t1 > 0.0 && std::isinf(cs.t2)) {
        const double T = cs.t1;
        require_case(B > 0.0, "lemma_integral (T,inf): needs b > 0");
        require_case(D > 0.0, "lemma_integral (T,inf): needs d > 0");
        if (T <= B)
            require_case(C > -1.0, "lemma_integral (T,inf): needs c > -1 when T <= b");
        return lemma_l2(A, B, C, D, T);
    }
    throw std::domain_error(
        "lemma_integral: range must be (0,T), (T,inf), (0,inf), or (0,b)");
}

ConvexityReport dep_threshold_convexity_probe(const WardenChannel& w,
                                              const std::vector<double>& epsilon_grid) {
    const size_t n = epsilon_grid.size();
    if (n < 3)
        throw std::invalid_argument("dep_threshold_convexity_probe: need at least 3 points");
    const double h = epsilon_grid[1] - epsilon_grid[0];
    if (!(h > 0.0))
        throw std::invalid_argument("dep_threshold_convexity_probe: grid must ascend");
    for (size_t i = 1; i + 1 < n; ++i) {
        if (std::abs(epsilon_grid[i + 1] - epsilon_grid[i] - h) > 1e-6 * h)
            throw std::invalid_argument(
                "dep_threshold_convexity_probe: grid must be uniformly spaced");
    }

    const detail::DepEvaluator ev(w);
    std::vector<double> xi(n);
    for (size_t i = 0; i < n; ++i) xi[i] = ev.dep(epsilon_grid[i]);

    ConvexityReport rep{};
    rep.min_second_difference = std::numeric_limits<double>::infinity();
    rep.xi_min = xi[0];
    rep.xi_argmin_epsilon = epsilon_grid[0];
    for (size_t i = 1; i + 1 < n; ++i) {
        const double d2 = xi[i - 1] - 2.0 * xi[i] + xi[i + 1];
        if (d2 < rep.min_second_difference) {
            rep.min_second_difference = d2;
            rep.argmin_epsilon = epsilon_grid[i];
        }
    }
    size_t kmin = 0;
    for (size_t i = 1; i < n; ++i) {
        if (xi[i] < rep.xi_min) {
            rep.xi_min = xi[i];
            rep.xi_argmin_epsilon = epsilon_grid[i];
            kmin = i;
        }
    }
    rep.single_valley = true;
    constexpr double kFlat = 1e-12;
    for (size_t i = 0; i + 1 < n; ++i) {
        const double df = xi[i + 1] - xi[i];
        if (i < kmin ? df > kFlat : df < -kFlat) rep.single_valley = false;
    }
    return rep;
}

std::vector<HessianProbePoint> dep_hessian_probe(const WardenChannel& w,
                                                 const std::vector<double>& c1w_grid,
                                                 const std::vector<double>& c2w_grid) {
    if (c1w_grid.empty() || c2w_grid.empty())
        throw std::invalid_argument("dep_hessian_probe: grids must be nonempty");
    for (const auto& grid : {c1w_grid, c2w_grid})
        for (double v : grid)
            if (!(v > 0.0))
                throw std::invalid_argument(
                    "dep_hessian_probe: grids must be strictly positive; the "
                    "zero-power corner has no curvature to report");

    const detail::DepEvaluator base(w);
    const auto value = [&](double c1, double c2) { return base.rebind(c1, c2).min_dep(); };

    std::vector<HessianProbePoint> out;
    out.reserve(c1w_grid.size() * c2w_grid.size());
    for (const double c1 : c1w_grid) {
        for (const double c2 : c2w_grid) {
            HessianProbePoint pt;
            pt.c1w = c1;
            pt.c2w = c2;
            pt.xi_opt = base.rebind(c1, c2).min_dep(&pt.epsilon_opt);
            const double h1 = 1e-3 * c1;
            const double h2 = 1e-3 * c2;
            const auto d11 = [&](double h) {
                return (value(c1 + h, c2) - 2.0 * pt.xi_opt + value(c1 - h, c2)) / (h * h);
            };
            const auto d22 = [&](double h) {
                return (value(c1, c2 + h) - 2.0 * pt.xi_opt + value(c1, c2 - h)) / (h * h);
            };
            const auto d12 = [&](double ha, double hb) {
                return (value(c1 + ha, c2 + hb) - value(c1 + ha, c2 - hb) -
                        value(c1 - ha, c2 + hb) + value(c1 - ha, c2 - hb)) /
                       (4.0 * ha * hb);
            };
            pt.d2_c1c1 = (4.0 * d11(0.5 * h1) - d11(h1)) / 3.0;
            pt.d2_c2c2 = (4.0 * d22(0.5 * h2) - d22(h2)) / 3.0;
            pt.d2_c1c2 = (4.0 * d12(0.5 * h1, 0.5 * h2) - d12(h1, h2)) / 3.0;
            pt.determinant = pt.d2_c1c1 * pt.d2_c2c2 - pt.d2_c1c2 * pt.d2_c1c2;
            out.push_back(pt);
        }
    }
    return out;
}

}  // namespace covertlink::covert
