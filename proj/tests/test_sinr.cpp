#include "covertlink/sinr.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "covertlink/fading.hpp"
#include "covertlink/numerics.hpp"
#include "doctest.h"

using covertlink::fading::f_pdf;
using covertlink::fading::FisherFParams;
using covertlink::fading::ftr_cdf;
using covertlink::fading::ftr_cdf_from_weights;
using covertlink::fading::ftr_coefficients;
using covertlink::fading::ftr_pdf;
using covertlink::fading::ftr_weights;
using covertlink::fading::FtrParams;
using covertlink::fading::sample_f;
using covertlink::fading::sample_ftr;
using covertlink::sinr::outage_probability;
using covertlink::sinr::RegimeEstimate;
using covertlink::sinr::sinr_cdf;
using covertlink::sinr::sinr_cdf_high_power;
using covertlink::sinr::sinr_cdf_high_power_low_jamming;
using covertlink::sinr::sinr_cdf_low_jamming;
using covertlink::sinr::sinr_pdf;
using covertlink::sinr::UserChannel;
namespace num = covertlink::num;

namespace {

double db(double x) { return std::pow(10.0, x / 10.0); }

// Reference operating point of the outage study: two specular components of
// equal strength on the direct link, moderate shadowing on both links,
// distances 5 m (UAV, exponent 2) and 10 m (jammer, exponent 3), 1 dB noise.
UserChannel reference_channel(double pa_dbw, double pj_dbw, double ms = 3.0) {
    const FtrParams ftr{2.0, 2.0, db(15.0) / (2.0 * (1.0 + 2.0)), 0.7};
    const FisherFParams fisher{3.0, ms, 1.0};
    const double c1 = db(pa_dbw) / 25.0;
    const double c2 = db(pj_dbw) / 1000.0;
    return UserChannel(ftr, fisher, c1, c2, db(1.0));
}

// Independent route: average the direct-gain distribution over the
// interference draw.  Head integrates to the interference mean, the tail is
// folded onto (0,1] by u = z_mean/z; the fold decays like u^(m_s-1).
double cdf_by_quadrature(const UserChannel& ch, double gamma) {
    const auto w = ftr_weights(ch.ftr, ftr_coefficients(ch.ftr, ch.truncation));
    auto part = [&](double z) {
        const double bound = gamma * (ch.link.kappa2 + ch.link.c2 * z) / ch.link.c1;
        return f_pdf(ch.fisher, z) * ftr_cdf_from_weights(ch.ftr.sigma2, w, bound);
    };
    const double zb = ch.fisher.z_bar;
    return num::adaptive_quad(part, 0.0, zb, 1e-11) +
           num::adaptive_quad([&](double u) { return part(zb / u) * zb / (u * u); }, 1e-9,
                              1.0, 1e-11);
}

double pdf_by_quadrature(const UserChannel& ch, double gamma) {
    const auto w = ftr_weights(ch.ftr, ftr_coefficients(ch.ftr, ch.truncation));
    auto part = [&](double z) {
        const double jac = (ch.link.kappa2 + ch.link.c2 * z) / ch.link.c1;
        return f_pdf(ch.fisher, z) * jac *
               covertlink::fading::ftr_pdf_from_weights(ch.ftr.sigma2, w, gamma * jac);
    };
    const double zb = ch.fisher.z_bar;
    return num::adaptive_quad(part, 0.0, zb, 1e-11) +
           num::adaptive_quad([&](double u) { return part(zb / u) * zb / (u * u); }, 1e-9,
                              1.0, 1e-11);
}

double mc_cdf(const UserChannel& ch, double gamma, int n, std::mt19937_64& rng) {
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_ftr(ch.ftr, rng);
        const double z = sample_f(ch.fisher, rng);
        hits += ch.link.c1 * x / (ch.link.kappa2 + ch.link.c2 * z) <= gamma;
    }
    return double(hits) / n;
}

double rel_err(double approx, double exact) {
    return std::abs(approx - exact) / std::max(std::abs(exact), 1e-300);
}

}  // namespace

TEST_CASE("channel construction and truncation") {
    const auto ch = reference_channel(10.0, 10.0);
    CHECK(ch.truncation > 0);

    const auto w = ftr_weights(ch.ftr, ftr_coefficients(ch.ftr, ch.truncation));
    num::Kahan mass;
    for (double v : w) mass.add(v);
    CHECK(mass.sum >= 1.0 - 1e-8);

    const auto sw = covertlink::sinr::detail::series_weights(ch.ftr, ch.truncation);
    REQUIRE(sw.size() == w.size());
    for (std::size_t j = 0; j < w.size(); ++j)
        CHECK(sw[j] == doctest::Approx(w[j] / std::tgamma(double(j) + 1.0)).epsilon(1e-12));

    CHECK(ch.link.omega() == doctest::Approx((3.0 - 1.0) * 1.0 * ch.link.c2));

    const FtrParams ftr{2.0, 2.0, 5.0, 0.7};
    const FisherFParams fisher{3.0, 3.0, 1.0};
    CHECK_THROWS_AS(UserChannel(ftr, fisher, 0.0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(UserChannel(ftr, fisher, 1.0, -0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(UserChannel(ftr, fisher, 1.0, 0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(UserChannel(ftr, fisher, 1.0, 0.1, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("cdf basics and edge arguments") {
    const auto ch = reference_channel(10.0, 10.0);
    CHECK(sinr_cdf(ch, 0.0) == 0.0);
    CHECK_THROWS_AS(sinr_cdf(ch, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(sinr_pdf(ch, 0.0), std::invalid_argument);

    const double scale = ch.link.c1 * ch.ftr.mean() / ch.link.kappa2;
    CHECK(sinr_cdf(ch, 1e6 * scale) >= 0.999);
}

TEST_CASE("no-jamming channel reduces to the scaled direct-gain law") {
    const FtrParams ftr{2.0, 2.0, db(15.0) / 6.0, 0.7};
    const FisherFParams fisher{3.0, 3.0, 1.0};
    const UserChannel ch(ftr, fisher, 0.4, 0.0, db(1.0));
    for (double g : {0.3, 1.0, 3.0}) {
        const double s = ch.link.kappa2 / ch.link.c1;
        CHECK(sinr_cdf(ch, g) == doctest::Approx(ftr_cdf(ftr, g * s, ch.truncation)));
        CHECK(sinr_pdf(ch, g) == doctest::Approx(s * ftr_pdf(ftr, g * s, ch.truncation)));
    }
}

TEST_CASE("contour route agrees with the conditional quadrature oracle") {
    const auto ch = reference_channel(10.0, 10.0);
    for (double g : {0.25, 1.0, 4.0}) {
        const double exact = cdf_by_quadrature(ch, g);
        CHECK(rel_err(sinr_cdf(ch, g), exact) <= 1e-5);
    }
    CHECK(rel_err(sinr_pdf(ch, 1.0), pdf_by_quadrature(ch, 1.0)) <= 1e-5);
}

TEST_CASE("density integrates to one") {
    const auto ch = reference_channel(10.0, 10.0);
    const double scale = ch.link.c1 * ch.ftr.mean() / ch.link.kappa2;
    double hi = 4.0 * scale;
    while (sinr_cdf(ch, hi) < 0.9999) {
        hi *= 2.0;
        REQUIRE(hi < 1e9 * scale);
    }
    const double total =
        num::adaptive_quad([&](double g) { return sinr_pdf(ch, g); }, 0.0, scale, 1e-7) +
        num::adaptive_quad([&](double g) { return sinr_pdf(ch, g); }, scale, hi, 1e-7);
    CHECK(std::abs(total - 1.0) <= 1e-3);
}

TEST_CASE("vanishing jamming power approaches the marginal law") {
    const FtrParams ftr{2.0, 2.0, db(15.0) / 6.0, 0.7};
    const FisherFParams fisher{3.0, 3.0, 1.0};
    const UserChannel tiny(ftr, fisher, 0.4, 1e-12, db(1.0));
    const UserChannel none(ftr, fisher, 0.4, 0.0, db(1.0));
    for (double g : {0.5, 1.0, 2.0}) {
        CHECK(rel_err(sinr_cdf(tiny, g), sinr_cdf(none, g)) <= 1e-8);
        CHECK(rel_err(sinr_pdf(tiny, g), sinr_pdf(none, g)) <= 1e-8);
    }
}

TEST_CASE("cdf monotone in the argument and in both link gains") {
    const auto ch = reference_channel(10.0, 10.0);
    double prev = 0.0;
    for (double g = 0.125; g <= 16.0; g *= 2.0) {
        const double cur = sinr_cdf(ch, g);
        CHECK(cur >= prev);
        prev = cur;
    }
    const auto stronger = reference_channel(13.0, 10.0);
    const auto noisier = reference_channel(10.0, 13.0);
    for (double g : {0.5, 1.0, 2.0}) {
        CHECK(sinr_cdf(stronger, g) <= sinr_cdf(ch, g));
        CHECK(sinr_cdf(noisier, g) >= sinr_cdf(ch, g));
    }
}

TEST_CASE("strong jamming beyond the contour pivot still evaluates") {
    // omega > m_f*kappa2 forces the conditional route
    const auto ch = reference_channel(10.0, 40.0);
    CHECK(ch.link.omega() > ch.fisher.m_f * ch.link.kappa2);
    for (double g : {0.5, 2.0}) {
        const double v = sinr_cdf(ch, g);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(rel_err(v, cdf_by_quadrature(ch, g)) <= 1e-7);
    }
    auto rng = num::seeded_engine(2026, 7);
    const int n = 200000;
    const double emp = mc_cdf(ch, 1.0, n, rng);
    const double se = std::sqrt(emp * (1.0 - emp) / n);
    CHECK(std::abs(sinr_cdf(ch, 1.0) - emp) <= 4.0 * se);
}

TEST_CASE("crossover interference level is perturbed, not singular") {
    const FtrParams ftr{2.0, 2.0, db(15.0) / 6.0, 0.7};
    const FisherFParams fisher{3.0, 3.0, 1.0};
    const double pivot = fisher.m_f * db(1.0);
    const double c2_star = pivot / ((fisher.m_s - 1.0) * fisher.z_bar);
    const UserChannel at(ftr, fisher, 0.4, c2_star, db(1.0));
    const UserChannel above(ftr, fisher, 0.4, c2_star * (1.0 + 5e-9), db(1.0));
    for (double g : {0.5, 1.0, 2.0})
        CHECK(std::abs(sinr_cdf(at, g) - sinr_cdf(above, g)) <= 1e-5);
}

TEST_CASE("monte carlo agreement at the reference point") {
    const auto ch = reference_channel(10.0, 10.0);
    auto rng = num::seeded_engine(2026, 8);
    const int n = 200000;
    for (double g : {0.5, 1.0, 2.0}) {
        const double emp = mc_cdf(ch, g, n, rng);
        const double se = std::sqrt(emp * (1.0 - emp) / n);
        CHECK(std::abs(sinr_cdf(ch, g) - emp) <= 4.0 * se);
    }
}

TEST_CASE("randomized channels agree with monte carlo") {
    auto rng = num::seeded_engine(2026, 9);
    std::uniform_real_distribution<double> um(1.0, 8.0), uk(0.0, 12.0), ud(0.0, 0.9),
        umf(2.0, 6.0), ums(2.0, 6.0), ulog(-1.0, 1.0);
    for (int set = 0; set < 3; ++set) {
        const FtrParams ftr{um(rng), uk(rng), std::pow(10.0, ulog(rng)), ud(rng)};
        const FisherFParams fisher{umf(rng), ums(rng), std::pow(10.0, ulog(rng))};
        const double c1 = std::pow(10.0, ulog(rng));
        const double c2 = 0.1 * std::pow(10.0, ulog(rng));
        const UserChannel ch(ftr, fisher, c1, c2, std::pow(10.0, 0.3 * ulog(rng)));
        const double scale =
            c1 * ftr.mean() / (ch.link.kappa2 + c2 * fisher.z_bar);
        const int n = 200000;
        for (double f : {0.1, 0.5, 1.0, 2.0, 8.0}) {
            const double g = f * scale;
            const double emp = mc_cdf(ch, g, n, rng);
            // rule-of-three additive guard: a zero-count cell is consistent
            // with any probability up to about 3/n
            const double se = std::sqrt(emp * (1.0 - emp) / n);
            CHECK(std::abs(sinr_cdf(ch, g) - emp) <= 4.0 * se + 3.0 / n);
        }
    }
}

TEST_CASE("weak-interference approximation tracks the exact law") {
    RegimeEstimate reg{};
    // near-zero interference: approximation and exact law coincide
    const auto tiny = reference_channel(10.0, -60.0);
    CHECK(std::abs(sinr_cdf_low_jamming(tiny, 1.0, &reg) - sinr_cdf(tiny, 1.0)) <= 1e-4);
    CHECK(reg.omega_ratio == doctest::Approx(tiny.link.omega() / (3.0 * db(1.0))));
    CHECK(reg.gamma_scale ==
          doctest::Approx(db(1.0) / (2.0 * tiny.ftr.sigma2 * tiny.link.c1)));

    // stated operating regime: within 2% across the transmit-power sweep
    for (double pa : {0.0, 10.0, 20.0, 30.0}) {
        const auto ch = reference_channel(pa, 10.0);
        CHECK(rel_err(sinr_cdf_low_jamming(ch, 1.0), sinr_cdf(ch, 1.0)) <= 0.02);
    }

    // mid jamming power degrades the approximation
    const auto mid = reference_channel(10.0, 25.0);
    const auto low = reference_channel(10.0, 10.0);
    CHECK(rel_err(sinr_cdf_low_jamming(mid, 1.0), sinr_cdf(mid, 1.0)) >
          rel_err(sinr_cdf_low_jamming(low, 1.0), sinr_cdf(low, 1.0)));

    // error shrinks a decade per decade of interference power
    const auto deep = reference_channel(10.0, 0.0);
    CHECK(rel_err(sinr_cdf_low_jamming(deep, 1.0), sinr_cdf(deep, 1.0)) <=
          0.5 * rel_err(sinr_cdf_low_jamming(low, 1.0), sinr_cdf(low, 1.0)));

    const auto strong = reference_channel(10.0, 40.0);
    CHECK_THROWS_AS(sinr_cdf_low_jamming(strong, 1.0), std::domain_error);
    CHECK(sinr_cdf_low_jamming(tiny, 0.0) == 0.0);
}

TEST_CASE("high-power approximation tracks the exact law") {
    for (double pa : {35.0, 45.0}) {
        const auto ch = reference_channel(pa, 10.0);
        CHECK(rel_err(sinr_cdf_high_power(ch, 1.0), sinr_cdf(ch, 1.0)) < 0.05);
    }

    // error decays monotonically as the transmit power climbs a decade
    double prev = 1.0;
    for (double pa : {35.0, 38.0, 41.0, 44.0}) {
        const auto ch = reference_channel(pa, 10.0);
        const double e = rel_err(sinr_cdf_high_power(ch, 1.0), sinr_cdf(ch, 1.0));
        CHECK(e <= prev * 1.02);
        prev = e;
    }

    // one decade deeper at least halves the worst grid error
    double worst35 = 0.0, worst45 = 0.0;
    for (double g : {0.5, 1.0, 2.0}) {
        const auto a = reference_channel(35.0, 10.0);
        const auto b = reference_channel(45.0, 10.0);
        worst35 = std::max(worst35, rel_err(sinr_cdf_high_power(a, g), sinr_cdf(a, g)));
        worst45 = std::max(worst45, rel_err(sinr_cdf_high_power(b, g), sinr_cdf(b, g)));
    }
    CHECK(worst45 <= 0.5 * worst35);

    // integer and near-integer shadowing branches agree
    const auto mi = reference_channel(35.0, 10.0, 3.0);
    const auto mn = reference_channel(35.0, 10.0, 3.001);
    CHECK(rel_err(sinr_cdf_high_power(mn, 1.0), sinr_cdf_high_power(mi, 1.0)) <= 0.01);

    RegimeEstimate reg{};
    const auto ch = reference_channel(35.0, 10.0);
    sinr_cdf_high_power(ch, 1.0, &reg);
    CHECK(reg.gamma_scale ==
          doctest::Approx(db(1.0) / (2.0 * ch.ftr.sigma2 * ch.link.c1)));
    CHECK(sinr_cdf_high_power(ch, 0.0) == 0.0);
}

TEST_CASE("joint high-power weak-interference approximation") {
    // stated regime accuracy
    const auto ch = reference_channel(35.0, 10.0);
    CHECK(rel_err(sinr_cdf_high_power_low_jamming(ch, 1.0), sinr_cdf(ch, 1.0)) < 0.05);

    // regime limit: power up, interference down
    const auto deep = reference_channel(45.0, 0.0);
    CHECK(rel_err(sinr_cdf_high_power_low_jamming(deep, 1.0), sinr_cdf(deep, 1.0)) <=
          0.5 * rel_err(sinr_cdf_high_power_low_jamming(ch, 1.0), sinr_cdf(ch, 1.0)));

    const auto vanish = reference_channel(45.0, -30.0);
    CHECK(rel_err(sinr_cdf_high_power_low_jamming(vanish, 1.0), sinr_cdf(vanish, 1.0)) <=
          1e-3);

    const auto strong = reference_channel(35.0, 40.0);
    CHECK_THROWS_AS(sinr_cdf_high_power_low_jamming(strong, 1.0), std::domain_error);
    CHECK(sinr_cdf_high_power_low_jamming(ch, 0.0) == 0.0);
}

TEST_CASE("outage probability is the cdf at the threshold") {
    const auto ch = reference_channel(10.0, 10.0);
    CHECK(outage_probability(ch, 0.0) == 0.0);
    CHECK(outage_probability(ch, 1.0) == sinr_cdf(ch, 1.0));

    double prev = 1.0;
    for (double pa : {0.0, 10.0, 20.0, 30.0, 40.0}) {
        const double op = outage_probability(reference_channel(pa, 10.0), 1.0);
        CHECK(op <= prev + 1e-12);
        prev = op;
    }
}
