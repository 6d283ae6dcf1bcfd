#include <gtest/gtest.h>

#include <random>

#include <deltastark/oracle.hpp>

using namespace deltastark;

namespace {

void expect_near(cplx a, cplx b, double tol) {
    EXPECT_LE(std::abs(a - b), tol) << "got " << a << " expected " << b;
}

}  // namespace

TEST(InBruteforce, Examples) {
    expect_near(in_bruteforce(2, 1.0, 1.0, 1e-13).value, i2(1.0, 1.0), 1e-10);
    double t = 1.0;
    expect_near(in_bruteforce(3, t, 0.0, 1e-11).value, std::sqrt(t) / (std::pow(2.0 * I, 1.5) * gamma_c(1.5)), 1e-9);
    // reference value kept for the approximation ledger
    auto r4 = in_bruteforce(4, 1.0, 1.0, 1e-10);
    expect_near(r4.value, cplx(-0.24997021062368377, 0.0032549754958397146), 1e-9);
    EXPECT_THROW(in_bruteforce(6, 1.0, 1.0, 1e-6), numeric_error);
    EXPECT_THROW(in_bruteforce(1, 1.0, 1.0, 1e-6), numeric_error);
}

TEST(InBruteforce, CostCapFlagged) { EXPECT_FALSE(in_bruteforce(5, 2.0, 3.0, 1e-12, 20000).converged); }

TEST(Volterra, StationaryWithoutField) {
    auto v = volterra_solve(5.0, 1e-3, 0.0);
    EXPECT_EQ(v.values[0], cplx(1.0));
    double worst = 0.0;
    for (auto z : v.values) worst = std::max(worst, std::abs(std::abs(z) - 1.0));
    EXPECT_LE(worst, 5e-4);
    // exact: psi(0,t) = e^{it/2}
    expect_near(v.values.back(), std::polar(1.0, 2.5), 1e-5);
}

TEST(Volterra, Preconditions) {
    EXPECT_THROW(volterra_solve(1.0, 0.0, 1.0), numeric_error);
    EXPECT_THROW(volterra_solve(2e3, 1e-3, 1.0), numeric_error);
    EXPECT_THROW(volterra_solve(5.0, 0.5, 1.0), numeric_error);
}

TEST(Volterra, RippleTimesMatchDynamics) {
    std::vector<double> g;
    for (int i = 0; i < 200; ++i) g.push_back(6.0 * i / 199);
    auto c = ionization_curve(g, 1.0, 24, 1e-10);
    auto v = volterra_solve(6.0, 1e-3, 1.0);
    std::vector<double> a, b;
    for (std::size_t i = 0; i < g.size(); ++i) {
        a.push_back(std::norm(c.amplitude[i]));
        b.push_back(std::norm(v.bound_amplitude(std::size_t(std::lround(g[i] / 1e-3)))));
    }
    auto ma = ripple_maxima(a), mb = ripple_maxima(b);
    ASSERT_EQ(ma.size(), mb.size());
    for (std::size_t k = 0; k < ma.size(); ++k)
        EXPECT_LE(std::abs(double(ma[k]) - double(mb[k])), 1.0);
}

TEST(GreenAiry, MatchesTransform) {
    auto c = green_airy_check(0.3, -0.1, 0.5, 1.0);
    EXPECT_LE(c.rel_error, 1e-3);
    expect_near(c.closed, cplx(1.2728958262397339, -0.23596580102914858), 1e-12);
}

TEST(GreenAiry, SymmetricAndSignals) {
    expect_near(green_airy(0.3, -0.1, 0.5, 1.0), green_airy(-0.1, 0.3, 0.5, 1.0), 1e-15);
    EXPECT_THROW(green_airy(0, 0, 0.5, 0.0), numeric_error);
}

TEST(GreenAiry, ResolventPoleNearBoundLevel) {
    cplx w = resolvent_pole(0.05);
    EXPECT_NEAR(w.real(), -0.5, 5e-3);
    EXPECT_LT(w.imag(), 0.0);
    auto m = wkb_model(0.05);
    EXPECT_NEAR(w.real(), -0.5 + m.delta, 1e-4);
    EXPECT_NEAR(-2.0 * w.imag() / m.gamma, 1.0, 0.2);
    expect_near(w, cplx(-0.50161295170774367, -7.3832669974913824e-07), 1e-12);
}

TEST(Identities, AllPass) {
    auto checks = identity_checks();
    ASSERT_EQ(checks.size(), 5u);
    for (auto& c : checks) EXPECT_TRUE(c.pass) << format_check(c);
    EXPECT_NEAR(checks[0].lhs.real(), pi, 1e-12);
    EXPECT_NEAR(checks[3].lhs.real(), 1.0, 1e-12);
    EXPECT_NEAR(checks[3].rhs.real(), 1.0, 1e-12);
}

TEST(Identities, ReportLineFormat) {
    auto line = format_check(identity_checks()[1]);
    EXPECT_NE(line.find("beta(0.5,3.5)"), std::string::npos);
    EXPECT_NE(line.find("residual="), std::string::npos);
    EXPECT_NE(line.find("pass"), std::string::npos);
}
