#include <doctest.h>

#include <cmath>

#include "rlcdae/diagnostics.hpp"
#include "rlcdae/random_circuits.hpp"
#include "support.hpp"

using namespace rlcdae;

namespace {

SpectralReport report_for(const Circuit& c, double T = 1.0)
{
    MnaSystem s = assemble_mna(c);
    ProjectorChain ch = build_chain(s.M, s.K);
    return spectral_report(c, s, ch, T);
}

const BoundCheck* find_check(const SpectralReport& r, const std::string& prefix)
{
    for (const auto& b : r.checks)
        if (b.name.rfind(prefix, 0) == 0) return &b;
    return nullptr;
}

}  // namespace

TEST_CASE("exp_norm examples")
{
    Rng rng(51);
    Mat G = random_gaussian(rng, 4, 4);
    Mat S = -(G * G.transpose() + 0.1 * Mat::Identity(4, 4));
    CHECK(exp_norm(S, 5.0) == doctest::Approx(1).epsilon(1e-12));
    Mat W = G - G.transpose();
    for (double T : {0.1, 1.0, 50.0}) CHECK(exp_norm(W, T) == doctest::Approx(1).epsilon(1e-10));
    Mat J(2, 2);
    J << -1, 10, 0, -1;
    double c = exp_norm(J, 5.0);
    CHECK(c > 1);
    // ||exp(Jt)|| peaks near t = 1 at roughly 10/e
    CHECK(c == doctest::Approx(norm2(expm(J))).epsilon(0.02));
    CHECK(c <= norm2(expm(J * 1.0)) * 1.05);
}

TEST_CASE("parallel and serial exp_norm agree")
{
    Rng rng(52);
    for (int t = 0; t < 10; ++t) {
        Mat A = random_gaussian(rng, 5, 5) - 2 * Mat::Identity(5, 5);
        CHECK(exp_norm(A, 3.0) == exp_norm_serial(A, 3.0));
    }
    auto g = exp_norm_grid(2.0, 64);
    CHECK(g.front() == 0);
    CHECK(g.back() == doctest::Approx(2.0));
    CHECK(std::is_sorted(g.begin(), g.end()));
}

TEST_CASE("Hermitian part dominates the exponential")
{
    Rng rng(53);
    std::uniform_real_distribution<double> U(0, 3);
    for (int t = 0; t < 100; ++t) {
        Mat B = random_gaussian(rng, 4, 4);
        for (int s = 0; s < 10; ++s) {
            auto [eb, eh] = hermitian_part_check(B, U(rng));
            CHECK(eb <= eh * (1 + 1e-10));
        }
    }
}

TEST_CASE("RC report")
{
    SpectralReport r = report_for(fixture("rc.net"));
    CHECK(r.index == 0);
    CHECK(r.kappa_M == doctest::Approx(1));
    const BoundCheck* k = find_check(r, "kappa(M)");
    REQUIRE(k);
    CHECK(k->bound >= 1);
    CHECK(r.ok());
    CHECK(r.degenerate_forcing);
    CHECK(r.C_f == 0);
}

TEST_CASE("LC exponential bound")
{
    SpectralReport r = report_for(fixture("lc_star.net"), 5.0);
    CHECK(r.index == 0);
    CHECK(r.C_A <= std::sqrt(r.kappa_M) * (1 + 1e-9));
    CHECK(r.ok());
}

TEST_CASE("random circuit reports pass")
{
    Rng rng(54);
    for (int t = 0; t < 15; ++t) {
        RandomCircuitOptions o;
        o.nodes = 20;
        o.degree = 3;
        o.target_index = t % 3;
        Circuit c = random_circuit(rng, o);
        SpectralReport r = report_for(c);
        CAPTURE(t);
        for (const auto& b : r.checks) {
            CAPTURE(b.name);
            if (!b.informational) CHECK(b.actual <= b.bound * (1 + 1e-9));
        }
        CHECK(r.ok());
        CHECK(r.index == o.target_index);
        if (r.index == 1) CHECK(r.has_saddle);
    }
}

TEST_CASE("saddle point requires a capacitor-free node")
{
    MnaSystem s = assemble_mna(fixture("rc.net"));
    CHECK_THROWS_AS(saddle_point(s), NumericError);
    SaddlePoint sp = saddle_point(assemble_mna(fixture("vrc.net")));
    CHECK(sp.gamma > 0);
    CHECK(sp.gamma <= sp.sigma_min_K22 * (1 + 1e-9));
    SaddlePoint nv = saddle_point(assemble_mna(fixture("rlc_series.net")));
    CHECK(std::isinf(nv.sigma_min_B));
}

TEST_CASE("quantum cost report")
{
    Circuit c = fixture("rc.net");
    MnaSystem s = assemble_mna(c);
    ProjectorChain ch = build_chain(s.M, s.K);
    SpectralReport r1 = spectral_report(c, s, ch, 1.0);
    QuantumCost q = quantum_cost_report(r1, 1.0, 1e-3);
    // kappa = T ||A|| C(A) = 1 for the unit RC circuit
    CHECK(q.kappa == doctest::Approx(r1.T * r1.norm_A * r1.C_A));
    CHECK(q.kappa == doctest::Approx(1));
    CHECK(q.kappa_squared == doctest::Approx(q.kappa * q.kappa));
    CHECK(q.k >= 1);
    CHECK_FALSE(q.terms.empty());
    CHECK_FALSE(q.symbolic.empty());
    for (const auto& t : q.terms) {
        CHECK_FALSE(t.formula.empty());
        CHECK(std::isfinite(t.value));
    }

    QuantumCost q2 = quantum_cost_report(r1, 2.0, 1e-3);
    CHECK(q2.kappa_squared == doctest::Approx(4 * q.kappa_squared));
}

TEST_CASE("norm chain and forcing on sourced circuits")
{
    SpectralReport r = report_for(fixture("v_par_c.net"), 2.0);
    CHECK(r.index == 2);
    CHECK(r.tau > 0);
    CHECK(r.ok());
    CHECK_FALSE(r.degenerate_forcing);
    CHECK(r.C_f > 0);
    CHECK(r.alpha_M == doctest::Approx(2 * r.params.d * r.params.c_max + r.params.d * r.params.l_max));
    CHECK(r.alpha_K == doctest::Approx(2 * r.params.d * r.params.g_max + 4 * std::sqrt(2.0 * r.params.d)));
}
