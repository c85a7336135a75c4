#include <doctest.h>

#include <cmath>

#include "rlcdae/dae_solver.hpp"
#include "rlcdae/diagnostics.hpp"
#include "rlcdae/history_system.hpp"
#include "rlcdae/mna.hpp"
#include "rlcdae/random_circuits.hpp"
#include "support.hpp"

using namespace rlcdae;

namespace {

Mat scalar(double a) { return Mat::Constant(1, 1, a); }

}  // namespace

TEST_CASE("m = 1, k = 1 scalar system")
{
    const double a = -0.8, h = 0.5;
    HistorySystem hs = build_history_system(scalar(a), Vec::Constant(1, 0.3), Vec::Constant(1, 2.0), h, 1, 1);
    Mat L = dense_history_matrix(hs);
    REQUIRE(L.rows() == 4);
    // ordering (time, taylor): (0,0) (0,1) (1,0) (1,1)
    Mat expect = Mat::Identity(4, 4);
    expect(2, 0) = -(1 + a * h);
    expect(2, 1) = -1;
    CHECK((L - expect).norm() < 1e-14);
    Vec psi = hs.rhs();
    CHECK(psi(0) == 2.0);
    CHECK(psi(1) == doctest::Approx(0.15));
    CHECK(psi(2) == 0);
    auto sol = solve_history(hs, false);
    CHECK(sol.slices[1](0) == doctest::Approx((1 + a * h) * 2 + h * 0.3));
}

TEST_CASE("right-hand side support")
{
    Rng rng(41);
    Mat A = random_gaussian(rng, 3, 3);
    HistorySystem hs = build_history_system(A, Vec::Zero(3), Vec::Ones(3), 0.5 / norm2(A), 3, 4);
    Vec r = hs.rhs();
    CHECK(r.head(3).norm() > 0);
    CHECK(r.tail(r.size() - 3).norm() == 0);
}

TEST_CASE("A = 0 gives linear growth")
{
    Vec f(2), x0(2);
    f << 1, -2;
    x0 << 0.5, 0.25;
    HistorySystem hs = build_history_system(Mat::Zero(2, 2), f, x0, 0.1, 5, 3);
    auto sol = solve_history(hs, false);
    for (int j = 0; j <= 5; ++j) CHECK((sol.slices[j] - (x0 + j * 0.1 * f)).norm() < 1e-14);
}

TEST_CASE("scalar decay matches the exponential")
{
    HistorySystem hs = build_history_system(scalar(-1), Vec::Zero(1), Vec::Ones(1), 0.5, 2, 20);
    auto sol = solve_history(hs, false);
    CHECK(std::abs(sol.slices[0](0) - 1) < 1e-10);
    CHECK(std::abs(sol.slices[1](0) - std::exp(-0.5)) < 1e-10);
    CHECK(std::abs(sol.slices[2](0) - std::exp(-1.0)) < 1e-10);

    HistorySystem z = build_history_system(scalar(-1), Vec::Zero(1), Vec::Zero(1), 0.5, 2, 5);
    auto zs = solve_history(z, false);
    for (const auto& s : zs.slices) CHECK(s.norm() == 0);
}

TEST_CASE("slices equal the Taylor stepper and the dense solve")
{
    Rng rng(42);
    for (int t = 0; t < 30; ++t) {
        int n = 1 + static_cast<int>(rng() % 5);
        int k = 1 + static_cast<int>(rng() % 10);
        int m = 1 + static_cast<int>(rng() % 20);
        Mat A = random_gaussian(rng, n, n);
        Vec f = random_gaussian(rng, n, 1), x0 = random_gaussian(rng, n, 1);
        double h = 1.0 / norm2(A);
        HistorySystem hs = build_history_system(A, f, x0, h, m, k);
        auto sol = solve_history(hs, false);
        auto ys = taylor_steps(A, f, x0, h, m, k);
        for (int j = 0; j <= m; ++j) CHECK((sol.slices[j] - ys[j]).norm() <= 1e-12 * std::max(1.0, ys[j].norm()));

        if (hs.dim() <= 600) {
            Mat L = dense_history_matrix(hs);
            Vec y = hs.solve(hs.rhs());
            CHECK((L * y - hs.rhs()).norm() <= 1e-10 * std::max(1.0, y.norm()));
            Vec v = random_gaussian(rng, static_cast<int>(hs.dim()), 1);
            CHECK((L.transpose() * v - hs.apply_transpose(v)).norm() <= 1e-12 * v.norm() * L.norm());
            CHECK((L.transpose() * hs.solve_transpose(v) - v).norm() <= 1e-9 * v.norm());
        }
    }
}

TEST_CASE("size guard")
{
    CHECK_THROWS_AS(build_history_system(Mat::Zero(2, 2), Vec::Zero(2), Vec::Ones(2), 0.1, 100, 10, 1000), NumericError);
    CHECK_THROWS_AS(build_history_system(scalar(4), Vec::Zero(1), Vec::Ones(1), 0.5, 2, 3), NumericError);
    HistorySystem big = build_history_system(Mat::Zero(10, 10), Vec::Zero(10), Vec::Ones(10), 0.1, 100, 10);
    CHECK_THROWS_AS(dense_history_matrix(big), NumericError);
}

TEST_CASE("condition estimate and the kappa bound")
{
    Rng rng(43);
    for (int t = 0; t < 50; ++t) {
        int n = 1 + static_cast<int>(rng() % 4);
        LinearSystem sys = random_stable_system(rng, n);
        double h = 1.0 / norm2(sys.A);
        int m = 2 + static_cast<int>(rng() % 8);
        int k = 2 + static_cast<int>(rng() % 6);
        HistorySystem hs = build_history_system(sys.A, sys.f, sys.x0, h, m, k);
        auto sol = solve_history(hs, true);
        CHECK(sol.kappa_ok);
        if (t < 10) {
            Eigen::JacobiSVD<Mat> svd(dense_history_matrix(hs));
            auto s = svd.singularValues();
            double kd = s(0) / s(s.size() - 1);
            CHECK(sol.cond.kappa == doctest::Approx(kd).epsilon(1e-4));
        }
    }
}

TEST_CASE("history state amplitudes")
{
    Vec a(2), b(2);
    a << 1, 0;
    b << 0, 1;
    HistoryState s = make_history_state({a, b});
    CHECK(s.amplitudes[0] == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(s.amplitudes[1] == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(s.stacked().norm() == doctest::Approx(1));
    HistoryState s2 = make_history_state({2 * a, 2 * b});
    CHECK(history_distance(s, s2) < 1e-15);
    CHECK_THROWS_AS(make_history_state({Vec::Zero(2)}), NumericError);
}

TEST_CASE("RC history amplitudes decay like the exponential")
{
    Circuit c = fixture("rc.net");
    MnaSystem s = assemble_mna(c);
    SimOptions o;
    o.h = 0.1;
    o.k = 15;
    Trajectory tr = simulate(s, initial_state(c, s), 1.0, o);
    HistoryState hs = extract_history_state(tr);
    for (size_t j = 1; j < hs.amplitudes.size(); ++j)
        CHECK(hs.amplitudes[j] / hs.amplitudes[0] == doctest::Approx(std::exp(-0.1 * j)).epsilon(1e-8));
}

TEST_CASE("history distance is at most twice the relative error")
{
    Rng rng(44);
    std::normal_distribution<double> N01;
    for (int t = 0; t < 200; ++t) {
        int n = 1 + static_cast<int>(rng() % 5), m = 1 + static_cast<int>(rng() % 10);
        std::vector<Vec> x, w;
        double x2 = 0, d2 = 0;
        double scale = std::pow(10.0, -3.0 * (rng() % 1000) / 1000.0);
        for (int j = 0; j <= m; ++j) {
            x.push_back(random_gaussian(rng, n, 1));
            Vec e = scale * random_gaussian(rng, n, 1);
            w.push_back(x.back() + e);
            x2 += x.back().squaredNorm();
            d2 += e.squaredNorm();
        }
        double eps = std::sqrt(d2 / x2);
        CHECK(history_distance(make_history_state(x), make_history_state(w)) <= 2 * eps * (1 + 1e-12));
    }
}
