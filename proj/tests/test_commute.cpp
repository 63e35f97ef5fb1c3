#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "edtwk/commute.hpp"

using namespace edtwk;

namespace {

// Random connected weighted graph: sparse Bernoulli edges plus a spanning path.
Matrix random_connected(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::bernoulli_distribution edge(0.5);
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (edge(rng)) a(i, j) = a(j, i) = u(rng);
    for (int i = 0; i + 1 < n; ++i)
        if (a(i, i + 1) == 0.0) a(i, i + 1) = a(i + 1, i) = u(rng);
    return a;
}

double rel_err(const Matrix& got, const Matrix& want) {
    double worst = 0.0;
    for (long i = 0; i < got.rows(); ++i)
        for (long j = 0; j < got.cols(); ++j) {
            if (i == j) continue;
            const double scale = std::max(1.0, std::abs(want(i, j)));
            worst = std::max(worst, std::abs(got(i, j) - want(i, j)) / scale);
        }
    return worst;
}

}  // namespace

TEST_CASE("laplacian worked examples") {
    Matrix a(2, 2);
    a << 0, 3, 3, 0;
    Matrix l = laplacian(a);
    CHECK(l(0, 0) == 3.0);
    CHECK(l(0, 1) == -3.0);
    CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    Matrix k3 = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
    Matrix lk = laplacian(k3);
    CHECK(lk(1, 1) == 2.0);
    CHECK(lk(0, 2) == -1.0);
}

TEST_CASE("laplacian rejects bad input") {
    Matrix bad(2, 3);
    bad.setZero();
    CHECK_THROWS_AS(laplacian(bad), shape_error);
    Matrix asym(2, 2);
    asym << 0, 1, 2, 0;
    CHECK_THROWS_AS(laplacian(asym), validation_error);
    Matrix diag(2, 2);
    diag << 1, 1, 1, 0;
    CHECK_THROWS_AS(laplacian(diag), validation_error);
    Matrix neg(2, 2);
    neg << 0, -1, -1, 0;
    CHECK_THROWS_AS(laplacian(neg), validation_error);
}

TEST_CASE("two-vertex commute time is 2 regardless of weight") {
    for (double w : {0.5, 1.0, 7.0}) {
        Matrix a(2, 2);
        a << 0, w, w, 0;
        const auto c = commute_time_spectral(a);
        CHECK(c.values(0, 1) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(c.volume == doctest::Approx(2 * w));
    }
}

TEST_CASE("unit triangle commute times are all 4") {
    Matrix k3 = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
    const auto c = commute_time_spectral(k3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            CHECK(std::abs(c.values(i, j) - 4.0) < 1e-10);
        }
}

TEST_CASE("unit path end-to-end commute time is 8") {
    Matrix p(3, 3);
    p << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    const auto c = commute_time_spectral(p);
    CHECK(c.values(0, 2) == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(c.values(0, 1) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("disconnected graph is reported with its components") {
    Matrix a = Matrix::Zero(4, 4);
    a(0, 1) = a(1, 0) = 1.0;
    a(2, 3) = a(3, 2) = 1.0;
    const auto comps = connected_components(a);
    CHECK(comps.size() == 2);
    CHECK(comps[0] == std::vector<int>{0, 1});
    try {
        commute_time_spectral(a);
        FAIL("expected singularity_error");
    } catch (const singularity_error& e) {
        CHECK(std::string(e.what()).find("component") != std::string::npos);
    }
    CHECK_THROWS_AS(commute_time_resistance_oracle(a), singularity_error);
}

TEST_CASE("spectral form matches the pseudoinverse oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(2, 30);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = size(rng);
        const Matrix a = random_connected(n, rng);
        const auto s = commute_time_spectral(a);
        const auto o = commute_time_resistance_oracle(a);
        CHECK(rel_err(s.values, o.values) < 1e-8);
        CHECK(s.volume == doctest::Approx(o.volume));
    }
}

TEST_CASE("commute matrix invariants") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = random_connected(12, rng);
        const auto c = commute_time_spectral(a);
        CHECK((c.values - c.values.transpose()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(c.values.diagonal().cwiseAbs().maxCoeff() == 0.0);
        CHECK(c.values.minCoeff() >= 0.0);
        // sqrt of commute time is a metric; check the triangle inequality
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                for (int k = 0; k < 12; ++k)
                    CHECK(std::sqrt(c.values(i, j)) <=
                          std::sqrt(c.values(i, k)) + std::sqrt(c.values(k, j)) + 1e-9);
    }
}

TEST_CASE("commute times are invariant under uniform weight scaling") {
    std::mt19937_64 rng(9);
    const Matrix a = random_connected(10, rng);
    const auto c1 = commute_time_spectral(a);
    const auto c2 = commute_time_spectral(Matrix(3.7 * a));
    CHECK(rel_err(c2.values, c1.values) < 1e-9);
}

TEST_CASE("simulated random walks reproduce the commute times") {
    // fixed 5-vertex graph: a 4-cycle with one chord and a pendant vertex
    Matrix a = Matrix::Zero(5, 5);
    auto link = [&](int i, int j, double w) { a(i, j) = a(j, i) = w; };
    link(0, 1, 1.0);
    link(1, 2, 1.0);
    link(2, 3, 1.0);
    link(3, 0, 1.0);
    link(0, 2, 1.0);
    link(3, 4, 1.0);
    const auto c = commute_time_spectral(a);

    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Vector degree = a.rowwise().sum();
    auto step = [&](int v) {
        double r = u(rng) * degree(v);
        for (int w = 0; w < 5; ++w) {
            r -= a(v, w);
            if (r <= 0.0) return w;
        }
        return 4;
    };
    const int kWalks = 100000;
    for (auto [s, t] : {std::pair{0, 4}, std::pair{1, 3}}) {
        double sum = 0.0, sumsq = 0.0;
        for (int walk = 0; walk < kWalks; ++walk) {
            int v = s, steps = 0;
            bool reached = false;
            while (true) {
                v = step(v);
                ++steps;
                if (!reached && v == t) reached = true;
                else if (reached && v == s) break;
            }
            sum += steps;
            sumsq += static_cast<double>(steps) * steps;
        }
        const double mean = sum / kWalks;
        const double var = (sumsq - sum * mean) / (kWalks - 1);
        const double se = std::sqrt(var / kWalks);
        CHECK(std::abs(mean - c.values(s, t)) < 3 * se);
    }
}
