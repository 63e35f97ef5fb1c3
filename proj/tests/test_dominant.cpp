#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "edtwk/dominant.hpp"

using namespace edtwk;

namespace {

CommuteTimeMatrix as_commute(const Matrix& c) {
    CommuteTimeMatrix m;
    m.values = c;
    m.volume = 1.0;
    return m;
}

Matrix random_affinity(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Matrix w = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) w(i, j) = w(j, i) = u(rng);
    return w;
}

// Brute-force maximum of a^T W a over a simplex grid with the given step.
double grid_objective(const Matrix& w, double step) {
    const int n = static_cast<int>(w.rows());
    const int units = static_cast<int>(std::lround(1.0 / step));
    double best = 0.0;
    Vector a(n);
    std::function<void(int, int)> rec = [&](int idx, int left) {
        if (idx == n - 1) {
            a(idx) = left * step;
            best = std::max(best, a.dot(w * a));
            return;
        }
        for (int c = 0; c <= left; ++c) {
            a(idx) = c * step;
            rec(idx + 1, left - c);
        }
    };
    rec(0, units);
    return best;
}

}  // namespace

TEST_CASE("affinity transforms") {
    Matrix c(3, 3);
    c << 0, 2, 4, 2, 0, 2, 4, 2, 0;
    const auto ct = as_commute(c);

    const Matrix raw = affinity_transform(ct, AffinityMode::Raw);
    CHECK(raw == c);

    const Matrix mm = affinity_transform(ct, AffinityMode::MaxMinus);
    CHECK(mm(0, 1) == 2.0);  // max 4 minus 2
    CHECK(mm(0, 2) == 0.0);
    CHECK(mm.diagonal().cwiseAbs().maxCoeff() == 0.0);

    // neg-exp with default sigma = mean off-diagonal commute time
    const double sigma = (2 + 4 + 2 + 2 + 4 + 2) / 6.0;
    const Matrix ne = affinity_transform(ct, AffinityMode::NegExp);
    CHECK(ne(0, 1) == doctest::Approx(std::exp(-2.0 / sigma)).epsilon(1e-12));
    CHECK(ne(0, 2) == doctest::Approx(std::exp(-4.0 / sigma)).epsilon(1e-12));
    CHECK(ne.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(ne.maxCoeff() <= 1.0);

    const Matrix ne2 = affinity_transform(ct, AffinityMode::NegExp, 2.0);
    CHECK(ne2(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(affinity_transform(ct, AffinityMode::NegExp, 0.0), config_error);
}

TEST_CASE("affinity mode names round-trip") {
    for (auto mode : {AffinityMode::Raw, AffinityMode::NegExp, AffinityMode::MaxMinus})
        CHECK(affinity_mode_from_string(to_string(mode)) == mode);
    CHECK_THROWS_AS(affinity_mode_from_string("bogus"), config_error);
}

TEST_CASE("replicator step worked example") {
    Matrix w(2, 2);
    w << 0, 1, 1, 0;
    Vector a(2);
    a << 0.9, 0.1;
    const Vector next = replicator_step(w, a);
    CHECK(next(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(next(1) == doctest::Approx(0.5).epsilon(1e-12));
    // (0.5, 0.5) is the fixed point
    Vector fp(2);
    fp << 0.5, 0.5;
    CHECK((replicator_step(w, fp) - fp).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("replicator step degenerate state") {
    Matrix w(2, 2);
    w << 0, 1, 1, 0;
    Vector e(2);
    e << 1.0, 0.0;  // a^T W a = 0
    CHECK_THROWS_AS(replicator_step(w, e), degenerate_state_error);
}

TEST_CASE("dominant distribution on the 2-vertex affinity") {
    Matrix w(2, 2);
    w << 0, 1, 1, 0;
    const auto d = dominant_distribution(w);
    CHECK(d.converged);
    CHECK(d.a(0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(d.support == std::vector<int>{0, 1});
    CHECK(d.complement.empty());
    CHECK(d.objective == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("a weakly attached vertex leaves the dominant set") {
    Matrix w = Matrix::Zero(3, 3);
    w(0, 1) = w(1, 0) = 1.0;
    w(0, 2) = w(2, 0) = 0.1;
    w(1, 2) = w(2, 1) = 0.1;
    const auto d = dominant_distribution(w);
    CHECK(d.support == std::vector<int>{0, 1});
    CHECK(d.complement == std::vector<int>{2});
    CHECK(d.a(0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(d.a(2) < 1e-6);
    // grid oracle at step 0.01 for the 3-simplex
    CHECK(d.objective >= grid_objective(w, 0.01) - 0.005);
}

TEST_CASE("uniform affinity keeps the barycenter") {
    Matrix w = Matrix::Ones(4, 4) - Matrix::Identity(4, 4);
    const auto d = dominant_distribution(w);
    CHECK((d.a.array() - 0.25).abs().maxCoeff() < 1e-12);
    CHECK(d.support.size() == 4);
}

TEST_CASE("all-zero affinity is rejected") {
    CHECK_THROWS_AS(dominant_distribution(Matrix::Zero(3, 3)), validation_error);
}

TEST_CASE("replicator trajectory stays on the simplex and climbs") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix w = random_affinity(6, rng);
        Vector a = Vector::Constant(6, 1.0 / 6.0);
        double prev = a.dot(w * a);
        for (int it = 0; it < 200; ++it) {
            a = replicator_step(w, a);
            CHECK(std::abs(a.sum() - 1.0) < 1e-12);
            CHECK(a.minCoeff() >= 0.0);
            const double obj = a.dot(w * a);
            CHECK(obj >= prev - 1e-12);
            prev = obj;
        }
    }
}

TEST_CASE("fixed points satisfy the KKT conditions") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        const Matrix w = random_affinity(5, rng);
        const auto d = dominant_distribution(w);
        const Vector grad = w * d.a;
        const double value = d.objective;
        for (int i : d.support) CHECK(std::abs(grad(i) - value) < 1e-6);
        for (int i : d.complement) CHECK(grad(i) <= value + 1e-6);
    }
}

TEST_CASE("replicator objective matches a simplex grid search") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix w = random_affinity(4, rng);
        const auto d = dominant_distribution(w);
        CHECK(d.objective >= grid_objective(w, 0.02) - 0.01);
    }
}

TEST_CASE("dominant distribution is permutation equivariant") {
    std::mt19937_64 rng(13);
    const Matrix w = random_affinity(5, rng);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(5);
    perm.setIdentity();
    std::shuffle(perm.indices().data(), perm.indices().data() + 5, rng);
    const Matrix wp = perm.transpose() * w * perm;
    const auto d = dominant_distribution(w);
    const auto dp = dominant_distribution(wp);
    const Vector expected = perm.transpose() * d.a;
    CHECK((dp.a - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("shannon entropy worked examples") {
    Vector a2(2);
    a2 << 0.5, 0.5;
    CHECK(shannon_entropy(a2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    Vector a1(3);
    a1 << 1.0, 0.0, 0.0;
    CHECK(shannon_entropy(a1) == 0.0);
    Vector a3 = Vector::Constant(3, 1.0 / 3.0);
    CHECK(shannon_entropy(a3) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("sub-entropies sum to the entropy") {
    std::mt19937_64 rng(3);
    const Matrix w = random_affinity(6, rng);
    const auto d = dominant_distribution(w);
    const Vector s = sub_entropies(d);
    CHECK(std::abs(s.sum() - shannon_entropy(d.a)) < 1e-12);
    for (int i : d.complement) CHECK(s(i) == 0.0);
    CHECK(s.minCoeff() >= 0.0);
    // -0.5 ln 0.5 for a half-weight vertex
    DominantDistribution half;
    half.a = Vector(2);
    half.a << 0.5, 0.5;
    half.support = {0, 1};
    CHECK(sub_entropies(half)(0) == doctest::Approx(-0.5 * std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("entropy series windows") {
    std::vector<Vector> vecs;
    for (int i = 0; i < 5; ++i) vecs.push_back(Vector::Constant(3, static_cast<double>(i)));
    const auto s = entropy_series(vecs, 10, 12, 3);  // vectors at t = 10..14
    CHECK(s.t == 12);
    CHECK(s.columns.rows() == 3);
    CHECK(s.columns.cols() == 3);
    CHECK(s.columns(0, 0) == 0.0);  // t = 10
    CHECK(s.columns(0, 2) == 2.0);  // t = 12
    const auto w1 = entropy_series(vecs, 10, 10, 1);
    CHECK(w1.columns.cols() == 1);
    CHECK(w1.columns(0, 0) == 0.0);
    CHECK_THROWS_AS(entropy_series(vecs, 10, 11, 3), shape_error);  // would start at t=9
    CHECK_THROWS_AS(entropy_series(vecs, 10, 15, 2), shape_error);  // past the end
}

TEST_CASE("entropy is bounded by log support size") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix w = random_affinity(7, rng);
        const auto d = dominant_distribution(w);
        CHECK(shannon_entropy(d.a) <= std::log(static_cast<double>(d.support.size())) + 1e-9);
    }
}
