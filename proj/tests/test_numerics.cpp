#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "gritquit/maxima.hpp"
#include "gritquit/numerics.hpp"

using namespace gq;

TEST_CASE("splitmix64 reproduces the reference stream") {
    std::uint64_t state = 0;
    CHECK(splitmix64(state) == 0xE220A8397B1DCDAFULL);
    CHECK(splitmix64(state) == 0x6E789E6AA1B965F4ULL);
    CHECK(splitmix64(state) == 0x06C45D188009454FULL);
}

TEST_CASE("rng streams are deterministic and decorrelated") {
    Rng a(42, 0), b(42, 0), c(42, 1);
    bool all_equal = true, any_equal = false;
    for (int i = 0; i < 64; ++i) {
        const auto x = a.next_u64();
        const auto y = b.next_u64();
        const auto z = c.next_u64();
        all_equal = all_equal && (x == y);
        any_equal = any_equal || (x == z);
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal);
}

TEST_CASE("next_unit stays inside the half-open unit interval") {
    Rng r(7, 3);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.next_unit();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("normal sampler matches the standard normal law") {
    NormalStream ns(987654321, 0);
    const long n = 2000000;
    double sum = 0.0, sum2 = 0.0, sum3 = 0.0, sum4 = 0.0;
    long tail_layer = 0;  // |x| beyond the ziggurat base layer
    long tail_far = 0;    // |x| > 4.5, exercises the wedge/tail path deep in
    for (long i = 0; i < n; ++i) {
        const double x = ns.next();
        sum += x;
        sum2 += x * x;
        sum3 += x * x * x;
        sum4 += x * x * x * x;
        if (std::abs(x) > 3.442619855899) ++tail_layer;
        if (std::abs(x) > 4.5) ++tail_far;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / double(n)));
    CHECK(std::abs(sum3 / n) < 0.01);
    CHECK(std::abs(sum4 / n - 3.0) < 0.05);
    // Expected tail mass beyond the base layer: 2*Phi(-3.4426..) ~ 5.755e-4.
    const double expect_layer = 2.0 * normal_cdf(-3.442619855899) * n;
    CHECK(std::abs(tail_layer - expect_layer) < 5.0 * std::sqrt(expect_layer));
    const double expect_far = 2.0 * normal_cdf(-4.5) * n;  // ~ 6.8 draws
    CHECK(tail_far >= 1);
    CHECK(tail_far < expect_far + 5.0 * std::sqrt(expect_far) + 10.0);
}

TEST_CASE("normal sampler passes a fixed-bin chi-square test") {
    NormalStream ns(20240601, 5);
    const long n = 2000000;
    // 26 bins: (-inf,-3], 24 uniform bins on [-3,3], [3,inf).
    const int inner = 24;
    std::vector<long> counts(inner + 2, 0);
    for (long i = 0; i < n; ++i) {
        const double x = ns.next();
        if (x <= -3.0)
            ++counts[0];
        else if (x >= 3.0)
            ++counts[inner + 1];
        else
            ++counts[1 + int((x + 3.0) / 0.25)];
    }
    double chi2 = 0.0;
    auto expect = [&](int k) {
        if (k == 0) return normal_cdf(-3.0) * n;
        if (k == inner + 1) return normal_cdf(-3.0) * n;
        const double lo = -3.0 + 0.25 * (k - 1), hi = lo + 0.25;
        return (normal_cdf(hi) - normal_cdf(lo)) * n;
    };
    for (int k = 0; k < inner + 2; ++k) {
        const double e = expect(k);
        chi2 += (counts[k] - e) * (counts[k] - e) / e;
    }
    // 25 dof: mean 25, sd ~ 7.1; anything under 80 is unremarkable.
    CHECK(chi2 < 80.0);
}

TEST_CASE("normal streams are reproducible per (seed, stream)") {
    NormalStream a(5, 9), b(5, 9), c(5, 10);
    bool same = true, differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double x = a.next(), y = b.next(), z = c.next();
        same = same && (x == y);
        differs = differs || (x != z);
    }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("pairwise_sum is exact on integers and stable on noise") {
    std::vector<double> ints(10001);
    std::iota(ints.begin(), ints.end(), -5000.0);
    CHECK(pairwise_sum(ints) == 0.0);

    Rng r(11, 0);
    std::vector<double> xs(250007);
    long double ref = 0.0L;
    for (auto& x : xs) {
        x = (r.next_unit() - 0.5) * 1e6;
        ref += static_cast<long double>(x);
    }
    const double got = pairwise_sum(xs);
    CHECK(std::abs(got - double(ref)) <= 1e-9 * (std::abs(double(ref)) + 1e6));

    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    CHECK(pairwise_sum(std::vector<double>{3.25}) == 3.25);
}

TEST_CASE("adaptive_simpson hits known integrals") {
    const double third = adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
    CHECK(third == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const double two =
        adaptive_simpson([](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846,
                         1e-12);
    CHECK(two == doctest::Approx(2.0).epsilon(1e-10));
    const double mass = adaptive_simpson(
        [](double x) {
            return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
        },
        -8.0, 8.0, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("parallel_paths covers every index exactly once, any thread count") {
    const long n = 10007;
    for (int threads : {1, 2, 4, 7}) {
        std::vector<std::atomic<int>> hits(n);
        for (auto& h : hits) h.store(0);
        parallel_paths(n, threads, [&](long i) { hits[i].fetch_add(1); });
        bool ok = true;
        for (long i = 0; i < n; ++i) ok = ok && hits[i].load() == 1;
        CHECK(ok);
    }
}

TEST_CASE("resolve_threads maps zero to a positive auto value") {
    CHECK(resolve_threads(0) >= 1);
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(1) == 1);
}
