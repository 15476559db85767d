#include "gritquit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace gq {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    // Golden-ratio spacing keeps distinct (seed, stream) pairs from colliding in seed space.
    std::uint64_t sm = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
    for (auto& word : state_) word = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

namespace {

// 128-layer ziggurat tables (Marsaglia-Tsang layout): layer 127 is the widest strip,
// layer 0 the base rectangle of virtual width q carrying the tail beyond zig_r.
struct ZigTables {
    static constexpr double r = 3.442619855899;
    double wn[128];
    double fn[128];
    std::uint32_t kn[128];

    ZigTables() {
        const double m1 = 2147483648.0;  // 2^31
        double dn = r, tn = r;
        const double vn = 9.91256303526217e-3;  // per-strip area
        const double q = vn / std::exp(-0.5 * dn * dn);
        kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
        kn[1] = 0;
        wn[0] = q / m1;
        wn[127] = dn / m1;
        fn[0] = 1.0;
        fn[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
            kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
            tn = dn;
            fn[i] = std::exp(-0.5 * dn * dn);
            wn[i] = dn / m1;
        }
    }
};

const ZigTables& zig() {
    static const ZigTables tables;
    return tables;
}

}  // namespace

double NormalStream::next() {
    const auto& t = zig();
    const std::uint64_t u = rng_.next_u64();
    const auto hz = static_cast<std::int32_t>(u >> 32);
    const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
    const auto az = static_cast<std::uint32_t>(hz < 0 ? -static_cast<std::int64_t>(hz) : hz);
    if (az < t.kn[iz]) return hz * t.wn[iz];
    return fallback(hz, iz);
}

double NormalStream::fallback(std::int32_t hz, std::uint32_t iz) {
    const auto& t = zig();
    for (;;) {
        double x = hz * t.wn[iz];
        if (iz == 0) {
            // Exact tail beyond r: exponential majorant rejection.
            double y;
            do {
                x = -std::log(rng_.next_unit()) / ZigTables::r;
                y = -std::log(rng_.next_unit());
            } while (y + y < x * x);
            return hz > 0 ? ZigTables::r + x : -(ZigTables::r + x);
        }
        if (t.fn[iz] + rng_.next_unit() * (t.fn[iz - 1] - t.fn[iz]) < std::exp(-0.5 * x * x))
            return x;
        const std::uint64_t u = rng_.next_u64();
        hz = static_cast<std::int32_t>(u >> 32);
        iz = static_cast<std::uint32_t>(hz) & 127u;
        const auto az = static_cast<std::uint32_t>(hz < 0 ? -static_cast<std::int64_t>(hz) : hz);
        if (az < t.kn[iz]) return hz * t.wn[iz];
    }
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_paths(long n, int threads, const std::function<void(long)>& body) {
    const long t = std::min<long>(resolve_threads(threads), std::max<long>(n, 1));
    if (t <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t));
    const long chunk = (n + t - 1) / t;
    for (long k = 0; k < t; ++k) {
        const long lo = k * chunk;
        const long hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (long i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

namespace {

double pairwise_rec(const double* data, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_rec(data, half) + pairwise_rec(data + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_rec(values.data(), values.size());
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace gq
