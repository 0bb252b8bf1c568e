#include "fft.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>

namespace sensejam {

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace {

struct Twiddles {
    std::vector<cplx> w;       // w[k] = e^{-j2πk/N}, k < N/2
    std::vector<uint32_t> rev; // bit-reversal permutation
};

const Twiddles& twiddles_for(size_t n) {
    static std::mutex mu;
    static std::unordered_map<size_t, Twiddles> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Twiddles t;
    t.w.resize(n / 2);
    for (size_t k = 0; k < n / 2; ++k) {
        const double ph = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        t.w[k] = cis(ph);
    }
    t.rev.resize(n);
    uint32_t bits = 0;
    while ((1u << bits) < n) ++bits;
    for (size_t i = 0; i < n; ++i) {
        uint32_t r = 0;
        for (uint32_t b = 0; b < bits; ++b)
            if (i & (1u << b)) r |= 1u << (bits - 1 - b);
        t.rev[i] = r;
    }
    return cache.emplace(n, std::move(t)).first->second;
}

void fft_pow2(std::span<cplx> a, bool inverse) {
    const size_t n = a.size();
    const Twiddles& t = twiddles_for(n);
    for (size_t i = 0; i < n; ++i) {
        const uint32_t r = t.rev[i];
        if (i < r) std::swap(a[i], a[r]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const size_t stride = n / len;
        for (size_t base = 0; base < n; base += len) {
            for (size_t k = 0; k < len / 2; ++k) {
                cplx w = t.w[k * stride];
                if (inverse) w = std::conj(w);
                const cplx u = a[base + k];
                const cplx v = a[base + k + len / 2] * w;
                a[base + k] = u + v;
                a[base + k + len / 2] = u - v;
            }
        }
    }
}

// Direct DFT for non power-of-two sizes (slow-time axis can be arbitrary).
void dft_direct(std::span<cplx> a, bool inverse) {
    const size_t n = a.size();
    std::vector<cplx> out(n, cplx{0.0, 0.0});
    const double sign = inverse ? 1.0 : -1.0;
    for (size_t k = 0; k < n; ++k) {
        for (size_t m = 0; m < n; ++m) {
            const double ph = sign * 2.0 * kPi * static_cast<double>(k * m % n) / static_cast<double>(n);
            out[k] += a[m] * cis(ph);
        }
    }
    std::copy(out.begin(), out.end(), a.begin());
}

}  // namespace

void fft_forward(std::span<cplx> data) {
    if (data.size() <= 1) return;
    if (is_pow2(data.size())) fft_pow2(data, false);
    else dft_direct(data, false);
}

void fft_inverse(std::span<cplx> data) {
    if (data.size() <= 1) return;
    if (is_pow2(data.size())) fft_pow2(data, true);
    else dft_direct(data, true);
}

void fft_forward_unitary(std::span<cplx> data) {
    fft_forward(data);
    const double s = 1.0 / std::sqrt(static_cast<double>(data.size()));
    for (auto& x : data) x *= s;
}

void fft_inverse_unitary(std::span<cplx> data) {
    fft_inverse(data);
    const double s = 1.0 / std::sqrt(static_cast<double>(data.size()));
    for (auto& x : data) x *= s;
}

}  // namespace sensejam
