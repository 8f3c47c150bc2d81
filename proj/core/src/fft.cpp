#include "conical/fft.hpp"

#include "conical/errors.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace conical {

void fft_pow2(std::vector<cplx>& x) {
    const std::size_t n = x.size();
    if (!is_power_of_two(n))
        throw PreconditionError("fft_pow2: length must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = x[i + k];
                const cplx v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

void ifft_pow2(std::vector<cplx>& x) {
    for (cplx& v : x)
        v = std::conj(v);
    fft_pow2(x);
    const double inv = 1.0 / static_cast<double>(x.size());
    for (cplx& v : x)
        v = std::conj(v) * inv;
}

std::vector<cplx> dft(const std::vector<cplx>& x) {
    const std::size_t n = x.size();
    if (is_power_of_two(n)) {
        std::vector<cplx> out = x;
        fft_pow2(out);
        return out;
    }
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    const double base = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = base * static_cast<double>((j * k) % n);
            acc += x[j] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

} // namespace conical
