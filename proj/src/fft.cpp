// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 loadrec contributors

#include "loadrec/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <unordered_map>

namespace loadrec::fft {

namespace {

// FFTW plan creation is not thread-safe; executing a plan on fresh arrays is.
// Plans are cached per size with FFTW_UNALIGNED so they can run on any buffer.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan r2c_plan(int n) {
    static std::unordered_map<int, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> in(static_cast<size_t>(n));
    std::vector<std::complex<double>> out(static_cast<size_t>(n) / 2 + 1);
    fftw_plan p = fftw_plan_dft_r2c_1d(
        n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(n, p);
    return p;
}

fftw_plan c2c_plan(int n, bool inverse) {
    static std::unordered_map<long long, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    long long key = static_cast<long long>(n) * 2 + (inverse ? 1 : 0);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> buf(static_cast<size_t>(n));
    fftw_plan p = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(buf.data()),
        reinterpret_cast<fftw_complex*>(buf.data()),
        inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

} // namespace

std::vector<std::complex<double>> rfft(const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> in(x.data(), x.data() + n);
    std::vector<std::complex<double>> out(static_cast<size_t>(n) / 2 + 1);
    fftw_execute_dft_r2c(r2c_plan(n), in.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

void transform(std::vector<std::complex<double>>& data, bool inverse) {
    const int n = static_cast<int>(data.size());
    fftw_execute_dft(c2c_plan(n, inverse),
                     reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(data.data()));
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& c : data) c *= scale;
    }
}

} // namespace loadrec::fft
