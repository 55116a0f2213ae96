#include "muskat/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <string>

#include "muskat/errors.hpp"

namespace muskat {

namespace {

// index -> integer mode along one axis of length n
inline int axis_mode(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }

struct FftBuffers {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    void init(int dim, int n) {
        std::size_t sz = 1;
        for (int a = 0; a < dim; ++a) sz *= static_cast<std::size_t>(n);
        in = fftw_alloc_complex(sz);
        out = fftw_alloc_complex(sz);
        if (dim == 1) {
            fwd = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
        } else {
            fwd = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
    }
    void destroy() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (in) fftw_free(in);
        if (out) fftw_free(out);
    }
};

} // namespace

// Plans own scratch buffers reused by every transform; the library is
// single-threaded by design and transforms never run concurrently.
struct TorusGrid::Plans {
    mutable FftBuffers nominal;
    mutable FftBuffers padded;
};

TorusGrid::TorusGrid(int dim, int n, double period)
    : dim_(dim), n_(n), period_(period),
      k_min_(2.0 * M_PI / period),
      size_(1), padded_size_(1),
      plans_(std::make_unique<Plans>()) {
    for (int a = 0; a < dim_; ++a) {
        size_ *= static_cast<std::size_t>(n_);
        padded_size_ *= static_cast<std::size_t>(n_padded());
    }
    xi_abs_.resize(size_);
    for (std::size_t i = 0; i < size_; ++i) {
        double s = 0.0;
        for (int a = 0; a < dim_; ++a) {
            double x = xi(i, a);
            s += x * x;
        }
        xi_abs_[i] = std::sqrt(s);
    }
    plans_->nominal.init(dim_, n_);
    plans_->padded.init(dim_, n_padded());
}

TorusGrid::~TorusGrid() {
    plans_->nominal.destroy();
    plans_->padded.destroy();
}

int TorusGrid::mode(std::size_t flat, int axis) const {
    int idx;
    if (dim_ == 1) {
        idx = static_cast<int>(flat);
    } else {
        idx = axis == 0 ? static_cast<int>(flat) / n_ : static_cast<int>(flat) % n_;
    }
    return axis_mode(idx, n_);
}

double TorusGrid::coord(std::size_t flat, int axis) const {
    int idx;
    if (dim_ == 1) {
        idx = static_cast<int>(flat);
    } else {
        idx = axis == 0 ? static_cast<int>(flat) / n_ : static_cast<int>(flat) % n_;
    }
    return dx() * idx;
}

std::vector<Complex> TorusGrid::forward(const std::vector<double>& samples) const {
    auto& b = plans_->nominal;
    for (std::size_t i = 0; i < size_; ++i) {
        b.in[i][0] = samples[i];
        b.in[i][1] = 0.0;
    }
    fftw_execute(b.fwd);
    std::vector<Complex> c(size_);
    const double scale = 1.0 / static_cast<double>(size_);
    for (std::size_t i = 0; i < size_; ++i)
        c[i] = Complex(b.out[i][0] * scale, b.out[i][1] * scale);
    return c;
}

std::vector<double> TorusGrid::inverse(const std::vector<Complex>& coeffs) const {
    auto& b = plans_->nominal;
    for (std::size_t i = 0; i < size_; ++i) {
        b.in[i][0] = coeffs[i].real();
        b.in[i][1] = coeffs[i].imag();
    }
    fftw_execute(b.bwd);
    std::vector<double> s(size_);
    for (std::size_t i = 0; i < size_; ++i) s[i] = b.out[i][0];
    return s;
}

std::vector<double> TorusGrid::inverse_padded(const std::vector<Complex>& coeffs) const {
    auto& b = plans_->padded;
    const int np = n_padded();
    std::memset(b.in, 0, sizeof(fftw_complex) * padded_size_);
    for (std::size_t i = 0; i < size_; ++i) {
        std::size_t ip = 0;
        for (int a = 0; a < dim_; ++a) {
            int k = mode(i, a);
            int idx = k >= 0 ? k : k + np;
            ip = ip * static_cast<std::size_t>(np) + static_cast<std::size_t>(idx);
        }
        b.in[ip][0] = coeffs[i].real();
        b.in[ip][1] = coeffs[i].imag();
    }
    fftw_execute(b.bwd);
    std::vector<double> s(padded_size_);
    for (std::size_t i = 0; i < padded_size_; ++i) s[i] = b.out[i][0];
    return s;
}

std::vector<Complex> TorusGrid::forward_padded(const std::vector<double>& padded) const {
    auto& b = plans_->padded;
    const int np = n_padded();
    for (std::size_t i = 0; i < padded_size_; ++i) {
        b.in[i][0] = padded[i];
        b.in[i][1] = 0.0;
    }
    fftw_execute(b.fwd);
    const double scale = 1.0 / static_cast<double>(padded_size_);
    std::vector<Complex> c(size_);
    for (std::size_t i = 0; i < size_; ++i) {
        bool nyquist = false;
        std::size_t ip = 0;
        for (int a = 0; a < dim_; ++a) {
            int k = mode(i, a);
            if (k == n_ / 2) nyquist = true;
            int idx = k >= 0 ? k : k + np;
            ip = ip * static_cast<std::size_t>(np) + static_cast<std::size_t>(idx);
        }
        c[i] = nyquist ? Complex(0.0, 0.0)
                       : Complex(b.out[ip][0] * scale, b.out[ip][1] * scale);
    }
    return c;
}

GridPtr make_grid(int dim, int n, double period) {
    std::vector<std::string> bad;
    if (dim != 1 && dim != 2)
        bad.push_back("grid.dim must be 1 or 2, got " + std::to_string(dim));
    if (n < 8 || (n & (n - 1)) != 0)
        bad.push_back("grid.n must be a power of two >= 8, got " + std::to_string(n));
    if (!(period > 0.0))
        bad.push_back("grid.period must be positive, got " + std::to_string(period));
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return std::make_shared<const TorusGrid>(dim, n, period);
}

} // namespace muskat
