#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace muskat {

using Complex = std::complex<double>;

// Uniform tensor grid on the d-torus (d = 1 or 2) of side `period`, with
// cached FFTW plans for the nominal resolution n^d and the 3n/2 padded
// resolution used for dealiased pointwise products.
//
// Conventions, fixed across the whole library:
//   * coefficients are stored in FFTW order (k = 0, 1, ..., n/2, -n/2+1, ..., -1
//     per axis), flattened row-major for d = 2;
//   * the transform pair is unit-amplitude: samples(x) = sum_k c_k e^{i k.x'}
//     with x' = (2*pi/period) x, so cos(x) on the default torus has
//     c_{+1} = c_{-1} = 1/2;
//   * real fields keep Hermitian-symmetric coefficients; nothing enforces this
//     at runtime beyond the transforms themselves.
//
// Instances are immutable and shared via shared_ptr (see make_grid).
class TorusGrid {
public:
    TorusGrid(int dim, int n, double period);
    ~TorusGrid();
    TorusGrid(const TorusGrid&) = delete;
    TorusGrid& operator=(const TorusGrid&) = delete;

    int dim() const { return dim_; }
    int n() const { return n_; }
    double period() const { return period_; }
    double dx() const { return period_ / n_; }
    // smallest positive wavenumber 2*pi/period
    double k_min() const { return k_min_; }
    // number of modes / samples, n^dim
    std::size_t size() const { return size_; }
    int n_padded() const { return 3 * n_ / 2; }
    std::size_t padded_size() const { return padded_size_; }

    // integer mode along `axis` for flattened coefficient index `flat`
    int mode(std::size_t flat, int axis) const;
    // physical wavenumber component xi_axis = k_min * mode
    double xi(std::size_t flat, int axis) const { return k_min_ * mode(flat, axis); }
    // |xi| at flattened index (cached)
    double xi_abs(std::size_t flat) const { return xi_abs_[flat]; }
    // coordinate of sample `flat` along `axis`, in [0, period)
    double coord(std::size_t flat, int axis) const;

    // forward: samples (size n^d) -> coefficients (size n^d)
    std::vector<Complex> forward(const std::vector<double>& samples) const;
    // inverse: coefficients -> real samples (imaginary part discarded)
    std::vector<double> inverse(const std::vector<Complex>& coeffs) const;

    // inverse transform onto the 3n/2 padded grid (zero-filled high modes)
    std::vector<double> inverse_padded(const std::vector<Complex>& coeffs) const;
    // forward transform from the padded grid, truncated back to the nominal
    // band; Nyquist modes are zeroed so the retained band is exactly the
    // |k| < n/2 cube
    std::vector<Complex> forward_padded(const std::vector<double>& padded) const;

private:
    struct Plans;
    int dim_, n_;
    double period_, k_min_;
    std::size_t size_, padded_size_;
    std::vector<double> xi_abs_;
    std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const TorusGrid>;

// Validates dim in {1,2}, n a power of two >= 8, period > 0.
GridPtr make_grid(int dim, int n, double period = 6.283185307179586476925286766559);

} // namespace muskat
