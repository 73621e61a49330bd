#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace drop {

/// Periodic box [-T/2, T/2]^n sampled at N points per axis.
/// Grid nodes are x_j = j*T/N with axis index j in {-N/2+1, ..., N/2};
/// storage is row-major with axis index j mapped to slot j + N/2 - 1.
struct GridSpec {
    int n = 2;        // spatial dimension
    int N = 256;      // points per axis, even, >= 4
    double T = 1.0;   // box side length

    double h() const { return T / N; }
    std::size_t num_nodes() const;
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

/// Real field sampled on the grid nodes. `mask` marks nodes inside the
/// support box Omega (empty mask = everything admissible).
struct Field {
    GridSpec grid;
    std::vector<double> values;
    std::vector<std::uint8_t> mask;  // empty or size N^n, 1 = inside Omega

    bool has_mask() const { return !mask.empty(); }
    bool masked_in(std::size_t idx) const { return mask.empty() || mask[idx] != 0; }
    std::size_t unmasked_count() const;
    void validate() const;
};

/// Fourier coefficients c_k = h^n sum_j u_j exp(-2i pi k.j / N), stored with
/// the same index convention as Field (k in {-N/2+1,...,N/2}^n, row-major).
/// On E_N this Riemann sum equals the integral coefficient c_{k,T} exactly.
struct Spectrum {
    GridSpec grid;
    std::vector<std::complex<double>> coeffs;

    void validate() const;
};

struct structural_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Forward transform. Exact inverse pair with synthesize (up to rounding).
Spectrum analyze(const Field& field);

/// Inverse transform; requires conjugate-symmetric coefficients and throws
/// with the measured violation magnitude otherwise.
Field synthesize(const Spectrum& spectrum);

/// Max |c_k - conj(c_{-k})| over all k (N/2 axes are self-paired).
double spectrum_symmetry_violation(const Spectrum& s);

/// x_j = j*T/N componentwise; j must lie in {-N/2+1,...,N/2}^n.
std::vector<double> node_coordinates(const GridSpec& grid, const std::vector<int>& j);

/// Storage offset of multi-index j (axis values in {-N/2+1,...,N/2}).
std::size_t node_offset(const GridSpec& grid, const std::vector<int>& j);

/// Axis coordinate of storage slot s along one axis: (s - N/2 + 1) * T/N.
inline double axis_coordinate(const GridSpec& grid, int slot) {
    return (slot - grid.N / 2 + 1) * grid.h();
}

/// Integer frequency of storage slot s along one axis: s - N/2 + 1.
inline int axis_frequency(const GridSpec& grid, int slot) { return slot - grid.N / 2 + 1; }

/// Fills `out` (size N^n) with per-node values of fn(x) where x is the node
/// coordinate vector. Row-major traversal, axis 0 slowest.
void fill_nodes(const GridSpec& grid, std::vector<double>& out,
                const std::function<double(const std::vector<double>&)>& fn);

}  // namespace drop
