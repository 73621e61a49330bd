#include "drop/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace drop {

std::size_t GridSpec::num_nodes() const {
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(N);
    return total;
}

void GridSpec::validate() const {
    if (n < 1) throw structural_error("GridSpec: dimension n must be >= 1");
    if (N < 4 || N % 2 != 0) throw structural_error("GridSpec: N must be even and >= 4");
    if (!(T > 0.0)) throw structural_error("GridSpec: T must be positive");
}

std::size_t Field::unmasked_count() const {
    if (mask.empty()) return values.size();
    std::size_t c = 0;
    for (auto m : mask) c += (m != 0);
    return c;
}

void Field::validate() const {
    grid.validate();
    if (values.size() != grid.num_nodes())
        throw structural_error("Field: values length " + std::to_string(values.size()) +
                               " does not match grid with N^n = " + std::to_string(grid.num_nodes()));
    if (!mask.empty() && mask.size() != values.size())
        throw structural_error("Field: mask length does not match values");
    for (double v : values)
        if (!std::isfinite(v)) throw structural_error("Field: non-finite value");
}

void Spectrum::validate() const {
    grid.validate();
    if (coeffs.size() != grid.num_nodes())
        throw structural_error("Spectrum: coeffs length does not match grid");
}

std::size_t node_offset(const GridSpec& grid, const std::vector<int>& j) {
    if (static_cast<int>(j.size()) != grid.n)
        throw structural_error("node index rank does not match grid dimension");
    std::size_t off = 0;
    for (int d = 0; d < grid.n; ++d) {
        if (j[d] < -grid.N / 2 + 1 || j[d] > grid.N / 2)
            throw std::out_of_range("node index component " + std::to_string(j[d]) +
                                    " outside {-N/2+1,...,N/2} with N = " + std::to_string(grid.N));
        off = off * grid.N + static_cast<std::size_t>(j[d] + grid.N / 2 - 1);
    }
    return off;
}

std::vector<double> node_coordinates(const GridSpec& grid, const std::vector<int>& j) {
    node_offset(grid, j);  // range check
    std::vector<double> x(grid.n);
    for (int d = 0; d < grid.n; ++d) x[d] = j[d] * grid.h();
    return x;
}

void fill_nodes(const GridSpec& grid, std::vector<double>& out,
                const std::function<double(const std::vector<double>&)>& fn) {
    grid.validate();
    const std::size_t total = grid.num_nodes();
    out.resize(total);
    std::vector<int> slot(grid.n, 0);
    std::vector<double> x(grid.n);
    for (std::size_t idx = 0; idx < total; ++idx) {
        for (int d = 0; d < grid.n; ++d) x[d] = axis_coordinate(grid, slot[d]);
        out[idx] = fn(x);
        for (int d = grid.n - 1; d >= 0; --d) {
            if (++slot[d] < grid.N) break;
            slot[d] = 0;
        }
    }
}

namespace {

// One cached c2c plan (+ aligned buffer) per thread, per (rank, N, sign).
// FFTW planning is not thread-safe; execution on private buffers is.
struct PlanSlot {
    fftw_plan plan = nullptr;
    fftw_complex* buf = nullptr;
    std::size_t size = 0;
    ~PlanSlot() {
        if (plan) fftw_destroy_plan(plan);
        if (buf) fftw_free(buf);
    }
};

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

PlanSlot& plan_for(int rank, int N, int sign) {
    thread_local std::map<std::tuple<int, int, int>, PlanSlot> cache;
    PlanSlot& slot = cache[{rank, N, sign}];
    if (!slot.plan) {
        std::size_t total = 1;
        for (int d = 0; d < rank; ++d) total *= static_cast<std::size_t>(N);
        slot.size = total;
        slot.buf = fftw_alloc_complex(total);
        std::vector<int> dims(rank, N);
        std::lock_guard<std::mutex> lock(planner_mutex());
        slot.plan = fftw_plan_dft(rank, dims.data(), slot.buf, slot.buf, sign, FFTW_ESTIMATE);
        if (!slot.plan) throw std::runtime_error("fftw_plan_dft failed");
    }
    return slot;
}

// Circular shift from storage order (axis slot = j + N/2 - 1) to natural DFT
// order (axis slot = j mod N), or back. Shift amount per axis is N/2 - 1.
template <typename Src, typename Put>
void shifted_copy(int rank, int N, std::size_t total, bool to_natural, const Src& src, const Put& put) {
    const int shift = N / 2 - 1;
    std::vector<int> slot(rank, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t dst = 0;
        for (int d = 0; d < rank; ++d) {
            int s = to_natural ? (slot[d] - shift + N) % N : (slot[d] + shift) % N;
            dst = dst * N + static_cast<std::size_t>(s);
        }
        put(dst, src(idx));
        for (int d = rank - 1; d >= 0; --d) {
            if (++slot[d] < N) break;
            slot[d] = 0;
        }
    }
}

}  // namespace

Spectrum analyze(const Field& field) {
    field.validate();
    const GridSpec& g = field.grid;
    const std::size_t total = g.num_nodes();
    PlanSlot& slot = plan_for(g.n, g.N, FFTW_FORWARD);

    shifted_copy(
        g.n, g.N, total, /*to_natural=*/true, [&](std::size_t i) { return field.values[i]; },
        [&](std::size_t dst, double v) {
            slot.buf[dst][0] = v;
            slot.buf[dst][1] = 0.0;
        });
    fftw_execute(slot.plan);

    double hn = 1.0;
    for (int d = 0; d < g.n; ++d) hn *= g.h();

    Spectrum out;
    out.grid = g;
    out.coeffs.resize(total);
    // coefficient for frequency k lives at natural slot k mod N per axis;
    // move it to storage slot k + N/2 - 1 (same shift as above, inverted).
    shifted_copy(
        g.n, g.N, total, /*to_natural=*/true,
        [&](std::size_t i) { return i; },  // i = storage index of k
        [&](std::size_t nat, std::size_t storage) {
            out.coeffs[storage] = hn * std::complex<double>(slot.buf[nat][0], slot.buf[nat][1]);
        });
    return out;
}

double spectrum_symmetry_violation(const Spectrum& s) {
    const GridSpec& g = s.grid;
    const std::size_t total = g.num_nodes();
    std::vector<int> slot(g.n, 0);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t conj_idx = 0;
        for (int d = 0; d < g.n; ++d) {
            int k = slot[d] - g.N / 2 + 1;
            int kc = (k == g.N / 2) ? k : -k;  // -N/2 wraps to the self-paired N/2 axis
            conj_idx = conj_idx * g.N + static_cast<std::size_t>(kc + g.N / 2 - 1);
        }
        worst = std::max(worst, std::abs(s.coeffs[idx] - std::conj(s.coeffs[conj_idx])));
        for (int d = g.n - 1; d >= 0; --d) {
            if (++slot[d] < g.N) break;
            slot[d] = 0;
        }
    }
    return worst;
}

Field synthesize(const Spectrum& spectrum) {
    spectrum.validate();
    const GridSpec& g = spectrum.grid;
    const std::size_t total = g.num_nodes();

    double scale = 0.0;
    for (const auto& c : spectrum.coeffs) scale = std::max(scale, std::abs(c));
    const double violation = spectrum_symmetry_violation(spectrum);
    if (violation > 1e-8 * std::max(scale, 1e-300))
        throw structural_error("synthesize: coefficients not conjugate-symmetric, violation magnitude " +
                               std::to_string(violation));

    PlanSlot& slot = plan_for(g.n, g.N, FFTW_BACKWARD);
    shifted_copy(
        g.n, g.N, total, /*to_natural=*/true, [&](std::size_t i) { return spectrum.coeffs[i]; },
        [&](std::size_t dst, std::complex<double> c) {
            slot.buf[dst][0] = c.real();
            slot.buf[dst][1] = c.imag();
        });
    fftw_execute(slot.plan);

    double Tn = 1.0;
    for (int d = 0; d < g.n; ++d) Tn *= g.T;

    Field out;
    out.grid = g;
    out.values.resize(total);
    shifted_copy(
        g.n, g.N, total, /*to_natural=*/true,
        [&](std::size_t i) { return i; },
        [&](std::size_t nat, std::size_t storage) { out.values[storage] = slot.buf[nat][0] / Tn; });
    return out;
}

}  // namespace drop
