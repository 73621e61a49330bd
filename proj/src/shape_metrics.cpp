#include "drop/shape_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace drop {

namespace {

constexpr double kPi = 3.14159265358979323846;

double pow_int(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

// minimal-image displacement on the torus, in units of h
double wrap_delta(double d, int N) {
    if (d > N / 2.0) return d - N;
    if (d < -N / 2.0) return d + N;
    return d;
}

}  // namespace

std::vector<std::uint8_t> threshold_set(const Field& field, double level) {
    field.validate();
    if (!(level > 0.0) || !(level < 1.0))
        throw structural_error("threshold_set: level must lie in (0, 1)");
    std::vector<std::uint8_t> bw(field.values.size());
    for (std::size_t i = 0; i < bw.size(); ++i) bw[i] = field.values[i] >= level ? 1 : 0;
    return bw;
}

LabelResult connected_components(const std::vector<std::uint8_t>& bw, const GridSpec& grid) {
    grid.validate();
    const std::size_t total = grid.num_nodes();
    if (bw.size() != total) throw structural_error("connected_components: size mismatch");

    LabelResult out;
    out.grid = grid;
    out.labels.assign(total, 0);

    const int n = grid.n, N = grid.N;
    std::vector<std::size_t> axis_stride(n);
    axis_stride[n - 1] = 1;
    for (int d = n - 2; d >= 0; --d) axis_stride[d] = axis_stride[d + 1] * N;

    std::vector<std::size_t> stack;
    std::vector<int> digits(n);
    for (std::size_t seed = 0; seed < total; ++seed) {
        if (!bw[seed] || out.labels[seed] != 0) continue;
        const int label = ++out.count;
        out.labels[seed] = label;
        stack.assign(1, seed);
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            // decode digits of cur
            std::size_t rem = cur;
            for (int d = 0; d < n; ++d) {
                digits[d] = static_cast<int>(rem / axis_stride[d]);
                rem %= axis_stride[d];
            }
            for (int d = 0; d < n; ++d) {
                for (int dir = -1; dir <= 1; dir += 2) {
                    const int nd = (digits[d] + dir + N) % N;
                    const std::size_t nb = cur + (nd - digits[d]) * axis_stride[d];
                    if (bw[nb] && out.labels[nb] == 0) {
                        out.labels[nb] = label;
                        stack.push_back(nb);
                    }
                }
            }
        }
    }
    return out;
}

namespace {

struct ComponentPixels {
    std::vector<std::size_t> indices;
    std::vector<double> centroid_slots;  // unwrapped mean slot per axis
};

// Unwrapped centroid: accumulate minimal-image offsets relative to the first
// pixel so components crossing the periodic boundary keep a single center.
ComponentPixels collect_component(const LabelResult& labels, int id) {
    const GridSpec& g = labels.grid;
    const int n = g.n, N = g.N;
    ComponentPixels cp;
    std::vector<double> acc(n, 0.0);
    std::vector<int> first(n, 0), digits(n);
    bool have_first = false;
    std::vector<std::size_t> axis_stride(n);
    axis_stride[n - 1] = 1;
    for (int d = n - 2; d >= 0; --d) axis_stride[d] = axis_stride[d + 1] * N;

    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        if (labels.labels[i] != id) continue;
        std::size_t rem = i;
        for (int d = 0; d < n; ++d) {
            digits[d] = static_cast<int>(rem / axis_stride[d]);
            rem %= axis_stride[d];
        }
        if (!have_first) {
            first = digits;
            have_first = true;
        }
        cp.indices.push_back(i);
        for (int d = 0; d < n; ++d)
            acc[d] += first[d] + wrap_delta(static_cast<double>(digits[d] - first[d]), N);
    }
    if (cp.indices.empty()) throw structural_error("component id not present");
    cp.centroid_slots.resize(n);
    for (int d = 0; d < n; ++d) cp.centroid_slots[d] = acc[d] / cp.indices.size();
    return cp;
}

}  // namespace

std::pair<double, double> ball_distance(const LabelResult& labels, int id) {
    const GridSpec& g = labels.grid;
    if (g.n != 2) throw structural_error("ball_distance: n = 2 only");
    const int N = g.N;
    const double h = g.h();
    ComponentPixels cp = collect_component(labels, id);

    const double area = cp.indices.size() * h * h;
    const double r = std::sqrt(area / kPi);
    const double ci = cp.centroid_slots[0], cj = cp.centroid_slots[1];

    // symmetric difference against the rasterized equal-area disk
    std::size_t sym = 0;
    for (int i = 0; i < N; ++i) {
        const double di = wrap_delta(i - ci, N) * h;
        for (int j = 0; j < N; ++j) {
            const double dj = wrap_delta(j - cj, N) * h;
            const bool in_disk = di * di + dj * dj <= r * r;
            const bool in_comp = labels.labels[static_cast<std::size_t>(i) * N + j] == id;
            sym += (in_disk != in_comp);
        }
    }

    // boundary pixels: component pixels with a non-component 4-neighbor
    double haus = 0.0;
    for (std::size_t idx : cp.indices) {
        const int i = static_cast<int>(idx) / N;
        const int j = static_cast<int>(idx) % N;
        bool boundary = false;
        const int ni[4] = {(i + 1) % N, (i - 1 + N) % N, i, i};
        const int nj[4] = {j, j, (j + 1) % N, (j - 1 + N) % N};
        for (int t = 0; t < 4 && !boundary; ++t)
            boundary = labels.labels[static_cast<std::size_t>(ni[t]) * N + nj[t]] != id;
        if (!boundary) continue;
        const double di = wrap_delta(i - ci, N) * h;
        const double dj = wrap_delta(j - cj, N) * h;
        haus = std::max(haus, std::abs(std::sqrt(di * di + dj * dj) - r));
    }
    return {sym * h * h, haus};
}

ShapeReport analyze_shape(const Field& field, double level) {
    if (field.grid.n != 2) throw structural_error("analyze_shape: n = 2 only");
    const int N = field.grid.N;
    const double h = field.grid.h();

    ShapeReport rep;
    rep.threshold = level;
    const auto bw = threshold_set(field, level);
    const LabelResult labels = connected_components(bw, field.grid);

    for (int id = 1; id <= labels.count; ++id) {
        ComponentPixels cp = collect_component(labels, id);
        ComponentMetrics m;
        m.id = id;
        m.pixel_count = cp.indices.size();
        m.area = m.pixel_count * h * h;
        m.centroid.resize(2);
        for (int d = 0; d < 2; ++d) {
            double x = axis_coordinate(field.grid, 0) + cp.centroid_slots[d] * h;
            const double half = field.grid.T / 2.0;
            while (x >= half) x -= field.grid.T;
            while (x < -half) x += field.grid.T;
            m.centroid[d] = x;
        }
        // interface-edge-count perimeter (Manhattan bias documented)
        std::size_t edges = 0;
        for (std::size_t idx : cp.indices) {
            const int i = static_cast<int>(idx) / N;
            const int j = static_cast<int>(idx) % N;
            const int ni[4] = {(i + 1) % N, (i - 1 + N) % N, i, i};
            const int nj[4] = {j, j, (j + 1) % N, (j - 1 + N) % N};
            for (int t = 0; t < 4; ++t)
                edges += labels.labels[static_cast<std::size_t>(ni[t]) * N + nj[t]] != id;
        }
        m.perimeter = edges * h;
        m.isoperimetric_ratio = m.perimeter * m.perimeter / (4.0 * kPi * m.area);
        auto [sym, haus] = ball_distance(labels, id);
        m.sym_diff_to_best_ball = sym;
        m.hausdorff_to_best_ball = haus;
        rep.components.push_back(m);
        rep.total_area += m.area;
        rep.aggregate_sym_diff += sym;
        rep.aggregate_hausdorff = std::max(rep.aggregate_hausdorff, haus);
    }
    return rep;
}

}  // namespace drop
