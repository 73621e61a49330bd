#include "drop/pfld.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace drop {

static_assert(std::endian::native == std::endian::little,
              "PFLD writer assumes a little-endian host");

namespace {

template <typename T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is, const std::string& what) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw io_error("PFLD: truncated file while reading " + what);
    return v;
}

constexpr char kMagic[4] = {0x50, 0x46, 0x4C, 0x44};

}  // namespace

void write_pfld(const Field& field, const std::string& path) {
    field.validate();
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error("PFLD: cannot open for writing: " + path);
    os.write(kMagic, 4);
    put<std::uint32_t>(os, 1u);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(field.grid.n));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(field.grid.N));
    put<double>(os, field.grid.T);
    put<std::uint8_t>(os, field.has_mask() ? 1 : 0);
    os.write(reinterpret_cast<const char*>(field.values.data()),
             static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (field.has_mask())
        os.write(reinterpret_cast<const char*>(field.mask.data()),
                 static_cast<std::streamsize>(field.mask.size()));
    if (!os) throw io_error("PFLD: write failed: " + path);
}

Field read_pfld(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("PFLD: cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw io_error("PFLD: bad magic in " + path);
    const auto version = get<std::uint32_t>(is, "version");
    if (version != 1u)
        throw io_error("PFLD: unsupported version " + std::to_string(version) + " in " + path);
    Field f;
    f.grid.n = static_cast<int>(get<std::uint32_t>(is, "n"));
    f.grid.N = static_cast<int>(get<std::uint32_t>(is, "N"));
    f.grid.T = get<double>(is, "T");
    const auto mask_flag = get<std::uint8_t>(is, "mask flag");
    f.grid.validate();
    const std::size_t total = f.grid.num_nodes();
    f.values.resize(total);
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(total * sizeof(double)));
    if (!is) throw io_error("PFLD: truncated values in " + path);
    if (mask_flag) {
        f.mask.resize(total);
        is.read(reinterpret_cast<char*>(f.mask.data()), static_cast<std::streamsize>(total));
        if (!is) throw io_error("PFLD: truncated mask in " + path);
    }
    f.validate();
    return f;
}

void write_pgm(const Field& field, const std::string& path) {
    field.validate();
    if (field.grid.n != 2) throw io_error("PGM output requires n = 2");
    const int N = field.grid.N;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw io_error("PGM: cannot open for writing: " + path);
    os << "P5\n" << N << " " << N << "\n255\n";
    std::vector<unsigned char> row(N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            double v = field.values[static_cast<std::size_t>(i) * N + j];
            v = std::clamp(v, 0.0, 1.0);
            row[j] = static_cast<unsigned char>(std::lround(255.0 * v));
        }
        os.write(reinterpret_cast<const char*>(row.data()), N);
    }
    if (!os) throw io_error("PGM: write failed: " + path);
}

}  // namespace drop
