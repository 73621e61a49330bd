#pragma once

#include <string>

#include "drop/grid.hpp"

namespace drop {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "PFLD" binary field format, version 1, little-endian:
//   magic 0x50 0x46 0x4C 0x44 | u32 version | u32 n | u32 N | f64 T |
//   u8 mask flag | N^n f64 values (row-major) | [N^n u8 mask bytes]
void write_pfld(const Field& field, const std::string& path);
Field read_pfld(const std::string& path);

/// 8-bit binary PGM (P5), pixel = round(255 * clamp(u, 0, 1)). n = 2 only.
void write_pgm(const Field& field, const std::string& path);

}  // namespace drop
