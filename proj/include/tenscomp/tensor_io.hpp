#pragma once

// Tensor files.
//
// Text:   line 1 = N, line 2 = p_1 ... p_N, then one value per line in the
//         mode-1-fastest flat order.
// Binary: the 4 magic bytes "TLT1", a little-endian uint64 N, N little-endian
//         uint64 dimensions, then the values as little-endian IEEE-754
//         binary64 in the same flat order.

#include "tenscomp/tensor.hpp"

#include <filesystem>
#include <iosfwd>

namespace tenscomp {

void write_tensor_text(std::ostream &os, const DenseTensor &t);
DenseTensor read_tensor_text(std::istream &is);

void write_tensor_binary(std::ostream &os, const DenseTensor &t);
DenseTensor read_tensor_binary(std::istream &is);

/// Writes text unless the path ends in ".bin".
void save_tensor(const std::filesystem::path &path, const DenseTensor &t);
/// Detects the binary format by its magic bytes.
DenseTensor load_tensor(const std::filesystem::path &path);

} // namespace tenscomp
