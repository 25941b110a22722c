#pragma once

#include <filesystem>

#include "focf/field.hpp"

namespace focf {

/// Binary metric snapshot, format "FOCF1":
///   bytes 0..4   magic "FOCF1"
///   3 x uint64 LE: n (=2), N1, N2
///   2 x float64 LE: L1, L2
///   3 x (N1*N2) float64 LE planes, row-major (i outer, j inner): g11, g12, g22
void write_snapshot(const std::filesystem::path& path, const MetricField2& g);
MetricField2 read_snapshot(const std::filesystem::path& path);

}  // namespace focf
