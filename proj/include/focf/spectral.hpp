#pragma once

#include <functional>

#include "focf/field.hpp"

namespace focf {

/// Fourier-spectral partial derivative along one axis (exact for band-limited
/// periodic fields). Odd-order derivatives zero the Nyquist mode.
Plane spectral_partial(const Plane& f, const Grid2& grid, int axis, int order = 1);
TensorField spectral_partial(const TensorField& f, int axis, int order = 1);

/// High-order centered finite differences on the periodic grid; the
/// cross-check backend for the spectral operator. accuracy in {2,4,6,8}.
Plane fd_partial(const Plane& f, const Grid2& grid, int axis, int order = 1, int accuracy = 8);

/// Zero all modes with |k-index| > n/3 on both axes (2/3 dealiasing rule).
Plane dealias_two_thirds(const Plane& f, const Grid2& grid);
void dealias_two_thirds(TensorField& f);

/// Apply a function of the flat Laplacian symbol: returns ifft( m(|k|^2) * fft(f) ),
/// where |k|^2 = k1^2 + k2^2 on the chart. Used by the IMEX stepper.
Plane apply_laplacian_symbol(const Plane& f, const Grid2& grid,
                             const std::function<double(double)>& mult);

/// Flat-chart Laplacian and bilaplacian (constant-coefficient, spectral).
Plane flat_laplacian(const Plane& f, const Grid2& grid);
Plane flat_bilaplacian(const Plane& f, const Grid2& grid);

/// Translate a plane by whole nodes (periodic).
Plane translate(const Plane& f, int di, int dj);

}  // namespace focf
