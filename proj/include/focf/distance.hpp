#pragma once

#include "focf/field.hpp"

namespace focf {

/// Dijkstra distances from `center` to every node on the 8-neighbor graph,
/// edge lengths measured in g (midpoint metric). First-order accurate in h.
Plane grid_distance_map(const MetricField2& g, Node center);

double grid_distance(const MetricField2& g, Node p, Node q);

/// Cheap systole proxy: shortest axis-aligned wrap-around loop (exact for
/// diagonal metrics). Recorded per step.
double systole_upper_bound(const MetricField2& g);

/// Dijkstra-refined systole proxy: shortest wrap-around loop through any node
/// of a sampled set of start rows/columns.
double wrap_systole(const MetricField2& g, int samples = 8);

}  // namespace focf
