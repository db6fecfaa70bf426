#pragma once

#include <string>

#include "nullcone/grid.hpp"

namespace nullcone {

// Plain-text scalar field snapshot:
//   # SPHEREFIELD 1
//   # bandlimit: L
//   # ntheta: N
//   # nphi: M
//   # ordering: row-major, colatitude outer ascending, longitude inner from 0
// followed by one value per line, 17 significant digits.
void write_sphere_field(const std::string& path, const SphereGrid& grid,
                        const Array& values);

struct SphereFieldData {
  int bandlimit = 0;
  int n_theta = 0;
  int n_phi = 0;
  Array values;
};

SphereFieldData read_sphere_field(const std::string& path);

// Shortest-round-trip-style fixed formatting used for all numeric text
// output (17 significant digits, locale-independent).
std::string format_double(double v);

}  // namespace nullcone
