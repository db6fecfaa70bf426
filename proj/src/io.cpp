#include "nullcone/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nullcone {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_sphere_field(const std::string& path, const SphereGrid& grid,
                        const Array& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "# SPHEREFIELD 1\n";
  out << "# bandlimit: " << grid.bandlimit() << "\n";
  out << "# ntheta: " << grid.n_theta() << "\n";
  out << "# nphi: " << grid.n_phi() << "\n";
  out << "# ordering: row-major, colatitude outer ascending, longitude "
         "inner from 0\n";
  for (int p = 0; p < grid.n_nodes(); ++p)
    out << format_double(values[p]) << "\n";
}

SphereFieldData read_sphere_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "# SPHEREFIELD 1")
    throw std::runtime_error("bad sphere field header in " + path);
  SphereFieldData data;
  auto header_int = [&](const std::string& key) {
    if (!std::getline(in, line) || line.rfind("# " + key + ": ", 0) != 0)
      throw std::runtime_error("missing " + key + " header in " + path);
    return std::stoi(line.substr(key.size() + 4));
  };
  data.bandlimit = header_int("bandlimit");
  data.n_theta = header_int("ntheta");
  data.n_phi = header_int("nphi");
  std::getline(in, line);  // ordering comment
  data.values.resize(data.n_theta * data.n_phi);
  for (int p = 0; p < data.values.size(); ++p) {
    if (!std::getline(in, line))
      throw std::runtime_error("truncated sphere field " + path);
    data.values[p] = std::stod(line);
  }
  return data;
}

}  // namespace nullcone
