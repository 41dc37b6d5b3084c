#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace warpsol {

/// Cell-centred radial grid on [0, r_max] for a finite-volume discretisation of
/// the radial Laplacian in dimension d.
///
/// Nodes r_i = r_max sinh(beta s_i)/sinh(beta), s_i = (i + 1/2)/M: clustered at
/// the origin, coarser far out. Faces sit midway between nodes, the first at
/// r = 0 (no flux) and the last at r_max (Dirichlet, ghost value 0).
struct RadialGrid {
  int d = 2;
  double r_max = 40.0;
  double stretch = 5.0;
  std::vector<double> r;       ///< nodes, size M
  std::vector<double> face;    ///< faces, size M + 1
  std::vector<double> volume;  ///< (face_{i+1}^d - face_i^d)/d
  std::vector<double> flux;    ///< face^{d-1}/(r_{i+1} - r_i), size M + 1; flux[0] = 0

  std::size_t size() const { return r.size(); }

  /// Samples f at the nodes.
  std::vector<double> sample(const std::function<double(double)>& f) const;

  /// Discrete inner product |S^{d-1}| sum_i V_i f_i g_i.
  double dot(const std::vector<double>& f, const std::vector<double>& g) const;
  double norm(const std::vector<double>& f) const;

  /// Discrete radial Laplacian (1/r^{d-1})(r^{d-1} f')' at each node.
  std::vector<double> laplacian(const std::vector<double>& f) const;
};

std::shared_ptr<const RadialGrid> make_radial_grid(int points, double r_max, double stretch,
                                                   int d = 2);

}  // namespace warpsol
