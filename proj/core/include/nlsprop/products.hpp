#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "nlsprop/eigen.hpp"
#include "nlsprop/linops.hpp"

namespace nlsprop {

struct PotentialBvpOptions {
  /// Negative means the dimension default (3D: 1e-12 / 1e-12, 1D: 1e-8 / 1e-10).
  double abs_tol = -1.0;
  double rel_tol = -1.0;
  std::size_t max_nodes = 20000;
};

/// Solves op u = rhs on [0, rhs.r_max()] with u'(0) = 0 (even / k = 0), u(0) = 0
/// (odd), or W'(0) = 0 for u = r^k W (k >= 1). Far field: u'(x_max) = 0 in 1D,
/// u' + ((k+1)/r_max) u = 0 in 3D. Returns u with u' on the collocation mesh.
Profile solve_potential_bvp(const LinearOperator& op, const Profile& rhs,
                            const PotentialBvpOptions& options = {});

struct LabeledProfile {
  std::string label;
  Profile profile;
};

struct GramData {
  std::string tag;
  std::vector<std::string> rhs_labels;
  std::vector<Profile> solutions;
  /// Symmetrized <rhs_i, u_j>.
  std::vector<std::vector<double>> gram;
  double consistency_error = 0.0;  // max |<rhs_i, u_j> - <rhs_j, u_i>|
  /// max_j |<op u_j, u_j> - <rhs_j, u_j>| / (||rhs_j|| ||u_j||)
  double two_way_error = 0.0;
  bool degenerate = false;  // 2x2 determinant ~ 0 (e.g. repeated directions)
  /// 2x2: "det", "det_over_g11", "det_over_g22", "eig_min", "eig_max"; 1x1: "g11".
  std::map<std::string, double> ratios;

  std::size_t size() const { return gram.size(); }
  double max_abs() const;
  double smallest_eigenvalue() const;
};

/// Solves one BVP per rhs and assembles the Gram matrix with the sector weight.
GramData gram_matrix(const LinearOperator& op, const std::vector<LabeledProfile>& rhs_list,
                     const PotentialBvpOptions& options = {});

/// Projection directions of each sector. 3D: k=0 +: {R, phi2}; k=0 -: {dOmegaR or
/// R/sigma + rR', phi1}; k=1 +: {rR}. 1D: even +: {R, phi2}; even -: {R/sigma +
/// xR', phi1}; odd +: {xR}. Other sectors (index 0) are empty.
std::vector<LabeledProfile> sector_rhs_set(const ProblemSpec& spec, const SolitonData& soliton,
                                           const Eigenpair& eigenpair, Sign sign, Sector sector);

}  // namespace nlsprop
