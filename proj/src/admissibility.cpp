#include "multitile/admissibility.hpp"

#include "multitile/error.hpp"
#include "multitile/vandermonde.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

namespace multitile {

namespace {

constexpr double kResidueTol = 1e-9;

double residue(double v, double z, double q) {
  double r = std::fmod(v * z, q);
  if (r < 0.0) r += q;
  return r;
}

double circular_distance(double a, double b, double q) {
  const double diff = std::abs(a - b);
  return std::min(diff, q - diff);
}

bool is_integer(double r, double q) {
  const double nearest = std::round(r);
  return std::abs(r - nearest) <= kResidueTol || std::abs(r - q) <= kResidueTol;
}

std::vector<FrequencyTree> cell_trees(const MultiTileDomain& domain) {
  std::vector<FrequencyTree> trees;
  for (const auto& cell : domain.cells()) trees.push_back(build_tree(frequency_set_from_offsets(cell.offsets)));
  return trees;
}

// Common child count at each level across every parent of every tree; 0 if none.
std::vector<std::int64_t> uniform_counts(const std::vector<FrequencyTree>& trees, int d) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(d), -1);
  for (const auto& tree : trees) {
    for (int l = 1; l <= d; ++l) {
      auto& slot = out[static_cast<std::size_t>(l - 1)];
      for (const auto& parent : tree.levels[static_cast<std::size_t>(l - 1)].parents) {
        const auto n = static_cast<std::int64_t>(parent.children.size());
        if (slot == -1) slot = n;
        else if (slot != n) slot = 0;
      }
    }
  }
  return out;
}

// Condition number of the Vandermonde block on the given nodes, from the
// eigenvalues of W^* W. Only used for ranking candidates.
double block_condition(const std::vector<double>& children, double delta) {
  const auto n = static_cast<Eigen::Index>(children.size());
  if (n == 1) return 1.0;
  Eigen::MatrixXcd w(n, n);
  for (Eigen::Index t = 0; t < n; ++t)
    for (Eigen::Index s = 0; s < n; ++s) w(s, t) = unit_phase(delta * children[static_cast<std::size_t>(t)] * static_cast<double>(s));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(w.adjoint() * w, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  if (ev[0] <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(ev[n - 1] / ev[0]);
}

bool distinct_residues(const std::vector<double>& children, double v, double q) {
  std::vector<double> r;
  r.reserve(children.size());
  for (double z : children) r.push_back(residue(v, z, q));
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = a + 1; b < r.size(); ++b)
      if (circular_distance(r[a], r[b], q) <= kResidueTol) return false;
  return true;
}

}  // namespace

const char* to_string(AdmissibilityClass cls) {
  switch (cls) {
    case AdmissibilityClass::None: return "none";
    case AdmissibilityClass::Weak: return "weak";
    case AdmissibilityClass::Strong: return "strong";
    case AdmissibilityClass::Perfect: return "perfect";
  }
  return "none";
}

std::vector<double> AdmissibilityCertificate::delta() const {
  std::vector<double> out(v.size());
  for (std::size_t l = 0; l < v.size(); ++l) out[l] = v[l] / static_cast<double>(q[l]);
  return out;
}

AdmissibilityReport check_admissibility(const MultiTileDomain& domain, std::span<const double> v,
                                        std::span<const std::int64_t> q) {
  const int d = domain.dimension();
  if (v.size() != static_cast<std::size_t>(d) || q.size() != static_cast<std::size_t>(d))
    throw Error(ErrorCode::DimensionMismatch, "v and q must have one entry per dimension");
  for (auto ql : q)
    if (ql < 1) throw Error(ErrorCode::InvalidInput, "q entries must be positive");

  const auto trees = cell_trees(domain);
  AdmissibilityReport report;
  AdmissibilityCertificate cert;
  cert.v.assign(v.begin(), v.end());
  cert.q.assign(q.begin(), q.end());
  cert.q_star = uniform_counts(trees, d);

  // A level whose parents all have one child contributes 1x1 blocks only.
  std::vector<bool> singleton(static_cast<std::size_t>(d), true);
  for (const auto& tree : trees)
    for (int l = 0; l < d; ++l)
      for (const auto& parent : tree.levels[static_cast<std::size_t>(l)].parents)
        if (parent.children.size() > 1) singleton[static_cast<std::size_t>(l)] = false;

  bool strong = true;
  for (std::size_t c = 0; c < trees.size(); ++c) {
    for (int l = 1; l <= d; ++l) {
      const auto lu = static_cast<std::size_t>(l - 1);
      const double ql = static_cast<double>(q[lu]);
      const auto& parents = trees[c].levels[lu].parents;
      for (std::size_t p = 0; p < parents.size(); ++p) {
        ResidueWitness w{c, l, p, parents[p].prefix, parents[p].children, {}};
        for (double z : w.children) w.residues.push_back(residue(v[lu], z, ql));
        for (std::size_t a = 0; a < w.residues.size(); ++a) {
          if (!singleton[lu] && !is_integer(w.residues[a], ql)) strong = false;
          for (std::size_t b = a + 1; b < w.residues.size(); ++b) {
            if (circular_distance(w.residues[a], w.residues[b], ql) <= kResidueTol) {
              report.collision = Collision{c, l, p, w.children[a], w.children[b], w.residues[a]};
              return report;
            }
          }
        }
        cert.witnesses.push_back(std::move(w));
      }
    }
  }

  bool perfect = strong;
  for (int l = 0; l < d && perfect; ++l)
    perfect = singleton[static_cast<std::size_t>(l)] ||
              cert.q_star[static_cast<std::size_t>(l)] == q[static_cast<std::size_t>(l)];
  cert.cls = perfect ? AdmissibilityClass::Perfect : strong ? AdmissibilityClass::Strong : AdmissibilityClass::Weak;
  report.cls = cert.cls;
  report.certificate = std::move(cert);
  return report;
}

AdmissibilityCertificate find_pair(const MultiTileDomain& domain, int v_max, int q_max) {
  if (v_max < 1 || q_max < 1) throw Error(ErrorCode::InvalidInput, "search bounds must be >= 1");
  const int d = domain.dimension();
  const auto trees = cell_trees(domain);

  std::vector<double> v(static_cast<std::size_t>(d));
  std::vector<std::int64_t> q(static_cast<std::size_t>(d));
  for (int l = 1; l <= d; ++l) {
    const auto lu = static_cast<std::size_t>(l - 1);
    std::set<std::vector<double>> child_sets;
    std::size_t widest = 1;
    for (const auto& tree : trees)
      for (const auto& parent : tree.levels[lu].parents) {
        child_sets.insert(parent.children);
        widest = std::max(widest, parent.children.size());
      }

    // Rank by worst block condition number, then scan order (q, then v).
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int ql = static_cast<int>(widest); ql <= q_max; ++ql) {
      // integer offsets make v and v + q equivalent
      for (int vl = 1; vl <= std::min(v_max, ql); ++vl) {
        bool ok = true;
        for (const auto& set : child_sets)
          if (!distinct_residues(set, vl, ql)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        double worst = 1.0;
        for (const auto& set : child_sets)
          worst = std::max(worst, block_condition(set, static_cast<double>(vl) / ql));
        if (!found || worst < best * (1.0 - 1e-9)) {
          best = worst;
          found = true;
          v[lu] = vl;
          q[lu] = ql;
        }
      }
      if (found && best <= 1.0 + 1e-9) break;
    }
    if (!found)
      throw Error(ErrorCode::NoPairFound, "no (v, q) separates level " + std::to_string(l) + " with v <= " +
                                              std::to_string(v_max) + ", q <= " + std::to_string(q_max));
  }

  AdmissibilityReport report = check_admissibility(domain, v, q);
  if (!report.certificate) throw Error(ErrorCode::NoPairFound, "search result failed certification");
  return std::move(*report.certificate);
}

std::optional<double> perfect_shift_1d(std::span<const std::int64_t> offsets) {
  const auto k = static_cast<std::int64_t>(offsets.size());
  if (k == 0) throw Error(ErrorCode::InvalidInput, "empty offset set");
  if (k == 1) return 1.0;
  std::int64_t g = 0;
  for (auto z : offsets) g = std::gcd(g, z < 0 ? -z : z);
  if (g == 0) return std::nullopt;
  std::set<std::int64_t> residues;
  for (auto z : offsets) residues.insert(((z / g) % k + k) % k);
  if (static_cast<std::int64_t>(residues.size()) != k) return std::nullopt;
  return 1.0 / static_cast<double>(g);
}

}  // namespace multitile
