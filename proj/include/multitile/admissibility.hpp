#pragma once

#include "multitile/domain.hpp"
#include "multitile/frequency_tree.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace multitile {

enum class AdmissibilityClass { None, Weak, Strong, Perfect };

const char* to_string(AdmissibilityClass cls);

/// Residues v_l z mod q_l of one parent's children at one level of one cell.
struct ResidueWitness {
  std::size_t cell = 0;
  int level = 0;
  std::size_t parent = 0;
  RealPoint prefix;
  std::vector<double> children;
  std::vector<double> residues;
};

/// Two children of the same parent whose residues coincide.
struct Collision {
  std::size_t cell = 0;
  int level = 0;
  std::size_t parent = 0;
  double first = 0.0;
  double second = 0.0;
  double residue = 0.0;
};

struct AdmissibilityCertificate {
  std::vector<double> v;
  std::vector<std::int64_t> q;
  AdmissibilityClass cls = AdmissibilityClass::Weak;
  /// Common child count per level, 0 where counts differ between parents.
  std::vector<std::int64_t> q_star;
  std::vector<ResidueWitness> witnesses;

  /// Diagonal of delta, v_l / q_l.
  std::vector<double> delta() const;
};

struct AdmissibilityReport {
  AdmissibilityClass cls = AdmissibilityClass::None;
  std::optional<AdmissibilityCertificate> certificate;
  std::optional<Collision> collision;  // first violation when cls == None
};

/// Strongest class that holds on every cell for the given (v, q).
AdmissibilityReport check_admissibility(const MultiTileDomain& domain, std::span<const double> v,
                                        std::span<const std::int64_t> q);

/// Integer search over v_l in [1, v_max], q_l in [1, q_max], level by level.
/// Throws NoPairFound.
AdmissibilityCertificate find_pair(const MultiTileDomain& domain, int v_max, int q_max);

/// For distinct integers z_1..z_k with Q = gcd, returns tau = 1/Q when
/// {z_r / Q mod k} is a complete residue system (delta = tau / k then gives
/// a perfectly conditioned Vandermonde matrix).
std::optional<double> perfect_shift_1d(std::span<const std::int64_t> offsets);

}  // namespace multitile
