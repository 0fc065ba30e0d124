#pragma once

#include "multitile/admissibility.hpp"
#include "multitile/domain.hpp"
#include "multitile/reconstruction.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace multitile::io {

/// Parses a domain spec document; unknown keys and malformed values throw
/// InvalidInput, tiling violations throw the domain's own errors.
MultiTileDomain parse_domain(const std::string& json_text);
MultiTileDomain load_domain(const std::filesystem::path& path);

/// Canonical form: sorted keys, 17 significant digits, no whitespace.
std::string serialize_domain(const MultiTileDomain& domain);

/// %.17g
std::string format_real(double x);

/// Writes to a sibling temp file and renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

/// Sidecar metadata describing a samples file.
struct SamplesMeta {
  int dimension = 0;
  int k = 0;
  std::vector<double> delta;
  IntVector eta;
  std::vector<double> v;
  std::vector<std::int64_t> q;
  std::vector<ShiftIndexSet> indices;  // per cell, column order of F
  Provenance provenance = Provenance::ExactPointwise;
  int radius = -1;
  std::string function;
  std::uint64_t seed = 0;
};

std::string meta_path(const std::string& samples_path);
std::string serialize_meta(const SamplesMeta& meta);
SamplesMeta parse_meta(const std::string& json_text);

/// cell_id,u_1..u_d,re_F_0,im_F_0,...
std::string samples_csv(const SpectralData& data, int dimension, int k);
SpectralData parse_samples_csv(const std::string& text, int dimension, int k);

struct ResultRow {
  Eigen::VectorXd y;
  Complex value;
  double residual = 0.0;
};

/// y_1..y_d,re_f,im_f,residual
std::string result_csv(const std::vector<ResultRow>& rows, int dimension);
std::vector<ResultRow> parse_result_csv(const std::string& text, int dimension);

std::vector<ResultRow> result_rows(const ReconstructionResult& result);

std::string certificate_json(const AdmissibilityReport& report);

}  // namespace multitile::io
