#include "multitile/io.hpp"

#include "multitile/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace multitile::io {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::InvalidInput, where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) throw Error(ErrorCode::InvalidInput, "unknown key '" + key + "' in " + where);
  for (const auto& key : allowed)
    if (!obj.contains(key)) throw Error(ErrorCode::InvalidInput, "missing key '" + key + "' in " + where);
}

double real_of(const json& j, const std::string& where) {
  if (!j.is_number()) throw Error(ErrorCode::InvalidInput, where + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, where + " must be finite");
  return x;
}

std::int64_t int_of(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw Error(ErrorCode::InvalidInput, where + " must be an integer");
  return j.get<std::int64_t>();
}

std::string join_reals(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_real(xs[i]);
  return out + "]";
}

std::string join_ints(const IntVector& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out + "]";
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "bad number '" + s + "'");
  }
  if (used != s.size()) throw Error(ErrorCode::InvalidInput, "bad number '" + s + "'");
  return x;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text, std::size_t columns) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidInput, "CSV is empty");
  if (split(line, ',').size() != columns)
    throw Error(ErrorCode::InvalidInput, "CSV header has wrong column count, expected " + std::to_string(columns));
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != columns)
      throw Error(ErrorCode::InvalidInput, "CSV row " + std::to_string(rows.size() + 1) + " has wrong column count");
    rows.push_back(std::move(fields));
  }
  return rows;
}

json index_sets_json(const std::vector<ShiftIndexSet>& sets) {
  json out = json::array();
  for (const auto& set : sets) {
    json cell = json::array();
    for (const auto& j : set) cell.push_back(j);
    out.push_back(cell);
  }
  return out;
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

MultiTileDomain parse_domain(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("domain JSON: ") + e.what());
  }
  require_keys(doc, {"dimension", "lattice_basis", "cells"}, "domain");
  const std::int64_t d = int_of(doc["dimension"], "dimension");
  if (d < 1) throw Error(ErrorCode::InvalidInput, "dimension must be >= 1");
  const auto du = static_cast<std::size_t>(d);

  const json& rows = doc["lattice_basis"];
  if (!rows.is_array() || rows.size() != du) throw Error(ErrorCode::InvalidInput, "lattice_basis must have d rows");
  Eigen::MatrixXd basis(d, d);
  for (std::size_t i = 0; i < du; ++i) {
    if (!rows[i].is_array() || rows[i].size() != du) throw Error(ErrorCode::InvalidInput, "lattice_basis rows must have d entries");
    for (std::size_t j = 0; j < du; ++j)
      basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = real_of(rows[i][j], "lattice_basis entry");
  }

  const json& cells_json = doc["cells"];
  if (!cells_json.is_array()) throw Error(ErrorCode::InvalidInput, "cells must be an array");
  std::vector<Cell> cells;
  for (const auto& cj : cells_json) {
    require_keys(cj, {"box", "offsets"}, "cell");
    Cell cell;
    if (!cj["box"].is_array() || cj["box"].size() != du) throw Error(ErrorCode::InvalidInput, "box must have d intervals");
    for (const auto& iv : cj["box"]) {
      if (!iv.is_array() || iv.size() != 2) throw Error(ErrorCode::InvalidInput, "box interval must be [a, b]");
      cell.box.lower.push_back(real_of(iv[0], "box bound"));
      cell.box.upper.push_back(real_of(iv[1], "box bound"));
    }
    if (!cj["offsets"].is_array()) throw Error(ErrorCode::InvalidInput, "offsets must be an array");
    for (const auto& oj : cj["offsets"]) {
      if (!oj.is_array() || oj.size() != du) throw Error(ErrorCode::InvalidInput, "offset must have d integers");
      IntVector z;
      for (const auto& e : oj) z.push_back(int_of(e, "offset entry"));
      cell.offsets.push_back(std::move(z));
    }
    cells.push_back(std::move(cell));
  }
  return MultiTileDomain(make_lattice(basis), std::move(cells));
}

MultiTileDomain load_domain(const std::filesystem::path& path) { return parse_domain(read_file(path)); }

std::string serialize_domain(const MultiTileDomain& domain) {
  const int d = domain.dimension();
  std::string out = "{\"cells\":[";
  for (std::size_t c = 0; c < domain.cells().size(); ++c) {
    const Cell& cell = domain.cells()[c];
    out += c ? ",{\"box\":[" : "{\"box\":[";
    for (int i = 0; i < d; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      out += (i ? "," : "") + join_reals({cell.box.lower[ii], cell.box.upper[ii]});
    }
    out += "],\"offsets\":[";
    for (std::size_t r = 0; r < cell.offsets.size(); ++r) out += (r ? "," : "") + join_ints(cell.offsets[r]);
    out += "]}";
  }
  out += "],\"dimension\":" + std::to_string(d) + ",\"lattice_basis\":[";
  const auto& m = domain.lattice().basis();
  for (int i = 0; i < d; ++i) {
    std::vector<double> row;
    for (int j = 0; j < d; ++j) row.push_back(m(i, j));
    out += (i ? "," : "") + join_reals(row);
  }
  return out + "]}";
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error(ErrorCode::InvalidInput, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string meta_path(const std::string& samples_path) { return samples_path + ".meta.json"; }

std::string serialize_meta(const SamplesMeta& meta) {
  json doc;
  doc["dimension"] = meta.dimension;
  doc["k"] = meta.k;
  doc["delta"] = meta.delta;
  doc["eta"] = meta.eta;
  doc["v"] = meta.v;
  doc["q"] = meta.q;
  doc["indices"] = index_sets_json(meta.indices);
  doc["provenance"] = to_string(meta.provenance);
  doc["radius"] = meta.radius;
  doc["function"] = meta.function;
  doc["seed"] = meta.seed;
  return doc.dump(2) + "\n";
}

SamplesMeta parse_meta(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("metadata JSON: ") + e.what());
  }
  require_keys(doc, {"dimension", "k", "delta", "eta", "v", "q", "indices", "provenance", "radius", "function", "seed"},
               "metadata");
  SamplesMeta meta;
  try {
    meta.dimension = doc["dimension"].get<int>();
    meta.k = doc["k"].get<int>();
    meta.delta = doc["delta"].get<std::vector<double>>();
    meta.eta = doc["eta"].get<IntVector>();
    meta.v = doc["v"].get<std::vector<double>>();
    meta.q = doc["q"].get<std::vector<std::int64_t>>();
    for (const auto& cell : doc["indices"]) meta.indices.push_back(cell.get<ShiftIndexSet>());
    const auto prov = doc["provenance"].get<std::string>();
    meta.provenance = prov == "exact-pointwise" ? Provenance::ExactPointwise : Provenance::CoefficientTruncated;
    meta.radius = doc["radius"].get<int>();
    meta.function = doc["function"].get<std::string>();
    meta.seed = doc["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("metadata field: ") + e.what());
  }
  return meta;
}

std::string samples_csv(const SpectralData& data, int dimension, int k) {
  std::string out = "cell_id";
  for (int i = 1; i <= dimension; ++i) out += ",u_" + std::to_string(i);
  for (int s = 0; s < k; ++s) out += ",re_F_" + std::to_string(s) + ",im_F_" + std::to_string(s);
  out += "\n";
  for (const auto& sample : data.samples) {
    out += std::to_string(sample.cell);
    for (int i = 0; i < dimension; ++i) out += "," + format_real(sample.u[i]);
    for (const auto& f : sample.values) out += "," + format_real(f.real()) + "," + format_real(f.imag());
    out += "\n";
  }
  return out;
}

SpectralData parse_samples_csv(const std::string& text, int dimension, int k) {
  const auto columns = static_cast<std::size_t>(1 + dimension + 2 * k);
  SpectralData data;
  for (const auto& row : csv_rows(text, columns)) {
    SpectralSample sample;
    const double cell = parse_number(row[0]);
    if (cell < 0 || cell != std::floor(cell)) throw Error(ErrorCode::InvalidInput, "cell_id must be a non-negative integer");
    sample.cell = static_cast<std::size_t>(cell);
    sample.u.resize(dimension);
    for (int i = 0; i < dimension; ++i) sample.u[i] = parse_number(row[static_cast<std::size_t>(1 + i)]);
    for (int s = 0; s < k; ++s) {
      const auto base = static_cast<std::size_t>(1 + dimension + 2 * s);
      sample.values.emplace_back(parse_number(row[base]), parse_number(row[base + 1]));
    }
    data.samples.push_back(std::move(sample));
  }
  return data;
}

std::string result_csv(const std::vector<ResultRow>& rows, int dimension) {
  std::string out;
  for (int i = 1; i <= dimension; ++i) out += "y_" + std::to_string(i) + ",";
  out += "re_f,im_f,residual\n";
  for (const auto& row : rows) {
    for (int i = 0; i < dimension; ++i) out += format_real(row.y[i]) + ",";
    out += format_real(row.value.real()) + "," + format_real(row.value.imag()) + "," + format_real(row.residual) + "\n";
  }
  return out;
}

std::vector<ResultRow> parse_result_csv(const std::string& text, int dimension) {
  std::vector<ResultRow> out;
  for (const auto& row : csv_rows(text, static_cast<std::size_t>(dimension + 3))) {
    ResultRow r;
    r.y.resize(dimension);
    for (int i = 0; i < dimension; ++i) r.y[i] = parse_number(row[static_cast<std::size_t>(i)]);
    const auto base = static_cast<std::size_t>(dimension);
    r.value = {parse_number(row[base]), parse_number(row[base + 1])};
    r.residual = parse_number(row[base + 2]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ResultRow> result_rows(const ReconstructionResult& result) {
  std::vector<ResultRow> rows;
  for (const auto& p : result.points)
    for (std::size_t r = 0; r < p.values.size(); ++r)
      rows.push_back({p.y[r], p.values[r], p.residual.empty() ? 0.0 : p.residual[r]});
  return rows;
}

std::string certificate_json(const AdmissibilityReport& report) {
  json doc;
  doc["class"] = to_string(report.cls);
  if (report.certificate) {
    const auto& cert = *report.certificate;
    doc["v"] = cert.v;
    doc["q"] = cert.q;
    doc["q_star"] = cert.q_star;
    doc["delta"] = cert.delta();
    json witnesses = json::array();
    for (const auto& w : cert.witnesses)
      witnesses.push_back({{"cell", w.cell}, {"level", w.level}, {"parent", w.parent}, {"prefix", w.prefix},
                           {"children", w.children}, {"residues", w.residues}});
    doc["witnesses"] = witnesses;
  }
  if (report.collision) {
    const auto& c = *report.collision;
    doc["collision"] = {{"cell", c.cell}, {"level", c.level}, {"parent", c.parent},
                        {"z", {c.first, c.second}}, {"residue", c.residue}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace multitile::io
