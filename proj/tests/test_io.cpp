#include "multitile/error.hpp"
#include "multitile/io.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <filesystem>
#include <optional>

using namespace multitile;

namespace {

std::optional<ErrorCode> parse_error(const std::string& text) {
  try {
    io::parse_domain(text);
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

const char* kInterval = R"({"dimension": 1, "lattice_basis": [[1]],
  "cells": [{"box": [[0, 1]], "offsets": [[1], [0]]}]})";

}  // namespace

TEST_CASE("domain spec parses and canonicalizes") {
  const auto dom = io::parse_domain(kInterval);
  CHECK(dom.k() == 2);
  const std::string canonical = io::serialize_domain(dom);
  CHECK(canonical == R"({"cells":[{"box":[[0,1]],"offsets":[[0],[1]]}],"dimension":1,"lattice_basis":[[1]]})");
  CHECK(io::serialize_domain(io::parse_domain(canonical)) == canonical);
}

TEST_CASE("serialization is byte stable on every fixture") {
  for (const auto& dom : {fixtures::two_cell(), fixtures::sheared_two_cell(), fixtures::example_ten_domain(),
                          fixtures::stretched_pair()}) {
    const std::string once = io::serialize_domain(dom);
    CHECK(io::serialize_domain(io::parse_domain(once)) == once);
  }
  CHECK(io::format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("malformed specs are rejected") {
  CHECK(parse_error("{") == ErrorCode::InvalidInput);
  CHECK(parse_error(R"({"dimension": 1, "lattice_basis": [[1]], "cells": [], "extra": 0})") == ErrorCode::InvalidInput);
  CHECK(parse_error(R"({"dimension": 1, "cells": []})") == ErrorCode::InvalidInput);
  CHECK(parse_error(R"({"dimension": 1, "lattice_basis": [[1]], "cells": [{"box": [[0, 1]], "offsets": [[0.5]]}]})") ==
        ErrorCode::InvalidInput);
  CHECK(parse_error(R"({"dimension": 2, "lattice_basis": [[1]], "cells": []})") == ErrorCode::InvalidInput);
  CHECK(parse_error(R"({"dimension": 1, "lattice_basis": [[0]], "cells": [{"box": [[0, 1]], "offsets": [[0]]}]})") ==
        ErrorCode::SingularBasis);
  CHECK(parse_error(R"({"dimension": 1, "lattice_basis": [[1]],
    "cells": [{"box": [[0, 0.6]], "offsets": [[0]]}, {"box": [[0.5, 1]], "offsets": [[1]]}]})") == ErrorCode::NotATiling);
  CHECK(parse_error(R"({"dimension": 1, "lattice_basis": [[1]], "cells": [{"box": [[0, 1]], "offsets": [[0]], "k": 1}]})") ==
        ErrorCode::InvalidInput);
}

TEST_CASE("samples CSV round trip") {
  SpectralData data;
  Eigen::VectorXd u(2);
  u << 0.25, 0.125;
  data.samples.push_back({1, u, {Complex(1.5, -2.0), Complex(0.1, 1e-300)}});
  const std::string text = io::samples_csv(data, 2, 2);
  CHECK(text.substr(0, text.find('\n')) == "cell_id,u_1,u_2,re_F_0,im_F_0,re_F_1,im_F_1");
  const auto back = io::parse_samples_csv(text, 2, 2);
  REQUIRE(back.samples.size() == 1);
  CHECK(back.samples[0].cell == 1);
  CHECK(back.samples[0].u == u);
  CHECK(back.samples[0].values == data.samples[0].values);
  CHECK_THROWS_AS(io::parse_samples_csv(text, 2, 3), Error);
  CHECK_THROWS_AS(io::parse_samples_csv("cell_id,u_1,re_F_0,im_F_0\n0,0.5,x,1\n", 1, 1), Error);
}

TEST_CASE("result CSV round trip") {
  Eigen::VectorXd y(1);
  y << 1.25;
  const std::vector<io::ResultRow> rows{{y, Complex(0.5, -0.25), 3e-16}};
  const std::string text = io::result_csv(rows, 1);
  CHECK(text.substr(0, text.find('\n')) == "y_1,re_f,im_f,residual");
  const auto back = io::parse_result_csv(text, 1);
  REQUIRE(back.size() == 1);
  CHECK(back[0].y == y);
  CHECK(back[0].value == rows[0].value);
  CHECK(back[0].residual == rows[0].residual);
}

TEST_CASE("metadata round trip") {
  io::SamplesMeta meta;
  meta.dimension = 2;
  meta.k = 3;
  meta.delta = {0.5, 0.5};
  meta.eta = {0, 1};
  meta.v = {1, 1};
  meta.q = {2, 2};
  meta.indices = {{{0, 0}, {1, 0}, {0, 1}}};
  meta.provenance = Provenance::CoefficientTruncated;
  meta.radius = 4;
  meta.function = "random";
  meta.seed = 42;
  const auto back = io::parse_meta(io::serialize_meta(meta));
  CHECK(back.delta == meta.delta);
  CHECK(back.eta == meta.eta);
  CHECK(back.q == meta.q);
  CHECK(back.indices == meta.indices);
  CHECK(back.provenance == meta.provenance);
  CHECK(back.radius == 4);
  CHECK(back.seed == 42);
  CHECK(io::meta_path("out/s.csv") == "out/s.csv.meta.json");
  CHECK_THROWS_AS(io::parse_meta(R"({"dimension": 1})"), Error);
}

TEST_CASE("atomic writes replace the target") {
  const auto dir = std::filesystem::temp_directory_path() / "multitile_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "file.txt";
  io::write_atomic(path, "first");
  io::write_atomic(path, "second");
  CHECK(io::read_file(path) == "second");
  CHECK_FALSE(std::filesystem::exists(dir / "file.txt.tmp"));
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(io::read_file(dir / "missing"), Error);
}

TEST_CASE("certificate JSON names the collision") {
  const auto dom = fixtures::split_two();
  const std::vector<double> v{1.0};
  const std::vector<std::int64_t> q{2};
  const std::string text = io::certificate_json(check_admissibility(dom, v, q));
  CHECK(text.find("\"collision\"") != std::string::npos);
  CHECK(text.find("\"none\"") != std::string::npos);
}
