#include <doctest.h>

#include <cstdio>
#include <random>

#include "l1cert/certify.hpp"
#include "l1cert/generate.hpp"
#include "l1cert/io.hpp"
#include "l1cert/linalg.hpp"

using namespace l1cert;

TEST_CASE("instance parsing validates shapes") {
  const char* good = R"({
    "phi": [[1.0, 0.0], [0.0, 1.0]],
    "psi": [[1.0, 0.0], [0.0, 1.0]],
    "b": [1.0, 2.0],
    "x_star": [1.0, 2.0],
    "delta": 0.5,
    "lambda": 0.1,
    "name": "tiny"
  })";
  auto inst = io::parse_instance(good);
  CHECK(inst.phi.rows() == 2);
  CHECK(inst.psi.cols() == 2);
  REQUIRE(inst.x_star);
  CHECK(inst.delta == 0.5);
  CHECK(inst.lambda == 0.1);
  CHECK(inst.name == "tiny");

  CHECK_THROWS_AS(io::parse_instance("{\"phi\": [[1]], \"psi\": [[1]], \"b\": [1, 2]}"),
                  InvalidInputError);
  CHECK_THROWS_AS(io::parse_instance("not json"), InvalidInputError);
  CHECK_THROWS_AS(
      io::parse_instance("{\"phi\": [[1]], \"psi\": [[1]], \"b\": [1], \"lambda\": -1}"),
      InvalidInputError);
}

TEST_CASE("save and load round-trip exactly") {
  generate::GenerateOptions opt;
  opt.m = 3;
  opt.n = 5;
  opt.seed = 77;
  auto inst = generate::random_instance(opt);
  const std::string path = "roundtrip_tmp.json";
  io::save_instance(inst, path);
  auto back = io::load_instance(path);
  std::remove(path.c_str());
  CHECK(back.phi == inst.phi);
  CHECK(back.psi == inst.psi);
  CHECK(back.b == inst.b);
  REQUIRE(back.x_star);
  CHECK(*back.x_star == *inst.x_star);
  CHECK(back.seed == inst.seed);
}

TEST_CASE("generation is deterministic in the seed") {
  generate::GenerateOptions opt;
  opt.m = 4;
  opt.n = 8;
  opt.sparsity = 2;
  opt.seed = 5;
  auto a = generate::random_instance(opt);
  auto b = generate::random_instance(opt);
  CHECK(io::instance_to_json(a) == io::instance_to_json(b));
  opt.seed = 6;
  auto c = generate::random_instance(opt);
  CHECK(io::instance_to_json(a) != io::instance_to_json(c));
}

TEST_CASE("generated instances honor the requested structure") {
  generate::GenerateOptions opt;
  opt.m = 4;
  opt.n = 8;
  opt.sparsity = 2;
  opt.seed = 11;
  auto inst = generate::random_instance(opt);
  REQUIRE(inst.x_star);
  Index nnz = 0;
  for (Index i = 0; i < inst.x_star->size(); ++i)
    if (std::abs((*inst.x_star)(i)) > 1e-12) ++nnz;
  CHECK(nnz == 2);
  for (Index r = 0; r < inst.phi.rows(); ++r)
    CHECK(inst.phi.row(r).norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((inst.b - inst.phi * *inst.x_star).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tight frames have unit spectral norm") {
  generate::GenerateOptions opt;
  opt.m = 3;
  opt.n = 5;
  opt.l = 8;
  opt.psi = generate::PsiKind::TightFrame;
  opt.seed = 13;
  auto inst = generate::random_instance(opt);
  CHECK(inst.psi.rows() == 5);
  CHECK(inst.psi.cols() == 8);
  auto m = linalg::matrix_metrics(inst.psi);
  CHECK(std::abs(m.lambda_max_MMt - 1.0) < 1e-10);
  CHECK(std::abs(m.lambda_min_MMt - 1.0) < 1e-10);
}

TEST_CASE("snapped measurement entries stay in the three-letter alphabet") {
  generate::GenerateOptions opt;
  opt.m = 3;
  opt.n = 6;
  opt.rounded_phi = true;
  opt.seed = 21;
  auto inst = generate::random_instance(opt);
  for (Index i = 0; i < inst.phi.rows(); ++i)
    for (Index j = 0; j < inst.phi.cols(); ++j) {
      double v = inst.phi(i, j);
      CHECK((v == 0.0 || v == 1.0 || v == -1.0));
    }
}

TEST_CASE("generation rejects bad shapes") {
  generate::GenerateOptions opt;
  opt.m = 9;
  opt.n = 8;
  CHECK_THROWS_AS(generate::random_instance(opt), InvalidInputError);
  opt.m = 4;
  opt.sparsity = 100;
  CHECK_THROWS_AS(generate::random_instance(opt), InvalidInputError);
}
