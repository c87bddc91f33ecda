#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "mocca/errors.hpp"
#include "mocca/io.hpp"
#include "mocca/rng.hpp"

using namespace mocca;

namespace {

std::string slurp_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("stack files round-trip byte exactly") {
  const auto data = fixtures::model_stack(8, 3, 3, 41);
  const std::string p1 = temp_path("mocca_io_stack1.ksp");
  const std::string p2 = temp_path("mocca_io_stack2.ksp");
  write_stack(p1, data.stack);
  const KSpaceStack back = read_stack(p1);
  REQUIRE(back.n == 8);
  REQUIRE(back.num_coils() == 3);
  for (int j = 0; j < 3; ++j) CHECK(back.coils[std::size_t(j)] == data.stack.coils[std::size_t(j)]);
  write_stack(p2, back);
  CHECK(slurp_bytes(p1) == slurp_bytes(p2));
}

TEST_CASE("stack header is the fixed self-describing text") {
  KSpaceStack stack(2, 1);
  stack.coils[0].at(0, 0) = cdouble(1.0, -2.0);
  const std::string path = temp_path("mocca_io_header.ksp");
  write_stack(path, stack);
  const std::string bytes = slurp_bytes(path);
  const std::string header =
      "MOCCA-KSP/1\nn = 2\ncoils = 1\nlayout = column-major-centered\n"
      "format = complex: two little-endian 64-bit floats, real then imaginary\nend\n";
  REQUIRE(bytes.size() == header.size() + 16 * 4);
  CHECK(bytes.substr(0, header.size()) == header);
}

TEST_CASE("mask files round-trip and validate") {
  const SamplingPattern p = make_rows_cols_pattern(16, 4, 3, 2, 2);
  const std::string p1 = temp_path("mocca_io_mask1.msk");
  const std::string p2 = temp_path("mocca_io_mask2.msk");
  write_mask(p1, p);
  const SamplingPattern back = read_mask(p1);
  CHECK(back.n == p.n);
  CHECK(back.acs_m == p.acs_m);
  CHECK(back.support_l == p.support_l);
  CHECK(back.kind == p.kind);
  CHECK(back.stride1 == 2);
  CHECK(back.stride2 == 2);
  CHECK(back.mask == p.mask);
  write_mask(p2, back);
  CHECK(slurp_bytes(p1) == slurp_bytes(p2));
}

TEST_CASE("masks without ACS coverage are refused on load") {
  SamplingPattern p = make_columns_pattern(16, 4, 3, 2);
  p.mask[flat_index(CenteredGrid(16), 0, 1)] = 0;  // hole inside the ACS block
  const std::string path = temp_path("mocca_io_mask_bad.msk");
  // Bypass write-side validation to simulate a corrupted file.
  std::string bytes = "MOCCA-MSK/1\nn = 16\nacs-m = 4\nsupport-l = 3\nkind = cols:2\nend\n";
  bytes.append(p.mask.begin(), p.mask.end());
  std::ofstream(path, std::ios::binary) << bytes;
  CHECK_THROWS_AS(read_mask(path), data_error);
}

TEST_CASE("bad magic and truncated payloads are format errors") {
  const std::string path = temp_path("mocca_io_bad.ksp");
  std::ofstream(path, std::ios::binary) << "NOT-A-STACK\nend\n";
  CHECK_THROWS_AS(read_stack(path), data_error);

  std::ofstream(path, std::ios::binary)
      << "MOCCA-KSP/1\nn = 4\ncoils = 1\nlayout = column-major-centered\n"
         "format = complex: two little-endian 64-bit floats, real then imaginary\nend\nshort";
  CHECK_THROWS_AS(read_stack(path), data_error);
}

TEST_CASE("pgm files round-trip byte exactly") {
  GaussianStream g(43, 9);
  RealImage img(8);
  for (auto& v : img.values()) v = std::abs(g.next_complex_gaussian());
  const std::string p1 = temp_path("mocca_io_img1.pgm");
  const std::string p2 = temp_path("mocca_io_img2.pgm");
  write_pgm16(p1, img);
  const RealImage grays = read_pgm16(p1);
  double top = 0.0;
  for (double v : grays.values()) top = std::max(top, v);
  CHECK(top == 65535.0);
  write_pgm16(p2, grays);
  CHECK(slurp_bytes(p1) == slurp_bytes(p2));
}

TEST_CASE("image auto path picks pgm or lossless by extension") {
  GaussianStream g(44, 9);
  RealImage img(8);
  for (auto& v : img.values()) v = std::abs(g.next_complex_gaussian());

  const std::string lossless = temp_path("mocca_io_img.img");
  write_image_auto(lossless, img);
  CHECK(read_image_auto(lossless) == img);

  const std::string pgm = temp_path("mocca_io_img_auto.pgm");
  write_image_auto(pgm, img);
  const RealImage back = read_image_auto(pgm);
  CHECK(back.size() == 8);
  double top = 0.0;
  for (double v : back.values()) top = std::max(top, v);
  CHECK(top == 65535.0);
}

TEST_CASE("reports format deterministically including infinities") {
  Report rep;
  rep.add("psnr", std::numeric_limits<double>::infinity());
  rep.add("ssim", 1.0);
  rep.add("count", 42L);
  rep.add("note", "ok");
  CHECK(rep.str() == "psnr = inf\nssim = 1\ncount = 42\nnote = ok\n");
}

TEST_CASE("key-value files parse with comments and whitespace") {
  const std::string path = temp_path("mocca_io_cfg.txt");
  std::ofstream(path) << "# comment\n n = 32 \npattern = cols:2\n\nbeta = 0.001 # trailing\n";
  const auto kv = read_key_value_file(path);
  REQUIRE(kv.size() == 3);
  CHECK(kv[0] == std::pair<std::string, std::string>{"n", "32"});
  CHECK(kv[1] == std::pair<std::string, std::string>{"pattern", "cols:2"});
  CHECK(kv[2] == std::pair<std::string, std::string>{"beta", "0.001"});
}

}  // TEST_SUITE
