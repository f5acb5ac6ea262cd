#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fracbv/cli.hpp"
#include "fracbv/config.hpp"
#include "fracbv/error.hpp"
#include "fracbv/pgm.hpp"
#include "support.hpp"

using namespace fracbv;
using namespace fracbv::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fracbv_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  int code;
  std::string out, err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

// 12 x 10 disk on a dark background with a little deterministic noise
ImageBuffer disk_image() {
  ImageBuffer img{12, 10, 255, {}};
  Rng rng(91);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 12; ++x) {
      const double r = std::hypot(x - 5.5, y - 4.5);
      const double v = (r < 3.0 ? 200.0 : 40.0) + uniform(rng, -10.0, 10.0);
      img.pixels.push_back(static_cast<std::uint16_t>(std::lround(v)));
    }
  return img;
}

std::string write_image(const fs::path& dir, const ImageBuffer& img) {
  const std::string path = (dir / "in.pgm").string();
  write_pgm(path, img);
  return path;
}

}  // namespace

TEST_CASE("ASCII PGM with comments") {
  const ImageBuffer img = parse_pgm("P2\n# a comment\n3 2\n# another\n255\n0 128 255\n10 20 30\n");
  CHECK(img.width == 3);
  CHECK(img.height == 2);
  CHECK(img.at(2, 0) == 255);
  CHECK(img.at(1, 1) == 20);
  const ScalarField f = image_to_field(img);
  CHECK(f.grid().spacing(0) == doctest::Approx(1.0 / 3.0));
  CHECK(f.grid().node(0).x() == doctest::Approx(1.0 / 6.0));
  CHECK(f[f.grid().flat_index(2, 0)] == doctest::Approx(1.0));
  CHECK(f[f.grid().flat_index(2, 1)] == doctest::Approx(30.0 / 255.0));
}

TEST_CASE("malformed images") {
  try {
    parse_pgm("P3\n1 1\n255\n0 0 0\n");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 0);
  }
  CHECK_THROWS_AS(parse_pgm("P2\n2 2\n100\n1 2 3 4\n"), ParseError);
  CHECK_THROWS_AS(parse_pgm(std::string("P5\n4 4\n255\n") + std::string(7, 'x')), IoError);
  CHECK_THROWS_AS(read_pgm("/nonexistent/image.pgm"), IoError);
  CHECK_THROWS_AS(image_to_field(parse_pgm("P2\n1 3\n255\n1 2 3\n")), InvalidArgument);
}

TEST_CASE("binary round trip at both depths") {
  Rng rng(92);
  for (int maxval : {255, 65535}) {
    ImageBuffer img{7, 5, maxval, {}};
    for (int i = 0; i < 35; ++i) img.pixels.push_back(static_cast<std::uint16_t>(uniform(rng, 0.0, maxval + 0.999)));
    const ImageBuffer back = parse_pgm(encode_pgm(img));
    CHECK(back.width == 7);
    CHECK(back.max_value == maxval);
    CHECK(back.pixels == img.pixels);
  }
  const std::string two = encode_pgm(ImageBuffer{1, 1, 65535, {0x1234}});
  CHECK(static_cast<unsigned char>(two[two.size() - 2]) == 0x12);
}

TEST_CASE("quantization error is at most half a level") {
  Rng rng(93);
  const Grid g = make_grid({{0.0, 1.0}, {0.0, 1.0}}, {6, 4});
  const ScalarField u = random_field(g, rng);
  const ImageBuffer img = field_to_image(u.with_values(0.5 * (u.values().array() + 1.0).matrix()), 6, 4);
  const ScalarField back = image_to_field(img);
  for (Index i = 0; i < g.size(); ++i) {
    const auto m = g.multi_index(i);
    const double want = 0.5 * (u[i] + 1.0);
    CHECK(std::abs(back[back.grid().flat_index(m[0], m[1])] - want) <= 0.5 / 255.0 + 1e-15);
  }
  const ImageBuffer clamp = field_to_image(ScalarField(g, Vector::Constant(g.size(), 3.0)), 6, 4);
  CHECK(clamp.pixels.front() == 255);
}

TEST_CASE("configuration parsing") {
  const RunConfig c = parse_config("# run\n[problem]\nvariant = gagliardo\nbeta = 0.25\n\n[solver]\n; note\nmax_iter = 40\n[grid]\nquadrature = point\n");
  CHECK(c.variant == Variant::gagliardo);
  CHECK(c.beta == 0.25);
  CHECK(c.max_iter == 40);
  CHECK(c.quadrature == PairQuadrature::point);
  CHECK_THROWS_AS(parse_config("[problem]\nbogus = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[nowhere]\n"), ParseError);
  CHECK_THROWS_AS(parse_config("beta = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[solver]\nbeta = 1\n"), ParseError);
  try {
    parse_config("[problem]\nalpha = 0.5\nnot a pair\n");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 22);
  }
  RunConfig d;
  set_config_value(d, "alpha", "0.3");
  CHECK(canonical_config(d) == canonical_config(parse_config("[problem]\nalpha = 0.3\n")));
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(255) == "00000000000000ff");
  CHECK(parse_variant(variant_name(Variant::riesz)) == Variant::riesz);
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"denoise"}).code == 2);
  CHECK(call({"variation", "--input", "/nonexistent.pgm"}).code == 2);
  const fs::path dir = scratch("codes");
  const std::string in = write_image(dir, disk_image());
  CHECK(call({"denoise", "--input", in, "--output", (dir / "o").string(), "--alpha", "1.5"}).code == 2);
  CHECK(call({"denoise", "--input", in, "--output", (dir / "o").string(), "--max-iter", "1", "--beta", "0.5"}).code == 1);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("denoise writes its artifacts deterministically") {
  const fs::path dir = scratch("denoise");
  const ImageBuffer img = disk_image();
  const std::string in = write_image(dir, img);
  for (const char* variant : {"riesz", "gagliardo"}) {
    const fs::path a = dir / (std::string(variant) + "_a"), b = dir / (std::string(variant) + "_b");
    const std::vector<std::string> base = {"denoise", "--input", in, "--variant", variant, "--beta", "0.02", "--tol", "1e-5"};
    auto args = base;
    args.insert(args.end(), {"--output", a.string()});
    const Outcome r = call(args);
    CHECK(r.code == 0);
    CHECK(r.out.find("converged true") != std::string::npos);
    args = base;
    args.insert(args.end(), {"--output", b.string()});
    CHECK(call(args).code == 0);
    CHECK(slurp(a / "denoised.pgm") == slurp(b / "denoised.pgm"));
    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
    const std::string trace = slurp(a / "trace.csv");
    CHECK(trace.rfind("k,primal,predual,gap,vi_residual,step\n", 0) == 0);
    const auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
    CHECK(m["command"] == "denoise");
    CHECK(m["variant"] == variant);
    CHECK(m["tool_version"] == kToolVersion);
    CHECK(m["files"].size() == 2);
    CHECK(m["config_digest"].get<std::string>().size() == 16);
    const ImageBuffer out = read_pgm((a / "denoised.pgm").string());
    CHECK(out.width == img.width);
    CHECK(out.height == img.height);
  }
  const fs::path z = dir / "zero";
  CHECK(call({"denoise", "--input", in, "--output", z.string(), "--beta", "0"}).code == 0);
  CHECK(read_pgm((z / "denoised.pgm").string()).pixels == img.pixels);
}

TEST_CASE("configuration file and flags combine") {
  const fs::path dir = scratch("config");
  const std::string in = write_image(dir, disk_image());
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "[problem]\nvariant = gagliardo\nbeta = 0.02\n[solver]\ntol = 1e-5\n";
  }
  const Outcome r = call({"denoise", "--config", (dir / "run.cfg").string(), "--input", in, "--output", (dir / "o").string(), "--beta", "0.03"});
  CHECK(r.code == 0);
  const auto m = nlohmann::json::parse(slurp(dir / "o" / "manifest.json"));
  CHECK(m["variant"] == "gagliardo");
  CHECK(m["beta"] == 0.03);
}

TEST_CASE("variation and perimeter reports") {
  const fs::path dir = scratch("variation");
  ImageBuffer flat{8, 8, 255, std::vector<std::uint16_t>(64, 90)};
  const Outcome v = call({"variation", "--input", write_image(dir, flat)});
  CHECK(v.code == 0);
  CHECK(v.out.find("var_alpha gagliardo 0\n") != std::string::npos);
  CHECK(v.out.find("identity_residual 0\n") != std::string::npos);
  const Outcome d = call({"variation", "--input", write_image(dir, disk_image())});
  CHECK(d.code == 0);
  CHECK(d.out.find("Var_alpha riesz ") != std::string::npos);
  const Outcome p = call({"perimeter", "--input", write_image(dir, disk_image())});
  CHECK(p.code == 0);
  CHECK(p.out.find("perimeter ") != std::string::npos);
}

TEST_CASE("verify and approx-demo") {
  const Outcome v = call({"verify", "--seed", "7"});
  CHECK(v.code == 0);
  CHECK(v.out.find("all checks passed") != std::string::npos);
  const fs::path dir = scratch("demo");
  const Outcome d = call({"approx-demo", "--output", dir.string()});
  CHECK(d.code == 0);
  for (const char* f : {"recovery.csv", "pipeline_riesz.csv", "pipeline_gagliardo.csv", "manifest.json"})
    CHECK(fs::exists(dir / f));
  CHECK(nlohmann::json::parse(slurp(dir / "manifest.json"))["command"] == "approx-demo");
}
