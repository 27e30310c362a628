#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <string>

#include "adareg/imageio.hpp"
#include "adareg/metrics.hpp"
#include "adareg/synth.hpp"

using namespace adareg;
namespace fs = std::filesystem;

namespace {

const fs::path kTmp = TEST_TMP_DIR;

std::string tmp(const std::string& name) { return (kTmp / name).string(); }

// Runs the CLI with stdout/stderr captured to files; returns the exit status.
int run(const std::string& args, const std::string& tag = "last") {
  fs::create_directories(kTmp);
  const std::string cmd = std::string("\"") + ADAREG_CLI_PATH + "\" " + args + " > \"" +
                          tmp(tag + ".out") + "\" 2> \"" + tmp(tag + ".err") + "\"";
  const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

std::string output_of(const std::string& tag = "last") { return read_file(tmp(tag + ".out")); }

std::string stderr_of(const std::string& tag = "last") { return read_file(tmp(tag + ".err")); }

}  // namespace

TEST_CASE("help lists flags with defaults") {
  CHECK(run("denoise --help") == 0);
  const std::string out = output_of();
  CHECK(out.find("--mu") != std::string::npos);
  CHECK(out.find("0.16") != std::string::npos);
  CHECK(out.find("--dump-lambda-every") != std::string::npos);
  CHECK(run("segment --help") == 0);
  CHECK(output_of().find("--tau-excl") != std::string::npos);
  CHECK(run("flow --help") == 0);
  CHECK(output_of().find("--dtau") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("denoise --output x.pgm") == 2);
  CHECK(run("denoise --input " + tmp("missing.pgm") + " --output " + tmp("x.pgm")) == 2);
  CHECK(stderr_of().find("missing.pgm") != std::string::npos);
  CHECK(run("synth spiral --out " + tmp("s")) == 2);
  CHECK(run("denoise --input a --output b --mu -1") == 2);
}

TEST_CASE("synth junction writes parseable files and is deterministic") {
  REQUIRE(run("synth junction --regions 5 --size 64 --noise 0.05 --seed 3 --out " + tmp("j")) == 0);
  const ScalarGrid img = read_pnm(tmp("j.pgm"));
  const LabelMap labels = read_label_pnm(tmp("j_labels.pgm"));
  CHECK(img.width() == 64);
  CHECK(labels.label_count() == 5);
  const std::string first = read_file(tmp("j.pgm"));
  REQUIRE(run("synth junction --regions 5 --size 64 --noise 0.05 --seed 3 --out " + tmp("j")) == 0);
  CHECK(read_file(tmp("j.pgm")) == first);
}

TEST_CASE("denoise with a reference writes metrics") {
  REQUIRE(run("synth biased-noise --size 48 --sigma-max 0.3 --seed 7 --out " + tmp("bn")) == 0);
  REQUIRE(run("denoise --input " + tmp("bn.pgm") + " --output " + tmp("bn_out.pgm") +
              " --metrics-ref " + tmp("bn_clean.pgm") + " --iters 20 --tol 1e-300 --csv " + tmp("bn.csv") +
              " --history " + tmp("bn_hist.csv") + " --dump-lambda-every 10") == 0);
  const std::string csv = read_file(tmp("bn.csv"));
  CHECK(csv.rfind("metric,value\n", 0) == 0);
  CHECK(csv.find("\nssim,") != std::string::npos);
  CHECK(csv.find("\npsnr,") != std::string::npos);
  const std::string hist = read_file(tmp("bn_hist.csv"));
  CHECK(hist.rfind("iter,energy,primal_residual,mean_lambda\n", 0) == 0);
  CHECK(fs::exists(tmp("bn_out_lambda_00010.pgm")));
  CHECK(fs::exists(tmp("bn_out_lambda_00020.pgm")));
  CHECK(read_pnm(tmp("bn_out.pgm")).width() == 48);
}

TEST_CASE("zero iterations reproduce the input") {
  REQUIRE(run("synth pattern --size 32 --out " + tmp("pat")) == 0);
  REQUIRE(run("denoise --input " + tmp("pat.pgm") + " --output " + tmp("pat_out.pgm") +
              " --iters 0") == 0);
  CHECK(read_file(tmp("pat_out.pgm")) == read_file(tmp("pat.pgm")));
}

TEST_CASE("segment writes labels and JSON, and --gt self scores 1") {
  REQUIRE(run("synth junction --regions 4 --size 48 --seed 1 --out " + tmp("seg")) == 0);
  const std::string args = "segment --input " + tmp("seg.pgm") + " --labels 3 --seed 4 --iters 40";
  REQUIRE(run(args + " --out-labels " + tmp("seg_a.pgm") + " --out-json " + tmp("seg_a.json") +
              " --gt " + tmp("seg_labels.pgm")) == 0);
  const LabelMap a = read_label_pnm(tmp("seg_a.pgm"));
  CHECK(a.width() == 48);
  for (int l : a.values()) CHECK((l >= 0 && l < 3));
  const auto j = nlohmann::json::parse(read_file(tmp("seg_a.json")));
  CHECK(j["c"].size() == 3);
  CHECK(j["params"]["labels"] == 3);
  CHECK(j.contains("scores"));

  REQUIRE(run(args + " --threads 1 --out-labels " + tmp("seg_b.pgm")) == 0);
  CHECK(read_file(tmp("seg_a.pgm")) == read_file(tmp("seg_b.pgm")));

  REQUIRE(run("segment --input " + tmp("seg.pgm") + " --labels 4 --iters 5 --gt " +
              tmp("seg_labels.pgm") + " --out-labels " + tmp("seg_c.pgm")) == 0);
  REQUIRE(run("segment --input " + tmp("seg.pgm") + " --labels 4 --iters 5 --gt " +
              tmp("seg_c.pgm") + " --out-json " + tmp("seg_self.json")) == 0);
  const auto self = nlohmann::json::parse(read_file(tmp("seg_self.json")));
  CHECK(self["scores"]["precision"] == 1.0);
  CHECK(self["scores"]["recall"] == 1.0);

  CHECK(run("segment --input " + tmp("seg.pgm") + " --labels 1") == 2);
}

TEST_CASE("flow on a shifted pair") {
  REQUIRE(run("synth shifted-pair --size 48 --shift 1 0 --smoothing 4 --maxval 65535 --seed 2 --out " +
              tmp("fp")) == 0);
  REQUIRE(run("flow --frame1 " + tmp("fp_1.pgm") + " --frame2 " + tmp("fp_2.pgm") + " --gt " +
              tmp("fp_gt.flo") + " --out-flo " + tmp("fp.flo") + " --out-color " +
              tmp("fp.ppm") + " --csv " + tmp("fp.csv")) == 0);
  const VectorGrid u = read_flo(tmp("fp.flo"));
  CHECK(aee(u, read_flo(tmp("fp_gt.flo"))) < 0.3);
  const std::string csv = read_file(tmp("fp.csv"));
  CHECK(csv.find("\naee,") != std::string::npos);
  CHECK(csv.find("\naae,") != std::string::npos);
  CHECK(read_pnm_image(tmp("fp.ppm")).channels.size() == 3);
}

TEST_CASE("flow on identical frames is near zero") {
  REQUIRE(run("synth texture --size 32 --seed 5 --out " + tmp("tex")) == 0);
  REQUIRE(run("flow --frame1 " + tmp("tex.pgm") + " --frame2 " + tmp("tex.pgm") + " --warps 2 --out-flo " +
              tmp("tex.flo")) == 0);
  CHECK(aee(read_flo(tmp("tex.flo")), VectorGrid(32, 32)) < 1e-3);
}

TEST_CASE("non-annealed flags reproduce a fixed tau") {
  REQUIRE(run("synth shifted-pair --size 32 --shift 0.5 0 --maxval 65535 --out " + tmp("na")) == 0);
  const std::string base = "flow --frame1 " + tmp("na_1.pgm") + " --frame2 " + tmp("na_2.pgm") +
                           " --warps 2 --iters 10 --tau0 1 --out-flo ";
  REQUIRE(run(base + tmp("na_a.flo") + " --dtau 0") == 0);
  REQUIRE(run(base + tmp("na_b.flo") + " --dtau 0.3") == 0);
  CHECK(read_file(tmp("na_a.flo")) == read_file(tmp("na_b.flo")));
}

TEST_CASE("solver divergence exits with 3") {
  REQUIRE(run("synth pattern --size 16 --out " + tmp("dv")) == 0);
  CHECK(run("denoise --input " + tmp("dv.pgm") + " --output " + tmp("dv_out.pgm") +
            " --eta 1e-300 --theta 1e-300 --constant-lambda 0 --iters 3") == 3);
}
