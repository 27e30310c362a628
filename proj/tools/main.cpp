// adareg: command-line front end for the adaptive-regularization solvers.
//
// Exit codes: 0 success, 2 usage or I/O error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "adareg/denoise.hpp"
#include "adareg/flow.hpp"
#include "adareg/imageio.hpp"
#include "adareg/metrics.hpp"
#include "adareg/parallel.hpp"
#include "adareg/segment.hpp"
#include "adareg/synth.hpp"

using namespace adareg;
using json = nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// Usage errors detected after parsing (bad values, unreadable files).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag storage for the shared solver parameters; initialized from the
// per-problem defaults so --help shows the right values.
struct SolverFlags {
  double mu, eta, alpha, beta, theta, sigma, tol;
  int iters, gs_sweeps;
  std::optional<double> constant_lambda;

  explicit SolverFlags(const SolverParams& p)
      : mu(p.mu), eta(p.eta), alpha(p.adaptive.alpha), beta(p.adaptive.beta), theta(p.theta),
        sigma(p.adaptive.smoothing_sigma), tol(p.tol_primal), iters(p.max_iters),
        gs_sweeps(p.gs_sweeps) {}

  void add_to(CLI::App* app) {
    app->add_option("--mu", mu, "Huber threshold of the data term")->capture_default_str();
    app->add_option("--eta", eta, "Huber threshold of the regularizer")->capture_default_str();
    app->add_option("--alpha", alpha, "Lasso shrinkage of the weight")->capture_default_str();
    app->add_option("--beta", beta, "Residual scale of the weight")->capture_default_str();
    app->add_option("--theta", theta, "Augmentation weight")->capture_default_str();
    app->add_option("--sigma", sigma, "Gaussian smoothing of the residual before weighting")
        ->capture_default_str();
    app->add_option("--constant-lambda", constant_lambda,
                    "Fixed data weight in [0,1] instead of the adaptive one");
    app->add_option("--iters", iters, "Maximum iterations")->capture_default_str();
    app->add_option("--tol", tol, "Stop when the primal residual drops to this value")
        ->capture_default_str();
    app->add_option("--gs-sweeps", gs_sweeps, "Gauss-Seidel sweeps per v-update")
        ->capture_default_str();
  }

  SolverParams build(SolverParams p) const {
    try {
      p.mu = HuberThreshold(mu);
      p.eta = HuberThreshold(eta);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    p.theta = theta;
    p.adaptive.alpha = alpha;
    p.adaptive.beta = beta;
    p.adaptive.smoothing_sigma = sigma;
    p.adaptive.constant_lambda = constant_lambda;
    p.max_iters = iters;
    p.tol_primal = tol;
    p.gs_sweeps = gs_sweeps;
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return p;
  }
};

json solver_json(const SolverParams& p) {
  json j{{"mu", p.mu.value()},
         {"eta", p.eta.value()},
         {"theta", p.theta},
         {"alpha", p.adaptive.alpha},
         {"beta", p.adaptive.beta},
         {"sigma", p.adaptive.smoothing_sigma},
         {"max_iters", p.max_iters},
         {"tol", p.tol_primal},
         {"gs_sweeps", p.gs_sweeps}};
  j["constant_lambda"] = p.adaptive.constant_lambda ? json(*p.adaptive.constant_lambda) : json();
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  try {
    write_file(path, text);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

template <class Fn>
auto load(Fn&& fn) {
  try {
    return fn();
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

void emit_metrics(const std::vector<std::pair<std::string, double>>& rows,
                  const std::string& csv_path) {
  std::ostringstream os;
  write_metrics_csv(os, rows);
  if (csv_path.empty())
    std::cout << os.str();
  else
    write_text(csv_path, os.str());
}

void emit_history(const History& h, const std::string& path) {
  if (path.empty()) return;
  std::ostringstream os;
  write_history_csv(os, h);
  write_text(path, os.str());
}

std::string strip_extension(const std::string& path) {
  std::filesystem::path p(path);
  return (p.parent_path() / p.stem()).string();
}

std::string iter_tag(int it) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05d", it);
  return buf;
}

// ---------------------------------------------------------------- denoise

struct DenoiseCmd {
  SolverFlags solver{denoise_defaults()};
  std::string input, output, metrics_ref, csv, history, lambda_prefix;
  int dump_lambda_every = 0;
  int maxval = 255;

  CLI::App* add(CLI::App& parent) {
    CLI::App* c = parent.add_subcommand("denoise", "Adaptive Huber-Huber denoising");
    c->add_option("--input", input, "Noisy PNM image")->required();
    c->add_option("--output", output, "Denoised PNM output")->required();
    solver.add_to(c);
    c->add_option("--dump-lambda-every", dump_lambda_every,
                  "Write a lambda heatmap every k iterations (0 = final only when a prefix is set)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    c->add_option("--lambda-prefix", lambda_prefix,
                  "Heatmap path prefix (default: output path without extension + _lambda)");
    c->add_option("--metrics-ref", metrics_ref, "Clean reference image for PSNR/SSIM");
    c->add_option("--csv", csv, "Metrics CSV (metric,value); stdout when absent");
    c->add_option("--history", history, "Per-iteration CSV (iter,energy,primal_residual,mean_lambda)");
    c->add_option("--maxval", maxval, "Output PNM maxval")
        ->capture_default_str()
        ->check(CLI::IsMember({255, 65535}));
    return c;
  }

  void run() {
    const SolverParams params = solver.build(denoise_defaults());
    const ScalarGrid f = load([&] { return read_pnm(input); });
    std::optional<ScalarGrid> ref;
    if (!metrics_ref.empty()) {
      ref = load([&] { return read_pnm(metrics_ref); });
      if (!ref->same_shape(f)) throw UsageError("--metrics-ref has a different size than --input");
    }
    const bool dumping = dump_lambda_every > 0 || !lambda_prefix.empty();
    const std::string prefix = lambda_prefix.empty() ? strip_extension(output) + "_lambda" : lambda_prefix;
    auto dump = [&](int it, const ScalarGrid& lambda) {
      write_text(prefix + "_" + iter_tag(it) + ".pgm", encode_pnm(grayscale_heatmap(lambda, 0.0, 1.0)));
    };
    std::function<void(int, const DenoiseProblem&)> observer;
    if (dump_lambda_every > 0)
      observer = [&](int it, const DenoiseProblem& p) {
        if (it % dump_lambda_every == 0) dump(it, p.state().lambda);
      };
    const DenoiseResult res = run_denoise(f, params, observer);
    write_text(output, encode_pnm(std::vector<ScalarGrid>{res.u}, maxval));
    if (dumping) dump(res.report.iterations, res.lambda);
    emit_history(res.report.history, history);

    std::vector<std::pair<std::string, double>> rows{
        {"iterations", res.report.iterations},
        {"converged", res.report.converged ? 1.0 : 0.0},
        {"mean_lambda", mean(res.lambda)}};
    if (ref) {
      rows.emplace_back("psnr", psnr(res.u, *ref));
      rows.emplace_back("ssim", ssim(res.u, *ref));
      rows.emplace_back("psnr_input", psnr(f, *ref));
      rows.emplace_back("ssim_input", ssim(f, *ref));
    }
    emit_metrics(rows, csv);
  }
};

// ---------------------------------------------------------------- segment

struct SegmentCmd {
  SolverFlags solver{segment_defaults()};
  std::string input, gt, out_labels, out_json, out_mean, history;
  int labels = 2;
  double tau_excl = 0.5;
  std::uint64_t seed = 0;
  bool jacobi = false;

  CLI::App* add(CLI::App& parent) {
    CLI::App* c = parent.add_subcommand("segment", "Adaptive multi-label segmentation");
    c->add_option("--input", input, "Input PNM image")->required();
    c->add_option("--labels", labels, "Number of labels (>= 2)")
        ->capture_default_str()
        ->check(CLI::Range(2, 255));
    c->add_option("--tau-excl", tau_excl, "Mutual-exclusivity weight")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    c->add_option("--seed", seed, "Seed of the random initial labeling")->capture_default_str();
    c->add_flag("--jacobi", jacobi, "Exclusivity term from the previous iterate of every label");
    solver.add_to(c);
    c->add_option("--gt", gt, "Ground-truth label map (P5, raw values)");
    c->add_option("--out-labels", out_labels, "Output label map (P5, raw values)");
    c->add_option("--out-mean", out_mean, "Piecewise-constant reconstruction c_label(x)");
    c->add_option("--out-json", out_json, "JSON summary");
    c->add_option("--history", history, "Per-iteration CSV");
    return c;
  }

  void run() {
    SegmentParams p;
    p.solver = solver.build(segment_defaults());
    p.n_labels = labels;
    p.tau_excl = tau_excl;
    p.seed = seed;
    p.jacobi_exclusivity = jacobi;
    const ScalarGrid f = load([&] { return read_pnm(input); });
    std::optional<LabelMap> truth;
    if (!gt.empty()) {
      truth = load([&] { return read_label_pnm(gt); });
      if (truth->width() != f.width() || truth->height() != f.height())
        throw UsageError("--gt has a different size than --input");
    }
    const SegmentResult res = run_segment(f, p);
    if (!out_labels.empty()) load([&] { write_label_pnm(out_labels, res.labels); return 0; });
    if (!out_mean.empty()) {
      ScalarGrid m(f.width(), f.height());
      for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = res.state.layers[static_cast<std::size_t>(res.labels[i])].c;
      write_text(out_mean, encode_pnm(std::vector<ScalarGrid>{m}));
    }
    emit_history(res.report.history, history);

    json j;
    j["iterations"] = res.report.iterations;
    j["converged"] = res.report.converged;
    j["c"] = json::array();
    for (const auto& L : res.state.layers) j["c"].push_back(L.c);
    j["degenerate_c_updates"] = res.state.degenerate_c_updates;
    j["mean_pairwise_overlap"] = mean_pairwise_overlap(res.state);
    j["params"] = solver_json(p.solver);
    j["params"]["labels"] = labels;
    j["params"]["tau_excl"] = tau_excl;
    j["params"]["seed"] = seed;
    j["params"]["jacobi"] = jacobi;
    if (truth) {
      const LabelScores s = label_scores(res.labels, *truth);
      j["scores"] = {{"precision", s.precision},
                     {"recall", s.recall},
                     {"f_measure", s.f_measure},
                     {"accuracy", label_accuracy(res.labels, *truth)}};
    }
    if (out_json.empty())
      std::cout << j.dump(2) << '\n';
    else
      write_text(out_json, j.dump(2) + "\n");
  }
};

// ---------------------------------------------------------------- flow

struct FlowCmd {
  SolverFlags solver{flow_defaults()};
  FlowParams defaults;
  std::string frame1, frame2, out_flo, out_color, gt, csv, history;
  double tau0 = defaults.tau0, dtau = defaults.dtau;
  int warps = defaults.n_warps, pyramid = defaults.pyramid_levels;
  bool isotropic = false, appendix_gradient = false;
  std::optional<double> color_max;

  CLI::App* add(CLI::App& parent) {
    CLI::App* c = parent.add_subcommand("flow", "Adaptive optical flow with warping annealing");
    c->add_option("--frame1", frame1, "First frame (PNM)")->required();
    c->add_option("--frame2", frame2, "Second frame (PNM)")->required();
    c->add_option("--out-flo", out_flo, "Flow output (.flo)");
    c->add_option("--out-color", out_color, "Color-coded flow (PPM)");
    c->add_option("--color-max", color_max, "Magnitude mapped to full saturation (default: 99th percentile)");
    c->add_option("--tau0", tau0, "Initial warping mix")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    c->add_option("--dtau", dtau, "Warping mix increment per iteration")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    c->add_option("--warps", warps, "Warps per pyramid level")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--pyramid", pyramid, "Pyramid levels (1 = single scale)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c->add_flag("--isotropic", isotropic, "Isotropic instead of per-derivative regularizer");
    c->add_flag("--appendix-gradient", appendix_gradient, "Use A = grad F1 + tau grad F2");
    solver.add_to(c);
    c->add_option("--gt", gt, "Ground-truth flow (.flo) for AEE/AAE");
    c->add_option("--csv", csv, "Metrics CSV (metric,value); stdout when absent");
    c->add_option("--history", history, "Per-iteration CSV");
    return c;
  }

  void run() {
    FlowParams p;
    p.solver = solver.build(flow_defaults());
    p.tau0 = tau0;
    p.dtau = dtau;
    p.n_warps = warps;
    p.pyramid_levels = pyramid;
    p.anisotropic_reg = !isotropic;
    p.appendix_gradient = appendix_gradient;
    if (color_max && !(*color_max > 0.0)) throw UsageError("--color-max must be positive");
    const ScalarGrid f1 = load([&] { return read_pnm(frame1); });
    const ScalarGrid f2 = load([&] { return read_pnm(frame2); });
    if (!f1.same_shape(f2)) throw UsageError("frames differ in size");
    std::optional<VectorGrid> truth;
    if (!gt.empty()) {
      truth = load([&] { return read_flo(gt); });
      if (!truth->same_shape(f1)) throw UsageError("--gt has a different size than the frames");
    }
    const FlowResult res = run_flow(f1, f2, p);
    if (!out_flo.empty()) write_text(out_flo, encode_flo(res.u));
    if (!out_color.empty()) write_text(out_color, encode_pnm(flow_to_color(res.u, color_max)));
    emit_history(res.report.history, history);

    std::vector<std::pair<std::string, double>> rows{
        {"iterations", res.report.iterations}, {"mean_lambda", mean(res.lambda)}};
    if (truth) {
      rows.emplace_back("aee", aee(res.u, *truth));
      rows.emplace_back("aae", aae(res.u, *truth));
    }
    emit_metrics(rows, csv);
  }
};

// ---------------------------------------------------------------- synth

struct SynthCmd {
  std::string generator, out, input, profile = "half";
  int size = 128, regions = 5, maxval = 255;
  std::uint64_t seed = 0;
  double disc = 0.15, noise = 0.0, bg = 0.2, fg = 0.8, sigma_max = 0.3, smoothing = 4.0;
  std::vector<double> noise_levels{0.0, 0.05, 0.15, 0.30};
  std::vector<double> shift{1.0, 0.0};

  CLI::App* add(CLI::App& parent) {
    CLI::App* c = parent.add_subcommand("synth", "Write synthetic fixtures");
    c->add_option("generator", generator, "Fixture to generate")
        ->required()
        ->check(CLI::IsMember(
            {"junction", "rectangles", "two-region", "pattern", "biased-noise", "texture", "shifted-pair"}));
    c->add_option("--out", out, "Output path prefix")->required();
    c->add_option("--size", size, "Canvas side length")->capture_default_str()->check(CLI::Range(8, 1 << 14));
    c->add_option("--seed", seed, "Noise seed")->capture_default_str();
    c->add_option("--regions", regions, "junction: number of regions")
        ->capture_default_str()
        ->check(CLI::Range(3, 64));
    c->add_option("--disc", disc, "junction: disc radius as a fraction of the size")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 0.5));
    c->add_option("--noise", noise, "junction, two-region: noise standard deviation")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    c->add_option("--noise-levels", noise_levels,
                  "rectangles: noise per region (background, left, middle, right)")
        ->expected(4)
        ->capture_default_str();
    c->add_option("--bg", bg, "two-region: background level")->capture_default_str();
    c->add_option("--fg", fg, "two-region: foreground level")->capture_default_str();
    c->add_option("--sigma-max", sigma_max, "biased-noise: largest noise level")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    c->add_option("--profile", profile, "biased-noise: half or radial")
        ->capture_default_str()
        ->check(CLI::IsMember({"half", "radial"}));
    c->add_option("--input", input, "biased-noise: clean image (default: built-in pattern)");
    c->add_option("--smoothing", smoothing, "texture, shifted-pair: texture smoothing sigma")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    c->add_option("--shift", shift, "shifted-pair: displacement (x y)")->expected(2)->capture_default_str();
    c->add_option("--maxval", maxval, "PNM maxval of image outputs")
        ->capture_default_str()
        ->check(CLI::IsMember({255, 65535}));
    return c;
  }

  void image(const std::string& path, const ScalarGrid& g) const {
    write_text(path, encode_pnm(std::vector<ScalarGrid>{g}, maxval));
    std::cout << path << '\n';
  }

  void labeled(const LabeledImage& li) const {
    image(out + ".pgm", li.image);
    load([&] { write_label_pnm(out + "_labels.pgm", li.labels); return 0; });
    std::cout << out + "_labels.pgm" << '\n';
  }

  void run() const {
    for (double s : noise_levels)
      if (!(s >= 0.0)) throw UsageError("--noise-levels must be nonnegative");
    if (generator == "junction") {
      labeled(junction_image(regions, size, disc, seed, noise));
    } else if (generator == "rectangles") {
      labeled(noisy_rectangles(size, {noise_levels[0], noise_levels[1], noise_levels[2], noise_levels[3]}, seed));
    } else if (generator == "two-region") {
      labeled(two_region_image(size, bg, fg, noise, seed));
    } else if (generator == "pattern") {
      image(out + ".pgm", test_pattern(size));
    } else if (generator == "biased-noise") {
      const ScalarGrid clean = input.empty() ? test_pattern(size) : load([&] { return read_pnm(input); });
      image(out + "_clean.pgm", clean);
      image(out + ".pgm", biased_noise_image(clean, sigma_max, parse_bias_profile(profile), seed));
    } else if (generator == "texture") {
      image(out + ".pgm", smooth_texture(size, smoothing, seed));
    } else {
      const FlowPair pair = shifted_pair(smooth_texture(size, smoothing, seed), {shift[0], shift[1]});
      image(out + "_1.pgm", pair.f1);
      image(out + "_2.pgm", pair.f2);
      write_text(out + "_gt.flo", encode_flo(pair.gt_flow));
      std::cout << out + "_gt.flo" << '\n';
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive regularization: denoising, segmentation and optical flow"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = runtime default)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  DenoiseCmd denoise;
  SegmentCmd segment;
  FlowCmd flow;
  SynthCmd synth;
  CLI::App* denoise_app = denoise.add(app);
  CLI::App* segment_app = segment.add(app);
  CLI::App* flow_app = flow.add(app);
  CLI::App* synth_app = synth.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  set_thread_count(threads);
  try {
    if (denoise_app->parsed()) denoise.run();
    if (segment_app->parsed()) segment.run();
    if (flow_app->parsed()) flow.run();
    if (synth_app->parsed()) synth.run();
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
