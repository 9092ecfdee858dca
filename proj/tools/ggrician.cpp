// Command line front end: synthesize GG-Rician data, fit by MCMC, compare
// model families, and build per-patch parameter maps.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ggr/dataio.hpp"
#include "ggr/distributions.hpp"
#include "ggr/estimation.hpp"
#include "ggr/gof.hpp"
#include "ggr/rng.hpp"
#include "ggr/sampling.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MhFlags {
  int n_iter = 1000;
  int burn_in = 500;
  double epsilon = 2.5;
  double xi = 3.0;
  double eta = 0.5;
  double init_alpha = 2.0;
  double init_delta = 10.0;
  double init_gamma = 10.0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  void attach(CLI::App* app) {
    app->add_option("--n-iter", n_iter, "MCMC iterations");
    app->add_option("--burn-in", burn_in, "discarded iterations");
    app->add_option("--epsilon", epsilon, "delta proposal half-width");
    app->add_option("--xi", xi, "gamma proposal std dev");
    app->add_option("--eta", eta, "alpha proposal half-width");
    app->add_option("--init-alpha", init_alpha, "chain start alpha");
    app->add_option("--init-delta", init_delta, "chain start delta");
    app->add_option("--init-gamma", init_gamma, "chain start gamma");
    app->add_option("--seed", seed, "RNG seed");
    app->add_option("--stream-id", stream_id, "RNG stream id");
  }

  ggr::MhConfig config() const {
    ggr::MhConfig c;
    c.n_iter = n_iter;
    c.burn_in = burn_in;
    c.epsilon = epsilon;
    c.xi = xi;
    c.eta = eta;
    c.init_alpha = init_alpha;
    c.init_delta = init_delta;
    c.init_gamma = init_gamma;
    c.seed = seed;
    c.stream_id = stream_id;
    return c;
  }

  json echo() const {
    return json{{"n_iter", n_iter},       {"burn_in", burn_in},
                {"epsilon", epsilon},     {"xi", xi},
                {"eta", eta},             {"init_alpha", init_alpha},
                {"init_delta", init_delta}, {"init_gamma", init_gamma},
                {"seed", seed},           {"stream_id", stream_id}};
  }
};

ggr::SampleDomain parse_domain(const std::string& d) {
  if (d == "amplitude") return ggr::SampleDomain::amplitude;
  if (d == "intensity") return ggr::SampleDomain::intensity;
  throw UsageError("--domain must be amplitude or intensity");
}

std::optional<std::string> csv_domain_tag(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] != '#') break;
    auto pos = line.find("domain:");
    if (pos != std::string::npos) {
      std::string tag = line.substr(pos + 7);
      tag.erase(0, tag.find_first_not_of(" \t"));
      tag.erase(tag.find_last_not_of(" \t\r") + 1);
      return tag;
    }
  }
  return std::nullopt;
}

void ensure_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory " + out);
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream o(path);
  if (!o) throw IoError("cannot open " + path + " for writing");
  o << body;
  if (!o) throw IoError("write failed on " + path);
}

class Manifest {
 public:
  Manifest(const std::string& command, const std::string& out_dir)
      : out_dir_(out_dir), t0_(std::chrono::steady_clock::now()) {
    j_["command"] = command;
    j_["version"] = kVersion;
  }
  json& fields() { return j_; }
  void finalize() {
    auto dt = std::chrono::steady_clock::now() - t0_;
    j_["duration_seconds"] =
        std::chrono::duration<double>(dt).count();
    write_text(out_dir_ + "/manifest.json", j_.dump(2) + "\n");
  }

 private:
  json j_;
  std::string out_dir_;
  std::chrono::steady_clock::time_point t0_;
};

ggr::Family parse_model_name(const std::string& name) {
  using ggr::Family;
  if (name == "ggrician") return Family::ggrician_amplitude;
  if (name == "rician") return Family::rician;
  if (name == "rayleigh") return Family::rayleigh;
  if (name == "nakagami-rice") return Family::nakagami_rice;
  if (name == "laplace-rician") return Family::laplace_rician;
  if (name == "ggr") return Family::ggr;
  if (name == "weibull") return Family::weibull;
  if (name == "lognormal") return Family::lognormal;
  if (name == "g0") return Family::g0;
  if (name == "ggd") return Family::ggamma;
  if (name == "sr") return Family::stable_rayleigh;
  if (name == "gamma") return Family::gamma_looks;
  if (name == "exponential") return Family::exponential;
  throw UsageError(
      "unknown model '" + name +
      "'; supported: ggrician, rician, rayleigh, nakagami-rice, "
      "laplace-rician, ggr, weibull, lognormal, g0, ggd, sr, gamma, "
      "exponential");
}

ggr::SampleSet load_input_samples(const std::string& path,
                                  const std::string& domain_flag,
                                  bool domain_given) {
  ggr::SampleSet s;
  try {
    s = ggr::load_csv_samples(path);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
  auto tag = csv_domain_tag(path);
  if (domain_given) {
    ggr::SampleDomain want = parse_domain(domain_flag);
    if (tag && parse_domain(*tag) != want)
      throw UsageError("--domain " + domain_flag +
                       " conflicts with the file's domain tag '" + *tag + "'");
    s.domain = want;
  }
  return s;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  double alpha = 2.0, gamma = 1.0, delta = 0.0;
  std::size_t n = 1500;
  std::uint64_t seed = 0, stream_id = 0;
  std::string out;
  std::string domain = "amplitude";
};

int cmd_synth(const SynthArgs& a) {
  ggr::GGRicianParams p{a.alpha, a.gamma, a.delta};
  try {
    p.validate();
    if (a.n < 1) throw std::invalid_argument("--n must be >= 1");
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  ensure_out_dir(a.out);
  Manifest man("synth", a.out);
  ggr::RngStream rng(a.seed, a.stream_id);
  ggr::SampleSet s = ggr::sample_ggrician(a.n, p, rng);
  if (parse_domain(a.domain) == ggr::SampleDomain::intensity) {
    for (double& v : s.values) v = v * v;
    s.domain = ggr::SampleDomain::intensity;
  }
  ggr::write_csv_samples(s, a.out + "/samples.csv");
  man.fields()["params"] = {{"alpha", a.alpha},
                            {"gamma", a.gamma},
                            {"delta", a.delta}};
  man.fields()["n"] = a.n;
  man.fields()["seed"] = a.seed;
  man.fields()["stream_id"] = a.stream_id;
  man.fields()["domain"] = a.domain;
  man.fields()["outputs"] = {"samples.csv"};
  man.finalize();
  return 0;
}

// ---- fit ------------------------------------------------------------------

struct FitArgs {
  std::string input, out;
  std::string domain = "amplitude";
  bool domain_given = false;
  MhFlags mh;
  int quad_nodes = 256;
};

json fit_result_json(const ggr::FitResult& f) {
  json j;
  j["posterior_mean"] = {{"alpha", f.posterior_mean[0]},
                         {"delta", f.posterior_mean[1]},
                         {"gamma", f.posterior_mean[2]}};
  j["posterior_std"] = {{"alpha", f.posterior_std[0]},
                        {"delta", f.posterior_std[1]},
                        {"gamma", f.posterior_std[2]}};
  j["final_loglik"] = f.final_loglik;
  const char* moves[3] = {"m1_delta", "m2_gamma", "m3_alpha"};
  json acc;
  for (int k = 0; k < 3; ++k) {
    acc[moves[k]] = {{"proposed", f.proposed[k]},
                     {"accepted", f.accepted[k]},
                     {"rate", f.proposed[k] > 0
                                  ? double(f.accepted[k]) / f.proposed[k]
                                  : 0.0}};
  }
  j["acceptance"] = acc;
  j["burn_in"] = f.burn_in;
  j["iterations"] = f.alpha_trace.size();
  return j;
}

int cmd_fit(const FitArgs& a) {
  ggr::MhConfig cfg = a.mh.config();
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  ggr::SampleSet s = load_input_samples(a.input, a.domain, a.domain_given);
  ensure_out_dir(a.out);
  Manifest man("fit", a.out);
  ggr::QuadratureRule q(a.quad_nodes);
  ggr::FitResult f = ggr::mh_fit(s, cfg, q);
  json j = fit_result_json(f);
  j["n"] = s.values.size();
  write_text(a.out + "/fit.json", j.dump(2) + "\n");
  ggr::write_trace_csv(f, a.out + "/trace.csv");
  man.fields()["input"] = a.input;
  man.fields()["domain"] =
      s.domain == ggr::SampleDomain::amplitude ? "amplitude" : "intensity";
  man.fields()["mh"] = a.mh.echo();
  man.fields()["quad_nodes"] = a.quad_nodes;
  man.fields()["outputs"] = {"fit.json", "trace.csv"};
  man.finalize();
  return 0;
}

// ---- compare --------------------------------------------------------------

struct CompareArgs {
  std::string input, out;
  std::string domain = "amplitude";
  bool domain_given = false;
  std::vector<std::string> models;
  MhFlags mh;
  int quad_nodes = 256;
  std::size_t downsample_n = 7500;
  std::size_t downsample_threshold = 10000;
  int ref_iters = 3000;
  double looks = 1.0;
};

void write_curve_csv(const std::string& path, const ggr::Histogram& h,
                     const ggr::ModelSpec& m, const ggr::QuadratureRule& q) {
  // dense grid from 0 so the model column integrates cleanly by trapezoid
  const int grid_n = 512;
  double hi = h.edges.back() * 1.05;
  std::ostringstream os;
  os.precision(12);
  os << "x,model_pdf,histogram_density\n";
  for (int i = 0; i < grid_n; ++i) {
    double x = hi * i / (grid_n - 1.0);
    double hd = 0.0;
    if (x >= h.edges.front() && x <= h.edges.back()) {
      int b = static_cast<int>((x - h.edges.front()) /
                               (h.edges[1] - h.edges[0]));
      if (b >= h.bins()) b = h.bins() - 1;
      hd = h.densities[b];
    }
    os << x << ',' << ggr::pdf(m, x, q) << ',' << hd << '\n';
  }
  write_text(path, os.str());
}

int cmd_compare(const CompareArgs& a) {
  if (a.models.empty()) throw UsageError("at least one model is required");
  std::vector<ggr::Family> fams;
  for (const auto& name : a.models) fams.push_back(parse_model_name(name));

  ggr::SampleSet s = load_input_samples(a.input, a.domain, a.domain_given);
  if (s.values.size() > a.downsample_threshold &&
      a.downsample_n < s.values.size())
    s = ggr::sorted_downsample(s.values, a.downsample_n, s.domain);

  ensure_out_dir(a.out);
  Manifest man("compare", a.out);
  ggr::QuadratureRule q(a.quad_nodes);
  ggr::Histogram h = ggr::build_histogram(s);

  std::vector<ggr::GofReport> reports;
  std::vector<std::string> outputs;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    ggr::ModelSpec fitted{};
    if (fams[i] == ggr::Family::ggrician_amplitude) {
      ggr::MhConfig cfg = a.mh.config();
      ggr::FitResult f = ggr::mh_fit(s, cfg, q);
      ggr::GGRicianParams p{f.posterior_mean[0], f.posterior_mean[2],
                            f.posterior_mean[1]};
      fitted = s.domain == ggr::SampleDomain::intensity
                   ? ggr::ModelSpec::ggrician_intensity(p)
                   : ggr::ModelSpec::ggrician_amplitude(p);
    } else {
      ggr::ReferenceFitConfig rc;
      rc.n_iter = a.ref_iters;
      rc.seed = a.mh.seed;
      rc.stream_id = a.mh.stream_id + 1 + i;
      rc.looks = a.looks;
      fitted = ggr::fit_reference(fams[i], s, rc, q);
    }
    reports.push_back(ggr::evaluate_model(s, fitted, q));
    std::string curve = "curve_" + a.models[i] + ".csv";
    write_curve_csv(a.out + "/" + curve, h, fitted, q);
    outputs.push_back(curve);
  }

  write_text(a.out + "/reports.json", ggr::reports_to_json(reports) + "\n");
  std::ostringstream csv;
  csv << ggr::report_csv_header() << '\n';
  for (const auto& r : reports) csv << ggr::report_to_csv_row(r) << '\n';
  write_text(a.out + "/reports.csv", csv.str());
  write_text(a.out + "/scores.csv",
             ggr::scores_to_csv(ggr::score_models({reports})));
  outputs.insert(outputs.begin(), {"reports.json", "reports.csv",
                                   "scores.csv"});

  man.fields()["input"] = a.input;
  man.fields()["models"] = a.models;
  man.fields()["domain"] =
      s.domain == ggr::SampleDomain::amplitude ? "amplitude" : "intensity";
  man.fields()["mh"] = a.mh.echo();
  man.fields()["quad_nodes"] = a.quad_nodes;
  man.fields()["downsample_n"] = a.downsample_n;
  man.fields()["ref_iters"] = a.ref_iters;
  man.fields()["n_used"] = s.values.size();
  man.fields()["outputs"] = outputs;
  man.finalize();
  return 0;
}

// ---- map ------------------------------------------------------------------

struct MapArgs {
  std::string input, out;
  std::string format = "pgm";
  std::string domain = "amplitude";
  int patch_size = 250;
  MhFlags mh;
  int quad_nodes = 256;
  std::size_t downsample_n = 7500;
};

int cmd_map(const MapArgs& a) {
  if (a.patch_size < 2) throw UsageError("--patch-size must be >= 2");
  ggr::FileFormat fmt;
  try {
    fmt = ggr::parse_format(a.format);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (fmt == ggr::FileFormat::csv)
    throw UsageError("map needs raster input (pgm or raw-f32)");
  ggr::RasterImage img;
  try {
    img = ggr::load_raster(a.input, fmt);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
  img.domain = parse_domain(a.domain);

  ensure_out_dir(a.out);
  Manifest man("map", a.out);
  ggr::PatchFitOptions opt;
  opt.patch_size = a.patch_size;
  opt.downsample_n = a.downsample_n;
  opt.mh = a.mh.config();
  try {
    opt.mh.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  ggr::QuadratureRule q(a.quad_nodes);
  ggr::ParameterMap map = ggr::fit_patches(img, opt, q);
  ggr::write_parameter_map_grids(map, a.out);
  man.fields()["input"] = a.input;
  man.fields()["format"] = a.format;
  man.fields()["domain"] = a.domain;
  man.fields()["patch_size"] = a.patch_size;
  man.fields()["downsample_n"] = a.downsample_n;
  man.fields()["mh"] = a.mh.echo();
  man.fields()["quad_nodes"] = a.quad_nodes;
  man.fields()["map"] = json::parse(ggr::parameter_map_manifest_json(map));
  man.fields()["outputs"] = {"alpha.csv", "delta.csv", "gamma.csv"};
  man.finalize();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GG-Rician SAR amplitude/intensity modeling toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SynthArgs sa;
  CLI::App* synth = app.add_subcommand("synth", "generate GG-Rician samples");
  synth->add_option("--alpha", sa.alpha, "shape")->required();
  synth->add_option("--gamma", sa.gamma, "scale")->required();
  synth->add_option("--delta", sa.delta, "location")->required();
  synth->add_option("--n", sa.n, "sample count")->required();
  synth->add_option("--seed", sa.seed, "RNG seed");
  synth->add_option("--stream-id", sa.stream_id, "RNG stream id");
  synth->add_option("--domain", sa.domain, "amplitude|intensity");
  synth->add_option("--out", sa.out, "output directory")->required();

  FitArgs fa;
  CLI::App* fit = app.add_subcommand("fit", "MCMC fit of the GG-Rician model");
  fit->add_option("--input", fa.input, "sample CSV")->required();
  auto* fdom = fit->add_option("--domain", fa.domain, "amplitude|intensity");
  fa.mh.attach(fit);
  fit->add_option("--quad-nodes", fa.quad_nodes, "GL nodes per panel");
  fit->add_option("--out", fa.out, "output directory")->required();

  CompareArgs ca;
  CLI::App* cmp = app.add_subcommand("compare", "goodness-of-fit comparison");
  cmp->add_option("--input", ca.input, "sample CSV")->required();
  cmp->add_option("--models", ca.models, "comma-separated model list")
      ->required()
      ->delimiter(',');
  auto* cdom = cmp->add_option("--domain", ca.domain, "amplitude|intensity");
  ca.mh.attach(cmp);
  cmp->add_option("--quad-nodes", ca.quad_nodes, "GL nodes per panel");
  cmp->add_option("--downsample-n", ca.downsample_n, "down-sampling target");
  cmp->add_option("--ref-iters", ca.ref_iters,
                  "iterations for reference-family fits");
  cmp->add_option("--looks", ca.looks, "fixed L for g0/gamma");
  cmp->add_option("--out", ca.out, "output directory")->required();

  MapArgs ma;
  CLI::App* mp = app.add_subcommand("map", "per-patch parameter map");
  mp->add_option("--input", ma.input, "raster input")->required();
  mp->add_option("--format", ma.format, "pgm|raw-f32");
  mp->add_option("--domain", ma.domain, "amplitude|intensity");
  mp->add_option("--patch-size", ma.patch_size, "patch edge in pixels");
  ma.mh.attach(mp);
  mp->add_option("--quad-nodes", ma.quad_nodes, "GL nodes per panel");
  mp->add_option("--downsample-n", ma.downsample_n, "per-patch target");
  mp->add_option("--out", ma.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  fa.domain_given = fdom->count() > 0;
  ca.domain_given = cdom->count() > 0;

  try {
    if (synth->parsed()) return cmd_synth(sa);
    if (fit->parsed()) return cmd_fit(fa);
    if (cmp->parsed()) return cmd_compare(ca);
    if (mp->parsed()) return cmd_map(ma);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
