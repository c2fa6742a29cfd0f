// Command-line front end: build groupoid models, certify spectral gaps,
// compute Kazhdan projections, and run the HLS / expander experiments.

#include <CLI11.hpp>
#include <iostream>

#include "gpdt/io.hpp"
#include "gpdt/kazhdan.hpp"

using namespace gpdt;

namespace {

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  std::size_t cap = kDefaultClosureCap;
  double tol_zero = 1e-9;
  std::string format = "csv";  // csv | json for tabular commands
  bool dump_matrix = false;

  Tolerances tolerances() const {
    if (!(tol_zero > 0)) throw IoError("config: tolerances must be positive");
    Tolerances t;
    t.tau_zero = tol_zero;
    t.tau_psd = tol_zero;
    return t;
  }
};

// --config JSON supplies defaults; explicitly passed flags win
void merge_config(const std::string& path, const CLI::App& app, RunConfig& cfg) {
  if (path.empty()) return;
  json j = read_json_file(path);
  if (app.count("--seed") == 0 && j.contains("seed"))
    cfg.seed = j.at("seed").get<std::uint64_t>();
  if (app.count("--cap") == 0 && j.contains("cap"))
    cfg.cap = j.at("cap").get<std::size_t>();
  if (app.count("--tol-zero") == 0 && j.contains("tol_zero"))
    cfg.tol_zero = j.at("tol_zero").get<double>();
  if (app.count("--format") == 0 && j.contains("format"))
    cfg.format = j.at("format").get<std::string>();
  if (!cfg.dump_matrix && j.contains("dump_matrix"))
    cfg.dump_matrix = j.at("dump_matrix").get<bool>();
}

// split on commas at bracket depth zero (arrow labels contain commas)
std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string token;
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      if (!token.empty()) out.push_back(token);
      token.clear();
    } else {
      token += c;
    }
  }
  if (!token.empty()) out.push_back(token);
  return out;
}

std::vector<int> resolve_generators(const LoadedGroupoid& lg,
                                    const std::string& spec) {
  std::vector<int> out;
  if (spec.empty()) {
    for (const auto& [name, arrow] : lg.named_generators) out.push_back(arrow);
    if (out.empty())
      throw Error("no generators available for this spec type; pass --generators");
    return out;
  }
  for (const std::string& token : split_commas(spec)) {
    auto it = lg.named_generators.find(token);
    int arrow = it != lg.named_generators.end() ? it->second
                                                : lg.groupoid->index_of(token);
    if (arrow < 0) throw Error("unknown generator or arrow label: " + token);
    out.push_back(arrow);
  }
  if (out.empty()) throw Error("empty generator list");
  return out;
}

HlsChain parse_chain(const std::string& parent, const std::string& kernels,
                     std::size_t depth) {
  HlsChain chain;
  if (parent == "Z")
    chain.parent = HlsChain::Parent::Z;
  else if (parent == "SL2Z")
    chain.parent = HlsChain::Parent::SL2Z;
  else
    throw IoError("parent must be 'Z' or 'SL2Z'");
  if (kernels == "pow2") {
    long k = 2;
    for (std::size_t i = 0; i < depth; ++i, k *= 2) chain.levels.push_back(k);
  } else {
    for (const std::string& token : split_commas(kernels))
      chain.levels.push_back(std::stol(token));
  }
  if (chain.levels.size() < depth)
    throw IoError("kernel list is shorter than the requested depth");
  return chain;
}

json certificate_to_json(const KazhdanCertificate& cert) {
  json per_rep = json::array();
  for (const RepGapEntry& e : cert.per_rep)
    per_rep.push_back(
        {{"rep", e.rep}, {"gap", e.vacuous ? json("vacuous") : json(e.gap)}});
  return json{{"family_size", cert.family_size},
              {"lambda1", cert.vacuous ? json("vacuous") : json(cert.lambda1)},
              {"constant", cert.vacuous ? json("vacuous") : json(cert.constant)},
              {"rep_family", cert.rep_family},
              {"per_rep", per_rep},
              {"min_margin", cert.min_margin},
              {"sound", cert.sound}};
}

int cmd_build(const std::string& path, const RunConfig& cfg) {
  LoadedGroupoid lg = load_groupoid_file(path, cfg.cap);
  ValidateOptions vopts;
  vopts.max_triples = 20'000'000;
  vopts.seed = cfg.seed;
  ValidationReport rep = validate(*lg.groupoid, vopts);
  OrbitDecomposition dec = orbits(*lg.groupoid);
  std::cout << "arrows=" << lg.groupoid->arrow_count()
            << " units=" << lg.groupoid->unit_count()
            << " orbits=" << dec.orbits.size() << "\n";
  if (rep.associativity_sampled)
    std::cout << "associativity: sampled " << rep.triples_checked << " triples\n";
  for (const Diagnostic& d : rep.diagnostics)
    std::cout << "diagnostic: " << d.axiom << ": " << d.detail << "\n";
  return rep.ok() ? 0 : 1;
}

int cmd_gap(const std::string& path, const std::string& generators,
            const RunConfig& cfg) {
  LoadedGroupoid lg = load_groupoid_file(path, cfg.cap);
  // the family is the given generators exactly, one delta per arrow
  std::vector<AlgebraElement> members;
  for (int a : resolve_generators(lg, generators))
    members.push_back(AlgebraElement::delta(lg.groupoid, a));
  BisectionFamily family =
      BisectionFamily::from_elements(lg.groupoid, std::move(members));
  KazhdanCertificate cert =
      kazhdan_constant(lg.groupoid, family, default_representations(lg.groupoid),
                       cfg.tolerances(), cfg.seed);
  if (cfg.format == "json") {
    std::cout << certificate_to_json(cert).dump(2) << "\n";
  } else {
    std::cout << "lambda1=" << format_g9(cert.lambda1)
              << " n=" << cert.family_size << " c=" << format_g9(cert.constant)
              << "\n";
    std::cout << "rep,gap\n";
    for (const RepGapEntry& e : cert.per_rep)
      std::cout << e.rep << "," << (e.vacuous ? "vacuous" : format_g9(e.gap))
                << "\n";
  }
  return 0;
}

int cmd_constants(const std::string& path, const std::string& generators,
                  const RunConfig& cfg) {
  LoadedGroupoid lg = load_groupoid_file(path, cfg.cap);
  std::vector<int> gens = resolve_generators(lg, generators);
  std::vector<AlgebraElement> members;
  for (int a : gens) members.push_back(AlgebraElement::delta(lg.groupoid, a));
  BisectionFamily family =
      BisectionFamily::from_elements(lg.groupoid, std::move(members));
  KazhdanCertificate cert =
      kazhdan_constant(lg.groupoid, family, default_representations(lg.groupoid),
                       cfg.tolerances(), cfg.seed);
  json out = certificate_to_json(cert);
  json labels = json::array();
  for (int a : gens) labels.push_back(lg.groupoid->label(a));
  out["family"] = labels;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_projection(const std::string& path, const std::string& generators,
                   const RunConfig& cfg) {
  LoadedGroupoid lg = load_groupoid_file(path, cfg.cap);
  BisectionFamily family =
      canonical_family(lg.groupoid, resolve_generators(lg, generators));
  AlgebraElement p = kazhdan_projection(lg.groupoid, family, cfg.tolerances());
  ExpectationReport exp_rep = expectation_law_check(lg.groupoid, p);
  json rows = json::array();
  for (const ExpectationRow& row : exp_rep.rows)
    rows.push_back({row.unit, row.expectation, row.reciprocal_fiber});
  json out{{"projection", element_to_json(p)},
           {"expectation",
            {{"max_deviation", exp_rep.max_deviation},
             {"pass", exp_rep.pass},
             {"rows", rows}}}};
  if (cfg.dump_matrix) {
    json mats = json::object();
    for (int u : lg.groupoid->units())
      mats[lg.groupoid->label(u)] =
          matrix_to_json(regular_rep(lg.groupoid, u).realize(p));
    out["matrices"] = mats;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_hls(const std::string& parent, const std::string& kernels,
            std::size_t depth, const RunConfig& cfg) {
  HlsChain chain = parse_chain(parent, kernels, depth);
  std::vector<FiberGapRow> rows = hls_gap_profile(chain, depth, cfg.cap, cfg.seed);
  if (cfg.format == "json") {
    json out = json::array();
    for (const FiberGapRow& row : rows)
      out.push_back({{"fiber", row.fiber},
                     {"size", row.size},
                     {"gap", std::isinf(row.gap) ? json("inf") : json(row.gap)}});
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "fiber,size,gap\n";
    for (const FiberGapRow& row : rows)
      std::cout << row.fiber << "," << row.size << "," << format_g9(row.gap)
                << "\n";
  }
  return 0;
}

int cmd_expander(const std::string& path, const RunConfig& cfg) {
  json j = read_json_file(path);
  std::vector<FiniteGraph> graphs = load_graphs(j.is_array() ? j : j.at("graphs"));
  std::vector<ExpanderGapRow> rows = expander_gap_profile(graphs, cfg.seed);
  if (cfg.format == "json") {
    json out = json::array();
    for (const ExpanderGapRow& row : rows)
      out.push_back({{"index", row.index},
                     {"size", row.size},
                     {"gap", row.gap},
                     {"running_min", row.running_min}});
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "index,size,gap,runningmin\n";
    for (const ExpanderGapRow& row : rows)
      std::cout << row.index << "," << row.size << "," << format_g9(row.gap)
                << "," << format_g9(row.running_min) << "\n";
  }
  return 0;
}

int cmd_witness(const std::string& path, std::size_t m, const RunConfig& cfg) {
  LoadedGroupoid lg = load_groupoid_file(path, cfg.cap);
  if (!lg.hls) throw Error("witness requires an hls spec");
  double w = exactness_witness(*lg.hls, m, cfg.tolerances());
  std::cout << format_g9(w) << "\n";
  return 0;
}

int cmd_check_kernels(const std::string& path, const RunConfig& cfg) {
  json j = read_json_file(path);
  if (!j.contains("groupoid"))
    throw IoError("kernel file must carry a 'groupoid' spec or path");
  LoadedGroupoid lg =
      j.at("groupoid").is_string()
          ? load_groupoid_file(j.at("groupoid").get<std::string>(), cfg.cap)
          : load_groupoid(j.at("groupoid"), cfg.cap);
  KernelFunction kernel = load_kernel(j, lg.groupoid);
  Tolerances tol = cfg.tolerances();
  KernelCheck pos = check_positive_type(kernel, tol);
  std::cout << "positive-type: " << (pos.ok ? "PASS" : "FAIL");
  if (!pos.ok)
    std::cout << " (" << pos.reason
              << (pos.unit_label.empty() ? "" : " at " + pos.unit_label) << ")";
  std::cout << "\n";
  KernelCheck neg = check_negative_type(kernel, tol);
  std::cout << "negative-type: " << (neg.ok ? "PASS" : "FAIL");
  if (!neg.ok)
    std::cout << " (" << neg.reason
              << (neg.unit_label.empty() ? "" : " at " + neg.unit_label) << ")";
  std::cout << "\n";
  return 0;
}

int cmd_gns(const std::string& spec_path, const std::string& kernel_path,
            double schoenberg_t, const std::string& element_path,
            const RunConfig& cfg) {
  LoadedGroupoid lg = load_groupoid_file(spec_path, cfg.cap);
  KernelFunction kernel = load_kernel(read_json_file(kernel_path), lg.groupoid);
  Tolerances tol = cfg.tolerances();
  if (schoenberg_t > 0) {
    KernelCheck neg = check_negative_type(kernel, tol);
    if (!neg.ok)
      throw Error("--schoenberg expects a negative-type kernel (" + neg.reason + ")");
    kernel = schoenberg_transform(kernel, schoenberg_t);
  }
  MatrixRepresentation rep =
      gns_rep(lg.groupoid, kernel, uniform_measure(*lg.groupoid), tol);

  // seeded self-checks: *-homomorphism residual and the I-norm bound margin
  Rng rng(cfg.seed);
  double star_dev = 0.0, bound_margin = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    AlgebraElement f(lg.groupoid);
    for (std::size_t a = 0; a < lg.groupoid->arrow_count(); ++a)
      f.set(static_cast<int>(a), cplx(rng.uniform_pm1(), rng.uniform_pm1()));
    double n = i_norm(f);
    if (n > 0) f *= 1.0 / n;
    AlgebraElement g2 = adjoint(f);
    star_dev = std::max(
        star_dev, (rep.realize(convolve(f, g2)) - rep.realize(f) * rep.realize(g2))
                      .max_abs());
    bound_margin =
        std::max(bound_margin, operator_norm(rep.realize(f)) - i_norm(f));
  }
  json out{{"dimension", rep.dimension()},
           {"ambient_arrows", lg.groupoid->arrow_count()},
           {"star_residual", star_dev},
           {"inorm_margin", bound_margin}};
  if (!element_path.empty()) {
    AlgebraElement f = load_element(read_json_file(element_path), lg.groupoid);
    if (cfg.dump_matrix) out["matrix"] = matrix_to_json(rep.realize(f));
    out["element_norm"] = operator_norm(rep.realize(f));
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite etale groupoid models and property (T) machinery"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config supplying flag defaults");
  app.add_option("--seed", cfg.seed, "deterministic RNG seed");
  app.add_option("--cap", cfg.cap, "group closure element cap");
  app.add_option("--tol-zero", cfg.tol_zero, "nullspace / PSD tolerance");
  app.add_option("--format", cfg.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--dump-matrix", cfg.dump_matrix, "dump dense matrices (debug)");

  std::string spec_path, generators, kernels_arg, parent_arg, kernel_path,
      element_path;
  std::size_t depth = 0, cutoff = 0;
  double schoenberg_t = 0.0;

  CLI::App* build = app.add_subcommand("build", "construct and validate a groupoid spec");
  build->add_option("spec", spec_path, "groupoid spec JSON")->required();

  CLI::App* gap = app.add_subcommand("gap", "spectral gap and Kazhdan constant");
  gap->add_option("spec", spec_path)->required();
  gap->add_option("--generators", generators,
                  "comma-separated arrow labels or generator names");

  CLI::App* constants = app.add_subcommand(
      "constants", "Kazhdan certificate for the generator family as given");
  constants->add_option("spec", spec_path)->required();
  constants->add_option("--generators", generators);

  CLI::App* projection =
      app.add_subcommand("projection", "Kazhdan projection as an algebra element");
  projection->add_option("spec", spec_path)->required();
  projection->add_option("--generators", generators);

  CLI::App* hls = app.add_subcommand("hls", "per-fibre Cayley gap profile");
  hls->add_option("parent", parent_arg, "Z or SL2Z")->required();
  hls->add_option("kernels", kernels_arg, "comma-separated levels or 'pow2'")->required();
  hls->add_option("depth", depth)->required();

  CLI::App* expander = app.add_subcommand("expander", "graph-sequence gap profile");
  expander->add_option("graphs", spec_path, "graphs JSON")->required();

  CLI::App* witness =
      app.add_subcommand("witness", "inner-exactness witness for an HLS truncation");
  witness->add_option("spec", spec_path)->required();
  witness->add_option("m", cutoff, "fibre cutoff")->required();

  CLI::App* check = app.add_subcommand("check-kernels", "positive/negative type checks");
  check->add_option("kernel", kernel_path, "kernel JSON with embedded groupoid")
      ->required();

  CLI::App* gns = app.add_subcommand("gns", "GNS representation from a kernel");
  gns->add_option("spec", spec_path)->required();
  gns->add_option("kernel", kernel_path)->required();
  gns->add_option("--schoenberg", schoenberg_t,
                  "apply exp(-tF) to a negative-type kernel first");
  gns->add_option("--element", element_path, "element JSON to realize");

  try {
    app.parse(argc, argv);
    merge_config(config_path, app, cfg);
    if (build->parsed()) return cmd_build(spec_path, cfg);
    if (gap->parsed()) return cmd_gap(spec_path, generators, cfg);
    if (constants->parsed()) return cmd_constants(spec_path, generators, cfg);
    if (projection->parsed()) return cmd_projection(spec_path, generators, cfg);
    if (hls->parsed()) return cmd_hls(parent_arg, kernels_arg, depth, cfg);
    if (expander->parsed()) return cmd_expander(spec_path, cfg);
    if (witness->parsed()) return cmd_witness(spec_path, cutoff, cfg);
    if (check->parsed()) return cmd_check_kernels(kernel_path, cfg);
    if (gns->parsed())
      return cmd_gns(spec_path, kernel_path, schoenberg_t, element_path, cfg);
    return 2;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
