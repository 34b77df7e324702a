#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "etm/exact_family.hpp"
#include "etm/geometry.hpp"
#include "etm/graph.hpp"
#include "etm/mcmc.hpp"
#include "etm/variational.hpp"
#include "etm/verify.hpp"
#include "svg.hpp"

namespace etm {

namespace {

using nlohmann::ordered_json;

struct ScalarPair {
  Rational x, y;
  bool exact;  // both components written as integers or fractions
};

ScalarPair parse_pair(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError(std::string(what) + " expects two comma-separated values");
  const auto a = parse_scalar(text.substr(0, comma));
  const auto b = parse_scalar(text.substr(comma + 1));
  if (!a || !b) throw CLI::ValidationError(std::string(what) + ": cannot parse number");
  return {a->value, b->value, a->exact_text && b->exact_text};
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  auto f = std::make_unique<std::ofstream>(path);
  if (!*f) throw CLI::ValidationError("cannot open output file " + path);
  return f;
}

// name -> argv fragment; built-in figure presets, optionally extended from a
// plain-text file of "name = --flag value ..." lines.
std::map<std::string, std::vector<std::string>> load_presets(const std::string& path,
                                                             std::ostream& err) {
  std::map<std::string, std::vector<std::string>> presets;
  for (const auto* p : {"fig4", "fig2", "fig3_1", "fig3_2"}) {
    const PresetSpec* spec = find_preset(p);
    char b1[32], b2[32];
    std::snprintf(b1, sizeof b1, "%g", spec->beta1());
    std::snprintf(b2, sizeof b2, "%g", spec->beta2());
    presets[p] = {"sample",
                  "--n",
                  std::to_string(spec->n),
                  "--beta",
                  std::string(b1) + "," + b2,
                  "--init",
                  "turan:" + std::to_string(spec->predicted_classes),
                  "--steps",
                  "1000000",
                  "--seed",
                  "1",
                  "--thin",
                  "1000"};
  }
  if (path.empty()) return presets;
  std::ifstream f(path);
  if (!f) {
    err << "warning: cannot read presets file " << path << "\n";
    return presets;
  }
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string name = line.substr(0, eq);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    std::istringstream rest(line.substr(eq + 1));
    std::vector<std::string> tokens;
    std::string tok;
    while (rest >> tok) tokens.push_back(tok);
    if (!name.empty() && !tokens.empty()) presets[name] = std::move(tokens);
  }
  return presets;
}

ordered_json class_to_json(const ExtremalClass& cls) {
  ordered_json params = ordered_json::object();
  const char* name = "";
  using K = ExtremalClass::Kind;
  switch (cls.kind) {
    case K::Empty: name = "empty"; break;
    case K::Complete: name = "complete"; break;
    case K::EmptyOrComplete: name = "empty_or_complete"; break;
    case K::Turan:
      name = "turan";
      params["classes"] = cls.classes;
      break;
    case K::TuranPair:
      name = "turan_pair";
      params["classes"] = {cls.classes, cls.classes_hi};
      break;
    case K::DilutedBipartite:
      name = "diluted_bipartite";
      params["p"] = cls.p;
      break;
  }
  return ordered_json{{"class", name}, {"parameters", std::move(params)}};
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double z = std::exp(x);
  return z / (1.0 + z);
}

// The limit structure selected by a parameter ray along direction o, resolved
// with the base point beta on critical rays.
ExtremalClass class_from_ray(const RayClassification& ray, const ScalarPair* beta) {
  ExtremalClass cls{};
  using K = ExtremalClass::Kind;
  switch (ray.kind) {
    case RayClassification::Kind::ConeAtOne:
      cls.kind = K::Complete;
      return cls;
    case RayClassification::Kind::InteriorCone:
      if (ray.k == 0) {
        cls.kind = K::Empty;
      } else {
        cls.kind = K::Turan;
        cls.classes = ray.k + 1;
      }
      return cls;
    case RayClassification::Kind::CriticalRay: break;
  }
  const long long k = ray.k;
  if (k == -1) {
    if (beta != nullptr) {
      const Rational s = beta->x + beta->y;
      if (s > 0) cls.kind = K::Complete;
      else if (s < 0) cls.kind = K::Empty;
      else cls.kind = K::EmptyOrComplete;
    } else {
      cls.kind = K::EmptyOrComplete;
    }
    return cls;
  }
  if (k == 0) {
    cls.kind = K::DilutedBipartite;
    cls.p = sigmoid(2 * (beta != nullptr ? to_double(beta->x) : 0.0));
    return cls;
  }
  const int side = beta != nullptr ? hyperplane_side(k, Vec2{beta->x, beta->y}) : 0;
  if (beta == nullptr) {
    cls.kind = K::TuranPair;
    cls.classes = k + 1;
    cls.classes_hi = k + 2;
  } else {
    cls.kind = K::Turan;
    cls.classes = side >= 0 ? k + 2 : k + 1;  // the tie side resolves upward
  }
  return cls;
}

void setup_classify(CLI::App& app, std::ostream& out) {
  auto* cmd = app.add_subcommand("classify", "classify a parameter ray or line");
  auto direction = std::make_shared<std::string>();
  auto beta = std::make_shared<std::string>();
  auto line = std::make_shared<std::string>();
  auto limit = std::make_shared<std::string>();
  cmd->add_option("--direction", *direction, "ray direction X,Y (fractions stay exact)");
  cmd->add_option("--beta", *beta, "base point B1,B2 for critical-ray resolution");
  cmd->add_option("--line", *line, "slope and intercept a,b");
  cmd->add_option("--limit", *limit, "+inf or -inf (with --line)")
      ->check(CLI::IsMember({"+inf", "-inf"}));

  cmd->callback([&out, direction, beta, line, limit] {
    if (!direction->empty() == !line->empty())
      throw CLI::ValidationError("classify needs exactly one of --direction or --line");

    if (!direction->empty()) {
      const ScalarPair o = parse_pair(*direction, "--direction");
      if (o.x == 0 && o.y == 0) throw CLI::ValidationError("--direction must be nonzero");
      const RayClassification ray =
          o.exact ? classify_direction(Vec2{o.x, o.y})
                  : classify_direction(to_double(o.x), to_double(o.y));

      std::unique_ptr<ScalarPair> base;
      if (!beta->empty()) base = std::make_unique<ScalarPair>(parse_pair(*beta, "--beta"));

      ordered_json doc;
      doc["input"]["direction"] = {to_double(o.x), to_double(o.y)};
      doc["input"]["direction_exact"] = {to_fraction_string(o.x), to_fraction_string(o.y)};
      if (base)
        doc["input"]["beta"] = {to_double(base->x), to_double(base->y)};
      else
        doc["input"]["beta"] = nullptr;

      const char* kind = ray.kind == RayClassification::Kind::ConeAtOne ? "cone_at_one"
                         : ray.kind == RayClassification::Kind::CriticalRay ? "critical_ray"
                                                                            : "interior_cone";
      doc["ray"] = {{"kind", kind}, {"k", ray.k}, {"near_critical", ray.near_critical}};
      if (ray.near_critical) doc["ray"]["nearest_critical"] = ray.nearest_critical;

      const ExtremalClass cls = class_from_ray(ray, base.get());
      doc.update(class_to_json(cls));
      if (ray.kind == RayClassification::Kind::CriticalRay && ray.k >= 1 && base) {
        const int side = hyperplane_side(ray.k, Vec2{base->x, base->y});
        doc["hyperplane_side"] = side > 0 ? "+" : side < 0 ? "-" : "0";
      }
      out << doc.dump(2) << "\n";
      return;
    }

    if (limit->empty()) throw CLI::ValidationError("--line needs --limit +inf|-inf");
    const ScalarPair ab = parse_pair(*line, "--line");
    const LimitSign sign = *limit == "+inf" ? LimitSign::PlusInf : LimitSign::MinusInf;
    const LineClassification res = ab.exact
                                       ? classify_line_exact(ab.x, ab.y, sign)
                                       : classify_line({to_double(ab.x), to_double(ab.y), sign});
    out << classification_json({to_double(ab.x), to_double(ab.y), sign}, res) << "\n";
  });
}

void setup_boundary(CLI::App& app, std::ostream& out) {
  auto* cmd = app.add_subcommand("boundary", "sample the feasible-region boundary");
  auto resolution = std::make_shared<int>(0);
  auto out_path = std::make_shared<std::string>();
  auto svg_path = std::make_shared<std::string>();
  cmd->add_option("--resolution", *resolution, "number of e samples")->required();
  cmd->add_option("--out", *out_path, "CSV output path (stdout if omitted)");
  cmd->add_option("--svg", *svg_path, "optional SVG rendering");

  cmd->callback([&out, resolution, out_path, svg_path] {
    const auto rows = boundary_samples(*resolution);
    if (out_path->empty()) {
      write_boundary_csv(out, rows);
    } else {
      auto f = open_out(*out_path);
      write_boundary_csv(*f, rows);
    }
    if (!svg_path->empty()) {
      svg::Plot plot;
      std::vector<std::pair<double, double>> lower, upper, vertices;
      for (const auto& r : rows) {
        lower.emplace_back(r.e, r.lower);
        upper.emplace_back(r.e, r.upper);
        if (r.vertex_k >= 0) vertices.emplace_back(r.e, r.lower);
      }
      plot.polyline(lower, "#1f77b4");
      plot.polyline(upper, "#d62728");
      plot.points(vertices, "#000000", 3);
      auto f = open_out(*svg_path);
      plot.write(*f);
    }
  });
}

void setup_cones(CLI::App& app, std::ostream& out) {
  auto* cmd = app.add_subcommand("cones", "emit the normal-cone complex as JSON");
  auto max_k = std::make_shared<long long>(40);
  auto out_path = std::make_shared<std::string>();
  cmd->add_option("--max-k", *max_k, "largest cone index (default 40)");
  cmd->add_option("--out", *out_path, "output path (stdout if omitted)");
  cmd->callback([&out, max_k, out_path] {
    const std::string json = cone_complex_json(*max_k);
    if (out_path->empty()) out << json << "\n";
    else *open_out(*out_path) << json << "\n";
  });
}

void setup_enumerate(CLI::App& app, std::ostream& out, std::ostream& err) {
  auto* cmd = app.add_subcommand("enumerate", "exact (E,T) histogram over all labeled graphs");
  auto n = std::make_shared<int>(0);
  auto allow_large = std::make_shared<bool>(false);
  auto threads = std::make_shared<int>(0);
  auto out_path = std::make_shared<std::string>();
  cmd->add_option("--n", *n, "node count (2..7; 8 with --allow-large)")->required();
  cmd->add_flag("--allow-large", *allow_large, "permit the 2^28-graph run at n=8");
  cmd->add_option("--threads", *threads, "worker threads (0 = auto)");
  cmd->add_option("--out", *out_path, "CSV output path (stdout if omitted)");
  cmd->callback([&out, &err, n, allow_large, threads, out_path] {
    EnumerateOptions opts;
    opts.allow_large = *allow_large;
    opts.threads = *threads;
    if (*allow_large) {
      opts.progress = [&err](std::uint64_t done, std::uint64_t total) {
        err << "\renumerating: " << 100 * done / total << "%" << std::flush;
      };
    }
    const SupportTable table = enumerate_support(*n, opts);
    if (*allow_large) err << "\rdone            \n";
    if (out_path->empty()) write_support_csv(out, table);
    else write_support_csv(*open_out(*out_path), table);
  });
}

void setup_family(CLI::App& app, std::ostream& out) {
  auto* cmd = app.add_subcommand("family", "distributions of the finite exponential family");
  auto n = std::make_shared<int>(0);
  auto beta = std::make_shared<std::string>("0,0");
  auto kind = std::make_shared<std::string>("full");
  auto k = std::make_shared<int>(1);
  auto out_path = std::make_shared<std::string>();
  cmd->add_option("--n", *n, "node count")->required();
  cmd->add_option("--beta", *beta, "natural parameter B1,B2");
  cmd->add_option("--kind", *kind, "full | two-point | edge-complete | triangle-free")
      ->check(CLI::IsMember({"full", "two-point", "edge-complete", "triangle-free"}));
  cmd->add_option("--k", *k, "facet index for --kind two-point");
  cmd->add_option("--out", *out_path, "output path (stdout if omitted)");

  cmd->callback([&out, n, beta, kind, k, out_path] {
    const ScalarPair b = parse_pair(*beta, "--beta");
    const double b1 = to_double(b.x), b2 = to_double(b.y);
    Distribution dist;
    if (*kind == "full") {
      dist = to_distribution(exact_family(enumerate_support(*n), b1, b2));
    } else if (*kind == "two-point") {
      dist = closure_two_point(*n, *k, b1, b2).distribution();
    } else if (*kind == "edge-complete") {
      dist = edge_complete_family(*n, b1, b2);
    } else {
      dist = triangle_free_family(enumerate_support(*n), b1);
    }
    const std::string json = distribution_json(dist);
    if (out_path->empty()) out << json << "\n";
    else *open_out(*out_path) << json << "\n";
  });
}

void setup_sample(CLI::App& app, std::ostream& out) {
  auto* cmd = app.add_subcommand("sample", "run the Metropolis chain");
  auto n = std::make_shared<int>(0);
  auto beta = std::make_shared<std::string>("0,0");
  auto steps = std::make_shared<std::uint64_t>(100000);
  auto seed = std::make_shared<std::uint64_t>(1);
  auto init = std::make_shared<std::string>("empty");
  auto thin = std::make_shared<std::uint64_t>(100);
  auto traj_path = std::make_shared<std::string>();
  auto graph_path = std::make_shared<std::string>();
  auto report_path = std::make_shared<std::string>();
  auto svg_path = std::make_shared<std::string>();
  cmd->add_option("--n", *n, "node count")->required()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--beta", *beta, "natural parameter B1,B2")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--steps", *steps, "proposal count")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--seed", *seed, "RNG seed (splitmix64 stream)")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--init", *init, "empty | complete | turan:R | random:P")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--thin", *thin, "recording interval")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--traj", *traj_path, "trajectory CSV path");
  cmd->add_option("--graph", *graph_path, "final graph edge-list path");
  cmd->add_option("--report", *report_path, "report JSON path (stdout if omitted)");
  cmd->add_option("--svg", *svg_path, "trajectory rendering over the boundary");

  cmd->callback([&out, n, beta, steps, seed, init, thin, traj_path, graph_path, report_path,
                 svg_path] {
    const ScalarPair b = parse_pair(*beta, "--beta");
    SamplerConfig config{*n,    to_double(b.x),         to_double(b.y), *steps,
                         *seed, InitSpec::parse(*init), *thin};
    const Trajectory traj = run(config);

    if (!traj_path->empty()) write_trajectory_csv(*open_out(*traj_path), traj);
    if (!graph_path->empty()) write_edge_list(*open_out(*graph_path), traj.final_graph);
    if (!svg_path->empty()) {
      svg::Plot plot;
      const auto rows = boundary_samples(512);
      std::vector<std::pair<double, double>> lower, upper, path;
      for (const auto& r : rows) {
        lower.emplace_back(r.e, r.lower);
        upper.emplace_back(r.e, r.upper);
      }
      for (const auto& rec : traj.records) path.emplace_back(rec.e, rec.t);
      plot.polyline(lower, "#1f77b4");
      plot.polyline(upper, "#d62728");
      plot.polyline(path, "#2ca02c", 1.0);
      plot.points({path.back()}, "#000000", 4);
      plot.write(*open_out(*svg_path));
    }

    const Partition part = partition_recovery(traj.final_graph);
    ordered_json doc;
    doc["config"] = {{"n", config.n},       {"beta", {config.beta1, config.beta2}},
                     {"steps", config.steps}, {"seed", config.seed},
                     {"init", config.init.name()}, {"thin", config.thin}};
    doc["rng"] = "splitmix64";
    doc["acceptance_rate"] = traj.acceptance_rate;
    doc["final"] = {{"e", traj.records.back().e},
                    {"t", traj.records.back().t},
                    {"edges", traj.final_edges},
                    {"triangles", traj.final_triangles}};
    doc["partition"] = {{"classes", part.classes.size()}, {"misfit", part.misfit}};
    if (report_path->empty()) out << doc.dump(2) << "\n";
    else *open_out(*report_path) << doc.dump(2) << "\n";
  });
}

void setup_mode_check(CLI::App& app, std::ostream& out) {
  auto* cmd = app.add_subcommand("mode-check", "deterministic Turan mode comparison");
  auto n = std::make_shared<int>(0);
  auto beta = std::make_shared<std::string>("0,0");
  auto out_path = std::make_shared<std::string>();
  cmd->add_option("--n", *n, "node count")->required()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--beta", *beta, "natural parameter B1,B2")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--out", *out_path, "output path (stdout if omitted)");
  cmd->callback([&out, n, beta, out_path] {
    const ScalarPair b = parse_pair(*beta, "--beta");
    const double b1 = to_double(b.x), b2 = to_double(b.y);
    const ModeCheck mode = turan_mode_check(*n, b1, b2);
    const std::string json = mode_check_json(*n, b1, b2, mode);
    if (out_path->empty()) out << json << "\n";
    else *open_out(*out_path) << json << "\n";
  });
}

void setup_verify(CLI::App& app, std::ostream& out, std::ostream& err, int& exit_code) {
  auto* cmd = app.add_subcommand("verify", "run the built-in verification suites");
  auto suite = std::make_shared<std::string>("all");
  auto out_path = std::make_shared<std::string>();
  cmd->add_option("--suite", *suite, "geometry | exact | closure | variational | mcmc | all")
      ->check(CLI::IsMember({"geometry", "exact", "closure", "variational", "mcmc", "all"}));
  cmd->add_option("--out", *out_path, "report path (stdout if omitted)");
  cmd->callback([&out, &err, &exit_code, suite, out_path] {
    const auto results = run_acceptance_suite(*suite);
    for (const auto& r : results) {
      err << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << " (" << r.seconds
          << "s) " << r.detail << "\n";
    }
    const std::string json = suite_report_json(*suite, results);
    if (out_path->empty()) out << json << "\n";
    else *open_out(*out_path) << json << "\n";
    if (!all_passed(results)) exit_code = 1;
  });
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  // --preset NAME expands to a stored flag set before normal parsing.
  std::string presets_file;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--presets-file") {
      presets_file = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
  }
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] != "--preset") continue;
    const auto presets = load_presets(presets_file, err);
    const auto it = presets.find(args[i + 1]);
    if (it == presets.end()) {
      err << "error: unknown preset " << args[i + 1] << "\n";
      return 2;
    }
    std::vector<std::string> expanded(args.begin(), args.begin() + i);
    expanded.insert(expanded.end(), it->second.begin(), it->second.end());
    expanded.insert(expanded.end(), args.begin() + i + 2, args.end());
    args = std::move(expanded);
    break;
  }

  CLI::App app{"edge-triangle random graph toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;
  setup_classify(app, out);
  setup_boundary(app, out);
  setup_cones(app, out);
  setup_enumerate(app, out, err);
  setup_family(app, out);
  setup_sample(app, out);
  setup_mode_check(app, out);
  setup_verify(app, out, err, exit_code);

  std::vector<const char*> argv{"etm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help and friends
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

}  // namespace etm
