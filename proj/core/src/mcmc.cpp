#include "etm/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "etm/exact_family.hpp"

namespace etm {

std::uint32_t SplitMix64::below(std::uint32_t bound) {
  if (bound == 0) throw std::domain_error("SplitMix64::below: zero bound");
  const std::uint64_t limit = ~std::uint64_t(0) - ~std::uint64_t(0) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r < limit) return static_cast<std::uint32_t>(r % bound);
  }
}

InitSpec InitSpec::parse(const std::string& text) {
  if (text == "empty") return empty();
  if (text == "complete") return complete();
  if (text.rfind("turan:", 0) == 0) return turan(std::stoi(text.substr(6)));
  if (text.rfind("random:", 0) == 0) return random(std::stod(text.substr(7)));
  throw std::invalid_argument("init spec must be empty|complete|turan:R|random:P, got " + text);
}

std::string InitSpec::name() const {
  switch (kind) {
    case Kind::Empty: return "empty";
    case Kind::Complete: return "complete";
    case Kind::Turan: return "turan:" + std::to_string(turan_classes);
    case Kind::Random: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "random:%g", edge_prob);
      return buf;
    }
  }
  return "?";
}

double log_weight(int n, std::int64_t edges, std::int64_t triangles, double beta1, double beta2) {
  return 2.0 * beta1 * edges + 6.0 * beta2 * triangles / n;
}

double log_weight(const Graph& g, double beta1, double beta2) {
  return log_weight(g.size(), g.edge_count(), g.triangle_count(), beta1, beta2);
}

MetropolisSampler::MetropolisSampler(Graph g, double beta1, double beta2)
    : g_(std::move(g)),
      edges_(g_.edge_count()),
      triangles_(g_.triangle_count()),
      beta1_(beta1),
      tri_coef_(6.0 * beta2 / g_.size()) {}

bool MetropolisSampler::step(SplitMix64& rng) {
  const int n = g_.size();
  const int i = static_cast<int>(rng.below(static_cast<std::uint32_t>(n)));
  int j = static_cast<int>(rng.below(static_cast<std::uint32_t>(n - 1)));
  if (j >= i) ++j;

  const int c = g_.common_neighbors(i, j);
  const bool present = g_.has_edge(i, j);
  const int de = present ? -1 : +1;
  const std::int64_t dt = static_cast<std::int64_t>(de) * c;
  const double delta = 2.0 * beta1_ * de + tri_coef_ * static_cast<double>(dt);

  const bool accept = delta >= 0 || rng.uniform01() < std::exp(delta);
  if (accept) {
    g_.set_edge(i, j, !present);
    edges_ += de;
    triangles_ += dt;
  }
  return accept;
}

double MetropolisSampler::edge_density() const {
  const double n = g_.size();
  return 2.0 * static_cast<double>(edges_) / (n * n);
}

double MetropolisSampler::triangle_density() const {
  const double n = g_.size();
  return 6.0 * static_cast<double>(triangles_) / (n * n * n);
}

namespace {

Graph build_initial(int n, const InitSpec& init, SplitMix64& rng) {
  switch (init.kind) {
    case InitSpec::Kind::Empty:
      return Graph(n);
    case InitSpec::Kind::Complete:
      return turan_graph(n, n);
    case InitSpec::Kind::Turan:
      return turan_graph(n, init.turan_classes);
    case InitSpec::Kind::Random: {
      if (!(init.edge_prob >= 0.0 && init.edge_prob <= 1.0))
        throw std::invalid_argument("run: random init needs p in [0,1]");
      Graph g(n);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (rng.uniform01() < init.edge_prob) g.set_edge(i, j, true);
      return g;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Trajectory run(const SamplerConfig& config) {
  if (config.n < 2) throw std::invalid_argument("run: need at least 2 nodes");
  if (config.steps < 1) throw std::invalid_argument("run: steps must be at least 1");
  if (config.thin < 1) throw std::invalid_argument("run: thin must be at least 1");

  SplitMix64 rng(config.seed);
  MetropolisSampler sampler(build_initial(config.n, config.init, rng), config.beta1,
                            config.beta2);

  Trajectory traj{.records = {},
                  .acceptance_rate = 0,
                  .final_graph = Graph(config.n),
                  .final_edges = 0,
                  .final_triangles = 0};
  traj.records.reserve(config.steps / config.thin + 1);
  traj.records.push_back({0, sampler.edge_density(), sampler.triangle_density(), 0.0});

  std::uint64_t accepted = 0;
  for (std::uint64_t s = 1; s <= config.steps; ++s) {
    accepted += sampler.step(rng) ? 1 : 0;
    if (s % config.thin == 0) {
      traj.records.push_back({s, sampler.edge_density(), sampler.triangle_density(),
                              static_cast<double>(accepted) / static_cast<double>(s)});
    }
  }
  traj.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(config.steps);
  traj.final_graph = sampler.graph();
  traj.final_edges = sampler.edges();
  traj.final_triangles = sampler.triangles();
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  char buf[32];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  os << "step,e,t,accepted_frac\n";
  for (const auto& r : t.records) {
    os << r.step << ',';
    put(r.e);
    os << ',';
    put(r.t);
    os << ',';
    put(r.accepted_frac);
    os << '\n';
  }
}

ModeCheck turan_mode_check(int n, double beta1, double beta2) {
  if (n < 2) throw std::invalid_argument("turan_mode_check: need at least 2 nodes");
  ModeCheck mode;
  mode.table.reserve(n);
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 1; r <= n; ++r) {
    const auto [e, t] = turan_counts(n, r);
    ModeCheckRow row;
    row.r = r;
    row.log_weight = log_weight(n, e, t, beta1, beta2);
    row.log_count = log_nu_turan(n, r);
    row.score = row.log_weight + row.log_count;
    if (row.score > best) {
      best = row.score;
      mode.r_star = r;
    }
    mode.table.push_back(row);
  }
  for (const auto& row : mode.table)
    if (best - row.score <= 1e-9) mode.tied.push_back(row.r);
  mode.tie = mode.tied.size() > 1;
  return mode;
}

PresetSpec preset_spec(FigurePreset preset) {
  switch (preset) {
    case FigurePreset::Fig4:
      return {"fig4", 30, 0, 0, 80, 1, -0.5, 4};
    case FigurePreset::Fig2:
      return {"fig2", 30, 20, -80, 40, 1, -0.75, 2};
    case FigurePreset::Fig3_1:
      return {"fig3_1", 30, 0, 0, 40, 1, -0.75, 3};
    case FigurePreset::Fig3_2:
      return {"fig3_2", 30, 10, -6, 40, 1, -0.75, 3};
  }
  throw std::logic_error("unreachable");
}

const PresetSpec* find_preset(const std::string& name) {
  static const PresetSpec specs[] = {
      preset_spec(FigurePreset::Fig4), preset_spec(FigurePreset::Fig2),
      preset_spec(FigurePreset::Fig3_1), preset_spec(FigurePreset::Fig3_2)};
  for (const auto& s : specs)
    if (name == s.name) return &s;
  return nullptr;
}

HarnessReport figure_harness(FigurePreset preset, std::uint64_t steps, std::uint64_t seed,
                             std::uint64_t thin) {
  const PresetSpec spec = preset_spec(preset);
  HarnessReport report;
  report.preset = spec.name;
  report.n = spec.n;
  report.beta1 = spec.beta1();
  report.beta2 = spec.beta2();
  report.mode = turan_mode_check(spec.n, report.beta1, report.beta2);

  std::vector<std::pair<double, double>> turan_pts;
  for (int r = 1; r <= 6; ++r) {
    const DensityPoint p = turan_densities(spec.n, r);
    turan_pts.emplace_back(p.ef(), p.tf());
  }
  const auto& predicted = turan_pts[spec.predicted_classes - 1];

  std::vector<InitSpec> inits{InitSpec::empty(), InitSpec::complete()};
  for (int r = 2; r <= 6; ++r) inits.push_back(InitSpec::turan(r));

  // Chains are independent: run them concurrently with per-chain seeds and
  // merge in init order, so the report does not depend on scheduling.
  report.chains.resize(inits.size());
  std::vector<std::thread> pool;
  for (std::size_t c = 0; c < inits.size(); ++c) {
    pool.emplace_back([&, c] {
      SamplerConfig config{spec.n, report.beta1, report.beta2,
                           steps,  seed + c,     inits[c],     thin};
      const Trajectory traj = run(config);

      ChainReport chain;
      chain.init = inits[c].name();
      chain.final_e = traj.records.back().e;
      chain.final_t = traj.records.back().t;
      chain.acceptance = traj.acceptance_rate;
      for (const auto& [pe, pt] : turan_pts)
        chain.dist_to_turan.push_back(std::hypot(chain.final_e - pe, chain.final_t - pt));
      chain.max_dist_from_predicted = 0;
      for (const auto& rec : traj.records)
        chain.max_dist_from_predicted =
            std::max(chain.max_dist_from_predicted,
                     std::hypot(rec.e - predicted.first, rec.t - predicted.second));
      const Partition part = partition_recovery(traj.final_graph);
      chain.partition_classes = static_cast<int>(part.classes.size());
      chain.partition_misfit = part.misfit;
      report.chains[c] = std::move(chain);
    });
  }
  for (auto& th : pool) th.join();
  return report;
}

namespace {

nlohmann::ordered_json mode_to_json(const ModeCheck& mode) {
  nlohmann::ordered_json m;
  m["r_star"] = mode.r_star;
  m["tie"] = mode.tie;
  m["tied"] = mode.tied;
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (const auto& row : mode.table) {
    table.push_back({{"r", row.r},
                     {"log_weight", row.log_weight},
                     {"log_count", row.log_count},
                     {"score", row.score}});
  }
  m["table"] = std::move(table);
  return m;
}

}  // namespace

std::string mode_check_json(int n, double beta1, double beta2, const ModeCheck& mode) {
  nlohmann::ordered_json out;
  out["n"] = n;
  out["beta"] = {beta1, beta2};
  out["rng"] = "splitmix64";
  out["mode_check"] = mode_to_json(mode);
  return out.dump(2);
}

std::string harness_json(const HarnessReport& report) {
  nlohmann::ordered_json out;
  out["preset"] = report.preset;
  out["n"] = report.n;
  out["beta"] = {report.beta1, report.beta2};
  out["rng"] = "splitmix64";
  out["mode_check"] = mode_to_json(report.mode);
  nlohmann::ordered_json chains = nlohmann::ordered_json::array();
  for (const auto& c : report.chains) {
    nlohmann::ordered_json item;
    item["init"] = c.init;
    item["final_point"] = {c.final_e, c.final_t};
    item["acceptance"] = c.acceptance;
    nlohmann::ordered_json dists = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < c.dist_to_turan.size(); ++r)
      dists.push_back({{"classes", r + 1}, {"distance", c.dist_to_turan[r]}});
    item["distance_to_turan"] = std::move(dists);
    item["max_dist_from_predicted"] = c.max_dist_from_predicted;
    item["partition"] = {{"classes", c.partition_classes}, {"misfit", c.partition_misfit}};
    chains.push_back(std::move(item));
  }
  out["chains"] = std::move(chains);
  return out.dump(2);
}

}  // namespace etm
