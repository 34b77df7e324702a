#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "etm/graph.hpp"

namespace etm {

// splitmix64: the pinned RNG stream; identical output on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint32_t below(std::uint32_t bound);  // unbiased via rejection

 private:
  std::uint64_t state_;
};

struct InitSpec {
  enum class Kind { Empty, Complete, Turan, Random };
  Kind kind = Kind::Empty;
  int turan_classes = 2;   // for Kind::Turan
  double edge_prob = 0.5;  // for Kind::Random

  static InitSpec empty() { return {}; }
  static InitSpec complete() { return {Kind::Complete}; }
  static InitSpec turan(int r) { return {Kind::Turan, r}; }
  static InitSpec random(double p) { return {Kind::Random, 2, p}; }
  // "empty" | "complete" | "turan:R" | "random:P"
  static InitSpec parse(const std::string& text);
  std::string name() const;
};

struct SamplerConfig {
  int n = 0;
  double beta1 = 0, beta2 = 0;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  InitSpec init;
  std::uint64_t thin = 1;
};

// Unnormalized log-probability: n^2 <beta, t(g)> = 2 b1 E + (6 b2 / n) T.
double log_weight(int n, std::int64_t edges, std::int64_t triangles, double beta1, double beta2);
double log_weight(const Graph& g, double beta1, double beta2);

// Single-edge Metropolis chain; keeps exact running edge/triangle counts.
class MetropolisSampler {
 public:
  MetropolisSampler(Graph g, double beta1, double beta2);

  bool step(SplitMix64& rng);  // one proposal; true if accepted

  const Graph& graph() const { return g_; }
  std::int64_t edges() const { return edges_; }
  std::int64_t triangles() const { return triangles_; }
  double edge_density() const;
  double triangle_density() const;

 private:
  Graph g_;
  std::int64_t edges_, triangles_;
  double beta1_, tri_coef_;
};

struct TrajectoryRecord {
  std::uint64_t step;
  double e, t;
  double accepted_frac;  // cumulative acceptance fraction up to this step
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;  // floor(steps/thin) + 1 rows
  double acceptance_rate;
  Graph final_graph;
  std::int64_t final_edges, final_triangles;
};

Trajectory run(const SamplerConfig& config);
void write_trajectory_csv(std::ostream& os, const Trajectory& t);

// Deterministic surrogate for the mode of the family over Turan graphs:
// score(r) = log_weight(T(n,r), beta) + log nu_turan(n,r).
struct ModeCheckRow {
  int r;
  double log_weight;
  double log_count;
  double score;
};
struct ModeCheck {
  int r_star;
  bool tie;                // another class count scores within 1e-9
  std::vector<int> tied;   // all class counts within 1e-9 of the best
  std::vector<ModeCheckRow> table;
};
ModeCheck turan_mode_check(int n, double beta1, double beta2);

enum class FigurePreset { Fig4, Fig2, Fig3_1, Fig3_2 };

struct PresetSpec {
  const char* name;
  int n;
  double base1, base2;  // initial beta
  double r;             // ray magnitude
  double ox, oy;        // ray direction
  int predicted_classes;
  double beta1() const { return base1 + r * ox; }
  double beta2() const { return base2 + r * oy; }
};
PresetSpec preset_spec(FigurePreset preset);
const PresetSpec* find_preset(const std::string& name);

struct ChainReport {
  std::string init;
  double final_e, final_t;
  double acceptance;
  std::vector<double> dist_to_turan;  // distance to t(T(n, r)) for r = 1..6
  double max_dist_from_predicted;     // over recorded points, to the predicted class
  int partition_classes;
  double partition_misfit;
};

struct HarnessReport {
  std::string preset;
  int n;
  double beta1, beta2;
  ModeCheck mode;
  std::vector<ChainReport> chains;  // inits: empty, complete, turan 2..6
};

HarnessReport figure_harness(FigurePreset preset, std::uint64_t steps = 1000000,
                             std::uint64_t seed = 1, std::uint64_t thin = 1000);
std::string harness_json(const HarnessReport& report);
std::string mode_check_json(int n, double beta1, double beta2, const ModeCheck& mode);

}  // namespace etm
