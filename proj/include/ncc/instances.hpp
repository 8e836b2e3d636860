#pragma once

// Request sources (adaptive generators and recorded streams), the offline
// optimum and the .nci instance format.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncc/convexgeom.hpp"
#include "ncc/request.hpp"

namespace ncc {

enum class Family { hypercube_faces, random_cuts, pancake, shrinking_ball };

std::string_view to_string(Family f);
std::optional<Family> parse_family(std::string_view s);
inline constexpr Family kAllFamilies[] = {Family::hypercube_faces, Family::random_cuts, Family::pancake,
                                          Family::shrinking_ball};

struct GeneratorParams {
  double density = 0.5;  // random-cuts
  double delta = 1e-4;   // pancake thickness
  double rho = 0.7;      // shrinking-ball radius ratio
  double drift = 0.1;    // shrinking-ball walk step (relative to radius)
};

/// A replayable instance: either a fixed list of batches or a generator
/// recipe. The first batch of every stream is the initial body.
struct Instance {
  enum class Mode { oblivious, scripted };

  std::size_t dim = 0;
  NormKind norm = NormKind::L2;
  Vec x0;
  int step_budget = 0;
  Mode mode = Mode::scripted;
  std::vector<Request> requests;
  Family family = Family::random_cuts;
  GeneratorParams params;
  std::uint64_t seed = 0;
};

int default_steps(Family f, std::size_t d);

/// Scripted instance with the family's starting point and default budget
/// (steps < 0 keeps the default).
Instance make_instance(Family f, std::size_t d, NormKind norm, std::uint64_t seed, int steps = -1,
                       const GeneratorParams& params = {});

/// Fresh source for an instance (scripted sources restart from their seed).
std::unique_ptr<RequestSource> make_source(const Instance& inst);

std::unique_ptr<RequestSource> gen_hypercube_faces(std::size_t d, RngStream rng);
std::unique_ptr<RequestSource> gen_random_cuts(std::size_t d, double density, RngStream rng);
/// The thin direction is drawn from rng first, so pancake_axis() can recover it.
std::unique_ptr<RequestSource> gen_pancake(std::size_t d, double delta, RngStream rng);
std::unique_ptr<RequestSource> gen_shrinking_ball(std::size_t d, double rho, double drift, const NormSpec& norm,
                                                  RngStream rng);
std::unique_ptr<RequestSource> replay_source(std::size_t d, std::vector<Request> requests);

Vec pancake_axis(std::size_t d, RngStream rng);

/// dist(x0, K_T) in the report norm.
double compute_opt(std::span<const double> x0, const Polytope& final_body, const NormSpec& norm);

/// Text format, numbers with 17 significant digits. Throws parse_error with
/// the offending line number.
Instance load_instance(const std::string& path);
Instance parse_instance(std::string_view text);
void save_instance(const Instance& inst, const std::string& path);
std::string format_instance(const Instance& inst);

}  // namespace ncc
