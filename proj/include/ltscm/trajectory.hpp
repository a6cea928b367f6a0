#pragma once

// The optimizer's view of a solution path: for each step, the contexts that
// were active at the node, the valid actions there, and the action taken.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ltscm/types.hpp"

namespace ltscm {

struct TrajectoryStep {
  std::span<const ContextKey> active;
  ActionSet valid;
  Action chosen;
};

class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::uint64_t problem_id) : problem_id_(problem_id) {}

  std::uint64_t problem_id() const { return problem_id_; }
  void set_problem_id(std::uint64_t id) { problem_id_ = id; }

  // Throws ContractViolation if chosen is not in valid.
  void add_step(std::span<const ContextKey> active, ActionSet valid, Action chosen);

  std::size_t depth() const { return chosen_.size(); }
  bool empty() const { return chosen_.empty(); }
  TrajectoryStep step(std::size_t j) const;
  std::span<const Action> actions() const { return chosen_; }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::uint64_t problem_id_ = 0;
  std::vector<ContextKey> contexts_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<ActionSet> valid_;
  std::vector<Action> chosen_;
};

// Versioned text format:
//
//   ltscm-trajectories v1 <count>
//   traj <problem_id> <depth>
//   <valid_bitmask> <chosen> <mutex_set_id>:<pattern_code> ...     (depth lines)
void write_trajectories(std::ostream& out, std::span<const Trajectory> trajs);
std::vector<Trajectory> read_trajectories(std::istream& in);
void save_trajectories(const std::filesystem::path& path, std::span<const Trajectory> trajs);
std::vector<Trajectory> load_trajectories(const std::filesystem::path& path);

}  // namespace ltscm
