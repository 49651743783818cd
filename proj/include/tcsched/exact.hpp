#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tcsched/outcome.hpp"
#include "tcsched/schedule.hpp"
#include "tcsched/taskset.hpp"

namespace tcs::exact {

enum class Objective {
	None,
	MinimizeSlotChanges,   // tasks changing their relative slot between own periods
	MaximizeStability,     // unmoved allocations w.r.t. a combined schedule
};

struct SolveOptions {
	Objective objective = Objective::None;
	double time_budget_s = 60;
	std::uint64_t node_limit = 0;    // 0: unlimited
	std::uint64_t seed = 0;          // 0 keeps the canonical branching order
};

// Number of compared period pairs, sum over tasks of (H/P - 1).
long long slot_change_pairs(const TaskSet& ts);
// sum_T sum_{t <= H-P} |a(T,t) - a(T,t+P)|, channels collapsed.
long long slot_changes(const Schedule& s, const TaskSet& ts);
// slot_changes / slot_change_pairs (0 when there are no pairs).
double slot_change_objective(const Schedule& s, const TaskSet& ts);

SolveOutcome solve(const TaskSet& ts, const SolveOptions& options = {});

class MergeError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Schedules the merged taskset must switch from, expressed in merged ids.
struct SourceSchedule {
	Schedule schedule;
	std::vector<TaskId> tasks;
};

struct MergeResult {
	TaskSet taskset;                    // disjoint-id union, H' = lcm
	Schedule combined;                  // both inputs tiled to H' and overlaid
	std::vector<SourceSchedule> sources;
	std::vector<std::pair<TaskId, TaskId>> second_id_map;   // second-set id -> merged id
};

// Throws MergeError when the channel counts differ.
MergeResult merge_tasksets(const TaskSet& first, const TaskSet& second);
MergeResult merge_schedules(const Schedule& first_schedule, const Schedule& second_schedule,
                            const TaskSet& first, const TaskSet& second);

// Reschedules the merged taskset so every allocation stays within the task's
// jitter of its slot in the combined schedule and every switch from a source
// schedule respects the jitter bound, maximising unmoved allocations.
SolveOutcome solve_adaptation(const MergeResult& merge, const SolveOptions& options = {});

}
