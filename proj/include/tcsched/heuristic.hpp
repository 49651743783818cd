#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcsched/exact.hpp"
#include "tcsched/outcome.hpp"
#include "tcsched/schedule.hpp"
#include "tcsched/taskset.hpp"

namespace tcs::heur {

enum class Shifting { TimeFirst, ChannelFirst };
enum class Ordering { AgeFirst, JitterFirst };

struct SchedulerMode {
	Shifting shifting = Shifting::ChannelFirst;
	Ordering ordering = Ordering::AgeFirst;

	// "00", "01", "10", "11": shifting digit first, ordering digit second.
	static SchedulerMode parse(const std::string& code);
	std::string code() const;

	friend bool operator==(const SchedulerMode&, const SchedulerMode&) = default;
};

inline constexpr SchedulerMode all_modes[] = {
	{Shifting::TimeFirst, Ordering::AgeFirst},
	{Shifting::TimeFirst, Ordering::JitterFirst},
	{Shifting::ChannelFirst, Ordering::AgeFirst},
	{Shifting::ChannelFirst, Ordering::JitterFirst},
};

class DegenerateDenominator : public std::domain_error {
public:
	using std::domain_error::domain_error;
};

// State of the job being scheduled.
struct JobContext {
	std::size_t job = 0;
	int members = 0;            // |omega|
	std::vector<int> delta;     // hop distance to the leaf per task index, -1 outside the job
	int subperiod = 1;          // k, 1..H/P
	int period = 1;             // P of the job
};

// k * P.
int leaf_target(int period, int k);

// Slot for a parent from its child's slot. `child_prev` is the child's slot in
// the previous subperiod (absent for k = 1). Throws DegenerateDenominator when
// members == delta_parent. The result is clamped to >= 1.
int backward_slot(int child_slot, std::optional<int> child_prev, int members, int delta_parent, int max_age);

// Slot for a child from its parent's slot. `parent_next` is the common task's
// next execution when there is one. Throws DegenerateDenominator for delta 0.
int forward_slot(int parent_slot, std::optional<int> parent_next, int k, int period, int delta_parent, int max_age);

struct SearchBox {
	int lower = 0;
	int upper = -1;
	bool empty() const { return lower > upper; }
};

struct SearchBoxInput {
	int k = 1;
	int period = 1;          // P of the active job's leaf
	int leaf_jitter = 0;
	int members = 0;
	int delta_common = 0;
	int common_jitter = 0;
	int age_sum = 0;         // max ages along the path from the common task to the leaf
	std::optional<int> child_prev;    // t_{c,k-1}
	std::optional<int> common_prev;   // t_{com,k-1}
};

SearchBox search_box(const SearchBoxInput& in);

// Latest execution inside the box.
std::optional<int> find_common_execution(std::span<const int> executions, const SearchBox& box);

// AgeFirst: ascending age; JitterFirst: ascending jitter; ties by ascending id.
// `ages` parallels `tasks` (age of the edge to the frontier anchor).
std::vector<std::size_t> order_siblings(const TaskSet& ts, std::span<const std::size_t> tasks,
                                        std::span<const int> ages, SchedulerMode mode);

// Walks the jitter window around `target` in the order of the shifting mode
// and returns the first admissible slot. Offsets go 0, +1, -1, +2, -2, ...
std::optional<Slot> resolve_slot(int target, int jitter, int channels, Shifting shifting,
                                 const std::function<bool(int time)>& time_ok,
                                 const std::function<bool(Slot)>& cell_ok);

struct HeuristicStats {
	std::size_t reused = 0;          // common executions found through the search box
	std::size_t gate_rejections = 0; // constructed schedules refused by the final validation
};

SolveOutcome schedule(const TaskSet& ts, SchedulerMode mode, HeuristicStats* stats = nullptr);

// Merges both tasksets and reschedules with the same algorithm, keeping every
// task within its jitter of the combined schedule and of the switch from
// either source schedule.
SolveOutcome adapt(const exact::MergeResult& merge, SchedulerMode mode, HeuristicStats* stats = nullptr);
SolveOutcome adapt(const Schedule& first_schedule, const Schedule& second_schedule, const TaskSet& first,
                   const TaskSet& second, SchedulerMode mode, HeuristicStats* stats = nullptr);

}
